//! Virtual classes of `SL₂(ℂ)`-representation varieties of surfaces,
//! genus 0 to 11, and the pipeline that recovers their order-6 recurrence.
//!
//! Values are polynomials in `q = [𝔸¹]`. The shipped dataset lives in
//! `data/sl2_table.json` in the sequence document format.

use thiserror::Error;

use crate::document::{AnySequence, DocumentError, SequenceDocument};
use crate::exactmath::{Polynomial, RationalFunction};
use crate::linalg::Matrix;
use crate::quantize::{quantization_report, InvariantSequence, QuantizationReport, QuantizeError};

pub const DATASET_JSON: &str = include_str!("../data/sl2_table.json");

/// Recurrence order of the `SL₂(ℂ)` invariant.
pub const ORDER: usize = 6;

/// `P₀ … P₅` with `χ_g = P₀χ_{g−1} + P₁χ_{g−2} + … + P₅χ_{g−6}`.
pub const REFERENCE_P: [&str; 6] = [
    "q^6 + 9*q^4 + 9*q^2 + 1",
    "-11*q^10 - 29*q^8 + 16*q^6 - 29*q^4 - 11*q^2",
    "43*q^14 - 25*q^12 - 18*q^10 - 18*q^8 - 25*q^6 + 43*q^4",
    "-73*q^18 + 198*q^16 - 135*q^14 + 20*q^12 - 135*q^10 + 198*q^8 - 73*q^6",
    "56*q^22 - 280*q^20 + 504*q^18 - 280*q^16 - 280*q^14 + 504*q^12 - 280*q^10 + 56*q^8",
    "-16*q^26 + 128*q^24 - 448*q^22 + 896*q^20 - 1120*q^18 + 896*q^16 - 448*q^14 + 128*q^12 - 16*q^10",
];

/// `[SL₂(ℂ)] = q³ − q`.
pub const GROUP_CLASS: &str = "q^3 - q";

#[derive(Debug, Error)]
pub enum Sl2Error {
    #[error("--max-genus must be at least 12, got {0}")]
    MaxGenusTooSmall(usize),
    #[error("closed formula needs genus >= 1, got {0}")]
    GenusZero(usize),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("recovered recurrence has order {found}, expected {ORDER}")]
    OrderMismatch { found: usize },
    #[error("P{index} mismatch: recovered `{found}`, expected `{expected}`")]
    CoefficientMismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("genus {genus}: recurrence gives `{recurrence}`, closed formula gives `{formula}`")]
    PredictionMismatch {
        genus: usize,
        recurrence: String,
        formula: String,
    },
    #[error("closed formula at genus {0} is not a polynomial")]
    NonPolynomialResult(usize),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
}

impl From<DocumentError> for Sl2Error {
    fn from(e: DocumentError) -> Self {
        Sl2Error::Dataset(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Sl2Dataset {
    pub sequence: InvariantSequence<RationalFunction>,
    pub notes: Vec<String>,
    pub provenance: Vec<String>,
}

pub fn dataset() -> Result<Sl2Dataset, Sl2Error> {
    let doc = SequenceDocument::from_json(DATASET_JSON)?;
    let AnySequence::Qq(sequence) = doc.parse(None)? else {
        return Err(Sl2Error::Dataset("expected field Q(q)".into()));
    };
    Ok(Sl2Dataset {
        sequence,
        notes: doc.notes,
        provenance: doc.provenance,
    })
}

pub fn reference_polynomials() -> Vec<Polynomial> {
    REFERENCE_P.iter().map(|s| s.parse().expect("reference polynomial")).collect()
}

/// The closed genus formula
///
/// `(q²−1)^{2g−1} q^{2g−1}`
/// `+ ½ (q−1)^{2g−1} q^{2g−1} (q+1) (2^{2g} + q − 3)`
/// `+ ½ (q+1)^{2g−1} q^{2g−1} (q−1) (2^{2g} + q − 1)`
/// `+ q (q²−1)^{2g−1}`.
pub fn closed_formula_eval(g: usize) -> Result<RationalFunction, Sl2Error> {
    if g == 0 {
        return Err(Sl2Error::GenusZero(g));
    }
    let e = (2 * g - 1) as u32;
    let q = Polynomial::q();
    let one = Polynomial::one();
    let qm1 = &q - &one;
    let qp1 = &q + &one;
    let q2m1 = &(&q * &q) - &one;
    let qe = q.pow(e);
    // 2^{2g} as an exact integer before it meets q.
    let four_g = Polynomial::constant(num_bigint::BigInt::from(4u32).pow(g as u32).into());
    let half: Polynomial = Polynomial::constant("1/2".parse().expect("1/2"));
    let c3 = Polynomial::from_i64s(&[3]);

    let t1 = &q2m1.pow(e) * &qe;
    let t2 = &(&(&half * &qm1.pow(e)) * &(&qe * &qp1)) * &(&(&four_g + &q) - &c3);
    let t3 = &(&(&half * &qp1.pow(e)) * &(&qe * &qm1)) * &(&(&four_g + &q) - &one);
    let t4 = &q * &q2m1.pow(e);
    let total = &(&(&t1 + &t2) + &t3) + &t4;
    let value = RationalFunction::from_polynomial(total);
    if value.as_polynomial().is_none() {
        return Err(Sl2Error::NonPolynomialResult(g));
    }
    Ok(value)
}

#[derive(Debug, Clone)]
pub struct Sl2Result {
    pub report: QuantizationReport<RationalFunction>,
    /// Recovered `P₀ … P₅`.
    pub p: Vec<Polynomial>,
    /// `(genus, value)` for genus `0..=max_genus`.
    pub predictions: Vec<(usize, RationalFunction)>,
    /// Genera at which the closed formula was compared.
    pub closed_formula_checked: std::ops::RangeInclusive<usize>,
    /// The companion handle matrix times `q³ − q`.
    pub rescaled_handle: Matrix<RationalFunction>,
}

/// Recovers the recurrence from the dataset, checks it against the
/// reference polynomials, predicts up to `max_genus` and compares every
/// genus from 1 on with the closed formula.
pub fn sl2_pipeline(max_genus: usize) -> Result<Sl2Result, Sl2Error> {
    if max_genus < 12 {
        return Err(Sl2Error::MaxGenusTooSmall(max_genus));
    }
    let data = dataset()?;
    let report = quantization_report(&data.sequence, Some(max_genus))?;
    let rec = report.recurrence.as_ref().ok_or_else(|| {
        Sl2Error::Quantize(QuantizeError::InsufficientData {
            length: data.sequence.len(),
        })
    })?;
    if rec.order != ORDER {
        return Err(Sl2Error::OrderMismatch { found: rec.order });
    }
    // a_i multiplies χ_{g-6+i}, so P_i = a_{5-i}.
    let mut p = Vec::with_capacity(ORDER);
    for (index, expected) in REFERENCE_P.iter().enumerate() {
        let a = &rec.coefficients[ORDER - 1 - index];
        let found = a.to_string();
        if found != *expected {
            return Err(Sl2Error::CoefficientMismatch {
                index,
                expected: expected.to_string(),
                found,
            });
        }
        p.push(a.as_polynomial().cloned().expect("polynomial coefficient"));
    }

    let predictions: Vec<(usize, RationalFunction)> =
        report.predictions.iter().map(|pr| (pr.genus, pr.value.clone())).collect();
    for (genus, value) in predictions.iter().skip(1) {
        let formula = closed_formula_eval(*genus)?;
        if &formula != value {
            return Err(Sl2Error::PredictionMismatch {
                genus: *genus,
                recurrence: value.to_string(),
                formula: formula.to_string(),
            });
        }
    }
    let alg = report.algebra.as_ref().expect("algebra accompanies recurrence");
    let scale: RationalFunction = GROUP_CLASS.parse().expect("group class");
    let rescaled_handle = alg.handle_matrix().scale(&scale);
    Ok(Sl2Result {
        report,
        p,
        predictions,
        closed_formula_checked: 1..=max_genus,
        rescaled_handle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;

    #[test]
    fn dataset_shape() {
        let d = dataset().unwrap();
        assert_eq!(d.sequence.len(), 12);
        assert_eq!(d.sequence.values[0], RationalFunction::one());
        assert_eq!(d.sequence.values[1].to_string(), "q^4 + 4*q^3 - q^2 - 4*q");
        for (g, v) in d.sequence.values.iter().enumerate().skip(2) {
            let p = v.as_polynomial().unwrap();
            assert_eq!(p.degree(), Some(6 * g - 3));
            assert!(p.leading_coeff().is_one());
        }
        assert_eq!(d.provenance.len(), 12);
    }

    #[test]
    fn closed_formula_small_genus() {
        assert_eq!(closed_formula_eval(1).unwrap().to_string(), "q^4 + 4*q^3 - q^2 - 4*q");
        assert_eq!(
            closed_formula_eval(3).unwrap().to_string(),
            "q^15 - 5*q^13 + q^12 + 73*q^11 + 9*q^10 + 295*q^9 - 5*q^8 - 295*q^7 - 5*q^6 - 73*q^5 + 5*q^3 - q"
        );
        assert!(matches!(closed_formula_eval(0), Err(Sl2Error::GenusZero(0))));
    }

    #[test]
    fn closed_formula_matches_dataset() {
        let d = dataset().unwrap();
        for g in 1..12 {
            let f = closed_formula_eval(g).unwrap();
            assert_eq!(f, d.sequence.values[g], "genus {g}");
            assert!(f.as_polynomial().unwrap().has_integer_coeffs());
        }
    }

    #[test]
    fn closed_formula_oracle_at_two() {
        // Independent numeric evaluation at q = 2 for genus 12.
        let v = closed_formula_eval(12).unwrap().eval(&"2".parse().unwrap()).unwrap();
        assert_eq!(v.to_string(), "6624738451755866097832086");
    }

    #[test]
    fn reference_recurrence_holds_on_dataset() {
        let d = dataset().unwrap();
        let p: Vec<RationalFunction> = reference_polynomials().into_iter().map(RationalFunction::from_polynomial).collect();
        for g in 6..12 {
            let rhs = (0..6).fold(RationalFunction::zero(), |acc, i| {
                acc.add(&p[i].mul(&d.sequence.values[g - 1 - i]))
            });
            assert_eq!(rhs, d.sequence.values[g], "genus {g}");
        }
    }

    #[test]
    fn rejects_small_max_genus() {
        assert!(matches!(sl2_pipeline(11), Err(Sl2Error::MaxGenusTooSmall(11))));
    }
}
