//! From finitely many surface invariants to the minimal wide
//! almost-Frobenius algebra that reproduces them.
//!
//! With `v_{g,n} = (χ_g, …, χ_{g+n-1})`, the smallest `n` for which
//! `v_{n,n}` is a combination `Σ aᵢ v_{i,n}` consistent with *every*
//! supplied value gives the recurrence `χ_{n+k} = Σ aᵢ χ_{i+k}`. The algebra
//! is then `k[t] / (tⁿ − Σ aᵢ tⁱ)` with `eta(v_g) = χ_g` for `g < n`, which
//! evaluates every genus.
//!
//! A recurrence of order `n` is only certified when at least `2n` values
//! were provided; fewer values cannot pin down `n` unknowns and check them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{Field, FieldKind, Polynomial, Rational};
use crate::frobenius::{integer_subring_necessary_check, FrobeniusError, MonoidalityVerdict, Verdict, WideFrobeniusAlgebra};
use crate::linalg::{fraction_free_solve, is_nonsingular, solve_linear, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantizeError {
    #[error("empty invariant sequence")]
    EmptySequence,
    #[error("insufficient data: no recurrence of order n with 2n <= {length} fits all {length} values")]
    InsufficientData { length: usize },
    #[error("genus {genus} precedes the first supplied genus {offset}")]
    GenusBeforeOffset { genus: usize, offset: usize },
    #[error("recurrence violated at genus {genus}")]
    Inconsistent { genus: usize },
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

/// `χ(Σ_g)` for `g = genus_offset, genus_offset + 1, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct InvariantSequence<F> {
    pub values: Vec<F>,
    #[serde(default)]
    pub genus_offset: usize,
}

impl<F: Field> InvariantSequence<F> {
    pub fn new(values: Vec<F>) -> Self {
        InvariantSequence {
            values,
            genus_offset: 0,
        }
    }

    pub fn with_offset(values: Vec<F>, genus_offset: usize) -> Self {
        InvariantSequence { values, genus_offset }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The supplied value at genus `g`, if any.
    pub fn get(&self, g: usize) -> Option<&F> {
        g.checked_sub(self.genus_offset).and_then(|i| self.values.get(i))
    }

    /// Drops the first supplied value.
    pub fn shifted(&self) -> Self {
        InvariantSequence {
            values: self.values.iter().skip(1).cloned().collect(),
            genus_offset: self.genus_offset + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct RecurrenceResult<F> {
    pub order: usize,
    /// `a_0 … a_{n-1}` with `χ_{n+k} = Σ aᵢ χ_{i+k}`.
    pub coefficients: Vec<F>,
    /// Every supplied value was checked against the recurrence.
    pub values_consumed: usize,
    /// At least `2n` values were available.
    pub certified: bool,
    /// The `n × n` Hankel matrix `(χ_{i+j})` is invertible.
    pub hankel_invertible: bool,
    /// Whether the `(n+1) × (n+1)` Hankel matrix is singular; `None` when
    /// fewer than `2n + 1` values were supplied.
    pub next_hankel_singular: Option<bool>,
}

fn hankel<F: Field>(values: &[F], n: usize) -> Matrix<F> {
    Matrix::from_fn(n, n, |i, j| values[i + j].clone())
}

/// Integer points at which ℚ(q) data is specialized to rule out orders
/// cheaply.
const SPECIALIZATION_POINTS: [i64; 2] = [3, -2];

/// True only when order `n` is certainly inconsistent: the specialized
/// augmented system has rank `n + 1`, and specialization never raises rank.
fn certainly_inconsistent<F: Field>(vals: &[F], n: usize) -> bool {
    let rows = vals.len() - n;
    if F::KIND == FieldKind::Q || rows <= n {
        return false;
    }
    SPECIALIZATION_POINTS.iter().any(|&x| {
        let at = Rational::from(x);
        let Some(specialized) = vals.iter().map(|v| v.specialize(&at)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        Matrix::from_fn(rows, n + 1, |k, i| specialized[i + k].clone()).rank() == n + 1
    })
}

/// Index of the first `k` where `χ_{n+k} ≠ Σ aᵢ χ_{i+k}`.
fn first_violation<F: Field>(vals: &[F], coefficients: &[F]) -> Option<usize> {
    let n = coefficients.len();
    (0..vals.len().saturating_sub(n)).find(|&k| {
        let rhs = coefficients
            .iter()
            .enumerate()
            .fold(F::zero(), |acc, (i, a)| acc.add(&a.mul(&vals[i + k])));
        rhs != vals[n + k]
    })
}

/// Finds the smallest recurrence order consistent with all values.
///
/// When the `n × n` Hankel matrix is invertible its system is solved
/// fraction-free and the surplus values are checked by substitution;
/// otherwise the full overdetermined system is solved.
pub fn extract_recurrence<F: Field>(seq: &InvariantSequence<F>) -> Result<RecurrenceResult<F>, QuantizeError> {
    let vals = &seq.values;
    let len = vals.len();
    if len == 0 {
        return Err(QuantizeError::EmptySequence);
    }
    for n in 1..=len / 2 {
        if certainly_inconsistent(vals, n) {
            continue;
        }
        let rhs = vals[n..2 * n].to_vec();
        let (coefficients, hankel_invertible) = match fraction_free_solve(&hankel(vals, n), &[rhs]) {
            Some(ff) => {
                let a: Vec<F> = ff.scaled_solutions[0]
                    .iter()
                    .map(|x| x.div(&ff.scale).expect("nonzero pivot"))
                    .collect();
                if first_violation(vals, &a).is_some() {
                    continue;
                }
                (a, true)
            }
            None => {
                let rows = len - n;
                let a = Matrix::from_fn(rows, n, |k, i| vals[i + k].clone());
                let b: Vec<F> = (0..rows).map(|k| vals[n + k].clone()).collect();
                match solve_linear(&a, &b) {
                    Some(a) => (a, false),
                    None => continue,
                }
            }
        };
        let next_hankel_singular = (len > 2 * n).then(|| !is_nonsingular(&hankel(vals, n + 1)));
        return Ok(RecurrenceResult {
            order: n,
            coefficients,
            values_consumed: len,
            certified: 2 * n <= len,
            hankel_invertible,
            next_hankel_singular,
        });
    }
    Err(QuantizeError::InsufficientData { length: len })
}

/// Checks a given recurrence against the supplied values.
pub fn verify_recurrence<F: Field>(seq: &InvariantSequence<F>, coefficients: &[F]) -> Result<(), QuantizeError> {
    match first_violation(&seq.values, coefficients) {
        Some(k) => Err(QuantizeError::Inconsistent {
            genus: seq.genus_offset + coefficients.len() + k,
        }),
        None => Ok(()),
    }
}

/// The wide algebra `k[t] / (tⁿ − Σ aᵢ tⁱ)` with `eta(v_g) = χ_g`.
pub fn build_algebra<F: Field>(seq: &InvariantSequence<F>) -> Result<WideFrobeniusAlgebra<F>, QuantizeError> {
    let rec = extract_recurrence(seq)?;
    algebra_from_recurrence(&rec, seq)
}

fn algebra_from_recurrence<F: Field>(
    rec: &RecurrenceResult<F>,
    seq: &InvariantSequence<F>,
) -> Result<WideFrobeniusAlgebra<F>, QuantizeError> {
    let eta_values = seq.values[..rec.order].to_vec();
    Ok(WideFrobeniusAlgebra::new(rec.coefficients.clone(), eta_values)?)
}

/// `χ(Σ_g)`: the supplied value when available, else the recurrence.
pub fn predict<F: Field>(seq: &InvariantSequence<F>, g: usize) -> Result<F, QuantizeError> {
    if g < seq.genus_offset {
        return Err(QuantizeError::GenusBeforeOffset {
            genus: g,
            offset: seq.genus_offset,
        });
    }
    if let Some(v) = seq.get(g) {
        return Ok(v.clone());
    }
    let alg = build_algebra(seq)?;
    Ok(alg.evaluate_genus(g - seq.genus_offset))
}

/// Predictions for every genus in `from..=to`, sharing one extraction.
pub fn predict_range<F: Field>(seq: &InvariantSequence<F>, from: usize, to: usize) -> Result<Vec<Prediction<F>>, QuantizeError> {
    if from < seq.genus_offset {
        return Err(QuantizeError::GenusBeforeOffset {
            genus: from,
            offset: seq.genus_offset,
        });
    }
    if to < from {
        return Ok(Vec::new());
    }
    let alg = build_algebra(seq)?;
    let all = alg.eta_sequence(to - seq.genus_offset + 1);
    Ok((from..=to)
        .map(|g| Prediction {
            genus: g,
            value: all[g - seq.genus_offset].clone(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct Prediction<F> {
    pub genus: usize,
    pub value: F,
}

/// One Jordan block of the closed form: eigenvalue `λ`, size `m` and
/// coefficients `a_0 … a_{m-1}` of `C(g, j) λ^{g-j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormBlock {
    pub eigenvalue: Rational,
    pub multiplicity: usize,
    pub coefficients: Vec<Rational>,
}

/// `χ(Σ_g) = Σ_blocks Σ_j a_j C(g, j) λ^{g-j}`, valid for `g ≥ max m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub blocks: Vec<ClosedFormBlock>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(g, j) λ^{g-j}`, zero when `j > g`.
fn basis_term(lambda: &Rational, g: usize, j: usize) -> Rational {
    if j > g {
        return Rational::zero();
    }
    Rational::from(binomial(g, j)).mul(&lambda.pow((g - j) as u64))
}

impl ClosedForm {
    /// The largest block size; the formula holds from this genus on.
    pub fn valid_from(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity).max().unwrap_or(0)
    }

    /// Evaluates the formula at genus `g` (measured from the sequence's
    /// first supplied genus).
    pub fn evaluate(&self, g: usize) -> Rational {
        let mut acc = Rational::zero();
        for b in &self.blocks {
            for (j, a) in b.coefficients.iter().enumerate() {
                if !a.is_zero() {
                    acc = acc.add(&a.mul(&basis_term(&b.eigenvalue, g, j)));
                }
            }
        }
        acc
    }
}

/// Divisors of `|n|` by trial division. Gives up (`None`) when a cofactor
/// above `10^12` is left unfactored.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = n.abs();
    let mut factors: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= m && p <= limit {
        while (&m % &p).is_zero() {
            *factors.entry(p.clone()).or_insert(0) += 1;
            m /= &p;
        }
        p += 1;
    }
    if m > BigInt::one() {
        if m > BigInt::from(1_000_000_000_000u64) && &p * &p <= m {
            return None;
        }
        *factors.entry(m).or_insert(0) += 1;
    }
    let mut divs = vec![BigInt::one()];
    for (prime, exp) in factors {
        let mut next = Vec::with_capacity(divs.len() * (exp as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=exp {
                next.push(d * &pk);
                pk *= &prime;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

/// Rational roots of `p` with multiplicity, ascending; `None` if `p` does
/// not split into rational linear factors (or the root search gave up).
fn rational_roots(p: &Polynomial) -> Option<Vec<(Rational, usize)>> {
    let mut rest = p.clone();
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut zero_mult = 0;
    while rest.degree()? > 0 && rest.coeff(0).is_zero() {
        rest = Polynomial::from_coeffs(rest.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if rest.degree()? == 0 {
        return Some(sorted(roots));
    }
    let (ints, _) = crate::exactmath::poly::primitive_integer_part(&rest);
    let lead = ints.last()?.clone();
    let constant = ints[0].clone();
    let num_divs = divisors(&constant)?;
    let den_divs = divisors(&lead)?;
    let mut candidates: Vec<Rational> = Vec::new();
    for u in &num_divs {
        for v in &den_divs {
            if u.gcd(v).is_one() {
                let r = Rational::new(u.clone(), v.clone()).ok()?;
                candidates.push(r.clone());
                candidates.push(r.neg());
            }
        }
    }
    for c in candidates {
        let linear = Polynomial::from_coeffs(vec![c.neg(), Rational::one()]);
        let mut mult = 0;
        loop {
            if rest.degree()? == 0 {
                break;
            }
            let (quot, rem) = rest.div_rem(&linear);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            mult += 1;
        }
        if mult > 0 {
            roots.push((c, mult));
        }
        if rest.degree()? == 0 {
            return Some(sorted(roots));
        }
    }
    None
}

fn sorted(mut roots: Vec<(Rational, usize)>) -> Vec<(Rational, usize)> {
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}

/// The closed form over ℚ, when the characteristic polynomial
/// `tⁿ − Σ aᵢ tⁱ` splits into rational linear factors.
///
/// Coefficients come from solving the generalized Vandermonde system at
/// `g = m … m + n − 1` (`m` the largest block), then the formula is checked
/// against every supplied value with `g ≥ m`.
pub fn closed_form_rational(rec: &RecurrenceResult<Rational>, seq: &InvariantSequence<Rational>) -> Option<ClosedForm> {
    let n = rec.order;
    let mut charpoly: Vec<Rational> = rec.coefficients.iter().map(|a| a.neg()).collect();
    charpoly.push(Rational::one());
    let roots = rational_roots(&Polynomial::from_coeffs(charpoly))?;
    debug_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), n);

    let m = roots.iter().map(|r| r.1).max().unwrap_or(0);
    let columns: Vec<(usize, usize)> = roots
        .iter()
        .enumerate()
        .flat_map(|(i, (_, mult))| (0..*mult).map(move |j| (i, j)))
        .collect();
    let alg = WideFrobeniusAlgebra::new(rec.coefficients.clone(), seq.values[..n].to_vec()).ok()?;
    let values = alg.eta_sequence((m + n).max(seq.len()));
    let system = Matrix::from_fn(n, columns.len(), |row, col| {
        let (i, j) = columns[col];
        basis_term(&roots[i].0, m + row, j)
    });
    let rhs: Vec<Rational> = (0..n).map(|row| values[m + row].clone()).collect();
    let solution = solve_linear(&system, &rhs)?;

    let mut blocks: Vec<ClosedFormBlock> = roots
        .iter()
        .map(|(lambda, mult)| ClosedFormBlock {
            eigenvalue: lambda.clone(),
            multiplicity: *mult,
            coefficients: vec![Rational::zero(); *mult],
        })
        .collect();
    for ((i, j), a) in columns.into_iter().zip(solution) {
        blocks[i].coefficients[j] = a;
    }
    let form = ClosedForm { blocks };
    for g in m..seq.len() {
        if form.evaluate(g) != seq.values[g] {
            return None;
        }
    }
    Some(form)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportStatus {
    Complete,
    InsufficientData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certainty {
    Certified,
    Provisional,
}

/// Everything the pipeline learns about one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct QuantizationReport<F> {
    pub field: FieldKind,
    pub genus_offset: usize,
    pub input_length: usize,
    pub status: ReportStatus,
    pub diagnostic: Option<String>,
    pub recurrence: Option<RecurrenceResult<F>>,
    pub algebra: Option<WideFrobeniusAlgebra<F>>,
    pub monoidality: Option<MonoidalityVerdict<F>>,
    /// `χ(Σ₁)` lies in ℤ; `None` when genus 1 is not covered.
    pub chi_torus_integral: Option<bool>,
    /// Over ℚ only, when the characteristic polynomial splits.
    pub closed_form: Option<ClosedForm>,
    pub predictions: Vec<Prediction<F>>,
    /// Lax quantizable, equivalently almost quantizable: a recurrence was
    /// found.
    pub almost_quantizable: bool,
    /// A monoidal (1+1) TQFT computes the invariant.
    pub strongly_quantizable: bool,
    pub certainty: Option<Certainty>,
}

impl<F: Field> QuantizationReport<F> {
    /// The reason the verdict is negative, cheapest decisive test first:
    /// a non-integral `χ(Σ₁)` fails the Euler check outright, otherwise the
    /// first of condition 1, condition 2, Euler check that failed.
    pub fn first_failure(&self) -> Option<&'static str> {
        let v = self.monoidality.as_ref()?;
        if v.verdict == Verdict::Monoidal {
            return None;
        }
        if !v.wide {
            return Some("not wide");
        }
        if self.chi_torus_integral == Some(false) && !v.euler_check {
            return Some("euler_check failed");
        }
        if !v.gram_nondegenerate {
            Some("condition 1")
        } else if !v.condition_two {
            Some("condition 2")
        } else if !v.euler_check {
            Some("euler_check failed")
        } else {
            None
        }
    }

    /// A one-line human summary.
    pub fn summary(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        match (&self.recurrence, &self.monoidality) {
            (Some(rec), Some(v)) => {
                let monoidal = match self.first_failure() {
                    None if v.is_monoidal() => "yes".to_string(),
                    None => "no".to_string(),
                    Some(reason) => format!("no ({reason})"),
                };
                let mut s = format!("n={}", rec.order);
                if let Some(cf) = &self.closed_form {
                    if cf.blocks.len() == 1 && cf.blocks[0].multiplicity == 1 {
                        s.push_str(&format!(", λ={}", cf.blocks[0].eigenvalue));
                    }
                }
                s.push_str(&format!(
                    ", almost-quantizable: {}, monoidal: {}",
                    yes_no(self.almost_quantizable),
                    monoidal
                ));
                s
            }
            _ => self.diagnostic.clone().unwrap_or_else(|| "insufficient data".into()),
        }
    }
}

/// Runs extraction, the monoidality test, the necessary conditions and
/// (over ℚ) the closed form. Insufficient data yields a partial report with
/// a diagnostic rather than an error.
pub fn quantization_report<F: Field>(
    seq: &InvariantSequence<F>,
    predict_upto: Option<usize>,
) -> Result<QuantizationReport<F>, QuantizeError> {
    let offset = seq.genus_offset;
    let mut report = QuantizationReport {
        field: F::KIND,
        genus_offset: offset,
        input_length: seq.len(),
        status: ReportStatus::Complete,
        diagnostic: None,
        recurrence: None,
        algebra: None,
        monoidality: None,
        chi_torus_integral: None,
        closed_form: None,
        predictions: Vec::new(),
        almost_quantizable: false,
        strongly_quantizable: false,
        certainty: None,
    };
    let rec = match extract_recurrence(seq) {
        Ok(rec) => rec,
        Err(e @ QuantizeError::InsufficientData { .. }) => {
            report.status = ReportStatus::InsufficientData;
            report.diagnostic = Some(e.to_string());
            report.chi_torus_integral = seq.get(1).map(integer_subring_necessary_check);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let alg = algebra_from_recurrence(&rec, seq)?;
    let verdict = alg.check_monoidality();
    let upto = predict_upto.unwrap_or(offset + seq.len().saturating_sub(1)).max(offset);
    let predictions = {
        let all = alg.eta_sequence(upto - offset + 1);
        (offset..=upto)
            .map(|g| Prediction {
                genus: g,
                value: all[g - offset].clone(),
            })
            .collect::<Vec<_>>()
    };
    report.chi_torus_integral = if offset <= 1 {
        Some(integer_subring_necessary_check(&alg.evaluate_genus(1 - offset)))
    } else {
        None
    };
    if F::KIND == FieldKind::Q {
        let rec_q = to_rational_recurrence(&rec);
        let seq_q = InvariantSequence::with_offset(
            seq.values.iter().filter_map(F::to_rational).collect(),
            offset,
        );
        report.closed_form = rec_q.and_then(|r| closed_form_rational(&r, &seq_q));
    }
    report.certainty = Some(if rec.certified {
        Certainty::Certified
    } else {
        Certainty::Provisional
    });
    report.almost_quantizable = true;
    report.strongly_quantizable = verdict.is_monoidal();
    report.predictions = predictions;
    report.monoidality = Some(verdict);
    report.algebra = Some(alg);
    report.recurrence = Some(rec);
    Ok(report)
}

fn to_rational_recurrence<F: Field>(rec: &RecurrenceResult<F>) -> Option<RecurrenceResult<Rational>> {
    Some(RecurrenceResult {
        order: rec.order,
        coefficients: rec.coefficients.iter().map(F::to_rational).collect::<Option<Vec<_>>>()?,
        values_consumed: rec.values_consumed,
        certified: rec.certified,
        hankel_invertible: rec.hankel_invertible,
        next_hankel_singular: rec.next_hankel_singular,
    })
}

/// Exact `i64` view of a rational, for display helpers.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integral() {
        r.numer().to_i64()
    } else {
        None
    }
}
