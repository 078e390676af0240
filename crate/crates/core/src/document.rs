//! JSON documents: invariant sequences, almost-Frobenius algebras and
//! quantization reports. All scalars are strings in the expression grammar.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{Field, FieldKind, ParseError, Rational, RationalFunction};
use crate::frobenius::{AlmostFrobeniusAlgebra, FrobeniusError};
use crate::linalg::Matrix;
use crate::quantize::{InvariantSequence, QuantizationReport};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Scalar {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("sequence has no values")]
    Empty,
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDocument {
    /// Absent means: ℚ if every value is a constant, else ℚ(q).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldKind>,
    pub values: Vec<String>,
    #[serde(default)]
    pub genus_offset: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

/// A sequence over whichever field its document named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySequence {
    Q(InvariantSequence<Rational>),
    Qq(InvariantSequence<RationalFunction>),
}

impl AnySequence {
    pub fn kind(&self) -> FieldKind {
        match self {
            AnySequence::Q(_) => FieldKind::Q,
            AnySequence::Qq(_) => FieldKind::Qq,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnySequence::Q(s) => s.len(),
            AnySequence::Qq(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn parse_all<F: Field>(values: &[String], what: &str) -> Result<Vec<F>, DocumentError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.parse().map_err(|source| DocumentError::Scalar {
                context: format!("{what}[{i}] = {v:?}"),
                source,
            })
        })
        .collect()
}

impl SequenceDocument {
    pub fn from_json(src: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(src)?)
    }

    /// Parses the values; `field_override` wins over the document's field.
    pub fn parse(&self, field_override: Option<FieldKind>) -> Result<AnySequence, DocumentError> {
        if self.values.is_empty() {
            return Err(DocumentError::Empty);
        }
        let kind = match field_override.or(self.field) {
            Some(k) => k,
            None if self.values.iter().all(|v| v.parse::<Rational>().is_ok()) => FieldKind::Q,
            None => FieldKind::Qq,
        };
        Ok(match kind {
            FieldKind::Q => AnySequence::Q(InvariantSequence::with_offset(
                parse_all(&self.values, "values")?,
                self.genus_offset,
            )),
            FieldKind::Qq => AnySequence::Qq(InvariantSequence::with_offset(
                parse_all(&self.values, "values")?,
                self.genus_offset,
            )),
        })
    }

    pub fn from_sequence<F: Field>(seq: &InvariantSequence<F>) -> Self {
        SequenceDocument {
            field: Some(F::KIND),
            values: seq.values.iter().map(ToString::to_string).collect(),
            genus_offset: seq.genus_offset,
            notes: Vec::new(),
            provenance: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub field: FieldKind,
    pub dim: usize,
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    pub eps: Vec<String>,
    pub eta: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAlgebra {
    Q(AlmostFrobeniusAlgebra<Rational>),
    Qq(AlmostFrobeniusAlgebra<RationalFunction>),
}

impl AlgebraDocument {
    pub fn from_json(src: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(src)?)
    }

    fn build<F: Field>(&self) -> Result<AlmostFrobeniusAlgebra<F>, DocumentError> {
        let n = self.dim;
        if self.t.len() != n || self.t.iter().any(|r| r.len() != n) {
            return Err(DocumentError::Shape(format!("T must be {n}×{n}")));
        }
        if self.eps.len() != n || self.eta.len() != n {
            return Err(DocumentError::Shape(format!("eps and eta must have length {n}")));
        }
        let rows = self
            .t
            .iter()
            .enumerate()
            .map(|(i, r)| parse_all::<F>(r, &format!("T[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlmostFrobeniusAlgebra::new(
            Matrix::from_rows(rows),
            parse_all(&self.eps, "eps")?,
            parse_all(&self.eta, "eta")?,
        )?)
    }

    pub fn parse(&self) -> Result<AnyAlgebra, DocumentError> {
        Ok(match self.field {
            FieldKind::Q => AnyAlgebra::Q(self.build()?),
            FieldKind::Qq => AnyAlgebra::Qq(self.build()?),
        })
    }

    pub fn from_algebra<F: Field>(alg: &AlmostFrobeniusAlgebra<F>) -> Self {
        let strings = |v: &[F]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        AlgebraDocument {
            field: F::KIND,
            dim: alg.dim(),
            t: alg.handle().to_rows().iter().map(|r| strings(r)).collect(),
            eps: strings(alg.eps()),
            eta: strings(alg.eta()),
        }
    }
}

/// A report over whichever field it was produced in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyReport {
    Q(QuantizationReport<Rational>),
    Qq(QuantizationReport<RationalFunction>),
}

impl AnyReport {
    pub fn to_json(&self) -> String {
        let mut s = match self {
            AnyReport::Q(r) => serde_json::to_string_pretty(r),
            AnyReport::Qq(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports serialize");
        s.push('\n');
        s
    }

    /// Dispatches on the report's `field` key.
    pub fn from_json(src: &str) -> Result<Self, DocumentError> {
        let value: serde_json::Value = serde_json::from_str(src)?;
        let kind: FieldKind = serde_json::from_value(value.get("field").cloned().unwrap_or_default())?;
        Ok(match kind {
            FieldKind::Q => AnyReport::Q(serde_json::from_value(value)?),
            FieldKind::Qq => AnyReport::Qq(serde_json::from_value(value)?),
        })
    }

    pub fn summary(&self) -> String {
        match self {
            AnyReport::Q(r) => r.summary(),
            AnyReport::Qq(r) => r.summary(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::Verdict;
    use crate::quantize::quantization_report;

    #[test]
    fn sequence_field_inference_and_override() {
        let doc = SequenceDocument::from_json(r#"{"values": ["1", "1/2"]}"#).unwrap();
        assert_eq!(doc.parse(None).unwrap().kind(), FieldKind::Q);
        assert_eq!(doc.parse(Some(FieldKind::Qq)).unwrap().kind(), FieldKind::Qq);
        let doc = SequenceDocument::from_json(r#"{"values": ["1", "q"], "genus_offset": 2}"#).unwrap();
        match doc.parse(None).unwrap() {
            AnySequence::Qq(s) => assert_eq!(s.genus_offset, 2),
            other => panic!("{other:?}"),
        }
        assert!(doc.parse(Some(FieldKind::Q)).is_err());
    }

    #[test]
    fn sequence_errors() {
        let doc = SequenceDocument::from_json(r#"{"field": "Q", "values": []}"#).unwrap();
        assert!(matches!(doc.parse(None), Err(DocumentError::Empty)));
        let doc = SequenceDocument::from_json(r#"{"field": "Q", "values": ["1", "4q"]}"#).unwrap();
        let err = doc.parse(None).unwrap_err();
        assert!(err.to_string().starts_with("values[1]"), "{err}");
        assert!(SequenceDocument::from_json("{").is_err());
    }

    #[test]
    fn algebra_document() {
        let doc = AlgebraDocument::from_json(
            r#"{"field": "Q", "dim": 2, "T": [["0","1"],["1","2"]], "eps": ["1","0"], "eta": ["1","0"]}"#,
        )
        .unwrap();
        let AnyAlgebra::Q(alg) = doc.parse().unwrap() else { panic!() };
        assert_eq!(alg.check_monoidality().verdict, Verdict::NotMonoidal);
        assert_eq!(AlgebraDocument::from_algebra(&alg), doc);

        let bad = AlgebraDocument { dim: 3, ..doc };
        assert!(matches!(bad.parse(), Err(DocumentError::Shape(_))));
    }

    #[test]
    fn report_round_trip() {
        let seq = InvariantSequence::new(["1", "1", "3", "7", "17"].iter().map(|s| s.parse().unwrap()).collect());
        let report = AnyReport::Q(quantization_report::<Rational>(&seq, Some(6)).unwrap());
        let json = report.to_json();
        assert_eq!(AnyReport::from_json(&json).unwrap(), report);

        let seq = InvariantSequence::new(["1", "q", "q^2"].iter().map(|s| s.parse().unwrap()).collect());
        let report = AnyReport::Qq(quantization_report::<RationalFunction>(&seq, None).unwrap());
        assert_eq!(AnyReport::from_json(&report.to_json()).unwrap(), report);
    }
}
