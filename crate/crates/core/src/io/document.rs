//! JSON documents describing a Lie algebra with a metric and optional
//! almost contact forms.
//!
//! ```json
//! {
//!   "name": "example",
//!   "dimension": 3,
//!   "differential": { "e3": [{ "coeff": "1", "monomial": [1, 2] }] },
//!   "metric": "identity",
//!   "alpha": ["0", "0", "1"],
//!   "omega": [{ "coeff": "1", "monomial": [1, 2] }],
//!   "orientation": 1
//! }
//! ```
//!
//! Missing `e<k>` entries have `de^k = 0`. Every violation found while
//! loading is reported, not only the first.

use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::coefficient::parse_coefficient;
use crate::exterior::{KForm, Orientation};
use crate::lie_algebra::{LieAlgebra, Metric};

/// `coeff * e^{ij}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: String,
    pub monomial: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricEntry {
    /// Only `"identity"` is accepted.
    Named(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dimension: usize,
    pub differential: IndexMap<String, Vec<Monomial>>,
    pub metric: MetricEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Monomial>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i64>,
}

/// A loaded and validated document.
#[derive(Clone, Debug)]
pub struct LoadedDocument {
    pub name: String,
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub alpha: Option<KForm>,
    pub omega: Option<KForm>,
    pub orientation: Orientation,
}

impl LoadedDocument {
    /// `(alpha, omega)` when both are present.
    pub fn contact_forms(&self) -> Option<(&KForm, &KForm)> {
        self.alpha.as_ref().zip(self.omega.as_ref())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DocumentError {
    Io(String),
    Syntax(String),
    /// All violations, each prefixed by its location in the document.
    Invalid(Vec<String>),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Io(e) => write!(f, "cannot read document: {e}"),
            DocumentError::Syntax(e) => write!(f, "malformed document: {e}"),
            DocumentError::Invalid(errs) => {
                write!(f, "invalid document ({} problem{}):", errs.len(), if errs.len() == 1 { "" } else { "s" })?;
                for e in errs {
                    write!(f, "\n  - {e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for DocumentError {}

impl AlgebraDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Builds and validates the algebra, metric and forms; `tol` bounds
    /// `d^2` and the metric symmetry check.
    pub fn build(&self, tol: f64) -> Result<LoadedDocument, DocumentError> {
        let n = self.dimension;
        let mut errs = Vec::new();
        if n == 0 || n > crate::exterior::MAX_DIMENSION {
            return Err(DocumentError::Invalid(vec![format!(
                "dimension: {n} is outside 1..={}",
                crate::exterior::MAX_DIMENSION
            )]));
        }

        let mut differential = vec![KForm::vanishing(n, 2); n];
        for (key, terms) in &self.differential {
            let k = key
                .strip_prefix('e')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|k| (1..=n).contains(k));
            let Some(k) = k else {
                errs.push(format!("differential.{key}: key must be e1..e{n}"));
                continue;
            };
            if let Some(form) = monomials(&format!("differential.{key}"), terms, n, &mut errs) {
                differential[k - 1] = form;
            }
        }

        let metric = match &self.metric {
            MetricEntry::Named(s) if s == "identity" => Some(Metric::identity(n)),
            MetricEntry::Named(s) => {
                errs.push(format!("metric: unknown metric \"{s}\""));
                None
            }
            MetricEntry::Matrix(rows) => {
                let mut ok = rows.len() == n;
                if !ok {
                    errs.push(format!("metric: expected {n} rows, found {}", rows.len()));
                }
                let mut m = DMatrix::zeros(n, n);
                for (i, row) in rows.iter().enumerate().take(n) {
                    if row.len() != n {
                        errs.push(format!("metric[{i}]: expected {n} entries, found {}", row.len()));
                        ok = false;
                        continue;
                    }
                    for (j, c) in row.iter().enumerate() {
                        match parse_coefficient(c) {
                            Ok(v) => m[(i, j)] = v,
                            Err(e) => {
                                errs.push(format!("metric[{i}][{j}]: {e}"));
                                ok = false;
                            }
                        }
                    }
                }
                if ok {
                    match Metric::new(m) {
                        Ok(g) => Some(g),
                        Err(e) => {
                            errs.push(format!("metric: {e}"));
                            None
                        }
                    }
                } else {
                    None
                }
            }
        };

        let alpha = self.alpha.as_ref().and_then(|coeffs| {
            if coeffs.len() != n {
                errs.push(format!("alpha: expected {n} entries, found {}", coeffs.len()));
                return None;
            }
            let mut values = vec![0.0; n];
            let mut ok = true;
            for (i, c) in coeffs.iter().enumerate() {
                match parse_coefficient(c) {
                    Ok(v) => values[i] = v,
                    Err(e) => {
                        errs.push(format!("alpha[{i}]: {e}"));
                        ok = false;
                    }
                }
            }
            ok.then(|| KForm::one_form(&values))
        });
        let omega = self
            .omega
            .as_ref()
            .and_then(|terms| monomials("omega", terms, n, &mut errs));
        if self.alpha.is_some() != self.omega.is_some() {
            errs.push("alpha and omega must be given together".into());
        }

        let orientation = match self.orientation {
            None | Some(1) => Orientation::Positive,
            Some(-1) => Orientation::Negative,
            Some(o) => {
                errs.push(format!("orientation: expected 1 or -1, found {o}"));
                Orientation::Positive
            }
        };

        let algebra = match LieAlgebra::from_structure_equations(differential) {
            Ok(alg) => {
                let report = alg.validate(tol);
                if !report.passed {
                    errs.push(format!(
                        "differential: d^2 != 0 (max |d^2 e^k| = {:e}, tolerance {:e})",
                        report.d_squared, tol
                    ));
                }
                Some(alg)
            }
            Err(e) => {
                errs.push(format!("differential: {e}"));
                None
            }
        };

        if !errs.is_empty() {
            return Err(DocumentError::Invalid(errs));
        }
        Ok(LoadedDocument {
            name: self.name.clone(),
            algebra: algebra.expect("no errors"),
            metric: metric.expect("no errors"),
            alpha,
            omega,
            orientation,
        })
    }
}

fn monomials(path: &str, terms: &[Monomial], n: usize, errs: &mut Vec<String>) -> Option<KForm> {
    let mut form = KForm::vanishing(n, 2);
    let before = errs.len();
    for (t, term) in terms.iter().enumerate() {
        let at = format!("{path}[{t}]");
        let coeff = match parse_coefficient(&term.coeff) {
            Ok(v) => Some(v),
            Err(e) => {
                errs.push(format!("{at}.coeff: {e}"));
                None
            }
        };
        let [i, j] = term.monomial[..] else {
            errs.push(format!("{at}.monomial: expected two indices, found {}", term.monomial.len()));
            continue;
        };
        let mut ok = true;
        for idx in [i, j] {
            if idx < 1 || idx > n {
                errs.push(format!("{at}.monomial: index {idx} out of range 1..={n}"));
                ok = false;
            }
        }
        if i == j {
            errs.push(format!("{at}.monomial: degenerate monomial [{i}, {j}]"));
            ok = false;
        } else if i > j {
            errs.push(format!("{at}.monomial: indices must be increasing, found [{i}, {j}]"));
            ok = false;
        }
        if let (true, Some(c)) = (ok, coeff) {
            form += &(&KForm::basis(n, &[i, j]) * c);
        }
    }
    (errs.len() == before).then_some(form)
}

pub fn parse_document(text: &str, tol: f64) -> Result<LoadedDocument, DocumentError> {
    AlgebraDocument::from_json(text)?.build(tol)
}

pub fn load_document(path: impl AsRef<Path>, tol: f64) -> Result<LoadedDocument, DocumentError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| DocumentError::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: &str = r#"{
        "name": "h3",
        "dimension": 3,
        "differential": { "e3": [{ "coeff": "-1", "monomial": [1, 2] }] },
        "metric": "identity"
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let doc = AlgebraDocument::from_json(HEISENBERG).unwrap();
        let again = AlgebraDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        let loaded = doc.build(1e-9).unwrap();
        assert_eq!(loaded.algebra.structure_constant(2, 0, 1), 1.0);
        assert!(loaded.metric.is_identity());
        assert!(loaded.contact_forms().is_none());
    }

    #[test]
    fn degenerate_monomial() {
        let text = HEISENBERG.replace("[1, 2]", "[2, 2]");
        match parse_document(&text, 1e-9) {
            Err(DocumentError::Invalid(errs)) => {
                assert!(errs.iter().any(|e| e.contains("degenerate monomial")), "{errs:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_are_aggregated() {
        let text = r#"{
            "name": "bad",
            "dimension": 3,
            "differential": {
                "e1": [{ "coeff": "1/0", "monomial": [2, 1] }],
                "e7": [],
                "e3": [{ "coeff": "1", "monomial": [1, 4] }]
            },
            "metric": [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]],
            "orientation": 2
        }"#;
        let Err(DocumentError::Invalid(errs)) = parse_document(text, 1e-9) else {
            panic!("expected validation errors");
        };
        let joined = errs.join("\n");
        for needle in ["division by zero", "increasing", "e1..e3", "out of range", "metric", "orientation"] {
            assert!(joined.contains(needle), "{needle} missing from\n{joined}");
        }
    }

    #[test]
    fn rejects_non_closed_differential() {
        // de^1 = e^{12}, de^3 = e^{13} has d(de^3) = e^{123}
        let text = r#"{
            "name": "no", "dimension": 3, "metric": "identity",
            "differential": {
                "e1": [{ "coeff": "1", "monomial": [1, 2] }],
                "e3": [{ "coeff": "1", "monomial": [1, 3] }]
            }
        }"#;
        let Err(DocumentError::Invalid(errs)) = parse_document(text, 1e-9) else {
            panic!("expected d^2 failure");
        };
        assert!(errs[0].contains("d^2"));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_document("{", 1e-9), Err(DocumentError::Syntax(_))));
        assert!(matches!(
            parse_document(&HEISENBERG.replace("\"name\"", "\"nom\""), 1e-9),
            Err(DocumentError::Syntax(_))
        ));
        assert!(matches!(load_document("/nonexistent.json", 1e-9), Err(DocumentError::Io(_))));
    }
}
