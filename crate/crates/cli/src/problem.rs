//! JSON problem files.

use std::collections::BTreeMap;

use fjpop::fjkkt::SystemVariant;
use fjpop::poly::{format_rational, parse_polynomial, rational_from_f64, Monomial, PolyError, Polynomial, Rational};
use fjpop::PopProblem;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// A polynomial given as text or as a list of terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Text(String),
    Terms(Vec<TermInput>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermInput {
    /// Number or rational string such as `"-7/3"`.
    pub coeff: Value,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    /// `none`, `fj`, `fj+`, `kkt` or `kkt+`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_products: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_denominator: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stagnation_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub objective: PolyInput,
    #[serde(default)]
    pub inequalities: Vec<PolyInput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equalities: Vec<PolyInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<PolyInput>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: ProblemOptions,
}

fn is_default(o: &ProblemOptions) -> bool {
    *o == ProblemOptions::default()
}

pub fn parse_rational(v: &Value) -> Result<Rational, String> {
    match v {
        Value::Number(n) => n.as_f64().and_then(rational_from_f64).ok_or_else(|| format!("bad number {n}")),
        Value::String(s) => {
            let p = parse_polynomial(s, &[]).map_err(|e| e.to_string())?;
            if p.terms().any(|(m, _)| !m.is_one()) {
                return Err(format!("'{s}' is not a number"));
            }
            Ok(p.constant_term())
        }
        other => Err(format!("expected a number, found {other}")),
    }
}

/// Variant named on the command line or in a file; `none` means no
/// augmentation.
pub fn parse_variant(s: &str) -> Result<Option<SystemVariant>, CliError> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|e: fjpop::fjkkt::FjError| CliError::Input(e.to_string()))
}

impl PolyInput {
    pub fn to_polynomial(&self, names: &[String], field: &str) -> Result<Polynomial, CliError> {
        let bad = |msg: String| CliError::Input(format!("{field}: {msg}"));
        match self {
            PolyInput::Text(t) => parse_polynomial(t, names).map_err(|e: PolyError| bad(e.to_string())),
            PolyInput::Terms(terms) => {
                let mut out = BTreeMap::new();
                for (i, t) in terms.iter().enumerate() {
                    if t.exps.len() != names.len() {
                        return Err(bad(format!(
                            "term {}: {} exponents for {} variables",
                            i + 1,
                            t.exps.len(),
                            names.len()
                        )));
                    }
                    let c = parse_rational(&t.coeff).map_err(|e| bad(format!("term {}: {e}", i + 1)))?;
                    *out.entry(Monomial::new(t.exps.clone())).or_insert_with(|| Rational::from_integer(0.into())) +=
                        c;
                }
                Ok(Polynomial::from_terms(names.len(), out))
            }
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))
    }

    pub fn to_problem(&self) -> Result<PopProblem, CliError> {
        let names = &self.variables;
        let f = self.objective.to_polynomial(names, "objective")?;
        let collect = |list: &[PolyInput], what: &str| {
            list.iter()
                .enumerate()
                .map(|(i, p)| p.to_polynomial(names, &format!("{what}[{i}]")))
                .collect::<Result<Vec<_>, _>>()
        };
        let g = collect(&self.inequalities, "inequalities")?;
        let h = collect(&self.equalities, "equalities")?;
        let theta = self.denominator.as_ref().map(|d| d.to_polynomial(names, "denominator")).transpose()?;
        PopProblem::new(names.clone(), f, g, h, theta).map_err(|e| CliError::Input(e.to_string()))
    }

    /// Canonical text form of `pop` with the given options.
    pub fn from_problem(pop: &PopProblem, options: ProblemOptions) -> Self {
        let text = |p: &Polynomial| PolyInput::Text(p.format_with(&pop.var_names));
        ProblemFile {
            variables: pop.var_names.clone(),
            objective: text(&pop.f),
            inequalities: pop.g.iter().map(text).collect(),
            equalities: pop.h.iter().map(text).collect(),
            denominator: pop.theta.as_ref().map(text),
            options,
        }
    }
}

/// Term-list form of `p`, with exact rational strings.
pub fn to_terms(p: &Polynomial) -> PolyInput {
    PolyInput::Terms(
        p.terms()
            .map(|(m, c)| TermInput { coeff: Value::String(format_rational(c)), exps: m.exponents().to_vec() })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_terms_agree() {
        let a = ProblemFile::parse(r#"{"variables": ["x1", "x2"], "objective": "2*x1^2*x2 - 1/3"}"#).unwrap();
        let b = ProblemFile::parse(
            r#"{"variables": ["x1", "x2"], "objective": [{"coeff": "2", "exps": [2, 1]}, {"coeff": -0.5, "exps": [0, 0]},
                {"coeff": "1/6", "exps": [0, 0]}]}"#,
        )
        .unwrap();
        assert_eq!(a.to_problem().unwrap(), b.to_problem().unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ProblemFile::parse(r#"{"variables": ["x"], "objective": "x", "bogus": 1}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = ProblemFile::parse(r#"{"variables": ["x"], "objective": "x", "options": {"kmax": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("kmax"), "{err}");
    }

    #[test]
    fn errors_name_the_field() {
        let file = ProblemFile::parse(r#"{"variables": ["x"], "objective": "x", "inequalities": ["1 - y"]}"#).unwrap();
        let err = file.to_problem().unwrap_err().to_string();
        assert!(err.contains("inequalities[0]") && err.contains("column"), "{err}");
        let file = ProblemFile::parse(r#"{"variables": ["x"], "objective": [{"coeff": 1, "exps": [1, 2]}]}"#).unwrap();
        assert!(file.to_problem().is_err());
        let err = ProblemFile::parse("{\n  \"variables\": [\"x\"],\n  \"objective\": 3\n}").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn canonical_round_trip() {
        let file = ProblemFile::parse(
            r#"{"variables": ["x", "y"], "objective": "x^2 y - 3/7", "inequalities": ["1 - x^2 - y^2"],
                "equalities": ["x - y"], "denominator": "1 + x^2", "options": {"variant": "none", "k_max": 4}}"#,
        )
        .unwrap();
        let pop = file.to_problem().unwrap();
        let echoed = ProblemFile::from_problem(&pop, file.options.clone());
        let text = serde_json::to_string(&echoed).unwrap();
        assert_eq!(ProblemFile::parse(&text).unwrap().to_problem().unwrap(), pop);
        let terms = ProblemFile { objective: to_terms(&pop.f), ..echoed };
        assert_eq!(terms.to_problem().unwrap(), pop);
    }
}
