use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::poly::{
    format_rational, parse_monomial, parse_polynomial, rational_from_f64, rational_to_f64, Monomial, Polynomial,
    Rational,
};
use crate::relax::SosProgram;
use crate::sdp::SdpSolution;

use super::CertifyError;

/// `generator · vᵀ G v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramTerm {
    pub generator: Polynomial,
    pub basis: Vec<Monomial>,
    pub matrix: Vec<Vec<Rational>>,
}

/// `h · multiplier`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealTerm {
    pub h: Polynomial,
    pub multiplier: Polynomial,
}

/// Claimed identity `target − ξ·xi_weight = Σ gen·vᵀGv + Σ h·mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub var_names: Vec<String>,
    pub target: Polynomial,
    pub xi_weight: Polynomial,
    pub xi: Rational,
    pub gram: Vec<GramTerm>,
    pub ideal: Vec<IdealTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub min_eigenvalues: Vec<f64>,
    pub max_asymmetry: f64,
    /// Largest coefficient of the identity residual.
    pub residual: f64,
    pub worst_monomial: Option<String>,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GramJson {
    generator: String,
    basis: Vec<String>,
    matrix: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealJson {
    h: String,
    multiplier: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    #[serde(default)]
    variables: Option<Vec<String>>,
    #[serde(default)]
    weight: Option<String>,
    xi: Value,
    #[serde(default)]
    gram: Vec<GramJson>,
    #[serde(default)]
    ideal: Vec<IdealJson>,
}

fn number(v: &Value) -> Result<Rational, CertifyError> {
    match v {
        Value::Number(n) => n.as_f64().and_then(rational_from_f64).ok_or(CertifyError::NonFinite),
        Value::String(s) => {
            let p = parse_polynomial(s, &[])?;
            if p.terms().any(|(m, _)| !m.is_one()) {
                return Err(CertifyError::Json(format!("'{s}' is not a number")));
            }
            Ok(p.constant_term())
        }
        other => Err(CertifyError::Json(format!("expected a number, found {other}"))),
    }
}

fn quadratic_form(n: usize, basis: &[Monomial], g: &[Vec<Rational>]) -> Polynomial {
    let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (i, mi) in basis.iter().enumerate() {
        for (j, mj) in basis.iter().enumerate() {
            if !g[i][j].is_zero() {
                *acc.entry(mi.mul(mj)).or_insert_with(Rational::zero) += &g[i][j];
            }
        }
    }
    Polynomial::from_terms(n, acc)
}

impl Certificate {
    /// Parses the JSON form. `target` is over `names`; a certificate may
    /// declare extra trailing `variables` (e.g. multipliers), in which case
    /// the target is lifted into the larger space. An optional `weight`
    /// multiplies both the target and `ξ`.
    pub fn from_json(text: &str, names: &[String], target: &Polynomial) -> Result<Self, CertifyError> {
        let raw: CertificateJson = serde_json::from_str(text).map_err(|e| CertifyError::Json(e.to_string()))?;
        let var_names = raw.variables.unwrap_or_else(|| names.to_vec());
        if var_names.len() < names.len() || var_names[..names.len()] != *names {
            return Err(CertifyError::DimensionMismatch(
                "certificate variables must extend the problem variables".into(),
            ));
        }
        let lifted = target.extend_vars(var_names.len() - names.len());
        let xi_weight = match raw.weight {
            Some(w) => parse_polynomial(&w, &var_names)?,
            None => Polynomial::one(var_names.len()),
        };
        let gram = raw
            .gram
            .iter()
            .map(|g| {
                let basis =
                    g.basis.iter().map(|m| parse_monomial(m, &var_names)).collect::<Result<Vec<_>, _>>()?;
                let matrix = g
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(number).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GramTerm { generator: parse_polynomial(&g.generator, &var_names)?, basis, matrix })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        let ideal = raw
            .ideal
            .iter()
            .map(|t| {
                Ok(IdealTerm {
                    h: parse_polynomial(&t.h, &var_names)?,
                    multiplier: parse_polynomial(&t.multiplier, &var_names)?,
                })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        let cert = Certificate {
            target: &lifted * &xi_weight,
            xi_weight,
            xi: number(&raw.xi)?,
            gram,
            ideal,
            var_names,
        };
        cert.check_shapes()?;
        Ok(cert)
    }

    /// JSON form with exact rational strings.
    pub fn to_json(&self) -> Value {
        let names = &self.var_names;
        let gram: Vec<Value> = self
            .gram
            .iter()
            .map(|g| {
                json!({
                    "generator": g.generator.format_with(names),
                    "basis": g.basis.iter().map(|m| m.format_with(names)).collect::<Vec<_>>(),
                    "matrix": g.matrix.iter()
                        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let ideal: Vec<Value> = self
            .ideal
            .iter()
            .map(|t| json!({ "h": t.h.format_with(names), "multiplier": t.multiplier.format_with(names) }))
            .collect();
        let mut out = json!({
            "variables": names,
            "xi": format_rational(&self.xi),
            "gram": gram,
            "ideal": ideal,
        });
        if self.xi_weight != Polynomial::one(names.len()) {
            out["weight"] = Value::String(self.xi_weight.format_with(names));
        }
        out
    }

    fn check_shapes(&self) -> Result<(), CertifyError> {
        let n = self.var_names.len();
        let bad = |what: String| Err(CertifyError::DimensionMismatch(what));
        for (b, g) in self.gram.iter().enumerate() {
            let s = g.basis.len();
            if g.matrix.len() != s || g.matrix.iter().any(|r| r.len() != s) {
                return bad(format!("gram block {b} is not {s}×{s}"));
            }
            if g.generator.nvars() != n || g.basis.iter().any(|m| m.nvars() != n) {
                return bad(format!("gram block {b} is not over {n} variables"));
            }
        }
        for (t, term) in self.ideal.iter().enumerate() {
            if term.h.nvars() != n || term.multiplier.nvars() != n {
                return bad(format!("ideal term {t} is not over {n} variables"));
            }
        }
        if self.target.nvars() != n || self.xi_weight.nvars() != n {
            return bad(format!("target is not over {n} variables"));
        }
        Ok(())
    }

    /// Exact `target − ξ·xi_weight − Σ gen·vᵀGv − Σ h·mult`.
    pub fn residual(&self) -> Polynomial {
        let mut r = &self.target - &self.xi_weight.scale(&self.xi);
        for g in &self.gram {
            r = &r - &(&g.generator * &quadratic_form(self.var_names.len(), &g.basis, &g.matrix));
        }
        for t in &self.ideal {
            r = &r - &(&t.h * &t.multiplier);
        }
        r
    }
}

/// Recomputes the identity exactly and checks the Gram blocks numerically.
pub fn verify_certificate(cert: &Certificate, tol: f64) -> Result<VerificationReport, CertifyError> {
    cert.check_shapes()?;
    let mut min_eigenvalues = Vec::with_capacity(cert.gram.len());
    let mut max_asymmetry = 0.0f64;
    for g in &cert.gram {
        let s = g.basis.len();
        for i in 0..s {
            for j in i + 1..s {
                max_asymmetry = max_asymmetry.max(rational_to_f64(&(&g.matrix[i][j] - &g.matrix[j][i]).abs()));
            }
        }
        if s == 0 {
            min_eigenvalues.push(0.0);
            continue;
        }
        let m = DMatrix::from_fn(s, s, |i, j| 0.5 * rational_to_f64(&(&g.matrix[i][j] + &g.matrix[j][i])));
        min_eigenvalues.push(m.symmetric_eigenvalues().min());
    }
    let r = cert.residual();
    let worst = r.terms().max_by(|a, b| a.1.abs().cmp(&b.1.abs()));
    let residual = worst.map_or(0.0, |(_, c)| rational_to_f64(&c.abs()));
    let worst_monomial = worst.map(|(m, _)| m.format_with(&cert.var_names));
    let passed = residual <= tol && max_asymmetry <= tol && min_eigenvalues.iter().all(|&e| e >= -tol);
    Ok(VerificationReport { min_eigenvalues, max_asymmetry, residual, worst_monomial, tol, passed })
}

/// `|p(u)| ≤ tol·(1 + ‖u‖^deg p)` at every point; false on a dimension
/// mismatch.
pub fn verify_vanishing(p: &Polynomial, points: &[Vec<f64>], tol: f64) -> bool {
    let deg = p.degree().or_zero() as i32;
    points.iter().all(|u| match p.eval_f64(u) {
        Ok(v) => {
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.abs() <= tol * (1.0 + norm.powi(deg))
        }
        Err(_) => false,
    })
}

/// Certificate read off a solved SOS program; floats are converted exactly.
pub fn certificate_from_solution(sos: &SosProgram, sol: &SdpSolution) -> Result<Certificate, CertifyError> {
    let exact = |x: f64| rational_from_f64(x).ok_or(CertifyError::NonFinite);
    if sol.blocks.len() != sos.gram.len() || sol.free.len() != 1 + sos.num_ideal_coefficients() {
        return Err(CertifyError::DimensionMismatch("solution does not match the SOS program".into()));
    }
    let gram = sos
        .gram
        .iter()
        .zip(&sol.blocks)
        .map(|(b, x)| {
            let matrix = (0..x.nrows())
                .map(|i| (0..x.ncols()).map(|j| exact(0.5 * (x[(i, j)] + x[(j, i)]))).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Ok(GramTerm { generator: b.generator.clone(), basis: b.basis.clone(), matrix })
        })
        .collect::<Result<Vec<_>, CertifyError>>()?;
    let n = sos.var_names.len();
    let mut offset = 1;
    let mut ideal = Vec::with_capacity(sos.ideal.len());
    for b in &sos.ideal {
        let mut terms = Vec::with_capacity(b.basis.len());
        for (m, &u) in b.basis.iter().zip(&sol.free[offset..]) {
            terms.push((m.clone(), exact(u)?));
        }
        offset += b.basis.len();
        ideal.push(IdealTerm { h: b.h.clone(), multiplier: Polynomial::from_terms(n, terms) });
    }
    Ok(Certificate {
        var_names: sos.var_names.clone(),
        target: sos.target.clone(),
        xi_weight: sos.xi_weight.clone(),
        xi: exact(sol.free[0])?,
        gram,
        ideal,
    })
}
