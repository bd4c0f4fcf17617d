//! Plain-text certificate import for solutions produced by external solvers.
//!
//! The numbers refer to the blocks of a given [`SosProgram`]:
//!
//! ```text
//! # comment (also `*`)
//! xi <number>
//! gram <b>          followed by s rows of s numbers (s = size of block b)
//! ideal <b>         followed by the coefficients of multiplier b
//! ```
//!
//! Block indices are 1-based. Numbers are floats (`1.5e-3`) or exact
//! rationals (`-7/3`). Omitted blocks are zero; `xi` is required.

use num_traits::Zero;

use crate::poly::{parse_polynomial, rational_from_f64, Polynomial, Rational};
use crate::relax::SosProgram;

use super::{Certificate, CertifyError, GramTerm, IdealTerm};

fn number(tok: &str, line: usize) -> Result<Rational, CertifyError> {
    let bad = || CertifyError::Parse { line, message: format!("bad number '{tok}'") };
    if let Ok(v) = tok.parse::<f64>() {
        return rational_from_f64(v).ok_or_else(bad);
    }
    let p = parse_polynomial(tok, &[]).map_err(|_| bad())?;
    if p.terms().any(|(m, _)| !m.is_one()) {
        return Err(bad());
    }
    Ok(p.constant_term())
}

pub fn parse_certificate_text(text: &str, sos: &SosProgram) -> Result<Certificate, CertifyError> {
    let mut tokens = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !(l.trim_start().starts_with('#') || l.trim_start().starts_with('*')))
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
        .peekable();
    let mut gram: Vec<Vec<Vec<Rational>>> =
        sos.gram.iter().map(|b| vec![vec![Rational::zero(); b.basis.len()]; b.basis.len()]).collect();
    let mut ideal: Vec<Vec<Rational>> = sos.ideal.iter().map(|b| vec![Rational::zero(); b.basis.len()]).collect();
    let mut xi = None;

    let mut take = |what: &str, last: usize| -> Result<(usize, &str), CertifyError> {
        tokens.next().ok_or_else(|| CertifyError::Parse { line: last, message: format!("missing {what}") })
    };
    let mut last = 0;
    loop {
        let (line, keyword) = match take("keyword", last) {
            Ok(t) => t,
            Err(_) => break,
        };
        last = line;
        let block = |tok: (usize, &str), count: usize| -> Result<usize, CertifyError> {
            match tok.1.parse::<usize>() {
                Ok(b) if (1..=count).contains(&b) => Ok(b - 1),
                _ => Err(CertifyError::Parse { line: tok.0, message: format!("bad block index '{}'", tok.1) }),
            }
        };
        match keyword {
            "xi" => {
                let (l, t) = take("xi value", line)?;
                xi = Some(number(t, l)?);
            }
            "gram" => {
                let b = block(take("block index", line)?, gram.len())?;
                let s = gram[b].len();
                for i in 0..s {
                    for j in 0..s {
                        let (l, t) = take("gram entry", line)?;
                        last = l;
                        gram[b][i][j] = number(t, l)?;
                    }
                }
            }
            "ideal" => {
                let b = block(take("block index", line)?, ideal.len())?;
                for beta in 0..ideal[b].len() {
                    let (l, t) = take("ideal coefficient", line)?;
                    last = l;
                    ideal[b][beta] = number(t, l)?;
                }
            }
            other => {
                return Err(CertifyError::Parse { line, message: format!("unknown keyword '{other}'") });
            }
        }
    }
    let xi = xi.ok_or(CertifyError::Parse { line: last, message: "missing xi".into() })?;
    let n = sos.var_names.len();
    Ok(Certificate {
        var_names: sos.var_names.clone(),
        target: sos.target.clone(),
        xi_weight: sos.xi_weight.clone(),
        xi,
        gram: sos
            .gram
            .iter()
            .zip(gram)
            .map(|(b, matrix)| GramTerm { generator: b.generator.clone(), basis: b.basis.clone(), matrix })
            .collect(),
        ideal: sos
            .ideal
            .iter()
            .zip(ideal)
            .map(|(b, u)| IdealTerm {
                h: b.h.clone(),
                multiplier: Polynomial::from_terms(n, b.basis.iter().cloned().zip(u)),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_certificate;
    use crate::fjkkt::PopProblem;
    use crate::relax::build_sos_sdp;

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    #[test]
    fn hand_certificate_text() {
        let pop = PopProblem::inequality(p("1 + x"), vec![p("1 - x^2")]).unwrap();
        let sos = build_sos_sdp(&pop, 1).unwrap();
        let text = "# 1 + x = 1/2 (1 + x)^2 + 1/2 (1 - x^2)\nxi 0\ngram 1\n0.5 1/2\n0.5 0.5\ngram 2\n0.5\n";
        let cert = parse_certificate_text(text, &sos).unwrap();
        assert!(verify_certificate(&cert, 1e-12).unwrap().passed);
    }

    #[test]
    fn errors_carry_lines() {
        let pop = PopProblem::inequality(p("x"), vec![p("1 - x^2")]).unwrap();
        let sos = build_sos_sdp(&pop, 1).unwrap();
        let err = |t: &str| match parse_certificate_text(t, &sos) {
            Err(CertifyError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("xi 0\ngram 3\n"), 2);
        assert_eq!(err("xi 0\nfoo\n"), 2);
        assert_eq!(err("gram 2\n1\n"), 2);
        assert_eq!(err("xi 0\ngram 1\n1 0\n0 abc\n"), 4);
    }
}
