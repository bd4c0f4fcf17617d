use num_traits::{One, Signed, Zero};

use crate::poly::{Polynomial, Rational};

use super::CertifyError;

/// `p_j = Π_{i≠j} (f − t_i)/(t_j − t_i)`.
pub fn lagrange_basis(f: &Polynomial, values: &[Rational]) -> Result<Vec<Polynomial>, CertifyError> {
    if values.is_empty() {
        return Err(CertifyError::NoValues);
    }
    for (i, a) in values.iter().enumerate() {
        if values[..i].contains(a) {
            return Err(CertifyError::DuplicateValue(a.clone()));
        }
    }
    let n = f.nvars();
    let shifted: Vec<Polynomial> = values.iter().map(|t| f - &Polynomial::constant(n, t.clone())).collect();
    Ok((0..values.len())
        .map(|j| {
            let mut p = Polynomial::one(n);
            for (i, s) in shifted.iter().enumerate() {
                if i != j {
                    let denom = &values[j] - &values[i];
                    p = (&p * s).scale(&(Rational::one() / denom));
                }
            }
            p
        })
        .collect())
}

/// `q = Σ t_i p_i²` for nonnegative, distinct `t_i`.
pub fn build_certificate_q(f: &Polynomial, values: &[Rational]) -> Result<Polynomial, CertifyError> {
    if let Some(t) = values.iter().find(|t| t.is_negative()) {
        return Err(CertifyError::NegativeValue(t.clone()));
    }
    let basis = lagrange_basis(f, values)?;
    let mut q = Polynomial::zero(f.nvars());
    for (t, p) in values.iter().zip(&basis) {
        if !t.is_zero() {
            q = &q + &(p * p).scale(t);
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &["x".to_string()]).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn classical_examples() {
        assert_eq!(lagrange_basis(&p("x"), &[q(5, 1)]).unwrap(), vec![p("1")]);
        assert_eq!(lagrange_basis(&p("x"), &[q(0, 1), q(1, 1)]).unwrap(), vec![p("1 - x"), p("x")]);
        let b = lagrange_basis(&p("x^2"), &[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(b[1], p("x^2"));
        let u = [q(-1, 1)];
        assert_eq!(b[1].evaluate(&u).unwrap(), q(1, 1));
        assert_eq!(b[0].evaluate(&u).unwrap(), q(0, 1));
    }

    #[test]
    fn certificate_examples() {
        assert_eq!(build_certificate_q(&p("x^2"), &[q(0, 1), q(1, 1)]).unwrap(), p("x^4"));
        assert_eq!(build_certificate_q(&p("x^2"), &[q(3, 1)]).unwrap(), p("3"));
        let c = build_certificate_q(&p("x"), &[q(0, 1), q(2, 1)]).unwrap();
        assert_eq!(c, p("1/2 x^2"));
        let r = &p("x") - &c;
        for u in [q(0, 1), q(2, 1)] {
            assert!(r.evaluate(&[u]).unwrap().is_zero());
        }
    }

    #[test]
    fn errors() {
        assert_eq!(lagrange_basis(&p("x"), &[]), Err(CertifyError::NoValues));
        assert_eq!(lagrange_basis(&p("x"), &[q(1, 2), q(2, 4)]), Err(CertifyError::DuplicateValue(q(1, 2))));
        assert_eq!(build_certificate_q(&p("x"), &[q(-1, 1)]), Err(CertifyError::NegativeValue(q(-1, 1))));
    }
}
