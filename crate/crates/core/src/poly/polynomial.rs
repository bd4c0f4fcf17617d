use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, PolyError, Rational};

/// Total degree with a distinguished value for the zero polynomial.
///
/// `NegInfinity` sorts below every finite degree, so taking a maximum over a
/// list that contains zero polynomials behaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    /// Finite degree, or `0` for the zero polynomial.
    pub fn or_zero(self) -> u32 {
        match self {
            Degree::NegInfinity => 0,
            Degree::Finite(d) => d,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in graded-lex order and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i), Rational::one())])
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    ///
    /// # Panics
    /// If a monomial has the wrong number of variables.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Convenience constructor from integer exponent vectors and integer
    /// coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), Rational::from_integer(BigInt::from(*c)))),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "monomial size mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map(|m| Degree::Finite(m.degree()))
            .unwrap_or(Degree::NegInfinity)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative `∂p/∂x_i`.
    pub fn differentiate(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VariableOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.differentiate(i).expect("index in range"))
            .collect()
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point(point.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, x) in m.exponents().iter().zip(point) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| rational_to_f64(c) * m.eval_f64(point))
            .sum())
    }

    fn check_point(&self, len: usize) -> Result<(), PolyError> {
        if len != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: len });
        }
        Ok(())
    }

    /// Embeds into `nvars + extra` variables, new variables appended.
    pub fn extend_vars(&self, extra: usize) -> Self {
        Self {
            nvars: self.nvars + extra,
            terms: self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())).collect(),
        }
    }

    /// Embeds into `nvars + extra` variables, new variables prepended.
    pub fn prepend_vars(&self, extra: usize) -> Self {
        Self {
            nvars: self.nvars + extra,
            terms: self.terms.iter().map(|(m, c)| (m.prepend(extra), c.clone())).collect(),
        }
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest degree first reads more naturally.
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&m.format_with(names));
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&m.format_with(names));
            }
        }
        out
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-float conversion of an exact rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerator or denominator: scale both down first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

/// Exact rational from a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&[]))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial size mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial size mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial size mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn power_rule() {
        // d/dx1 (x1^2 x2) = 2 x1 x2
        let p = Polynomial::from_int_terms(2, &[(1, &[2, 1])]);
        let d = p.differentiate(0).unwrap();
        assert_eq!(d, Polynomial::from_int_terms(2, &[(2, &[1, 1])]));
        // d/dx2 (x1^2) = 0
        let p = Polynomial::from_int_terms(2, &[(1, &[2, 0])]);
        assert!(p.differentiate(1).unwrap().is_zero());
        assert!(p.differentiate(2).is_err());
    }

    #[test]
    fn derivative_matches_central_differences() {
        let p = Polynomial::from_int_terms(1, &[(1, &[3])]);
        let d = p.differentiate(0).unwrap();
        assert_eq!(d, Polynomial::from_int_terms(1, &[(3, &[2])]));
        let h = 1e-5;
        let x = 0.7;
        let fd = (p.eval_f64(&[x + h]).unwrap() - p.eval_f64(&[x - h]).unwrap()) / (2.0 * h);
        assert!((fd - d.eval_f64(&[x]).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn gradients() {
        let p = Polynomial::from_int_terms(2, &[(1, &[2, 0]), (1, &[0, 2])]);
        let g = p.gradient();
        assert_eq!(g[0], Polynomial::from_int_terms(2, &[(2, &[1, 0])]));
        assert_eq!(g[1], Polynomial::from_int_terms(2, &[(2, &[0, 1])]));

        let c = Polynomial::from_int(3, 5);
        assert!(c.gradient().iter().all(Polynomial::is_zero));
        assert_eq!(c.gradient().len(), 3);

        let p = Polynomial::from_int_terms(3, &[(1, &[1, 1, 1])]);
        let g = p.gradient();
        assert_eq!(g[0], Polynomial::from_int_terms(3, &[(1, &[0, 1, 1])]));
        assert_eq!(g[1], Polynomial::from_int_terms(3, &[(1, &[1, 0, 1])]));
        assert_eq!(g[2], Polynomial::from_int_terms(3, &[(1, &[1, 1, 0])]));
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::from_int_terms(1, &[(1, &[2]), (-1, &[0])]);
        assert_eq!(p.evaluate(&[q(2, 1)]).unwrap(), q(3, 1));
        assert_eq!(Polynomial::zero(2).evaluate(&[q(3, 7), q(-1, 2)]).unwrap(), q(0, 1));
        let motzkin =
            Polynomial::from_int_terms(2, &[(1, &[4, 2]), (1, &[2, 4]), (-3, &[2, 2]), (1, &[0, 0])]);
        assert_eq!(motzkin.evaluate(&[q(1, 1), q(1, 1)]).unwrap(), q(0, 1));
        assert!(motzkin.evaluate(&[q(1, 1)]).is_err());
    }

    #[test]
    fn zero_polynomial_degree_is_sentinel() {
        assert_eq!(Polynomial::zero(2).degree(), Degree::NegInfinity);
        assert_eq!(Polynomial::one(2).degree(), Degree::Finite(0));
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let p = Polynomial::var(2, 0);
        assert!((&p - &p).is_zero());
        assert_eq!((&p - &p).degree(), Degree::NegInfinity);
    }

    #[test]
    fn pow_and_display() {
        let x = Polynomial::var(1, 0);
        let p = &x + &Polynomial::one(1);
        let sq = p.pow(2);
        assert_eq!(sq, Polynomial::from_int_terms(1, &[(1, &[2]), (2, &[1]), (1, &[0])]));
        assert_eq!(sq.to_string(), "x1^2 + 2*x1 + 1");
        let r = Polynomial::constant(1, q(-1, 3));
        assert_eq!(r.to_string(), "-1/3");
    }

    #[test]
    fn big_rational_to_float() {
        let big = Rational::from_integer(BigInt::from(1) << 2000usize);
        let r = &big / &(&big * Rational::from_integer(BigInt::from(4)));
        assert!((rational_to_f64(&r) - 0.25).abs() < 1e-15);
    }
}
