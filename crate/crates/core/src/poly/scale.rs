//! Max-norm estimation on the box `[-1,1]^n` and the homogenize-and-scale
//! transform `p ↦ x0^{2ξ} p(x / (x0 √2))`, kept exact over `ℚ[√2]`.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Degree, Monomial, PolyError, Polynomial, Rational};
use crate::par::{self, ExecMode};

/// Lower estimate of `max |p|` on `[-1,1]^n`, taken over the uniform grid with
/// `points_per_axis` points per coordinate (endpoints included).
pub fn max_norm_estimate(p: &Polynomial, points_per_axis: usize) -> Result<f64, PolyError> {
    max_norm_estimate_with(p, points_per_axis, ExecMode::default())
}

pub fn max_norm_estimate_with(
    p: &Polynomial,
    points_per_axis: usize,
    mode: ExecMode,
) -> Result<f64, PolyError> {
    if points_per_axis < 2 {
        return Err(PolyError::GridTooCoarse(points_per_axis));
    }
    let n = p.nvars();
    let total = points_per_axis
        .checked_pow(n as u32)
        .ok_or(PolyError::GridTooLarge)?;
    let step = 2.0 / (points_per_axis - 1) as f64;
    let coords: Vec<f64> = (0..points_per_axis).map(|i| -1.0 + step * i as f64).collect();
    // Float copy of the terms, evaluated per grid point.
    let terms: Vec<(f64, Vec<u32>)> = p
        .terms()
        .map(|(m, c)| (super::rational_to_f64(c), m.exponents().to_vec()))
        .collect();
    let best = par::max_range(mode, total, |mut idx| {
        let mut point = vec![0.0; n];
        for x in point.iter_mut() {
            *x = coords[idx % points_per_axis];
            idx /= points_per_axis;
        }
        let v: f64 = terms
            .iter()
            .map(|(c, e)| c * e.iter().zip(&point).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum();
        v.abs()
    });
    Ok(best.unwrap_or(0.0))
}

/// Element `a + b√2` of `ℚ[√2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Self { a: Rational::zero(), b: Rational::new(BigInt::one(), BigInt::from(2)) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = Rational::from_integer(BigInt::from(2));
        QSqrt2 {
            a: &self.a * &rhs.a + two * (&self.b * &rhs.b),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

/// `p̃ = rational + √2 · sqrt2_part`, in variables `(x0, x1, …, xn)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedPolynomial {
    pub rational: Polynomial,
    pub sqrt2_part: Polynomial,
    /// `ξ = ⌈deg p / 2⌉`; every term of `p̃` has total degree `2ξ`.
    pub half_degree: u32,
}

impl HomogenizedPolynomial {
    pub fn nvars(&self) -> usize {
        self.rational.nvars()
    }

    /// Exact value at a point of `ℚ[√2]^{n+1}`.
    pub fn evaluate(&self, point: &[QSqrt2]) -> Result<QSqrt2, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), found: point.len() });
        }
        let eval = |p: &Polynomial| {
            let mut acc = QSqrt2::zero();
            for (m, c) in p.terms() {
                let mut t = QSqrt2::rational(c.clone());
                for (&e, x) in m.exponents().iter().zip(point) {
                    if e > 0 {
                        t = &t * &x.pow(e);
                    }
                }
                acc = &acc + &t;
            }
            acc
        };
        let r = eval(&self.rational);
        let s = eval(&self.sqrt2_part);
        let sqrt2 = QSqrt2 { a: Rational::zero(), b: Rational::one() };
        Ok(&r + &(&s * &sqrt2))
    }
}

/// Homogenize-and-scale: `p̃(x0, x) = x0^{2ξ} p(x / (x0 √2))` with
/// `ξ = ⌈deg p / 2⌉`. The term `p_α x^α` becomes
/// `p_α / 2^{⌈|α|/2⌉} · x0^{2ξ-|α|} x^α`, times `√2` when `|α|` is odd.
pub fn homogenize_scale(p: &Polynomial) -> Result<HomogenizedPolynomial, PolyError> {
    let deg = match p.degree() {
        Degree::NegInfinity => return Err(PolyError::ZeroPolynomial),
        Degree::Finite(d) => d,
    };
    let xi = deg.div_ceil(2);
    let n1 = p.nvars() + 1;
    let mut rational = Polynomial::zero(n1);
    let mut sqrt2_part = Polynomial::zero(n1);
    for (m, c) in p.terms() {
        let a = m.degree();
        let mut exps = Vec::with_capacity(n1);
        exps.push(2 * xi - a);
        exps.extend_from_slice(m.exponents());
        let denom = Rational::from_integer(BigInt::one() << a.div_ceil(2) as usize);
        let coeff = c / denom;
        if a % 2 == 1 {
            sqrt2_part.add_term(Monomial::new(exps), coeff);
        } else {
            rational.add_term(Monomial::new(exps), coeff);
        }
    }
    Ok(HomogenizedPolynomial { rational, sqrt2_part, half_degree: xi })
}
