use std::cmp::Ordering;
use std::fmt;

use super::PolyError;

/// Exponent vector `x^α` over a fixed number of ambient variables.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// tuples compared left to right (so `x1 > x2` among degree-one monomials).
/// Monomials over different ambient sizes are not comparable; [`Ord`] sorts
/// them by length first so they can still live in ordered containers, but
/// [`Monomial::grlex_cmp`] reports the mismatch as an error.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    /// The constant monomial `1` over `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Self { exps: vec![0; nvars] }
    }

    /// The monomial `x_i` over `nvars` variables.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn grlex_cmp(&self, other: &Self) -> Result<Ordering, PolyError> {
        if self.exps.len() != other.exps.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.exps.len(),
                found: other.exps.len(),
            });
        }
        Ok(self.cmp(other))
    }

    /// Product `x^α · x^β`.
    ///
    /// # Panics
    /// If the ambient sizes differ.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.exps.len(), other.exps.len(), "monomial size mismatch");
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `x^α / x^β` when `β ≤ α` componentwise.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if self.exps.len() != other.exps.len() {
            return None;
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Self { exps })
    }

    /// Appends `extra` zero exponents (embedding into a larger variable set).
    pub fn extend(&self, extra: usize) -> Self {
        let mut exps = self.exps.clone();
        exps.resize(self.exps.len() + extra, 0);
        Self { exps }
    }

    /// Prepends `extra` zero exponents.
    pub fn prepend(&self, extra: usize) -> Self {
        let mut exps = vec![0; extra];
        exps.extend_from_slice(&self.exps);
        Self { exps }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.exps
            .iter()
            .zip(point)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }

    /// Formats with the given variable names, e.g. `x1^2*x2`; `1` for the
    /// constant monomial.
    pub fn format_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps
            .len()
            .cmp(&other.exps.len())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let one = Monomial::one(2);
        let x1 = Monomial::var(2, 0);
        let x2 = Monomial::var(2, 1);
        let x1x2 = x1.mul(&x2);
        assert!(one < x2);
        assert!(x2 < x1);
        assert!(x1 < x1x2);
        assert!(Monomial::new(vec![0, 2]) < x1x2);
    }

    #[test]
    fn different_lengths_are_an_error() {
        let a = Monomial::one(2);
        let b = Monomial::one(3);
        assert!(a.grlex_cmp(&b).is_err());
        assert_eq!(a.grlex_cmp(&a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn division() {
        let a = Monomial::new(vec![2, 1]);
        let b = Monomial::new(vec![1, 1]);
        assert_eq!(a.checked_div(&b), Some(Monomial::new(vec![1, 0])));
        assert_eq!(b.checked_div(&a), None);
    }
}
