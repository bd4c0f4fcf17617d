use std::collections::HashMap;

use super::{Monomial, PolyError};

/// All monomials of degree at most `order` in `nvars` variables, in
/// increasing graded-lex order, with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    order: u32,
    elements: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, order: u32) -> Result<Self, PolyError> {
        if nvars == 0 {
            return Err(PolyError::NoVariables);
        }
        let mut elements = Vec::with_capacity(binomial(nvars as u64 + order as u64, order as u64) as usize);
        for deg in 0..=order {
            let mut layer = Vec::new();
            let mut exps = vec![0u32; nvars];
            compositions(deg, 0, &mut exps, &mut layer);
            layer.sort();
            elements.extend(layer);
        }
        let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Self { nvars, order, elements, index })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Monomial] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// `v(u)`: the basis evaluated at a point.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.elements.iter().map(|m| m.eval_f64(point)).collect()
    }
}

fn compositions(remaining: u32, pos: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial::new(exps.clone()));
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e;
        compositions(remaining - e, pos + 1, exps, out);
    }
    exps[pos] = 0;
}

/// `C(n, k)` in u128 arithmetic (saturating on overflow).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b = MonomialBasis::new(2, 1).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(
            b.elements(),
            &[Monomial::new(vec![0, 0]), Monomial::new(vec![0, 1]), Monomial::new(vec![1, 0])]
        );
        assert_eq!(MonomialBasis::new(2, 2).unwrap().len(), 6);
        let b = MonomialBasis::new(1, 0).unwrap();
        assert_eq!(b.elements(), &[Monomial::one(1)]);
        assert!(MonomialBasis::new(0, 3).is_err());
    }

    #[test]
    fn index_is_a_bijection() {
        let b = MonomialBasis::new(3, 4).unwrap();
        for (i, m) in b.elements().iter().enumerate() {
            assert_eq!(b.index_of(m), Some(i));
        }
        assert_eq!(b.index_of(&Monomial::new(vec![5, 0, 0])), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(12, 8), 495);
        assert_eq!(binomial(3, 5), 0);
    }
}
