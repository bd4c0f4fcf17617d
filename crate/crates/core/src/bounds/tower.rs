use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::lognum::LogNum;

/// Largest bit length stored as [`TowerBound::Exact`].
pub const EXACT_BITS_CAP: u64 = 1 << 20;

/// A nonnegative number built from exact integers, iterated powers of two,
/// sums, products, powers, halving and bit lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TowerBound {
    Exact(#[serde(serialize_with = "decimal")] BigUint),
    /// `2^2^…^top` with `height` twos.
    Tower { height: u32, top: Box<TowerBound> },
    Sum(Vec<TowerBound>),
    Product(Vec<TowerBound>),
    Power { base: Box<TowerBound>, exponent: Box<TowerBound> },
    /// Half of the inner value.
    ScaledHalf(Box<TowerBound>),
    /// `bit(x)`: the number of binary digits of `x` (1 for zero).
    BitLength(Box<TowerBound>),
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl From<u64> for TowerBound {
    fn from(v: u64) -> Self {
        TowerBound::Exact(BigUint::from(v))
    }
}

impl From<BigUint> for TowerBound {
    fn from(v: BigUint) -> Self {
        TowerBound::Exact(v)
    }
}

impl TowerBound {
    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            TowerBound::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TowerBound::Exact(_))
    }

    /// `a + b`, folded to an exact value when both are exact.
    pub fn add(a: TowerBound, b: TowerBound) -> TowerBound {
        match (a, b) {
            (TowerBound::Exact(x), TowerBound::Exact(y)) if x.bits().max(y.bits()) < EXACT_BITS_CAP => {
                TowerBound::Exact(x + y)
            }
            (TowerBound::Exact(x), other) | (other, TowerBound::Exact(x)) if x.is_zero() => other,
            (a, b) => {
                let mut terms = Vec::new();
                for t in [a, b] {
                    match t {
                        TowerBound::Sum(inner) => terms.extend(inner),
                        t => terms.push(t),
                    }
                }
                TowerBound::Sum(terms)
            }
        }
    }

    /// `a · b`, folded to an exact value when both are exact and small.
    pub fn mul(a: TowerBound, b: TowerBound) -> TowerBound {
        match (a, b) {
            (TowerBound::Exact(x), TowerBound::Exact(y)) if x.bits() + y.bits() <= EXACT_BITS_CAP => {
                TowerBound::Exact(x * y)
            }
            (TowerBound::Exact(x), other) | (other, TowerBound::Exact(x)) if x.is_one() => other,
            (a, b) => {
                let mut factors = Vec::new();
                for t in [a, b] {
                    match t {
                        TowerBound::Product(inner) => factors.extend(inner),
                        t => factors.push(t),
                    }
                }
                TowerBound::Product(factors)
            }
        }
    }

    /// `base^exponent`.
    pub fn pow(base: TowerBound, exponent: TowerBound) -> TowerBound {
        if let TowerBound::Exact(e) = &exponent {
            if e.is_zero() {
                return TowerBound::from(1);
            }
            if e.is_one() {
                return base;
            }
            if let TowerBound::Exact(b) = &base {
                if b.is_zero() || b.is_one() {
                    return base;
                }
                if let Some(e) = e.to_u64() {
                    if b.bits().checked_mul(e).is_some_and(|bits| bits <= EXACT_BITS_CAP) {
                        return TowerBound::Exact(b.pow(e as u32));
                    }
                }
            }
        }
        TowerBound::Power { base: Box::new(base), exponent: Box::new(exponent) }
    }

    /// `2^e`, merged into an existing tower when possible.
    pub fn exp2(e: TowerBound) -> TowerBound {
        match e {
            TowerBound::Exact(v) if v < BigUint::from(EXACT_BITS_CAP) => {
                TowerBound::Exact(BigUint::one() << v.to_u64().expect("below cap"))
            }
            TowerBound::Tower { height, top } => TowerBound::Tower { height: height + 1, top },
            e => TowerBound::Tower { height: 1, top: Box::new(e) },
        }
    }

    /// `2^2^…^top` with `height` twos, never collapsed.
    pub fn tower(height: u32, top: TowerBound) -> TowerBound {
        assert!(height >= 1, "tower height must be at least 1");
        TowerBound::Tower { height, top: Box::new(top) }
    }

    pub fn half(x: TowerBound) -> TowerBound {
        TowerBound::ScaledHalf(Box::new(x))
    }

    pub fn bit_length(x: TowerBound) -> TowerBound {
        match x {
            TowerBound::Exact(v) => TowerBound::from(super::bit_big(&v)),
            x => TowerBound::BitLength(Box::new(x)),
        }
    }

    /// The exact value when every intermediate stays within `cap_bits`.
    pub fn materialize(&self, cap_bits: u64) -> Option<BigRational> {
        let int = |v: &BigUint| BigRational::from_integer(BigInt::from(v.clone()));
        let fits = |r: &BigRational| r.numer().bits() <= cap_bits && r.denom().bits() <= cap_bits;
        let out = match self {
            TowerBound::Exact(v) => {
                if v.bits() > cap_bits {
                    return None;
                }
                int(v)
            }
            TowerBound::Tower { height, top } => {
                let mut v = top.materialize(cap_bits)?;
                for _ in 0..*height {
                    if !v.is_integer() || v.numer() >= &BigInt::from(cap_bits) {
                        return None;
                    }
                    let e = v.numer().to_u64()?;
                    v = BigRational::from_integer(BigInt::one() << e);
                }
                v
            }
            TowerBound::Sum(terms) => {
                let mut acc = BigRational::zero();
                for t in terms {
                    acc += t.materialize(cap_bits)?;
                    if !fits(&acc) {
                        return None;
                    }
                }
                acc
            }
            TowerBound::Product(factors) => {
                let mut acc = BigRational::one();
                for f in factors {
                    let v = f.materialize(cap_bits)?;
                    if acc.numer().bits() + v.numer().bits() > cap_bits + 1 {
                        return None;
                    }
                    acc *= v;
                }
                acc
            }
            TowerBound::Power { base, exponent } => {
                let b = base.materialize(cap_bits)?;
                let e = exponent.materialize(cap_bits)?;
                if !e.is_integer() {
                    return None;
                }
                let e = e.numer().to_u64()?;
                if b.is_zero() || b.is_one() || e == 0 {
                    return Some(num_traits::pow::Pow::pow(b, e));
                }
                if b.numer().bits().max(b.denom().bits()).checked_mul(e)? > cap_bits {
                    return None;
                }
                num_traits::pow::Pow::pow(b, e)
            }
            TowerBound::ScaledHalf(x) => x.materialize(cap_bits)? / BigRational::from_integer(2.into()),
            TowerBound::BitLength(x) => {
                let v = x.materialize(cap_bits)?;
                let floor = v.floor().to_integer();
                let bits = if floor <= BigInt::zero() { 1 } else { floor.bits() };
                BigRational::from_integer(bits.into())
            }
        };
        fits(&out).then_some(out)
    }

    pub(crate) fn lognum(&self) -> LogNum {
        match self {
            TowerBound::Exact(v) => LogNum::from_biguint(v),
            TowerBound::Tower { height, top } => {
                let mut v = top.lognum();
                for _ in 0..*height {
                    v = v.exp2();
                }
                v
            }
            TowerBound::Sum(terms) => {
                terms.iter().map(TowerBound::lognum).reduce(LogNum::add).unwrap_or(LogNum::exact(0.0))
            }
            TowerBound::Product(factors) => factors
                .iter()
                .map(TowerBound::lognum)
                .reduce(LogNum::mul)
                .unwrap_or(LogNum::exact(1.0)),
            TowerBound::Power { base, exponent } => base.lognum().pow(exponent.lognum()),
            TowerBound::ScaledHalf(x) => x.lognum().half(),
            TowerBound::BitLength(x) => x.lognum().bits(),
        }
    }

    /// Total order on the represented values.
    pub fn compare(&self, other: &TowerBound) -> Ordering {
        compare(self, other)
    }

    /// `log2 log2 a` for `a = 2^2^E` with exact `E`.
    pub fn digits_log2log2(&self) -> Option<BigUint> {
        digits_log2log2(self)
    }

    fn is_positive(&self) -> bool {
        match self {
            TowerBound::Exact(v) => !v.is_zero(),
            TowerBound::Tower { .. } | TowerBound::BitLength(_) => true,
            TowerBound::Sum(t) => t.iter().any(TowerBound::is_positive),
            TowerBound::Product(f) => f.iter().all(TowerBound::is_positive),
            TowerBound::Power { base, .. } => base.is_positive(),
            TowerBound::ScaledHalf(x) => x.is_positive(),
        }
    }

    fn needs_parens(&self) -> bool {
        !matches!(self, TowerBound::Exact(_) | TowerBound::BitLength(_))
    }
}

/// `log2 log2 a` when `a` is a height-2 tower with an exact top.
pub fn digits_log2log2(a: &TowerBound) -> Option<BigUint> {
    match a {
        TowerBound::Tower { height: 2, top } => top.as_exact().cloned(),
        _ => None,
    }
}

/// Compares the values of two bounds.
///
/// Small values are compared exactly; otherwise by interval enclosures of
/// iterated logarithms, then by structure, and as a last resort by the
/// enclosure midpoints and the printed form.
pub fn compare(a: &TowerBound, b: &TowerBound) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    if let (Some(x), Some(y)) = (a.materialize(1 << 16), b.materialize(1 << 16)) {
        return x.cmp(&y);
    }
    let (la, lb) = (a.lognum(), b.lognum());
    if let Some(ord) = la.compare(lb) {
        return ord;
    }
    if let Some(ord) = structural(a, b) {
        return ord;
    }
    if let (Some(x), Some(y)) = (a.materialize(EXACT_BITS_CAP), b.materialize(EXACT_BITS_CAP)) {
        return x.cmp(&y);
    }
    log::debug!("tower comparison fell back to enclosure midpoints: {a} vs {b}");
    let level = la.level.max(lb.level);
    la.midpoint_at(level)
        .partial_cmp(&lb.midpoint_at(level))
        .filter(|o| o.is_ne())
        .unwrap_or_else(|| a.to_string().cmp(&b.to_string()))
}

fn structural(a: &TowerBound, b: &TowerBound) -> Option<Ordering> {
    use TowerBound::*;
    match (a, b) {
        (ScaledHalf(x), ScaledHalf(y)) => return Some(compare(x, y)),
        (Tower { height: h1, top: t1 }, Tower { height: h2, top: t2 }) if h1 == h2 => {
            return Some(compare(t1, t2))
        }
        _ => {}
    }
    let dominates = |s: &[TowerBound], y: &TowerBound| {
        s.iter().enumerate().any(|(i, t)| {
            compare(t, y).is_ge() && s.iter().enumerate().any(|(j, o)| j != i && o.is_positive())
        })
    };
    match (a, b) {
        (Sum(s), y) if dominates(s, y) => Some(Ordering::Greater),
        (x, Sum(s)) if dominates(s, x) => Some(Ordering::Less),
        _ => None,
    }
}

/// Exact integers longer than this many digits are abbreviated by `{:#}`.
const ABBREVIATE_DIGITS: usize = 40;

/// `{}` prints every digit; `{:#}` abbreviates long exact integers as
/// `leading…(N digits)`.
impl fmt::Display for TowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alt = f.alternate();
        let show = |t: &TowerBound, f: &mut fmt::Formatter<'_>| if alt { write!(f, "{t:#}") } else { write!(f, "{t}") };
        let wrap = |t: &TowerBound, f: &mut fmt::Formatter<'_>| {
            if t.needs_parens() {
                f.write_str("(")?;
                show(t, f)?;
                f.write_str(")")
            } else {
                show(t, f)
            }
        };
        match self {
            TowerBound::Exact(v) => {
                let digits = v.to_str_radix(10);
                if alt && digits.len() > ABBREVIATE_DIGITS {
                    write!(f, "{}…({} digits)", &digits[..12], digits.len())
                } else {
                    f.write_str(&digits)
                }
            }
            TowerBound::Tower { height, top } => {
                for _ in 0..*height {
                    f.write_str("2^")?;
                }
                wrap(top, f)
            }
            TowerBound::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    if matches!(t, TowerBound::Sum(_)) {
                        f.write_str("(")?;
                        show(t, f)?;
                        f.write_str(")")?;
                    } else {
                        show(t, f)?;
                    }
                }
                Ok(())
            }
            TowerBound::Product(factors) => {
                for (i, t) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    wrap(t, f)?;
                }
                Ok(())
            }
            TowerBound::Power { base, exponent } => {
                wrap(base, f)?;
                f.write_str("^")?;
                wrap(exponent, f)
            }
            TowerBound::ScaledHalf(x) => {
                wrap(x, f)?;
                f.write_str("/2")
            }
            TowerBound::BitLength(x) => {
                f.write_str("bit(")?;
                show(x, f)?;
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: u64) -> TowerBound {
        TowerBound::from(v)
    }

    #[test]
    fn exact_comparisons() {
        assert_eq!(compare(&e(6), &e(54)), Ordering::Less);
        assert_eq!(compare(&e(54), &e(54)), Ordering::Equal);
        let half = TowerBound::half(e(7));
        assert_eq!(compare(&half, &e(3)), Ordering::Greater);
        assert_eq!(compare(&half, &e(4)), Ordering::Less);
    }

    #[test]
    fn towers_beat_capped_exacts() {
        let big = TowerBound::Exact((BigUint::one() << EXACT_BITS_CAP) - 1u32);
        let t = TowerBound::tower(2, e(100));
        assert_eq!(compare(&t, &big), Ordering::Greater);
        assert_eq!(compare(&big, &t), Ordering::Less);
    }

    #[test]
    fn towers_with_close_tops() {
        let a = TowerBound::tower(2, e(1 << 40));
        let b = TowerBound::tower(2, e((1 << 40) + 1));
        assert_eq!(compare(&a, &b), Ordering::Less);
        let ha = TowerBound::half(a.clone());
        assert_eq!(compare(&ha, &a), Ordering::Less);
        let s = TowerBound::add(ha.clone(), e(54));
        assert_eq!(compare(&s, &ha), Ordering::Greater);
        assert_eq!(compare(&ha, &s), Ordering::Less);
    }

    #[test]
    fn folding_constructors() {
        assert_eq!(TowerBound::add(e(2), e(3)), e(5));
        assert_eq!(TowerBound::mul(e(2), e(3)), e(6));
        assert_eq!(TowerBound::pow(e(3), e(4)), e(81));
        assert_eq!(TowerBound::exp2(e(10)), e(1024));
        let t = TowerBound::exp2(e(1 << 40));
        assert_eq!(t, TowerBound::tower(1, e(1 << 40)));
        assert_eq!(TowerBound::exp2(t), TowerBound::tower(2, e(1 << 40)));
        assert_eq!(TowerBound::bit_length(e(4)), e(3));
        assert!(matches!(TowerBound::pow(e(3), e(1 << 40)), TowerBound::Power { .. }));
    }

    #[test]
    fn materialize_small_structures() {
        let x = TowerBound::half(TowerBound::add(TowerBound::tower(2, e(2)), e(3)));
        assert_eq!(x.materialize(64).unwrap(), BigRational::new(19.into(), 2.into()));
        assert!(TowerBound::tower(2, e(100)).materialize(1 << 20).is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(TowerBound::tower(2, e(4295032832)).to_string(), "2^2^4295032832");
        let s = TowerBound::add(TowerBound::half(TowerBound::tower(2, e(9))), e(54));
        assert_eq!(s.to_string(), "(2^2^9)/2 + 54");
        assert_eq!(
            TowerBound::tower(1, TowerBound::pow(TowerBound::tower(1, e(1 << 40)), e(64))).to_string(),
            "2^((2^1099511627776)^64)"
        );
    }

    #[test]
    fn digits() {
        assert_eq!(digits_log2log2(&TowerBound::tower(2, e(17))), Some(BigUint::from(17u32)));
        assert_eq!(digits_log2log2(&e(17)), None);
    }

    #[test]
    fn serializes_tagged() {
        let j = serde_json::to_string(&TowerBound::tower(2, e(5))).unwrap();
        assert_eq!(j, r#"{"kind":"tower","value":{"height":2,"top":{"kind":"exact","value":"5"}}}"#);
    }

    #[test]
    fn alternate_display_abbreviates() {
        let big = TowerBound::Exact(BigUint::from(10u32).pow(50));
        let t = TowerBound::tower(2, TowerBound::add(TowerBound::tower(1, e(1 << 21)), big.clone()));
        assert_eq!(format!("{t:#}"), "2^2^(2^2097152 + 100000000000…(51 digits))");
        assert_eq!(format!("{:#}", e(728)), "728");
        assert!(t.to_string().contains(&big.to_string()));
    }
}
