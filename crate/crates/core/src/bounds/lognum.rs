//! Interval enclosures of huge positive numbers through iterated logarithms.
//!
//! A [`LogNum`] at level `L` with interval `[lo, hi]` encloses the value
//! `v` with `T_L(lo) ≤ v ≤ T_L(hi)`, where `T_0(t) = t` and
//! `T_{L+1}(t) = 2^{T_L(t)}`. Every float operation is rounded outward.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Level-0 magnitudes are kept below `2^LIFT`.
const LIFT: f64 = 1010.0;
/// Level ≥ 1 enclosures with `hi ≤ LOWER` are brought one level down.
const LOWER: f64 = 1000.0;

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x - x.abs() * 4.0 * f64::EPSILON - f64::MIN_POSITIVE
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x + x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE
    } else {
        x
    }
}

fn log2_down(x: f64) -> f64 {
    if x > 0.0 {
        down(x.log2())
    } else {
        f64::NEG_INFINITY
    }
}

fn log2_up(x: f64) -> f64 {
    if x > 0.0 {
        up(x.log2())
    } else {
        f64::NEG_INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct LogNum {
    pub level: u32,
    pub lo: f64,
    pub hi: f64,
}

impl LogNum {
    pub fn exact(v: f64) -> Self {
        Self { level: 0, lo: v, hi: v }.normalize()
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        let bits = v.bits();
        if bits <= 1000 {
            let f = v.to_f64().unwrap_or(f64::INFINITY);
            if f == 0.0 {
                return Self::exact(0.0);
            }
            return Self { level: 0, lo: down(f), hi: up(f) };
        }
        let shift = bits - 64;
        let top = (v >> shift).to_u64().expect("64 leading bits") as f64;
        let s = shift as f64;
        Self { level: 1, lo: down(s + top.log2()), hi: up(s + (top + 1.0).log2()) }.normalize()
    }

    fn is_zero(&self) -> bool {
        self.level == 0 && self.lo == 0.0 && self.hi == 0.0
    }

    pub fn normalize(mut self) -> Self {
        loop {
            if self.level == 0 && self.hi > LIFT.exp2() {
                self = Self { level: 1, lo: log2_down(self.lo), hi: log2_up(self.hi) };
            } else if self.level >= 1 && self.hi <= LOWER {
                let lo = if self.lo == f64::NEG_INFINITY { 0.0 } else { down(self.lo.exp2()) };
                self = Self { level: self.level - 1, lo: lo.max(0.0), hi: up(self.hi.exp2()) };
            } else {
                return self;
            }
        }
    }

    /// Same enclosure expressed one level higher.
    fn lift(self) -> Self {
        if self.level == 0 {
            Self { level: 1, lo: log2_down(self.lo), hi: log2_up(self.hi) }
        } else {
            Self { level: self.level + 1, lo: log2_down(self.lo), hi: log2_up(self.hi) }
        }
    }

    fn raise_to(mut self, level: u32) -> Self {
        while self.level < level {
            self = self.lift();
        }
        self
    }

    /// Lower bound on the value itself, saturating at infinity.
    fn value_lower(&self) -> f64 {
        let mut v = self.lo;
        for _ in 0..self.level {
            v = down(v.exp2());
            if v.is_infinite() {
                return f64::INFINITY;
            }
        }
        v
    }

    pub fn log2(self) -> Self {
        if self.level >= 1 {
            Self { level: self.level - 1, lo: self.lo, hi: self.hi }.normalize()
        } else {
            Self { level: 0, lo: log2_down(self.lo), hi: log2_up(self.hi) }
        }
    }

    pub fn exp2(self) -> Self {
        if self.level == 0 && self.hi <= LOWER {
            let lo = if self.lo == f64::NEG_INFINITY { 0.0 } else { down(self.lo.exp2()).max(0.0) };
            Self { level: 0, lo, hi: up(self.hi.exp2()) }
        } else if self.level == 0 {
            Self { level: 1, lo: self.lo, hi: self.hi }.normalize()
        } else {
            Self { level: self.level + 1, lo: self.lo, hi: self.hi }
        }
    }

    /// Encloses `v + δ` for `δ ∈ [dlo, dhi]`.
    pub fn shift(self, dlo: f64, dhi: f64) -> Self {
        if self.level == 0 {
            return Self { level: 0, lo: down(self.lo + dlo), hi: up(self.hi + dhi) }.normalize();
        }
        // v = 2^y and v + δ = 2^{y + log2(1 + δ/v)}.
        let vlo = self.value_lower();
        let up_shift = if dhi > 0.0 { up(dhi / (vlo * LN_2)) } else { 0.0 };
        let low_shift = if dlo >= 0.0 {
            0.0
        } else {
            let t = dlo / vlo;
            if t <= -0.5 {
                f64::NEG_INFINITY
            } else {
                down(t / ((1.0 + t) * LN_2))
            }
        };
        let y = Self { level: self.level - 1, lo: self.lo, hi: self.hi };
        if low_shift == f64::NEG_INFINITY {
            let hi = y.shift(0.0, up_shift).exp2();
            return Self { level: hi.level, lo: f64::NEG_INFINITY, hi: hi.hi };
        }
        y.shift(low_shift, up_shift).exp2()
    }

    pub fn add(self, other: Self) -> Self {
        if self.level == 0 && other.level == 0 {
            return Self { level: 0, lo: down(self.lo + other.lo), hi: up(self.hi + other.hi) }
                .normalize();
        }
        let (big, small) = if (self.level, self.hi) >= (other.level, other.hi) {
            (self, other)
        } else {
            (other, self)
        };
        if small.level == 0 {
            return big.shift(small.lo, small.hi);
        }
        let la = big.log2();
        let lb = small.log2();
        if la.level == 0 && lb.level == 0 {
            let lse = |u: f64, v: f64| {
                let (m, d) = if u >= v { (u, v - u) } else { (v, u - v) };
                (m, (1.0 + d.exp2()).log2())
            };
            let (mlo, dlo) = lse(la.lo, lb.lo);
            let (mhi, dhi) = lse(la.hi, lb.hi);
            return Self { level: 0, lo: down(mlo + dlo), hi: up(mhi + dhi) }.exp2();
        }
        // a + b ∈ [max(a, b), 2·max(a, b)].
        let level = big.level.max(small.level);
        let a = big.raise_to(level);
        let b = small.raise_to(level);
        let m = Self { level, lo: a.lo.max(b.lo), hi: a.hi.max(b.hi) };
        m.log2().shift(0.0, 1.0).exp2()
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::exact(0.0);
        }
        if self.level == 0 && other.level == 0 && self.lo >= 0.0 && other.lo >= 0.0 {
            let hi = up(self.hi * other.hi);
            if hi <= LIFT.exp2() {
                return Self { level: 0, lo: down(self.lo * other.lo).max(0.0), hi };
            }
        }
        self.log2().add(other.log2()).exp2()
    }

    pub fn pow(self, exponent: Self) -> Self {
        if exponent.is_zero() {
            return Self::exact(1.0);
        }
        exponent.mul(self.log2()).exp2()
    }

    pub fn half(self) -> Self {
        if self.level == 0 {
            return Self { level: 0, lo: self.lo / 2.0, hi: self.hi / 2.0 };
        }
        self.log2().shift(-1.0, -1.0).exp2()
    }

    /// Encloses `bit(v) = ⌊log2 v⌋ + 1` (and `bit(0) = 1`).
    pub fn bits(self) -> Self {
        let mut r = self.log2().shift(0.0, 1.0);
        if r.level == 0 {
            r.lo = r.lo.max(1.0);
            r.hi = r.hi.max(1.0);
        }
        r
    }

    /// Certain ordering of the enclosed values, if the intervals separate.
    pub fn compare(self, other: Self) -> Option<Ordering> {
        let level = self.level.max(other.level);
        let a = self.raise_to(level);
        let b = other.raise_to(level);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.lo == a.hi && b.lo == b.hi && a.lo == b.lo && level == 0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Midpoint at `level`, for deterministic tie-breaking only.
    pub fn midpoint_at(self, level: u32) -> f64 {
        let a = self.raise_to(level);
        if a.lo.is_finite() {
            0.5 * (a.lo + a.hi)
        } else {
            a.hi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encloses(x: LogNum, v: f64) -> bool {
        let mut lo = x.lo;
        let mut hi = x.hi;
        for _ in 0..x.level {
            lo = lo.exp2();
            hi = hi.exp2();
        }
        lo <= v && v <= hi
    }

    #[test]
    fn small_arithmetic_is_enclosed() {
        let a = LogNum::exact(12.0);
        let b = LogNum::exact(30.0);
        assert!(encloses(a.add(b), 42.0));
        assert!(encloses(a.mul(b), 360.0));
        assert!(encloses(LogNum::exact(3.0).pow(LogNum::exact(4.0)), 81.0));
        assert!(encloses(b.half(), 15.0));
        assert!(encloses(LogNum::exact(4.0).bits(), 3.0));
        assert!(encloses(LogNum::exact(0.0).bits(), 1.0));
    }

    #[test]
    fn big_integers_lift() {
        let v = BigUint::from(1u32) << 5000u32;
        let x = LogNum::from_biguint(&v);
        assert_eq!(x.level, 1);
        assert!(x.lo <= 5000.0 && 5000.0 <= x.hi);
        let y = LogNum::from_biguint(&(v.clone() + 1u32));
        assert_eq!(x.compare(LogNum::exact(1e300)), Some(Ordering::Greater));
        assert_eq!(x.compare(y), None);
    }

    #[test]
    fn towers_compare_by_levels() {
        // 2^2^100 vs 2^2^101 and vs 2^(2^100 + 1e25)
        let t100 = LogNum::exact(100.0).exp2().exp2();
        let t101 = LogNum::exact(101.0).exp2().exp2();
        assert_eq!(t100.compare(t101), Some(Ordering::Less));
        let bumped = LogNum::exact(100.0).exp2().add(LogNum::exact(1e25)).exp2();
        assert_eq!(t100.compare(bumped), Some(Ordering::Less));
        assert_eq!(bumped.compare(t101), Some(Ordering::Less));
    }

    #[test]
    fn sums_of_huge_values() {
        let a = LogNum::exact(2000.0).exp2();
        let b = LogNum::exact(1500.0).exp2();
        let s = a.add(b);
        assert_eq!(s.level, 1);
        assert!(s.lo <= 2000.0 && s.hi < 2000.0 + 1e-9);
        let h = s.half();
        assert!(h.lo <= 1999.0 && 1999.0 <= h.hi + 1e-12);
    }
}
