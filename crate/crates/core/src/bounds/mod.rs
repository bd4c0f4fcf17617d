//! Degree bounds for the Fritz John / KKT representation theorems.
//!
//! `c(n,d,s) = d(2d-1)^{n+s-1}` is always a modest integer. `b(n,d,s)` is a
//! height-two tower `2^2^E` with
//! `E = 2^{D^{4^n}} + s^{2^n} D^{16^n bit(d)}` and `D = max(2, d)`; `E` is kept
//! exact while it has at most [`EXACT_BITS_CAP`] bits and as a structured
//! [`TowerBound`] beyond that.

mod lognum;
mod tower;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use tower::{compare, digits_log2log2, TowerBound, EXACT_BITS_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("unknown bound variant `{0}` (expected one of fj, fj-sos, fj+, fj+-sos, fj-deno, kkt, kkt+)")]
    UnknownVariant(String),
    #[error("{name} must be at least {min}, got {value}")]
    OutOfRange { name: &'static str, min: u64, value: u64 },
}

/// `bit(d)`: 1 for `d = 0`, otherwise the `k` with `2^{k-1} ≤ d < 2^k`.
pub fn bit(d: u64) -> u64 {
    if d == 0 {
        1
    } else {
        u64::from(u64::BITS - d.leading_zeros())
    }
}

pub(crate) fn bit_big(d: &BigUint) -> u64 {
    d.bits().max(1)
}

/// `c(n,d,s) = d(2d-1)^{n+s-1}`.
pub fn bound_c(n: u64, d: u64, s: u64) -> Result<BigUint, BoundError> {
    at_least("n", n, 1)?;
    at_least("d", d, 1)?;
    at_least("s", s, 1)?;
    let e = u32::try_from(n + s - 1).expect("exponent fits u32");
    Ok(BigUint::from(d) * BigUint::from(2 * d - 1).pow(e))
}

fn at_least(name: &'static str, value: u64, min: u64) -> Result<(), BoundError> {
    if value < min {
        Err(BoundError::OutOfRange { name, min, value })
    } else {
        Ok(())
    }
}

/// `b(n,d,s)` as `Tower(2, E)`.
pub fn bound_b(n: u64, d: u64, s: u64) -> Result<TowerBound, BoundError> {
    bound_b_general(n, &TowerBound::from(d), s)
}

/// The exponent `E` of `b(n,d,s) = 2^2^E`.
pub fn bound_b_exponent(n: u64, d: &TowerBound, s: u64) -> Result<TowerBound, BoundError> {
    at_least("n", n, 1)?;
    at_least("s", s, 1)?;
    let big = |v: BigUint| TowerBound::from(v);
    let two = BigUint::from(2u32);
    let n32 = u32::try_from(n).expect("n fits u32");
    let dd = match d.as_exact() {
        Some(v) if v < &two => TowerBound::from(two.clone()),
        _ => d.clone(),
    };
    let x = TowerBound::exp2(TowerBound::pow(dd.clone(), big(BigUint::from(4u32).pow(n32))));
    let bit_d = TowerBound::bit_length(d.clone());
    let y = TowerBound::mul(
        TowerBound::pow(TowerBound::from(s), big(two.pow(n32))),
        TowerBound::pow(dd, TowerBound::mul(big(BigUint::from(16u32).pow(n32)), bit_d)),
    );
    Ok(TowerBound::add(x, y))
}

/// `b(n,d,s)` with a possibly symbolic `d`.
pub fn bound_b_general(n: u64, d: &TowerBound, s: u64) -> Result<TowerBound, BoundError> {
    Ok(TowerBound::tower(2, bound_b_exponent(n, d, s)?))
}

/// Which representation theorem a bound instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// Preordering certificate modulo `h_FJ`.
    Fj,
    /// SOS certificate on `S(g)` modulo `h_FJ`.
    FjSos,
    /// Preordering certificate modulo `h_FJ⁺`.
    #[serde(rename = "fj+")]
    FjPlus,
    /// SOS certificate on `S(g)` modulo `h_FJ⁺`.
    #[serde(rename = "fj+-sos")]
    FjPlusSos,
    /// Preordering certificate with the denominator `λ₀`.
    FjDeno,
    Kkt,
    #[serde(rename = "kkt+")]
    KktPlus,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 7] = [
        BoundVariant::Fj,
        BoundVariant::FjSos,
        BoundVariant::FjPlus,
        BoundVariant::FjPlusSos,
        BoundVariant::FjDeno,
        BoundVariant::Kkt,
        BoundVariant::KktPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::Fj => "fj",
            BoundVariant::FjSos => "fj-sos",
            BoundVariant::FjPlus => "fj+",
            BoundVariant::FjPlusSos => "fj+-sos",
            BoundVariant::FjDeno => "fj-deno",
            BoundVariant::Kkt => "kkt",
            BoundVariant::KktPlus => "kkt+",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BoundVariant {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, BoundError> {
        let squash = |t: &str| t.to_ascii_lowercase().replace(['-', '_'], "").replace("plus", "+");
        let key = squash(s);
        BoundVariant::ALL
            .into_iter()
            .find(|v| squash(v.name()) == key)
            .ok_or_else(|| BoundError::UnknownVariant(s.to_string()))
    }
}

/// The two parts of a `w` formula: an optional `½·b(…)` term plus an exact
/// multiple of `c`.
struct WParts {
    b_part: Option<TowerBound>,
    c_part: BigUint,
}

fn w_parts(variant: BoundVariant, n: u64, m: u64, d: u64) -> Result<WParts, BoundError> {
    at_least("n", n, 1)?;
    at_least("d", d, 1)?;
    let big_n = n + m + 1;
    let half_b = |nn, dd, s| bound_b(nn, dd, s).map(TowerBound::half);
    let parts = match variant {
        BoundVariant::Fj => WParts {
            b_part: Some(half_b(big_n, d + 1, 2 * m + n + 3)?),
            c_part: BigUint::from(d) * bound_c(big_n, d + 1, big_n)?,
        },
        BoundVariant::FjSos => WParts {
            b_part: None,
            c_part: BigUint::from(d) * (bound_c(big_n, d + 1, n + 2 * m + 1)? - 1u32),
        },
        BoundVariant::FjPlus => WParts {
            b_part: Some(half_b(big_n, d + 2, 2 * m + n + 3)?),
            c_part: BigUint::from(d) * bound_c(big_n, d + 2, big_n)?,
        },
        BoundVariant::FjPlusSos => WParts {
            b_part: None,
            c_part: BigUint::from(d) * (bound_c(big_n, d + 2, n + 2 * m + 1)? - 1u32),
        },
        BoundVariant::FjDeno => WParts {
            b_part: Some(half_b(big_n, d + 1, 2 * m + n + 3)?),
            c_part: BigUint::from(2 * d) * bound_c(big_n, d + 1, big_n)?,
        },
        BoundVariant::Kkt => WParts {
            b_part: Some(half_b(n + m, d + 1, 2 * m + n + 1)?),
            c_part: BigUint::from(d) * bound_c(n + m, d + 1, n + m)?,
        },
        BoundVariant::KktPlus => WParts {
            b_part: Some(half_b(n + m, d + 1, 2 * m + n + 1)?),
            c_part: BigUint::from(d) * bound_c(n + m, d + 2, n + m)?,
        },
    };
    Ok(parts)
}

/// The degree bound `w` of the representation theorem for `variant`.
pub fn theorem_w(variant: BoundVariant, n: u64, m: u64, d: u64) -> Result<TowerBound, BoundError> {
    let WParts { b_part, c_part } = w_parts(variant, n, m, d)?;
    Ok(match b_part {
        Some(b) => TowerBound::add(b, TowerBound::from(c_part)),
        None => TowerBound::from(c_part),
    })
}

/// The relaxation order `r` guaranteeing `ρ_r = f*` for `variant` and `w`.
pub fn relaxation_order(
    variant: BoundVariant,
    n: u64,
    m: u64,
    w: &TowerBound,
) -> Result<TowerBound, BoundError> {
    at_least("n", n, 1)?;
    let two = TowerBound::from(2);
    let twice = |x: TowerBound| TowerBound::mul(two.clone(), x);
    let b = match variant {
        BoundVariant::Fj | BoundVariant::FjSos | BoundVariant::FjPlus | BoundVariant::FjPlusSos => {
            bound_b_general(n + m + 1, &twice(w.clone()), m + n + 2)?
        }
        BoundVariant::FjDeno => bound_b_general(
            n + m + 1,
            &twice(TowerBound::add(w.clone(), TowerBound::from(1))),
            m + n + 2,
        )?,
        BoundVariant::Kkt => bound_b_general(n + m, &twice(w.clone()), m + n + 1)?,
        BoundVariant::KktPlus => bound_b_general(n + m + 1, &twice(w.clone()), m + n + 2)?,
    };
    Ok(TowerBound::half(b))
}

/// Bounds of one theorem for given problem dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub variant: BoundVariant,
    pub n: u64,
    pub m: u64,
    pub d: u64,
    /// The `½·b(…)` term of `w`, absent for the pure `c` variants.
    pub b_part: Option<TowerBound>,
    /// The exact `c` term of `w`.
    #[serde(serialize_with = "decimal")]
    pub c_part: BigUint,
    pub w: TowerBound,
    pub r: TowerBound,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl BoundReport {
    pub fn new(variant: BoundVariant, n: u64, m: u64, d: u64) -> Result<Self, BoundError> {
        let WParts { b_part, c_part } = w_parts(variant, n, m, d)?;
        let w = match &b_part {
            Some(b) => TowerBound::add(b.clone(), TowerBound::from(c_part.clone())),
            None => TowerBound::from(c_part.clone()),
        };
        let r = relaxation_order(variant, n, m, &w)?;
        Ok(Self { variant, n, m, d, b_part, c_part, w, r })
    }

    /// `E` when the `b` term is `½·2^2^E`.
    pub fn b_exponent(&self) -> Option<&TowerBound> {
        match self.b_part.as_ref()? {
            TowerBound::ScaledHalf(inner) => match inner.as_ref() {
                TowerBound::Tower { height: 2, top } => Some(top),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variant: {}", self.variant)?;
        writeln!(f, "inputs: n={} m={} d={}", self.n, self.m, self.d)?;
        writeln!(f, "c-part: {}", self.c_part)?;
        match self.b_exponent() {
            Some(e) => writeln!(f, "b-part: 2^2^E / 2 with E = {e:#}")?,
            None => writeln!(f, "b-part: none")?,
        }
        match self.w.as_exact() {
            Some(v) => writeln!(f, "w = {v}")?,
            None => writeln!(f, "w = {:#}", self.w)?,
        }
        write!(f, "r = {:#}", self.r)
    }
}
