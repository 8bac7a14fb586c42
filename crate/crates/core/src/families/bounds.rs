//! Short-vector constants and the rank bound chain for universal lattices.

use serde::Serialize;

use crate::arith::{binomial, Z};
use crate::cfrac::max_partial_quotient;
use crate::error::Result;
use crate::units::signature_rank;

/// The dimension-12 value `C(12) = 264` attained by `Z^12` and `E8 + D4`.
pub const C12_OVERRIDE: u64 = 264;

/// Upper bound `C(R, m)` on the number of vectors of norm `m` in a classical rank-`R`
/// lattice. With `override_c12`, rank at most 12 and `m = 2` use 264 (pad with `Z^(12-R)`).
pub fn c_bound(r: u64, m: u64, override_c12: bool) -> Z {
    if m == 2 {
        if override_c12 && r <= 12 {
            return Z::from(C12_OVERRIDE);
        }
        Z::from(480u64.max(2 * r * r.saturating_sub(1)))
    } else {
        binomial(r + 2 * m - 2, 2 * m - 1) * 2
    }
}

/// Whether a universal lattice of rank `R` is compatible with `u + 1` norm-2 (or norm-4)
/// vector pairs: `u + 1 <= C(4R, m)/2`.
pub fn rank_admissible(r: u64, u: u64, classical: bool, override_c12: bool) -> bool {
    let m = if classical { 2 } else { 4 };
    Z::from(u + 1) * 2 <= c_bound(4 * r, m, override_c12)
}

/// Least `R >= 1` with `rank_admissible(R, u)`; every universal lattice has rank at least this.
pub fn rank_lower_bound(u: u64, classical: bool, override_c12: bool) -> u64 {
    (1..).find(|&r| rank_admissible(r, u, classical, override_c12)).unwrap()
}

/// `R = 3` (ternary) chain: `u <= C(12)/2 - 1`, `floor(-wbar) <= u/2`, `sqrt D < 2 floor + 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KitaokaChain {
    pub c12: u64,
    pub max_u: u64,
    pub max_floor: u64,
    pub sqrt_d_bound: u64,
}

pub fn kitaoka_chain(override_c12: bool) -> KitaokaChain {
    let c12: u64 = c_bound(12, 2, override_c12).try_into().unwrap();
    let max_u = c12 / 2 - 1;
    let max_floor = max_u / 2;
    KitaokaChain { c12, max_u, max_floor, sqrt_d_bound: 2 * max_floor + 3 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UsrBound {
    NotApplicable { signature_rank: usize },
    Bound {
        signature_rank: usize,
        d3: i64,
        u: i64,
        /// `u > sqrt(D3) - 3`.
        u_exceeds_sqrt: bool,
        r_cls_min: u64,
        r_min: u64,
    },
}

/// Rank lower bounds for a biquadratic field from the largest quadratic subfield.
pub fn usr_lower_bound(d1: i64, d2: i64, override_c12: bool) -> Result<UsrBound> {
    let (sgnrk, _) = signature_rank(d1, d2)?;
    if sgnrk < 3 {
        return Ok(UsrBound::NotApplicable { signature_rank: sgnrk });
    }
    let g = num_integer::gcd(d1, d2);
    let d3 = (d1 / g) * (d2 / g);
    let d = d1.max(d2).max(d3);
    let u = max_partial_quotient(d)?;
    let uz = u as u64;
    Ok(UsrBound::Bound {
        signature_rank: sgnrk,
        d3: d,
        u,
        u_exceeds_sqrt: ((u + 3) * (u + 3)) > d,
        r_cls_min: rank_lower_bound(uz, true, override_c12),
        r_min: rank_lower_bound(uz, false, override_c12),
    })
}
