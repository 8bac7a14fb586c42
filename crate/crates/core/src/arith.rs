//! Integer and rational helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Z = BigInt;
pub type Q = BigRational;

pub fn z(v: i64) -> Z {
    Z::from(v)
}

pub fn q(v: i64) -> Q {
    Q::from_integer(Z::from(v))
}

pub fn qz(v: Z) -> Q {
    Q::from_integer(v)
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &Z) -> Z {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

pub fn is_square(n: &Z) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    &r * &r == *n
}

/// Squarefree testing strategy. Family radicands grow exponentially, so callers
/// may supply known factorizations instead of relying on trial division.
pub trait SquarefreeTester: Sync {
    /// `Some(true/false)` when decided, `None` when the tester gives up.
    fn is_squarefree(&self, n: &Z) -> Option<bool>;
}

/// Trial division up to a limit on the smallest prime factor examined.
#[derive(Clone, Debug)]
pub struct TrialDivision {
    pub limit: u64,
}

impl Default for TrialDivision {
    fn default() -> Self {
        TrialDivision { limit: 100_000_000 }
    }
}

impl SquarefreeTester for TrialDivision {
    fn is_squarefree(&self, n: &Z) -> Option<bool> {
        let mut m = n.abs();
        if m.is_zero() {
            return Some(false);
        }
        let mut p: u64 = 2;
        loop {
            let pz = Z::from(p);
            if &pz * &pz > m {
                return Some(true);
            }
            if p > self.limit {
                return None;
            }
            if (&m % &pz).is_zero() {
                m /= &pz;
                if (&m % &pz).is_zero() {
                    return Some(false);
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
    }
}

/// Accepts a caller-supplied factorization `n = prod p_i^{e_i}`.
#[derive(Clone, Debug)]
pub struct KnownFactorization {
    pub n: Z,
    pub factors: Vec<(Z, u32)>,
}

impl SquarefreeTester for KnownFactorization {
    fn is_squarefree(&self, n: &Z) -> Option<bool> {
        if n.abs() != self.n.abs() {
            return None;
        }
        let prod = self
            .factors
            .iter()
            .fold(Z::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
        if prod != self.n.abs() {
            return None;
        }
        Some(self.factors.iter().all(|(_, e)| *e <= 1))
    }
}

pub fn is_squarefree(n: &Z) -> bool {
    TrialDivision::default().is_squarefree(n).unwrap_or(false)
}

pub fn is_squarefree_i64(n: i64) -> bool {
    is_squarefree(&Z::from(n))
}

/// Squarefree part of a nonzero integer (sign kept).
pub fn squarefree_part(n: &Z) -> Z {
    assert!(!n.is_zero(), "squarefree part of zero");
    let sign = if n.is_negative() { -Z::one() } else { Z::one() };
    let mut m = n.abs();
    let mut out = Z::one();
    let mut p = Z::from(2u32);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += if p == Z::from(2u32) { Z::one() } else { Z::from(2u32) };
    }
    out * m * sign
}

/// Squarefree part of a nonzero rational `a/b`, i.e. that of `a*b`.
pub fn squarefree_part_q(x: &Q) -> Z {
    squarefree_part(&(x.numer() * x.denom()))
}

/// Positive generator of the additive group generated by the given rationals.
pub fn rational_gcd(xs: &[Q]) -> Q {
    let mut num = Z::zero();
    let mut den = Z::one();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        // gcd(a/b, c/d) = gcd(a d, c b) / (b d), reduced
        let a = &num * x.denom();
        let c = x.numer() * &den;
        let nd = &den * x.denom();
        num = a.gcd(&c);
        den = nd;
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
    }
    Q::new(num, den)
}

pub fn floor_q(x: &Q) -> Z {
    x.floor().to_integer()
}

pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let n: Z = a.trim().parse().map_err(|_| bad())?;
        let d: Z = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else {
        let n: Z = s.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(n))
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // scale down huge parts
    let shift = x.numer().bits().max(x.denom().bits()) as i64 - 900;
    let (n2, d2) = if shift > 0 {
        (x.numer() >> (shift as usize), x.denom() >> (shift as usize))
    } else {
        (x.numer().clone(), x.denom().clone())
    };
    n2.to_f64().unwrap_or(0.0) / d2.to_f64().unwrap_or(1.0)
}

pub fn binomial(n: u64, k: u64) -> Z {
    if k > n {
        return Z::zero();
    }
    let k = k.min(n - k);
    let mut acc = Z::one();
    for i in 0..k {
        acc = acc * Z::from(n - i) / Z::from(i + 1);
    }
    acc
}

/// Serde adapter writing rationals as "p/q" strings.
pub mod qstr {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for vectors of rationals.
pub mod qvec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(q_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&z(12)), z(3));
        assert_eq!(squarefree_part(&z(60)), z(15));
        assert_eq!(squarefree_part(&z(-18)), z(-2));
        assert!(is_squarefree(&z(372099)));
        assert!(!is_squarefree(&z(18)));
    }

    #[test]
    fn rational_gcds() {
        assert_eq!(rational_gcd(&[frac(1, 2), frac(1, 3)]), frac(1, 6));
        assert_eq!(rational_gcd(&[q(4), q(6)]), q(2));
        assert_eq!(rational_gcd(&[q(0), frac(3, 4)]), frac(3, 4));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["5/2", "-1/20", "7", "0"] {
            assert_eq!(q_to_string(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn known_factorization() {
        let t = KnownFactorization { n: z(372099), factors: vec![(z(3), 1), (z(7), 1), (z(29), 1), (z(13), 1), (z(47), 1)] };
        assert_eq!(t.is_squarefree(&z(372099)), Some(true));
    }
}
