//! Periodic continued fractions of `-ω̄_D`, convergents, semiconvergents, the codifferent
//! elements attached to them, and the indecomposables of real quadratic fields.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{frac, is_squarefree, isqrt, q, qz, Z};
use crate::error::{Error, Result};
use crate::field::{make_field, Field, FieldDescriptor, FieldElement};

/// `(P + √D) / Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub p: Z,
    pub q: Z,
    pub d: Z,
}

impl QuadraticSurd {
    /// Builds `(P + √D) / Q`, rescaling so that `Q | D - P^2`.
    pub fn new(p: Z, q: Z, d: Z) -> Result<QuadraticSurd> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d <= Z::one() || !is_squarefree(&d) {
            return Err(Error::NonSquarefree(format!("D = {d}")));
        }
        if (&d - &p * &p).is_multiple_of(&q) {
            return Ok(QuadraticSurd { p, q, d });
        }
        // (P + √D)/Q = (P|Q| + √(D Q^2)) / (Q|Q|) would change D; keep D and report.
        Err(Error::InvalidDescriptor(format!("{q} does not divide {d} - {p}^2")))
    }

    pub fn floor(&self) -> Z {
        let s = isqrt(&self.d);
        if self.q.is_positive() {
            (&self.p + &s).div_floor(&self.q)
        } else {
            // √D is irrational, so -P - √D lies strictly between -P-s-1 and -P-s
            (-&self.p - &s - 1i64).div_floor(&(-&self.q))
        }
    }

    /// One step: returns the partial quotient and `1 / (x - a)`.
    pub fn step(&self) -> (Z, QuadraticSurd) {
        let a = self.floor();
        let p = &a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        (a, QuadraticSurd { p, q, d: self.d.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFractionExpansion {
    pub d: i64,
    pub u0: i64,
    pub period: Vec<i64>,
}

impl ContinuedFractionExpansion {
    pub fn s(&self) -> usize {
        self.period.len()
    }

    /// `u_i` for any `i >= 0`.
    pub fn u(&self, i: i64) -> i64 {
        assert!(i >= 0);
        if i == 0 {
            self.u0
        } else {
            self.period[((i - 1) as usize) % self.s()]
        }
    }

    pub fn max_partial_quotient(&self) -> i64 {
        *self.period.iter().max().unwrap()
    }
}

impl fmt::Display for ContinuedFractionExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.period.iter().map(|u| u.to_string()).collect();
        write!(f, "[{}; {}]", self.u0, p.join(","))
    }
}

fn check_d(d: i64) -> Result<()> {
    if d <= 1 || !is_squarefree(&Z::from(d)) {
        return Err(Error::NonSquarefree(format!("D = {d}")));
    }
    Ok(())
}

/// Expansion of `-ω̄_D` with its minimal period.
pub fn expand(d: i64) -> Result<ContinuedFractionExpansion> {
    check_d(d)?;
    let dz = Z::from(d);
    let start = if d % 4 == 1 {
        QuadraticSurd { p: Z::from(-1), q: Z::from(2), d: dz }
    } else {
        QuadraticSurd { p: Z::zero(), q: Z::one(), d: dz }
    };
    let (u0, mut x) = start.step();
    let mut seen: HashMap<QuadraticSurd, usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&k) = seen.get(&x) {
            let period = quotients[k..].to_vec();
            return Ok(ContinuedFractionExpansion { d, u0: u0.to_i64().unwrap(), period });
        }
        seen.insert(x.clone(), quotients.len());
        let (a, nx) = x.step();
        quotients.push(a.to_i64().expect("partial quotient fits in i64"));
        x = nx;
    }
}

pub fn max_partial_quotient(d: i64) -> Result<i64> {
    Ok(expand(d)?.max_partial_quotient())
}

#[derive(Clone, Debug)]
pub struct Convergent {
    pub i: i64,
    pub s: Z,
    pub t: Z,
    pub beta: FieldElement,
}

/// A real quadratic field together with the expansion of `-ω̄_D`.
#[derive(Clone, Debug)]
pub struct QuadraticCf {
    pub field: Field,
    pub cf: ContinuedFractionExpansion,
}

impl QuadraticCf {
    pub fn new(d: i64) -> Result<QuadraticCf> {
        let cf = expand(d)?;
        let field = make_field(FieldDescriptor::Quadratic { d })?;
        Ok(QuadraticCf { field, cf })
    }

    pub fn d(&self) -> i64 {
        self.cf.d
    }

    fn one_mod_four(&self) -> bool {
        self.cf.d % 4 == 1
    }

    pub fn omega(&self) -> FieldElement {
        if self.one_mod_four() {
            self.field.element(vec![frac(1, 2), frac(1, 2)])
        } else {
            self.field.element_i64(&[0, 1])
        }
    }

    pub fn omega_bar(&self) -> FieldElement {
        self.omega().conjugate().unwrap()
    }

    fn st(&self, i: i64) -> (Z, Z) {
        assert!(i >= -2);
        let (mut s0, mut t0, mut s1, mut t1) = (Z::zero(), Z::one(), Z::one(), Z::zero());
        for k in 0..=i {
            let u = Z::from(self.cf.u(k));
            let s2 = &u * &s1 + &s0;
            let t2 = &u * &t1 + &t0;
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if i == -2 {
            (s0, t0)
        } else {
            (s1, t1)
        }
    }

    fn element_st(&self, s: &Z, t: &Z) -> FieldElement {
        &self.field.rational(qz(s.clone())) + &self.omega().scale(&qz(t.clone()))
    }

    pub fn convergent(&self, i: i64) -> Convergent {
        let (s, t) = self.st(i);
        let beta = self.element_st(&s, &t);
        Convergent { i, s, t, beta }
    }

    /// Convergents `β_{-1}, …, β_{last}`.
    pub fn convergents(&self, last: i64) -> Vec<Convergent> {
        let mut out = Vec::new();
        let (mut s0, mut t0, mut s1, mut t1) = (Z::zero(), Z::one(), Z::one(), Z::zero());
        out.push(Convergent { i: -1, s: s1.clone(), t: t1.clone(), beta: self.element_st(&s1, &t1) });
        for k in 0..=last {
            let u = Z::from(self.cf.u(k));
            let s2 = &u * &s1 + &s0;
            let t2 = &u * &t1 + &t0;
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
            out.push(Convergent { i: k, s: s1.clone(), t: t1.clone(), beta: self.element_st(&s1, &t1) });
        }
        out
    }

    /// `β_{i,l} = β_i + l β_{i+1}` for `0 <= l <= u_{i+2}`.
    pub fn semiconvergent(&self, i: i64, l: i64) -> Result<FieldElement> {
        if i < -1 || l < 0 || l > self.cf.u(i + 2) {
            return Err(Error::IndexOutOfRange(format!("beta_({i},{l})")));
        }
        let (s, t) = self.st(i);
        let (s1, t1) = self.st(i + 1);
        Ok(self.element_st(&(s + l * s1), &(t + l * t1)))
    }

    /// `δ_i`, normalized so that `Tr(δ_{i+1} β_{i,l}) = 1` and `sgn δ_{i+1} = sgn β_{i,l}`.
    pub fn delta(&self, i: i64) -> FieldElement {
        let (s, t) = self.st(i);
        let num = self.element_st(&s, &Z::zero()) + self.omega_bar().scale(&qz(t));
        let sign = if (i + 1) % 2 == 0 { q(1) } else { q(-1) };
        num.scale(&sign).div(&self.denominator()).unwrap()
    }

    /// The displayed formula `(-1)^i (t_i ω̄ - s_i) / (2√D)` (resp. `/√D`), taken literally.
    pub fn delta_literal(&self, i: i64) -> FieldElement {
        let (s, t) = self.st(i);
        let num = self.omega_bar().scale(&qz(t)) - self.field.rational(qz(s));
        let sign = if i.rem_euclid(2) == 0 { q(1) } else { q(-1) };
        num.scale(&sign).div(&self.denominator()).unwrap()
    }

    fn denominator(&self) -> FieldElement {
        let k = if self.one_mod_four() { 1 } else { 2 };
        self.field.element_i64(&[0, k])
    }

    /// `ε = β_{s-1}` with its norm.
    pub fn fundamental_unit(&self) -> (FieldElement, i64) {
        let e = self.convergent(self.cf.s() as i64 - 1).beta;
        let n = e.norm().to_integer().to_i64().unwrap();
        (e, n)
    }

    /// Generator of the totally positive units: `ε` if it is totally positive, else `ε^2`.
    pub fn totally_positive_unit(&self) -> FieldElement {
        let (e, n) = self.fundamental_unit();
        if n == 1 && e.is_totally_positive() {
            e
        } else {
            &e * &e
        }
    }

    /// Period of the expansion made even: the index shift realised by the totally
    /// positive unit generator.
    pub fn even_period(&self) -> i64 {
        let s = self.cf.s() as i64;
        if s % 2 == 0 {
            s
        } else {
            2 * s
        }
    }

    /// Upper semiconvergents `β_{i,l}`, `i` odd in `-1 ..= s⁺ - 3`, `0 <= l < u_{i+2}`:
    /// one representative per orbit of totally positive units.
    pub fn indecomposables(&self) -> Vec<FieldElement> {
        let sp = self.even_period();
        let mut out = Vec::new();
        let mut i = -1;
        while i <= sp - 3 {
            for l in 0..self.cf.u(i + 2) {
                out.push(self.semiconvergent(i, l).unwrap());
            }
            i += 2;
        }
        out
    }
}

pub fn fundamental_unit(d: i64) -> Result<(FieldElement, i64)> {
    Ok(QuadraticCf::new(d)?.fundamental_unit())
}

pub fn quadratic_indecomposables(d: i64) -> Result<Vec<FieldElement>> {
    Ok(QuadraticCf::new(d)?.indecomposables())
}

pub fn delta(d: i64, i: i64) -> Result<FieldElement> {
    Ok(QuadraticCf::new(d)?.delta(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions() {
        assert_eq!(expand(5).unwrap().to_string(), "[0; 1]");
        assert_eq!(expand(3).unwrap().to_string(), "[1; 1,2]");
        assert_eq!(expand(19).unwrap().to_string(), "[4; 2,1,3,1,2,8]");
        assert_eq!(expand(2).unwrap().to_string(), "[1; 2]");
        assert!(expand(4).is_err());
    }

    #[test]
    fn negative_q_floor() {
        let x = QuadraticSurd::new(Z::from(1), Z::from(-2), Z::from(5)).unwrap();
        // (1 + 2.236)/(-2) = -1.618
        assert_eq!(x.floor(), Z::from(-2));
    }

    #[test]
    fn units() {
        let (e, n) = fundamental_unit(5).unwrap();
        assert_eq!(e.coords(), &[frac(1, 2), frac(1, 2)]);
        assert_eq!(n, -1);
        let (e, n) = fundamental_unit(15).unwrap();
        assert_eq!(e.coords(), &[q(4), q(1)]);
        assert_eq!(n, 1);
    }

    #[test]
    fn small_convergents() {
        let c = QuadraticCf::new(3).unwrap();
        let v = c.convergents(1);
        let want = [[1, 0], [1, 1], [2, 1]];
        for (cv, w) in v.iter().zip(want) {
            assert_eq!(cv.beta, c.field.element_i64(&w));
        }
        assert_eq!(c.semiconvergent(-1, 1).unwrap(), c.field.element_i64(&[2, 1]));
    }

    #[test]
    fn delta_properties() {
        for d in [2i64, 3, 5, 6, 7, 13, 19, 21, 46] {
            let c = QuadraticCf::new(d).unwrap();
            for i in -1..(2 * c.cf.s() as i64) {
                let de = c.delta(i + 1);
                assert!(de.is_in_codifferent());
                assert!(c.delta_literal(i + 1).is_in_codifferent());
                for l in 0..=c.cf.u(i + 2) {
                    let b = c.semiconvergent(i, l).unwrap();
                    assert_eq!((&de * &b).trace(), q(1), "D={d} i={i} l={l}");
                    assert_eq!(de.signature(), b.signature());
                }
            }
        }
    }
}
