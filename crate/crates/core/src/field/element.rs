use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{sign_quadratic_surd, Field, FieldDescriptor, Kind, Sign, SignatureVector};
use crate::arith::{q, q_to_f64, qvec, qz, Q, Z};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{det_q, solve_q, vec_mat_q, MatQ};

#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    coords: Vec<Q>,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &FieldElement) -> bool {
        self.field == o.field && self.coords == o.coords
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.coords.hash(h)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for FieldElement {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&o.coords)
    }
}

/// Canonical JSON form: `{"field": <descriptor>, "coeffs": ["p/q", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub field: FieldDescriptor,
    #[serde(with = "qvec")]
    pub coeffs: Vec<Q>,
}

impl FieldElement {
    pub(crate) fn from_parts(field: Field, coords: Vec<Q>) -> Self {
        FieldElement { field, coords }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson { field: self.field.descriptor().clone(), coeffs: self.coords.clone() }
    }

    pub fn from_json(field: &Field, j: &ElementJson) -> Result<FieldElement> {
        if &j.field != field.descriptor() {
            return Err(Error::FieldMismatch);
        }
        if j.coeffs.len() != field.degree() {
            return Err(Error::Parse(format!("expected {} coefficients", field.degree())));
        }
        Ok(field.element(j.coeffs.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Q) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * k).collect() }
    }

    fn check(&self, o: &FieldElement) {
        assert!(self.field == o.field, "elements from different fields");
    }

    pub fn try_add(&self, o: &FieldElement) -> Result<FieldElement> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self + o)
    }

    pub fn try_mul(&self, o: &FieldElement) -> Result<FieldElement> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self * o)
    }

    fn mul_impl(&self, o: &FieldElement) -> FieldElement {
        self.check(o);
        let n = self.field.0.n;
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.field.0.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        FieldElement { field: self.field.clone(), coords: out }
    }

    /// Matrix of multiplication by `self` on radical coordinates: column j holds `self * r_j`.
    pub fn mul_matrix(&self) -> MatQ {
        let n = self.field.0.n;
        let cols: Vec<FieldElement> = (0..n).map(|j| self * &self.field.gen(j)).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j].coords[i].clone()).collect()).collect()
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.0.n;
        let mut rhs = vec![Q::zero(); n];
        rhs[0] = Q::one();
        let x = solve_q(&self.mul_matrix(), &rhs).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement { field: self.field.clone(), coords: x })
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Q {
        self.coords.iter().zip(&self.field.0.rad_traces).fold(Q::zero(), |acc, (c, t)| acc + c * t)
    }

    pub fn norm(&self) -> Q {
        det_q(&self.mul_matrix())
    }

    /// Coefficients `e_1..e_n` of the characteristic polynomial
    /// `x^n - e_1 x^{n-1} + e_2 x^{n-2} - ...`, via Newton's identities on traces of powers.
    pub fn elementary_symmetric(&self) -> Vec<Q> {
        let n = self.field.0.n;
        let mut p = Vec::with_capacity(n);
        let mut pw = self.clone();
        for k in 0..n {
            if k > 0 {
                pw = &pw * self;
            }
            p.push(pw.trace());
        }
        let mut e = vec![Q::one()];
        for k in 1..=n {
            let mut s = Q::zero();
            for i in 1..=k {
                let term = &e[k - i] * &p[i - 1];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            e.push(s / q(k as i64));
        }
        e.remove(0);
        e
    }

    pub(crate) fn char_poly_is_integral(&self) -> bool {
        self.elementary_symmetric().iter().all(|c| c.is_integer())
    }

    /// Coordinates in the integral basis.
    pub fn basis_coords(&self) -> Vec<Q> {
        vec_mat_q(&self.coords, &self.field.0.basis_inv)
    }

    pub fn int_coords(&self) -> Option<Vec<Z>> {
        let c = self.basis_coords();
        if c.iter().all(|x| x.is_integer()) {
            Some(c.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.int_coords().is_some()
    }

    pub fn is_in_codifferent(&self) -> bool {
        self.field.integral_basis().iter().all(|b| (self * b).trace().is_integer())
    }

    /// Biquadratic Galois conjugate by `σ_i`, the nontrivial automorphism fixing `√D_i`.
    pub fn galois_conjugate(&self, i: usize) -> Result<FieldElement> {
        if !self.field.is_biquadratic() {
            return Err(Error::WrongFieldKind("biquadratic"));
        }
        let flips: [bool; 4] = match i {
            1 => [false, false, true, true],
            2 => [false, true, false, true],
            3 => [false, true, true, false],
            _ => return Err(Error::IndexOutOfRange(format!("sigma_{i}"))),
        };
        let coords = self.coords.iter().zip(flips).map(|(c, f)| if f { -c.clone() } else { c.clone() }).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    /// Quadratic conjugate `√D ↦ −√D`.
    pub fn conjugate(&self) -> Result<FieldElement> {
        if !self.field.is_quadratic() {
            return Err(Error::WrongFieldKind("quadratic"));
        }
        Ok(FieldElement { field: self.field.clone(), coords: vec![self.coords[0].clone(), -self.coords[1].clone()] })
    }

    pub fn interval_embedding(&self, i: usize, bits: u32) -> Interval {
        let r = self.field.radical_intervals(i, bits);
        self.coords
            .iter()
            .zip(&r)
            .fold(Interval::point(Q::zero()), |acc, (c, iv)| acc.add(&iv.scale(c)))
    }

    pub fn embeddings_f64(&self) -> Vec<f64> {
        let e = &self.field.0.emb_rad;
        let c: Vec<f64> = self.coords.iter().map(q_to_f64).collect();
        e.iter().map(|row| row.iter().zip(&c).map(|(m, x)| m * x).sum()).collect()
    }

    /// Sign decided from an interval enclosure at the given precision, if it excludes zero.
    pub fn sign_at_precision(&self, i: usize, bits: u32) -> Option<Sign> {
        if self.is_zero() {
            return Some(Sign::Zero);
        }
        match self.interval_embedding(i, bits).sign() {
            Some(Sign::Zero) => None,
            s => s,
        }
    }

    /// Exact sign of `τ_i(self)`.
    pub fn sign_at(&self, i: usize) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        match &self.field.0.kind {
            Kind::Quadratic { d } => {
                let y = if i == 0 { self.coords[1].clone() } else { -self.coords[1].clone() };
                sign_quadratic_surd(&self.coords[0], &y, d)
            }
            Kind::Biquadratic { d1, d2, g, .. } => {
                let s1 = self.field.radical_sign(i, 1);
                let s2 = self.field.radical_sign(i, 2);
                let sg = |s: i8, x: &Q| if s < 0 { -x.clone() } else { x.clone() };
                let c = &self.coords;
                // τ(α) = A + B √D2 with A = a + s1 b √D1, B = s2 c + s1 s2 (d/g) √D1
                let a0 = c[0].clone();
                let a1 = sg(s1, &c[1]);
                let b0 = sg(s2, &c[2]);
                let b1 = sg(s1 * s2, &(&c[3] / qz(g.clone())));
                let sa = sign_quadratic_surd(&a0, &a1, d1);
                let sb = sign_quadratic_surd(&b0, &b1, d1);
                if sb == Sign::Zero {
                    return sa;
                }
                if sa == Sign::Zero || sa == sb {
                    return sb;
                }
                let dd1 = qz(d1.clone());
                let dd2 = qz(d2.clone());
                let x = &a0 * &a0 + &dd1 * &a1 * &a1 - &dd2 * (&b0 * &b0 + &dd1 * &b1 * &b1);
                let y = q(2) * (&a0 * &a1 - &dd2 * &b0 * &b1);
                sa.mul(sign_quadratic_surd(&x, &y, d1))
            }
            Kind::Cubic { .. } => {
                let mut bits = 64;
                loop {
                    if let Some(s) = self.sign_at_precision(i, bits) {
                        return s;
                    }
                    bits *= 2;
                }
            }
        }
    }

    pub fn signature(&self) -> SignatureVector {
        let n = self.field.0.n;
        SignatureVector { bits: (0..n).map(|i| if self.sign_at(i) == Sign::Neg { 1 } else { 0 }).collect() }
    }

    pub fn is_totally_positive(&self) -> bool {
        let n = self.field.0.n;
        if self.is_zero() {
            return false;
        }
        let f = self.embeddings_f64();
        let scale = self.coords.iter().map(|c| q_to_f64(c).abs()).fold(0.0, f64::max) * 1e3 + 1.0;
        (0..n).all(|i| {
            let v = f[i];
            if v.is_finite() && v.abs() > 1e-9 * scale {
                v > 0.0
            } else {
                self.sign_at(i) == Sign::Pos
            }
        })
    }

    /// Exact square root in the field, if one exists (either sign choice returned as the
    /// root with positive first embedding).
    pub fn sqrt(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let r = match &self.field.0.kind {
            Kind::Quadratic { d } => sqrt_in_quadratic(&self.coords[0], &self.coords[1], d)
                .map(|(a, b)| self.field.element(vec![a, b])),
            Kind::Biquadratic { .. } => self.sqrt_biquadratic(),
            Kind::Cubic { .. } => self.sqrt_cubic(),
        }?;
        let r = if r.sign_at(0) == Sign::Neg { -&r } else { r };
        debug_assert!(&r * &r == *self);
        Some(r)
    }

    fn sqrt_biquadratic(&self) -> Option<FieldElement> {
        let Kind::Biquadratic { d1, d2, g, .. } = &self.field.0.kind else { unreachable!() };
        // α = A + B √D2, A = a + b√D1, B = c + (d/g)√D1 in F = Q(√D1).
        let c = &self.coords;
        let a = (c[0].clone(), c[1].clone());
        let b = (c[2].clone(), &c[3] / qz(g.clone()));
        let f = QuadNum { m: d1.clone() };
        let dd2 = qz(d2.clone());
        // (u + v√D2)^2 = u^2 + D2 v^2 + 2uv √D2
        let n = f.sub(&f.mul(&a, &a), &f.scale(&f.mul(&b, &b), &dd2));
        let s = f.sqrt(&n)?;
        let two = q(2);
        for sign in [1i64, -1] {
            let t = f.scale(&f.add(&a, &f.scale(&s, &q(sign))), &(Q::one() / &two));
            if let Some(u) = f.sqrt(&t) {
                if f.is_zero(&u) {
                    // α = D2 v^2
                    let t2 = f.scale(&a, &(Q::one() / &dd2));
                    if let Some(v) = f.sqrt(&t2) {
                        let e = self.field.element(vec![Q::zero(), Q::zero(), v.0.clone(), &v.1 * qz(g.clone())]);
                        if &e * &e == *self {
                            return Some(e);
                        }
                    }
                    continue;
                }
                let v = f.div(&b, &f.scale(&u, &two))?;
                let e = self.field.element(vec![u.0.clone(), u.1.clone(), v.0.clone(), &v.1 * qz(g.clone())]);
                if &e * &e == *self {
                    return Some(e);
                }
            }
        }
        None
    }

    fn sqrt_cubic(&self) -> Option<FieldElement> {
        // Newton iteration in f64 to guess, then exact check against rational rounding is
        // not reliable; use the characteristic polynomial: α is a square iff its minimal
        // polynomial factors as f(x^2)... Instead solve x^2 = α via the linear structure:
        // x has norm ±√N(α); try both signs of each embedding by Lagrange interpolation.
        let n = self.field.0.n;
        let nq = self.norm();
        if nq.is_negative() {
            return None;
        }
        let emb: Vec<f64> = self.embeddings_f64();
        if emb.iter().any(|&v| v < 0.0) {
            return None;
        }
        let roots: Vec<f64> = emb.iter().map(|v| v.sqrt()).collect();
        let m = &self.field.0.emb_rad;
        for mask in 0..(1u32 << n) {
            let target: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -roots[i] } else { roots[i] }).collect();
            // solve m c = target in f64
            let mut a: Vec<Vec<f64>> = m.iter().zip(&target).map(|(r, t)| {
                let mut v = r.clone();
                v.push(*t);
                v
            }).collect();
            for col in 0..n {
                let p = (col..n).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap()).unwrap();
                a.swap(col, p);
                for r in 0..n {
                    if r != col {
                        let f = a[r][col] / a[col][col];
                        for k in col..=n {
                            a[r][k] -= f * a[col][k];
                        }
                    }
                }
            }
            let sol: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
            // integral basis is 1, ρ, ρ² so a square root of an integral element is integral
            if sol.iter().any(|v| !v.is_finite() || v.abs() > 1e15) {
                continue;
            }
            let coords: Vec<Q> = sol.iter().map(|v| q(v.round() as i64)).collect();
            let e = self.field.element(coords);
            if &e * &e == *self {
                return Some(e);
            }
        }
        None
    }
}

/// Arithmetic in Q(√m) on pairs (x, y) = x + y√m.
struct QuadNum {
    m: Z,
}

impl QuadNum {
    fn mul(&self, a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
        (&a.0 * &b.0 + qz(self.m.clone()) * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }
    fn add(&self, a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
        (&a.0 + &b.0, &a.1 + &b.1)
    }
    fn sub(&self, a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
        (&a.0 - &b.0, &a.1 - &b.1)
    }
    fn scale(&self, a: &(Q, Q), k: &Q) -> (Q, Q) {
        (&a.0 * k, &a.1 * k)
    }
    fn is_zero(&self, a: &(Q, Q)) -> bool {
        a.0.is_zero() && a.1.is_zero()
    }
    fn div(&self, a: &(Q, Q), b: &(Q, Q)) -> Option<(Q, Q)> {
        let nb = &b.0 * &b.0 - qz(self.m.clone()) * &b.1 * &b.1;
        if nb.is_zero() {
            return None;
        }
        let conj = (b.0.clone(), -b.1.clone());
        let p = self.mul(a, &conj);
        Some((p.0 / &nb, p.1 / nb))
    }
    fn sqrt(&self, a: &(Q, Q)) -> Option<(Q, Q)> {
        sqrt_in_quadratic(&a.0, &a.1, &self.m)
    }
}

fn sqrt_q(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(Q::new(rn, rd))
    } else {
        None
    }
}

/// Square root of `x + y√m` inside `Q(√m)`, or `None`.
fn sqrt_in_quadratic(x: &Q, y: &Q, m: &Z) -> Option<(Q, Q)> {
    if y.is_zero() {
        if let Some(r) = sqrt_q(x) {
            return Some((r, Q::zero()));
        }
        // x = m v^2
        let v = sqrt_q(&(x / qz(m.clone())))?;
        return Some((Q::zero(), v));
    }
    // (u + v√m)^2 = u^2 + m v^2 + 2uv√m
    let nrm = x * x - qz(m.clone()) * y * y;
    let s = sqrt_q(&nrm)?;
    for t in [(x + &s) / q(2), (x - &s) / q(2)] {
        if let Some(u) = sqrt_q(&t) {
            if u.is_zero() {
                continue;
            }
            let v = y / (q(2) * &u);
            if &u * &u + qz(m.clone()) * &v * &v == *x {
                return Some((u, v));
            }
        }
    }
    None
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &'b FieldElement) -> FieldElement {
                let f: fn(&FieldElement, &FieldElement) -> FieldElement = $body;
                f(self, o)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl<'b> $tr<&'b FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &'b FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    a.check(b);
    FieldElement { field: a.field.clone(), coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
});
binop!(Sub, sub, |a, b| {
    a.check(b);
    FieldElement { field: a.field.clone(), coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
});
binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|x| -x.clone()).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.coords.iter().map(crate::arith::q_to_string).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use crate::field::make_field;

    fn f(desc: FieldDescriptor) -> Field {
        make_field(desc).unwrap()
    }

    #[test]
    fn spec_products() {
        let k = f(FieldDescriptor::Quadratic { d: 3 });
        let a = k.element_i64(&[1, 1]);
        let b = k.element_i64(&[1, -1]);
        assert_eq!(&a * &b, k.element_i64(&[-2, 0]));
        for a in [-1i64, 1, 2, 4] {
            let c = f(FieldDescriptor::SimplestCubic { a });
            let rho = c.gen(1);
            assert_eq!(&(&rho * &rho) * &rho, c.element_i64(&[1, a + 3, a]));
        }
        let bq = f(FieldDescriptor::Biquadratic { d1: 5, d2: 3 });
        assert_eq!(&bq.gen(2) * &bq.gen(3), bq.element_i64(&[0, 3, 0, 0]));
    }

    #[test]
    fn signs_and_traces() {
        let k = f(FieldDescriptor::Quadratic { d: 5 });
        let w = k.integral_basis()[1].clone();
        assert_eq!(w.signature().bits, vec![0, 1]);
        assert_eq!(w.trace(), q(1));
        let k3 = f(FieldDescriptor::Quadratic { d: 3 });
        assert_eq!(k3.element_i64(&[2, 1]).norm(), q(1));
        let bq = f(FieldDescriptor::Biquadratic { d1: 5, d2: 3 });
        let g1 = bq.element(vec![frac(5, 2), frac(1, 2), frac(-1, 2), frac(-1, 2)]);
        assert!(g1.is_totally_positive());
        assert_eq!(g1.trace(), q(10));
        let c = f(FieldDescriptor::SimplestCubic { a: 1 });
        assert!(c.element_i64(&[1, 1, 1]).is_totally_positive());
    }

    #[test]
    fn codifferent() {
        let k = f(FieldDescriptor::Quadratic { d: 5 });
        assert!(!k.rational(frac(1, 2)).is_in_codifferent());
        assert!(k.rational(frac(1, 5)).scale(&q(5)).is_in_codifferent());
    }

    #[test]
    fn inverse_and_pow() {
        let bq = f(FieldDescriptor::Biquadratic { d1: 5, d2: 3 });
        let e = bq.element(vec![frac(3, 2), frac(1, 2), q(0), q(0)]);
        let ei = e.inv().unwrap();
        assert!((&e * &ei).is_one());
        assert_eq!(e.pow(-2).unwrap(), &ei * &ei);
        assert_eq!(bq.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn square_roots() {
        let bq = f(FieldDescriptor::Biquadratic { d1: 5, d2: 3 });
        let x = bq.element(vec![frac(3, 2), frac(1, 2), q(1), frac(-1, 2)]);
        let y = &x * &x;
        let r = y.sqrt().unwrap();
        assert!(r == x || r == -&x);
        assert!(bq.element_i64(&[2, 0, 1, 0]).sqrt().is_none());
        let c = f(FieldDescriptor::SimplestCubic { a: 1 });
        let rho = c.gen(1);
        assert_eq!((&rho * &rho).sqrt().map(|r| r == rho || r == -&rho), Some(true));
        let k = f(FieldDescriptor::Quadratic { d: 3 });
        // 2 + √3 = ((√6 + √2)/2)^2 is not a square in Q(√3), but 6(2+√3) = (3+√3)^2
        assert!(k.element_i64(&[2, 1]).sqrt().is_none());
        assert!(k.element_i64(&[12, 6]).sqrt().is_some());
    }
}
