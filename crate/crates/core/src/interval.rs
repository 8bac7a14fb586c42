//! Closed rational intervals with outward-exact arithmetic.

use num_traits::{One, Signed, Zero};

use crate::arith::{isqrt, Q, Z};
use crate::field::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(Z::from(2))
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Sign if the interval excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Pos)
        } else if self.hi.is_negative() {
            Some(Sign::Neg)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &Q) -> Interval {
        if k.is_negative() {
            Interval { lo: &self.hi * k, hi: &self.lo * k }
        } else {
            Interval { lo: &self.lo * k, hi: &self.hi * k }
        }
    }

    /// Reciprocal of an interval not containing zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Interval { lo: self.hi.recip(), hi: self.lo.recip() })
        } else {
            None
        }
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        o.recip().map(|r| self.mul(&r))
    }
}

fn pow2(bits: u32) -> Z {
    Z::one() << bits as usize
}

/// Enclosure of `sqrt(n)` for a nonnegative integer, width at most `2^-bits`.
pub fn sqrt_interval(n: &Z, bits: u32) -> Interval {
    let s = pow2(bits);
    let r = isqrt(&(n * &s * &s));
    let lo = Q::new(r.clone(), s.clone());
    if &r * &r == n * &s * &s {
        Interval::point(lo)
    } else {
        Interval::new(lo, Q::new(r + 1, s))
    }
}

/// Enclosure of `atanh(t)` for `0 <= t < 1`, rational t, with a tail bound.
fn atanh_interval(t: &Q, bits: u32) -> Interval {
    let eps = Q::new(Z::one(), pow2(bits + 4));
    let t2 = t * t;
    let mut term = t.clone();
    let mut sum = Q::zero();
    let mut k: i64 = 0;
    loop {
        let denom = Q::from_integer(Z::from(2 * k + 1));
        sum += &term / &denom;
        term = &term * &t2;
        k += 1;
        // remainder <= term / ((2k+1)(1 - t^2))
        let rem = &term / (Q::from_integer(Z::from(2 * k + 1)) * (Q::one() - &t2));
        if rem <= eps {
            return Interval::new(sum.clone(), sum + rem);
        }
    }
}

/// Enclosure of `ln(x)` for rational `x > 0`.
pub fn ln_interval(x: &Q, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of non-positive");
    // x = 2^k m, m in [1, 2)
    let mut m = x.clone();
    let mut k: i64 = 0;
    let two = Q::from_integer(Z::from(2));
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < Q::one() {
        m *= &two;
        k -= 1;
    }
    let one = Q::one();
    let lnm = atanh_interval(&((&m - &one) / (&m + &one)), bits).scale(&two);
    let ln2 = atanh_interval(&Q::new(Z::one(), Z::from(3)), bits + 8).scale(&two);
    lnm.add(&ln2.scale(&Q::from_integer(Z::from(k))))
}

/// Real polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        self.0
            .iter()
            .rev()
            .fold(Interval::point(Q::zero()), |acc, c| acc.mul(x).add(&Interval::point(c.clone())))
    }

    fn trim(mut self) -> Poly {
        while self.0.len() > 1 && self.0.last().unwrap().is_zero() {
            self.0.pop();
        }
        self
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(Z::from(i))).collect()).trim()
    }

    fn rem(&self, d: &Poly) -> Poly {
        let mut r = self.0.clone();
        let dd = d.degree();
        let lead = d.0[dd].clone();
        while r.len() > dd && r.iter().any(|c| !c.is_zero()) {
            let k = r.len() - 1;
            if r[k].is_zero() {
                r.pop();
                continue;
            }
            let f = &r[k] / &lead;
            for i in 0..=dd {
                let t = &f * &d.0[i];
                r[k - dd + i] -= t;
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(Q::zero());
        }
        Poly(r).trim()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Sturm sequence p, p', -rem(...), ...
    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone().trim(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() || seq[n - 1].degree() == 0 {
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly(r.0.into_iter().map(|c| -c).collect()));
        }
        seq
    }
}

fn sign_changes(seq: &[Poly], x: &Q) -> usize {
    let vals: Vec<Q> = seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).collect();
    vals.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
}

/// Isolating intervals (descending order) for the real roots of a squarefree polynomial,
/// each refined to width at most `2^-bits`.
pub fn isolate_real_roots(p: &Poly, bits: u32) -> Vec<Interval> {
    let seq = p.sturm();
    let d = p.degree();
    let lead = p.0[d].abs();
    let bound = p.0[..d].iter().fold(Q::zero(), |acc, c| if c.abs() > acc { c.abs() } else { acc }) / lead + Q::one();
    let mut stack = vec![Interval::new(-bound.clone(), bound)];
    let mut found = Vec::new();
    while let Some(iv) = stack.pop() {
        // roots in (lo, hi]
        let count = sign_changes(&seq, &iv.lo) - sign_changes(&seq, &iv.hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            found.push(iv);
            continue;
        }
        let m = iv.mid();
        stack.push(Interval::new(iv.lo.clone(), m.clone()));
        stack.push(Interval::new(m, iv.hi.clone()));
    }
    let mut roots: Vec<Interval> = found.into_iter().map(|iv| refine_root(p, iv, bits)).collect();
    roots.sort_by(|a, b| b.lo.cmp(&a.lo));
    roots
}

/// Bisects an isolating interval `(lo, hi]` of a simple root down to width `2^-bits`.
pub fn refine_root(p: &Poly, mut iv: Interval, bits: u32) -> Interval {
    let target = Q::new(Z::one(), pow2(bits));
    if p.eval(&iv.hi).is_zero() {
        return Interval::point(iv.hi);
    }
    let shi = p.eval(&iv.hi).is_positive();
    while iv.width() > target {
        let m = iv.mid();
        let v = p.eval(&m);
        if v.is_zero() {
            return Interval::point(m);
        }
        if v.is_positive() == shi {
            iv.hi = m;
        } else {
            iv.lo = m;
        }
    }
    iv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, q, z};

    #[test]
    fn sqrt_bounds() {
        let iv = sqrt_interval(&z(2), 40);
        assert!(&iv.lo * &iv.lo < q(2) && &iv.hi * &iv.hi > q(2));
        assert_eq!(sqrt_interval(&z(9), 10), Interval::point(q(3)));
    }

    #[test]
    fn ln_bounds() {
        let iv = ln_interval(&q(2), 60);
        let l = 0.6931471805599453_f64;
        assert!(crate::arith::q_to_f64(&iv.lo) <= l + 1e-15 && crate::arith::q_to_f64(&iv.hi) >= l - 1e-15);
        assert!(iv.width() < frac(1, 1 << 40));
        let iv = ln_interval(&frac(1, 10), 60);
        assert!((crate::arith::q_to_f64(&iv.mid()) - (0.1f64).ln()).abs() < 1e-14);
    }

    #[test]
    fn shanks_roots() {
        // x^3 - x^2 - 4x - 1 (a = 1)
        let p = Poly(vec![q(-1), q(-4), q(-1), q(1)]);
        let r = isolate_real_roots(&p, 50);
        assert_eq!(r.len(), 3);
        let f: Vec<f64> = r.iter().map(|iv| crate::arith::q_to_f64(&iv.mid())).collect();
        assert!((f[0] - 2.651093408937175).abs() < 1e-12);
        assert!(f[0] > f[1] && f[1] > f[2]);
    }
}
