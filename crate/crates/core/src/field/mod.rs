//! Number fields of degree 2, 3 and 4 with exact element arithmetic.
//!
//! Coordinates are rationals in the radical basis `(1, √D)`, `(1, √D1, √D2, √D3)` or
//! `(1, ρ, ρ²)`. Embeddings follow a fixed order: `(+√D, −√D)`; sign patterns
//! `(+,+), (−,+), (+,−), (−,−)` on `(√D1, √D2)`; roots of the cubic in descending order.

mod element;
mod enumerate;

pub use element::{ElementJson, FieldElement};
pub use enumerate::{enumerate_box_f64, enumerate_integers_in_box, enumerate_integers_in_box_with_cap, DEFAULT_BOX_CAP};

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_squarefree, q, q_to_f64, qz, Q, Z};
use crate::error::{Error, Result};
use crate::interval::{isolate_real_roots, refine_root, sqrt_interval, Interval, Poly};
use crate::linalg::{det_q, hnf_rows_lower, inverse_q, MatQ, MatZ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_q(x: &Q) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn mul(self, o: Sign) -> Sign {
        match (self, o) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
        }
    }
}

/// Sign pattern in F_2^n: bit 0 for a positive embedding, 1 for a negative one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignatureVector {
    pub bits: Vec<u8>,
}

impl SignatureVector {
    pub fn zero(n: usize) -> Self {
        SignatureVector { bits: vec![0; n] }
    }

    pub fn add(&self, o: &SignatureVector) -> SignatureVector {
        SignatureVector { bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn as_mask(&self) -> u32 {
        self.bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u32) << i))
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.bits.iter().map(|&b| if b == 0 { "+" } else { "-" }).collect();
        write!(f, "({})", s.join(","))
    }
}

/// F_2-rank of a set of sign vectors.
pub fn f2_rank(vs: &[SignatureVector]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for v in vs {
        let mut x = v.as_mask();
        for b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDescriptor {
    Quadratic { d: i64 },
    Biquadratic { d1: i64, d2: i64 },
    SimplestCubic { a: i64 },
}

impl FieldDescriptor {
    pub fn degree(&self) -> usize {
        match self {
            FieldDescriptor::Quadratic { .. } => 2,
            FieldDescriptor::Biquadratic { .. } => 4,
            FieldDescriptor::SimplestCubic { .. } => 3,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Quadratic { d } => write!(f, "Q(sqrt {d})"),
            FieldDescriptor::Biquadratic { d1, d2 } => write!(f, "Q(sqrt {d1}, sqrt {d2})"),
            FieldDescriptor::SimplestCubic { a } => write!(f, "Q(rho), rho^3 - {a} rho^2 - {} rho - 1", a + 3),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FieldOptions {
    /// Accept simplest cubic parameters whose ring Z[ρ] is not known to be maximal.
    pub assume_monogenic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monogenicity {
    NotApplicable,
    Proven,
    Assumed,
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    Quadratic { d: Z },
    Biquadratic { d1: Z, d2: Z, d3: Z, g: Z },
    Cubic { poly: Poly, roots: Vec<Interval> },
}

#[derive(Debug)]
pub(crate) struct FieldData {
    pub desc: FieldDescriptor,
    pub n: usize,
    pub kind: Kind,
    /// `table[i][j]`: sparse coordinates of `r_i r_j`.
    pub table: Vec<Vec<Vec<(usize, Q)>>>,
    pub rad_traces: Vec<Q>,
    /// Rows: radical coordinates of the integral basis.
    pub basis: MatQ,
    pub basis_inv: MatQ,
    pub disc: Z,
    /// `emb_int[i][k] = τ_i(b_k)`.
    pub emb_int: Vec<Vec<f64>>,
    /// `emb_rad[i][k] = τ_i(r_k)`.
    pub emb_rad: Vec<Vec<f64>>,
    pub monogenic: Monogenicity,
}

/// A number field; cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(pub(crate) Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, o: &Field) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.desc == o.0.desc
    }
}
impl Eq for Field {}

pub fn default_precision_bits() -> u32 {
    std::env::var("SAILKIT_PRECISION_BITS").ok().and_then(|s| s.parse().ok()).filter(|&b| b >= 16).unwrap_or(128)
}

pub fn make_field(desc: FieldDescriptor) -> Result<Field> {
    Field::with_options(desc, FieldOptions::default())
}

fn sparse(n: usize, entries: &[(usize, Q)]) -> Vec<(usize, Q)> {
    let _ = n;
    entries.iter().filter(|(_, c)| !c.is_zero()).cloned().collect()
}

impl Field {
    pub fn new(desc: FieldDescriptor) -> Result<Field> {
        make_field(desc)
    }

    pub fn with_options(desc: FieldDescriptor, opts: FieldOptions) -> Result<Field> {
        let (n, kind, table, rad_traces, monogenic) = match &desc {
            FieldDescriptor::Quadratic { d } => {
                if *d <= 1 || !is_squarefree(&Z::from(*d)) {
                    return Err(Error::NonSquarefree(format!("D = {d}")));
                }
                let dz = Z::from(*d);
                let t = vec![
                    vec![sparse(2, &[(0, q(1))]), sparse(2, &[(1, q(1))])],
                    vec![sparse(2, &[(1, q(1))]), sparse(2, &[(0, qz(dz.clone()))])],
                ];
                (2, Kind::Quadratic { d: dz }, t, vec![q(2), q(0)], Monogenicity::NotApplicable)
            }
            FieldDescriptor::Biquadratic { d1, d2 } => {
                for d in [d1, d2] {
                    if *d <= 1 || !is_squarefree(&Z::from(*d)) {
                        return Err(Error::NonSquarefree(format!("D = {d}")));
                    }
                }
                if d1 == d2 {
                    return Err(Error::DegenerateBiquadratic(format!("D1 = D2 = {d1}")));
                }
                let (a, b) = (Z::from(*d1), Z::from(*d2));
                let g = a.gcd(&b);
                let c = &a * &b / (&g * &g);
                if c == a || c == b || c.is_one() {
                    return Err(Error::DegenerateBiquadratic(format!("D3 = {c}")));
                }
                let e = |i: usize, v: Q| sparse(4, &[(i, v)]);
                let t = vec![
                    vec![e(0, q(1)), e(1, q(1)), e(2, q(1)), e(3, q(1))],
                    vec![e(1, q(1)), e(0, qz(a.clone())), e(3, qz(g.clone())), e(2, qz(&a / &g))],
                    vec![e(2, q(1)), e(3, qz(g.clone())), e(0, qz(b.clone())), e(1, qz(&b / &g))],
                    vec![e(3, q(1)), e(2, qz(&a / &g)), e(1, qz(&b / &g)), e(0, qz(c.clone()))],
                ];
                (4, Kind::Biquadratic { d1: a, d2: b, d3: c, g }, t, vec![q(4), q(0), q(0), q(0)], Monogenicity::NotApplicable)
            }
            FieldDescriptor::SimplestCubic { a } => {
                if *a < -1 {
                    return Err(Error::InvalidDescriptor(format!("simplest cubic needs a >= -1, got {a}")));
                }
                let az = Z::from(*a);
                let disc_root = &az * &az + 3 * &az + 9;
                let mono = if is_squarefree(&disc_root) {
                    Monogenicity::Proven
                } else if opts.assume_monogenic {
                    Monogenicity::Assumed
                } else {
                    return Err(Error::MonogenicityUnknown(*a));
                };
                // ρ^3 = 1 + (a+3)ρ + aρ^2, ρ^4 = a + (a^2+3a+1)ρ + (a^2+a+3)ρ^2
                let p3 = vec![q(1), qz(&az + 3), qz(az.clone())];
                let p4 = vec![qz(az.clone()), qz(&az * &az + 3 * &az + 1), qz(&az * &az + &az + 3)];
                let pw = |k: usize| -> Vec<(usize, Q)> {
                    match k {
                        0..=2 => vec![(k, q(1))],
                        3 => sparse(3, &[(0, p3[0].clone()), (1, p3[1].clone()), (2, p3[2].clone())]),
                        _ => sparse(3, &[(0, p4[0].clone()), (1, p4[1].clone()), (2, p4[2].clone())]),
                    }
                };
                let t = (0..3).map(|i| (0..3).map(|j| pw(i + j)).collect()).collect();
                let poly = Poly(vec![q(-1), qz(-(&az + 3i64)), qz(-az.clone()), q(1)]);
                let roots = isolate_real_roots(&poly, 64);
                let tr = vec![q(3), qz(az.clone()), qz(&az * &az + 2 * &az + 6)];
                (3, Kind::Cubic { poly, roots }, t, tr, mono)
            }
        };
        let mut data = FieldData {
            desc,
            n,
            kind,
            table,
            rad_traces,
            basis: vec![],
            basis_inv: vec![],
            disc: Z::zero(),
            emb_int: vec![],
            emb_rad: vec![],
            monogenic,
        };
        data.basis = match &data.kind {
            Kind::Quadratic { d } => {
                if (d % 4u32) == Z::one() {
                    vec![vec![q(1), q(0)], vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 2.into())]]
                } else {
                    vec![vec![q(1), q(0)], vec![q(0), q(1)]]
                }
            }
            Kind::Cubic { .. } => (0..3).map(|i| (0..3).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect(),
            Kind::Biquadratic { .. } => Vec::new(),
        };
        let mut field = Field(Arc::new(data));
        if matches!(field.0.kind, Kind::Biquadratic { .. }) {
            let basis = field.compute_biquadratic_basis();
            Arc::get_mut(&mut field.0).unwrap().basis = basis;
        }
        let basis_inv = inverse_q(&field.0.basis).expect("integral basis is a Q-basis");
        let emb_rad = field.radical_embeddings_f64();
        let emb_int: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| (0..n).map(|j| q_to_f64(&field.0.basis[k][j]) * emb_rad[i][j]).sum())
                    .collect()
            })
            .collect();
        {
            let d = Arc::get_mut(&mut field.0).unwrap();
            d.basis_inv = basis_inv;
            d.emb_rad = emb_rad;
            d.emb_int = emb_int;
        }
        let disc = field.trace_form_determinant();
        Arc::get_mut(&mut field.0).unwrap().disc = disc;
        Ok(field)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn discriminant(&self) -> &Z {
        &self.0.disc
    }

    pub fn monogenicity(&self) -> Monogenicity {
        self.0.monogenic
    }

    pub fn is_biquadratic(&self) -> bool {
        matches!(self.0.kind, Kind::Biquadratic { .. })
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.0.kind, Kind::Quadratic { .. })
    }

    pub fn is_cubic(&self) -> bool {
        matches!(self.0.kind, Kind::Cubic { .. })
    }

    /// Radicands `(D1, D2, D3)` of a biquadratic field.
    pub fn radicands(&self) -> Option<(Z, Z, Z)> {
        match &self.0.kind {
            Kind::Biquadratic { d1, d2, d3, .. } => Some((d1.clone(), d2.clone(), d3.clone())),
            Kind::Quadratic { d } => Some((d.clone(), Z::zero(), Z::zero())),
            _ => None,
        }
    }

    pub fn element(&self, coords: Vec<Q>) -> FieldElement {
        assert_eq!(coords.len(), self.0.n, "coordinate length");
        FieldElement::from_parts(self.clone(), coords)
    }

    pub fn element_i64(&self, coords: &[i64]) -> FieldElement {
        self.element(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn from_int(&self, x: &[Z]) -> FieldElement {
        let n = self.0.n;
        let coords = (0..n)
            .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + qz(x[k].clone()) * &self.0.basis[k][j]))
            .collect();
        self.element(coords)
    }

    pub fn from_int_i64(&self, x: &[i64]) -> FieldElement {
        self.from_int(&x.iter().map(|&v| Z::from(v)).collect::<Vec<_>>())
    }

    pub fn zero(&self) -> FieldElement {
        self.element(vec![Q::zero(); self.0.n])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![Q::zero(); self.0.n];
        c[0] = Q::one();
        self.element(c)
    }

    pub fn rational(&self, x: Q) -> FieldElement {
        let mut c = vec![Q::zero(); self.0.n];
        c[0] = x;
        self.element(c)
    }

    /// The k-th radical basis element (`√D_k` or `ρ^k`).
    pub fn gen(&self, k: usize) -> FieldElement {
        let mut c = vec![Q::zero(); self.0.n];
        c[k] = Q::one();
        self.element(c)
    }

    pub fn integral_basis(&self) -> Vec<FieldElement> {
        self.0.basis.iter().map(|r| self.element(r.clone())).collect()
    }

    /// `τ_i(b_k)` in double precision, for prefilters only.
    pub fn embedding_matrix_f64(&self) -> &Vec<Vec<f64>> {
        &self.0.emb_int
    }

    pub fn embed_int_f64(&self, x: &[i64]) -> Vec<f64> {
        self.0.emb_int.iter().map(|row| row.iter().zip(x).map(|(m, &v)| m * v as f64).sum()).collect()
    }

    fn radical_embeddings_f64(&self) -> Vec<Vec<f64>> {
        let n = self.0.n;
        (0..n)
            .map(|i| (0..n).map(|k| q_to_f64(&self.gen(k).interval_embedding(i, 80).mid())).collect())
            .collect()
    }

    fn trace_form_determinant(&self) -> Z {
        let b = self.integral_basis();
        let n = b.len();
        let m: MatQ = (0..n).map(|i| (0..n).map(|j| (&b[i] * &b[j]).trace()).collect()).collect();
        det_q(&m).to_integer()
    }

    fn compute_biquadratic_basis(&self) -> MatQ {
        let mut gens: MatZ = (0..4).map(|i| (0..4).map(|j| if i == j { Z::from(4) } else { Z::zero() }).collect()).collect();
        for m in 0..256u32 {
            let c: Vec<i64> = (0..4).map(|k| ((m >> (2 * k)) & 3) as i64).collect();
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let e = self.element(c.iter().map(|&v| Q::new(v.into(), 4.into())).collect());
            if e.char_poly_is_integral() {
                gens.push(c.iter().map(|&v| Z::from(v)).collect());
            }
        }
        hnf_rows_lower(&gens)
            .into_iter()
            .map(|r| r.into_iter().map(|v| Q::new(v, Z::from(4))).collect())
            .collect()
    }

    /// Embedding of the radical generator `k` at embedding `i` as an exact sign factor
    /// (biquadratic and quadratic only).
    pub(crate) fn radical_sign(&self, i: usize, k: usize) -> i8 {
        match self.0.n {
            2 => {
                if k == 0 || i == 0 {
                    1
                } else {
                    -1
                }
            }
            4 => {
                let s1: i8 = if i == 1 || i == 3 { -1 } else { 1 };
                let s2: i8 = if i >= 2 { -1 } else { 1 };
                [1, s1, s2, s1 * s2][k]
            }
            _ => unreachable!("radical signs exist only for quadratic and biquadratic fields"),
        }
    }

    /// Enclosures of the embeddings of radical basis elements at a given precision.
    pub(crate) fn radical_intervals(&self, i: usize, bits: u32) -> Vec<Interval> {
        match &self.0.kind {
            Kind::Quadratic { d } => {
                let s = sqrt_interval(d, bits);
                vec![Interval::point(q(1)), if i == 0 { s } else { s.neg() }]
            }
            Kind::Biquadratic { d1, d2, d3, .. } => {
                let roots = [sqrt_interval(d1, bits), sqrt_interval(d2, bits), sqrt_interval(d3, bits)];
                let mut v = vec![Interval::point(q(1))];
                for k in 1..4 {
                    let r = roots[k - 1].clone();
                    v.push(if self.radical_sign(i, k) < 0 { r.neg() } else { r });
                }
                v
            }
            Kind::Cubic { poly, roots, .. } => {
                let r = refine_root(poly, roots[i].clone(), bits);
                vec![Interval::point(q(1)), r.clone(), r.mul(&r)]
            }
        }
    }

    /// Multiplication-by-`α` matrix on integral-basis coordinates (column k = coordinates of
    /// `α b_k`), for integral `α`.
    pub fn mul_matrix_int(&self, alpha: &FieldElement) -> Option<MatZ> {
        let b = self.integral_basis();
        let n = self.0.n;
        let cols: Vec<Vec<Z>> = b.iter().map(|bk| (alpha * bk).int_coords()).collect::<Option<_>>()?;
        Some((0..n).map(|i| (0..n).map(|k| cols[k][i].clone()).collect()).collect())
    }
}

/// `sign(x + y √m)` for rationals x, y and a positive non-square integer m.
pub fn sign_quadratic_surd(x: &Q, y: &Q, m: &Z) -> Sign {
    let sx = Sign::of_q(x);
    let sy = Sign::of_q(y);
    if sy == Sign::Zero {
        return sx;
    }
    if sx == Sign::Zero || sx == sy {
        return sy;
    }
    // opposite signs: compare x^2 with m y^2
    let diff = x * x - qz(m.clone()) * y * y;
    sx.mul(Sign::of_q(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    #[test]
    fn quadratic5() {
        let f = make_field(FieldDescriptor::Quadratic { d: 5 }).unwrap();
        assert_eq!(f.discriminant(), &Z::from(5));
        let b = f.integral_basis();
        assert_eq!(b[1].coords(), &[frac(1, 2), frac(1, 2)]);
        assert_eq!(make_field(FieldDescriptor::Quadratic { d: 3 }).unwrap().discriminant(), &Z::from(12));
        assert!(matches!(make_field(FieldDescriptor::Quadratic { d: 12 }), Err(Error::NonSquarefree(_))));
    }

    #[test]
    fn williams_basis() {
        let f = make_field(FieldDescriptor::Biquadratic { d1: 5, d2: 3 }).unwrap();
        assert_eq!(f.discriminant(), &Z::from(3600));
        let b: Vec<Vec<Q>> = f.integral_basis().iter().map(|e| e.coords().to_vec()).collect();
        let h = frac(1, 2);
        assert_eq!(
            b,
            vec![
                vec![q(1), q(0), q(0), q(0)],
                vec![h.clone(), h.clone(), q(0), q(0)],
                vec![q(0), q(0), q(1), q(0)],
                vec![q(0), q(0), h.clone(), h.clone()],
            ]
        );
    }

    #[test]
    fn cubic_basis_and_monogenicity() {
        let f = make_field(FieldDescriptor::SimplestCubic { a: 1 }).unwrap();
        assert_eq!(f.discriminant(), &Z::from(169));
        assert_eq!(f.monogenicity(), Monogenicity::Proven);
        // a = 3: a^2+3a+9 = 27
        assert!(matches!(make_field(FieldDescriptor::SimplestCubic { a: 3 }), Err(Error::MonogenicityUnknown(3))));
        let f3 = Field::with_options(FieldDescriptor::SimplestCubic { a: 3 }, FieldOptions { assume_monogenic: true }).unwrap();
        assert_eq!(f3.monogenicity(), Monogenicity::Assumed);
    }

    #[test]
    fn surd_sign() {
        assert_eq!(sign_quadratic_surd(&q(1), &q(-1), &Z::from(2)), Sign::Neg);
        assert_eq!(sign_quadratic_surd(&q(2), &q(-1), &Z::from(3)), Sign::Pos);
        assert_eq!(sign_quadratic_surd(&q(0), &q(0), &Z::from(3)), Sign::Zero);
    }

    #[test]
    fn f2_ranks() {
        let v = |b: &[u8]| SignatureVector { bits: b.to_vec() };
        assert_eq!(f2_rank(&[v(&[1, 1, 0, 0]), v(&[0, 1, 1, 0]), v(&[1, 0, 1, 0])]), 2);
        assert_eq!(f2_rank(&[v(&[1, 1, 1, 1]), v(&[0, 1, 0, 1]), v(&[0, 0, 1, 1])]), 3);
    }
}
