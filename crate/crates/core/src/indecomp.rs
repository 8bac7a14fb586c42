//! Indecomposable totally positive integers: exact decomposition test, enumeration
//! modulo totally positive units, and counts from sail faces.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{q, q_to_f64, Q, Z};
use crate::cfrac::QuadraticCf;
use crate::error::{Error, Result};
use crate::field::{enumerate_integers_in_box_with_cap, Field, FieldDescriptor, FieldElement, DEFAULT_BOX_CAP};
use crate::latgeo::{integer_distance, integer_volume, parallelepiped_points, validate_dissection, IntegerPolytope, Triangulation};
use crate::par;
use crate::units::unit_system;

/// Generators of the totally positive units, one per independent direction.
pub fn totally_positive_unit_generators(field: &Field) -> Result<Vec<FieldElement>> {
    match field.descriptor() {
        FieldDescriptor::Quadratic { d } => Ok(vec![QuadraticCf::new(*d)?.totally_positive_unit()]),
        FieldDescriptor::SimplestCubic { .. } => Ok(vec![field.element_i64(&[0, 0, 1]), field.element_i64(&[1, 2, 1])]),
        FieldDescriptor::Biquadratic { .. } => Ok(unit_system(field)?.totally_positive_generators()),
    }
}

fn upper_bounds(alpha: &FieldElement) -> Vec<Q> {
    (0..alpha.field().degree()).map(|i| alpha.interval_embedding(i, 64).hi).collect()
}

/// Whether a totally positive integer is not a sum of two totally positive integers.
pub fn is_indecomposable(alpha: &FieldElement) -> Result<bool> {
    is_indecomposable_with_cap(alpha, DEFAULT_BOX_CAP)
}

pub fn is_indecomposable_with_cap(alpha: &FieldElement, cap: f64) -> Result<bool> {
    if !alpha.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let field = alpha.field();
    let n = field.degree();
    let ea = alpha.embeddings_f64();
    let cands = enumerate_integers_in_box_with_cap(field, &vec![Q::zero(); n], &upper_bounds(alpha), cap)?;
    for c in cands {
        // Open-box candidates satisfy 0 < τ_i(β) < hi_i; only τ_i(β) < τ_i(α) remains.
        if let Some(ci) = c.iter().map(|v| v.to_i64()).collect::<Option<Vec<i64>>>() {
            let eb = field.embed_int_f64(&ci);
            let tol = |i: usize| 1e-9 * (1.0 + ea[i].abs());
            if (0..n).any(|i| ea[i] - eb[i] < -tol(i)) {
                continue;
            }
        }
        let b = field.from_int(&c);
        if b.is_totally_positive() && (alpha - &b).is_totally_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `β = εα` for a totally positive unit `ε` (both arguments totally positive).
pub fn associated(a: &FieldElement, b: &FieldElement) -> bool {
    if a.norm() != b.norm() {
        return false;
    }
    match b.div(a) {
        Ok(u) => u.is_integral() && u.is_totally_positive(),
        Err(_) => false,
    }
}

fn canonical_order(a: &FieldElement, b: &FieldElement) -> std::cmp::Ordering {
    a.trace().cmp(&b.trace()).then_with(|| a.coords().cmp(b.coords()))
}

/// One representative per class, picking the least trace (then coordinates).
pub fn reduce_modulo_units(elems: &[FieldElement]) -> Vec<FieldElement> {
    let mut sorted = elems.to_vec();
    sorted.sort_by(canonical_order);
    let mut reps: Vec<FieldElement> = Vec::new();
    for e in sorted {
        if !reps.iter().any(|r| associated(r, &e)) {
            reps.push(e);
        }
    }
    reps
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bruteforce,
    ContinuedFraction,
    SailCertified,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndecomposableSet {
    #[serde(skip)]
    pub field: Option<Field>,
    #[serde(skip)]
    pub representatives: Vec<FieldElement>,
    pub method: Method,
    pub unit_domain: String,
    pub certification: String,
}

impl IndecomposableSet {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    /// Same classes modulo totally positive units.
    pub fn same_classes(&self, other: &[FieldElement]) -> bool {
        let a = &self.representatives;
        a.len() == other.len()
            && a.iter().all(|x| other.iter().any(|y| associated(x, y)))
            && other.iter().all(|y| a.iter().any(|x| associated(x, y)))
    }
}

#[derive(Clone, Debug)]
pub struct BruteForceOptions {
    /// Initial norm bound; the absolute discriminant when `None`.
    pub start_norm: Option<Z>,
    pub max_rounds: usize,
    pub cap: f64,
    /// Slack around the unit fundamental domain, in log-lattice coordinates.
    pub eta: f64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions { start_norm: None, max_rounds: 6, cap: DEFAULT_BOX_CAP, eta: 0.02 }
    }
}

/// Log coordinates of `α` in the basis of unit log vectors (first `n-1` embeddings
/// after removing the norm part).
struct LogFrame {
    logs: Vec<Vec<f64>>,
    inv: Vec<Vec<f64>>,
}

impl LogFrame {
    fn new(units: &[FieldElement]) -> Result<LogFrame> {
        let r = units.len();
        let logs: Vec<Vec<f64>> = units.iter().map(|u| u.embeddings_f64().iter().map(|t| t.abs().ln()).collect()).collect();
        // r × r system on the first r embeddings
        let m: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|k| logs[k][i]).collect()).collect();
        let inv = invert(&m).ok_or_else(|| Error::DegenerateInput("units are dependent".into()))?;
        Ok(LogFrame { logs, inv })
    }

    fn coords(&self, emb: &[f64]) -> Vec<f64> {
        let n = emb.len();
        let mean = emb.iter().map(|t| t.ln()).sum::<f64>() / n as f64;
        let l: Vec<f64> = emb.iter().map(|t| t.ln() - mean).collect();
        let r = self.inv.len();
        (0..r).map(|k| (0..r).map(|i| self.inv[k][i] * l[i]).sum()).collect()
    }

    fn half_widths(&self, eta: f64) -> Vec<f64> {
        let n = self.logs[0].len();
        (0..n).map(|i| self.logs.iter().map(|l| (0.5 + eta) * l[i].abs()).sum()).collect()
    }
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        let piv = a[c][c];
        a[c].iter_mut().for_each(|x| *x /= piv);
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for k in 0..2 * n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exponents `m` with `u = Π gens_k^{m_k}`, found from logarithms and checked exactly.
pub fn unit_exponents(u: &FieldElement, gens: &[FieldElement]) -> Option<Vec<i64>> {
    let frame = LogFrame::new(gens).ok()?;
    let emb = u.embeddings_f64();
    let l: Vec<f64> = emb.iter().map(|t| t.abs()).collect();
    let m: Vec<i64> = frame.coords(&l).iter().map(|c| c.round() as i64).collect();
    let mut prod = u.field().one();
    for (g, &e) in gens.iter().zip(&m) {
        prod = &prod * &g.pow(e).ok()?;
    }
    (&prod == u).then_some(m)
}

/// Indecomposables of norm at most `bound`, one per class modulo totally positive units.
pub fn indecomposables_up_to_norm(field: &Field, units: &[FieldElement], bound: &Z, opts: &BruteForceOptions) -> Result<Vec<FieldElement>> {
    let n = field.degree();
    let frame = LogFrame::new(units)?;
    let nb = bound.to_f64().unwrap_or(f64::INFINITY);
    let scale = nb.powf(1.0 / n as f64);
    let hw = frame.half_widths(opts.eta);
    let hi: Vec<Q> = hw
        .iter()
        .map(|h| {
            let v = scale * h.exp() * (1.0 + 1e-6) + 1e-6;
            Q::from_float(v).unwrap_or_else(|| q(i64::MAX))
        })
        .collect();
    let cands = enumerate_integers_in_box_with_cap(field, &vec![Q::zero(); n], &hi, opts.cap)?;
    let limit = 0.5 + opts.eta + 1e-9;
    let boundq = Q::from_integer(bound.clone());
    let tested: Vec<Option<FieldElement>> = par::map(&cands, |c| {
        let approx = c.iter().map(|v| v.to_i64()).collect::<Option<Vec<i64>>>().map(|ci| field.embed_int_f64(&ci));
        if let Some(emb) = &approx {
            let nf: f64 = emb.iter().product();
            let scale: f64 = emb.iter().map(|t| t.abs()).fold(1.0, f64::max);
            if emb.iter().any(|&t| t < -1e-9 * scale) || nf > nb * (1.0 + 1e-6) + 1e-6 {
                return None;
            }
            if emb.iter().all(|&t| t > 1e-9 * scale) {
                let lc = frame.coords(emb);
                if lc.iter().any(|x| x.abs() > limit + 1e-6) {
                    return None;
                }
            }
        }
        let a = field.from_int(c);
        if !a.is_totally_positive() || a.norm() > boundq {
            return None;
        }
        let emb = a.embeddings_f64();
        if frame.coords(&emb).iter().any(|x| x.abs() > limit) {
            return None;
        }
        match is_indecomposable(&a) {
            Ok(true) => Some(a),
            _ => None,
        }
    });
    let found: Vec<FieldElement> = tested.into_iter().flatten().collect();
    Ok(reduce_modulo_units(&found))
}

fn log_l1(u: &FieldElement) -> f64 {
    u.embeddings_f64().iter().map(|t| t.abs().ln().abs()).sum()
}

/// Greedy pairwise reduction of unit generators in the log lattice (same group, shorter
/// log vectors, hence a smaller fundamental-domain box).
pub fn reduce_unit_generators(units: &[FieldElement]) -> Vec<FieldElement> {
    let mut u = units.to_vec();
    loop {
        let mut improved = false;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i == j {
                    continue;
                }
                for inv in [false, true] {
                    let other = if inv { u[j].inv().expect("unit") } else { u[j].clone() };
                    let cand = &u[i] * &other;
                    if log_l1(&cand) < log_l1(&u[i]) - 1e-9 {
                        u[i] = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            return u;
        }
    }
}

/// Brute-force `ι(K)`, doubling the norm bound until the class count is stable.
pub fn iota_bruteforce(field: &Field, opts: &BruteForceOptions) -> Result<IndecomposableSet> {
    let units = reduce_unit_generators(&totally_positive_unit_generators(field)?);
    let mut bound = opts.start_norm.clone().unwrap_or_else(|| field.discriminant().abs());
    let mut prev = indecomposables_up_to_norm(field, &units, &bound, opts)?;
    for _ in 0..opts.max_rounds {
        let next_bound = &bound * 2;
        let next = indecomposables_up_to_norm(field, &units, &next_bound, opts)?;
        let stable = next.len() == prev.len();
        bound = next_bound;
        prev = next;
        if stable {
            return Ok(IndecomposableSet {
                field: Some(field.clone()),
                representatives: prev,
                method: Method::Bruteforce,
                unit_domain: format!(
                    "log coordinates in [-1/2-{e}, 1/2+{e}] over {} totally positive unit generators",
                    units.len(),
                    e = opts.eta
                ),
                certification: format!("desk-verified up to norm {bound}"),
            });
        }
    }
    Err(Error::BoxTooLarge { predicted: q_to_f64(&Q::from_integer(bound)), cap: opts.cap })
}

/// `ι(K)` for a real quadratic field from its continued fraction.
pub fn iota_continued_fraction(field: &Field) -> Result<IndecomposableSet> {
    let d = match field.descriptor() {
        FieldDescriptor::Quadratic { d } => *d,
        _ => return Err(Error::WrongFieldKind("quadratic")),
    };
    let cf = QuadraticCf::new(d)?;
    Ok(IndecomposableSet {
        field: Some(field.clone()),
        representatives: cf.indecomposables(),
        method: Method::ContinuedFraction,
        unit_domain: format!("upper semiconvergents beta_(i,l), i odd in [-1, {}]", cf.even_period() - 3),
        certification: "complete".into(),
    })
}

/// A sail face with a triangulation.
#[derive(Clone, Debug)]
pub struct SailFace {
    pub face: IntegerPolytope,
    pub triangulation: Triangulation,
}

/// Sail data: faces whose unit translates cover the sail. `closure_verified` records
/// that every facet of every face was matched.
#[derive(Clone, Debug)]
pub struct SailData {
    pub faces: Vec<SailFace>,
    pub closure_verified: bool,
}

/// `ι(K)` from a complete list of sail faces: lattice points on faces plus the
/// indecomposables inside each simplicial parallelepiped.
pub fn iota_from_sail(field: &Field, sail: &SailData) -> Result<IndecomposableSet> {
    if !sail.closure_verified || sail.faces.is_empty() {
        return Err(Error::IncompleteSailData("face closure has not been verified".into()));
    }
    let n = field.degree();
    let mut found = Vec::new();
    for sf in &sail.faces {
        crate::latgeo::certify_supporting_plane(&sf.face)
            .map_err(|e| Error::IncompleteSailData(format!("face not certified: {e}")))?;
        found.extend(sf.face.lattice_points()?);
        let id = integer_distance(&sf.face);
        let report = validate_dissection(&sf.face, &sf.triangulation)?;
        if id.is_one() && report.unimodular {
            continue;
        }
        for s in &sf.triangulation.simplices {
            let pts: Vec<FieldElement> = s.iter().map(|&i| sf.triangulation.points[i].clone()).collect();
            let simplex = IntegerPolytope::new(field, &pts)?;
            for p in parallelepiped_points(&simplex)? {
                if n == 3 || is_indecomposable(&p)? {
                    found.push(p);
                }
            }
        }
    }
    Ok(IndecomposableSet {
        field: Some(field.clone()),
        representatives: reduce_modulo_units(&found),
        method: Method::SailCertified,
        unit_domain: format!("lattice points of {} sail faces and their simplicial parallelepipeds", sail.faces.len()),
        certification: "complete (face closure verified)".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IotaIntBound {
    pub bound: Z,
    pub all_on_face: bool,
}

/// `ι_int(A) <= ID(A) IV(A) - k` for a triangulation into `k` simplices.
pub fn iota_int_bound(face: &IntegerPolytope, t: &Triangulation) -> Result<IotaIntBound> {
    let r = validate_dissection(face, t)?;
    let id = integer_distance(face);
    let bound = &id * &r.volume - Z::from(r.simplex_count());
    let all_on_face = id.is_one() && r.unimodular;
    Ok(IotaIntBound { bound: if all_on_face { Z::zero() } else { bound }, all_on_face })
}

/// `ι_int(A) = (ID(A) - 1) IV(A)` for a face of a cubic sail.
pub fn iota_int_exact_cubic(face: &IntegerPolytope) -> Result<Z> {
    if face.field().degree() != 3 {
        return Err(Error::WrongDegree(face.field().degree()));
    }
    let iv = crate::latgeo::polytope_volume(face)?;
    Ok((integer_distance(face) - 1) * iv)
}

/// Indecomposables in the cone over a face but off it, found by enumerating the
/// parallelepipeds of a triangulation and testing each point.
pub fn iota_int_enumerated(face: &IntegerPolytope, t: &Triangulation) -> Result<Vec<FieldElement>> {
    let mut out = Vec::new();
    for s in &t.simplices {
        let pts: Vec<FieldElement> = s.iter().map(|&i| t.points[i].clone()).collect();
        let simplex = IntegerPolytope::new(face.field(), &pts)?;
        for p in parallelepiped_points(&simplex)? {
            if is_indecomposable(&p)? {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// `R_cls(K) <= 2^(n - sgnrk) s ι(K)`.
pub fn universal_rank_bounds(iota: u64, s: u64, n: u32, sgnrk: u32) -> Z {
    Z::from(2u32).pow(n.saturating_sub(sgnrk)) * Z::from(s) * Z::from(iota)
}

/// Integer volume check used by callers that need a simplex count.
pub fn simplex_volume(s: &IntegerPolytope) -> Result<Z> {
    integer_volume(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn basic_indecomposables() {
        let k = make_field(FieldDescriptor::Quadratic { d: 3 }).unwrap();
        assert!(is_indecomposable(&k.one()).unwrap());
        assert!(!is_indecomposable(&k.element_i64(&[2, 0])).unwrap());
        for a in [-1i64, 1, 2] {
            let c = make_field(FieldDescriptor::SimplestCubic { a }).unwrap();
            assert!(is_indecomposable(&c.element_i64(&[1, 1, 1])).unwrap());
        }
        assert_eq!(is_indecomposable(&k.element_i64(&[1, 1])), Err(Error::NotTotallyPositive));
    }

    #[test]
    fn quadratic_iota() {
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13] {
            let k = make_field(FieldDescriptor::Quadratic { d }).unwrap();
            let bf = iota_bruteforce(&k, &BruteForceOptions::default()).unwrap();
            let cf = iota_continued_fraction(&k).unwrap();
            assert!(bf.same_classes(&cf.representatives), "D = {d}: {} vs {}", bf.count(), cf.count());
        }
    }

    #[test]
    fn rank_bound_arithmetic() {
        assert_eq!(universal_rank_bounds(3, 5, 4, 2), Z::from(60));
        assert_eq!(universal_rank_bounds(1, 3, 2, 2), Z::from(3));
    }
}
