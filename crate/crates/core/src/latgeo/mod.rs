//! Integer volume and distance, codifferent functionals, sail certificates, facets,
//! triangulations and lattice-point counts for integer polytopes in `O_K`.

pub mod hull;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{qvec, qz, rational_gcd, Q, Z};
use crate::error::{Error, Result};
use crate::field::{enumerate_integers_in_box, Field, FieldDescriptor, FieldElement};
use crate::linalg::{maximal_minor_gcd, rank_z, smith_diagonal, solve_q, MatQ, MatZ};
use hull::{check_triangulation, extreme_points, hull_facets, insert_point, lattice_points, pulling_triangulation, simplex_det, Chart, Facet};

/// Largest chart bounding box scanned for lattice points.
pub const LATTICE_POINT_CAP: u64 = 50_000_000;

/// A polytope with integral vertices, stored in integral-basis coordinates.
#[derive(Clone, Debug)]
pub struct IntegerPolytope {
    field: Field,
    vertices: Vec<FieldElement>,
    coords: Vec<Vec<Z>>,
    dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coeffs(#[serde(with = "qvec")] pub Vec<Q>);

/// `{"field": …, "vertices": [["p/q", …], …]}` with vertices in the radical basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub field: FieldDescriptor,
    pub vertices: Vec<Coeffs>,
}

impl IntegerPolytope {
    /// Deduplicates the points; they must be integral. The polytope is their convex hull.
    pub fn new(field: &Field, points: &[FieldElement]) -> Result<IntegerPolytope> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty polytope".into()));
        }
        let mut vertices: Vec<FieldElement> = Vec::new();
        let mut coords = Vec::new();
        for p in points {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            let c = p.int_coords().ok_or(Error::NotIntegral)?;
            if !coords.contains(&c) {
                coords.push(c);
                vertices.push(p.clone());
            }
        }
        let diffs: MatZ = coords[1..].iter().map(|c| c.iter().zip(&coords[0]).map(|(a, b)| a - b).collect()).collect();
        let dim = if diffs.is_empty() { 0 } else { rank_z(&diffs) };
        Ok(IntegerPolytope { field: field.clone(), vertices, coords, dim })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vertices(&self) -> &[FieldElement] {
        &self.vertices
    }

    pub fn vertex_coords(&self) -> &[Vec<Z>] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            field: self.field.descriptor().clone(),
            vertices: self.vertices.iter().map(|v| Coeffs(v.coords().to_vec())).collect(),
        }
    }

    pub fn from_json(j: &PolytopeJson) -> Result<IntegerPolytope> {
        let field = Field::new(j.field.clone())?;
        let n = field.degree();
        let pts = j
            .vertices
            .iter()
            .map(|c| {
                if c.0.len() != n {
                    Err(Error::Parse(format!("vertex needs {n} coefficients")))
                } else {
                    Ok(field.element(c.0.clone()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        IntegerPolytope::new(&field, &pts)
    }

    /// `α·S` for a unit (or any integral) `α`.
    pub fn scale(&self, alpha: &FieldElement) -> Result<IntegerPolytope> {
        let pts: Vec<FieldElement> = self.vertices.iter().map(|v| v * alpha).collect();
        IntegerPolytope::new(&self.field, &pts)
    }

    fn chart(&self) -> (Chart, Vec<Vec<Z>>) {
        let chart = Chart::new(&self.coords);
        let local = self.coords.iter().map(|c| chart.coords(c).expect("vertex on its own plane")).collect();
        (chart, local)
    }

    fn hull(&self) -> Result<(Chart, Vec<Vec<Z>>, Vec<Facet>)> {
        if self.dim == 0 {
            return Err(Error::DegenerateInput("a point has no facets".into()));
        }
        let (chart, local) = self.chart();
        let facets = hull_facets(&local);
        Ok((chart, local, facets))
    }

    /// Extreme points, in input order.
    pub fn extreme_vertices(&self) -> Result<Vec<FieldElement>> {
        if self.dim == 0 {
            return Ok(self.vertices.clone());
        }
        let (_, local, facets) = self.hull()?;
        Ok(extreme_points(&local, &facets).into_iter().map(|i| self.vertices[i].clone()).collect())
    }

    /// Sorted integral coordinates of the extreme points; equal keys mean equal polytopes.
    pub fn canonical_key(&self) -> Vec<Vec<Z>> {
        let mut k: Vec<Vec<Z>> = self
            .extreme_vertices()
            .unwrap_or_else(|_| self.vertices.clone())
            .iter()
            .map(|v| v.int_coords().unwrap())
            .collect();
        k.sort();
        k
    }

    /// The `(dim-1)`-faces, each given by its extreme points.
    pub fn facets(&self) -> Result<Vec<IntegerPolytope>> {
        let (_, local, facets) = self.hull()?;
        let ext = extreme_points(&local, &facets);
        let mut out = Vec::new();
        for f in &facets {
            let pts: Vec<FieldElement> = f.members.iter().filter(|m| ext.contains(m)).map(|&m| self.vertices[m].clone()).collect();
            let face = IntegerPolytope::new(&self.field, &pts)?;
            let ex = face.extreme_vertices()?;
            out.push(IntegerPolytope::new(&self.field, &ex)?);
        }
        Ok(out)
    }

    /// All lattice points of the polytope.
    pub fn lattice_points(&self) -> Result<Vec<FieldElement>> {
        if self.dim == 0 {
            return Ok(self.vertices.clone());
        }
        let (chart, local, facets) = self.hull()?;
        let pts = lattice_points(&local, &facets, LATTICE_POINT_CAP)?;
        Ok(pts.iter().map(|c| self.field.from_int(&chart.lift(c))).collect())
    }

    /// Whether `x` lies in the polytope (relative interior or boundary).
    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        let c = x.int_coords().ok_or(Error::NotIntegral)?;
        let (chart, _, facets) = self.hull()?;
        Ok(match chart.coords(&c) {
            Some(l) => hull::contains(&facets, &l),
            None => false,
        })
    }
}

/// Integer volume of a simplex: index of the edge lattice in its saturation.
pub fn integer_volume(s: &IntegerPolytope) -> Result<Z> {
    if !s.is_simplex() {
        return Err(Error::NotASimplex(format!("{} vertices in dimension {}", s.vertices.len(), s.dim)));
    }
    if s.dim == 0 {
        return Ok(Z::one());
    }
    let v = &s.coords;
    let diffs: MatZ = v[1..].iter().map(|c| c.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
    let g = maximal_minor_gcd(&diffs);
    debug_assert_eq!(smith_diagonal(&diffs).iter().product::<Z>(), g);
    Ok(g)
}

/// Integer distance from the origin of the affine hull; 0 if the hull contains the origin.
pub fn integer_distance(s: &IntegerPolytope) -> Z {
    let v = &s.coords;
    let diffs: MatZ = v[1..].iter().map(|c| c.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
    let mut with0 = vec![v[0].clone()];
    with0.extend(diffs.iter().cloned());
    if rank_z(&with0) == s.dim {
        return Z::zero();
    }
    let basis = if s.dim == 0 { vec![] } else { hull_basis(&diffs) };
    let mut m = vec![v[0].clone()];
    m.extend(basis.iter().cloned());
    let g_all = maximal_minor_gcd(&m);
    let g = if basis.is_empty() { Z::one() } else { maximal_minor_gcd(&basis) };
    g_all / g
}

fn hull_basis(diffs: &MatZ) -> MatZ {
    crate::linalg::hnf_rows(diffs)
}

/// `δ ∈ O_K^∨` and level `k = ID(S)` with `Tr(δ v) = k` on every vertex.
pub fn codifferent_functional(s: &IntegerPolytope) -> Result<(FieldElement, Z)> {
    let n = s.field.degree();
    if s.dim + 1 != n {
        return Err(Error::DegeneratePlane(format!("dimension {} in degree {n}", s.dim)));
    }
    // choose n linearly independent vertices
    let mut chosen: MatZ = Vec::new();
    for c in &s.coords {
        let mut t = chosen.clone();
        t.push(c.clone());
        if rank_z(&t) == t.len() {
            chosen = t;
        }
        if chosen.len() == n {
            break;
        }
    }
    if chosen.len() < n {
        return Err(Error::DegeneratePlane("affine hull passes through the origin".into()));
    }
    let m: MatQ = chosen.iter().map(|r| r.iter().map(|x| qz(x.clone())).collect()).collect();
    let f = solve_q(&m, &vec![Q::one(); n]).ok_or_else(|| Error::DegeneratePlane("singular".into()))?;
    for c in &s.coords {
        let val: Q = c.iter().zip(&f).map(|(a, b)| qz(a.clone()) * b).sum();
        if !val.is_one() {
            return Err(Error::DegeneratePlane("vertices are not coplanar".into()));
        }
    }
    let g = rational_gcd(&f);
    let prim: Vec<Q> = f.iter().map(|x| x / &g).collect();
    let k = (Q::one() / &g).to_integer();
    Ok((dual_element(&s.field, &prim)?, k))
}

/// The element `δ` with `Tr(δ b_k) = c_k` on the integral basis.
pub fn dual_element(field: &Field, c: &[Q]) -> Result<FieldElement> {
    let n = field.degree();
    let b = field.integral_basis();
    // Tr(δ b_k) = Σ_j y_j Tr(r_j b_k)
    let m: MatQ = (0..n).map(|k| (0..n).map(|j| (&field.gen(j) * &b[k]).trace()).collect()).collect();
    let y = solve_q(&m, c).ok_or(Error::DivisionByZero)?;
    Ok(field.element(y))
}

/// Evidence that a polytope lies on the hyperplane `Tr(δ ·) = k`, `δ ≻ 0`.
#[derive(Clone, Debug)]
pub struct SailCertificate {
    pub polytope: IntegerPolytope,
    pub delta: FieldElement,
    pub k: Z,
}

fn check_vertices(s: &IntegerPolytope) -> Result<()> {
    for (i, v) in s.vertices.iter().enumerate() {
        if !v.is_totally_positive() {
            return Err(Error::NotCertifiable(format!("vertex {i} is not totally positive")));
        }
    }
    Ok(())
}

/// Level-one certificate: the polytope lies on a face of the sail.
pub fn certify_on_sail(s: &IntegerPolytope) -> Result<SailCertificate> {
    check_vertices(s)?;
    let (delta, k) = codifferent_functional(s)?;
    if !k.is_one() {
        return Err(Error::NotCertifiable(format!("plane has level {k}, not 1")));
    }
    if !delta.is_totally_positive() {
        return Err(Error::NotCertifiable("normal functional is not totally positive".into()));
    }
    Ok(SailCertificate { polytope: s.clone(), delta, k })
}

/// Certificate at the polytope's own level `k`, valid when no `α ≻ 0` has
/// `Tr(δα) < k`; that is checked by enumerating the bounded region.
pub fn certify_supporting_plane(s: &IntegerPolytope) -> Result<SailCertificate> {
    check_vertices(s)?;
    let (delta, k) = codifferent_functional(s)?;
    if !delta.is_totally_positive() {
        return Err(Error::NotCertifiable("normal functional is not totally positive".into()));
    }
    if !k.is_one() {
        let n = s.field.degree();
        let bits = 64;
        let hi: Vec<Q> = (0..n)
            .map(|i| {
                let t = delta.interval_embedding(i, bits);
                // τ_i(α) < k / τ_i(δ) <= k / lo
                qz(k.clone()) / t.lo + Q::one()
            })
            .collect();
        let below = enumerate_integers_in_box(&s.field, &vec![Q::zero(); n], &hi)?;
        for c in below {
            let a = s.field.from_int(&c);
            if a.is_totally_positive() && (&delta * &a).trace() < qz(k.clone()) {
                return Err(Error::NotCertifiable(format!("{a} lies below the plane")));
            }
        }
    }
    Ok(SailCertificate { polytope: s.clone(), delta, k })
}

/// Simplices as index tuples into `points`.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub points: Vec<FieldElement>,
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationReport {
    pub volume: Z,
    pub simplex_volumes: Vec<Z>,
    pub unimodular: bool,
    /// Whether simplices meet along common faces; `false` for a valid dissection that
    /// is not a triangulation in the strict sense.
    pub face_to_face: bool,
}

impl TriangulationReport {
    pub fn simplex_count(&self) -> usize {
        self.simplex_volumes.len()
    }
}

struct Local {
    chart: Chart,
    pts: Vec<Vec<Z>>,
    facets: Vec<Facet>,
}

fn local_frame(s: &IntegerPolytope, extra: &[FieldElement]) -> Result<Local> {
    let (chart, _, _) = s.hull()?;
    let mut pts: Vec<Vec<Z>> = s.coords.iter().map(|c| chart.coords(c).unwrap()).collect();
    for e in extra {
        let c = e.int_coords().ok_or(Error::NotIntegral)?;
        pts.push(chart.coords(&c).ok_or_else(|| Error::DegenerateInput(format!("{e} is off the polytope plane")))?);
    }
    let facets = hull_facets(&pts);
    Ok(Local { chart, pts, facets })
}

/// Pulling triangulation on the extreme points only.
pub fn triangulate_vertices(s: &IntegerPolytope) -> Result<Triangulation> {
    if s.dim == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let idx: Vec<usize> = (0..s.coords.len()).collect();
    let simplices = pulling_triangulation(&s.coords, &idx);
    Ok(Triangulation { points: s.vertices.clone(), simplices })
}

/// Triangulation using every lattice point of the polytope (dimension 1 to 3).
/// In dimension at most two the result is unimodular.
pub fn triangulate(s: &IntegerPolytope) -> Result<Triangulation> {
    if s.dim == 0 || s.dim > 3 {
        return Err(Error::UnsupportedDimension(s.dim));
    }
    let base = triangulate_vertices(s)?;
    let lp = s.lattice_points()?;
    let mut points = s.vertices.clone();
    for p in lp {
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let loc = local_frame(s, &points[s.vertices.len()..])?;
    let mut simplices = base.simplices;
    for p in s.vertices.len()..points.len() {
        simplices = insert_point(&loc.pts, simplices, p);
    }
    let _ = &loc.chart;
    Ok(Triangulation { points, simplices })
}

/// Validates `t` as a triangulation of `s`, returning the integer volume.
pub fn validate_triangulation(s: &IntegerPolytope, t: &Triangulation) -> Result<TriangulationReport> {
    let extra: Vec<FieldElement> = t.points.iter().filter(|p| !s.vertices.contains(p)).cloned().collect();
    // map triangulation points to chart indices
    let loc = local_frame(s, &extra)?;
    let index_of = |p: &FieldElement| -> usize {
        match s.vertices.iter().position(|v| v == p) {
            Some(i) => i,
            None => s.vertices.len() + extra.iter().position(|e| e == p).unwrap(),
        }
    };
    let simplices: Vec<Vec<usize>> = t.simplices.iter().map(|sx| sx.iter().map(|&i| index_of(&t.points[i])).collect()).collect();
    let base_idx: Vec<usize> = (0..s.coords.len()).collect();
    let reference: Z = pulling_triangulation(&loc.pts, &base_idx).iter().map(|sx| simplex_det(&loc.pts, sx).abs()).sum();
    check_triangulation(&loc.pts, &loc.facets, &simplices, &reference).map_err(Error::DegenerateInput)?;
    let vols: Vec<Z> = simplices.iter().map(|sx| simplex_det(&loc.pts, sx).abs()).collect();
    let unimodular = vols.iter().all(|v| v.is_one());
    Ok(TriangulationReport { volume: reference, simplex_volumes: vols, unimodular, face_to_face: true })
}

/// Like `validate_triangulation`, but also accepts simplices that cover the polytope
/// with disjoint interiors without meeting face to face.
pub fn validate_dissection(s: &IntegerPolytope, t: &Triangulation) -> Result<TriangulationReport> {
    match validate_triangulation(s, t) {
        Ok(r) => Ok(r),
        Err(strict) => {
            let extra: Vec<FieldElement> = t.points.iter().filter(|p| !s.vertices.contains(p)).cloned().collect();
            let loc = local_frame(s, &extra)?;
            let index_of = |p: &FieldElement| -> usize {
                match s.vertices.iter().position(|v| v == p) {
                    Some(i) => i,
                    None => s.vertices.len() + extra.iter().position(|e| e == p).unwrap(),
                }
            };
            let simplices: Vec<Vec<usize>> = t.simplices.iter().map(|sx| sx.iter().map(|&i| index_of(&t.points[i])).collect()).collect();
            let base_idx: Vec<usize> = (0..s.coords.len()).collect();
            let reference: Z = pulling_triangulation(&loc.pts, &base_idx).iter().map(|sx| simplex_det(&loc.pts, sx).abs()).sum();
            hull::check_dissection(&loc.pts, &loc.facets, &simplices, &reference)
                .map_err(|e| Error::DegenerateInput(format!("{e} (strict check: {strict})")))?;
            let vols: Vec<Z> = simplices.iter().map(|sx| simplex_det(&loc.pts, sx).abs()).collect();
            let unimodular = vols.iter().all(|v| v.is_one());
            Ok(TriangulationReport { volume: reference, simplex_volumes: vols, unimodular, face_to_face: false })
        }
    }
}

/// Integer volume of any polytope, via a pulling triangulation.
pub fn polytope_volume(s: &IntegerPolytope) -> Result<Z> {
    if s.dim == 0 {
        return Ok(Z::one());
    }
    Ok(validate_triangulation(s, &triangulate_vertices(s)?)?.volume)
}

/// Lattice points of a two-dimensional polytope: `(boundary, interior)` by Pick's formula.
pub fn lattice_points_on_face(s: &IntegerPolytope) -> Result<(Z, Z)> {
    if s.dim != 2 {
        return Err(Error::UnsupportedDimension(s.dim));
    }
    let (_, local, facets) = s.hull()?;
    let ext = extreme_points(&local, &facets);
    let mut boundary = Z::zero();
    for f in &facets {
        let ends: Vec<usize> = f.members.iter().filter(|m| ext.contains(m)).cloned().collect();
        let e: Vec<Z> = local[ends[1]].iter().zip(&local[ends[0]]).map(|(a, b)| a - b).collect();
        boundary += e.iter().fold(Z::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    }
    let area2 = polytope_volume(s)?;
    let interior = (area2 - &boundary + 2) / 2;
    Ok((boundary, interior))
}

/// Nonzero lattice points `Σ λ_k α_k`, `0 <= λ_k < 1`, of the parallelepiped spanned by
/// the vertices of a simplex of dimension `n-1` (found by box enumeration).
pub fn parallelepiped_points(s: &IntegerPolytope) -> Result<Vec<FieldElement>> {
    let n = s.field.degree();
    if !s.is_simplex() || s.dim + 1 != n {
        return Err(Error::NotASimplex(format!("need {n} vertices spanning K")));
    }
    for v in &s.vertices {
        if !v.is_totally_positive() {
            return Err(Error::NotTotallyPositive);
        }
    }
    let m: MatQ = s.coords.iter().map(|r| r.iter().map(|x| qz(x.clone())).collect()).collect();
    let hi: Vec<Q> = (0..n)
        .map(|i| s.vertices.iter().fold(Q::zero(), |acc, v| acc + v.interval_embedding(i, 64).hi) + Q::one())
        .collect();
    let cands = enumerate_integers_in_box(&s.field, &vec![Q::zero(); n], &hi)?;
    let mt: MatQ = (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect();
    let mut out = Vec::new();
    for c in cands {
        let x: Vec<Q> = c.iter().map(|v| qz(v.clone())).collect();
        // λ M = x  ⇔  M^T λ = x
        let lam = solve_q(&mt, &x).ok_or(Error::DegeneratePlane("singular simplex".into()))?;
        if lam.iter().all(|l| !l.is_negative() && l < &Q::one()) {
            out.push(s.field.from_int(&c));
        }
    }
    Ok(out)
}

/// `(IV·ID − 1, enumerated count)` for the parallelepiped of a simplex.
pub fn parallelepiped_lattice_count(s: &IntegerPolytope) -> Result<(Z, usize)> {
    let formula = integer_volume(s)? * integer_distance(s) - 1;
    let pts = parallelepiped_points(s)?;
    Ok((formula, pts.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn shanks(a: i64) -> (Field, IntegerPolytope, IntegerPolytope) {
        let k = make_field(FieldDescriptor::SimplestCubic { a }).unwrap();
        let one = k.one();
        let e1 = k.element_i64(&[0, 0, 1]);
        let e2 = k.element_i64(&[1, 2, 1]);
        let a1 = IntegerPolytope::new(&k, &[one.clone(), e1.clone(), e2.clone()]).unwrap();
        let e12 = e1.div(&e2).unwrap();
        assert_eq!(e12, k.element_i64(&[-(a + 1), -(a * a + 3 * a + 3), a + 2]));
        let a2 = IntegerPolytope::new(&k, &[one, e1, e12]).unwrap();
        (k, a1, a2)
    }

    #[test]
    fn shanks_faces() {
        for a in [-1i64, 1, 2] {
            let (_, a1, a2) = shanks(a);
            assert_eq!(integer_distance(&a1), Z::from(2));
            assert_eq!(integer_distance(&a2), Z::from(1));
            assert_eq!(integer_volume(&a1).unwrap(), Z::from(1));
            assert_eq!(integer_volume(&a2).unwrap(), Z::from(a * a + 3 * a + 3));
            let (b, i) = lattice_points_on_face(&a2).unwrap();
            assert_eq!(b, Z::from(3));
            assert_eq!(i, Z::from((a * a + 3 * a + 2) / 2));
            assert_eq!(a2.lattice_points().unwrap().len() as i64, 3 + (a * a + 3 * a + 2) / 2);
            let t = triangulate(&a2).unwrap();
            let r = validate_triangulation(&a2, &t).unwrap();
            assert!(r.unimodular);
            assert_eq!(r.volume, Z::from(a * a + 3 * a + 3));
            assert!(certify_on_sail(&a2).is_ok());
            assert!(matches!(certify_on_sail(&a1), Err(Error::NotCertifiable(_))));
            let c = certify_supporting_plane(&a1).unwrap();
            assert_eq!(c.k, Z::from(2));
            let (f, e) = parallelepiped_lattice_count(&a1).unwrap();
            assert_eq!((f, e), (Z::from(1), 1));
        }
    }

    #[test]
    fn origin_plane_and_json() {
        let k = make_field(FieldDescriptor::Quadratic { d: 3 }).unwrap();
        let s = IntegerPolytope::new(&k, &[k.element_i64(&[1, 1]), k.element_i64(&[-1, -1])]).unwrap();
        assert_eq!(integer_distance(&s), Z::zero());
        let j = serde_json::to_string(&s.to_json()).unwrap();
        let back = IntegerPolytope::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.canonical_key(), s.canonical_key());
    }

    #[test]
    fn quadratic_sail_segment() {
        let c = crate::cfrac::QuadraticCf::new(7).unwrap();
        let b = c.convergent(-1).beta;
        let b2 = c.convergent(1).beta;
        let s = IntegerPolytope::new(&c.field, &[b, b2]).unwrap();
        let cert = certify_on_sail(&s).unwrap();
        assert_eq!(cert.delta, c.delta(0));
    }
}
