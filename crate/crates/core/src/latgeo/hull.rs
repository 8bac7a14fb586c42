//! Exact convex hulls, pulling triangulations and lattice-point enumeration for small
//! integer polytopes, all in a unimodular chart of their affine lattice.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{qz, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{coords_in_basis, det_z, hnf_rows, integer_kernel, saturation_basis, solve_q, to_q, MatZ};

/// Affine coordinates on `origin + span`, where `span` is a basis of the saturated
/// difference lattice. Lattice points of the affine plane get integer coordinates.
#[derive(Clone, Debug)]
pub struct Chart {
    pub origin: Vec<Z>,
    pub basis: MatZ,
}

impl Chart {
    pub fn new(points: &[Vec<Z>]) -> Chart {
        let origin = points[0].clone();
        let diffs: MatZ = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .filter(|v: &Vec<Z>| v.iter().any(|x| !x.is_zero()))
            .collect();
        let basis = if diffs.is_empty() { vec![] } else { saturation_basis(&diffs) };
        Chart { origin, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Chart coordinates, or `None` if `x` is off the plane or not a lattice point of it.
    pub fn coords(&self, x: &[Z]) -> Option<Vec<Z>> {
        let v: Vec<Q> = x.iter().zip(&self.origin).map(|(a, b)| qz(a - b)).collect();
        if self.basis.is_empty() {
            return if v.iter().all(|c| c.is_zero()) { Some(vec![]) } else { None };
        }
        let c = coords_in_basis(&to_q(&self.basis), &v)?;
        c.into_iter().map(|t| if t.is_integer() { Some(t.to_integer()) } else { None }).collect()
    }

    pub fn lift(&self, c: &[Z]) -> Vec<Z> {
        let mut x = self.origin.clone();
        for (k, ck) in c.iter().enumerate() {
            for (j, b) in self.basis[k].iter().enumerate() {
                x[j] += ck * b;
            }
        }
        x
    }
}

fn dot(a: &[Z], b: &[Z]) -> Z {
    a.iter().zip(b).fold(Z::zero(), |acc, (x, y)| acc + x * y)
}

fn sub(a: &[Z], b: &[Z]) -> Vec<Z> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A facet `normal · x <= offset`, tight on `members`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Z>,
    pub offset: Z,
    pub members: Vec<usize>,
}

/// Hull facets of full-dimensional points in `Z^d` (brute force over `d`-subsets).
pub fn hull_facets(pts: &[Vec<Z>]) -> Vec<Facet> {
    let d = pts[0].len();
    let mut seen: BTreeMap<(Vec<Z>, Z), Vec<usize>> = BTreeMap::new();
    for combo in crate::linalg::combinations(pts.len(), d) {
        let p0 = &pts[combo[0]];
        let rows: MatZ = combo[1..].iter().map(|&i| sub(&pts[i], p0)).collect();
        let ker = integer_kernel(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        let mut normal = ker[0].clone();
        let g = normal.iter().fold(Z::zero(), |g, x| g.gcd(x));
        normal.iter_mut().for_each(|x| *x /= &g);
        let mut offset = dot(&normal, p0);
        let vals: Vec<Z> = pts.iter().map(|p| dot(&normal, p)).collect();
        let above = vals.iter().any(|v| v > &offset);
        let below = vals.iter().any(|v| v < &offset);
        if above && below {
            continue;
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -x.clone());
            offset = -offset;
        }
        if seen.contains_key(&(normal.clone(), offset.clone())) {
            continue;
        }
        let members: Vec<usize> = (0..pts.len()).filter(|&i| dot(&normal, &pts[i]) == offset).collect();
        seen.insert((normal, offset), members);
    }
    seen.into_iter().map(|((normal, offset), members)| Facet { normal, offset, members }).collect()
}

/// Indices of extreme points: those whose tight facet normals have full rank.
pub fn extreme_points(pts: &[Vec<Z>], facets: &[Facet]) -> Vec<usize> {
    let d = pts[0].len();
    (0..pts.len())
        .filter(|&i| {
            let normals: MatZ = facets.iter().filter(|f| f.members.contains(&i)).map(|f| f.normal.clone()).collect();
            !normals.is_empty() && crate::linalg::rank_z(&normals) == d
        })
        .collect()
}

pub fn contains(facets: &[Facet], x: &[Z]) -> bool {
    facets.iter().all(|f| dot(&f.normal, x) <= f.offset)
}

/// Pulling triangulation of the convex hull of `idx` (indices into `all`), using only
/// extreme points. Each simplex lists indices into `all`.
pub fn pulling_triangulation(all: &[Vec<Z>], idx: &[usize]) -> Vec<Vec<usize>> {
    let pts: Vec<Vec<Z>> = idx.iter().map(|&i| all[i].clone()).collect();
    let chart = Chart::new(&pts);
    if chart.dim() == 0 {
        return vec![vec![idx[0]]];
    }
    let local: Vec<Vec<Z>> = pts.iter().map(|p| chart.coords(p).unwrap()).collect();
    let facets = hull_facets(&local);
    let ext = extreme_points(&local, &facets);
    let v = ext[0];
    let mut out = Vec::new();
    for f in &facets {
        if f.members.contains(&v) {
            continue;
        }
        let sub_idx: Vec<usize> = f.members.iter().map(|&m| idx[m]).collect();
        for mut s in pulling_triangulation(all, &sub_idx) {
            s.insert(0, idx[v]);
            out.push(s);
        }
    }
    out
}

/// Signed chart volume `det(v_1 - v_0, …, v_d - v_0)`.
pub fn simplex_det(pts: &[Vec<Z>], s: &[usize]) -> Z {
    let m: MatZ = s[1..].iter().map(|&i| sub(&pts[i], &pts[s[0]])).collect();
    det_z(&m)
}

/// Barycentric coordinates of `x` in a full-dimensional simplex.
fn barycentric(pts: &[Vec<Z>], s: &[usize], x: &[Z]) -> Vec<Q> {
    let d = pts[0].len();
    // Σ λ_k v_k = x, Σ λ_k = 1
    let mut m = vec![vec![Q::zero(); d + 1]; d + 1];
    let mut rhs = vec![Q::zero(); d + 1];
    for (k, &i) in s.iter().enumerate() {
        for j in 0..d {
            m[j][k] = qz(pts[i][j].clone());
        }
        m[d][k] = Q::from_integer(1.into());
    }
    for j in 0..d {
        rhs[j] = qz(x[j].clone());
    }
    rhs[d] = Q::from_integer(1.into());
    solve_q(&m, &rhs).expect("nondegenerate simplex")
}

/// Refines a triangulation by inserting point `p`: each simplex containing it is split
/// into the simplices obtained by replacing a vertex with positive barycentric weight.
pub fn insert_point(pts: &[Vec<Z>], simplices: Vec<Vec<usize>>, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in simplices {
        if s.contains(&p) {
            out.push(s);
            continue;
        }
        let l = barycentric(pts, &s, &pts[p]);
        if l.iter().any(|x| x.is_negative()) {
            out.push(s);
            continue;
        }
        for k in 0..s.len() {
            if l[k].is_positive() {
                let mut t = s.clone();
                t[k] = p;
                out.push(t);
            }
        }
    }
    out
}

/// Lattice points of a full-dimensional simplex: each is a coset representative of the
/// edge lattice, shifted by at most one edge.
pub fn simplex_lattice_points(pts: &[Vec<Z>], s: &[usize]) -> Vec<Vec<Z>> {
    let d = pts[0].len();
    let v0 = &pts[s[0]];
    let edges: MatZ = s[1..].iter().map(|&i| sub(&pts[i], v0)).collect();
    let h = hnf_rows(&edges);
    let eq = to_q(&edges);
    // λ with λ · edges = x, i.e. edges^T λ = x
    let et: Vec<Vec<Q>> = (0..d).map(|j| (0..d).map(|k| eq[k][j].clone()).collect()).collect();
    let mut out = BTreeSet::new();
    let mut a = vec![Z::zero(); d];
    loop {
        let x: Vec<Q> = a.iter().map(|v| qz(v.clone())).collect();
        let lam = solve_q(&et, &x).expect("nondegenerate simplex");
        let frac: Vec<Q> = lam.iter().map(|l| l - l.floor()).collect();
        let mut cands = vec![frac.clone()];
        for i in 0..d {
            let mut c = frac.clone();
            c[i] += Q::one();
            cands.push(c);
        }
        for c in cands {
            let total: Q = c.iter().sum();
            if total <= Q::one() {
                let p: Vec<Z> = (0..d)
                    .map(|j| {
                        let off: Q = c.iter().zip(&edges).map(|(ck, e)| ck * qz(e[j].clone())).sum();
                        debug_assert!(off.is_integer());
                        &v0[j] + off.to_integer()
                    })
                    .collect();
                out.insert(p);
            }
        }
        let mut j = 0;
        loop {
            if j == d {
                return out.into_iter().collect();
            }
            a[j] += 1;
            if a[j] < h[j][j] {
                break;
            }
            a[j] = Z::zero();
            j += 1;
        }
    }
}

/// All lattice points of a full-dimensional polytope given by chart points and facets.
/// Small boxes are scanned; otherwise the points are collected simplex by simplex.
pub fn lattice_points(pts: &[Vec<Z>], facets: &[Facet], cap: u64) -> Result<Vec<Vec<Z>>> {
    let d = pts[0].len();
    let lo: Vec<Z> = (0..d).map(|j| pts.iter().map(|p| p[j].clone()).min().unwrap()).collect();
    let hi: Vec<Z> = (0..d).map(|j| pts.iter().map(|p| p[j].clone()).max().unwrap()).collect();
    let mut total: f64 = 1.0;
    for j in 0..d {
        total *= (&hi[j] - &lo[j] + 1i64).to_f64().unwrap_or(f64::INFINITY);
    }
    if total > 1e5 {
        let idx: Vec<usize> = (0..pts.len()).collect();
        let simplices = pulling_triangulation(pts, &idx);
        let vol: Z = simplices.iter().map(|s| simplex_det(pts, s).abs()).sum();
        let v = vol.to_f64().unwrap_or(f64::INFINITY);
        if v > cap as f64 {
            return Err(Error::BoxTooLarge { predicted: v, cap: cap as f64 });
        }
        let mut out = BTreeSet::new();
        for s in &simplices {
            out.extend(simplex_lattice_points(pts, s));
        }
        return Ok(out.into_iter().collect());
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if contains(facets, &cur) {
            out.push(cur.clone());
        }
        let mut j = 0;
        loop {
            if j == d {
                return Ok(out);
            }
            cur[j] += 1;
            if cur[j] <= hi[j] {
                break;
            }
            cur[j] = lo[j].clone();
            j += 1;
        }
    }
}

/// Checks that `simplices` triangulate the hull of `pts` (chart coordinates): every
/// simplex is nondegenerate and inside, absolute volumes add up to `volume`, and every
/// codimension-one face is either on a hull facet and used once, or interior and used
/// exactly twice from opposite sides.
pub fn check_triangulation(pts: &[Vec<Z>], facets: &[Facet], simplices: &[Vec<usize>], volume: &Z) -> std::result::Result<(), String> {
    let d = pts[0].len();
    let mut sum = Z::zero();
    let mut faces: BTreeMap<Vec<usize>, Vec<(usize, i8)>> = BTreeMap::new();
    for (si, s) in simplices.iter().enumerate() {
        if s.len() != d + 1 || s.iter().collect::<BTreeSet<_>>().len() != d + 1 {
            return Err(format!("simplex {si} does not have {} distinct vertices", d + 1));
        }
        if s.iter().any(|&i| !contains(facets, &pts[i])) {
            return Err(format!("simplex {si} leaves the polytope"));
        }
        let det = simplex_det(pts, s);
        if det.is_zero() {
            return Err(format!("simplex {si} is degenerate"));
        }
        sum += det.abs();
        for k in 0..s.len() {
            let mut f: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            f.sort();
            // side of the opposite vertex relative to the face
            let p0 = &pts[f[0]];
            let rows: MatZ = f[1..].iter().map(|&i| sub(&pts[i], p0)).collect();
            let n = integer_kernel(&rows, d);
            let side = dot(&n[0], &sub(&pts[s[k]], p0));
            faces.entry(f).or_default().push((si, if side.is_positive() { 1 } else { -1 }));
        }
    }
    if &sum != volume {
        return Err(format!("volumes add up to {sum}, expected {volume}"));
    }
    for (f, users) in &faces {
        let on_boundary = facets.iter().any(|fc| f.iter().all(|i| fc.members.contains(i)));
        match (on_boundary, users.len()) {
            (true, 1) => {}
            (false, 2) if users[0].1 != users[1].1 => {}
            _ => return Err(format!("face {f:?} is used by {} simplices", users.len())),
        }
    }
    Ok(())
}

/// Whether two full-dimensional simplices have disjoint interiors: some hyperplane
/// spanned by edge directions weakly separates them.
pub fn interiors_disjoint(pts: &[Vec<Z>], a: &[usize], b: &[usize]) -> bool {
    let d = pts[0].len();
    let edges = |s: &[usize]| -> Vec<Vec<Z>> {
        let mut e = Vec::new();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                e.push(sub(&pts[s[j]], &pts[s[i]]));
            }
        }
        e
    };
    let mut dirs = edges(a);
    dirs.extend(edges(b));
    let proj = |n: &[Z], s: &[usize]| -> (Z, Z) {
        let v: Vec<Z> = s.iter().map(|&i| dot(n, &pts[i])).collect();
        (v.iter().min().unwrap().clone(), v.iter().max().unwrap().clone())
    };
    for combo in crate::linalg::combinations(dirs.len(), d - 1) {
        let rows: MatZ = combo.iter().map(|&i| dirs[i].clone()).collect();
        let ker = if rows.is_empty() { (0..d).map(|k| (0..d).map(|j| Z::from((j == k) as i64)).collect()).collect() } else { integer_kernel(&rows, d) };
        if ker.len() != 1 && !rows.is_empty() {
            continue;
        }
        for n in &ker {
            let (amin, amax) = proj(n, a);
            let (bmin, bmax) = proj(n, b);
            if amax <= bmin || bmax <= amin {
                return true;
            }
        }
    }
    false
}

/// Checks a dissection: simplices inside the polytope with pairwise disjoint interiors
/// whose volumes add up to `volume` (so they cover it). Faces need not match.
pub fn check_dissection(pts: &[Vec<Z>], facets: &[Facet], simplices: &[Vec<usize>], volume: &Z) -> std::result::Result<(), String> {
    let d = pts[0].len();
    let mut sum = Z::zero();
    for (si, s) in simplices.iter().enumerate() {
        if s.len() != d + 1 {
            return Err(format!("simplex {si} does not have {} vertices", d + 1));
        }
        if s.iter().any(|&i| !contains(facets, &pts[i])) {
            return Err(format!("simplex {si} leaves the polytope"));
        }
        let det = simplex_det(pts, s);
        if det.is_zero() {
            return Err(format!("simplex {si} is degenerate"));
        }
        sum += det.abs();
    }
    if &sum != volume {
        return Err(format!("volumes add up to {sum}, expected {volume}"));
    }
    for i in 0..simplices.len() {
        for j in i + 1..simplices.len() {
            if !interiors_disjoint(pts, &simplices[i], &simplices[j]) {
                return Err(format!("simplices {i} and {j} overlap"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::z;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Z>> {
        v.iter().map(|p| p.iter().map(|&x| z(x)).collect()).collect()
    }

    #[test]
    fn square_hull_and_points() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        let f = hull_facets(&p);
        assert_eq!(f.len(), 4);
        assert_eq!(extreme_points(&p, &f), vec![0, 1, 2, 3]);
        assert_eq!(lattice_points(&p, &f, 100).unwrap().len(), 9);
        let mut via: BTreeSet<Vec<Z>> = BTreeSet::new();
        for s in pulling_triangulation(&p, &[0, 1, 2, 3]) {
            via.extend(simplex_lattice_points(&p, &s));
        }
        assert_eq!(via.len(), 9);
        let skew = pts(&[&[0, 0], &[7, 3], &[2, 1]]);
        let fs = hull_facets(&skew);
        let direct = lattice_points(&skew, &fs, 1000).unwrap();
        let via: Vec<Vec<Z>> = simplex_lattice_points(&skew, &[0, 1, 2]);
        assert_eq!(direct, via);
        let t = pulling_triangulation(&p, &[0, 1, 2, 3, 4]);
        assert_eq!(t.len(), 2);
        let vol: Z = t.iter().map(|s| simplex_det(&p, s).abs()).sum();
        assert_eq!(vol, z(8));
        let t2 = insert_point(&p, t.clone(), 4);
        assert_eq!(t2.len(), 4);
        assert!(check_triangulation(&p, &f, &t2, &vol).is_ok());
        assert!(check_triangulation(&p, &f, &t2[..3], &vol).is_err());
        assert!(check_dissection(&p, &f, &t2, &vol).is_ok());
        let overlap = vec![t2[0].clone(), t2[0].clone(), t2[2].clone(), t2[3].clone()];
        assert!(check_dissection(&p, &f, &overlap, &vol).is_err());
    }

    #[test]
    fn cube_triangulation() {
        let mut v = Vec::new();
        for m in 0..8 {
            v.push(vec![z(m & 1), z((m >> 1) & 1), z((m >> 2) & 1)]);
        }
        let f = hull_facets(&v);
        assert_eq!(f.len(), 6);
        let idx: Vec<usize> = (0..8).collect();
        let t = pulling_triangulation(&v, &idx);
        let vol: Z = t.iter().map(|s| simplex_det(&v, s).abs()).sum();
        assert_eq!(vol, z(6));
        assert!(check_triangulation(&v, &f, &t, &vol).is_ok());
    }

    #[test]
    fn chart_coordinates() {
        let p = pts(&[&[1, 0, 0], &[0, 0, 1], &[1, 2, 1]]);
        let c = Chart::new(&p);
        assert_eq!(c.dim(), 2);
        for x in &p {
            let y = c.coords(x).unwrap();
            assert_eq!(&c.lift(&y), x);
        }
        assert!(c.coords(&[z(0), z(0), z(0)]).is_none());
    }
}
