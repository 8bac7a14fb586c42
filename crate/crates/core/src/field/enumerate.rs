//! Integer points of `O_K` whose embeddings lie in a box.
//!
//! The box is mapped to a unit cube, the lattice is LLL-reduced in double precision and
//! a Fincke–Pohst search runs over the circumscribed ball. Candidates are then checked
//! exactly.

use num_traits::{ToPrimitive, Zero};

use super::{Field, Sign};
use crate::arith::{q_to_f64, Q, Z};
use crate::error::{Error, Result};
use crate::par;

pub const DEFAULT_BOX_CAP: f64 = 1e8;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL on the columns of `a` (n × n, column-major input as a list of columns).
/// Returns reduced columns and the unimodular `u` with `reduced = a · u` (column k of `u`).
fn lll(mut cols: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<Vec<i64>>) {
    let n = cols.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|k| (0..n).map(|i| (i == k) as i64).collect()).collect();
    let gso = |cols: &Vec<Vec<f64>>| {
        let mut bs: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut v = cols[i].clone();
            for j in 0..i {
                let bj2 = dot(&bs[j], &bs[j]);
                mu[i][j] = if bj2 > 0.0 { dot(&cols[i], &bs[j]) / bj2 } else { 0.0 };
                for t in 0..v.len() {
                    v[t] -= mu[i][j] * bs[j][t];
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(&cols);
            let r = mu[k][j].round();
            if r != 0.0 {
                let ri = r as i64;
                for t in 0..n {
                    cols[k][t] -= r * cols[j][t];
                    u[k][t] -= ri * u[j][t];
                }
            }
        }
        let (bs, mu) = gso(&cols);
        let lhs = dot(&bs[k], &bs[k]);
        let rhs = (0.99 - mu[k][k - 1] * mu[k][k - 1]) * dot(&bs[k - 1], &bs[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            cols.swap(k, k - 1);
            u.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    (cols, u)
}

fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 / 3.0 * std::f64::consts::PI,
        4 => std::f64::consts::PI.powi(2) / 2.0,
        _ => std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n),
    }
}

fn gamma_half(n: usize) -> f64 {
    // Γ(n/2 + 1)
    let mut g = if n % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() / 2.0 };
    let mut x = if n % 2 == 0 { 1.0 } else { 1.5 };
    while x < n as f64 / 2.0 + 1.0 - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// All integer vectors `x` with `lo_i <= (M x)_i <= hi_i` up to double-precision slack
/// (a superset of the exact set). `m` is given by rows.
pub fn enumerate_box_f64(m: &[Vec<f64>], lo: &[f64], hi: &[f64], cap: f64) -> Result<Vec<Vec<i64>>> {
    let n = m.len();
    let mut center = vec![0.0; n];
    let mut half = vec![0.0; n];
    for i in 0..n {
        if hi[i] < lo[i] {
            return Ok(vec![]);
        }
        center[i] = (lo[i] + hi[i]) / 2.0;
        let h = (hi[i] - lo[i]) / 2.0;
        half[i] = h * (1.0 + 1e-9) + 1e-9 * (center[i].abs() + 1.0);
    }
    // columns of diag(1/h) M
    let cols: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|i| m[i][k] / half[i]).collect()).collect();
    let (red, u) = lll(cols);
    let yc: Vec<f64> = (0..n).map(|i| center[i] / half[i]).collect();
    // QR by Gram–Schmidt: red[k] = Σ_i r[i][k] q_i
    let mut qs: Vec<Vec<f64>> = Vec::new();
    let mut r = vec![vec![0.0; n]; n];
    for k in 0..n {
        let mut v = red[k].clone();
        for i in 0..k {
            r[i][k] = dot(&red[k], &qs[i]);
            for t in 0..n {
                v[t] -= r[i][k] * qs[i][t];
            }
        }
        let nv = dot(&v, &v).sqrt();
        if !(nv > 0.0) || !nv.is_finite() {
            return Err(Error::DegenerateInput("embedding matrix is singular".into()));
        }
        r[k][k] = nv;
        qs.push(v.into_iter().map(|x| x / nv).collect());
    }
    let det: f64 = (0..n).map(|i| r[i][i]).product();
    let radius2 = n as f64;
    let predicted = unit_ball_volume(n) * radius2.powf(n as f64 / 2.0) / det;
    if predicted > cap {
        return Err(Error::BoxTooLarge { predicted, cap });
    }
    // centre in z-coordinates: R zc = Q^T yc
    let qty: Vec<f64> = (0..n).map(|i| dot(&qs[i], &yc)).collect();
    let mut zc = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| r[i][j] * zc[j]).sum();
        zc[i] = (qty[i] - s) / r[i][i];
    }
    let radius2 = radius2 * (1.0 + 1e-9);
    // top level split for parallelism
    let top = n - 1;
    let w = (radius2.sqrt() / r[top][top]).abs();
    let first = (zc[top] - w).ceil() as i64;
    let last = (zc[top] + w).floor() as i64;
    let tops: Vec<i64> = if last >= first { (first..=last).collect() } else { vec![] };
    let work = std::sync::atomic::AtomicU64::new(0);
    let budget = (cap * 64.0).max(1e6) as u64;
    let found: Vec<Vec<Vec<i64>>> = par::map(&tops, |&zt| {
        let mut z = vec![0i64; n];
        z[top] = zt;
        let d = r[top][top] * (zt as f64 - zc[top]);
        let mut out = Vec::new();
        search(&r, &zc, radius2, top, d * d, &mut z, &mut out, &work, budget);
        out
    });
    if work.load(std::sync::atomic::Ordering::Relaxed) > budget {
        return Err(Error::BoxTooLarge { predicted: work.into_inner() as f64, cap });
    }
    let mut res: Vec<Vec<i64>> = Vec::new();
    for zs in found.into_iter().flatten() {
        let x: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|k| u[k][i] as i128 * zs[k] as i128).sum::<i128>() as i64)
            .collect();
        let y: Vec<f64> = (0..n).map(|i| dot(&m[i], &x.iter().map(|&v| v as f64).collect::<Vec<_>>())).collect();
        if (0..n).all(|i| (y[i] - center[i]).abs() <= half[i]) {
            res.push(x);
        }
    }
    res.sort();
    Ok(res)
}

#[allow(clippy::too_many_arguments)]
fn search(
    r: &[Vec<f64>],
    zc: &[f64],
    radius2: f64,
    level: usize,
    acc: f64,
    z: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    work: &std::sync::atomic::AtomicU64,
    budget: u64,
) {
    if acc > radius2 {
        return;
    }
    if work.fetch_add(1, std::sync::atomic::Ordering::Relaxed) > budget {
        return;
    }
    if level == 0 {
        out.push(z.clone());
        return;
    }
    let i = level - 1;
    let n = r.len();
    let shift: f64 = (i + 1..n).map(|j| r[i][j] * (z[j] as f64 - zc[j])).sum();
    let c = zc[i] - shift / r[i][i];
    let w = ((radius2 - acc).max(0.0)).sqrt() / r[i][i].abs();
    let first = (c - w).ceil() as i64;
    let last = (c + w).floor() as i64;
    for v in first..=last {
        z[i] = v;
        let d = r[i][i] * (v as f64 - c);
        search(r, zc, radius2, i, acc + d * d, z, out, work, budget);
    }
}

/// Integral elements (as integral-basis coordinates) with `lo_i < τ_i(α) < hi_i` for all i.
pub fn enumerate_integers_in_box(field: &Field, lo: &[Q], hi: &[Q]) -> Result<Vec<Vec<Z>>> {
    enumerate_integers_in_box_with_cap(field, lo, hi, DEFAULT_BOX_CAP)
}

pub fn enumerate_integers_in_box_with_cap(field: &Field, lo: &[Q], hi: &[Q], cap: f64) -> Result<Vec<Vec<Z>>> {
    let n = field.degree();
    if lo.len() != n || hi.len() != n {
        return Err(Error::DegenerateInput(format!("box must have {n} sides")));
    }
    let lof: Vec<f64> = lo.iter().map(q_to_f64).collect();
    let hif: Vec<f64> = hi.iter().map(q_to_f64).collect();
    let cands = enumerate_box_f64(field.embedding_matrix_f64(), &lof, &hif, cap)?;
    let keep = par::map(&cands, |x| {
        let y = field.embed_int_f64(x);
        let mut ok = true;
        let mut exact = false;
        for i in 0..n {
            let tol = 1e-7 * (1.0 + y[i].abs() + lof[i].abs() + hif[i].abs());
            if y[i] < lof[i] - tol || y[i] > hif[i] + tol {
                ok = false;
                break;
            }
            if y[i] < lof[i] + tol || y[i] > hif[i] - tol {
                exact = true;
            }
        }
        if ok && exact {
            let a = field.from_int_i64(x);
            ok = (0..n).all(|i| {
                (&a - &field.rational(lo[i].clone())).sign_at(i) == Sign::Pos
                    && (&field.rational(hi[i].clone()) - &a).sign_at(i) == Sign::Pos
            });
        }
        ok
    });
    Ok(cands
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(x, _)| x.into_iter().map(Z::from).collect())
        .collect())
}

#[allow(dead_code)]
pub(crate) fn to_i64(v: &[Z]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

#[allow(dead_code)]
fn is_origin(v: &[Z]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::field::{make_field, FieldDescriptor};

    #[test]
    fn quadratic_box_matches_brute_force() {
        for d in [2i64, 3, 5, 46, 94] {
            let k = make_field(FieldDescriptor::Quadratic { d }).unwrap();
            let lo = vec![q(0), q(0)];
            let hi = vec![q(60), q(9)];
            let got = enumerate_integers_in_box(&k, &lo, &hi).unwrap();
            let mut want = Vec::new();
            for a in -150i64..=150 {
                for b in -30i64..=30 {
                    let x = k.from_int_i64(&[a, b]);
                    let inside = (0..2).all(|i| {
                        x.sign_at(i) == Sign::Pos && (&k.rational(hi[i].clone()) - &x).sign_at(i) == Sign::Pos
                    });
                    if inside {
                        want.push(vec![Z::from(a), Z::from(b)]);
                    }
                }
            }
            want.sort();
            assert_eq!(got, want, "D = {d}");
        }
    }

    #[test]
    fn elongated_box() {
        // unit-sized boxes along a large unit
        let k = make_field(FieldDescriptor::Quadratic { d: 46 }).unwrap();
        let got = enumerate_integers_in_box(&k, &[q(0), q(0)], &[q(100000), q(1)]).unwrap();
        assert!(got.iter().any(|x| x == &vec![Z::from(24335), Z::from(3588)]));
    }

    #[test]
    fn small_boxes() {
        let k = make_field(FieldDescriptor::Quadratic { d: 5 }).unwrap();
        let got = enumerate_integers_in_box(&k, &[q(0), q(0)], &[q(3), q(3)]).unwrap();
        for x in [[1, 0], [2, 0], [1, 1], [2, -1]] {
            assert!(got.contains(&vec![Z::from(x[0]), Z::from(x[1])]));
        }
        let tenth = crate::arith::frac(1, 10);
        for desc in [FieldDescriptor::Quadratic { d: 7 }, FieldDescriptor::SimplestCubic { a: 1 }, FieldDescriptor::Biquadratic { d1: 5, d2: 3 }] {
            let f = make_field(desc).unwrap();
            let n = f.degree();
            assert!(enumerate_integers_in_box(&f, &vec![q(0); n], &vec![tenth.clone(); n]).unwrap().is_empty());
        }
    }

    #[test]
    fn cap() {
        let k = make_field(FieldDescriptor::Quadratic { d: 2 }).unwrap();
        let e = enumerate_integers_in_box_with_cap(&k, &[q(0), q(0)], &[q(10000), q(10000)], 1000.0);
        assert!(matches!(e, Err(Error::BoxTooLarge { .. })));
    }
}
