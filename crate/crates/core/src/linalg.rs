//! Exact linear algebra over Q and Z on small dense matrices (rows of vectors).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Q, Z};

pub type MatQ = Vec<Vec<Q>>;
pub type MatZ = Vec<Vec<Z>>;

/// Gaussian elimination on an augmented copy; returns the row echelon form and the rank.
fn echelon_q(m: &mut MatQ) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = &m[r][j] / &piv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn rank_q(m: &MatQ) -> usize {
    let mut a = m.clone();
    echelon_q(&mut a)
}

pub fn det_q(m: &MatQ) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Solves `m x = b` for square nonsingular `m`.
pub fn solve_q(m: &MatQ, b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: MatQ = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let r = echelon_q(&mut a);
    if r < n || (0..n).any(|i| a[i][i].is_zero()) {
        return None;
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse_q(m: &MatQ) -> Option<MatQ> {
    let n = m.len();
    let mut a: MatQ = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    echelon_q(&mut a);
    if (0..n).any(|i| a[i][i] != Q::one()) {
        return None;
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul_q(a: &MatQ, b: &MatQ) -> MatQ {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat_q(v: &[Q], m: &MatQ) -> Vec<Q> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| v.iter().zip(m).fold(Q::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

pub fn to_q(m: &MatZ) -> MatQ {
    m.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

pub fn det_z(m: &MatZ) -> Z {
    det_q(&to_q(m)).to_integer()
}

/// Row-style Hermite normal form: returns a basis (nonzero rows, upper echelon with
/// positive pivots, entries above pivots reduced into `[0, pivot)`) of the row lattice.
pub fn hnf_rows(m: &MatZ) -> MatZ {
    let mut a: MatZ = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            // pick the smallest nonzero |entry| in column c among rows r..
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero() && best.map_or(true, |b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let f = a[i][c].div_floor(&a[r][c]);
                    for j in c..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for j in 0..cols {
                    a[r][j] = -a[r][j].clone();
                }
            }
            for i in 0..r {
                let f = a[i][c].div_floor(&a[r][c]);
                if !f.is_zero() {
                    for j in c..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        a.retain(|row| row.iter().any(|x| !x.is_zero()));
    }
    a.truncate(r.min(a.len()));
    a
}

/// Row HNF after reversing column order, then reversed back: a lower-triangular basis in
/// which row k has its last nonzero entry in column k (for full rank input).
pub fn hnf_rows_lower(m: &MatZ) -> MatZ {
    let rev: MatZ = m.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    let mut h: MatZ = hnf_rows(&rev).into_iter().map(|r| r.into_iter().rev().collect()).collect();
    h.reverse();
    h
}

/// Diagonal of the Smith normal form (nonzero invariant factors, in divisibility order).
pub fn smith_diagonal(m: &MatZ) -> Vec<Z> {
    let mut a: MatZ = m.clone();
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // find a nonzero pivot of minimal absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let f = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &f * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let f = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let v = &f * &a[i][t];
                    a[i][j] -= v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: if some entry of the block is not divisible by the pivot, fold it in
        let p = a[t][t].clone();
        let mut fixed = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &p).is_zero() {
                    for jj in t..cols {
                        let v = a[i][jj].clone();
                        a[t][jj] += v;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// gcd of all maximal (rank-size) minors of a full-row-rank integer matrix; equals the
/// product of its Smith invariant factors.
pub fn maximal_minor_gcd(m: &MatZ) -> Z {
    let d = m.len();
    let n = if d == 0 { 0 } else { m[0].len() };
    let mut g = Z::zero();
    for cols in combinations(n, d) {
        let sub: MatZ = m.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&det_z(&sub));
    }
    g
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rank_z(m: &MatZ) -> usize {
    rank_q(&to_q(m))
}

/// Basis of `{x ∈ Z^n : a x = 0}` for an `m × n` integer matrix (as rows).
pub fn integer_kernel(a: &MatZ, n: usize) -> MatZ {
    let m = a.len();
    let rows: MatZ = (0..n)
        .map(|j| {
            let mut r: Vec<Z> = (0..m).map(|i| a[i][j].clone()).collect();
            r.extend((0..n).map(|k| if k == j { Z::one() } else { Z::zero() }));
            r
        })
        .collect();
    hnf_rows(&rows)
        .into_iter()
        .filter(|r| r[..m].iter().all(|x| x.is_zero()))
        .map(|r| r[m..].to_vec())
        .collect()
}

/// Basis of the saturation `span_Q(rows) ∩ Z^n` of the row lattice.
pub fn saturation_basis(m: &MatZ) -> MatZ {
    if m.is_empty() {
        return vec![];
    }
    let n = m[0].len();
    let k = integer_kernel(m, n);
    lll_rows(&hnf_rows(&integer_kernel(&k, n)))
}

fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn gram_schmidt(b: &MatZ) -> (MatQ, MatQ) {
    let k = b.len();
    let bq = to_q(b);
    let mut star: MatQ = Vec::with_capacity(k);
    let mut mu = vec![vec![Q::zero(); k]; k];
    for i in 0..k {
        let mut v = bq[i].clone();
        for j in 0..i {
            mu[i][j] = dot_q(&bq[i], &star[j]) / dot_q(&star[j], &star[j]);
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// Exact LLL reduction (`δ = 3/4`) of independent integer rows.
pub fn lll_rows(m: &MatZ) -> MatZ {
    let mut b = m.clone();
    let k = b.len();
    if k < 2 {
        return b;
    }
    let delta = Q::new(Z::from(3), Z::from(4));
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let (_, mu) = gram_schmidt(&b);
            let r = mu[i][j].round().to_integer();
            if !r.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(&b);
        let lhs = dot_q(&star[i], &star[i]);
        let rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * dot_q(&star[i - 1], &star[i - 1]);
        if lhs >= rhs {
            i += 1;
        } else {
            b.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
    b
}

/// Expresses `v` in the row basis `b` (rows independent); `None` if not in the rational span.
pub fn coords_in_basis(b: &MatQ, v: &[Q]) -> Option<Vec<Q>> {
    let d = b.len();
    let n = v.len();
    // Solve lambda * b = v via the normal system on a subset of independent columns.
    let mut aug: MatQ = (0..n)
        .map(|j| {
            let mut row: Vec<Q> = (0..d).map(|k| b[k][j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let r = echelon_q(&mut aug);
    // inconsistent if a row has zero coefficients but nonzero rhs
    for row in aug.iter() {
        if row[..d].iter().all(|x| x.is_zero()) && !row[d].is_zero() {
            return None;
        }
    }
    if r < d {
        return None;
    }
    Some((0..d).map(|i| aug[i][d].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, q, z};

    fn zm(v: &[&[i64]]) -> MatZ {
        v.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert_eq!(det_q(&m), q(1));
        let inv = inverse_q(&m).unwrap();
        assert_eq!(mat_mul_q(&m, &inv), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(solve_q(&m, &[q(3), q(2)]).unwrap(), vec![q(1), q(1)]);
    }

    #[test]
    fn hnf_lower_williams() {
        let m = zm(&[&[4, 0, 0, 0], &[0, 4, 0, 0], &[0, 0, 4, 0], &[0, 0, 0, 4], &[2, 2, 0, 0], &[0, 0, 2, 2]]);
        let h = hnf_rows_lower(&m);
        assert_eq!(h, zm(&[&[4, 0, 0, 0], &[2, 2, 0, 0], &[0, 0, 4, 0], &[0, 0, 2, 2]]));
    }

    #[test]
    fn smith_matches_minors() {
        let m = zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let d = smith_diagonal(&m);
        assert_eq!(d, vec![z(2), z(6), z(12)]);
        let prod = d.iter().fold(z(1), |a, b| a * b);
        assert_eq!(prod, maximal_minor_gcd(&m));
        let m2 = zm(&[&[1, 1, 0], &[1, -1, 0]]);
        assert_eq!(maximal_minor_gcd(&m2), z(2));
        assert_eq!(smith_diagonal(&m2), vec![z(1), z(2)]);
    }

    #[test]
    fn saturation() {
        let m = zm(&[&[2, 0, 0], &[0, 2, 0]]);
        assert_eq!(saturation_basis(&m), zm(&[&[1, 0, 0], &[0, 1, 0]]));
        let c = coords_in_basis(&to_q(&zm(&[&[1, 1, 0], &[0, 1, 1]])), &[q(1), q(2), q(1)]).unwrap();
        assert_eq!(c, vec![q(1), q(1)]);
        assert!(coords_in_basis(&to_q(&zm(&[&[1, 0, 0]])), &[q(0), q(1), q(0)]).is_none());
        let _ = frac(1, 2);
    }
}
