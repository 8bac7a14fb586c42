//! Shanks' simplest cubic fields `x^3 - a x^2 - (a+3) x - 1`.

use super::{match_faces, run_checks, Check, CheckFn, VerificationReport};
use crate::arith::Z;
use crate::error::Result;
use crate::field::{make_field, Field, FieldDescriptor, FieldElement};
use crate::indecomp::{iota_bruteforce, iota_from_sail, iota_int_enumerated, iota_int_exact_cubic, is_indecomposable, BruteForceOptions, SailData, SailFace};
use crate::latgeo::{integer_distance, integer_volume, lattice_points_on_face, triangulate, IntegerPolytope};

/// The two sail faces `A1 = <1, e1, e2>` and `A2 = <1, e1, e1/e2>`.
#[derive(Clone, Debug)]
pub struct ShanksSail {
    pub a: i64,
    pub field: Field,
    pub eps: [FieldElement; 2],
    pub a1: IntegerPolytope,
    pub a2: IntegerPolytope,
}

pub fn shanks_sail(a: i64) -> Result<ShanksSail> {
    let k = make_field(FieldDescriptor::SimplestCubic { a })?;
    let e1 = k.element_i64(&[0, 0, 1]);
    let e2 = k.element_i64(&[1, 2, 1]);
    let a1 = IntegerPolytope::new(&k, &[k.one(), e1.clone(), e2.clone()])?;
    let a2 = IntegerPolytope::new(&k, &[k.one(), e1.clone(), e1.div(&e2)?])?;
    Ok(ShanksSail { a, field: k, eps: [e1, e2], a1, a2 })
}

/// `(a^2 + 3a + 6)/2`.
pub fn shanks_iota_formula(a: i64) -> i64 {
    (a * a + 3 * a + 6) / 2
}

fn z(v: i64) -> Z {
    Z::from(v)
}

fn expect(w: &mut Vec<String>, what: &str, got: Z, want: Z) {
    if got != want {
        w.push(format!("{what} = {got}, expected {want}"));
    }
}

fn faces_check(s: &ShanksSail) -> Result<Check> {
    let a = s.a;
    let mut w = Vec::new();
    let q = s.field.element_i64(&[-(a + 1), -(a * a + 3 * a + 3), a + 2]);
    if s.eps[0].div(&s.eps[1])? != q {
        w.push("e1/e2 differs from -(a+1) - (a^2+3a+3) rho + (a+2) rho^2".into());
    }
    expect(&mut w, "ID(A1)", integer_distance(&s.a1), z(2));
    expect(&mut w, "ID(A2)", integer_distance(&s.a2), z(1));
    expect(&mut w, "IV(A1)", integer_volume(&s.a1)?, z(1));
    expect(&mut w, "IV(A2)", integer_volume(&s.a2)?, z(a * a + 3 * a + 3));
    Ok(Check::new("faces", w, format!("ID = (2, 1), IV = (1, {})", a * a + 3 * a + 3)))
}

fn pick_check(s: &ShanksSail) -> Result<Check> {
    let a = s.a;
    let mut w = Vec::new();
    let (b, i) = lattice_points_on_face(&s.a2)?;
    expect(&mut w, "boundary points of A2", b, z(3));
    expect(&mut w, "interior points of A2", i.clone(), z((a * a + 3 * a + 2) / 2));
    let enumerated = s.a2.lattice_points()?.len() as i64 - 3;
    expect(&mut w, "enumerated interior points of A2", z(enumerated), i.clone());
    for p in s.a2.lattice_points()? {
        if !is_indecomposable(&p)? {
            w.push(format!("{p} on A2 is decomposable"));
        }
    }
    Ok(Check::new("pick_interior", w, format!("{i} interior points")))
}

fn interior_check(s: &ShanksSail) -> Result<Check> {
    let mut w = Vec::new();
    for (name, f, want) in [("A1", &s.a1, 1), ("A2", &s.a2, 0)] {
        let exact = iota_int_exact_cubic(f)?;
        expect(&mut w, &format!("iota_int({name})"), exact.clone(), z(want));
        let t = triangulate(f)?;
        let found = iota_int_enumerated(f, &t)?;
        expect(&mut w, &format!("enumerated iota_int({name})"), z(found.len() as i64), exact);
    }
    let off = s.field.element_i64(&[1, 1, 1]);
    let found = iota_int_enumerated(&s.a1, &triangulate(&s.a1)?)?;
    if found != vec![off.clone()] {
        w.push(format!("off-sail indecomposable is {found:?}, expected [{off}]"));
    }
    Ok(Check::new("interior_counts", w, "iota_int(A1) = 1 (1 + rho + rho^2), iota_int(A2) = 0".into()))
}

fn sail_data(s: &ShanksSail, closure_verified: bool) -> Result<SailData> {
    let faces = [&s.a1, &s.a2]
        .iter()
        .map(|f| Ok(SailFace { face: (*f).clone(), triangulation: triangulate(f)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SailData { faces, closure_verified })
}

/// Verifies the sail description of a simplest cubic field; with `bruteforce`, ι is
/// also recomputed by enumeration.
pub fn shanks_verify(a: i64, bruteforce: bool) -> Result<VerificationReport> {
    let s = shanks_sail(a)?;
    let polys = vec![("A1".to_string(), s.a1.clone()), ("A2".to_string(), s.a2.clone())];
    let rep = match_faces(&polys, &s.eps)?;
    let closure_ok = rep.failures.is_empty();
    let closure = Check::new("edge_matching", rep.failures, format!("{} edges matched in pairs", rep.facets));
    let want = shanks_iota_formula(a) as usize;
    let iota = iota_from_sail(&s.field, &sail_data(&s, closure_ok)?).map(|set| set.count());
    let iota_value = iota.as_ref().ok().map(|&c| c as u64);
    let iota_check = Check::from_result(
        "iota",
        iota.map(|c| {
            let w = if c == want { vec![] } else { vec![format!("sail count {c}, formula {want}")] };
            Check::new("iota", w, format!("iota = {c}"))
        }),
    );
    let sr = &s;
    let mut checks: Vec<CheckFn> = vec![
        Box::new(move || Check::from_result("faces", faces_check(sr))),
        Box::new(move || Check::from_result("pick_interior", pick_check(sr))),
        Box::new(move || Check::from_result("interior_counts", interior_check(sr))),
    ];
    if bruteforce {
        checks.push(Box::new(move || {
            Check::from_result(
                "iota_bruteforce",
                iota_bruteforce(&sr.field, &BruteForceOptions::default()).map(|set| {
                    let w = if set.count() == want { vec![] } else { vec![format!("brute force found {}", set.count())] };
                    Check::new("iota_bruteforce", w, format!("{} classes, {}", set.count(), set.certification))
                }),
            )
        }));
    }
    let mut out = run_checks(format!("shanks a={a}"), false, iota_value, checks);
    out.checks.push(closure);
    out.checks.push(iota_check);
    out.checks.sort_by(|a, b| a.name.cmp(&b.name));
    out.pass = out.checks.iter().all(|c| c.pass);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(shanks_iota_formula(1), 5);
        assert_eq!(shanks_iota_formula(2), 8);
        assert_eq!(shanks_iota_formula(-1), 2);
    }

    #[test]
    fn verify_small() {
        for a in [-1i64, 1] {
            let r = shanks_verify(a, false).unwrap();
            assert!(r.pass, "{r:#?}");
            assert_eq!(r.iota, Some(shanks_iota_formula(a) as u64));
        }
    }
}
