//! End-to-end constructions: Shanks' simplest cubic fields, the `Q(sqrt 5, sqrt p_n)`
//! family, face-matching closure, and universal-form rank bounds.

use serde::Serialize;

use crate::arith::{Q, Z};
use crate::error::Result;
use crate::field::FieldElement;
use crate::indecomp::unit_exponents;
use crate::latgeo::IntegerPolytope;
use crate::par;

pub mod bounds;
pub mod family;
pub mod shanks;

pub use bounds::*;
pub use family::*;
pub use shanks::*;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: &str, witnesses: Vec<String>, detail: String) -> Check {
        Check { name: name.into(), pass: witnesses.is_empty(), detail, witnesses }
    }

    pub fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check { name: name.into(), pass: false, detail: "error".into(), witnesses: vec![e.to_string()] })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub pass: bool,
    /// Set when an input (such as squarefreeness) was assumed rather than proven.
    pub conditional: bool,
    pub iota: Option<u64>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;

/// Runs independent checks (possibly concurrently) and orders them by name.
pub(crate) fn run_checks(instance: String, conditional: bool, iota: Option<u64>, checks: Vec<CheckFn<'_>>) -> VerificationReport {
    let mut out: Vec<Check> = par::map(&checks, |f| f());
    out.sort_by(|a, b| a.name.cmp(&b.name));
    VerificationReport { instance, pass: out.iter().all(|c| c.pass), conditional, iota, checks: out }
}

/// `(x_n, y_n)` with `(x_n + y_n sqrt 5)/2 = ((1 + sqrt 5)/2)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LucasPair {
    pub n: u64,
    pub x: Z,
    pub y: Z,
}

pub fn lucas_pair(n: u64) -> LucasPair {
    let (mut x, mut y) = (Z::from(2), Z::from(0));
    for _ in 0..n {
        let nx: Z = (&x + &y * 5) / 2;
        let ny: Z = (&x + &y) / 2;
        x = nx;
        y = ny;
    }
    LucasPair { n, x, y }
}

/// One facet matched to a unit translate of another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceMatch {
    pub face: String,
    pub partner: String,
    /// Exponents of the unit generators with `face = unit * partner`.
    pub multiplier: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingReport {
    pub facets: usize,
    pub matches: Vec<FaceMatch>,
    /// Facets with no partner or with more than one.
    pub failures: Vec<String>,
}

fn int_key(pts: &[FieldElement]) -> Vec<Vec<Z>> {
    let mut k: Vec<Vec<Z>> = pts.iter().map(|p| p.int_coords().unwrap_or_default()).collect();
    k.sort();
    k
}

/// Pairs every facet of the given polytopes with a totally positive unit translate of
/// another facet. The unit is read off from a vertex quotient, so no exponent window
/// is needed; its exponents in `gens` are reported.
pub fn match_faces(polys: &[(String, IntegerPolytope)], gens: &[FieldElement]) -> Result<MatchingReport> {
    struct F {
        label: String,
        pts: Vec<FieldElement>,
        norms: Vec<Q>,
        key: Vec<Vec<Z>>,
    }
    let mut facets = Vec::new();
    for (label, p) in polys {
        for (i, f) in p.facets()?.into_iter().enumerate() {
            let pts = f.vertices().to_vec();
            facets.push(F {
                label: format!("{label}/{i}:{{{}}}", pts.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")),
                norms: pts.iter().map(|v| v.norm()).collect(),
                key: int_key(&pts),
                pts,
            });
        }
    }
    let results: Vec<(Vec<FaceMatch>, Option<String>)> = par::map(&(0..facets.len()).collect::<Vec<_>>(), |&a| {
        let fa = &facets[a];
        let mut found = Vec::new();
        for (b, fb) in facets.iter().enumerate() {
            if fb.pts.len() != fa.pts.len() {
                continue;
            }
            for (k, g) in fb.pts.iter().enumerate() {
                if fb.norms[k] != fa.norms[0] {
                    continue;
                }
                let Ok(u) = fa.pts[0].div(g) else { continue };
                if (a == b && u.is_one()) || !u.is_integral() || !u.is_totally_positive() {
                    continue;
                }
                let moved: Vec<FieldElement> = fb.pts.iter().map(|x| x * &u).collect();
                if int_key(&moved) == fa.key {
                    let multiplier = unit_exponents(&u, gens).unwrap_or_default();
                    found.push(FaceMatch { face: fa.label.clone(), partner: fb.label.clone(), multiplier });
                }
            }
        }
        let fail = match found.len() {
            1 if !found[0].multiplier.is_empty() || gens.is_empty() => None,
            1 => Some(format!("{}: matching unit is outside the generated group", fa.label)),
            0 => Some(format!("{}: unmatched", fa.label)),
            m => Some(format!("{}: {m} partners", fa.label)),
        };
        (found, fail)
    });
    let mut matches = Vec::new();
    let mut failures = Vec::new();
    for (m, f) in results {
        matches.extend(m);
        failures.extend(f);
    }
    Ok(MatchingReport { facets: facets.len(), matches, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_identities() {
        assert_eq!((lucas_pair(3).x, lucas_pair(3).y), (Z::from(4), Z::from(2)));
        assert_eq!((lucas_pair(6).x, lucas_pair(6).y), (Z::from(18), Z::from(8)));
        for n in 1..=200u64 {
            let a = lucas_pair(n);
            let b = lucas_pair(n + 1);
            let s: Z = if n % 2 == 0 { Z::from(1) } else { Z::from(-1) };
            assert_eq!(&a.x * &a.x - &a.y * &a.y * 5, &s * 4);
            assert_eq!(&a.x * &b.y - &b.x * &a.y, &s * 2);
            assert_eq!(&a.x * &b.x - &a.y * &b.y * 5, &s * 2);
        }
    }
}
