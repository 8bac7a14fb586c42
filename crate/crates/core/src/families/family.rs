//! The family `K_n = Q(sqrt 5, sqrt p_n)` with `p_n = y_(12n+3)^2 - 1`.

use num_traits::{One, Signed, Zero};

use super::{lucas_pair, match_faces, run_checks, Check, CheckFn, VerificationReport};
use crate::arith::{q, qz, SquarefreeTester, TrialDivision, Q, Z};
use crate::error::{Error, Result};
use crate::field::{default_precision_bits, make_field, Field, FieldDescriptor, FieldElement};
use crate::indecomp::{iota_from_sail, reduce_modulo_units, SailData, SailFace};
use crate::interval::{ln_interval, sqrt_interval};
use crate::latgeo::{certify_on_sail, integer_volume, polytope_volume, validate_dissection, validate_triangulation, IntegerPolytope, Triangulation};
use crate::linalg::det_q;

/// A named element `base * e1^a e2^b e3^c`.
#[derive(Clone, Debug)]
pub struct Term {
    pub label: String,
    pub value: FieldElement,
}

/// Explicit lattice chart of a polytope: `origin + Σ c_k e_k` for each listed point.
#[derive(Clone, Debug)]
pub struct ChartSpec {
    /// Indices into the polytope's terms: origin, then the three basis endpoints.
    pub frame: [usize; 4],
    pub coords: Vec<[i64; 3]>,
    /// Unimodular triangulation by point labels (1-based, as in the tables).
    pub simplices: Vec<[usize; 4]>,
}

/// One of the polytopes `A`, `B_j^±`, `C_j^±` with the functional of its hyperplane.
#[derive(Clone, Debug)]
pub struct FamilyPolytope {
    pub label: String,
    pub delta: FieldElement,
    pub terms: Vec<Term>,
    pub expected_volume: i64,
    /// Whether the polytope is one of the translate representatives making up the sail.
    pub in_sail: bool,
    pub chart: Option<ChartSpec>,
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub n: u64,
    pub p: Z,
    pub r: Z,
    pub x: Z,
    pub y: Z,
    pub field: Field,
    pub discriminant: Z,
    pub eps: [FieldElement; 3],
    pub rho: FieldElement,
    /// `gamma[j]` for `0 <= j <= 6n+1`; `gamma[0] = gamma_1 e1^-1 e3`.
    pub gamma: Vec<FieldElement>,
    pub delta_a: FieldElement,
    /// Index `j-1` for `1 <= j <= 3n`.
    pub delta_b: Vec<(FieldElement, FieldElement)>,
    /// Index `j-1` for `1 <= j <= 6n+1`.
    pub delta_c: Vec<(FieldElement, FieldElement)>,
    /// Squarefreeness of `p` and `r` was supplied by the caller rather than proven.
    pub conditional: bool,
}

fn sgn(j: u64) -> i64 {
    if j % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn family_instance(n: u64) -> Result<FamilyInstance> {
    family_instance_with(n, &TrialDivision::default())
}

/// Builds the instance, deciding squarefreeness of `p` and `r` with `tester`.
pub fn family_instance_with(n: u64, tester: &dyn SquarefreeTester) -> Result<FamilyInstance> {
    let xy = lucas_pair(12 * n + 3);
    let (x, y) = (xy.x, xy.y);
    let p: Z = &y * &y - 1;
    let r: Z = &x * &x - 1;
    let mut conditional = false;
    for (name, v) in [("p", &p), ("r", &r)] {
        match tester.is_squarefree(v) {
            Some(true) => {}
            Some(false) => return Err(Error::NonSquarefree(format!("{name} = {v}"))),
            None => conditional = true,
        }
    }
    let p64: i64 = p.clone().try_into().map_err(|_| Error::InvalidDescriptor(format!("p = {p} exceeds 64 bits")))?;
    let field = make_field(FieldDescriptor::Biquadratic { d1: 5, d2: p64 })?;
    let el = |c: [Q; 4]| field.element(c.to_vec());
    let xq = qz(x.clone());
    let yq = qz(y.clone());
    let pq = qz(p.clone());
    let rq = qz(r.clone());
    let half = Q::new(Z::one(), Z::from(2));
    let eps = [
        el([Q::from(Z::from(3)) * &half, half.clone(), Q::zero(), Q::zero()]),
        el([yq.clone(), Q::zero(), Q::one(), Q::zero()]),
        el([xq.clone(), Q::zero(), Q::zero(), Q::one()]),
    ];
    let rho = el([(&xq + &yq) * &half, Q::zero(), -&half, half.clone()]);
    let lx = |k: u64| qz(lucas_pair(k).x);
    let ly = |k: u64| qz(lucas_pair(k).y);
    let mut gamma = vec![field.zero()];
    for j in 1..=6 * n + 1 {
        let s = q(sgn(j));
        let (xj, yj) = (lx(2 * j - 1), ly(2 * j - 1));
        gamma.push(el([
            (&yj * &xq + Q::one()) * &half,
            (&xj * &xq - &s) / q(10),
            &s * &xj * &half,
            &s * &yj * &half,
        ]));
    }
    gamma[0] = &(&gamma[1] * &eps[0].inv()?) * &eps[2];
    let quarter = Q::new(Z::one(), Z::from(4));
    let twentieth = Q::new(Z::one(), Z::from(20));
    let delta_a = el([quarter.clone(), -&twentieth, Q::zero(), -Q::one() / (q(5) * (&xq + &yq))]);
    let delta_b = (1..=3 * n)
        .map(|j| {
            let c = (&xq - lx(4 * j - 1)) / (q(20) * &pq);
            let d = (&xq - ly(4 * j - 1)) / (q(4) * &rq);
            (
                el([quarter.clone(), -&twentieth, c.clone(), -d.clone()]),
                el([quarter.clone(), -&twentieth, -c, d]),
            )
        })
        .collect();
    let delta_c = (1..=6 * n + 1)
        .map(|j| {
            let c = -(&yq - ly(2 * j - 1)) / (q(4) * &pq);
            let d = (&yq - lx(2 * j - 1)) / (q(4) * &rq);
            (
                el([quarter.clone(), twentieth.clone(), c.clone(), -d.clone()]),
                el([quarter.clone(), -&twentieth, c, d]),
            )
        })
        .collect();
    let discriminant = field.discriminant().clone();
    Ok(FamilyInstance { n, p, r, x, y, field, discriminant, eps, rho, gamma, delta_a, delta_b, delta_c, conditional })
}

const A_COORDS: [[i64; 3]; 14] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [-2, -3, 2],
    [-2, -2, 3],
    [-2, -2, 2],
    [-3, -2, 4],
    [-1, -1, 1],
    [-1, -1, 2],
    [-1, -2, 1],
    [0, -1, 1],
    [-1, 0, 1],
    [-2, -1, 3],
];

const A_SIMPLICES: [[usize; 4]; 24] = [
    [1, 2, 3, 12],
    [1, 2, 11, 12],
    [1, 3, 8, 9],
    [1, 3, 8, 14],
    [1, 3, 10, 12],
    [1, 3, 10, 14],
    [1, 9, 10, 12],
    [1, 9, 10, 14],
    [1, 9, 11, 12],
    [2, 3, 4, 10],
    [2, 3, 10, 12],
    [3, 4, 10, 14],
    [3, 7, 8, 9],
    [3, 7, 8, 13],
    [5, 6, 8, 11],
    [5, 6, 11, 12],
    [5, 7, 8, 11],
    [6, 8, 11, 12],
    [7, 8, 9, 10],
    [7, 8, 10, 11],
    [7, 9, 10, 11],
    [8, 9, 10, 14],
    [8, 10, 11, 12],
    [9, 10, 11, 12],
];

const B_COORDS: [[i64; 3]; 8] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 4, -5], [0, 0, 1], [1, 1, -1], [0, 1, -1], [1, 3, -4]];

const B_SIMPLICES: [[usize; 4]; 9] = [
    [1, 2, 5, 6],
    [1, 2, 6, 8],
    [1, 5, 6, 7],
    [1, 6, 7, 8],
    [3, 4, 5, 6],
    [3, 4, 5, 7],
    [4, 5, 6, 8],
    [4, 5, 7, 8],
    [5, 6, 7, 8],
];

fn exps_label(e: (i64, i64, i64)) -> String {
    let mut parts = Vec::new();
    for (k, v) in [e.0, e.1, e.2].iter().enumerate() {
        match v {
            0 => {}
            1 => parts.push(format!("e{}", k + 1)),
            _ => parts.push(format!("e{}^{v}", k + 1)),
        }
    }
    parts.join(" ")
}

impl FamilyInstance {
    pub fn unit(&self, e: (i64, i64, i64)) -> Result<FieldElement> {
        let mut out = self.eps[0].pow(e.0)?;
        out = &out * &self.eps[1].pow(e.1)?;
        Ok(&out * &self.eps[2].pow(e.2)?)
    }

    fn term(&self, base: Option<(&str, &FieldElement)>, e: (i64, i64, i64)) -> Result<Term> {
        let u = self.unit(e)?;
        let el = exps_label(e);
        Ok(match base {
            None => Term { label: if el.is_empty() { "1".into() } else { el }, value: u },
            Some((name, b)) => Term { label: format!("{name} {el}").trim().to_string(), value: b * &u },
        })
    }

    fn g(&self, j: u64) -> (String, &FieldElement) {
        (format!("gamma_{j}"), &self.gamma[j as usize])
    }

    /// The polytopes with the trace-one incidence lists that span them.
    pub fn polytopes(&self) -> Result<Vec<FamilyPolytope>> {
        let n = self.n as i64;
        let m = 6 * n;
        let one = |e| self.term(None, e);
        let gt = |j: u64, e| {
            let (name, v) = self.g(j);
            self.term(Some((&name, v)), e)
        };
        let mut out = Vec::new();
        let a_terms = vec![
            one((0, 0, 0))?,
            one((1, 0, 0))?,
            one((m + 1, 1, 0))?,
            one((m + 2, 1, 0))?,
            one((m + 1, 0, 1))?,
            one((m + 2, 0, 1))?,
            one((0, 1, 1))?,
            one((1, 1, 1))?,
            self.term(Some(("rho", &self.rho)), (0, 1, 0))?,
            self.term(Some(("rho", &self.rho)), (1, 1, 0))?,
            gt(6 * self.n, (1, 0, 0))?,
            gt(6 * self.n, (2, 0, 0))?,
            gt(6 * self.n + 1, (0, 1, 1))?,
            gt(6 * self.n + 1, (1, 1, 1))?,
        ];
        out.push(FamilyPolytope {
            label: "A".into(),
            delta: self.delta_a.clone(),
            terms: a_terms,
            expected_volume: 24,
            in_sail: true,
            chart: Some(ChartSpec { frame: [0, 1, 2, 3], coords: A_COORDS.to_vec(), simplices: A_SIMPLICES.to_vec() }),
        });
        for j in 1..=3 * self.n {
            let ji = j as i64;
            let (dp, dm) = &self.delta_b[(j - 1) as usize];
            let plus = vec![
                one((0, 0, 0))?,
                one((1, 0, 0))?,
                one((2 * ji - 1, 0, 1))?,
                one((2 * ji, 0, 1))?,
                gt(2 * j - 2, (1, 0, 0))?,
                gt(2 * j - 2, (2, 0, 0))?,
                gt(2 * j, (0, 0, 0))?,
                gt(2 * j, (1, 0, 0))?,
            ];
            let minus = vec![
                one((0, 0, 0))?,
                one((1, 0, 0))?,
                one((2 * ji - 1, 0, -1))?,
                one((2 * ji, 0, -1))?,
                gt(2 * j - 1, (0, 0, 0))?,
                gt(2 * j - 1, (1, 0, 0))?,
                gt(2 * j + 1, (-1, 0, 0))?,
                gt(2 * j + 1, (0, 0, 0))?,
            ];
            for (sign, d, terms) in [("+", dp, plus), ("-", dm, minus)] {
                out.push(FamilyPolytope {
                    label: format!("B{j}{sign}"),
                    delta: d.clone(),
                    terms,
                    expected_volume: 9,
                    in_sail: true,
                    chart: Some(ChartSpec { frame: [0, 1, 2, 4], coords: B_COORDS.to_vec(), simplices: B_SIMPLICES.to_vec() }),
                });
            }
        }
        for j in 1..=6 * self.n + 1 {
            let ji = j as i64;
            let (dp, dm) = &self.delta_c[(j - 1) as usize];
            let plus = vec![one((-1, 0, 0))?, one((0, 0, 0))?, one((-ji, 1, 0))?, one((1 - ji, 1, 0))?];
            let minus = vec![one((0, 0, 0))?, one((1, 0, 0))?, one((ji - 1, 1, 0))?, one((ji, 1, 0))?];
            out.push(FamilyPolytope { label: format!("C{j}+"), delta: dp.clone(), terms: plus, expected_volume: 1, in_sail: j >= 2, chart: None });
            out.push(FamilyPolytope { label: format!("C{j}-"), delta: dm.clone(), terms: minus, expected_volume: 1, in_sail: true, chart: None });
        }
        Ok(out)
    }
}

fn polytope_of(k: &Field, fp: &FamilyPolytope) -> Result<IntegerPolytope> {
    let pts: Vec<FieldElement> = fp.terms.iter().map(|t| t.value.clone()).collect();
    IntegerPolytope::new(k, &pts)
}

fn check_positivity(inst: &FamilyInstance) -> Check {
    let mut w = Vec::new();
    let mut count = 0;
    let mut test = |name: String, e: &FieldElement, integral: bool| {
        count += 1;
        if !e.is_totally_positive() {
            w.push(format!("{name} = {e} is not totally positive"));
        }
        if integral && !e.is_integral() {
            w.push(format!("{name} = {e} is not integral"));
        }
        if !integral && !e.is_in_codifferent() {
            w.push(format!("{name} = {e} is not in the codifferent"));
        }
    };
    test("1".into(), &inst.field.one(), true);
    test("rho".into(), &inst.rho, true);
    for (j, g) in inst.gamma.iter().enumerate() {
        test(format!("gamma_{j}"), g, true);
    }
    test("delta_A".into(), &inst.delta_a, false);
    for (j, (p, m)) in inst.delta_b.iter().enumerate() {
        test(format!("delta_B{}+", j + 1), p, false);
        test(format!("delta_B{}-", j + 1), m, false);
    }
    for (j, (p, m)) in inst.delta_c.iter().enumerate() {
        test(format!("delta_C{}+", j + 1), p, false);
        test(format!("delta_C{}-", j + 1), m, false);
    }
    Check::new("a_total_positivity", w, format!("{count} elements"))
}

fn check_incidences(polys: &[FamilyPolytope]) -> Check {
    let mut w = Vec::new();
    let mut count = 0;
    for p in polys {
        for t in &p.terms {
            count += 1;
            let tr = (&p.delta * &t.value).trace();
            if !tr.is_one() {
                w.push(format!("Tr(delta_{} * {}) = {tr}", p.label, t.label));
            }
        }
    }
    Check::new("b_trace_one_incidences", w, format!("{count} incidences"))
}

fn check_volumes(k: &Field, polys: &[FamilyPolytope]) -> Result<Check> {
    let mut w = Vec::new();
    let mut details = Vec::new();
    for fp in polys {
        let poly = polytope_of(k, fp)?;
        let vol = if poly.is_simplex() { integer_volume(&poly)? } else { polytope_volume(&poly)? };
        if vol != Z::from(fp.expected_volume) {
            w.push(format!("IV({}) = {vol}, expected {}", fp.label, fp.expected_volume));
        }
        let Some(ch) = &fp.chart else { continue };
        let o = &fp.terms[ch.frame[0]].value;
        let basis: Vec<FieldElement> = ch.frame[1..].iter().map(|&i| &fp.terms[i].value - o).collect();
        let frame_pts: Vec<FieldElement> = ch.frame.iter().map(|&i| fp.terms[i].value.clone()).collect();
        let fv = integer_volume(&IntegerPolytope::new(k, &frame_pts)?)?;
        if !fv.is_one() {
            w.push(format!("{}: chart simplex has volume {fv}", fp.label));
        }
        for (t, c) in fp.terms.iter().zip(&ch.coords) {
            let mut x = o.clone();
            for (b, ci) in basis.iter().zip(c) {
                x = &x + &b.scale(&q(*ci));
            }
            if x != t.value {
                w.push(format!("{}: {} is not at chart coordinates {:?}", fp.label, t.label, c));
            }
        }
        let points: Vec<FieldElement> = fp.terms.iter().map(|t| t.value.clone()).collect();
        let simplices: Vec<Vec<usize>> = ch.simplices.iter().map(|s| s.iter().map(|i| i - 1).collect()).collect();
        let t = Triangulation { points, simplices };
        match validate_dissection(&poly, &t) {
            Ok(r) if r.unimodular && r.volume == vol => {
                let kind = if r.face_to_face { "triangulation" } else { "dissection (not face to face)" };
                details.push(format!("{}: {} unimodular simplices, {kind}", fp.label, r.simplex_count()));
                if !r.face_to_face {
                    let flipped = flip_to_triangulation(&t);
                    match validate_triangulation(&poly, &flipped) {
                        Ok(r2) if r2.unimodular => details.push(format!("{}: flipped to a unimodular triangulation", fp.label)),
                        _ => w.push(format!("{}: no face-to-face unimodular triangulation found", fp.label)),
                    }
                }
            }
            Ok(r) => w.push(format!("{}: simplex volumes {:?}", fp.label, r.simplex_volumes)),
            Err(e) => w.push(format!("{}: triangulation invalid: {e}", fp.label)),
        }
    }
    Ok(Check::new("c_volumes_and_triangulations", w, details.join("; ")))
}

/// Replaces `<A1,A3,A8,A9>, <A1,A3,A8,A14>` by `<A1,A3,A9,A14>, <A3,A8,A9,A14>`, so both
/// sides of the flat quadrilateral `A1 A8 A9 A14` use the diagonal `A9 A14`.
fn flip_to_triangulation(t: &Triangulation) -> Triangulation {
    let old = [vec![0, 2, 7, 8], vec![0, 2, 7, 13]];
    let mut simplices: Vec<Vec<usize>> = t.simplices.iter().filter(|s| !old.contains(s)).cloned().collect();
    if simplices.len() + 2 == t.simplices.len() {
        simplices.push(vec![0, 2, 8, 13]);
        simplices.push(vec![2, 7, 8, 13]);
    }
    Triangulation { points: t.points.clone(), simplices }
}

fn check_certificates(k: &Field, polys: &[FamilyPolytope]) -> Result<Check> {
    let mut w = Vec::new();
    for fp in polys {
        match certify_on_sail(&polytope_of(k, fp)?) {
            Ok(c) if c.delta == fp.delta => {}
            Ok(c) => w.push(format!("{}: plane functional is {}, listed {}", fp.label, c.delta, fp.delta)),
            Err(e) => w.push(format!("{}: {e}", fp.label)),
        }
    }
    Ok(Check::new("d_sail_certificates", w, format!("{} polytopes at level 1", polys.len())))
}

fn sail_polys(k: &Field, polys: &[FamilyPolytope]) -> Result<Vec<(String, IntegerPolytope)>> {
    polys.iter().filter(|p| p.in_sail).map(|p| Ok((p.label.clone(), polytope_of(k, p)?))).collect()
}

fn check_matching(inst: &FamilyInstance, polys: &[FamilyPolytope]) -> Result<Check> {
    let sail = sail_polys(&inst.field, polys)?;
    let rep = match_faces(&sail, &inst.eps)?;
    let widest = rep.matches.iter().flat_map(|m| m.multiplier.iter().map(|e| e.abs())).max().unwrap_or(0);
    Ok(Check::new(
        "e_face_matching",
        rep.failures,
        format!("{} facets matched in pairs; largest exponent {widest}", rep.facets),
    ))
}

fn check_census(inst: &FamilyInstance, polys: &[FamilyPolytope]) -> Result<Check> {
    let mut w = Vec::new();
    let mut total = 0;
    for fp in polys {
        let poly = polytope_of(&inst.field, fp)?;
        let mut lp = poly.lattice_points()?;
        let mut listed: Vec<FieldElement> = fp.terms.iter().map(|t| t.value.clone()).collect();
        lp.sort();
        listed.sort();
        listed.dedup();
        total += lp.len();
        if lp != listed {
            let extra: Vec<String> = lp.iter().filter(|x| !listed.contains(x)).map(|x| x.to_string()).collect();
            w.push(format!("{}: {} lattice points, {} listed; unlisted {:?}", fp.label, lp.len(), listed.len(), extra));
        }
    }
    Ok(Check::new("f_lattice_point_census", w, format!("{total} lattice points, all unit translates of 1, rho, gamma_j")))
}

/// Sail data for the instance: the sail polytopes with their triangulations.
pub fn family_sail(inst: &FamilyInstance, closure_verified: bool) -> Result<SailData> {
    let mut faces = Vec::new();
    for fp in inst.polytopes()?.iter().filter(|p| p.in_sail) {
        let face = polytope_of(&inst.field, fp)?;
        let points: Vec<FieldElement> = fp.terms.iter().map(|t| t.value.clone()).collect();
        let simplices = match &fp.chart {
            Some(ch) => ch.simplices.iter().map(|s| s.iter().map(|i| i - 1).collect()).collect(),
            None => vec![(0..points.len()).collect()],
        };
        faces.push(SailFace { face, triangulation: Triangulation { points, simplices } });
    }
    Ok(SailData { faces, closure_verified })
}

/// Certified check of `log Δ/(8w) <= ι <= log Δ/(8w) + 1`, `w = log((1+sqrt 5)/2)`.
pub fn log_bound_holds(disc: &Z, iota: u64) -> (bool, String) {
    let bits = default_precision_bits();
    let s5 = sqrt_interval(&Z::from(5), bits);
    let half = Q::new(Z::one(), Z::from(2));
    let phi_lo = (Q::one() + &s5.lo) * &half;
    let phi_hi = (Q::one() + &s5.hi) * &half;
    let w_lo = ln_interval(&phi_lo, bits).lo;
    let w_hi = ln_interval(&phi_hi, bits).hi;
    let ld = ln_interval(&qz(disc.abs()), bits);
    let iq = q(iota as i64);
    let lower = ld.hi <= q(8) * &iq * &w_lo;
    let upper = q(8) * (&iq - Q::one()) * &w_hi <= ld.lo;
    let ratio = crate::arith::q_to_f64(&ld.mid()) / (8.0 * crate::arith::q_to_f64(&w_lo));
    (lower && upper, format!("log(disc)/(8w) = {ratio:.6}, iota = {iota}"))
}

fn check_iota(inst: &FamilyInstance, closure: bool) -> Result<(Check, u64)> {
    let mut w = Vec::new();
    let expected = 6 * inst.n + 3;
    let set = iota_from_sail(&inst.field, &family_sail(inst, closure)?)?;
    let got = set.count() as u64;
    if got != expected {
        w.push(format!("sail count {got}, expected {expected}"));
    }
    let mut named = vec![inst.field.one(), inst.rho.clone()];
    named.extend(inst.gamma[1..].iter().cloned());
    if reduce_modulo_units(&named).len() != named.len() || !set.same_classes(&named) {
        w.push("indecomposable classes differ from {1, rho, gamma_j}".into());
    }
    let (ok, detail) = log_bound_holds(&inst.discriminant, got);
    if !ok {
        w.push(format!("log bound fails: {detail}"));
    }
    Ok((Check::new("g_iota_and_log_bound", w, detail), got))
}

fn check_discriminant(inst: &FamilyInstance) -> Result<Check> {
    let mut w = Vec::new();
    let five_p: Z = &inst.p * 5;
    let e1: Z = &five_p * &five_p * 16;
    let x = lucas_pair(24 * inst.n + 6).x - 3;
    let e2: Z = &x * &x * 16;
    if inst.discriminant != e1 || inst.discriminant != e2 {
        w.push(format!("disc {} vs 16(5p)^2 = {e1} vs 16(x-3)^2 = {e2}", inst.discriminant));
    }
    if inst.r != five_p {
        w.push(format!("r = {} differs from 5p", inst.r));
    }
    let k = &inst.field;
    let h = Q::new(Z::one(), Z::from(2));
    let williams = [
        k.one(),
        k.element(vec![h.clone(), h.clone(), Q::zero(), Q::zero()]),
        k.element(vec![Q::zero(), Q::zero(), Q::one(), Q::zero()]),
        k.element(vec![Q::zero(), Q::zero(), h.clone(), h.clone()]),
    ];
    let pq = qz(inst.p.clone());
    let rq = qz(inst.r.clone());
    let codiff = [
        k.element(vec![Q::new(1.into(), 4.into()), Q::new((-1).into(), 20.into()), Q::zero(), Q::zero()]),
        k.element(vec![Q::zero(), Q::new(1.into(), 10.into()), Q::zero(), Q::zero()]),
        k.element(vec![Q::zero(), Q::zero(), Q::one() / (q(4) * &pq), -Q::one() / (q(4) * &rq)]),
        k.element(vec![Q::zero(), Q::zero(), Q::zero(), Q::one() / (q(2) * &rq)]),
    ];
    let m: Vec<Vec<Q>> = williams.iter().map(|b| b.basis_coords()).collect();
    if det_q(&m).abs() != Q::one() {
        w.push("Williams basis is not an integral basis".into());
    }
    let gram: Vec<Vec<Q>> = williams.iter().map(|b| codiff.iter().map(|c| (b * c).trace()).collect()).collect();
    if det_q(&gram).abs() != Q::one() || gram.iter().flatten().any(|x| !x.is_integer()) {
        w.push("codifferent basis is not dual to the integral basis".into());
    }
    for (i, e) in inst.eps.iter().enumerate() {
        if !e.is_totally_positive() || !e.norm().is_one() {
            w.push(format!("e{} is not a totally positive unit", i + 1));
        }
    }
    Ok(Check::new("discriminant_and_bases", w, format!("disc = {}", inst.discriminant)))
}

/// Runs every check on a (possibly modified) instance.
pub fn verify_instance(inst: &FamilyInstance) -> VerificationReport {
    let polys = match inst.polytopes() {
        Ok(p) => p,
        Err(e) => {
            let c = Check { name: "construction".into(), pass: false, detail: "error".into(), witnesses: vec![e.to_string()] };
            return VerificationReport { instance: format!("family n={}", inst.n), pass: false, conditional: inst.conditional, iota: None, checks: vec![c] };
        }
    };
    let k = &inst.field;
    let closure = check_matching(inst, &polys);
    let closure_ok = matches!(&closure, Ok(c) if c.pass);
    let iota = check_iota(inst, closure_ok);
    let iota_value = iota.as_ref().ok().map(|(_, v)| *v);
    let closure = Check::from_result("e_face_matching", closure);
    let iota_check = Check::from_result("g_iota_and_log_bound", iota.map(|(c, _)| c));
    let p = &polys;
    let checks: Vec<CheckFn> = vec![
        Box::new(move || check_positivity(inst)),
        Box::new(move || check_incidences(p)),
        Box::new(move || Check::from_result("c_volumes_and_triangulations", check_volumes(k, p))),
        Box::new(move || Check::from_result("d_sail_certificates", check_certificates(k, p))),
        Box::new(move || Check::from_result("f_lattice_point_census", check_census(inst, p))),
        Box::new(move || Check::from_result("discriminant_and_bases", check_discriminant(inst))),
    ];
    let mut rep = run_checks(format!("family n={}", inst.n), inst.conditional, iota_value, checks);
    rep.checks.push(closure);
    rep.checks.push(iota_check);
    rep.checks.sort_by(|a, b| a.name.cmp(&b.name));
    rep.pass = rep.checks.iter().all(|c| c.pass);
    rep
}

pub fn verify_family(n: u64) -> Result<VerificationReport> {
    Ok(verify_instance(&family_instance(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_zero() {
        let inst = family_instance(0).unwrap();
        assert_eq!((inst.p.clone(), inst.r.clone()), (Z::from(3), Z::from(15)));
        assert_eq!(inst.discriminant, Z::from(3600));
        let h = Q::new(Z::one(), Z::from(2));
        assert_eq!(inst.rho.coords(), &[q(3), Q::zero(), -&h, h.clone()]);
        assert_eq!(inst.gamma[1].coords(), &[Q::new(5.into(), 2.into()), h.clone(), -&h, -&h]);
        assert!(inst.gamma[0].is_integral() && inst.gamma[0].is_totally_positive());
    }

    #[test]
    fn instance_one_radicands() {
        let inst = family_instance(1).unwrap();
        assert_eq!(inst.p, Z::from(372099));
        assert_eq!(inst.r, Z::from(1860495));
    }
}
