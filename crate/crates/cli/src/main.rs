//! `sailkit` command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sailkit::arith::{is_squarefree_i64, q_to_string};
use sailkit::cfrac::QuadraticCf;
use sailkit::families::{
    c_bound, family_instance, kitaoka_chain, rank_admissible, rank_lower_bound, shanks_iota_formula, shanks_sail, shanks_verify, usr_lower_bound,
    verify_family, UsrBound, VerificationReport,
};
use sailkit::field::{make_field, Field, FieldDescriptor, FieldElement};
use sailkit::indecomp::{iota_bruteforce, iota_continued_fraction, BruteForceOptions, IndecomposableSet};
use sailkit::latgeo::{certify_on_sail, integer_distance, polytope_volume, IntegerPolytope, PolytopeJson};
use sailkit::units::{kubota_unit_system, UnitSystem};
use sailkit::Error;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sailkit", version, about = "Sails, indecomposables and unit signature ranks of totally real fields")]
struct Cli {
    /// Emit JSON on stdout and structured errors on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to this file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Real quadratic field Q(sqrt D).
    Quad {
        #[arg(long, short)]
        d: i64,
        #[command(subcommand)]
        op: QuadOp,
    },
    /// Simplest cubic field x^3 - a x^2 - (a+3) x - 1.
    #[command(alias = "shanks")]
    Cubic {
        #[arg(long, short, allow_negative_numbers = true)]
        a: i64,
        #[command(subcommand)]
        op: CubicOp,
    },
    /// Biquadratic field Q(sqrt D1, sqrt D2).
    Biquad {
        #[arg(long)]
        d1: i64,
        #[arg(long)]
        d2: i64,
        #[command(subcommand)]
        op: BiquadOp,
    },
    /// The family Q(sqrt 5, sqrt p) indexed by n.
    Family {
        #[arg(long, short)]
        n: u64,
        #[command(subcommand)]
        op: FamilyOp,
    },
    /// Integer geometry of a polytope given as JSON (file or `-` for stdin).
    Geometry {
        #[command(subcommand)]
        op: GeometryOp,
    },
    /// Short-vector constants and rank lower bounds for universal lattices.
    Bounds(BoundsArgs),
    /// Run a grid of fields and write one CSV row per field.
    ///
    /// biquad columns: d1,d2,d3,case,norms,sgnrk,u,r_cls_min,r_min,status.
    /// cubic columns: a,id_a1,id_a2,iv_a1,iv_a2,iota_formula,iota,pass,status.
    /// family columns: n,p,r,discriminant,iota,pass,status.
    /// status is ok, cap (resource cap hit) or error:<message>.
    Scan(ScanArgs),
    /// Sail vertex coordinates of Q(sqrt D) for plotting: `x y` per line, blank line between faces.
    DumpSail {
        #[arg(long, short)]
        d: i64,
        /// Number of faces to emit; defaults to one period of the totally positive unit.
        #[arg(long)]
        faces: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct CapArgs {
    /// Candidate cap for box enumeration; exceeding it exits with code 3.
    #[arg(long)]
    cap: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum QuadOp {
    /// Continued fraction of -conj(omega_D).
    Cf,
    /// Convergents beta_i = s_i + t_i omega_D for -1 <= i <= last.
    Convergents {
        #[arg(long)]
        last: Option<i64>,
    },
    /// Indecomposables modulo totally positive units.
    Indecomposables {
        #[arg(long, value_enum, default_value_t = QuadStrategy::Cf)]
        strategy: QuadStrategy,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Fundamental unit, its norm and the totally positive generator.
    Unit,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum QuadStrategy {
    Cf,
    Bruteforce,
}

#[derive(Subcommand, Debug)]
enum CubicOp {
    /// Verify the two-face sail description.
    Verify {
        /// Also recompute iota by brute force.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Number of indecomposables modulo totally positive units.
    Iota {
        #[arg(long, value_enum, default_value_t = CubicStrategy::Sail)]
        strategy: CubicStrategy,
        #[command(flatten)]
        cap: CapArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CubicStrategy {
    Sail,
    Bruteforce,
}

#[derive(Subcommand, Debug)]
enum BiquadOp {
    /// Unit signature rank.
    Sgnrk,
    /// Fundamental system of units with Kubota case.
    Units,
    /// Rank lower bounds for universal lattices from the largest quadratic subfield.
    UsrBound {
        #[arg(long)]
        override_c12: bool,
    },
    /// Indecomposables by brute force.
    Iota {
        #[command(flatten)]
        cap: CapArgs,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyOp {
    /// Full symbolic verification of the sail.
    Verify,
}

#[derive(Subcommand, Debug)]
enum GeometryOp {
    /// Normalized integer volume of the convex hull.
    Iv { input: PathBuf },
    /// Integer distance of the affine hull from the origin.
    Id { input: PathBuf },
    /// Certify that the polytope lies on the sail.
    Certify { input: PathBuf },
    /// Facets as polytope JSON.
    Facets { input: PathBuf },
    /// Lattice points of the polytope.
    Points { input: PathBuf },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Number of norm-2 (or norm-4) vector pairs to accommodate.
    #[arg(long)]
    u: Option<u64>,
    /// Lattice rank to test against `u`.
    #[arg(long)]
    r: Option<u64>,
    /// Classical lattices (norm-2 vectors); otherwise norm 4.
    #[arg(long)]
    classical: bool,
    /// Use C(12) = 264 for ranks at most 12.
    #[arg(long)]
    override_c12: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ScanKind {
    Biquad,
    Cubic,
    Family,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(value_enum)]
    kind: ScanKind,
    /// Largest D2 (biquad), a (cubic, from -1) or n (family).
    #[arg(long)]
    max: i64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Use C(12) = 264 in the biquad rank bounds.
    #[arg(long)]
    override_c12: bool,
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BoxTooLarge { .. } => EXIT_CAP,
            Error::NonSquarefree(_)
            | Error::DegenerateBiquadratic(_)
            | Error::InvalidDescriptor(_)
            | Error::MonogenicityUnknown(_)
            | Error::IndexOutOfRange(_)
            | Error::FieldMismatch
            | Error::WrongFieldKind(_)
            | Error::WrongDegree(_)
            | Error::DegenerateInput(_)
            | Error::NotIntegral
            | Error::Parse(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        Failure { code, kind, message: e.to_string() }
    }
}

fn usage(kind: &str, message: String) -> Failure {
    Failure { code: EXIT_USAGE, kind: kind.into(), message }
}

type Outcome = std::result::Result<(String, u8), Failure>;

struct Ctx {
    json: bool,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: String, code: u8) -> Outcome {
        if self.json {
            Ok((serde_json::to_string_pretty(value).unwrap() + "\n", code))
        } else {
            Ok((text, code))
        }
    }
}

fn coeffs(x: &FieldElement) -> Vec<String> {
    x.coords().iter().map(q_to_string).collect()
}

fn elements_json(field: &Field, xs: &[FieldElement]) -> Value {
    json!({ "field": field.descriptor(), "elements": xs.iter().map(coeffs).collect::<Vec<_>>() })
}

fn set_json(s: &IndecomposableSet, field: &Field) -> Value {
    json!({
        "field": field.descriptor(),
        "method": s.method,
        "iota": s.count(),
        "unit_domain": s.unit_domain,
        "certification": s.certification,
        "elements": s.representatives.iter().map(coeffs).collect::<Vec<_>>(),
    })
}

fn set_text(s: &IndecomposableSet) -> String {
    let mut t = format!("iota = {}\n", s.count());
    for x in &s.representatives {
        t += &format!("{x}\n");
    }
    t
}

fn bruteforce_opts(cap: &CapArgs) -> BruteForceOptions {
    let mut o = BruteForceOptions::default();
    if let Some(c) = cap.cap {
        o.cap = c;
    }
    o
}

fn report_outcome(ctx: &Ctx, r: &VerificationReport) -> Outcome {
    let mut t = String::new();
    for c in &r.checks {
        t += &format!("{} {} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        for w in &c.witnesses {
            t += &format!("    {w}\n");
        }
    }
    let iota = r.iota.map(|i| i.to_string()).unwrap_or_else(|| "?".into());
    t += &format!("{}: {}, iota = {iota}{}\n", r.instance, if r.pass { "pass" } else { "FAIL" }, if r.conditional { " (conditional)" } else { "" });
    ctx.emit(r, t, if r.pass { EXIT_OK } else { EXIT_FAIL })
}

fn quad(ctx: &Ctx, d: i64, op: &QuadOp) -> Outcome {
    let cf = QuadraticCf::new(d)?;
    let field = cf.field.clone();
    match op {
        QuadOp::Cf => {
            let v = json!({ "d": d, "u0": cf.cf.u0, "period": cf.cf.period, "text": cf.cf.to_string() });
            ctx.emit(&v, format!("{}\n", cf.cf), EXIT_OK)
        }
        QuadOp::Convergents { last } => {
            let last = last.unwrap_or(cf.even_period() - 1);
            let conv = cf.convergents(last);
            let rows: Vec<Value> = conv
                .iter()
                .map(|c| json!({ "i": c.i, "s": c.s.to_string(), "t": c.t.to_string(), "norm": q_to_string(&c.beta.norm()) }))
                .collect();
            let mut t = String::from("i s t norm\n");
            for c in &conv {
                t += &format!("{} {} {} {}\n", c.i, c.s, c.t, q_to_string(&c.beta.norm()));
            }
            ctx.emit(&json!({ "d": d, "convergents": rows }), t, EXIT_OK)
        }
        QuadOp::Indecomposables { strategy, cap } => {
            let s = match strategy {
                QuadStrategy::Cf => iota_continued_fraction(&field)?,
                QuadStrategy::Bruteforce => iota_bruteforce(&field, &bruteforce_opts(cap))?,
            };
            ctx.emit(&set_json(&s, &field), set_text(&s), EXIT_OK)
        }
        QuadOp::Unit => {
            let (e, n) = cf.fundamental_unit();
            let tp = cf.totally_positive_unit();
            let v = json!({ "field": field.descriptor(), "unit": coeffs(&e), "norm": n, "totally_positive": coeffs(&tp) });
            ctx.emit(&v, format!("unit {e}\nnorm {n}\ntotally positive generator {tp}\n"), EXIT_OK)
        }
    }
}

fn cubic(ctx: &Ctx, a: i64, op: &CubicOp) -> Outcome {
    match op {
        CubicOp::Verify { bruteforce } => report_outcome(ctx, &shanks_verify(a, *bruteforce)?),
        CubicOp::Iota { strategy, cap } => match strategy {
            CubicStrategy::Sail => {
                let r = shanks_verify(a, false)?;
                let iota = r.iota.ok_or_else(|| Failure { code: EXIT_FAIL, kind: "Unverified".into(), message: "sail verification failed".into() })?;
                let v = json!({ "a": a, "iota": iota, "formula": shanks_iota_formula(a), "pass": r.pass });
                ctx.emit(&v, format!("iota = {iota}\n"), if r.pass { EXIT_OK } else { EXIT_FAIL })
            }
            CubicStrategy::Bruteforce => {
                let field = make_field(FieldDescriptor::SimplestCubic { a })?;
                let s = iota_bruteforce(&field, &bruteforce_opts(cap))?;
                ctx.emit(&set_json(&s, &field), set_text(&s), EXIT_OK)
            }
        },
    }
}

#[derive(Serialize)]
struct UnitsJson<'a> {
    field: &'a FieldDescriptor,
    signature_rank: usize,
    #[serde(flatten)]
    system: &'a UnitSystem,
    quadratic_units: Vec<Vec<String>>,
    generators: Vec<Vec<String>>,
}

fn biquad(ctx: &Ctx, d1: i64, d2: i64, op: &BiquadOp) -> Outcome {
    match op {
        BiquadOp::Sgnrk => {
            let sys = kubota_unit_system(d1, d2)?;
            let r = sys.signature_rank();
            let sigs: Vec<String> = sys.signatures().iter().map(|s| s.bits.iter().map(|b| if *b == 0 { '+' } else { '-' }).collect()).collect();
            let v = json!({ "d1": d1, "d2": d2, "signature_rank": r, "signatures": sigs });
            ctx.emit(&v, format!("sgnrk = {r}\nsignatures (-1 first): {}\n", sigs.join(" ")), EXIT_OK)
        }
        BiquadOp::Units => {
            let sys = kubota_unit_system(d1, d2)?;
            let v = UnitsJson {
                field: sys.field.descriptor(),
                signature_rank: sys.signature_rank(),
                system: &sys,
                quadratic_units: sys.quadratic_units.iter().map(coeffs).collect(),
                generators: sys.generators.iter().map(coeffs).collect(),
            };
            let mut t = format!("case {}\nsgnrk {}\n", sys.case_label, sys.signature_rank());
            for (g, n) in sys.generators.iter().zip(&sys.norms) {
                t += &format!("{g}  (norm {n})\n");
            }
            ctx.emit(&v, t, EXIT_OK)
        }
        BiquadOp::UsrBound { override_c12 } => {
            let b = usr_lower_bound(d1, d2, *override_c12)?;
            let t = match &b {
                UsrBound::NotApplicable { signature_rank } => format!("not applicable: sgnrk = {signature_rank} < 3\n"),
                UsrBound::Bound { d3, u, r_cls_min, r_min, .. } => {
                    format!("D = {d3}, u = {u}: classical rank >= {r_cls_min}, rank >= {r_min}\n")
                }
            };
            ctx.emit(&b, t, EXIT_OK)
        }
        BiquadOp::Iota { cap } => {
            let field = make_field(FieldDescriptor::Biquadratic { d1, d2 })?;
            let s = iota_bruteforce(&field, &bruteforce_opts(cap))?;
            ctx.emit(&set_json(&s, &field), set_text(&s), EXIT_OK)
        }
    }
}

fn read_polytope(path: &PathBuf) -> std::result::Result<IntegerPolytope, Failure> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut s).map_err(|e| usage("Io", e.to_string()))?;
    } else {
        s = fs::read_to_string(path).map_err(|e| usage("Io", format!("{}: {e}", path.display())))?;
    }
    let j: PolytopeJson = serde_json::from_str(&s).map_err(|e| usage("Parse", e.to_string()))?;
    Ok(IntegerPolytope::from_json(&j)?)
}

fn geometry(ctx: &Ctx, op: &GeometryOp) -> Outcome {
    match op {
        GeometryOp::Iv { input } => {
            let p = read_polytope(input)?;
            let v = polytope_volume(&p)?;
            ctx.emit(&json!({ "iv": v.to_string(), "dim": p.dim() }), format!("{v}\n"), EXIT_OK)
        }
        GeometryOp::Id { input } => {
            let p = read_polytope(input)?;
            let d = integer_distance(&p);
            ctx.emit(&json!({ "id": d.to_string() }), format!("{d}\n"), EXIT_OK)
        }
        GeometryOp::Certify { input } => {
            let p = read_polytope(input)?;
            match certify_on_sail(&p) {
                Ok(c) => {
                    let v = json!({ "certified": true, "level": c.k.to_string(), "delta": coeffs(&c.delta) });
                    ctx.emit(&v, format!("certified: Tr(delta x) = {} with delta = {}\n", c.k, c.delta), EXIT_OK)
                }
                Err(e @ Error::NotCertifiable(_)) => {
                    let v = json!({ "certified": false, "reason": e.to_string() });
                    ctx.emit(&v, format!("not certified: {e}\n"), EXIT_FAIL)
                }
                Err(e) => Err(e.into()),
            }
        }
        GeometryOp::Facets { input } => {
            let p = read_polytope(input)?;
            let fs: Vec<PolytopeJson> = p.facets()?.iter().map(|f| f.to_json()).collect();
            let t: String = fs.iter().map(|f| serde_json::to_string(f).unwrap() + "\n").collect();
            ctx.emit(&fs, t, EXIT_OK)
        }
        GeometryOp::Points { input } => {
            let p = read_polytope(input)?;
            let pts = p.lattice_points()?;
            let t: String = pts.iter().map(|x| format!("{x}\n")).collect();
            ctx.emit(&elements_json(p.field(), &pts), t, EXIT_OK)
        }
    }
}

fn bounds(ctx: &Ctx, b: &BoundsArgs) -> Outcome {
    let chain = kitaoka_chain(b.override_c12);
    let mut v = json!({ "kitaoka": chain, "override_c12": b.override_c12, "classical": b.classical });
    let mut t = format!(
        "ternary chain: C(12) = {}, u <= {}, floor <= {}, sqrt D < {}\n",
        chain.c12, chain.max_u, chain.max_floor, chain.sqrt_d_bound
    );
    if let Some(u) = b.u {
        let r = rank_lower_bound(u, b.classical, b.override_c12);
        v["rank_lower_bound"] = json!(r);
        t += &format!("u = {u}: rank >= {r}\n");
        if let Some(rank) = b.r {
            let m = if b.classical { 2 } else { 4 };
            let ok = rank_admissible(rank, u, b.classical, b.override_c12);
            let c = c_bound(4 * rank, m, b.override_c12);
            v["admissible"] = json!(ok);
            v["c_bound"] = json!(c.to_string());
            t += &format!("R = {rank}: C({}, {m}) = {c}, admissible = {ok}\n", 4 * rank);
        }
    }
    ctx.emit(&v, t, EXIT_OK)
}

fn csv_row(fields: &[String]) -> String {
    let esc: Vec<String> = fields
        .iter()
        .map(|f| if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.clone() })
        .collect();
    esc.join(",") + "\n"
}

fn status(e: &Error) -> String {
    match e {
        Error::BoxTooLarge { .. } => "cap".into(),
        e => format!("error:{e}"),
    }
}

fn scan_task(kind: ScanKind, item: i64, d2: i64, override_c12: bool) -> String {
    match kind {
        ScanKind::Biquad => {
            let d1 = item;
            let g = num_gcd(d1, d2);
            let d3 = (d1 / g) * (d2 / g);
            let r = kubota_unit_system(d1, d2).and_then(|sys| Ok((sys.clone(), usr_lower_bound(d1, d2, override_c12)?)));
            match r {
                Ok((sys, b)) => {
                    let norms: Vec<String> = sys.norms.iter().map(|n| n.to_string()).collect();
                    let (u, rc, rm) = match b {
                        UsrBound::Bound { u, r_cls_min, r_min, .. } => (u.to_string(), r_cls_min.to_string(), r_min.to_string()),
                        UsrBound::NotApplicable { .. } => (String::new(), String::new(), String::new()),
                    };
                    csv_row(&[
                        d1.to_string(),
                        d2.to_string(),
                        d3.to_string(),
                        sys.case_label.clone(),
                        norms.join(";"),
                        sys.signature_rank().to_string(),
                        u,
                        rc,
                        rm,
                        "ok".into(),
                    ])
                }
                Err(e) => csv_row(&[d1.to_string(), d2.to_string(), d3.to_string(), "".into(), "".into(), "".into(), "".into(), "".into(), "".into(), status(&e)]),
            }
        }
        ScanKind::Cubic => {
            let a = item;
            let r = shanks_sail(a).and_then(|s| {
                let rep = shanks_verify(a, false)?;
                Ok((integer_distance(&s.a1), integer_distance(&s.a2), polytope_volume(&s.a1)?, polytope_volume(&s.a2)?, rep))
            });
            match r {
                Ok((i1, i2, v1, v2, rep)) => csv_row(&[
                    a.to_string(),
                    i1.to_string(),
                    i2.to_string(),
                    v1.to_string(),
                    v2.to_string(),
                    shanks_iota_formula(a).to_string(),
                    rep.iota.map(|i| i.to_string()).unwrap_or_default(),
                    rep.pass.to_string(),
                    "ok".into(),
                ]),
                Err(e) => {
                    let mut row = vec![a.to_string()];
                    row.extend(std::iter::repeat(String::new()).take(7));
                    row.push(status(&e));
                    csv_row(&row)
                }
            }
        }
        ScanKind::Family => {
            let n = item as u64;
            match family_instance(n) {
                Ok(inst) => {
                    let rep = sailkit::families::verify_instance(&inst);
                    csv_row(&[
                        n.to_string(),
                        inst.p.to_string(),
                        inst.r.to_string(),
                        inst.discriminant.to_string(),
                        rep.iota.map(|i| i.to_string()).unwrap_or_default(),
                        rep.pass.to_string(),
                        if rep.conditional { "conditional".into() } else { "ok".into() },
                    ])
                }
                Err(e) => csv_row(&[n.to_string(), "".into(), "".into(), "".into(), "".into(), "".into(), status(&e)]),
            }
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

/// Runs the grid with `jobs` workers; rows are written in grid order by the calling thread.
fn scan(args: &ScanArgs, out: &mut dyn Write) -> std::result::Result<usize, Failure> {
    if args.jobs == 0 {
        return Err(usage("Usage", "--jobs must be at least 1".into()));
    }
    let (header, grid): (&str, Vec<(i64, i64)>) = match args.kind {
        ScanKind::Biquad => {
            let ds: Vec<i64> = (2..=args.max).filter(|&d| is_squarefree_i64(d)).collect();
            let mut g = Vec::new();
            for (i, &d1) in ds.iter().enumerate() {
                for &d2 in &ds[i + 1..] {
                    g.push((d1, d2));
                }
            }
            g.sort_by_key(|&(d1, d2)| (d2, d1));
            ("d1,d2,d3,case,norms,sgnrk,u,r_cls_min,r_min,status\n", g)
        }
        ScanKind::Cubic => ("a,id_a1,id_a2,iv_a1,iv_a2,iota_formula,iota,pass,status\n", (-1..=args.max).map(|a| (a, 0)).collect()),
        ScanKind::Family => ("n,p,r,discriminant,iota,pass,status\n", (0..=args.max.max(0)).map(|n| (n, 0)).collect()),
    };
    let io_err = |e: io::Error| Failure { code: EXIT_FAIL, kind: "Io".into(), message: e.to_string() };
    out.write_all(header.as_bytes()).map_err(io_err)?;
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, String)>();
    let mut written = 0;
    std::thread::scope(|s| -> std::result::Result<(), Failure> {
        for _ in 0..args.jobs.min(grid.len().max(1)) {
            let tx = tx.clone();
            let (next, grid) = (&next, &grid);
            let (kind, oc) = (args.kind, args.override_c12);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(x, y)) = grid.get(i) else { break };
                if tx.send((i, scan_task(kind, x, y, oc))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        for (i, row) in rx {
            pending.insert(i, row);
            while let Some(row) = pending.remove(&written) {
                out.write_all(row.as_bytes()).map_err(io_err)?;
                written += 1;
            }
        }
        Ok(())
    })?;
    out.flush().map_err(io_err)?;
    Ok(written)
}

/// Quadratic sail faces: the upper semiconvergents between consecutive odd convergents.
fn dump_sail(d: i64, faces: Option<usize>) -> std::result::Result<String, Failure> {
    let cf = QuadraticCf::new(d)?;
    let count = faces.unwrap_or((cf.even_period() / 2) as usize);
    let mut t = String::new();
    for f in 0..count {
        let i = 2 * f as i64 - 1;
        if f > 0 {
            t.push('\n');
        }
        for l in 0..=cf.cf.u(i + 2) {
            let b = cf.semiconvergent(i, l)?;
            let e = b.embeddings_f64();
            t += &format!("{} {}\n", e[0], e[1]);
        }
    }
    Ok(t)
}

fn dispatch(cli: &Cli) -> Outcome {
    let ctx = Ctx { json: cli.json };
    match &cli.cmd {
        Command::Quad { d, op } => quad(&ctx, *d, op),
        Command::Cubic { a, op } => cubic(&ctx, *a, op),
        Command::Biquad { d1, d2, op } => biquad(&ctx, *d1, *d2, op),
        Command::Family { n, op: FamilyOp::Verify } => report_outcome(&ctx, &verify_family(*n)?),
        Command::Geometry { op } => geometry(&ctx, op),
        Command::Bounds(b) => bounds(&ctx, b),
        Command::Scan(args) => {
            let mut w: Box<dyn Write> = match &cli.out {
                Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).map_err(|e| usage("Io", format!("{}: {e}", p.display())))?)),
                None => Box::new(io::stdout().lock()),
            };
            let rows = scan(args, &mut *w)?;
            if cli.out.is_some() {
                ctx.emit(&json!({ "rows": rows }), format!("{rows} rows\n"), EXIT_OK)
            } else {
                Ok((String::new(), EXIT_OK))
            }
        }
        Command::DumpSail { d, faces } => {
            let t = dump_sail(*d, *faces)?;
            Ok((t, EXIT_OK))
        }
    }
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
fn run(argv: Vec<OsString>) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let written = match (&cli.out, &cli.cmd) {
                (_, Command::Scan(_)) | (None, _) => io::stdout().write_all(text.as_bytes()),
                (Some(p), _) => fs::write(p, text),
            };
            if let Err(e) = written {
                eprintln!("{e}");
                return EXIT_FAIL;
            }
            code
        }
        Err(f) => {
            if cli.json {
                eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
            } else {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}
