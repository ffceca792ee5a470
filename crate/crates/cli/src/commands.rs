use std::path::Path;

use anyhow::{bail, Context};
use blockforge::blocking::{analyze_set, bezout_k_bound, PointSet};
use blockforge::census::{certify_all, chebotarev_census, skew_line_bound_check};
use blockforge::conics::{sample_distinct_conics, simultaneous_nonsquare_census};
use blockforge::cover::{
    build_blocking_family, build_pool, build_tfold_family, count_irreducible_through,
    two_point_bound, CountingPath, FamilyResult, PoolSpec,
};
use blockforge::curve::{
    fermat_curve, monomial_count, pencil_curve, sample_certified_curve, CurveFamily, PlaneCurve,
};
use blockforge::gf::{make_field, prime_power, FieldCtx};
use blockforge::pencil::{exact_min_cover, greedy_construct, theorem_bound};
use blockforge::plane::{self, ProjPoint};
use blockforge::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Command, FieldArgs, PoolArgs, PoolKind};

/// A summary table written as CSV when requested.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

pub struct Output {
    pub result: Value,
    pub table: Table,
    /// Nonzero exit status to report after writing the record.
    pub status: Option<u8>,
}

impl Output {
    fn new(result: impl Serialize, table: Table) -> anyhow::Result<Self> {
        Ok(Output { result: serde_json::to_value(result)?, table, status: None })
    }
}

pub fn field(args: &FieldArgs) -> anyhow::Result<FieldCtx> {
    let (p, r) = match (args.q, args.p) {
        (Some(q), _) => prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?,
        (None, Some(p)) => (p, args.r.unwrap_or(1)),
        (None, None) => return Err(Error::InvalidInput("give --q or --p".into()).into()),
    };
    Ok(make_field(p, r)?)
}

pub fn run(command: &Command) -> anyhow::Result<Output> {
    match command {
        Command::FieldInfo { field: f } => field_info(&field(f)?),
        Command::PencilConstruct { field: f, d } => pencil_construct(&field(f)?, *d),
        Command::PencilMincover { field: f, d, budget } => pencil_mincover(&field(f)?, *d, *budget),
        Command::Verify { field: f, points, curves, full } => {
            verify(&field(f)?, points.as_deref(), curves.as_deref(), *full)
        }
        Command::ConicSkewCensus { field: f, ell, seed, trials } => {
            conic_skew_census(&field(f)?, *ell, *seed, *trials)
        }
        Command::ChebotarevCensus { field: f, curves } => chebotarev(&field(f)?, curves),
        Command::SteinBuild { field: f, d, pool, seed } => {
            family(&field(f)?, *d, 1, pool, *seed)
        }
        Command::TfoldBuild { field: f, d, t, pool, seed } => {
            family(&field(f)?, *d, *t, pool, *seed)
        }
        Command::CountCurves { field: f, d, no_pairs } => count_curves(&field(f)?, *d, !no_pairs),
        Command::KTable { qs, d, seed } => k_table(qs, *d, *seed),
    }
}

fn field_info(ctx: &FieldCtx) -> anyhow::Result<Output> {
    let mut t = Table::new(&["p", "r", "q", "modulus", "generator"]);
    let modulus = ctx
        .modulus()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    t.push(row![ctx.p(), ctx.r(), ctx.q(), modulus, ctx.generator().index()]);
    Output::new(
        json!({
            "p": ctx.p(),
            "r": ctx.r(),
            "q": ctx.q(),
            "modulus": ctx.modulus(),
            "generator": ctx.generator(),
            "prime_field": ctx.r() == 1,
        }),
        t,
    )
}

fn pencil_construct(ctx: &FieldCtx, d: usize) -> anyhow::Result<Output> {
    let r = greedy_construct(ctx, d)?;
    let mut t = Table::new(&[
        "d", "q", "size", "bound", "step_inequality", "cover_verdict", "is_blocking", "k_value",
    ]);
    t.push(row![
        r.d,
        r.q,
        r.s.len(),
        r.bound,
        r.step_inequality,
        r.cover_verdict,
        r.report.is_blocking,
        r.report.k_value
    ]);
    Output::new(r, t)
}

fn pencil_mincover(ctx: &FieldCtx, d: usize, budget: u64) -> anyhow::Result<Output> {
    let greedy = greedy_construct(ctx, d)?;
    let exact = exact_min_cover(ctx, d, budget)?;
    let gcd = gcd(d as u64, ctx.q() as u64 - 1);
    let mut t = Table::new(&["d", "q", "gcd_d_q_minus_1", "greedy", "exact", "bound"]);
    t.push(row![
        d,
        ctx.q(),
        gcd,
        greedy.s.len(),
        exact.map_or("".into(), |e| e.to_string()),
        theorem_bound(ctx.q() as u64, d)
    ]);
    let mut out = Output::new(
        json!({
            "d": d,
            "q": ctx.q(),
            "gcd_d_q_minus_1": gcd,
            "greedy_size": greedy.s.len(),
            "greedy_S": greedy.s,
            "bound": greedy.bound,
            "exact_min": exact,
            "budget": budget,
            "budget_exhausted": exact.is_none(),
        }),
        t,
    )?;
    if exact.is_none() {
        out.status = Some(3);
    }
    Ok(out)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Deserialize)]
struct CurveFile {
    degree: usize,
    coeffs: Vec<u32>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

fn verify(
    ctx: &FieldCtx,
    points: Option<&Path>,
    curves: Option<&Path>,
    full: bool,
) -> anyhow::Result<Output> {
    let (set, bezout, source) = if let Some(path) = points {
        let raw: Vec<[u32; 3]> = read_json(path)?;
        let pts = raw
            .iter()
            .map(|c| {
                let coords = [ctx.element(c[0])?, ctx.element(c[1])?, ctx.element(c[2])?];
                ProjPoint::new(ctx, coords)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        (PointSet::from_points(ctx, &pts)?, None, "points")
    } else if let Some(path) = curves {
        let raw: Vec<CurveFile> = read_json(path)?;
        let cs = raw
            .iter()
            .map(|c| PlaneCurve::from_indices(ctx, c.degree, &c.coeffs))
            .collect::<Result<Vec<_>, Error>>()?;
        let bezout = bezout_k_bound(ctx, &cs).ok();
        (PointSet::union_of_curves(ctx, &cs)?, bezout, "curves")
    } else {
        bail!(Error::InvalidInput("give --points or --curves".into()));
    };
    let report = analyze_set(ctx, &set, full);
    let mut t = Table::new(&["q", "set_size", "is_blocking", "unblocked_count", "k_value", "t_level", "is_trivial"]);
    t.push(row![
        ctx.q(),
        report.set_size,
        report.is_blocking,
        report.unblocked_count,
        report.k_value,
        report.t_level,
        report.is_trivial
    ]);
    Output::new(
        json!({ "q": ctx.q(), "source": source, "bezout_k_bound": bezout, "report": report }),
        t,
    )
}

fn conic_skew_census(ctx: &FieldCtx, ell: usize, seed: u64, trials: u64) -> anyhow::Result<Output> {
    if trials == 0 {
        bail!(Error::InvalidInput("trials must be positive".into()));
    }
    let mut t = Table::new(&["trial", "seed", "nonsquare_count", "skew_all_count", "main_term", "within_tolerance"]);
    let mut runs = Vec::new();
    for i in 0..trials {
        let s = seed.wrapping_add(i);
        let conics = sample_distinct_conics(ctx, ell, s);
        let r = simultaneous_nonsquare_census(ctx, &conics)?;
        t.push(row![i, s, r.nonsquare_count, r.skew_all_count, r.main_term, r.within_tolerance]);
        runs.push(r);
    }
    let mut skew: Vec<usize> = runs.iter().map(|r| r.skew_all_count).collect();
    skew.sort_unstable();
    let median = if skew.len() % 2 == 1 {
        skew[skew.len() / 2] as f64
    } else {
        (skew[skew.len() / 2 - 1] + skew[skew.len() / 2]) as f64 / 2.0
    };
    Output::new(
        json!({
            "q": ctx.q(),
            "ell": ell,
            "seed": seed,
            "trials": trials,
            "main_term": runs[0].main_term,
            "tolerance": runs[0].tolerance,
            "median_skew_all_count": median,
            "all_have_common_skew": runs.iter().all(|r| r.skew_all_count > 0),
            "runs": runs,
        }),
        t,
    )
}

fn parse_curve(ctx: &FieldCtx, spec: &str) -> anyhow::Result<PlaneCurve> {
    let bad = || Error::InvalidInput(format!("bad curve spec {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> anyhow::Result<u64> {
        Ok(parts.get(i).and_then(|s| s.parse().ok()).ok_or_else(bad)?)
    };
    let curve = match (parts[0], parts.len()) {
        ("fermat", 2) => {
            let one = ctx.one();
            fermat_curve(ctx, num(1)? as usize, [one, one, ctx.neg(one)])?.curve
        }
        ("fermat-random", 3) => {
            sample_certified_curve(ctx, CurveFamily::Fermat, num(1)? as usize, num(2)?)?.curve
        }
        ("graph", 3) => {
            sample_certified_curve(ctx, CurveFamily::GraphType, num(1)? as usize, num(2)?)?.curve
        }
        ("pencil", 3) => {
            let alpha = u32::try_from(num(2)?).map_err(|_| bad())?;
            pencil_curve(ctx, num(1)? as usize, ctx.element(alpha)?)?
        }
        ("conic", 2) => sample_distinct_conics(ctx, 1, num(1)?)
            .remove(0)
            .curve()
            .clone(),
        _ => return Err(bad().into()),
    };
    Ok(curve)
}

fn chebotarev(ctx: &FieldCtx, specs: &[String]) -> anyhow::Result<Output> {
    let curves = specs
        .iter()
        .map(|s| parse_curve(ctx, s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let certified = certify_all(ctx, &curves)?;
    let report = chebotarev_census(ctx, &certified)?;
    let skew = skew_line_bound_check(ctx, &certified)?;
    let mut t = Table::new(&["class", "weight", "observed", "predicted", "deviation", "normalized", "verdict"]);
    for c in &report.classes {
        let class = c
            .class
            .iter()
            .map(|p| p.iter().map(usize::to_string).collect::<Vec<_>>().join("+"))
            .collect::<Vec<_>>()
            .join(" x ");
        t.push(row![
            class,
            c.weight,
            c.observed,
            c.predicted,
            c.deviation,
            c.normalized,
            serde_json::to_value(c.verdict)?.as_str().unwrap_or_default()
        ]);
    }
    Output::new(json!({ "specs": specs, "chebotarev": report, "skew": skew }), t)
}

fn pool_spec(pool: &PoolArgs) -> PoolSpec {
    match pool.pool {
        PoolKind::Pencil => PoolSpec::Pencil,
        PoolKind::GraphType => PoolSpec::GraphType { size: pool.pool_size },
        PoolKind::Fermat => PoolSpec::Fermat { size: pool.pool_size },
    }
}

fn family_row(ctx: &FieldCtx, d: usize, spec: PoolSpec, r: &FamilyResult) -> Vec<String> {
    row![
        ctx.q(),
        d,
        r.t,
        serde_json::to_value(spec)
            .ok()
            .and_then(|v| v["kind"].as_str().map(str::to_owned))
            .unwrap_or_default(),
        r.pool_size,
        r.chosen.len(),
        r.bound,
        r.delta,
        r.log_target,
        r.report.is_blocking,
        r.report.t_level,
        r.report.k_value
    ]
}

const FAMILY_HEADER: [&str; 12] = [
    "q", "d", "t", "pool", "pool_size", "chosen", "bound", "delta", "log_target", "is_blocking",
    "t_level", "k_value",
];

fn family(ctx: &FieldCtx, d: usize, t: usize, pool: &PoolArgs, seed: u64) -> anyhow::Result<Output> {
    let spec = pool_spec(pool);
    let candidates = build_pool(ctx, d, spec, seed)?;
    let r = if t == 1 {
        build_blocking_family(ctx, &candidates, seed)?
    } else {
        build_tfold_family(ctx, t, &candidates, seed)?
    };
    let mut table = Table::new(&FAMILY_HEADER);
    table.push(family_row(ctx, d, spec, &r));
    Output::new(json!({ "q": ctx.q(), "d": d, "pool": spec, "seed": seed, "family": r }), table)
}

#[derive(Serialize)]
struct PointCount {
    point: ProjPoint,
    certificate: u64,
    divisor_scan: u64,
}

fn count_curves(ctx: &FieldCtx, d: usize, pairs: bool) -> anyhow::Result<Output> {
    let empty = count_irreducible_through(ctx, d, &[], CountingPath::Certificate)?;
    let pts = plane::all_points(ctx)?;
    let per_point = pts
        .iter()
        .map(|p| {
            Ok(PointCount {
                point: *p,
                certificate: count_irreducible_through(ctx, d, &[*p], CountingPath::Certificate)?,
                divisor_scan: count_irreducible_through(ctx, d, &[*p], CountingPath::DivisorScan)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let paths_agree = per_point.iter().all(|c| c.certificate == c.divisor_scan);
    let constant = per_point.iter().all(|c| c.certificate == per_point[0].certificate);
    let pair_summary = if pairs {
        let mut max = 0;
        for (i, p) in pts.iter().enumerate() {
            for r in &pts[i + 1..] {
                max = max.max(count_irreducible_through(ctx, d, &[*p, *r], CountingPath::Certificate)?);
            }
        }
        let bound = two_point_bound(ctx.q(), d);
        Some(json!({ "max": max, "bound": bound, "holds": max <= bound }))
    } else {
        None
    };
    let mut t = Table::new(&["d", "q", "N", "psi_empty", "psi_point", "constant", "paths_agree"]);
    t.push(row![d, ctx.q(), monomial_count(d), empty, per_point[0].certificate, constant, paths_agree]);
    Output::new(
        json!({
            "d": d,
            "q": ctx.q(),
            "N": monomial_count(d),
            "psi_empty": empty,
            "psi_point": per_point,
            "psi_point_constant": constant,
            "paths_agree": paths_agree,
            "pairs": pair_summary,
        }),
        t,
    )
}

fn k_table(qs: &[u64], d: usize, seed: u64) -> anyhow::Result<Output> {
    let mut t = Table::new(&["q", "d", "construction", "curves", "k_value", "bezout", "is_blocking", "is_trivial"]);
    let mut rows = Vec::new();
    for &q in qs {
        let ctx = field(&FieldArgs { q: Some(q), p: None, r: None })?;
        let pencil = greedy_construct(&ctx, d)?;
        let pool = build_pool(&ctx, d, PoolSpec::Pencil, seed)?;
        let stein = build_blocking_family(&ctx, &pool, seed)?;
        for (name, curves, report) in [
            ("pencil-greedy", &pencil.curves, &pencil.report),
            ("stein-pencil-pool", &stein.curves, &stein.report),
        ] {
            let bezout = bezout_k_bound(&ctx, curves).ok();
            t.push(row![
                q,
                d,
                name,
                curves.len(),
                report.k_value,
                bezout.map_or(String::new(), |b| b.to_string()),
                report.is_blocking,
                report.is_trivial
            ]);
            rows.push(json!({
                "q": q,
                "d": d,
                "construction": name,
                "curves": curves.len(),
                "k_value": report.k_value,
                "bezout_k_bound": bezout,
                "is_blocking": report.is_blocking,
                "is_trivial": report.is_trivial,
            }));
        }
    }
    Output::new(json!({ "d": d, "seed": seed, "rows": rows }), t)
}
