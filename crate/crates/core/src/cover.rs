//! Randomized domination of lines by certified curves, `t`-fold variants, and
//! the small counting lemmas behind the randomized construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{analyze_set, BlockingReport, PointSet};
use crate::curve::{
    geometric_irreducibility, line_profile, monomial_count, monomials, pencil_curve,
    sample_certified_curve, CertifiedCurve, CurveFamily, LineProfile, PlaneCurve,
};
use crate::error::{Error, Result};
use crate::gf::{extend_field, rank_fq, FieldCtx, FieldElement, MatrixFq};
use crate::plane::{self, ProjPoint};

/// Attempts made by [`stein_dominate`] before giving up.
pub const MAX_STEIN_ATTEMPTS: u64 = 256;

/// A bipartite graph between `A = {0, .., a_size - 1}` and the `B` vertices,
/// stored as the neighbor list of each `B` vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteInstance {
    a_size: usize,
    neighbors: Vec<Vec<usize>>,
    a_degree: Vec<usize>,
}

impl BipartiteInstance {
    pub fn new(a_size: usize, mut neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let mut a_degree = vec![0; a_size];
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
            for &a in list.iter() {
                if a >= a_size {
                    return Err(Error::InvalidInput(format!("A vertex {a} out of range")));
                }
                a_degree[a] += 1;
            }
        }
        Ok(BipartiteInstance { a_size, neighbors, a_degree })
    }

    /// `A` = all lines of the plane, `B` = `pool`, with `L ~ C` when `L`
    /// meets `C(F_q)`.
    pub fn lines_vs_curves(ctx: &FieldCtx, pool: &[CertifiedCurve]) -> Result<Self> {
        if let Some(i) = pool
            .iter()
            .position(|c| !c.certificate.is_geometrically_irreducible())
        {
            return Err(Error::MissingCertificate(i));
        }
        let n = plane::plane_size(ctx.q());
        plane::all_lines(ctx)?;
        let neighbors = pool
            .par_iter()
            .map(|c| lines_meeting(ctx, &c.curve))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, neighbors)
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, b: usize) -> &[usize] {
        &self.neighbors[b]
    }

    pub fn a_degrees(&self) -> &[usize] {
        &self.a_degree
    }

    /// Minimum degree over `A`.
    pub fn delta(&self) -> usize {
        self.a_degree.iter().copied().min().unwrap_or(0)
    }

    pub fn dominates(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.a_size];
        for &b in chosen {
            for &a in &self.neighbors[b] {
                hit[a] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// Indices of the lines through at least one rational point of `curve`.
fn lines_meeting(ctx: &FieldCtx, curve: &PlaneCurve) -> Result<Vec<usize>> {
    let mut hit = vec![false; plane::plane_size(ctx.q())];
    for p in curve.rational_points(ctx)? {
        plane::for_each_incident(ctx, &p.coords(), |l| hit[l] = true);
    }
    Ok(hit
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(i, _)| i)
        .collect())
}

/// `ceil(|B| ln|A| / delta)`.
pub fn stein_bound(a_size: usize, b_size: usize, delta: usize) -> usize {
    (b_size as f64 * (a_size as f64).ln() / delta as f64).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationResult {
    /// Chosen `B` vertices, ascending.
    pub chosen: Vec<usize>,
    pub bound: usize,
    pub delta: usize,
    /// `min(1, ln|A| / delta)`.
    pub probability: f64,
    /// Number of sampling rounds used, starting at 1.
    pub attempts: u64,
    pub verified: bool,
}

fn isolated(instance: &BipartiteInstance) -> Option<usize> {
    instance.a_degree.iter().position(|&d| d == 0)
}

/// Drops chosen vertices, largest index first, whose neighbors stay covered
/// at least `t` times without them.
fn prune(instance: &BipartiteInstance, chosen: &mut Vec<usize>, cover: &mut [usize], t: usize) {
    chosen.sort_unstable();
    let mut i = chosen.len();
    while i > 0 {
        i -= 1;
        let b = chosen[i];
        if instance.neighbors[b].iter().all(|&a| cover[a] > t) {
            for &a in &instance.neighbors[b] {
                cover[a] -= 1;
            }
            chosen.remove(i);
        }
    }
}

/// Adds, for each undercovered `A` vertex in order, the unchosen neighbor
/// with the largest residual coverage (smallest index on ties).
fn patch(
    instance: &BipartiteInstance,
    in_set: &mut [bool],
    chosen: &mut Vec<usize>,
    cover: &mut [usize],
    t: usize,
    by_a: &[Vec<usize>],
) -> bool {
    for a in 0..instance.a_size {
        while cover[a] < t {
            let best = by_a[a]
                .iter()
                .copied()
                .filter(|&b| !in_set[b])
                .map(|b| {
                    let gain = instance.neighbors[b].iter().filter(|&&x| cover[x] < t).count();
                    (gain, std::cmp::Reverse(b))
                })
                .max();
            let Some((_, std::cmp::Reverse(b))) = best else {
                return false;
            };
            in_set[b] = true;
            chosen.push(b);
            for &x in &instance.neighbors[b] {
                cover[x] += 1;
            }
        }
    }
    true
}

fn a_to_b(instance: &BipartiteInstance) -> Vec<Vec<usize>> {
    let mut by_a = vec![Vec::new(); instance.a_size];
    for (b, list) in instance.neighbors.iter().enumerate() {
        for &a in list {
            by_a[a].push(b);
        }
    }
    by_a
}

/// Every `A` vertex covered by at least `t` chosen `B` vertices: sample each
/// `B` vertex with probability `min(1, t ln|A| / delta)`, patch, prune.
fn sample_patch_prune(
    instance: &BipartiteInstance,
    t: usize,
    rng: &mut ChaCha20Rng,
    by_a: &[Vec<usize>],
) -> Option<Vec<usize>> {
    let delta = instance.delta();
    let p = (t as f64 * (instance.a_size as f64).ln() / delta as f64).min(1.0);
    let mut in_set = vec![false; instance.b_size()];
    let mut chosen = Vec::new();
    let mut cover = vec![0usize; instance.a_size];
    for b in 0..instance.b_size() {
        if rng.gen_bool(p) {
            in_set[b] = true;
            chosen.push(b);
            for &a in &instance.neighbors[b] {
                cover[a] += 1;
            }
        }
    }
    if !patch(instance, &mut in_set, &mut chosen, &mut cover, t, by_a) {
        return None;
    }
    prune(instance, &mut chosen, &mut cover, t);
    Some(chosen)
}

/// A dominating subset of `B` within `ceil(|B| ln|A| / delta)`.
///
/// Round `k` draws from the ChaCha20 stream `k` of `seed`, so the result
/// depends only on the instance and the seed.
pub fn stein_dominate(instance: &BipartiteInstance, seed: u64) -> Result<DominationResult> {
    if instance.a_size < 2 {
        return Err(Error::InvalidInput("|A| must be at least 2".into()));
    }
    if let Some(a) = isolated(instance) {
        return Err(Error::IsolatedVertex(a));
    }
    let delta = instance.delta();
    let bound = stein_bound(instance.a_size, instance.b_size(), delta);
    let by_a = a_to_b(instance);
    for attempt in 0..MAX_STEIN_ATTEMPTS {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let chosen = sample_patch_prune(instance, 1, &mut rng, &by_a).expect("no isolated vertex");
        if chosen.len() <= bound {
            let verified = instance.dominates(&chosen);
            if !verified {
                return Err(Error::InvariantViolation("patched set does not dominate".into()));
            }
            return Ok(DominationResult {
                chosen,
                bound,
                delta,
                probability: ((instance.a_size as f64).ln() / delta as f64).min(1.0),
                attempts: attempt + 1,
                verified,
            });
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no dominating set within {bound} after {MAX_STEIN_ATTEMPTS} rounds"
    )))
}

/// Candidate curves for the lines-vs-curves instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoolSpec {
    /// Every pencil curve `C_alpha`, one per field element.
    Pencil,
    /// `size` distinct draws from the graph-type sampler.
    GraphType { size: usize },
    /// `size` distinct draws from the Fermat sampler.
    Fermat { size: usize },
}

/// Builds the pool; sampled pools use seeds `seed, seed + 1, ...` and drop
/// repeats, giving up after `50 * size` draws.
pub fn build_pool(ctx: &FieldCtx, d: usize, spec: PoolSpec, seed: u64) -> Result<Vec<CertifiedCurve>> {
    let (family, size) = match spec {
        PoolSpec::Pencil => {
            return ctx
                .elements()
                .map(|a| CertifiedCurve::from_family(ctx, pencil_curve(ctx, d, a)?))
                .collect();
        }
        PoolSpec::GraphType { size } => (CurveFamily::GraphType, size),
        PoolSpec::Fermat { size } => (CurveFamily::Fermat, size),
    };
    let mut out: Vec<CertifiedCurve> = Vec::with_capacity(size);
    let mut seen = std::collections::HashSet::new();
    let mut k = 0u64;
    while out.len() < size {
        if k >= 50 * size as u64 {
            return Err(Error::BudgetExceeded(format!(
                "only {} distinct curves after {k} draws",
                out.len()
            )));
        }
        let c = sample_certified_curve(ctx, family, d, seed.wrapping_add(k))?;
        k += 1;
        if seen.insert(c.curve.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyResult {
    pub t: usize,
    /// Indices into the pool, ascending.
    pub chosen: Vec<usize>,
    pub curves: Vec<PlaneCurve>,
    pub pool_size: usize,
    pub delta: usize,
    pub bound: usize,
    /// `4 ln q` for `t = 1`, otherwise `(2 (t + 1)! / t) ln q`.
    pub log_target: f64,
    pub report: BlockingReport,
}

fn log_target(q: u32, t: usize) -> f64 {
    let fact: f64 = (1..=t + 1).map(|k| k as f64).product();
    2.0 * fact / t as f64 * (q as f64).ln()
}

/// Runs [`stein_dominate`] on lines against `pool` and verifies the union of
/// the chosen curves blocks.
pub fn build_blocking_family(
    ctx: &FieldCtx,
    pool: &[CertifiedCurve],
    seed: u64,
) -> Result<FamilyResult> {
    let instance = BipartiteInstance::lines_vs_curves(ctx, pool)?;
    let dom = stein_dominate(&instance, seed).map_err(|e| match e {
        Error::IsolatedVertex(a) => Error::PoolInsufficient(a),
        e => e,
    })?;
    let curves: Vec<PlaneCurve> = dom.chosen.iter().map(|&i| pool[i].curve.clone()).collect();
    let report = analyze_set(ctx, &PointSet::union_of_curves(ctx, &curves)?, false);
    if !report.is_blocking {
        return Err(Error::InvariantViolation("dominating family does not block".into()));
    }
    Ok(FamilyResult {
        t: 1,
        chosen: dom.chosen,
        curves,
        pool_size: pool.len(),
        delta: dom.delta,
        bound: dom.bound,
        log_target: log_target(ctx.q(), 1),
        report,
    })
}

/// Point multiplicities of a union of curves with per-line tallies of the
/// distinct points.
struct Union {
    mult: Vec<u32>,
    line_points: Vec<usize>,
}

impl Union {
    fn add(&mut self, ctx: &FieldCtx, points: &[usize], sign: bool) {
        for &p in points {
            let before = self.mult[p];
            if sign {
                self.mult[p] += 1;
            } else {
                self.mult[p] -= 1;
            }
            if (before == 0) != (self.mult[p] == 0) {
                let coords = ProjPoint::from_index(ctx, p).coords();
                let lp = &mut self.line_points;
                plane::for_each_incident(ctx, &coords, |l| {
                    if sign {
                        lp[l] += 1
                    } else {
                        lp[l] -= 1
                    }
                });
            }
        }
    }

    /// `sum_L min(deficit(L), new points on L)` for adding `points`.
    fn gain(&self, ctx: &FieldCtx, points: &[usize], t: usize) -> usize {
        let mut added: std::collections::HashMap<usize, usize> = Default::default();
        for &p in points {
            if self.mult[p] == 0 {
                let coords = ProjPoint::from_index(ctx, p).coords();
                plane::for_each_incident(ctx, &coords, |l| *added.entry(l).or_default() += 1);
            }
        }
        added
            .into_iter()
            .map(|(l, n)| n.min(t.saturating_sub(self.line_points[l])))
            .sum()
    }
}

/// A family whose union meets every line in at least `t` points.
///
/// The pool is sampled as for `t = 1` with probability scaled by `t`, then
/// curves are added by largest residual gain (points still missing on
/// undercovered lines) and finally pruned, largest index first. `t = 1`
/// delegates to [`build_blocking_family`].
pub fn build_tfold_family(
    ctx: &FieldCtx,
    t: usize,
    pool: &[CertifiedCurve],
    seed: u64,
) -> Result<FamilyResult> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    if t == 1 {
        return build_blocking_family(ctx, pool, seed);
    }
    if let Some(i) = pool.iter().position(|c| c.curve.degree() < t.min(3)) {
        return Err(Error::InvalidInput(format!("pool curve {i} has degree below min(t, 3)")));
    }
    let instance = BipartiteInstance::lines_vs_curves(ctx, pool)?;
    if let Some(a) = isolated(&instance) {
        return Err(Error::PoolInsufficient(a));
    }
    let points: Vec<Vec<usize>> = pool
        .par_iter()
        .map(|c| c.curve.rational_point_indices(ctx))
        .collect::<Result<_>>()?;
    let n = plane::plane_size(ctx.q());
    let mut union = Union { mult: vec![0; n], line_points: vec![0; n] };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let delta = instance.delta();
    let p = (t as f64 * (n as f64).ln() / delta as f64).min(1.0);
    let mut in_set = vec![false; pool.len()];
    for b in 0..pool.len() {
        if rng.gen_bool(p) {
            in_set[b] = true;
            union.add(ctx, &points[b], true);
        }
    }
    while union.line_points.iter().any(|&c| c < t) {
        let best = (0..pool.len())
            .into_par_iter()
            .filter(|&b| !in_set[b])
            .map(|b| (union.gain(ctx, &points[b], t), std::cmp::Reverse(b)))
            .max();
        match best {
            Some((g, std::cmp::Reverse(b))) if g > 0 => {
                in_set[b] = true;
                union.add(ctx, &points[b], true);
            }
            _ => {
                let line = union.line_points.iter().position(|&c| c < t).expect("undercovered");
                return Err(Error::PoolInsufficient(line));
            }
        }
    }
    for b in (0..pool.len()).rev() {
        if !in_set[b] {
            continue;
        }
        union.add(ctx, &points[b], false);
        if union.line_points.iter().all(|&c| c >= t) {
            in_set[b] = false;
        } else {
            union.add(ctx, &points[b], true);
        }
    }
    let chosen: Vec<usize> = (0..pool.len()).filter(|&b| in_set[b]).collect();
    let curves: Vec<PlaneCurve> = chosen.iter().map(|&i| pool[i].curve.clone()).collect();
    let report = analyze_set(ctx, &PointSet::union_of_curves(ctx, &curves)?, false);
    if report.t_level < t {
        return Err(Error::InvariantViolation(format!(
            "t_level {} below {t}",
            report.t_level
        )));
    }
    Ok(FamilyResult {
        t,
        chosen,
        curves,
        pool_size: pool.len(),
        delta,
        bound: stein_bound(n, pool.len(), delta),
        log_target: log_target(ctx.q(), t),
        report,
    })
}

/// How [`count_irreducible_through`] decides geometric irreducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingPath {
    /// Keep forms whose [`geometric_irreducibility`] certificate is positive.
    Certificate,
    /// Keep forms with no line component over `F_(q^m)`, `m <= d`, found by
    /// scanning every line of each extension plane.
    DivisorScan,
}

/// Whether `(d, q)` is small enough to enumerate all forms.
pub fn counting_supported(d: usize, q: u32) -> bool {
    (d == 1 && q <= 7) || (d == 2 && q <= 5) || (d == 3 && q <= 3)
}

/// Visits every normalized nonzero form of degree `d` (first nonzero
/// coefficient equal to 1).
fn for_each_normalized_form(ctx: &FieldCtx, d: usize, mut f: impl FnMut(&[FieldElement])) {
    let n = monomial_count(d);
    let q = ctx.q();
    let mut v = vec![FieldElement::ZERO; n];
    for lead in 0..n {
        v.iter_mut().for_each(|c| *c = FieldElement::ZERO);
        v[lead] = FieldElement::ONE;
        let free = n - lead - 1;
        let mut digits = vec![0u32; free];
        loop {
            for (k, &dg) in digits.iter().enumerate() {
                v[lead + 1 + k] = FieldElement::from_index(dg);
            }
            f(&v);
            let mut k = 0;
            while k < free {
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
}

fn has_line_component_over(big: &FieldCtx, curve: &PlaneCurve) -> bool {
    plane::all_lines(big)
        .expect("extension plane within limits")
        .iter()
        .any(|l| line_profile(big, curve, l) == LineProfile::Component)
}

/// `psi(S)`: geometrically irreducible curves of degree `d` whose rational
/// points contain `S`, counted up to scalars by exhaustive enumeration.
pub fn count_irreducible_through(
    ctx: &FieldCtx,
    d: usize,
    s: &[ProjPoint],
    path: CountingPath,
) -> Result<u64> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if !counting_supported(d, ctx.q()) {
        return Err(Error::BudgetExceeded(format!(
            "enumerating degree-{d} forms over F_{} is out of range",
            ctx.q()
        )));
    }
    let mut candidates = Vec::new();
    let pts: Vec<[FieldElement; 3]> = s.iter().map(ProjPoint::coords).collect();
    for_each_normalized_form(ctx, d, |v| {
        let c = PlaneCurve::new(ctx, d, v.to_vec()).expect("normalized form");
        if pts.iter().all(|&p| c.evaluate_at(ctx, p).is_zero()) {
            candidates.push(c);
        }
    });
    match path {
        CountingPath::Certificate => {
            let flags = candidates
                .par_iter()
                .map(|c| Ok(geometric_irreducibility(ctx, c)?.is_geometrically_irreducible()))
                .collect::<Result<Vec<bool>>>()?;
            Ok(flags.into_iter().filter(|&b| b).count() as u64)
        }
        CountingPath::DivisorScan => {
            if d == 1 {
                return Ok(candidates.len() as u64);
            }
            let towers = (1..=d as u32)
                .map(|m| extend_field(ctx, m))
                .collect::<Result<Vec<_>>>()?;
            let count = candidates
                .par_iter()
                .filter(|c| {
                    towers.iter().all(|(big, emb)| {
                        let lifted = PlaneCurve::new(big, d, c.mapped_coeffs(|x| emb.apply(x)))
                            .expect("nonzero lift");
                        !has_line_component_over(big, &lifted)
                    })
                })
                .count();
            Ok(count as u64)
        }
    }
}

/// `(q^(N-2) - 1) / (q - 1)` with `N = (d + 1)(d + 2) / 2`: the number of
/// curves of degree `d` through two given points.
pub fn two_point_bound(q: u32, d: usize) -> u64 {
    let n = monomial_count(d) as u32;
    (u64::from(q).pow(n - 2) - 1) / (u64::from(q) - 1)
}

/// Rank of the `k x N` matrix of monomials evaluated at the points equals
/// `k`. Requires distinct points and `d >= k - 1`.
pub fn interpolation_rank_check(ctx: &FieldCtx, points: &[ProjPoint], d: usize) -> Result<bool> {
    let k = points.len();
    if k == 0 || d + 1 < k {
        return Err(Error::InvalidInput(format!("need 1 <= k <= d + 1, got k = {k}, d = {d}")));
    }
    let mut idx: Vec<usize> = points.iter().map(|p| p.index(ctx)).collect();
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("points must be distinct".into()));
    }
    let mons = monomials(d);
    let mut m = MatrixFq::zeros(k, mons.len());
    for (i, p) in points.iter().enumerate() {
        let [x, y, z] = p.coords();
        for (j, &[a, b, c]) in mons.iter().enumerate() {
            let v = ctx.mul(ctx.pow(x, a as u64), ctx.mul(ctx.pow(y, b as u64), ctx.pow(z, c as u64)));
            m.set(i, j, v);
        }
    }
    Ok(rank_fq(ctx, &m) == k)
}

fn binom2(n: u128) -> u128 {
    n * (n - 1) / 2
}

/// `D * C(d/D + 2, 2) <= C(d + 2, 2)` for every divisor `D` of `d`.
pub fn binom_convexity_check(d: u64) -> bool {
    let d = u128::from(d);
    let rhs = binom2(d + 2);
    (1..=d)
        .filter(|&dd| d % dd == 0)
        .all(|dd| dd * binom2(d / dd + 2) <= rhs)
}
