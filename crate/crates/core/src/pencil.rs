//! The pencil `C_alpha: y z^(d-1) = x^d - alpha z^d` and greedy choice of
//! parameters whose union of rational points blocks every line.
//!
//! A line not through `[0:1:0]` meets the affine graph `y = x^d - alpha` iff
//! `alpha` lies in `T_{u,v} = {a^d + u a + v : a in F_q}` for the matching
//! `(u, v)`, while lines through `[0:1:0]` are blocked by that common point.
//! A set `S` of parameters therefore blocks iff it meets every `T_{u,v}`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{analyze_set, BlockingReport, PointSet};
use crate::curve::{pencil_curve, PlaneCurve};
use crate::error::{Error, Result};
use crate::gf::{gcd_u64, FieldCtx, FieldElement};
use crate::plane::ProjPoint;

/// Largest `q` accepted by [`greedy_construct`].
pub const MAX_PENCIL_ORDER: u32 = 512;

/// Default node budget for [`exact_min_cover`].
pub const DEFAULT_MIN_COVER_BUDGET: u64 = 5_000_000;

fn check_degree(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidInput("the pencil needs d >= 2".into()));
    }
    Ok(())
}

/// `value_sets[u]` lists the distinct values of `a^d + u a`, ascending.
fn value_sets(ctx: &FieldCtx, d: usize) -> Vec<Vec<u32>> {
    let q = ctx.q() as usize;
    let pow: Vec<FieldElement> = ctx.elements().map(|a| ctx.pow(a, d as u64)).collect();
    ctx.elements()
        .map(|u| {
            let mut seen = vec![false; q];
            for (a, &ad) in ctx.elements().zip(&pow) {
                seen[ctx.add(ad, ctx.mul(u, a)).index() as usize] = true;
            }
            (0..q as u32).filter(|&w| seen[w as usize]).collect()
        })
        .collect()
}

/// Cells `(u, v)` with `alpha in T_{u,v}`, as a mask indexed `u*q + v`.
pub fn cover_target(ctx: &FieldCtx, d: usize, alpha: FieldElement) -> Vec<bool> {
    let q = ctx.q() as usize;
    let mut out = vec![false; q * q];
    for a in ctx.elements() {
        let ad = ctx.pow(a, d as u64);
        for u in ctx.elements() {
            let v = ctx.sub(alpha, ctx.add(ad, ctx.mul(u, a)));
            out[u.index() as usize * q + v.index() as usize] = true;
        }
    }
    out
}

/// `T_{u,v}` as a sorted list of parameters.
pub fn t_set(ctx: &FieldCtx, d: usize, u: FieldElement, v: FieldElement) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = ctx
        .elements()
        .map(|a| ctx.add(ctx.add(ctx.pow(a, d as u64), ctx.mul(u, a)), v))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Canonical indices of the `q + 1` rational points of `C_alpha`.
pub fn pencil_point_indices(ctx: &FieldCtx, d: usize, alpha: FieldElement) -> Vec<usize> {
    let z = FieldElement::ZERO;
    let one = FieldElement::ONE;
    let mut out = vec![ProjPoint::new(ctx, [z, one, z]).expect("nonzero").index(ctx)];
    for x in ctx.elements() {
        let y = ctx.sub(ctx.pow(x, d as u64), alpha);
        out.push(ProjPoint::new(ctx, [x, y, one]).expect("nonzero").index(ctx));
    }
    out.sort_unstable();
    out
}

/// Union of the rational points of `C_alpha` over `alpha in s`.
pub fn pencil_union(ctx: &FieldCtx, d: usize, s: &[FieldElement]) -> Result<PointSet> {
    let mut set = PointSet::empty(ctx)?;
    for &alpha in s {
        for i in pencil_point_indices(ctx, d, alpha) {
            set.insert(i);
        }
    }
    Ok(set)
}

/// `1 + floor(2 log q / log(d/(d-1)))`, computed as one more than the
/// largest `l` with `d^l <= q^2 (d-1)^l`.
pub fn theorem_bound(q: u64, d: usize) -> usize {
    let q2 = BigUint::from(q) * q;
    let (dn, dm) = (BigUint::from(d), BigUint::from(d - 1));
    let (mut lhs, mut rhs) = (BigUint::from(1u32), q2);
    let mut l = 0;
    loop {
        lhs *= &dn;
        rhs *= &dm;
        if lhs > rhs {
            return 1 + l;
        }
        l += 1;
    }
}

/// Whether `covered >= q^2 (1 - ((d-1)/d)^k)`, decided exactly.
pub fn step_inequality_holds(q: u64, d: usize, k: usize, covered: usize) -> bool {
    let dk = BigUint::from(d).pow(k as u32);
    let d1k = BigUint::from(d - 1).pow(k as u32);
    BigUint::from(covered) * &dk >= BigUint::from(q) * q * (dk - d1k)
}

/// The greedy run: parameters in order and the cells each newly covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverState {
    pub d: usize,
    pub q: u32,
    pub chosen: Vec<FieldElement>,
    pub covered_per_step: Vec<usize>,
    pub uncovered: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilResult {
    pub d: usize,
    pub q: u32,
    #[serde(rename = "S")]
    pub s: Vec<FieldElement>,
    pub bound: usize,
    pub per_step: Vec<usize>,
    pub step_inequality: bool,
    pub cover_verdict: bool,
    pub curves: Vec<PlaneCurve>,
    pub report: BlockingReport,
}

/// Runs the greedy choice of `alpha` until every `T_{u,v}` is met.
///
/// Each step takes the unused parameter covering the most uncovered cells,
/// with ties going to the smallest canonical element.
pub fn greedy_cover(ctx: &FieldCtx, d: usize) -> Result<CoverState> {
    check_degree(d)?;
    if ctx.q() > MAX_PENCIL_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "pencil construction over F_{} exceeds q <= {MAX_PENCIL_ORDER}",
            ctx.q()
        )));
    }
    let q = ctx.q() as usize;
    let values = value_sets(ctx, d);
    let mut w = vec![true; q * q];
    let mut remaining = q * q;
    let mut used = vec![false; q];
    let mut state = CoverState {
        d,
        q: ctx.q(),
        chosen: Vec::new(),
        covered_per_step: Vec::new(),
        uncovered: remaining,
    };
    let cells = |alpha: FieldElement| {
        values.iter().enumerate().flat_map(move |(u, vals)| {
            vals.iter()
                .map(move |&x| u * q + ctx.sub(alpha, FieldElement::from_index(x)).index() as usize)
        })
    };
    while remaining > 0 {
        let gains: Vec<usize> = (0..q)
            .into_par_iter()
            .map(|a| {
                if used[a] {
                    return 0;
                }
                cells(FieldElement::from_index(a as u32)).filter(|&c| w[c]).count()
            })
            .collect();
        let (best, &gain) = gains
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
            .expect("q >= 2");
        if gain == 0 {
            return Err(Error::InvariantViolation(
                "uncovered cells remain but no parameter covers them".into(),
            ));
        }
        let alpha = FieldElement::from_index(best as u32);
        for c in cells(alpha) {
            w[c] = false;
        }
        used[best] = true;
        remaining -= gain;
        state.chosen.push(alpha);
        state.covered_per_step.push(gain);
        state.uncovered = remaining;
    }
    Ok(state)
}

/// Both blocking verdicts for the pencil union over `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverVerdicts {
    /// `s` meets every `T_{u,v}`.
    pub cover: bool,
    /// The union of the `C_alpha(F_q)` blocks every line.
    pub blocking: bool,
}

pub fn cover_verdicts(ctx: &FieldCtx, d: usize, s: &[FieldElement]) -> Result<CoverVerdicts> {
    check_degree(d)?;
    let q = ctx.q() as usize;
    let mut covered = vec![false; q * q];
    for &alpha in s {
        for (c, hit) in cover_target(ctx, d, alpha).into_iter().enumerate() {
            covered[c] |= hit;
        }
    }
    let set = pencil_union(ctx, d, s)?;
    Ok(CoverVerdicts {
        cover: covered.iter().all(|&b| b),
        blocking: analyze_set(ctx, &set, false).is_blocking,
    })
}

/// Whether the cover criterion and the exhaustive line scan agree on `s`.
pub fn verify_cover_equivalence(ctx: &FieldCtx, d: usize, s: &[FieldElement]) -> Result<bool> {
    let v = cover_verdicts(ctx, d, s)?;
    Ok(v.cover == v.blocking)
}

/// The greedy construction with every guarantee checked.
///
/// Fails with [`Error::InvariantViolation`] if the step inequality, the
/// size bound, the two blocking verdicts, or the point-count bound on the
/// union ever fail.
pub fn greedy_construct(ctx: &FieldCtx, d: usize) -> Result<PencilResult> {
    let state = greedy_cover(ctx, d)?;
    let q = ctx.q() as u64;
    let bound = theorem_bound(q, d);
    let mut total = 0;
    let mut step_ok = true;
    for (k, &c) in state.covered_per_step.iter().enumerate() {
        total += c;
        step_ok &= step_inequality_holds(q, d, k + 1, total);
    }
    if total + state.uncovered != (q * q) as usize {
        return Err(Error::InvariantViolation("per-step cover sets overlap".into()));
    }
    if !step_ok {
        return Err(Error::InvariantViolation("greedy step inequality failed".into()));
    }
    if state.chosen.len() > bound {
        return Err(Error::InvariantViolation(format!(
            "greedy used {} parameters, bound is {bound}",
            state.chosen.len()
        )));
    }
    let verdicts = cover_verdicts(ctx, d, &state.chosen)?;
    let set = pencil_union(ctx, d, &state.chosen)?;
    let report = analyze_set(ctx, &set, false);
    if !(verdicts.cover && verdicts.blocking && report.is_blocking) {
        return Err(Error::InvariantViolation(format!(
            "cover verdict {} and blocking verdict {} after greedy",
            verdicts.cover, verdicts.blocking
        )));
    }
    if set.len() > state.chosen.len() * ctx.q() as usize + 1 {
        return Err(Error::InvariantViolation("pencil union larger than |S| q + 1".into()));
    }
    let curves = state
        .chosen
        .iter()
        .map(|&a| pencil_curve(ctx, d, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(PencilResult {
        d,
        q: ctx.q(),
        s: state.chosen,
        bound,
        per_step: state.covered_per_step,
        step_inequality: step_ok,
        cover_verdict: verdicts.cover,
        curves,
        report,
    })
}

struct MinCover {
    words: usize,
    sets: Vec<Vec<u64>>,
    covering: Vec<Vec<usize>>,
    best: usize,
    nodes: u64,
    budget: u64,
}

impl MinCover {
    fn count(bits: &[u64]) -> usize {
        bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn gain(&self, set: usize, unc: &[u64]) -> usize {
        self.sets[set].iter().zip(unc).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn search(&mut self, unc: &[u64], depth: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let left = Self::count(unc);
        if left == 0 {
            self.best = self.best.min(depth);
            return true;
        }
        let max_gain = (0..self.sets.len()).map(|s| self.gain(s, unc)).max().unwrap_or(0);
        if depth + left.div_ceil(max_gain) >= self.best {
            return true;
        }
        // Branch on the uncovered cell with the fewest covering parameters.
        let cell = (0..self.words * 64)
            .filter(|&c| c < self.covering.len() && unc[c / 64] >> (c % 64) & 1 == 1)
            .min_by_key(|&c| self.covering[c].len())
            .expect("uncovered cell");
        let mut options = self.covering[cell].clone();
        options.sort_by_key(|&s| std::cmp::Reverse(self.gain(s, unc)));
        for s in options {
            let next: Vec<u64> = unc.iter().zip(&self.sets[s]).map(|(a, b)| a & !b).collect();
            if !self.search(&next, depth + 1) {
                return false;
            }
        }
        true
    }
}

/// Smallest `|S|` meeting every `T_{u,v}`, by branch and bound with at most
/// `budget` search nodes; `None` when the budget runs out.
pub fn exact_min_cover(ctx: &FieldCtx, d: usize, budget: u64) -> Result<Option<usize>> {
    check_degree(d)?;
    let q = ctx.q() as usize;
    let n = q * q;
    let words = n.div_ceil(64);
    let pack = |mask: &[bool]| {
        let mut bits = vec![0u64; words];
        for (i, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    };
    let masks: Vec<Vec<bool>> = ctx.elements().map(|a| cover_target(ctx, d, a)).collect();
    let mut covering = vec![Vec::new(); n];
    for (s, m) in masks.iter().enumerate() {
        for (c, _) in m.iter().enumerate().filter(|(_, &b)| b) {
            covering[c].push(s);
        }
    }
    let greedy = greedy_cover(ctx, d)?.chosen.len();
    let mut solver = MinCover {
        words,
        sets: masks.iter().map(|m| pack(m)).collect(),
        covering,
        best: greedy,
        nodes: 0,
        budget,
    };
    let all = pack(&vec![true; n]);
    Ok(solver.search(&all, 0).then_some(solver.best))
}

/// Smallest `x` such that `s - x` is not a `d'`-th power for every `s` in
/// `s_set`, where `d' = gcd(d, q - 1)`; such an `x` means `T_{0,x}` misses
/// `s_set`.
pub fn nonresidue_witness(
    ctx: &FieldCtx,
    s_set: &[FieldElement],
    d: usize,
) -> Result<Option<FieldElement>> {
    let dp = gcd_u64(d as u64, ctx.q() as u64 - 1);
    if dp <= 1 {
        return Err(Error::InvalidInput(format!(
            "gcd(d, q - 1) = 1 for d = {d}, q = {}",
            ctx.q()
        )));
    }
    Ok(ctx
        .elements()
        .find(|&x| s_set.iter().all(|&s| !ctx.is_dth_power(ctx.sub(s, x), dp))))
}
