//! Exhaustive verification of point sets against every line of the plane.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{divides, PlaneCurve};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::plane::{self, ProjLine, ProjPoint};

/// Number of unblocked lines listed in a report unless the full list is requested.
pub const UNBLOCKED_SAMPLE_CAP: usize = 64;

/// A set of points of `P^2(F_q)` keyed by canonical index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    mask: Vec<bool>,
    len: usize,
}

impl PointSet {
    pub fn empty(ctx: &FieldCtx) -> Result<Self> {
        plane::all_points(ctx)?;
        Ok(PointSet {
            mask: vec![false; plane::plane_size(ctx.q())],
            len: 0,
        })
    }

    pub fn from_points(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<Self> {
        let mut set = Self::empty(ctx)?;
        for p in points {
            set.insert(p.index(ctx));
        }
        Ok(set)
    }

    /// `C_1(F_q) ∪ ... ∪ C_m(F_q)`.
    pub fn union_of_curves(ctx: &FieldCtx, curves: &[PlaneCurve]) -> Result<Self> {
        let mut set = Self::empty(ctx)?;
        for c in curves {
            for i in c.rational_point_indices(ctx)? {
                set.insert(i);
            }
        }
        Ok(set)
    }

    /// Adds a point by index; returns whether it was new.
    pub fn insert(&mut self, index: usize) -> bool {
        let new = !std::mem::replace(&mut self.mask[index], true);
        self.len += new as usize;
        new
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

/// `|B ∩ L|` for every line `L`, indexed canonically.
pub fn line_counts(ctx: &FieldCtx, set: &PointSet) -> Vec<u32> {
    (0..set.mask.len())
        .into_par_iter()
        .map(|i| {
            let line = ProjLine::from_index(ctx, i);
            let mut n = 0;
            plane::for_each_incident(ctx, &line.coeffs(), |p| n += set.mask[p] as u32);
            n
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingReport {
    pub set_size: usize,
    pub is_blocking: bool,
    pub unblocked_count: usize,
    /// The first unblocked lines in canonical order, capped unless the full
    /// list was requested.
    pub unblocked: Vec<ProjLine>,
    pub unblocked_truncated: bool,
    pub k_value: usize,
    pub is_trivial: bool,
    pub t_level: usize,
}

/// Checks `set` against every line; the unblocked list is capped at
/// [`UNBLOCKED_SAMPLE_CAP`] unless `full_unblocked` is set.
pub fn analyze_set(ctx: &FieldCtx, set: &PointSet, full_unblocked: bool) -> BlockingReport {
    let counts = line_counts(ctx, set);
    let unblocked_idx: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 0)
        .map(|(i, _)| i)
        .collect();
    let cap = if full_unblocked { usize::MAX } else { UNBLOCKED_SAMPLE_CAP };
    let k_value = counts.iter().copied().max().unwrap_or(0) as usize;
    let t_level = counts.iter().copied().min().unwrap_or(0) as usize;
    BlockingReport {
        set_size: set.len(),
        is_blocking: unblocked_idx.is_empty(),
        unblocked_count: unblocked_idx.len(),
        unblocked: unblocked_idx
            .iter()
            .take(cap)
            .map(|&i| ProjLine::from_index(ctx, i))
            .collect(),
        unblocked_truncated: unblocked_idx.len() > cap,
        k_value,
        is_trivial: k_value == ctx.q() as usize + 1,
        t_level,
    }
}

/// [`analyze_set`] on a list of points (duplicates are ignored).
pub fn analyze(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<BlockingReport> {
    Ok(analyze_set(ctx, &PointSet::from_points(ctx, points)?, false))
}

/// Lines missing every point of `set`, in canonical order.
pub fn skew_lines_of_set(ctx: &FieldCtx, set: &PointSet) -> Vec<ProjLine> {
    line_counts(ctx, set)
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 0)
        .map(|(i, _)| ProjLine::from_index(ctx, i))
        .collect()
}

pub fn skew_lines(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<Vec<ProjLine>> {
    Ok(skew_lines_of_set(ctx, &PointSet::from_points(ctx, points)?))
}

/// `Σ deg C_i`, which bounds `|B ∩ L|` for the union `B` of the curves'
/// rational points whenever no line is a component.
///
/// Pairs are rejected when one form divides the other; for irreducible
/// curves this is exactly the shared-component condition.
pub fn bezout_k_bound(ctx: &FieldCtx, curves: &[PlaneCurve]) -> Result<usize> {
    for (i, a) in curves.iter().enumerate() {
        for (j, b) in curves.iter().enumerate().skip(i + 1) {
            if divides(ctx, a, b)? || divides(ctx, b, a)? {
                return Err(Error::SharedComponent(i, j));
            }
        }
    }
    Ok(curves.iter().map(PlaneCurve::degree).sum())
}
