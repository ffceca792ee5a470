//! Points and lines of `P^2(F_q)`.
//!
//! Points and lines share one representation: a homogeneous triple scaled so
//! that its first nonzero entry is 1. A line `(a, b, c)` is the set of points
//! with `ax + by + cz = 0`, which makes it a point of the dual plane, and every
//! enumeration routine below works for either side.
//!
//! Normalized triples are indexed densely in canonical order:
//! `[0:0:1]` is 0, `[0:1:z]` is `1 + z`, and `[1:y:z]` is `1 + q + yq + z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Largest `q` for which whole-plane enumeration is allowed.
pub const MAX_PLANE_ORDER: u32 = 1024;

type Triple = [FieldElement; 3];

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Triple,
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ProjLine {
    coeffs: Triple,
}

/// Scales a nonzero triple so its first nonzero entry is 1.
pub fn normalize(ctx: &FieldCtx, v: Triple) -> Option<Triple> {
    let lead = v.iter().copied().find(|c| !c.is_zero())?;
    if lead == FieldElement::ONE {
        return Some(v);
    }
    let inv = ctx.inv(lead).expect("nonzero lead");
    Some(v.map(|c| ctx.mul(c, inv)))
}

/// Number of points (equivalently lines) of the plane.
pub fn plane_size(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

fn triple_index(q: u32, v: &Triple) -> usize {
    let q = q as usize;
    let [x, y, z] = v.map(|c| c.index() as usize);
    if x == 0 {
        if y == 0 {
            0
        } else {
            1 + z
        }
    } else {
        1 + q + y * q + z
    }
}

fn triple_from_index(q: u32, index: usize) -> Triple {
    let qq = q as usize;
    let fe = |i: usize| FieldElement::from_index(i as u32);
    if index == 0 {
        [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]
    } else if index <= qq {
        [FieldElement::ZERO, FieldElement::ONE, fe(index - 1)]
    } else {
        let rest = index - 1 - qq;
        [FieldElement::ONE, fe(rest / qq), fe(rest % qq)]
    }
}

fn check_plane(ctx: &FieldCtx) -> Result<()> {
    if ctx.q() > MAX_PLANE_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "plane enumeration over F_{} exceeds q <= {MAX_PLANE_ORDER}",
            ctx.q()
        )));
    }
    Ok(())
}

fn cross(ctx: &FieldCtx, a: &Triple, b: &Triple) -> Triple {
    [
        ctx.sub(ctx.mul(a[1], b[2]), ctx.mul(a[2], b[1])),
        ctx.sub(ctx.mul(a[2], b[0]), ctx.mul(a[0], b[2])),
        ctx.sub(ctx.mul(a[0], b[1]), ctx.mul(a[1], b[0])),
    ]
}

fn dot(ctx: &FieldCtx, a: &Triple, b: &Triple) -> FieldElement {
    ctx.add(
        ctx.add(ctx.mul(a[0], b[0]), ctx.mul(a[1], b[1])),
        ctx.mul(a[2], b[2]),
    )
}

/// Calls `f` with the index of every normalized triple orthogonal to `v`.
///
/// For a line this visits its `q + 1` points; for a point, the `q + 1` lines
/// through it. Order is unspecified.
pub fn for_each_incident(ctx: &FieldCtx, v: &Triple, mut f: impl FnMut(usize)) {
    let q = ctx.q();
    let [a, b, c] = *v;
    let mut emit = |w: Triple| {
        let n = normalize(ctx, w).expect("incident vectors are nonzero");
        f(triple_index(q, &n));
    };
    if let Some(ainv) = ctx.inv(a) {
        // x = -(b y + c z) / a over [y:z] in P^1.
        let solve = |y: FieldElement, z: FieldElement| {
            ctx.neg(ctx.mul(ctx.add(ctx.mul(b, y), ctx.mul(c, z)), ainv))
        };
        emit([solve(FieldElement::ZERO, FieldElement::ONE), FieldElement::ZERO, FieldElement::ONE]);
        for t in ctx.elements() {
            emit([solve(FieldElement::ONE, t), FieldElement::ONE, t]);
        }
    } else if let Some(binv) = ctx.inv(b) {
        let solve = |z: FieldElement| ctx.neg(ctx.mul(ctx.mul(c, z), binv));
        emit([FieldElement::ZERO, solve(FieldElement::ONE), FieldElement::ONE]);
        for t in ctx.elements() {
            emit([FieldElement::ONE, solve(t), t]);
        }
    } else {
        emit([FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]);
        for t in ctx.elements() {
            emit([FieldElement::ONE, t, FieldElement::ZERO]);
        }
    }
}

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, coords: Triple) -> Result<Self> {
        if coords.iter().any(|&c| !ctx.contains(c)) {
            return Err(Error::InvalidInput("coordinate outside the field".into()));
        }
        normalize(ctx, coords)
            .map(|coords| ProjPoint { coords })
            .ok_or_else(|| Error::InvalidInput("the zero vector is not a point".into()))
    }

    /// Point with coordinates taken from the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, coords: [i64; 3]) -> Result<Self> {
        Self::new(ctx, coords.map(|c| ctx.from_int(c)))
    }

    pub fn from_index(ctx: &FieldCtx, index: usize) -> Self {
        ProjPoint {
            coords: triple_from_index(ctx.q(), index),
        }
    }

    pub fn coords(&self) -> Triple {
        self.coords
    }

    pub fn index(&self, ctx: &FieldCtx) -> usize {
        triple_index(ctx.q(), &self.coords)
    }

    /// The line with the same coordinate triple.
    pub fn dual(&self) -> ProjLine {
        ProjLine {
            coeffs: self.coords,
        }
    }
}

impl ProjLine {
    pub fn new(ctx: &FieldCtx, coeffs: Triple) -> Result<Self> {
        ProjPoint::new(ctx, coeffs).map(|p| p.dual())
    }

    pub fn from_ints(ctx: &FieldCtx, coeffs: [i64; 3]) -> Result<Self> {
        Self::new(ctx, coeffs.map(|c| ctx.from_int(c)))
    }

    pub fn from_index(ctx: &FieldCtx, index: usize) -> Self {
        ProjLine {
            coeffs: triple_from_index(ctx.q(), index),
        }
    }

    pub fn coeffs(&self) -> Triple {
        self.coeffs
    }

    pub fn index(&self, ctx: &FieldCtx) -> usize {
        triple_index(ctx.q(), &self.coeffs)
    }

    pub fn dual(&self) -> ProjPoint {
        ProjPoint {
            coords: self.coeffs,
        }
    }

    /// The line `bx + cy - z = 0`.
    pub fn from_affine_chart(ctx: &FieldCtx, b: FieldElement, c: FieldElement) -> Self {
        Self::new(ctx, [b, c, ctx.neg(FieldElement::ONE)]).expect("nonzero")
    }

    /// `(b, c)` with the line equal to `bx + cy - z = 0`; `None` for lines
    /// through `[0:0:1]`, whose `z` coefficient vanishes.
    pub fn affine_chart(&self, ctx: &FieldCtx) -> Option<(FieldElement, FieldElement)> {
        let [a0, a1, a2] = self.coeffs;
        let s = ctx.neg(ctx.inv(a2)?);
        Some((ctx.mul(a0, s), ctx.mul(a1, s)))
    }

    /// The line `ux + y + vz = 0`.
    pub fn from_slope_chart(ctx: &FieldCtx, u: FieldElement, v: FieldElement) -> Self {
        Self::new(ctx, [u, FieldElement::ONE, v]).expect("nonzero")
    }

    /// `(u, v)` with the line equal to `ux + y + vz = 0`; `None` for lines
    /// through `[0:1:0]`, whose `y` coefficient vanishes.
    pub fn slope_chart(&self, ctx: &FieldCtx) -> Option<(FieldElement, FieldElement)> {
        let [a, b, c] = self.coeffs;
        let binv = ctx.inv(b)?;
        Some((ctx.mul(a, binv), ctx.mul(c, binv)))
    }
}

/// Whether `point` lies on `line`.
pub fn incident(ctx: &FieldCtx, point: &ProjPoint, line: &ProjLine) -> bool {
    dot(ctx, &point.coords, &line.coeffs).is_zero()
}

/// All `q^2 + q + 1` points in canonical order.
pub fn all_points(ctx: &FieldCtx) -> Result<Vec<ProjPoint>> {
    check_plane(ctx)?;
    Ok((0..plane_size(ctx.q()))
        .map(|i| ProjPoint::from_index(ctx, i))
        .collect())
}

/// All `q^2 + q + 1` lines in canonical order.
pub fn all_lines(ctx: &FieldCtx) -> Result<Vec<ProjLine>> {
    check_plane(ctx)?;
    Ok((0..plane_size(ctx.q()))
        .map(|i| ProjLine::from_index(ctx, i))
        .collect())
}

/// Canonical indices of the points on `line`, ascending.
pub fn point_indices_on_line(ctx: &FieldCtx, line: &ProjLine) -> Vec<usize> {
    let mut out = Vec::with_capacity(ctx.q() as usize + 1);
    for_each_incident(ctx, &line.coeffs, |i| out.push(i));
    out.sort_unstable();
    out
}

/// The `q + 1` points of `line` in canonical order.
pub fn points_on_line(ctx: &FieldCtx, line: &ProjLine) -> Vec<ProjPoint> {
    point_indices_on_line(ctx, line)
        .into_iter()
        .map(|i| ProjPoint::from_index(ctx, i))
        .collect()
}

/// The `q + 1` lines through `point` in canonical order.
pub fn lines_through(ctx: &FieldCtx, point: &ProjPoint) -> Vec<ProjLine> {
    let mut idx = Vec::with_capacity(ctx.q() as usize + 1);
    for_each_incident(ctx, &point.coords, |i| idx.push(i));
    idx.sort_unstable();
    idx.into_iter().map(|i| ProjLine::from_index(ctx, i)).collect()
}

/// The unique line through two distinct points.
pub fn line_through(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    normalize(ctx, cross(ctx, &p.coords, &q.coords))
        .map(|coeffs| ProjLine { coeffs })
        .ok_or(Error::SamePoints)
}

/// The unique common point of two distinct lines.
pub fn meet(ctx: &FieldCtx, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    normalize(ctx, cross(ctx, &l.coeffs, &m.coeffs))
        .map(|coords| ProjPoint { coords })
        .ok_or(Error::SamePoints)
}
