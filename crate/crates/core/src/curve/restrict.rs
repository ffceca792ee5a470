use serde::Serialize;

use super::form::PlaneCurve;
use crate::error::{Error, Result};
use crate::gf::{factor_degrees, FieldCtx, FieldElement, Poly};
use crate::plane::{self, ProjLine, ProjPoint};

/// A binary form `sum_k coeffs[k] s^(d-k) t^k` of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryForm {
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn evaluate(&self, ctx: &FieldCtx, s: FieldElement, t: FieldElement) -> FieldElement {
        let d = self.degree() as u64;
        self.coeffs
            .iter()
            .enumerate()
            .fold(FieldElement::ZERO, |acc, (k, &c)| {
                let m = ctx.mul(ctx.pow(s, d - k as u64), ctx.pow(t, k as u64));
                ctx.add(acc, ctx.mul(c, m))
            })
    }

    fn mul(&self, ctx: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Irreducible factor degrees with multiplicities over `F_q`, sorted.
    ///
    /// The form is dehomogenized at `s = 1`; a drop in degree is the factor
    /// `s` (the point `t/s = infinity`), counted with multiplicity.
    pub fn factor_degrees(&self, ctx: &FieldCtx) -> Result<Vec<(usize, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = Poly::new(self.coeffs.clone());
        let e = g.degree().expect("nonzero");
        let mut out = factor_degrees(ctx, &g)?;
        if e < self.degree() {
            out.push((1, self.degree() - e));
            out.sort_unstable();
        }
        Ok(out)
    }

    /// Number of distinct roots in `P^1(F_q)`.
    pub fn rational_root_count(&self, ctx: &FieldCtx) -> Result<usize> {
        Ok(self.factor_degrees(ctx)?.iter().filter(|f| f.0 == 1).count())
    }
}

/// The intersection pattern of a curve with one line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineProfile {
    Component,
    Tangency,
    /// Degrees of the irreducible factors of the restriction, descending.
    Transverse(Vec<usize>),
}

/// The fixed parametrization `(s, t) -> s P0 + t P1` of a line, with `P0`,
/// `P1` its two smallest points in canonical order.
pub fn line_basis(ctx: &FieldCtx, line: &ProjLine) -> (ProjPoint, ProjPoint) {
    let idx = plane::point_indices_on_line(ctx, line);
    (
        ProjPoint::from_index(ctx, idx[0]),
        ProjPoint::from_index(ctx, idx[1]),
    )
}

/// Restricts `curve` to `line`; zero restriction is reported as
/// [`Error::LineIsComponent`].
pub fn restrict_to_line(ctx: &FieldCtx, curve: &PlaneCurve, line: &ProjLine) -> Result<BinaryForm> {
    let form = pullback(ctx, curve, line);
    if form.is_zero() {
        Err(Error::LineIsComponent)
    } else {
        Ok(form)
    }
}

fn pullback(ctx: &FieldCtx, curve: &PlaneCurve, line: &ProjLine) -> BinaryForm {
    let d = curve.degree();
    let (p0, p1) = line_basis(ctx, line);
    let (a, b) = (p0.coords(), p1.coords());
    // powers[v][e] = (a_v s + b_v t)^e
    let powers: Vec<Vec<BinaryForm>> = (0..3)
        .map(|v| {
            let lin = BinaryForm::new(vec![a[v], b[v]]);
            let mut out = vec![BinaryForm::new(vec![FieldElement::ONE])];
            for e in 1..=d {
                let next = out[e - 1].mul(ctx, &lin);
                out.push(next);
            }
            out
        })
        .collect();
    let mut acc = vec![FieldElement::ZERO; d + 1];
    for (c, [i, j, k]) in curve.terms() {
        let term = powers[0][i].mul(ctx, &powers[1][j]).mul(ctx, &powers[2][k]);
        for (slot, &t) in acc.iter_mut().zip(&term.coeffs) {
            *slot = ctx.add(*slot, ctx.mul(c, t));
        }
    }
    BinaryForm::new(acc)
}

/// Classifies `line` against `curve` by factoring the restriction.
pub fn line_profile(ctx: &FieldCtx, curve: &PlaneCurve, line: &ProjLine) -> LineProfile {
    let form = pullback(ctx, curve, line);
    if form.is_zero() {
        return LineProfile::Component;
    }
    let factors = form.factor_degrees(ctx).expect("nonzero form");
    if factors.iter().any(|&(_, m)| m > 1) {
        return LineProfile::Tangency;
    }
    let mut parts: Vec<usize> = factors.into_iter().map(|(deg, _)| deg).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    LineProfile::Transverse(parts)
}
