use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement, MatrixFq};
use crate::plane::{self, ProjPoint};

/// Exponent triple `(i, j, k)` of the monomial `x^i y^j z^k`.
pub type Monomial = [usize; 3];

/// Number of monomials of degree `d` in three variables.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Degree-`d` monomials in graded-lex order with `x > y > z`.
pub fn monomials(d: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Position of `m` in [`monomials`] for its degree.
pub fn monomial_position(m: Monomial) -> usize {
    let d = m[0] + m[1] + m[2];
    let a = d - m[0];
    a * (a + 1) / 2 + (a - m[1])
}

/// A plane curve given by a nonzero ternary form of fixed degree.
///
/// Coefficients follow [`monomials`] and are scaled so that the first nonzero
/// one is 1; two curves are equal exactly when their forms are proportional.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PlaneCurve {
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl PlaneCurve {
    pub fn new(ctx: &FieldCtx, degree: usize, coeffs: Vec<FieldElement>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("curves have degree at least 1".into()));
        }
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::InvalidInput(format!(
                "degree {degree} needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !ctx.contains(**c)) {
            return Err(Error::ContextMismatch(bad.index()));
        }
        let lead = coeffs
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("the zero form defines no curve".into()))?;
        let inv = ctx.inv(lead).expect("nonzero");
        Ok(PlaneCurve {
            degree,
            coeffs: coeffs.into_iter().map(|c| ctx.mul(c, inv)).collect(),
        })
    }

    /// Builds a curve from canonical indices, as read from JSON.
    pub fn from_indices(ctx: &FieldCtx, degree: usize, coeffs: &[u32]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|&c| ctx.element(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, degree, coeffs)
    }

    /// Sums `coef * x^i y^j z^k` over the given terms.
    pub fn from_terms(
        ctx: &FieldCtx,
        degree: usize,
        terms: &[(FieldElement, Monomial)],
    ) -> Result<Self> {
        let mut coeffs = vec![FieldElement::ZERO; monomial_count(degree)];
        for &(c, m) in terms {
            if m.iter().sum::<usize>() != degree {
                return Err(Error::InvalidInput(format!(
                    "monomial {m:?} does not have degree {degree}"
                )));
            }
            let pos = monomial_position(m);
            coeffs[pos] = ctx.add(coeffs[pos], c);
        }
        Self::new(ctx, degree, coeffs)
    }

    /// [`PlaneCurve::from_terms`] with integer coefficients from the prime field.
    pub fn from_int_terms(ctx: &FieldCtx, degree: usize, terms: &[(i64, Monomial)]) -> Result<Self> {
        let terms: Vec<_> = terms.iter().map(|&(c, m)| (ctx.from_int(c), m)).collect();
        Self::from_terms(ctx, degree, &terms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, m: Monomial) -> FieldElement {
        if m.iter().sum::<usize>() != self.degree {
            return FieldElement::ZERO;
        }
        self.coeffs[monomial_position(m)]
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (FieldElement, Monomial)> + '_ {
        monomials(self.degree)
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
    }

    /// The form evaluated at a coordinate triple.
    pub fn evaluate_at(&self, ctx: &FieldCtx, v: [FieldElement; 3]) -> FieldElement {
        let d = self.degree;
        let powers = v.map(|c| {
            let mut p = Vec::with_capacity(d + 1);
            let mut acc = FieldElement::ONE;
            for _ in 0..=d {
                p.push(acc);
                acc = ctx.mul(acc, c);
            }
            p
        });
        self.terms().fold(FieldElement::ZERO, |s, (c, [i, j, k])| {
            let t = ctx.mul(ctx.mul(powers[0][i], powers[1][j]), powers[2][k]);
            ctx.add(s, ctx.mul(c, t))
        })
    }

    /// Value at the normalized representative of `point`.
    pub fn evaluate(&self, ctx: &FieldCtx, point: &ProjPoint) -> FieldElement {
        self.evaluate_at(ctx, point.coords())
    }

    /// Canonical indices of the `F_q`-points on the curve, ascending.
    pub fn rational_point_indices(&self, ctx: &FieldCtx) -> Result<Vec<usize>> {
        Ok(plane::all_points(ctx)?
            .iter()
            .enumerate()
            .filter(|(_, p)| self.evaluate(ctx, p).is_zero())
            .map(|(i, _)| i)
            .collect())
    }

    /// `C(F_q)` in canonical order.
    pub fn rational_points(&self, ctx: &FieldCtx) -> Result<Vec<ProjPoint>> {
        Ok(self
            .rational_point_indices(ctx)?
            .into_iter()
            .map(|i| ProjPoint::from_index(ctx, i))
            .collect())
    }

    /// Product of two forms, normalized.
    pub fn mul(&self, ctx: &FieldCtx, other: &PlaneCurve) -> PlaneCurve {
        let d = self.degree + other.degree;
        let mut coeffs = vec![FieldElement::ZERO; monomial_count(d)];
        for (a, ma) in self.terms() {
            for (b, mb) in other.terms() {
                let pos = monomial_position([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]]);
                coeffs[pos] = ctx.add(coeffs[pos], ctx.mul(a, b));
            }
        }
        PlaneCurve::new(ctx, d, coeffs).expect("product of nonzero forms is nonzero")
    }

    /// Image of the form under a field embedding, as a raw coefficient list
    /// in the target field (monomial order preserved).
    pub(crate) fn mapped_coeffs(&self, f: impl Fn(FieldElement) -> FieldElement) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| f(c)).collect()
    }
}

/// Whether `g` divides `f`, decided by solving the linear system `f = g * h`
/// on the coefficients of `h`.
pub fn divides(ctx: &FieldCtx, g: &PlaneCurve, f: &PlaneCurve) -> Result<bool> {
    let Some(e) = f.degree.checked_sub(g.degree) else {
        return Ok(false);
    };
    if e == 0 {
        return Ok(g == f);
    }
    let cols = monomials(e);
    let mut m = MatrixFq::zeros(monomial_count(f.degree), cols.len());
    for (ci, hm) in cols.iter().enumerate() {
        for (c, gm) in g.terms() {
            let pos = monomial_position([gm[0] + hm[0], gm[1] + hm[1], gm[2] + hm[2]]);
            m.set(pos, ci, c);
        }
    }
    Ok(m.solve(ctx, &f.coeffs)?.is_some())
}
