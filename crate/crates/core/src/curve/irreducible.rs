use serde::Serialize;

use super::form::{divides, monomial_position, monomials, PlaneCurve};
use super::restrict::BinaryForm;
use crate::error::{Error, Result};
use crate::gf::{extend_field, FieldCtx, FieldElement, Poly};
use crate::plane::{self, MAX_PLANE_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IrreducibilityStatus {
    GeomIrreducible,
    FqReducible,
    FqIrredGeomReducible,
    Unknown,
}

/// Structural reasons a form is geometrically irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCertificate {
    /// `F = v*A + B` with `A != 0` and `gcd(A, B) = 1` in the other two
    /// variables: any factorization has a factor free of `v`, which then
    /// divides both `A` and `B`.
    LinearIn { variable: char },
    /// `a x^d + b y^d + c z^d` with `abc != 0` and `p` not dividing `d` is
    /// smooth, hence geometrically irreducible.
    SmoothFermat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Linear,
    /// A proper factor over `F_q`.
    Divisor { factor: PlaneCurve },
    /// A line over `F_{q^m}` dividing the form; coefficients are canonical
    /// indices in the field built by `make_field(p, r*m)`.
    ExtensionLine { m: u32, coeffs: [u32; 3] },
    /// Exhaustive line-factor search over `F_{q^m}` found nothing.
    NoLineFactor { m: u32 },
    /// `points` compared against `d^2/4`.
    PointCount { points: usize },
    Family { family: FamilyCertificate },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    pub status: IrreducibilityStatus,
    pub witness: Option<Witness>,
}

impl IrreducibilityCertificate {
    fn new(status: IrreducibilityStatus, witness: Witness) -> Self {
        IrreducibilityCertificate {
            status,
            witness: Some(witness),
        }
    }

    pub fn is_geometrically_irreducible(&self) -> bool {
        self.status == IrreducibilityStatus::GeomIrreducible
    }
}

/// Largest degree for which [`is_irreducible_fq`] is exact.
pub const MAX_FQ_IRREDUCIBILITY_DEGREE: usize = 5;

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Distinct roots of `f` in the field of `ctx`.
fn roots_in_field(ctx: &FieldCtx, f: &Poly) -> Vec<FieldElement> {
    let Some(deg) = f.degree() else {
        return ctx.elements().collect();
    };
    if deg == 0 {
        return Vec::new();
    }
    let frob = Poly::x()
        .pow_mod(ctx, ctx.q() as u64, f)
        .expect("nonzero modulus")
        .sub(ctx, &Poly::x());
    let h = f.gcd(ctx, &frob);
    let n = h.degree().unwrap_or(0);
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    for x in ctx.elements() {
        if h.eval(ctx, x).is_zero() {
            out.push(x);
            if out.len() == n {
                break;
            }
        }
    }
    out
}

/// Searches for a line `L` over the field of `ctx` dividing the degree-`d`
/// form with coefficients `a` (monomial order).
///
/// A line factor other than `z` meets `z = 0` in a point `[x0:y0:0]` that is
/// a root of `F(x, y, 0)`; the lines through that point form a one-parameter
/// family, and the parameter values giving a factor are the common roots of
/// the coefficients of `F` restricted to the family.
pub(crate) fn find_line_factor(
    ctx: &FieldCtx,
    d: usize,
    a: &[FieldElement],
) -> Option<[FieldElement; 3]> {
    let mons = monomials(d);
    if mons.iter().zip(a).all(|(m, c)| m[2] > 0 || c.is_zero()) {
        return Some([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);
    }
    let at = |i: usize, j: usize, k: usize| a[monomial_position([i, j, k])];
    let mut candidates: Vec<Option<FieldElement>> = Vec::new();
    if at(0, d, 0).is_zero() {
        candidates.push(None);
    }
    let f1 = Poly::new((0..=d).map(|j| at(d - j, j, 0)).collect());
    candidates.extend(roots_in_field(ctx, &f1).into_iter().map(Some));

    for root in candidates {
        // table[e] collects, as a polynomial in c, the coefficient of the
        // restricted monomial indexed by e.
        let mut table = vec![vec![FieldElement::ZERO; d + 1]; d + 1];
        for (m, &coef) in mons.iter().zip(a) {
            if coef.is_zero() {
                continue;
            }
            let [i, j, _] = *m;
            match root {
                None => {
                    // x = c z
                    table[j][i] = ctx.add(table[j][i], coef);
                }
                Some(t0) => {
                    // y = t0 x - c z
                    for l in 0..=j {
                        let mut v = ctx.mul(coef, ctx.from_int((binom(j, l) % ctx.p() as u64) as i64));
                        v = ctx.mul(v, ctx.pow(t0, (j - l) as u64));
                        if l % 2 == 1 {
                            v = ctx.neg(v);
                        }
                        let e = i + j - l;
                        table[e][l] = ctx.add(table[e][l], v);
                    }
                }
            }
        }
        let g = table
            .into_iter()
            .map(Poly::new)
            .fold(Poly::zero(), |g, p| g.gcd(ctx, &p));
        let Some(c) = roots_in_field(ctx, &g).first().copied() else {
            continue;
        };
        let line = match root {
            None => [ctx.neg(FieldElement::ONE), FieldElement::ZERO, c],
            Some(t0) => [ctx.neg(t0), FieldElement::ONE, c],
        };
        return plane::normalize(ctx, line);
    }
    None
}

/// A line over `F_q` dividing the curve, if any.
pub fn line_factor(ctx: &FieldCtx, curve: &PlaneCurve) -> Option<PlaneCurve> {
    let l = find_line_factor(ctx, curve.degree(), curve.coeffs())?;
    Some(PlaneCurve::new(ctx, 1, l.to_vec()).expect("nonzero line"))
}

fn binary_divides(ctx: &FieldCtx, g: &BinaryForm, f: &BinaryForm) -> bool {
    let gp = Poly::new(g.coeffs().to_vec());
    let fp = Poly::new(f.coeffs().to_vec());
    let (Some(gd), Some(fd)) = (gp.degree(), fp.degree()) else {
        return fp.is_zero();
    };
    let s_mult_g = g.degree() - gd;
    let s_mult_f = f.degree() - fd;
    s_mult_g <= s_mult_f && fp.rem(ctx, &gp).expect("nonzero").is_zero()
}

/// A conic over `F_q` dividing the curve, if any.
///
/// The search assumes `z` does not divide the curve. The part `G(x, y, 0)`
/// of a conic factor must divide `F(x, y, 0)`, which leaves few candidates
/// for the `x, y` coefficients and `q^3` choices for the rest.
fn conic_factor(ctx: &FieldCtx, curve: &PlaneCurve) -> Option<PlaneCurve> {
    let d = curve.degree();
    let f = BinaryForm::new((0..=d).map(|k| curve.coeff([d - k, k, 0])).collect());
    let elems: Vec<FieldElement> = ctx.elements().collect();
    let mut heads = Vec::new();
    for point in plane::all_points(ctx).expect("plane order checked by caller") {
        let v = point.coords();
        let g = BinaryForm::new(v.to_vec());
        if binary_divides(ctx, &g, &f) {
            heads.push(v);
        }
    }
    for [a200, a110, a020] in heads {
        for &a101 in &elems {
            for &a011 in &elems {
                for &a002 in &elems {
                    let g = PlaneCurve::new(ctx, 2, vec![a200, a110, a101, a020, a011, a002])
                        .expect("nonzero conic");
                    if divides(ctx, &g, curve).expect("same field") {
                        return Some(g);
                    }
                }
            }
        }
    }
    None
}

/// A proper factor of degree at most 2 over `F_q`, for `d <= 5`.
pub fn fq_factor(ctx: &FieldCtx, curve: &PlaneCurve) -> Result<Option<PlaneCurve>> {
    let d = curve.degree();
    if d > MAX_FQ_IRREDUCIBILITY_DEGREE {
        return Err(Error::UnsupportedDegree(d));
    }
    if d == 1 {
        return Ok(None);
    }
    if let Some(l) = line_factor(ctx, curve) {
        return Ok(Some(l));
    }
    if d >= 4 {
        if ctx.q() > MAX_PLANE_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "conic factor search over F_{}",
                ctx.q()
            )));
        }
        return Ok(conic_factor(ctx, curve));
    }
    Ok(None)
}

/// Whether the curve has no proper factor over `F_q` (exact for `d <= 5`).
pub fn is_irreducible_fq(ctx: &FieldCtx, curve: &PlaneCurve) -> Result<bool> {
    Ok(fq_factor(ctx, curve)?.is_none())
}

fn binary_coprime(ctx: &FieldCtx, a: &BinaryForm, b: &BinaryForm) -> bool {
    let last = |f: &BinaryForm| f.coeffs()[f.degree()];
    if last(a).is_zero() && last(b).is_zero() {
        return false;
    }
    let g = Poly::new(a.coeffs().to_vec()).gcd(ctx, &Poly::new(b.coeffs().to_vec()));
    g.degree() == Some(0)
}

/// Coefficients of `A` and `B` in `F = v*A + B`, when `F` has degree at most
/// one in variable `v`.
fn split_linear(curve: &PlaneCurve, v: usize) -> Option<(BinaryForm, BinaryForm)> {
    let d = curve.degree();
    if curve.terms().any(|(_, m)| m[v] > 1) {
        return None;
    }
    let (u, w) = match v {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mono = |vu: usize, exp_u: usize, exp_w: usize| {
        let mut m = [0; 3];
        m[v] = vu;
        m[u] = exp_u;
        m[w] = exp_w;
        m
    };
    let a = BinaryForm::new((0..d).map(|k| curve.coeff(mono(1, d - 1 - k, k))).collect());
    let b = BinaryForm::new((0..=d).map(|k| curve.coeff(mono(0, d - k, k))).collect());
    Some((a, b))
}

/// Whether `F = v*A + B` with `A != 0` and `A`, `B` coprime.
pub(crate) fn linear_in_certifies(ctx: &FieldCtx, curve: &PlaneCurve, v: usize) -> bool {
    split_linear(curve, v).is_some_and(|(a, b)| !a.is_zero() && binary_coprime(ctx, &a, &b))
}

/// A structural certificate of geometric irreducibility, when one applies.
pub fn family_certificate(ctx: &FieldCtx, curve: &PlaneCurve) -> Option<FamilyCertificate> {
    let d = curve.degree();
    if d < 2 {
        return None;
    }
    for (v, name) in ['x', 'y', 'z'].into_iter().enumerate() {
        if linear_in_certifies(ctx, curve, v) {
            return Some(FamilyCertificate::LinearIn { variable: name });
        }
    }
    let pure = [[d, 0, 0], [0, d, 0], [0, 0, d]];
    let fermat = curve.terms().count() == 3
        && pure.iter().all(|&m| !curve.coeff(m).is_zero())
        && !d.is_multiple_of(ctx.p() as usize);
    fermat.then_some(FamilyCertificate::SmoothFermat)
}

fn extension_line_factor(
    ctx: &FieldCtx,
    curve: &PlaneCurve,
    m: u32,
) -> Result<Option<[u32; 3]>> {
    let (big, emb) = extend_field(ctx, m)?;
    let a = curve.mapped_coeffs(|c| emb.apply(c));
    Ok(find_line_factor(&big, curve.degree(), &a).map(|l| l.map(|c| c.index())))
}

fn point_count(ctx: &FieldCtx, curve: &PlaneCurve) -> Result<usize> {
    Ok(curve.rational_point_indices(ctx)?.len())
}

/// Decides geometric irreducibility where the tests allow it.
///
/// Exact for `d <= 3`. For larger degrees the answer comes from a family
/// certificate, the point-count bound for `F_q`-irreducible curves (a curve
/// that is irreducible over `F_q` but not geometrically has at most `d^2/4`
/// rational points), or a line factor over an extension; otherwise the
/// status is `Unknown`.
///
/// Fails only when the required extension field or plane enumeration is
/// beyond the size caps and no cheaper route applies.
pub fn geometric_irreducibility(
    ctx: &FieldCtx,
    curve: &PlaneCurve,
) -> Result<IrreducibilityCertificate> {
    use IrreducibilityStatus::*;
    let d = curve.degree();
    if d == 1 {
        return Ok(IrreducibilityCertificate::new(GeomIrreducible, Witness::Linear));
    }
    if let Some(family) = family_certificate(ctx, curve) {
        return Ok(IrreducibilityCertificate::new(
            GeomIrreducible,
            Witness::Family { family },
        ));
    }
    if d > MAX_FQ_IRREDUCIBILITY_DEGREE {
        if let Some(factor) = line_factor(ctx, curve) {
            return Ok(IrreducibilityCertificate::new(FqReducible, Witness::Divisor { factor }));
        }
        return Ok(IrreducibilityCertificate {
            status: Unknown,
            witness: None,
        });
    }
    if let Some(factor) = fq_factor(ctx, curve)? {
        return Ok(IrreducibilityCertificate::new(FqReducible, Witness::Divisor { factor }));
    }
    if d <= 3 {
        return match extension_line_factor(ctx, curve, d as u32) {
            Ok(Some(coeffs)) => Ok(IrreducibilityCertificate::new(
                FqIrredGeomReducible,
                Witness::ExtensionLine { m: d as u32, coeffs },
            )),
            Ok(None) => Ok(IrreducibilityCertificate::new(
                GeomIrreducible,
                Witness::NoLineFactor { m: d as u32 },
            )),
            Err(Error::FieldTooLarge { .. }) if ctx.q() <= MAX_PLANE_ORDER => {
                // An F_q-irreducible conic or cubic that splits geometrically is a
                // conjugate set of lines with at most one rational point, while a
                // geometrically irreducible one has at least q - 1 > d^2/4.
                let points = point_count(ctx, curve)?;
                let status = if 4 * points > d * d {
                    GeomIrreducible
                } else {
                    FqIrredGeomReducible
                };
                Ok(IrreducibilityCertificate::new(status, Witness::PointCount { points }))
            }
            Err(e) => Err(e),
        };
    }
    if ctx.q() <= MAX_PLANE_ORDER {
        let points = point_count(ctx, curve)?;
        if 4 * points > d * d {
            return Ok(IrreducibilityCertificate::new(
                GeomIrreducible,
                Witness::PointCount { points },
            ));
        }
    }
    for m in (2..=d as u32).filter(|m| (d as u32).is_multiple_of(*m)) {
        match extension_line_factor(ctx, curve, m) {
            Ok(Some(coeffs)) => {
                return Ok(IrreducibilityCertificate::new(
                    FqIrredGeomReducible,
                    Witness::ExtensionLine { m, coeffs },
                ))
            }
            Ok(None) | Err(Error::FieldTooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(IrreducibilityCertificate {
        status: Unknown,
        witness: None,
    })
}
