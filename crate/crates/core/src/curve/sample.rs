use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::form::{monomial_count, monomial_position, PlaneCurve};
use super::irreducible::{
    family_certificate, linear_in_certifies, FamilyCertificate, IrreducibilityCertificate,
    IrreducibilityStatus, Witness,
};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Families with a built-in proof of geometric irreducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveFamily {
    /// `y z^(d-1) = x^d - alpha z^d`.
    Pencil(FieldElement),
    /// `y A(x, z) + B(x, z)` with random coprime `A`, `B`.
    GraphType,
    /// `a x^d + b y^d + c z^d` with random nonzero `a, b, c`.
    Fermat,
}

/// A curve together with its irreducibility certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedCurve {
    pub curve: PlaneCurve,
    pub certificate: IrreducibilityCertificate,
}

impl CertifiedCurve {
    fn with_family(curve: PlaneCurve, family: FamilyCertificate) -> Self {
        CertifiedCurve {
            curve,
            certificate: IrreducibilityCertificate {
                status: IrreducibilityStatus::GeomIrreducible,
                witness: Some(Witness::Family { family }),
            },
        }
    }

    /// Attaches the family certificate of `curve`, failing if none applies.
    pub fn from_family(ctx: &FieldCtx, curve: PlaneCurve) -> Result<Self> {
        let family = family_certificate(ctx, &curve)
            .ok_or_else(|| Error::InvalidInput("curve matches no certified family".into()))?;
        Ok(Self::with_family(curve, family))
    }
}

/// The pencil curve `x^d - y z^(d-1) - alpha z^d`.
pub fn pencil_curve(ctx: &FieldCtx, d: usize, alpha: FieldElement) -> Result<PlaneCurve> {
    if d < 2 {
        return Err(Error::InvalidInput("pencil curves need d >= 2".into()));
    }
    let one = FieldElement::ONE;
    PlaneCurve::from_terms(
        ctx,
        d,
        &[
            (one, [d, 0, 0]),
            (ctx.neg(one), [0, 1, d - 1]),
            (ctx.neg(alpha), [0, 0, d]),
        ],
    )
}

/// `y A + B` for binary forms in `(x, z)`; `a[k]` multiplies `x^(d-1-k) z^k`
/// and `b[k]` multiplies `x^(d-k) z^k`. Rejects `A = 0` and `gcd(A, B) != 1`.
pub fn graph_type_curve(
    ctx: &FieldCtx,
    a: &[FieldElement],
    b: &[FieldElement],
) -> Result<CertifiedCurve> {
    let d = b
        .len()
        .checked_sub(1)
        .filter(|&d| d >= 2 && a.len() == d)
        .ok_or_else(|| {
            Error::InvalidInput("graph-type curves need deg A = d - 1 and deg B = d >= 2".into())
        })?;
    if a.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("A must be nonzero".into()));
    }
    let mut coeffs = vec![FieldElement::ZERO; monomial_count(d)];
    for (k, &c) in a.iter().enumerate() {
        coeffs[monomial_position([d - 1 - k, 1, k])] = c;
    }
    for (k, &c) in b.iter().enumerate() {
        coeffs[monomial_position([d - k, 0, k])] = c;
    }
    let curve = PlaneCurve::new(ctx, d, coeffs)?;
    if !linear_in_certifies(ctx, &curve, 1) {
        return Err(Error::InvalidInput("A and B share a factor".into()));
    }
    Ok(CertifiedCurve::with_family(
        curve,
        FamilyCertificate::LinearIn { variable: 'y' },
    ))
}

/// `a x^d + b y^d + c z^d`; requires `abc != 0` and `p` not dividing `d`.
pub fn fermat_curve(ctx: &FieldCtx, d: usize, abc: [FieldElement; 3]) -> Result<CertifiedCurve> {
    if d.is_multiple_of(ctx.p() as usize) {
        return Err(Error::InvalidInput(format!(
            "Fermat curves need p = {} not dividing d = {d}",
            ctx.p()
        )));
    }
    if abc.iter().any(|c| c.is_zero()) {
        return Err(Error::InvalidInput("Fermat coefficients must be nonzero".into()));
    }
    let curve = PlaneCurve::from_terms(
        ctx,
        d,
        &[(abc[0], [d, 0, 0]), (abc[1], [0, d, 0]), (abc[2], [0, 0, d])],
    )?;
    Ok(CertifiedCurve::with_family(curve, FamilyCertificate::SmoothFermat))
}

fn random_element(ctx: &FieldCtx, rng: &mut impl Rng) -> FieldElement {
    FieldElement::from_index(rng.gen_range(0..ctx.q()))
}

fn random_nonzero(ctx: &FieldCtx, rng: &mut impl Rng) -> FieldElement {
    FieldElement::from_index(rng.gen_range(1..ctx.q()))
}

/// Draws a certified curve of degree `d` from `family`; the same seed always
/// gives the same curve.
pub fn sample_certified_curve(
    ctx: &FieldCtx,
    family: CurveFamily,
    d: usize,
    seed: u64,
) -> Result<CertifiedCurve> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    match family {
        CurveFamily::Pencil(alpha) => {
            if !ctx.contains(alpha) {
                return Err(Error::ContextMismatch(alpha.index()));
            }
            CertifiedCurve::from_family(ctx, pencil_curve(ctx, d, alpha)?)
        }
        CurveFamily::Fermat => {
            let abc = [(); 3].map(|_| random_nonzero(ctx, &mut rng));
            fermat_curve(ctx, d, abc)
        }
        CurveFamily::GraphType => {
            if d < 2 {
                return Err(Error::InvalidInput("graph-type curves need d >= 2".into()));
            }
            loop {
                let a: Vec<_> = (0..d).map(|_| random_element(ctx, &mut rng)).collect();
                let b: Vec<_> = (0..=d).map(|_| random_element(ctx, &mut rng)).collect();
                if let Ok(c) = graph_type_curve(ctx, &a, &b) {
                    return Ok(c);
                }
            }
        }
    }
}
