use super::field::{FieldCtx, FieldElement, DEFAULT_MAX_FIELD_SIZE};
use crate::error::{Error, Result};

/// Field embedding `F_q -> F_{q^m}`, tabulated on every element of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    root: FieldElement,
    images: Vec<FieldElement>,
}

impl Embedding {
    /// Image of the residue class of `t`, i.e. the chosen root of the small modulus.
    pub fn root(&self) -> FieldElement {
        self.root
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.images[a.index() as usize]
    }
}

/// The degree-`m` extension of `ctx` together with an embedding of `ctx` into it.
///
/// The big field is built by [`super::make_field`] with degree `r*m` over
/// `F_p`, and the embedding sends `t` to the smallest root of the small
/// modulus in canonical order.
pub fn extend_field(ctx: &FieldCtx, m: u32) -> Result<(FieldCtx, Embedding)> {
    extend_field_with_limit(ctx, m, DEFAULT_MAX_FIELD_SIZE)
}

pub fn extend_field_with_limit(
    ctx: &FieldCtx,
    m: u32,
    limit: u64,
) -> Result<(FieldCtx, Embedding)> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let big = FieldCtx::with_limit(ctx.p() as u64, ctx.r() * m, limit)?;
    let modulus: Vec<FieldElement> = ctx
        .modulus()
        .iter()
        .map(|&c| FieldElement::from_index(c))
        .collect();
    let root = big
        .elements()
        .find(|&x| {
            modulus
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| big.add(big.mul(acc, x), c))
                .is_zero()
        })
        .ok_or_else(|| Error::InvariantViolation("small modulus has no root in extension".into()))?;

    let mut root_powers = Vec::with_capacity(ctx.r() as usize);
    let mut acc = FieldElement::ONE;
    for _ in 0..ctx.r() {
        root_powers.push(acc);
        acc = big.mul(acc, root);
    }
    let images = ctx
        .elements()
        .map(|a| {
            ctx.digits(a)
                .iter()
                .zip(&root_powers)
                .fold(FieldElement::ZERO, |s, (&d, &g)| {
                    // Prime-subfield elements share their canonical index.
                    big.add(s, big.mul(FieldElement::from_index(d), g))
                })
        })
        .collect();
    Ok((big, Embedding { root, images }))
}
