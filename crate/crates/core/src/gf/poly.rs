use super::field::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_q`, constant term first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FieldElement::ONE)
    }

    pub fn x() -> Self {
        Poly::new(vec![FieldElement::ZERO, FieldElement::ONE])
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| ctx.add(self.coeff(k), other.coeff(k)))
                .collect(),
        )
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| ctx.sub(self.coeff(k), other.coeff(k)))
                .collect(),
        )
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElement) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match ctx.inv(self.leading()) {
            Some(li) => self.scale(ctx, li),
            None => Poly::zero(),
        }
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.leading()).ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let factor = ctx.mul(c, lead_inv);
            quot[k - dd] = factor;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = ctx.sub(rem[idx], ctx.mul(factor, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(ctx, divisor)?.1)
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub(crate) fn exact_div(&self, ctx: &FieldCtx, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(ctx, divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| ctx.mul(ctx.from_int(k as i64), c))
                .collect(),
        )
    }

    pub fn mul_mod(&self, ctx: &FieldCtx, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.mul(ctx, other).rem(ctx, modulus)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, ctx: &FieldCtx, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(ctx, modulus)?;
        let mut acc = Poly::one().rem(ctx, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(ctx, &base, modulus)?;
            }
            base = base.mul_mod(ctx, &base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// For a polynomial in `x^p`, the unique `g` with `g^p = self`.
    fn pth_root(&self, ctx: &FieldCtx) -> Poly {
        let p = ctx.p() as usize;
        let root_exp = (ctx.q() / ctx.p()) as u64;
        Poly::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|&c| ctx.pow(c, root_exp))
                .collect(),
        )
    }

    /// Irreducibility via `gcd(f, x^{q^i} - x) = 1` for `i <= deg/2`.
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let f = self.monic(ctx);
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(ctx, ctx.q() as u64, &f).expect("nonzero modulus");
            if h.sub(ctx, &x).gcd(ctx, &f).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition of a monic polynomial as `(part, multiplicity)`
    /// pairs with pairwise coprime squarefree parts.
    pub fn squarefree_decomposition(&self, ctx: &FieldCtx) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let f = self.monic(ctx);
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        squarefree_into(ctx, &f, 1, &mut out);
        out
    }
}

fn squarefree_into(ctx: &FieldCtx, f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) {
    let p = ctx.p() as usize;
    let deriv = f.derivative(ctx);
    if deriv.is_zero() {
        squarefree_into(ctx, &f.pth_root(ctx), scale * p, out);
        return;
    }
    let mut c = f.gcd(ctx, &deriv);
    let mut w = f.exact_div(ctx, &c);
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd(ctx, &c);
        let fac = w.exact_div(ctx, &y);
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i * scale));
        }
        i += 1;
        w = y;
        c = c.exact_div(ctx, &w);
    }
    if c.degree().unwrap_or(0) > 0 {
        squarefree_into(ctx, &c.pth_root(ctx), scale * p, out);
    }
}

/// Degrees and multiplicities of the monic irreducible factors of `f`.
///
/// One `(degree, multiplicity)` entry is returned per distinct irreducible
/// factor, sorted ascending. Explicit factors are never produced: the
/// squarefree parts are split by degree through `gcd(g, x^{q^i} - x)` and
/// the count of degree-`i` factors is read off the gcd degree.
pub fn factor_degrees(ctx: &FieldCtx, f: &Poly) -> Result<Vec<(usize, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition(ctx) {
        for deg in distinct_degree_split(ctx, &part) {
            out.push((deg, mult));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Factor degrees of a squarefree monic polynomial.
fn distinct_degree_split(ctx: &FieldCtx, f: &Poly) -> Vec<usize> {
    let mut degrees = Vec::new();
    let x = Poly::x();
    let mut rest = f.clone();
    let mut h = x.rem(ctx, &rest).expect("nonzero modulus");
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(ctx, ctx.q() as u64, &rest).expect("nonzero modulus");
        let g = rest.gcd(ctx, &h.sub(ctx, &x));
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            degrees.extend(std::iter::repeat_n(i, gd / i));
            rest = rest.exact_div(ctx, &g);
            h = h.rem(ctx, &rest).expect("nonzero modulus");
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        degrees.push(d);
    }
    degrees
}
