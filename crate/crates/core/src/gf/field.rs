use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest field order a single context may have.
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// An element of `F_q`, stored as its canonical index.
///
/// The index is the digit vector of the residue polynomial read low-to-high
/// in base `p`: the element `c_0 + c_1 t + ... + c_{r-1} t^{r-1}` has index
/// `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`. The derived `Ord` is the canonical
/// element order used for every deterministic tie-break in the crate.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps a canonical index without checking it against a field.
    pub const fn from_index(index: u32) -> Self {
        Self(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field operations accepted by [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise the first operand to the given power; the second operand is ignored.
    Pow(u64),
    /// Invert the first operand; the second operand is ignored.
    Inv,
    /// Negate the first operand; the second operand is ignored.
    Neg,
}

/// Arithmetic context for `F_q`, `q = p^r`.
///
/// The field is modelled as `F_p[t]/(m(t))` where `m` is the
/// lexicographically smallest monic irreducible polynomial of degree `r`
/// (coefficients compared constant term first). Multiplication goes through
/// discrete log tables built from the smallest primitive element; addition
/// in odd non-prime fields uses Zech logarithms.
///
/// A context is immutable once built and can be shared freely across threads.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds `F_{p^r}` with the default size cap.
pub fn make_field(p: u64, r: u32) -> Result<FieldCtx> {
    FieldCtx::with_limit(p, r, DEFAULT_MAX_FIELD_SIZE)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, r)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut r = 0;
    let mut n = q;
    while n > 1 {
        n /= p;
        r += 1;
    }
    Some((p, r))
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FieldCtx {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        make_field(p, r)
    }

    /// Builds `F_{p^r}`, failing if `p^r` exceeds `limit`.
    pub fn with_limit(p: u64, r: u32, limit: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
        if size > limit as u128 || size > u32::MAX as u128 {
            return Err(Error::FieldTooLarge { size, limit });
        }
        let p32 = p as u32;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p32, r)
        };
        Ok(Self::from_modulus(p32, r, size as u32, modulus))
    }

    fn from_modulus(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            generator: FieldElement::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
        };
        let order = (q - 1) as u64;
        let primes = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&l| ctx.slow_pow(g, order / l) != 1)
            })
            .expect("a finite field has a primitive element");
        ctx.generator = FieldElement(generator);

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n.max(1));
        let mut log = vec![NO_LOG; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = ctx.slow_mul(x, generator);
        }
        for i in 0..n {
            exp.push(exp[i]);
        }
        if exp.is_empty() {
            exp.push(1);
        }
        ctx.exp = exp;
        ctx.log = log;

        if r > 1 && p != 2 {
            ctx.zech = (0..n)
                .map(|k| {
                    let v = ctx.digit_add(1, ctx.exp[k]);
                    if v == 0 {
                        NO_LOG
                    } else {
                        ctx.log[v as usize]
                    }
                })
                .collect();
        }
        ctx
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first (length `r + 1`, monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The smallest primitive element in canonical order.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Iterates all elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// Checked conversion of a canonical index.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ContextMismatch(index))
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q
    }

    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        let mut v = a.0;
        for _ in 0..self.r {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() != self.r as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::InvalidInput(format!(
                "digit vector {digits:?} is not a canonical element of F_{}",
                self.q
            )));
        }
        Ok(FieldElement(self.compose(digits)))
    }

    fn compose(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.r {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    /// Schoolbook product reduced by the modulus; only used to bootstrap tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let r = self.r as usize;
        let da = self.digits(FieldElement(a));
        let db = self.digits(FieldElement(b));
        let mut prod = vec![0u64; 2 * r];
        for (j, &y) in db.iter().enumerate() {
            if y == 0 {
                continue;
            }
            for (i, &x) in da.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (r..2 * r).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..r {
                let m = self.modulus[i] as u64;
                prod[k - r + i] = (prod[k - r + i] + p - (c * m) % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..r].iter().map(|&d| d as u32).collect();
        self.compose(&digits)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn order(&self) -> u32 {
        self.q - 1
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.r == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let n = self.order();
        let k = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[k as usize];
        if z == NO_LOG {
            FieldElement::ZERO
        } else {
            FieldElement(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        if self.r == 1 {
            return FieldElement(self.p - a.0);
        }
        let la = self.log[a.0 as usize];
        FieldElement(self.exp[(la + self.order() / 2) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.r == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        FieldElement(self.exp[(la + lb) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let la = self.log[a.0 as usize];
        Some(FieldElement(self.exp[(self.order() - la) as usize]))
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.order() as u64;
        let la = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((la * (e % n)) % n) as usize])
    }

    /// Discrete log base [`FieldCtx::generator`]; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// The absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Checked arithmetic entry point; validates operands against the field.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
        if !self.contains(a) {
            return Err(Error::ContextMismatch(a.0));
        }
        if !self.contains(b) {
            return Err(Error::ContextMismatch(b.0));
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b).ok_or(Error::DivisionByZero)?,
            ArithOp::Pow(e) => self.pow(a, e),
            ArithOp::Inv => self.inv(a).ok_or(Error::DivisionByZero)?,
            ArithOp::Neg => self.neg(a),
        })
    }

    /// Whether `x = y^d` for some `y` in the field.
    ///
    /// Zero is always a power. Otherwise `x` is a `d`-th power exactly when
    /// `x^((q-1)/d') = 1` with `d' = gcd(d, q-1)`.
    pub fn is_dth_power(&self, x: FieldElement, d: u64) -> bool {
        if x.0 == 0 {
            return true;
        }
        let n = self.order() as u64;
        let dd = gcd_u64(d, n);
        self.pow(x, n / dd) == FieldElement::ONE
    }

    pub fn is_square(&self, x: FieldElement) -> bool {
        self.is_dth_power(x, 2)
    }
}

/// Lexicographically smallest monic irreducible of degree `r` over `F_p`,
/// comparing the constant coefficient first.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let base = FieldCtx::from_modulus(p, 1, p, vec![0, 1]);
    let count = (p as u64).pow(r);
    for n in 0..count {
        // Most significant base-p digit of n is the constant term.
        let mut coeffs = vec![0u32; r as usize + 1];
        let mut v = n;
        for k in (0..r as usize).rev() {
            coeffs[k] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs[r as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let f = Poly::new(coeffs.iter().map(|&c| FieldElement(c)).collect());
        if f.is_irreducible(&base) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
