//! Conics, their dual discriminant, and skew-line censuses for several
//! conics at once.
//!
//! For the line `bx + cy - z = 0`, substituting `z = bx + cy` turns the conic
//! into the binary quadratic `A x^2 + B xy + C y^2` with
//! `A = a200 + a002 b^2 + a101 b`, `B = 2 a002 bc + a110 + a101 c + a011 b`,
//! `C = a020 + a002 c^2 + a011 c`. The dual discriminant is
//! `D(b, c) = B^2 - 4AC`; when `AC != 0` its quadratic character decides
//! whether the line is skew, tangent or secant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{
    geometric_irreducibility, line_profile, LineProfile, PlaneCurve,
};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::plane::{self, ProjLine};

/// A conic `a200 x^2 + a020 y^2 + a002 z^2 + a110 xy + a101 xz + a011 yz`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ConicForm {
    curve: PlaneCurve,
}

impl ConicForm {
    /// Coefficients in the order `a200, a020, a002, a110, a101, a011`.
    pub fn new(ctx: &FieldCtx, a: [FieldElement; 6]) -> Result<Self> {
        let [a200, a020, a002, a110, a101, a011] = a;
        let curve = PlaneCurve::new(ctx, 2, vec![a200, a110, a101, a020, a011, a002])?;
        Ok(ConicForm { curve })
    }

    pub fn from_ints(ctx: &FieldCtx, a: [i64; 6]) -> Result<Self> {
        Self::new(ctx, a.map(|x| ctx.from_int(x)))
    }

    pub fn from_curve(curve: PlaneCurve) -> Result<Self> {
        if curve.degree() != 2 {
            return Err(Error::InvalidInput("a conic has degree 2".into()));
        }
        Ok(ConicForm { curve })
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    /// `a200, a020, a002, a110, a101, a011`.
    pub fn coefficients(&self) -> [FieldElement; 6] {
        let c = |m| self.curve.coeff(m);
        [
            c([2, 0, 0]),
            c([0, 2, 0]),
            c([0, 0, 2]),
            c([1, 1, 0]),
            c([1, 0, 1]),
            c([0, 1, 1]),
        ]
    }

    /// Determinant of the symmetric matrix `[[2a200, a110, a101], [a110,
    /// 2a020, a011], [a101, a011, 2a002]]`.
    pub fn determinant(&self, ctx: &FieldCtx) -> FieldElement {
        let [a200, a020, a002, a110, a101, a011] = self.coefficients();
        let two = |x| ctx.add(x, x);
        let m = [
            [two(a200), a110, a101],
            [a110, two(a020), a011],
            [a101, a011, two(a002)],
        ];
        let det2 = |a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement| {
            ctx.sub(ctx.mul(a, d), ctx.mul(b, c))
        };
        let t0 = ctx.mul(m[0][0], det2(m[1][1], m[1][2], m[2][1], m[2][2]));
        let t1 = ctx.mul(m[0][1], det2(m[1][0], m[1][2], m[2][0], m[2][2]));
        let t2 = ctx.mul(m[0][2], det2(m[1][0], m[1][1], m[2][0], m[2][1]));
        ctx.add(ctx.sub(t0, t1), t2)
    }

    /// Nonsingular, equivalently geometrically irreducible. Odd `q` uses the
    /// determinant; even `q` uses the line-factor search.
    pub fn is_nonsingular(&self, ctx: &FieldCtx) -> bool {
        if ctx.p() != 2 {
            !self.determinant(ctx).is_zero()
        } else {
            geometric_irreducibility(ctx, &self.curve)
                .map(|c| c.is_geometrically_irreducible())
                .unwrap_or(false)
        }
    }

    /// The binary quadratic `(A, B, C)` cut out on the line `bx + cy - z = 0`.
    fn chart_quadratic(
        &self,
        ctx: &FieldCtx,
        b: FieldElement,
        c: FieldElement,
    ) -> [FieldElement; 3] {
        let [a200, a020, a002, a110, a101, a011] = self.coefficients();
        let a = ctx.add(a200, ctx.add(ctx.mul(a002, ctx.mul(b, b)), ctx.mul(a101, b)));
        let cc = ctx.add(a020, ctx.add(ctx.mul(a002, ctx.mul(c, c)), ctx.mul(a011, c)));
        let two_a002 = ctx.add(a002, a002);
        let bb = [ctx.mul(two_a002, ctx.mul(b, c)), a110, ctx.mul(a101, c), ctx.mul(a011, b)]
            .into_iter()
            .fold(FieldElement::ZERO, |s, t| ctx.add(s, t));
        [a, bb, cc]
    }
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if ctx.p() == 2 {
        Err(Error::EvenCharacteristic)
    } else {
        Ok(())
    }
}

/// `D(alpha, beta) = sum coeffs[i][j] alpha^i beta^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDiscriminant {
    pub coeffs: [[FieldElement; 3]; 3],
}

impl DualDiscriminant {
    pub fn evaluate(&self, ctx: &FieldCtx, alpha: FieldElement, beta: FieldElement) -> FieldElement {
        let pa = [FieldElement::ONE, alpha, ctx.mul(alpha, alpha)];
        let pb = [FieldElement::ONE, beta, ctx.mul(beta, beta)];
        let mut acc = FieldElement::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                acc = ctx.add(acc, ctx.mul(self.coeffs[i][j], ctx.mul(pa[i], pb[j])));
            }
        }
        acc
    }

    /// Homogenization `D(x/z, y/z) z^2` as a plane conic.
    pub fn homogenized(&self, ctx: &FieldCtx) -> Result<PlaneCurve> {
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..3 - i {
                terms.push((self.coeffs[i][j], [i, j, 2 - i - j]));
            }
        }
        if self.coeffs[1][2] != FieldElement::ZERO
            || self.coeffs[2][1] != FieldElement::ZERO
            || self.coeffs[2][2] != FieldElement::ZERO
        {
            return Err(Error::InvariantViolation("D has total degree above 2".into()));
        }
        PlaneCurve::from_terms(ctx, 2, &terms)
    }
}

type Bivariate = [[FieldElement; 5]; 5];

fn bv_mul(ctx: &FieldCtx, a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = [[FieldElement::ZERO; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..5 - i {
                for l in 0..5 - j {
                    out[i + k][j + l] = ctx.add(out[i + k][j + l], ctx.mul(a[i][j], b[k][l]));
                }
            }
        }
    }
    out
}

fn bv(terms: &[(FieldElement, usize, usize)], ctx: &FieldCtx) -> Bivariate {
    let mut out = [[FieldElement::ZERO; 5]; 5];
    for &(c, i, j) in terms {
        out[i][j] = ctx.add(out[i][j], c);
    }
    out
}

/// Expands `D(alpha, beta)` symbolically; the `alpha^2 beta`, `alpha beta^2`
/// and `alpha^2 beta^2` terms cancel.
pub fn dual_discriminant(ctx: &FieldCtx, conic: &ConicForm) -> Result<DualDiscriminant> {
    require_odd(ctx)?;
    let [a200, a020, a002, a110, a101, a011] = conic.coefficients();
    let cross = bv(
        &[
            (ctx.add(a002, a002), 1, 1),
            (a110, 0, 0),
            (a101, 0, 1),
            (a011, 1, 0),
        ],
        ctx,
    );
    let pa = bv(&[(a200, 0, 0), (a002, 2, 0), (a101, 1, 0)], ctx);
    let pb = bv(&[(a020, 0, 0), (a002, 0, 2), (a011, 0, 1)], ctx);
    let sq = bv_mul(ctx, &cross, &cross);
    let prod = bv_mul(ctx, &pa, &pb);
    let four = ctx.from_int(4);
    let mut coeffs = [[FieldElement::ZERO; 3]; 3];
    for i in 0..5 {
        for j in 0..5 {
            let v = ctx.sub(sq[i][j], ctx.mul(four, prod[i][j]));
            if i >= 3 || j >= 3 || (i + j > 2 && !v.is_zero()) {
                if !v.is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "D has a nonzero alpha^{i} beta^{j} term"
                    )));
                }
                continue;
            }
            coeffs[i][j] = v;
        }
    }
    Ok(DualDiscriminant { coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineClass {
    ConditionOneFails,
    Skew,
    Tangent,
    Secant,
}

/// Classification of `bx + cy - z = 0` from the discriminant criterion.
pub fn classify_line(
    ctx: &FieldCtx,
    conic: &ConicForm,
    b: FieldElement,
    c: FieldElement,
) -> Result<LineClass> {
    require_odd(ctx)?;
    let [a, bb, cc] = conic.chart_quadratic(ctx, b, c);
    if ctx.mul(a, cc).is_zero() {
        return Ok(LineClass::ConditionOneFails);
    }
    let d = ctx.sub(ctx.mul(bb, bb), ctx.mul(ctx.from_int(4), ctx.mul(a, cc)));
    Ok(if d.is_zero() {
        LineClass::Tangent
    } else if ctx.is_square(d) {
        LineClass::Secant
    } else {
        LineClass::Skew
    })
}

/// Classification of any line by factoring the restriction of the conic.
pub fn classify_line_direct(ctx: &FieldCtx, conic: &ConicForm, line: &ProjLine) -> LineClass {
    match line_profile(ctx, conic.curve(), line) {
        LineProfile::Transverse(parts) if parts == [2] => LineClass::Skew,
        LineProfile::Transverse(_) => LineClass::Secant,
        LineProfile::Tangency | LineProfile::Component => LineClass::Tangent,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LineTotals {
    pub tangent: usize,
    pub secant: usize,
    pub external: usize,
}

/// Direct classification of all `q^2 + q + 1` lines.
pub fn classify_all_lines(ctx: &FieldCtx, conic: &ConicForm) -> Result<LineTotals> {
    let lines = plane::all_lines(ctx)?;
    let classes: Vec<LineClass> = lines
        .par_iter()
        .map(|l| classify_line_direct(ctx, conic, l))
        .collect();
    let mut t = LineTotals::default();
    for c in classes {
        match c {
            LineClass::Tangent => t.tangent += 1,
            LineClass::Secant => t.secant += 1,
            LineClass::Skew => t.external += 1,
            LineClass::ConditionOneFails => unreachable!("direct path never reports this"),
        }
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub condition_one_failures: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

/// Compares [`classify_line`] with the direct computation on every chart
/// line `bx + cy - z = 0`.
pub fn trichotomy_check(ctx: &FieldCtx, conic: &ConicForm) -> Result<TrichotomyReport> {
    require_odd(ctx)?;
    let mut r = TrichotomyReport::default();
    for b in ctx.elements() {
        for c in ctx.elements() {
            match classify_line(ctx, conic, b, c)? {
                LineClass::ConditionOneFails => r.condition_one_failures += 1,
                class => {
                    let line = ProjLine::from_affine_chart(ctx, b, c);
                    if class == classify_line_direct(ctx, conic, &line) {
                        r.agreements += 1;
                    } else {
                        r.disagreements += 1;
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Draws six coefficients until the conic is nonsingular.
pub fn random_nonsingular_conic(ctx: &FieldCtx, rng: &mut impl Rng) -> ConicForm {
    loop {
        let a = [(); 6].map(|_| FieldElement::from_index(rng.gen_range(0..ctx.q())));
        if let Ok(c) = ConicForm::new(ctx, a) {
            if c.is_nonsingular(ctx) {
                return c;
            }
        }
    }
}

/// `ell` pairwise distinct nonsingular conics drawn from a seeded stream.
pub fn sample_distinct_conics(ctx: &FieldCtx, ell: usize, seed: u64) -> Vec<ConicForm> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out: Vec<ConicForm> = Vec::with_capacity(ell);
    while out.len() < ell {
        let c = random_nonsingular_conic(ctx, &mut rng);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsquareCensus {
    pub q: u32,
    pub ell: usize,
    pub conics: Vec<ConicForm>,
    /// Pairs `(b, c)` with every `D_i(b, c)` a nonsquare.
    pub nonsquare_count: usize,
    /// Pairs whose line `bx + cy - z = 0` misses every conic's rational points.
    pub skew_all_count: usize,
    /// `q^2 / 2^ell`.
    pub main_term: f64,
    /// `2^ell (2 ell + 1) q`.
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Exhaustive scan over the chart lines `bx + cy - z = 0`.
///
/// The skew count marks the chart lines through each rational point of the
/// union and never consults `D`.
pub fn simultaneous_nonsquare_census(
    ctx: &FieldCtx,
    conics: &[ConicForm],
) -> Result<NonsquareCensus> {
    require_odd(ctx)?;
    for (i, c) in conics.iter().enumerate() {
        if !c.is_nonsingular(ctx) {
            return Err(Error::InvalidInput(format!("conic {i} is singular")));
        }
        if conics[..i].contains(c) {
            return Err(Error::InvalidInput(format!("conic {i} repeats an earlier one")));
        }
    }
    let q = ctx.q() as usize;
    let ds = conics
        .iter()
        .map(|c| dual_discriminant(ctx, c))
        .collect::<Result<Vec<_>>>()?;
    let nonsquare_count: usize = (0..q as u32)
        .into_par_iter()
        .map(|b| {
            let b = FieldElement::from_index(b);
            ctx.elements()
                .filter(|&c| ds.iter().all(|d| !ctx.is_square(d.evaluate(ctx, b, c))))
                .count()
        })
        .sum();

    let mut hit = vec![false; q * q];
    for conic in conics {
        for p in conic.curve().rational_points(ctx)? {
            let [x, y, z] = p.coords();
            if !y.is_zero() {
                let yi = ctx.inv(y).expect("nonzero");
                for b in ctx.elements() {
                    let c = ctx.mul(ctx.sub(z, ctx.mul(b, x)), yi);
                    hit[b.index() as usize * q + c.index() as usize] = true;
                }
            } else if !x.is_zero() {
                let b = ctx.div(z, x).expect("nonzero");
                for c in 0..q {
                    hit[b.index() as usize * q + c] = true;
                }
            }
        }
    }
    let skew_all_count = hit.iter().filter(|&&h| !h).count();
    let ell = conics.len();
    let main_term = (q * q) as f64 / 2f64.powi(ell as i32);
    let tolerance = 2f64.powi(ell as i32) * (2 * ell + 1) as f64 * q as f64;
    Ok(NonsquareCensus {
        q: ctx.q(),
        ell,
        conics: conics.to_vec(),
        nonsquare_count,
        skew_all_count,
        main_term,
        tolerance,
        within_tolerance: (skew_all_count as f64 - main_term).abs() <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::curve::is_irreducible_fq;
    use crate::gf::{make_field, prime_power};

    fn field(q: u64) -> FieldCtx {
        let (p, r) = prime_power(q).unwrap();
        make_field(p, r).unwrap()
    }

    fn all_nonsingular(ctx: &FieldCtx) -> Vec<ConicForm> {
        let q = ctx.q();
        let mut out = HashSet::new();
        let mut idx = [0u32; 6];
        'outer: loop {
            if let Ok(c) = ConicForm::new(ctx, idx.map(FieldElement::from_index)) {
                if c.is_nonsingular(ctx) {
                    out.insert(c);
                }
            }
            for k in 0..6 {
                idx[k] += 1;
                if idx[k] < q {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        let mut v: Vec<_> = out.into_iter().collect();
        v.sort_by(|a, b| a.curve().cmp(b.curve()));
        v
    }

    #[test]
    fn discriminant_of_unit_conic() {
        for q in [3u64, 5, 7, 9] {
            let ctx = field(q);
            let c = ConicForm::from_ints(&ctx, [1, 1, -1, 0, 0, 0]).unwrap();
            let d = dual_discriminant(&ctx, &c).unwrap();
            for a in ctx.elements() {
                for b in ctx.elements() {
                    let one = ctx.one();
                    let m2ab = ctx.neg(ctx.mul(ctx.from_int(2), ctx.mul(a, b)));
                    let expected = ctx.sub(
                        ctx.mul(m2ab, m2ab),
                        ctx.mul(
                            ctx.from_int(4),
                            ctx.mul(ctx.sub(one, ctx.mul(a, a)), ctx.sub(one, ctx.mul(b, b))),
                        ),
                    );
                    assert_eq!(d.evaluate(&ctx, a, b), expected);
                }
            }
        }
        let f4 = field(4);
        let c = ConicForm::from_ints(&f4, [1, 1, 1, 1, 0, 0]).unwrap();
        assert_eq!(dual_discriminant(&f4, &c), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn discriminant_matches_expansion_pointwise() {
        let ctx = field(7);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c = random_nonsingular_conic(&ctx, &mut rng);
            let d = dual_discriminant(&ctx, &c).unwrap();
            for b in ctx.elements() {
                for cc in ctx.elements() {
                    let [a, bb, c2] = c.chart_quadratic(&ctx, b, cc);
                    let direct = ctx.sub(ctx.mul(bb, bb), ctx.mul(ctx.from_int(4), ctx.mul(a, c2)));
                    assert_eq!(d.evaluate(&ctx, b, cc), direct);
                }
            }
        }
    }

    #[test]
    fn discriminants_are_irreducible_and_distinct() {
        for q in [5u64, 7] {
            let ctx = field(q);
            let conics = all_nonsingular(&ctx);
            assert_eq!(conics.len() as u64, q * q * (q * q * q - 1));
            let mut seen = HashSet::new();
            for c in &conics {
                let h = dual_discriminant(&ctx, c).unwrap().homogenized(&ctx).unwrap();
                assert!(is_irreducible_fq(&ctx, &h).unwrap());
                assert!(seen.insert(h), "two conics share a discriminant");
            }
        }
    }

    #[test]
    fn unit_conic_line_z0() {
        let f5 = field(5);
        let c = ConicForm::from_ints(&f5, [1, 1, -1, 0, 0, 0]).unwrap();
        let z = FieldElement::ZERO;
        assert_eq!(classify_line(&f5, &c, z, z).unwrap(), LineClass::Secant);
        let f3 = field(3);
        let c = ConicForm::from_ints(&f3, [1, 1, -1, 0, 0, 0]).unwrap();
        assert_eq!(classify_line(&f3, &c, z, z).unwrap(), LineClass::Skew);
    }

    fn check_conic(ctx: &FieldCtx, c: &ConicForm) {
        let q = ctx.q() as usize;
        let t = classify_all_lines(ctx, c).unwrap();
        assert_eq!(t, LineTotals { tangent: q + 1, secant: q * (q + 1) / 2, external: q * (q - 1) / 2 });
        let r = trichotomy_check(ctx, c).unwrap();
        assert_eq!(r.disagreements, 0);
        assert!(r.condition_one_failures <= 4 * q);
    }

    #[test]
    fn exhaustive_classification_small_q() {
        for q in [3u64, 5] {
            let ctx = field(q);
            for c in all_nonsingular(&ctx) {
                check_conic(&ctx, &c);
            }
        }
    }

    #[test]
    fn sampled_classification() {
        for q in [7u64, 9, 11, 13] {
            let ctx = field(q);
            for c in sample_distinct_conics(&ctx, 20, q) {
                check_conic(&ctx, &c);
            }
        }
    }

    #[test]
    fn census_examples() {
        let ctx = field(101);
        let r = simultaneous_nonsquare_census(&ctx, &[]).unwrap();
        assert_eq!((r.nonsquare_count, r.skew_all_count), (101 * 101, 101 * 101));
        let one = sample_distinct_conics(&ctx, 1, 5);
        let r = simultaneous_nonsquare_census(&ctx, &one).unwrap();
        let direct = (0..101u32)
            .flat_map(|b| (0..101u32).map(move |c| (b, c)))
            .filter(|&(b, c)| {
                let line = ProjLine::from_affine_chart(&ctx, FieldElement::from_index(b), FieldElement::from_index(c));
                classify_line_direct(&ctx, &one[0], &line) == LineClass::Skew
            })
            .count();
        assert_eq!(r.skew_all_count, direct);
        let three = sample_distinct_conics(&ctx, 3, 9);
        let r = simultaneous_nonsquare_census(&ctx, &three).unwrap();
        assert!(r.skew_all_count > 0);
        let dup = [one[0].clone(), one[0].clone()];
        assert!(simultaneous_nonsquare_census(&ctx, &dup).is_err());
    }

    #[test]
    fn nonsquare_pairs_are_skew_outside_condition_one_failures() {
        let ctx = field(13);
        let conics = sample_distinct_conics(&ctx, 2, 1);
        let r = simultaneous_nonsquare_census(&ctx, &conics).unwrap();
        let failures: usize = conics
            .iter()
            .map(|c| trichotomy_check(&ctx, c).unwrap().condition_one_failures)
            .sum();
        assert!(r.skew_all_count + failures >= r.nonsquare_count);
    }
}
