//! Frobenius cycle types of `C ∩ L` over all lines, and skew-line counts for
//! unions of curves.

use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{line_counts, PointSet};
use crate::curve::{
    geometric_irreducibility, line_profile, restrict_to_line, CertifiedCurve, LineProfile,
    PlaneCurve,
};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::plane::{self, ProjLine};

/// One partition of `d_i` per curve, each in descending order.
pub type CycleType = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrobeniusClass {
    NonTransverse,
    Transverse(CycleType),
}

fn check_certificates(curves: &[CertifiedCurve]) -> Result<()> {
    match curves
        .iter()
        .position(|c| !c.certificate.is_geometrically_irreducible())
    {
        Some(i) => Err(Error::MissingCertificate(i)),
        None => Ok(()),
    }
}

/// Runs [`geometric_irreducibility`] on each curve; a curve without a
/// positive certificate is reported by position.
pub fn certify_all(ctx: &FieldCtx, curves: &[PlaneCurve]) -> Result<Vec<CertifiedCurve>> {
    curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let certificate = geometric_irreducibility(ctx, c)?;
            if certificate.is_geometrically_irreducible() {
                Ok(CertifiedCurve { curve: c.clone(), certificate })
            } else {
                Err(Error::MissingCertificate(i))
            }
        })
        .collect()
}

fn class_of_profiles(profiles: &[LineProfile]) -> FrobeniusClass {
    let mut parts = Vec::with_capacity(profiles.len());
    for p in profiles {
        match p {
            LineProfile::Transverse(v) => parts.push(v.clone()),
            _ => return FrobeniusClass::NonTransverse,
        }
    }
    FrobeniusClass::Transverse(parts)
}

pub fn frobenius_class(
    ctx: &FieldCtx,
    curves: &[CertifiedCurve],
    line: &ProjLine,
) -> Result<FrobeniusClass> {
    check_certificates(curves)?;
    let profiles: Vec<_> = curves.iter().map(|c| line_profile(ctx, &c.curve, line)).collect();
    Ok(class_of_profiles(&profiles))
}

/// All partitions of `n`, each descending, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `|C| / |S_n|` for the class with cycle type `parts`, i.e.
/// `1 / prod_k (k^(m_k) m_k!)`.
pub fn class_weight(parts: &[usize]) -> f64 {
    let mut z = 1f64;
    let mut i = 0;
    while i < parts.len() {
        let k = parts[i];
        let m = parts[i..].iter().take_while(|&&x| x == k).count();
        z *= (k as f64).powi(m as i32) * (1..=m).product::<usize>() as f64;
        i += m;
    }
    1.0 / z
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub class: CycleType,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleTypeCensus {
    pub q: u32,
    pub degrees: Vec<usize>,
    pub curves: Vec<PlaneCurve>,
    /// Observed classes in canonical order.
    pub counts: Vec<ClassCount>,
    pub tangent_or_component_count: usize,
    pub total_lines: usize,
}

impl CycleTypeCensus {
    pub fn count(&self, class: &[Vec<usize>]) -> usize {
        self.counts
            .iter()
            .find(|c| c.class == class)
            .map_or(0, |c| c.count)
    }

    pub fn transverse_count(&self) -> usize {
        self.total_lines - self.tangent_or_component_count
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Within,
    Warning,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassDeviation {
    pub class: CycleType,
    pub weight: f64,
    pub observed: usize,
    /// `weight * q^2`.
    pub predicted: f64,
    pub deviation: f64,
    /// `deviation / q^(3/2)`.
    pub normalized: f64,
    /// `|observed / transverse - weight| / weight`.
    pub relative_frequency_error: f64,
    /// `10 q^(3/2) sqrt(weight)`.
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebotarevReport {
    pub census: CycleTypeCensus,
    pub classes: Vec<ClassDeviation>,
    pub max_abs_deviation: f64,
    pub verdict: Verdict,
}

/// Per-line data from one pass over the plane.
struct LineScan {
    classes: Vec<FrobeniusClass>,
    /// `contacts[line][i] = |L ∩ C_i(F_q)|`.
    contacts: Vec<Vec<usize>>,
}

fn scan_lines(ctx: &FieldCtx, curves: &[CertifiedCurve]) -> Result<LineScan> {
    let n = plane::plane_size(ctx.q());
    plane::all_lines(ctx)?;
    let per_line: Vec<(FrobeniusClass, Vec<usize>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let line = ProjLine::from_index(ctx, i);
            let profiles: Vec<_> = curves
                .iter()
                .map(|c| line_profile(ctx, &c.curve, &line))
                .collect();
            let contacts = profiles
                .iter()
                .zip(curves)
                .map(|(p, c)| match p {
                    LineProfile::Transverse(v) => v.iter().filter(|&&k| k == 1).count(),
                    LineProfile::Component => ctx.q() as usize + 1,
                    LineProfile::Tangency => restrict_to_line(ctx, &c.curve, &line)
                        .and_then(|f| f.rational_root_count(ctx))
                        .expect("nonzero restriction"),
                })
                .collect();
            (class_of_profiles(&profiles), contacts)
        })
        .collect();
    let (classes, contacts) = per_line.into_iter().unzip();
    Ok(LineScan { classes, contacts })
}

fn tally(ctx: &FieldCtx, curves: &[CertifiedCurve], scan: &LineScan) -> Result<CycleTypeCensus> {
    let mut counts: std::collections::BTreeMap<CycleType, usize> = Default::default();
    let mut non_transverse = 0;
    for c in &scan.classes {
        match c {
            FrobeniusClass::NonTransverse => non_transverse += 1,
            FrobeniusClass::Transverse(t) => *counts.entry(t.clone()).or_default() += 1,
        }
    }
    let degrees: Vec<usize> = curves.iter().map(|c| c.curve.degree()).collect();
    let census = CycleTypeCensus {
        q: ctx.q(),
        degrees: degrees.clone(),
        curves: curves.iter().map(|c| c.curve.clone()).collect(),
        counts: counts
            .into_iter()
            .map(|(class, count)| ClassCount { class, count })
            .collect(),
        tangent_or_component_count: non_transverse,
        total_lines: scan.classes.len(),
    };

    let sum: usize = census.counts.iter().map(|c| c.count).sum::<usize>() + non_transverse;
    if sum != plane::plane_size(ctx.q()) {
        return Err(Error::InvariantViolation(format!("census totals {sum} lines")));
    }
    for c in &census.counts {
        if c.class.iter().zip(&degrees).any(|(p, &d)| p.iter().sum::<usize>() != d) {
            return Err(Error::InvariantViolation(format!("class {:?} has wrong sums", c.class)));
        }
    }
    // Each rational point of C_i lies on q + 1 lines.
    for (i, c) in curves.iter().enumerate() {
        let lhs: usize = scan.contacts.iter().map(|v| v[i]).sum();
        let rhs = c.curve.rational_point_indices(ctx)?.len() * (ctx.q() as usize + 1);
        if lhs != rhs {
            return Err(Error::InvariantViolation(format!(
                "curve {i}: {lhs} line contacts against {rhs}"
            )));
        }
    }
    Ok(census)
}

/// Exhaustive cycle-type census over all lines.
pub fn cycle_type_census(ctx: &FieldCtx, curves: &[CertifiedCurve]) -> Result<CycleTypeCensus> {
    check_certificates(curves)?;
    let scan = scan_lines(ctx, curves)?;
    tally(ctx, curves, &scan)
}

fn product_classes(degrees: &[usize]) -> Vec<CycleType> {
    let mut out: Vec<CycleType> = vec![Vec::new()];
    for &d in degrees {
        let parts = partitions(d);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Census plus, for every class of `S_(d_1) x ... x S_(d_m)`, the deviation
/// of the observed count from `weight * q^2`.
///
/// A class beyond its tolerance is a warning; beyond three times its
/// tolerance it is a failure.
pub fn chebotarev_census(ctx: &FieldCtx, curves: &[CertifiedCurve]) -> Result<ChebotarevReport> {
    let census = cycle_type_census(ctx, curves)?;
    let q = ctx.q() as f64;
    let q32 = q.powf(1.5);
    let transverse = census.transverse_count().max(1) as f64;
    let mut max_abs_deviation = 0f64;
    let mut verdict = Verdict::Within;
    let classes: Vec<ClassDeviation> = product_classes(&census.degrees)
        .into_iter()
        .map(|class| {
            let weight: f64 = class.iter().map(|p| class_weight(p)).product();
            let observed = census.count(&class);
            let predicted = weight * q * q;
            let deviation = observed as f64 - predicted;
            let tolerance = 10.0 * q32 * weight.sqrt();
            let v = if deviation.abs() <= tolerance {
                Verdict::Within
            } else if deviation.abs() <= 3.0 * tolerance {
                Verdict::Warning
            } else {
                Verdict::Failure
            };
            max_abs_deviation = max_abs_deviation.max(deviation.abs());
            verdict = verdict.max(v);
            ClassDeviation {
                relative_frequency_error: (observed as f64 / transverse - weight).abs() / weight,
                class,
                weight,
                observed,
                predicted,
                deviation,
                normalized: deviation / q32,
                tolerance,
                verdict: v,
            }
        })
        .collect();
    Ok(ChebotarevReport { census, classes, max_abs_deviation, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkewBoundReport {
    pub q: u32,
    pub degrees: Vec<usize>,
    /// Lines missing the union of rational points, by direct line scan.
    pub observed_skew: usize,
    /// Transverse lines whose every component class is a derangement.
    pub transverse_derangements: usize,
    /// Non-transverse lines with no rational contact point.
    pub non_transverse_skew: usize,
    /// Transverse lines where every restriction is irreducible.
    pub full_cycle_count: usize,
    /// `q^2 / prod d_i`.
    pub full_cycle_main_term: f64,
    pub full_cycle_deviation: f64,
    /// `10 q^(3/2)`.
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Skew lines to the union of the curves, split by transversality, and the
/// full-cycle class count against `q^2 / prod d_i`.
pub fn skew_line_bound_check(ctx: &FieldCtx, curves: &[CertifiedCurve]) -> Result<SkewBoundReport> {
    check_certificates(curves)?;
    let scan = scan_lines(ctx, curves)?;
    tally(ctx, curves, &scan)?;
    let plain: Vec<PlaneCurve> = curves.iter().map(|c| c.curve.clone()).collect();
    let union = PointSet::union_of_curves(ctx, &plain)?;
    let hits = line_counts(ctx, &union);
    let degrees: Vec<usize> = plain.iter().map(PlaneCurve::degree).collect();

    let mut transverse_derangements = 0;
    let mut non_transverse_skew = 0;
    let mut full_cycle_count = 0;
    for (i, class) in scan.classes.iter().enumerate() {
        let skew = hits[i] == 0;
        match class {
            FrobeniusClass::Transverse(t) => {
                let derangement = t.iter().all(|p| !p.contains(&1));
                if derangement != skew {
                    return Err(Error::InvariantViolation(format!(
                        "line {i}: derangement {derangement} but skew {skew}"
                    )));
                }
                transverse_derangements += derangement as usize;
                full_cycle_count += t.iter().zip(&degrees).all(|(p, &d)| p == &[d]) as usize;
            }
            FrobeniusClass::NonTransverse => {
                if skew != scan.contacts[i].iter().all(|&c| c == 0) {
                    return Err(Error::InvariantViolation(format!("line {i}: contact mismatch")));
                }
                non_transverse_skew += skew as usize;
            }
        }
    }
    let observed_skew = hits.iter().filter(|&&h| h == 0).count();
    debug_assert_eq!(observed_skew, transverse_derangements + non_transverse_skew);
    let q = ctx.q() as f64;
    let full_cycle_main_term = q * q / degrees.iter().product::<usize>() as f64;
    let full_cycle_deviation = full_cycle_count as f64 - full_cycle_main_term;
    let tolerance = 10.0 * q.powf(1.5);
    Ok(SkewBoundReport {
        q: ctx.q(),
        degrees,
        observed_skew,
        transverse_derangements,
        non_transverse_skew,
        full_cycle_count,
        full_cycle_main_term,
        full_cycle_deviation,
        tolerance,
        within_tolerance: full_cycle_deviation.abs() <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::sample_distinct_conics;
    use crate::curve::{fermat_curve, pencil_curve, sample_certified_curve, CurveFamily};
    use crate::gf::{make_field, prime_power};

    fn field(q: u64) -> FieldCtx {
        let (p, r) = prime_power(q).unwrap();
        make_field(p, r).unwrap()
    }

    fn unit_conic(ctx: &FieldCtx) -> CertifiedCurve {
        let c = PlaneCurve::from_int_terms(ctx, 2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (-1, [0, 0, 2])])
            .unwrap();
        certify_all(ctx, &[c]).unwrap().remove(0)
    }

    #[test]
    fn partitions_and_weights() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22]);
        for n in 1..=7 {
            let total: f64 = partitions(n).iter().map(|p| class_weight(p)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert_eq!(class_weight(&[2, 1]), 0.5);
        assert!((class_weight(&[3]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn conic_line_classes() {
        let f5 = field(5);
        let z0 = ProjLine::from_ints(&f5, [0, 0, 1]).unwrap();
        assert_eq!(frobenius_class(&f5, &[unit_conic(&f5)], &z0).unwrap(), FrobeniusClass::Transverse(vec![vec![1, 1]]));
        let ctx = field(7);
        let c = [unit_conic(&ctx)];
        let z0 = ProjLine::from_ints(&ctx, [0, 0, 1]).unwrap();
        assert_eq!(frobenius_class(&ctx, &c, &z0).unwrap(), FrobeniusClass::Transverse(vec![vec![2]]));
        let tangent = ProjLine::from_ints(&ctx, [1, 0, -1]).unwrap();
        assert_eq!(frobenius_class(&ctx, &c, &tangent).unwrap(), FrobeniusClass::NonTransverse);
    }

    #[test]
    fn missing_certificate_is_reported() {
        let ctx = field(5);
        let xy = PlaneCurve::from_int_terms(&ctx, 2, &[(1, [1, 1, 0])]).unwrap();
        assert_eq!(certify_all(&ctx, &[xy]), Err(Error::MissingCertificate(0)));
        let mut bad = unit_conic(&ctx);
        bad.certificate.status = crate::curve::IrreducibilityStatus::Unknown;
        let line = ProjLine::from_index(&ctx, 0);
        assert_eq!(frobenius_class(&ctx, &[unit_conic(&ctx), bad], &line), Err(Error::MissingCertificate(1)));
    }

    #[test]
    fn single_conic_census_is_exact() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let ctx = field(q);
            let qs = q as usize;
            for conic in sample_distinct_conics(&ctx, 5, q) {
                let c = certify_all(&ctx, &[conic.curve().clone()]).unwrap();
                let census = cycle_type_census(&ctx, &c).unwrap();
                assert_eq!(census.count(&[vec![1, 1]]), qs * (qs + 1) / 2);
                assert_eq!(census.count(&[vec![2]]), qs * (qs - 1) / 2);
                assert_eq!(census.tangent_or_component_count, qs + 1);
                let report = chebotarev_census(&ctx, &c).unwrap();
                for cl in &report.classes {
                    assert!((cl.deviation.abs() - q as f64 / 2.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn skew_counts_for_conic() {
        let ctx = field(7);
        let r = skew_line_bound_check(&ctx, &[unit_conic(&ctx)]).unwrap();
        assert_eq!(r.observed_skew, 21);
        assert_eq!(r.full_cycle_count, 21);
        assert_eq!(r.full_cycle_main_term, 24.5);
        assert_eq!(r.non_transverse_skew, 0);
    }

    #[test]
    fn product_weights_multiply() {
        let ctx = field(11);
        let curves = vec![unit_conic(&ctx), sample_certified_curve(&ctx, CurveFamily::Pencil(ctx.one()), 3, 0).unwrap()];
        let r = chebotarev_census(&ctx, &curves).unwrap();
        assert_eq!(r.classes.len(), 2 * 3);
        let total: f64 = r.classes.iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let w = r.classes.iter().find(|c| c.class == vec![vec![2], vec![3]]).unwrap().weight;
        assert!((w - 1.0 / 6.0).abs() < 1e-12);
        let s = skew_line_bound_check(&ctx, &curves).unwrap();
        assert_eq!(s.observed_skew, s.transverse_derangements + s.non_transverse_skew);
    }

    #[test]
    fn fermat_cubic_census_small() {
        let ctx = field(31);
        let one = ctx.one();
        let f = fermat_curve(&ctx, 3, [one, one, ctx.neg(one)]).unwrap();
        let r = chebotarev_census(&ctx, &[f]).unwrap();
        assert_eq!(r.classes.len(), 3);
        assert_ne!(r.verdict, Verdict::Failure);
    }

    #[test]
    fn pencil_union_census_runs() {
        let ctx = field(13);
        let curves: Vec<_> = ctx
            .elements()
            .take(3)
            .map(|a| CertifiedCurve::from_family(&ctx, pencil_curve(&ctx, 3, a).unwrap()).unwrap())
            .collect();
        let s = skew_line_bound_check(&ctx, &curves).unwrap();
        assert_eq!(s.degrees, vec![3, 3, 3]);
    }
}
