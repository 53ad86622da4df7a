//! Theorem-level counts: clean flexes, their cyclic arrangement, the
//! supporting-circle tally `s• − t•`, and sign changes of `L u`; plus the
//! seeded random corpora on which these are checked.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::{circular_distance, wrap};
use crate::chebyshev::{DisconjugateOperator, SpaceDescriptor, TrigPoly};
use crate::error::{Error, Result};
use crate::funcmodel::{merge_arcs, Arc, GridProfile, PeriodicFunction, RatioEvaluator};
use crate::osculation::{classify_flex, flex_scan, operator_scales, FlexKind, FlexRecord, IN_SPACE_TOL};
use crate::smooth::{Difference, Scaled, Smooth};

/// One verified statement: what was required and what was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub name: String,
    pub required: usize,
    pub observed: usize,
    pub pass: bool,
}

impl TheoremCheck {
    pub fn at_least(name: impl Into<String>, required: usize, observed: usize) -> Self {
        Self {
            name: name.into(),
            required,
            observed,
            pass: observed >= required,
        }
    }
}

/// Check name for the clean-flex lower bound.
pub const CHECK_CLEAN_MAX: &str = "clean-max-count";
pub const CHECK_CLEAN_MIN: &str = "clean-min-count";
/// Check name for the alternation count of clean flexes.
pub const CHECK_SIGN_CHANGES: &str = "clean-sign-changes";

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub n: usize,
    /// Every flex with its classification, in angular order.
    pub records: Vec<FlexRecord>,
    pub clean_max: Vec<Arc>,
    pub clean_min: Vec<Arc>,
    /// Global but not clean.
    pub global_only: Vec<Arc>,
    pub plain: Vec<Arc>,
    /// Cyclic alternations between clean-max and clean-min components;
    /// zero when either list is empty.
    pub sign_changes: usize,
    pub theorem_checks: Vec<TheoremCheck>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.theorem_checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&TheoremCheck> {
        self.theorem_checks.iter().find(|c| c.name == name)
    }
}

/// Flexes of `u` against `A_{2n+1}`, each classified; flex intervals are
/// classified at their midpoint and keep their arc as location.
pub fn clean_flex_census<F: Smooth + ?Sized>(u: &F, n: usize, grid: &GridProfile) -> Result<CensusReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let space = SpaceDescriptor::trigonometric(n);
    let flexes = flex_scan(u, space, grid)?;
    let mut records = Vec::with_capacity(flexes.len());
    for arc in flexes {
        let mut rec = classify_flex(u, arc.midpoint(), n, grid)?;
        rec.location = arc;
        records.push(rec);
    }

    let collect = |pred: &dyn Fn(FlexKind) -> bool| -> Vec<Arc> {
        records.iter().filter(|r| pred(r.kind)).map(|r| r.location).collect()
    };
    let clean_max = merge_arcs(collect(&|k| k == FlexKind::CleanMax), grid.gap);
    let clean_min = merge_arcs(collect(&|k| k == FlexKind::CleanMin), grid.gap);
    let global_only = collect(&|k| matches!(k, FlexKind::GlobalMax | FlexKind::GlobalMin));
    let plain = collect(&|k| k == FlexKind::Plain);

    let mut report = CensusReport {
        n,
        records,
        clean_max,
        clean_min,
        global_only,
        plain,
        sign_changes: 0,
        theorem_checks: Vec::new(),
    };
    report.sign_changes = sign_change_count(&report).unwrap_or(0);
    report.theorem_checks = vec![
        TheoremCheck::at_least(CHECK_CLEAN_MAX, n + 1, report.clean_max.len()),
        TheoremCheck::at_least(CHECK_CLEAN_MIN, n + 1, report.clean_min.len()),
        TheoremCheck::at_least(CHECK_SIGN_CHANGES, 4, report.sign_changes),
    ];
    Ok(report)
}

/// Number of alternations clean-max ↔ clean-min around the circle, i.e.
/// `2m` for the longest alternating cyclic sequence `p₁ ≺ q₁ ≺ ⋯ ≺ qₘ`.
pub fn sign_change_count(report: &CensusReport) -> Result<usize> {
    if report.clean_max.is_empty() || report.clean_min.is_empty() {
        return Err(Error::EmptyCensus);
    }
    let mut marks: Vec<(f64, bool)> = report
        .clean_max
        .iter()
        .map(|a| (a.midpoint(), true))
        .chain(report.clean_min.iter().map(|a| (a.midpoint(), false)))
        .collect();
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = marks.len();
    Ok((0..k).filter(|&i| marks[i].1 != marks[(i + 1) % k].1).count())
}

/// Sign changes of `L u` around the circle (for antiperiodic `u`, across
/// one period with the seam sign flip); passes when the count reaches
/// `order + 1`.
pub fn operator_sign_change_check<F: Smooth + ?Sized>(
    u: &F,
    space: SpaceDescriptor,
    grid: &GridProfile,
) -> Result<(usize, bool)> {
    if u.parity() != space.parity() {
        return Err(Error::InvalidInput(
            "function parity does not match the space parity".into(),
        ));
    }
    let op = DisconjugateOperator::for_space(space);
    let (lu_max, term_max) = operator_scales(u, &op, grid.base_samples)?;
    if lu_max <= IN_SPACE_TOL * term_max {
        return Err(Error::FunctionInSpace {
            operator_scale: if term_max > 0.0 { lu_max / term_max } else { 0.0 },
        });
    }
    let thr = grid.zero_tol * lu_max;
    let mut signs = Vec::with_capacity(grid.base_samples);
    for t in grid.points() {
        let v = op.apply(u, t)?;
        if v.abs() > thr {
            signs.push(v > 0.0);
        }
    }
    if signs.is_empty() {
        return Ok((0, space.order() == 0));
    }
    let mut count = signs.windows(2).filter(|w| w[0] != w[1]).count();
    // the sequence continues past 2π with the parity-flipped first sign
    let first_after_seam = if u.parity().sign() > 0.0 { signs[0] } else { !signs[0] };
    if *signs.last().unwrap() != first_after_seam {
        count += 1;
    }
    Ok((count, count > space.order()))
}

/// Counts of single-contact and excess multi-contact supporting members of
/// `A_3` from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoseTally {
    pub s_count: usize,
    pub t_count: usize,
    pub difference: i64,
}

/// Anchor count for the tritangent scan.
pub const BOSE_ANCHORS: usize = 512;
/// Members closer than this (max coefficient distance) are the same.
const BOSE_DEDUP: f64 = 1e-6;
/// Contact points of a tritangent must be at least this far apart.
const BOSE_SEPARATION: f64 = 1e-3;

/// The ratio whose supremum over `t` defines the largest `A_3` member
/// below `u` touching at `s`, written for `w = −u`: the minimal function
/// of `w` is `w(s) + w'(s) sin(t−s) + m (1 − cos(t−s))/2` with `m` the
/// supremum of `(w − φ₁)/φ₂`.
struct Anchored {
    phi1: TrigPoly,
    phi2: TrigPoly,
}

impl Anchored {
    fn new<W: Smooth + ?Sized>(w: &W, s: f64) -> Result<Self> {
        let d = w.derivatives(s, 1)?;
        let (sn, cs) = s.sin_cos();
        let space = SpaceDescriptor::trigonometric(1);
        // w(s) + w'(s) sin(t − s) and (1 − cos(t − s))/2 in the basis
        let phi1 = TrigPoly::new(space, vec![d[0], -d[1] * sn, d[1] * cs])?;
        let phi2 = TrigPoly::new(space, vec![0.5, -0.5 * cs, -0.5 * sn])?;
        Ok(Self { phi1, phi2 })
    }
}

/// Refined local maxima of the anchored ratio, sorted by value (largest
/// first), excluding the anchor itself.
fn ratio_maxima<W: Smooth + ?Sized>(w: &W, s: f64, grid: &GridProfile) -> Result<(Anchored, Vec<(f64, f64)>)> {
    let a = Anchored::new(w, s)?;
    let num = Difference(w, &a.phi1);
    let ev = RatioEvaluator::new(&num, &a.phi2, &[(s, 2)], 1.0)?;
    let n = grid.base_samples;
    let h = grid.step();
    let vals: Vec<f64> = grid
        .points()
        .map(|t| ev.eval(t).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let mut maxima = Vec::new();
    for i in 0..n {
        let v = vals[i];
        if v >= vals[(i + n - 1) % n] && v > vals[(i + 1) % n] {
            let (t, m) = ev.refine_max(i as f64 * h, h);
            maxima.push((t, m.max(v)));
        }
    }
    for (p, v) in ev.limits() {
        maxima.push((p, v));
    }
    maxima.sort_by(|x, y| y.1.total_cmp(&x.1));
    Ok((a, maxima))
}

fn global_argmax<W: Smooth + ?Sized>(w: &W, s: f64, grid: &GridProfile) -> Result<f64> {
    let (_, maxima) = ratio_maxima(w, s, grid)?;
    Ok(maxima.first().map(|m| m.0).unwrap_or(s))
}

fn nearest_max(maxima: &[(f64, f64)], r: f64) -> (f64, f64) {
    *maxima
        .iter()
        .min_by(|a, b| circular_distance(a.0, r).total_cmp(&circular_distance(b.0, r)))
        .unwrap()
}

/// A supporting member from below with three or more contacts, found by
/// bisecting the anchor between two neighbours whose far contact jumps.
fn resolve_jump<W: Smooth + ?Sized>(
    w: &W,
    mut lo: f64,
    mut hi: f64,
    mut r_lo: f64,
    mut r_hi: f64,
    grid: &GridProfile,
) -> Result<Option<(TrigPoly, usize)>> {
    let mut last = None;
    for _ in 0..64 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (a, maxima) = ratio_maxima(w, mid, grid)?;
        if maxima.is_empty() {
            return Ok(None);
        }
        let (ta, va) = nearest_max(&maxima, r_lo);
        let (tb, vb) = nearest_max(&maxima, r_hi);
        if va >= vb {
            lo = mid;
            r_lo = ta;
        } else {
            hi = mid;
            r_hi = tb;
        }
        last = Some((mid, a, maxima, va.max(vb)));
    }
    let Some((s, a, maxima, m)) = last else {
        return Ok(None);
    };
    if circular_distance(r_lo, r_hi) <= BOSE_SEPARATION
        || circular_distance(r_lo, s) <= BOSE_SEPARATION
        || circular_distance(r_hi, s) <= BOSE_SEPARATION
    {
        return Ok(None);
    }
    let tol = 1e-9 * (1.0 + m.abs());
    let mut contacts: Vec<f64> = vec![wrap(s)];
    for &(t, v) in &maxima {
        if v >= m - tol && contacts.iter().all(|&c| circular_distance(c, t) > BOSE_SEPARATION) {
            contacts.push(t);
        }
    }
    if contacts.len() < 3 {
        return Ok(None);
    }
    // back to u: the member below u is −(φ₁ + m φ₂)
    let phi = a.phi1.add(&a.phi2.scale(m)).scale(-1.0);
    Ok(Some((phi, contacts.len())))
}

/// `s•`: clean minimal flexes of `u` (order 3); `t•`: excess contacts
/// `k − 2` summed over distinct supporting members from below with `k > 2`
/// contact points.
pub fn bose_tally<F: Smooth + ?Sized>(u: &F, grid: &GridProfile) -> Result<BoseTally> {
    let census = clean_flex_census(u, 1, grid)?;
    let flex_intervals = census
        .records
        .iter()
        .any(|r| r.kind == FlexKind::CleanMin && !r.location.is_point());
    if flex_intervals {
        return Err(Error::InfiniteCount);
    }
    let s_count = census
        .records
        .iter()
        .filter(|r| r.kind == FlexKind::CleanMin)
        .count();

    let w = Scaled(-1.0, u);
    let spacing = TAU / BOSE_ANCHORS as f64;
    let anchors: Vec<f64> = (0..BOSE_ANCHORS).map(|i| i as f64 * spacing).collect();
    let far: Vec<f64> = anchors
        .iter()
        .map(|&s| global_argmax(&w, s, grid))
        .collect::<Result<_>>()?;

    let mut found: Vec<(TrigPoly, usize)> = Vec::new();
    for i in 0..BOSE_ANCHORS {
        let j = (i + 1) % BOSE_ANCHORS;
        if circular_distance(far[i], far[j]) <= 2.0 * spacing {
            continue;
        }
        let lo = anchors[i];
        if let Some((phi, k)) = resolve_jump(&w, lo, lo + spacing, far[i], far[j], grid)? {
            if found.iter().all(|(q, _)| q.distance(&phi) >= BOSE_DEDUP) {
                found.push((phi, k));
            }
        }
    }
    let t_count: usize = found.iter().map(|(_, k)| k - 2).sum();
    Ok(BoseTally {
        s_count,
        t_count,
        difference: s_count as i64 - t_count as i64,
    })
}

/// Whether `L u` is negligible against its own terms.
pub fn is_in_space<F: Smooth + ?Sized>(u: &F, space: SpaceDescriptor, tol: f64) -> Result<bool> {
    let op = DisconjugateOperator::for_space(space);
    let (lu_max, term_max) = operator_scales(u, &op, 1024)?;
    Ok(lu_max < tol * term_max)
}

/// Rejection threshold for corpus draws that (nearly) lie in the space.
pub const CORPUS_REJECTION: f64 = 1e-6;

/// Random periodic Fourier series of degree `n+1..=n+3` with coefficients
/// uniform in `[−1, 1]`, redrawn while it (nearly) lies in `A_{2n+1}`.
pub fn random_fourier<R: Rng>(rng: &mut R, n: usize) -> PeriodicFunction {
    let space = SpaceDescriptor::trigonometric(n);
    loop {
        let degree = rng.gen_range(n + 1..=n + 3);
        let coeffs: Vec<f64> = (0..2 * degree + 1).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let u = PeriodicFunction::fourier(coeffs).expect("odd coefficient count");
        if !is_in_space(&u, space, CORPUS_REJECTION).unwrap_or(true) {
            return u;
        }
    }
}

/// Random antiperiodic series with half-integer frequencies up to
/// `(2k+5)/2`, at least one beyond the order-`2k` space, redrawn while it
/// (nearly) lies in that space.
pub fn random_antiperiodic<R: Rng>(rng: &mut R, k: usize) -> PeriodicFunction {
    let space = SpaceDescriptor::antiperiodic(k);
    loop {
        let pairs = rng.gen_range(k + 1..=k + 3);
        let coeffs: Vec<f64> = (0..2 * pairs).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let u = PeriodicFunction::antiperiodic(coeffs).expect("even coefficient count");
        if !is_in_space(&u, space, CORPUS_REJECTION).unwrap_or(true) {
            return u;
        }
    }
}

/// Deterministic corpus of `count` periodic functions for degree `n`.
pub fn fourier_corpus(seed: u64, n: usize, count: usize) -> Vec<PeriodicFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_fourier(&mut rng, n)).collect()
}

/// Deterministic corpus of `count` antiperiodic functions for order `2k`.
pub fn antiperiodic_corpus(seed: u64, k: usize, count: usize) -> Vec<PeriodicFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_antiperiodic(&mut rng, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn fourier(c: Vec<f64>) -> PeriodicFunction {
        PeriodicFunction::fourier(c).unwrap()
    }

    #[test]
    fn census_of_sin_two_t() {
        let rep = clean_flex_census(&fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0]), 1, &GridProfile::default()).unwrap();
        let mids = |v: &[Arc]| v.iter().map(|a| a.midpoint()).collect::<Vec<_>>();
        let max = mids(&rep.clean_max);
        let min = mids(&rep.clean_min);
        assert_eq!(max.len(), 2);
        assert_eq!(min.len(), 2);
        assert!((max[0] - 3.0 * FRAC_PI_4).abs() < 1e-10 && (max[1] - 7.0 * FRAC_PI_4).abs() < 1e-10);
        assert!((min[0] - FRAC_PI_4).abs() < 1e-10 && (min[1] - 5.0 * FRAC_PI_4).abs() < 1e-10);
        assert_eq!(rep.sign_changes, 4);
        assert!(rep.passed());
        assert!(rep.global_only.is_empty() && rep.plain.is_empty());
    }

    #[test]
    fn census_rejects_member() {
        assert!(matches!(
            clean_flex_census(&fourier(vec![1.0, 1.0, 0.0]), 1, &GridProfile::default()),
            Err(Error::FunctionInSpace { .. })
        ));
    }

    #[test]
    fn empty_census_has_no_sign_changes() {
        let rep = CensusReport {
            n: 1,
            records: vec![],
            clean_max: vec![],
            clean_min: vec![Arc::point(1.0)],
            global_only: vec![],
            plain: vec![],
            sign_changes: 0,
            theorem_checks: vec![],
        };
        assert_eq!(sign_change_count(&rep), Err(Error::EmptyCensus));
    }

    #[test]
    fn operator_signs_antiperiodic() {
        let u = PeriodicFunction::antiperiodic(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let (count, pass) =
            operator_sign_change_check(&u, SpaceDescriptor::antiperiodic(1), &GridProfile::default()).unwrap();
        assert_eq!(count, 3);
        assert!(pass);
    }

    #[test]
    fn operator_signs_sharp() {
        for n in 1..=3 {
            let mut c = vec![0.0; 2 * n + 3];
            c[2 * n + 2] = 1.0;
            let (count, pass) =
                operator_sign_change_check(&fourier(c), SpaceDescriptor::trigonometric(n), &GridProfile::default())
                    .unwrap();
            assert_eq!(count, 2 * n + 2);
            assert!(pass);
        }
    }

    #[test]
    fn operator_signs_mixed() {
        let u = fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.3, 0.0]);
        let (count, pass) =
            operator_sign_change_check(&u, SpaceDescriptor::trigonometric(1), &GridProfile::default()).unwrap();
        assert!(count >= 4 && pass);
    }

    #[test]
    fn bose_sin_two_t() {
        let t = bose_tally(&fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0]), &GridProfile::default()).unwrap();
        assert_eq!(t, BoseTally { s_count: 2, t_count: 0, difference: 2 });
    }

    #[test]
    fn bose_cos_three_t() {
        // clean minimal flexes at 0, 2π/3, 4π/3; the constant −1 touches
        // from below at the three minima
        let t = bose_tally(&fourier(vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]), &GridProfile::default()).unwrap();
        assert_eq!(t, BoseTally { s_count: 3, t_count: 1, difference: 2 });
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(fourier_corpus(7, 2, 5), fourier_corpus(7, 2, 5));
        assert_ne!(fourier_corpus(7, 2, 5), fourier_corpus(8, 2, 5));
        for u in antiperiodic_corpus(3, 1, 5) {
            u.check_parity().unwrap();
            assert!(!is_in_space(&u, SpaceDescriptor::antiperiodic(1), CORPUS_REJECTION).unwrap());
        }
    }

    #[test]
    fn antiperiodic_flexes() {
        let u = PeriodicFunction::antiperiodic(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let f = flex_scan(&u, SpaceDescriptor::antiperiodic(1), &GridProfile::default()).unwrap();
        let locs: Vec<f64> = f.iter().map(|a| a.midpoint()).collect();
        assert_eq!(locs.len(), 3);
        for (k, t) in locs.iter().enumerate() {
            assert!((t - 2.0 * PI * k as f64 / 3.0).abs() < 1e-10);
        }
    }
}
