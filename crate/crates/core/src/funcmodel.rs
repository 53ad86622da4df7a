//! Test functions on the circle and the scanning primitives shared by every
//! analysis: bracketing roots, clustering near-zeros into arcs, and the
//! supremum of a ratio with removable singularities.

use std::f64::consts::{PI, TAU};

use crate::angle::{circular_distance, wrap};
use crate::chebyshev::{SpaceDescriptor, TrigPoly};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::smooth::{Parity, Smooth};

/// Default bound on derivative orders served by a [`PeriodicFunction`].
pub const DEFAULT_MAX_DERIVATIVE_ORDER: usize = 64;

/// Closed-form catalog entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Catalog {
    /// `sin((n+1)t)`, the extremal example with exactly `2n+2` flexes.
    Sharp { n: usize },
    /// Support function of the ellipse `x²/a² + y²/b² = 1`.
    EllipseSupport { a: f64, b: f64 },
    /// `exp(a cos t)`.
    ExpCos { a: f64 },
}

impl Catalog {
    fn jet(&self, t: f64, order: usize) -> Jet {
        let x = Jet::variable(t, order);
        match *self {
            Catalog::Sharp { n } => x.scale((n + 1) as f64).sin_cos().0,
            Catalog::EllipseSupport { a, b } => {
                let (s, c) = x.sin_cos();
                (c.square().scale(a * a) + s.square().scale(b * b)).sqrt()
            }
            Catalog::ExpCos { a } => x.sin_cos().1.scale(a).exp(),
        }
    }
}

/// `exp(−1/x)` for `x > 0`, zero otherwise, as a jet in the variable.
fn mollifier(x: &Jet) -> Jet {
    let x0 = x.value();
    // below this the value and every derivative underflow
    if x0 <= 1.0 / 700.0 {
        return Jet::constant(0.0, x.order());
    }
    (-x.recip()).exp()
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, `C^∞` in between.
fn smooth_step(x: &Jet) -> Jet {
    let x0 = x.value();
    if x0 <= 0.0 {
        return Jet::constant(0.0, x.order());
    }
    if x0 >= 1.0 {
        return Jet::constant(1.0, x.order());
    }
    let a = mollifier(x);
    let b = mollifier(&(-x).add_scalar(1.0));
    a.div(&(&a + &b))
}

/// Bump equal to 1 on `[2π/5, 3π/5]` and 0 outside `(π/5, 4π/5)`.
fn plateau_bump(t: f64, order: usize) -> Jet {
    let w = PI / 5.0;
    let t = wrap(t);
    if t <= w || t >= 4.0 * w {
        return Jet::constant(0.0, order);
    }
    let rise = smooth_step(&Jet::affine((t - w) / w, 1.0 / w, order));
    let fall = smooth_step(&Jet::affine((4.0 * w - t) / w, -1.0 / w, order));
    &rise * &fall
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    /// Finite Fourier series (either parity).
    Fourier(TrigPoly),
    Catalog(Catalog),
    /// `v(t) = b(t) + λ b(t + π)` with `b` the smooth plateau bump.
    Plateau { lambda: f64 },
}

/// A smooth `2π`-periodic or antiperiodic function with analytic
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    kind: FunctionKind,
    max_derivative_order: usize,
}

impl PeriodicFunction {
    pub fn from_trig(p: TrigPoly) -> Self {
        Self {
            kind: FunctionKind::Fourier(p),
            max_derivative_order: DEFAULT_MAX_DERIVATIVE_ORDER,
        }
    }

    /// Periodic Fourier series from `a0, a1, b1, a2, b2, …`.
    pub fn fourier(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "periodic Fourier series needs an odd number of coefficients, got {}",
                coeffs.len()
            )));
        }
        let space = SpaceDescriptor::new(coeffs.len())?;
        Ok(Self::from_trig(TrigPoly::new(space, coeffs)?))
    }

    /// Antiperiodic series from `c½, s½, c3/2, s3/2, …`.
    pub fn antiperiodic(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "antiperiodic series needs a positive even number of coefficients, got {}",
                coeffs.len()
            )));
        }
        let space = SpaceDescriptor::new(coeffs.len())?;
        Ok(Self::from_trig(TrigPoly::new(space, coeffs)?))
    }

    pub fn catalog(entry: Catalog) -> Result<Self> {
        match entry {
            Catalog::EllipseSupport { a, b } if !(a > 0.0 && b > 0.0) => {
                return Err(Error::InvalidInput("ellipse semi-axes must be positive".into()))
            }
            Catalog::ExpCos { a } if !a.is_finite() => {
                return Err(Error::InvalidInput("exp-cos amplitude must be finite".into()))
            }
            _ => {}
        }
        Ok(Self {
            kind: FunctionKind::Catalog(entry),
            max_derivative_order: DEFAULT_MAX_DERIVATIVE_ORDER,
        })
    }

    pub fn plateau(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput("plateau weight must be finite and ≥ 0".into()));
        }
        Ok(Self {
            kind: FunctionKind::Plateau { lambda },
            max_derivative_order: DEFAULT_MAX_DERIVATIVE_ORDER,
        })
    }

    pub fn with_max_derivative_order(mut self, order: usize) -> Self {
        self.max_derivative_order = order;
        self
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn as_trig(&self) -> Option<&TrigPoly> {
        match &self.kind {
            FunctionKind::Fourier(p) => Some(p),
            _ => None,
        }
    }

    /// Checks `value(t + 2π) = ±value(t)` at 32 probe points.
    pub fn check_parity(&self) -> Result<()> {
        let sign = self.parity().sign();
        let scale = crate::angle::uniform_grid(32)
            .map(|t| self.value(t).abs())
            .fold(1.0, f64::max);
        for t in crate::angle::uniform_grid(32) {
            let t = t + 0.1;
            let lhs = self.value(t + TAU);
            let rhs = sign * self.value(t);
            if (lhs - rhs).abs() > 1e-10 * scale {
                return Err(Error::InvalidInput(format!(
                    "function violates its parity at t = {t:.6}"
                )));
            }
        }
        Ok(())
    }
}

impl Smooth for PeriodicFunction {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        match &self.kind {
            FunctionKind::Fourier(p) => p.jet(t, order),
            FunctionKind::Catalog(c) => Ok(c.jet(t, order)),
            FunctionKind::Plateau { lambda } => {
                let a = plateau_bump(t, order);
                if *lambda == 0.0 {
                    return Ok(a);
                }
                Ok(&a + &plateau_bump(t + PI, order).scale(*lambda))
            }
        }
    }

    fn value(&self, t: f64) -> f64 {
        match &self.kind {
            FunctionKind::Fourier(p) => p.eval(t, 0),
            _ => self.jet(t, 0).map(|j| j.value()).unwrap_or(f64::NAN),
        }
    }

    fn parity(&self) -> Parity {
        match &self.kind {
            FunctionKind::Fourier(p) => p.space().parity(),
            _ => Parity::Periodic,
        }
    }

    fn max_derivative_order(&self) -> usize {
        self.max_derivative_order
    }
}

/// `u(t), u'(t), …, u^(max_order)(t)`.
pub fn evaluate_with_derivatives<F: Smooth + ?Sized>(
    u: &F,
    t: f64,
    max_order: usize,
) -> Result<Vec<f64>> {
    u.derivatives(t, max_order)
}

/// Sampling density and the tolerance ladder used by every scan.
///
/// All tolerances are relative to the scale (max absolute grid value) of
/// the function being scanned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridProfile {
    pub base_samples: usize,
    pub refine_depth: usize,
    /// Zero tolerance `εz`.
    pub zero_tol: f64,
    /// Contact tolerance `εc`.
    pub contact_tol: f64,
    /// Support (one-sidedness) tolerance `εs`.
    pub support_tol: f64,
    /// Gaps shorter than this (radians) are merged.
    pub gap: f64,
}

impl Default for GridProfile {
    fn default() -> Self {
        Self {
            base_samples: 4096,
            refine_depth: 40,
            zero_tol: 1e-9,
            contact_tol: 1e-7,
            support_tol: 1e-8,
            gap: TAU / 1024.0,
        }
    }
}

impl GridProfile {
    pub fn validate(&self) -> Result<()> {
        if self.base_samples < 64 {
            return Err(Error::InvalidInput("base_samples must be at least 64".into()));
        }
        for (name, v) in [
            ("zero_tol", self.zero_tol),
            ("contact_tol", self.contact_tol),
            ("support_tol", self.support_tol),
            ("gap", self.gap),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        TAU / self.base_samples as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + Clone {
        crate::angle::uniform_grid(self.base_samples)
    }
}

/// A closed arc of the circle from `start` counter-clockwise to `end`.
///
/// `start ∈ [0, 2π)` and `end` is lifted so that `start ≤ end ≤ start + 2π`;
/// a point is the arc with `start == end`, the whole circle has length `2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn new(start: f64, end: f64) -> Self {
        let s = wrap(start);
        let len = (end - start).clamp(0.0, TAU);
        Self {
            start: s,
            end: s + len,
        }
    }

    pub fn point(t: f64) -> Self {
        let t = wrap(t);
        Self { start: t, end: t }
    }

    pub fn full() -> Self {
        Self {
            start: 0.0,
            end: TAU,
        }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_full(&self) -> bool {
        self.length() >= TAU
    }

    pub fn is_point(&self) -> bool {
        self.end == self.start
    }

    pub fn midpoint(&self) -> f64 {
        wrap(0.5 * (self.start + self.end))
    }

    pub fn contains(&self, t: f64) -> bool {
        self.is_full() || crate::angle::ccw_distance(self.start, t) <= self.length()
    }

    /// Circular distance from `t` to the nearest point of the arc.
    pub fn distance_to(&self, t: f64) -> f64 {
        if self.contains(t) {
            0.0
        } else {
            circular_distance(t, self.start).min(circular_distance(t, self.end))
        }
    }
}

/// A root reported by [`find_zeros`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub location: f64,
    /// The function touches zero without changing sign.
    pub tangential: bool,
}

fn sample<G: Fn(f64) -> f64>(g: &G, n: usize) -> Vec<f64> {
    crate::angle::uniform_grid(n).map(g).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Value at grid index `i`, wrapping with the parity sign.
fn wrapped(vals: &[f64], i: usize, parity: Parity) -> f64 {
    let n = vals.len();
    if i < n {
        vals[i]
    } else {
        parity.sign() * vals[i - n]
    }
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, mut ga: f64, depth: usize) -> f64 {
    for _ in 0..depth {
        if b - a < 1e-13 {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimisation of `f` on `[a, b]`; returns `(argmin, min)`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if b - a < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let fa = f(a);
    let fb = f(b);
    let mut best = (c, fc);
    for cand in [(d, fd), (a, fa), (b, fb)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Roots bracketed by sign changes on an `n`-point grid, refined by
/// bisection. Grid points where `g` is exactly zero are returned as-is.
pub fn sign_change_roots<G: Fn(f64) -> f64>(g: &G, parity: Parity, n: usize, depth: usize) -> Vec<f64> {
    let vals = sample(g, n);
    sign_change_roots_from(g, &vals, parity, depth)
}

fn sign_change_roots_from<G: Fn(f64) -> f64>(
    g: &G,
    vals: &[f64],
    parity: Parity,
    depth: usize,
) -> Vec<f64> {
    let n = vals.len();
    let h = TAU / n as f64;
    let mut roots = Vec::new();
    for i in 0..n {
        let a = vals[i];
        let b = wrapped(vals, i + 1, parity);
        if a == 0.0 {
            roots.push(i as f64 * h);
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            let ta = i as f64 * h;
            roots.push(wrap(bisect(g, ta, ta + h, a, depth)));
        }
    }
    roots
}

/// All zeros of `g` on the circle: sign changes refined by bisection, plus
/// tangential zeros where a local minimum of `|g|` drops below `εz·scale`.
pub fn find_zeros<G: Fn(f64) -> f64>(g: G, parity: Parity, grid: &GridProfile) -> Vec<Zero> {
    let vals = sample(&g, grid.base_samples);
    let scale = max_abs(&vals);
    let mut zeros: Vec<Zero> = sign_change_roots_from(&g, &vals, parity, grid.refine_depth)
        .into_iter()
        .map(|location| Zero {
            location,
            tangential: false,
        })
        .collect();

    let n = vals.len();
    let h = grid.step();
    let thr = grid.zero_tol * scale;
    for i in 0..n {
        let prev = if i == 0 {
            parity.sign() * vals[n - 1]
        } else {
            vals[i - 1]
        };
        let cur = vals[i];
        let next = wrapped(&vals, i + 1, parity);
        let same_sign = prev != 0.0
            && cur != 0.0
            && next != 0.0
            && (prev < 0.0) == (cur < 0.0)
            && (cur < 0.0) == (next < 0.0);
        if !same_sign || cur.abs() > prev.abs() || cur.abs() >= next.abs() {
            continue;
        }
        let t = i as f64 * h;
        let (tm, m) = golden_min(|s| g(s).abs(), t - h, t + h, 80);
        if m <= thr {
            zeros.push(Zero {
                location: wrap(tm),
                tangential: true,
            });
        }
    }
    zeros.sort_by(|a, b| a.location.total_cmp(&b.location));
    zeros
}

/// Maximal arcs on which `|g| ≤ ε·scale`, with `scale` the largest grid
/// value of `|g|`. See [`near_zero_components_scaled`].
pub fn near_zero_components<G: Fn(f64) -> f64>(g: G, eps: f64, grid: &GridProfile) -> Result<Vec<Arc>> {
    let vals = sample(&g, grid.base_samples);
    let scale = max_abs(&vals);
    components_from(&g, &vals, eps * scale, grid)
}

/// Like [`near_zero_components`] with an explicit scale, so that a function
/// which is identically (numerically) zero yields the full circle.
///
/// Fails with `NotOneSided` when `g` exceeds `ε·scale` in both directions.
/// Arcs closer than the grid gap are merged; a local minimum of `|g|`
/// between grid points that dips below the threshold becomes a point arc.
pub fn near_zero_components_scaled<G: Fn(f64) -> f64>(
    g: G,
    eps: f64,
    scale: f64,
    grid: &GridProfile,
) -> Result<Vec<Arc>> {
    let vals = sample(&g, grid.base_samples);
    components_from(&g, &vals, eps * scale, grid)
}

fn components_from<G: Fn(f64) -> f64>(
    g: &G,
    vals: &[f64],
    thr: f64,
    grid: &GridProfile,
) -> Result<Vec<Arc>> {
    let n = vals.len();
    let h = TAU / n as f64;
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo < -thr && hi > thr {
        let scale = max_abs(vals).max(f64::MIN_POSITIVE);
        return Err(Error::NotOneSided {
            excursion: (-lo).min(hi) / scale,
        });
    }

    let flags: Vec<bool> = vals.iter().map(|v| v.abs() <= thr).collect();
    if flags.iter().all(|&f| f) {
        return Ok(vec![Arc::full()]);
    }

    let mut arcs = Vec::new();
    // start scanning just after an unflagged index so runs never straddle
    // the scan origin
    let first_clear = flags.iter().position(|&f| !f).unwrap();
    let mut run_start: Option<usize> = None;
    for k in 1..=n {
        let i = first_clear + k;
        let flagged = flags[i % n];
        match (flagged, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                arcs.push(Arc::new(s as f64 * h, (i - 1) as f64 * h));
                run_start = None;
            }
            _ => {}
        }
    }

    // sub-grid dips: strict local minima of |g| that are not flagged
    for i in 0..n {
        if flags[i] {
            continue;
        }
        let prev = vals[(i + n - 1) % n].abs();
        let cur = vals[i].abs();
        let next = vals[(i + 1) % n].abs();
        if cur > prev || cur >= next || flags[(i + n - 1) % n] || flags[(i + 1) % n] {
            continue;
        }
        let t = i as f64 * h;
        let (tm, m) = golden_min(|s| g(s).abs(), t - h, t + h, 80);
        if m <= thr {
            arcs.push(Arc::point(tm));
        }
    }

    Ok(merge_arcs(arcs, grid.gap))
}

/// Sorts arcs and merges those separated by less than `gap`, including
/// across `2π`.
pub fn merge_arcs(mut arcs: Vec<Arc>, gap: f64) -> Vec<Arc> {
    if arcs.is_empty() {
        return arcs;
    }
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut merged: Vec<Arc> = Vec::new();
    for a in arcs {
        match merged.last_mut() {
            Some(m) if a.start - m.end < gap => {
                m.end = m.end.max(a.end);
            }
            _ => merged.push(a),
        }
    }
    if merged.len() > 1 {
        let last = *merged.last().unwrap();
        let first = merged[0];
        if first.start + TAU - last.end < gap {
            merged.pop();
            let end = (first.end + TAU).max(last.end);
            merged[0] = Arc {
                start: last.start,
                end,
            };
            if merged[0].length() >= TAU - gap {
                return vec![Arc::full()];
            }
            let m0 = merged.remove(0);
            merged.push(m0);
            merged.sort_by(|a, b| a.start.total_cmp(&b.start));
        }
    } else if merged[0].length() >= TAU - gap {
        return vec![Arc::full()];
    }
    merged
}

/// Supremum of `num/den` over the circle and a point where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSup {
    pub value: f64,
    pub argmax: f64,
}

/// Local Taylor model of `num/den` around a common zero of order `k`.
struct LocalRatio {
    p: f64,
    radius: f64,
    num: Vec<f64>,
    den: Vec<f64>,
}

impl LocalRatio {
    fn eval(&self, t: f64) -> f64 {
        let mut d = wrap(t - self.p);
        if d > PI {
            d -= TAU;
        }
        let horner = |c: &[f64]| c.iter().rev().fold(0.0, |acc, x| acc * d + x);
        horner(&self.num) / horner(&self.den)
    }

    fn limit(&self) -> f64 {
        self.num[0] / self.den[0]
    }

    fn jet(&self, t: f64, order: usize) -> Jet {
        let mut d = wrap(t - self.p);
        if d > PI {
            d -= TAU;
        }
        let x = Jet::variable(d, order);
        let horner = |c: &[f64]| c.iter().rev().fold(Jet::constant(0.0, order), |acc, v| (&acc * &x).add_scalar(*v));
        horner(&self.num).div(&horner(&self.den))
    }
}

/// Extra Taylor terms kept beyond the vanishing order.
const RATIO_TAYLOR_TERMS: usize = 28;
/// Below this fraction of its scale the denominator is evaluated through
/// the local Taylor model instead of directly.
const RATIO_TAYLOR_SWITCH: f64 = 1e-4;
/// Fallback exclusion radius when derivatives are not available.
const RATIO_EXCLUSION: f64 = 1e-3;
/// Largest radius of a local Taylor model.
const RATIO_TAYLOR_RADIUS: f64 = 0.25;

/// Pointwise evaluation of `num/den` with removable singularities at the
/// listed contact points replaced by local Taylor quotients.
pub struct RatioEvaluator<'a, N: ?Sized, D: ?Sized> {
    num: &'a N,
    den: &'a D,
    contacts: Vec<(f64, usize)>,
    locals: Vec<Option<LocalRatio>>,
    den_scale: f64,
}

impl<'a, N, D> RatioEvaluator<'a, N, D>
where
    N: Smooth + ?Sized,
    D: Smooth + ?Sized,
{
    /// `den_scale` is the magnitude against which smallness of `den` is
    /// judged (typically its maximum on the grid).
    pub fn new(num: &'a N, den: &'a D, contacts: &[(f64, usize)], den_scale: f64) -> Result<Self> {
        let mut locals = Vec::with_capacity(contacts.len());
        for (i, &(p, k)) in contacts.iter().enumerate() {
            let nearest = contacts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(q, _))| circular_distance(p, q))
                .fold(PI, f64::min);
            let available = num.max_derivative_order().min(den.max_derivative_order());
            let order = (k + RATIO_TAYLOR_TERMS).min(available);
            let local = if order > k {
                match (num.jet(p, order), den.jet(p, order)) {
                    (Ok(nj), Ok(dj)) => {
                        let dc = dj.coeffs()[k..].to_vec();
                        if dc[0] == 0.0 {
                            return Err(Error::DenominatorVanishesElsewhere { location: p });
                        }
                        Some(LocalRatio {
                            p,
                            radius: (0.45 * nearest).min(RATIO_TAYLOR_RADIUS),
                            num: nj.coeffs()[k..].to_vec(),
                            den: dc,
                        })
                    }
                    _ => None,
                }
            } else {
                None
            };
            locals.push(local);
        }
        Ok(Self {
            num,
            den,
            contacts: contacts.to_vec(),
            locals,
            den_scale,
        })
    }

    /// The ratio at `t`, given `d = den(t)`; `None` inside an exclusion
    /// zone (no derivatives available) or where `den` vanishes.
    pub fn eval_with_den(&self, t: f64, d: f64) -> Option<f64> {
        if d < RATIO_TAYLOR_SWITCH * self.den_scale {
            for (local, &(p, _)) in self.locals.iter().zip(&self.contacts) {
                let dist = circular_distance(t, p);
                match local {
                    Some(l) if dist < l.radius => return Some(l.eval(t)),
                    None if dist < RATIO_EXCLUSION => return None,
                    _ => {}
                }
            }
        }
        if d <= 0.0 {
            return None;
        }
        Some(self.num.value(t) / d)
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.eval_with_den(t, self.den.value(t))
    }

    /// Limits of the ratio at the contact points that have Taylor models.
    pub fn limits(&self) -> Vec<(f64, f64)> {
        self.locals
            .iter()
            .flatten()
            .map(|l| (wrap(l.p), l.limit()))
            .collect()
    }

    fn near_contact(&self, t: f64, r: f64) -> bool {
        self.contacts.iter().any(|&(p, _)| circular_distance(t, p) < r)
    }

    /// Second-order jet of the ratio at `t`, when derivatives exist.
    fn ratio_jet(&self, t: f64) -> Option<Jet> {
        let d = self.den.value(t);
        if d < RATIO_TAYLOR_SWITCH * self.den_scale {
            for (local, &(p, _)) in self.locals.iter().zip(&self.contacts) {
                if let Some(l) = local {
                    if circular_distance(t, p) < l.radius {
                        return Some(l.jet(t, 2));
                    }
                }
            }
        }
        if d <= 0.0 {
            return None;
        }
        let nj = self.num.jet(t, 2).ok()?;
        let dj = self.den.jet(t, 2).ok()?;
        Some(nj.div(&dj))
    }

    /// Local maximum of the ratio in `[t − h, t + h]`: golden section,
    /// then Newton steps on the derivative of the ratio, which locate the
    /// maximiser far beyond the `√ε` reach of comparisons alone.
    pub fn refine_max(&self, t: f64, h: f64) -> (f64, f64) {
        let f = |s: f64| self.eval(s).map_or(f64::INFINITY, |r| -r);
        let (t0, m) = golden_min(f, t - h, t + h, 80);
        let mut tm = t0;
        for _ in 0..8 {
            let Some(j) = self.ratio_jet(tm) else { break };
            let d = j.derivatives();
            // a flat ratio (rounding noise only) has no maximiser to polish
            if !(d[2] < -1e-8 * (1.0 + m.abs())) {
                break;
            }
            let next = tm - d[1] / d[2];
            if (next - t).abs() > h {
                break;
            }
            let step = (next - tm).abs();
            tm = next;
            if step < 1e-15 * (1.0 + tm.abs()) {
                break;
            }
        }
        // values agree to rounding at the maximum, so compare loosely
        let best = match self.eval(tm) {
            Some(v) if v >= -m - 1e-10 * (1.0 + m.abs()) => v.max(-m),
            _ => return (wrap(t0), -m),
        };
        (wrap(tm), best)
    }
}

/// Supremum of `num/den` over the circle.
///
/// `den ≥ 0` may vanish only at the listed contact points, to the stated
/// order, where `num` must vanish to at least the same order. Near those
/// points the ratio is evaluated from Taylor coefficients of both
/// functions, so the removable singularity is replaced by its limit rather
/// than by a cancellation-prone quotient.
pub fn sup_of_ratio<N, D>(
    num: &N,
    den: &D,
    contacts: &[(f64, usize)],
    grid: &GridProfile,
) -> Result<RatioSup>
where
    N: Smooth + ?Sized,
    D: Smooth + ?Sized,
{
    let n = grid.base_samples;
    let h = grid.step();
    let ts: Vec<f64> = grid.points().collect();
    let den_vals: Vec<f64> = ts.iter().map(|&t| den.value(t)).collect();
    let den_scale = max_abs(&den_vals);
    if den_scale == 0.0 {
        return Err(Error::DenominatorVanishesElsewhere { location: 0.0 });
    }
    let ratio = RatioEvaluator::new(num, den, contacts, den_scale)?;

    let floor = 1e-12 * den_scale;
    let mut best = RatioSup {
        value: f64::NEG_INFINITY,
        argmax: 0.0,
    };
    let mut best_idx: Option<usize> = None;
    for (i, (&t, &d)) in ts.iter().zip(&den_vals).enumerate() {
        if d < -floor || (d <= floor && !ratio.near_contact(t, RATIO_TAYLOR_RADIUS)) {
            return Err(Error::DenominatorVanishesElsewhere { location: t });
        }
        if let Some(r) = ratio.eval_with_den(t, d) {
            if r > best.value {
                best = RatioSup { value: r, argmax: t };
                best_idx = Some(i);
            }
        }
    }

    // hidden zeros of the denominator between grid points
    for i in 0..n {
        let d = den_vals[i];
        if d > 1e-6 * den_scale || ratio.near_contact(ts[i], 2.0 * h) {
            continue;
        }
        let prev = den_vals[(i + n - 1) % n];
        let next = den_vals[(i + 1) % n];
        if d <= prev && d <= next {
            let (tm, m) = golden_min(|s| den.value(s), ts[i] - h, ts[i] + h, 80);
            if m <= floor && !ratio.near_contact(tm, 1e-6) {
                return Err(Error::DenominatorVanishesElsewhere { location: wrap(tm) });
            }
        }
    }

    for (p, v) in ratio.limits() {
        if v > best.value {
            best = RatioSup { value: v, argmax: p };
            best_idx = None;
        }
    }

    // a limit is a maximum only when the ratio is stationary there, so
    // search next to the contact point as well
    let centre = best_idx.map_or(best.argmax, |i| ts[i]);
    let (tm, v) = ratio.refine_max(centre, h);
    if v > best.value {
        best = RatioSup { value: v, argmax: tm };
    }
    Ok(best)
}
