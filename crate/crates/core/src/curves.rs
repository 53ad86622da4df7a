//! Strictly convex curves given by support functions: envelope
//! reconstruction, osculating circles and vertices, osculating conics and
//! sextactic points, and conics tangent at two points.
//!
//! The parameter `t` is the angle of the outward normal, so the tangent
//! line `{x : (cos t, sin t)·x = h(t)}` lies at distance `h(t)` from the
//! origin and the curve point is `γ(t) = h n(t) + h′ n′(t)`.

use nalgebra::{DMatrix, SMatrix, SVector};

use crate::angle::circular_distance;
use crate::chebyshev::SpaceDescriptor;
use crate::error::{Error, Result};
use crate::funcmodel::{find_zeros, golden_min, sup_of_ratio, Arc, GridProfile, PeriodicFunction};
use crate::jet::Jet;
use crate::osculation::{classify_flex, contact_entries, extremes, flex_scan, ContactEntry, FlexKind};
use crate::smooth::{FnSmooth, Parity, Smooth};

/// Conic fits whose singular-value ratio falls below this are conics.
pub const CONIC_FIT_TOL: f64 = 1e-9;
/// Samples for the global conic fit.
const CONIC_FIT_SAMPLES: usize = 256;
/// Rank test for the osculating-conic system.
const CONIC_RANK_TOL: f64 = 1e-10;
/// Contact orders are resolved through `2·3 = 6`; sextactic contact
/// beyond that reads as `∞`.
const CONIC_CONTACT_N: usize = 3;
/// Samples for the convexity check.
const CONVEXITY_SAMPLES: usize = 1024;

/// A strictly convex closed curve through its support function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCurve {
    h: PeriodicFunction,
    origin: [f64; 2],
}

impl SupportCurve {
    /// Checks periodicity and `h + h″ > 0` on a grid (refined at the
    /// smallest sample).
    pub fn new(h: PeriodicFunction) -> Result<Self> {
        if h.parity() != Parity::Periodic {
            return Err(Error::InvalidInput("support function must be 2π-periodic".into()));
        }
        let rho = |t: f64| h.derivatives(t, 2).map(|d| d[0] + d[2]).unwrap_or(f64::NAN);
        let n = CONVEXITY_SAMPLES;
        let step = std::f64::consts::TAU / n as f64;
        let (i_min, v_min) = crate::angle::uniform_grid(n)
            .map(rho)
            .enumerate()
            .fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
        if v_min.is_nan() {
            return Err(Error::InvalidInput("support function needs two derivatives".into()));
        }
        let t0 = i_min as f64 * step;
        let (t, v) = golden_min(rho, t0 - step, t0 + step, 80);
        let (at, radius) = if v < v_min { (t, v) } else { (t0, v_min) };
        if radius <= 0.0 {
            return Err(Error::NotConvex {
                at: crate::angle::wrap(at),
                radius,
            });
        }
        Ok(Self { h, origin: [0.0, 0.0] })
    }

    /// Places the reference point `o` (support distances are measured from
    /// it) at `origin` in the plane.
    pub fn with_origin(mut self, origin: [f64; 2]) -> Self {
        self.origin = origin;
        self
    }

    pub fn support(&self) -> &PeriodicFunction {
        &self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    /// Jets of the coordinates of `γ` at `t`.
    pub fn point_jets(&self, t: f64, order: usize) -> Result<(Jet, Jet)> {
        let hj = self.h.jet(t, order + 1)?;
        let dh = hj.derivative();
        let hj = hj.truncate(order);
        let (s, c) = Jet::variable(t, order).sin_cos();
        let x = (&hj * &c - &dh * &s).add_scalar(self.origin[0]);
        let y = (&hj * &s + &dh * &c).add_scalar(self.origin[1]);
        Ok((x, y))
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        let d = self.h.derivatives(t, 1).expect("support function has a first derivative");
        let (s, c) = t.sin_cos();
        [
            self.origin[0] + d[0] * c - d[1] * s,
            self.origin[1] + d[0] * s + d[1] * c,
        ]
    }
}

/// `γ(t), γ′(t), …, γ^(order)(t)`.
pub fn curve_from_support(c: &SupportCurve, t: f64, order: usize) -> Result<Vec<[f64; 2]>> {
    let (x, y) = c.point_jets(t, order)?;
    Ok(x.derivatives()
        .into_iter()
        .zip(y.derivatives())
        .map(|(a, b)| [a, b])
        .collect())
}

/// Radius of the osculating circle, `h + h″`.
pub fn curvature_radius(c: &SupportCurve, t: f64) -> f64 {
    let d = c.h.derivatives(t, 2).expect("support function has two derivatives");
    d[0] + d[2]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

pub fn osculating_circle(c: &SupportCurve, t: f64) -> Circle {
    let rho = curvature_radius(c, t);
    let p = c.point(t);
    let (s, co) = t.sin_cos();
    Circle {
        center: [p[0] - rho * co, p[1] - rho * s],
        radius: rho,
    }
}

/// Feature kinds along a curve. `CleanMax`/`GlobalMax` mean the osculating
/// object is inscribed (lies inside the curve), `CleanMin`/`GlobalMin`
/// that it is circumscribed.
pub type CurveKind = FlexKind;

/// A vertex with its osculating circle.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub location: Arc,
    pub kind: CurveKind,
    pub circle: Circle,
    pub contact: Vec<ContactEntry>,
}

/// Vertices are the flexes of `h` of order three; they are classified
/// through the flex of `h`. The support function of the osculating circle
/// is the osculating polynomial, and a circle is inside the curve exactly
/// when its support function is below `h`, so a clean minimal flex of `h`
/// is an inscribed (clean maximal) vertex and vice versa.
pub fn vertex_scan(c: &SupportCurve, grid: &GridProfile) -> Result<Vec<VertexRecord>> {
    let flexes = match flex_scan(&c.h, SpaceDescriptor::trigonometric(1), grid) {
        Err(Error::FunctionInSpace { .. }) => return Err(Error::CircleDegenerate),
        other => other?,
    };
    let mut out = Vec::with_capacity(flexes.len());
    for arc in flexes {
        let s = arc.midpoint();
        let rec = classify_flex(&c.h, s, 1, grid)?;
        let kind = match rec.kind {
            FlexKind::CleanMin => FlexKind::CleanMax,
            FlexKind::CleanMax => FlexKind::CleanMin,
            FlexKind::GlobalMin => FlexKind::GlobalMax,
            FlexKind::GlobalMax => FlexKind::GlobalMin,
            FlexKind::Plain => FlexKind::Plain,
        };
        out.push(VertexRecord {
            location: arc,
            kind,
            circle: osculating_circle(c, s),
            contact: rec.contact.map(|p| p.entries().to_vec()).unwrap_or_default(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

/// `Ax² + Bxy + Cy² + Dx + Ey + F = 0` with unit coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    pub coeffs: [f64; 6],
}

fn monomials(x: f64, y: f64) -> [f64; 6] {
    [x * x, x * y, y * y, x, y, 1.0]
}

fn monomial_jets(x: &Jet, y: &Jet) -> [Jet; 6] {
    let order = x.order();
    [
        x * x,
        x * y,
        y * y,
        x.clone(),
        y.clone(),
        Jet::constant(1.0, order),
    ]
}

impl Conic {
    /// Unit-normalises the coefficient vector (sign preserved).
    pub fn new(coeffs: [f64; 6]) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidInput("conic coefficients vanish".into()));
        }
        Ok(Self {
            coeffs: coeffs.map(|c| c / norm),
        })
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        monomials(p[0], p[1])
            .iter()
            .zip(&self.coeffs)
            .map(|(m, c)| m * c)
            .sum()
    }

    pub fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        let [a, b, c, d, e, _] = self.coeffs;
        [2.0 * a * p[0] + b * p[1] + d, b * p[0] + 2.0 * c * p[1] + e]
    }

    pub fn negated(&self) -> Self {
        Self {
            coeffs: self.coeffs.map(|c| -c),
        }
    }

    pub fn classify(&self) -> ConicClass {
        let [a, b, c, d, e, f] = self.coeffs;
        let m = SMatrix::<f64, 3, 3>::new(a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f);
        if m.determinant().abs() < 1e-12 {
            return ConicClass::Degenerate;
        }
        let disc = b * b - 4.0 * a * c;
        if disc.abs() < 1e-12 {
            ConicClass::Parabola
        } else if disc < 0.0 {
            ConicClass::Ellipse
        } else {
            ConicClass::Hyperbola
        }
    }

    /// Parameter values `s ≥ 0` with `Q(o + s·(cos θ, sin θ)) = 0`.
    pub fn ray_hits(&self, o: [f64; 2], theta: f64) -> Vec<f64> {
        let (sn, cs) = theta.sin_cos();
        let [a, b, c, d, e, _] = self.coeffs;
        let qa = a * cs * cs + b * cs * sn + c * sn * sn;
        let qb = 2.0 * a * o[0] * cs + b * (o[0] * sn + o[1] * cs) + 2.0 * c * o[1] * sn + d * cs + e * sn;
        let qc = self.eval(o);
        let mut roots = Vec::new();
        if qa.abs() < 1e-14 {
            if qb.abs() > 1e-14 {
                roots.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let r = disc.sqrt();
                let q = -0.5 * (qb + qb.signum() * r);
                roots.push(q / qa);
                if q != 0.0 {
                    roots.push(qc / q);
                }
            }
        }
        roots.retain(|s| *s >= 0.0);
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// Orients `q` so that it decreases across the curve along the outward
/// normal at `t` (positive on the inner side locally).
fn orient(q: Conic, c: &SupportCurve, t: f64) -> Conic {
    let g = q.gradient(c.point(t));
    if g[0] * t.cos() + g[1] * t.sin() > 0.0 {
        q.negated()
    } else {
        q
    }
}

/// The conic with contact of order five at `t`, oriented positive on the
/// inner side of the curve.
pub fn osculating_conic(c: &SupportCurve, t: f64) -> Result<Conic> {
    let (x, y) = c.point_jets(t, 4)?;
    let m = monomial_jets(&x, &y);
    let mut a = SMatrix::<f64, 6, 6>::zeros();
    for k in 0..5 {
        for (j, mj) in m.iter().enumerate() {
            a[(k, j)] = mj.coeffs()[k];
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv = svd.singular_values;
    let mut idx: Vec<usize> = (0..6).collect();
    idx.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    // six singular values, the last one zero from the padding row
    let ratio = sv[idx[4]] / sv[idx[0]];
    if ratio < CONIC_RANK_TOL {
        return Err(Error::RankDeficient { ratio });
    }
    let row = v_t.row(idx[5]);
    let q = Conic::new([row[0], row[1], row[2], row[3], row[4], row[5]])?;
    Ok(orient(q, c, t))
}

/// Fifth Taylor coefficient of `Q_t(γ(t + δ))`, which vanishes exactly at
/// sextactic points.
pub fn sextactic_indicator(c: &SupportCurve, t: f64) -> Result<f64> {
    let q = osculating_conic(c, t)?;
    let (x, y) = c.point_jets(t, 5)?;
    Ok(monomial_jets(&x, &y)
        .iter()
        .zip(&q.coeffs)
        .map(|(m, a)| a * m.coeffs()[5])
        .sum())
}

/// `|Q_t(γ(t + Δ))|` for a sweep of steps, and the least-squares slope of
/// its log-log graph (the observed contact order).
pub fn conic_residual_slope(c: &SupportCurve, t: f64, steps: &[f64]) -> Result<f64> {
    let q = osculating_conic(c, t)?;
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .map(|&d| (d.ln(), q.eval(c.point(t + d)).abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Relative smallest singular value of the least-squares conic fit.
pub fn conic_fit_residual(c: &SupportCurve) -> f64 {
    let n = CONIC_FIT_SAMPLES;
    let pts: Vec<[f64; 2]> = crate::angle::uniform_grid(n).map(|t| c.point(t)).collect();
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    let scale = pts
        .iter()
        .map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt())
        .fold(0.0, f64::max);
    let mut a = DMatrix::zeros(n, 6);
    for (i, p) in pts.iter().enumerate() {
        let m = monomials((p[0] - cx) / scale, (p[1] - cy) / scale);
        for j in 0..6 {
            a[(i, j)] = m[j];
        }
    }
    let sv = a.singular_values();
    sv.min() / sv.max()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SextacticRecord {
    pub location: Arc,
    pub kind: CurveKind,
    pub conic: Conic,
    pub contact: Vec<ContactEntry>,
}

/// `t ↦ Q(γ(t))` as a smooth function with jets.
fn along_curve(c: &SupportCurve, q: Conic) -> impl Smooth + '_ {
    FnSmooth::new(move |t, order| {
        let (x, y) = c.point_jets(t, order)?;
        let m = monomial_jets(&x, &y);
        let mut acc = Jet::constant(0.0, order);
        for (mj, a) in m.iter().zip(&q.coeffs) {
            acc = &acc + &mj.scale(*a);
        }
        Ok(acc)
    })
    .with_max_order(c.h.max_derivative_order().saturating_sub(1))
}

/// Scale of `Q∘γ` for relative tolerances.
fn along_scale(c: &SupportCurve, q: &Conic, samples: usize) -> f64 {
    crate::angle::uniform_grid(samples)
        .map(|t| q.eval(c.point(t)).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// Classifies a conic touching the curve: inscribed when `Q∘γ ≤ 0`
/// (the curve stays outside), circumscribed when `Q∘γ ≥ 0`, clean when the
/// contact set is connected.
fn classify_conic(c: &SupportCurve, q: Conic, hint: Option<f64>, grid: &GridProfile) -> Result<(CurveKind, Vec<ContactEntry>)> {
    let g = along_curve(c, q);
    let scale = along_scale(c, &q, grid.base_samples);
    let gf = |t: f64| q.eval(c.point(t));
    let (lo, hi) = extremes(&gf, grid);
    let thr = grid.support_tol * scale;
    let inscribed = hi <= thr;
    let circumscribed = lo >= -thr;
    if !inscribed && !circumscribed {
        return Ok((FlexKind::Plain, Vec::new()));
    }
    let hints: Vec<f64> = hint.into_iter().collect();
    let contact = contact_entries(&g, CONIC_CONTACT_N, scale, grid, &hints)?;
    let kind = match (inscribed, contact.len() == 1) {
        (true, true) => FlexKind::CleanMax,
        (true, false) => FlexKind::GlobalMax,
        (false, true) => FlexKind::CleanMin,
        (false, false) => FlexKind::GlobalMin,
    };
    Ok((kind, contact))
}

/// Rejects conics by a global least-squares fit.
pub fn check_not_conic(c: &SupportCurve) -> Result<()> {
    let residual = conic_fit_residual(c);
    if residual < CONIC_FIT_TOL {
        return Err(Error::ConicDegenerate { residual });
    }
    Ok(())
}

/// Sextactic points (zeros of [`sextactic_indicator`]), each classified by
/// the position of its osculating conic relative to the curve.
pub fn sextactic_scan(c: &SupportCurve, grid: &GridProfile) -> Result<Vec<SextacticRecord>> {
    grid.validate()?;
    check_not_conic(c)?;
    let indicator = |t: f64| sextactic_indicator(c, t).unwrap_or(f64::NAN);
    let zeros = find_zeros(indicator, Parity::Periodic, grid);
    let mut out = Vec::with_capacity(zeros.len());
    for z in zeros {
        let conic = osculating_conic(c, z.location)?;
        let (kind, contact) = classify_conic(c, conic, Some(z.location), grid)?;
        out.push(SextacticRecord {
            location: Arc::point(z.location),
            kind,
            conic,
            contact,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inscribed,
    Circumscribed,
}

/// Extremal conic tangent to the curve at `p` and `q` within the pencil
/// `l_p l_q − λ m²` (`l_p`, `l_q` the tangent lines, `m` the chord): the
/// largest inscribed one takes `λ = sup f/g`, the smallest circumscribed
/// one `λ = inf f/g`, with `f = l_p l_q ∘ γ` and `g = m² ∘ γ`.
pub fn doubly_tangent_conic(c: &SupportCurve, p: f64, q: f64, side: Side, grid: &GridProfile) -> Result<Conic> {
    if circular_distance(p, q) < 1e-9 {
        return Err(Error::CoincidentPoints);
    }
    let hp = c.h.value(p);
    let hq = c.h.value(q);
    let np = [p.cos(), p.sin()];
    let nq = [q.cos(), q.sin()];
    let o = c.origin;
    // l(x) = n·(x − o) − h
    let lp = [np[0], np[1], -hp - np[0] * o[0] - np[1] * o[1]];
    let lq = [nq[0], nq[1], -hq - nq[0] * o[0] - nq[1] * o[1]];
    let a = c.point(p);
    let b = c.point(q);
    // m(x) = (b − a) × (x − a)
    let d = [b[0] - a[0], b[1] - a[1]];
    let m = [-d[1], d[0], d[1] * a[0] - d[0] * a[1]];

    let line_jet = |l: [f64; 3], x: &Jet, y: &Jet| (&x.scale(l[0]) + &y.scale(l[1])).add_scalar(l[2]);
    let max_order = c.h.max_derivative_order().saturating_sub(1);
    let f = FnSmooth::new(|t, order| {
        let (x, y) = c.point_jets(t, order)?;
        Ok(&line_jet(lp, &x, &y) * &line_jet(lq, &x, &y))
    })
    .with_max_order(max_order);
    let g = FnSmooth::new(|t, order| {
        let (x, y) = c.point_jets(t, order)?;
        Ok(line_jet(m, &x, &y).square())
    })
    .with_max_order(max_order);
    let neg_f = FnSmooth::new(|t, order| Ok(f.jet(t, order)?.scale(-1.0))).with_max_order(max_order);

    let contacts = [(crate::angle::wrap(p), 2), (crate::angle::wrap(q), 2)];
    let lambda = match side {
        Side::Inscribed => sup_of_ratio(&f, &g, &contacts, grid)?.value,
        Side::Circumscribed => -sup_of_ratio(&neg_f, &g, &contacts, grid)?.value,
    };
    // expand l_p l_q − λ m² into monomials
    let prod = |u: [f64; 3], v: [f64; 3]| {
        [
            u[0] * v[0],
            u[0] * v[1] + u[1] * v[0],
            u[1] * v[1],
            u[0] * v[2] + u[2] * v[0],
            u[1] * v[2] + u[2] * v[1],
            u[2] * v[2],
        ]
    };
    let pq = prod(lp, lq);
    let mm = prod(m, m);
    let mut coeffs = [0.0; 6];
    for i in 0..6 {
        coeffs[i] = pq[i] - lambda * mm[i];
    }
    let conic = Conic::new(coeffs)?;

    // relative to the pencil terms, so a curve that is itself a conic
    // (where Q∘γ is rounding noise) passes
    let coeff_norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let scale = crate::angle::uniform_grid(grid.base_samples)
        .map(|t| f.value(t).abs() + lambda.abs() * g.value(t))
        .fold(0.0, f64::max)
        / coeff_norm;
    let gf = |t: f64| conic.eval(c.point(t));
    let (lo, hi) = extremes(&gf, grid);
    let thr = grid.support_tol * scale;
    let ok = match side {
        Side::Inscribed => hi <= thr,
        Side::Circumscribed => lo >= -thr,
    };
    if !ok {
        return Err(Error::NotOneSided {
            excursion: (-lo).min(hi) / scale,
        });
    }
    Ok(conic)
}

/// Contact entries of a conic along the curve (`∞` beyond order six).
pub fn conic_contact(c: &SupportCurve, q: Conic, grid: &GridProfile) -> Result<Vec<ContactEntry>> {
    let scale = along_scale(c, &q, grid.base_samples);
    contact_entries(&along_curve(c, q), CONIC_CONTACT_N, scale, grid, &[])
}

/// Least-squares line fit helper for callers comparing conics up to scale:
/// the cosine of the angle between two coefficient vectors.
pub fn conic_alignment(a: &Conic, b: &Conic) -> f64 {
    let va = SVector::<f64, 6>::from_row_slice(&a.coeffs);
    let vb = SVector::<f64, 6>::from_row_slice(&b.coeffs);
    va.dot(&vb)
}
