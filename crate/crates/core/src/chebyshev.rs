//! Trigonometric Chebyshev spaces.
//!
//! A space of odd order `2k+1` is spanned by `1, cos jt, sin jt` (`j ≤ k`) and
//! consists of `2π`-periodic functions. A space of even order `2k` is spanned
//! by `cos((2j−1)t/2), sin((2j−1)t/2)` (`j ≤ k`) and consists of
//! `2π`-antiperiodic functions. In both cases a nonzero member has at most
//! `order − 1` zeros on `[0, 2π)` counted with multiplicity, which makes the
//! confluent Hermite problem uniquely solvable for any node pattern.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::funcmodel::sign_change_roots;
use crate::jet::Jet;
use crate::smooth::{Parity, Smooth};

/// Threshold on the singular-value ratio of the scaled confluent system.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Cos,
    Sin,
}

/// Order (= dimension) of a trigonometric Chebyshev space; the parity
/// follows from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceDescriptor {
    order: usize,
}

impl SpaceDescriptor {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("space order must be positive".into()));
        }
        Ok(Self { order })
    }

    /// `A_{2n+1}`: trigonometric polynomials of degree at most `n`.
    pub fn trigonometric(degree: usize) -> Self {
        Self {
            order: 2 * degree + 1,
        }
    }

    /// `A_{2k}`: half-integer frequencies `1/2, 3/2, …, (2k−1)/2`.
    pub fn antiperiodic(pairs: usize) -> Self {
        assert!(pairs > 0, "antiperiodic space needs at least one frequency");
        Self { order: 2 * pairs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.order
    }

    pub fn parity(&self) -> Parity {
        if self.order % 2 == 1 {
            Parity::Periodic
        } else {
            Parity::Antiperiodic
        }
    }

    /// Degree `n` of a periodic space of order `2n+1`.
    pub fn degree(&self) -> Option<usize> {
        (self.order % 2 == 1).then_some(self.order / 2)
    }

    pub fn basis(&self, i: usize) -> (f64, BasisKind) {
        assert!(i < self.order, "basis index out of range");
        match self.parity() {
            Parity::Periodic => {
                if i == 0 {
                    (0.0, BasisKind::Cos)
                } else {
                    let j = (i + 1) / 2;
                    let kind = if i % 2 == 1 {
                        BasisKind::Cos
                    } else {
                        BasisKind::Sin
                    };
                    (j as f64, kind)
                }
            }
            Parity::Antiperiodic => {
                let j = i / 2 + 1;
                let kind = if i % 2 == 0 {
                    BasisKind::Cos
                } else {
                    BasisKind::Sin
                };
                ((2 * j - 1) as f64 / 2.0, kind)
            }
        }
    }

    pub fn max_frequency(&self) -> f64 {
        self.basis(self.order - 1).0
    }

    /// `k`-th derivative of basis function `i` at `t`.
    pub fn basis_derivative(&self, i: usize, t: f64, k: usize) -> f64 {
        let (w, kind) = self.basis(i);
        if w == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        let (s, c) = (w * t).sin_cos();
        let p = w.powi(k as i32);
        let v = match (kind, k % 4) {
            (BasisKind::Cos, 0) => c,
            (BasisKind::Cos, 1) => -s,
            (BasisKind::Cos, 2) => -c,
            (BasisKind::Cos, _) => s,
            (BasisKind::Sin, 0) => s,
            (BasisKind::Sin, 1) => c,
            (BasisKind::Sin, 2) => -s,
            (BasisKind::Sin, _) => -c,
        };
        p * v
    }
}

/// A member of a trigonometric Chebyshev space, stored as coefficients in
/// the basis order of [`SpaceDescriptor::basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    space: SpaceDescriptor,
    coeffs: Vec<f64>,
}

impl TrigPoly {
    pub fn new(space: SpaceDescriptor, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.order() {
            return Err(Error::DimensionMismatch {
                expected: space.order(),
                got: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: SpaceDescriptor) -> Self {
        Self {
            space,
            coeffs: vec![0.0; space.order()],
        }
    }

    pub fn constant(space: SpaceDescriptor, c: f64) -> Self {
        assert_eq!(space.parity(), Parity::Periodic);
        let mut p = Self::zero(space);
        p.coeffs[0] = c;
        p
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Exact `order`-th derivative at `t`.
    pub fn eval(&self, t: f64, order: usize) -> f64 {
        let mut acc = 0.0;
        let mut i = 0;
        while i < self.coeffs.len() {
            let (w, _) = self.space.basis(i);
            if w == 0.0 {
                if order == 0 {
                    acc += self.coeffs[i];
                }
                i += 1;
                continue;
            }
            let a = self.coeffs[i];
            let b = self.coeffs[i + 1];
            let (s, c) = (w * t).sin_cos();
            let (cs, ss) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += w.powi(order as i32) * (a * cs + b * ss);
            i += 2;
        }
        acc
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        assert_eq!(self.space, other.space);
        TrigPoly {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> TrigPoly {
        TrigPoly {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Embeds into a larger space of the same parity (zero-padding).
    pub fn embed(&self, space: SpaceDescriptor) -> Result<TrigPoly> {
        if space.parity() != self.space.parity() || space.order() < self.space.order() {
            return Err(Error::DimensionMismatch {
                expected: self.space.order(),
                got: space.order(),
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(space.order(), 0.0);
        Ok(TrigPoly { space, coeffs })
    }

    /// Maximum coefficient distance to another polynomial of the same space.
    pub fn distance(&self, other: &TrigPoly) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Smooth for TrigPoly {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        let derivs: Vec<f64> = (0..=order).map(|k| self.eval(t, k)).collect();
        Ok(Jet::from_derivatives(&derivs))
    }

    fn value(&self, t: f64) -> f64 {
        self.eval(t, 0)
    }

    fn parity(&self) -> Parity {
        self.space.parity()
    }
}

/// Confluent Hermite data: for each node, prescribed derivatives of orders
/// `0..μ` concatenated in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteData {
    nodes: Vec<(f64, usize)>,
    values: Vec<f64>,
}

impl HermiteData {
    pub fn new(nodes: Vec<(f64, usize)>, values: Vec<f64>) -> Result<Self> {
        let total: usize = nodes.iter().map(|(_, m)| *m).sum();
        if total != values.len() {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: values.len(),
            });
        }
        if nodes.iter().any(|(_, m)| *m == 0) {
            return Err(Error::InvalidInput("node multiplicity must be at least 1".into()));
        }
        Ok(Self { nodes, values })
    }

    /// Samples `f` at the given node pattern.
    pub fn sample<F: Smooth + ?Sized>(f: &F, nodes: Vec<(f64, usize)>) -> Result<Self> {
        let mut values = Vec::new();
        for &(t, m) in &nodes {
            values.extend(f.derivatives(t, m - 1)?);
        }
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[(f64, usize)] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_multiplicity(&self) -> usize {
        self.nodes.iter().map(|(_, m)| *m).sum()
    }
}

/// Row-scaled confluent system for a node pattern.
fn confluent_matrix(space: SpaceDescriptor, nodes: &[(f64, usize)]) -> (DMatrix<f64>, Vec<f64>) {
    let n = space.order();
    let w = space.max_frequency().max(1.0);
    let mut a = DMatrix::zeros(n, n);
    let mut row_scale = Vec::with_capacity(n);
    let mut r = 0;
    for &(t, m) in nodes {
        for k in 0..m {
            let s = 1.0 / w.powi(k as i32);
            for i in 0..n {
                a[(r, i)] = s * space.basis_derivative(i, t, k);
            }
            row_scale.push(s);
            r += 1;
        }
    }
    (a, row_scale)
}

fn check_distinct(space: SpaceDescriptor, nodes: &[(f64, usize)]) -> Result<()> {
    let period = match space.parity() {
        Parity::Periodic => std::f64::consts::TAU,
        Parity::Antiperiodic => std::f64::consts::TAU,
    };
    for (i, (a, _)) in nodes.iter().enumerate() {
        for (b, _) in &nodes[i + 1..] {
            let d = (a - b).rem_euclid(period);
            if d < 1e-14 || period - d < 1e-14 {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
        }
    }
    Ok(())
}

/// Solves several right-hand sides against one confluent node pattern.
/// Iterative refinement steps with a compensated residual.
const REFINE_STEPS: usize = 2;

/// `b − A x` with each dot product accumulated in double-double.
fn compensated_residual(a: &DMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        b.len(),
        (0..b.len()).map(|i| {
            let (mut hi, mut lo) = (b[i], 0.0);
            for j in 0..x.len() {
                let p = -a[(i, j)] * x[j];
                let pe = (-a[(i, j)]).mul_add(x[j], -p);
                let s = hi + p;
                let bb = s - hi;
                let se = (hi - (s - bb)) + (p - bb);
                hi = s;
                lo += se + pe;
            }
            hi + lo
        }),
    )
}

pub(crate) fn hermite_solve_many(
    space: SpaceDescriptor,
    nodes: &[(f64, usize)],
    rhs: &[Vec<f64>],
) -> Result<Vec<TrigPoly>> {
    let n = space.order();
    let total: usize = nodes.iter().map(|(_, m)| *m).sum();
    if total != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: total,
        });
    }
    check_distinct(space, nodes)?;
    let (a, row_scale) = confluent_matrix(space, nodes);

    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned { condition });
    }

    let qr = a.clone().col_piv_qr();
    let a_norm = a.norm();
    let mut out = Vec::with_capacity(rhs.len());
    for values in rhs {
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        let b = DVector::from_iterator(n, values.iter().zip(&row_scale).map(|(v, s)| v * s));
        let mut x = qr
            .solve(&b)
            .ok_or(Error::IllConditioned { condition })?;
        for _ in 0..REFINE_STEPS {
            let r = compensated_residual(&a, &x, &b);
            match qr.solve(&r) {
                Some(dx) => x += dx,
                None => break,
            }
        }
        let residual = (&a * &x - &b).norm();
        if residual > 1e-9 * (a_norm * x.norm() + b.norm()) {
            return Err(Error::IllConditioned { condition });
        }
        out.push(TrigPoly {
            space,
            coeffs: x.iter().copied().collect(),
        });
    }
    Ok(out)
}

/// The unique member of `space` with the prescribed derivatives.
pub fn hermite_interpolate(space: SpaceDescriptor, data: &HermiteData) -> Result<TrigPoly> {
    let mut polys = hermite_solve_many(space, &data.nodes, std::slice::from_ref(&data.values))?;
    Ok(polys.remove(0))
}

/// Zeros of `p` on `[0, 2π)` with multiplicities.
///
/// A zero of multiplicity `m` is a simple root of `p^(m−1)` at which
/// `p, …, p^(m−2)` vanish, so every derivative order is scanned for sign
/// changes and candidates are kept when the lower derivatives are below
/// `tol` times their grid scale. The multiplicity is the first derivative
/// order exceeding that threshold.
pub fn count_zeros(p: &TrigPoly, tol: f64) -> Result<Vec<(f64, usize)>> {
    if p.coeff_norm() <= tol {
        return Err(Error::ZeroPolynomial);
    }
    let order = p.space.order();
    let n_grid = (64 * order).max(256);
    let grid: Vec<f64> = crate::angle::uniform_grid(n_grid).collect();
    let scales: Vec<f64> = (0..=order)
        .map(|j| grid.iter().map(|&t| p.eval(t, j).abs()).fold(0.0, f64::max))
        .collect();
    let small = |t: f64, j: usize| p.eval(t, j).abs() <= tol * scales[j];

    let mut candidates: Vec<(f64, usize)> = Vec::new();
    for d in 0..order {
        let f = |t: f64| p.eval(t, d);
        for r in sign_change_roots(&f, p.parity(), n_grid, 60) {
            if (0..d).all(|j| small(r, j)) {
                candidates.push((r, d));
            }
        }
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut clusters: Vec<Vec<(f64, usize)>> = Vec::new();
    for c in candidates {
        match clusters.last_mut() {
            Some(cl) if crate::angle::circular_distance(cl[0].0, c.0) < 1e-5 => cl.push(c),
            _ => clusters.push(vec![c]),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0][0].0;
        let last = clusters.last().unwrap()[0].0;
        if crate::angle::circular_distance(first, last) < 1e-5 {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }

    let mut zeros: Vec<(f64, usize)> = clusters
        .into_iter()
        .map(|cl| {
            let &(loc, _) = cl.iter().max_by_key(|c| c.1).unwrap();
            let mult = (1..=order).find(|&j| !small(loc, j)).unwrap_or(order);
            (crate::angle::wrap(loc), mult)
        })
        .collect();
    zeros.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(zeros)
}

/// The constant-coefficient disconjugate operator whose kernel is a
/// trigonometric Chebyshev space.
///
/// Odd order `2k+1`: `D(D²+1²)(D²+2²)⋯(D²+k²)`.
/// Even order `2k`: `(D²+(1/2)²)(D²+(3/2)²)⋯(D²+((2k−1)/2)²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisconjugateOperator {
    space: SpaceDescriptor,
    /// Coefficient of `D^i` at index `i`; the last entry is 1.
    coeffs: Vec<f64>,
}

impl DisconjugateOperator {
    pub fn for_space(space: SpaceDescriptor) -> Self {
        let mut coeffs = vec![1.0];
        if space.parity() == Parity::Periodic {
            coeffs.insert(0, 0.0);
        }
        for w in Self::frequencies_of(space) {
            // multiply by D² + w²
            let mut next = vec![0.0; coeffs.len() + 2];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += w * w * c;
                next[i + 2] += c;
            }
            coeffs = next;
        }
        Self { space, coeffs }
    }

    fn frequencies_of(space: SpaceDescriptor) -> Vec<f64> {
        match space.parity() {
            Parity::Periodic => (1..=space.order() / 2).map(|k| k as f64).collect(),
            Parity::Antiperiodic => (1..=space.order() / 2)
                .map(|j| (2 * j - 1) as f64 / 2.0)
                .collect(),
        }
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Frequencies `w` of the quadratic factors `D² + w²`.
    pub fn factor_frequencies(&self) -> Vec<f64> {
        Self::frequencies_of(self.space)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Multiplier of the operator on the modes `cos wt`, `sin wt`:
    /// `L e^{iwt} = symbol(w) e^{iwt}`.
    pub fn apply_to_derivatives(&self, derivs: &[f64]) -> f64 {
        self.coeffs.iter().zip(derivs).map(|(c, d)| c * d).sum()
    }

    /// `(L u)(t)`.
    pub fn apply<F: Smooth + ?Sized>(&self, u: &F, t: f64) -> Result<f64> {
        let d = u.derivatives(t, self.order())?;
        Ok(self.apply_to_derivatives(&d))
    }

    /// Sum of the magnitudes of the individual terms of `L u` at `t`; the
    /// natural scale against which cancellation in `L u` is measured.
    pub fn term_magnitude<F: Smooth + ?Sized>(&self, u: &F, t: f64) -> Result<f64> {
        let d = u.derivatives(t, self.order())?;
        Ok(self.coeffs.iter().zip(&d).map(|(c, d)| (c * d).abs()).sum())
    }
}

/// `(L u)(t)` for the operator `op`.
pub fn apply_disconjugate<F: Smooth + ?Sized>(
    op: &DisconjugateOperator,
    u: &F,
    t: f64,
) -> Result<f64> {
    op.apply(u, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn a3() -> SpaceDescriptor {
        SpaceDescriptor::trigonometric(1)
    }

    #[test]
    fn basis_layout() {
        let s = SpaceDescriptor::trigonometric(2);
        assert_eq!(s.basis(0), (0.0, BasisKind::Cos));
        assert_eq!(s.basis(1), (1.0, BasisKind::Cos));
        assert_eq!(s.basis(2), (1.0, BasisKind::Sin));
        assert_eq!(s.basis(4), (2.0, BasisKind::Sin));
        let a = SpaceDescriptor::antiperiodic(2);
        assert_eq!(a.basis(0), (0.5, BasisKind::Cos));
        assert_eq!(a.basis(3), (1.5, BasisKind::Sin));
        assert_eq!(a.parity(), Parity::Antiperiodic);
    }

    #[test]
    fn eval_examples() {
        let c = TrigPoly::constant(a3(), 3.5);
        assert_eq!(c.eval(1.234, 0), 3.5);
        assert_eq!(c.eval(1.234, 3), 0.0);
        let p = TrigPoly::new(a3(), vec![0.0, 0.0, 2.0]).unwrap();
        assert!((p.eval(FRAC_PI_2, 0) - 2.0).abs() < 1e-15);
        let q = TrigPoly::new(SpaceDescriptor::trigonometric(2), vec![0.0, 0.0, 0.0, 1.0, 0.0])
            .unwrap();
        assert!((q.eval(0.0, 2) + 4.0).abs() < 1e-15);
    }

    #[test]
    fn antiperiodic_sign_flip() {
        let p = TrigPoly::new(SpaceDescriptor::antiperiodic(2), vec![0.3, -1.1, 0.7, 0.2]).unwrap();
        for k in 0..32 {
            let t = 0.2 * k as f64;
            assert!((p.eval(t + 2.0 * PI, 0) + p.eval(t, 0)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let p = TrigPoly::new(SpaceDescriptor::trigonometric(3), vec![0.2, 1.0, -0.5, 0.3, 0.8, -0.4, 0.6])
            .unwrap();
        let t = 0.9;
        let exact = p.eval(t, 1);
        let err = |h: f64| ((p.eval(t + h, 0) - p.eval(t - h, 0)) / (2.0 * h) - exact).abs();
        let hs = [1e-1, 5e-2, 2.5e-2, 1.25e-2];
        for w in hs.windows(2) {
            let slope = (err(w[0]) / err(w[1])).ln() / (w[0] / w[1]).ln();
            assert!(slope >= 1.9, "observed order {slope}");
        }
    }

    #[test]
    fn hermite_constant_data() {
        let data = HermiteData::new(vec![(0.0, 3)], vec![2.5, 0.0, 0.0]).unwrap();
        let p = hermite_interpolate(a3(), &data).unwrap();
        assert!((p.coeffs()[0] - 2.5).abs() < 1e-14);
        assert!(p.coeffs()[1].abs() < 1e-14 && p.coeffs()[2].abs() < 1e-14);
    }

    #[test]
    fn hermite_two_sin_t() {
        // a0 + a1 = 0, b1 = 2, −a1 = 0
        let data = HermiteData::new(vec![(0.0, 3)], vec![0.0, 2.0, 0.0]).unwrap();
        let p = hermite_interpolate(a3(), &data).unwrap();
        let expect = [0.0, 0.0, 2.0];
        for (a, b) in p.coeffs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_rejects_wrong_count() {
        let data = HermiteData::new(vec![(0.0, 2)], vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            hermite_interpolate(a3(), &data),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermite_clustered_nodes_are_ill_conditioned() {
        let s = SpaceDescriptor::trigonometric(4);
        let nodes: Vec<(f64, usize)> = (0..9).map(|i| (1.0 + 1e-4 * i as f64, 1)).collect();
        let data = HermiteData::new(nodes, vec![0.0; 9]).unwrap();
        assert!(matches!(
            hermite_interpolate(s, &data),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn zeros_of_sin() {
        let p = TrigPoly::new(a3(), vec![0.0, 0.0, 1.0]).unwrap();
        let z = count_zeros(&p, 1e-9).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z[0].0.abs() < 1e-12 && z[0].1 == 1);
        assert!((z[1].0 - PI).abs() < 1e-12 && z[1].1 == 1);
    }

    #[test]
    fn double_zero_of_one_minus_cos() {
        let p = TrigPoly::new(a3(), vec![1.0, -1.0, 0.0]).unwrap();
        let z = count_zeros(&p, 1e-9).unwrap();
        assert_eq!(z, vec![(0.0, 2)]);
    }

    #[test]
    fn zeros_of_cos_two_t() {
        let p = TrigPoly::new(SpaceDescriptor::trigonometric(2), vec![0.0, 0.0, 0.0, 1.0, 0.0])
            .unwrap();
        let z = count_zeros(&p, 1e-9).unwrap();
        assert_eq!(z.len(), 4);
        for (k, (t, m)) in z.iter().enumerate() {
            assert_eq!(*m, 1);
            assert!((t - (FRAC_PI_4 + k as f64 * FRAC_PI_2)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(count_zeros(&TrigPoly::zero(a3()), 1e-9), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn operator_coefficients() {
        // D(D²+1) = D³ + D
        let l3 = DisconjugateOperator::for_space(a3());
        assert_eq!(l3.coeffs(), &[0.0, 1.0, 0.0, 1.0]);
        // (D²+1/4)
        let l2 = DisconjugateOperator::for_space(SpaceDescriptor::antiperiodic(1));
        assert_eq!(l2.coeffs(), &[0.25, 0.0, 1.0]);
        // D(D²+1)(D²+4) = D⁵ + 5D³ + 4D
        let l5 = DisconjugateOperator::for_space(SpaceDescriptor::trigonometric(2));
        assert_eq!(l5.coeffs(), &[0.0, 4.0, 0.0, 5.0, 0.0, 1.0]);
    }

    #[test]
    fn operator_kernel() {
        for space in [
            SpaceDescriptor::trigonometric(1),
            SpaceDescriptor::trigonometric(3),
            SpaceDescriptor::antiperiodic(1),
            SpaceDescriptor::antiperiodic(3),
        ] {
            let op = DisconjugateOperator::for_space(space);
            for i in 0..space.order() {
                let mut c = vec![0.0; space.order()];
                c[i] = 1.0;
                let phi = TrigPoly::new(space, c).unwrap();
                for k in 0..64 {
                    let t = k as f64 * std::f64::consts::TAU / 64.0;
                    let scale = op.term_magnitude(&phi, t).unwrap().max(1.0);
                    assert!(op.apply(&phi, t).unwrap().abs() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn operator_on_sin_two_t() {
        // (D³ + D) sin 2t = (−8 + 2) cos 2t
        let u = TrigPoly::new(SpaceDescriptor::trigonometric(2), vec![0.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let op = DisconjugateOperator::for_space(a3());
        assert!((op.apply(&u, 0.0).unwrap() + 6.0).abs() < 1e-13);
    }

    #[test]
    fn operator_on_sharp_modes() {
        // mode-by-mode: each factor D² + k² multiplies sin(mt) by k² − m²,
        // and the leading D turns sin(mt) into m cos(mt)
        for n in 1..=4usize {
            let m = (n + 1) as f64;
            let space = SpaceDescriptor::trigonometric(n + 1);
            let mut c = vec![0.0; space.order()];
            c[2 * (n + 1)] = 1.0;
            let u = TrigPoly::new(space, c).unwrap();
            let op = DisconjugateOperator::for_space(SpaceDescriptor::trigonometric(n));
            let factor: f64 = (1..=n).map(|k| (k * k) as f64 - m * m).product::<f64>() * m;
            for t in [0.0, 0.3, 1.7, 4.0] {
                let got = op.apply(&u, t).unwrap();
                let expect = factor * (m * t).cos();
                assert!((got - expect).abs() <= 1e-10 * factor.abs(), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn operator_on_antiperiodic_mode() {
        // (D² + 1/4) sin(3t/2) = (−9/4 + 1/4) sin(3t/2)
        let u = TrigPoly::new(SpaceDescriptor::antiperiodic(2), vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let op = DisconjugateOperator::for_space(SpaceDescriptor::antiperiodic(1));
        for t in [0.1, 1.0, 2.5] {
            assert!((op.apply(&u, t).unwrap() + 2.0 * (1.5 * t).sin()).abs() < 1e-13);
        }
    }
}
