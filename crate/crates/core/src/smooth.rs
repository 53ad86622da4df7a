//! The value-and-derivative oracle shared by every analysed function.

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Behaviour under `t ↦ t + 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `f(t + 2π) = f(t)`
    Periodic,
    /// `f(t + 2π) = −f(t)`
    Antiperiodic,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Periodic => 1.0,
            Parity::Antiperiodic => -1.0,
        }
    }
}

/// A smooth function on the circle (or its antiperiodic double cover) that
/// can report exact Taylor coefficients at any point.
pub trait Smooth: Sync {
    /// Normalized Taylor coefficients `f^(k)(t)/k!`, `k = 0..=order`.
    fn jet(&self, t: f64, order: usize) -> Result<Jet>;

    fn value(&self, t: f64) -> f64 {
        self.jet(t, 0).map(|j| j.value()).unwrap_or(f64::NAN)
    }

    fn parity(&self) -> Parity {
        Parity::Periodic
    }

    fn max_derivative_order(&self) -> usize {
        usize::MAX
    }

    /// Plain derivatives `f(t), f'(t), …, f^(order)(t)`.
    fn derivatives(&self, t: f64, order: usize) -> Result<Vec<f64>> {
        let available = self.max_derivative_order();
        if order > available {
            return Err(Error::DerivativeUnavailable {
                requested: order,
                available,
            });
        }
        Ok(self.jet(t, order)?.derivatives())
    }
}

impl<T: Smooth + ?Sized> Smooth for &T {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        (**self).jet(t, order)
    }
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }
    fn parity(&self) -> Parity {
        (**self).parity()
    }
    fn max_derivative_order(&self) -> usize {
        (**self).max_derivative_order()
    }
}

/// `a − b`.
pub struct Difference<A, B>(pub A, pub B);

impl<A: Smooth, B: Smooth> Smooth for Difference<A, B> {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        Ok(&self.0.jet(t, order)? - &self.1.jet(t, order)?)
    }
    fn value(&self, t: f64) -> f64 {
        self.0.value(t) - self.1.value(t)
    }
    fn parity(&self) -> Parity {
        self.0.parity()
    }
    fn max_derivative_order(&self) -> usize {
        self.0.max_derivative_order().min(self.1.max_derivative_order())
    }
}

/// `k · f`.
pub struct Scaled<F>(pub f64, pub F);

impl<F: Smooth> Smooth for Scaled<F> {
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        Ok(self.1.jet(t, order)?.scale(self.0))
    }
    fn value(&self, t: f64) -> f64 {
        self.0 * self.1.value(t)
    }
    fn parity(&self) -> Parity {
        self.1.parity()
    }
    fn max_derivative_order(&self) -> usize {
        self.1.max_derivative_order()
    }
}

/// Adapter for closures producing jets.
pub struct FnSmooth<F> {
    f: F,
    parity: Parity,
    max_order: usize,
}

impl<F> FnSmooth<F>
where
    F: Fn(f64, usize) -> Result<Jet> + Sync,
{
    pub fn new(f: F) -> Self {
        Self {
            f,
            parity: Parity::Periodic,
            max_order: usize::MAX,
        }
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }
}

impl<F> Smooth for FnSmooth<F>
where
    F: Fn(f64, usize) -> Result<Jet> + Sync,
{
    fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        (self.f)(t, order)
    }
    fn parity(&self) -> Parity {
        self.parity
    }
    fn max_derivative_order(&self) -> usize {
        self.max_order
    }
}
