//! Truncated Taylor series ("jets") with forward-mode arithmetic.
//!
//! A jet of order `K` at a point `t` stores the normalized Taylor
//! coefficients `f^(k)(t) / k!` for `k = 0..=K`. Products, quotients and the
//! elementary functions below propagate all coefficients exactly (up to
//! rounding), so any closed-form expression built from them yields analytic
//! derivatives of arbitrary order without finite differencing.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity map `s ↦ s` expanded at `s = t`.
    pub fn variable(t: f64, order: usize) -> Self {
        Self::affine(t, 1.0, order)
    }

    /// `s ↦ offset + slope·(s − t)` expanded at `s = t`.
    pub fn affine(offset: f64, slope: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = offset;
        if order >= 1 {
            coeffs[1] = slope;
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    /// Builds a jet from plain derivatives `f, f', f'', …`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Plain derivatives `f^(k)(t)`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    /// Evaluates the truncated series at offset `delta` from the base point.
    pub fn eval(&self, delta: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * delta + c)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Jet of the derivative; one order shorter.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Jet::constant(0.0, 0);
        }
        Self {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| (k + 1) as f64 * c)
                .collect(),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add_scalar(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0, self.order()).div(self)
    }

    pub fn div(&self, rhs: &Jet) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let b0 = rhs.coeffs[0];
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Self { coeffs: q }
    }

    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut e = vec![0.0; n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { coeffs: e }
    }

    /// Returns `(sin f, cos f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        let (s0, c0) = self.coeffs[0].sin_cos();
        s[0] = s0;
        c[0] = c0;
        for k in 1..n {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.coeffs[j];
                acc_s += ja * c[k - j];
                acc_c -= ja * s[k - j];
            }
            s[k] = acc_s / k as f64;
            c[k] = acc_c / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sqrt(&self) -> Self {
        let n = self.coeffs.len();
        let mut r = vec![0.0; n];
        r[0] = self.coeffs[0].sqrt();
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Self { coeffs: r }
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn exp_of_variable_has_factorial_coefficients() {
        let e = Jet::variable(0.0, 6).exp();
        let mut fact = 1.0;
        for (k, c) in e.coeffs().iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!(close(*c, 1.0 / fact, 1e-15));
        }
    }

    #[test]
    fn sin_cos_derivatives_cycle() {
        let t = 0.7;
        let (s, c) = Jet::variable(t, 8).sin_cos();
        let ds = s.derivatives();
        let dc = c.derivatives();
        for k in 0..=8 {
            let expect_s = (t + k as f64 * std::f64::consts::FRAC_PI_2).sin();
            let expect_c = (t + k as f64 * std::f64::consts::FRAC_PI_2).cos();
            assert!(close(ds[k], expect_s, 1e-13), "sin^({k})");
            assert!(close(dc[k], expect_c, 1e-13), "cos^({k})");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Jet::variable(2.3, 10);
        let f = (&x * &x).add_scalar(1.0);
        let r = f.sqrt();
        let back = &r * &r;
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    #[test]
    fn quotient_inverts_product() {
        let x = Jet::variable(0.4, 9);
        let (s, c) = x.sin_cos();
        let q = (&s * &c).div(&c);
        for (a, b) in q.coeffs().iter().zip(s.coeffs()) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let (s, c) = Jet::variable(0.3, 6).sin_cos();
        let ds = s.derivative();
        assert_eq!(ds.order(), 5);
        for (a, b) in ds.coeffs().iter().zip(c.coeffs()) {
            assert!(close(*a, *b, 1e-14));
        }
    }

    #[test]
    fn eval_matches_function_for_small_offset() {
        let t = 1.1;
        let e = Jet::variable(t, 20).exp();
        let d = 0.05;
        assert!(close(e.eval(d), (t + d).exp(), 1e-14));
    }
}
