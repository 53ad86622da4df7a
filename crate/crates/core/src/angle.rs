//! Angle bookkeeping on S¹ = ℝ / 2πℤ.

use std::f64::consts::TAU;

/// Reduces `t` to `[0, 2π)`.
pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest distance between two angles.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

/// Counter-clockwise distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_distance(from: f64, to: f64) -> f64 {
    wrap(to - from)
}

/// Uniform grid `t_i = 2πi/n`, `i = 0..n`.
pub fn uniform_grid(n: usize) -> impl Iterator<Item = f64> + Clone {
    let h = TAU / n as f64;
    (0..n).map(move |i| i as f64 * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_handles_negative_and_large() {
        assert!((wrap(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!((wrap(5.0 * PI) - PI).abs() < 1e-12);
        assert!(wrap(-1e-18) < TAU);
    }

    #[test]
    fn distances() {
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((ccw_distance(TAU - 0.1, 0.1) - 0.2).abs() < 1e-12);
    }
}
