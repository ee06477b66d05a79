//! Not-a-knot cubic spline through R^4 samples.

use crate::curve::fd::{default_step, fd_derivative};
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<Quaternion>,
    /// Second derivatives at the knots.
    second: Vec<Quaternion>,
    max_spacing: f64,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<Quaternion>) -> Result<Self> {
        let n = knots.len();
        if n != values.len() {
            return Err(Error::SpecInvalid(format!("{} parameters but {} points", n, values.len())));
        }
        if n < 4 {
            return Err(Error::SpecInvalid("a not-a-knot spline needs at least 4 samples".into()));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::SpecInvalid("sample parameters must be strictly increasing".into()));
        }
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<Quaternion> = values.windows(2).zip(&h).map(|(y, hi)| (y[1] - y[0]) / *hi).collect();

        // Tridiagonal system in M_1..M_{n-2}; M_0 and M_{n-1} are eliminated by
        // the not-a-knot conditions (continuous third derivative at knots 1 and n-2).
        let m = n - 2;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![Quaternion::ZERO; m];
        for r in 0..m {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = (slope[i] - slope[i - 1]) * 6.0;
        }
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        sup[0] -= h0 * h0 / h1;
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[m - 1] += hb * (ha + hb) / ha;
        sub[m - 1] -= hb * hb / ha;

        let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        let mut second = Vec::with_capacity(n);
        second.push((inner[0] * (h0 + h1) - inner[1] * h0) / h1);
        second.extend_from_slice(&inner);
        second.push((inner[m - 1] * (ha + hb) - inner[m - 2] * hb) / ha);

        let max_spacing = h.iter().cloned().fold(0.0, f64::max);
        Ok(CubicSpline { knots, values, second, max_spacing })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn max_spacing(&self) -> f64 {
        self.max_spacing
    }

    fn interval(&self, s: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= s);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Piecewise-cubic derivatives of order 0..=3.
    fn piecewise(&self, s: f64, order: usize) -> Quaternion {
        let i = self.interval(s);
        let h = self.knots[i + 1] - self.knots[i];
        let t = s - self.knots[i];
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let slope = (self.values[i + 1] - self.values[i]) / h;
        let b = slope - (m0 * 2.0 + m1) * (h / 6.0);
        let jerk = (m1 - m0) / h;
        match order {
            0 => self.values[i] + b * t + m0 * (0.5 * t * t) + jerk * (t * t * t / 6.0),
            1 => b + m0 * t + jerk * (0.5 * t * t),
            2 => m0 + jerk * t,
            _ => jerk,
        }
    }

    /// Derivative of the given order. Orders 4 and 5 are finite differences of
    /// the (piecewise linear) second derivative and are only rough estimates.
    pub fn eval(&self, s: f64, order: usize) -> Result<Quaternion> {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (hi - lo);
        if s < lo - slack || s > hi + slack {
            return Err(Error::DomainExceeded { s, order });
        }
        let s = s.clamp(lo, hi);
        if order <= 3 {
            return Ok(self.piecewise(s, order));
        }
        if order > 5 {
            return Err(Error::SpecInvalid(format!("derivative order {order} exceeds 5")));
        }
        let h = default_step(order, s).max(2.0 * self.max_spacing);
        fd_derivative(|x| Ok(self.piecewise(x, 2)), s, order - 2, h, Some((lo, hi)))
    }
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[Quaternion]) -> Vec<Quaternion> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![Quaternion::ZERO; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - d[i - 1] * sub[i]) / denom;
    }
    let mut x = vec![Quaternion::ZERO; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - x[i + 1] * c[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: f64) -> Quaternion {
        Quaternion::from_coords([x, 0.0, 0.0, 0.0])
    }

    #[test]
    fn reproduces_cubics_exactly() {
        // Not-a-knot splines reproduce any cubic, including on uneven knots.
        let f = |s: f64| 1.0 - 2.0 * s + 0.5 * s * s + 0.25 * s * s * s;
        let knots: Vec<f64> = (0..12).map(|i| i as f64 * 0.3 + 0.01 * (i * i) as f64).collect();
        let values = knots.iter().map(|&s| q(f(s))).collect();
        let sp = CubicSpline::new(knots, values).unwrap();
        for s in [0.05, 0.77, 1.9, 3.1] {
            assert!((sp.eval(s, 0).unwrap().a - f(s)).abs() < 1e-12);
            assert!((sp.eval(s, 1).unwrap().a - (-2.0 + s + 0.75 * s * s)).abs() < 1e-11);
            assert!((sp.eval(s, 2).unwrap().a - (1.0 + 1.5 * s)).abs() < 1e-10);
            assert!((sp.eval(s, 3).unwrap().a - 1.5).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_samples() {
        let k = vec![0.0, 1.0, 1.0, 2.0, 3.0];
        let v = vec![Quaternion::ZERO; 5];
        assert!(CubicSpline::new(k, v).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 2.0], vec![Quaternion::ZERO; 3]).is_err());
    }

    #[test]
    fn outside_range_is_an_error() {
        let knots: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let sp = CubicSpline::new(knots.clone(), knots.iter().map(|&s| q(s)).collect()).unwrap();
        assert!(matches!(sp.eval(-0.5, 0), Err(Error::DomainExceeded { .. })));
        assert!(matches!(sp.eval(0.0, 4), Err(Error::DomainExceeded { .. })));
    }
}
