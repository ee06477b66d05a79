//! Serret-Frenet apparatus of curves in R^4.
//!
//! The frame follows the derivative formulas
//!
//! ```text
//! T = x' / |x'|
//! N = normalize(|x'|^2 x'' - h(x', x'') x')
//! E = eta * (T ^ N ^ x''') / |T ^ N ^ x'''|
//! B = E ^ T ^ N
//! ```
//!
//! with `^` the ternary wedge [`cross4`]. With the wedge convention used here,
//! `eta = -1` is the orientation for which the Frenet equations
//!
//! ```text
//! T' =  kappa N
//! N' = -kappa T + k B
//! B' = -k N + (r - kappa) E
//! E' = -(r - kappa) B
//! ```
//!
//! hold with `k >= 0`, and `det(T, N, B, E) = +1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::CurveDefinition;
use crate::error::{Error, FrameVector, Result};
use crate::quaternion::{cross4, det4, hform, Quaternion};

/// Default relative threshold below which a normalizing denominator counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Orientation sign giving a right-handed frame that satisfies the Frenet equations.
pub const FRAME_ETA: Sign = Sign::Minus;

/// Frame and curvatures at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetFrame4 {
    pub s: f64,
    pub point: Quaternion,
    pub t: Quaternion,
    pub n: Quaternion,
    pub b: Quaternion,
    pub e: Quaternion,
    pub kappa: f64,
    pub k: f64,
    /// Third curvature `r - kappa`.
    pub bitorsion: f64,
    pub eta: Sign,
    /// Speed `|x'(s)|`.
    pub speed: f64,
}

impl FrenetFrame4 {
    pub fn vectors(&self) -> [Quaternion; 4] {
        [self.t, self.n, self.b, self.e]
    }

    pub fn det(&self) -> f64 {
        det4(self.t, self.n, self.b, self.e)
    }

    /// Largest deviation of the Gram matrix of `{T, N, B, E}` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        gram_error(&self.vectors())
    }
}

/// Largest deviation of the Gram matrix of `vs` from the identity.
pub fn gram_error(vs: &[Quaternion]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in vs.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((hform(*u, *v) - target).abs());
        }
    }
    worst
}

/// Tuning for [`frenet_apparatus_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetOptions {
    pub degeneracy_tol: f64,
    pub eta: Sign,
}

impl Default for FrenetOptions {
    fn default() -> Self {
        FrenetOptions { degeneracy_tol: DEGENERACY_TOL, eta: FRAME_ETA }
    }
}

/// Apparatus from the position and derivatives of orders 1..=4 at `s`.
pub fn frenet_from_derivatives(
    s: f64,
    point: Quaternion,
    jet: [Quaternion; 4],
    options: FrenetOptions,
) -> Result<FrenetFrame4> {
    let [d1, d2, d3, d4] = jet;
    let tol = options.degeneracy_tol;
    let scale = jet.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let TangentNormal { t, n, speed: v, n_norm } = tangent_normal_from(s, d1, d2, tol, scale)?;

    let w = cross4(t, n, d3);
    let w_norm = w.norm();
    if !(w_norm > tol * d3.norm()) {
        return Err(Error::FrameUndefined { which: FrameVector::E, s });
    }
    let eta = options.eta;
    let e = w * (eta.value() / w_norm);
    let b = cross4(e, t, n);

    let kappa = n_norm / v.powi(4);
    let k = w_norm * v / n_norm;
    let bitorsion = hform(d4, e) / (w_norm * v);
    Ok(FrenetFrame4 { s, point, t, n, b, e, kappa, k, bitorsion, eta, speed: v })
}

struct TangentNormal {
    t: Quaternion,
    n: Quaternion,
    speed: f64,
    n_norm: f64,
}

fn tangent_normal_from(s: f64, d1: Quaternion, d2: Quaternion, tol: f64, scale: f64) -> Result<TangentNormal> {
    let v = d1.norm();
    if !(v > tol * scale) || !v.is_finite() {
        return Err(Error::CurveSingular { s });
    }
    let n_raw = d2 * (v * v) - d1 * hform(d1, d2);
    let n_norm = n_raw.norm();
    if !(n_norm > tol * v * v * d2.norm()) {
        return Err(Error::FrameUndefined { which: FrameVector::N, s });
    }
    Ok(TangentNormal { t: d1 / v, n: n_raw / n_norm, speed: v, n_norm })
}

/// Unit tangent, principal normal and `kappa` at `s`; defined wherever `kappa > 0`.
pub fn tangent_normal(curve: &CurveDefinition, s: f64) -> Result<(Quaternion, Quaternion, f64)> {
    let (d1, d2) = (curve.eval(s, 1)?, curve.eval(s, 2)?);
    let tn = tangent_normal_from(s, d1, d2, DEGENERACY_TOL, d1.norm().max(d2.norm()))?;
    Ok((tn.t, tn.n, tn.n_norm / tn.speed.powi(4)))
}

/// Apparatus of `curve` at `s` with the default orientation and tolerance.
pub fn frenet_apparatus(curve: &CurveDefinition, s: f64) -> Result<FrenetFrame4> {
    frenet_apparatus_with(curve, s, FrenetOptions::default())
}

pub fn frenet_apparatus_with(curve: &CurveDefinition, s: f64, options: FrenetOptions) -> Result<FrenetFrame4> {
    frenet_from_derivatives(s, curve.position(s)?, curve.jet4(s)?, options)
}

/// Flips each vector of `frame` that points away from the matching vector of `reference`.
fn align_to(frame: &FrenetFrame4, reference: &FrenetFrame4) -> [Quaternion; 4] {
    let mut out = frame.vectors();
    for (v, r) in out.iter_mut().zip(reference.vectors()) {
        if hform(*v, r) < 0.0 {
            *v = -*v;
        }
    }
    out
}

/// Norms of the four Frenet-equation residuals at `s`, derivatives of the frame
/// field taken by central differences with step `h` and divided by the speed.
pub fn serret_frenet_residual(curve: &CurveDefinition, s: f64, h: f64) -> Result<[f64; 4]> {
    if !(h > 0.0) {
        return Err(Error::SpecInvalid(format!("residual step must be positive, got {h}")));
    }
    let f0 = frenet_apparatus(curve, s)?;
    let plus = align_to(&frenet_apparatus(curve, s + h)?, &f0);
    let minus = align_to(&frenet_apparatus(curve, s - h)?, &f0);
    let d: Vec<Quaternion> = plus.iter().zip(&minus).map(|(p, m)| (*p - *m) / (2.0 * h * f0.speed)).collect();
    let FrenetFrame4 { t, n, b, e, kappa, k, bitorsion, .. } = f0;
    Ok([
        (d[0] - n * kappa).norm(),
        (d[1] + t * kappa - b * k).norm(),
        (d[2] + n * k - e * bitorsion).norm(),
        (d[3] + b * bitorsion).norm(),
    ])
}

/// A grid point where the apparatus could not be formed.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub s: f64,
    pub error: Error,
}

/// Frames sampled along a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusSeries {
    pub curve_id: String,
    pub grid: Vec<f64>,
    pub frames: Vec<FrenetFrame4>,
    pub skipped: Vec<SkippedPoint>,
}

impl ApparatusSeries {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `max - min` of a scalar extracted from every frame, 0 for an empty series.
    pub fn spread(&self, f: impl Fn(&FrenetFrame4) -> f64) -> f64 {
        let (lo, hi) = self
            .frames
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }
}

/// Apparatus at every grid point.
///
/// Points where the frame is undefined are recorded in `skipped`. Consecutive
/// frames are made sign-continuous by flipping `(B, E)` together with `eta`.
pub fn sample_apparatus(curve: &CurveDefinition, grid: &[f64]) -> Result<ApparatusSeries> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::SpecInvalid("grid must be strictly increasing".into()));
    }
    let mut frames: Vec<FrenetFrame4> = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for &s in grid {
        match frenet_apparatus(curve, s) {
            Ok(mut f) => {
                if let Some(prev) = frames.last() {
                    if hform(f.e, prev.e) < 0.0 {
                        f.b = -f.b;
                        f.e = -f.e;
                        f.eta = f.eta.flip();
                    }
                }
                frames.push(f);
            }
            Err(error) => skipped.push(SkippedPoint { s, error }),
        }
    }
    let grid = frames.iter().map(|f| f.s).collect();
    Ok(ApparatusSeries { curve_id: curve.label().to_string(), grid, frames, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_curve, uniform_grid, CurveSpec};

    const R2_4: f64 = std::f64::consts::SQRT_2 / 4.0;

    fn example() -> CurveDefinition {
        build_curve(&CurveSpec::ReferenceExample {}).unwrap()
    }

    fn helix() -> CurveDefinition {
        build_curve(&CurveSpec::double_helix_unit(1.0, 1.0, 0.5, 3.0)).unwrap()
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).max_abs() < tol
    }

    #[test]
    fn example_frame_at_origin() {
        let f = frenet_apparatus(&example(), 0.0).unwrap();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(f.t, Quaternion::from_coords([-0.5, 0.5, 0.5, 0.5]), 1e-15));
        assert!(close(f.n, Quaternion::from_coords([-r2, -r2, 0.0, 0.0]), 1e-15));
        assert!(close(f.b, Quaternion::from_coords([0.5, -0.5, 0.5, 0.5]), 1e-15));
        assert!(close(f.e, Quaternion::from_coords([0.0, 0.0, -r2, r2]), 1e-15));
        assert!((f.kappa - R2_4).abs() < 1e-15);
        assert!((f.k - R2_4).abs() < 1e-15);
        assert!(f.bitorsion.abs() < 1e-15);
        assert!((f.det() - 1.0).abs() < 1e-14);
        assert_eq!(f.eta, Sign::Minus);
    }

    #[test]
    fn determinant_is_positive_for_either_orientation() {
        let curve = helix();
        for eta in [Sign::Plus, Sign::Minus] {
            let f = frenet_apparatus_with(&curve, 0.8, FrenetOptions { eta, ..Default::default() }).unwrap();
            assert!((f.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_circle_has_no_e() {
        let circle = build_curve(&CurveSpec::Circular4 { amplitude: 1.0, omega: 1.0, drift_b: 0.0, drift_c: 0.0 }).unwrap();
        let err = frenet_apparatus(&circle, 0.3).unwrap_err();
        assert_eq!(err, Error::FrameUndefined { which: FrameVector::E, s: 0.3 });
    }

    #[test]
    fn straight_line_has_no_n() {
        let line = build_curve(&CurveSpec::Circular4 { amplitude: 0.0, omega: 1.0, drift_b: 0.6, drift_c: 0.8 }).unwrap();
        assert!(matches!(frenet_apparatus(&line, 1.0), Err(Error::FrameUndefined { which: FrameVector::N, .. })));
        assert!(serret_frenet_residual(&line, 1.0, 1e-3).is_err());
    }

    #[test]
    fn constant_curve_is_singular() {
        let point = CurveDefinition::from_fn("point", crate::curve::Domain::new(0.0, 1.0), 5, |_, k| {
            Some(if k == 0 { Quaternion::ONE } else { Quaternion::ZERO })
        });
        assert!(matches!(frenet_apparatus(&point, 0.5), Err(Error::CurveSingular { .. })));
    }

    /// Orthonormalizes x', x'', x''', x'''' and completes a right-handed frame.
    fn gram_schmidt_oracle(jet: [Quaternion; 4]) -> [Quaternion; 4] {
        let mut basis: Vec<Quaternion> = Vec::new();
        for v in jet.iter().take(3) {
            let mut u = *v;
            for e in &basis {
                u = u - *e * u.dot(*e);
            }
            basis.push(u.normalized());
        }
        let mut u = jet[3];
        for e in &basis {
            u = u - *e * u.dot(*e);
        }
        let mut last = u.normalized();
        if det4(basis[0], basis[1], basis[2], last) < 0.0 {
            last = -last;
        }
        [basis[0], basis[1], basis[2], last]
    }

    #[test]
    fn helix_matches_gram_schmidt() {
        let curve = helix();
        for s in [0.1, 1.7, 4.4] {
            let f = frenet_apparatus(&curve, s).unwrap();
            let oracle = gram_schmidt_oracle(curve.jet4(s).unwrap());
            for (got, want) in f.vectors().iter().zip(oracle) {
                assert!(close(*got, want, 1e-12), "s={s}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn w_curves_have_constant_curvatures() {
        for spec in [CurveSpec::double_helix_unit(1.0, 1.0, 0.5, 3.0), CurveSpec::circular4_unit(1.0, 0.6, 0.8)] {
            let curve = build_curve(&spec).unwrap();
            let series = sample_apparatus(&curve, &curve.domain().grid(200)).unwrap();
            assert_eq!(series.len(), 200, "{:?}", series.skipped.first());
            assert!(series.spread(|f| f.kappa) < 1e-8);
            assert!(series.spread(|f| f.k) < 1e-8);
            assert!(series.spread(|f| f.bitorsion) < 1e-8);
            for f in &series.frames {
                assert!(f.orthonormality_error() < 1e-9);
                assert!((f.det() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn circular4_lies_in_a_hyperplane() {
        let curve = build_curve(&CurveSpec::circular4_unit(1.0, 0.6, 0.8)).unwrap();
        let f = frenet_apparatus(&curve, 2.0).unwrap();
        assert!(f.k > 0.1);
        assert!(f.bitorsion.abs() < 1e-15);
    }

    #[test]
    fn example_series_has_constant_kappa() {
        let curve = example();
        let series = sample_apparatus(&curve, &uniform_grid(0.0, 2.0 * std::f64::consts::PI, 100)).unwrap();
        assert_eq!(series.len(), 100);
        assert!(series.frames.iter().all(|f| (f.kappa - R2_4).abs() < 1e-9));
        let one = sample_apparatus(&curve, &[1.0]).unwrap();
        assert_eq!(one.len(), 1);
        assert!(sample_apparatus(&curve, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn frenet_residuals_are_small_and_second_order() {
        for curve in [example(), helix()] {
            let coarse = serret_frenet_residual(&curve, 1.0, 1e-3).unwrap();
            let fine = serret_frenet_residual(&curve, 1.0, 1e-4).unwrap();
            for (c, f) in coarse.iter().zip(fine) {
                assert!(f < 1e-6);
                if *c > 1e-10 {
                    assert!(c / f > 50.0, "{c} -> {f}");
                }
            }
            let half = serret_frenet_residual(&curve, 1.0, 5e-4).unwrap();
            for (c, h) in coarse.iter().zip(half) {
                if *c > 1e-10 {
                    assert!(c / h >= 3.5);
                }
            }
        }
    }

    #[test]
    fn kappa_is_norm_of_tangent_derivative() {
        let curve = helix();
        let h = 1e-4;
        let s = 2.2;
        let dt = (frenet_apparatus(&curve, s + h).unwrap().t - frenet_apparatus(&curve, s - h).unwrap().t) / (2.0 * h);
        assert!((dt.norm() - frenet_apparatus(&curve, s).unwrap().kappa).abs() < 1e-7);
    }

    #[test]
    fn apparatus_is_parametrization_covariant() {
        let curve = example();
        let fast = curve.rescaled(2.0).unwrap();
        for u in [0.2, 1.1, 3.0] {
            let a = frenet_apparatus(&fast, u).unwrap();
            let b = frenet_apparatus(&curve, 2.0 * u).unwrap();
            for (x, y) in a.vectors().iter().zip(b.vectors()) {
                assert!(close(*x, y, 1e-12));
            }
            assert!((a.kappa - b.kappa).abs() < 1e-12);
            assert!((a.k - b.k).abs() < 1e-12);
            assert!((a.bitorsion - b.bitorsion).abs() < 1e-12);
        }
    }
}
