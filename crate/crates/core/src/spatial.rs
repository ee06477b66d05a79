//! Spatial quaternion frames in R^3 associated with curves in R^4.
//!
//! A frame `{T, N, B, E}` determines spatial quaternions `t, n, b` with
//! `N = t T`, `B = n T`, `E = b T`. Integrating `t` gives the associated
//! spatial curve.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::curve::CurveDefinition;
use crate::error::{Error, Result};
use crate::frenet::{frenet_apparatus, tangent_normal, FrenetFrame4};
use crate::involute::{involute_curve, InvoluteParams};
use crate::quaternion::{hform, qmul, Quaternion, Vec3};

/// Largest scalar part tolerated in a recovered spatial vector.
pub const SPATIAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialFrame {
    pub t: Quaternion,
    pub n: Quaternion,
    pub b: Quaternion,
    /// Curvature of the spatial curve.
    pub k: f64,
    /// Torsion of the spatial curve, `bitorsion + kappa`.
    pub r: f64,
}

impl SpatialFrame {
    pub fn vectors(&self) -> [Quaternion; 3] {
        [self.t, self.n, self.b]
    }
}

/// `t = N T̄`, `n = B T̄`, `b = E T̄`.
pub fn spatial_frame(frame: &FrenetFrame4) -> Result<SpatialFrame> {
    let tc = frame.t.conjugate();
    let recover = |which: &'static str, v: Quaternion| {
        let q = qmul(v, tc);
        if q.scalar().abs() > SPATIAL_TOL {
            Err(Error::NotSpatial { which, scalar: q.scalar() })
        } else {
            Ok(q)
        }
    };
    Ok(SpatialFrame {
        t: recover("t", frame.n)?,
        n: recover("n", frame.b)?,
        b: recover("b", frame.e)?,
        k: frame.k,
        r: frame.bitorsion + frame.kappa,
    })
}

/// Integrates the vector part of `t` along `grid` from `anchor`.
///
/// Each step is a fourth-order Runge-Kutta step of `a' = t(s)`, which for a
/// field independent of `a` evaluates `t` at both ends and the midpoint.
pub fn associated_spatial_curve(curve: &CurveDefinition, grid: &[f64], anchor: Vec3) -> Result<Vec<Vec3>> {
    let tangent = |s: f64| -> Result<Vec3> { Ok(spatial_frame(&frenet_apparatus(curve, s)?)?.t.vector()) };
    let mut out = Vec::with_capacity(grid.len());
    let Some(&first) = grid.first() else {
        return Ok(out);
    };
    let mut point = anchor;
    let mut t_prev = tangent(first)?;
    out.push(point);
    for w in grid.windows(2) {
        let h = w[1] - w[0];
        let t_mid = tangent(w[0] + 0.5 * h)?;
        let t_next = tangent(w[1])?;
        point = point + (t_prev + t_mid * 4.0 + t_next) * (h / 6.0);
        out.push(point);
        t_prev = t_next;
    }
    Ok(out)
}

fn to_na(v: Vec3) -> Vector3<f64> {
    Vector3::new(v.x, v.y, v.z)
}

fn centroid(points: &[Vec3]) -> Vector3<f64> {
    points.iter().map(|p| to_na(*p)).sum::<Vector3<f64>>() / points.len() as f64
}

/// Root-mean-square distance between `a` and `b` after the best proper rigid motion of `a`.
pub fn rigid_rms(a: &[Vec3], b: &[Vec3]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::SpecInvalid(format!("point sets of sizes {} and {}", a.len(), b.len())));
    }
    let (ca, cb) = (centroid(a), centroid(b));
    let mut cov = Matrix3::zeros();
    for (p, q) in a.iter().zip(b) {
        cov += (to_na(*p) - ca) * (to_na(*q) - cb).transpose();
    }
    let svd = cov.svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut fix = Matrix3::identity();
    if (v_t.transpose() * u.transpose()).determinant() < 0.0 {
        fix[(2, 2)] = -1.0;
    }
    let rot = v_t.transpose() * fix * u.transpose();
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(p, q)| (rot * (to_na(*p) - ca) - (to_na(*q) - cb)).norm_squared())
        .sum();
    Ok((sum / a.len() as f64).sqrt())
}

/// Curvature of the circle through each interior triple of consecutive points.
pub fn discrete_curvature(points: &[Vec3]) -> Vec<f64> {
    points
        .windows(3)
        .map(|w| {
            let (u, v, chord) = (w[1] - w[0], w[2] - w[1], w[2] - w[0]);
            2.0 * u.cross(v).norm() / (u.norm() * v.norm() * chord.norm())
        })
        .collect()
}

/// Spatial-frame comparison between a curve and its involute at each admissible grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialPairReport {
    pub grid: Vec<f64>,
    /// `h(t, t*)` at each point.
    pub tangent_overlap: Vec<f64>,
    /// `kappa / sqrt(kappa^2 + k^2)` of the evolute at each point.
    pub expected_overlap: Vec<f64>,
    /// Largest `|<t*, n>|`.
    pub max_normal_component: f64,
    /// Largest `|h(t, t*) - kappa / sqrt(kappa^2 + k^2)|`.
    pub max_overlap_deviation: f64,
    /// Grid points inside the band around `s = c`.
    pub excluded: usize,
}

/// Compares the spatial tangent `t*` of the involute with the evolute's `{t, n, b}`.
///
/// `t*` has no `n` component, so it can never be parallel to `n` and the
/// associated spatial curves are not an involute-evolute pair in R^3.
pub fn check_spatial_pair(evolute: &CurveDefinition, params: InvoluteParams, grid: &[f64]) -> Result<SpatialPairReport> {
    let phi = involute_curve(evolute, params)?;
    let mut report = SpatialPairReport {
        grid: Vec::new(),
        tangent_overlap: Vec::new(),
        expected_overlap: Vec::new(),
        max_normal_component: 0.0,
        max_overlap_deviation: 0.0,
        excluded: 0,
    };
    for &s in grid {
        if (params.c - s).abs() <= params.exclusion_tol {
            report.excluded += 1;
            continue;
        }
        let fx = frenet_apparatus(evolute, s)?;
        let sx = spatial_frame(&fx)?;
        let (tp, np, _) = tangent_normal(&phi, s)?;
        let t_star = qmul(np, tp.conjugate());
        let overlap = hform(sx.t, t_star);
        let expected = fx.kappa / (fx.kappa * fx.kappa + fx.k * fx.k).sqrt();
        report.max_normal_component = report.max_normal_component.max(hform(t_star, sx.n).abs());
        report.max_overlap_deviation = report.max_overlap_deviation.max((overlap - expected).abs());
        report.grid.push(s);
        report.tangent_overlap.push(overlap);
        report.expected_overlap.push(expected);
    }
    Ok(report)
}
