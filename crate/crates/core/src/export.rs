//! CSV export of sampled apparatus and spatial curves.
//!
//! Numbers use the shortest decimal form that parses back to the same `f64`.
//! Missing values are written as empty cells.

use std::fmt::Write as _;

use crate::curve::CurveDefinition;
use crate::error::{Error, FrameVector, Result};
use crate::frenet::{frenet_apparatus, tangent_normal, FrenetFrame4, Sign};
use crate::involute::InvoluteParams;
use crate::quaternion::{Quaternion, Vec3};
use crate::spatial::SpatialFrame;

pub const APPARATUS_HEADER: &str =
    "s,x1,x2,x3,x4,T1,T2,T3,T4,N1,N2,N3,N4,B1,B2,B3,B4,E1,E2,E3,E4,kappa,k,bitorsion,eta";

pub const INVOLUTE_EXTRA_HEADER: &str = "c,lambda,distance";

pub const SPATIAL_HEADER: &str = "s,ax,ay,az";

pub const SPATIAL_FRAME_HEADER: &str = "t1,t2,t3,n1,n2,n3,b1,b2,b3";

/// Round-trip decimal form of `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// One exported row. `B`, `E` and the higher curvatures are absent where
/// the curve lies in a 3-dimensional affine subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApparatusRow {
    pub s: f64,
    pub point: Quaternion,
    pub t: Quaternion,
    pub n: Quaternion,
    pub b: Option<Quaternion>,
    pub e: Option<Quaternion>,
    pub kappa: f64,
    pub k: Option<f64>,
    pub bitorsion: Option<f64>,
    pub eta: Option<Sign>,
}

impl From<&FrenetFrame4> for ApparatusRow {
    fn from(f: &FrenetFrame4) -> Self {
        ApparatusRow {
            s: f.s,
            point: f.point,
            t: f.t,
            n: f.n,
            b: Some(f.b),
            e: Some(f.e),
            kappa: f.kappa,
            k: Some(f.k),
            bitorsion: Some(f.bitorsion),
            eta: Some(f.eta),
        }
    }
}

/// Row at `s`, keeping `T`, `N` and `kappa` when only `E` is undefined.
pub fn apparatus_row(curve: &CurveDefinition, s: f64) -> Result<ApparatusRow> {
    match frenet_apparatus(curve, s) {
        Ok(f) => Ok(ApparatusRow::from(&f)),
        Err(Error::FrameUndefined { which: FrameVector::E, .. }) => {
            let (t, n, kappa) = tangent_normal(curve, s)?;
            Ok(ApparatusRow { s, point: curve.position(s)?, t, n, b: None, e: None, kappa, k: None, bitorsion: None, eta: None })
        }
        Err(e) => Err(e),
    }
}

/// Rows over `grid`; points that fail are returned separately.
pub fn apparatus_rows(curve: &CurveDefinition, grid: &[f64]) -> (Vec<ApparatusRow>, Vec<(f64, Error)>) {
    let mut rows = Vec::with_capacity(grid.len());
    let mut failed = Vec::new();
    for &s in grid {
        match apparatus_row(curve, s) {
            Ok(mut row) => {
                if let (Some(prev), Some(e)) = (rows.last().and_then(|r: &ApparatusRow| r.e), row.e) {
                    if prev.dot(e) < 0.0 {
                        row.b = row.b.map(|b| -b);
                        row.e = Some(-e);
                        row.eta = row.eta.map(Sign::flip);
                    }
                }
                rows.push(row);
            }
            Err(e) => failed.push((s, e)),
        }
    }
    (rows, failed)
}

fn push_vec(out: &mut String, v: Option<Quaternion>) {
    match v {
        Some(q) => {
            for x in q.coords() {
                let _ = write!(out, ",{}", fmt_f64(x));
            }
        }
        None => out.push_str(",,,,"),
    }
}

fn push_opt(out: &mut String, v: Option<f64>) {
    out.push(',');
    if let Some(x) = v {
        out.push_str(&fmt_f64(x));
    }
}

fn push_row(out: &mut String, r: &ApparatusRow) {
    out.push_str(&fmt_f64(r.s));
    push_vec(out, Some(r.point));
    push_vec(out, Some(r.t));
    push_vec(out, Some(r.n));
    push_vec(out, r.b);
    push_vec(out, r.e);
    push_opt(out, Some(r.kappa));
    push_opt(out, r.k);
    push_opt(out, r.bitorsion);
    push_opt(out, r.eta.map(|e| e.value()));
}

pub fn apparatus_csv(rows: &[ApparatusRow]) -> String {
    let mut out = String::from(APPARATUS_HEADER);
    out.push('\n');
    for r in rows {
        push_row(&mut out, r);
        out.push('\n');
    }
    out
}

/// Involute rows with `c`, `lambda = c - s` and the distance to the evolute point.
pub fn involute_csv(rows: &[ApparatusRow], params: InvoluteParams, evolute: &CurveDefinition) -> Result<String> {
    let mut out = format!("{APPARATUS_HEADER},{INVOLUTE_EXTRA_HEADER}\n");
    for r in rows {
        push_row(&mut out, r);
        let distance = (r.point - evolute.position(r.s)?).norm();
        let _ = writeln!(out, ",{},{},{}", fmt_f64(params.c), fmt_f64(params.lambda(r.s)), fmt_f64(distance));
    }
    Ok(out)
}

/// Spatial curve rows, with frame columns when `frames` is given.
pub fn spatial_csv(grid: &[f64], points: &[Vec3], frames: Option<&[SpatialFrame]>) -> String {
    let mut out = String::from(SPATIAL_HEADER);
    if frames.is_some() {
        let _ = write!(out, ",{SPATIAL_FRAME_HEADER}");
    }
    out.push('\n');
    for (i, (s, p)) in grid.iter().zip(points).enumerate() {
        out.push_str(&fmt_f64(*s));
        for x in p.to_array() {
            let _ = write!(out, ",{}", fmt_f64(x));
        }
        if let Some(f) = frames.and_then(|fs| fs.get(i)) {
            for v in f.vectors() {
                for x in v.vector().to_array() {
                    let _ = write!(out, ",{}", fmt_f64(x));
                }
            }
        }
        out.push('\n');
    }
    out
}
