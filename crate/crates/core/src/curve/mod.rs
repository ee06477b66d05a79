//! Parametric curves in R^4 with derivative access up to order 5.

pub mod fd;
pub mod spline;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

pub use fd::{default_step, fd_derivative};
use spline::CubicSpline;

/// Highest derivative order every curve must provide.
pub const MAX_ORDER: usize = 5;

/// Default parameter interval of the closed-form families.
pub const DEFAULT_DOMAIN: (f64, f64) = (0.0, 4.0 * PI);

/// Parameter domain: a closed interval, optionally with an open band removed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
    pub excluded: Option<(f64, f64)>,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Self {
        Domain { min, max, excluded: None }
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, s: f64) -> bool {
        if s < self.min || s > self.max {
            return false;
        }
        match self.excluded {
            Some((lo, hi)) => !(s > lo && s < hi),
            None => true,
        }
    }

    /// `n` uniformly spaced points over `[from, to]` minus the excluded band.
    pub fn grid_between(&self, from: f64, to: f64, n: usize) -> Vec<f64> {
        uniform_grid(from, to, n).into_iter().filter(|&s| !self.in_band(s)).collect()
    }

    /// `n` uniformly spaced points over the whole domain minus the excluded band.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        self.grid_between(self.min, self.max, n)
    }

    fn in_band(&self, s: f64) -> bool {
        matches!(self.excluded, Some((lo, hi)) if s > lo && s < hi)
    }
}

/// `n` uniform points from `from` to `to` inclusive; a single point sits at `from`.
pub fn uniform_grid(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let step = (to - from) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { to } else { from + step * i as f64 }).collect()
        }
    }
}

/// How derivatives of a curve are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    FiniteDifferenceWrapped,
    Sampled,
}

/// Curve description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// `(cos(s/2) - sin(s/2), cos(s/2) + sin(s/2), s/2, s/2)`.
    #[serde(rename = "paper_example")]
    ReferenceExample {},
    /// `(A cos ws, A sin ws, B s, C s)`.
    Circular4 {
        #[serde(rename = "A")]
        amplitude: f64,
        omega: f64,
        #[serde(rename = "B")]
        drift_b: f64,
        #[serde(rename = "C")]
        drift_c: f64,
    },
    /// `(a cos ps, a sin ps, b cos qs, b sin qs)`.
    DoubleHelix { a: f64, p: f64, b: f64, q: f64 },
    Samples { s: Vec<f64>, points: Vec<[f64; 4]> },
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SpecInvalid(e.to_string()))
    }

    /// Built-in curve by name with default parameters.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "paper_example" => Some(CurveSpec::ReferenceExample {}),
            "circular4" => Some(CurveSpec::circular4_unit(1.0, 0.6, 0.8)),
            "double_helix" => Some(CurveSpec::double_helix_unit(1.0, 1.0, 0.5, 3.0)),
            _ => None,
        }
    }

    /// Unit-speed `circular4` with drift split between the last two axes by `ratio`.
    pub fn circular4_unit(amplitude: f64, omega: f64, ratio: f64) -> Self {
        let rest = (1.0 - amplitude * amplitude * omega * omega).max(0.0).sqrt();
        let norm = (1.0 + ratio * ratio).sqrt();
        CurveSpec::Circular4 { amplitude, omega, drift_b: rest / norm, drift_c: rest * ratio / norm }
    }

    /// Unit-speed `double_helix`: frequencies are rescaled so `a²p² + b²q² = 1`.
    pub fn double_helix_unit(a: f64, p: f64, b: f64, q: f64) -> Self {
        let speed = (a * a * p * p + b * b * q * q).sqrt();
        CurveSpec::DoubleHelix { a, p: p / speed, b, q: q / speed }
    }

    fn validate(&self) -> Result<()> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match self {
            CurveSpec::ReferenceExample {} => Ok(()),
            CurveSpec::Circular4 { amplitude, omega, drift_b, drift_c } => {
                if finite(&[*amplitude, *omega, *drift_b, *drift_c]) {
                    Ok(())
                } else {
                    Err(Error::SpecInvalid("circular4 parameters must be finite".into()))
                }
            }
            CurveSpec::DoubleHelix { a, p, b, q } => {
                if finite(&[*a, *p, *b, *q]) {
                    Ok(())
                } else {
                    Err(Error::SpecInvalid("double_helix parameters must be finite".into()))
                }
            }
            CurveSpec::Samples { s, points } => {
                if s.len() != points.len() {
                    return Err(Error::SpecInvalid(format!("{} parameters but {} points", s.len(), points.len())));
                }
                if s.len() < 11 {
                    return Err(Error::SpecInvalid(format!("need at least 11 samples, got {}", s.len())));
                }
                if !finite(s) || !points.iter().all(|p| finite(p)) {
                    return Err(Error::SpecInvalid("samples must be finite".into()));
                }
                if s.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::SpecInvalid("sample parameters must be strictly increasing".into()));
                }
                Ok(())
            }
        }
    }

    fn label(&self) -> String {
        match self {
            CurveSpec::ReferenceExample {} => "paper_example".into(),
            CurveSpec::Circular4 { amplitude, omega, drift_b, drift_c } => {
                format!("circular4(A={amplitude}, omega={omega}, B={drift_b}, C={drift_c})")
            }
            CurveSpec::DoubleHelix { a, p, b, q } => format!("double_helix(a={a}, p={p}, b={b}, q={q})"),
            CurveSpec::Samples { s, .. } => format!("samples(n={})", s.len()),
        }
    }
}

/// Analytic derivative callback: `None` when the order is not available.
pub type DerivativeFn = dyn Fn(f64, usize) -> Option<Quaternion> + Send + Sync;

enum Kind {
    ReferenceExample,
    Circular4 { amplitude: f64, omega: f64, drift_b: f64, drift_c: f64 },
    DoubleHelix { a: f64, p: f64, b: f64, q: f64 },
    Samples(CubicSpline),
    Involute { evolute: CurveDefinition, c: f64 },
    Combination { base: CurveDefinition, coeffs: Vec<f64> },
    Rescaled { base: CurveDefinition, factor: f64 },
    Custom { f: Box<DerivativeFn>, cap: usize },
}

/// A parametric curve `s -> R^4`.
///
/// Cloning is cheap; the definition is immutable and shareable across threads.
#[derive(Clone)]
pub struct CurveDefinition {
    kind: Arc<Kind>,
    domain: Domain,
    label: String,
}

impl fmt::Debug for CurveDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveDefinition")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("provenance", &self.provenance())
            .field("max_analytic_order", &self.max_analytic_order())
            .finish()
    }
}

/// k-th derivative of cos(w s) and sin(w s).
fn trig_derivative(w: f64, s: f64, k: usize) -> (f64, f64) {
    let (sn, cs) = (w * s).sin_cos();
    let scale = w.powi(k as i32);
    let (dc, ds) = match k % 4 {
        0 => (cs, sn),
        1 => (-sn, cs),
        2 => (-cs, -sn),
        _ => (sn, -cs),
    };
    (scale * dc, scale * ds)
}

fn linear_part(slope: f64, s: f64, k: usize) -> f64 {
    match k {
        0 => slope * s,
        1 => slope,
        _ => 0.0,
    }
}

impl Kind {
    /// Largest order with a closed-form (or spline) derivative.
    fn cap(&self) -> usize {
        match self {
            Kind::ReferenceExample | Kind::Circular4 { .. } | Kind::DoubleHelix { .. } => usize::MAX,
            Kind::Samples(_) => MAX_ORDER,
            Kind::Involute { evolute, .. } => evolute.kind.cap().saturating_sub(1),
            Kind::Combination { base, coeffs } => base.kind.cap().saturating_sub(coeffs.len().saturating_sub(1)),
            Kind::Rescaled { base, .. } => base.kind.cap(),
            Kind::Custom { cap, .. } => *cap,
        }
    }

    fn raw(&self, s: f64, k: usize) -> Result<Option<Quaternion>> {
        if k > self.cap() {
            return Ok(None);
        }
        Ok(Some(match self {
            Kind::ReferenceExample => {
                let (c, sn) = trig_derivative(0.5, s, k);
                let lin = linear_part(0.5, s, k);
                Quaternion::from_coords([c - sn, c + sn, lin, lin])
            }
            Kind::Circular4 { amplitude, omega, drift_b, drift_c } => {
                let (c, sn) = trig_derivative(*omega, s, k);
                Quaternion::from_coords([
                    amplitude * c,
                    amplitude * sn,
                    linear_part(*drift_b, s, k),
                    linear_part(*drift_c, s, k),
                ])
            }
            Kind::DoubleHelix { a, p, b, q } => {
                let (c1, s1) = trig_derivative(*p, s, k);
                let (c2, s2) = trig_derivative(*q, s, k);
                Quaternion::from_coords([a * c1, a * s1, b * c2, b * s2])
            }
            Kind::Samples(spline) => spline.eval(s, k)?,
            Kind::Involute { evolute, c } => {
                let lambda = c - s;
                let next = match evolute.kind.raw(s, k + 1)? {
                    Some(v) => v,
                    None => return Ok(None),
                };
                let here = match evolute.kind.raw(s, k)? {
                    Some(v) => v,
                    None => return Ok(None),
                };
                // d^k/ds^k [x + (c - s) x'] = (c - s) x^(k+1) + (1 - k) x^(k)
                next * lambda + here * (1.0 - k as f64)
            }
            Kind::Combination { base, coeffs } => {
                let mut acc = Quaternion::ZERO;
                for (j, w) in coeffs.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    match base.kind.raw(s, k + j)? {
                        Some(v) => acc += v * *w,
                        None => return Ok(None),
                    }
                }
                acc
            }
            Kind::Rescaled { base, factor } => match base.kind.raw(factor * s, k)? {
                Some(v) => v * factor.powi(k as i32),
                None => return Ok(None),
            },
            Kind::Custom { f, .. } => match f(s, k) {
                Some(v) => v,
                None => return Ok(None),
            },
        }))
    }
}

impl CurveDefinition {
    fn from_kind(kind: Kind, domain: Domain, label: String) -> Self {
        CurveDefinition { kind: Arc::new(kind), domain, label }
    }

    /// Curve from a user-supplied derivative callback providing orders `0..=max_order`.
    ///
    /// Orders above `max_order` (up to 5) fall back to finite differences.
    pub fn from_fn<F>(label: impl Into<String>, domain: Domain, max_order: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> Option<Quaternion> + Send + Sync + 'static,
    {
        CurveDefinition::from_kind(Kind::Custom { f: Box::new(f), cap: max_order }, domain, label.into())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> Provenance {
        match self.kind.as_ref() {
            Kind::Samples(_) => Provenance::Sampled,
            Kind::Involute { evolute, .. } | Kind::Combination { base: evolute, .. } | Kind::Rescaled { base: evolute, .. }
                if evolute.provenance() == Provenance::Sampled =>
            {
                Provenance::Sampled
            }
            _ if self.kind.cap() >= MAX_ORDER => Provenance::Analytic,
            _ => Provenance::FiniteDifferenceWrapped,
        }
    }

    /// Orders served without finite differences, capped at 5.
    pub fn max_analytic_order(&self) -> usize {
        if self.provenance() == Provenance::Sampled {
            return 3;
        }
        self.kind.cap().min(MAX_ORDER)
    }

    /// Position (order 0) or derivative of order 1..=5 at `s`.
    pub fn eval(&self, s: f64, order: usize) -> Result<Quaternion> {
        if order > MAX_ORDER {
            return Err(Error::SpecInvalid(format!("derivative order {order} exceeds {MAX_ORDER}")));
        }
        if let Some(v) = self.kind.raw(s, order)? {
            return Ok(v);
        }
        let base = self.kind.cap();
        let h = default_step(order - base, s);
        let range = match self.kind.as_ref() {
            Kind::Samples(sp) => Some(sp.range()),
            _ => None,
        };
        fd_derivative(
            |x| self.kind.raw(x, base)?.ok_or(Error::DomainExceeded { s: x, order: base }),
            s,
            order - base,
            h,
            range,
        )
    }

    pub fn position(&self, s: f64) -> Result<Quaternion> {
        self.eval(s, 0)
    }

    /// Derivatives of orders 1..=4 at `s`.
    pub fn jet4(&self, s: f64) -> Result<[Quaternion; 4]> {
        Ok([self.eval(s, 1)?, self.eval(s, 2)?, self.eval(s, 3)?, self.eval(s, 4)?])
    }

    /// The curve `u -> self(factor * u)`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor != 0.0) {
            return Err(Error::SpecInvalid(format!("rescaling factor must be finite and nonzero, got {factor}")));
        }
        let (a, b) = (self.domain.min / factor, self.domain.max / factor);
        let domain = Domain::new(a.min(b), a.max(b));
        let label = format!("{}∘(s*{factor})", self.label);
        Ok(CurveDefinition::from_kind(Kind::Rescaled { base: self.clone(), factor }, domain, label))
    }

    /// The curve `s -> Σ_j coeffs[j] * self^(j)(s)`.
    pub fn derivative_combination(&self, coeffs: Vec<f64>, label: impl Into<String>) -> Self {
        CurveDefinition::from_kind(Kind::Combination { base: self.clone(), coeffs }, self.domain, label.into())
    }

    /// The curve `s -> self(s) + (c - s) self'(s)` on `domain`.
    pub(crate) fn tangent_offset(&self, c: f64, domain: Domain) -> Self {
        let label = format!("involute[c={c}]({})", self.label);
        CurveDefinition::from_kind(Kind::Involute { evolute: self.clone(), c }, domain, label)
    }
}

/// Builds a curve from its description.
pub fn build_curve(spec: &CurveSpec) -> Result<CurveDefinition> {
    spec.validate()?;
    let default = Domain::new(DEFAULT_DOMAIN.0, DEFAULT_DOMAIN.1);
    let label = spec.label();
    let curve = match spec {
        CurveSpec::ReferenceExample {} => CurveDefinition::from_kind(Kind::ReferenceExample, default, label),
        CurveSpec::Circular4 { amplitude, omega, drift_b, drift_c } => CurveDefinition::from_kind(
            Kind::Circular4 { amplitude: *amplitude, omega: *omega, drift_b: *drift_b, drift_c: *drift_c },
            default,
            label,
        ),
        CurveSpec::DoubleHelix { a, p, b, q } => {
            CurveDefinition::from_kind(Kind::DoubleHelix { a: *a, p: *p, b: *b, q: *q }, default, label)
        }
        CurveSpec::Samples { s, points } => {
            let values = points.iter().map(|p| Quaternion::from_coords(*p)).collect();
            let spline = CubicSpline::new(s.clone(), values)?;
            let domain = Domain::new(s[0], s[s.len() - 1]);
            CurveDefinition::from_kind(Kind::Samples(spline), domain, label)
        }
    };
    Ok(curve)
}

/// Result of a unit-speed test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSpeed {
    pub unit: bool,
    pub max_deviation: f64,
}

/// Checks `| ||x'(s)|| - 1 | <= tol` over `grid`.
pub fn is_unit_speed(curve: &CurveDefinition, grid: &[f64], tol: f64) -> Result<UnitSpeed> {
    let mut max_deviation: f64 = 0.0;
    for &s in grid {
        let dev = (curve.eval(s, 1)?.norm() - 1.0).abs();
        max_deviation = max_deviation.max(dev);
    }
    Ok(UnitSpeed { unit: max_deviation <= tol, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> CurveDefinition {
        build_curve(&CurveSpec::ReferenceExample {}).unwrap()
    }

    /// Closed-form k-th derivative of the reference example, written out by hand.
    fn example_derivative(s: f64, k: usize) -> [f64; 4] {
        let (c, sn) = ((s / 2.0).cos(), (s / 2.0).sin());
        let f = 0.5f64.powi(k as i32);
        match k {
            0 => [c - sn, c + sn, s / 2.0, s / 2.0],
            1 => [f * (-sn - c), f * (-sn + c), 0.5, 0.5],
            2 => [f * (-c + sn), f * (-c - sn), 0.0, 0.0],
            3 => [f * (sn + c), f * (sn - c), 0.0, 0.0],
            4 => [f * (c - sn), f * (c + sn), 0.0, 0.0],
            5 => [f * (-sn - c), f * (-sn + c), 0.0, 0.0],
            _ => unreachable!(),
        }
    }

    #[test]
    fn example_matches_hand_derivatives() {
        let curve = example();
        for s in [0.0, 0.4, 2.0, 7.5] {
            for k in 0..=5 {
                let got = curve.eval(s, k).unwrap();
                let want = Quaternion::from_coords(example_derivative(s, k));
                assert!((got - want).max_abs() < 1e-15, "k={k} s={s}");
            }
        }
        assert_eq!(curve.position(0.0).unwrap().coords(), [1.0, 1.0, 0.0, 0.0]);
        assert_eq!(curve.provenance(), Provenance::Analytic);
        assert_eq!(curve.max_analytic_order(), 5);
    }

    #[test]
    fn example_second_derivative_by_differences() {
        let curve = example();
        let d2 = fd_derivative(|s| curve.position(s), 0.0, 2, 1e-3, None).unwrap();
        let want = Quaternion::from_coords([-0.25, -0.25, 0.0, 0.0]);
        assert!((d2 - want).max_abs() < 1e-10);
        let d4 = fd_derivative(|s| curve.position(s), 1.0, 4, 1e-2, None).unwrap();
        assert!((d4 - curve.eval(1.0, 4).unwrap()).max_abs() < 1e-6);
    }

    #[test]
    fn degenerate_circular4_is_a_line() {
        let spec = CurveSpec::Circular4 { amplitude: 0.0, omega: 1.0, drift_b: 1.0, drift_c: 0.0 };
        let line = build_curve(&spec).unwrap();
        assert_eq!(line.position(2.5).unwrap().coords(), [0.0, 0.0, 2.5, 0.0]);
        let grid = line.domain().grid(50);
        assert!(is_unit_speed(&line, &grid, 1e-12).unwrap().unit);
    }

    #[test]
    fn double_helix_unit_speed() {
        let curve = build_curve(&CurveSpec::double_helix_unit(1.3, 0.7, 0.4, 2.2)).unwrap();
        let grid = curve.domain().grid(100);
        let r = is_unit_speed(&curve, &grid, 1e-10).unwrap();
        assert!(r.unit, "deviation {}", r.max_deviation);
    }

    #[test]
    fn fast_circular4_is_not_unit_speed() {
        // A²ω² + B² + C² = 4, speed 2.
        let spec = CurveSpec::Circular4 { amplitude: 1.0, omega: 2.0, drift_b: 0.0, drift_c: 0.0 };
        let curve = build_curve(&spec).unwrap();
        let r = is_unit_speed(&curve, &curve.domain().grid(20), 1e-9).unwrap();
        assert!(!r.unit);
        assert!((r.max_deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn example_unit_speed_analytic_and_sampled() {
        let curve = example();
        let grid = curve.domain().grid(200);
        let r = is_unit_speed(&curve, &grid, 1e-9).unwrap();
        assert!(r.unit && r.max_deviation < 1e-12);

        let s: Vec<f64> = uniform_grid(0.0, 2.0 * PI, 6284);
        let points = s.iter().map(|&x| curve.position(x).unwrap().coords()).collect();
        let sampled = build_curve(&CurveSpec::Samples { s: s.clone(), points }).unwrap();
        assert_eq!(sampled.provenance(), Provenance::Sampled);
        let inner = uniform_grid(0.01, 2.0 * PI - 0.01, 300);
        let r = is_unit_speed(&sampled, &inner, 1e-5).unwrap();
        assert!(r.unit, "sampled deviation {}", r.max_deviation);
    }

    #[test]
    fn json_specs() {
        let spec = CurveSpec::from_json(r#"{"type": "paper_example"}"#).unwrap();
        assert_eq!(spec, CurveSpec::ReferenceExample {});
        let spec = CurveSpec::from_json(r#"{"type":"circular4","A":1,"omega":0.5,"B":0.3,"C":0.1}"#).unwrap();
        assert!(matches!(spec, CurveSpec::Circular4 { amplitude, .. } if amplitude == 1.0));
        assert!(CurveSpec::from_json(r#"{"type":"double_helix","a":1,"p":1,"b":1,"q":1,"extra":2}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"type":"paper_example","A":1}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"type":"spiral"}"#).is_err());
    }

    #[test]
    fn invalid_samples_rejected() {
        let s: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let mut bad = s.clone();
        bad[5] = bad[4];
        let points = vec![[0.0; 4]; 12];
        assert!(build_curve(&CurveSpec::Samples { s: bad, points: points.clone() }).is_err());
        assert!(build_curve(&CurveSpec::Samples { s: s[..10].to_vec(), points: points[..10].to_vec() }).is_err());
        assert!(build_curve(&CurveSpec::Samples { s, points: points[..11].to_vec() }).is_err());
    }

    #[test]
    fn build_is_deterministic() {
        let spec = CurveSpec::double_helix_unit(1.0, 1.0, 0.5, 3.0);
        let (c1, c2) = (build_curve(&spec).unwrap(), build_curve(&spec).unwrap());
        for s in uniform_grid(0.0, 10.0, 17) {
            for k in 0..=5 {
                assert_eq!(c1.eval(s, k).unwrap(), c2.eval(s, k).unwrap());
            }
        }
    }

    #[test]
    fn custom_curve_falls_back_to_differences() {
        let exact = example();
        let inner = exact.clone();
        let custom = CurveDefinition::from_fn("custom", Domain::new(0.0, 10.0), 2, move |s, k| {
            if k <= 2 {
                inner.eval(s, k).ok()
            } else {
                None
            }
        });
        assert_eq!(custom.max_analytic_order(), 2);
        assert_eq!(custom.provenance(), Provenance::FiniteDifferenceWrapped);
        for k in 3..=5 {
            let err = (custom.eval(1.3, k).unwrap() - exact.eval(1.3, k).unwrap()).max_abs();
            assert!(err < 1e-6, "order {k}: {err}");
        }
    }

    #[test]
    fn rescaled_derivatives() {
        let curve = example();
        let fast = curve.rescaled(2.0).unwrap();
        assert_eq!(fast.domain().max, 2.0 * PI);
        let d = fast.eval(0.3, 3).unwrap();
        assert!((d - curve.eval(0.6, 3).unwrap() * 8.0).max_abs() < 1e-15);
    }

    #[test]
    fn grids() {
        assert!(uniform_grid(0.0, 1.0, 0).is_empty());
        assert_eq!(uniform_grid(0.5, 1.0, 1), vec![0.5]);
        let g = uniform_grid(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let d = Domain { min: 0.0, max: 1.0, excluded: Some((0.4, 0.6)) };
        assert_eq!(d.grid(5), vec![0.0, 0.25, 0.75, 1.0]);
        assert!(d.contains(0.4) && !d.contains(0.5));
    }

    fn loglog_slope(points: &[(f64, f64)]) -> f64 {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn finite_differences_converge_to_analytic_derivatives() {
        for name in ["paper_example", "circular4", "double_helix"] {
            let curve = build_curve(&CurveSpec::builtin(name).unwrap()).unwrap();
            for s in [0.4, 1.3, 5.0, 9.7] {
                for order in 1..=5 {
                    // below these steps rounding (eps / h^order) dominates truncation
                    let steps: &[f64] = if order == 1 { &[1e-1, 1e-2, 1e-3] } else { &[0.2, 0.1, 0.05] };
                    let exact = curve.eval(s, order).unwrap();
                    let points: Vec<(f64, f64)> = steps
                        .iter()
                        .map(|&h| {
                            let d: Quaternion = fd_derivative(|x| curve.position(x), s, order, h, None).unwrap();
                            (h.log10(), (d - exact).max_abs().log10())
                        })
                        .collect();
                    let slope = loglog_slope(&points);
                    assert!(slope >= 1.95, "{name} s={s} order {order}: slope {slope}");
                }
            }
        }
    }
}
