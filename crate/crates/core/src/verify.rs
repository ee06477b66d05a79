//! Verification suites over the built-in curves.
//!
//! Every gated check compares a maximum residual with a tolerance. Values
//! that are compared but not gated are listed under `reported`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{build_curve, uniform_grid, CurveDefinition, CurveSpec, Domain};
use crate::error::{Error, Result};
use crate::frenet::{
    frenet_apparatus, gram_error, sample_apparatus, serret_frenet_residual, tangent_normal, FrenetFrame4, Sign,
};
use crate::involute::{
    check_involute_definition, evolute_apparatus_from_involute, involute_curve, predicted_involute_apparatus,
    predicted_involute_curvatures, resolve_evolute_sign, wcurve_evolute, wcurve_involute_frame, InvoluteParams,
    SignResolution,
};
use crate::quaternion::{conjugate, cross4, det4, hform, qmul, Quaternion, Vec3};
use crate::spatial::{associated_spatial_curve, check_spatial_pair, discrete_curvature, rigid_rms, spatial_frame};

/// Report format version.
pub const SCHEMA_VERSION: u32 = 1;

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default number of grid points.
pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Algebra,
    Frenet,
    Involute,
    Evolute,
    Spatial,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "algebra", "frenet", "involute", "evolute", "spatial"];

    fn runs(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "algebra" => Suite::Algebra,
            "frenet" => Suite::Frenet,
            "involute" => Suite::Involute,
            "evolute" => Suite::Evolute,
            "spatial" => Suite::Spatial,
            other => return Err(Error::SpecInvalid(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::All, Suite::Algebra, Suite::Frenet, Suite::Involute, Suite::Evolute, Suite::Spatial]
            .iter()
            .position(|s| s == self)
            .unwrap_or(0);
        f.write_str(Suite::NAMES[i])
    }
}

/// Whether a residual must stay below or above its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    pub grid: String,
}

/// A compared quantity that does not affect the overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reported {
    pub id: String,
    pub description: String,
    pub value: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: Suite,
    pub tolerance: f64,
    pub passed: bool,
    /// Sign of the `rho N` term that reconstructs the evolute, when the evolute suite ran.
    pub resolved_sign: Option<Sign>,
    pub sign_resolution: Option<SignResolution>,
    pub checks: Vec<Check>,
    pub reported: Vec<Reported>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let op = if c.bound == Bound::Upper { "<=" } else { ">" };
            let _ = writeln!(
                out,
                "{} {:<40} {:.3e} {op} {:.2e}  [{}]",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.max_residual,
                c.tolerance,
                c.grid
            );
        }
        for r in &self.reported {
            let _ = writeln!(out, "INFO {:<40} {:.6e}  {}", r.id, r.value, r.note);
        }
        if let Some(res) = &self.sign_resolution {
            let sign = res.resolved.map_or("unresolved".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                "evolute reconstruction sign: {sign} (max residual +1: {:.3e}, -1: {:.3e})",
                res.residual_plus, res.residual_minus
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed",
            if self.passed { "PASSED" } else { "FAILED" },
            self.checks.len(),
            failed
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance of the checks held to the default tolerance.
    pub tol: f64,
    pub grid_points: usize,
    pub seed: u64,
    /// Negate `E` in the frames fed to the frame checks (fault injection).
    pub inject_eta_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: DEFAULT_TOL, grid_points: DEFAULT_GRID, seed: 0x5eed, inject_eta_fault: false }
    }
}

struct Collector {
    checks: Vec<Check>,
    reported: Vec<Reported>,
}

impl Collector {
    fn upper(&mut self, id: &str, description: &str, residual: f64, tolerance: f64, grid: &str) {
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            max_residual: residual,
            tolerance,
            bound: Bound::Upper,
            passed: residual <= tolerance,
            grid: grid.into(),
        });
    }

    fn lower(&mut self, id: &str, description: &str, value: f64, threshold: f64, grid: &str) {
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            max_residual: value,
            tolerance: threshold,
            bound: Bound::Lower,
            passed: value > threshold,
            grid: grid.into(),
        });
    }

    fn report(&mut self, id: &str, description: &str, value: f64, note: &str) {
        self.reported.push(Reported { id: id.into(), description: description.into(), value, note: note.into() });
    }
}

/// Runs the selected suites.
pub fn run_verify(suite: Suite, options: &VerifyOptions) -> Result<VerifyReport> {
    if !(options.tol > 0.0) {
        return Err(Error::SpecInvalid(format!("tolerance must be positive, got {}", options.tol)));
    }
    if options.grid_points < 3 {
        return Err(Error::SpecInvalid("verification needs at least 3 grid points".into()));
    }
    let mut col = Collector { checks: Vec::new(), reported: Vec::new() };
    let mut sign_resolution = None;
    if suite.runs(Suite::Algebra) {
        algebra_suite(&mut col, options);
    }
    if suite.runs(Suite::Frenet) {
        frenet_suite(&mut col, options)?;
    }
    if suite.runs(Suite::Involute) {
        involute_suite(&mut col, options)?;
    }
    if suite.runs(Suite::Evolute) {
        sign_resolution = Some(evolute_suite(&mut col, options)?);
    }
    if suite.runs(Suite::Spatial) {
        spatial_suite(&mut col, options)?;
    }
    let passed = col.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        suite,
        tolerance: options.tol,
        passed,
        resolved_sign: sign_resolution.and_then(|r| r.resolved),
        sign_resolution,
        checks: col.checks,
        reported: col.reported,
    })
}

pub fn example_curve() -> CurveDefinition {
    build_curve(&CurveSpec::ReferenceExample {}).expect("built-in curve")
}

/// The default unit-speed double helix.
pub fn helix_curve() -> CurveDefinition {
    build_curve(&CurveSpec::builtin("double_helix").expect("built-in")).expect("built-in curve")
}

/// The default unit-speed circular helix in a hyperplane.
pub fn circular_curve() -> CurveDefinition {
    build_curve(&CurveSpec::builtin("circular4").expect("built-in")).expect("built-in curve")
}

fn describe(curve: &CurveDefinition, grid: &[f64]) -> String {
    match (grid.first(), grid.last()) {
        (Some(a), Some(b)) => format!("{}, {} points on [{a:.6}, {b:.6}]", curve.label(), grid.len()),
        _ => format!("{}, empty grid", curve.label()),
    }
}

fn grid_without(domain: Domain, n: usize, params: InvoluteParams) -> Vec<f64> {
    domain.grid(n).into_iter().filter(|s| (s - params.c).abs() > params.exclusion_tol).collect()
}

/// Smallest over both signs of the largest deviation `|computed - sign * reference|`.
pub fn sign_aligned_deviation(computed: &[Quaternion], reference: &[Quaternion]) -> f64 {
    [1.0, -1.0]
        .iter()
        .map(|sg| computed.iter().zip(reference).map(|(c, p)| (*c - *p * *sg).max_abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

fn up_to_sign(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).max_abs().min((a + b).max_abs())
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

fn algebra_suite(col: &mut Collector, options: &VerifyOptions) {
    const N: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut assoc: f64 = 0.0;
    let mut mult: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut dot: f64 = 0.0;
    let mut spatial: f64 = 0.0;
    let mut split: f64 = 0.0;
    let mut wedge_orth: f64 = 0.0;
    let mut wedge_volume: f64 = 0.0;
    for _ in 0..N {
        let (p, q, r) = (random_quaternion(&mut rng), random_quaternion(&mut rng), random_quaternion(&mut rng));
        assoc = assoc.max((qmul(qmul(p, q), r) - qmul(p, qmul(q, r))).max_abs());
        let (np, nq) = (p.norm(), q.norm());
        mult = mult.max((qmul(p, q).norm() - np * nq).abs() / (np * nq));
        anti = anti.max((conjugate(qmul(p, q)) - qmul(conjugate(q), conjugate(p))).max_abs());
        let euclid: f64 = p.coords().iter().zip(q.coords()).map(|(a, b)| a * b).sum();
        dot = dot.max((hform(p, q) - euclid).abs());

        let (sp, sq) = (Quaternion::from_parts(0.0, p.vector()), Quaternion::from_parts(0.0, q.vector()));
        let expected = Quaternion::from_parts(-p.vector().dot(q.vector()), p.vector().cross(q.vector()));
        spatial = spatial.max((qmul(sp, sq) - expected).max_abs());
        let halves = (q + conjugate(q)) * 0.5 + (q - conjugate(q)) * 0.5;
        split = split.max((halves - q).max_abs());

        let w = cross4(p, q, r);
        wedge_orth = wedge_orth.max(hform(w, p).abs().max(hform(w, q).abs()).max(hform(w, r).abs()));
        let g = [[p.dot(p), p.dot(q), p.dot(r)], [q.dot(p), q.dot(q), q.dot(r)], [r.dot(p), r.dot(q), r.dot(r)]];
        let gram = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        wedge_volume = wedge_volume.max((w.norm() - gram.max(0.0).sqrt()).abs() / w.norm().max(1e-300));
    }
    let grid = format!("{N} random triples, components in [-1, 1)");
    col.upper("algebra.associativity", "(pq)r = p(qr)", assoc, 1e-12, &grid);
    col.upper("algebra.norm_multiplicative", "|pq| = |p||q| (relative)", mult, 1e-12, &grid);
    col.upper("algebra.conjugate_reverses_products", "conj(pq) = conj(q) conj(p)", anti, 1e-12, &grid);
    col.upper("algebra.hform_is_dot_product", "h(p, q) equals the Euclidean dot product", dot, 1e-12, &grid);
    col.upper("algebra.spatial_product", "pq = (-<p, q>, p x q) for spatial p, q", spatial, 1e-12, &grid);
    col.upper("algebra.scalar_vector_split", "q = (q + conj q)/2 + (q - conj q)/2", split, 1e-15, &grid);
    col.upper("algebra.wedge_orthogonal", "cross4(a, b, c) is orthogonal to a, b, c", wedge_orth, 1e-12, &grid);
    col.upper("algebra.wedge_volume", "|cross4(a, b, c)| = sqrt(Gram determinant) (relative)", wedge_volume, 1e-9, &grid);
}

/// Closed form of the reference example's frame at `s`.
pub fn example_reference_frame(s: f64) -> [Quaternion; 4] {
    let (c, sn) = ((s / 2.0).cos(), (s / 2.0).sin());
    [
        Quaternion::from_coords([0.5 * (-sn - c), 0.5 * (-sn + c), 0.5, 0.5]),
        Quaternion::from_coords([FRAC_1_SQRT_2 * (-c + sn), FRAC_1_SQRT_2 * (-c - sn), 0.0, 0.0]),
        Quaternion::from_coords([0.5 * (-c - sn), 0.5 * (c - sn), -0.5, 0.5]),
        Quaternion::from_coords([0.0, 0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
    ]
}

fn frenet_suite(col: &mut Collector, options: &VerifyOptions) -> Result<()> {
    let tol = options.tol;
    let n = options.grid_points;
    let example = example_curve();
    let grid = example.domain().grid(n);
    let desc = describe(&example, &grid);
    let series = sample_apparatus(&example, &grid)?;
    let r2_4 = SQRT_2 / 4.0;
    let curv = series
        .frames
        .iter()
        .map(|f| (f.kappa - r2_4).abs().max((f.k - r2_4).abs()).max(f.bitorsion.abs()))
        .fold(0.0, f64::max);
    col.upper("frenet.example_curvatures", "kappa = k = sqrt(2)/4, r - kappa = 0 on the example", curv, tol, &desc);
    col.upper("frenet.example_skipped_points", "no grid point of the example is singular", series.skipped.len() as f64, 0.0, &desc);

    let reference: Vec<[Quaternion; 4]> = series.frames.iter().map(|f| example_reference_frame(f.s)).collect();
    for (i, name) in ["T", "N", "B", "E"].iter().enumerate() {
        let computed: Vec<Quaternion> = series.frames.iter().map(|f| f.vectors()[i]).collect();
        let want: Vec<Quaternion> = reference.iter().map(|p| p[i]).collect();
        col.report(
            &format!("frenet.example_reference_{}", name.to_lowercase()),
            &format!("largest deviation of {name} from the reference closed form, best overall sign"),
            sign_aligned_deviation(&computed, &want),
            "reference closed forms of the example frame",
        );
    }

    let mut ortho: f64 = 0.0;
    let mut det: f64 = 0.0;
    let mut descs = Vec::new();
    for curve in [example.clone(), helix_curve(), circular_curve()] {
        let grid = curve.domain().grid(n);
        let s = sample_apparatus(&curve, &grid)?;
        for f in &s.frames {
            let f = if options.inject_eta_fault { FrenetFrame4 { e: -f.e, ..*f } } else { *f };
            ortho = ortho.max(f.orthonormality_error());
            det = det.max((f.det() - 1.0).abs());
        }
        descs.push(describe(&curve, &grid));
    }
    let all = descs.join("; ");
    col.upper("frenet.orthonormality", "{T, N, B, E} is orthonormal", ortho, tol, &all);
    col.upper("frenet.determinant", "det(T, N, B, E) = +1", det, tol, &all);

    let mut spread: f64 = 0.0;
    let mut wdescs = Vec::new();
    for curve in [helix_curve(), circular_curve()] {
        let grid = curve.domain().grid(n);
        let s = sample_apparatus(&curve, &grid)?;
        spread = spread.max(s.spread(|f| f.kappa)).max(s.spread(|f| f.k)).max(s.spread(|f| f.bitorsion));
        wdescs.push(describe(&curve, &grid));
    }
    col.upper("frenet.w_curve_constancy", "curvatures of w-curves are constant (max - min)", spread, 1e-8, &wdescs.join("; "));

    let helix = helix_curve();
    let h = 1e-4;
    let sample = uniform_grid(0.5, 12.0, 16);
    let mut rate: f64 = 0.0;
    for &s in &sample {
        let dt = (frenet_apparatus(&helix, s + h)?.t - frenet_apparatus(&helix, s - h)?.t) / (2.0 * h);
        rate = rate.max((dt.norm() - frenet_apparatus(&helix, s)?.kappa).abs());
    }
    col.upper("frenet.kappa_is_tangent_rate", "kappa = |T'| by central differences, h = 1e-4", rate, 1e-6, &describe(&helix, &sample));

    let fast = example.rescaled(2.0)?;
    let mut cov: f64 = 0.0;
    for &u in &uniform_grid(0.1, 6.0, 32) {
        let (a, b) = (frenet_apparatus(&fast, u)?, frenet_apparatus(&example, 2.0 * u)?);
        for (x, y) in a.vectors().iter().zip(b.vectors()) {
            cov = cov.max((*x - y).max_abs());
        }
        cov = cov.max((a.kappa - b.kappa).abs()).max((a.k - b.k).abs()).max((a.bitorsion - b.bitorsion).abs());
    }
    col.upper("frenet.reparametrization_invariance", "apparatus unchanged under s -> 2s", cov, tol, "paper_example, 32 points");

    let (residual, order) = ode_convergence(&[example, helix], &sample)?;
    col.upper("frenet.ode_residual", "Frenet equations, central differences at h = 1e-4", residual, 1e-6, "paper_example and double_helix, 16 points");
    col.lower("frenet.ode_convergence_order", "observed order from h = 1e-3 to 1e-4", order, 1.95, "paper_example and double_helix, 16 points");
    Ok(())
}

/// Largest residual at `h = 1e-4` and smallest observed convergence order
/// between `h = 1e-3` and `h = 1e-4`. Residuals that vanish to rounding at
/// both steps carry no order information and are skipped.
pub fn ode_convergence(curves: &[CurveDefinition], grid: &[f64]) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut order = f64::INFINITY;
    for curve in curves {
        for &s in grid {
            let coarse = serret_frenet_residual(curve, s, 1e-3)?;
            let fine = serret_frenet_residual(curve, s, 1e-4)?;
            for (c, f) in coarse.iter().zip(fine) {
                worst = worst.max(f);
                if *c > 1e-14 {
                    order = order.min((c / f).log10());
                }
            }
        }
    }
    Ok((worst, order))
}

fn involute_suite(col: &mut Collector, options: &VerifyOptions) -> Result<()> {
    let tol = options.tol;
    let n = options.grid_points;
    let example = example_curve();

    let params = InvoluteParams::new(4.0, 1e-3)?;
    let phi = involute_curve(&example, params)?;
    let grid: Vec<f64> = uniform_grid(0.0, 2.0 * PI, n).into_iter().filter(|s| (s - 4.0).abs() >= 1e-3).collect();
    let mut closed: f64 = 0.0;
    for &s in &grid {
        closed = closed.max((phi.position(s)? - example_involute_reference(4.0, s)).max_abs());
    }
    col.upper("involute.example_closed_form", "involute of the example with c = 4 matches its closed form", closed, tol, &describe(&phi, &grid));

    let helix = helix_curve();
    let hparams = InvoluteParams::for_domain(2.0 * PI + 0.5, helix.domain())?;
    let pairs = [(example.clone(), params, grid.clone()), (helix.clone(), hparams, grid_without(helix.domain(), n, hparams))];
    let mut distance: f64 = 0.0;
    let mut tangency: f64 = 0.0;
    let mut speed: f64 = 0.0;
    let mut descs = Vec::new();
    for (curve, p, g) in &pairs {
        let inv = involute_curve(curve, *p)?;
        for &s in g {
            distance = distance.max(((inv.position(s)? - curve.position(s)?).norm() - (p.c - s).abs()).abs());
            let kappa = frenet_apparatus(curve, s)?.kappa;
            speed = speed.max((inv.eval(s, 1)?.norm() - kappa * (p.c - s).abs()).abs());
        }
        tangency = tangency.max(check_involute_definition(curve, &inv, g)?);
        descs.push(format!("{} with c = {}", describe(curve, g), p.c));
    }
    let all = descs.join("; ");
    col.upper("involute.distance_law", "|phi - x| = |c - s|", distance, tol, &all);
    col.upper("involute.tangent_orthogonality", "h(T_phi, T_x) = 0", tangency, 1e-6, &all);
    col.upper("involute.speed_law", "|phi'| = kappa |c - s|", speed, 1e-8, &all);

    let hgrid = grid_without(helix.domain(), n, hparams);
    let hphi = involute_curve(&helix, hparams)?;
    let mut frame_dev: f64 = 0.0;
    let mut kappa_dev: f64 = 0.0;
    let mut kstar_dev: f64 = 0.0;
    let mut reference_kstar_dev: f64 = 0.0;
    let mut reference_third_dev: f64 = 0.0;
    let mut det_dev: f64 = 0.0;
    for &s in &hgrid {
        let pred = predicted_involute_apparatus(&helix, hparams, s)?;
        let direct = frenet_apparatus(&hphi, s)?;
        for (p, d) in pred.vectors().iter().zip(direct.vectors()) {
            frame_dev = frame_dev.max(up_to_sign(*p, d));
        }
        let c = pred.curvatures;
        kappa_dev = kappa_dev.max((c.kappa_phi / direct.kappa - 1.0).abs());
        kstar_dev = kstar_dev.max((c.k_star / direct.k - 1.0).abs());
        reference_kstar_dev = reference_kstar_dev.max((c.k_star_reference_form / direct.k - 1.0).abs());
        reference_third_dev = reference_third_dev.max((c.bitorsion_star_reference_form - direct.bitorsion).abs());
        det_dev = det_dev.max((pred.det() - 1.0).abs());
    }
    let hdesc = format!("{} with c = {}", describe(&helix, &hgrid), hparams.c);
    col.upper("involute.predicted_frame", "predicted involute frame equals the direct one (per-vector sign)", frame_dev, 1e-5, &hdesc);
    col.upper("involute.predicted_kappa", "predicted kappa_phi (relative)", kappa_dev, 1e-4, &hdesc);
    col.upper("involute.predicted_k_star", "predicted k* (relative)", kstar_dev, 1e-4, &hdesc);
    col.upper("involute.predicted_determinant", "predicted frame is right-handed", det_dev, 1e-9, &hdesc);
    col.report("involute.k_star_reference_form", "relative deviation of the reference k* quotient from the direct k*", reference_kstar_dev, "reference form lacks a factor 1/sqrt(kappa^2 + k^2)");
    col.report("involute.third_curvature_reference_form", "deviation of the reference r* - kappa_phi quotient from the direct value", reference_third_dev, "not gated");

    let mut kstar_zero: f64 = 0.0;
    for &s in grid.iter().step_by(8) {
        kstar_zero = kstar_zero.max(predicted_involute_curvatures(&example, params, s)?.k_star.abs());
    }
    col.upper("involute.example_k_star_vanishes", "predicted k* of the example's involute is 0", kstar_zero, 1e-8, &describe(&example, &grid));

    let (wdev, wdet) = wcurve_frame_deviation(&[(helix.clone(), hparams), (circular_curve(), InvoluteParams::for_domain(2.0 * PI + 0.5, circular_curve().domain())?)], n)?;
    col.upper("involute.w_curve_frame", "w-curve involute frame equals the direct frame (per-vector sign)", wdev, 1e-8, "double_helix and circular4, c = 2 pi + 0.5");
    col.report("involute.w_curve_frame_determinant", "det of the w-curve involute frame", wdet, "left-handed for either eta");
    Ok(())
}

/// Closed form of the example's involute with constant `c`.
pub fn example_involute_reference(c: f64, s: f64) -> Quaternion {
    let (cs, sn) = ((s / 2.0).cos(), (s / 2.0).sin());
    Quaternion::from_coords([
        0.5 * ((2.0 - c + s) * cs + (-2.0 - c + s) * sn),
        0.5 * ((2.0 + c - s) * cs + (2.0 - c + s) * sn),
        c / 2.0,
        c / 2.0,
    ])
}

/// Largest per-vector deviation of the w-curve involute frame from the direct
/// frame, and the frame's determinant. Where the involute lies in a
/// hyperplane its `B`, `E` are undefined; the w-curve `B`, `E` must then be
/// orthogonal to `phi'`, `phi''`, `phi'''`.
pub fn wcurve_frame_deviation(cases: &[(CurveDefinition, InvoluteParams)], n: usize) -> Result<(f64, f64)> {
    let mut dev: f64 = 0.0;
    let mut det = 0.0;
    for (curve, params) in cases {
        let phi = involute_curve(curve, *params)?;
        for s in grid_without(curve.domain(), n, *params) {
            let fx = frenet_apparatus(curve, s)?;
            let w = wcurve_involute_frame(&fx, Sign::Plus)?;
            det = det4(w[0], w[1], w[2], w[3]);
            match frenet_apparatus(&phi, s) {
                Ok(direct) => {
                    for (a, b) in w.iter().zip(direct.vectors()) {
                        dev = dev.max(up_to_sign(*a, b));
                    }
                }
                Err(Error::FrameUndefined { .. }) => {
                    let (t, nn, _) = tangent_normal(&phi, s)?;
                    dev = dev.max(up_to_sign(w[0], t)).max(up_to_sign(w[1], nn));
                    let d3 = phi.eval(s, 3)?;
                    let scale = d3.norm().max(1.0);
                    for v in &w[2..] {
                        dev = dev.max(hform(*v, t).abs()).max(hform(*v, nn).abs()).max(hform(*v, d3).abs() / scale);
                    }
                }
                Err(e) => return Err(e),
            }
            dev = dev.max(gram_error(&w));
        }
    }
    Ok((dev, det))
}

fn evolute_suite(col: &mut Collector, options: &VerifyOptions) -> Result<SignResolution> {
    let n = options.grid_points;
    let helix = helix_curve();
    let domain = helix.domain();
    let params = InvoluteParams::for_domain(domain.max + 1.0, domain)?;
    let grid = domain.grid(n);
    let desc = format!("{} with c = {}", describe(&helix, &grid), params.c);
    let res = resolve_evolute_sign(&helix, params, &grid, 1e-6)?;
    let (good, bad) = match res.resolved {
        Some(Sign::Minus) => (res.residual_minus, res.residual_plus),
        _ => (res.residual_plus, res.residual_minus),
    };
    col.upper("evolute.position_reconstruction", "phi + sign rho N - rho (k/kappa) E reproduces the evolute", good, 1e-6, &desc);
    col.lower("evolute.other_sign_rejected", "the opposite sign does not reproduce the evolute", bad, 1e-6, &desc);
    col.upper("evolute.b_coefficient_vanishes", "h(B_phi, x - phi) = 0", res.max_b_coefficient, 1e-6, &desc);
    col.upper("evolute.e_coefficient", "h(E_phi, x - phi) = -rho k / kappa", res.max_e_coefficient_error, 1e-6, &desc);
    col.upper("evolute.n_coefficient", "h(N_phi, x - phi) = rho", res.max_n_coefficient_error, 1e-6, &desc);

    let before = InvoluteParams::for_domain(domain.min - 1.0, domain)?;
    let early = resolve_evolute_sign(&helix, before, &grid, 1e-6)?;
    col.report(
        "evolute.reconstruction_with_c_before_curve",
        "smaller residual over both signs when c precedes the domain",
        early.residual_plus.min(early.residual_minus),
        "E term changes sign when c - s < 0 with this frame orientation",
    );

    let phi = helix.clone();
    let xi = wcurve_evolute(&phi, domain.min)?;
    let g = domain.grid(n);
    let mut tangent: f64 = 0.0;
    let mut frame: f64 = 0.0;
    let mut curv: f64 = 0.0;
    let mut involute_cond: f64 = 0.0;
    for &s in &g {
        let fp = frenet_apparatus(&phi, s)?;
        let fx = frenet_apparatus(&xi, s)?;
        let rec = evolute_apparatus_from_involute(&fp)?;
        tangent = tangent.max((fx.t - rec.t).max_abs());
        for (a, b) in rec.vectors().iter().zip(fx.vectors()) {
            frame = frame.max((*a - b).max_abs());
        }
        curv = curv
            .max((rec.kappa / fx.kappa - 1.0).abs())
            .max((rec.k / fx.k - 1.0).abs())
            .max((rec.bitorsion / fx.bitorsion - 1.0).abs());
        involute_cond = involute_cond.max(hform(fp.t, fx.t).abs());
    }
    let rdesc = format!("{} and its evolute, {} points", phi.label(), g.len());
    col.upper("evolute.round_trip_tangent", "T_x = B_phi", tangent, 1e-6, &rdesc);
    col.upper("evolute.round_trip_frame", "reconstructed {T, N, B, E} equals the evolute's frame", frame, 1e-6, &rdesc);
    col.upper("evolute.round_trip_curvatures", "reconstructed kappa, k, r - kappa (relative)", curv, 1e-4, &rdesc);
    col.upper("evolute.round_trip_pair_is_involute", "h(T_phi, T_x) = 0 on the reconstructed pair", involute_cond, 1e-6, &rdesc);

    let inv = involute_curve(&helix, params)?;
    let fx = frenet_apparatus(&helix, 1.0)?;
    let rec = evolute_apparatus_from_involute(&frenet_apparatus(&inv, 1.0)?)?;
    col.report(
        "evolute.round_trip_on_tangent_offset_involute",
        "relative kappa deviation when fed the involute x + (c - s) x' of a w-curve",
        (rec.kappa / fx.kappa - 1.0).abs(),
        "that involute is not a w-curve",
    );
    Ok(res)
}

fn spatial_suite(col: &mut Collector, options: &VerifyOptions) -> Result<()> {
    let tol = options.tol;
    let n = options.grid_points;
    let example = example_curve();
    let helix = helix_curve();
    let mut scalar: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    let mut rebuild: f64 = 0.0;
    let mut descs = Vec::new();
    for curve in [&example, &helix] {
        let grid = curve.domain().grid(n);
        for &s in &grid {
            let f = frenet_apparatus(curve, s)?;
            let sf = spatial_frame(&f)?;
            for v in sf.vectors() {
                scalar = scalar.max(v.scalar().abs());
            }
            ortho = ortho.max(gram_error(&sf.vectors()));
            rebuild = rebuild
                .max((qmul(sf.t, f.t) - f.n).max_abs())
                .max((qmul(sf.n, f.t) - f.b).max_abs())
                .max((qmul(sf.b, f.t) - f.e).max_abs());
        }
        descs.push(describe(curve, &grid));
    }
    let all = descs.join("; ");
    col.upper("spatial.frame_is_spatial", "t, n, b have zero scalar part", scalar, tol, &all);
    col.upper("spatial.frame_orthonormal", "t, n, b are orthonormal", ortho, tol, &all);
    col.upper("spatial.frame_reconstruction", "t T = N, n T = B, b T = E", rebuild, tol, &all);

    let grid = uniform_grid(0.0, 2.0 * PI, n);
    let mut kr: f64 = 0.0;
    for &s in &grid {
        let sf = spatial_frame(&frenet_apparatus(&example, s)?)?;
        kr = kr.max((sf.k - SQRT_2 / 4.0).abs()).max((sf.r - SQRT_2 / 4.0).abs());
    }
    let desc = describe(&example, &grid);
    col.upper("spatial.example_curvatures", "k = r = sqrt(2)/4 for the example", kr, tol, &desc);
    let alpha = associated_spatial_curve(&example, &grid, Vec3::new(0.0, SQRT_2, 0.0))?;
    let reference: Vec<Vec3> =
        grid.iter().map(|&s| Vec3::new(s / SQRT_2, SQRT_2 * (s / 2.0).cos(), SQRT_2 * (s / 2.0).sin())).collect();
    col.upper("spatial.example_curve", "integrated curve matches the closed form after rigid alignment (RMS)", rigid_rms(&alpha, &reference)?, 1e-5, &desc);
    let kd = discrete_curvature(&alpha).iter().map(|k| (k - SQRT_2 / 4.0).abs()).fold(0.0, f64::max);
    col.upper("spatial.discrete_curvature", "three-point curvature of the integrated curve is sqrt(2)/4", kd, 1e-4, &desc);

    let params = InvoluteParams::new(4.0, 1e-3)?;
    let ex = check_spatial_pair(&example, params, &grid)?;
    let overlap = ex.tangent_overlap.iter().map(|h| (h - FRAC_1_SQRT_2).abs()).fold(0.0, f64::max);
    col.upper("spatial.example_tangent_overlap", "h(t, t*) = 1/sqrt(2) for the example with c = 4", overlap, 1e-6, &desc);
    let hparams = InvoluteParams::for_domain(2.0 * PI + 0.5, helix.domain())?;
    let hrep = check_spatial_pair(&helix, hparams, &helix.domain().grid(n))?;
    col.upper("spatial.tangent_overlap", "h(t, t*) = kappa / sqrt(kappa^2 + k^2)", hrep.max_overlap_deviation.max(ex.max_overlap_deviation), 1e-6, "paper_example and double_helix");
    col.upper("spatial.no_normal_component", "<t*, n> = 0", hrep.max_normal_component.max(ex.max_normal_component), 1e-6, "paper_example and double_helix");
    Ok(())
}
