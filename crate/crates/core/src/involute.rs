//! Involutes of unit-speed curves and reconstruction of the evolute.
//!
//! The involute of `x` with constant `c` is `phi(s) = x(s) + (c - s) x'(s)`,
//! kept in the evolute's parameter `s`.

use serde::{Deserialize, Serialize};

use crate::curve::{fd_derivative, default_step, is_unit_speed, CurveDefinition, Domain};
use crate::error::{Error, Result};
use crate::frenet::{frenet_apparatus, sample_apparatus, FrenetFrame4, Sign, FRAME_ETA};
use crate::quaternion::{det4, hform, Quaternion};

/// Unit-speed tolerance required of an evolute.
pub const UNIT_SPEED_TOL: f64 = 1e-6;

/// Grid size of the unit-speed check on an evolute.
const UNIT_SPEED_SAMPLES: usize = 257;

/// Relative size under which the higher-frame radicand counts as zero.
pub const INDETERMINATE_TOL: f64 = 1e-8;

/// Involute constant `c` and the half-width of the band excluded around `s = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvoluteParams {
    pub c: f64,
    pub exclusion_tol: f64,
}

impl InvoluteParams {
    pub fn new(c: f64, exclusion_tol: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::SpecInvalid(format!("involute constant must be finite, got {c}")));
        }
        if !(exclusion_tol > 0.0 && exclusion_tol.is_finite()) {
            return Err(Error::SpecInvalid(format!("exclusion radius must be positive, got {exclusion_tol}")));
        }
        Ok(InvoluteParams { c, exclusion_tol })
    }

    /// Exclusion radius `1e-3 * (domain length)`.
    pub fn for_domain(c: f64, domain: Domain) -> Result<Self> {
        InvoluteParams::new(c, 1e-3 * domain.len())
    }

    pub fn lambda(&self, s: f64) -> f64 {
        self.c - s
    }

    fn check_admissible(&self, s: f64) -> Result<()> {
        if (self.c - s).abs() <= self.exclusion_tol {
            Err(Error::InvoluteSingular { s, c: self.c })
        } else {
            Ok(())
        }
    }
}

/// The involute `x + (c - s) x'` of a unit-speed curve.
pub fn involute_curve(evolute: &CurveDefinition, params: InvoluteParams) -> Result<CurveDefinition> {
    let domain = evolute.domain();
    let check = is_unit_speed(evolute, &domain.grid(UNIT_SPEED_SAMPLES), UNIT_SPEED_TOL)?;
    if !check.unit {
        return Err(Error::NotUnitSpeed { max_deviation: check.max_deviation });
    }
    let (lo, hi) = (params.c - params.exclusion_tol, params.c + params.exclusion_tol);
    if lo <= domain.min && hi >= domain.max {
        return Err(Error::EmptyDomain { c: params.c });
    }
    let excluded = if hi > domain.min && lo < domain.max { Some((lo, hi)) } else { None };
    Ok(evolute.tangent_offset(params.c, Domain { excluded, ..domain }))
}

/// Largest `|h(T_phi, T_x)|` over `grid`; zero for an involute-evolute pair.
pub fn check_involute_definition(evolute: &CurveDefinition, involute: &CurveDefinition, grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in grid {
        let ta = unit_tangent(evolute, s)?;
        let tb = unit_tangent(involute, s)?;
        worst = worst.max(hform(ta, tb).abs());
    }
    Ok(worst)
}

fn unit_tangent(curve: &CurveDefinition, s: f64) -> Result<Quaternion> {
    let d = curve.eval(s, 1)?;
    let v = d.norm();
    if v == 0.0 || !v.is_finite() {
        return Err(Error::CurveSingular { s });
    }
    Ok(d / v)
}

/// Curvature functions of a curve and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureJet {
    pub kappa: f64,
    pub dkappa: f64,
    pub ddkappa: f64,
    pub k: f64,
    pub dk: f64,
    pub ddk: f64,
    pub bitorsion: f64,
    pub dbitorsion: f64,
}

/// Curvatures at `s` with first and second derivatives by central differences.
pub fn curvature_jet(curve: &CurveDefinition, s: f64) -> Result<CurvatureJet> {
    let f0 = frenet_apparatus(curve, s)?;
    let diff = |pick: fn(&FrenetFrame4) -> f64, order: usize| {
        fd_derivative(|x| frenet_apparatus(curve, x).map(|f| pick(&f)), s, order, default_step(order, s), None)
    };
    Ok(CurvatureJet {
        kappa: f0.kappa,
        dkappa: diff(|f| f.kappa, 1)?,
        ddkappa: diff(|f| f.kappa, 2)?,
        k: f0.k,
        dk: diff(|f| f.k, 1)?,
        ddk: diff(|f| f.k, 2)?,
        bitorsion: f0.bitorsion,
        dbitorsion: diff(|f| f.bitorsion, 1)?,
    })
}

/// Curvatures of the involute predicted from the evolute's curvatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedCurvatures {
    pub s: f64,
    pub lambda: f64,
    pub kappa_phi: f64,
    /// Second curvature, `sqrt(R) / (kappa |c - s| (kappa^2 + k^2))`.
    pub k_star: f64,
    /// The reference closed form `sqrt(R) / (kappa |c - s| sqrt(kappa^2 + k^2))`.
    pub k_star_reference_form: f64,
    /// The reference quotient for the third curvature `r* - kappa_phi`.
    pub bitorsion_star_reference_form: f64,
    /// `R = k^4 (r - kappa)^2 + kappa^2 k^2 (r - kappa)^2 + (kappa' k - kappa k')^2`.
    pub radicand: f64,
}

fn predicted_from_jet(s: f64, params: InvoluteParams, j: &CurvatureJet) -> Result<PredictedCurvatures> {
    params.check_admissible(s)?;
    if !(j.kappa > 0.0) {
        return Err(Error::CurvatureZero { s });
    }
    let lambda = params.lambda(s);
    let CurvatureJet { kappa, dkappa, ddkappa, k, dk, ddk, bitorsion: tau, dbitorsion } = *j;
    let rho0_sq = kappa * kappa + k * k;
    let rho0 = rho0_sq.sqrt();
    let cross = dkappa * k - kappa * dk;
    let radicand = k.powi(4) * tau * tau + kappa * kappa * k * k * tau * tau + cross * cross;
    let root = radicand.sqrt();

    let kappa_phi = rho0 / (kappa * lambda.abs());
    let k_star = root / (kappa * lambda.abs() * rho0_sq);
    let k_star_reference_form = root / (kappa * lambda.abs() * rho0);

    let numerator = lambda
        * (-kappa * ddkappa * k * k * tau + 2.0 * kappa * dkappa * k * dk * tau + kappa * kappa * k * ddk * tau
            - 2.0 * kappa * kappa * k * k * tau
            - kappa * kappa * k * k * tau.powi(3)
            - kappa * kappa * k * dk * dbitorsion);
    let denominator = lambda * lambda * kappa * kappa / rho0 * (k.powi(4) * tau * tau + kappa * kappa * k * k * tau * tau)
        + cross * cross;
    let bitorsion_star_reference_form = numerator / denominator;

    Ok(PredictedCurvatures { s, lambda, kappa_phi, k_star, k_star_reference_form, bitorsion_star_reference_form, radicand })
}

/// Involute curvatures predicted from the evolute at `s`.
pub fn predicted_involute_curvatures(
    evolute: &CurveDefinition,
    params: InvoluteParams,
    s: f64,
) -> Result<PredictedCurvatures> {
    params.check_admissible(s)?;
    predicted_from_jet(s, params, &curvature_jet(evolute, s)?)
}

/// Involute frame and curvatures predicted from the evolute's apparatus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedInvoluteApparatus {
    pub t: Quaternion,
    pub n: Quaternion,
    pub b: Quaternion,
    pub e: Quaternion,
    pub eta: Sign,
    pub curvatures: PredictedCurvatures,
}

impl PredictedInvoluteApparatus {
    pub fn vectors(&self) -> [Quaternion; 4] {
        [self.t, self.n, self.b, self.e]
    }

    pub fn det(&self) -> f64 {
        det4(self.t, self.n, self.b, self.e)
    }
}

/// Full predicted apparatus of the involute at `s`.
///
/// `T_phi = N`, `N_phi = (-kappa T + k B) / sqrt(kappa^2 + k^2)`, and `E_phi`,
/// `B_phi` from the radicand expansion, with the frame orientation `eta` of
/// the apparatus formula.
pub fn predicted_involute_apparatus(
    evolute: &CurveDefinition,
    params: InvoluteParams,
    s: f64,
) -> Result<PredictedInvoluteApparatus> {
    params.check_admissible(s)?;
    let frame = frenet_apparatus(evolute, s)?;
    let jet = curvature_jet(evolute, s)?;
    let curvatures = predicted_from_jet(s, params, &jet)?;
    let CurvatureJet { kappa, dkappa, k, dk, bitorsion: tau, .. } = jet;
    let rho0 = (kappa * kappa + k * k).sqrt();
    let root = curvatures.radicand.sqrt();
    if !(root > INDETERMINATE_TOL * rho0 * rho0) {
        return Err(Error::HigherFrameIndeterminate { s, radicand: curvatures.radicand });
    }
    let eta = FRAME_ETA;
    let cross = dkappa * k - kappa * dk;
    let FrenetFrame4 { t, n, b, e, .. } = frame;
    let e_phi = (t * (k * k * tau) + b * (kappa * k * tau) + e * cross) * (eta.value() / root);
    let b_phi = ((t * k + b * kappa) * cross - e * (k * tau * rho0 * rho0)) * (eta.value() / (rho0 * root));
    Ok(PredictedInvoluteApparatus {
        t: n,
        n: (b * k - t * kappa) / rho0,
        b: b_phi,
        e: e_phi,
        eta,
        curvatures,
    })
}

/// Involute frame `{T, N, B, E}` built from a w-curve evolute's frame.
///
/// `T = N_x`, `N = (-kappa T_x + k B_x) / r0`, `B = eta E_x`,
/// `E = eta (k T_x + kappa B_x) / r0` with `r0 = sqrt(kappa^2 + k^2)`.
pub fn wcurve_involute_frame(frame: &FrenetFrame4, eta: Sign) -> Result<[Quaternion; 4]> {
    let FrenetFrame4 { t, n, b, e, kappa, k, .. } = *frame;
    let rho0 = (kappa * kappa + k * k).sqrt();
    if !(rho0 > 0.0) {
        return Err(Error::CurvatureZero { s: frame.s });
    }
    let eta = eta.value();
    Ok([n, (b * k - t * kappa) / rho0, e * eta, (t * k + b * kappa) * (eta / rho0)])
}

/// Evolute point `phi + sign * rho N_phi - rho (k / kappa_x) E_phi` with `rho = 1 / kappa_phi`.
pub fn evolute_position_from_involute(frame: &FrenetFrame4, k: f64, kappa_xi: f64, sign: Sign) -> Result<Quaternion> {
    if !(frame.kappa > 0.0) || !(kappa_xi > 0.0) {
        return Err(Error::CurvatureZero { s: frame.s });
    }
    let rho = frame.kappa.recip();
    Ok(frame.point + frame.n * (sign.value() * rho) - frame.e * (rho * k / kappa_xi))
}

/// Components of `target - phi` along `N_phi`, `B_phi`, `E_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameCoefficients {
    pub along_n: f64,
    pub along_b: f64,
    pub along_e: f64,
}

pub fn frame_coefficients(frame: &FrenetFrame4, target: Quaternion) -> FrameCoefficients {
    let d = target - frame.point;
    FrameCoefficients { along_n: hform(frame.n, d), along_b: hform(frame.b, d), along_e: hform(frame.e, d) }
}

/// Direct involute frame at `s` with `(B, E)` oriented like the w-curve frame
/// for `eta = +1`; returns the involute and evolute frames.
pub fn oriented_involute_frame(
    evolute: &CurveDefinition,
    involute: &CurveDefinition,
    s: f64,
) -> Result<(FrenetFrame4, FrenetFrame4)> {
    let fx = frenet_apparatus(evolute, s)?;
    let mut fp = frenet_apparatus(involute, s)?;
    let reference = wcurve_involute_frame(&fx, Sign::Plus)?;
    if hform(fp.e, reference[3]) < 0.0 {
        fp.b = -fp.b;
        fp.e = -fp.e;
        fp.eta = fp.eta.flip();
    }
    Ok((fp, fx))
}

/// Outcome of reconstructing evolute points with both signs of the `rho N` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignResolution {
    /// The unique sign reproducing the evolute within the tolerance, if any.
    pub resolved: Option<Sign>,
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// Largest `|h(B_phi, x - phi)|`.
    pub max_b_coefficient: f64,
    /// Largest `|h(E_phi, x - phi) + rho k / kappa_x|`.
    pub max_e_coefficient_error: f64,
    /// Largest `|h(N_phi, x - phi) - rho|`.
    pub max_n_coefficient_error: f64,
    pub points: usize,
}

/// Reconstructs the evolute from the oriented involute frame at every
/// admissible grid point and reports which sign of `rho N_phi` works.
pub fn resolve_evolute_sign(
    evolute: &CurveDefinition,
    params: InvoluteParams,
    grid: &[f64],
    tol: f64,
) -> Result<SignResolution> {
    let phi = involute_curve(evolute, params)?;
    let mut res = SignResolution {
        resolved: None,
        residual_plus: 0.0,
        residual_minus: 0.0,
        max_b_coefficient: 0.0,
        max_e_coefficient_error: 0.0,
        max_n_coefficient_error: 0.0,
        points: 0,
    };
    for &s in grid.iter().filter(|&&s| params.check_admissible(s).is_ok()) {
        let (fp, fx) = oriented_involute_frame(evolute, &phi, s)?;
        let target = evolute.position(s)?;
        let plus = evolute_position_from_involute(&fp, fx.k, fx.kappa, Sign::Plus)?;
        let minus = evolute_position_from_involute(&fp, fx.k, fx.kappa, Sign::Minus)?;
        res.residual_plus = res.residual_plus.max((plus - target).max_abs());
        res.residual_minus = res.residual_minus.max((minus - target).max_abs());
        let rho = fp.kappa.recip();
        let co = frame_coefficients(&fp, target);
        res.max_b_coefficient = res.max_b_coefficient.max(co.along_b.abs());
        res.max_e_coefficient_error = res.max_e_coefficient_error.max((co.along_e + rho * fx.k / fx.kappa).abs());
        res.max_n_coefficient_error = res.max_n_coefficient_error.max((co.along_n - rho).abs());
        res.points += 1;
    }
    res.resolved = match (res.residual_plus <= tol, res.residual_minus <= tol) {
        (true, false) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    };
    Ok(res)
}

/// Evolute apparatus reconstructed from an involute's apparatus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvoluteApparatus {
    pub t: Quaternion,
    pub n: Quaternion,
    pub b: Quaternion,
    pub e: Quaternion,
    pub kappa: f64,
    pub k: f64,
    pub bitorsion: f64,
    pub eta: Sign,
}

impl EvoluteApparatus {
    pub fn vectors(&self) -> [Quaternion; 4] {
        [self.t, self.n, self.b, self.e]
    }

    pub fn det(&self) -> f64 {
        det4(self.t, self.n, self.b, self.e)
    }
}

/// Orientation of the reconstructed `E` and `B` giving a right-handed frame.
pub const EVOLUTE_ETA: Sign = Sign::Plus;

/// Evolute apparatus from the involute's frame and curvatures.
///
/// With `S = k*^2 + (r* - kappa_phi)^2`:
///
/// ```text
/// T = B_phi
/// N = (-k* N_phi + (r* - kappa_phi) E_phi) / sqrt(S)
/// E = eta ((r* - kappa_phi) N_phi + k* E_phi) / sqrt(S)
/// B = eta T_phi
/// kappa = kappa_phi S^(3/2) / (k* D),  k = kappa_phi^2 sqrt(S) / D,
/// r - kappa = kappa_phi^2 (r* - kappa_phi) sqrt(S) / (k* D)
/// ```
///
/// where `D = S + kappa_phi (r* - kappa_phi)`.
pub fn evolute_apparatus_from_involute(phi: &FrenetFrame4) -> Result<EvoluteApparatus> {
    let FrenetFrame4 { t, n, b, e, kappa: kp, k: ks, bitorsion: tau, .. } = *phi;
    let big_s = ks * ks + tau * tau;
    let scale = kp * kp;
    if !(big_s.sqrt() > INDETERMINATE_TOL * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::HigherFrameIndeterminate { s: phi.s, radicand: big_s });
    }
    let root = big_s.sqrt();
    let denom = big_s + kp * tau;
    if denom.abs() <= INDETERMINATE_TOL * (big_s + kp * tau.abs()) {
        return Err(Error::DenominatorZero { value: denom });
    }
    if ks.abs() <= INDETERMINATE_TOL * root {
        return Err(Error::DenominatorZero { value: ks });
    }
    let eta = EVOLUTE_ETA;
    Ok(EvoluteApparatus {
        t: b,
        n: (e * tau - n * ks) / root,
        b: t * eta.value(),
        e: (n * tau + e * ks) * (eta.value() / root),
        kappa: kp * big_s * root / (ks * denom),
        k: kp * kp * root / denom,
        bitorsion: kp * kp * tau * root / (ks * denom),
        eta,
    })
}

/// Whether `kappa`, `k` and `r - kappa` vary by at most `tol` over `grid`.
pub fn is_w_curve(curve: &CurveDefinition, grid: &[f64], tol: f64) -> Result<bool> {
    let series = sample_apparatus(curve, grid)?;
    if let Some(first) = series.skipped.first() {
        return Err(first.error.clone());
    }
    Ok(series.spread(|f| f.kappa) <= tol && series.spread(|f| f.k) <= tol && series.spread(|f| f.bitorsion) <= tol)
}

/// Evolute of a unit-speed w-curve `phi`, `phi + rho N - rho m E` with
/// `rho = 1 / kappa_phi` and `m = kappa_phi k* / (k*^2 + (r* - kappa_phi)^2)`.
///
/// The result is a fixed linear combination of `phi` and its first four
/// derivatives, so it is analytic wherever `phi` is.
pub fn wcurve_evolute(phi: &CurveDefinition, s0: f64) -> Result<CurveDefinition> {
    let f = frenet_apparatus(phi, s0)?;
    let (kp, ks, tau) = (f.kappa, f.k, f.bitorsion);
    if tau.abs() <= INDETERMINATE_TOL * kp {
        return Err(Error::HigherFrameIndeterminate { s: s0, radicand: tau * tau });
    }
    let rho = kp.recip();
    let m = kp * ks / (ks * ks + tau * tau);
    // Unit-speed w-curve: N = phi''/kappa, E = ((phi'''' + kappa^2 phi'')/(kappa k) + k phi''/kappa) / tau.
    let e_scale = -rho * m / tau;
    let coeffs = vec![
        1.0,
        0.0,
        rho / kp + e_scale * (kp / ks + ks / kp),
        0.0,
        e_scale / (kp * ks),
    ];
    Ok(phi.derivative_combination(coeffs, format!("evolute({})", phi.label())))
}
