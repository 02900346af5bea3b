//! Residual checks of the constant-angle relations along a traced
//! intersection, the classical line-of-curvature corollaries and the parity
//! verdict for the principal foliations.
//!
//! Angle convention: `phi` is the Euler angle from the larger-curvature
//! principal direction to the tangent, so the geodesic torsion is
//! `(lambda - mu) sin(phi) cos(phi)`. The relation between the two surfaces
//! is stated here with `sin(2 phi)`, i.e. `(lambda1 - mu1) sin(2 phi1) =
//! (lambda2 - mu2) sin(2 phi2)`, which is twice the torsion equality.
//!
//! The parameter `u` used by the derivation checks is arclength, signed so
//! that `beta = pi/2` (it runs against the tangent when the measured `beta`
//! is `3 pi / 2`).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::foliation::{disc_index_split, find_umbilics, FoliationReport, SurfaceFoliation, UMBILIC_RATIO};
use crate::intersection_trace::{
    angle_profile, beta_profile, chart_derivative, phi_profiles, torsion_profiles, TracedIntersection,
};
use crate::numeric::derivative_along;
use crate::oriented_line_space::{angle_between_dot, cone_param_a1, AngleConfig};
use crate::support_surface::{principal_data, SupportSurface};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Line-of-curvature predicate threshold on `max |sin phi| |lambda - mu| L`.
pub const CURVATURE_LINE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityVerdict {
    ConsistentBothOrientable,
    ConsistentBothNonOrientable,
    Violation,
    NotApplicable(String),
}

impl ParityVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Self::ConsistentBothOrientable | Self::ConsistentBothNonOrientable)
    }
}

/// Parity verdict from the gates and the two windings.
pub fn parity_verdict(constant_angle: bool, umbilic_free: bool, windings: Option<(i64, i64)>) -> ParityVerdict {
    if !umbilic_free {
        return ParityVerdict::NotApplicable("umbilic on curve".into());
    }
    if !constant_angle {
        return ParityVerdict::NotApplicable("angle not constant".into());
    }
    match windings {
        None => ParityVerdict::NotApplicable("windings unavailable".into()),
        Some((n, m)) if (n - m).rem_euclid(2) != 0 => ParityVerdict::Violation,
        Some((n, _)) if n.rem_euclid(2) == 0 => ParityVerdict::ConsistentBothOrientable,
        Some(_) => ParityVerdict::ConsistentBothNonOrientable,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub constant_angle: bool,
    pub angle_deviation: f64,
    pub umbilic_free: [bool; 2],
    /// Largest residual per check.
    pub residuals: BTreeMap<String, f64>,
    pub windings: Option<(i64, i64)>,
    pub parity_verdict: ParityVerdict,
    pub defect_final_max: Option<f64>,
    pub torsion_gap_max: Option<f64>,
    pub classical: Option<ClassicalVerdict>,
    /// Checks that were skipped, with the reason.
    pub skipped: BTreeMap<String, String>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn require_constant(curve: &TracedIntersection) -> Result<()> {
    let prof = angle_profile(curve);
    if !prof.constant {
        return Err(GeomError::NotConstantAngle(prof.max_deviation));
    }
    Ok(())
}

fn require_umbilic_free(curve: &TracedIntersection) -> Result<()> {
    match curve.umbilic_on_curve.iter().flatten().next() {
        Some(&k) => Err(GeomError::UmbilicOnCurve(k)),
        None => Ok(()),
    }
}

/// Rate of change of an angle sequence, differentiated through `e^{i a}` so
/// that wrapping and winding do not matter.
fn angle_rate(s: &[f64], angles: &[f64], closed: bool) -> Vec<f64> {
    let z: Vec<Complex64> = angles.iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
    let dz = derivative_along(s, &z, closed);
    z.iter().zip(&dz).map(|(z, d)| (z.conj() * d).im).collect()
}

/// `(lambda - mu) sin(2 phi)` per sample for both surfaces.
fn weighted_sines(curve: &TracedIntersection) -> Result<[Vec<f64>; 2]> {
    require_umbilic_free(curve)?;
    let mut out = [Vec::new(), Vec::new()];
    for p in &curve.samples {
        for (slot, (cd, phi)) in [(&p.curv1, p.phi1), (&p.curv2, p.phi2)].into_iter().enumerate() {
            let phi = phi.ok_or(GeomError::UmbilicOnCurve(0))?;
            let pd = principal_data(cd)?;
            out[slot].push((pd.lambda - pd.mu) * (2.0 * phi).sin());
        }
    }
    Ok(out)
}

/// The defect `(lambda1 - mu1) sin(2 phi1) - (lambda2 - mu2) sin(2 phi2)`
/// without the constant-angle gate (a diagnostic on arbitrary curves).
pub fn defect_final_raw(curve: &TracedIntersection) -> Result<Vec<f64>> {
    let [a, b] = weighted_sines(curve)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

pub fn defect_final(curve: &TracedIntersection) -> Result<Vec<f64>> {
    require_constant(curve)?;
    defect_final_raw(curve)
}

/// Both printed forms of the shear relation per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaKappaResiduals {
    /// `|(s1 e^{2iA1} - c.c.)/k1 - s2/k2 q + conj(s2)/k2 / q|` with
    /// `q = (e^{iA1} - eps xi1)^2 / (1 - e^{iA1} eps conj(xi1))^2`.
    pub dressed: Vec<f64>,
    /// `|(s1 e^{2iA1} - c.c.)/k1 - (s2 e^{2iA2} - c.c.)/k2|` with `A2`
    /// found independently by placing `xi1` on the angle circle about `xi2`.
    pub a2_form: Vec<f64>,
    /// Largest `|dressed - a2_form|` of the complex expressions.
    pub consistency: f64,
}

pub fn sigma_kappa_raw(curve: &TracedIntersection) -> Result<SigmaKappaResiduals> {
    let mut dressed = Vec::with_capacity(curve.samples.len());
    let mut a2_form = Vec::with_capacity(curve.samples.len());
    let mut consistency: f64 = 0.0;
    for p in &curve.samples {
        let cfg = AngleConfig::from_alpha(p.alpha)?;
        let eps = cfg.epsilon();
        let e1 = Complex64::from_polar(1.0, p.a1);
        let (s1, k1) = (p.curv1.sigma, p.curv1.kappa);
        let (s2, k2) = (p.curv2.sigma, p.curv2.kappa);
        let first = (s1 * e1 * e1 - s1.conj() * e1.conj() * e1.conj()) / k1;
        let num = e1 - eps * p.xi1;
        let den = 1.0 - e1 * eps * p.xi1.conj();
        let q = (num * num) / (den * den);
        let d = first - s2 / k2 * q + s2.conj() / k2 / q;
        let a2 = cone_param_a1(p.xi2, p.xi1, &cfg, 1e-8)?;
        let e2 = Complex64::from_polar(1.0, a2);
        let f = first - (s2 * e2 * e2 - s2.conj() * e2.conj() * e2.conj()) / k2;
        consistency = consistency.max((d - f).norm());
        dressed.push(d.norm());
        a2_form.push(f.norm());
    }
    Ok(SigmaKappaResiduals {
        dressed,
        a2_form,
        consistency,
    })
}

pub fn sigma_kappa_relation(curve: &TracedIntersection) -> Result<SigmaKappaResiduals> {
    require_constant(curve)?;
    sigma_kappa_raw(curve)
}

/// Chain-rule identities for `eta1`, `r1` (and the same for surface 2)
/// along the curve, plus the differentiated final relation when it applies.
pub fn derivative_identity_checks(curve: &TracedIntersection) -> Result<BTreeMap<String, f64>> {
    let s = curve.arclengths();
    if s.len() < 12 {
        return Err(GeomError::SamplingTooCoarse(curve.total_length));
    }
    let closed = curve.closed;
    let mut out = BTreeMap::new();
    for slot in 0..2 {
        let xi: Vec<Complex64> = curve
            .samples
            .iter()
            .map(|p| if slot == 0 { p.xi1 } else { p.xi2 })
            .collect();
        let cds: Vec<_> = curve
            .samples
            .iter()
            .map(|p| if slot == 0 { p.curv1 } else { p.curv2 })
            .collect();
        let eta: Vec<Complex64> = cds.iter().map(|c| c.eta).collect();
        let r: Vec<f64> = cds.iter().map(|c| c.r).collect();
        let dxi = derivative_along(&s, &xi, closed);
        let deta = derivative_along(&s, &eta, closed);
        let dr = derivative_along(&s, &r, closed);
        let mut e_eta: f64 = 0.0;
        let mut e_r: f64 = 0.0;
        for k in 0..s.len() {
            let (x, c, d) = (xi[k], &cds[k], dxi[k]);
            let big_d = 1.0 + x.norm_sqr();
            let rhs_eta = (c.psi - c.r + 2.0 * x.conj() * c.eta / big_d) * d - c.sigma.conj() * d.conj();
            let rhs_r = (2.0 * c.eta.conj() * d + 2.0 * c.eta * d.conj()).re / (big_d * big_d);
            e_eta = e_eta.max((deta[k] - rhs_eta).norm());
            e_r = e_r.max((dr[k] - rhs_r).abs());
        }
        let tag = slot + 1;
        out.insert(format!("deta{tag}"), e_eta);
        out.insert(format!("dr{tag}"), e_r);
    }
    if angle_profile(curve).constant && curve.umbilic_free() {
        out.insert("las2".into(), las2_residual(curve)?);
    }
    Ok(out)
}

/// `f1' sin(2 phi1) + 2 f1 cos(2 phi1) phi1'` against the same for surface 2.
fn las2_residual(curve: &TracedIntersection) -> Result<f64> {
    let s = curve.arclengths();
    let mut sides: Vec<Vec<f64>> = Vec::new();
    for slot in 0..2 {
        let mut f = Vec::new();
        let mut big_phi = Vec::new();
        for p in &curve.samples {
            let (cd, phi) = if slot == 0 {
                (&p.curv1, p.phi1)
            } else {
                (&p.curv2, p.phi2)
            };
            let pd = principal_data(cd)?;
            f.push(pd.lambda - pd.mu);
            big_phi.push(2.0 * phi.ok_or(GeomError::UmbilicOnCurve(0))?);
        }
        let df = derivative_along(&s, &f, curve.closed);
        let dphi = angle_rate(&s, &big_phi, curve.closed);
        sides.push(
            (0..s.len())
                .map(|k| df[k] * big_phi[k].sin() + f[k] * big_phi[k].cos() * dphi[k])
                .collect(),
        );
    }
    Ok(sides[0]
        .iter()
        .zip(&sides[1])
        .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// Residuals of the two derivation steps on a constant-angle curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationResiduals {
    /// `d xi1/du` from differencing against the unit-parameter formula.
    pub unitpara: f64,
    /// `d xi2/du` from differencing against the chain rule through the angle circle.
    pub xi2dot: f64,
    /// Printed closed form of `d xi2/du` against the chain rule (both at `beta = pi/2`).
    pub xi2dot_printed: f64,
    /// The long equation combining both sections.
    pub long_equation: f64,
    /// `+1` when `u` runs along the tangent, `-1` against it.
    pub orientation: f64,
}

impl DerivationResiduals {
    pub fn max(&self) -> f64 {
        self.unitpara
            .max(self.xi2dot)
            .max(self.xi2dot_printed)
            .max(self.long_equation)
    }
}

/// Evaluate the derivation steps, optionally forcing `beta` to a given value
/// instead of `pi/2`.
pub fn derivation_step_checks(curve: &TracedIntersection, beta_override: Option<f64>) -> Result<DerivationResiduals> {
    require_constant(curve)?;
    if let Some(k) = curve.umbilic_on_curve[0] {
        return Err(GeomError::UmbilicOnCurve(k));
    }
    let beta_measured = beta_profile(curve)?;
    let orientation = if (beta_measured[0] - FRAC_PI_2).abs() < (beta_measured[0] - 1.5 * PI).abs() {
        1.0
    } else {
        -1.0
    };
    let beta = beta_override.unwrap_or(FRAC_PI_2);
    let s = curve.arclengths();
    let xi1: Vec<Complex64> = curve.samples.iter().map(|p| p.xi1).collect();
    let xi2: Vec<Complex64> = curve.samples.iter().map(|p| p.xi2).collect();
    let a1: Vec<f64> = curve.samples.iter().map(|p| p.a1).collect();
    let dxi1: Vec<Complex64> = chart_derivative(&s, &xi1)
        .into_iter()
        .map(|d| d * orientation)
        .collect();
    let dxi2: Vec<Complex64> = chart_derivative(&s, &xi2)
        .into_iter()
        .map(|d| d * orientation)
        .collect();
    let da1: Vec<f64> = angle_rate(&s, &a1, curve.closed)
        .into_iter()
        .map(|d| d * orientation)
        .collect();

    let mut res = DerivationResiduals {
        unitpara: 0.0,
        xi2dot: 0.0,
        xi2dot_printed: 0.0,
        long_equation: 0.0,
        orientation,
    };
    for (k, p) in curve.samples.iter().enumerate() {
        let x1 = p.xi1;
        let x1b = x1.conj();
        let big_d = 1.0 + x1.norm_sqr();
        let eps = (p.alpha / 2.0).tan();
        let e = Complex64::from_polar(1.0, p.a1);
        let eb = e.conj();
        let (s1, psi1, k1) = (p.curv1.sigma, p.curv1.psi, p.curv1.kappa);
        let (s2, psi2) = (p.curv2.sigma, p.curv2.psi);
        let da = da1[k];

        let g = Complex64::from_polar(1.0, p.a1 + beta);
        let xi1_dot = big_d / (2.0 * k1) * (psi1 * g + s1.conj() * g.conj());
        res.unitpara = res.unitpara.max((dxi1[k] - xi1_dot).norm());

        let w = eps * e;
        let den = 1.0 - x1b * w;
        let chain = ((1.0 - x1b * w) * xi1_dot + (x1 + w) * w * xi1_dot.conj() + big_d * I * w * da) / (den * den);
        res.xi2dot = res.xi2dot.max((dxi2[k] - chain).norm());

        if beta_override.is_none() {
            let cross = eps * (e * x1b + eb * x1) + eps * eps - 1.0;
            let printed = I * big_d * e / (2.0 * den * den)
                * (2.0 * eps * da
                    + eps * (eps * e * e + e * x1) * s1 / k1
                    + (eb * eps * x1b - eb * eb) * s1.conj() / k1
                    - cross * psi1 / k1);
            res.xi2dot_printed = res.xi2dot_printed.max((printed - chain).norm());

            let m = 1.0 - e * eps * x1b;
            let n = e - eps * x1;
            let b1 = 2.0 * eps * k1 * da + (-e * e + e * eps * x1) * s1 + eps * (eb * x1b + eps * eb * eb) * s1.conj()
                - cross * psi1;
            let b2 = 2.0 * eps * k1 * da + eps * (eps * e * e + e * x1) * s1 + (eb * eps * x1b - eb * eb) * s1.conj()
                - cross * psi1;
            let long = m * m * s2.conj() * b1 + n * n * psi2 * b2 - (1.0 + eps * eps) * k1 * n * n;
            res.long_equation = res.long_equation.max(long.norm());
        }
    }
    Ok(res)
}

/// `d alpha / ds - (tau_g2 - tau_g1)` per sample (Darboux torsions).
pub fn angle_derivative_check(curve: &TracedIntersection) -> Result<Vec<f64>> {
    let s = curve.arclengths();
    if s.len() < 12 {
        return Err(GeomError::SamplingTooCoarse(curve.total_length));
    }
    let alpha: Vec<f64> = curve.samples.iter().map(|p| p.alpha).collect();
    let da = derivative_along(&s, &alpha, curve.closed);
    Ok(curve
        .samples
        .iter()
        .zip(&da)
        .map(|(p, d)| d - (p.tau_g2 - p.tau_g1))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureLine {
    Yes,
    No,
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalVerdict {
    pub surfaces: [CurvatureLine; 2],
    /// `max |sin phi| |lambda - mu| L` per surface where defined.
    pub measures: [Option<f64>; 2],
    /// Line of curvature on one surface iff on the other (a totally umbilic
    /// side forces the other side to be a line of curvature).
    pub iff_holds: bool,
}

/// Combine per-surface predicates into the classical verdict.
pub fn classical_verdict(surfaces: [CurvatureLine; 2], measures: [Option<f64>; 2]) -> ClassicalVerdict {
    use CurvatureLine::*;
    let iff_holds = match (&surfaces[0], &surfaces[1]) {
        (NotApplicable(_), NotApplicable(_)) => true,
        (NotApplicable(_), other) | (other, NotApplicable(_)) => *other == Yes,
        (a, b) => a == b,
    };
    ClassicalVerdict {
        surfaces,
        measures,
        iff_holds,
    }
}

pub fn classical_joachimsthal(
    curve: &TracedIntersection,
    s1: &SupportSurface,
    s2: &SupportSurface,
) -> Result<ClassicalVerdict> {
    require_constant(curve)?;
    let mut surfaces = [CurvatureLine::No, CurvatureLine::No];
    let mut measures = [None, None];
    for (slot, surf) in [s1, s2].into_iter().enumerate() {
        let totally_umbilic = surf.is_sphere()
            || curve.samples.iter().all(|p| {
                let cd = if slot == 0 { &p.curv1 } else { &p.curv2 };
                cd.sigma.norm() < UMBILIC_RATIO * cd.psi
            });
        if totally_umbilic {
            surfaces[slot] = CurvatureLine::NotApplicable("totally umbilic".into());
            continue;
        }
        if let Some(k) = curve.umbilic_on_curve[slot] {
            surfaces[slot] = CurvatureLine::NotApplicable(format!("umbilic at sample {k}"));
            continue;
        }
        let scale = surf.length_scale();
        let mut m: f64 = 0.0;
        for p in &curve.samples {
            let (cd, phi) = if slot == 0 {
                (&p.curv1, p.phi1)
            } else {
                (&p.curv2, p.phi2)
            };
            let pd = principal_data(cd)?;
            let phi = phi.ok_or(GeomError::UmbilicOnCurve(0))?;
            m = m.max(phi.sin().abs() * (pd.lambda - pd.mu) * scale);
        }
        measures[slot] = Some(m);
        surfaces[slot] = if m <= CURVATURE_LINE_TOL {
            CurvatureLine::Yes
        } else {
            CurvatureLine::No
        };
    }
    Ok(classical_verdict(surfaces, measures))
}

/// Assemble every applicable check into one report.
pub fn main_theorem_verdict(
    s1: &SupportSurface,
    s2: &SupportSurface,
    curve: &TracedIntersection,
) -> VerificationReport {
    let prof = angle_profile(curve);
    let umbilic_free = [curve.umbilic_on_curve[0].is_none(), curve.umbilic_on_curve[1].is_none()];
    let mut residuals = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    fn note(name: &str, r: Result<f64>, residuals: &mut BTreeMap<String, f64>, skipped: &mut BTreeMap<String, String>) {
        match r {
            Ok(v) => {
                residuals.insert(name.to_string(), v);
            }
            Err(e) => {
                skipped.insert(name.to_string(), e.to_string());
            }
        }
    }

    note(
        "point_equality",
        Ok(curve.samples.iter().fold(0.0, |m, p| m.max(p.residual))),
        &mut residuals,
        &mut skipped,
    );
    note(
        "alpha_forms",
        Ok(curve
            .samples
            .iter()
            .fold(0.0, |m, p| m.max((p.alpha - angle_between_dot(p.xi1, p.xi2)).abs()))),
        &mut residuals,
        &mut skipped,
    );
    note(
        "a1a2_inversion",
        a1a2_inversion_residual(curve),
        &mut residuals,
        &mut skipped,
    );
    note(
        "angle_derivative",
        angle_derivative_check(curve).map(|v| max_abs(&v)),
        &mut residuals,
        &mut skipped,
    );
    let torsion = torsion_profiles(curve, s1, s2);
    let torsion_gap_max = match &torsion {
        Ok(t) if t.euler.iter().any(Option::is_some) => Some(t.max_gap),
        _ => None,
    };
    if let Some(g) = torsion_gap_max {
        residuals.insert("torsion_gap".into(), g);
    }
    match derivative_identity_checks(curve) {
        Ok(m) => residuals.extend(m),
        Err(e) => {
            skipped.insert("derivative_identities".into(), e.to_string());
        }
    }
    let defect = defect_final(curve).map(|v| max_abs(&v));
    let defect_final_max = defect.as_ref().ok().copied();
    note("defect_final", defect, &mut residuals, &mut skipped);
    match sigma_kappa_relation(curve) {
        Ok(r) => {
            residuals.insert("sigma_kappa".into(), max_abs(&r.dressed).max(max_abs(&r.a2_form)));
            residuals.insert("sigma_kappa_forms".into(), r.consistency);
        }
        Err(e) => {
            skipped.insert("sigma_kappa".into(), e.to_string());
        }
    }
    match derivation_step_checks(curve, None) {
        Ok(r) => {
            residuals.insert("unitpara".into(), r.unitpara);
            residuals.insert("xi2dot".into(), r.xi2dot);
            residuals.insert("xi2dot_printed".into(), r.xi2dot_printed);
            residuals.insert("long_equation".into(), r.long_equation);
        }
        Err(e) => {
            skipped.insert("derivation_steps".into(), e.to_string());
        }
    }
    let classical = match classical_joachimsthal(curve, s1, s2) {
        Ok(c) => Some(c),
        Err(e) => {
            skipped.insert("classical".into(), e.to_string());
            None
        }
    };
    let windings = phi_profiles(curve, s1, s2).ok().and_then(|p| match p.windings {
        [Some(n), Some(m)] => Some((n, m)),
        _ => None,
    });
    let mut verdict = parity_verdict(prof.constant, umbilic_free.iter().all(|b| *b), windings);
    if let ParityVerdict::NotApplicable(reason) = &mut verdict {
        let spheres: Vec<&str> = [(s1, "surface 1"), (s2, "surface 2")]
            .iter()
            .filter(|(s, _)| s.is_sphere())
            .map(|(_, n)| *n)
            .collect();
        if !spheres.is_empty() {
            *reason = format!("totally umbilic ({})", spheres.join(", "));
        }
    }
    VerificationReport {
        constant_angle: prof.constant,
        angle_deviation: prof.max_deviation,
        umbilic_free,
        residuals,
        windings,
        parity_verdict: verdict,
        defect_final_max,
        torsion_gap_max,
        classical,
        skipped,
    }
}

/// Umbilic census, windings and disc indices of both surfaces along the curve.
pub fn foliation_report(
    s1: &SupportSurface,
    s2: &SupportSurface,
    curve: &TracedIntersection,
    windings: Option<(i64, i64)>,
) -> FoliationReport {
    let n1: Vec<_> = curve.samples.iter().map(|p| p.nu1).collect();
    let n2: Vec<_> = curve.samples.iter().map(|p| p.nu2).collect();
    // the closing sample repeats the first
    let m = if curve.closed {
        n1.len().saturating_sub(1)
    } else {
        n1.len()
    };
    let sides = [(s1, &n1[..m], &n2[..m]), (s2, &n2[..m], &n1[..m])];
    let mut out = Vec::with_capacity(2);
    for (slot, (surf, own, other)) in sides.into_iter().enumerate() {
        let winding = windings.map(|w| if slot == 0 { w.0 } else { w.1 });
        let mut f = SurfaceFoliation {
            label: format!("surface {}", slot + 1),
            winding,
            orientable: winding.map(|n| n.rem_euclid(2) == 0),
            umbilics: Vec::new(),
            census_total: None,
            disc_plus: None,
            disc_minus: None,
            note: None,
        };
        match find_umbilics(surf) {
            Ok(census) => {
                f.census_total = Some(census.iter().map(|u| u.index).sum());
                if curve.closed {
                    match disc_index_split(surf, own, other, &census) {
                        Ok(split) => {
                            f.disc_plus = Some(split.plus_index);
                            f.disc_minus = Some(split.minus_index);
                        }
                        Err(e) => f.note = Some(format!("disc split: {e}")),
                    }
                }
                f.umbilics = census;
            }
            Err(GeomError::DegenerateSurface) => f.note = Some("totally umbilic".into()),
            Err(e) => f.note = Some(format!("census: {e}")),
        }
        out.push(f);
    }
    FoliationReport::new(out)
}

/// `A2` from the closed form against `A2` from placing `xi1` on the angle
/// circle about `xi2`.
pub fn a1a2_inversion_residual(curve: &TracedIntersection) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in &curve.samples {
        let cfg = AngleConfig::from_alpha(p.alpha)?;
        let direct = cone_param_a1(p.xi2, p.xi1, &cfg, 1e-8)?;
        let d = (Complex64::from_polar(1.0, direct) - Complex64::from_polar(1.0, p.a2)).norm();
        worst = worst.max(d);
    }
    Ok(worst)
}
