use std::f64::consts::FRAC_PI_4;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::glsi::detect::{detect_violation, Detection, DetectionOptions};
use crate::glsi::inequality::{usual_lsi_bound, usual_lsi_value};
use crate::glsi::optimize::linspace;
use crate::qcore::state::{make_state, Family, PureState, StateFamilySpec};

/// Default bisection tolerance in `V`.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Smallest accepted bisection tolerance.
pub const MIN_TOL: f64 = 1e-9;
/// Points of the coarse α grid used to bracket a crossover.
const CROSSOVER_GRID: usize = 64;

/// A threshold visibility, or the statement that none exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Value(f64),
    Undetectable,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Threshold::Value(v) => Some(v),
            Threshold::Undetectable => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Value(v) => write!(f, "{v}"),
            Threshold::Undetectable => f.write_str("undetectable"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Value(v) => s.serialize_f64(*v),
            Threshold::Undetectable => s.serialize_str("undetectable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    UsualLsiAnalytic,
    GlsiNumeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub alpha: f64,
    pub v_threshold: Threshold,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_star: Option<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "alpha", value: alpha, range: "(0, π/4]" })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= MIN_TOL && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "tol", value: tol, range: "≥ 1e-9" })
    }
}

fn family_spec(family: Family, alpha: f64, v: f64) -> Result<StateFamilySpec> {
    match family {
        Family::Werner => Ok(StateFamilySpec::werner(alpha, v)),
        Family::Asymmetric => Ok(StateFamilySpec::asymmetric(alpha, v)),
        other => Err(Error::Unsupported(format!("threshold scans need werner or asymmetric, got {other}"))),
    }
}

/// Optimized inequality detection on a member of a mixed family, with
/// Alice's orientation maximized and `φ = 0`.
pub fn detect_family(family: Family, alpha: f64, v: f64) -> Result<Detection> {
    let rho = make_state(&family_spec(family, alpha, v)?)?;
    detect_violation(&rho, &DetectionOptions::default())
}

/// Bisection for the boundary between `pred(lo)` and `pred(hi)`, which must differ.
fn bisect<F: Fn(f64) -> Result<bool>>(pred: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let at_lo = pred(lo)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// `√3/(1 + 2 sin 2α)`, the Werner visibility above which the usual LSI is violated.
pub fn werner_vmin_usual(alpha: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    let v = usual_lsi_bound() / (1.0 + 2.0 * (2.0 * alpha).sin());
    let v_threshold = if v > 1.0 + 1e-12 { Threshold::Undetectable } else { Threshold::Value(v.min(1.0)) };
    Ok(ThresholdResult { alpha, v_threshold, method: Method::UsualLsiAnalytic, theta_star: None })
}

/// `(1 − √3 + 2 sin 2α)/(2(1 + sin 2α))` on the branch `V ∈ [0, 1/2)`.
pub fn asym_vmax_usual(alpha: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    let s = (2.0 * alpha).sin();
    let v = (1.0 - usual_lsi_bound() + 2.0 * s) / (2.0 * (1.0 + s));
    let v_threshold = if v < -1e-12 { Threshold::Undetectable } else { Threshold::Value(v.max(0.0)) };
    Ok(ThresholdResult { alpha, v_threshold, method: Method::UsualLsiAnalytic, theta_star: None })
}

/// Smallest Werner visibility detected by the optimized inequality family.
pub fn werner_vmin_glsi(alpha: f64, tol: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    check_tol(tol)?;
    let detected = |v: f64| Ok::<_, Error>(detect_family(Family::Werner, alpha, v)?.detected());
    if !detected(1.0)? {
        return Ok(ThresholdResult { alpha, v_threshold: Threshold::Undetectable, method: Method::GlsiNumeric, theta_star: None });
    }
    let (lo, hi) = bisect(detected, 0.0, 1.0, tol)?;
    Ok(ThresholdResult {
        alpha,
        v_threshold: Threshold::Value(0.5 * (lo + hi)),
        method: Method::GlsiNumeric,
        theta_star: Some(detect_family(Family::Werner, alpha, hi)?.theta_star),
    })
}

/// Largest visibility on the branch `V ∈ [0, 1/2)` of the asymmetric family
/// detected by the optimized inequality family.
pub fn asym_vmax_glsi(alpha: f64, tol: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    check_tol(tol)?;
    let detected = |v: f64| Ok::<_, Error>(detect_family(Family::Asymmetric, alpha, v)?.detected());
    if !detected(0.0)? {
        return Ok(ThresholdResult { alpha, v_threshold: Threshold::Undetectable, method: Method::GlsiNumeric, theta_star: None });
    }
    let (lo, hi) = bisect(detected, 0.0, 0.5, tol)?;
    Ok(ThresholdResult {
        alpha,
        v_threshold: Threshold::Value(0.5 * (lo + hi)),
        method: Method::GlsiNumeric,
        theta_star: Some(detect_family(Family::Asymmetric, alpha, lo)?.theta_star),
    })
}

/// Usual and optimized thresholds at one α.
pub fn thresholds(family: Family, alpha: f64, tol: f64) -> Result<(ThresholdResult, ThresholdResult)> {
    match family {
        Family::Werner => Ok((werner_vmin_usual(alpha)?, werner_vmin_glsi(alpha, tol)?)),
        Family::Asymmetric => Ok((asym_vmax_usual(alpha)?, asym_vmax_glsi(alpha, tol)?)),
        other => Err(Error::Unsupported(format!("threshold scans need werner or asymmetric, got {other}"))),
    }
}

fn merged(family: Family, alpha: f64, tol: f64) -> Result<bool> {
    // The inner bisection runs finer than the merge tolerance so that its own
    // discretization does not decide the comparison.
    let (usual, glsi) = thresholds(family, alpha, tol / 16.0)?;
    Ok(match (usual.v_threshold, glsi.v_threshold) {
        (Threshold::Value(u), Threshold::Value(g)) => (u - g).abs() <= 2.0 * tol,
        (Threshold::Undetectable, Threshold::Undetectable) => true,
        _ => false,
    })
}

/// Smallest α beyond which the usual and optimized thresholds agree within
/// `2·tol` on the whole of `[α, π/4]`. `None` if they never differ.
pub fn crossover(family: Family, tol: f64) -> Result<Option<f64>> {
    check_tol(tol)?;
    let grid: Vec<f64> = (1..=CROSSOVER_GRID).map(|i| FRAC_PI_4 * i as f64 / CROSSOVER_GRID as f64).collect();
    let flags = grid.par_iter().map(|&a| merged(family, a, tol)).collect::<Result<Vec<bool>>>()?;
    let Some(last_apart) = flags.iter().rposition(|m| !m) else {
        return Ok(None);
    };
    if last_apart + 1 == grid.len() {
        return Ok(Some(FRAC_PI_4));
    }
    let (_, hi) = bisect(|a| merged(family, a, tol), grid[last_apart], grid[last_apart + 1], 1e-7)?;
    Ok(Some(hi))
}

/// α at which `1 + 2 sin 2α` reaches `√3` for `|Ψ(α,0)⟩`, located by bisection
/// on the density-matrix value of the usual LSI.
pub fn usual_lsi_crossing() -> Result<f64> {
    let violates = |a: f64| Ok::<_, Error>(usual_lsi_value(&PureState::schmidt_form(a, 0.0).density())? > usual_lsi_bound());
    let (lo, hi) = bisect(violates, 1e-6, FRAC_PI_4, 1e-12)?;
    Ok(0.5 * (lo + hi))
}

/// Detection outcome at `(α, V)` equals that at `(α, 1 − V)` for the asymmetric family.
pub fn symmetry_check_asymmetric(alpha: f64, v: f64) -> Result<bool> {
    let a = detect_family(Family::Asymmetric, alpha, v)?;
    let b = detect_family(Family::Asymmetric, alpha, 1.0 - v)?;
    Ok(a.detected() == b.detected())
}

/// One row of a threshold curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdRow {
    pub alpha: f64,
    pub v_usual: Threshold,
    pub v_glsi: Threshold,
    pub glsi_theta_star: Option<f64>,
}

/// Usual and optimized thresholds over `alpha_steps` points of `(0, π/4]`.
pub fn threshold_curves(family: Family, alpha_steps: usize, tol: f64) -> Result<Vec<ThresholdRow>> {
    if alpha_steps < 2 {
        return Err(Error::OutOfRange { name: "alpha_steps", value: alpha_steps as f64, range: "≥ 2" });
    }
    let grid = linspace(FRAC_PI_4 / alpha_steps as f64, FRAC_PI_4, alpha_steps);
    grid.par_iter()
        .map(|&alpha| {
            let (u, g) = thresholds(family, alpha, tol)?;
            Ok(ThresholdRow { alpha, v_usual: u.v_threshold, v_glsi: g.v_threshold, glsi_theta_star: g.theta_star })
        })
        .collect()
}
