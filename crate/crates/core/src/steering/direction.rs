use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{pauli_dot, ComplexMatrix};

/// Binary measurement outcome `a ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Zero, Outcome::One];

    /// `(−1)^a`.
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Zero => 1.0,
            Outcome::One => -1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl From<Outcome> for u8 {
    fn from(a: Outcome) -> u8 {
        a as u8
    }
}

impl TryFrom<u8> for Outcome {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(Outcome::Zero),
            1 => Ok(Outcome::One),
            other => Err(Error::Parse(format!("outcome must be 0 or 1, got {other}"))),
        }
    }
}

/// Unit vector on the Bloch sphere, `n̂ = (sin τ cos γ, sin τ sin γ, cos τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct MeasurementDirection {
    n: [f64; 3],
}

impl MeasurementDirection {
    /// Renormalizes `v`; fails for a (near) zero vector.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm < 1e-9 {
            return Err(Error::OutOfRange { name: "direction norm", value: norm, range: "(0, ∞)" });
        }
        Ok(Self { n: [v[0] / norm, v[1] / norm, v[2] / norm] })
    }

    pub fn from_angles(tau: f64, gamma: f64) -> Self {
        let (st, ct) = tau.sin_cos();
        let (sg, cg) = gamma.sin_cos();
        Self { n: [st * cg, st * sg, ct] }
    }

    pub fn x() -> Self {
        Self { n: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        Self { n: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        Self { n: [0.0, 0.0, 1.0] }
    }

    pub fn vector(&self) -> [f64; 3] {
        self.n
    }

    /// Polar angle `τ ∈ [0, π]`.
    pub fn tau(&self) -> f64 {
        self.n[2].clamp(-1.0, 1.0).acos()
    }

    /// Azimuth `γ ∈ [0, 2π)`; zero at the poles.
    pub fn gamma(&self) -> f64 {
        if self.n[0].hypot(self.n[1]) < 1e-15 {
            return 0.0;
        }
        let g = self.n[1].atan2(self.n[0]).rem_euclid(TAU);
        if g >= TAU {
            0.0
        } else {
            g
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.n.iter().zip(other.n.iter()).map(|(a, b)| a * b).sum()
    }

    /// Angle between the two measurements with `n̂` and `−n̂` identified, in `[0, π/2]`.
    pub fn measurement_separation(&self, other: &Self) -> f64 {
        let angle = self.dot(other).clamp(-1.0, 1.0).acos();
        angle.min(PI - angle)
    }

    /// Alice's projector `P̂ₐ = [𝟙 + (−1)ᵃ σ⃗·n̂]/2`.
    pub fn projector(&self, a: Outcome) -> ComplexMatrix {
        let s = a.sign();
        let half = pauli_dot([s * self.n[0], s * self.n[1], s * self.n[2]]).scale(0.5);
        &ComplexMatrix::identity(2).scale(0.5) + &half
    }
}

/// Free-function form of [`MeasurementDirection::projector`].
pub fn projector(n: &MeasurementDirection, a: Outcome) -> ComplexMatrix {
    n.projector(a)
}

impl From<MeasurementDirection> for [f64; 3] {
    fn from(d: MeasurementDirection) -> Self {
        d.n
    }
}

impl TryFrom<[f64; 3]> for MeasurementDirection {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v)
    }
}

impl fmt::Display for MeasurementDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = [(Self::x(), "x"), (Self::y(), "y"), (Self::z(), "z")];
        for (d, name) in named {
            if self.dot(&d) > 1.0 - 1e-15 {
                return f.write_str(name);
            }
        }
        write!(f, "{},{}", self.tau(), self.gamma())
    }
}

/// Parses an angle in radians, or degrees with a `deg` suffix.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let (body, scale) = match t.strip_suffix("deg") {
        Some(body) => (body.trim(), PI / 180.0),
        None => (t, 1.0),
    };
    body.parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| Error::Parse(format!("invalid angle {text:?}")))
}

impl FromStr for MeasurementDirection {
    type Err = Error;

    /// Accepts `x`, `y`, `z` or `tau,gamma`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Self::x()),
            "y" => Ok(Self::y()),
            "z" => Ok(Self::z()),
            other => {
                let parts: Vec<&str> = other.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("direction {s:?}: expected x, y, z or tau,gamma")));
                }
                Ok(Self::from_angles(parse_angle(parts[0])?, parse_angle(parts[1])?))
            }
        }
    }
}

/// Parses a direction list such as `x,y,z` or `z;0.3,1.2`.
///
/// Semicolons always separate directions. Without semicolons, single-letter
/// items are split on commas and anything else is read as one `tau,gamma` pair.
pub fn parse_direction_list(text: &str) -> Result<Vec<MeasurementDirection>> {
    if text.contains(';') {
        return text.split(';').map(str::parse).collect();
    }
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().all(|i| matches!(i.to_ascii_lowercase().as_str(), "x" | "y" | "z")) {
        return items.into_iter().map(str::parse).collect();
    }
    Ok(vec![text.parse()?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn z_projector() {
        let p = MeasurementDirection::z().projector(Outcome::Zero);
        assert_eq!(p, ComplexMatrix::from_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn x_projector() {
        let p = MeasurementDirection::x().projector(Outcome::Zero);
        let half = Complex64::new(0.5, 0.0);
        assert!(p.approx_eq(&ComplexMatrix::from_rows([[half, half], [half, half]]), 1e-15));
    }

    #[test]
    fn y_projector_from_angles() {
        let p = MeasurementDirection::from_angles(FRAC_PI_2, FRAC_PI_2).projector(Outcome::Zero);
        let expected = ComplexMatrix::from_rows([
            [Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5)],
            [Complex64::new(0.0, 0.5), Complex64::new(0.5, 0.0)],
        ]);
        assert!(p.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn angles_are_canonical() {
        let d = MeasurementDirection::new([0.0, -1.0, 0.0]).unwrap();
        assert!((d.tau() - FRAC_PI_2).abs() < 1e-15);
        assert!((d.gamma() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(MeasurementDirection::z().gamma(), 0.0);
        let back = MeasurementDirection::from_angles(d.tau(), d.gamma());
        assert!(back.dot(&d) > 1.0 - 1e-15);
    }

    #[test]
    fn construction_renormalizes() {
        let d = MeasurementDirection::new([3.0, 0.0, 4.0]).unwrap();
        assert_eq!(d.vector(), [0.6, 0.0, 0.8]);
        assert!(MeasurementDirection::new([0.0; 3]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("X".parse::<MeasurementDirection>().unwrap(), MeasurementDirection::x());
        let d: MeasurementDirection = "90deg,90deg".parse().unwrap();
        assert!(d.dot(&MeasurementDirection::y()) > 1.0 - 1e-15);
        assert!("q".parse::<MeasurementDirection>().is_err());
        let list = parse_direction_list("x,y,z").unwrap();
        assert_eq!(list, vec![MeasurementDirection::x(), MeasurementDirection::y(), MeasurementDirection::z()]);
        let mixed = parse_direction_list("z;1.0,0.5").unwrap();
        assert_eq!(mixed.len(), 2);
        assert_eq!(parse_direction_list("1.0,0.5").unwrap().len(), 1);
        assert_eq!(MeasurementDirection::x().to_string(), "x");
    }

    #[test]
    fn antipodal_directions_are_the_same_measurement() {
        let z = MeasurementDirection::z();
        let minus_z = MeasurementDirection::new([0.0, 0.0, -1.0]).unwrap();
        assert!(z.measurement_separation(&minus_z) < 1e-12);
        assert!((z.measurement_separation(&MeasurementDirection::x()) - FRAC_PI_2).abs() < 1e-15);
        // Outcomes swap under n̂ → −n̂.
        assert!(minus_z.projector(Outcome::Zero).approx_eq(&z.projector(Outcome::One), 1e-15));
    }
}
