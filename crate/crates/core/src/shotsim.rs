//! Finite-statistics simulation of coincidence counting.
//!
//! Every measurement setting draws its counts from its own ChaCha20 stream,
//! keyed by `(seed, setting index)`, so results do not depend on the order in
//! which settings are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glsi::bloch_vector;
use crate::glsi::inequality::{Correlators, Signs, UNSIGNED};
use crate::glsi::instance::bob_projectors;
use crate::qcore::matrix::{kron, ComplexMatrix};
use crate::qcore::state::PureState;
use crate::steering::direction::{MeasurementDirection, Outcome};

/// Recorded in every report so a run can be reproduced bit for bit.
pub const GENERATOR: &str = "ChaCha20Rng (rand_chacha 0.9), stream = setting index";

/// `n[a][b]`: coincidences with Alice outcome `a` and Bob outcome `b`.
pub type JointCounts = [[u64; 2]; 2];

/// One measurement setting. `alice = None` means Alice does not measure and
/// every event is booked under `a = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub alice: Option<MeasurementDirection>,
    pub bob: MeasurementDirection,
}

impl Setting {
    pub fn joint(alice: MeasurementDirection, bob: MeasurementDirection) -> Self {
        Self { alice: Some(alice), bob }
    }

    pub fn bob_only(bob: MeasurementDirection) -> Self {
        Self { alice: None, bob }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotConfig {
    pub shots_per_setting: u64,
    pub seed: u64,
    pub settings: Vec<Setting>,
}

impl ShotConfig {
    pub fn new(shots_per_setting: u64, seed: u64, settings: Vec<Setting>) -> Result<Self> {
        check_shots(shots_per_setting)?;
        Ok(Self { shots_per_setting, seed, settings })
    }

    /// Counts for every setting, in setting order.
    pub fn run(&self, rho: &ComplexMatrix) -> Result<Vec<JointCounts>> {
        check_shots(self.shots_per_setting)?;
        rho.validate_density()?;
        self.settings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let probs = joint_probabilities(rho, s.alice.as_ref(), &s.bob)?;
                Ok(draw(probs, self.shots_per_setting, &mut substream(self.seed, i as u64)))
            })
            .collect()
    }
}

/// Counts and derived numbers for one setting of a simulated run.
#[derive(Debug, Clone, Serialize)]
pub struct SettingRecord {
    pub label: String,
    pub alice: Option<MeasurementDirection>,
    pub bob: MeasurementDirection,
    pub counts: JointCounts,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub std_error: f64,
    /// Shots per setting.
    pub shots: u64,
    pub true_value: f64,
    pub seed: u64,
    pub generator: &'static str,
    pub settings: Vec<SettingRecord>,
}

impl EstimateReport {
    /// `|estimate − true_value|` in units of the standard error.
    pub fn deviation_sigmas(&self) -> f64 {
        let diff = (self.estimate - self.true_value).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::OutOfRange { name: "shots", value: 0.0, range: "≥ 1" });
    }
    Ok(())
}

fn substream(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Born-rule probabilities `p[a][b] = tr[(P̂ₐ ⊗ P̂_b) ρ]`.
pub fn joint_probabilities(
    rho: &ComplexMatrix,
    alice: Option<&MeasurementDirection>,
    bob: &MeasurementDirection,
) -> Result<[[f64; 2]; 2]> {
    rho.require_dim(4)?;
    let mut p = [[0.0; 2]; 2];
    for b in Outcome::ALL {
        match alice {
            Some(n) => {
                for a in Outcome::ALL {
                    p[a.index()][b.index()] = rho.expectation(&kron(&n.projector(a), &bob.projector(b))).max(0.0);
                }
            }
            None => {
                p[0][b.index()] = rho.expectation(&kron(&ComplexMatrix::identity(2), &bob.projector(b))).max(0.0);
            }
        }
    }
    let total: f64 = p.iter().flatten().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidProbabilities { reason: format!("outcome probabilities sum to {total}") });
    }
    Ok(p.map(|row| row.map(|x| x / total)))
}

/// Multinomial draw as a chain of conditional binomials.
fn draw(p: [[f64; 2]; 2], shots: u64, rng: &mut ChaCha20Rng) -> JointCounts {
    let flat = [p[0][0], p[0][1], p[1][0], p[1][1]];
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass = 1.0;
    for i in 0..3 {
        if remaining == 0 {
            break;
        }
        let q = if mass > 0.0 { (flat[i] / mass).clamp(0.0, 1.0) } else { 0.0 };
        counts[i] = Binomial::new(remaining, q).expect("probability clamped to [0, 1]").sample(rng);
        remaining -= counts[i];
        mass -= flat[i];
    }
    counts[3] = remaining;
    [[counts[0], counts[1]], [counts[2], counts[3]]]
}

/// Samples `shots` coincidences for one setting on stream 0 of `seed`.
pub fn sample_joint(
    rho: &ComplexMatrix,
    a_dir: &MeasurementDirection,
    b_dir: &MeasurementDirection,
    shots: u64,
    seed: u64,
) -> Result<JointCounts> {
    let config = ShotConfig::new(shots, seed, vec![Setting::joint(*a_dir, *b_dir)])?;
    Ok(config.run(rho)?[0])
}

fn correlator_from_counts(n: &JointCounts, shots: u64) -> (f64, f64) {
    let signed = n[0][0] as f64 + n[1][1] as f64 - n[0][1] as f64 - n[1][0] as f64;
    let e = signed / shots as f64;
    (e, ((1.0 - e * e).max(0.0) / shots as f64).sqrt())
}

fn correlator_true(p: &[[f64; 2]; 2]) -> f64 {
    p[0][0] + p[1][1] - p[0][1] - p[1][0]
}

/// `⟨A ⊗ B⟩` from counts. With `a_dir = None` this is Bob's marginal `⟨𝟙 ⊗ B⟩`.
pub fn estimate_correlator(
    rho: &ComplexMatrix,
    a_dir: Option<&MeasurementDirection>,
    b_dir: &MeasurementDirection,
    shots: u64,
    seed: u64,
) -> Result<EstimateReport> {
    let setting = Setting { alice: a_dir.copied(), bob: *b_dir };
    let config = ShotConfig::new(shots, seed, vec![setting.clone()])?;
    let counts = config.run(rho)?[0];
    let (estimate, std_error) = correlator_from_counts(&counts, shots);
    let true_value = correlator_true(&joint_probabilities(rho, a_dir, b_dir)?);
    Ok(EstimateReport {
        estimate,
        std_error,
        shots,
        true_value,
        seed,
        generator: GENERATOR,
        settings: vec![SettingRecord {
            label: setting_label(&setting),
            alice: setting.alice,
            bob: setting.bob,
            counts,
            estimate,
            std_error,
        }],
    })
}

fn axis_name(n: &MeasurementDirection) -> String {
    let v = n.vector();
    for (name, axis) in [("x", [1.0, 0.0, 0.0]), ("y", [0.0, 1.0, 0.0]), ("z", [0.0, 0.0, 1.0])] {
        if v.iter().zip(axis).all(|(a, b)| (a - b).abs() < 1e-12) {
            return name.to_string();
        }
    }
    format!("({:.6},{:.6},{:.6})", v[0], v[1], v[2])
}

fn setting_label(s: &Setting) -> String {
    let a = s.alice.as_ref().map_or("I".to_string(), axis_name);
    format!("{a}{}", axis_name(&s.bob))
}

/// Paradox total for `|Ψ(α,0)⟩` with Alice measuring `ẑ` and `x̂`.
///
/// Each of the four terms `P(a, χₐ)` is its own setting: Alice along `n̂ⱼ`,
/// Bob along the Bloch vector of the conditional state for outcome `a`.
pub fn simulate_paradox(alpha: f64, shots: u64, seed: u64) -> Result<EstimateReport> {
    check_shots(shots)?;
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, range: "(0, π/2)" });
    }
    let rho = PureState::schmidt_form(alpha, 0.0).density();
    let mut settings = Vec::new();
    let mut outcomes = Vec::new();
    for n in [MeasurementDirection::z(), MeasurementDirection::x()] {
        let (plus, minus) = bob_projectors(alpha, 0.0, &n)?;
        for (a, p) in [(Outcome::Zero, plus), (Outcome::One, minus)] {
            settings.push(Setting::joint(n, MeasurementDirection::new(bloch_vector(&p)?)?));
            outcomes.push(a);
        }
    }
    let config = ShotConfig::new(shots, seed, settings)?;
    let counts = config.run(&rho)?;
    let mut estimate = 0.0;
    let mut variance = 0.0;
    let mut true_value = 0.0;
    let mut records = Vec::new();
    for ((s, n), a) in config.settings.iter().zip(&counts).zip(&outcomes) {
        let p = n[a.index()][0] as f64 / shots as f64;
        let var = p * (1.0 - p) / shots as f64;
        estimate += p;
        variance += var;
        true_value += joint_probabilities(&rho, s.alice.as_ref(), &s.bob)?[a.index()][0];
        records.push(SettingRecord {
            label: format!("P({}={}, chi)", axis_name(s.alice.as_ref().expect("joint setting")), a.index()),
            alice: s.alice,
            bob: s.bob,
            counts: *n,
            estimate: p,
            std_error: var.sqrt(),
        });
    }
    Ok(EstimateReport {
        estimate,
        std_error: variance.sqrt(),
        shots,
        true_value,
        seed,
        generator: GENERATOR,
        settings: records,
    })
}

pub fn simulate_sprime3(rho: &ComplexMatrix, theta: f64, phi: f64, shots: u64, seed: u64) -> Result<EstimateReport> {
    simulate_sprime3_signed(rho, theta, phi, UNSIGNED, shots, seed)
}

/// Estimates `S′₃(θ, φ)` from correlator settings. At `sin φ = 0` only
/// `XX, YY, ZZ` and `𝟙Z` are measured; otherwise `XY` and `YX` as well.
pub fn simulate_sprime3_signed(
    rho: &ComplexMatrix,
    theta: f64,
    phi: f64,
    signs: Signs,
    shots: u64,
    seed: u64,
) -> Result<EstimateReport> {
    check_shots(shots)?;
    rho.validate_density()?;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let (sp, cp) = phi.sin_cos();
    let [sx, sy, sz] = signs.map(f64::from);
    let (x, y, z) = (MeasurementDirection::x(), MeasurementDirection::y(), MeasurementDirection::z());
    let mut terms = vec![
        (Setting::joint(x, x), s2 * cp * sx),
        (Setting::joint(y, y), -s2 * cp * sy),
        (Setting::joint(z, z), sz),
        (Setting::bob_only(z), 2.0 * c2),
    ];
    if sp != 0.0 {
        terms.push((Setting::joint(x, y), s2 * sp * sx));
        terms.push((Setting::joint(y, x), s2 * sp * sy));
    }
    let (settings, coefs): (Vec<Setting>, Vec<f64>) = terms.into_iter().unzip();
    let config = ShotConfig::new(shots, seed, settings)?;
    let counts = config.run(rho)?;
    let mut estimate = 0.0;
    let mut variance = 0.0;
    let mut records = Vec::new();
    for ((s, n), c) in config.settings.iter().zip(&counts).zip(&coefs) {
        let (e, se) = correlator_from_counts(n, shots);
        estimate += c * e;
        variance += c * c * se * se;
        records.push(SettingRecord {
            label: setting_label(s),
            alice: s.alice,
            bob: s.bob,
            counts: *n,
            estimate: e,
            std_error: se,
        });
    }
    Ok(EstimateReport {
        estimate,
        std_error: variance.sqrt(),
        shots,
        true_value: Correlators::of(rho)?.sprime3(theta, phi, signs),
        seed,
        generator: GENERATOR,
        settings: records,
    })
}
