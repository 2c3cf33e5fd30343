#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steering_core::qcore::{ComplexMatrix, PureState};
use steering_core::steering::MeasurementDirection;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// `G G† / tr(G G†)` for a random complex `G`; full rank almost surely.
pub fn density_from_entries(entries: &[Complex64]) -> ComplexMatrix {
    let g = ComplexMatrix::new(4, entries.to_vec()).unwrap();
    let gg = &g * &g.adjoint();
    let t = gg.trace().re;
    gg.scale(1.0 / t)
}

pub fn random_density(rng: &mut impl Rng) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..16).map(|_| complex(rng)).collect();
    density_from_entries(&entries)
}

/// Random pure state with Schmidt angle at least `min_angle`.
pub fn random_entangled(rng: &mut impl Rng, min_angle: f64) -> PureState {
    loop {
        let psi = PureState::new((0..4).map(|_| complex(rng)).collect()).unwrap();
        if psi.schmidt_angle().unwrap() >= min_angle {
            return psi;
        }
    }
}

pub fn random_direction(rng: &mut impl Rng) -> MeasurementDirection {
    let tau = rng.random_range(0.0f64..1.0).mul_add(2.0, -1.0).acos();
    MeasurementDirection::from_angles(tau, rng.random_range(0.0..std::f64::consts::TAU))
}

/// `k` directions, pairwise separated by at least `min_sep` as measurements.
pub fn random_directions(rng: &mut impl Rng, k: usize, min_sep: f64) -> Vec<MeasurementDirection> {
    let mut out: Vec<MeasurementDirection> = Vec::with_capacity(k);
    while out.len() < k {
        let d = random_direction(rng);
        if out.iter().all(|o| o.measurement_separation(&d) >= min_sep) {
            out.push(d);
        }
    }
    out
}

pub fn random_hermitian2(rng: &mut impl Rng) -> ComplexMatrix {
    let a = rng.random_range(-2.0..2.0);
    let d = rng.random_range(-2.0..2.0);
    let b = complex(rng);
    ComplexMatrix::from_rows([[Complex64::new(a, 0.0), b], [b.conj(), Complex64::new(d, 0.0)]])
}
