//! Scalar maximization: coarse grid followed by golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Maximizes `f` on `[lo, hi]`: evaluate on a `grid_points` grid plus any
/// `extra` seeds, refine around the best grid point by golden section, and
/// return the best point seen. Ties go to the smaller abscissa.
pub fn grid_then_golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid_points: usize, tol: f64, extra: &[f64]) -> (f64, f64) {
    let grid = linspace(lo, hi, grid_points.max(3));
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best_idx = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best_idx] {
            best_idx = i;
        }
    }
    let left = grid[best_idx.saturating_sub(1)];
    let right = grid[(best_idx + 1).min(grid.len() - 1)];
    let mut candidates = vec![(grid[best_idx], values[best_idx]), golden_section_max(&f, left, right, tol)];
    candidates.extend(extra.iter().filter(|x| (lo..=hi).contains(*x)).map(|&x| (x, f(x))));
    candidates
        .into_iter()
        .reduce(|best, c| if c.1 > best.1 || (c.1 == best.1 && c.0 < best.0) { c } else { best })
        .expect("at least two candidates")
}
