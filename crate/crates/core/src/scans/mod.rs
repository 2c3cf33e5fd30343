//! Threshold visibilities and `(α, V)` detection maps for the Werner and
//! asymmetric families.

pub mod export;
pub mod region;
pub mod threshold;

pub use export::{line_svg, region_csv, region_svg, write_csv, Series, REGION_CSV_HEADER};
pub use region::{alpha_grid, evaluate_cell, pure_state_curves, region_scan, v_grid, CurveRow, RegionCell, RegionTable};
pub use threshold::{
    asym_vmax_glsi, asym_vmax_usual, crossover, detect_family, symmetry_check_asymmetric, threshold_curves, thresholds,
    usual_lsi_crossing, werner_vmin_glsi, werner_vmin_usual, Method, Threshold, ThresholdResult, ThresholdRow,
    DEFAULT_TOL,
};
