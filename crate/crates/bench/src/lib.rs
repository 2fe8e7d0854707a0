//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use pwlab_core::quadrature::{make_grid, GridSpec, SigmaBand};
use pwlab_core::samples::smooth_family;
use pwlab_core::spectral::SpectralFunction;

pub fn fixture(sigma: f64, n_nodes: usize) -> (Arc<GridSpec>, SpectralFunction) {
    let band = SigmaBand::new(sigma).expect("positive band");
    let grid = Arc::new(make_grid(band, n_nodes).expect("valid grid"));
    let f = smooth_family(&grid, 7, 1).pop().expect("one sample");
    (grid, f)
}
