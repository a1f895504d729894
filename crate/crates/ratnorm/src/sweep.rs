use rayon::prelude::*;

use ratnorm_core::bernstein::{sweep_cell, sweep_cells, SweepMode, SweepRow};
use ratnorm_core::norms::SpaceDescriptor;
use ratnorm_core::quadrature::QuadratureSpec;

/// Parallel sweep; rows come back in `(r, n)` order whatever the schedule.
pub fn par_sweep(
    n_list: &[usize],
    r_list: &[f64],
    space: &SpaceDescriptor,
    mode: SweepMode,
    spec: &QuadratureSpec,
) -> ratnorm_core::Result<Vec<SweepRow>> {
    Ok(sweep_cells(n_list, r_list)?
        .into_par_iter()
        .map(|cell| sweep_cell(cell, space, mode, spec))
        .collect())
}
