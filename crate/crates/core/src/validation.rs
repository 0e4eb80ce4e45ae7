//! Series-versus-oracle comparison used by the `validate` command and tests.

use crate::error::Result;
use crate::fd::{fd_flow_and_shear, solve_fd, FdSolution};
use crate::geometry::uniform_grid;
use crate::params::FlowParams;
use crate::series::{residual_check, Residual, SeriesSolution};

/// Grid size used for the oracle comparison.
pub const ORACLE_POINTS: usize = 801;
/// Relative L∞ agreement required between series and oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-4;
/// Scaled residual required of the series solution.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Interior points used for residual evaluation.
pub const RESIDUAL_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub params: FlowParams,
    pub eta: f64,
    pub n_used: usize,
    pub residual: Residual,
    /// max |û_series − û_fd| / max |û_series| over the grid nodes.
    pub profile_error: f64,
    /// Relative difference of 2∫ξû dξ (closed form vs Simpson).
    pub flux_error: f64,
    /// Relative difference of the wall slope (series vs one-sided stencil).
    pub wall_error: f64,
}

impl OracleComparison {
    pub fn passes(&self) -> bool {
        self.residual.max_scaled() <= RESIDUAL_TOLERANCE
            && self.profile_error <= ORACLE_TOLERANCE
            && self.flux_error <= ORACLE_TOLERANCE
            && self.wall_error <= ORACLE_TOLERANCE
    }
}

/// Interior radial points strictly inside (0, η).
pub fn interior_grid(eta: f64, n: usize) -> Vec<f64> {
    let full = uniform_grid(0.0, eta, n + 2);
    full[1..=n].to_vec()
}

/// L∞ distance between the series shape and a discrete solution, relative to
/// the series maximum.
pub fn profile_error(series: &SeriesSolution, fd: &FdSolution) -> Result<f64> {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (&x, &u) in fd.xi.iter().zip(&fd.u_hat) {
        let s = series.velocity_shape(x.min(series.eta()))?;
        num = num.max((s - u).abs());
        den = den.max(s.abs());
    }
    Ok(num / den)
}

pub fn compare(params: &FlowParams, eta: f64, n: usize) -> Result<OracleComparison> {
    let series = SeriesSolution::compute(params, eta)?;
    let residual = residual_check(&series, params, &interior_grid(eta, RESIDUAL_POINTS));
    let fd = solve_fd(params, eta, n)?;
    let integrals = fd_flow_and_shear(&fd);
    let flux = series.flux_integral();
    let wall = series.velocity_derivative(eta)?;
    Ok(OracleComparison {
        params: *params,
        eta,
        n_used: series.n_used(),
        residual,
        profile_error: profile_error(&series, &fd)?,
        flux_error: ((integrals.flux_integral - flux) / flux).abs(),
        wall_error: ((integrals.wall_derivative - wall) / wall).abs(),
    })
}

/// The 54-point check grid: M ∈ {0, 2.5, 5} × H ∈ {0, 0.2, 0.4} ×
/// k ∈ {0.1, 0.25, 1} × m ∈ {2, 4} at η ∈ {0.375, 1.0}. Other fields come
/// from `base`.
pub fn parameter_grid(base: &FlowParams) -> Vec<(FlowParams, f64)> {
    let mut out = Vec::with_capacity(108);
    for hartmann in [0.0, 2.5, 5.0] {
        for hematocrit in [0.0, 0.2, 0.4] {
            for permeability in [0.1, 0.25, 1.0] {
                for m in [2, 4] {
                    let p = FlowParams {
                        hartmann,
                        hematocrit,
                        permeability,
                        m,
                        ..*base
                    };
                    for eta in [0.375, 1.0] {
                        out.push((p, eta));
                    }
                }
            }
        }
    }
    out
}

/// Observed order of the oracle from three nested grids n, 2n−1, 4n−3:
/// log₂ of the ratio of successive maximum differences.
pub fn observed_order(params: &FlowParams, eta: f64, n: usize) -> Result<f64> {
    use crate::fd::max_difference_on_coarse;
    let a = solve_fd(params, eta, n)?;
    let b = solve_fd(params, eta, 2 * n - 1)?;
    let c = solve_fd(params, eta, 4 * n - 3)?;
    let ratio = max_difference_on_coarse(&a, &b) / max_difference_on_coarse(&b, &c);
    Ok(ratio.log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_54_parameter_points() {
        let grid = parameter_grid(&FlowParams::default());
        assert_eq!(grid.len(), 108);
        let mut distinct: Vec<_> = grid
            .iter()
            .map(|(p, _)| {
                (
                    p.hartmann.to_bits(),
                    p.hematocrit.to_bits(),
                    p.permeability.to_bits(),
                    p.m,
                )
            })
            .collect();
        distinct.dedup();
        assert_eq!(distinct.len(), 54);
    }

    #[test]
    fn defaults_agree_with_oracle() {
        let c = compare(&FlowParams::default(), 0.7378, ORACLE_POINTS).unwrap();
        assert!(c.passes(), "{c:?}");
    }

    #[test]
    fn oracle_is_second_order() {
        let order = observed_order(&FlowParams::default(), 0.625, 201).unwrap();
        assert!((order - 2.0).abs() < 0.3, "{order}");
    }
}
