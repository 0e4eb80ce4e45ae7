//! Finite-difference cross-check for the series solver.
//!
//! Solves the unit-forcing shape equation
//!
//! ```text
//! (1/ξ) d/dξ[ξ ν dû/dξ] − M² û − (ν/k) û = 4a₁,   û′(0) = 0,  û(η) = 0
//! ```
//!
//! on a uniform grid with the conservative three-point stencil. On the axis
//! the operator is replaced by its limit 2ν(0)û″ (ν′(0) = 0 for m ≥ 2), with
//! the mirror condition û₋₁ = û₁. The system is tridiagonal and solved
//! directly. This path shares nothing with the series code.

use crate::error::{Error, Result};
use crate::params::FlowParams;

pub const MIN_POINTS: usize = 33;

#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    pub xi: Vec<f64>,
    pub u_hat: Vec<f64>,
}

impl FdSolution {
    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn eta(&self) -> f64 {
        *self.xi.last().unwrap()
    }

    pub fn step(&self) -> f64 {
        self.eta() / (self.n() - 1) as f64
    }
}

/// Flux integral and wall slope recovered from a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdIntegrals {
    /// 2∫₀^η ξ û dξ by composite Simpson.
    pub flux_integral: f64,
    /// dû/dξ at ξ = η by the one-sided second-order formula.
    pub wall_derivative: f64,
}

pub fn solve_fd(params: &FlowParams, eta: f64, n: usize) -> Result<FdSolution> {
    params.validate()?;
    if n < MIN_POINTS || n.is_multiple_of(2) {
        return Err(Error::invalid(
            "n",
            format!("grid size {n} must be odd and >= {MIN_POINTS}"),
        ));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid("eta", "wall radius must be positive"));
    }

    let h = eta / (n - 1) as f64;
    let h2 = h * h;
    let xi: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { eta } else { i as f64 * h })
        .collect();
    let m2 = params.hartmann * params.hartmann;
    let forcing = 4.0 * params.a1();

    // unknowns are û_0 .. û_{n-2}; û_{n-1} = 0
    let unknowns = n - 1;
    let mut lower = vec![0.0; unknowns];
    let mut diag = vec![0.0; unknowns];
    let mut upper = vec![0.0; unknowns];
    let rhs = vec![forcing; unknowns];

    let nu0 = params.viscosity_factor(0.0);
    diag[0] = -4.0 * nu0 / h2 - m2 - nu0 / params.permeability;
    upper[0] = 4.0 * nu0 / h2;
    for i in 1..unknowns {
        let x = xi[i];
        let west = (x - 0.5 * h) * params.viscosity_factor(x - 0.5 * h) / (x * h2);
        let east = (x + 0.5 * h) * params.viscosity_factor(x + 0.5 * h) / (x * h2);
        lower[i] = west;
        diag[i] = -(west + east) - m2 - params.viscosity_factor(x) / params.permeability;
        if i + 1 < unknowns {
            upper[i] = east;
        }
    }

    let mut u_hat = thomas(&lower, &diag, &upper, &rhs)?;
    u_hat.push(0.0);
    Ok(FdSolution { xi, u_hat })
}

/// Tridiagonal solve without pivoting.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() < f64::MIN_POSITIVE || !pivot.is_finite() {
        return Err(Error::SingularMatrix { row: 0 });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot.abs() < f64::MIN_POSITIVE || !pivot.is_finite() {
            return Err(Error::SingularMatrix { row: i });
        }
        c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

pub fn fd_flow_and_shear(sol: &FdSolution) -> FdIntegrals {
    let n = sol.n();
    let h = sol.step();
    let integrand: Vec<f64> = sol.xi.iter().zip(&sol.u_hat).map(|(x, u)| x * u).collect();
    let mut simpson = integrand[0] + integrand[n - 1];
    for (i, f) in integrand.iter().enumerate().take(n - 1).skip(1) {
        simpson += if i % 2 == 1 { 4.0 * f } else { 2.0 * f };
    }
    let flux_integral = 2.0 * simpson * h / 3.0;
    let u = &sol.u_hat;
    let wall_derivative = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    FdIntegrals {
        flux_integral,
        wall_derivative,
    }
}

/// max |a − b| over the nodes of `coarse`, which must be a subgrid of `fine`
/// with `fine.n() − 1` a multiple of `coarse.n() − 1`.
pub fn max_difference_on_coarse(coarse: &FdSolution, fine: &FdSolution) -> f64 {
    let stride = (fine.n() - 1) / (coarse.n() - 1);
    coarse
        .u_hat
        .iter()
        .enumerate()
        .map(|(i, u)| (u - fine.u_hat[i * stride]).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poiseuille_is_reproduced() {
        let p = FlowParams::poiseuille();
        let sol = solve_fd(&p, 1.0, 201).unwrap();
        let err = sol
            .xi
            .iter()
            .zip(&sol.u_hat)
            .map(|(x, u)| (u - (x * x - 1.0)).abs())
            .fold(0.0, f64::max);
        assert!(err < 5e-5, "{err}");
        let q = fd_flow_and_shear(&sol);
        assert!((q.flux_integral + 0.5).abs() < 1e-4);
        assert!((q.wall_derivative - 2.0).abs() < 1e-4);
    }

    #[test]
    fn forward_flow_sign() {
        let sol = solve_fd(&FlowParams::default(), 0.7378, 101).unwrap();
        assert!(sol.u_hat.iter().all(|&u| u <= 0.0));
        assert_eq!(*sol.u_hat.last().unwrap(), 0.0);
    }

    #[test]
    fn axis_is_flat() {
        let sol = solve_fd(&FlowParams::default(), 1.0, 401).unwrap();
        let h = sol.step();
        // one-sided slope at the axis tends to zero with h
        let slope = (sol.u_hat[1] - sol.u_hat[0]) / h;
        assert!(slope.abs() < 10.0 * h);
    }

    #[test]
    fn self_convergence_is_second_order() {
        let p = FlowParams::default();
        let a = solve_fd(&p, 0.625, 101).unwrap();
        let b = solve_fd(&p, 0.625, 201).unwrap();
        let c = solve_fd(&p, 0.625, 401).unwrap();
        let ratio = max_difference_on_coarse(&a, &b) / max_difference_on_coarse(&b, &c);
        assert!((ratio - 4.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn rejects_bad_grids() {
        let p = FlowParams::default();
        assert!(solve_fd(&p, 1.0, 31).is_err());
        assert!(solve_fd(&p, 1.0, 100).is_err());
        assert!(solve_fd(&p, 0.0, 101).is_err());
    }
}
