//! Power-series (Frobenius) solution of the radial momentum balance
//!
//! ```text
//! (1/ξ) d/dξ[ξ ν(ξ) du/dξ] − M² u − (ν(ξ)/k) u = 4a₁ G,   ν(ξ) = a₁ − a₂ ξ^m
//! ```
//!
//! with u(η) = 0 and u′(0) = 0. The forcing scale G = R₀² (dp/dz) / (4 a₁ μ₀)
//! is factored out: everything here works with the shape û = u/G.
//!
//! The bounded solution is û = K′·Σ Aᵢ ξⁱ + Σ Bᵢ ξ^(i+2) where the first
//! series solves the homogeneous equation and the second the unit-forcing one.
//! Substituting into the equation and matching powers of ξ gives, for j ≥ 1,
//!
//! ```text
//! a₁ j² A_j       = a₂ j (j − m) A_{j−m}         + (M² + a₁/k) A_{j−2} − (a₂/k) A_{j−m−2}
//! a₁ (j+2)² B_j   = a₂ (j+2)(j+2−m) B_{j−m}      + (M² + a₁/k) B_{j−2} − (a₂/k) B_{j−m−2}
//! ```
//!
//! with A₀ = B₀ = 1 and negative indices read as zero. K′ follows from no-slip.
//!
//! The series converge for |ξ| below the zero-viscosity radius (a₁/a₂)^(1/m),
//! so the wall must lie strictly inside it.

use crate::error::{Error, Result};
use crate::params::FlowParams;

/// Consecutive coefficients that must pass the tail test before truncating.
const TAIL_RUN: usize = 3;

/// Truncated series solution at one axial station.
///
/// Coefficients are stored pre-multiplied by powers of the wall radius,
/// Ãᵢ = Aᵢ ηⁱ and B̃ᵢ = Bᵢ η^(i+2), and the series are evaluated in t = ξ/η.
/// Near the zero-viscosity radius thousands of terms may be needed, and the
/// raw Aᵢ and ηⁱ would leave the floating-point range long before their
/// product does.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    a: Vec<f64>,
    b: Vec<f64>,
    eta: f64,
    k_over_g: f64,
}

/// Scaled recurrence for either series. `shift` is 0 for A and 2 for B.
struct Recurrence {
    m: usize,
    a1: f64,
    /// a₂ η^m
    curvature: f64,
    /// (M² + a₁/k) η²
    drag: f64,
    /// (a₂/k) η^(m+2)
    coupling: f64,
}

impl Recurrence {
    fn new(params: &FlowParams, eta: f64) -> Self {
        let eta_m = eta.powi(params.m as i32);
        Self {
            m: params.m as usize,
            a1: params.a1(),
            curvature: params.a2() * eta_m,
            drag: params.drag() * eta * eta,
            coupling: params.a2() / params.permeability * eta_m * eta * eta,
        }
    }

    #[inline]
    fn next(&self, c: &[f64], j: usize, shift: usize) -> f64 {
        let at = |offset: usize| if j >= offset { c[j - offset] } else { 0.0 };
        let jj = (j + shift) as f64;
        let mut num = self.drag * at(2);
        if self.curvature != 0.0 {
            num += self.curvature * jj * (jj - self.m as f64) * at(self.m)
                - self.coupling * at(self.m + 2);
        }
        num / (self.a1 * jj * jj)
    }
}

impl SeriesSolution {
    /// Computes coefficients until the relative tail test holds for three
    /// consecutive indices. The test for index j is
    /// `(j+2)·|c̃_j| ≤ tol · Σ|c̃_i|` for both series, which also bounds the
    /// tail of the differentiated series.
    pub fn compute(params: &FlowParams, eta: f64) -> Result<Self> {
        params.validate()?;
        check_radius(params, eta)?;

        let rec = Recurrence::new(params, eta);
        let tol = params.tol;
        let mut a = vec![1.0];
        let mut b = vec![eta * eta];
        let mut sum_a = 1.0;
        let mut sum_b = eta * eta;
        let mut run = 0;
        for j in 1..=params.n_max {
            let aj = rec.next(&a, j, 0);
            let bj = rec.next(&b, j, 2);
            a.push(aj);
            b.push(bj);
            sum_a += aj.abs();
            sum_b += bj.abs();
            if !(sum_a.is_finite() && sum_b.is_finite()) {
                break;
            }
            let weight = (j + 2) as f64;
            if weight * aj.abs() <= tol * sum_a && weight * bj.abs() <= tol * sum_b {
                run += 1;
                if run == TAIL_RUN {
                    return Ok(Self::assemble(a, b, eta));
                }
            } else {
                run = 0;
            }
        }
        Err(Error::NoConvergence {
            eta,
            tol,
            n_max: params.n_max,
        })
    }

    /// Coefficients through index `order` with no convergence check.
    pub fn with_order(params: &FlowParams, eta: f64, order: usize) -> Result<Self> {
        params.validate()?;
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::invalid("eta", "wall radius must be positive"));
        }
        let rec = Recurrence::new(params, eta);
        let mut a = vec![1.0];
        let mut b = vec![eta * eta];
        for j in 1..=order {
            a.push(rec.next(&a, j, 0));
            b.push(rec.next(&b, j, 2));
        }
        Ok(Self::assemble(a, b, eta))
    }

    fn assemble(a: Vec<f64>, b: Vec<f64>, eta: f64) -> Self {
        let mut sol = Self {
            a,
            b,
            eta,
            k_over_g: 0.0,
        };
        sol.k_over_g = -sol.particular(eta) / sol.homogeneous(eta);
        sol
    }

    /// Homogeneous coefficients {Aᵢ}, A₀ = 1. High-index entries may
    /// underflow or overflow when the series is long.
    pub fn a(&self) -> Vec<f64> {
        let mut pow = 1.0;
        self.a
            .iter()
            .map(|c| {
                let v = c / pow;
                pow *= self.eta;
                v
            })
            .collect()
    }

    /// Particular coefficients {Bᵢ}, B₀ = 1.
    pub fn b(&self) -> Vec<f64> {
        let mut pow = self.eta * self.eta;
        self.b
            .iter()
            .map(|c| {
                let v = c / pow;
                pow *= self.eta;
                v
            })
            .collect()
    }

    /// Scaled terms Aᵢ ηⁱ.
    pub fn scaled_a(&self) -> &[f64] {
        &self.a
    }

    /// Scaled terms Bᵢ η^(i+2).
    pub fn scaled_b(&self) -> &[f64] {
        &self.b
    }

    /// Highest coefficient index kept.
    pub fn n_used(&self) -> usize {
        self.a.len() - 1
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// K/G = −Σ Bᵢ η^(i+2) / Σ Aᵢ ηⁱ.
    pub fn k_over_g(&self) -> f64 {
        self.k_over_g
    }

    /// Σ Aᵢ ξⁱ.
    pub fn homogeneous(&self, xi: f64) -> f64 {
        horner(&self.a, xi / self.eta)
    }

    /// Σ Bᵢ ξ^(i+2).
    pub fn particular(&self, xi: f64) -> f64 {
        let t = xi / self.eta;
        t * t * horner(&self.b, t)
    }

    /// Σ i Aᵢ ξ^(i−1).
    pub fn homogeneous_slope(&self, xi: f64) -> f64 {
        derivative(&self.a, 0, xi / self.eta) / self.eta
    }

    /// Σ (i+2) Bᵢ ξ^(i+1).
    pub fn particular_slope(&self, xi: f64) -> f64 {
        derivative(&self.b, 2, xi / self.eta) / self.eta
    }

    pub fn homogeneous_curvature(&self, xi: f64) -> f64 {
        second_derivative(&self.a, 0, xi / self.eta) / (self.eta * self.eta)
    }

    pub fn particular_curvature(&self, xi: f64) -> f64 {
        second_derivative(&self.b, 2, xi / self.eta) / (self.eta * self.eta)
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        if xi >= 0.0 && xi <= self.eta {
            Ok(())
        } else {
            Err(Error::Domain { xi, eta: self.eta })
        }
    }

    /// Bracket [Σ Bᵢ η^(i+2) Σ Aᵢ ξⁱ − Σ Bᵢ ξ^(i+2) Σ Aᵢ ηⁱ], zero at ξ = η.
    fn bracket(&self, xi: f64) -> f64 {
        let eta = self.eta;
        self.particular(eta) * self.homogeneous(xi) - self.particular(xi) * self.homogeneous(eta)
    }

    /// Velocity shape û(ξ) = u/G. Non-positive on [0, η] for forward flow,
    /// since G carries the sign of dp/dz.
    pub fn velocity_shape(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(-self.bracket(xi) / self.homogeneous(self.eta))
    }

    /// dû/dξ from the term-wise differentiated series.
    pub fn velocity_derivative(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(self.k_over_g * self.homogeneous_slope(xi) + self.particular_slope(xi))
    }

    pub fn velocity_curvature(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(self.k_over_g * self.homogeneous_curvature(xi) + self.particular_curvature(xi))
    }

    /// Σ Aᵢ η^(i+2)/(i+2), i.e. ∫₀^η ξ Σ Aᵢ ξⁱ dξ.
    pub fn homogeneous_moment(&self) -> f64 {
        self.eta * self.eta * weighted_sum(&self.a, 2)
    }

    /// Σ Bᵢ η^(i+4)/(i+4), i.e. ∫₀^η ξ Σ Bᵢ ξ^(i+2) dξ.
    pub fn particular_moment(&self) -> f64 {
        self.eta * self.eta * weighted_sum(&self.b, 4)
    }

    /// Flux bracket Σ Bᵢ η^(i+2) · Σ Aᵢ η^(i+2)/(i+2) − Σ Bᵢ η^(i+4)/(i+4) · Σ Aᵢ ηⁱ.
    /// Equals −Σ Aᵢ ηⁱ · ∫₀^η ξ û dξ.
    pub fn flux_bracket(&self) -> f64 {
        let eta = self.eta;
        self.particular(eta) * self.homogeneous_moment()
            - self.particular_moment() * self.homogeneous(eta)
    }

    /// 2∫₀^η ξ û dξ in closed form.
    pub fn flux_integral(&self) -> f64 {
        -2.0 * self.flux_bracket() / self.homogeneous(self.eta)
    }
}

fn check_radius(params: &FlowParams, eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(
            "eta",
            format!("wall radius {eta} must be positive"),
        ));
    }
    let radius = params.zero_viscosity_radius();
    if eta >= radius {
        return Err(Error::SeriesDivergent { eta, radius });
    }
    Ok(())
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
}

/// d/dt Σ cᵢ t^(i+shift).
fn derivative(c: &[f64], shift: usize, t: f64) -> f64 {
    if shift == 0 {
        c.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &ci)| acc * t + i as f64 * ci)
    } else {
        let q = c
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &ci)| acc * t + (i + shift) as f64 * ci);
        q * t.powi(shift as i32 - 1)
    }
}

/// d²/dt² Σ cᵢ t^(i+shift).
fn second_derivative(c: &[f64], shift: usize, t: f64) -> f64 {
    let lowest = 2usize.saturating_sub(shift);
    let q = c
        .iter()
        .enumerate()
        .skip(lowest)
        .rev()
        .fold(0.0, |acc, (i, &ci)| {
            let p = (i + shift) as f64;
            acc * t + p * (p - 1.0) * ci
        });
    // q = Σ_{i ≥ lowest} p(p−1) cᵢ t^(i−lowest); the sum wants t^(p−2)
    q * t.powi((lowest + shift) as i32 - 2)
}

/// Σ cᵢ / (i + offset).
fn weighted_sum(c: &[f64], offset: usize) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, &ci)| ci / (i + offset) as f64)
        .sum()
}

/// Largest pointwise residual of the governing equation, split by part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// max |L[Σ Aᵢ ξⁱ]|.
    pub homogeneous: f64,
    /// max |L[Σ Bᵢ ξ^(i+2)] − 4a₁|.
    pub particular: f64,
    /// Both parts divided by the pointwise magnitude of the largest operator
    /// term (at least 1).
    pub homogeneous_scaled: f64,
    pub particular_scaled: f64,
}

impl Residual {
    pub fn max_scaled(&self) -> f64 {
        self.homogeneous_scaled.max(self.particular_scaled)
    }

    pub fn max_abs(&self) -> f64 {
        self.homogeneous.max(self.particular)
    }
}

/// Evaluates L[f] = ν f″ + (ν/ξ + ν′) f′ − (M² + ν/k) f using analytic
/// derivatives of each series on `xi_grid`, which must lie inside (0, η).
pub fn residual_check(sol: &SeriesSolution, params: &FlowParams, xi_grid: &[f64]) -> Residual {
    let forcing = 4.0 * params.a1();
    let m2 = params.hartmann * params.hartmann;
    let mut out = Residual {
        homogeneous: 0.0,
        particular: 0.0,
        homogeneous_scaled: 0.0,
        particular_scaled: 0.0,
    };
    for &xi in xi_grid {
        let nu = params.viscosity_factor(xi);
        let dnu = params.viscosity_slope(xi);
        let drag = m2 + nu / params.permeability;
        let apply = |f: f64, df: f64, d2f: f64| {
            let terms = [nu * d2f, (nu / xi + dnu) * df, drag * f];
            let value = terms[0] + terms[1] - terms[2];
            let scale = terms.iter().fold(1.0f64, |s, t| s.max(t.abs()));
            (value, scale)
        };
        let (h, hs) = apply(
            sol.homogeneous(xi),
            sol.homogeneous_slope(xi),
            sol.homogeneous_curvature(xi),
        );
        let (p, ps) = apply(
            sol.particular(xi),
            sol.particular_slope(xi),
            sol.particular_curvature(xi),
        );
        let p = p - forcing;
        let ps = ps.max(forcing);
        out.homogeneous = out.homogeneous.max(h.abs());
        out.particular = out.particular.max(p.abs());
        out.homogeneous_scaled = out.homogeneous_scaled.max(h.abs() / hs);
        out.particular_scaled = out.particular_scaled.max(p.abs() / ps);
    }
    out
}
