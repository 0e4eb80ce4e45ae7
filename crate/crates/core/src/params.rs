//! Physical and numerical inputs of the flow model.
//!
//! Lengths (`throat_spacing`, `onset`, `length`) are dimensionless multiples of
//! the normal artery radius R₀; the radial coordinate is ξ = r/R₀.

use crate::error::{Error, Result};

/// All inputs for one model evaluation. Defaults are the standard blood values
/// used throughout the figure presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// Taper angle α in radians; positive values make the artery diverge.
    pub alpha: f64,
    /// Maximum hematocrit H at the axis, as a fraction.
    pub hematocrit: f64,
    /// Viscosity-hematocrit constant β (Einstein relation).
    pub beta: f64,
    /// Hematocrit shape exponent m ≥ 2.
    pub m: u32,
    /// Hartmann number M.
    pub hartmann: f64,
    /// Dimensionless porous permeability k = k̄/R₀².
    pub permeability: f64,
    /// Distance l between the two throats.
    pub throat_spacing: f64,
    /// Onset d of the stenosed region.
    pub onset: f64,
    /// Length L of the arterial segment.
    pub length: f64,
    /// Scale applied to the stenosis polynomial. 1 reproduces the standard
    /// overlapping shape; smaller values give milder constrictions.
    pub severity: f64,
    /// Relative tail tolerance for series truncation.
    pub tol: f64,
    /// Hard cap on the number of series coefficients.
    pub n_max: usize,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            alpha: 0.09,
            hematocrit: 0.2,
            beta: 2.5,
            m: 2,
            hartmann: 2.5,
            permeability: 0.25,
            throat_spacing: 2.0,
            onset: 0.5,
            length: 5.0,
            severity: 1.0,
            tol: 1e-12,
            n_max: 4096,
        }
    }
}

impl FlowParams {
    /// Parameters for which the model reduces to Poiseuille flow:
    /// no hematocrit, no field and (practically) infinite permeability.
    pub fn poiseuille() -> Self {
        Self {
            alpha: 0.0,
            hematocrit: 0.0,
            hartmann: 0.0,
            permeability: 1e9,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn finite(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("{v} is not finite")))
            }
        }
        finite("alpha", self.alpha)?;
        finite("hematocrit", self.hematocrit)?;
        finite("beta", self.beta)?;
        finite("hartmann", self.hartmann)?;
        finite("permeability", self.permeability)?;
        finite("l", self.throat_spacing)?;
        finite("d", self.onset)?;
        finite("length", self.length)?;
        finite("severity", self.severity)?;
        finite("tol", self.tol)?;

        if !(0.0..1.0).contains(&self.hematocrit) {
            return Err(Error::invalid("hematocrit", "must satisfy 0 <= H < 1"));
        }
        if self.beta <= 0.0 {
            return Err(Error::invalid("beta", "must be positive"));
        }
        if self.m < 2 {
            return Err(Error::invalid("m", "must be an integer >= 2"));
        }
        if self.hartmann < 0.0 {
            return Err(Error::invalid("hartmann", "must be non-negative"));
        }
        if self.permeability <= 0.0 {
            return Err(Error::invalid("permeability", "must be positive"));
        }
        if self.throat_spacing <= 0.0 {
            return Err(Error::invalid("l", "must be positive"));
        }
        if self.onset < 0.0 {
            return Err(Error::invalid("d", "must be non-negative"));
        }
        if self.onset + 1.5 * self.throat_spacing > self.length {
            return Err(Error::invalid(
                "length",
                format!(
                    "stenosed region ends at d + 3l/2 = {} beyond L = {}",
                    self.onset + 1.5 * self.throat_spacing,
                    self.length
                ),
            ));
        }
        if self.alpha.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::invalid("alpha", "must lie in (-pi/2, pi/2)"));
        }
        if self.severity < 0.0 {
            return Err(Error::invalid("severity", "must be non-negative"));
        }
        if self.tol <= 0.0 {
            return Err(Error::invalid("tol", "must be positive"));
        }
        if self.n_max < 8 {
            return Err(Error::invalid("n_max", "must be at least 8"));
        }
        Ok(())
    }

    /// a₂ = βH.
    pub fn a2(&self) -> f64 {
        self.beta * self.hematocrit
    }

    /// a₁ = 1 + βH, the viscosity factor on the axis.
    pub fn a1(&self) -> f64 {
        1.0 + self.a2()
    }

    /// M² + a₁/k: combined Lorentz and Darcy drag coefficient at the axis.
    pub fn drag(&self) -> f64 {
        self.hartmann * self.hartmann + self.a1() / self.permeability
    }

    /// Hematocrit h(ξ) = H(1 − ξ^m). Negative beyond ξ = 1 (tapered wall).
    pub fn hematocrit_at(&self, xi: f64) -> f64 {
        self.hematocrit * (1.0 - xi.powi(self.m as i32))
    }

    /// Viscosity μ(ξ)/μ₀ = 1 + βh(ξ) = a₁ − a₂ξ^m.
    pub fn viscosity_factor(&self, xi: f64) -> f64 {
        1.0 + self.beta * self.hematocrit_at(xi)
    }

    /// dν/dξ = −m a₂ ξ^(m−1).
    pub fn viscosity_slope(&self, xi: f64) -> f64 {
        -(self.m as f64) * self.a2() * xi.powi(self.m as i32 - 1)
    }

    /// Radius at which the viscosity factor reaches zero, or infinity when the
    /// viscosity is uniform. No solution exists for wall radii at or past it.
    pub fn zero_viscosity_radius(&self) -> f64 {
        let a2 = self.a2();
        if a2 == 0.0 {
            f64::INFINITY
        } else {
            (self.a1() / a2).powf(1.0 / self.m as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = FlowParams::default();
        p.validate().unwrap();
        assert_eq!(p.a1(), 1.5);
        assert_eq!(p.a2(), 0.5);
        assert_eq!(p.a1(), 1.0 + p.a2());
    }

    #[test]
    fn hematocrit_profile() {
        let p = FlowParams::default();
        assert_eq!(p.hematocrit_at(0.0), 0.2);
        assert_eq!(p.hematocrit_at(1.0), 0.0);
        assert!((p.hematocrit_at(0.5) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn viscosity_profile() {
        let p = FlowParams::default();
        assert!((p.viscosity_factor(0.0) - 1.5).abs() < 1e-15);
        assert_eq!(p.viscosity_factor(1.0), 1.0);
        let plain = FlowParams {
            hematocrit: 0.0,
            ..p
        };
        for xi in [0.0, 0.3, 1.0, 1.4] {
            assert_eq!(plain.viscosity_factor(xi), 1.0);
        }
        // a1 - a2 xi^m form
        for xi in [0.1, 0.7, 1.2] {
            let v = p.a1() - p.a2() * xi * xi;
            assert!((p.viscosity_factor(xi) - v).abs() < 1e-14);
        }
    }

    #[test]
    fn viscosity_slope_matches_difference() {
        let p = FlowParams {
            m: 3,
            hematocrit: 0.4,
            ..FlowParams::default()
        };
        let h = 1e-6;
        for xi in [0.2, 0.9] {
            let fd = (p.viscosity_factor(xi + h) - p.viscosity_factor(xi - h)) / (2.0 * h);
            assert!((fd - p.viscosity_slope(xi)).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_viscosity_radius() {
        let p = FlowParams::default();
        let r = p.zero_viscosity_radius();
        assert!((r - 3f64.sqrt()).abs() < 1e-14);
        assert!(p.viscosity_factor(r).abs() < 1e-14);
        assert!(FlowParams::poiseuille()
            .zero_viscosity_radius()
            .is_infinite());
    }

    #[test]
    fn rejects_bad_values() {
        let base = FlowParams::default();
        let cases = [
            FlowParams {
                hematocrit: 1.0,
                ..base
            },
            FlowParams {
                hematocrit: -0.1,
                ..base
            },
            FlowParams { beta: 0.0, ..base },
            FlowParams { m: 1, ..base },
            FlowParams {
                hartmann: -1.0,
                ..base
            },
            FlowParams {
                permeability: 0.0,
                ..base
            },
            FlowParams {
                throat_spacing: 0.0,
                ..base
            },
            FlowParams {
                onset: -0.5,
                ..base
            },
            FlowParams {
                length: 3.0,
                ..base
            },
            FlowParams { tol: 0.0, ..base },
            FlowParams { n_max: 7, ..base },
            FlowParams {
                alpha: f64::NAN,
                ..base
            },
        ];
        for p in cases {
            assert!(p.validate().is_err(), "{p:?} accepted");
        }
    }
}
