//! Wall shape of a tapered artery with two overlapping stenoses.
//!
//! Inside the stenosed interval d ≤ z ≤ d + 3l/2 the radius ratio is
//! η(z) = (1 − ε·P(z − d))·a(z) with the quartic
//!
//! ```text
//! P(s) = (11/32) l³ s − (47/48) l² s² + l s³ − (1/3) s⁴
//! ```
//!
//! and taper a(z) = 1 + z tan α. Outside it η = a(z). P vanishes at both ends
//! and is symmetric about the overlap point s = 3l/4.

use crate::error::{Error, Result};
use crate::params::FlowParams;

/// Number of uniform z samples used when checking that the lumen stays open.
pub const VALIDATION_SAMPLES: usize = 4096;

/// Stenosis quartic P(s) for throat spacing `l`.
pub fn stenosis_polynomial(l: f64, s: f64) -> f64 {
    let l2 = l * l;
    (11.0 / 32.0) * l2 * l * s - (47.0 / 48.0) * l2 * s * s + l * s * s * s - s * s * s * s / 3.0
}

/// dP/ds.
pub fn stenosis_slope(l: f64, s: f64) -> f64 {
    let l2 = l * l;
    (11.0 / 32.0) * l2 * l - (47.0 / 24.0) * l2 * s + 3.0 * l * s * s - (4.0 / 3.0) * s * s * s
}

/// A named axial position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmark {
    pub label: &'static str,
    pub z: f64,
}

/// Evaluator for the wall radius. Construction guarantees η > 0 on [0, L].
#[derive(Debug, Clone, Copy)]
pub struct ArteryGeometry {
    params: FlowParams,
}

impl ArteryGeometry {
    pub fn new(params: FlowParams) -> Result<Self> {
        params.validate()?;
        let geometry = Self { params };
        geometry.check_open()?;
        Ok(geometry)
    }

    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    fn check_open(&self) -> Result<()> {
        let length = self.params.length;
        let samples = (0..VALIDATION_SAMPLES)
            .map(|i| length * i as f64 / (VALIDATION_SAMPLES - 1) as f64)
            .chain(self.landmarks().into_iter().map(|m| m.z))
            .chain(self.throat_minima());
        for z in samples {
            let eta = self.radius_ratio(z);
            if eta.is_nan() || eta <= 0.0 {
                return Err(Error::GeometryInvalid { z, eta });
            }
        }
        Ok(())
    }

    /// a(z) = 1 + z tan α.
    pub fn taper_factor(&self, z: f64) -> f64 {
        1.0 + z * self.params.alpha.tan()
    }

    /// True when z lies in the stenosed interval [d, d + 3l/2].
    pub fn in_stenosis(&self, z: f64) -> bool {
        let d = self.params.onset;
        z >= d && z <= d + 1.5 * self.params.throat_spacing
    }

    /// η(z) = R(z)/R₀.
    pub fn radius_ratio(&self, z: f64) -> f64 {
        let a = self.taper_factor(z);
        if self.in_stenosis(z) {
            let p = stenosis_polynomial(self.params.throat_spacing, z - self.params.onset);
            (1.0 - self.params.severity * p) * a
        } else {
            a
        }
    }

    /// Onset, primary throat, overlap, secondary throat and outset at their
    /// nominal positions d, d + l/4, d + 3l/4, d + 5l/4, d + 3l/2.
    pub fn landmarks(&self) -> Vec<Landmark> {
        let d = self.params.onset;
        let l = self.params.throat_spacing;
        vec![
            Landmark {
                label: "onset",
                z: d,
            },
            Landmark {
                label: "primary_throat",
                z: d + 0.25 * l,
            },
            Landmark {
                label: "overlap",
                z: d + 0.75 * l,
            },
            Landmark {
                label: "secondary_throat",
                z: d + 1.25 * l,
            },
            Landmark {
                label: "outset",
                z: d + 1.5 * l,
            },
        ]
    }

    /// Exact maxima of P, i.e. the narrowest points of the untapered wall:
    /// s = (3/4 ∓ √14/8)·l. They sit close to, but not on, the nominal throats.
    pub fn throat_minima(&self) -> [f64; 2] {
        let d = self.params.onset;
        let l = self.params.throat_spacing;
        let offset = 14f64.sqrt() / 8.0;
        [d + (0.75 - offset) * l, d + (0.75 + offset) * l]
    }

    /// Uniform grid of `n` stations covering [0, L].
    pub fn z_grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(0.0, self.params.length, n)
    }
}

/// `n` evenly spaced points from `start` to `end`, both ends included exactly.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
