//! Steady blood flow through a tapered artery with two overlapping stenoses,
//! under a transverse magnetic field, in a porous medium, with viscosity set
//! by a radial hematocrit profile.
//!
//! The radial momentum balance is solved at each axial station by a
//! power-series expansion about the axis ([`series`]). [`hemodynamics`] turns
//! that into velocity, pressure-gradient and wall-shear ratios at constant
//! flux, and [`fd`] is an independent finite-difference solver used only to
//! validate the series.
//!
//! ```
//! use stenoflow::{hemodynamics, FlowParams};
//!
//! let params = FlowParams::default();
//! let dpdz = hemodynamics::pressure_gradient_ratio(&params, 1.0).unwrap();
//! let q = hemodynamics::flow_rate(&params, 1.0, dpdz).unwrap();
//! assert!((q - 1.0).abs() < 1e-10);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod hemodynamics;
pub mod output;
pub mod params;
pub mod plot;
pub mod presets;
pub mod series;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::ArteryGeometry;
pub use hemodynamics::{AxialRecord, LocalFlow, RadialProfile};
pub use params::FlowParams;
pub use series::SeriesSolution;
