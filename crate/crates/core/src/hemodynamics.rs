//! Flow observables from the series solution.
//!
//! All outputs are ratios against the normal, unmagnetised artery carrying
//! the same flux: ū = u/u₀ with u₀ = −R₀²(dp/dz)₀/(8μ₀), d̄p/dz =
//! (dp/dz)/(dp/dz)₀ and τ̄ = τ_R/τ_N with τ_N = −(R₀/2)(dp/dz)₀. The local
//! pressure gradient is fixed by requiring Q̄ = 1 at every station.

use rayon::prelude::*;

use crate::error::{Error, Result, StationFailure};
use crate::geometry::{uniform_grid, ArteryGeometry};
use crate::params::FlowParams;
use crate::series::SeriesSolution;

/// Series solution at one station plus the flux-consistent pressure gradient.
#[derive(Debug, Clone)]
pub struct LocalFlow {
    params: FlowParams,
    series: SeriesSolution,
    dpdz_bar: f64,
}

impl LocalFlow {
    /// Solves at an explicit wall radius, independent of the stenosis shape.
    pub fn at_radius(params: &FlowParams, eta: f64) -> Result<Self> {
        let series = SeriesSolution::compute(params, eta)?;
        let bracket = series.flux_bracket();
        if bracket.is_nan() || bracket <= 0.0 {
            return Err(Error::DegenerateFlow { eta, bracket });
        }
        let dpdz_bar = 0.25 * params.a1() * series.homogeneous(eta) / bracket;
        Ok(Self {
            params: *params,
            series,
            dpdz_bar,
        })
    }

    pub fn at_station(geometry: &ArteryGeometry, z: f64) -> Result<Self> {
        let length = geometry.params().length;
        if !(0.0..=length).contains(&z) {
            return Err(Error::invalid(
                "z",
                format!("station {z} outside [0, {length}]"),
            ));
        }
        Self::at_radius(geometry.params(), geometry.radius_ratio(z))
    }

    pub fn series(&self) -> &SeriesSolution {
        &self.series
    }

    pub fn eta(&self) -> f64 {
        self.series.eta()
    }

    /// (dp/dz)/(dp/dz)₀ that carries unit flux.
    pub fn dpdz_bar(&self) -> f64 {
        self.dpdz_bar
    }

    /// ū(ξ) = −(2/a₁)·(d̄p/dz)·û(ξ).
    pub fn velocity(&self, xi: f64) -> Result<f64> {
        Ok(self.velocity_scale() * self.series.velocity_shape(xi)?)
    }

    pub fn centerline_velocity(&self) -> f64 {
        self.velocity_scale() * self.series.velocity_shape(0.0).unwrap_or(f64::NAN)
    }

    fn velocity_scale(&self) -> f64 {
        -2.0 / self.params.a1() * self.dpdz_bar
    }

    /// Q̄ = (4/a₁)·(d̄p/dz)·[flux bracket]/Σ Aᵢ ηⁱ for an arbitrary pressure
    /// gradient ratio.
    pub fn flow_rate(&self, dpdz_bar: f64) -> f64 {
        let eta = self.eta();
        4.0 / self.params.a1() * dpdz_bar * self.series.flux_bracket()
            / self.series.homogeneous(eta)
    }

    /// τ̄ = ν(η)·(d̄p/dz)·û′(η)/(2a₁): the viscous traction −μ du/dr at the
    /// wall over the normal-artery value.
    pub fn wall_shear_ratio(&self) -> f64 {
        let eta = self.eta();
        let slope = self.series.velocity_derivative(eta).unwrap_or(f64::NAN);
        self.params.viscosity_factor(eta) * self.dpdz_bar * slope / (2.0 * self.params.a1())
    }

    pub fn profile(&self, z: f64, n_samples: usize) -> Result<RadialProfile> {
        if n_samples < 2 {
            return Err(Error::invalid(
                "n_samples",
                "need at least 2 radial samples",
            ));
        }
        let eta = self.eta();
        let xi = uniform_grid(0.0, eta, n_samples);
        let u_bar = xi
            .iter()
            .map(|&x| self.velocity(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(RadialProfile {
            z,
            eta,
            xi,
            u_bar,
            params: self.params,
        })
    }

    pub fn record(&self, z: f64) -> AxialRecord {
        AxialRecord {
            z,
            eta: self.eta(),
            dpdz_bar: self.dpdz_bar,
            tau_bar: self.wall_shear_ratio(),
            u_center: self.centerline_velocity(),
        }
    }
}

/// Sampled velocity ū(ξ) across the lumen at one station.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub z: f64,
    pub eta: f64,
    pub xi: Vec<f64>,
    pub u_bar: Vec<f64>,
    pub params: FlowParams,
}

/// Observables at one axial station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialRecord {
    pub z: f64,
    pub eta: f64,
    pub dpdz_bar: f64,
    pub tau_bar: f64,
    pub u_center: f64,
}

pub fn pressure_gradient_ratio(params: &FlowParams, z: f64) -> Result<f64> {
    let geometry = ArteryGeometry::new(*params)?;
    Ok(LocalFlow::at_station(&geometry, z)?.dpdz_bar())
}

pub fn velocity_profile(params: &FlowParams, z: f64, n_samples: usize) -> Result<RadialProfile> {
    let geometry = ArteryGeometry::new(*params)?;
    LocalFlow::at_station(&geometry, z)?.profile(z, n_samples)
}

pub fn flow_rate(params: &FlowParams, z: f64, dpdz_bar: f64) -> Result<f64> {
    let geometry = ArteryGeometry::new(*params)?;
    Ok(LocalFlow::at_station(&geometry, z)?.flow_rate(dpdz_bar))
}

pub fn wall_shear_ratio(params: &FlowParams, z: f64) -> Result<f64> {
    let geometry = ArteryGeometry::new(*params)?;
    Ok(LocalFlow::at_station(&geometry, z)?.wall_shear_ratio())
}

/// Per-station outcomes in grid order. Stations are solved in parallel.
pub fn axial_sweep_results(geometry: &ArteryGeometry, z_grid: &[f64]) -> Vec<Result<AxialRecord>> {
    z_grid
        .par_iter()
        .map(|&z| LocalFlow::at_station(geometry, z).map(|flow| flow.record(z)))
        .collect()
}

/// Records for every station, or every failure with its index.
pub fn axial_sweep(params: &FlowParams, z_grid: &[f64]) -> Result<Vec<AxialRecord>> {
    let geometry = ArteryGeometry::new(*params)?;
    let mut records = Vec::with_capacity(z_grid.len());
    let mut failures = Vec::new();
    for (index, (result, &z)) in axial_sweep_results(&geometry, z_grid)
        .into_iter()
        .zip(z_grid)
        .enumerate()
    {
        match result {
            Ok(r) => records.push(r),
            Err(error) => failures.push(StationFailure { index, z, error }),
        }
    }
    if failures.is_empty() {
        Ok(records)
    } else {
        Err(Error::Sweep { failures })
    }
}
