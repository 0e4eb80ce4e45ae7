//! Figure presets: parameter studies of velocity, pressure gradient and wall
//! shear stress, each written as one long-format CSV with the varied
//! parameter as the first column.
//!
//! Caption parameters are applied on top of the run's parameters; anything a
//! caption does not name (m, β, l, d, L, truncation) comes from the run.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{uniform_grid, ArteryGeometry};
use crate::hemodynamics::{axial_sweep_results, LocalFlow};
use crate::output::Table;
use crate::params::FlowParams;
use crate::plot::PlotSpec;

pub const AXIAL_STATIONS: usize = 351;
pub const RADIAL_SAMPLES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Varied {
    Station,
    ThroatSpacing,
    Alpha,
    Hartmann,
    Permeability,
    Hematocrit,
}

impl Varied {
    pub fn column(self) -> &'static str {
        match self {
            Varied::Station => "z",
            Varied::ThroatSpacing => "l",
            Varied::Alpha => "alpha",
            Varied::Hartmann => "M",
            Varied::Permeability => "k",
            Varied::Hematocrit => "H",
        }
    }

    fn apply(self, params: &mut FlowParams, value: f64) {
        match self {
            Varied::Station => {}
            Varied::ThroatSpacing => params.throat_spacing = value,
            Varied::Alpha => params.alpha = value,
            Varied::Hartmann => params.hartmann = value,
            Varied::Permeability => params.permeability = value,
            Varied::Hematocrit => params.hematocrit = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    CenterlineVelocity,
    PressureGradient,
    WallShear,
}

impl Observable {
    pub fn column(self) -> &'static str {
        match self {
            Observable::CenterlineVelocity => "u_center",
            Observable::PressureGradient => "dpdz_bar",
            Observable::WallShear => "tau_bar",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Observable::CenterlineVelocity => "centreline velocity u(0)/u0",
            Observable::PressureGradient => "pressure gradient ratio",
            Observable::WallShear => "wall shear stress ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// ū(ξ) at a fixed station (ignored when the station itself varies).
    Profile { z: f64 },
    /// One observable along z over [0, L].
    Axial(Observable),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caption {
    pub hematocrit: Option<f64>,
    pub hartmann: Option<f64>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub permeability: Option<f64>,
}

const STANDARD: Caption = Caption {
    hematocrit: Some(0.2),
    hartmann: Some(2.5),
    beta: Some(2.5),
    alpha: Some(0.09),
    permeability: Some(0.25),
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub number: u32,
    pub title: &'static str,
    pub kind: Kind,
    pub varied: Varied,
    pub values: &'static [f64],
    pub caption: Caption,
}

const ALPHAS: &[f64] = &[0.0, 0.05, 0.09, 0.12];
const HARTMANNS: &[f64] = &[0.0, 2.5, 5.0];
const PERMEABILITIES: &[f64] = &[0.1, 0.25, 1.0];
const HEMATOCRITS: &[f64] = &[0.2, 0.4, 0.6];

pub const PRESETS: [FigurePreset; 12] = [
    FigurePreset {
        number: 3,
        title: "Radial velocity at several axial stations",
        kind: Kind::Profile { z: 0.0 },
        varied: Varied::Station,
        values: &[0.5, 1.0, 2.0, 3.0, 3.5],
        caption: STANDARD,
    },
    FigurePreset {
        number: 4,
        title: "Centreline velocity along the artery for several throat spacings",
        kind: Kind::Axial(Observable::CenterlineVelocity),
        varied: Varied::ThroatSpacing,
        values: &[1.6, 1.8, 2.0],
        caption: Caption {
            beta: None,
            ..STANDARD
        },
    },
    FigurePreset {
        number: 5,
        title: "Radial velocity at z = 2 for several taper angles",
        kind: Kind::Profile { z: 2.0 },
        varied: Varied::Alpha,
        values: ALPHAS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 6,
        title: "Radial velocity at z = 2 for several Hartmann numbers",
        kind: Kind::Profile { z: 2.0 },
        varied: Varied::Hartmann,
        values: HARTMANNS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 7,
        title: "Radial velocity at z = 2 for several permeabilities",
        kind: Kind::Profile { z: 2.0 },
        varied: Varied::Permeability,
        values: PERMEABILITIES,
        caption: STANDARD,
    },
    FigurePreset {
        number: 8,
        title: "Radial velocity at z = 2 for several hematocrits",
        kind: Kind::Profile { z: 2.0 },
        varied: Varied::Hematocrit,
        values: HEMATOCRITS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 9,
        title: "Pressure gradient along the artery for several Hartmann numbers",
        kind: Kind::Axial(Observable::PressureGradient),
        varied: Varied::Hartmann,
        values: HARTMANNS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 10,
        title: "Pressure gradient along the artery for several permeabilities",
        kind: Kind::Axial(Observable::PressureGradient),
        varied: Varied::Permeability,
        values: PERMEABILITIES,
        caption: STANDARD,
    },
    FigurePreset {
        number: 11,
        title: "Pressure gradient along the artery for several hematocrits",
        kind: Kind::Axial(Observable::PressureGradient),
        varied: Varied::Hematocrit,
        values: HEMATOCRITS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 12,
        title: "Pressure gradient along the artery for several taper angles",
        kind: Kind::Axial(Observable::PressureGradient),
        varied: Varied::Alpha,
        values: ALPHAS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 13,
        title: "Wall shear stress along the artery for several hematocrits",
        kind: Kind::Axial(Observable::WallShear),
        varied: Varied::Hematocrit,
        values: HEMATOCRITS,
        caption: STANDARD,
    },
    FigurePreset {
        number: 14,
        title: "Wall shear stress along the artery for several taper angles",
        kind: Kind::Axial(Observable::WallShear),
        varied: Varied::Alpha,
        values: ALPHAS,
        caption: STANDARD,
    },
];

impl FromStr for &'static FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let number = s
            .strip_prefix("fig")
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| Error::config("preset", format!("`{s}` is not of the form figN")))?;
        PRESETS
            .iter()
            .find(|p| p.number == number)
            .ok_or_else(|| Error::config("preset", format!("no preset `{s}` (fig3 to fig14)")))
    }
}

impl FigurePreset {
    pub fn name(&self) -> String {
        format!("fig{}", self.number)
    }

    /// Run parameters with the caption values applied.
    pub fn base_params(&self, run: &FlowParams) -> FlowParams {
        let c = &self.caption;
        FlowParams {
            hematocrit: c.hematocrit.unwrap_or(run.hematocrit),
            hartmann: c.hartmann.unwrap_or(run.hartmann),
            beta: c.beta.unwrap_or(run.beta),
            alpha: c.alpha.unwrap_or(run.alpha),
            permeability: c.permeability.unwrap_or(run.permeability),
            ..*run
        }
    }

    pub fn plot_spec(&self) -> PlotSpec {
        let (x, y, x_label, y_label) = match self.kind {
            Kind::Profile { .. } => ("xi", "u_bar", "radial position r/R0", "axial velocity u/u0"),
            Kind::Axial(obs) => ("z", obs.column(), "axial position z/R0", obs.label()),
        };
        PlotSpec {
            title: format!("{}: {}", self.name(), self.title),
            x: x.to_string(),
            y: y.to_string(),
            group: Some(self.varied.column().to_string()),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
        }
    }

    /// Computes the figure data. Stations where the model has no solution
    /// (the viscosity law vanishes inside the lumen, or the series cannot
    /// converge) are written as NaN and counted in the metadata.
    pub fn run(&self, run: &FlowParams) -> Result<Table> {
        let base = self.base_params(run);
        let mut table = match self.kind {
            Kind::Profile { .. } => Table::new([self.varied.column(), "xi", "u_bar"]),
            Kind::Axial(obs) => Table::new([self.varied.column(), "z", obs.column()]),
        };
        table.meta("preset", self.name());
        table.params_meta(&base);
        table.meta("varied", self.varied.column());
        table.meta(
            "values",
            self.values
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        );
        if let Kind::Profile { z } = self.kind {
            if self.varied != Varied::Station {
                table.meta("z", z);
            }
        }

        let mut excluded = Vec::new();
        for &value in self.values {
            let mut params = base;
            self.varied.apply(&mut params, value);
            let geometry = ArteryGeometry::new(params)?;
            match self.kind {
                Kind::Profile { z } => {
                    let z = if self.varied == Varied::Station {
                        value
                    } else {
                        z
                    };
                    let profile =
                        LocalFlow::at_station(&geometry, z)?.profile(z, RADIAL_SAMPLES)?;
                    for (x, u) in profile.xi.iter().zip(&profile.u_bar) {
                        table.push(vec![value, *x, *u]);
                    }
                }
                Kind::Axial(obs) => {
                    let z_grid = uniform_grid(0.0, params.length, AXIAL_STATIONS);
                    let mut skipped = 0;
                    for (result, &z) in axial_sweep_results(&geometry, &z_grid)
                        .into_iter()
                        .zip(&z_grid)
                    {
                        let y = match result {
                            Ok(r) => match obs {
                                Observable::CenterlineVelocity => r.u_center,
                                Observable::PressureGradient => r.dpdz_bar,
                                Observable::WallShear => r.tau_bar,
                            },
                            Err(e) if e.is_out_of_domain() => {
                                skipped += 1;
                                f64::NAN
                            }
                            Err(e) => return Err(e),
                        };
                        table.push(vec![value, z, y]);
                    }
                    if skipped > 0 {
                        excluded.push(format!("{}={value}:{skipped}", self.varied.column()));
                    }
                }
            }
        }
        if !excluded.is_empty() {
            table.meta("out_of_domain", excluded.join(";"));
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(name: &str) -> &'static FigurePreset {
        name.parse().unwrap()
    }

    #[test]
    fn lookup() {
        assert_eq!(preset("fig6").number, 6);
        assert!("fig2".parse::<&FigurePreset>().is_err());
        assert!("six".parse::<&FigurePreset>().is_err());
    }

    #[test]
    fn caption_overrides_run_values() {
        let run = FlowParams {
            hartmann: 9.0,
            m: 4,
            ..FlowParams::default()
        };
        let p = preset("fig6").base_params(&run);
        assert_eq!(p.hartmann, 2.5);
        assert_eq!(p.m, 4);
    }

    #[test]
    fn fig6_centreline_falls_with_field() {
        let t = preset("fig6").run(&FlowParams::default()).unwrap();
        assert_eq!(t.rows.len(), 3 * RADIAL_SAMPLES);
        let centre: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| r[1] == 0.0)
            .map(|r| r[2])
            .collect();
        assert_eq!(centre.len(), 3);
        assert!(centre[0] > centre[1] && centre[1] > centre[2]);
    }

    #[test]
    fn high_hematocrit_marks_downstream_out_of_domain() {
        let t = preset("fig13").run(&FlowParams::default()).unwrap();
        assert_eq!(t.rows.len(), 3 * AXIAL_STATIONS);
        let marked = t.get_meta("out_of_domain").unwrap();
        assert!(marked.contains("H=0.6"));
        assert!(!marked.contains("H=0.2"));
        // every H = 0.2 row is finite
        assert!(t
            .rows
            .iter()
            .filter(|r| r[0] == 0.2)
            .all(|r| r[2].is_finite()));
    }
}
