//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, RunConfig, Settings};
use crate::error::{Error, Result};
use crate::geometry::{uniform_grid, ArteryGeometry};
use crate::hemodynamics::{axial_sweep, LocalFlow};
use crate::output::Table;
use crate::plot::{emit_plot, PlotSpec};
use crate::validation::{compare, parameter_grid, OracleComparison};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STENOFLOW_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "stenoflow",
    version,
    about = "Steady MHD blood flow through a tapered artery with overlapping stenoses"
)]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamFlags,

    /// Key-value configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory (default: $STENOFLOW_OUT_DIR or the current directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// csv or csv+plot.
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Option<CommandArgs>,
}

#[derive(Debug, Args, Default)]
pub struct ParamFlags {
    /// Taper angle in radians.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Maximum hematocrit H at the axis.
    #[arg(long, global = true)]
    pub hematocrit: Option<String>,
    /// Viscosity-hematocrit constant.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Hematocrit shape exponent (integer >= 2).
    #[arg(long, global = true)]
    pub m: Option<String>,
    /// Hartmann number M.
    #[arg(long, global = true)]
    pub hartmann: Option<String>,
    /// Dimensionless permeability k.
    #[arg(long, global = true)]
    pub permeability: Option<String>,
    /// Distance between the throats, in R0.
    #[arg(long, global = true)]
    pub l: Option<String>,
    /// Stenosis onset, in R0.
    #[arg(long, global = true)]
    pub d: Option<String>,
    /// Segment length, in R0.
    #[arg(long, global = true)]
    pub length: Option<String>,
    /// Scale on the stenosis polynomial (1 = standard shape).
    #[arg(long, global = true)]
    pub severity: Option<String>,
    /// Series truncation tolerance.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Maximum number of series coefficients.
    #[arg(long, global = true)]
    pub n_max: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Wall radius ratio along the artery.
    Geometry {
        #[arg(long)]
        samples: Option<String>,
    },
    /// Radial velocity profile at one station.
    Profile {
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        samples: Option<String>,
    },
    /// Pressure gradient, wall shear and centreline velocity along z.
    Sweep {
        #[arg(long)]
        z_from: Option<String>,
        #[arg(long)]
        z_to: Option<String>,
        #[arg(long)]
        steps: Option<String>,
    },
    /// Compare the series solution with the finite-difference oracle.
    Validate {
        #[arg(long)]
        grid_points: Option<String>,
    },
    /// Reproduce figure presets (fig3 to fig14, comma separated, or all).
    Figures {
        #[arg(long)]
        preset: Option<String>,
    },
}

const COMMAND_KEYS: &[&str] = &[
    "z",
    "z_from",
    "z_to",
    "steps",
    "samples",
    "grid_points",
    "preset",
];

impl Cli {
    /// Merges file settings, flags and the environment into a run configuration.
    pub fn resolve(self, env_out: Option<PathBuf>) -> Result<RunConfig> {
        let mut settings = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let p = self.params;
        for (key, value) in [
            ("alpha", p.alpha),
            ("hematocrit", p.hematocrit),
            ("beta", p.beta),
            ("m", p.m),
            ("hartmann", p.hartmann),
            ("permeability", p.permeability),
            ("l", p.l),
            ("d", p.d),
            ("length", p.length),
            ("severity", p.severity),
            ("tol", p.tol),
            ("n_max", p.n_max),
            ("format", self.format),
        ] {
            if let Some(v) = value {
                settings.set(key, v)?;
            }
        }
        if let Some(out) = self.out {
            settings.set("out", out.to_string_lossy())?;
        }
        if let Some(command) = self.command {
            let (name, keys): (&str, Vec<(&str, Option<String>)>) = match command {
                CommandArgs::Geometry { samples } => ("geometry", vec![("samples", samples)]),
                CommandArgs::Profile { z, samples } => {
                    ("profile", vec![("z", z), ("samples", samples)])
                }
                CommandArgs::Sweep {
                    z_from,
                    z_to,
                    steps,
                } => (
                    "sweep",
                    vec![("z_from", z_from), ("z_to", z_to), ("steps", steps)],
                ),
                CommandArgs::Validate { grid_points } => {
                    ("validate", vec![("grid_points", grid_points)])
                }
                CommandArgs::Figures { preset } => ("figures", vec![("preset", preset)]),
            };
            if settings.get("command") != Some(name) {
                // command-specific keys from the file belong to another command
                settings = settings.without(COMMAND_KEYS);
            }
            settings.set("command", name)?;
            for (key, value) in keys {
                if let Some(v) = value {
                    settings.set(key, v)?;
                }
            }
        }
        let default_out = env_out.unwrap_or_else(|| PathBuf::from("."));
        settings.into_config(&default_out)
    }
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    /// Validation cases that missed a tolerance.
    pub failed_checks: usize,
}

fn write_table(
    table: &Table,
    dir: &Path,
    stem: &str,
    plot: Option<PlotSpec>,
    report: &mut RunReport,
) -> Result<()> {
    let csv = dir.join(format!("{stem}.csv"));
    table.write_csv(&csv)?;
    report.files.push(csv.clone());
    if let Some(spec) = plot {
        let svg = dir.join(format!("{stem}.svg"));
        emit_plot(&csv, &spec, &svg)?;
        report.files.push(svg);
    }
    Ok(())
}

fn plot_spec(title: &str, x: &str, y: &str, x_label: &str, y_label: &str) -> PlotSpec {
    PlotSpec {
        title: title.to_string(),
        x: x.to_string(),
        y: y.to_string(),
        group: None,
        x_label: x_label.to_string(),
        y_label: y_label.to_string(),
    }
}

/// Executes one configured command, writing its files into `config.out_dir`.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let plot = config.format.with_plot();
    let params = config.params;
    let mut report = RunReport::default();

    match &config.command {
        Command::Geometry { samples } => {
            let geometry = ArteryGeometry::new(params)?;
            let mut table = Table::new(["z", "eta"]);
            table.meta("command", "geometry").params_meta(&params);
            for z in geometry.z_grid(*samples) {
                table.push(vec![z, geometry.radius_ratio(z)]);
            }
            let spec = plot.then(|| {
                plot_spec(
                    "Wall radius",
                    "z",
                    "eta",
                    "axial position z/R0",
                    "wall radius R/R0",
                )
            });
            write_table(&table, dir, "geometry", spec, &mut report)?;
            for m in geometry.landmarks() {
                report.summary.push(format!(
                    "{:<17} z = {:<6} eta = {:.6}",
                    m.label,
                    m.z,
                    geometry.radius_ratio(m.z)
                ));
            }
        }
        Command::Profile { z, samples } => {
            let geometry = ArteryGeometry::new(params)?;
            let flow = LocalFlow::at_station(&geometry, *z)?;
            let profile = flow.profile(*z, *samples)?;
            let mut table = Table::new(["xi", "u_bar"]);
            table
                .meta("command", "profile")
                .params_meta(&params)
                .meta("z", z)
                .meta("eta", flow.eta())
                .meta("dpdz_bar", flow.dpdz_bar())
                .meta("n_used", flow.series().n_used());
            for (x, u) in profile.xi.iter().zip(&profile.u_bar) {
                table.push(vec![*x, *u]);
            }
            let spec = plot.then(|| {
                plot_spec(
                    &format!("Velocity at z = {z}"),
                    "xi",
                    "u_bar",
                    "radial position r/R0",
                    "axial velocity u/u0",
                )
            });
            write_table(&table, dir, "profile", spec, &mut report)?;
            report.summary.push(format!(
                "z = {z}: eta = {:.6}, dpdz_bar = {:.6}, u(0) = {:.6}, tau_bar = {:.6}",
                flow.eta(),
                flow.dpdz_bar(),
                flow.centerline_velocity(),
                flow.wall_shear_ratio()
            ));
        }
        Command::Sweep {
            z_from,
            z_to,
            steps,
        } => {
            let z = uniform_grid(*z_from, *z_to, *steps);
            let records = axial_sweep(&params, &z)?;
            let mut table = Table::new(["z", "eta", "dpdz_bar", "tau_bar", "u_center"]);
            table.meta("command", "sweep").params_meta(&params);
            for r in &records {
                table.push(vec![r.z, r.eta, r.dpdz_bar, r.tau_bar, r.u_center]);
            }
            let spec = plot.then(|| {
                plot_spec(
                    "Pressure gradient",
                    "z",
                    "dpdz_bar",
                    "axial position z/R0",
                    "pressure gradient ratio",
                )
            });
            write_table(&table, dir, "sweep", spec, &mut report)?;
            report.summary.push(format!("{} stations", records.len()));
        }
        Command::Validate { grid_points } => {
            let geometry = ArteryGeometry::new(params)?;
            let mut cases = parameter_grid(&params);
            cases.extend(
                geometry
                    .landmarks()
                    .iter()
                    .map(|m| (params, geometry.radius_ratio(m.z))),
            );
            let results: Vec<OracleComparison> = cases
                .iter()
                .map(|(p, eta)| compare(p, *eta, *grid_points))
                .collect::<Result<_>>()?;
            let mut table = Table::new([
                "M",
                "H",
                "k",
                "m",
                "eta",
                "n_used",
                "residual",
                "profile_error",
                "flux_error",
                "wall_error",
            ]);
            table
                .meta("command", "validate")
                .params_meta(&params)
                .meta("grid_points", grid_points);
            report.summary.push(format!(
                "{:>5} {:>5} {:>5} {:>2} {:>8} {:>6} {:>10} {:>10} {:>10} {:>10}  ok",
                "M", "H", "k", "m", "eta", "terms", "residual", "profile", "flux", "wall"
            ));
            for c in &results {
                let p = &c.params;
                table.push(vec![
                    p.hartmann,
                    p.hematocrit,
                    p.permeability,
                    p.m as f64,
                    c.eta,
                    c.n_used as f64,
                    c.residual.max_scaled(),
                    c.profile_error,
                    c.flux_error,
                    c.wall_error,
                ]);
                if !c.passes() {
                    report.failed_checks += 1;
                }
                report.summary.push(format!(
                    "{:>5} {:>5} {:>5} {:>2} {:>8.5} {:>6} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}  {}",
                    p.hartmann,
                    p.hematocrit,
                    p.permeability,
                    p.m,
                    c.eta,
                    c.n_used,
                    c.residual.max_scaled(),
                    c.profile_error,
                    c.flux_error,
                    c.wall_error,
                    if c.passes() { "yes" } else { "NO" }
                ));
            }
            write_table(&table, dir, "validate", None, &mut report)?;
            report.summary.push(format!(
                "{} of {} cases within tolerance",
                results.len() - report.failed_checks,
                results.len()
            ));
        }
        Command::Figures { presets } => {
            for preset in presets {
                let table = preset.run(&params)?;
                let spec = plot.then(|| preset.plot_spec());
                write_table(&table, dir, &preset.name(), spec, &mut report)?;
                let note = table
                    .get_meta("out_of_domain")
                    .map(|s| format!(" (out of domain: {s})"))
                    .unwrap_or_default();
                report.summary.push(format!(
                    "{}: {} rows{note}",
                    preset.name(),
                    table.rows.len()
                ));
            }
        }
    }
    Ok(report)
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let print_config = cli.print_config;
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let outcome = cli.resolve(env_out).and_then(|config| {
        if print_config {
            print!("{}", config.to_config_string());
            Ok(RunReport::default())
        } else {
            run(&config)
        }
    });
    match outcome {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            for file in &report.files {
                println!("wrote {}", file.display());
            }
            if report.failed_checks > 0 {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
