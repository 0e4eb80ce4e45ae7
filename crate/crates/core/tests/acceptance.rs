//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use stenoflow::geometry::uniform_grid;
use stenoflow::hemodynamics::{flow_rate, pressure_gradient_ratio, LocalFlow};
use stenoflow::presets::PRESETS;
use stenoflow::series::residual_check;
use stenoflow::validation::{
    compare, interior_grid, observed_order, parameter_grid, ORACLE_POINTS, ORACLE_TOLERANCE,
    RESIDUAL_POINTS, RESIDUAL_TOLERANCE,
};
use stenoflow::{ArteryGeometry, FlowParams, SeriesSolution};

/// Measured with the default parameters (m = 2) and frozen.
const GOLDEN_SECOND_THROAT_DROP: f64 = 0.273525161;
const GOLDEN_OVERLAP_DROP: f64 = 0.610434510;
const GOLDEN_TOLERANCE: f64 = 1e-8;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn centre(params: &FlowParams, z: f64) -> f64 {
    let geometry = ArteryGeometry::new(*params).expect("geometry");
    LocalFlow::at_station(&geometry, z)
        .expect("flow")
        .centerline_velocity()
}

fn record(params: &FlowParams, z: f64) -> (f64, f64, f64) {
    let geometry = ArteryGeometry::new(*params).expect("geometry");
    let r = LocalFlow::at_station(&geometry, z).expect("flow").record(z);
    (r.dpdz_bar, r.u_center, r.tau_bar)
}

fn poiseuille_closure() -> Outcome {
    let params = FlowParams {
        alpha: 0.0,
        ..FlowParams::poiseuille()
    };
    let mut worst: f64 = 0.0;
    for eta in [0.375, 0.625, 1.0, 1.2] {
        let flow = LocalFlow::at_radius(&params, eta).expect("flow");
        let checks = [
            (flow.dpdz_bar(), eta.powi(-4)),
            (flow.wall_shear_ratio(), eta.powi(-3)),
            (flow.centerline_velocity(), 2.0 / (eta * eta)),
        ];
        for (got, want) in checks {
            worst = worst.max(((got - want) / want).abs());
        }
    }
    Outcome::new(
        worst <= 1e-6,
        format!("max relative error {worst:.2e} (limit 1e-6)"),
    )
}

fn ode_residual() -> Outcome {
    let mut worst: f64 = 0.0;
    let grid = parameter_grid(&FlowParams::default());
    for (params, eta) in &grid {
        let series = SeriesSolution::compute(params, *eta).expect("series");
        let residual = residual_check(&series, params, &interior_grid(*eta, RESIDUAL_POINTS));
        worst = worst.max(residual.max_scaled());
    }
    Outcome::new(
        worst <= RESIDUAL_TOLERANCE,
        format!(
            "{} cases, max scaled residual {worst:.2e} (limit {RESIDUAL_TOLERANCE:.0e})",
            grid.len()
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let grid = parameter_grid(&FlowParams::default());
    let mut worst: f64 = 0.0;
    for (params, eta) in &grid {
        let c = compare(params, *eta, ORACLE_POINTS).expect("comparison");
        worst = worst.max(c.profile_error);
    }
    let defaults = FlowParams::default();
    let orders: Vec<f64> = [
        (defaults, 0.375),
        (defaults, 1.0),
        (FlowParams { m: 4, ..defaults }, 0.625),
    ]
    .iter()
    .map(|(p, eta)| observed_order(p, *eta, 101).expect("order"))
    .collect();
    let orders_ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.3);
    Outcome::new(
        worst <= ORACLE_TOLERANCE && orders_ok,
        format!(
            "max relative L-inf {worst:.2e} at n = {ORACLE_POINTS} (limit {ORACLE_TOLERANCE:.0e}), observed orders {}",
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn flux_closure() -> Outcome {
    let params = FlowParams::default();
    let mut worst: f64 = 0.0;
    let z_grid = uniform_grid(0.0, params.length, 351);
    for &z in &z_grid {
        let dp = pressure_gradient_ratio(&params, z).expect("pressure gradient");
        let q = flow_rate(&params, z, dp).expect("flow rate");
        worst = worst.max((q - 1.0).abs());
    }
    Outcome::new(
        worst <= 1e-10,
        format!(
            "{} stations, max |Q - 1| = {worst:.2e} (limit 1e-10)",
            z_grid.len()
        ),
    )
}

fn velocity_ratios() -> Outcome {
    let params = FlowParams::default();
    let (u1, u2, u3) = (
        centre(&params, 1.0),
        centre(&params, 2.0),
        centre(&params, 3.0),
    );
    let second_throat = 1.0 - u3 / u1;
    let overlap = 1.0 - u2 / u3;
    let soft = (second_throat - 0.30).abs() <= 0.15 && (overlap - 0.55).abs() <= 0.15;
    let frozen = (second_throat - GOLDEN_SECOND_THROAT_DROP).abs() <= GOLDEN_TOLERANCE
        && (overlap - GOLDEN_OVERLAP_DROP).abs() <= GOLDEN_TOLERANCE;
    Outcome::new(
        soft && frozen,
        format!(
            "u(0) at z=3 is {:.2}% below z=1 (target 30 +/- 15), u(0) at z=2 is {:.2}% below z=3 (target 55 +/- 15), goldens {}",
            100.0 * second_throat,
            100.0 * overlap,
            if frozen { "match" } else { "differ" }
        ),
    )
}

fn throat_symmetry() -> Outcome {
    let params = FlowParams {
        alpha: 0.0,
        ..FlowParams::default()
    };
    let (_, _, t1) = record(&params, 1.0);
    let (_, _, t3) = record(&params, 3.0);
    let diff = (t1 - t3).abs();
    Outcome::new(
        diff <= 1e-8,
        format!("|tau(1) - tau(3)| = {diff:.2e} (limit 1e-8)"),
    )
}

fn strictly(values: &[f64], increasing: bool) -> bool {
    values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

type Study = (
    &'static str,
    fn(&mut FlowParams, f64),
    [f64; 3],
    &'static [f64],
    [Option<bool>; 3],
);

fn trends() -> Outcome {
    let base = FlowParams::default();
    // (name, setter, values, stations, [dp increasing, u(0) increasing, tau increasing])
    let studies: [Study; 5] = [
        (
            "M",
            |p, v| p.hartmann = v,
            [0.0, 2.5, 5.0],
            &[1.0, 2.0, 3.0],
            [Some(true), Some(false), None],
        ),
        (
            "H",
            |p, v| p.hematocrit = v,
            [0.2, 0.4, 0.6],
            &[1.0, 2.0, 3.0],
            [Some(true), Some(false), None],
        ),
        (
            "k",
            |p, v| p.permeability = v,
            [0.1, 0.25, 1.0],
            &[1.0, 2.0, 3.0],
            [Some(false), Some(true), None],
        ),
        (
            "H",
            |p, v| p.hematocrit = v,
            [0.2, 0.4, 0.6],
            &[1.0, 3.0],
            [None, None, Some(true)],
        ),
        (
            "alpha",
            |p, v| p.alpha = v,
            [0.0, 0.05, 0.09],
            &[2.5, 3.0, 4.0],
            [None, None, Some(false)],
        ),
    ];
    let names = ["dpdz_bar", "u(0)", "tau"];
    let mut checked = 0;
    let mut broken = Vec::new();
    for (name, set, values, stations, expect) in studies {
        for &z in stations {
            let series: Vec<(f64, f64, f64)> = values
                .iter()
                .map(|&v| {
                    let mut p = base;
                    set(&mut p, v);
                    record(&p, z)
                })
                .collect();
            let columns = [
                series.iter().map(|r| r.0).collect::<Vec<_>>(),
                series.iter().map(|r| r.1).collect(),
                series.iter().map(|r| r.2).collect(),
            ];
            for (i, direction) in expect.iter().enumerate() {
                if let Some(increasing) = direction {
                    checked += 1;
                    if !strictly(&columns[i], *increasing) {
                        broken.push(format!("{} vs {name} at z={z}", names[i]));
                    }
                }
            }
        }
    }
    let detail = if broken.is_empty() {
        format!("{checked} orderings strict")
    } else {
        format!(
            "{} of {checked} orderings broken: {}",
            broken.len(),
            broken.join("; ")
        )
    };
    Outcome::new(broken.is_empty(), detail)
}

fn battery() -> Vec<String> {
    let params = FlowParams::default();
    PRESETS
        .iter()
        .map(|p| p.run(&params).expect("preset").to_csv_string())
        .collect()
}

fn determinism() -> Outcome {
    let started = Instant::now();
    let first = battery();
    let elapsed = started.elapsed();
    let second = battery();
    let pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
    };
    let single = pool(1).install(battery);
    let many = pool(8).install(battery);
    let identical = first == second && first == single && first == many;
    let fast = elapsed < Duration::from_secs(60);
    Outcome::new(
        identical && fast,
        format!(
            "{} presets, repeat/1-thread/8-thread outputs {}, battery {:.2} s (limit 60 s)",
            first.len(),
            if identical { "identical" } else { "differ" },
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "poiseuille closure",
            poiseuille_closure,
            Duration::from_secs(1),
        ),
        ("ode residual", ode_residual, Duration::from_secs(5)),
        (
            "oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(30),
        ),
        (
            "flux self-consistency",
            flux_closure,
            Duration::from_secs(2),
        ),
        ("velocity ratios", velocity_ratios, Duration::from_secs(1)),
        (
            "wall shear throat symmetry",
            throat_symmetry,
            Duration::from_secs(1),
        ),
        ("monotonic trends", trends, Duration::from_secs(5)),
        (
            "determinism and presets",
            determinism,
            Duration::from_secs(240),
        ),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let on_time = elapsed <= *budget;
        let passed = outcome.passed && on_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name}: {} [{:.3} s, budget {} s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
