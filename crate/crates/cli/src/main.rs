mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harvest_core::detector::{matrix_elements, DetectorParams, PERTURBATIVE_COUPLING_LIMIT};
use harvest_core::selftest::run_selftest;
use harvest_core::sweep::{
    build_geometry, evaluate_point, max_discrepancy, run_ckw_scan, run_sweep, write_ckw_csv, write_csv, Axis,
    GeometryKind, Route, SweepConfig, DISCREPANCY_TOL,
};
use harvest_core::tangle::PiTangleResult;
use harvest_core::toy::{
    build_toy_rho, case1_formula, case2_formula, toy_eigenvalues, toy_regime, validity_check, ToyParams, ToyRegime,
};
use harvest_core::Error;

use config::ConfigKeys;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

/// Entanglement harvested by three Unruh–DeWitt detectors.
#[derive(Debug, Parser)]
#[command(name = "harvest", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single (gap, length) point and print every negativity.
    Point {
        #[arg(long, default_value = "equilateral")]
        geometry: String,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true)]
        gap: f64,
        /// L/σ, or D/σ for scalene
        #[arg(long, allow_negative_numbers = true)]
        length: f64,
        #[arg(long, default_value_t = 7.0)]
        scalene_base: f64,
        #[arg(long, default_value = "both")]
        route: String,
    },
    /// Sweep a (gap, length) grid and write a CSV.
    Sweep(GridArgs),
    /// Check one toy-model state: validity, eigenvalues, regime and π.
    Toy {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// |X|
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        e: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
    },
    /// Perturbative toy-model π over a (P₂, |X₂|) grid; gap_* keys are P₂, length_* keys |X₂|.
    ToyScan(GridArgs),
    /// Run the internal consistency checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// random points per check
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

#[derive(Debug, clap::Args)]
struct GridArgs {
    /// TOML file with any of the keys below (flags win)
    #[arg(long)]
    config: Option<PathBuf>,
    /// print the resolved configuration as TOML and exit
    #[arg(long)]
    print_config: bool,
    #[command(flatten)]
    keys: ConfigKeys,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter { .. } | Error::CoincidentDetectors(_) | Error::Io { .. } => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn warn_coupling(lambda: f64) {
    if lambda > PERTURBATIVE_COUPLING_LIMIT {
        eprintln!(
            "warning: lambda = {lambda} exceeds {PERTURBATIVE_COUPLING_LIMIT}; the O(λ²) state may be unreliable"
        );
    }
}

fn print_result(r: &PiTangleResult) {
    println!("pi       {:.12e}", r.pi);
    println!("pi_A     {:.12e}", r.pi_a);
    println!("pi_B     {:.12e}", r.pi_b);
    println!("pi_C     {:.12e}", r.pi_c);
    println!("N_A(BC)  {:.12e}", r.n_a_bc);
    println!("N_B(AC)  {:.12e}", r.n_b_ac);
    println!("N_C(AB)  {:.12e}", r.n_c_ab);
    println!("N_AB     {:.12e}", r.n_ab);
    println!("N_AC     {:.12e}", r.n_ac);
    println!("N_BC     {:.12e}", r.n_bc);
}

fn point(geometry: &str, lambda: f64, gap: f64, length: f64, scalene_base: f64, route: &str) -> CmdResult {
    let kind: GeometryKind = geometry.parse()?;
    let route: Route = route.parse()?;
    warn_coupling(lambda);
    let params = DetectorParams::new(lambda, gap)?;
    let geom = build_geometry(kind, length, scalene_base)?;
    let me = matrix_elements(&params, &geom)?;
    let [ab, ac, bc] = geom.distances();
    println!("geometry {kind}, lambda {lambda}, gap {gap}, distances AB {ab} AC {ac} BC {bc}");
    println!("P        {:.12e}", me.p);
    println!("C        AB {:.12e}  AC {:.12e}  BC {:.12e}", me.c_ab, me.c_ac, me.c_bc);
    println!("X        AB {:.12e}  AC {:.12e}  BC {:.12e}", me.x_ab, me.x_ac, me.x_bc);
    let cell = evaluate_point(kind, lambda, gap, length, scalene_base, route)?;
    print_result(&cell.result);
    if let Some(d) = cell.discrepancy {
        println!("route discrepancy {d:.3e}");
        if d > DISCREPANCY_TOL {
            return Err(Failure::Numerical(format!(
                "closed form and eigenvalue route differ by {d:e} (> {DISCREPANCY_TOL:e})"
            )));
        }
    }
    Ok(())
}

fn resolve(args: GridArgs, defaults: &SweepConfig) -> std::result::Result<Option<SweepConfig>, Failure> {
    let file = match &args.config {
        Some(path) => ConfigKeys::from_file(path)?,
        None => ConfigKeys::default(),
    };
    let cfg = args.keys.over(file).resolve(defaults)?;
    if args.print_config {
        print!("{}", ConfigKeys::from_resolved(&cfg).to_toml());
        return Ok(None);
    }
    warn_coupling(cfg.lambda);
    Ok(Some(cfg))
}

fn toy_scan_defaults() -> SweepConfig {
    SweepConfig {
        geometry: GeometryKind::ToyScan,
        gap: Axis::new(0.05, 5.0, 200),
        length: Axis::new(0.05, 5.0, 200),
        output: PathBuf::from("toy_scan.csv"),
        ..SweepConfig::default()
    }
}

fn write_toy_scan(cfg: &SweepConfig) -> CmdResult {
    let cells = run_ckw_scan(cfg)?;
    write_ckw_csv(&cells, &cfg.output)?;
    let negative = cells.iter().filter(|c| !c.excluded && c.pi < 0.0).count();
    println!(
        "wrote {} cells ({negative} with negative pi) to {}",
        cells.len(),
        cfg.output.display()
    );
    Ok(())
}

fn sweep(args: GridArgs) -> CmdResult {
    let Some(cfg) = resolve(args, &SweepConfig::default())? else {
        return Ok(());
    };
    if cfg.geometry == GeometryKind::ToyScan {
        return write_toy_scan(&cfg);
    }
    let cells = run_sweep(&cfg)?;
    write_csv(&cells, &cfg.output)?;
    println!("wrote {} cells to {}", cells.len(), cfg.output.display());
    if let Some(d) = max_discrepancy(&cells) {
        println!("max route discrepancy {d:.3e}");
        if d > DISCREPANCY_TOL {
            return Err(Failure::Numerical(format!(
                "route discrepancy {d:e} exceeds {DISCREPANCY_TOL:e}"
            )));
        }
    }
    Ok(())
}

fn toy_scan(args: GridArgs) -> CmdResult {
    let Some(cfg) = resolve(args, &toy_scan_defaults())? else {
        return Ok(());
    };
    if cfg.geometry != GeometryKind::ToyScan {
        return Err(Failure::Config("toy-scan only accepts geometry = \"toy-scan\"".into()));
    }
    write_toy_scan(&cfg)
}

fn toy(p: f64, c: f64, x: f64, e: f64, sigma: f64) -> CmdResult {
    let params = ToyParams::new(p, c, x, e, sigma);
    let violated = validity_check(&params);
    if violated.is_empty() {
        println!("valid state");
    } else {
        let labels: Vec<&str> = violated.iter().map(|v| v.label()).collect();
        println!("violated constraints: {}", labels.join(", "));
    }
    let min_eig = build_toy_rho(&params).eigenvalues()?[0];
    println!("min eigenvalue of rho  {min_eig:.6e}");
    let ev = toy_eigenvalues(&params);
    println!("e4 {:.12e}\ne7 {:.12e}\nf1 {:.12e}\nf3 {:.12e}", ev.e4, ev.e7, ev.f1, ev.f3);
    let regime = toy_regime(&params);
    println!("regime {regime:?}");
    println!("case-1 formula {:.12e}", case1_formula(&params));
    println!("case-2 formula {:.12e}", case2_formula(&params));
    let pi = harvest_core::tangle::pi_tangle_general(&build_toy_rho(&params), harvest_core::SpectrumMode::Exact)?;
    println!("pi (spectrum)  {:.12e}", pi.pi);
    let formula = match regime {
        ToyRegime::Case1 => Some(case1_formula(&params)),
        ToyRegime::Case2 => Some(case2_formula(&params)),
        _ => None,
    };
    if let Some(f) = formula {
        if violated.is_empty() && (f - pi.pi).abs() > DISCREPANCY_TOL {
            return Err(Failure::Numerical(format!(
                "closed form {f:e} disagrees with the spectrum {:e}",
                pi.pi
            )));
        }
    }
    Ok(())
}

fn selftest(seed: u64, points: usize) -> CmdResult {
    let checks = run_selftest(seed, points)?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} self-checks failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Point {
            geometry,
            lambda,
            gap,
            length,
            scalene_base,
            route,
        } => point(&geometry, lambda, gap, length, scalene_base, &route),
        Command::Sweep(args) => sweep(args),
        Command::Toy { p, c, x, e, sigma } => toy(p, c, x, e, sigma),
        Command::ToyScan(args) => toy_scan(args),
        Command::Selftest { seed, points } => selftest(seed, points),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
