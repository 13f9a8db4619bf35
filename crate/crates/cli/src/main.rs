//! `quditmem`: correlated-noise qudit channels from the command line.
//!
//! Exit codes: 0 success, 1 argument/validation error, 2 numeric failure
//! (spot-check mismatch, validation failure, non-convergent
//! eigendecomposition).

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{fmt_complex, fmt_sig12, parse_state_token, render_csv, RunConfig};
use quditmem::algebra::{gen_pauli, PauliIndex, QuditDim};
use quditmem::analysis::{
    find_crossover, mu_grid, sweep, validate, ChannelSpec, CurveSpec, SweepOptions,
};
use quditmem::closed;
use quditmem::noise::CorrelatedChannel;
use quditmem::oracle::{apply_channel, fidelity, holevo_mutual_info};
use quditmem::Error as CoreError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "quditmem",
    version,
    about = "Correlated-noise Pauli channels on d qudits of dimension d: \
             exact simulation, closed forms, sweeps, and cross-validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generalized Pauli operator U[m,n]
    Pauli {
        #[arg(long)]
        d: usize,
        /// Shift index
        #[arg(long)]
        m: usize,
        /// Phase index
        #[arg(long)]
        n: usize,
    },
    /// Input/output fidelity of one state family
    Fidelity {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        mu: f64,
        /// maxent | product (closed form); any token with --method oracle
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Holevo mutual information of one state family
    Mutualinfo {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        mu: f64,
        /// maxent | product | alpha:<cos2> | alpha:n=<n> | km:<...> | k:<int>
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Report bits per qudit instead of bits per block
        #[arg(long)]
        per_qudit: bool,
    },
    /// Closed-form sweep over the memory parameter, with oracle spot-checks
    Sweep {
        /// JSON run configuration; overrides the channel/state flags
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        channel: OptionalChannelArgs,
        /// Comma-separated state tokens
        #[arg(long, value_delimiter = ',')]
        states: Vec<String>,
        #[arg(long, default_value_t = quditmem::analysis::DEFAULT_GRID_POINTS)]
        points: usize,
        #[arg(long, default_value_t = quditmem::analysis::DEFAULT_SPOT_CHECKS)]
        spot_checks: usize,
        #[arg(long, default_value_t = quditmem::analysis::DEFAULT_TOLERANCE)]
        tol: f64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate the memory threshold where two curves cross
    Crossover {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        curve_a: String,
        #[arg(long)]
        curve_b: String,
        #[arg(long, default_value_t = quditmem::analysis::DEFAULT_GRID_POINTS)]
        points: usize,
        /// Optional JSON report path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate every closed form against the dense simulator
    Validate {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = quditmem::analysis::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Optional JSON report path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the pinned figure data sets
    Figure {
        #[arg(value_enum)]
        name: FigureName,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureName {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureName {
    fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "quasi-classical")]
    QuasiClassical,
    Depolarizing,
    #[value(name = "high-error")]
    HighError,
    General,
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args)]
struct OptionalChannelArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::EigenFailure
            | CoreError::NegativeEigenvalue { .. }
            | CoreError::SpectralCoefficients { .. }
            | CoreError::InvalidDensityMatrix { .. }
            | CoreError::SpotCheckFailed { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Usage(msg)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn channel_spec(args: &ChannelArgs) -> Result<ChannelSpec, CliError> {
    build_channel_spec(
        args.family, args.d, args.p, args.q, args.r, args.t,
    )
}

fn build_channel_spec(
    family: FamilyArg,
    d: usize,
    p: Option<f64>,
    q: Option<f64>,
    r: Option<f64>,
    t: Option<f64>,
) -> Result<ChannelSpec, CliError> {
    let need_p = || p.ok_or_else(|| CliError::Usage("this channel family needs --p".into()));
    let spec = match family {
        FamilyArg::QuasiClassical => ChannelSpec::QuasiClassical { d, p: need_p()? },
        FamilyArg::Depolarizing => ChannelSpec::Depolarizing { d, p: need_p()? },
        FamilyArg::HighError => ChannelSpec::HighError { d },
        FamilyArg::General => ChannelSpec::General {
            d,
            p: need_p()?,
            q: q.ok_or_else(|| CliError::Usage("general channel needs --q".into()))?,
            r: r.ok_or_else(|| CliError::Usage("general channel needs --r".into()))?,
            t: t.ok_or_else(|| CliError::Usage("general channel needs --t".into()))?,
        },
    };
    // Fail on an invalid table before any computation.
    spec.table::<f64>()?;
    Ok(spec)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pauli { d, m, n } => {
            let dim = QuditDim::new(d)?;
            let u = gen_pauli::<f64>(dim, PauliIndex::new(m, n))?;
            let mut out = String::new();
            for i in 0..d {
                let row: Vec<String> = (0..d).map(|j| fmt_complex(u[(i, j)])).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            print!("{out}");
            Ok(())
        }
        Command::Fidelity {
            channel,
            mu,
            state,
            method,
        } => {
            let spec = channel_spec(&channel)?;
            let curve = parse_state_token(&state)?;
            let table = spec.table::<f64>()?;
            let value = match (method, curve) {
                (MethodArg::Closed, CurveSpec::MaxEnt) => closed::fid_max_entangled(&table, mu)?,
                (MethodArg::Closed, CurveSpec::Product) => closed::fid_product(&table, mu)?,
                (MethodArg::Closed, _) => {
                    return Err(CliError::Usage(
                        "closed-form fidelity covers maxent and product; use --method oracle"
                            .into(),
                    ))
                }
                (MethodArg::Oracle, curve) => {
                    let d = QuditDim::new(spec.d())?;
                    let ens = curve.ensemble(d).ok_or_else(|| {
                        CliError::Usage(format!("state `{state}` has no realizing ensemble"))
                    })?;
                    let psi = ens.fiducial()?;
                    let ch = CorrelatedChannel::new(table, mu)?;
                    let out = apply_channel(&ch, &psi.to_density())?;
                    fidelity(&psi, &out)?
                }
            };
            println!("{value:.12}");
            Ok(())
        }
        Command::Mutualinfo {
            channel,
            mu,
            state,
            method,
            per_qudit,
        } => {
            let spec = channel_spec(&channel)?;
            let curve = parse_state_token(&state)?;
            let mut value = match method {
                MethodArg::Closed => curve.eval(&spec, mu)?,
                MethodArg::Oracle => {
                    let d = QuditDim::new(spec.d())?;
                    let ens = curve.ensemble(d).ok_or_else(|| {
                        CliError::Usage(format!("state `{state}` has no realizing ensemble"))
                    })?;
                    let ch = CorrelatedChannel::new(spec.table()?, mu)?;
                    holevo_mutual_info(&ch, &ens)?.value
                }
            };
            if per_qudit {
                value /= spec.d() as f64;
            }
            println!("{value:.12}");
            Ok(())
        }
        Command::Sweep {
            config,
            channel,
            states,
            points,
            spot_checks,
            tol,
            out,
        } => {
            let (spec, curves, grid, opts) = if let Some(path) = config {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let cfg: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config: {e}")))?;
                run_config_parts(&cfg)?
            } else {
                let family = channel
                    .family
                    .ok_or_else(|| CliError::Usage("give --config or --family".into()))?;
                let d = channel
                    .d
                    .ok_or_else(|| CliError::Usage("channel needs --d".into()))?;
                let spec =
                    build_channel_spec(family, d, channel.p, channel.q, channel.r, channel.t)?;
                if states.is_empty() {
                    return Err(CliError::Usage("give at least one --states token".into()));
                }
                let curves: Result<Vec<_>, String> = states
                    .iter()
                    .map(|s| parse_state_token(s).map(|c| (c, c.label())))
                    .collect();
                (
                    spec,
                    curves?,
                    mu_grid(points),
                    SweepOptions {
                        spot_checks,
                        tolerance: tol,
                    },
                )
            };
            let table = sweep(&spec, &curves, &grid, &opts)?;
            write_file(&out, &render_csv(&table))?;
            eprintln!(
                "wrote {} ({} rows, {} curves)",
                out.display(),
                table.mu_grid.len(),
                table.curves.len()
            );
            Ok(())
        }
        Command::Crossover {
            channel,
            curve_a,
            curve_b,
            points,
            out,
        } => {
            let spec = channel_spec(&channel)?;
            let a = parse_state_token(&curve_a)?;
            let b = parse_state_token(&curve_b)?;
            let grid: Vec<f64> = mu_grid(points);
            let report = find_crossover(&spec, a, b, &grid)?;
            use quditmem::analysis::Crossing;
            match report.crossing {
                Crossing::Interior {
                    mu,
                    bracket,
                    residual,
                } => println!(
                    "interior crossing: mu_t = {} (bracket [{}, {}], residual {residual:.3e})",
                    fmt_sig12(mu),
                    fmt_sig12(bracket.0),
                    fmt_sig12(bracket.1),
                ),
                Crossing::BoundaryTouch { mu } => {
                    println!("boundary touch at mu = {}", fmt_sig12(mu))
                }
                Crossing::NoCrossing => println!("no crossing on [0, 1]"),
                Crossing::Degenerate => println!("curves are identical on the grid"),
            }
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
                write_file(&path, &json)?;
            }
            Ok(())
        }
        Command::Validate {
            seed,
            tol,
            points,
            out,
        } => {
            let report = validate(seed, tol, points)?;
            print!("{}", report.render_text());
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
                write_file(&path, &json)?;
            }
            if report.all_pass {
                Ok(())
            } else {
                Err(CliError::Numeric(
                    "closed-form/oracle disagreement above tolerance".into(),
                ))
            }
        }
        Command::Figure { name, out } => {
            let cfg = config::preset(name.as_str())
                .ok_or_else(|| CliError::Usage(format!("unknown figure `{}`", name.as_str())))?;
            let (spec, curves, grid, opts) = run_config_parts(&cfg)?;
            let table = sweep(&spec, &curves, &grid, &opts)?;
            write_file(&out, &render_csv(&table))?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
    }
}

type RunParts = (
    ChannelSpec,
    Vec<(CurveSpec, String)>,
    Vec<f64>,
    SweepOptions,
);

fn run_config_parts(cfg: &RunConfig) -> Result<RunParts, CliError> {
    cfg.channel.table::<f64>()?;
    let curves: Result<Vec<_>, String> = cfg.curves.iter().map(|c| c.resolve()).collect();
    Ok((
        cfg.channel,
        curves?,
        cfg.grid.values()?,
        SweepOptions {
            spot_checks: cfg.spot_checks,
            tolerance: cfg.tolerance,
        },
    ))
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
