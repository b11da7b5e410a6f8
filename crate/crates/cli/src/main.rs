//! `toeplitz`: batch runner for the torus quantization experiments.
//!
//! Every subcommand writes its rows (`experiment,knot,r,quantity,value`) to a
//! CSV or JSON file and prints one summary line. Exit status: 0 when the run
//! completes, 2 when a checked property fails, 1 on usage errors.

mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use toeplitz_core::algebra::represent::ISOMORPHISM_TOL;
use toeplitz_core::algebra::{span_closure, verify_isomorphism};
use toeplitz_core::bt::{
    kernel_decay_check, kernel_gaussian_check, norm_limit_check, successive_ratios, symbol_residual, TrigSymbol,
};
use toeplitz_core::knot::{
    aj_residual, mahler_measure, simplicial_volume_oracle, volume_fit, volume_sequence, AjOptions, KnotPreset,
    LaurentML, StateOptions, Weighting,
};
use toeplitz_core::report::{write_csv, write_json, ReportRow};
use toeplitz_core::{Error, LatticeVector};

use config::{parse_pair_f64, parse_pair_i64, ExperimentConfig, Format};

#[derive(Parser, Debug)]
#[command(name = "toeplitz", version, about = "Quantization of the torus: operator checks and knot-state experiments")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Complex structure as `re,im` (default `0,1`).
    #[arg(long, global = true, value_parser = parse_pair_f64, allow_hyphen_values = true)]
    tau: Option<[f64; 2]>,
    /// Comma-separated increasing levels r.
    #[arg(long, global = true, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Quadrature grid size (at least 64).
    #[arg(long = "grid", global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// unknot, trefoil or figure_eight.
    #[arg(long, global = true, value_parser = parse_knot)]
    knot: Option<KnotPreset>,
    /// Output file (default `<experiment>.<format>`).
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

fn parse_knot(s: &str) -> Result<KnotPreset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum torus algebra.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Berezin-Toeplitz operators.
    Bt {
        #[command(subcommand)]
        cmd: BtCmd,
    },
    /// Szegő projector kernel.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Knot states and A-polynomials.
    Knot {
        #[command(subcommand)]
        cmd: KnotCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Reversed-product law of the representation on random pairs.
    Verify {
        /// Single level; shorthand for `--levels r`.
        #[arg(long = "r")]
        r: Option<u32>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        support_bound: i64,
    },
    /// Lattice vectors reached from the three curve generators.
    Span {
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BtCmd {
    /// Distance between the curve operator and the Toeplitz operator of its symbol.
    Residual {
        #[arg(long, default_value = "1,0", value_parser = parse_pair_i64, allow_hyphen_values = true)]
        vector: [i64; 2],
    },
    /// Operator norm against the sup norm of the curve symbol.
    Normlimit {
        #[arg(long, default_value = "1,0", value_parser = parse_pair_i64, allow_hyphen_values = true)]
        vector: [i64; 2],
    },
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    /// Off-diagonal decay of the kernel norm.
    Decay {
        #[arg(long, default_value_t = 0.5)]
        separation: f64,
    },
    /// Near-diagonal comparison with the Gaussian model.
    Gaussian {
        /// Offset `dp,dq` from the base point; repeatable.
        #[arg(long = "offset", value_parser = parse_pair_f64, allow_hyphen_values = true)]
        offsets: Vec<[f64; 2]>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightingArg {
    Flat,
    QuantumDimension,
}

#[derive(Args, Debug)]
struct StateArgs {
    #[arg(long, value_enum, default_value = "quantum-dimension")]
    weighting: WeightingArg,
    /// Use the mirror knot.
    #[arg(long)]
    mirror: bool,
}

impl StateArgs {
    fn options(&self) -> StateOptions {
        StateOptions {
            weighting: match self.weighting {
                WeightingArg::Flat => Weighting::Flat,
                WeightingArg::QuantumDimension => Weighting::QuantumDimension,
            },
            mirror: self.mirror,
        }
    }
}

#[derive(Subcommand, Debug)]
enum KnotCmd {
    /// Annihilation residual of the A-polynomial symbol on the knot state.
    Aj {
        #[command(flatten)]
        state: StateArgs,
        /// Drop the abelian factor `l − 1`.
        #[arg(long)]
        no_abelian_factor: bool,
    },
    /// `(π/r) ln ‖Z_r‖²` against the hyperbolic volume.
    Volume {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Mahler measure of a polynomial, or of a knot's A-polynomial.
    Mahler {
        /// Polynomial in m, l such as `1+m+l`; overrides `--knot`.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 2)]
        refine: u32,
        #[arg(long)]
        no_abelian_factor: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Report,
}

struct Run {
    experiment: &'static str,
    rows: Vec<ReportRow>,
    status: Status,
    summary: String,
}

fn row(experiment: &str, subject: &str, r: Option<u32>, quantity: &str, value: f64) -> ReportRow {
    ReportRow::new(experiment, subject, r, quantity, value)
}

fn vector(v: [i64; 2]) -> LatticeVector {
    LatticeVector::new(v[0], v[1])
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn algebra_verify(cfg: &ExperimentConfig, trials: usize, support_bound: i64) -> anyhow::Result<Run> {
    const EXP: &str = "algebra_verify";
    let levels = cfg.levels_or(&[5])?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    // levels run in order so a violation leaves the earlier rows intact
    for (i, &level) in levels.iter().enumerate() {
        let seed = cfg.seed().wrapping_add(i as u64);
        match verify_isomorphism(level, trials, support_bound, seed) {
            Ok(rep) => {
                worst = worst.max(rep.max_deviation);
                rows.push(row(EXP, "", Some(rep.r), "max_deviation", rep.max_deviation));
            }
            Err(Error::IsomorphismViolation { deviation, .. }) => {
                rows.push(row(EXP, "", Some(level.r()), "max_deviation", deviation));
                return Ok(Run {
                    experiment: EXP,
                    rows,
                    status: Status::Fail,
                    summary: format!("r = {}: deviation {deviation:.3e} exceeds {ISOMORPHISM_TOL:e}", level.r()),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Run {
        experiment: EXP,
        rows,
        status: pass_if(worst < ISOMORPHISM_TOL),
        summary: format!(
            "{trials} pairs per level, support {support_bound}, levels {:?}: max deviation {worst:.3e} (tol {ISOMORPHISM_TOL:e})",
            levels.iter().map(|l| l.r()).collect::<Vec<_>>()
        ),
    })
}

fn algebra_span(degree: usize) -> anyhow::Result<Run> {
    const EXP: &str = "algebra_span";
    let reached = span_closure(degree)?;
    let mut rows: Vec<ReportRow> = reached
        .iter()
        .map(|v| row(EXP, &v.to_string(), None, "reached", 1.0))
        .collect();
    rows.push(row(EXP, "", None, "count", reached.len() as f64));
    Ok(Run {
        experiment: EXP,
        summary: format!("degree {degree}: {} lattice vectors reached", reached.len()),
        rows,
        status: Status::Report,
    })
}

fn bt_residual(cfg: &ExperimentConfig, v: [i64; 2]) -> anyhow::Result<Run> {
    const EXP: &str = "bt_residual";
    let v = vector(v);
    let subject = v.to_string();
    let res = symbol_residual(&cfg.levels_or(&[5, 10, 20, 40])?, cfg.complex_structure()?, v, cfg.grid()?)?;
    let mut rows: Vec<ReportRow> = res
        .iter()
        .map(|x| row(EXP, &subject, Some(x.r), "residual", x.residual))
        .collect();
    let ratios = successive_ratios(&res);
    for (w, ratio) in res.windows(2).zip(&ratios) {
        rows.push(row(EXP, &subject, Some(w[1].r), "ratio_to_previous", *ratio));
    }
    let decreasing = res.windows(2).all(|w| w[1].residual < w[0].residual);
    Ok(Run {
        experiment: EXP,
        rows,
        status: pass_if(decreasing),
        summary: format!(
            "v = {subject}: residual {:.4e} at r = {}, strictly decreasing: {decreasing}",
            res.last().map_or(f64::NAN, |x| x.residual),
            res.last().map_or(0, |x| x.r)
        ),
    })
}

fn bt_normlimit(cfg: &ExperimentConfig, v: [i64; 2]) -> anyhow::Result<Run> {
    const EXP: &str = "bt_normlimit";
    let v = vector(v);
    let subject = v.to_string();
    let rep = norm_limit_check(
        cfg.complex_structure()?,
        &TrigSymbol::curve(v),
        &cfg.levels_or(&[10, 20, 40, 50])?,
        cfg.grid()?,
    )?;
    let mut rows = vec![row(EXP, &subject, None, "sup", rep.sup)];
    for x in &rep.rows {
        rows.push(row(EXP, &subject, Some(x.r), "norm", x.norm));
        rows.push(row(EXP, &subject, Some(x.r), "gap", x.gap));
    }
    let gaps = rep.gaps();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(Run {
        experiment: EXP,
        rows,
        status: pass_if(decreasing),
        summary: format!(
            "F_{subject}: sup {:.4}, final gap {:.4e}, gaps decreasing: {decreasing}",
            rep.sup,
            gaps.last().copied().unwrap_or(f64::NAN)
        ),
    })
}

fn kernel_decay(cfg: &ExperimentConfig, separation: f64) -> anyhow::Result<Run> {
    const EXP: &str = "kernel_decay";
    match kernel_decay_check(&cfg.levels_or(&[5, 10, 20, 40])?, cfg.complex_structure()?, separation) {
        Ok(rep) => {
            let mut rows: Vec<ReportRow> = rep
                .log_norms
                .iter()
                .map(|&(r, y)| row(EXP, "", Some(r), "log_kernel_norm", y))
                .collect();
            rows.push(row(EXP, "", None, "slope", rep.slope));
            Ok(Run {
                experiment: EXP,
                rows,
                status: Status::Pass,
                summary: format!("separation {separation}: slope of ln|Pi| against r is {:.4}", rep.slope),
            })
        }
        Err(Error::NonDecaying { slope }) => Ok(Run {
            experiment: EXP,
            rows: vec![row(EXP, "", None, "slope", slope)],
            status: Status::Fail,
            summary: format!("separation {separation}: kernel norm does not decay (slope {slope:.4})"),
        }),
        Err(e) => Err(e.into()),
    }
}

fn kernel_gaussian(cfg: &ExperimentConfig, offsets: &[[f64; 2]]) -> anyhow::Result<Run> {
    const EXP: &str = "kernel_gaussian";
    let offsets: Vec<(f64, f64)> = if offsets.is_empty() {
        vec![(0.05, 0.0)]
    } else {
        offsets.iter().map(|o| (o[0], o[1])).collect()
    };
    let rep = kernel_gaussian_check(&cfg.levels_or(&[10, 20, 40])?, cfg.complex_structure()?, &offsets);
    let rows: Vec<ReportRow> = rep
        .rows
        .iter()
        .map(|x| {
            let subject = format!("({},{})", x.dp, x.dq);
            match x.rel_error {
                Some(e) => row(EXP, &subject, Some(x.r), "relative_error", e),
                None => row(EXP, &subject, Some(x.r), "out_of_neighborhood", 1.0),
            }
        })
        .collect();
    let worst = rep.rows.iter().filter_map(|x| x.rel_error).fold(0.0, f64::max);
    Ok(Run {
        experiment: EXP,
        rows,
        status: Status::Report,
        summary: format!("{} offsets: largest relative error {worst:.3e}", offsets.len()),
    })
}

fn knot_aj(cfg: &ExperimentConfig, state: &StateArgs, no_abelian_factor: bool) -> anyhow::Result<Run> {
    const EXP: &str = "knot_aj";
    let knot = cfg.knot_or(KnotPreset::Unknot);
    let levels = cfg.levels_or(&[5, 10, 20, 40])?;
    if levels.iter().any(|l| l.r() < 2) {
        bail!("annihilation residual needs every level r >= 2");
    }
    let cs = cfg.complex_structure()?;
    let grid = cfg.grid()?;
    let opts = AjOptions {
        abelian_factor: !no_abelian_factor,
        state: state.options(),
    };
    let mut rows = Vec::new();
    for level in &levels {
        let res = aj_residual(knot, *level, cs, grid, opts)?;
        rows.push(row(EXP, knot.name(), Some(level.r()), "residual", res));
    }
    Ok(Run {
        experiment: EXP,
        summary: format!(
            "{knot}: residuals {}",
            rows.iter()
                .map(|x| format!("r={}: {:.4e}", x.r.unwrap_or(0), x.value))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        rows,
        status: Status::Report,
    })
}

fn knot_volume(cfg: &ExperimentConfig, state: &StateArgs) -> anyhow::Result<Run> {
    const EXP: &str = "knot_volume";
    let knot = cfg.knot_or(KnotPreset::FigureEight);
    let seq = volume_sequence(knot, &cfg.levels_or(&[25, 50, 100, 200])?, state.options())?;
    let oracle = simplicial_volume_oracle(knot);
    let mut rows: Vec<ReportRow> = seq
        .iter()
        .map(|x| row(EXP, knot.name(), Some(x.r), "volume", x.value))
        .collect();
    rows.push(row(EXP, knot.name(), None, "simplicial_volume", oracle));
    let mut summary = format!(
        "{knot}: {} (simplicial volume {oracle:.6})",
        seq.iter()
            .map(|x| format!("r={}: {:.4}", x.r, x.value))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if seq.len() >= 3 {
        let (v, c) = volume_fit(&seq)?;
        rows.push(row(EXP, knot.name(), None, "fit_volume", v));
        rows.push(row(EXP, knot.name(), None, "fit_log_coefficient", c));
        summary.push_str(&format!("; fit v + c ln(r)/r gives {v:.4}"));
    }
    Ok(Run {
        experiment: EXP,
        rows,
        status: Status::Report,
        summary,
    })
}

fn knot_mahler(cfg: &ExperimentConfig, poly: Option<&str>, refine: u32, no_abelian_factor: bool) -> anyhow::Result<Run> {
    const EXP: &str = "knot_mahler";
    let (subject, p, knot) = match poly {
        Some(s) => (s.to_string(), s.parse::<LaurentML>()?, None),
        None => {
            let k = cfg.knot_or(KnotPreset::FigureEight);
            (k.name().to_string(), k.a_polynomial(!no_abelian_factor), Some(k))
        }
    };
    let grid = cfg.grid()?.unwrap_or(512);
    let rep = mahler_measure(&p, grid, refine)?;
    let mut rows: Vec<ReportRow> = rep
        .estimates
        .iter()
        .map(|&(n, e)| row(EXP, &subject, None, &format!("midpoint_{n}"), e))
        .collect();
    rows.push(row(EXP, &subject, None, "mahler", rep.value));
    let mut summary = format!("m({p}) = {:.8}", rep.value);
    if let Some(d) = rep.last_difference() {
        summary.push_str(&format!(", last two grids differ by {d:.2e}"));
    }
    if let Some(k) = knot {
        let vol = simplicial_volume_oracle(k);
        rows.push(row(EXP, &subject, None, "simplicial_volume", vol));
        summary.push_str(&format!("; simplicial volume {vol:.6}, volume/pi {:.6}", vol / std::f64::consts::PI));
    }
    Ok(Run {
        experiment: EXP,
        rows,
        status: Status::Report,
        summary,
    })
}

fn dispatch(cmd: &Command, cfg: &ExperimentConfig) -> anyhow::Result<Run> {
    match cmd {
        Command::Algebra { cmd } => match cmd {
            AlgebraCmd::Verify {
                r,
                trials,
                support_bound,
            } => {
                let mut cfg = cfg.clone();
                if let Some(r) = r {
                    cfg.levels = Some(vec![*r]);
                }
                algebra_verify(&cfg, *trials, *support_bound)
            }
            AlgebraCmd::Span { degree } => algebra_span(*degree),
        },
        Command::Bt { cmd } => match cmd {
            BtCmd::Residual { vector } => bt_residual(cfg, *vector),
            BtCmd::Normlimit { vector } => bt_normlimit(cfg, *vector),
        },
        Command::Kernel { cmd } => match cmd {
            KernelCmd::Decay { separation } => kernel_decay(cfg, *separation),
            KernelCmd::Gaussian { offsets } => kernel_gaussian(cfg, offsets),
        },
        Command::Knot { cmd } => match cmd {
            KnotCmd::Aj {
                state,
                no_abelian_factor,
            } => knot_aj(cfg, state, *no_abelian_factor),
            KnotCmd::Volume { state } => knot_volume(cfg, state),
            KnotCmd::Mahler {
                poly,
                refine,
                no_abelian_factor,
            } => knot_mahler(cfg, poly.as_deref(), *refine, *no_abelian_factor),
        },
    }
}

fn write_rows(cfg: &ExperimentConfig, run: &Run) -> anyhow::Result<PathBuf> {
    let path = cfg.output_path(run.experiment);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let out = BufWriter::new(file);
    match cfg.format() {
        Format::Csv => write_csv(&run.rows, out)?,
        Format::Json => write_json(&run.rows, out)?,
    }
    Ok(path)
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("TOEPLITZ_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("TOEPLITZ_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = (|| {
        init_threads()?;
        let file = match &cli.common.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            tau: cli.common.tau,
            levels: cli.common.levels.clone(),
            grid_n: cli.common.grid_n,
            seed: cli.common.seed,
            knot: cli.common.knot,
            output_path: cli.common.output.clone(),
            format: cli.common.format,
        };
        let cfg = file.overridden_by(flags);
        let run = dispatch(&cli.command, &cfg)?;
        let path = write_rows(&cfg, &run)?;
        Ok::<_, anyhow::Error>((run, path))
    })();
    match result {
        Ok((run, path)) => {
            let tag = match run.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Report => "REPORT",
            };
            println!("{tag} {}: {} -> {}", run.experiment, run.summary, path.display());
            if run.status == Status::Fail {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
