use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gklandau::gkcs::{action_continuous, evolve, invert_action};
use gklandau_cli::{exit, export, run_suite, write_report, Format, RunConfig, Suite};
use serde_json::json;

/// Verify the model identities, export grids and spectra.
#[derive(Parser)]
#[command(name = "gklandau", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite: algebra, hamiltonians, wigner, gkcs, displacement or all.
    Verify { suite: String },
    /// Write a CSV file.
    Export {
        kind: ExportKind,
        /// Row index of the dyad for wigner_grid.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Continuous label for spectrum.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Find K1 whose continuous action equals the target.
    InvertAction {
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
    },
    /// Print the label reached after time t.
    EvolveLabel {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    #[value(name = "wigner_grid", alias = "wigner-grid")]
    WignerGrid,
    #[value(name = "cs_amplitudes", alias = "cs-amplitudes")]
    CsAmplitudes,
    #[value(name = "spectrum")]
    Spectrum,
}

#[derive(Args)]
struct Common {
    /// key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long = "M", global = true, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long = "omega-c", global = true, allow_negative_numbers = true)]
    omega_c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long = "K1", global = true, allow_negative_numbers = true)]
    k1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta1: Option<f64>,
    #[arg(long = "J", global = true, allow_negative_numbers = true)]
    j: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long = "Jp", global = true, allow_negative_numbers = true)]
    jp: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    gammap: Option<f64>,
    #[arg(long, global = true)]
    l: Option<usize>,
}

enum Failure {
    Config(String),
    Io(String),
    Numeric(String),
}

impl Common {
    fn load(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                RunConfig::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        let reals = [
            ("tol", self.tol),
            ("M", self.mass),
            ("omega_c", self.omega_c),
            ("lambda", self.lambda),
            ("beta", self.beta),
            ("K1", self.k1),
            ("theta1", self.theta1),
            ("J", self.j),
            ("gamma", self.gamma),
            ("Jp", self.jp),
            ("gammap", self.gammap),
        ];
        let ints = [("n_max", self.n_max), ("dim", self.dim), ("l", self.l)];
        let set = |cfg: &mut RunConfig, k: &str, v: String| cfg.set(k, &v).map_err(|e| Failure::Config(e.to_string()));
        for (k, v) in reals {
            if let Some(v) = v {
                set(&mut cfg, k, v.to_string())?;
            }
        }
        for (k, v) in ints {
            if let Some(v) = v {
                set(&mut cfg, k, v.to_string())?;
            }
        }
        if self.json {
            cfg.format = Format::Json;
        }
        if self.csv {
            cfg.format = Format::Csv;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
        Ok(cfg)
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("GKLANDAU_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Config(format!("GKLANDAU_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<i32, Failure> {
    configure_threads()?;
    let cfg = cli.common.load()?;
    match cli.cmd {
        Cmd::Verify { suite } => {
            let suite = Suite::from_name(&suite).ok_or_else(|| Failure::Config(format!("unknown suite `{suite}`")))?;
            let entries = run_suite(suite, &cfg);
            let mut w = sink(cfg.out.as_deref())?;
            write_report(&entries, cfg.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
            let failed = entries.iter().filter(|e| !e.pass).count();
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", entries.len());
                return Ok(exit::FAILED);
            }
            Ok(exit::OK)
        }
        Cmd::Export { kind, n, alpha } => {
            let mut w = sink(cfg.out.as_deref())?;
            let result = match kind {
                ExportKind::WignerGrid => export::wigner_grid(&cfg, n, cfg.label.l, &mut w),
                ExportKind::CsAmplitudes => export::cs_amplitudes(&cfg, &mut w),
                ExportKind::Spectrum => export::spectrum(&cfg, cfg.truncations.n_max.unwrap_or(5), alpha, &mut w),
            };
            match result {
                Ok(()) => {}
                Err(export::ExportError::Numeric(e)) => return Err(Failure::Numeric(e.to_string())),
                Err(e) => return Err(io_err(e)),
            }
            w.flush().map_err(io_err)?;
            Ok(exit::OK)
        }
        Cmd::InvertAction { target } => {
            let beta = cfg.label.beta;
            let k1 = invert_action(target, beta).map_err(|e| Failure::Numeric(e.to_string()))?;
            let action = action_continuous(k1, beta).map_err(|e| Failure::Numeric(e.to_string()))?;
            let mut w = sink(cfg.out.as_deref())?;
            writeln!(
                w,
                "{}",
                json!({"target": target, "beta": beta, "K1": k1, "action": action})
            )
            .map_err(io_err)?;
            w.flush().map_err(io_err)?;
            Ok(exit::OK)
        }
        Cmd::EvolveLabel { t } => {
            let l = evolve(&cfg.label, t, &cfg.params);
            let mut w = sink(cfg.out.as_deref())?;
            let v = json!({
                "t": t, "J": l.j, "gamma": l.gamma, "Jp": l.jp, "gammap": l.gammap,
                "l": l.l, "K1": l.k1, "theta1": l.theta1, "beta": l.beta,
            });
            writeln!(w, "{v}").map_err(io_err)?;
            w.flush().map_err(io_err)?;
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            exit::CONFIG
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            exit::IO
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            exit::FAILED
        }
    };
    ExitCode::from(code as u8)
}
