use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pdnoma::channel::{NoiseConvention, NoiseModel};
use pdnoma::cli::{self, RunManifest};
use pdnoma::constellation::ConstellationKind;
use pdnoma::detect::DetectorKind;
use pdnoma::sim::{sweep_with_progress, SimConfig};

/// Union bounds and Monte Carlo BER for the two-user power-domain NOMA uplink.
#[derive(Debug, Parser)]
#[command(name = "pdnoma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QPSK pairwise error probabilities for alpha = 0.5 and 0.9.
    Table1 {
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Union bound on the ABEP over an alpha x Eb/N0 grid.
    Bound {
        #[arg(long, value_enum)]
        constellation: Modulation,
        /// e.g. `0.5:0.99:0.01` or `0.5,0.9`
        #[arg(long)]
        alpha_grid: String,
        #[arg(long)]
        snr_grid_db: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo BER curves.
    Ber {
        #[arg(long, value_enum)]
        constellation: Modulation,
        #[arg(long, value_enum, default_value = "ml")]
        detector: Detector,
        #[arg(long)]
        alpha_list: String,
        #[arg(long)]
        snr_grid_db: String,
        /// `real-dim`: N0 per real noise dimension; `complex`: N0 per complex sample.
        #[arg(long, value_enum, default_value = "real-dim")]
        noise_convention: Noise,
        #[arg(long, env = cli::SEED_ENV, default_value_t = cli::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        min_errors: u64,
        #[arg(long, default_value_t = 100_000_000)]
        max_codewords: u64,
        #[arg(long, default_value_t = 10_000)]
        chunk_size: u64,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eb/N0 penalty of each curve in a BER file at a target BER.
    Degradation {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        reference_alpha: f64,
        #[arg(long, default_value_t = 1e-3)]
        target_ber: f64,
    },
    /// Symbol table of a constellation.
    Constellation {
        #[arg(long, value_enum)]
        constellation: Modulation,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct NoiseArgs {
    #[arg(long)]
    n0: Option<f64>,
    #[arg(long)]
    snr_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Modulation {
    Qpsk,
    #[value(name = "16qam")]
    Qam16,
}

impl From<Modulation> for ConstellationKind {
    fn from(m: Modulation) -> Self {
        match m {
            Modulation::Qpsk => ConstellationKind::Qpsk,
            Modulation::Qam16 => ConstellationKind::Qam16,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Noise {
    Complex,
    RealDim,
}

impl From<Noise> for NoiseConvention {
    fn from(n: Noise) -> Self {
        match n {
            Noise::Complex => NoiseConvention::PerComplexSample,
            Noise::RealDim => NoiseConvention::PerRealDimension,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Detector {
    Ml,
    Sic,
}

impl From<Detector> for DetectorKind {
    fn from(d: Detector) -> Self {
        match d {
            Detector::Ml => DetectorKind::Ml,
            Detector::Sic => DetectorKind::Sic,
        }
    }
}

fn run(cli: Cli) -> pdnoma::Result<()> {
    match cli.command {
        Command::Table1 { noise, out } => {
            let nm = match (noise.n0, noise.snr_db) {
                (Some(n0), _) => NoiseModel::from_n0(n0)?,
                (_, Some(db)) => NoiseModel::from_ebn0_db(db)?,
                _ => unreachable!("clap enforces exactly one noise flag"),
            };
            let manifest =
                RunManifest::new("table1", cli::SCHEMA_TABLE1).param("n0", cli::fmt_real(nm.n0()));
            std::fs::write(&out, cli::table1_csv(nm.n0(), &manifest)?)?;
            println!(
                "wrote 15 error events at 1/N0 = {:.2} dB to {}",
                nm.ebn0_db(),
                out.display()
            );
        }
        Command::Bound {
            constellation,
            alpha_grid,
            snr_grid_db,
            out,
        } => {
            let alphas = cli::parse_grid(&alpha_grid)?;
            let snrs = cli::parse_grid(&snr_grid_db)?;
            let kind: ConstellationKind = constellation.into();
            let manifest = RunManifest::new("bound", cli::SCHEMA_BOUND)
                .param("constellation", kind)
                .param("alpha_grid", &alpha_grid)
                .param("snr_grid_db", &snr_grid_db);
            let text = cli::bound_csv(kind, &alphas, &snrs, &manifest)?;
            std::fs::write(&out, &text)?;
            for line in text.lines().filter(|l| l.starts_with("# argmin")) {
                println!("{}", line.trim_start_matches("# "));
            }
        }
        Command::Ber {
            constellation,
            detector,
            alpha_list,
            snr_grid_db,
            noise_convention,
            seed,
            min_errors,
            max_codewords,
            chunk_size,
            workers,
            out,
        } => {
            let mut cfg = SimConfig {
                constellation: constellation.into(),
                detector: detector.into(),
                alphas: cli::parse_grid(&alpha_list)?,
                ebn0_db: cli::parse_grid(&snr_grid_db)?,
                noise_convention: noise_convention.into(),
                seed,
                min_bit_errors: min_errors,
                max_codewords,
                chunk_size,
                ..SimConfig::default()
            };
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let curves = sweep_with_progress(&cfg, |p| {
                println!(
                    "alpha {:<5} Eb/N0 {:>5.1} dB  BER {:.3e} ({} errors, {})",
                    p.alpha,
                    p.ebn0_db,
                    p.ber,
                    p.bit_errors,
                    p.status.name()
                );
            })?;
            std::fs::write(&out, cli::ber_csv(&curves, &cli::ber_manifest(&cfg))?)?;
        }
        Command::Degradation {
            input,
            reference_alpha,
            target_ber,
        } => {
            let records = cli::parse_ber_csv(&std::fs::read_to_string(&input)?)?;
            let rows = cli::degradation_table(&records, reference_alpha, target_ber)?;
            print!(
                "{}",
                cli::render_degradation(&rows, reference_alpha, target_ber)
            );
        }
        Command::Constellation { constellation, out } => {
            let kind: ConstellationKind = constellation.into();
            let manifest = RunManifest::new("constellation", cli::SCHEMA_CONSTELLATION)
                .param("constellation", kind);
            std::fs::write(&out, cli::constellation_csv(kind, &manifest)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
