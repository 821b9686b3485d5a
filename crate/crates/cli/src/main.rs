use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paragray::cli::{self, Report, DEFAULT_SAMPLES, DEFAULT_SEED};
use paragray::curvature::write_tensor_file;
use paragray::model::Kind;
use paragray::Error;

#[derive(Parser)]
#[command(name = "paragray", version, about = "Exact checks for para-Hermitian curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Para,
    Hermitian,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Para => Kind::ParaHermitian,
            KindArg::Hermitian => Kind::Hermitian,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Realization metrics and the para-Gray identity on random samples.
    VerifyGray {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// P = W_G = W7 perp.
    VerifyMain {
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Evaluate one catalog metric.
    Catalog {
        label: String,
        /// Also write the origin curvature in tensor-file format.
        #[arg(long)]
        tensor_out: Option<PathBuf>,
    },
    /// Decompose a curvature tensor read from a file ("-" for stdin).
    Decompose {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Para)]
        kind: KindArg,
    },
    /// Transfer from the positive definite Hermitian model.
    Transfer {
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Build and validate the module table.
    ModuleTable {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Para)]
        kind: KindArg,
    },
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Io(e.to_string()))
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::VerifyGray { dim, seed, samples } => cli::cmd_verify_gray(*dim, *seed, *samples),
        Command::VerifyMain { dim } => cli::cmd_verify_main(*dim),
        Command::Catalog { label, tensor_out } => {
            let rep = cli::cmd_catalog(label)?;
            if let Some(p) = tensor_out {
                let (_, a) = cli::catalog_curvature(label)?;
                std::fs::write(p, write_tensor_file(&a)).map_err(|e| Error::Io(e.to_string()))?;
            }
            Ok(rep)
        }
        Command::Decompose { file, dim, kind } => cli::cmd_decompose(&read_input(file)?, *dim, (*kind).into()),
        Command::Transfer { dim } => cli::cmd_transfer(*dim),
        Command::ModuleTable { dim, kind } => cli::cmd_module_table(*dim, (*kind).into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rep = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if Report::is_usage_error(&e) { 2 } else { 1 });
        }
    };
    let body = match cli.format {
        Format::Json => rep.to_json() + "\n",
        Format::Text => rep.to_text(),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(rep.exit_code() as u8)
}
