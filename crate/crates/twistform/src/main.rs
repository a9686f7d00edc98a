use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twistform::certificate::{emit, OutputFormat};
use twistform::commands::{self, CmdResult, UsageError, WeightChoice, EXIT_USAGE};
use twistform::input::{parse_frame, parse_spectrum};
use twistform::section_file::{read_section, write_section};
use twistform_core::atlas::Section;

#[derive(Parser)]
#[command(name = "twistform", version, about = "Twisted holomorphic forms on projective spaces: construction, verification and vanishing certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Sample points for pointwise checks.
    #[arg(long, global = true, default_value_t = 100)]
    points: usize,
    /// Seed for sample points.
    #[arg(long, global = true, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Structured)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the p-contact section on P^n (n odd) and certify it.
    ConstructPn {
        #[arg(long)]
        n: usize,
        /// Write the section file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check gluing and the p-contact condition of a section file.
    Verify {
        file: PathBuf,
        /// Also report metric independence and the no-contact residual.
        #[arg(long, value_enum)]
        weight: Option<WeightChoice>,
    },
    /// Check gluing and the s-symplectic condition of a section file.
    SymplecticVerify { file: PathBuf },
    /// Product of an s-symplectic and a p-contact section.
    Product {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// η ∧ (∂η)^l from a contact form.
    ContactPower {
        #[arg(long, conflicts_with = "standard", required_unless_present = "standard")]
        eta: Option<PathBuf>,
        /// Use the standard contact form on P^N.
        #[arg(long)]
        standard: Option<usize>,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension and basis of H^{p,0}(P^n, O(k)).
    CohomDim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Bott vanishing for H^{p,q}(P^N, O(k)).
    Bott {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        dim: usize,
    },
    /// Vanishing certificate for H^{n,0}(X, O_X((n+1)/2)) on a degree-d hypersurface.
    HypersurfaceCert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Curvature-operator spectra and m-positivity.
    Curvature {
        #[arg(long, group = "src")]
        spectrum: Option<PathBuf>,
        #[arg(long, group = "src")]
        frame: Option<PathBuf>,
        /// Fubini–Study metric on P^N with weight k.
        #[arg(long, group = "src", requires = "k")]
        fs: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Contraction-kernel ranks at sample points.
    Rank {
        file: PathBuf,
        #[arg(long)]
        directsum: bool,
        #[arg(long, value_enum, default_value_t = WeightChoice::Fs)]
        weight: WeightChoice,
    },
    /// Volume density of a p-contact section by two routes.
    Volume {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = WeightChoice::Fs)]
        weight: WeightChoice,
    },
    /// k with O(k)^2 = -K on P^n.
    SpinRoot {
        #[arg(long)]
        n: usize,
    },
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<Section, UsageError> {
    read_section(&read(path)?).map_err(|e| UsageError(format!("{}: {}", path.display(), e)))
}

fn run(cli: Cli) -> Result<i32, UsageError> {
    let g = &cli.global;
    let (res, out): (CmdResult, Option<PathBuf>) = match cli.cmd {
        Cmd::ConstructPn { n, out } => (commands::construct_pn(n), out),
        Cmd::Verify { file, weight } => (commands::verify(load(&file)?, weight, g.points, g.seed), None),
        Cmd::SymplecticVerify { file } => (commands::symplectic_verify(load(&file)?), None),
        Cmd::Product { omega, gamma, out } => (commands::product(load(&omega)?, load(&gamma)?), out),
        Cmd::ContactPower { eta, standard, l, out } => {
            let (s, src) = match (eta, standard) {
                (Some(p), _) => (load(&p)?, p.display().to_string()),
                (None, Some(n)) => (commands::standard_contact(n)?, format!("standard P^{}", n)),
                (None, None) => unreachable!("clap requires one source"),
            };
            (commands::contact_power(s, l, &src), out)
        }
        Cmd::CohomDim { n, p, k } => (commands::cohom_dim(n, p, k), None),
        Cmd::Bott { p, q, k, dim } => (commands::bott(p, q, k, dim), None),
        Cmd::HypersurfaceCert { n, d } => (commands::hypersurface_cert(n, d), None),
        Cmd::Curvature { spectrum, frame, fs, k, m } => {
            let res = match (spectrum, frame, fs) {
                (Some(p), _, _) => {
                    let v = parse_spectrum(&read(&p)?).map_err(|e| UsageError(format!("{}: {}", p.display(), e)))?;
                    commands::curvature_spectrum(v, m)
                }
                (_, Some(p), _) => {
                    let f = parse_frame(&read(&p)?).map_err(|e| UsageError(format!("{}: {}", p.display(), e)))?;
                    commands::curvature_frame(f, m)
                }
                (_, _, Some(n)) => commands::curvature_fs(n, k.unwrap_or(1), g.points, g.seed),
                _ => return Err(UsageError("one of --spectrum, --frame or --fs is required".into())),
            };
            (res, None)
        }
        Cmd::Rank { file, directsum, weight } => (commands::rank(load(&file)?, directsum, weight, g.points, g.seed), None),
        Cmd::Volume { file, weight } => (commands::volume(load(&file)?, weight, g.points, g.seed), None),
        Cmd::SpinRoot { n } => (commands::spin_root(n), None),
    };
    let o = res?;
    if let (Some(path), Some(s)) = (out, &o.section) {
        fs::write(&path, write_section(s)).map_err(|e| UsageError(format!("{}: {}", path.display(), e)))?;
    }
    print!("{}", emit(&o.cert, g.format));
    Ok(o.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    if let Some(t) = std::env::var("TWISTFORM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("twistform: {}", e);
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
