mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use finsite::classify::classify_report;
use finsite::density::{is_dense, topologies_with_dense};
use finsite::io::{corpus, parse_site, CorpusBounds, Site, SiteError};
use finsite::lattice::{enumerate_topologies, max_assignments};
use finsite::sheaf::sheafify;
use finsite::TopologyError;

use output::{density_output, lattice_output, report_bundle, sheafify_output};

#[derive(Parser)]
#[command(
    name = "finsite",
    version,
    about = "Computations on finite Grothendieck sites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the category and topology in a site file are valid.
    Validate { file: PathBuf },
    /// Enumerate every topology on the site's category.
    Topologies {
        file: PathBuf,
        /// Print only the number of topologies.
        #[arg(long)]
        count_only: bool,
        /// Maximum number of candidate sieve assignments (default: FINSITE_MAX_ASSIGNMENTS or 65536).
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Classify the site and its representable sheaves.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide density of a named subcategory.
    Dense {
        file: PathBuf,
        #[arg(long)]
        sub: String,
    },
    /// Sheafify a named presheaf.
    Sheafify {
        file: PathBuf,
        #[arg(long)]
        presheaf: String,
    },
    /// Classification plus lattice, density and sheafification of every named block.
    Report { file: PathBuf },
    /// Write the seeded corpus of site files to a directory.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        random_members: Option<usize>,
    },
}

enum Failure {
    Invalid(String),
    SizeBound(String),
    Io(String),
}

impl From<SiteError> for Failure {
    fn from(e: SiteError) -> Self {
        if e.is_parse_error() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<TopologyError> for Failure {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::SizeBoundExceeded { .. } => Failure::SizeBound(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("outputs serialize")
    );
}

fn load(file: &PathBuf) -> Result<Site, Failure> {
    Ok(parse_site(file)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let site = load(&file)?;
            println!(
                "ok: {} ({} objects, {} morphisms, {} covering sieves)",
                site.name,
                site.category.n_objects(),
                site.category.n_morphisms(),
                site.topology.total_covering()
            );
        }
        Command::Topologies {
            file,
            count_only,
            limit,
        } => {
            let site = load(&file)?;
            let lattice =
                enumerate_topologies(&site.category, limit.unwrap_or_else(max_assignments))?;
            if count_only {
                println!("{}", lattice.len());
            } else {
                print_json(&lattice_output(&site, &lattice));
            }
        }
        Command::Classify { file, format } => {
            let site = load(&file)?;
            let report =
                classify_report(&site.name, &site.category, &site.topology).map_err(invalid)?;
            match format {
                Format::Json => print_json(&report),
                Format::Text => print!("{}", report.to_text()),
            }
        }
        Command::Dense { file, sub } => {
            let site = load(&file)?;
            let d = site.subcategory(&sub)?;
            let verdict = is_dense(&site.category, &site.topology, d);
            let family = enumerate_topologies(&site.category, max_assignments())
                .ok()
                .map(|l| topologies_with_dense(&site.category, &l, d).map(|f| (l, f)))
                .transpose()
                .map_err(invalid)?;
            print_json(&density_output(
                &site,
                &sub,
                &verdict,
                family.as_ref().map(|(l, f)| (l, f)),
            ));
        }
        Command::Sheafify { file, presheaf } => {
            let site = load(&file)?;
            let p = site.presheaf(&presheaf)?;
            let a = sheafify(&site.category, &site.topology, p);
            print_json(&sheafify_output(&site, &presheaf, p, &a));
        }
        Command::Report { file } => {
            let site = load(&file)?;
            print_json(&report_bundle(&site).map_err(invalid)?);
        }
        Command::Corpus {
            seed,
            out,
            random_members,
        } => {
            let mut bounds = CorpusBounds::default();
            if let Some(n) = random_members {
                bounds.random_members = n;
            }
            std::fs::create_dir_all(&out)
                .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
            for file in corpus(seed, &bounds) {
                let path = out.join(format!("{}.site.json", file.name));
                std::fs::write(&path, file.to_json())
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::SizeBound(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
