use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use tagnav::bench::{self, BenchRecord, Source, WorkloadSpec};
use tagnav::CollectionDocument;
use tagnav_server::{bind_address, serve, AppState, Config};

#[derive(Parser)]
#[command(name = "tagnav", version, about = "Multilevel tag browsing service and benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve collections and browsing sessions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Collection document to load at startup (becomes `c1`).
        #[arg(long)]
        collection: Option<PathBuf>,
        /// Directory served under /ui.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        /// Enable the add/remove resource endpoints.
        #[arg(long)]
        allow_mutations: bool,
        #[arg(long, default_value_t = 1800)]
        session_ttl_secs: u64,
    },
    /// Run the interleaved insert / browse / reconfigure workload.
    Bench {
        /// Collection document with an optional `workload` object.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EngineChoice::Both)]
        engine: EngineChoice,
        /// Run both engines in lockstep with differential checks.
        #[arg(long)]
        validate: bool,
        /// Write records here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Synthetic collection size.
        #[arg(long)]
        resources: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        round_size: Option<usize>,
        #[arg(long)]
        browse_factor: Option<f64>,
        #[arg(long)]
        reconfig_factor: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Automaton,
    Inverted,
    Both,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Serve {
            port,
            collection,
            ui_dir,
            allow_mutations,
            session_ttl_secs,
        } => {
            let state = AppState::new(Config {
                session_ttl: Duration::from_secs(session_ttl_secs),
                allow_mutations,
                ui_dir,
                ..Config::default()
            });
            if let Some(path) = collection {
                let id = state.add_collection(&CollectionDocument::read(&path)?)?;
                eprintln!("loaded {} as {id}", path.display());
            }
            let addr = bind_address(port);
            eprintln!("listening on http://{addr}");
            tokio::runtime::Runtime::new()?.block_on(serve(state, &addr))?;
            Ok(())
        }
        Command::Bench {
            spec,
            engine,
            validate,
            csv,
            resources,
            seed,
            round_size,
            browse_factor,
            reconfig_factor,
        } => {
            let mut spec = match spec {
                Some(path) => WorkloadSpec::read(path)?,
                None => WorkloadSpec::synthetic(resources.unwrap_or(5000), seed.unwrap_or(1)),
            };
            if let Some(n) = resources {
                match &mut spec.source {
                    Source::Synthetic(s) => s.resources = n,
                    _ => return Err("--resources only applies to synthetic collections".into()),
                }
            }
            if let Some(seed) = seed {
                spec.seed = seed;
                if let Source::Synthetic(s) = &mut spec.source {
                    s.seed = seed;
                }
            }
            spec.insertion_round_size = round_size.unwrap_or(spec.insertion_round_size);
            spec.browse_factor = browse_factor.unwrap_or(spec.browse_factor);
            spec.reconfig_factor = reconfig_factor.unwrap_or(spec.reconfig_factor);

            let records: Vec<BenchRecord> = if validate {
                let (mut a, b) = bench::run_validated(&spec)?;
                a.extend(b);
                a
            } else {
                let mut all = Vec::new();
                for (choice, name) in [
                    (EngineChoice::Automaton, "automaton"),
                    (EngineChoice::Inverted, "inverted"),
                ] {
                    if engine == choice || engine == EngineChoice::Both {
                        all.extend(bench::run(&spec, name)?);
                    }
                }
                all
            };
            match csv {
                Some(path) => {
                    bench::emit_csv(&records, &path)?;
                    eprintln!("wrote {} records to {}", records.len(), path.display());
                }
                None => bench::write_csv(&records, std::io::stdout().lock())?,
            }
            Ok(())
        }
    }
}
