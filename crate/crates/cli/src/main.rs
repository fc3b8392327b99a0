use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segre_kit::commands::{cmd_analyze, cmd_check_map, cmd_jets, cmd_segre, CheckMapArgs, Outcome};
use segre_kit::demo::{self, DemoMap};
use segre_kit::error::KitError;
use segre_kit::report::AnalyzeOptions;

#[derive(Parser)]
#[command(
    name = "segre-kit",
    version,
    about = "Segre mappings, nondegeneracy and finite type of real submanifolds of C^N"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full report for one or more manifold files.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Truncation order T.
        #[arg(long)]
        order: Option<u32>,
        /// Largest k tried for k-nondegeneracy [default: N+2].
        #[arg(long)]
        kmax: Option<usize>,
        /// Largest bracket depth [default: 2(N+1)].
        #[arg(long)]
        depthmax: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include wall-clock time (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Print gamma and the iterated Segre mappings v1..vJ.
    Segre {
        file: PathBuf,
        #[arg(short = 'j', default_value_t = 3)]
        j: usize,
        /// Z-indices (1-based) to solve for, comma separated.
        #[arg(long, value_delimiter = ',')]
        gamma_vars: Option<Vec<usize>>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Check that a map sends the source manifold into the target.
    CheckMap {
        map: PathBuf,
        source: PathBuf,
        target: PathBuf,
        /// Also report invertibility, finiteness and CR transversality.
        #[arg(long)]
        classify: bool,
        /// Compare K-jets with another map.
        #[arg(long)]
        jets_vs: Option<PathBuf>,
        #[arg(short = 'K', long = "k", default_value_t = 1)]
        k: u32,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Group maps of source -> target by their K-jets.
    Jets {
        #[arg(required = true)]
        maps: Vec<PathBuf>,
        #[arg(short = 'K', long = "k", value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long)]
        source: PathBuf,
        /// Defaults to the source.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Annotated walkthrough of the Lewy computation and the reflection identity.
    DemoLewy {
        /// identity, dilation=L, rotation=U, isotropy=A, or a map file.
        #[arg(long, default_value = "identity")]
        map: String,
        #[arg(long, default_value_t = demo::DEFAULT_ORDER)]
        order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<Outcome, KitError> {
    match cli.cmd {
        Cmd::Analyze { files, order, kmax, depthmax, json, seed, timing } => {
            let opts = AnalyzeOptions { order, kmax, depth_max: depthmax, seed, timing };
            Ok(cmd_analyze(&files, &opts, json))
        }
        Cmd::Segre { file, j, gamma_vars, order, json } => cmd_segre(&file, j, gamma_vars.as_deref(), order, json),
        Cmd::CheckMap { map, source, target, classify, jets_vs, k, order, seed, json } => {
            cmd_check_map(&CheckMapArgs {
                map: &map,
                source: &source,
                target: &target,
                classify,
                jets_vs: jets_vs.as_deref(),
                k,
                order,
                seed,
                json,
            })
        }
        Cmd::Jets { maps, k, source, target, order, seed, json } => {
            cmd_jets(&maps, &k, &source, target.as_deref(), order, seed, json)
        }
        Cmd::DemoLewy { map, order, seed } => {
            let m = DemoMap::parse(&map)?;
            Ok(Outcome { stdout: demo::run(&m, order, seed)?, stderr: String::new(), code: 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            eprint!("{}", o.stderr);
            let _ = std::io::stdout().flush();
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
