//! `npshare`: deal and reconstruct shares, check access structures, and run
//! the security experiments.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 I/O error,
//! 4 reconstruction returned ⊥, 5 shares from different dealings.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use config::Config;
use npshare_core::commitments::find_opening;
use npshare_core::harness::equivalence::{sem_to_ind, ZeroShareSimulator};
use npshare_core::harness::hybrid::{hybrid_locate, CommitmentSource, ListDistinguisher};
use npshare_core::harness::reduction::dprime_game;
use npshare_core::harness::{ind_game, sem_game, GameConfig, HarnessError};
use npshare_core::scheme::{recon, setup, share_parse, share_serialize, ReconError, Scheme};
use npshare_core::structures::{check_monotone, AccessStructure, CheckMode, InnerWitness, PartySet};
use npshare_core::we::SecretMessage;

#[derive(Parser)]
#[command(name = "npshare", version, about = "Secret sharing for monotone NP access structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deal shares of a secret file.
    Deal {
        #[arg(long)]
        config: PathBuf,
        /// File holding the raw secret bytes.
        #[arg(long)]
        secret: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct from share files; writes the secret bytes.
    Recon {
        #[arg(long = "share", required = true)]
        shares: Vec<PathBuf>,
        /// Comma-separated parties of X; defaults to the parties of the shares.
        #[arg(long, value_delimiter = ',')]
        parties: Option<Vec<usize>>,
        /// JSON inner witness; defaults to the empty witness.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepted for uniformity; reconstruction is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Inspect access structures.
    Structure {
        #[command(subcommand)]
        command: StructureCommand,
    },
    /// Run a security experiment and emit its report.
    Experiment {
        kind: ExperimentKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StructureCommand {
    /// Validate a structure and test monotonicity.
    Check {
        /// A structure file or a config containing one.
        #[arg(long)]
        config: PathBuf,
        /// Sampled pairs to test; exhaustive when absent.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Ind,
    Sem,
    Dprime,
    Hybrid,
    Equiv,
}

enum Failure {
    Config(String),
    Io(String),
    Bottom,
    Mixed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
            Failure::Bottom => 4,
            Failure::Mixed => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) => format!("error: {m}"),
            Failure::Io(m) => format!("i/o error: {m}"),
            Failure::Bottom => "reconstruction failed: the witness does not attest that X is qualified".into(),
            Failure::Mixed => "the shares come from different dealings".into(),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read(path)?).map_err(|_| Failure::Config(format!("{}: not UTF-8", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn load_config(path: &Path) -> Result<Config> {
    Config::parse(&read_text(path)?).map_err(Failure::Config)
}

fn harness_failure(e: HarnessError) -> Failure {
    Failure::Config(e.to_string())
}

fn deal(config: &Path, secret: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let cfg = load_config(config)?;
    let secret = SecretMessage::new(read(secret)?).map_err(|e| Failure::Config(e.to_string()))?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dealing =
        setup(cfg.structure.clone(), &secret, &cfg.params(), &mut rng).map_err(|e| Failure::Config(e.to_string()))?;
    fs::create_dir_all(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let public = serde_json::to_vec_pretty(&dealing.public()).expect("dealing serializes");
    write(&out.join("dealing.json"), &public)?;
    for share in &dealing.shares {
        write(&out.join(format!("share_{}.json", share.party)), &share_serialize(share))?;
    }
    Ok(())
}

fn recon_cmd(paths: &[PathBuf], parties: Option<&[usize]>, witness: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let mut shares = Vec::with_capacity(paths.len());
    for p in paths {
        let share = share_parse(&read(p)?).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
        shares.push(share);
    }
    let n = shares[0].header.n;
    let members: Vec<usize> = match parties {
        Some(ps) => ps.to_vec(),
        None => shares.iter().map(|s| s.party).collect(),
    };
    let x = PartySet::new(n, members).map_err(|e| Failure::Config(e.to_string()))?;
    let w: InnerWitness = match witness {
        Some(p) => serde_json::from_slice(&read(p)?).map_err(|e| Failure::Config(format!("invalid witness: {e}")))?,
        None => InnerWitness::Empty,
    };
    match recon(&shares, &x, &w) {
        Ok(Some(secret)) => emit(out, secret.as_bytes()),
        Ok(None) => Err(Failure::Bottom),
        Err(ReconError::MixedDealing) => Err(Failure::Mixed),
        Err(e) => Err(Failure::Config(e.to_string())),
    }
}

fn structure_check(path: &Path, samples: Option<usize>, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let text = read_text(path)?;
    let structure: AccessStructure = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(_) => Config::parse(&text).map_err(Failure::Config)?.structure,
    };
    structure.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let mode = match samples {
        Some(trials) => CheckMode::Sampled { trials },
        None => CheckMode::Exhaustive,
    };
    let monotone = check_monotone(&structure, mode, seed.unwrap_or(0)).map_err(|e| Failure::Config(e.to_string()))?;
    let report = json!({
        "kind": structure.kind().name(),
        "n": structure.n(),
        "digest": hex_digest(&structure.digest()),
        "monotone": monotone,
        "mode": if samples.is_some() { "sampled" } else { "exhaustive" },
    });
    emit(out, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()).as_bytes())
}

fn hex_digest(d: &[u8; 32]) -> String {
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// Outputs 1 iff the sample at `position` opens to its own index.
struct OpeningDetector<'a> {
    scheme: &'a Scheme,
    position: usize,
}

impl ListDistinguisher for OpeningDetector<'_> {
    fn distinguish(&self, list: &[Vec<u8>], _: &mut dyn rand::RngCore) -> bool {
        let crs = self.scheme.crs();
        let Ok(bits) = npshare_core::bits::BitString::from_bytes(&list[self.position - 1], crs.value_bits() * crs.block_bits())
        else {
            return false;
        };
        let Ok(com) = npshare_core::commitments::Commitment::from_bits(bits, crs) else {
            return false;
        };
        matches!(find_opening(self.position, crs, &com), Ok(Some(_)))
    }
}

fn experiment(kind: ExperimentKind, config: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let cfg = load_config(config)?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let trials = cfg.trials.ok_or_else(|| Failure::Config("config needs \"trials\"".into()))?;
    let game = GameConfig {
        trials,
        master_seed: seed,
        delta: cfg.delta(),
        exec: cfg.execution.unwrap_or_default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scheme = Scheme::new(cfg.structure.clone(), &cfg.params(), &mut rng).map_err(|e| Failure::Config(e.to_string()))?;
    let target = cfg.target.unwrap_or_default();
    let f = move |s: &[u8]| target.apply(s);
    let (json, table) = match kind {
        ExperimentKind::Ind => {
            let r = ind_game(&scheme, &cfg.sampler().map_err(Failure::Config)?, &*cfg.distinguisher(), &game)
                .map_err(harness_failure)?;
            (r.to_json(), r.table())
        }
        ExperimentKind::Sem => {
            let learner = cfg.learner().map_err(Failure::Config)?;
            let sim = ZeroShareSimulator {
                scheme: &scheme,
                learner: &*learner,
            };
            let r = sem_game(&scheme, &cfg.sampler().map_err(Failure::Config)?, &*learner, &sim, &f, &game)
                .map_err(harness_failure)?;
            (r.to_json(), r.table())
        }
        ExperimentKind::Dprime => {
            let eps = cfg.epsilon.ok_or_else(|| Failure::Config("dprime needs \"epsilon\"".into()))?;
            let r = dprime_game(&scheme, &cfg.sampler().map_err(Failure::Config)?, &*cfg.distinguisher(), eps, &game)
                .map_err(harness_failure)?;
            (r.to_json(), r.table())
        }
        ExperimentKind::Hybrid => {
            let n = scheme.n();
            let position = cfg.position.unwrap_or(1);
            if position == 0 || position > n {
                return Err(Failure::Config(format!("position {position} outside 1..={n}")));
            }
            if scheme.crs().k() > npshare_core::commitments::MAX_ENUM_SEED_BITS {
                return Err(Failure::Config("hybrid needs k small enough to enumerate openings".into()));
            }
            let d = OpeningDetector {
                scheme: &scheme,
                position,
            };
            let source = CommitmentSource { scheme: &scheme };
            let (r, _) = hybrid_locate(&d, n, &game, &source).map_err(harness_failure)?;
            let table = format!(
                "experiment  hybrid\ntrials      {}\nindex       {}\nposition    {}\ngap         {:.4}\ntotal gap   {:.4}\nradius      {:.4}\n",
                r.trials,
                r.index,
                r.position,
                r.located_gap(),
                r.total_gap,
                r.radius
            );
            (serde_json::to_string_pretty(&r).unwrap(), table)
        }
        ExperimentKind::Equiv => {
            let sampler = cfg.sampler().map_err(Failure::Config)?;
            let learner = cfg.learner().map_err(Failure::Config)?;
            let sim = ZeroShareSimulator {
                scheme: &scheme,
                learner: &*learner,
            };
            let sem = sem_game(&scheme, &sampler, &*learner, &sim, &f, &game).map_err(harness_failure)?;
            let (samp2, d2) = sem_to_ind(&sampler, &*learner, &f);
            let ind = ind_game(&scheme, &samp2, &d2, &game).map_err(harness_failure)?;
            let table = format!("{}\n{}", sem.table(), ind.table());
            let json = serde_json::to_string_pretty(&json!({"sem": sem, "ind": ind, "difference": (sem.advantage - ind.advantage).abs()}))
                .unwrap();
            (json, table)
        }
    };
    eprint!("{table}");
    emit(out, format!("{json}\n").as_bytes())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Deal {
            config,
            secret,
            out,
            seed,
        } => deal(&config, &secret, &out, seed),
        Command::Recon {
            shares,
            parties,
            witness,
            out,
            seed: _,
        } => recon_cmd(&shares, parties.as_deref(), witness.as_deref(), out.as_deref()),
        Command::Structure {
            command: StructureCommand::Check {
                config,
                samples,
                seed,
                out,
            },
        } => structure_check(&config, samples, seed, out.as_deref()),
        Command::Experiment { kind, config, seed, out } => experiment(kind, &config, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
