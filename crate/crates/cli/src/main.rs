//! Command-line pipeline for constructing and verifying almost Steiner
//! systems.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 construction failure,
//! 64 usage error, 65 malformed input file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use almost_steiner::augmenter::{augment, AugmentConfig, ConflictPolicy};
use almost_steiner::error::Error;
use almost_steiner::hypergraph::{leave_hypergraph, Design, LeaveHypergraph};
use almost_steiner::io::{design_to_string, read_design};
use almost_steiner::packer::{
    epsilon_estimate, greedy_pack, leave_profile, nibble_pack, PackingConfig, PassOrder, Strategy,
};
use almost_steiner::verifier::{
    brute_force_design_search, design_stats, verify_multiplicity, LambdaSet, SearchOutcome,
    VerifyOutcome,
};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY: u8 = 1;
const EXIT_CONSTRUCT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_MALFORMED: u8 = 65;

#[derive(Parser)]
#[command(name = "almost-steiner", version, about = "Build and verify t-(n,k,{1,2})-designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Greedy,
    Nibble,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PassOrderArg {
    RandomPermutation,
    RankOrder,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConflictPolicyArg {
    ChosenOnly,
    AllSampled,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    t: u32,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    bite_fraction: f64,
    #[arg(long, default_value_t = 10)]
    rounds: u32,
    #[arg(long, value_enum, default_value_t = PassOrderArg::RandomPermutation)]
    pass_order: PassOrderArg,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Replace the derived sampling probability n^(t-k+epsilon/2).
    #[arg(long)]
    p_override: Option<f64>,
    /// Replace the disjoint-family target floor(n^(epsilon/3)).
    #[arg(long)]
    q_target: Option<u64>,
    #[arg(long, default_value_t = 10)]
    max_retries: u32,
    #[arg(long, value_enum, default_value_t = ConflictPolicyArg::ChosenOnly)]
    conflict_policy: ConflictPolicyArg,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Cap on worker threads; results are independent of its value.
    #[arg(long, default_value_t = 1)]
    threads: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: pack, augment, verify, write.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        pack: PackArgs,
        #[command(flatten)]
        aug: AugmentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Phase I only: produce a t-(n,k,{0,1})-design.
    Pack {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        pack: PackArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Phase II only: augment a partial design file.
    Augment {
        #[arg(long = "in", value_name = "FILE")]
        in_path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        aug: AugmentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check that every t-set's multiplicity belongs to a lambda set.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        in_path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        threads: u32,
    },
    /// Edge-count statistics and multiplicity histogram of a design file.
    Stats {
        #[arg(long = "in", value_name = "FILE")]
        in_path: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact backtracking search for a tiny t-(n,k,lambda)-design.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<u64>,
        #[arg(long, default_value_t = 5_000_000)]
        max_nodes: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli.command))
}

fn run(cmd: Command) -> u8 {
    match cmd {
        Command::Construct { params, pack, aug, output } => cmd_construct(params, pack, aug, output),
        Command::Pack { params, pack, output } => cmd_pack(params, pack, output),
        Command::Augment { in_path, seed, aug, output } => cmd_augment(in_path, seed, aug, output),
        Command::Verify { in_path, lambda, threads } => cmd_verify(in_path, lambda, threads),
        Command::Stats { in_path, report } => cmd_stats(in_path, report),
        Command::Oracle { params, lambda, max_nodes, out } => cmd_oracle(params, lambda, max_nodes, out),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ConstructionFailure { .. } => EXIT_CONSTRUCT,
        Error::Malformed { .. } | Error::Io(_) => EXIT_MALFORMED,
        _ => EXIT_USAGE,
    }
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    if let Error::ConstructionFailure { blocked, per_retry_blocked, .. } = err {
        for (i, b) in per_retry_blocked.iter().enumerate() {
            println!("blocked_retry_{i}={b}");
        }
        println!("blocked_count={}", blocked.len());
        for b in blocked {
            let ids: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            println!("blocked_edge={}", ids.join(" "));
        }
    }
    exit_code_for(err)
}

fn check_constructive_params(n: u32, k: u32, t: u32) -> Result<(), Error> {
    if !(n > k && k > t && t >= 2) {
        return Err(Error::Parameter(format!("need n > k > t >= 2, got n={n} k={k} t={t}")));
    }
    Ok(())
}

fn check_threads(threads: u32) -> Result<(), Error> {
    if threads < 1 {
        return Err(Error::Parameter("--threads must be >= 1".into()));
    }
    Ok(())
}

fn packing_config(pack: &PackArgs) -> PackingConfig {
    PackingConfig {
        strategy: match pack.strategy {
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::Nibble => Strategy::Nibble,
        },
        seed: pack.seed,
        nibble_bite_fraction: pack.bite_fraction,
        nibble_rounds: pack.rounds,
        greedy_pass_order: match pack.pass_order {
            PassOrderArg::RandomPermutation => PassOrder::RandomPermutation,
            PassOrderArg::RankOrder => PassOrder::RankOrder,
        },
    }
}

fn augment_config(aug: &AugmentArgs, master_seed: u64) -> AugmentConfig {
    AugmentConfig {
        epsilon: aug.epsilon,
        p_override: aug.p_override,
        q_target: aug.q_target,
        max_retries: aug.max_retries,
        master_seed,
        conflict_policy: match aug.conflict_policy {
            ConflictPolicyArg::ChosenOnly => ConflictPolicy::ChosenOnly,
            ConflictPolicyArg::AllSampled => ConflictPolicy::AllSampled,
        },
    }
}

fn run_pack(n: u32, k: u32, t: u32, cfg: &PackingConfig) -> Result<Design, Error> {
    match cfg.strategy {
        Strategy::Greedy => greedy_pack(n, k, t, cfg),
        Strategy::Nibble => nibble_pack(n, k, t, cfg),
    }
}

fn write_design_file(path: &Path, d: &Design, t: u32) -> Result<(), Error> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(design_to_string(d, t).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn emit_report(report: &str, dest: &Option<PathBuf>) -> Result<(), Error> {
    match dest {
        Some(path) => {
            let mut f = File::create(path)?;
            f.write_all(report.as_bytes())?;
        }
        None => print!("{report}"),
    }
    Ok(())
}

fn read_design_file(path: &Path) -> Result<(Design, u32), Error> {
    let file = File::open(path)?;
    read_design(BufReader::new(file))
}

fn leave_report(leave: &LeaveHypergraph, t: u32) -> Result<String, Error> {
    let profile = leave_profile(leave)?;
    let mut out = profile.format_report();
    out.push_str(&format!("epsilon_estimate={:.6}\n", epsilon_estimate(&profile, t)));
    Ok(out)
}

fn cmd_construct(params: ParamArgs, pack: PackArgs, aug: AugmentArgs, output: OutputArgs) -> u8 {
    let (n, k, t) = (params.n, params.k, params.t);
    if let Err(e) = check_constructive_params(n, k, t).and_then(|_| check_threads(output.threads)) {
        return fail(&e);
    }
    let pcfg = packing_config(&pack);
    let acfg = augment_config(&aug, pack.seed);

    let mut report = format!(
        "n={n}\nk={k}\nt={t}\nstrategy={:?}\nseed={}\nepsilon={}\n",
        pcfg.strategy, pack.seed, aug.epsilon
    );

    let partial = match run_pack(n, k, t, &pcfg) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let leave = match leave_hypergraph(&partial, t, false) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    report.push_str(&format!("partial_edge_count={}\n", partial.edge_count()));
    match leave_report(&leave, t) {
        Ok(s) => report.push_str(&s),
        Err(e) => return fail(&e),
    }

    let (combined, arep) = match augment(&partial, &leave, &acfg) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    report.push_str(&arep.format_report());

    // Re-verify before writing: the verifier is the trust anchor.
    let lam = LambdaSet::new([1, 2]).expect("nonempty");
    match verify_multiplicity(&combined, t, &lam) {
        Ok(VerifyOutcome::Pass) => {}
        Ok(VerifyOutcome::Fail { witness, count }) => {
            eprintln!("internal verification failed: t-set {witness:?} has multiplicity {count}");
            return EXIT_VERIFY;
        }
        Err(e) => return fail(&e),
    }

    match design_stats(&combined, t) {
        Ok(s) => report.push_str(&s.format_report()),
        Err(e) => return fail(&e),
    }

    if let Err(e) = write_design_file(&output.out, &combined, t) {
        return fail(&e);
    }
    if let Err(e) = emit_report(&report, &output.report) {
        return fail(&e);
    }
    EXIT_OK
}

fn cmd_pack(params: ParamArgs, pack: PackArgs, output: OutputArgs) -> u8 {
    let (n, k, t) = (params.n, params.k, params.t);
    if let Err(e) = check_constructive_params(n, k, t).and_then(|_| check_threads(output.threads)) {
        return fail(&e);
    }
    let pcfg = packing_config(&pack);
    let d = match run_pack(n, k, t, &pcfg) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let leave = match leave_hypergraph(&d, t, false) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let mut report = format!("n={n}\nk={k}\nt={t}\nedge_count={}\n", d.edge_count());
    match leave_report(&leave, t) {
        Ok(s) => report.push_str(&s),
        Err(e) => return fail(&e),
    }
    if let Err(e) = write_design_file(&output.out, &d, t) {
        return fail(&e);
    }
    if let Err(e) = emit_report(&report, &output.report) {
        return fail(&e);
    }
    EXIT_OK
}

fn cmd_augment(in_path: PathBuf, seed: u64, aug: AugmentArgs, output: OutputArgs) -> u8 {
    if let Err(e) = check_threads(output.threads) {
        return fail(&e);
    }
    let (partial, t) = match read_design_file(&in_path) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    // Refuse inputs that are not {0,1}-designs.
    let lam01 = LambdaSet::new([0, 1]).expect("nonempty");
    match verify_multiplicity(&partial, t, &lam01) {
        Ok(VerifyOutcome::Pass) => {}
        Ok(VerifyOutcome::Fail { witness, count }) => {
            eprintln!("input is not a {{0,1}}-design: t-set {witness:?} has multiplicity {count}");
            return EXIT_VERIFY;
        }
        Err(e) => return fail(&e),
    }
    let leave = match leave_hypergraph(&partial, t, false) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let acfg = augment_config(&aug, seed);
    let (combined, arep) = match augment(&partial, &leave, &acfg) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    let lam12 = LambdaSet::new([1, 2]).expect("nonempty");
    match verify_multiplicity(&combined, t, &lam12) {
        Ok(VerifyOutcome::Pass) => {}
        Ok(VerifyOutcome::Fail { witness, count }) => {
            eprintln!("internal verification failed: t-set {witness:?} has multiplicity {count}");
            return EXIT_VERIFY;
        }
        Err(e) => return fail(&e),
    }
    if let Err(e) = write_design_file(&output.out, &combined, t) {
        return fail(&e);
    }
    if let Err(e) = emit_report(&arep.format_report(), &output.report) {
        return fail(&e);
    }
    EXIT_OK
}

fn cmd_verify(in_path: PathBuf, lambda: Vec<u64>, threads: u32) -> u8 {
    if let Err(e) = check_threads(threads) {
        return fail(&e);
    }
    let (d, t) = match read_design_file(&in_path) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    let lam = match LambdaSet::new(lambda) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    match verify_multiplicity(&d, t, &lam) {
        Ok(VerifyOutcome::Pass) => {
            println!("verified=true");
            EXIT_OK
        }
        Ok(VerifyOutcome::Fail { witness, count }) => {
            let ids: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
            println!("verified=false");
            println!("witness={}", ids.join(" "));
            println!("witness_count={count}");
            EXIT_VERIFY
        }
        Err(e) => fail(&e),
    }
}

fn cmd_stats(in_path: PathBuf, report: Option<PathBuf>) -> u8 {
    let (d, t) = match read_design_file(&in_path) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    match design_stats(&d, t) {
        Ok(s) => {
            if let Err(e) = emit_report(&s.format_report(), &report) {
                return fail(&e);
            }
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn cmd_oracle(params: ParamArgs, lambda: Vec<u64>, max_nodes: u64, out: Option<PathBuf>) -> u8 {
    let (n, k, t) = (params.n, params.k, params.t);
    let lam = match LambdaSet::new(lambda) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    match brute_force_design_search(n, k, t, &lam, max_nodes) {
        Ok(SearchOutcome::Found(d)) => {
            let text = design_to_string(&d, t);
            match out {
                Some(path) => {
                    if let Err(e) = write_design_file(&path, &d, t) {
                        return fail(&e);
                    }
                }
                None => print!("{text}"),
            }
            EXIT_OK
        }
        Ok(SearchOutcome::ProvenNonexistent) => {
            println!("result=proven_nonexistent");
            EXIT_CONSTRUCT
        }
        Ok(SearchOutcome::BudgetExhausted) => {
            println!("result=budget_exhausted");
            EXIT_CONSTRUCT
        }
        Err(e) => fail(&e),
    }
}
