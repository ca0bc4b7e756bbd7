//! `pmrank`: minimal-rank analysis of partial matrices from `.pmx` files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pmrank::error::Error;
use pmrank::matrix::ExactMatrix;
use pmrank::minrank::{
    self, fmr_report, mr_b, mr_bruteforce, zero_case_mr, MrMethod, MrValue, RankReport,
    DEFAULT_SEARCH_BUDGET,
};
use pmrank::partial::{BlockPartialMatrix, PartialMatrix};
use pmrank::patterns::{bipartite_graph, is_triangular, recognize_cycle_pattern};
use pmrank::pmx;
use pmrank::report::{CompletionSidecar, ReportDocument};

#[derive(Parser)]
#[command(
    name = "pmrank",
    version,
    about = "Exact minimal-rank analysis of partial matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the pattern: triangularity, cycles, chordality.
    Analyze(AnalyzeArgs),
    /// Compute minimal-rank quantities (tmr, mr, mr_b, fmr).
    Rank(RankArgs),
    /// Build a certified minimal-rank completion of a cycle pattern.
    Construct(ConstructArgs),
    /// Check a completion against a pattern and report its exact rank.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Emit the bipartite graph in DOT format instead of a report.
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RankArgs {
    file: PathBuf,
    /// Triangular minimal rank.
    #[arg(long)]
    tmr: bool,
    /// Exact minimal rank (brute force or closed form).
    #[arg(long)]
    mr: bool,
    /// b-fold minimal rank for this fold factor; repeatable.
    #[arg(long = "mrb", value_name = "B")]
    mrb: Vec<usize>,
    /// Fractional minimal rank (exact or interval bounds).
    #[arg(long)]
    fmr: bool,
    /// Largest fold factor used for fmr bounds.
    #[arg(long, default_value_t = 3)]
    bmax: usize,
    /// Brute-force search budget (completions per search); defaults to
    /// PMRANK_BUDGET or 2^24.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    file: PathBuf,
    /// Write the completion here (plus a `.json` sidecar with the rank);
    /// stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    pattern: PathBuf,
    completion: PathBuf,
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (`pmrank ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Rank(args) => cmd_rank(&args),
        Command::Construct(args) => cmd_construct(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

// 0 success, 2 parse/contract, 3 budget, 4 mathematical obstruction
fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::BudgetExceeded { .. } => ExitCode::from(3),
        Error::NotEnumerable
        | Error::EigenvalueObstruction(_)
        | Error::NotACycle
        | Error::ZeroEntry { .. }
        | Error::NoZeroEntry
        | Error::Singular
        | Error::SingularBlock { .. }
        | Error::ConstructionRankFailure(_) => ExitCode::from(4),
        _ => ExitCode::from(2),
    }
}

fn load(path: &Path) -> Result<PartialMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    pmx::parse(&text)
}

fn default_budget(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| {
            std::env::var("PMRANK_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_SEARCH_BUDGET)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode, Error> {
    let a = load(&args.file)?;
    if args.dot {
        print!("{}", bipartite_graph(a.pattern()).to_dot());
        return Ok(ExitCode::SUCCESS);
    }
    let doc = ReportDocument::new(&args.file.display().to_string(), &a).with_classification(&a);
    if args.json {
        println!("{}", doc.to_json());
    } else {
        let c = doc.classification.as_ref().expect("classification present");
        println!("file: {}", doc.input.file);
        println!("field: {}", doc.input.field);
        println!(
            "size: {}x{} with {} known entries",
            doc.input.rows, doc.input.cols, doc.input.knowns
        );
        match c.cycle_n {
            Some(n) => println!("pattern: {} (n={n})", c.kind),
            None => println!("pattern: {}", c.kind),
        }
        println!(
            "bipartite chordal: {}{}",
            c.bipartite_chordal,
            if c.chordality_exhaustive {
                ""
            } else {
                " (budget hit, not exhaustive)"
            }
        );
        for cycle in &c.minimal_cycles {
            println!("minimal cycle: {}", cycle.join(" "));
        }
        println!(
            "maximal triangular subpatterns: {}{}",
            c.maximal_triangular_count,
            if c.maximal_triangular_exhaustive {
                ""
            } else {
                " (budget hit, not exhaustive)"
            }
        );
        if let Some(list) = &c.maximal_triangular {
            for p in list {
                let cells: Vec<String> = p.iter().map(|(i, j)| format!("({i},{j})")).collect();
                println!("  {}", cells.join(" "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rank(args: &RankArgs) -> Result<ExitCode, Error> {
    let a = load(&args.file)?;
    let budget = default_budget(args.budget);
    let want_fmr = args.fmr || (!args.tmr && !args.mr && args.mrb.is_empty());

    let mut report = if want_fmr {
        fmr_report(&a, args.bmax, budget)?
    } else {
        let mut r = RankReport::default();
        if args.tmr {
            let outcome = minrank::tmr(&a, pmrank::patterns::DEFAULT_NODE_BUDGET)?;
            r.tmr = Some(outcome.value);
            r.tmr_exhaustive = outcome.exhaustive;
            r.tmr_witness = outcome.witness;
        }
        r
    };

    if args.mr && report.mr.is_none() {
        report.mr = Some(exact_mr(&a, budget, &mut report)?);
    }
    for &b in &args.mrb {
        if let std::collections::btree_map::Entry::Vacant(e) = report.mr_b.entry(b) {
            // an explicitly requested fold factor surfaces its budget error
            e.insert(mr_b(&a, b, budget)?.rank);
        }
    }
    report.verify(&a)?;

    let doc = ReportDocument::new(&args.file.display().to_string(), &a).with_ranks(&report);
    if args.json {
        println!("{}", doc.to_json());
    } else {
        print_rank_summary(&report);
    }
    Ok(ExitCode::SUCCESS)
}

// Exact minimal rank outside fmr_report's dispatch: closed forms over any
// field, brute force over prime fields.
fn exact_mr(a: &PartialMatrix, budget: u64, report: &mut RankReport) -> Result<MrValue, Error> {
    if is_triangular(a.pattern()) {
        let value = minrank::tmr_exact(a, pmrank::patterns::DEFAULT_NODE_BUDGET)?;
        return Ok(MrValue {
            value,
            method: MrMethod::TriangularFormula,
        });
    }
    if recognize_cycle_pattern(a.pattern()).is_some() {
        if a.values().any(|(_, v)| v.is_zero()) {
            let (value, witness) = zero_case_mr(a)?;
            report.witnesses.push(minrank::Witness {
                label: "zero-cycle completion".into(),
                claimed_rank: value,
                completion: witness,
            });
            return Ok(MrValue {
                value,
                method: MrMethod::ZeroCycle,
            });
        }
        let (witness, value) = minrank::nonzero_cycle_mr_completion(a)?;
        report.witnesses.push(minrank::Witness {
            label: "cycle completion".into(),
            claimed_rank: value,
            completion: witness,
        });
        return Ok(MrValue {
            value,
            method: MrMethod::CycleInvariant,
        });
    }
    if a.spec().is_rationals() {
        eprintln!(
            "hint: exact mr over the rationals needs a formula-backed pattern; \
             use --tmr for a lower bound and --fmr with --bmax for interval bounds"
        );
        return Err(Error::NotEnumerable);
    }
    let result = mr_bruteforce(a, budget)?;
    report.witnesses.push(minrank::Witness {
        label: "brute-force minimizer".into(),
        claimed_rank: result.rank,
        completion: result.witness,
    });
    Ok(MrValue {
        value: result.rank,
        method: MrMethod::BruteForce,
    })
}

fn print_rank_summary(report: &RankReport) {
    if let Some(tmr) = report.tmr {
        println!(
            "tmr: {tmr}{}",
            if report.tmr_exhaustive {
                " (exact)"
            } else {
                " (lower bound, budget hit)"
            }
        );
    }
    if let Some(mr) = &report.mr {
        let method = match mr.method {
            MrMethod::BruteForce => "brute force",
            MrMethod::TriangularFormula => "triangular formula",
            MrMethod::CycleInvariant => "cycle invariant",
            MrMethod::ZeroCycle => "zero-entry cycle",
        };
        println!("mr: {} (exact, {method})", mr.value);
    }
    for (b, value) in &report.mr_b {
        println!("mr_{b}: {value} (exact, search)");
    }
    for b in &report.mr_b_skipped {
        println!("mr_{b}: skipped (budget)");
    }
    if let Some(fmr) = &report.fmr_exact {
        println!("fmr: {fmr} (exact)");
    }
    if let Some((lo, hi)) = &report.fmr_bounds {
        println!("fmr: in [{lo}, {hi}]");
    }
    for w in &report.witnesses {
        println!("witness ({}): rank {} verified", w.label, w.claimed_rank);
    }
    for note in &report.notes {
        println!("note: {note}");
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<ExitCode, Error> {
    let a = load(&args.file)?;
    let (completion, rank) = construct_any_cycle(&a)?;
    let text = pmx::write_matrix(&completion);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            let sidecar_path = sidecar_path(path);
            std::fs::write(&sidecar_path, CompletionSidecar::new(rank).to_json())?;
            println!("wrote {} (rank {rank})", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("rank {rank}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

// Scalar cycles (possibly permuted) first, then canonical block-cycle
// layouts with k = rows/n.
fn construct_any_cycle(a: &PartialMatrix) -> Result<(ExactMatrix, usize), Error> {
    if recognize_cycle_pattern(a.pattern()).is_some() {
        if a.values().any(|(_, v)| v.is_zero()) {
            let (rank, witness) = zero_case_mr(a)?;
            return Ok((witness, rank));
        }
        let (witness, rank) = minrank::nonzero_cycle_mr_completion(a)?;
        return Ok((witness, rank));
    }
    if let Some(block) = detect_block_cycle(a) {
        return minrank::complete_block_cycle(&block);
    }
    Err(Error::NotACycle)
}

fn detect_block_cycle(a: &PartialMatrix) -> Option<BlockPartialMatrix> {
    let size = a.rows();
    if size != a.cols() || size == 0 {
        return None;
    }
    'candidates: for n in 3..=size {
        if !size.is_multiple_of(n) {
            continue;
        }
        let k = size / n;
        // known cells must be exactly the cycle blocks
        let mut expected = std::collections::BTreeSet::new();
        for bi in 1..=n {
            for bj in 1..=n {
                let on_cycle = bi == bj || bj == bi + 1 || (bi == n && bj == 1);
                if !on_cycle {
                    continue;
                }
                for r in 1..=k {
                    for c in 1..=k {
                        expected.insert(((bi - 1) * k + r, (bj - 1) * k + c));
                    }
                }
            }
        }
        let actual: std::collections::BTreeSet<(usize, usize)> = a.pattern().iter().collect();
        if actual != expected {
            continue 'candidates;
        }
        let block_at = |bi: usize, bj: usize| -> ExactMatrix {
            ExactMatrix::from_fn(a.spec(), k, k, |r, c| {
                a.value(((bi - 1) * k + r + 1, (bj - 1) * k + c + 1))
                    .expect("cycle block cell")
                    .clone()
            })
        };
        let diagonal: Vec<ExactMatrix> = (1..=n).map(|i| block_at(i, i)).collect();
        let superdiagonal: Vec<ExactMatrix> = (1..n).map(|i| block_at(i, i + 1)).collect();
        let corner = block_at(n, 1);
        if let Ok(block) = BlockPartialMatrix::cycle(a.spec(), diagonal, superdiagonal, corner) {
            return Some(block);
        }
    }
    None
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let pattern = load(&args.pattern)?;
    let completion_text = std::fs::read_to_string(&args.completion)?;
    let completion = pmx::parse_matrix(&completion_text)?;
    if completion.spec() != pattern.spec() {
        return Err(Error::FieldMismatch {
            left: pattern.spec(),
            right: completion.spec(),
        });
    }
    if completion.rows() != pattern.rows() || completion.cols() != pattern.cols() {
        return Err(Error::ShapeMismatch {
            expected: (pattern.rows(), pattern.cols()),
            got: (completion.rows(), completion.cols()),
        });
    }
    let violations = pattern.violations(&completion)?;
    let rank = completion.rank();
    if !violations.is_empty() {
        for (i, j) in &violations {
            println!("violation: entry ({i}, {j}) disagrees with the known value");
        }
        println!(
            "verdict: not a completion ({} violations)",
            violations.len()
        );
        return Ok(ExitCode::from(2));
    }
    println!("verdict: ok");
    println!("rank: {rank}");
    // a sidecar from `construct` may carry a rank claim
    let sidecar = sidecar_path(&args.completion);
    if let Ok(text) = std::fs::read_to_string(&sidecar) {
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
            if let Some(claimed) = value.get("rank").and_then(|v| v.as_u64()) {
                if claimed as usize != rank {
                    println!("claim mismatch: sidecar says rank {claimed}, actual rank is {rank}");
                    return Ok(ExitCode::from(2));
                }
                println!("claimed rank matches");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
