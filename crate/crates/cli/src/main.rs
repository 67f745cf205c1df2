//! `hydra`: battles, duration functions, Ackermann values, normal forms,
//! coset membership with witnesses, witness words, distortion tables and
//! bound calculators, with stable text or JSON output.
//!
//! Exit codes: 0 ok, 1 not a member (membership queries only), 2 parse
//! error, 3 budget exceeded, 4 undecided.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hydra_core::budget::{DEFAULT_MAX_BITS, DEFAULT_MAX_STEPS};
use hydra_core::distortion::{self, OracleVerdict};
use hydra_core::hydra::{self, PhiError};
use hydra_core::parse::{parse_free_word, parse_gword, parse_hword, parse_hydra_word};
use hydra_core::solver::{self, CosetAnswer, CosetQuery, UndecidedReason};
use hydra_core::{ackermann, bounds, group, BudgetExceeded, EvalBudget, SolverBudget};

mod oracle_io;

#[derive(Parser)]
#[command(
    name = "hydra",
    version,
    about = "Hydra battles, subgroup membership and distortion"
)]
struct Cli {
    /// Cap on the bit-length of any produced integer.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BITS)]
    max_bits: u64,
    /// Cap on recursion/rewrite steps.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Emit JSON instead of text (errors become one-line JSON on stderr).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fight a battle, e.g. `battle "a2 a3 a1"`.
    Battle {
        /// The hydra: a positive word on the a-letters.
        word: String,
        /// Also emit the transcript as a word on the x-letters.
        #[arg(long)]
        trace: bool,
    },
    /// The battle duration H_k(n) for a_k^n, by recursion.
    Hk { k: u32, n: u64 },
    /// phi_k(n), the duration for theta^n(a_k), by recursion.
    Phi {
        k: u32,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// The Ackermann value A_k(n), or the iterate A_k^(l)(n).
    Ack {
        k: u32,
        n: u64,
        /// Apply A_k this many times instead of once.
        #[arg(long)]
        iter: Option<u64>,
    },
    /// Free-by-cyclic normal form of a word on the a-letters and t.
    Nf { word: String },
    /// Freely reduce a word on the x-letters; the reduced length is d_H.
    Hreduce { word: String },
    /// Decide whether t^r w lies in some coset H t^s; on success print the
    /// unique s and a verified witness word on the x-letters.
    Member {
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        #[arg(long)]
        word: String,
        /// Cap on the positive right-end candidates tried per piece.
        #[arg(long, default_value_t = 4096)]
        max_candidates: u64,
        /// Cap on recursion depth.
        #[arg(long, default_value_t = 64)]
        max_depth: u32,
    },
    /// Witness words: u_{k,n} of length H_k(n), or with --pair the equality
    /// of a length-(2n+4) ambient word with a length-(2 H_k(n) + 3) one.
    Witness {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        pair: bool,
    },
    /// Exact distortion table for H_k in G_k up to radius n-max.
    Distortion {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Upper-bound calculators.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Compare the solver against the exhaustive ball oracle on a grid of
    /// short queries; disagreements exit nonzero.
    OracleCheck(OracleCheckArgs),
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Exponent bound for one piece: kappa(k, l, n).
    Kappa { k: u32, l: u64, n: u64 },
    /// Exponent bound for a word of at most p pieces: K(k, l, p, n).
    BigK { k: u32, l: u64, p: u64, n: u64 },
    /// Witness-length bound for one piece: psi(k, l, n).
    Psi { k: u32, l: u64, n: u64 },
    /// Witness-length bound for a word of at most p pieces: Psi(k, l, p, n).
    BigPsi { k: u32, l: u64, p: u64, n: u64 },
    /// The explicit coefficients (D_k, E_k, F_k).
    Constants { k: u32 },
}

#[derive(Args)]
struct OracleCheckArgs {
    #[arg(long)]
    k: u32,
    /// Ball radius for the oracle.
    #[arg(long)]
    radius: u32,
    /// Check all reduced words up to this length over a_1..a_k.
    #[arg(long, default_value_t = 3)]
    max_wlen: u32,
    /// Check all `t`-exponents r with |r| <= this.
    #[arg(long, default_value_t = 2)]
    max_r: i64,
    /// Persist the materialised index to this file.
    #[arg(long)]
    save: Option<std::path::PathBuf>,
    /// Load the index from this file instead of enumerating.
    #[arg(long)]
    load: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

enum Failure {
    Parse(String),
    Budget(BudgetExceeded),
    NotMember,
    Undecided(String),
    Disagreement(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::NotMember | Failure::Disagreement(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Undecided(_) => 4,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            Failure::NotMember => "not_member",
            Failure::Disagreement(_) => "disagreement",
            Failure::Parse(_) => "parse_error",
            Failure::Budget(_) => "budget_exceeded",
            Failure::Undecided(_) => "undecided",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::NotMember => "not a member of any coset H t^s".into(),
            Failure::Disagreement(m) | Failure::Undecided(m) => m.clone(),
            Failure::Parse(m) => m.clone(),
            Failure::Budget(b) => b.to_string(),
        }
    }
}

impl From<BudgetExceeded> for Failure {
    fn from(b: BudgetExceeded) -> Self {
        Failure::Budget(b)
    }
}

impl From<hydra_core::parse::ParseError> for Failure {
    fn from(e: hydra_core::parse::ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

enum Output {
    /// Key/value payload: one `key: value` line per field, or one JSON object.
    Fields(Value),
    /// Preformatted text (CSV); wrapped as a single JSON field under --json.
    Plain(&'static str, String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = EvalBudget::new(cli.max_bits, cli.max_steps);
    match run(&cli.command, &budget) {
        Ok(Output::Fields(payload)) => {
            emit(&payload, cli.json);
            ExitCode::SUCCESS
        }
        Ok(Output::Plain(key, text)) => {
            if cli.json {
                println!("{}", json!({"status": "ok", key: text}));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let line = json!({"status": failure.status(), "error": failure.message()});
            if cli.json {
                eprintln!("{line}");
            } else {
                eprintln!("{}: {}", failure.status(), failure.message());
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

/// Text rendering: one `key: value` line per payload field, in insertion
/// order; bare strings and arrays print without keys.
fn emit(payload: &Value, as_json: bool) {
    if as_json {
        let mut out = payload.clone();
        if let Value::Object(map) = &mut out {
            map.insert("status".into(), Value::String("ok".into()));
        }
        println!("{out}");
        return;
    }
    match payload {
        Value::Object(map) => {
            for (key, value) in map {
                match value {
                    Value::String(s) => println!("{key}: {s}"),
                    Value::Array(rows) => {
                        println!("{key}:");
                        for row in rows {
                            match row {
                                Value::String(s) => println!("  {s}"),
                                other => println!("  {other}"),
                            }
                        }
                    }
                    other => println!("{key}: {other}"),
                }
            }
        }
        Value::String(s) => println!("{s}"),
        other => println!("{other}"),
    }
}

fn run(command: &Command, budget: &EvalBudget) -> Result<Output, Failure> {
    match command {
        Command::Battle { word, trace } => {
            let hydra = parse_hydra_word(word)?;
            let result = hydra::battle(&hydra, budget, *trace)?;
            let mut payload = json!({"duration": result.duration.to_string()});
            if let Some(t) = result.transcript {
                payload["transcript"] = Value::String(t.to_string());
            }
            Ok(Output::Fields(payload))
        }
        Command::Hk { k, n } => {
            require(*k >= 1, "k must be at least 1")?;
            let v = hydra::hydra_h(*k, *n, budget)?;
            Ok(Output::Fields(json!({"value": v.to_string()})))
        }
        Command::Phi { k, n } => {
            require(*k >= 1, "k must be at least 1")?;
            match hydra::phi(*k, *n, budget) {
                Ok(v) => Ok(Output::Fields(
                    json!({"defined": true, "value": v.to_string()}),
                )),
                Err(PhiError::NotInDomain) => Ok(Output::Fields(
                    json!({"defined": false, "value": Value::Null}),
                )),
                Err(PhiError::Budget(b)) => Err(b.into()),
            }
        }
        Command::Ack { k, n, iter } => {
            let v = match iter {
                Some(l) => ackermann::ack_iter(*k, *l, *n, budget)?,
                None => ackermann::ack(*k, *n, budget)?,
            };
            Ok(Output::Fields(json!({"value": v.to_string()})))
        }
        Command::Nf { word } => {
            let u = parse_gword(word)?;
            let nf = group::collect(&u, budget)?;
            Ok(Output::Fields(json!({"v": nf.v.to_string(), "r": nf.r})))
        }
        Command::Hreduce { word } => {
            let w = parse_hword(word)?;
            let reduced = w.reduced();
            Ok(Output::Fields(json!({
                "word": reduced.to_string(),
                "length": reduced.letter_count().to_string(),
            })))
        }
        Command::Member {
            r,
            word,
            max_candidates,
            max_depth,
        } => {
            let w = parse_free_word(word)?;
            let solver_budget = SolverBudget {
                eval: *budget,
                max_candidate_s: *max_candidates,
                max_depth: *max_depth,
            };
            match solver::solve(&CosetQuery { r: *r, w }, &solver_budget) {
                CosetAnswer::Member { s, sigma } => {
                    Ok(Output::Fields(json!({"s": s, "sigma": sigma.to_string()})))
                }
                CosetAnswer::NotInLambda => Err(Failure::NotMember),
                CosetAnswer::Undecided { reason } => Err(match reason {
                    UndecidedReason::BudgetExceeded(b) => Failure::Budget(b),
                    UndecidedReason::CandidateCapReached => {
                        Failure::Undecided("candidate cap reached".into())
                    }
                }),
            }
        }
        Command::Witness { k, n, pair } => {
            require(*k >= 1 && *n >= 1, "witness words need k, n >= 1")?;
            if *pair {
                require(*k >= 2, "--pair needs k >= 2")?;
                let p = distortion::witness_pair(*k, *n, budget)?;
                Ok(Output::Fields(json!({
                    "v": p.v.to_string(),
                    "v_length": p.v.len(),
                    "w": p.w.to_string(),
                    "w_length": p.w.reduced().letter_count().to_string(),
                    "verified": p.verified,
                })))
            } else {
                let u = distortion::witness_u(*k, *n, budget)?;
                Ok(Output::Fields(json!({
                    "word": u.to_string(),
                    "length": u.letter_count().to_string(),
                })))
            }
        }
        Command::Distortion { k, n_max, format } => {
            require(*k >= 1, "k must be at least 1")?;
            let table =
                distortion::distortion_table(*k, *n_max, &SolverBudget::with_eval(*budget))?;
            match format {
                Format::Csv => {
                    let mut text = String::from("n,dist\n");
                    for r in &table.rows {
                        text.push_str(&format!("{},{}\n", r.n, r.dist));
                    }
                    Ok(Output::Plain("csv", text))
                }
                Format::Table => {
                    let rows: Vec<Value> = table
                        .rows
                        .iter()
                        .map(|r| Value::String(format!("{}\t{}", r.n, r.dist)))
                        .collect();
                    Ok(Output::Fields(json!({"rows": rows})))
                }
            }
        }
        Command::Bounds(cmd) => {
            let v = match cmd {
                BoundsCommand::Kappa { k, l, n } => bounds::kappa_bound(*k, *l, *n, budget)?,
                BoundsCommand::BigK { k, l, p, n } => bounds::k_bound(*k, *l, *p, *n, budget)?,
                BoundsCommand::Psi { k, l, n } => bounds::psi_bound(*k, *l, *n, budget)?,
                BoundsCommand::BigPsi { k, l, p, n } => {
                    bounds::psi_total_bound(*k, *l, *p, *n, budget)?
                }
                BoundsCommand::Constants { k } => {
                    let (d, e, f) = bounds::ackermann_constants(*k);
                    return Ok(Output::Fields(json!({
                        "d": d.to_string(),
                        "e": e.to_string(),
                        "f": f.to_string(),
                    })));
                }
            };
            Ok(Output::Fields(json!({"value": v.to_string()})))
        }
        Command::OracleCheck(args) => oracle_check(args, budget),
    }
}

fn require(cond: bool, message: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Parse(message.into()))
    }
}

/// All reduced words over `a_1..a_k` of length `<= max_len`.
fn reduced_words(k: u32, max_len: u32) -> Vec<hydra_core::FreeWord> {
    use hydra_core::{FreeWord, Letter};
    let mut alphabet = Vec::new();
    for i in 1..=k {
        alphabet.push(Letter::positive(i));
        alphabet.push(Letter::negative(i));
    }
    let mut out = vec![FreeWord::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for &l in &alphabet {
                if prefix.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut word = prefix.clone();
                word.push(l);
                out.push(FreeWord::from_letters(word.iter().copied()));
                next.push(word);
            }
        }
        layer = next;
    }
    out
}

fn oracle_check(args: &OracleCheckArgs, budget: &EvalBudget) -> Result<Output, Failure> {
    require(args.k >= 1, "k must be at least 1")?;
    let index = match &args.load {
        Some(path) => oracle_io::load(path, args.k, args.radius)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        None => distortion::build_oracle(args.k, args.radius, budget)?,
    };
    if let Some(path) = &args.save {
        oracle_io::save(path, &index)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    }

    let solver_budget = SolverBudget::with_eval(*budget);
    let mut checked = 0u64;
    let mut oracle_hits = 0u64;
    let mut undecided = 0u64;
    let mut disagreements: Vec<String> = Vec::new();
    for w in reduced_words(args.k, args.max_wlen) {
        for r in -args.max_r..=args.max_r {
            checked += 1;
            let verdict = index.member(r, &w, budget);
            let answer = solver::solve(&CosetQuery { r, w: w.clone() }, &solver_budget);
            match (&verdict, &answer) {
                (OracleVerdict::Member { s, .. }, CosetAnswer::Member { s: got, .. }) => {
                    oracle_hits += 1;
                    if s != got {
                        disagreements.push(format!("t^{r} {w}: oracle s={s}, solver s={got}"));
                    }
                }
                (OracleVerdict::Member { s, .. }, other) => {
                    disagreements.push(format!("t^{r} {w}: oracle s={s}, solver {other:?}"));
                }
                (OracleVerdict::Unknown, CosetAnswer::Member { s, sigma }) => {
                    // consistent only when the witness outgrows the ball
                    let len = sigma.reduced().letter_count();
                    if len <= args.radius.into() {
                        disagreements.push(format!(
                            "t^{r} {w}: solver s={s} with witness of length {len} that the radius-{} oracle missed",
                            args.radius
                        ));
                    }
                }
                (OracleVerdict::Unknown, CosetAnswer::Undecided { .. }) => undecided += 1,
                (OracleVerdict::Unknown, CosetAnswer::NotInLambda) => {}
            }
        }
    }
    if !disagreements.is_empty() {
        return Err(Failure::Disagreement(format!(
            "{} disagreement(s); first: {}",
            disagreements.len(),
            disagreements[0]
        )));
    }
    Ok(Output::Fields(json!({
        "ball_size": index.len(),
        "queries": checked,
        "oracle_members": oracle_hits,
        "undecided": undecided,
        "disagreements": 0,
    })))
}
