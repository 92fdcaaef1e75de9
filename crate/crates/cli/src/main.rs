//! `papp`: compute committees, check representation axioms and generate instances.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use party_approval::axioms::{self, Witness};
use party_approval::instances::{self, BallotModel, Graph};
use party_approval::portioning::RandomPriorityMode;
use party_approval::rules::pav_score;
use party_approval::search::DEFAULT_CAP;
use party_approval::{
    parse_election, serialize_election, Axiom, AxiomVerdict, Committee, Election, Error, PortioningMethod, Rule,
    SearchConfig,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "papp", version, about = "Approval-based apportionment")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for exhaustive rules and checkers.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Maximum number of committees an exhaustive method may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a committee with a rule.
    Compute(ComputeArgs),
    /// Check a committee against an axiom.
    Check(CheckArgs),
    /// Print an election in the ballot file format.
    Generate(GenerateArgs),
    /// Verify the bundled worked examples.
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Rule name, e.g. `pav`, `seqphragmen` or `maj+dhondt`.
    #[arg(long)]
    rule: String,
    #[arg(long)]
    input: PathBuf,
    /// Override the committee size from the input file.
    #[arg(long)]
    k: Option<usize>,
    /// Also run the JR, PJR and EJR checkers.
    #[arg(long)]
    audit: bool,
    /// Sample random priority with this seed instead of averaging exactly.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampled voter orders for random priority.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    axiom: Axiom,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    /// Committee as `party=seats` pairs, e.g. `p0=8,p2=4`.
    #[arg(long, conflicts_with = "rule")]
    committee: Option<String>,
    /// Check the committee chosen by this rule (required for `monotone`).
    #[arg(long)]
    rule: Option<String>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["example", "reduction", "random"])))]
struct GenerateArgs {
    /// Worked example id (see `papp examples`).
    #[arg(long)]
    example: Option<String>,
    /// Independent-set reduction.
    #[arg(long, requires_all = ["graph", "t"])]
    reduction: Option<Reduction>,
    /// Random election.
    #[arg(long)]
    random: bool,
    /// Edge-list file for `--reduction`.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Independent set size for `--reduction`.
    #[arg(long)]
    t: Option<usize>,
    /// Committee size.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of voters for `--random`.
    #[arg(long, default_value_t = 20)]
    n: u64,
    /// Number of parties for `--random`.
    #[arg(long, default_value_t = 4)]
    parties: usize,
    #[arg(long, value_enum, default_value_t = Model::Uniform)]
    model: Model,
    /// Approval probability for the uniform model.
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    /// Number of blocks for the blocks model.
    #[arg(long, default_value_t = 2)]
    blocks: usize,
    /// Number of clusters for the clustered model.
    #[arg(long, default_value_t = 2)]
    clusters: usize,
    /// Flip probability for the clustered model.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    IsPav,
    IsMaxphragmen,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Uniform,
    Blocks,
    Clustered,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Verify every example.
    #[arg(long, conflicts_with = "id")]
    all: bool,
    /// Verify one example.
    #[arg(long)]
    id: Option<String>,
}

/// Exit status of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = SearchConfig {
        cap: cli.cap,
        threads: cli.threads.max(1),
    };
    let result = match &cli.command {
        Command::Compute(args) => compute(args, &config, cli.json),
        Command::Check(args) => check(args, &config, cli.json),
        Command::Generate(args) => generate(args),
        Command::Examples(args) => examples(args, &config, cli.json),
    };
    match result {
        Ok((output, status)) => {
            print!("{output}");
            match status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type Output = Result<(String, Status), Error>;

fn read_election(path: &Path, k: Option<usize>) -> Result<Election, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
    let election = parse_election(&text)?;
    match k {
        Some(k) => election.with_k(k),
        None => Ok(election),
    }
}

fn parse_rule(name: &str, seed: Option<u64>, trials: Option<usize>) -> Result<Rule, Error> {
    let mut rule: Rule = name.parse()?;
    if seed.is_none() && trials.is_none() {
        return Ok(rule);
    }
    match &mut rule {
        Rule::Composed(c) if matches!(c.portioning, PortioningMethod::RandomPriority(_)) => {
            c.portioning = PortioningMethod::RandomPriority(RandomPriorityMode::Sampled {
                seed: seed.unwrap_or(0),
                trials: trials.unwrap_or(10_000),
            });
            Ok(rule)
        }
        _ => Err(Error::Structural("--seed and --trials only apply to `rp` rules".into())),
    }
}

/// Short form of a witness for one-line summaries.
fn witness_summary(election: &Election, witness: &Witness) -> String {
    match witness {
        Witness::Cohesive { party, level, .. } => format!("{}, ℓ={level}", election.party_name(*party)),
        Witness::Underrepresented { party, represented, .. } => {
            format!("{}, {represented} seats", election.party_name(*party))
        }
        Witness::Deviation { deviation, .. } => format!("T = {}", deviation.display(election)),
        Witness::Unassignable { assigned, .. } => format!("{assigned} voters assigned"),
        Witness::NotMonotone { k, .. } => format!("k = {k}"),
    }
}

#[derive(Serialize)]
struct CommitteeReport<'a> {
    rule: String,
    committee: String,
    seats: &'a [usize],
    pav_score: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    audit: Vec<AxiomVerdict>,
}

fn compute(args: &ComputeArgs, config: &SearchConfig, json: bool) -> Output {
    let rule = parse_rule(&args.rule, args.seed, args.trials)?;
    let election = read_election(&args.input, args.k)?;
    let committee = rule.apply(&election, config)?;
    let mut audit = Vec::new();
    if args.audit {
        audit.push(axioms::check_jr(&election, &committee)?);
        audit.push(axioms::check_pjr_mincut(&election, &committee)?);
        audit.push(axioms::check_ejr(&election, &committee)?);
    }
    let report = CommitteeReport {
        rule: rule.to_string(),
        committee: committee.display(&election).to_string(),
        seats: committee.seats(),
        pav_score: pav_score(&election, &committee).to_string(),
        audit,
    };
    if json {
        return Ok((to_json(&report), Status::Ok));
    }
    let mut out = format!("{}\npav score: {}\n", report.committee, report.pav_score);
    if !report.audit.is_empty() {
        let parts: Vec<String> = report
            .audit
            .iter()
            .map(|v| match &v.witness {
                None => format!("{}: PASS", v.axiom),
                Some(w) => format!("{}: FAIL ({})", v.axiom, witness_summary(&election, w)),
            })
            .collect();
        writeln!(out, "{}", parts.join("  ")).unwrap();
    }
    Ok((out, Status::Ok))
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    committee: Option<String>,
    #[serde(flatten)]
    verdict: AxiomVerdict,
}

fn check(args: &CheckArgs, config: &SearchConfig, json: bool) -> Output {
    let election = read_election(&args.input, args.k)?;
    let rule = args.rule.as_deref().map(|r| parse_rule(r, None, None)).transpose()?;
    let (verdict, committee) = if args.axiom == Axiom::Monotone {
        let rule = rule.ok_or_else(|| Error::Structural("`monotone` needs --rule".into()))?;
        (
            axioms::check_committee_monotonic(&rule, &election, election.k(), config)?,
            None,
        )
    } else {
        let committee = match (&args.committee, rule) {
            (Some(spec), _) => election.parse_committee(spec)?,
            (None, Some(rule)) => rule.apply(&election, config)?,
            (None, None) => return Err(Error::Structural("give --committee or --rule".into())),
        };
        (
            check_committee(&election, &committee, args.axiom, config)?,
            Some(committee),
        )
    };
    let status = if verdict.pass { Status::Ok } else { Status::Failed };
    let committee = committee.map(|c| c.display(&election).to_string());
    let report = CheckReport { committee, verdict };
    if json {
        return Ok((to_json(&report), status));
    }
    let out = match &report.verdict.witness {
        None => format!("{}: PASS\n", args.axiom),
        Some(w) => format!(
            "{}: FAIL ({})\n{}\n",
            args.axiom,
            witness_summary(&election, w),
            serde_json::to_string(w).expect("witness serializes")
        ),
    };
    Ok((out, status))
}

fn check_committee(
    election: &Election,
    committee: &Committee,
    axiom: Axiom,
    config: &SearchConfig,
) -> Result<AxiomVerdict, Error> {
    if committee.size() != election.k() {
        return Err(Error::Structural(format!(
            "committee has {} seats but k = {}",
            committee.size(),
            election.k()
        )));
    }
    match axiom {
        Axiom::Jr => axioms::check_jr(election, committee),
        Axiom::Pjr => axioms::check_pjr_mincut(election, committee),
        Axiom::Ejr => axioms::check_ejr(election, committee),
        Axiom::Core => axioms::check_core_bruteforce(election, committee, config),
        Axiom::Pr => axioms::check_pr(election, committee),
        Axiom::Monotone => unreachable!("handled by the caller"),
    }
}

fn generate(args: &GenerateArgs) -> Output {
    let out = if let Some(id) = &args.example {
        serialize_election(&instances::paper_example(id, args.k)?.election)
    } else if let Some(reduction) = args.reduction {
        let path = args.graph.as_ref().expect("clap enforces --graph");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
        let graph = Graph::parse(&text)?;
        let t = args.t.expect("clap enforces --t");
        let (election, threshold, what) = match reduction {
            Reduction::IsPav => {
                let (e, s) = instances::reduce_is_to_pav(&graph, t)?;
                (e, s, "pav score at least")
            }
            Reduction::IsMaxphragmen => {
                let (e, s) = instances::reduce_is_to_maxphragmen(&graph, t)?;
                (e, s, "max load at most")
            }
        };
        format!(
            "# independent set of size {t} iff {what} {threshold}\n{}",
            serialize_election(&election)
        )
    } else {
        let model = match args.model {
            Model::Uniform => BallotModel::UniformSubset { density: args.density },
            Model::Blocks => BallotModel::DisjointBlocks { blocks: args.blocks },
            Model::Clustered => BallotModel::Clustered {
                clusters: args.clusters,
                noise: args.noise,
            },
        };
        let k = args.k.unwrap_or(3);
        serialize_election(&instances::random_election(args.seed, args.n, args.parties, k, model)?)
    };
    Ok((out, Status::Ok))
}

#[derive(Serialize)]
struct ExampleRow {
    example: &'static str,
    check: String,
    pass: bool,
    detail: String,
}

fn examples(args: &ExamplesArgs, config: &SearchConfig, json: bool) -> Output {
    let ids: Vec<&str> = match (&args.id, args.all) {
        (Some(id), _) => vec![id.as_str()],
        (None, true) => instances::EXAMPLE_IDS.iter().map(|&(id, _)| id).collect(),
        (None, false) => {
            let list: String = instances::EXAMPLE_IDS
                .iter()
                .map(|(id, k)| format!("{id}\tk={k}\n"))
                .collect();
            return Ok((list, Status::Ok));
        }
    };
    let mut rows = Vec::new();
    for id in ids {
        let example = instances::paper_example(id, None)?;
        for check in instances::verify(&example, config)? {
            rows.push(ExampleRow {
                example: example.id,
                check: check.description,
                pass: check.pass,
                detail: check.detail,
            });
        }
    }
    let status = if rows.iter().all(|r| r.pass) {
        Status::Ok
    } else {
        Status::Failed
    };
    if json {
        return Ok((to_json(&rows), status));
    }
    let width = rows.iter().map(|r| r.check.chars().count()).max().unwrap_or(0).min(40);
    let mut out = String::new();
    for r in &rows {
        let mark = if r.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{:<18} {mark}  {:<width$}  {}", r.example, r.check, r.detail).unwrap();
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    writeln!(out, "{passed}/{} passed", rows.len()).unwrap();
    Ok((out, status))
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
