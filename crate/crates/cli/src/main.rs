use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tba_core::conditions::{check_with, CheckOptions, ConditionId};
use tba_core::logic::eval::{consequence_all, eval};
use tba_core::logic::search::{parse_assumptions, search, SearchOptions, SearchOutcome, Strategy};
use tba_core::logic::{parse, parse_formula, parse_sequent, Goal, Model, Sequent};
use tba_core::operator::{operator_count, Operator};
use tba_core::quantifiers::{self, BarcanForm};
use tba_core::suite::{self, Status, SuiteConfig};
use tba_core::topology::{
    self, derive, finite_topologies, monoid_closure, orbit, roundtrip_failure, OperatorRole,
};
use tba_core::{par, PointDomain};

#[derive(Parser)]
#[command(name = "tba", version, about = "Finite-model workbench for topological Boolean algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for bounded checks and random search.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: u64,
    /// Worker threads (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog conditions on one operator.
    CheckConditions(CheckArgs),
    /// Evaluate a formula in a model.
    Eval(EvalArgs),
    /// Decide whether a formula is valid in a model (over unvalued variables).
    Valid(EvalArgs),
    /// Decide a sequent in a model (over unvalued variables).
    Consequence(ConsequenceArgs),
    /// Search for a countermodel.
    Search(SearchArgs),
    /// Check the cube of opposition on every (or sampled) operator.
    Cube(CubeArgs),
    /// Check derivations between the five operators on every finite topology.
    TopologyRoundtrip(PointsArgs),
    /// Monoid generated by operators of a model, or bounds over all topologies.
    Monoid(MonoidArgs),
    /// Barcan formula experiments.
    Barcan(BarcanArgs),
    /// Run a named report.
    Report(ReportArgs),
}

#[derive(Args)]
struct OperatorInput {
    /// Operator JSON file: {"points":n,"table":[...]}.
    #[arg(short = 'o', long, conflicts_with = "table")]
    operator: Option<PathBuf>,
    /// Inline table, comma separated, e.g. 0,3,3,3.
    #[arg(short = 't', long, requires = "points")]
    table: Option<String>,
    #[arg(short = 'n', long)]
    points: Option<usize>,
}

impl OperatorInput {
    fn load(&self) -> anyhow::Result<Operator> {
        if let Some(p) = &self.operator {
            let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            return Ok(serde_json::from_str(&s)?);
        }
        let (Some(t), Some(n)) = (&self.table, self.points) else {
            bail!("give --operator FILE or --table T --points N");
        };
        let entries = t
            .split(',')
            .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad table entry '{x}'")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Operator::new(PointDomain::new(n)?, entries)?)
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: OperatorInput,
    /// Comma-separated condition names; all conditions if omitted.
    #[arg(short = 'c', long)]
    conditions: Option<String>,
    /// Check the operator derived in this role (C, I, E, B, F) from the given closure.
    #[arg(long, default_value = "C")]
    role: String,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(short = 'm', long)]
    model: PathBuf,
    #[arg(short = 'f', long, allow_hyphen_values = true)]
    formula: String,
}

#[derive(Args)]
struct ConsequenceArgs {
    #[arg(short = 'm', long)]
    model: PathBuf,
    #[arg(short = 's', long, allow_hyphen_values = true)]
    sequent: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Formula goal (read as `|- formula`).
    #[arg(
        short = 'f',
        long,
        allow_hyphen_values = true,
        conflicts_with = "sequent",
        required_unless_present = "sequent"
    )]
    formula: Option<String>,
    #[arg(short = 's', long, allow_hyphen_values = true)]
    sequent: Option<String>,
    #[arg(long, default_value_t = 1)]
    min_points: usize,
    #[arg(long, default_value_t = 2)]
    max_points: usize,
    /// ROLE:COND,COND,... (repeatable), e.g. I:MULT,CNTR,DNRM,IDEM.
    #[arg(long)]
    assume: Vec<String>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    strategy: StrategyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Relational,
    Random,
}

#[derive(Args)]
struct CubeArgs {
    #[arg(short = 'n', long, default_value_t = 2)]
    points: usize,
    /// Enumerate every operator instead of sampling.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct PointsArgs {
    #[arg(short = 'n', long, default_value_t = 4)]
    points: usize,
}

#[derive(Args)]
struct MonoidArgs {
    /// Model whose closure supplies the generators.
    #[arg(short = 'm', long, conflicts_with = "points")]
    model: Option<PathBuf>,
    /// Summarise over every topology on this many points instead.
    #[arg(short = 'n', long)]
    points: Option<usize>,
    /// Generators among C, I, E, B, F and - (complement).
    #[arg(short = 'g', long, default_value = "C,-")]
    generators: String,
    #[arg(long, default_value_t = topology::DEFAULT_MONOID_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BarcanArgs {
    #[arg(short = 'n', long, default_value_t = 2)]
    points: usize,
    #[arg(long, default_value_t = 4)]
    sort_size: usize,
    /// Also range over every constant domain D.
    #[arg(long)]
    constant: bool,
    /// Search for varying-domain countermodels with this candidate budget.
    #[arg(long)]
    varying_budget: Option<u64>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(value_enum)]
    name: ReportName,
    /// Restrict to these criterion numbers.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Include the empirical maps.
    #[arg(long)]
    extras: bool,
    /// Largest point count for the exhaustive transform scans.
    #[arg(long, default_value_t = 3)]
    transform_points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportName {
    PaperSuite,
}

/// Result of a command: exit code plus text and JSON renderings.
struct Output {
    code: u8,
    text: String,
    json: Value,
}

fn out(code: u8, text: String, json: Value) -> anyhow::Result<Output> {
    Ok(Output { code, text, json })
}

fn read_model(p: &PathBuf) -> anyhow::Result<Model> {
    let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Model::from_json(&s).with_context(|| format!("parsing model {}", p.display()))
}

fn check_conditions(a: &CheckArgs, c: &Common) -> anyhow::Result<Output> {
    let op = a.input.load()?;
    let role: OperatorRole = a.role.parse()?;
    let op = if role == OperatorRole::Closure { op } else { derive(&op, OperatorRole::Closure, role) };
    let conds: Vec<ConditionId> = match &a.conditions {
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?,
        None => ConditionId::ALL.to_vec(),
    };
    let opts = CheckOptions { family_samples: c.samples as usize, seed: c.seed };
    let reports: Vec<_> = conds.iter().map(|&k| check_with(k, &op, &opts)).collect();
    let all = reports.iter().all(|r| r.holds);
    let mut text = String::new();
    for r in &reports {
        let mark = if r.holds { "holds" } else { "fails" };
        let approx = if r.approximate { " (bounded)" } else { "" };
        text.push_str(&format!("{:<10} {mark}{approx}", r.condition.name()));
        if let Some(w) = &r.witness {
            text.push_str(&format!("  witness: {}", serde_json::to_string(w)?));
        }
        text.push('\n');
    }
    out(if all { 0 } else { 1 }, text, json!({"operator": op, "reports": reports}))
}

fn eval_cmd(a: &EvalArgs) -> anyhow::Result<Output> {
    let m = read_model(&a.model)?;
    let f = parse_formula(&a.formula)?;
    let v = eval(&f, &m)?;
    out(0, format!("{v}\n"), json!({"formula": f.to_string(), "value": v}))
}

fn decide(s: &Sequent, m: &Model, label: &str) -> anyhow::Result<Output> {
    let r = consequence_all(s, m)?;
    let mut text = format!("{label}: {}\n", if r.holds { "holds" } else { "fails" });
    let mut j = json!({"goal": s.to_string(), "holds": r.holds, "valuations": r.valuations});
    if let Some(cx) = &r.counterexample {
        let mut cm = m.clone();
        cm.valuation.extend(cx.clone());
        text.push_str(&format!("countermodel: {}\n", cm.to_json()));
        j["countermodel"] = serde_json::to_value(&cm)?;
    }
    out(if r.holds { 0 } else { 1 }, text, j)
}

fn valid_cmd(a: &EvalArgs) -> anyhow::Result<Output> {
    let m = read_model(&a.model)?;
    decide(&Sequent::theorem(parse_formula(&a.formula)?), &m, "valid")
}

fn consequence_cmd(a: &ConsequenceArgs) -> anyhow::Result<Output> {
    let m = read_model(&a.model)?;
    decide(&parse_sequent(&a.sequent)?, &m, "consequence")
}

fn search_cmd(a: &SearchArgs, c: &Common) -> anyhow::Result<Output> {
    let goal = match (&a.formula, &a.sequent) {
        (Some(f), None) => Goal::Formula(parse_formula(f)?),
        (None, Some(s)) => parse(s)?,
        _ => bail!("give exactly one of --formula and --sequent"),
    };
    let seq = goal.into_sequent();
    let mut assumptions = Vec::new();
    for s in &a.assume {
        assumptions.extend(parse_assumptions(s)?);
    }
    let opts = SearchOptions {
        min_points: a.min_points,
        max_points: a.max_points,
        assumptions,
        strategy: match a.strategy {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Relational => Strategy::Relational,
            StrategyArg::Random => Strategy::Random,
        },
        samples: c.samples,
        seed: c.seed,
    };
    let r = search(&seq, &opts)?;
    let (code, text) = match &r {
        SearchOutcome::Valid { models } => (0, format!("VALID: no countermodel among {models} models\n")),
        SearchOutcome::Inconclusive { models } => {
            (3, format!("INCONCLUSIVE: no countermodel among {models} models ({} search)\n", opts.strategy))
        }
        SearchOutcome::Countermodel { model, .. } => (1, format!("{}\n", model.to_json())),
    };
    let j = match &r {
        SearchOutcome::Countermodel { model, .. } => serde_json::to_value(model)?,
        other => serde_json::to_value(other)?,
    };
    out(code, text, j)
}

fn cube_cmd(a: &CubeArgs, c: &Common) -> anyhow::Result<Output> {
    let d = PointDomain::new(a.points)?;
    let (checked, pass, mode) = if a.exhaustive {
        let total = operator_count(d)?;
        let bad = par::count(0..total, |i| !Operator::at_index(d, i).expect("in range").cube_check());
        (total, total - bad, "exhaustive")
    } else {
        let n = c.samples;
        let bad = par::count(0..n, |i| !Operator::sample(d, c.seed.wrapping_add(i)).cube_check());
        (n, n - bad, "sampled")
    };
    let text = format!("{pass}/{checked} operators pass ({mode}, n = {})\n", a.points);
    out(if pass == checked { 0 } else { 1 }, text, json!({"points": a.points, "mode": mode, "operators": checked, "pass": pass}))
}

fn roundtrip_cmd(a: &PointsArgs) -> anyhow::Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..=a.points {
        let tops = finite_topologies(PointDomain::new(k)?)?;
        let failures: Vec<String> = tops.iter().filter_map(roundtrip_failure).collect();
        ok &= failures.is_empty();
        text.push_str(&format!("{k} points: {} topologies, {} failures\n", tops.len(), failures.len()));
        for f in &failures {
            text.push_str(&format!("  {f}\n"));
        }
        rows.push(json!({"points": k, "topologies": tops.len(), "failures": failures}));
    }
    out(if ok { 0 } else { 1 }, text, json!(rows))
}

fn generators(spec: &str, c: &Operator) -> anyhow::Result<Vec<Operator>> {
    spec.split(',')
        .map(|g| match g.trim() {
            "-" => Ok(Operator::negation(c.domain())),
            r => Ok(derive(c, OperatorRole::Closure, r.parse()?)),
        })
        .collect()
}

fn monoid_cmd(a: &MonoidArgs) -> anyhow::Result<Output> {
    if let Some(p) = &a.model {
        let m = read_model(p)?;
        let c = m.semantics().closure().clone();
        let gens = generators(&a.generators, &c)?;
        let mc = monoid_closure(&gens, a.cap)?;
        let mut text = format!(
            "{} operators{}\n",
            mc.operators.len(),
            if mc.saturated { "" } else { " (cap reached, not saturated)" }
        );
        for o in &mc.operators {
            text.push_str(&format!("  {:?}\n", o.table()));
        }
        return out(0, text, serde_json::to_value(&mc)?);
    }
    let Some(k) = a.points else { bail!("give --model or --points") };
    let tops = finite_topologies(PointDomain::new(k)?)?;
    let (mut max, mut unsaturated, mut max_orbit) = (0, 0, 0);
    for c in &tops {
        let gens = generators(&a.generators, c)?;
        let mc = monoid_closure(&gens, a.cap)?;
        max = max.max(mc.operators.len());
        unsaturated += (!mc.saturated) as usize;
        for x in c.domain().elements() {
            max_orbit = max_orbit.max(orbit(&gens, x, a.cap)?.elements.len());
        }
    }
    let text = format!(
        "{} topologies on {k} points: largest monoid {max}, largest orbit {max_orbit}, {unsaturated} hit the cap\n",
        tops.len()
    );
    out(0, text, json!({"points": k, "topologies": tops.len(), "max_monoid": max, "max_orbit": max_orbit, "unsaturated": unsaturated}))
}

fn barcan_cmd(a: &BarcanArgs, c: &Common) -> anyhow::Result<Output> {
    let d = PointDomain::new(a.points)?;
    let reports = quantifiers::barcan_check(d, a.sort_size, a.constant, c.samples, c.seed)?;
    let mut ok = true;
    let mut text = String::new();
    for r in &reports {
        ok &= r.failures == 0;
        text.push_str(&format!(
            "{:<6} under {:<8} {} operators, {} cases, {} failures{}{}\n",
            r.form,
            r.premise,
            r.operators_with_premise,
            r.cases,
            r.failures,
            if r.premise_equivalent { ", equivalent to premise" } else { "" },
            if r.exhaustive { "" } else { " (sampled)" }
        ));
    }
    let mut varying = Vec::new();
    if let Some(budget) = a.varying_budget {
        for form in [BarcanForm::Bf1, BarcanForm::Cbf1] {
            let hit = quantifiers::varying_countermodel(form, d, a.sort_size.min(2), budget)?;
            match &hit {
                Some(h) => text.push_str(&format!(
                    "{}-var countermodel: f = {:?}, delta = {:?}, psi = {:?}\n",
                    form.name(),
                    h.operator.table(),
                    h.delta.iter().map(|e| e.points()).collect::<Vec<_>>(),
                    h.psi.iter().map(|e| e.points()).collect::<Vec<_>>()
                )),
                None => text.push_str(&format!("{}-var: none within budget\n", form.name())),
            }
            varying.push(json!({"form": form.name(), "countermodel": hit}));
        }
    }
    out(if ok { 0 } else { 1 }, text, json!({"constant_and_unrestricted": reports, "varying": varying}))
}

fn report_cmd(a: &ReportArgs, c: &Common) -> anyhow::Result<Output> {
    let cfg = SuiteConfig { transform_points: a.transform_points, seed: c.seed, samples: c.samples.min(10_000) };
    let ids: Vec<u8> = if a.only.is_empty() { (1..=14).collect() } else { a.only.clone() };
    let mut results = Vec::new();
    let mut text = String::new();
    for id in ids {
        let r = suite::run(id, &cfg)?;
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Report => "REPORT",
        };
        text.push_str(&format!("{:>2} {tag:<6} {:<34} {}\n", r.id, r.title, r.summary));
        results.push(r);
    }
    let ok = results.iter().all(|r| r.passed());
    let mut j = json!({"criteria": results});
    if a.extras {
        let extras = suite::extras()?;
        text.push_str("\nextras:\n");
        text.push_str(&serde_json::to_string_pretty(&extras)?);
        text.push('\n');
        j["extras"] = extras;
    }
    out(if ok { 0 } else { 1 }, text, j)
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let c = &cli.common;
    if c.threads > 0 {
        par::set_threads(c.threads).map_err(anyhow::Error::msg)?;
    }
    match &cli.command {
        Command::CheckConditions(a) => check_conditions(a, c),
        Command::Eval(a) => eval_cmd(a),
        Command::Valid(a) => valid_cmd(a),
        Command::Consequence(a) => consequence_cmd(a),
        Command::Search(a) => search_cmd(a, c),
        Command::Cube(a) => cube_cmd(a, c),
        Command::TopologyRoundtrip(a) => roundtrip_cmd(a),
        Command::Monoid(a) => monoid_cmd(a),
        Command::Barcan(a) => barcan_cmd(a, c),
        Command::Report(a) => report_cmd(a, c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let body = match cli.common.format {
                Format::Text => o.text,
                Format::Json => format!("{}\n", o.json),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
