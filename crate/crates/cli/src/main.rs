//! `finring`: build finite rings, compute their unit groups and decide which groups
//! occur as unit groups.
//!
//! Exit codes: 0 success, 1 a predicted value disagrees with brute force, 2 bad input,
//! 3 a size cap was hit.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use finring::builders::{predicted_unit_group, BuildError, BuildRecipe, Builder};
use finring::groups::{parse_group, AbelianGroupType};
use finring::realize::{self, RealizabilityVerdict, RealizeError, Realizer};
use finring::units::{verify_power_lemma, Analyzer, UnitError, UnitGroupReport};
use finring::{FiniteRing, RingError};

#[derive(Parser)]
#[command(name = "finring", version, about = "Finite commutative rings and their unit groups")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Largest ring (number of elements) or group order to handle.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ring from a family and write it as JSON.
    Construct {
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Output file; the ring JSON goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unit-group report for a ring file.
    Analyze { path: PathBuf },
    /// Decide whether a group, e.g. "C8 x C3^4", is a unit group.
    RealizeGroup { group: String },
    /// Decide whether n is a number of units.
    RealizeCardinality {
        n: u64,
        /// Characteristic primes that must each contribute a factor, e.g. 2,3.
        #[arg(long, value_delimiter = ',')]
        char_primes: Option<Vec<u64>>,
    },
    /// Orders n <= max for which C_n is a unit group.
    CyclicTable { max: u64 },
    /// Numbers of units n <= max.
    DitorTable {
        max: u64,
        /// Only odd n.
        #[arg(long)]
        odd: bool,
    },
    /// Build a family ring and compare its brute-forced unit group with the prediction.
    Verify {
        #[command(flatten)]
        recipe: RecipeArgs,
    },
    /// Check (1 + mu)^(p^l) = 1 <=> p^l mu = 0 over the Galois rings GR(p^(a0+1), lambda).
    LemmaCheck {
        #[arg(long)]
        p: u64,
        /// Largest lambda.
        #[arg(long, default_value_t = 1)]
        lambda: u32,
        /// Largest a0.
        #[arg(long, default_value_t = 2)]
        a0: u32,
        /// mu ranges over p^depth R; defaults to 1 for odd p and 2 for p = 2.
        #[arg(long)]
        depth: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Galois,
    Odd,
    Two,
    ExampleP,
    #[value(name = "example-2")]
    Example2,
    Zn,
    Truncated,
}

#[derive(Args)]
struct RecipeArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    lambda: Option<u32>,
    /// Comma-separated descending exponents; "" is the trivial group.
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    a0: Option<u32>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    e: Option<u32>,
}

enum Failure {
    Mismatch(String),
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Input(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::TooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::TooLarge { .. } | BuildError::PTooLargeForDeskScale { .. } => Failure::Cap(e.to_string()),
            BuildError::Ring(r) => r.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<UnitError> for Failure {
    fn from(e: UnitError) -> Self {
        match e {
            UnitError::TooLarge { .. } => Failure::Cap(e.to_string()),
            UnitError::Build(b) => b.into(),
            UnitError::Ring(r) => r.into(),
            UnitError::TheoremViolation(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<RealizeError> for Failure {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::OrderTooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Input(format!("--{flag} is required for this family")))
}

fn parse_partition(text: &str) -> Result<Vec<u32>, Failure> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Failure::Input(format!("bad partition entry {s:?}"))))
        .collect()
}

impl RecipeArgs {
    fn recipe(&self) -> Result<BuildRecipe, Failure> {
        let partition = || parse_partition(self.partition.as_deref().unwrap_or(""));
        let recipe = match self.family {
            Family::Galois => BuildRecipe::Galois {
                p: need(self.p, "p")?,
                m: need(self.m, "m")?,
                lambda: self.lambda.unwrap_or(1),
            },
            Family::Odd => BuildRecipe::OddFamily {
                p: need(self.p, "p")?,
                lambda: self.lambda.unwrap_or(1),
                partition: partition()?,
            },
            Family::Two => BuildRecipe::TwoFamily {
                lambda: self.lambda.unwrap_or(1),
                a0: need(self.a0, "a0")?,
                partition: partition()?,
            },
            Family::ExampleP => BuildRecipe::ExampleP { p: need(self.p, "p")? },
            Family::Example2 => BuildRecipe::Example2 { a0: need(self.a0, "a0")? },
            Family::Zn => BuildRecipe::Zn { n: need(self.n, "n")? },
            Family::Truncated => BuildRecipe::Truncated { p: need(self.p, "p")?, e: need(self.e, "e")? },
        };
        recipe.validate()?;
        Ok(recipe)
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn construct(cli: &Cli, args: &RecipeArgs, out: Option<&PathBuf>) -> Result<(), Failure> {
    let recipe = args.recipe()?;
    let predicted = predicted_unit_group(&recipe)?;
    let ring = Builder::new(cli.cap).build(&recipe)?;
    let text = ring.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            if cli.json {
                print_json(&json!({
                    "recipe": recipe,
                    "ring_order": ring.order(),
                    "predicted_unit_group": predicted,
                    "path": path,
                }));
            } else {
                println!("ring      {recipe}");
                println!("elements  {}", ring.order());
                println!("predicted {predicted}");
                println!("written   {}", path.display());
            }
        }
        None => {
            println!("{text}");
            eprintln!("{recipe}: {} elements, predicted units {predicted}", ring.order());
        }
    }
    Ok(())
}

fn print_report(report: &UnitGroupReport, indent: usize) {
    let pad = " ".repeat(indent);
    println!("{pad}elements        {}", report.ring_order);
    println!("{pad}characteristic  {}", report.characteristic);
    println!("{pad}local           {}", report.is_local);
    if let Some(residue) = &report.residue {
        println!("{pad}residue field   F{} (p = {}, lambda = {})", residue.size(), residue.p, residue.lambda);
    }
    println!("{pad}units           {}", report.unit_count);
    println!("{pad}unit group      {}", report.unit_group_type);
    if let Some(h) = &report.h_type {
        println!("{pad}1 + m           {h}");
    }
    if let Some(k) = report.k {
        println!("{pad}k               {k}");
    }
    if !report.filtration_ks.is_empty() {
        let ks: Vec<String> = report.filtration_ks.iter().map(ToString::to_string).collect();
        println!("{pad}filtration k_i  {}", ks.join(", "));
    }
    println!("{pad}split verified  {}", report.splitting_verified);
    for (i, factor) in report.local_factor_reports.iter().enumerate() {
        println!("{pad}local factor {}:", i + 1);
        print_report(factor, indent + 2);
    }
}

fn analyze(cli: &Cli, path: &PathBuf) -> Result<(), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let ring = FiniteRing::from_json(&text)?;
    let report = Analyzer::new(cli.cap).analyze(&ring)?;
    if cli.json {
        print_json(&serde_json::to_value(&report).expect("serializable"));
    } else {
        print_report(&report, 0);
    }
    Ok(())
}

fn print_verdict(cli: &Cli, subject: &str, verdict: &RealizabilityVerdict) {
    if cli.json {
        print_json(&serde_json::to_value(verdict).expect("serializable"));
        return;
    }
    println!("{subject}: {:?}", verdict.status);
    if let Some(w) = &verdict.witness {
        println!("witness  {w}");
    }
    if let Some(r) = &verdict.reason {
        println!("reason   {}", r.text);
    }
    if let Some(factors) = &verdict.decomposition {
        for f in factors {
            println!("factor   p = {}, lambda = {}, H = {}", f.p, f.lambda, f.h_type);
        }
    }
}

fn realize_group(cli: &Cli, text: &str) -> Result<(), Failure> {
    let g: AbelianGroupType = parse_group(text).map_err(|e| Failure::Input(e.to_string()))?;
    let verdict = Realizer::new(cli.cap).group_realizable(&g)?;
    print_verdict(cli, &g.to_string(), &verdict);
    Ok(())
}

fn realize_cardinality(cli: &Cli, n: u64, char_primes: Option<&Vec<u64>>) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Input("n must be at least 1".into()));
    }
    if n > cli.cap {
        return Err(Failure::Cap(format!("{n} is above the cap {}", cli.cap)));
    }
    let primes: Option<BTreeSet<u64>> = char_primes.map(|v| v.iter().copied().collect());
    if let Some(bad) = primes.iter().flatten().find(|&&p| !finring::arith::is_prime(p)) {
        return Err(Failure::Input(format!("{bad} is not prime")));
    }
    let verdict = realize::ditor_realizable(n, primes.as_ref());
    print_verdict(cli, &n.to_string(), &verdict);
    Ok(())
}

fn print_table(cli: &Cli, rows: Vec<(u64, BuildRecipe)>) {
    if cli.json {
        let rows: Vec<_> = rows.into_iter().map(|(n, w)| json!({"n": n, "witness": w})).collect();
        print_json(&serde_json::Value::Array(rows));
    } else {
        for (n, w) in rows {
            println!("{n:>8}  {w}");
        }
    }
}

fn table_max(cli: &Cli, max: u64) -> Result<(), Failure> {
    if max == 0 {
        return Err(Failure::Input("max must be at least 1".into()));
    }
    if max > cli.cap {
        return Err(Failure::Cap(format!("{max} is above the cap {}", cli.cap)));
    }
    Ok(())
}

fn cyclic_table(cli: &Cli, max: u64) -> Result<(), Failure> {
    table_max(cli, max)?;
    let rows = (1..=max)
        .filter_map(|n| realize::cyclic_realizable(n).witness.map(|w| (n, w)))
        .collect();
    print_table(cli, rows);
    Ok(())
}

fn ditor_table(cli: &Cli, max: u64, odd: bool) -> Result<(), Failure> {
    table_max(cli, max)?;
    let rows = realize::enumerate_cardinalities(max)
        .into_iter()
        .filter(|n| !odd || n % 2 == 1)
        .map(|n| {
            let w = realize::ditor_realizable(n, None).witness.expect("enumerated cardinalities are realizable");
            (n, w)
        })
        .collect();
    print_table(cli, rows);
    Ok(())
}

fn verify(cli: &Cli, args: &RecipeArgs) -> Result<(), Failure> {
    let recipe = args.recipe()?;
    let outcome = Analyzer::new(cli.cap).verify(&recipe)?;
    if cli.json {
        print_json(&serde_json::to_value(&outcome).expect("serializable"));
    } else {
        println!("ring      {recipe}");
        println!("elements  {}", outcome.ring_order);
        println!("predicted {}", outcome.predicted);
        println!("actual    {}", outcome.actual);
        println!("{}", if outcome.pass { "PASS" } else { "FAIL" });
    }
    if outcome.pass {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("predicted {} but found {}", outcome.predicted, outcome.actual)))
    }
}

fn lemma_check(cli: &Cli, p: u64, max_lambda: u32, max_a0: u32, depth: Option<u32>) -> Result<(), Failure> {
    if !finring::arith::is_prime(p) {
        return Err(Failure::Input(format!("{p} is not prime")));
    }
    if max_lambda == 0 || max_a0 == 0 {
        return Err(Failure::Input("--lambda and --a0 must be at least 1".into()));
    }
    let depth = depth.unwrap_or(if p == 2 { 2 } else { 1 });
    let builder = Builder::new(cli.cap);
    let mut rows = Vec::new();
    let mut failure = None;
    'grid: for lambda in 1..=max_lambda {
        for a0 in 1..=max_a0 {
            let ring = builder.galois_ring(p, a0 + 1, lambda)?;
            let outcome = verify_power_lemma(&ring, p, depth)?;
            let holds = outcome.holds;
            rows.push(json!({
                "ring": BuildRecipe::Galois { p, m: a0 + 1, lambda }.to_string(),
                "lambda": lambda,
                "a0": a0,
                "checked": outcome.checked,
                "holds": holds,
                "counterexample": outcome.counterexample,
            }));
            if !holds {
                let c = outcome.counterexample.expect("failing outcome carries a counterexample");
                failure = Some(format!(
                    "GR({p}^{}, {lambda}): mu = {}, l = {}: (1 + mu)^(p^l) = 1 is {} but p^l mu = 0 is {}",
                    a0 + 1,
                    c.mu_text,
                    c.l,
                    c.power_is_one,
                    !c.power_is_one
                ));
                break 'grid;
            }
        }
    }
    if cli.json {
        print_json(&json!({"p": p, "depth": depth, "pass": failure.is_none(), "rings": rows}));
    } else {
        for row in &rows {
            println!(
                "{:<12} checked {:>6}  {}",
                row["ring"].as_str().unwrap_or_default(),
                row["checked"],
                if row["holds"] == true { "ok" } else { "COUNTEREXAMPLE" }
            );
        }
        match &failure {
            Some(f) => println!("FAIL {f}"),
            None => println!("PASS"),
        }
    }
    failure.map_or(Ok(()), |f| Err(Failure::Mismatch(f)))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Construct { recipe, out } => construct(cli, recipe, out.as_ref()),
        Command::Analyze { path } => analyze(cli, path),
        Command::RealizeGroup { group } => realize_group(cli, group),
        Command::RealizeCardinality { n, char_primes } => realize_cardinality(cli, *n, char_primes.as_ref()),
        Command::CyclicTable { max } => cyclic_table(cli, *max),
        Command::DitorTable { max, odd } => ditor_table(cli, *max, *odd),
        Command::Verify { recipe } => verify(cli, recipe),
        Command::LemmaCheck { p, lambda, a0, depth } => lemma_check(cli, *p, *lambda, *a0, *depth),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
