use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use arrweb::abelian::{self, analyze, markdown_row, markdown_table, AnalysisOptions, ComponentSummary, InvariantReport, TABLE_HEADER};
use arrweb::arrangement::{gen, parse, serialize, CurveArrangement, Family};
use arrweb::exactla::{parse_rational, Rational};
use arrweb::resonance::{find_components, resonance_closure, ClosureOptions, ResonanceError, SearchOptions};
use arrweb::web::{classic_bounds, is_ordinary, rank_upper_bound, stable_spectrum};

#[derive(Parser)]
#[command(name = "arrweb", version, about = "Resonance webs of arrangements and their abelian relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated arrangement as JSON.
    Gen {
        family: FamilyName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full analysis of an arrangement file (`-` reads stdin).
    Analyze {
        input: String,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Resonance components and the closure.
    Components {
        input: String,
        #[command(flatten)]
        run: RunFlags,
    },
    /// ℓ^j spectrum and rank bounds.
    Bounds {
        input: String,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Recompute the reference table and compare every cell.
    Table {
        #[command(flatten)]
        run: RunFlags,
    },
    /// Rank checks on the braid arrangements.
    Theorem1 {
        #[arg(long = "n", value_delimiter = ',', default_values_t = vec![2, 3, 4])]
        ns: Vec<usize>,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Braid,
    K5,
    BolExt,
    PLambda,
    Nonfano,
    A0,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args, Clone)]
struct RunFlags {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    log_max: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    rat_max_order: u32,
    #[arg(long, overrides_with = "no_closure")]
    closure: bool,
    #[arg(long, overrides_with = "closure")]
    no_closure: bool,
    #[arg(long)]
    twisted: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Pencil search budget in visited nodes.
    #[arg(long, default_value_t = SearchOptions::default().budget)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RunFlags {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            log_max: self.log_max,
            rat_max_order: self.rat_max_order,
            closure: !self.no_closure,
            twisted: self.twisted,
            seed: self.seed,
            search: SearchOptions { budget: self.budget, ..SearchOptions::default() },
            ..AnalysisOptions::default()
        }
    }

    fn flags_json(&self) -> Value {
        json!({
            "log_max": self.log_max,
            "rat_max_order": self.rat_max_order,
            "closure": !self.no_closure,
            "twisted": self.twisted,
            "seed": self.seed,
            "budget": self.budget,
        })
    }
}

enum Failure {
    Input(anyhow::Error),
    Budget(anyhow::Error, Value),
    Check(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) | Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(..) => 3,
        }
    }
}

fn is_budget(e: &abelian::AbelianError) -> bool {
    matches!(
        e,
        abelian::AbelianError::Resonance(ResonanceError::BudgetExceeded { .. })
            | abelian::AbelianError::Sampling
            | abelian::AbelianError::Web(arrweb::web::WebError::RejectionBudget(_))
    )
}

fn classify(e: abelian::AbelianError, label: &str, flags: &RunFlags) -> Failure {
    if is_budget(&e) {
        let partial = json!({ "label": label, "incomplete": true, "error": e.to_string(), "flags": flags.flags_json() });
        return Failure::Budget(e.into(), partial);
    }
    Failure::Other(e.into())
}

fn family(name: FamilyName, n: Option<usize>, m: Option<usize>, lambda: Option<&str>) -> anyhow::Result<Family> {
    Ok(match name {
        FamilyName::Braid => Family::Braid(n.unwrap_or(2)),
        FamilyName::K5 => Family::K5(None),
        FamilyName::BolExt => Family::BolExt(m.unwrap_or(1)),
        FamilyName::PLambda => {
            let l: Rational = parse_rational(lambda.unwrap_or("2")).map_err(|e| anyhow!("--lambda: {e}"))?;
            Family::PLambda(l)
        }
        FamilyName::Nonfano => Family::NonFano,
        FamilyName::A0 => Family::A0,
    })
}

fn read_input(input: &str) -> Result<CurveArrangement, Failure> {
    let bytes = if input == "-" {
        let mut b = Vec::new();
        std::io::stdin().read_to_end(&mut b).map_err(|e| Failure::Input(e.into()))?;
        b
    } else {
        std::fs::read(input).with_context(|| format!("reading {input}")).map_err(Failure::Input)?
    };
    parse(&bytes).map_err(|e| Failure::Input(anyhow!("{input}: {e}")))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(Failure::Other),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn report_json(rep: &InvariantReport, flags: &RunFlags) -> Value {
    let mut v = serde_json::to_value(rep).expect("serializable");
    v["flags"] = flags.flags_json();
    v
}

fn report_md(rep: &InvariantReport) -> String {
    let bol = rep.bol.map_or("-".to_string(), |b| b.to_string());
    format!(
        "{TABLE_HEADER}\n{}\n\nrank_lower = {}, rank_upper = {}, bol = {bol}, residual = {}, seed = {}\n",
        markdown_row(rep),
        rep.rank_lower,
        rep.rank_upper,
        rep.residual,
        rep.seed
    )
}

fn cmd_analyze(input: &str, flags: &RunFlags) -> Result<(), Failure> {
    let ca = read_input(input)?;
    let rep = match analyze(&ca, &flags.options()) {
        Ok(r) => r,
        Err(e) => {
            let f = classify(e, ca.label(), flags);
            if let Failure::Budget(_, partial) = &f {
                emit(&pretty(partial), flags.output.as_ref())?;
            }
            return Err(f);
        }
    };
    let text = match flags.format {
        Format::Json => pretty(&report_json(&rep, flags)),
        Format::Md => report_md(&rep),
    };
    emit(&text, flags.output.as_ref())
}

fn cmd_components(input: &str, flags: &RunFlags) -> Result<(), Failure> {
    let ca = read_input(input)?;
    let opts = flags.options();
    let (comps, stats) = find_components(&ca, &opts.search).map_err(|e| classify(e.into(), ca.label(), flags))?;
    let closure = if opts.closure {
        let cd = resonance_closure(&ca, &comps, &ClosureOptions::default()).map_err(|e| Failure::Other(e.into()))?;
        json!({
            "curves": cd.closure_curves.iter().map(|c| c.polynomial().to_string()).collect::<Vec<_>>(),
            "closed_dims": cd.closed_dims,
        })
    } else {
        Value::Null
    };
    let local = comps.iter().filter(|c| c.is_local()).count();
    let v = json!({
        "label": ca.label(),
        "k": comps.len(),
        "local": local,
        "nonlocal": comps.len() - local,
        "components": comps.iter().map(ComponentSummary::of).collect::<Vec<_>>(),
        "closure": closure,
        "search_nodes": stats.nodes,
        "flags": flags.flags_json(),
    });
    let text = match flags.format {
        Format::Json => pretty(&v),
        Format::Md => {
            let mut s = format!("{}: k = {} ({} local, {} non-local)\n\n| # | kind | dim | degree |\n|---|---|---|---|\n", ca.label(), comps.len(), local, comps.len() - local);
            for (i, c) in comps.iter().enumerate() {
                s.push_str(&format!("| {i} | {} | {} | {} |\n", if c.is_local() { "local" } else { "nonlocal" }, c.dimension, c.degree()));
            }
            s
        }
    };
    emit(&text, flags.output.as_ref())
}

fn cmd_bounds(input: &str, flags: &RunFlags) -> Result<(), Failure> {
    let ca = read_input(input)?;
    let opts = flags.options();
    let (comps, _) = find_components(&ca, &opts.search).map_err(|e| classify(e.into(), ca.label(), flags))?;
    let (js, agree) =
        stable_spectrum(&comps, &ca, opts.seed, opts.seeds).map_err(|e| classify(e.into(), ca.label(), flags))?;
    let n = ca.ambient_dim();
    let cb = classic_bounds(js.k as u64, n as u64);
    let v = json!({
        "label": ca.label(),
        "k": js.k,
        "ell": js.ell,
        "seeds_agree": agree,
        "ordinary": is_ordinary(&js, n),
        "rank_upper": rank_upper_bound(&js),
        "classic": cb,
        "flags": flags.flags_json(),
    });
    let text = match flags.format {
        Format::Json => pretty(&v),
        Format::Md => format!(
            "{}: k = {}, ℓ = {:?}, rank ≤ {}, Bol {}, Chern {}, Cavalier–Lehmann {}\n",
            ca.label(),
            js.k,
            js.ell,
            rank_upper_bound(&js),
            cb.bol,
            cb.chern,
            cb.cavalier_lehmann
        ),
    };
    emit(&text, flags.output.as_ref())
}

/// `(k; Log¹, Log¹bar, Log², Log²bar, Log³, Log³bar, Rat, Mixed, Twisted)`.
const REFERENCE: [(&str, [u64; 10]); 7] = [
    ("A0,5", [5, 5, 5, 1, 1, 0, 0, 0, 0, 0]),
    ("B6", [6, 6, 6, 2, 2, 0, 0, 2, 0, 0]),
    ("B7", [7, 7, 7, 3, 3, 0, 0, 5, 0, 0]),
    ("B8", [8, 8, 8, 4, 4, 0, 0, 9, 0, 0]),
    ("P", [8, 11, 11, 5, 5, 0, 0, 4, 1, 0]),
    ("F", [9, 12, 12, 9, 9, 2, 2, 4, 0, 1]),
    ("K5", [10, 16, 20, 5, 15, 0, 1, 0, 0, 0]),
];

const COLUMNS: [&str; 10] = ["k", "Log1", "Log1bar", "Log2", "Log2bar", "Log3", "Log3bar", "Rat", "Mixed", "Twisted"];

fn table_families() -> Vec<Family> {
    vec![
        Family::Braid(2),
        Family::BolExt(1),
        Family::BolExt(2),
        Family::BolExt(3),
        Family::PLambda(Rational::from_integer(2.into())),
        Family::NonFano,
        Family::K5(None),
    ]
}

fn run_parallel(fams: &[Family], opts: &AnalysisOptions, jobs: usize) -> Vec<Result<InvariantReport, abelian::AbelianError>> {
    let run = |f: &Family| -> Result<InvariantReport, abelian::AbelianError> {
        let ca = gen(f).map_err(arrweb::resonance::ResonanceError::from)?;
        analyze(&ca, opts)
    };
    if jobs <= 1 {
        return fams.iter().map(run).collect();
    }
    let mut out: Vec<Option<Result<InvariantReport, abelian::AbelianError>>> = vec![None; fams.len()];
    let chunk = fams.len().div_ceil(jobs);
    std::thread::scope(|s| {
        for (fs, slots) in fams.chunks(chunk).zip(out.chunks_mut(chunk)) {
            let run = &run;
            s.spawn(move || {
                for (f, slot) in fs.iter().zip(slots.iter_mut()) {
                    *slot = Some(run(f));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("filled")).collect()
}

fn cmd_table(flags: &RunFlags) -> Result<(), Failure> {
    let mut opts = flags.options();
    opts.twisted = true;
    let results = run_parallel(&table_families(), &opts, flags.jobs);
    let mut reps = Vec::new();
    for (r, (label, _)) in results.into_iter().zip(REFERENCE) {
        reps.push(r.map_err(|e| classify(e, label, flags))?);
    }
    let mut mismatches = Vec::new();
    for (rep, (label, want)) in reps.iter().zip(REFERENCE) {
        for ((col, got), want) in COLUMNS.iter().zip(rep.table_cells()).zip(want) {
            if got != want {
                mismatches.push(format!("{label} {col}: computed {got}, reference {want}"));
            }
        }
    }
    let text = match flags.format {
        Format::Json => pretty(&json!({
            "rows": reps.iter().map(|r| report_json(r, flags)).collect::<Vec<_>>(),
            "mismatches": mismatches,
        })),
        Format::Md => markdown_table(&reps),
    };
    emit(&text, flags.output.as_ref())?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(mismatches.join("\n")))
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn theorem1_formula(n: u64) -> u64 {
    3 * binom(n + 3, 4) - binom(n + 2, 3) - binom(n + 1, 2) - n
}

fn cmd_theorem1(ns: &[usize], flags: &RunFlags) -> Result<(), Failure> {
    let opts = flags.options();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &n in ns {
        if n < 2 {
            return Err(Failure::Input(anyhow!("theorem1 needs n ≥ 2, got {n}")));
        }
        let ca = gen(&Family::Braid(n)).map_err(|e| Failure::Input(e.into()))?;
        let (comps, _) = find_components(&ca, &opts.search).map_err(|e| classify(e.into(), ca.label(), flags))?;
        let (js, agree) =
            stable_spectrum(&comps, &ca, opts.seed, opts.seeds).map_err(|e| classify(e.into(), ca.label(), flags))?;
        let fibers: Vec<_> = comps.iter().map(|c| c.fibers.clone()).collect();
        let r = ca.num_curves();
        let log1 = abelian::log_dim(&fibers, r, 1, false).dim as u64;
        let log2 = abelian::log_dim(&fibers, r, 2, false).dim as u64;
        let formula = theorem1_formula(n as u64);
        let upper = rank_upper_bound(&js);
        let ell_ok = js.ell.iter().enumerate().all(|(j, &l)| l as u64 == binom((n + j) as u64, n as u64 - 1));
        let checks = [
            ("components", comps.len() as u64 == binom(n as u64 + 3, 4)),
            ("ell", ell_ok),
            ("ordinary", is_ordinary(&js, n)),
            ("rank_upper", upper == formula),
            ("log1_plus_log2", log1 + log2 == formula),
        ];
        for (name, ok) in &checks {
            if !ok {
                failed.push(format!("n={n} {name}"));
            }
        }
        rows.push(json!({
            "n": n,
            "k": comps.len(),
            "ell": js.ell,
            "seeds_agree": agree,
            "rank_upper": upper,
            "log1": log1,
            "log2": log2,
            "formula": formula,
            "checks": checks.iter().map(|(k, ok)| (k.to_string(), json!(if *ok { "PASS" } else { "FAIL" }))).collect::<serde_json::Map<_, _>>(),
        }));
    }
    let text = match flags.format {
        Format::Json => pretty(&json!({ "rows": rows, "flags": flags.flags_json() })),
        Format::Md => {
            let mut s = String::from("| n | k | ℓ | Log¹ | Log² | rank ≤ | formula | status |\n|---|---|---|---|---|---|---|---|\n");
            for r in &rows {
                let ok = r["checks"].as_object().expect("map").values().all(|v| v == "PASS");
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    r["n"], r["k"], r["ell"], r["log1"], r["log2"], r["rank_upper"], r["formula"],
                    if ok { "PASS" } else { "FAIL" }
                ));
            }
            s
        }
    };
    emit(&text, flags.output.as_ref())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("\n")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { family: name, n, m, lambda, output } => {
            let f = family(name, n, m, lambda.as_deref()).map_err(Failure::Input)?;
            let ca = gen(&f).map_err(|e| Failure::Input(e.into()))?;
            let bytes = serialize(&ca);
            let text = String::from_utf8(bytes).map_err(|e| Failure::Other(e.into()))?;
            emit(&text, output.as_ref())
        }
        Command::Analyze { input, run } => cmd_analyze(&input, &run),
        Command::Components { input, run } => cmd_components(&input, &run),
        Command::Bounds { input, run } => cmd_bounds(&input, &run),
        Command::Table { run } => cmd_table(&run),
        Command::Theorem1 { ns, run } => cmd_theorem1(&ns, &run),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Budget(e, _) => eprintln!("incomplete: {e:#}"),
                Failure::Check(s) => eprintln!("check failed:\n{s}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
