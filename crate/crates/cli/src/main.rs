use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nearfact::criteria::evaluate_all;
use nearfact::scedf::{search_scedf, DifferenceFamily};
use nearfact::{
    compute_mate, dense_inverse, search_with, verify, GroupSpec, GroupSubset, MateAlgorithm, SearchOptions,
    SearchTask, Strategy,
};
use nearfact_cli::campaign::{self, CampaignConfig};
use nearfact_cli::catalog::{CatalogRecord, CatalogWriter};
use nearfact_cli::checkpoint::Checkpoint;
use nearfact_cli::{bench, table3};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nearfact", version, about = "Near-factorizations of finite abelian groups")]
struct Cli {
    /// Worker threads for searches.
    #[arg(long, global = true, env = "NEARFACT_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the mate of a set.
    Mate(MateArgs),
    /// Check whether A + B covers every nonzero element lambda times.
    Verify(VerifyArgs),
    /// Exhaustive search for (r, s, lambda)-near-factorizations.
    Search(SearchArgs),
    /// Evaluate the nonexistence criteria.
    Filters(FiltersArgs),
    /// Check a difference family, or search for families with m sets.
    Scedf(ScedfArgs),
    /// Run many searches from a TOML file or flags.
    Campaign(CampaignArgs),
    /// Verify the known index-2 near-factorizations.
    Table3(JsonFlag),
    /// Time the dense and sparse mate routes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct JsonFlag {
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmChoice {
    Dense,
    Sparse,
    Both,
}

#[derive(Args)]
struct MateArgs {
    #[arg(long)]
    group: GroupSpec,
    /// Element indices `0,3` or tuples `(0,1),(1,0)`.
    #[arg(long)]
    set: String,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
    #[arg(long, value_enum, default_value = "both")]
    algorithm: AlgorithmChoice,
    /// Print the distinct entries of the inverse walk matrix.
    #[arg(long)]
    show_inverse: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    group: GroupSpec,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, required_unless_present = "resume")]
    group: Option<GroupSpec>,
    #[arg(long, required_unless_present = "resume")]
    r: Option<u64>,
    #[arg(long, required_unless_present = "resume")]
    s: Option<u64>,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
    #[arg(long, default_value_t = Strategy::OrbitReduced)]
    strategy: Strategy,
    /// Restrict A to symmetric sets (default: only when lambda = 1).
    #[arg(long)]
    symmetric: Option<bool>,
    #[arg(long)]
    budget_secs: Option<u64>,
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Enumerate even when a criterion rules the task out.
    #[arg(long)]
    no_filters: bool,
    /// Report the number of equivalence classes among the finds.
    #[arg(long)]
    classify: bool,
    #[arg(long)]
    stop_at_first: bool,
    /// Where to write a checkpoint if the run stops early.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Resume the checkpoint at this path.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Append finds to this JSON-lines catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FiltersArgs {
    #[arg(long, conflicts_with = "order")]
    group: Option<GroupSpec>,
    #[arg(long, requires = "group")]
    r: Option<u64>,
    #[arg(long, requires = "group")]
    s: Option<u64>,
    #[arg(long)]
    order: Option<u64>,
    /// With `--order`, every abelian group of that order (CSV output).
    #[arg(long, requires = "order")]
    all_groups: bool,
}

#[derive(Args)]
struct ScedfArgs {
    #[arg(long)]
    group: Option<GroupSpec>,
    /// Sets separated by `|`, e.g. `1,4|2,3`.
    #[arg(long, requires = "group")]
    sets: Option<String>,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
    /// Search for families with this many sets in every group up to `--max-order`.
    #[arg(long, conflicts_with = "sets", requires = "max_order")]
    search_m: Option<usize>,
    #[arg(long)]
    max_order: Option<u64>,
}

#[derive(Args)]
struct CampaignArgs {
    /// TOML configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    orders: Vec<u64>,
    #[arg(long)]
    min_order: Option<u64>,
    #[arg(long)]
    max_order: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    groups: Vec<String>,
    /// Splits as `RxS`, comma separated.
    #[arg(long, value_delimiter = ',')]
    splits: Vec<String>,
    #[arg(long)]
    lambda: Option<u64>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    budget_secs: Option<u64>,
    #[arg(long)]
    include_cyclic: bool,
    #[arg(long)]
    filters_only: bool,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = bench::DEFAULT_GROUP)]
    group: GroupSpec,
    #[arg(long, default_value = bench::DEFAULT_SET)]
    set: String,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
    #[arg(long, default_value_t = 3)]
    runs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let workers = cli.workers;
    match cli.command {
        Command::Mate(a) => mate(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Search(a) => search_cmd(a, workers),
        Command::Filters(a) => filters(a),
        Command::Scedf(a) => scedf(a),
        Command::Campaign(a) => campaign_cmd(a, workers),
        Command::Table3(a) => table3_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn mate(a: MateArgs) -> Result<ExitCode> {
    let g = &a.group;
    let set = GroupSubset::parse(g, &a.set)?;
    let algorithms: &[MateAlgorithm] = match a.algorithm {
        AlgorithmChoice::Dense => &[MateAlgorithm::Dense],
        AlgorithmChoice::Sparse => &[MateAlgorithm::Sparse],
        AlgorithmChoice::Both => &[MateAlgorithm::Dense, MateAlgorithm::Sparse],
    };
    let mut results = Vec::new();
    for &alg in algorithms {
        let t = Instant::now();
        let res = compute_mate(g, &set, a.lambda, alg)?;
        results.push((res, t.elapsed()));
    }
    let inverse: Option<Vec<String>> = if a.show_inverse {
        dense_inverse(g, &set).map(|m| {
            let distinct: BTreeSet<String> = m.entries().map(|v| v.to_string()).collect();
            distinct.into_iter().collect()
        })
    } else {
        None
    };
    let agree = results.windows(2).all(|w| w[0].0.same_outcome(&w[1].0));
    if a.json {
        let out = json!({
            "group": g.literal(),
            "A": set.to_tuples(),
            "lambda": a.lambda,
            "results": results.iter().map(|(r, t)| json!({
                "algorithm": r.solver,
                "tag": r.tag,
                "B": r.mate.as_ref().map(|m| m.to_tuples()),
                "B_indices": r.mate.as_ref().map(|m| m.to_vec()),
                "ms": t.as_secs_f64() * 1e3,
            })).collect::<Vec<_>>(),
            "agree": agree,
            "inverse_entries": inverse,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("G = {}, A = {set}, lambda = {}", g.literal(), a.lambda);
        for (r, t) in &results {
            let b = r.mate.as_ref().map_or("-".to_string(), |m| m.to_string());
            println!("{:<7} {:<10} B = {b}  ({:.3} ms)", r.solver.to_string(), format!("{:?}", r.tag), t.as_secs_f64() * 1e3);
        }
        if let Some(v) = &inverse {
            println!("entries of X^-1: {}", v.join(" "));
        }
        if !agree {
            println!("routes disagree");
        }
    }
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn verify_cmd(a: VerifyArgs) -> Result<ExitCode> {
    let g = &a.group;
    let x = GroupSubset::parse(g, &a.a)?;
    let y = GroupSubset::parse(g, &a.b)?;
    let ok = verify(g, &x, &y, a.lambda);
    println!("{}", if ok { "valid" } else { "invalid" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn search_cmd(a: SearchArgs, workers: Option<usize>) -> Result<ExitCode> {
    let task = match &a.resume {
        Some(p) => Checkpoint::load(p)?.resumed_task(),
        None => {
            let (g, r, s) = (a.group.clone().unwrap(), a.r.unwrap(), a.s.unwrap());
            let t = SearchTask::new(&g, r, s, a.lambda, a.strategy)?;
            match a.symmetric {
                Some(b) => t.with_symmetric(b),
                None => t,
            }
        }
    };
    let opts = SearchOptions {
        workers,
        time_budget: a.budget_secs.map(Duration::from_secs),
        max_candidates: a.max_candidates,
        apply_filters: !a.no_filters,
        stop_at_first: a.stop_at_first,
        classify: a.classify,
        ..Default::default()
    };
    let rep = search_with(&task, &opts)?;
    if let Some(path) = &a.catalog {
        let w = CatalogWriter::spawn(path)?;
        let ms = rep.wall_time.as_millis() as u64;
        for nf in &rep.found {
            w.send(CatalogRecord::new(nf, task.strategy, ms))?;
        }
        w.finish()?;
    }
    let cp_path = a.checkpoint.as_ref().or(a.resume.as_ref());
    if let (Some(p), Some(c)) = (cp_path, rep.checkpoint) {
        Checkpoint::new(&task, c).save(p)?;
    }
    if a.json {
        let out = json!({
            "task": task.label(),
            "ruled_out_by": rep.ruled_out_by.map(|c| c.to_string()),
            "verdicts": rep.filter_verdicts,
            "candidates": rep.candidates_tested,
            "tags": rep.tags,
            "found": rep.found.iter().map(|nf| json!({"A": nf.a.to_tuples(), "B": nf.b.to_tuples()})).collect::<Vec<_>>(),
            "classes": rep.classes,
            "exhaustive": rep.exhaustive,
            "checkpoint": rep.checkpoint,
            "ms": rep.wall_time.as_secs_f64() * 1e3,
            "notes": rep.notes,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", task.label());
        if let Some(c) = rep.ruled_out_by {
            let v = rep.filter_verdicts.iter().find(|v| v.criterion == c).expect("fired verdict");
            println!("ruled out: {v}");
        } else {
            println!(
                "candidates {}  found {}  singular {}  non-binary {}  wrong-weight {}",
                rep.candidates_tested, rep.tags.found, rep.tags.singular, rep.tags.non_binary, rep.tags.wrong_weight
            );
            for nf in &rep.found {
                println!("A = {}  B = {}", nf.a, nf.b);
            }
            if let Some(k) = rep.classes {
                println!("{k} equivalence classes");
            }
            match (rep.exhaustive, rep.checkpoint) {
                (true, _) => println!("exhaustive"),
                (false, Some(c)) => println!("stopped at {c:?}"),
                (false, None) => println!("stopped"),
            }
        }
        for n in &rep.notes {
            println!("note: {n}");
        }
        println!("{:.3} s", rep.wall_time.as_secs_f64());
    }
    Ok(ExitCode::SUCCESS)
}

fn summary(g: &GroupSpec, r: u64, s: u64) -> String {
    let fired: Vec<String> = evaluate_all(g, r, s, 1)
        .into_iter()
        .filter(|v| v.is_ruled_out())
        .map(|v| v.criterion.to_string())
        .collect();
    if fired.is_empty() {
        "inconclusive".into()
    } else {
        format!("ruled-out:{}", fired.join(";"))
    }
}

fn filters(a: FiltersArgs) -> Result<ExitCode> {
    if let Some(g) = &a.group {
        let m = g.order() as u64 - 1;
        let (r, s) = match (a.r, a.s) {
            (Some(r), Some(s)) => (r, s),
            (Some(r), None) if r > 0 && m.is_multiple_of(r) => (r, m / r),
            (None, Some(s)) if s > 0 && m.is_multiple_of(s) => (m / s, s),
            _ => bail!("give --r and --s with r*s = {m}"),
        };
        if r * s != m {
            bail!("r*s = {} but |G| - 1 = {m}", r * s);
        }
        println!("{} ({r},{s})", g.literal());
        for v in evaluate_all(g, r, s, 1) {
            println!("{v}");
            if v.is_ruled_out() {
                println!("    witness: {}", serde_json::to_string(&v.witness)?);
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let Some(n) = a.order else { bail!("give --group or --order") };
    if !a.all_groups {
        bail!("--order needs --all-groups");
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["group", "r", "s", "verdict"])?;
    for g in GroupSpec::all_of_order(n)? {
        for r in (1..n).filter(|r| (n - 1) % r == 0 && r * r < n) {
            let s = (n - 1) / r;
            w.write_record([g.literal(), r.to_string(), s.to_string(), summary(&g, r, s)])?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn scedf(a: ScedfArgs) -> Result<ExitCode> {
    if let Some(m) = a.search_m {
        let max = a.max_order.expect("required by clap");
        let mut all = Vec::new();
        let mut total_families = 0;
        for n in 2..=max {
            for g in GroupSpec::all_of_order(n)? {
                let res = search_scedf(&g, m)?;
                total_families += res.families.len();
                if res.unblocked > 0 {
                    bail!("{}: a valid pair was not blocked", g.literal());
                }
                all.push(json!({
                    "group": g.literal(),
                    "parameters": res.parameters,
                    "pairs_checked": res.pairs_checked,
                    "families": res.families,
                }));
            }
        }
        println!("{}", serde_json::to_string_pretty(&json!({"m": m, "max_order": max, "families": total_families, "groups": all}))?);
        return Ok(ExitCode::SUCCESS);
    }
    let (Some(g), Some(sets)) = (&a.group, &a.sets) else { bail!("give --group and --sets, or --search-m") };
    let sets = sets.split('|').map(|s| GroupSubset::parse(g, s)).collect::<nearfact::Result<Vec<_>>>()?;
    let fam = DifferenceFamily::new(g, sets, a.lambda);
    let check = fam.check();
    let m = fam.m();
    let histograms: Vec<_> = check
        .histograms
        .iter()
        .map(|(j, h)| {
            let counts: serde_json::Map<String, serde_json::Value> = h
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(x, &c)| (g.decode(nearfact::ElementIndex(x)).to_string(), json!(c)))
                .collect();
            json!({"pair": format!("D(A{}, A{j})", (j + 1) % m.max(1)), "counts": counts})
        })
        .collect();
    let out = json!({
        "group": g.literal(),
        "m": m,
        "ell": fam.ell,
        "lambda": fam.lambda,
        "scedf": check.holds(),
        "violations": check.violations,
        "histograms": histograms,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if check.holds() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn parse_split(s: &str) -> Result<[u64; 2]> {
    let (r, t) = s.split_once(['x', 'X', ':']).with_context(|| format!("split `{s}` is not RxS"))?;
    Ok([r.trim().parse()?, t.trim().parse()?])
}

fn campaign_cmd(a: CampaignArgs, workers: Option<usize>) -> Result<ExitCode> {
    let mut cfg = match &a.config {
        Some(p) => CampaignConfig::from_toml_file(p)?,
        None => CampaignConfig::default(),
    };
    cfg.orders.extend(&a.orders);
    cfg.groups.extend(a.groups.iter().cloned());
    for s in &a.splits {
        cfg.splits.push(parse_split(s)?);
    }
    if a.min_order.is_some() || a.max_order.is_some() {
        cfg.min_order = a.min_order.or(cfg.min_order);
        cfg.max_order = a.max_order.or(cfg.max_order);
    }
    cfg.lambda = a.lambda.unwrap_or(cfg.lambda);
    cfg.strategy = a.strategy.unwrap_or(cfg.strategy);
    cfg.time_budget_secs = a.budget_secs.unwrap_or(cfg.time_budget_secs);
    cfg.skip_cyclic &= !a.include_cyclic;
    cfg.filters_only |= a.filters_only;
    cfg.workers = workers.or(cfg.workers);
    cfg.catalog = a.catalog.or(cfg.catalog);
    cfg.checkpoint_dir = a.checkpoint_dir.or(cfg.checkpoint_dir);
    cfg.csv = a.csv.or(cfg.csv);
    if cfg.orders.is_empty() && cfg.groups.is_empty() && cfg.min_order.is_none() {
        bail!("nothing to do: give --config, --orders, --min-order/--max-order or --groups");
    }
    let rep = campaign::run(&cfg)?;
    print!("{}", rep.text_table());
    if let Some(p) = &cfg.csv {
        println!("csv: {}", p.display());
    }
    if let Some(p) = &cfg.catalog {
        println!("catalog: {} new records in {}", rep.catalog_records, p.display());
    }
    std::io::stdout().flush()?;
    Ok(ExitCode::SUCCESS)
}

fn table3_cmd(a: JsonFlag) -> Result<ExitCode> {
    let t = Instant::now();
    let checks = table3::check_all()?;
    let ok = checks.iter().all(|c| c.ok());
    if a.json {
        println!("{}", serde_json::to_string_pretty(&json!({"lambda": table3::LAMBDA, "rows": checks, "all_verified": ok}))?);
    } else {
        for c in &checks {
            println!("{:<10} ({:>2},{:>2},{})  {}", c.group, c.r, c.s, table3::LAMBDA, if c.ok() { "verified" } else { "FAILED" });
        }
        println!("{} of {} rows verified in {:.3} s", checks.iter().filter(|c| c.ok()).count(), checks.len(), t.elapsed().as_secs_f64());
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn bench_cmd(a: BenchArgs) -> Result<ExitCode> {
    let set = GroupSubset::parse(&a.group, &a.set)?;
    let res = bench::run(&a.group, &set, a.lambda, a.runs)?;
    println!("{}", serde_json::to_string_pretty(&res)?);
    Ok(if res.identical { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
