use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use trilat::report::{self, Report, Status, SweepOptions};
use trilat::stabilizer::VerifyOptions;
use trilat::{classify, tracefield, Catalog, Family, GroupInstance, TrilatError, Word};

#[derive(Parser)]
#[command(name = "trilat", version, about = "Lattice complex hyperbolic triangle groups: checks and table reproduction")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Starting precision for interval sign refinement.
    #[arg(long, global = true, value_name = "BITS")]
    precision_bits: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect the embedded (or overridden) data files.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Classify the isometry given by a word.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        word: String,
        /// Largest projective order searched.
        #[arg(long, default_value_t = classify::DEFAULT_ORDER_CAP)]
        cap: u32,
    },
    /// Least braid length of two words, and the center element.
    Braid {
        #[command(flatten)]
        group: GroupArgs,
        a: String,
        b: String,
        #[arg(long, default_value_t = report::BRAID_SEARCH_MAX)]
        nmax: u32,
    },
    /// Mirror stabilizer checks.
    Stabilizer {
        #[command(subcommand)]
        cmd: StabilizerCmd,
    },
    /// Q(Tr Γ²) of a mirror stabilizer.
    Tracefield {
        #[command(flatten)]
        group: GroupArgs,
        /// Reflection whose mirror is stabilized.
        #[arg(long)]
        mirror: String,
        /// Stabilizer generators; defaults to the table row for this mirror.
        #[arg(long, num_args = 1..)]
        generators: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Verify every stabilizer table and write one report per table.
    ReproduceTables {
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        param: Option<String>,
        /// Keep only checks of this block.
        #[arg(long)]
        table: Option<String>,
        /// Directory for the per-table JSON reports.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
}

#[derive(Subcommand)]
enum StabilizerCmd {
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        /// Keep only rows of this block.
        #[arg(long)]
        table: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
struct GroupArgs {
    family: Family,
    param: String,
    p: u32,
}

#[derive(Args, Clone, Copy)]
struct SearchArgs {
    /// Longest word explored in stabilizers.
    #[arg(long, default_value_t = 8)]
    maxlen: usize,
    /// Largest rotation or projective order searched.
    #[arg(long, default_value_t = classify::DEFAULT_ORDER_CAP)]
    cap: u32,
}

impl SearchArgs {
    fn verify(self) -> VerifyOptions {
        VerifyOptions { order_cap: self.cap, max_len: self.maxlen, ..VerifyOptions::default() }
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<TrilatError> for Failure {
    fn from(e: TrilatError) -> Failure {
        match e {
            TrilatError::Parse { .. } | TrilatError::UnknownGroup(_) | TrilatError::Unavailable { .. } | TrilatError::Data(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(bits) = cli.precision_bits {
        cyclo::set_sign_start_bits(bits);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn build(cat: &Catalog, g: &GroupArgs) -> Result<GroupInstance, Failure> {
    Ok(cat.build(g.family, &g.param, g.p)?)
}

fn word(s: &str) -> Result<Word, Failure> {
    Ok(Word::parse(s)?)
}

/// Ok(false) when a check failed.
fn run(cli: &Cli) -> Result<bool, Failure> {
    let cat = trilat::catalog()?;
    match &cli.cmd {
        Cmd::Catalog { cmd: CatalogCmd::List } => {
            let rows: Vec<_> = cat
                .parameters
                .iter()
                .map(|q| {
                    let blocks: Vec<&str> = cat.blocks.iter().filter(|b| b.param == q.name).map(|b| b.id.as_str()).collect();
                    let sides: Vec<String> =
                        cat.sides.get(&q.name).map(|v| v.iter().map(|s| s.label()).collect()).unwrap_or_default();
                    json!({
                        "family": q.family,
                        "param": q.name,
                        "value": q.closed_form,
                        "p": q.p_values,
                        "sides": sides,
                        "blocks": blocks,
                    })
                })
                .collect();
            emit(cli.json, &rows, || {
                let width = cat.parameters.iter().map(|q| q.closed_form.chars().count()).max().unwrap_or(0);
                cat.parameters
                    .iter()
                    .map(|q| {
                        let ps: Vec<String> = q.p_values.iter().map(|p| p.to_string()).collect();
                        format!("{} {:<10} {:<width$} p = {}", q.family, q.name, q.closed_form, ps.join(", "))
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(true)
        }
        Cmd::Classify { group, word: w, cap } => {
            let g = build(cat, group)?;
            let w = word(w)?;
            let m = w.evaluate(&g)?;
            let class = classify::classify_with_cap(&m, &g.form, *cap)?;
            emit(cli.json, &json!({ "group": g.id(), "word": w, "class": class }), || {
                format!("{} in {}: {}, order {}", w, g.id(), class.kind.name(), class.order)
            });
            Ok(true)
        }
        Cmd::Braid { group, a, b, nmax } => {
            let g = build(cat, group)?;
            let (wa, wb) = (word(a)?, word(b)?);
            let (ma, mb) = (wa.evaluate(&g)?, wb.evaluate(&g)?);
            let n = classify::braids(&ma, &mb, *nmax);
            let center = n.map(|n| classify::center_element(&ma, &mb, n, &g.form));
            let center_json = match &center {
                Some(Ok(r)) => serde_json::to_value(r).expect("serializable"),
                Some(Err(e)) => json!({ "error": e.to_string() }),
                None => serde_json::Value::Null,
            };
            emit(cli.json, &json!({ "group": g.id(), "a": wa, "b": wb, "n": n, "center": center_json }), || {
                let mut s = match n {
                    Some(n) => format!("n={n}"),
                    None => format!("no braid relation up to {nmax}"),
                };
                match &center {
                    Some(Ok(r)) => s += &format!("; center element {} (box product {:?})", r.class.kind.name(), r.box_position),
                    Some(Err(e)) => s += &format!("; center: {e}"),
                    None => {}
                }
                s
            });
            Ok(n.is_some())
        }
        Cmd::Stabilizer { cmd: StabilizerCmd::Verify { group, table, search } } => {
            let g = build(cat, group)?;
            let opts = search.verify();
            let mut checks = Vec::new();
            let rows: Vec<_> = cat
                .stabilizer_rows(&g)
                .into_iter()
                .filter(|r| table.as_ref().map_or(true, |t| &r.block_id == t))
                .collect();
            if let Some(t) = table {
                if rows.is_empty() {
                    return Err(Failure::Usage(format!("no row of block {t} for {}", g.id())));
                }
            } else {
                checks.extend(report::group_checks(cat, &g));
            }
            for row in rows {
                checks.extend(report::row_checks(&g, row, &opts));
            }
            let r = Report::new(g.id(), checks);
            print_report(cli.json, &r);
            Ok(r.passed())
        }
        Cmd::Tracefield { group, mirror, generators, search } => {
            let g = build(cat, group)?;
            let mirror = word(mirror)?;
            let row = cat.stabilizer_rows(&g).into_iter().find(|r| r.reflection_word == mirror);
            let gens: Vec<Word> = if generators.is_empty() {
                match row {
                    Some(r) => r.generator_words.clone(),
                    None => return Err(Failure::Usage(format!("no table row for mirror {mirror}; pass --generators"))),
                }
            } else {
                generators.iter().map(|s| word(s)).collect::<Result<_, _>>()?
            };
            let pair = row.and_then(|r| r.pair.as_ref());
            let opts = search.verify();
            let r = tracefield::trace_field(&g, &mirror, pair, &gens, opts.max_len, opts.per_level)?;
            let claim = row.map(|r| &r.tracefield_spec);
            let check = claim.map(|c| tracefield::check_claim(&r.field, c)).transpose()?;
            let samples: Vec<_> = r.generators.iter().map(|s| json!({ "word": s.word, "trace_sq": s.trace_sq.to_string() })).collect();
            emit(
                cli.json,
                &json!({
                    "group": g.id(),
                    "mirror": mirror,
                    "generators": gens,
                    "degree": r.field.degree,
                    "conductor": r.field.conductor,
                    "degrees_by_length": r.degrees,
                    "stabilized": r.stabilized,
                    "samples": r.samples,
                    "field_generators": samples,
                    "table_claim": claim.map(|c| c.to_string()),
                    "claim_holds": check.as_ref().map(|c| c.holds()),
                }),
                || {
                    let mut s = format!(
                        "degree {} (conductor {}), degrees by length {:?}, stabilized {}",
                        r.field.degree, r.field.conductor, r.degrees, r.stabilized
                    );
                    for t in &r.generators {
                        s += &format!("\n  tr² {} = {}", t.word, t.trace_sq);
                    }
                    if let (Some(c), Some(k)) = (claim, &check) {
                        s += &format!("\ntable: {c}, holds: {}{}", k.holds(), if k.notes.is_empty() { String::new() } else { format!(" ({})", k.notes) });
                    }
                    s
                },
            );
            Ok(true)
        }
        Cmd::ReproduceTables { family, param, table, out, workers, search } => {
            let mut opts = SweepOptions { verify: search.verify(), ..SweepOptions::default() };
            if let Some(w) = workers {
                opts.workers = (*w).max(1);
            }
            if let Some(t) = table {
                if cat.block(t).is_none() {
                    return Err(Failure::Usage(format!("unknown block {t}")));
                }
            }
            let mut reports = report::reproduce_tables(cat, param.as_deref(), &opts)?;
            if let Some(f) = family {
                reports.retain(|r| r.group.starts_with(&format!("{f}/")));
            }
            if let Some(t) = table {
                let prefix = format!("{t}/");
                for r in &mut reports {
                    r.checks.retain(|c| c.check_id.starts_with(&prefix));
                }
                reports.retain(|r| !r.checks.is_empty());
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                for r in &reports {
                    let mut golden = r.clone();
                    golden.timing_ms = None;
                    let name = r.group.replace('/', "-") + ".json";
                    std::fs::write(dir.join(&name), golden.to_json())
                        .map_err(|e| Failure::Compute(format!("{name}: {e}")))?;
                }
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
            } else {
                for r in &reports {
                    for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                        println!("FAIL {}: {}", c.check_id, c.details);
                    }
                    println!(
                        "{}: {} pass, {} fail, {} unverified ({} ms)",
                        r.group,
                        r.count(Status::Pass),
                        r.count(Status::Fail),
                        r.count(Status::Unverified),
                        r.timing_ms.unwrap_or(0)
                    );
                }
            }
            Ok(reports.iter().all(Report::passed))
        }
    }
}

fn print_report(json: bool, r: &Report) {
    if json {
        print!("{}", r.to_json());
        return;
    }
    for c in &r.checks {
        println!("{:<10} {}: {}", c.status.to_string(), c.check_id, c.details);
    }
    println!(
        "{}: {} pass, {} fail, {} unverified",
        r.group,
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Unverified)
    );
}
