use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use csknot::algebra::Algebra;
use csknot::config::{load_knot, Format, RunConfig};
use csknot::engine::{compute_z, compute_zhat, AnomalyTable, InvariantReport};
use csknot::error::{Error, Result};
use csknot::graph::{enumerate, EnumerationCaps};
use csknot::verify::{self, Check, Suite};

#[derive(Parser)]
#[command(name = "csknot", version, about = "Configuration-space integral invariants of knots")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Monte-Carlo samples per integral.
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: CSKNOT_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Knot file or preset name.
    #[arg(long, global = true)]
    knot: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Anomaly table JSON merged over the built-in entries.
    #[arg(long, global = true)]
    anomaly_table: Option<PathBuf>,
    /// Highest order the engine may integrate (hard limit 3).
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Report the unframed `Z` instead of `Ẑ`.
    #[arg(long, global = true)]
    unframed: bool,
    /// Save the effective configuration before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List trivalent Wilson graphs of a degree.
    Graphs,
    /// Dimension and basis of the diagram space of a degree.
    Algebra,
    /// Invariant of a knot through an order.
    Invariant,
    /// Monte-Carlo anomaly coefficients of the primitive graphs of a degree.
    Anomaly,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        suite: Suite,
    },
}

fn settle(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    macro_rules! over {
        ($($f:ident),*) => {$(if let Some(v) = cli.$f.clone() { c.$f = v; })*};
    }
    over!(degree, order, samples, seed, format, max_order);
    if cli.threads.is_some() {
        c.threads = cli.threads;
    }
    if cli.knot.is_some() {
        c.knot = cli.knot.clone();
    }
    if cli.output.is_some() {
        c.output = cli.output.clone();
    }
    if cli.anomaly_table.is_some() {
        c.anomaly_table = cli.anomaly_table.clone();
    }
    if cli.unframed {
        c.framed = false;
    }
    Ok(c)
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, x) in r.iter().enumerate() {
            w[i] = w[i].max(x.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().zip(&w).map(|(c, n)| format!("{c:<n$}", n = *n)).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(w.iter().map(|n| "-".repeat(*n)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect());
    for r in rows {
        out += &line(r.iter().map(|s| s.as_str()).collect());
    }
    out
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_graphs(c: &RunConfig) -> Result<String> {
    let caps = EnumerationCaps::default();
    let graphs = enumerate(c.degree, &caps)?;
    let rows: Vec<serde_json::Value> = graphs
        .iter()
        .map(|g| {
            let (aut, aut_plus) = g.automorphisms();
            json!({"code": g.code(), "external": g.n_ext(), "internal": g.n_int(), "aut": aut, "aut_plus": aut_plus, "class": g.classify().to_string()})
        })
        .collect();
    let note = (c.degree == 0).then_some("degree 0 holds only the empty diagram, the unit");
    match c.format {
        Format::Json => json(&json!({"degree": c.degree, "count": rows.len(), "graphs": rows, "note": note})),
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| ["code", "aut", "aut_plus", "class"].iter().map(|k| r[k].to_string().trim_matches('"').to_string()).collect())
                .collect();
            let mut s = table(&["graph", "|Aut|", "|Aut+|", "class"], &cells);
            if let Some(n) = note {
                s += &format!("# {n}\n");
            }
            Ok(s)
        }
    }
}

fn cmd_algebra(c: &RunConfig) -> Result<String> {
    if c.degree == 0 {
        let v = json!({"degree": 0, "dim": 1, "basis": ["1"]});
        return match c.format {
            Format::Json => json(&v),
            Format::Table => Ok(table(&["degree", "dim", "basis"], &[vec!["0".into(), "1".into(), "1".into()]])),
        };
    }
    if c.degree > EnumerationCaps::default().max_degree {
        return Err(Error::Cap(format!("degree {} exceeds the enumeration cap {}", c.degree, EnumerationCaps::default().max_degree)));
    }
    let alg = Algebra::new(c.degree)?;
    let b = alg.basis(c.degree)?;
    let labels = b.labels();
    match c.format {
        Format::Json => json(&json!({"degree": c.degree, "dim": b.dim(), "graphs": b.graphs().len(), "relations": b.relations().len(), "basis": labels})),
        Format::Table => {
            let rows: Vec<Vec<String>> = labels.iter().enumerate().map(|(i, l)| vec![i.to_string(), l.clone()]).collect();
            Ok(format!("degree {}  dim {}\n", c.degree, b.dim()) + &table(&["#", "basis element"], &rows))
        }
    }
}

fn anomaly_table(alg: &Algebra, c: &RunConfig) -> Result<AnomalyTable> {
    let mut t = AnomalyTable::builtin(alg, c.order)?;
    if let Some(p) = &c.anomaly_table {
        t.merge(&AnomalyTable::load(p)?);
    }
    Ok(t)
}

fn invariant_table(r: &InvariantReport) -> String {
    let mut rows = Vec::new();
    for co in r.coefficients.iter().filter(|co| co.degree >= 1) {
        for (i, l) in co.basis.iter().enumerate() {
            rows.push(vec![co.degree.to_string(), l.clone(), format!("{:.6}", co.values[i]), format!("{:.6}", co.std_errors[i])]);
        }
    }
    let head = format!("{:?} of {}  seed {}  samples {}\n", r.kind, r.knot.name, r.provenance.seed, r.provenance.samples);
    head + &table(&["degree", "basis", "value", "std_error"], &rows)
}

fn cmd_invariant(c: &RunConfig) -> Result<String> {
    let name = c.knot.as_deref().ok_or_else(|| Error::Input("no knot given (--knot FILE|PRESET)".into()))?;
    let k = load_knot(name)?;
    let opts = c.engine();
    let alg = Algebra::new(c.order.max(1))?;
    let r = if c.framed {
        compute_zhat(&alg, &k, c.order, &opts, &anomaly_table(&alg, c)?)?
    } else {
        compute_z(&alg, &k, c.order, &opts)?
    };
    match c.format {
        Format::Json => json(&r),
        Format::Table => Ok(invariant_table(&r)),
    }
}

fn cmd_anomaly(c: &RunConfig) -> Result<String> {
    if c.degree == 0 {
        return Err(Error::Input("anomaly coefficients start at degree 1".into()));
    }
    let alg = Algebra::new(c.degree)?;
    let t = AnomalyTable::measure(&alg, c.degree, &c.engine().mc())?;
    match c.format {
        Format::Json => json(&t),
        Format::Table => {
            let rows: Vec<Vec<String>> = t
                .entries
                .iter()
                .map(|e| vec![e.graph.clone(), e.degree.to_string(), format!("{:.6}", e.value), format!("{:.6}", e.std_error), format!("{:?}", e.method)])
                .collect();
            Ok(table(&["graph", "degree", "f", "std_error", "method"], &rows))
        }
    }
}

fn cmd_verify(c: &RunConfig, suite: Suite) -> Result<(String, bool)> {
    let checks = verify::run(suite, c)?;
    let ok = checks.iter().all(|x| x.pass);
    let out = match c.format {
        Format::Json => json(&json!({"suite": suite, "pass": ok, "checks": checks}))?,
        Format::Table => {
            let rows: Vec<Vec<String>> = checks.iter().map(check_row).collect();
            table(&["suite", "check", "measured", "expected", "tolerance", "result"], &rows)
                + &format!("{} of {} checks passed\n", checks.iter().filter(|x| x.pass).count(), checks.len())
        }
    };
    Ok((out, ok))
}

fn check_row(x: &Check) -> Vec<String> {
    vec![
        x.suite.clone(),
        x.name.clone(),
        format!("{:.6e}", x.measured),
        format!("{:.6e}", x.expected),
        format!("{:.3e}", x.tolerance),
        if x.pass { "PASS" } else { "FAIL" }.into(),
    ]
}

fn emit(c: &RunConfig, text: &str) -> Result<()> {
    match &c.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let c = settle(cli)?;
    if let Some(p) = &cli.save_config {
        c.save(p)?;
    }
    if let Some(n) = c.thread_count()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    }
    let (text, ok) = match &cli.command {
        Command::Graphs => (cmd_graphs(&c)?, true),
        Command::Algebra => (cmd_algebra(&c)?, true),
        Command::Invariant => (cmd_invariant(&c)?, true),
        Command::Anomaly => (cmd_anomaly(&c)?, true),
        Command::Verify { suite } => cmd_verify(&c, *suite)?,
    };
    emit(&c, &text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("csknot: {e}");
            ExitCode::from(match e {
                Error::Cap(_) => 2,
                _ => 1,
            })
        }
    }
}
