use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use meroconn::cohomology::{certified_dims, derham_dims, truncated_complex_dims, LatticeWindow};
use meroconn::connection::Connection;
use meroconn::json::{
    connection_from_str, connection_json, dims_json, field_json, gauge_parse, parse_text, to_text, tree_json,
};
use meroconn::random::{instance_rng, random_connection, random_spec, ConnectionSpec, LeadKind};
use meroconn::reduction::driver::{reduce_all_branches, Leaf, ReductionTree};
use meroconn::reduction::stability::{known_sharp, stability_constant};
use meroconn::suites::{run_suite, SUITES};
use meroconn::Error;

#[derive(Parser)]
#[command(name = "meroconn", version, about = "Formal reduction and de Rham cohomology of meromorphic connections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Truncate the input connection to this precision.
    #[arg(long, global = true, allow_hyphen_values = true)]
    precision: Option<i64>,
    /// Lattice window `a:b` for a single truncated complex.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    /// Demand certified dimensions.
    #[arg(long, global = true)]
    certified: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    count: usize,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Generic,
    Invertible,
    Nilpotent,
    Semisimple,
    ScalarPlusNilpotent,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a connection and print its reduction tree.
    Reduce { input: PathBuf },
    /// De Rham dimensions of a connection.
    Derham { input: PathBuf },
    /// De Rham dimensions, failing unless certified.
    Fredholm { input: PathBuf },
    /// Apply a gauge transformation.
    Gauge { input: PathBuf, gauge: PathBuf },
    /// The leading-term stability constant.
    Stability { n: usize, r: i64 },
    /// Run a randomized property suite (or `all`).
    Check { suite: String },
    /// Write random connections.
    Generate {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        pole: Option<i64>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::PrecisionExhausted { .. } | Error::Unstabilized(_) => 2,
            Error::ZeroDivisorSplit { .. } => 3,
            Error::Parse(_) => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_connection(path: &Path, flags: &Flags) -> Result<Connection, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 4,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let c = connection_from_str(&text)?;
    Ok(match flags.precision {
        Some(p) => c.truncate(p)?,
        None => c,
    })
}

fn emit(v: &Value, flags: &Flags) -> Outcome {
    let text = to_text(v);
    match &flags.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_window(s: &str) -> Result<LatticeWindow, Failure> {
    let bad = || Failure {
        code: 4,
        message: format!("window must be `a:b` with a < b, got {s:?}"),
    };
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    LatticeWindow::new(a, b).map_err(|_| bad())
}

fn leaf_rows(t: &ReductionTree, out: &mut Vec<String>) {
    for (i, leaf) in t.leaves().into_iter().enumerate() {
        let c = leaf.connection();
        let data = match leaf {
            Leaf::Rank1 { connection } => format!("pole order {}", connection.pole_order()),
            Leaf::RegularSingular { residue, .. } => format!("residue {residue:?}"),
            Leaf::InvertibleIrregularLead {
                leading, t_exponent, ..
            } => format!("leading {leading:?} t^{t_exponent}"),
        };
        out.push(format!(
            "{i:>3}  {:<24} rank {:<2} ram {:<3} {data}",
            leaf.kind(),
            c.rank(),
            c.ram()
        ));
    }
}

fn cmd_reduce(input: &Path, flags: &Flags) -> Outcome {
    let c = read_connection(input, flags)?;
    let branches = reduce_all_branches(&c)?;
    let mut rows = Vec::new();
    let value = if branches.len() == 1 {
        leaf_rows(&branches[0].1, &mut rows);
        tree_json(&branches[0].1)
    } else {
        let items: Vec<Value> = branches
            .iter()
            .map(|(tower, t)| {
                rows.push(format!("branch over field {}", field_json(tower)));
                leaf_rows(t, &mut rows);
                json!({ "field": field_json(tower), "reduction": tree_json(t) })
            })
            .collect();
        json!({ "branches": items })
    };
    eprintln!("leaves:");
    for r in rows {
        eprintln!("{r}");
    }
    emit(&value, flags)
}

fn cmd_derham(input: &Path, flags: &Flags, demand_certificate: bool) -> Outcome {
    let c = read_connection(input, flags)?;
    let dims = if let Some(w) = &flags.window {
        truncated_complex_dims(&c, parse_window(w)?)?
    } else if demand_certificate || flags.certified {
        certified_dims(&c)?
    } else {
        derham_dims(&c)?
    };
    eprintln!(
        "h0 = {}, h1 = {}, chi = {} on {} ({}{})",
        dims.h0,
        dims.h1,
        dims.chi,
        dims.window,
        dims.certificate.as_str(),
        if dims.stabilized { "" } else { ", unstabilized" }
    );
    emit(&dims_json(&dims), flags)
}

fn cmd_gauge(input: &Path, gauge: &Path, flags: &Flags) -> Outcome {
    let c = read_connection(input, flags)?;
    let text = fs::read_to_string(gauge).map_err(|e| Failure {
        code: 4,
        message: format!("cannot read {}: {e}", gauge.display()),
    })?;
    let g = gauge_parse(&parse_text(&text)?, flags.precision)?;
    emit(&connection_json(&c.gauge(&g)?), flags)
}

fn cmd_stability(n: usize, r: i64, flags: &Flags) -> Outcome {
    if n == 0 || r == 0 {
        return Err(Failure {
            code: 4,
            message: "n and r must be positive".into(),
        });
    }
    let v = stability_constant(n, r);
    eprintln!("N_{{{n},{r}}} = {v}");
    emit(
        &json!({ "n": n, "r": r, "stability_constant": v, "known_sharp": known_sharp(n, r) }),
        flags,
    )
}

fn cmd_check(suite: &str, flags: &Flags) -> Outcome {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    let mut ok = true;
    for name in names {
        let rep = run_suite(name, flags.seed, flags.count)?;
        eprintln!("{rep}");
        ok &= rep.passed();
        reports.push(json!({
            "suite": rep.suite,
            "seed": rep.seed,
            "count": rep.count,
            "failures": rep.failures.iter().map(|f| json!({ "instance": f.index, "message": f.message })).collect::<Vec<_>>(),
        }));
    }
    emit(&Value::Array(reports), flags)?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "property violation".into(),
        })
    }
}

fn cmd_generate(rank: Option<usize>, pole: Option<i64>, kind: Option<Kind>, flags: &Flags) -> Outcome {
    let mut items = Vec::with_capacity(flags.count);
    for i in 0..flags.count {
        let mut rng = instance_rng(flags.seed, i);
        let base = random_spec(&mut rng, 3, 3);
        let spec = ConnectionSpec {
            n: rank.unwrap_or(base.n),
            r: pole.unwrap_or(base.r),
            kind: kind.map_or(base.kind, |k| match k {
                Kind::Generic => LeadKind::Generic,
                Kind::Invertible => LeadKind::Invertible,
                Kind::Nilpotent => LeadKind::Nilpotent,
                Kind::Semisimple => LeadKind::Semisimple,
                Kind::ScalarPlusNilpotent => LeadKind::ScalarPlusNilpotent,
            }),
            top: base.top,
            precision: flags.precision,
        };
        items.push(connection_json(&random_connection(&mut rng, &spec)));
    }
    let v = if items.len() == 1 { items.pop().unwrap() } else { Value::Array(items) };
    emit(&v, flags)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    let flags = &cli.flags;
    let result = match &cli.command {
        Command::Reduce { input } => cmd_reduce(input, flags),
        Command::Derham { input } => cmd_derham(input, flags, false),
        Command::Fredholm { input } => cmd_derham(input, flags, true),
        Command::Gauge { input, gauge } => cmd_gauge(input, gauge, flags),
        Command::Stability { n, r } => cmd_stability(*n, *r, flags),
        Command::Check { suite } => cmd_check(suite, flags),
        Command::Generate { rank, pole, kind } => cmd_generate(*rank, *pole, *kind, flags),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
