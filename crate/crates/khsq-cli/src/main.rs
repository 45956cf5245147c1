use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use khsq::burnside::khovanov_functor;
use khsq::f2algebra::cochain_complex;
use khsq::harness::{self, report::render_table, VerifyOptions};
use khsq::linkio::{parse_pd, LinkDiagram};
use khsq::lssq::{chord_presentation, MatchingVariant};
use khsq::moransq::{SqEvalContext, Term3};
use khsq::semisimp::{lambda_of, SemiSimplicialObject, SpanOrder};

#[derive(Parser)]
#[command(name = "khsq", about = "Khovanov homology over F2 and its second Steenrod square")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// worker threads; 0 lets rayon decide
    #[arg(long, env = "KHSQ_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Sq1,
    Sq2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Moran,
    Ls,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatchingArg {
    Consecutive,
    Nested,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Functor,
    Spans,
    Chords,
}

#[derive(Subcommand)]
enum Cmd {
    /// F2 Khovanov homology dimensions
    Homology {
        /// PD file, inline PD code, or bundled fixture name
        pd: String,
    },
    /// Action of sq1 or sq2 on homology
    Sq {
        pd: String,
        #[arg(long, value_enum, default_value = "sq2")]
        op: Op,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Certify that both sq2 formulas agree, and run the identity suite
    Verify {
        #[arg(required_unless_present = "suite")]
        pd: Option<String>,
        /// every bundled fixture
        #[arg(long, conflicts_with = "pd")]
        suite: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        reorders: usize,
        #[arg(long, value_enum, default_value = "both")]
        matching: MatchingArg,
        /// random cocycles per (n, j) block
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long)]
        skip_identities: bool,
        /// compare left-break with itself in term III (fault injection)
        #[arg(long, hide = true)]
        fault_term3: bool,
    },
    /// Debug dumps
    Dump {
        pd: String,
        #[arg(long, value_enum)]
        what: What,
        /// simplicial degree of the cocycle (chords)
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i32>,
        /// quantum grading of the cocycle (chords)
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i32>,
        /// index of the homology class (chords)
        #[arg(long, default_value_t = 0)]
        class: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

fn load(arg: &str) -> Result<(String, LinkDiagram), Failure> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{}: {}", arg, e)))?
    } else if let Some(d) = khsq::fixtures::fixture(arg) {
        return Ok((arg.to_string(), d));
    } else if arg.trim_start().starts_with("PD") || arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        return Err(Failure::Input(format!("{}: no such file or fixture", arg)));
    };
    let name = Path::new(arg)
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|_| Path::new(arg).is_file())
        .unwrap_or("inline")
        .to_string();
    let d = parse_pd(&text).map_err(|e| Failure::Input(format!("{}: {}", arg, e)))?;
    Ok((name, d))
}

fn build(d: &LinkDiagram) -> Result<SemiSimplicialObject, Failure> {
    lambda_of(khovanov_functor(d)).map_err(|e| Failure::Check(e.to_string()))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn homology(cli: &Cli, pd: &str) -> Result<(), Failure> {
    let (name, d) = load(pd)?;
    let x = build(&d)?;
    let c = cochain_complex(&x, d.n_minus);
    let rows = c.homology_table();
    if cli.format == Format::Json {
        print_json(&json!({ "fixture": name, "homology": rows }));
    } else {
        println!("{:>4} {:>4} {:>4}", "i", "j", "dim");
        for r in rows {
            println!("{:>4} {:>4} {:>4}", r.i, r.j, r.dim);
        }
    }
    Ok(())
}

fn sq(cli: &Cli, pd: &str, op: Op, method: Method) -> Result<(), Failure> {
    let (name, d) = load(pd)?;
    let x = build(&d)?;
    let c = cochain_complex(&x, d.n_minus);
    let ops: &[&str] = match op {
        Op::Sq1 => &["sq1"],
        Op::Sq2 => &["sq2"],
    };
    let methods: &[&str] = match method {
        Method::Moran => &["moran"],
        Method::Ls => &["ls"],
        Method::Both => &["moran", "ls"],
    };
    let table = harness::sq_action_table(&c, ops, methods).map_err(Failure::Check)?;
    let mut agree = true;
    if op == Op::Sq2 && method == Method::Both {
        let (mo, ls): (Vec<_>, Vec<_>) = table.iter().partition(|m| m.method == "moran");
        agree = mo.len() == ls.len() && mo.iter().zip(&ls).all(|(a, b)| a.matrix == b.matrix);
    }
    if cli.format == Format::Json {
        print_json(&json!({ "fixture": name, "tables": table, "methods_agree": agree }));
    } else {
        print!("{}", render_table(&table));
        if op == Op::Sq2 && method == Method::Both {
            println!("methods agree: {}", agree);
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Check("Morán and LS matrices differ".into()))
    }
}

fn verify(cli: &Cli, cmd: &Cmd) -> Result<(), Failure> {
    let Cmd::Verify { pd, suite, seed, reorders, matching, samples, skip_identities, fault_term3 } = cmd else {
        unreachable!()
    };
    let opts = VerifyOptions {
        seed: *seed,
        reorders: *reorders,
        matchings: match matching {
            MatchingArg::Consecutive => vec![MatchingVariant::Consecutive],
            MatchingArg::Nested => vec![MatchingVariant::Nested],
            MatchingArg::Both => vec![MatchingVariant::Consecutive, MatchingVariant::Nested],
        },
        random_samples: *samples,
        identities: !skip_identities,
        term3: if *fault_term3 { Term3::LeftForRight } else { Term3::Honest },
    };
    let fixtures: Vec<(String, LinkDiagram)> = if *suite {
        khsq::fixtures::all().into_iter().map(|(n, d)| (n.to_string(), d)).collect()
    } else {
        vec![load(pd.as_deref().expect("clap enforces pd or --suite"))?]
    };
    let report = harness::verify_suite(&fixtures, &opts);
    if cli.format == Format::Json {
        print_json(&report);
    } else {
        for r in &report.fixtures {
            print!("{}", r.to_text());
        }
        println!("{}", if report.passed { "all checks passed" } else { "VERIFICATION FAILED" });
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> =
            report.fixtures.iter().filter(|r| !r.passed).map(|r| r.fixture.as_str()).collect();
        Err(Failure::Check(format!("failing fixtures: {}", failed.join(", "))))
    }
}

fn dump(cli: &Cli, cmd: &Cmd) -> Result<(), Failure> {
    let Cmd::Dump { pd, what, n, j, class, seed } = cmd else { unreachable!() };
    let (_, d) = load(pd)?;
    match what {
        What::Functor => {
            let f = khovanov_functor(&d);
            println!("{}", serde_json::to_string_pretty(&f.to_json()).expect("json"));
        }
        What::Spans => {
            let x = build(&d)?;
            let mut faces = vec![];
            for n in 0..=x.top() {
                for i in 0..=n as usize {
                    let f = x.face(n, i);
                    let elts: Vec<[u32; 2]> = f.elts.iter().map(|e| [e.src, e.tgt]).collect();
                    faces.push((n, i, elts));
                }
            }
            if cli.format == Format::Json {
                let v: Vec<_> =
                    faces.iter().map(|(n, i, e)| json!({ "n": n, "face": i, "elements": e })).collect();
                print_json(&v);
            } else {
                println!("n\tface\tindex\tsrc\ttgt");
                for (n, i, e) in faces {
                    for (k, [s, t]) in e.iter().enumerate() {
                        println!("{}\t{}\t{}\t{}\t{}", n, i, k, s, t);
                    }
                }
            }
        }
        What::Chords => {
            let (Some(n), Some(j)) = (*n, *j) else {
                return Err(Failure::Input("chords need --n and --j".into()));
            };
            let x = build(&d)?;
            let c = cochain_complex(&x, d.n_minus);
            let reps = c.homology_basis(n, j).1;
            let alpha = reps
                .get(*class)
                .ok_or_else(|| Failure::Input(format!("no class {} in degree n={} j={}", class, n, j)))?;
            let order = match seed {
                Some(s) => SpanOrder::seeded(&x, *s),
                None => SpanOrder::canonical(&x),
            };
            let ctx = SqEvalContext::new(&x, &order, alpha).map_err(|e| Failure::Check(e.to_string()))?;
            let mut out = vec![];
            for z in 0..ctx.targets() {
                let p = chord_presentation(&ctx, z).map_err(|e| Failure::Check(e.to_string()))?;
                if !p.ends.is_empty() {
                    out.push((z, p));
                }
            }
            if cli.format == Format::Json {
                let v: Vec<_> = out
                    .iter()
                    .map(|(z, p)| {
                        let chords: Vec<_> = p
                            .ends
                            .iter()
                            .zip(&p.place)
                            .map(|(e, pl)| json!({ "a": e[0].index, "b": e[1].index, "place": pl }))
                            .collect();
                        json!({ "z": z, "chords": chords, "crossings": p.crossing_pairs() })
                    })
                    .collect();
                print_json(&v);
            } else {
                for (z, p) in out {
                    println!("# z = {}", z);
                    print!("{}", p.to_tsv());
                }
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Homology { pd } => homology(cli, pd),
        Cmd::Sq { pd, op, method } => sq(cli, pd, *op, *method),
        c @ Cmd::Verify { .. } => verify(cli, c),
        c @ Cmd::Dump { .. } => dump(cli, c),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().ok();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("khsq: {}", m);
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("khsq: {}", m);
            ExitCode::from(2)
        }
    }
}
