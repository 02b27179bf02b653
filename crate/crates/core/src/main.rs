use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use medial_link::corpus::{lookup, CORPUS};
use medial_link::laurent::ScalarRing;
use medial_link::linkdiag::{parse_any, Diagram};
use medial_link::linkinv::{
    compare_links, default_panel, determinant, fingerprint, imq, longitudes, mq_specialized,
    ImqOutcome, LinkError, MqResult, DEFAULT_QUANDLE_CAP,
};
use medial_link::selftest;

/// Alexander modules, longitudes and medial quandles of links.
#[derive(Parser)]
#[command(name = "medlink", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the built-in corpus, or print one entry's diagram
    Examples {
        /// print every diagram as a JSON array
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Fingerprint panel, determinant and longitudes
    Invariants {
        /// file path, corpus name, inline JSON or PD text, or `-` for stdin
        input: String,
        /// comma-separated `m:u` or `m:u|f` rings
        #[arg(long, value_delimiter = ',')]
        rings: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Involutory medial quandle
    Imq {
        input: String,
        #[arg(long, default_value_t = DEFAULT_QUANDLE_CAP)]
        cap: u64,
    },
    /// Medial quandle over a finite scalar ring
    Mq {
        input: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = DEFAULT_QUANDLE_CAP)]
        cap: u64,
    },
    /// Layered comparison of two links
    Compare {
        a: String,
        b: String,
        #[arg(long, value_delimiter = ',')]
        rings: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in acceptance checks
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        /// fewer random instances
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Cap(String),
    Selftest,
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        if e.is_size_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn load(input: &str) -> Result<Diagram, Failure> {
    let text = if let Some(e) = lookup(input) {
        e.source.to_string()
    } else if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(e.to_string()))?;
        s
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?
    } else if input.trim_start().starts_with(['{', 'P']) {
        input.to_string()
    } else {
        return Err(Failure::Input(format!(
            "{input}: not a file, corpus name or diagram"
        )));
    };
    parse_any(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))
}

fn rings(spec: Option<Vec<String>>) -> Result<Vec<ScalarRing>, Failure> {
    let mut rings = match spec {
        None => return Ok(default_panel()),
        Some(v) => v
            .iter()
            .map(|s| {
                s.parse::<ScalarRing>()
                    .map_err(|e| Failure::Input(format!("{s}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    rings.dedup_by(|a, b| a.to_string() == b.to_string());
    Ok(rings)
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn quandle_json(r: &MqResult) -> Value {
    let q = &r.quandle;
    let points: Vec<String> = q
        .points
        .iter()
        .map(|(i, v)| format!("{}:{v:?}", i + 1))
        .collect();
    json!({
        "report": r.report,
        "points": points,
        "table": q.quandle.table_rows(),
    })
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Examples { dump, name } => {
            if let Some(n) = name {
                let e = lookup(&n)
                    .ok_or_else(|| Failure::Input(format!("no corpus entry named {n}")))?;
                println!("{}", e.source);
            } else if dump {
                let all: Vec<Value> = CORPUS
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "description": e.description,
                            "determinant": e.determinant,
                            "imq_size": e.imq_size,
                            "notes": e.notes,
                            "diagram": e.diagram().to_json_value(),
                        })
                    })
                    .collect();
                print_json(&Value::Array(all));
            } else {
                for e in CORPUS {
                    println!("{:<18} {}", e.name, e.description);
                }
            }
        }
        Cmd::Invariants {
            input,
            rings: r,
            json,
        } => {
            let d = load(&input)?;
            let panel = rings(r)?;
            let fp = fingerprint(&d, &panel)?;
            let det = determinant(&d)?;
            let longs: Vec<Vec<String>> = longitudes(&d)?
                .iter()
                .map(|v| v.iter().map(|p| p.to_string()).collect())
                .collect();
            if json {
                print_json(&json!({
                    "mu": d.mu(),
                    "arcs": d.arcs(),
                    "determinant": det,
                    "longitudes": longs,
                    "fingerprint": fp,
                }));
            } else {
                println!("components: {}", d.mu());
                println!("det = {det}");
                for (i, l) in longs.iter().enumerate() {
                    let terms: Vec<String> = d
                        .arcs()
                        .iter()
                        .zip(l)
                        .filter(|(_, p)| *p != "0")
                        .map(|(a, p)| format!("({p})·{a}"))
                        .collect();
                    println!(
                        "χ_{} = {}",
                        i + 1,
                        if terms.is_empty() {
                            "0".into()
                        } else {
                            terms.join(" + ")
                        }
                    );
                }
                for rec in &fp.records {
                    println!(
                        "[{}] M: {:?}  K: {:?}  |χ|: {:?}  depth: {:?}",
                        rec.ring,
                        rec.reduced_factors,
                        rec.kernel_factors,
                        rec.longitude_orders,
                        rec.longitude_depth
                    );
                }
            }
        }
        Cmd::Imq { input, cap } => {
            let d = load(&input)?;
            match imq(&d, cap)? {
                ImqOutcome::Finite(r) => print_json(&quandle_json(&r)),
                ImqOutcome::Infinite { free_rank, torsion } => print_json(
                    &json!({ "infinite": true, "free_rank": free_rank, "torsion": torsion }),
                ),
            }
        }
        Cmd::Mq { input, ring, cap } => {
            let d = load(&input)?;
            let r: ScalarRing = ring
                .parse()
                .map_err(|e| Failure::Input(format!("{ring}: {e}")))?;
            match mq_specialized(&d, &r, cap) {
                Ok(q) => print_json(&quandle_json(&q)),
                Err(LinkError::InfiniteUnsupported) => {
                    print_json(&json!({ "infinite": true, "ring": r.to_string() }))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Compare {
            a,
            b,
            rings: r,
            json,
        } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let v = compare_links(&da, &db, &rings(r)?)?;
            if json {
                print_json(&serde_json::to_value(&v).expect("verdict serializes"));
            } else {
                println!("{}", v.summary());
            }
        }
        Cmd::Selftest { seed, quick, json } => {
            let results = selftest::run(seed, quick);
            if json {
                print_json(&serde_json::to_value(&results).expect("results serialize"));
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
            }
            if results.iter().any(|r| !r.pass) {
                return Err(Failure::Selftest);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("cap exceeded: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest) => ExitCode::from(3),
    }
}
