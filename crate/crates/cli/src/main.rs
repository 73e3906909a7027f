use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sgw::constructions::{fig1c_grid, kpq_graph};
use sgw::homomorphism::certificate_is_consistent;
use sgw::verify::{self, Report, DEFAULT_SEED};
use sgw::{
    cartesian_product, chromatic_number, equivalent, find_homomorphism, is_balanced, make, parse_graph, product_many,
    s_decompose, validate, write_graph, Balance, ChromaticCertificate, Error, NamedGraph, SignedGraph,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_GUARD: u8 = 4;

/// Signed graph workbench.
#[derive(Parser)]
#[command(name = "sgw", version, about)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartesian product of graph files, in order.
    Product {
        #[arg(required = true, num_args = 2..)]
        files: Vec<String>,
        /// Output graph file ('-' for stdout).
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Also write the coordinate JSON here.
        #[arg(long)]
        coords: Option<PathBuf>,
    },
    /// Prime s-decomposition of a connected graph.
    Decompose {
        file: String,
        /// Write factor_<i>.sg files into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exact signed chromatic number with a certificate.
    Chi {
        file: String,
        #[arg(long)]
        lo: Option<usize>,
        #[arg(long)]
        hi: Option<usize>,
        /// Write the certificate JSON here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Switching equivalence of two graphs on the same underlying graph.
    Equiv { first: String, second: String },
    /// Balance test with a switching or an unbalanced closed walk as witness.
    Balance { file: String },
    /// Homomorphism search from one graph into another.
    Hom { source: String, target: String },
    /// Write a named graph: BC<n>, UC<n>, K_plus<p>, K_minus<p>, K4_mixed,
    /// SPal5, SPal5_star, K18, grid_fig1c, kpq<p>,<q>.
    Make {
        name: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Run a reproduction suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        max_p: usize,
        #[arg(long, default_value_t = 3)]
        max_q: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Allow suites that are beyond desk scale.
        #[arg(long)]
        unbounded: bool,
    },
    /// Recheck a chromatic certificate against its graph.
    CheckCert { file: String, certificate: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    CycleTable,
    Kpq,
    UcBcGap,
    Grid,
    RandomGrids,
    K4Classes,
    K18,
    All,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Negative(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::GuardExceeded(_) | Error::BoundExceeded { .. } | Error::OrderTooLarge(_) | Error::TooLarge(_) => {
                Failure::Guard(e.to_string())
            }
            Error::BadParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn read_graph(path: &str) -> Result<SignedGraph, Failure> {
    parse_graph(&read_input(path)?).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn write_output(path: &str, text: &str) -> Outcome {
    if path == "-" {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn print_json(v: &impl serde::Serialize) {
    print!("{}", pretty(v));
}

fn named(name: &str) -> Result<SignedGraph, Failure> {
    let key = name.to_ascii_lowercase().replace(['_', ' '], "");
    if key == "gridfig1c" {
        return Ok(fig1c_grid());
    }
    if let Some(rest) = key.strip_prefix("kpq") {
        let parts: Vec<&str> = rest.trim_matches(|c| c == '(' || c == ')').split(',').collect();
        let [p, q] = parts.as_slice() else {
            return Err(Failure::Usage(format!("expected kpq<p>,<q>, got {name:?}")));
        };
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad number {s:?}")));
        return Ok(kpq_graph(num(p)?, num(q)?)?);
    }
    Ok(make(&name.parse::<NamedGraph>()?)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Product { files, output, coords } => {
            let graphs = files.iter().map(|f| read_graph(f)).collect::<Result<Vec<_>, _>>()?;
            let (g, cs) = if graphs.len() == 2 {
                cartesian_product(&graphs[0], &graphs[1])
            } else {
                product_many(&graphs)?
            };
            if let Some(path) = coords {
                fs::write(path, pretty(&cs))?;
            }
            if cli.json {
                write_output(&output, &pretty(&json!({ "graph": g, "coordinates": cs })))
            } else {
                write_output(&output, &write_graph(&g))
            }
        }
        Command::Decompose { file, out_dir } => {
            let g = read_graph(&file)?;
            let d = s_decompose(&g)?;
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir)?;
                for (i, f) in d.factors().iter().enumerate() {
                    fs::write(dir.join(format!("factor_{i}.sg")), write_graph(f))?;
                }
            }
            if cli.json {
                print_json(&json!({
                    "factors": d.factors(),
                    "coords": d.coords.all_coords(),
                    "switch_set": d.switch_set,
                    "factor_of_edge": d.factor_of_edge,
                }));
            } else {
                println!("{} factor(s)", d.factor_count());
                for (i, f) in d.factors().iter().enumerate() {
                    println!("# factor {i}");
                    print!("{}", write_graph(f));
                }
                println!("switch set: {:?}", d.switch_set.vertices());
            }
            Ok(())
        }
        Command::Chi { file, lo, hi, output } => {
            let g = read_graph(&file)?;
            let cert = chromatic_number(&g, lo, hi)?;
            if let Some(path) = output {
                fs::write(path, pretty(&cert))?;
            }
            if cli.json {
                print_json(&cert);
            } else {
                println!("{}", cert.k);
            }
            Ok(())
        }
        Command::Equiv { first, second } => {
            let (a, b) = (read_graph(&first)?, read_graph(&second)?);
            match equivalent(&a, &b)? {
                Some(x) => {
                    if cli.json {
                        print_json(&json!({ "equivalent": true, "switch_set": x }));
                    } else {
                        println!("{}", join(&x.vertices()));
                    }
                    Ok(())
                }
                None => {
                    if cli.json {
                        print_json(&json!({ "equivalent": false }));
                    }
                    Err(Failure::Negative("not equivalent".into()))
                }
            }
        }
        Command::Balance { file } => {
            let g = read_graph(&file)?;
            match is_balanced(&g) {
                Balance::Balanced(x) => {
                    if cli.json {
                        print_json(&json!({ "balanced": true, "switch_set": x }));
                    } else {
                        println!("balanced");
                        println!("switch set: {}", join(&x.vertices()));
                    }
                    Ok(())
                }
                Balance::Unbalanced(w) => {
                    if cli.json {
                        print_json(&json!({ "balanced": false, "walk": w }));
                    } else {
                        println!("unbalanced");
                        println!("walk: {}", join(w.vertices()));
                    }
                    Err(Failure::Negative(String::new()))
                }
            }
        }
        Command::Hom { source, target } => {
            let (g, h) = (read_graph(&source)?, read_graph(&target)?);
            match find_homomorphism(&g, &h) {
                Some(phi) => {
                    if cli.json {
                        print_json(&phi);
                    } else {
                        println!("map: {}", join(&phi.map));
                        println!("switch set: {}", join(&phi.switch_set.vertices()));
                    }
                    Ok(())
                }
                None => {
                    if cli.json {
                        print_json(&Value::Null);
                    }
                    Err(Failure::Negative("no homomorphism".into()))
                }
            }
        }
        Command::Make { name, output } => {
            let g = named(&name)?;
            if cli.json {
                write_output(&output, &pretty(&g))
            } else {
                write_output(&output, &write_graph(&g))
            }
        }
        Command::Verify { suite, max_len, max_p, max_q, seed, count, unbounded } => {
            let report = match suite {
                Suite::CycleTable => verify::verify_cycle_table(max_len),
                Suite::Kpq => verify::verify_kpq(max_p, max_q),
                Suite::UcBcGap => verify::verify_uc_bc_gap(max_q.max(3), max_p.max(3)),
                Suite::Grid => verify::verify_grid_fig1c(),
                Suite::RandomGrids => verify::verify_random_grids(seed, count),
                Suite::K4Classes => verify::verify_k4_classes(),
                Suite::K18 => verify::verify_k18(unbounded),
                Suite::All => (|| {
                    Ok(Report::merge(
                        "all",
                        vec![
                            verify::verify_cycle_table(max_len)?,
                            verify::verify_kpq(max_p, max_q)?,
                            verify::verify_uc_bc_gap(4, 5)?,
                            verify::verify_grid_fig1c()?,
                            verify::verify_random_grids(seed, count)?,
                            verify::verify_k4_classes()?,
                        ],
                    ))
                })(),
            }?;
            if cli.json {
                print_json(&report);
            } else {
                print!("{report}");
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Negative(format!("{} claim(s) failed", report.summary.failed)))
            }
        }
        Command::CheckCert { file, certificate } => {
            let g = read_graph(&file)?;
            let text = fs::read_to_string(&certificate)?;
            let cert: ChromaticCertificate = serde_json::from_str(&text)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", certificate.display())))?;
            let hom_ok = validate(&g, &cert.target, &cert.hom) && cert.target.n() <= cert.k;
            let bound_ok = certificate_is_consistent(&g, &cert);
            if cli.json {
                print_json(&json!({ "homomorphism_valid": hom_ok, "lower_bound_valid": bound_ok }));
            } else {
                println!("homomorphism: {}", if hom_ok { "valid" } else { "invalid" });
                println!("lower bound: {}", if bound_ok { "valid" } else { "invalid" });
            }
            if hom_ok && bound_ok {
                Ok(())
            } else {
                Err(Failure::Negative("certificate rejected".into()))
            }
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("SGW_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::Usage(format!("SGW_THREADS={v:?} is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Invalid(m) => (EXIT_INVALID, m),
                Failure::Negative(m) => (EXIT_NEGATIVE, m),
                Failure::Guard(m) => (EXIT_GUARD, m),
            };
            if !msg.is_empty() {
                eprintln!("sgw: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
