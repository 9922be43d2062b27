//! Command-line front end: dimension tables, ring tables, Lefschetz maps,
//! verification suites, symbol certificates and monodromy analysis.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure,
//! 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sympcoh::model::Model;
use sympcoh::report::{self, Report};
use sympcoh::{resolution, suites, symbol, torus};

#[derive(Parser)]
#[command(
    name = "sympcoh",
    version,
    about = "Exact filtered-cohomology calculus on symplectic cochain models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers, filtered cohomology tables and primitive tables.
    Dims {
        model: PathBuf,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology ring multiplication tables for one filtration degree.
    Ring {
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernels and cokernels of the Lefschetz maps.
    Lefschetz {
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exit 1 if anything fails.
    Verify {
        model: PathBuf,
        /// One of sl2, leibniz, ainfty, compat, les, triangle, dims, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise symbol-exactness certificate for the filtered complex.
    Symbol {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monodromy analysis and the pairing-image invariant.
    Torus {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> sympcoh::Result<()> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            Ok(())
        }
    }
}

fn load_model(path: &PathBuf) -> sympcoh::Result<(Model, report::ModelIdentity)> {
    let text = std::fs::read_to_string(path)?;
    let model = Model::parse(&text)?;
    let ident = report::identity(model.name(), &path.display().to_string(), &text);
    Ok((model, ident))
}

fn render(report: &Report, format: Format, table: String) -> String {
    match format {
        Format::Machine => report.machine(),
        Format::Table => table,
    }
}

fn run(cli: Cli) -> sympcoh::Result<ExitCode> {
    match cli.command {
        Command::Dims {
            model,
            p,
            format,
            out,
        } => {
            let (m, ident) = load_model(&model)?;
            let rep = report::dims_report(&m, p, format!("dims {}", model.display()), ident)?;
            let text = render(&rep, format, report::dims_text(&rep));
            emit(text, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ring {
            model,
            p,
            format,
            out,
        } => {
            let (m, ident) = load_model(&model)?;
            let rep =
                report::ring_report(&m, p, format!("ring {} --p {p}", model.display()), ident)?;
            let text = render(&rep, format, report::ring_text(&rep));
            emit(text, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lefschetz {
            model,
            r,
            format,
            out,
        } => {
            let (m, ident) = load_model(&model)?;
            let rep = report::lefschetz_report(
                &m,
                r,
                format!("lefschetz {} --r {r}", model.display()),
                ident,
            )?;
            let table = {
                let mut s = format!("L^{r} on cohomology of {}\n", m.name());
                for rec in rep.results["records"].as_array().unwrap() {
                    s.push_str(&format!(
                        "H^{} -> H^{}: rank {}, ker {}, cok {}\n",
                        rec["k"],
                        rec["k"].as_u64().unwrap() + 2 * r as u64,
                        rec["rank"],
                        rec["kernel"],
                        rec["cokernel"]
                    ));
                }
                s
            };
            emit(render(&rep, format, table), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            model,
            suite,
            r,
            l,
            seed,
            samples,
            format,
            out,
        } => {
            let (m, ident) = load_model(&model)?;
            let mut results = Vec::new();
            let mut all_ok = true;
            let mut lines = String::new();
            let want = |name: &str| suite == "all" || suite == name;
            if want("sl2") {
                let rep = suites::suite_sl2(&m, seed, samples)?;
                all_ok &= rep.passed();
                lines.push_str(&suite_line(&rep));
                results.push(report::suite_json(&rep));
            }
            if want("leibniz") {
                let rep = suites::suite_leibniz(&m, seed, samples)?;
                all_ok &= rep.passed();
                lines.push_str(&suite_line(&rep));
                results.push(report::suite_json(&rep));
            }
            if want("ainfty") {
                let rep = suites::suite_ainfty(&m, seed, samples)?;
                all_ok &= rep.passed();
                lines.push_str(&suite_line(&rep));
                results.push(report::suite_json(&rep));
            }
            if want("compat") {
                let rep = suites::suite_compat(&m, seed, samples)?;
                all_ok &= rep.passed();
                lines.push_str(&suite_line(&rep));
                results.push(report::suite_json(&rep));
            }
            if want("les") {
                let rs: Vec<usize> = match r {
                    Some(r) => vec![r],
                    None => (1..=m.n()).collect(),
                };
                for r in rs {
                    let rep = resolution::verify_les(&m, r)?;
                    all_ok &= rep.passed();
                    lines.push_str(&format!(
                        "les r={r}: {} ({} nodes)\n",
                        if rep.passed() { "exact" } else { "NOT EXACT" },
                        rep.nodes.len()
                    ));
                    for node in rep.failing_nodes() {
                        lines.push_str(&format!("  not exact at {}\n", node.label));
                    }
                    results.push(report::les_json(&rep));
                }
            }
            if want("triangle") {
                let pairs: Vec<(usize, usize)> = match (l, r) {
                    (Some(l), Some(r)) => vec![(l, r)],
                    _ => {
                        let mut v = Vec::new();
                        for l in 0..m.n() {
                            for r in 1..=(m.n() - l) {
                                v.push((l, r));
                            }
                        }
                        v
                    }
                };
                for (l, r) in pairs {
                    let rep = resolution::verify_filtered_triangle(&m, l, r)?;
                    all_ok &= rep.passed();
                    lines.push_str(&format!(
                        "triangle l={l} r={r}: {} ({} nodes)\n",
                        if rep.passed() { "exact" } else { "NOT EXACT" },
                        rep.nodes.len()
                    ));
                    for node in rep.failing_nodes() {
                        lines.push_str(&format!("  not exact at {}\n", node.label));
                    }
                    results.push(report::les_json(&rep));
                }
            }
            if want("dims") || want("index") {
                let rep = resolution::dimension_formula_check(&m)?;
                all_ok &= rep.passed();
                lines.push_str(&format!(
                    "dimension formulas: {} ({} checks)\n",
                    if rep.passed() { "pass" } else { "FAIL" },
                    rep.checks.len()
                ));
                for c in rep.failing() {
                    lines.push_str(&format!(
                        "  {}: expected {}, got {}\n",
                        c.description, c.expected, c.got
                    ));
                }
                results.push(report::dimensions_json(&rep));
            }
            let rep = Report {
                schema: report::SCHEMA,
                command: format!("verify {} --suite {suite} --seed {seed}", model.display()),
                model: Some(ident),
                passed: Some(all_ok),
                results: json!(results),
            };
            emit(render(&rep, format, lines), &out)?;
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Symbol {
            dim,
            p,
            format,
            out,
        } => {
            let ps: Vec<usize> = match p {
                Some(p) => vec![p],
                None => (0..=dim / 2).collect(),
            };
            let mut all = true;
            let mut texts = String::new();
            let mut docs = Vec::new();
            for p in ps {
                let rep = symbol::symbol_exactness(dim, p)?;
                all &= rep.all_exact;
                texts.push_str(&report::symbol_text(&rep));
                let doc = report::symbol_report(&rep, format!("symbol --dim {dim} --p {p}"));
                docs.push(doc.results);
            }
            let combined = Report {
                schema: report::SCHEMA,
                command: format!("symbol --dim {dim}"),
                model: None,
                passed: Some(all),
                results: json!(docs),
            };
            emit(render(&combined, format, texts), &out)?;
            Ok(if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Torus {
            matrix,
            format,
            out,
        } => {
            let text = std::fs::read_to_string(&matrix)?;
            let input = torus::load_monodromy(&text)?;
            let ident = report::identity("monodromy", &matrix.display().to_string(), &text);
            let pairing = if input.generators.is_empty() {
                None
            } else {
                Some(torus::pairing_image_dim(&input.model, &input.generators)?)
            };
            let rep = report::torus_report(
                &input,
                pairing.as_ref(),
                format!("torus {}", matrix.display()),
                ident,
            );
            emit(render(&rep, format, report::torus_text(&rep)), &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn suite_line(rep: &suites::SuiteReport) -> String {
    format!(
        "suite {}: {} ({} samples, {} skipped)\n",
        rep.name,
        if rep.passed() { "pass" } else { "FAIL" },
        rep.samples,
        rep.skipped
    )
}
