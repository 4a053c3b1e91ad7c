use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cpskg::cps::{check_manifest, compile_manifest, CpsManifest};
use cpskg::eval::{evaluate, format_result, Bindings};
use cpskg::export::export_operator;
use cpskg::infix::print_infix;
use cpskg::mapper::{om_to_rdf, rdf_to_om};
use cpskg::openmath::{serialize_openmath_xml, OpenMathReader, SymbolRegistry};
use cpskg::rdf::{match_pattern, parse_ntriples, serialize, Graph, NodeRef, PatternQuery, RdfFormat};
use cpskg::validate::Validator;
use cpskg::vocab::Config;

#[derive(Parser, Debug)]
#[command(name = "cpskg", version, about = "Build, check and query CPS behavior knowledge graphs")]
struct Cli {
    /// JSON file with namespaces and strictness settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map an OpenMath XML equation onto RDF.
    Om2rdf {
        #[arg(long = "in")]
        input: PathBuf,
        /// Instance base IRI for generated nodes.
        #[arg(long, default_value = "http://example.org/instance")]
        base: String,
        /// Equation id; defaults to the file stem.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Turtle)]
        format: Format,
    },
    /// Rebuild OpenMath XML from an equation stored in an N-Triples graph.
    Rdf2om {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a CPS manifest into a graph.
    Build {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ntriples)]
        format: Format,
        /// Check the manifest without writing a graph.
        #[arg(long)]
        check_only: bool,
    },
    /// Check a graph against the structural rules V1-V7.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Enable V7 and fail on warnings.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Match a basic graph pattern and print the solutions.
    Query {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pattern: String,
        /// Extra prefix binding, `name=namespace`.
        #[arg(long = "prefix")]
        prefixes: Vec<String>,
    },
    /// List an operator's equations in infix form with their data elements.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        operator: String,
    },
    /// Evaluate an equation or expression under variable bindings.
    Eval {
        /// OpenMath XML, or N-Triples when --root is given.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        bindings: PathBuf,
        /// Evaluate only the right-hand side of an equation.
        #[arg(long)]
        rhs: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Turtle,
    Ntriples,
}

impl From<Format> for RdfFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Turtle => RdfFormat::Turtle,
            Format::Ntriples => RdfFormat::NTriples,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Exit status 1 for domain errors, 2 for I/O errors.
enum Failure {
    Domain(String),
    Io(String),
}

type Outcome = Result<ExitCode, Failure>;

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|_| Failure::Domain(format!("{} is not UTF-8", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}"))),
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_ntriples(&read_text(path)?).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => Config::from_json(&read_text(p)?).map_err(|e| domain(format!("{}: {e}", p.display()))),
        None => Ok(Config::default()),
    }
}

fn reader(config: &Config) -> OpenMathReader {
    if config.strict {
        OpenMathReader::strict()
    } else {
        OpenMathReader::lenient()
    }
}

fn run(cli: Cli) -> Outcome {
    let config = load_config(cli.config.as_deref())?;
    let ns = &config.namespaces;
    match cli.command {
        Command::Om2rdf { input, base, id, out, format } => {
            let parsed = reader(&config).parse(&read(&input)?).map_err(|e| domain(format!("{}: {e}", input.display())))?;
            for w in &parsed.warnings {
                eprintln!("warning: {w}");
            }
            let id = id.unwrap_or_else(|| input.file_stem().map_or("eq".into(), |s| s.to_string_lossy().into_owned()));
            let mut graph = om_to_rdf(&parsed.expr, ns, &base, &id).graph;
            ns.bind_prefixes(&mut graph);
            emit(out.as_deref(), &serialize(&graph, format.into()))?;
        }
        Command::Rdf2om { input, root, out } => {
            let graph = load_graph(&input)?;
            let expr = rdf_to_om(&graph, &NodeRef::iri(root), ns, config.strict).map_err(domain)?;
            emit(out.as_deref(), &serialize_openmath_xml(&expr))?;
        }
        Command::Build { manifest, out, format, check_only } => {
            let m = CpsManifest::from_json(&read_text(&manifest)?).map_err(domain)?;
            let dir = manifest.parent().unwrap_or(Path::new("."));
            if check_only {
                check_manifest(&m, dir, &config).map_err(domain)?;
                eprintln!("{}: ok", manifest.display());
            } else {
                let graph = compile_manifest(&m, dir, &config).map_err(domain)?;
                emit(out.as_deref(), &serialize(&graph, format.into()))?;
            }
        }
        Command::Validate { input, strict, format } => {
            let graph = load_graph(&input)?;
            let registry = SymbolRegistry::standard();
            let report = Validator::new(ns, &registry).strict(strict).validate(&graph);
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json_lines(),
            };
            emit(None, &text)?;
            eprintln!("{} error(s), {} warning(s)", report.errors(), report.warnings());
            if report.errors() > 0 || (strict && report.warnings() > 0) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Query { input, pattern, prefixes } => {
            let graph = load_graph(&input)?;
            let mut table: std::collections::BTreeMap<String, String> =
                ns.prefix_table().into_iter().map(|(p, n)| (p.to_string(), n)).collect();
            for p in &prefixes {
                let (name, iri) = p.split_once('=').ok_or_else(|| domain(format!("--prefix {p:?} is not name=namespace")))?;
                table.insert(name.to_string(), iri.to_string());
            }
            let query = PatternQuery::parse(&pattern, &table).map_err(domain)?;
            let solutions = match_pattern(&graph, &query);
            let mut text = String::new();
            for row in &solutions.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|n| n.as_iri().map_or_else(|| n.to_ntriples(), str::to_string))
                    .collect();
                text.push_str(&cells.join("\t"));
                text.push('\n');
            }
            emit(None, &text)?;
        }
        Command::Export { input, operator } => {
            let graph = load_graph(&input)?;
            let export = export_operator(&graph, &NodeRef::iri(operator.clone()), ns, config.strict).map_err(domain)?;
            if export.is_empty() {
                eprintln!("{operator} has no behavior model");
                return Ok(ExitCode::SUCCESS);
            }
            let mut text = String::new();
            for eq in &export.equations {
                text.push_str(&print_infix(&eq.expr));
                text.push('\n');
            }
            text.push('\n');
            for row in &export.variables {
                let de = row.data_element.as_ref().and_then(NodeRef::as_iri).unwrap_or("-");
                let td = row.type_description.as_deref().unwrap_or("-");
                text.push_str(&format!("{}\t{de}\t{td}\n", row.variable));
            }
            emit(None, &text)?;
        }
        Command::Eval { input, root, bindings, rhs } => {
            let expr = match root {
                Some(root) => rdf_to_om(&load_graph(&input)?, &NodeRef::iri(root), ns, config.strict).map_err(domain)?,
                None => reader(&config).parse(&read(&input)?).map_err(|e| domain(format!("{}: {e}", input.display())))?.expr,
            };
            let bindings = Bindings::from_json(&read_text(&bindings)?).map_err(|e| domain(format!("bindings: {e}")))?;
            let target = if rhs {
                expr.as_equation().map(|(_, r)| r).ok_or_else(|| domain("--rhs needs an equation"))?
            } else {
                &expr
            };
            let value = evaluate(target, &bindings).map_err(domain)?;
            emit(None, &format!("{}\n", format_result(value)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
