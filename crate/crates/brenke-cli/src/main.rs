//! Command-line front end for the `brenke` library: expansion tables,
//! identity verification, and the numeric integral checks, with
//! deterministic JSON or CSV output.

use std::process::ExitCode;

use brenke::expansion::{
    addition_coeffs, connection_explicit, duplication_coeffs, linearization_explicit,
    ConnectionTable,
};
use brenke::families::FamilySpec;
use brenke::family::{BrenkeFamily, TransferOperator};
use brenke::scalar::factorial;
use brenke::verify::{self, Caps};
use brenke::Scalar;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const CSV_HELP: &str = "CSV layouts (--format csv):
  poly / invert / phi / addition   k,value        one coefficient per line
  linearize                        k,value        coefficient of the k-th basis polynomial
  connect / duplicate              n,m,value      triangular table entries
  verify                           name,passed,detail
  check-integrals                  test,exact,numeric,abs_err,pass
Values are exact rationals rendered as strings in --mode exact and 64-bit
floats in --mode float. Family arguments accept a built-in name (hermite,
monomial), a path to a JSON spec file, or an inline JSON spec.";

#[derive(Parser)]
#[command(name = "brenke", version, about = "Expansion tables for Brenke polynomial sets", after_help = CSV_HELP)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Arithmetic of the printed values
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Truncation order for family construction (default: the
    /// BRENKE_DEFAULT_ORDER environment variable, or 64)
    #[arg(long, global = true)]
    order: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    All,
    Acceptance,
    Invariants,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of the degree-n polynomial of a family
    Poly {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Connection table expanding the src polynomials in the basis family
    Connect {
        #[arg(long)]
        src: String,
        #[arg(long)]
        basis: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Coefficients of the product F2_i * F3_j in the basis family
    Linearize {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        f3: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Expansion of the monomial x^n in the family basis
    Invert {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Duplication table expanding P_n(alpha x) in P_m(x)
    Duplicate {
        #[arg(long)]
        family: String,
        /// Scale factor, an exact rational such as 2, 1/2, or -3/4
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n_max: usize,
    },
    /// XD-expansion coefficients phi_k of the transfer operator src -> dst
    Phi {
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        k_max: usize,
    },
    /// Addition-formula coefficients of P_n(x + y)
    Addition {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Run the verification suites; exits 2 if any check fails
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteName::All)]
        suite: SuiteName,
        /// Cap the verification grids at this degree
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Numeric validation of the integral representations
    CheckIntegrals,
}

enum CliError {
    /// Bad input: unknown family, malformed spec, violated precondition.
    Usage(String),
    /// A verification check failed; the report is still printed.
    Verification(String),
}

impl From<brenke::Error> for CliError {
    fn from(e: brenke::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(&cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Verification(output)) => {
            println!("{output}");
            eprintln!("error: verification failed");
            ExitCode::from(2)
        }
    }
}

fn default_order() -> Result<usize, CliError> {
    match std::env::var("BRENKE_DEFAULT_ORDER") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "BRENKE_DEFAULT_ORDER must be a nonnegative integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(64),
    }
}

/// Truncation order for family construction: an explicit --order wins
/// (and may legitimately be too small, surfacing the library's
/// insufficient-order error); otherwise the default, grown to cover the
/// indices the command needs.
fn effective_order(cli: &Cli, required: usize) -> Result<usize, CliError> {
    match cli.order {
        Some(order) => Ok(order),
        None => Ok(default_order()?.max(required)),
    }
}

fn parse_spec(text: &str) -> Result<FamilySpec, CliError> {
    if let Some(spec) = FamilySpec::by_name(text) {
        return Ok(spec);
    }
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed)
            .map_err(|e| CliError::Usage(format!("malformed inline family spec: {e}")));
    }
    let body = std::fs::read_to_string(text).map_err(|e| {
        CliError::Usage(format!(
            "family argument {text:?} is not a built-in name (hermite, monomial), \
             inline JSON, or a readable spec file: {e}"
        ))
    })?;
    serde_json::from_str(&body)
        .map_err(|e| CliError::Usage(format!("malformed family spec in {text:?}: {e}")))
}

fn resolve_family(text: &str, order: usize) -> Result<BrenkeFamily, CliError> {
    Ok(parse_spec(text)?.build(order)?)
}

fn parse_scalar(text: &str, what: &str) -> Result<Scalar, CliError> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("{what} must be an exact rational: {e}")))
}

fn scalar_value(v: &Scalar, mode: Mode) -> Value {
    match mode {
        Mode::Exact => Value::String(v.to_string()),
        Mode::Float => json!(v.to_f64()),
    }
}

fn scalar_text(v: &Scalar, mode: Mode) -> String {
    match mode {
        Mode::Exact => v.to_string(),
        Mode::Float => format!("{}", v.to_f64()),
    }
}

/// Single-key JSON object `{key: value}`, serialized compactly.
fn wrap_json(key: &str, value: Value) -> String {
    let mut map = serde_json::Map::with_capacity(1);
    map.insert(key.to_owned(), value);
    serde_json::to_string(&Value::Object(map)).expect("serializable")
}

fn vector_payload(key: &str, values: &[Scalar], cli: &Cli) -> String {
    match cli.format {
        Format::Json => {
            let list: Vec<Value> = values.iter().map(|v| scalar_value(v, cli.mode)).collect();
            wrap_json(key, Value::Array(list))
        }
        Format::Csv => {
            let mut out = String::from("k,value\n");
            for (k, v) in values.iter().enumerate() {
                out.push_str(&format!("{k},{}\n", scalar_text(v, cli.mode)));
            }
            out.pop();
            out
        }
    }
}

/// A vector rendered as a one-column table (the linearization shape).
fn column_payload(key: &str, values: &[Scalar], cli: &Cli) -> String {
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .map(|v| Value::Array(vec![scalar_value(v, cli.mode)]))
                .collect();
            wrap_json(key, Value::Array(rows))
        }
        Format::Csv => vector_payload(key, values, cli),
    }
}

fn table_payload(key: &str, table: &ConnectionTable, cli: &Cli) -> String {
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = table
                .rows()
                .iter()
                .map(|row| {
                    Value::Array(row.iter().map(|v| scalar_value(v, cli.mode)).collect())
                })
                .collect();
            wrap_json(key, Value::Array(rows))
        }
        Format::Csv => match cli.mode {
            Mode::Exact => {
                let mut out = table.to_csv();
                while out.ends_with('\n') {
                    out.pop();
                }
                out
            }
            Mode::Float => {
                let mut out = String::from("n,m,value\n");
                for (n, row) in table.rows().iter().enumerate() {
                    for (m, v) in row.iter().enumerate() {
                        out.push_str(&format!("{n},{m},{}\n", v.to_f64()));
                    }
                }
                out.pop();
                out
            }
        },
    }
}

fn csv_quote(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Poly { family, n } => {
            let fam = resolve_family(family, effective_order(cli, *n)?)?;
            let p = fam.poly(*n)?;
            let coeffs: Vec<Scalar> = (0..=*n).map(|k| p.coeff(k)).collect();
            Ok(vector_payload("P", &coeffs, cli))
        }
        Command::Connect { src, basis, n_max } => {
            let order = effective_order(cli, *n_max)?;
            let src = resolve_family(src, order)?;
            let basis = resolve_family(basis, order)?;
            let table = connection_explicit(&src, &basis, *n_max)?;
            Ok(table_payload("C", &table, cli))
        }
        Command::Linearize { basis, f2, f3, i, j } => {
            let order = effective_order(cli, i + j)?;
            let basis = resolve_family(basis, order)?;
            let f2 = resolve_family(f2, order)?;
            let f3 = resolve_family(f3, order)?;
            let table = linearization_explicit(&basis, &f2, &f3, *i, *j)?;
            Ok(column_payload("L", table.entries(), cli))
        }
        Command::Invert { family, n } => {
            let fam = resolve_family(family, effective_order(cli, *n)?)?;
            let raw = fam.inversion_coeffs(*n)?;
            let b_n = fam.b(*n);
            let coeffs: Vec<Scalar> = raw
                .iter()
                .enumerate()
                .map(|(m, v)| v / &(factorial(m) * &b_n))
                .collect();
            Ok(vector_payload("V", &coeffs, cli))
        }
        Command::Duplicate { family, alpha, n_max } => {
            let fam = resolve_family(family, effective_order(cli, *n_max)?)?;
            let alpha = parse_scalar(alpha, "--alpha")?;
            let table = duplication_coeffs(&fam, &alpha, *n_max)?;
            Ok(table_payload("D", &table, cli))
        }
        Command::Phi { src, dst, k_max } => {
            let order = effective_order(cli, *k_max)?;
            let src = resolve_family(src, order)?;
            let dst = resolve_family(dst, order)?;
            let theta = TransferOperator::between(&src, &dst);
            let phis: Vec<Scalar> = (0..=*k_max).map(|k| theta.xd_phi(k)).collect();
            Ok(vector_payload("phi", &phis, cli))
        }
        Command::Addition { family, n } => {
            let fam = resolve_family(family, effective_order(cli, *n)?)?;
            Ok(vector_payload("A", &addition_coeffs(&fam, *n), cli))
        }
        Command::Verify { suite, n_max } => {
            let caps = n_max.map(|n| Caps { n_max: n }).unwrap_or_default();
            let mut checks = Vec::new();
            if matches!(suite, SuiteName::All | SuiteName::Acceptance) {
                checks.extend(verify::acceptance_suite(caps));
            }
            if matches!(suite, SuiteName::All | SuiteName::Invariants) {
                checks.extend(verify::invariant_checks(caps));
            }
            let output = match cli.format {
                Format::Json => serde_json::to_string(&checks).expect("serializable"),
                Format::Csv => {
                    let mut out = String::from("name,passed,detail");
                    for c in &checks {
                        out.push_str(&format!(
                            "\n{},{},{}",
                            csv_quote(&c.name),
                            c.passed,
                            csv_quote(&c.detail)
                        ));
                    }
                    out
                }
            };
            if checks.iter().all(|c| c.passed) {
                Ok(output)
            } else {
                Err(CliError::Verification(output))
            }
        }
        Command::CheckIntegrals => {
            let rows = verify::quadrature_report();
            let output = match cli.format {
                Format::Json => serde_json::to_string(&rows).expect("serializable"),
                Format::Csv => {
                    let mut out = String::from("test,exact,numeric,abs_err,pass");
                    for r in &rows {
                        out.push_str(&format!(
                            "\n{},{},{},{},{}",
                            csv_quote(&r.test),
                            r.exact,
                            r.numeric,
                            r.abs_err,
                            r.pass
                        ));
                    }
                    out
                }
            };
            if rows.iter().all(|r| r.pass) {
                Ok(output)
            } else {
                Err(CliError::Verification(output))
            }
        }
    }
}
