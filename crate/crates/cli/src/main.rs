//! `symtensor`: invariant-subspace dimensions, symmetrized structures and
//! projections of constitutive tensors.
//!
//! Exit codes: 0 success, 1 verification rows failed, 2 unknown name,
//! 3 quadrature failure, 4 internal inconsistency, 5 bad input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use symtensor_core::characters::fix_dimension;
use symtensor_core::groups::resolve_group;
use symtensor_core::projector::{extract_isotropic_moduli, invariance_residual, project, structure_report};
use symtensor_core::spaces::catalog_space;
use symtensor_core::verify::{self, Catalog};
use symtensor_core::voigt::VoigtMap;
use symtensor_core::{Error, FlatTensor, SymmetryGroup, TensorSpace, TolerancePolicy};

#[derive(Parser)]
#[command(name = "symtensor", version, about = "Symmetry classes of constitutive tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(clap::Args)]
struct Target {
    /// Tensor space (sym2, sym3, ela2, ela3, major3, v1, v1bar, v2, v2bar, high2)
    #[arg(long)]
    space: String,
    /// Symmetry group (trivial, z2, ..., d6, cubic, so2, o2, so2-e3, o2-e3, so3)
    #[arg(long)]
    group: String,
    /// Symmetry axis for 3D axial groups, e.g. 1,1,1
    #[arg(long, value_parser = parse_axis)]
    axis: Option<[f64; 3]>,
    /// Order for bare `z` / `d` group names
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the invariant subspace
    Dim {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Labelled Voigt matrix of the general invariant tensor
    Structure {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Group-average a tensor read from a JSON file
    Project {
        /// Space; defaults to the `space` field of the input
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse_axis)]
        axis: Option<[f64; 3]>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        input: PathBuf,
        /// Output file (stdout when absent)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Isotropic (λ, μ, μc) from values of the isotropic major3 labels
    Moduli {
        /// Label assignment such as C12=1 (repeatable)
        #[arg(long = "set", value_parser = parse_assignment, required = true)]
        set: Vec<(String, f64)>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Slot-order tables of every Voigt map
    Maps {
        /// Print the tables as JSON
        #[arg(long)]
        dump: bool,
    },
    /// Reproduce the published tables; nonzero exit on any failing row
    VerifyPaper {
        /// Comma-separated categories: dims, characters, structures, haar, voigt, moduli, spot
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| "axis needs three comma-separated components".to_string())
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected LABEL=VALUE")?;
    let v = v.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v))
}

/// Failures with their exit code.
enum Failure {
    Lib(Error),
    Input(String),
    Rows(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rows(_) => 1,
            Failure::Input(_) => 5,
            Failure::Lib(e) => match e {
                Error::UnknownName { .. } => 2,
                Error::QuadratureNotConverged { .. } | Error::UnsupportedDegree { .. } => 3,
                Error::Shape(_) | Error::NonFinite(_) | Error::InvalidArgument(_) | Error::NotInSpace { .. } => 5,
                _ => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(m) => m.clone(),
            Failure::Rows(n) => format!("{n} verification row(s) failed"),
        }
    }
}

fn resolve(space: &str, group: &str, axis: Option<[f64; 3]>, order: Option<usize>) -> Result<(TensorSpace, SymmetryGroup), Failure> {
    let space = catalog_space(space)?;
    let group = resolve_group(group, space.n, axis, order)?;
    Ok((space, group))
}

fn tolerance() -> Result<TolerancePolicy, Failure> {
    TolerancePolicy::from_env().map_err(|e| Failure::Input(format!("SYMTENSOR_TOL: {e}")))
}

/// Writes to stdout, exiting quietly when the reader has gone away.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        std::process::exit(0);
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read_tensor(path: &PathBuf) -> Result<(Option<String>, FlatTensor), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let field = |name: &str| {
        v.get(name)
            .and_then(serde_json::Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Failure::Input(format!("input lacks integer field '{name}'")))
    };
    let (n, k) = (field("n")?, field("k")?);
    let coeffs: Vec<f64> = v
        .get("coeffs")
        .and_then(|c| serde_json::from_value(c.clone()).ok())
        .ok_or_else(|| Failure::Input("input lacks numeric array 'coeffs'".into()))?;
    let space = v.get("space").and_then(|s| s.as_str()).map(String::from);
    Ok((space, FlatTensor::new(n, k, coeffs)?))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dim { target, format } => {
            let (space, group) = resolve(&target.space, &target.group, target.axis, target.order)?;
            let dim = fix_dimension(&space, &group)?;
            match format {
                Format::Json => print_json(&json!({"space": space.name, "group": group.catalog_id, "dim": dim})),
                _ => out!("{dim}"),
            }
        }
        Command::Structure { target, format } => {
            let tol = tolerance()?;
            let (space, group) = resolve(&target.space, &target.group, target.axis, target.order)?;
            let report = structure_report(&space, &group, &tol)?;
            match format {
                Format::Text => emit(&report.to_text()),
                Format::Json => print_json(&report.to_json()),
                Format::Latex => emit(&report.to_latex()),
            }
        }
        Command::Project { space, group, axis, order, input, output } => {
            let (header, t) = read_tensor(&input)?;
            let name = match (space, header) {
                (Some(a), Some(b)) if !a.eq_ignore_ascii_case(&b) => {
                    return Err(Failure::Input(format!("--space {a} contradicts input space {b}")))
                }
                (Some(a), _) => a,
                (None, Some(b)) => b,
                (None, None) => return Err(Failure::Input("no space given (--space or input 'space')".into())),
            };
            let (space, group) = resolve(&name, &group, axis, order)?;
            space.check_shape(&t)?;
            let p = project(&space, &group, &t)?;
            let residual = invariance_residual(&group, &p);
            let out = json!({"n": p.n, "k": p.k, "space": space.name, "coeffs": p.coeffs});
            let text = serde_json::to_string_pretty(&out).expect("serializable");
            match output {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    out!("invariance residual {residual:.3e}");
                }
                None => {
                    out!("{text}");
                    eprintln!("invariance residual {residual:.3e}");
                }
            }
        }
        Command::Moduli { set, format } => {
            let tol = tolerance()?;
            let (space, group) = resolve("major3", "so3", None, None)?;
            let report = structure_report(&space, &group, &tol)?;
            let values: BTreeMap<String, f64> = set.into_iter().collect();
            let m = extract_isotropic_moduli(&report, &values)?;
            match format {
                Format::Json => print_json(&m),
                _ => out!("lambda {}\nmu {}\nmu_c {}", m.lambda, m.mu, m.mu_c),
            }
        }
        Command::Maps { dump } => {
            let maps = VoigtMap::catalog();
            if dump {
                print_json(&maps);
            } else {
                for m in maps {
                    out!("{:<16} {}", m.name, m.slot_names().join(" "));
                }
            }
        }
        Command::VerifyPaper { rows, format } => {
            if let Some(bad) = rows.iter().find(|r| !verify::CATEGORIES.iter().any(|c| c.eq_ignore_ascii_case(r))) {
                return Err(Failure::Lib(Error::UnknownName { kind: "row category", name: bad.clone() }));
            }
            let results = verify::run(&Catalog::default(), &rows);
            let failed = results.iter().filter(|r| !r.pass).count();
            match format {
                Format::Json => print_json(
                    &results
                        .iter()
                        .map(|r| json!({"category": r.category, "name": r.name, "expected": r.expected, "actual": r.actual, "pass": r.pass}))
                        .collect::<Vec<_>>(),
                ),
                _ => {
                    for r in &results {
                        out!(
                            "{} {:<11} {}  expected {}  actual {}",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.category,
                            r.name,
                            r.expected,
                            r.actual
                        );
                    }
                    out!("{} rows, {failed} failed", results.len());
                }
            }
            if failed > 0 {
                return Err(Failure::Rows(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // malformed arguments are input errors, not unknown names
            return if e.use_stderr() { ExitCode::from(5) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("symtensor: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
