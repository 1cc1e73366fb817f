use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nelson::algebra::{small_size_class, AxiomReport, AxiomVariant, IdentityCheck, RuleResult};
use nelson::deduction::{classify_quotient_by_irreducible, is_deductive_system, quotient};
use nelson::duality::{dual_algebra, roundtrip_check, spectrum, NelsonSpace};
use nelson::free::{count_free, count_via_components, free_algebra, MAX_SPACE_N};
use nelson::term::parse_equation;
use nelson::{Error, NelsonAlgebra, Subset, Tables};

#[derive(Parser)]
#[command(name = "nelson", version, about = "Finite Nelson algebras, their spectra and free algebras")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Nelson axioms on an algebra file.
    CheckAxioms {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Main)]
        variant: Variant,
    },
    /// Check an identity `lhs = rhs` on an algebra file.
    CheckIdentity {
        algebra: PathBuf,
        #[arg(long)]
        eq: String,
    },
    /// Five-valuedness, linearity and small-size classification.
    Classify { algebra: PathBuf },
    /// Prime filters with their order and Birula–Rasiowa involution.
    Spectrum { algebra: PathBuf },
    /// Quotient by the deductive system with the given elements.
    Quotient {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ds: Vec<usize>,
    },
    /// Dual algebra of a Nelson space file.
    Dual { space: PathBuf },
    /// Check that an algebra is isomorphic to the dual of its spectrum.
    Roundtrip { algebra: PathBuf },
    /// Describe the free five-valued Nelson algebra on n generators.
    Free {
        #[arg(long)]
        n: usize,
        /// Include the product algebra when it is small enough.
        #[arg(long)]
        materialize: bool,
    },
    /// Number of elements of the free algebra on n generators.
    Count {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Main,
    Brignole,
}

/// How a command ended, mapped onto the exit code.
enum Failure {
    /// A mathematical check failed (exit 1).
    Check(String),
    /// Unreadable input or bad arguments (exit 2).
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format { .. }
            | Error::Syntax { .. }
            | Error::UnboundVariable(_)
            | Error::InvalidArgument(_)
            | Error::InvalidSize(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

/// A finished report: JSON form, text form, and whether every check passed.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("report serializes"));
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::CheckAxioms { algebra, variant } => check_axioms(algebra, *variant),
        Command::CheckIdentity { algebra, eq } => check_identity(algebra, eq),
        Command::Classify { algebra } => classify(algebra),
        Command::Spectrum { algebra } => spectrum_cmd(algebra),
        Command::Quotient { algebra, ds } => quotient_cmd(algebra, ds),
        Command::Dual { space } => dual_cmd(space),
        Command::Roundtrip { algebra } => roundtrip_cmd(algebra),
        Command::Free { n, materialize } => free_cmd(*n, *materialize),
        Command::Count { n } => count_cmd(*n),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_tables(path: &Path) -> Result<Tables, Failure> {
    Ok(Tables::from_json(&read(path)?)?)
}

fn load_algebra(path: &Path) -> Result<NelsonAlgebra, Failure> {
    NelsonAlgebra::try_from(load_tables(path)?)
        .map_err(|e| Failure::Check(format!("{}: not a Nelson algebra: {e}", path.display())))
}

fn witness_text(w: &[(String, usize)]) -> String {
    w.iter()
        .map(|(v, x)| format!("{v}={x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn witness_json(w: &[(String, usize)]) -> Value {
    Value::Object(w.iter().map(|(v, x)| (v.clone(), json!(x))).collect())
}

fn rule_json(r: &RuleResult) -> Value {
    json!({
        "name": r.name,
        "holds": r.holds(),
        "witness": r.witness.as_deref().map(witness_json),
    })
}

fn rule_text(r: &RuleResult) -> String {
    match &r.witness {
        None => format!("{:<6} ok\n", r.name),
        Some(w) => format!("{:<6} FAIL  {}\n", r.name, witness_text(w)),
    }
}

fn set_json(s: &Subset) -> Value {
    json!(s.to_vec())
}

fn check_axioms(path: &Path, variant: Variant) -> Result<Report, Failure> {
    let tables = load_tables(path)?;
    let variant = match variant {
        Variant::Main => AxiomVariant::Main,
        Variant::Brignole => AxiomVariant::Brignole,
    };
    let report: AxiomReport = tables.check_axioms(variant);
    let order = tables.check_order();
    let ok = report.all_hold() && order.iter().all(RuleResult::holds);
    let mut text = String::new();
    for r in report.results.iter().chain(&order) {
        text.push_str(&rule_text(r));
    }
    text.push_str(if ok { "all axioms hold\n" } else { "some axioms fail\n" });
    Ok(Report {
        json: json!({
            "variant": variant,
            "axioms": report.results.iter().map(rule_json).collect::<Vec<_>>(),
            "order": order.iter().map(rule_json).collect::<Vec<_>>(),
            "all_hold": ok,
        }),
        text,
        ok,
    })
}

fn check_identity(path: &Path, eq: &str) -> Result<Report, Failure> {
    let tables = load_tables(path)?;
    let equation = parse_equation(eq)?;
    let check = tables.check_identity(&equation);
    let (json, text) = match &check {
        IdentityCheck::Holds => (
            json!({ "equation": equation.to_string(), "holds": true, "counterexample": null }),
            format!("{equation}\nholds\n"),
        ),
        IdentityCheck::Counterexample(w) => {
            let env = check.env().expect("counterexample has an environment");
            let lhs = tables.eval(&equation.lhs, &env)?;
            let rhs = tables.eval(&equation.rhs, &env)?;
            (
                json!({
                    "equation": equation.to_string(),
                    "holds": false,
                    "counterexample": witness_json(w),
                    "lhs": lhs,
                    "rhs": rhs,
                }),
                format!(
                    "{equation}\nfails at {}: lhs = {lhs}, rhs = {rhs}\n",
                    witness_text(w)
                ),
            )
        }
    };
    Ok(Report { json, text, ok: check.holds() })
}

fn classify(path: &Path) -> Result<Report, Failure> {
    let a = load_algebra(path)?;
    let five = a.is_five_valued();
    let linear = a.is_linear();
    let chain = a.is_chain();
    let class = small_size_class(&a).map(|(name, _)| name);
    let derived = a.check_derived_rules();
    let text = format!(
        "size {}\nfive-valued={five} linear={linear} chain={chain}\nsize class: {}\nderived rules N9-N20: {}\n",
        a.size(),
        class.as_deref().unwrap_or("-"),
        if derived.all_hold() { "hold" } else { "FAIL" },
    );
    Ok(Report {
        json: json!({
            "size": a.size(),
            "five_valued": five,
            "linear": linear,
            "chain": chain,
            "size_class": class,
            "derived_rules": derived.results.iter().map(rule_json).collect::<Vec<_>>(),
        }),
        text,
        ok: derived.all_hold(),
    })
}

fn spectrum_cmd(path: &Path) -> Result<Report, Failure> {
    let a = load_algebra(path)?;
    let sp = spectrum(&a)?;
    let s = &sp.space;
    let plus = s.x_plus();
    let mut text = format!("{} prime filters\n", s.size());
    let mut points = Vec::new();
    for p in s.points() {
        let above: Vec<usize> = s.up(p).iter().filter(|&q| q != p).collect();
        text.push_str(&format!(
            "P{p} = {:?}  φ = P{}{}  contained in {:?}\n",
            sp.filters[p],
            s.phi(p),
            if plus.contains(p) { "  (X+)" } else { "" },
            above,
        ));
        points.push(json!({
            "index": p,
            "filter": set_json(&sp.filters[p]),
            "phi": s.phi(p),
            "plus": plus.contains(p),
        }));
    }
    Ok(Report::ok(
        json!({ "points": points, "space": s.to_file() }),
        text,
    ))
}

fn quotient_cmd(path: &Path, ds: &[usize]) -> Result<Report, Failure> {
    let a = load_algebra(path)?;
    if let Some(&x) = ds.iter().find(|&&x| x >= a.size()) {
        return Err(Failure::Usage(format!("element {x} outside the carrier 0..{}", a.size())));
    }
    let d = Subset::from_indices(a.size(), ds.iter().copied());
    if !is_deductive_system(&a, &d) {
        return Err(Failure::Check(format!("{d:?} is not a deductive system")));
    }
    let q = quotient(&a, &d)?;
    let tag = if a.is_five_valued() {
        classify_quotient_by_irreducible(&a, &d).ok().map(|c| c.tag)
    } else {
        None
    };
    let mut text = format!("{} classes\n", q.classes.len());
    for (i, c) in q.classes.iter().enumerate() {
        text.push_str(&format!("[{i}] = {c:?}\n"));
    }
    if let Some(t) = tag {
        text.push_str(&format!("quotient ≅ {t:?}\n"));
    }
    Ok(Report::ok(
        json!({
            "classes": q.classes.iter().map(set_json).collect::<Vec<_>>(),
            "chain": tag,
            "quotient": q.quotient.to_file(),
        }),
        text,
    ))
}

fn dual_cmd(path: &Path) -> Result<Report, Failure> {
    let s = NelsonSpace::from_json(&read(path)?)?;
    let d = dual_algebra(&s)?;
    let mut text = format!("{} increasing sets\n", d.sets.len());
    for (i, u) in d.sets.iter().enumerate() {
        text.push_str(&format!("[{i}] = {u:?}\n"));
    }
    Ok(Report::ok(
        json!({
            "sets": d.sets.iter().map(set_json).collect::<Vec<_>>(),
            "algebra": d.algebra.to_file(),
        }),
        text,
    ))
}

fn roundtrip_cmd(path: &Path) -> Result<Report, Failure> {
    let a = load_algebra(path)?;
    let h = roundtrip_check(&a)?;
    Ok(Report::ok(
        json!({ "isomorphism": h.map, "holds": true }),
        format!("A ≅ dual(spectrum(A)) via {:?}\n", h.map),
    ))
}

fn free_cmd(n: usize, materialize: bool) -> Result<Report, Failure> {
    if n == 0 || n > MAX_SPACE_N {
        return Err(Failure::Usage(format!("n must be between 1 and {MAX_SPACE_N}")));
    }
    let d = free_algebra(n)?;
    let mut text = format!("F({n}): {} components\n", d.components.len());
    let mut rows = Vec::new();
    for c in &d.components {
        text.push_str(&format!(
            "{:>width$}  {:<10} {:>3} points  {} elements\n",
            c.component.maximal.to_string(),
            c.component.kind.to_string(),
            c.component.points.len(),
            c.algebra_size,
            width = n,
        ));
        rows.push(json!({
            "label": c.component.maximal,
            "kind": c.component.kind.to_string(),
            "points": c.component.points.len(),
            "algebra_size": c.algebra_size.to_string(),
        }));
    }
    text.push_str(&format!("total {}\n", d.total_count));
    let algebra = match (&d.materialized, materialize) {
        (Some(m), true) => Some(m.algebra.to_file()),
        (None, true) => {
            eprintln!("note: F({n}) has {} elements; not materialized", d.total_count);
            None
        }
        _ => None,
    };
    Ok(Report::ok(
        json!({
            "n": n,
            "components": rows,
            "total_count": d.total_count.to_string(),
            "materialized": algebra,
        }),
        text,
    ))
}

fn count_cmd(n: usize) -> Result<Report, Failure> {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let formula = count_free(n);
    let via = if n <= MAX_SPACE_N {
        Some(count_via_components(n)?)
    } else {
        None
    };
    let ok = via.as_ref().is_none_or(|v| *v == formula);
    if !ok {
        eprintln!("error: component count {} disagrees with the formula", via.as_ref().expect("checked"));
    }
    Ok(Report {
        json: json!({
            "n": n,
            "formula": formula.to_string(),
            "via_components": via.map(|v| v.to_string()),
        }),
        text: format!("{formula}\n"),
        ok,
    })
}
