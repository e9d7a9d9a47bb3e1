use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::echelon::{
    decompose, default_ring, random_datum, reassemble, validate_datum, DatumError, EchelonDatum,
    GenParams,
};
use crate::invariants::{det_ledger, k_class_report};
use crate::lattice::{lattice_equal, relative_coordinates, twist, LatticeBasis, TwistDirection};
use crate::modification::{
    extend_map, ladder, maximality_probe, modify, quotient_report, ModError, ModificationChain,
};
use crate::poly::{Field, Poly};
use crate::polyechelon::{
    check_transverse, order_independence_check, poly_modify, PolyEchelonDatum, PolyEchelonError,
};

use super::{parse_field, DatumFile, Loaded, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Decompose,
    Modify,
    Ladder,
    Poly,
    Extend,
    Probe,
    Invariants,
    Gen,
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Decompose => "decompose",
            Command::Modify => "modify",
            Command::Ladder => "ladder",
            Command::Poly => "poly",
            Command::Extend => "extend",
            Command::Probe => "probe",
            Command::Invariants => "invariants",
            Command::Gen => "gen",
            Command::Selftest => "selftest",
        }
    }
}

fn field_arg(s: &str) -> Result<Field, String> {
    parse_field(s).ok_or_else(|| format!("expected Q or Fp:<prime>, got {s:?}"))
}

/// Exact echelon data and echelon modifications.
#[derive(Clone, Debug, Parser)]
#[command(name = "echelon", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Datum file (TOML).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Directory receiving `<command>.json` and `<command>.txt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Coefficient field, overriding the file: Q or Fp:<p>.
    #[arg(long, value_parser = field_arg)]
    pub field: Option<Field>,
    /// Print the JSON report instead of the text report.
    #[arg(long)]
    pub json: bool,
    /// Rank for `gen`.
    #[arg(long, default_value_t = 3)]
    pub rank: usize,
    /// Filtration length for `gen`.
    #[arg(long, default_value_t = 2)]
    pub length: usize,
    /// Number of elementary scrambles for `gen`.
    #[arg(long, default_value_t = 2)]
    pub scrambles: usize,
}

/// The result of one command: exit code, text report, JSON report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: String,
    /// Extra artifacts as `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

enum Failure {
    Usage(String),
    Math {
        kind: String,
        message: String,
        detail: Value,
    },
    Breach {
        kind: String,
        message: String,
    },
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn kind_of(message: &str) -> String {
    message
        .split(['(', ':', ' '])
        .next()
        .unwrap_or_default()
        .to_string()
}

impl From<DatumError> for Failure {
    fn from(e: DatumError) -> Self {
        ModError::Datum(e).into()
    }
}

impl From<ModError> for Failure {
    fn from(e: ModError) -> Self {
        let message = e.to_string();
        if e.is_internal()
            || matches!(
                e,
                ModError::Lattice(_) | ModError::Datum(DatumError::Lattice(_))
            )
        {
            let kind = match &e {
                ModError::Lattice(_) | ModError::Datum(_) => "InternalError".to_string(),
                ModError::NonPrincipalSum { .. } => "ClosedFormMismatch".to_string(),
                _ => kind_of(&message),
            };
            return Failure::Breach { kind, message };
        }
        let detail = match &e {
            ModError::Datum(DatumError::Invalid(v)) => {
                serde_json::to_value(v).expect("serializable")
            }
            ModError::HypothesisFail {
                i,
                column,
                witness,
                value,
            } => {
                json!({ "i": i, "column": column, "witness": witness, "value": value })
            }
            _ => Value::Null,
        };
        let kind = match &e {
            ModError::Datum(DatumError::Invalid(_))
            | ModError::HypothesisFail { .. }
            | ModError::MapUnsupported(_)
            | ModError::NotUnimodular(_) => kind_of(&message),
            _ => "InvalidInput".to_string(),
        };
        Failure::Math {
            kind,
            message,
            detail,
        }
    }
}

impl From<PolyEchelonError> for Failure {
    fn from(e: PolyEchelonError) -> Self {
        match e {
            PolyEchelonError::Mod(m) => m.into(),
            PolyEchelonError::Datum(d) => d.into(),
            PolyEchelonError::Lattice(l) => ModError::Lattice(l).into(),
            e => {
                let message = e.to_string();
                Failure::Math {
                    kind: kind_of(&message),
                    message,
                    detail: Value::Null,
                }
            }
        }
    }
}

impl From<crate::lattice::LatticeError> for Failure {
    fn from(e: crate::lattice::LatticeError) -> Self {
        ModError::Lattice(e).into()
    }
}

/// A successful run: report, text, exit code (0, or 1/3 for negative verdicts).
struct Done {
    code: u8,
    report: Value,
    text: String,
    files: Vec<(String, String)>,
}

impl Done {
    fn ok(report: Value, text: String) -> Done {
        Done {
            code: 0,
            report,
            text,
            files: Vec::new(),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Aligned rendering of a row-major matrix of strings.
pub fn matrix_text(rows: &[Vec<String>]) -> String {
    let ncols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "  [ {} ]", cells.join("  "));
    }
    out
}

fn poly_rows(columns: &[Vec<Poly>]) -> Vec<Vec<String>> {
    let r = columns.first().map_or(0, Vec::len);
    (0..r)
        .map(|i| columns.iter().map(|c| c[i].to_string()).collect())
        .collect()
}

fn load(cli: &Cli) -> Result<Loaded, Failure> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Failure::Usage("--in <file> is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(DatumFile::parse(&text)?.load(cli.field)?)
}

fn seed(cli: &Cli, l: &Loaded) -> u64 {
    cli.seed.or(l.seed).unwrap_or(0)
}

fn trials(cli: &Cli, l: &Loaded) -> usize {
    cli.trials.or(l.trials).unwrap_or(20)
}

/// Runs one command. Never panics on malformed input; panics inside the
/// computation are reported by the binary as internal errors.
pub fn run_command(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let result = match cli.command {
        Command::Validate => cmd_validate(cli),
        Command::Decompose => cmd_decompose(cli),
        Command::Modify => cmd_modify(cli),
        Command::Ladder => cmd_ladder(cli),
        Command::Poly => cmd_poly(cli),
        Command::Extend => cmd_extend(cli),
        Command::Probe => cmd_probe(cli),
        Command::Invariants => cmd_invariants(cli),
        Command::Gen => cmd_gen(cli),
        Command::Selftest => cmd_selftest(),
    };
    let (code, status, report, text, files) = match result {
        Ok(d) => {
            let status = match d.code {
                0 => "ok",
                1 => "failure",
                _ => "breach",
            };
            (d.code, status, d.report, d.text, d.files)
        }
        Err(Failure::Usage(message)) => (
            2,
            "usage",
            json!({ "error": "ParseError", "message": message }),
            format!("error: {message}\n"),
            vec![],
        ),
        Err(Failure::Math {
            kind,
            message,
            detail,
        }) => (
            1,
            "failure",
            json!({ "error": kind, "message": message, "detail": detail }),
            format!("{message}\n"),
            vec![],
        ),
        Err(Failure::Breach { kind, message }) => (
            3,
            "breach",
            json!({ "error": kind, "message": message }),
            format!("internal breach: {message}\n"),
            vec![],
        ),
    };
    let envelope =
        json!({ "command": name, "status": status, "exit_code": code, "report": report });
    let mut json = serde_json::to_string_pretty(&envelope).expect("reports serialize");
    json.push('\n');
    Outcome {
        code,
        text,
        json,
        files,
    }
}

fn cmd_validate(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut all_valid = true;
    for (k, d) in l.data.iter().enumerate() {
        let rep = validate_datum(d)?;
        let prefix = if l.data.len() > 1 {
            format!("datum {k}: ")
        } else {
            String::new()
        };
        if rep.valid {
            let _ = writeln!(text, "{prefix}valid");
        } else {
            all_valid = false;
            let _ = writeln!(text, "{prefix}invalid");
            for v in &rep.violations {
                let _ = writeln!(text, "  {v}");
            }
        }
        let violations: Vec<String> = rep.violations.iter().map(ToString::to_string).collect();
        reports.push(json!({ "datum": k, "valid": rep.valid, "violations": violations, "steps": to_value(&rep.steps) }));
    }
    Ok(Done {
        code: if all_valid { 0 } else { 1 },
        report: json!({ "data": reports }),
        text,
        files: vec![],
    })
}

fn cmd_decompose(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let mut reports = Vec::new();
    let mut text = String::new();
    for (k, d) in l.data.iter().enumerate() {
        let dec = decompose(d)?;
        let back = reassemble(&dec, d.chain())?;
        let checks = (1..=d.len())
            .map(|i| Ok(json!({ "level": i, "equal": lattice_equal(back.level(i), d.level(i))? })))
            .collect::<Result<Vec<_>, Failure>>()?;
        let rows = poly_rows(&dec.basis);
        if l.data.len() > 1 {
            let _ = writeln!(text, "datum {k}");
        }
        let ranks: Vec<String> = dec.ranks.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "ranks ({})", ranks.join(", "));
        let _ = write!(text, "U =\n{}", matrix_text(&rows));
        let _ = writeln!(text, "reassembly reproduces E^1..E^{}", d.len());
        reports.push(json!({
            "datum": k,
            "ranks": dec.ranks,
            "levels": dec.levels(),
            "basis": rows,
            "reassembly": checks,
        }));
    }
    Ok(Done::ok(json!({ "data": reports }), text))
}

fn modification_json(d: &EchelonDatum, c: &ModificationChain) -> Result<Value, Failure> {
    let chain = d.chain();
    let dec = &c.decomposition;
    let levels = dec.levels();
    let mut stages = Vec::new();
    for (j, s) in c.stages.iter().enumerate() {
        let closed = crate::modification::diag::closed_form(chain, &levels, j);
        let closed = LatticeBasis::from_adapted(d.ring(), &dec.basis, &closed, "closed")?;
        stages.push(json!({
            "stage": format!("E_{j}"),
            "matrix": s.to_rows(),
            "closed_form": lattice_equal(s, &closed)?,
        }));
    }
    let mut ladder_json = Vec::new();
    for (j, row) in c.ladder.iter().enumerate() {
        for (i, l) in row.iter().enumerate() {
            ladder_json.push(json!({ "j": j + 1, "i": i + 1, "matrix": l.to_rows() }));
        }
    }
    let mut inclusions = Vec::new();
    for i in 1..=d.len() {
        let twisted = twist(d.level(i), &chain.big_d(i), TwistDirection::Up);
        let coords = relative_coordinates(&twisted, &c.stages[i])?;
        inclusions.push(json!({
            "i": i,
            "inclusion": format!("E^{i}(D_{i}) in E_{i}"),
            "coordinates": poly_rows(&coords),
        }));
    }
    let quotients = quotient_report(d, c)?;
    Ok(json!({
        "ranks": dec.ranks,
        "basis": poly_rows(&dec.basis),
        "stages": stages,
        "ladder": ladder_json,
        "inclusions": inclusions,
        "quotients": to_value(&quotients),
    }))
}

fn stages_text(c: &ModificationChain) -> String {
    let mut text = String::new();
    for (j, s) in c.stages.iter().enumerate() {
        let _ = write!(text, "E_{j} =\n{}", matrix_text(&s.to_rows()));
    }
    text
}

fn first(l: &Loaded) -> &EchelonDatum {
    &l.data[0]
}

fn cmd_modify(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let d = first(&l);
    let c = modify(d)?;
    let mut text = stages_text(&c);
    for (j, row) in c.ladder.iter().enumerate() {
        for (i, lat) in row.iter().enumerate() {
            let _ = write!(
                text,
                "E_{}^{} =\n{}",
                j + 1,
                i + 1,
                matrix_text(&lat.to_rows())
            );
        }
    }
    let _ = writeln!(
        text,
        "closed forms verified; E^i(D_i) in E_i for i = 1..{}",
        d.len()
    );
    Ok(Done::ok(modification_json(d, &c)?, text))
}

fn cmd_ladder(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let d = first(&l);
    let c = modify(d)?;
    let rep = ladder(d, &c, seed(cli, &l), trials(cli, &l))?;
    let mut text = String::new();
    for e in &rep.entries {
        let _ = write!(
            text,
            "E_{}^{} (definitional) =\n{}  certified; audit {}/{} samples in both intersectands\n",
            e.j,
            e.i,
            matrix_text(&e.lattice),
            e.audit_common,
            e.audit_samples
        );
    }
    for cmp in &rep.displayed {
        if cmp.agrees {
            let _ = writeln!(text, "E_1^{} agrees with the displayed adapted form", cmp.i);
        } else {
            let _ = write!(
                text,
                "MISMATCH: E_1^{} differs from the displayed adapted form\n{}",
                cmp.i,
                matrix_text(&cmp.displayed)
            );
            let _ = writeln!(
                text,
                "  displayed form {} inside the definitional one",
                if cmp.displayed_contained {
                    "lies"
                } else {
                    "does not lie"
                }
            );
        }
    }
    if let Some(ok) = rep.displayed_recursion_reproduces {
        let _ = writeln!(
            text,
            "E_2 from the displayed E_1^1: {}",
            if ok { "reproduced" } else { "differs" }
        );
    }
    let _ = write!(text, "{}", stages_text(&c));
    let code = if rep.displayed_recursion_reproduces == Some(false) {
        3
    } else {
        0
    };
    Ok(Done {
        code,
        report: to_value(&rep),
        text,
        files: vec![],
    })
}

fn cmd_poly(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let p = PolyEchelonDatum::new(l.data.clone())?;
    let tr = check_transverse(&p)?;
    if !tr.transverse {
        let mut text = "not transverse\n".to_string();
        for (a, b) in &tr.shared_variables {
            let _ = writeln!(text, "  data {a} and {b} share divisor variables");
        }
        for c in tr.induced.iter().filter(|c| c.violation.is_some()) {
            let _ = writeln!(
                text,
                "  datum {} on level {} of datum {}: {}",
                c.datum,
                c.level,
                c.with,
                c.violation.as_deref().unwrap_or_default()
            );
        }
        return Ok(Done {
            code: 1,
            report: json!({ "transversality": to_value(&tr) }),
            text,
            files: vec![],
        });
    }
    let order: Vec<usize> = (0..p.len()).collect();
    let state = poly_modify(&p, &order)?;
    let rep = order_independence_check(&p, seed(cli, &l))?;
    let mut text = "transverse\n".to_string();
    for (j, s) in state.stages.iter().enumerate() {
        let _ = write!(text, "M_{j} =\n{}", matrix_text(&s.to_rows()));
    }
    let _ = writeln!(
        text,
        "{} orderings {}",
        rep.orders.len(),
        if rep.agree { "agree" } else { "DISAGREE" }
    );
    let stages: Vec<Value> = state.stages.iter().map(|s| json!(s.to_rows())).collect();
    let report = json!({
        "transversality": to_value(&tr),
        "stages": stages,
        "order_independence": to_value(&rep),
    });
    Ok(Done {
        code: if rep.agree { 0 } else { 3 },
        report,
        text,
        files: vec![],
    })
}

fn require_phi(l: &Loaded) -> Result<&crate::modification::MapToLine, Failure> {
    l.phi
        .as_ref()
        .ok_or_else(|| Failure::Usage("the datum file has no phi row".into()))
}

fn cmd_extend(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let d = first(&l);
    let phi = require_phi(&l)?;
    let c = modify(d)?;
    let rep = extend_map(d, &c, phi)?;
    let mut text = "hypothesis holds at every level\n".to_string();
    let _ = writeln!(
        text,
        "phi on the basis of Mod: ({})",
        rep.extension.join(", ")
    );
    Ok(Done::ok(to_value(&rep), text))
}

fn cmd_probe(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let d = first(&l);
    let phi = require_phi(&l)?;
    let c = modify(d)?;
    extend_map(d, &c, phi)?;
    let rep = maximality_probe(d, &c, phi, seed(cli, &l), trials(cli, &l))?;
    let mut text = format!(
        "{} trials, {} enlargements tried\n",
        rep.trials, rep.candidates
    );
    if rep.consistent {
        let _ = writeln!(text, "consistent: phi extends to none of them");
    }
    for r in &rep.counterexamples {
        let _ = writeln!(
            text,
            "COUNTEREXAMPLE trial {}: phi extends to Mod + R*({})/{}",
            r.trial,
            r.vector.join(", "),
            r.denominator
        );
    }
    Ok(Done::ok(to_value(&rep), text))
}

fn cmd_invariants(cli: &Cli) -> Result<Done, Failure> {
    let l = load(cli)?;
    let d = first(&l);
    let c = modify(d)?;
    let ledgers = det_ledger(d, &c)?;
    let classes = k_class_report(d, &c)?;
    let quotients = quotient_report(d, &c)?;
    let mut text = String::new();
    for (j, ledger) in ledgers.iter().enumerate() {
        let parts: Vec<String> = ledger
            .coefficients
            .iter()
            .map(|(v, e)| format!("{v}: {e}"))
            .collect();
        let _ = writeln!(text, "det E_{j} / det E_0: {{{}}}", parts.join(", "));
    }
    for k in &classes {
        let _ = writeln!(
            text,
            "[E_{}] - [E_{}] = free of rank {} over R/({}), twisted by {}",
            k.step + 1,
            k.step,
            k.rank,
            k.annihilator,
            k.twist
        );
    }
    let report = json!({
        "ledgers": to_value(&ledgers),
        "k_classes": to_value(&classes),
        "quotients": to_value(&quotients),
    });
    Ok(Done::ok(report, text))
}

fn cmd_gen(cli: &Cli) -> Result<Done, Failure> {
    let field = cli.field.unwrap_or(Field::Rational);
    let ring = default_ring(field, 1);
    let params = GenParams {
        seed: cli.seed.unwrap_or(0),
        rank: cli.rank,
        length: cli.length,
        scramble_count: cli.scrambles,
        ..GenParams::default()
    };
    let g = random_datum(&ring, &params).map_err(|e| match e {
        DatumError::BadParameters(m) => Failure::Usage(m),
        e => e.into(),
    })?;
    let file = DatumFile::from_data(&[g.datum]).to_toml();
    Ok(Done {
        code: 0,
        report: json!({ "params": to_value(&params), "block_ranks": g.ranks, "file": file }),
        text: file.clone(),
        files: vec![("datum.toml".to_string(), file)],
    })
}

const R1: &str = include_str!("../../fixtures/r1.toml");
const R2: &str = include_str!("../../fixtures/r2.toml");
const PERSISTENCE: &str = include_str!("../../fixtures/persistence_violation.toml");

fn cmd_selftest() -> Result<Done, Failure> {
    let load = |text: &str| -> Result<Loaded, Failure> { Ok(DatumFile::parse(text)?.load(None)?) };
    let r1 = load(R1)?;
    let r2 = load(R2)?;
    let bad = load(PERSISTENCE)?;
    let mut checks: Vec<(String, bool)> = Vec::new();

    let lat = |ring: &crate::poly::Ring, rows: &[&[&str]]| -> Result<LatticeBasis, Failure> {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Ok(LatticeBasis::from_rows(ring, &rows, "expected")?)
    };
    let c1 = modify(first(&r1))?;
    let e1 = lat(&r1.ring, &[&["1/y", "0"], &["0", "1"]])?;
    checks.push((
        "R1: E_1 = <(1/y)e1, e2>".into(),
        lattice_equal(&c1.stages[1], &e1)?,
    ));
    let c2 = modify(first(&r2))?;
    let e2 = lat(
        &r2.ring,
        &[&["1/y^2", "0", "0"], &["0", "1/y", "0"], &["0", "0", "1"]],
    )?;
    checks.push((
        "R2: E_2 = <(1/y^2)e1, (1/y)e2, e3>".into(),
        lattice_equal(&c2.stages[2], &e2)?,
    ));
    let e11 = lat(
        &r2.ring,
        &[&["1/y", "0", "0"], &["0", "1", "0"], &["0", "0", "xy"]],
    )?;
    checks.push((
        "R2: E_1^1 = <(1/y)e1, e2, xy e3>".into(),
        lattice_equal(c2.ladder_entry(1, 1), &e11)?,
    ));
    let rep = ladder(first(&r2), &c2, 0, 10)?;
    checks.push(("R2: displayed E_1^1 flagged".into(), rep.mismatch_flagged));
    checks.push((
        "R2: displayed recursion reproduces E_2".into(),
        rep.displayed_recursion_reproduces == Some(true),
    ));
    let v = validate_datum(first(&bad))?;
    checks.push((
        "<x e1, e2>: PersistenceViolation(1, 0)".into(),
        v.persistence_violation() == Some((1, 0)),
    ));

    let mut text = String::new();
    for (name, ok) in &checks {
        let _ = writeln!(text, "{} {name}", if *ok { "ok  " } else { "FAIL" });
    }
    let all = checks.iter().all(|(_, ok)| *ok);
    let report = json!({
        "checks": checks.iter().map(|(n, ok)| json!({ "check": n, "ok": ok })).collect::<Vec<_>>(),
        "passed": all,
    });
    Ok(Done {
        code: if all { 0 } else { 3 },
        report,
        text,
        files: vec![],
    })
}

/// Entry point of the binary: parses arguments, runs, prints and writes
/// reports, and returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match std::panic::catch_unwind(|| run_command(&cli)) {
        Ok(o) => o,
        Err(_) => {
            eprintln!("internal error: the computation panicked");
            return 3;
        }
    };
    print!(
        "{}",
        if cli.json {
            &outcome.json
        } else {
            &outcome.text
        }
    );
    if let Some(dir) = &cli.out {
        let name = cli.command.name();
        let mut files = vec![
            (format!("{name}.json"), outcome.json.clone()),
            (format!("{name}.txt"), outcome.text.clone()),
        ];
        files.extend(outcome.files.iter().cloned());
        let written = std::fs::create_dir_all(dir).and_then(|_| {
            files
                .iter()
                .try_for_each(|(f, body)| std::fs::write(dir.join(f), body))
        });
        if let Err(e) = written {
            eprintln!("error: cannot write reports to {}: {e}", dir.display());
            return 2;
        }
    }
    outcome.code
}
