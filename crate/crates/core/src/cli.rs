//! Command-line surface: argument types, report types and the dispatcher
//! used by the `commat` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{build_action, AlgebraError, CommutingAction};
use crate::diagrams::{
    analyze_action, bundled_source, family_abxy, family_abxy_alt, family_de, family_frobenius,
    family_matrix_units, family_rd, family_st_power, parallelogram_lint, parse_diagram, realize,
    serialize_diagram, to_svg, DiagramError, ModuleDiagram, Violation,
};
use crate::exactlin::FieldSpec;
use crate::modtheory::{enumerate_reps_with, LocalAlgebra, ModError};
use crate::pid::{
    ideal_chain, random_endo, random_module_with_endo, rt_verify, InvariantFactors, PidError,
    PidMatrix, PidModuleWithEndo, PidSpec, RingElem, RtReport,
};
use crate::search::{run_search_with_checkpoint, SearchConfig, SearchError, SearchReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Default node budget for `enumreps`.
pub const DEFAULT_REPS_BUDGET: u64 = 50_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "commat",
    version,
    about = "Commuting matrices, local algebras and their modules"
)]
pub struct Cli {
    /// Print JSON instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Field: Q or F<p>, e.g. F2.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Work budget for `search` and `enumreps`.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, lint, realize and analyze a `.cdg` diagram (`bundled:<name>` for built-ins).
    Analyze {
        path: String,
        /// Skip the parallelogram lint; a non-commuting diagram then exits with code 3.
        #[arg(long)]
        no_lint: bool,
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// Check the parallelogram rule only.
    Lint { path: String },
    /// Instantiate and analyze a named family.
    Family {
        /// abxy, abxy-alt, matrix-units, de, rd, frobenius, st-power
        name: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        e0: Option<usize>,
        #[arg(long)]
        e1: Option<usize>,
        /// `st-power`: one value; `frobenius`: four comma-separated values.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        emit_cdg: Option<PathBuf>,
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// Enumerate commuting diagram classes and report dimension excess.
    Search {
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        max_verts: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Directory for `report.json` and witness `.cdg` files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Compare the length of the algebra generated by one endomorphism with the module length.
    Rt {
        /// Z, or a field followed by x, e.g. F2x or Qx.
        #[arg(long)]
        ring: String,
        /// Invariant factors, comma separated, e.g. 4,2 or x^2,x.
        #[arg(long, value_delimiter = ',')]
        factors: Vec<String>,
        /// Matrix literal such as [[1,0],[0,1]], or a scalar c for c times the identity.
        #[arg(long, conflicts_with = "random")]
        endo: Option<String>,
        /// Random endomorphism (and random factors when none are given).
        #[arg(long)]
        random: bool,
        /// Length bound for random factors.
        #[arg(long, default_value_t = 6)]
        max_length: usize,
    },
    /// Enumerate all modules of one dimension over a preset local algebra.
    Enumreps {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{path}: {} parallelogram violation(s)", violations.len())]
    Lint {
        path: String,
        violations: Vec<Violation>,
    },
    #[error("{0}")]
    NonCommuting(String),
    #[error("{0}")]
    Input(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Pid(#[from] PidError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for malformed input (parse, lint, invalid data), 3 for non-commuting
    /// generators, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Lint { .. } | CliError::Input(_) | CliError::Pid(_) => 2,
            CliError::NonCommuting(_) => 3,
            _ => 1,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InputKind {
    File,
    Bundled,
    Family,
    /// Diagram text passed directly, e.g. through the C interface.
    Inline,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InputIdentity {
    pub kind: InputKind,
    pub name: String,
    pub params: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputIdentity,
    pub field: String,
    pub dim_m: usize,
    pub dim_a: usize,
    pub local: bool,
    /// `dim m^i M` for `i = 0, 1, ...`; empty when the algebra is not local.
    pub radical_layers: Vec<usize>,
    pub min_generators: Option<usize>,
    pub socle_length: Option<usize>,
    pub cyclic: Option<bool>,
    pub cocyclic: Option<bool>,
    pub faithful: bool,
    pub basis: Vec<String>,
    pub relations: Vec<String>,
    pub gerstenhaber_holds: bool,
    pub excess: i64,
}

impl AnalysisReport {
    pub fn of_action(input: InputIdentity, action: &CommutingAction) -> Self {
        let (r, _) = analyze_action(action);
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            input,
            field: action.field().to_string(),
            dim_m: r.dim_m,
            dim_a: r.dim_a,
            local: r.local,
            radical_layers: r.radical_layers,
            min_generators: r.min_generators,
            socle_length: r.socle_length,
            cyclic: r.min_generators.map(|g| g == 1),
            cocyclic: r.socle_length.map(|s| s == 1),
            faithful: r.faithful,
            basis: r.labels,
            relations: r.relations,
            gerstenhaber_holds: r.dim_a <= r.dim_m,
            excess: r.dim_a as i64 - r.dim_m as i64,
        }
    }

    /// `key: value` lines with the JSON keys, lists comma separated.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let list = |v: &[usize]| {
            v.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let params: Vec<String> = self
            .input
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let kind = match self.input.kind {
            InputKind::File => "file",
            InputKind::Bundled => "bundled",
            InputKind::Family => "family",
            InputKind::Inline => "inline",
        };
        let mut s = format!("input: {kind} {}", self.input.name);
        for p in params {
            let _ = write!(s, " {p}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "field: {}", self.field);
        let _ = writeln!(s, "dimM: {}", self.dim_m);
        let _ = writeln!(s, "dimA: {}", self.dim_a);
        let _ = writeln!(s, "local: {}", self.local);
        let _ = writeln!(s, "radicalLayers: {}", list(&self.radical_layers));
        let _ = writeln!(
            s,
            "minGenerators: {}",
            opt(self.min_generators.map(|v| v.to_string()))
        );
        let _ = writeln!(
            s,
            "socleLength: {}",
            opt(self.socle_length.map(|v| v.to_string()))
        );
        let _ = writeln!(s, "cyclic: {}", opt(self.cyclic.map(|v| v.to_string())));
        let _ = writeln!(s, "cocyclic: {}", opt(self.cocyclic.map(|v| v.to_string())));
        let _ = writeln!(s, "faithful: {}", self.faithful);
        let _ = writeln!(s, "basis: {}", self.basis.join(", "));
        let _ = writeln!(s, "relations:");
        for r in &self.relations {
            let _ = writeln!(s, "  {r}");
        }
        let _ = writeln!(s, "gerstenhaberHolds: {}", self.gerstenhaber_holds);
        let _ = writeln!(s, "excess: {}", self.excess);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RtOutput {
    pub schema_version: u32,
    pub ring: String,
    pub endo: Vec<Vec<String>>,
    #[serde(flatten)]
    pub report: RtReport,
    pub ideal_chain: Vec<String>,
    pub ideal_quotient_lengths: Vec<usize>,
    pub ideal_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RepsReport {
    pub schema_version: u32,
    pub algebra: String,
    pub field: String,
    pub algebra_length: usize,
    pub dim: usize,
    pub modules: u64,
    pub faithful: u64,
    pub nodes: u64,
    pub exhaustive: bool,
}

fn parse_field(text: &str) -> Result<FieldSpec, CliError> {
    FieldSpec::parse(text).map_err(|e| CliError::Input(format!("--field {text}: {e}")))
}

fn read_diagram(path: &str) -> Result<(ModuleDiagram, InputIdentity), CliError> {
    let (text, kind, name) = match path.strip_prefix("bundled:") {
        Some(name) => {
            let t = bundled_source(name)
                .ok_or_else(|| CliError::Input(format!("no bundled diagram `{name}`")))?;
            (t.to_string(), InputKind::Bundled, name.to_string())
        }
        None => {
            let t = std::fs::read_to_string(path).map_err(|e| io_err(Path::new(path), e))?;
            (t, InputKind::File, path.to_string())
        }
    };
    let d = parse_diagram(&text).map_err(|e| CliError::Parse(format!("{path}:{e}")))?;
    Ok((
        d,
        InputIdentity {
            kind,
            name,
            params: BTreeMap::new(),
        },
    ))
}

fn lint(path: &str, d: &ModuleDiagram) -> Result<(), CliError> {
    let violations = parallelogram_lint(d);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Lint {
            path: path.to_string(),
            violations,
        })
    }
}

fn realize_checked(d: &ModuleDiagram) -> Result<CommutingAction, CliError> {
    realize(d).map_err(|e| match e {
        DiagramError::Algebra(AlgebraError::NonCommuting { .. }) => {
            CliError::NonCommuting(e.to_string())
        }
        other => CliError::Diagram(other),
    })
}

pub fn analyze_path(
    path: &str,
    field: Option<FieldSpec>,
    no_lint: bool,
) -> Result<(AnalysisReport, ModuleDiagram), CliError> {
    let (mut d, input) = read_diagram(path)?;
    if let Some(f) = field {
        d = d.with_field(f);
    }
    if !no_lint {
        lint(path, &d)?;
    }
    let action = realize_checked(&d)?;
    Ok((AnalysisReport::of_action(input, &action), d))
}

/// Parameters accepted by [`family_report`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub m: Option<usize>,
    pub e0: Option<usize>,
    pub e1: Option<usize>,
    pub n: Vec<usize>,
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Input(format!("family {family} needs --{flag}")))
}

fn regular_action(a: &LocalAlgebra) -> Result<CommutingAction, CliError> {
    let gens = a
        .generator_indices()
        .into_iter()
        .map(|i| (a.labels()[i].clone(), a.mult()[i].clone()))
        .collect();
    build_action(a.field(), a.dim(), gens).map_err(|e| CliError::Diagram(e.into()))
}

/// Builds a family member: the analyzed report and the diagram, where one exists.
pub fn family_report(
    name: &str,
    p: &FamilyParams,
    field: FieldSpec,
) -> Result<(AnalysisReport, Option<ModuleDiagram>), CliError> {
    let mut params = BTreeMap::new();
    let canonical_name = name.replace('_', "-");
    let (action, diagram) = match canonical_name.as_str() {
        "abxy" | "abxy-alt" => {
            let m = need(p.m, "m", name)?;
            params.insert("m".into(), m);
            let d = if canonical_name == "abxy" {
                family_abxy(m, field)?
            } else {
                family_abxy_alt(m, field)?
            };
            (realize_checked(&d)?, Some(d))
        }
        "matrix-units" => (family_matrix_units(field)?, None),
        "de" => {
            let m = need(p.m, "m", name)?;
            params.insert("m".into(), m);
            (family_de(m, field)?, None)
        }
        "rd" => {
            let e0 = need(p.e0, "e0", name)?;
            let e1 = need(p.e1, "e1", name)?;
            params.insert("e0".into(), e0);
            params.insert("e1".into(), e1);
            let d = family_rd(e0, e1, field)?;
            (realize_checked(&d)?, Some(d))
        }
        "frobenius" => {
            let n: [usize; 4] =
                p.n.clone()
                    .try_into()
                    .map_err(|_| CliError::Input("family frobenius needs --n a,b,c,d".into()))?;
            for (i, v) in n.iter().enumerate() {
                params.insert(format!("n{}", i + 1), *v);
            }
            (regular_action(&family_frobenius(n, field)?)?, None)
        }
        "st-power" => {
            let [n] = p.n[..] else {
                return Err(CliError::Input("family st-power needs --n k".into()));
            };
            params.insert("n".into(), n);
            (regular_action(&family_st_power(n, field)?)?, None)
        }
        _ => return Err(CliError::UnknownFamily(name.to_string())),
    };
    let input = InputIdentity {
        kind: InputKind::Family,
        name: canonical_name,
        params,
    };
    Ok((AnalysisReport::of_action(input, &action), diagram))
}

fn parse_endo(pid: PidSpec, text: &str, d: usize) -> Result<PidMatrix, CliError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Input(format!("cannot read endomorphism `{text}`"));
    if !t.starts_with('[') {
        let c = pid.parse_elem(&t)?;
        return Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { c.clone() } else { pid.zero() })
                    .collect()
            })
            .collect());
    }
    let inner = t
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(bad)?;
    let rows: Vec<Vec<RingElem>> = inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|e| pid.parse_elem(e))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::Input(format!(
            "endomorphism must be {d}x{d}, one row and column per factor"
        )));
    }
    Ok(rows)
}

pub fn rt_command(
    ring: &str,
    factors: &[String],
    endo: Option<&str>,
    random: bool,
    max_length: usize,
    seed: u64,
) -> Result<RtOutput, CliError> {
    let pid = PidSpec::parse(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = if factors.is_empty() {
        if !random {
            return Err(CliError::Input("rt needs --factors, or --random".into()));
        }
        if matches!(pid, PidSpec::PolyOver(FieldSpec::Rationals)) {
            return Err(CliError::Input(
                "random modules need Z or a polynomial ring over a finite field".into(),
            ));
        }
        random_module_with_endo(pid, max_length, &mut rng)
    } else {
        let elems = factors
            .iter()
            .map(|f| pid.parse_elem(f))
            .collect::<Result<Vec<_>, _>>()?;
        let inv = InvariantFactors::new(pid, elems)?;
        match (endo, random) {
            (Some(e), _) => {
                let e = parse_endo(pid, e, inv.len())?;
                PidModuleWithEndo::new(inv, e)?
            }
            (None, true) => random_endo(inv, &mut rng),
            (None, false) => return Err(CliError::Input("rt needs --endo or --random".into())),
        }
    };
    let report = rt_verify(&m)?;
    let chain = ideal_chain(&m);
    Ok(RtOutput {
        schema_version: SCHEMA_VERSION,
        ring: ring.to_string(),
        endo: m
            .endo()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect(),
        report,
        ideal_chain: chain.generators.iter().map(|g| g.to_string()).collect(),
        ideal_quotient_lengths: chain.quotient_lengths,
        ideal_bound: chain.bound,
    })
}

pub fn enumreps_command(
    algebra: &str,
    dim: usize,
    field: FieldSpec,
    budget: u64,
) -> Result<RepsReport, CliError> {
    let a = Arc::new(LocalAlgebra::preset(algebra, field)?);
    let mut modules = 0u64;
    let mut faithful = 0u64;
    let result = enumerate_reps_with(&a, dim, budget, |m| {
        modules += 1;
        if m.is_faithful() {
            faithful += 1;
        }
    });
    let (nodes, exhaustive) = match result {
        Ok(stats) => (stats.nodes, true),
        Err(ModError::BudgetExceeded(n)) => (n, false),
        Err(e) => return Err(e.into()),
    };
    Ok(RepsReport {
        schema_version: SCHEMA_VERSION,
        algebra: algebra.to_string(),
        field: field.to_string(),
        algebra_length: a.length(),
        dim,
        modules,
        faithful,
        nodes,
        exhaustive,
    })
}

fn search_text(r: &SearchReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "gens: {}", r.config.generator_count);
    let _ = writeln!(s, "maxVerts: {}", r.config.max_vertices);
    let _ = writeln!(s, "field: {}", r.config.field);
    let _ = writeln!(s, "exhaustive: {}", r.exhaustive);
    let _ = writeln!(s, "extensionsTried: {}", r.extensions_tried);
    let _ = writeln!(s, "candidatesEnumerated: {}", r.candidates_enumerated);
    let _ = writeln!(s, "candidatesRealized: {}", r.candidates_realized);
    let levels: Vec<String> = r.classes_per_level.iter().map(u64::to_string).collect();
    let _ = writeln!(s, "classesPerLevel: {}", levels.join(", "));
    if let Some(w) = &r.best_excess {
        let _ = writeln!(
            s,
            "bestExcess: {} (dimM {}, dimA {}, shape {})",
            w.excess, w.dim_m, w.dim_a, w.shape
        );
    }
    if let Some(q) = &r.best_ratio {
        let _ = writeln!(s, "bestRatio: {q}");
    }
    let _ = writeln!(s, "excessWitnesses: {}", r.excess_witnesses.len());
    if let Some(f) = &r.flagged_finding {
        let _ = writeln!(s, "FLAGGED: {f}");
    }
    s
}

fn write_search_outputs(dir: &Path, r: &SearchReport) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let json = serde_json::to_string_pretty(r).expect("report serializes");
    let report = dir.join("report.json");
    std::fs::write(&report, json + "\n").map_err(|e| io_err(&report, e))?;
    let mut named = Vec::new();
    if let Some(w) = &r.best_excess {
        named.push(("best_excess".to_string(), w));
    }
    if let Some(w) = &r.best_ratio_witness {
        named.push(("best_ratio".to_string(), w));
    }
    for (i, w) in r.excess_witnesses.iter().enumerate() {
        named.push((format!("excess_{i:02}"), w));
    }
    for (name, w) in named {
        let p = dir.join(format!("{name}.cdg"));
        std::fs::write(&p, &w.cdg).map_err(|e| io_err(&p, e))?;
    }
    Ok(())
}

fn emit(
    out: &mut dyn Write,
    json: bool,
    value: &impl Serialize,
    text: impl FnOnce() -> String,
) -> Result<(), CliError> {
    let s = if json {
        serde_json::to_string_pretty(value).expect("report serializes") + "\n"
    } else {
        text()
    };
    out.write_all(s.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

/// Runs one command, writing the report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    match &cli.command {
        Command::Analyze {
            path,
            no_lint,
            emit_svg,
        } => {
            let (report, d) = analyze_path(path, field, *no_lint)?;
            if let Some(p) = emit_svg {
                write_file(p, &to_svg(&d))?;
            }
            emit(out, cli.json, &report, || report.to_text())
        }
        Command::Lint { path } => {
            let (d, _) = read_diagram(path)?;
            lint(path, &d)?;
            emit(
                out,
                cli.json,
                &serde_json::json!({ "schemaVersion": SCHEMA_VERSION, "violations": 0 }),
                || format!("{path}: ok\n"),
            )
        }
        Command::Family {
            name,
            m,
            e0,
            e1,
            n,
            emit_cdg,
            emit_svg,
        } => {
            let params = FamilyParams {
                m: *m,
                e0: *e0,
                e1: *e1,
                n: n.clone(),
            };
            let (report, d) = family_report(name, &params, field.unwrap_or(FieldSpec::Rationals))?;
            if emit_cdg.is_some() || emit_svg.is_some() {
                let d = d
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("family {name} has no diagram")))?;
                if let Some(p) = emit_cdg {
                    write_file(p, &serialize_diagram(d))?;
                }
                if let Some(p) = emit_svg {
                    write_file(p, &to_svg(d))?;
                }
            }
            emit(out, cli.json, &report, || report.to_text())
        }
        Command::Search {
            gens,
            max_verts,
            workers,
            out: dir,
            checkpoint,
        } => {
            let mut cfg = SearchConfig::new(*gens, *max_verts);
            if let Some(f) = field {
                cfg.field = f;
            }
            if let Some(b) = cli.budget {
                cfg.budget = b;
            }
            cfg.workers = *workers;
            let report = run_search_with_checkpoint(&cfg, checkpoint.as_deref())?;
            if let Some(dir) = dir {
                write_search_outputs(dir, &report)?;
            }
            emit(out, cli.json, &report, || search_text(&report))
        }
        Command::Rt {
            ring,
            factors,
            endo,
            random,
            max_length,
        } => {
            let r = rt_command(
                ring,
                factors,
                endo.as_deref(),
                *random,
                *max_length,
                cli.seed,
            )?;
            emit(out, cli.json, &r, || {
                let rows: Vec<String> = r
                    .endo
                    .iter()
                    .map(|row| format!("[{}]", row.join(", ")))
                    .collect();
                format!(
                    "ring: {}\nmoduleFactors: {}\nendo: [{}]\nalgebraFactors: {}\nltA: {}\nltM: {}\nholds: {}\nembedding: {}\nidealChain: {}\nidealBound: {}\n",
                    r.ring,
                    r.report.module_factors.join(", "),
                    rows.join(", "),
                    r.report.algebra_factors.join(", "),
                    r.report.lt_a,
                    r.report.lt_m,
                    r.report.holds,
                    r.report.embedding,
                    r.ideal_chain.join(", "),
                    r.ideal_bound,
                )
            })
        }
        Command::Enumreps { algebra, dim } => {
            let f = field.unwrap_or(FieldSpec::PrimeField(2));
            let r = enumreps_command(algebra, *dim, f, cli.budget.unwrap_or(DEFAULT_REPS_BUDGET))?;
            emit(out, cli.json, &r, || {
                format!(
                    "algebra: {} over {} (length {})\ndim: {}\nmodules: {}\nfaithful: {}\nnodes: {}\nexhaustive: {}\n",
                    r.algebra, r.field, r.algebra_length, r.dim, r.modules, r.faithful, r.nodes, r.exhaustive
                )
            })
        }
    }
}

/// Diagnostics for stderr, one per line.
pub fn diagnostics(e: &CliError) -> Vec<String> {
    match e {
        CliError::Lint { path, violations } => violations
            .iter()
            .map(|v| {
                format!(
                    "{path}: parallelogram violation at ({}, {}, {}): {}: {} -> {} then {}: {} -> {} has no closing square",
                    v.source, v.middle, v.target, v.first, v.source, v.middle, v.second, v.middle, v.target
                )
            })
            .collect(),
        other => vec![format!("error: {other}")],
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            for line in diagnostics(&e) {
                let _ = writeln!(err, "{line}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("commat").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analysis_report_round_trips() {
        let (code, out, _) = run_str(&["--json", "analyze", "bundled:d3genEq"]);
        assert_eq!(code, 0);
        let r: AnalysisReport = serde_json::from_str(&out).unwrap();
        assert_eq!((r.dim_m, r.dim_a), (7, 7));
        let again: AnalysisReport =
            serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn endo_literals() {
        let z = PidSpec::Integers;
        assert_eq!(
            parse_endo(z, "0", 2).unwrap(),
            vec![vec![z.zero(), z.zero()], vec![z.zero(), z.zero()]]
        );
        assert_eq!(
            parse_endo(z, "[[1, 2], [3, 4]]", 2).unwrap()[1][0],
            z.from_i64(3)
        );
        assert!(parse_endo(z, "[[1,2]]", 2).is_err());
    }

    #[test]
    fn unknown_family_and_bad_parameter() {
        let (code, _, err) = run_str(&["family", "nope"]);
        assert_eq!(code, 1);
        assert!(err.contains("unknown family"));
        let (code, _, err) = run_str(&["family", "abxy", "--m", "0"]);
        assert_ne!(code, 0);
        assert!(err.contains("m must be at least 1"), "{err}");
    }
}
