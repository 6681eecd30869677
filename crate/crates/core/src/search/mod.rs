//! Exhaustive search over diagram modules up to isomorphism.
//!
//! Level `n` is built from level `n - 1` by adjoining a new source vertex:
//! every diagram has a source, and deleting it leaves a commuting diagram, so
//! each isomorphism class on `n` vertices arises this way.

mod canon;
mod fast;

use std::cmp::Ordering;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{
    analyze_action, parallelogram_lint, realize, serialize_diagram, DiagramError,
};
use crate::exactlin::FieldSpec;

pub use canon::{canonical, Shape, NONE};
pub use fast::{f2_dims, MAX_FAST_VERTICES};

pub const SCHEMA_VERSION: u32 = 1;
const WITNESS_CAP: usize = 16;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub generator_count: usize,
    pub max_vertices: usize,
    pub field: FieldSpec,
    /// Limit on extension attempts (one per parent class and choice of edges
    /// out of the new vertex).
    pub budget: u64,
    /// Worker threads; 0 uses the rayon default. Does not affect results.
    #[serde(skip)]
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(generator_count: usize, max_vertices: usize) -> Self {
        SearchConfig {
            generator_count,
            max_vertices,
            field: FieldSpec::PrimeField(2),
            budget: 50_000_000,
            workers: 0,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.generator_count == 0 || self.max_vertices == 0 || self.budget == 0 {
            return Err(SearchError::Config(
                "generator count, vertex bound and budget must be positive".into(),
            ));
        }
        if self.max_vertices > 36 || self.generator_count > 8 {
            return Err(SearchError::Config(
                "at most 36 vertices and 8 generators".into(),
            ));
        }
        Ok(())
    }
}

/// Classes of commuting diagrams with exactly `n` vertices, for `n = 1..=levels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Enumeration {
    pub levels: Vec<Vec<Shape>>,
    pub extensions_tried: u64,
    /// Commuting extensions before deduplication.
    pub candidates_enumerated: u64,
    pub exhaustive: bool,
}

impl Serialize for Shape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.encode())
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Shape::decode(&text).ok_or_else(|| serde::de::Error::custom(format!("bad shape `{text}`")))
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        b = b.num_threads(workers);
    }
    b.build().expect("thread pool")
}

/// All one-vertex-larger children of `parent` that commute, canonicalized.
fn children(parent: &Shape) -> (Vec<Shape>, u64) {
    let g = parent.g as usize;
    let old = parent.n as usize;
    let n = old + 1;
    let mut base = Shape::empty(g, n);
    for k in 0..g {
        for v in 0..old {
            base.targets[k * n + v] = parent.target(k, v);
        }
    }
    let choices = n as u64; // `old` targets or no edge
    let total = choices.pow(g as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut child = base.clone();
        for k in 0..g {
            let c = (rest % choices) as usize;
            rest /= choices;
            child.targets[k * n + old] = if c == old { NONE } else { c as u8 };
        }
        if child.commutes_at(old) {
            out.push(canonical(&child));
        }
    }
    (out, total)
}

fn extend_level(parents: &[Shape]) -> (Vec<Shape>, u64, u64) {
    let parts: Vec<(Vec<Shape>, u64)> = parents.par_iter().map(children).collect();
    let tried = parts.iter().map(|p| p.1).sum();
    let mut all: Vec<Shape> = parts.into_iter().flat_map(|p| p.0).collect();
    let enumerated = all.len() as u64;
    all.par_sort_unstable();
    all.dedup();
    (all, tried, enumerated)
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Checkpoint {
    schema_version: u32,
    config: SearchConfig,
    enumeration: Enumeration,
}

/// Builds the levels, resuming from and updating `checkpoint` when given.
pub fn enumerate_levels(
    cfg: &SearchConfig,
    checkpoint: Option<&Path>,
) -> Result<Enumeration, SearchError> {
    cfg.validate()?;
    let mut en = Enumeration {
        levels: vec![vec![Shape::empty(cfg.generator_count, 1)]],
        extensions_tried: 0,
        candidates_enumerated: 1,
        exhaustive: true,
    };
    if let Some(path) = checkpoint {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let cp: Checkpoint =
                serde_json::from_str(&text).map_err(|e| SearchError::Checkpoint(e.to_string()))?;
            if cp.config.generator_count != cfg.generator_count
                || cp.schema_version != SCHEMA_VERSION
            {
                return Err(SearchError::Checkpoint(
                    "checkpoint belongs to a different configuration".into(),
                ));
            }
            en = cp.enumeration;
            en.levels.truncate(cfg.max_vertices);
            en.exhaustive = true;
        }
    }
    let threads = pool(cfg.workers);
    while en.levels.len() < cfg.max_vertices {
        let parents = en.levels.last().expect("level 1 exists");
        let n = parents.first().map_or(0, |s| s.n as u64) + 1;
        let cost =
            (parents.len() as u64).saturating_mul(n.saturating_pow(cfg.generator_count as u32));
        if en.extensions_tried.saturating_add(cost) > cfg.budget {
            en.exhaustive = false;
            break;
        }
        let (next, tried, enumerated) = threads.install(|| extend_level(parents));
        en.extensions_tried += tried;
        en.candidates_enumerated += enumerated;
        en.levels.push(next);
        if let Some(path) = checkpoint {
            let cp = Checkpoint {
                schema_version: SCHEMA_VERSION,
                config: cfg.clone(),
                enumeration: en.clone(),
            };
            std::fs::write(path, serde_json::to_string(&cp).expect("serializable"))?;
        }
    }
    Ok(en)
}

/// Canonical classes with exactly `cfg.max_vertices` vertices.
pub fn enumerate_diagrams(cfg: &SearchConfig) -> Result<(Vec<Shape>, bool), SearchError> {
    let en = enumerate_levels(cfg, None)?;
    let exhaustive = en.exhaustive && en.levels.len() == cfg.max_vertices;
    let last = if exhaustive {
        en.levels.last().cloned().unwrap_or_default()
    } else {
        Vec::new()
    };
    Ok((last, exhaustive))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub dim_m: usize,
    pub dim_a: usize,
    pub excess: i64,
    /// `dim M / g_i M` for each generator: generators of `M` over `k[g_i]`.
    pub generators_over_single: Vec<usize>,
    pub shape: String,
    pub cdg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub schema_version: u32,
    pub scope: String,
    pub config: SearchConfig,
    pub extensions_tried: u64,
    pub candidates_enumerated: u64,
    pub candidates_realized: u64,
    pub classes_per_level: Vec<u64>,
    pub exhaustive: bool,
    pub best_excess: Option<Witness>,
    /// `dimA/dimM` as a reduced fraction.
    pub best_ratio: Option<String>,
    pub best_ratio_witness: Option<Witness>,
    pub excess_witnesses: Vec<Witness>,
    /// Set when a three-generator diagram has `dim A > dim M`.
    pub flagged_finding: Option<String>,
}

fn dims(cfg: &SearchConfig, s: &Shape) -> Result<(usize, Vec<usize>), SearchError> {
    if cfg.field == FieldSpec::PrimeField(2) && (s.n as usize) <= MAX_FAST_VERTICES {
        return Ok(f2_dims(s));
    }
    let (r, _) = analyze_action(&realize(&s.to_diagram(cfg.field))?);
    Ok((r.dim_a, f2_dims_cokernels(s)))
}

fn f2_dims_cokernels(s: &Shape) -> Vec<usize> {
    let n = s.n as usize;
    (0..s.g as usize)
        .map(|k| {
            let mut image: Vec<u8> = (0..n)
                .map(|v| s.target(k, v))
                .filter(|&t| t != NONE)
                .collect();
            image.sort_unstable();
            image.dedup();
            n - image.len()
        })
        .collect()
}

fn witness(cfg: &SearchConfig, s: &Shape, dim_a: usize, cok: Vec<usize>) -> Witness {
    Witness {
        dim_m: s.n as usize,
        dim_a,
        excess: dim_a as i64 - s.n as i64,
        generators_over_single: cok,
        shape: s.encode(),
        cdg: serialize_diagram(&s.to_diagram(cfg.field)),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Re-derives a witness from its `.cdg` text with exact arithmetic.
pub fn revalidate(w: &Witness) -> Result<bool, SearchError> {
    let d = crate::diagrams::parse_diagram(&w.cdg)?;
    if !parallelogram_lint(&d).is_empty() {
        return Ok(false);
    }
    let (r, _) = analyze_action(&realize(&d)?);
    Ok(r.dim_m == w.dim_m && r.dim_a == w.dim_a)
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    run_search_with_checkpoint(cfg, None)
}

pub fn run_search_with_checkpoint(
    cfg: &SearchConfig,
    checkpoint: Option<&Path>,
) -> Result<SearchReport, SearchError> {
    let en = enumerate_levels(cfg, checkpoint)?;
    let classes: Vec<&Shape> = en.levels.iter().flatten().collect();
    let threads = pool(cfg.workers);
    let analyzed: Vec<(usize, Vec<usize>)> = threads.install(|| {
        classes
            .par_iter()
            .map(|s| dims(cfg, s))
            .collect::<Result<Vec<_>, _>>()
    })?;

    // Ties go to the diagram with fewer edges.
    let edges = |s: &Shape| s.targets.iter().filter(|&&t| t != canon::NONE).count();
    let mut best_excess: Option<(i64, usize, usize)> = None;
    let mut best_ratio: Option<(usize, usize, usize, usize)> = None;
    let mut excess_witnesses = Vec::new();
    let mut positive_three = 0usize;
    for (i, (s, (dim_a, cok))) in classes.iter().zip(&analyzed).enumerate() {
        let n = s.n as usize;
        let excess = *dim_a as i64 - n as i64;
        let e_count = edges(s);
        if best_excess.is_none_or(|(e, c, _)| excess > e || (excess == e && e_count < c)) {
            best_excess = Some((excess, e_count, i));
        }
        let better = match best_ratio {
            None => true,
            Some((a, m, c, _)) => match (dim_a * m).cmp(&(a * n)) {
                Ordering::Greater => true,
                Ordering::Equal => e_count < c,
                Ordering::Less => false,
            },
        };
        if better {
            best_ratio = Some((*dim_a, n, e_count, i));
        }
        if excess > 0 {
            if s.g == 3 {
                positive_three += 1;
            }
            if excess_witnesses.len() < WITNESS_CAP {
                excess_witnesses.push(witness(cfg, s, *dim_a, cok.clone()));
            }
        }
    }
    let best_excess_w =
        best_excess.map(|(_, _, i)| witness(cfg, classes[i], analyzed[i].0, analyzed[i].1.clone()));
    let flagged_finding = (positive_three > 0).then(|| {
        format!("{positive_three} three-generator diagram class(es) with dim A > dim M; see excessWitnesses")
    });
    Ok(SearchReport {
        schema_version: SCHEMA_VERSION,
        scope: "diagram modules only: every generator maps each basis vector to a basis vector or to zero".into(),
        config: cfg.clone(),
        extensions_tried: en.extensions_tried,
        candidates_enumerated: en.candidates_enumerated,
        candidates_realized: classes.len() as u64,
        classes_per_level: en.levels.iter().map(|l| l.len() as u64).collect(),
        exhaustive: en.exhaustive,
        best_excess: best_excess_w,
        best_ratio: best_ratio.map(|(a, m, _, _)| {
            let d = gcd(a, m);
            format!("{}/{}", a / d, m / d)
        }),
        best_ratio_witness: best_ratio.map(|(_, _, _, i)| witness(cfg, classes[i], analyzed[i].0, analyzed[i].1.clone())),
        excess_witnesses,
        flagged_finding,
    })
}
