//! Diagram modules: a basis on which every generator acts by sending basis
//! vectors to basis vectors or to zero.

mod assets;
mod cdg;
mod dual;
mod families;
mod realize;
mod svg;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exactlin::FieldSpec;

pub use assets::{bundled, bundled_names, bundled_source, stretched_three_gen_eq};
pub use cdg::{parse_diagram, serialize_diagram};
pub use dual::{dual_non_embedding, DualNonEmbeddingReport};
pub use families::{
    family_abxy, family_abxy_alt, family_de, family_frobenius, family_matrix_units, family_rd,
    family_st_power,
};
pub use realize::{analyze_action, parallelogram_lint, realize, DiagramReport, Violation};
pub use svg::to_svg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("vertex `{vertex}` already has an outgoing `{generator}` edge")]
    DuplicateEdge { vertex: String, generator: String },
    #[error("{line}: unknown name `{name}`")]
    UnknownName { line: usize, name: String },
    #[error("name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("edges form a cycle through `{0}`")]
    Cycle(String),
    #[error("field has {size} elements but at least {needed} are required")]
    FieldTooSmall { needed: u64, size: u64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One edge `generator: src -> dst`, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub generator: usize,
    pub source: usize,
    pub target: usize,
}

/// Named generators, named vertices and generator-labeled edges.
///
/// Each `(vertex, generator)` pair has at most one outgoing edge and the edge
/// graph is acyclic, so every generator is nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDiagram {
    field: FieldSpec,
    generators: Vec<String>,
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl ModuleDiagram {
    pub fn new(
        field: FieldSpec,
        generators: Vec<String>,
        vertices: Vec<String>,
    ) -> Result<Self, DiagramError> {
        let mut seen = std::collections::HashSet::new();
        for n in generators.iter().chain(&vertices) {
            if !seen.insert(n.as_str()) {
                return Err(DiagramError::DuplicateName(n.clone()));
            }
        }
        Ok(ModuleDiagram {
            field,
            generators,
            vertices,
            edges: Vec::new(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Target of the `generator` edge leaving `vertex`.
    pub fn target(&self, generator: usize, vertex: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.generator == generator && e.source == vertex)
            .map(|e| e.target)
    }

    /// Adds an edge, rejecting a second edge with the same source and label
    /// and any edge that closes a cycle.
    pub fn add_edge(
        &mut self,
        generator: usize,
        source: usize,
        target: usize,
    ) -> Result<(), DiagramError> {
        assert!(
            generator < self.generators.len()
                && source < self.vertices.len()
                && target < self.vertices.len()
        );
        if self.target(generator, source).is_some() {
            return Err(DiagramError::DuplicateEdge {
                vertex: self.vertices[source].clone(),
                generator: self.generators[generator].clone(),
            });
        }
        if source == target || self.reaches(target, source) {
            return Err(DiagramError::Cycle(self.vertices[source].clone()));
        }
        self.edges.push(Edge {
            generator,
            source,
            target,
        });
        Ok(())
    }

    /// Adds an edge by names.
    pub fn add_named_edge(
        &mut self,
        generator: &str,
        source: &str,
        target: &str,
    ) -> Result<(), DiagramError> {
        let unknown = |name: &str| DiagramError::UnknownName {
            line: 0,
            name: name.to_string(),
        };
        let g = self
            .generator_index(generator)
            .ok_or_else(|| unknown(generator))?;
        let s = self.vertex_index(source).ok_or_else(|| unknown(source))?;
        let t = self.vertex_index(target).ok_or_else(|| unknown(target))?;
        self.add_edge(g, s, t)
    }

    /// Removes the edge with this label and source, returning its target.
    pub fn remove_edge(&mut self, generator: usize, source: usize) -> Option<usize> {
        let pos = self
            .edges
            .iter()
            .position(|e| e.generator == generator && e.source == source)?;
        Some(self.edges.remove(pos).target)
    }

    /// Appends a vertex and returns its index.
    pub fn add_vertex(&mut self, name: &str) -> Result<usize, DiagramError> {
        if self
            .vertices
            .iter()
            .chain(&self.generators)
            .any(|n| n == name)
        {
            return Err(DiagramError::DuplicateName(name.to_string()));
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut stack = vec![from];
        let mut seen = vec![false; self.vertices.len()];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(
                self.edges
                    .iter()
                    .filter(|e| e.source == v)
                    .map(|e| e.target),
            );
        }
        false
    }

    /// Longest path length from any source vertex (sources have depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut depth = vec![0usize; n];
        // The graph is acyclic, so n relaxation rounds suffice.
        for _ in 0..n {
            let mut changed = false;
            for e in &self.edges {
                if depth[e.target] < depth[e.source] + 1 {
                    depth[e.target] = depth[e.source] + 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        depth
    }
}
