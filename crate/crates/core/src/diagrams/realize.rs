use serde::{Deserialize, Serialize};

use crate::algebra::{build_action, generate_algebra, CommutingAction, GeneratedAlgebra};
use crate::exactlin::{Matrix, Subspace};

use super::{DiagramError, ModuleDiagram};

/// A path `u -g-> v -h-> w` whose other order `u -h-> . -g-> w` is missing or
/// ends elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub source: String,
    pub middle: String,
    pub target: String,
    pub first: String,
    pub second: String,
}

/// Every in-edge/out-edge pair with distinct labels must close into a
/// commuting square. Forks (two edges out of, or into, one vertex) impose nothing.
pub fn parallelogram_lint(d: &ModuleDiagram) -> Vec<Violation> {
    let mut out = Vec::new();
    for e1 in d.edges() {
        for e2 in d.edges() {
            if e2.source != e1.target || e2.generator == e1.generator {
                continue;
            }
            let other = d
                .target(e2.generator, e1.source)
                .and_then(|v| d.target(e1.generator, v));
            if other != Some(e2.target) {
                out.push(Violation {
                    source: d.vertices()[e1.source].clone(),
                    middle: d.vertices()[e1.target].clone(),
                    target: d.vertices()[e2.target].clone(),
                    first: d.generators()[e1.generator].clone(),
                    second: d.generators()[e2.generator].clone(),
                });
            }
        }
    }
    out
}

/// 0/1 matrices with column `v` holding a single 1 at the target of `v`'s edge.
pub fn realize(d: &ModuleDiagram) -> Result<CommutingAction, DiagramError> {
    let f = d.field();
    let n = d.vertices().len();
    let mut mats: Vec<Matrix> = vec![Matrix::zeros(f, n, n); d.generators().len()];
    for e in d.edges() {
        mats[e.generator].set(e.target, e.source, f.one());
    }
    Ok(build_action(
        f,
        n,
        d.generators().iter().cloned().zip(mats).collect(),
    )?)
}

/// Invariants of a module given by commuting matrices and of the algebra they generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramReport {
    pub dim_m: usize,
    pub dim_a: usize,
    pub faithful: bool,
    pub commutes: bool,
    /// Whether every generator is nilpotent, so the algebra is local with
    /// maximal ideal spanned by the non-identity monomials.
    pub local: bool,
    /// `dim m^i M` for `i = 0, 1, ...` down to zero; empty when not local.
    pub radical_layers: Vec<usize>,
    pub min_generators: Option<usize>,
    pub socle_length: Option<usize>,
    pub labels: Vec<String>,
    pub relations: Vec<String>,
}

fn nilpotent(m: &Matrix) -> bool {
    let mut p = m.clone();
    let mut e = 1;
    while e < m.rows() {
        p = p.mul(&p);
        e *= 2;
    }
    p.is_zero()
}

pub fn analyze_action(action: &CommutingAction) -> (DiagramReport, GeneratedAlgebra) {
    let alg = generate_algebra(action);
    let f = action.field();
    let n = action.dim();
    let full = Subspace::full(f, n);
    let faithful = alg.annihilator(&full).faithful;
    let local = action.generators().iter().all(nilpotent);
    let (radical_layers, min_generators, socle_length) = if local {
        let mut layers = vec![n];
        let mut cur = full;
        while !cur.is_zero() {
            let mut next = Subspace::zero(f, n);
            for g in action.generators() {
                next = next.sum(&cur.image(g)).expect("same ambient");
            }
            layers.push(next.dim());
            cur = next;
        }
        let mut stacked: Vec<Vec<_>> = Vec::new();
        for g in action.generators() {
            stacked.extend(g.row_vecs());
        }
        let socle = if stacked.is_empty() {
            n
        } else {
            crate::exactlin::kernel_of(&Matrix::from_rows(f, stacked).expect("rectangular")).dim()
        };
        (layers.clone(), Some(n - layers[1]), Some(socle))
    } else {
        (Vec::new(), None, None)
    };
    let report = DiagramReport {
        dim_m: n,
        dim_a: alg.dim(),
        faithful,
        commutes: true,
        local,
        radical_layers,
        min_generators,
        socle_length,
        labels: alg.label_strings(),
        relations: alg.relation_strings(),
    };
    (report, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{bundled, parse_diagram};

    #[test]
    fn single_chain_is_lint_clean() {
        let d = parse_diagram("gens a\nverts x y z\na: x -> y\na: y -> z\n").unwrap();
        assert!(parallelogram_lint(&d).is_empty());
        let (r, _) = analyze_action(&realize(&d).unwrap());
        assert_eq!(
            (r.dim_m, r.dim_a, r.min_generators, r.socle_length),
            (3, 3, Some(1), Some(1))
        );
        assert_eq!(r.radical_layers, vec![3, 2, 1, 0]);
    }

    #[test]
    fn deleting_an_edge_breaks_the_square() {
        let mut d = bundled("d3genEq").unwrap();
        let b = d.generator_index("b").unwrap();
        let y2 = d.vertex_index("y2").unwrap();
        assert_eq!(d.remove_edge(b, y2), d.vertex_index("z2"));
        let v = parallelogram_lint(&d);
        assert!(v.iter().any(
            |v| (v.source.as_str(), v.middle.as_str(), v.target.as_str()) == ("x1", "y1", "z2")
        ));
        assert!(matches!(realize(&d), Err(DiagramError::Algebra(_))));
    }

    #[test]
    fn fork_is_exempt() {
        let d = bundled("d3gen1").unwrap();
        assert!(parallelogram_lint(&d).is_empty());
    }
}
