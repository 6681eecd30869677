//! Parametric constructions of commuting actions and local algebras.

use crate::algebra::{build_action, CommutingAction};
use crate::exactlin::{FieldSpec, Matrix};
use crate::modtheory::LocalAlgebra;

use super::{DiagramError, ModuleDiagram};

fn positive(name: &str, v: usize) -> Result<(), DiagramError> {
    if v == 0 {
        return Err(DiagramError::BadParameter(format!(
            "{name} must be at least 1"
        )));
    }
    Ok(())
}

/// Diagram on `a^i b^j x` (x-part) and `a^i b^j y` (y-part), where `a`, `b`
/// raise exponents inside each part, `c y = a^m x` and `d y = b^m x`.
fn two_part(
    field: FieldSpec,
    m: usize,
    x_part: &dyn Fn(usize, usize) -> bool,
    y_part: &dyn Fn(usize, usize) -> bool,
    bound: usize,
) -> ModuleDiagram {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..bound {
        for j in 0..bound {
            if x_part(i, j) {
                xs.push((i, j));
            }
            if y_part(i, j) {
                ys.push((i, j));
            }
        }
    }
    let name = |p: &str, (i, j): (usize, usize)| format!("{p}_{i}_{j}");
    let verts: Vec<String> = xs
        .iter()
        .map(|&v| name("x", v))
        .chain(ys.iter().map(|&v| name("y", v)))
        .collect();
    let gens = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut d = ModuleDiagram::new(field, gens, verts).expect("distinct names");
    let xi = |v: (usize, usize)| xs.iter().position(|&w| w == v);
    let yi = |v: (usize, usize)| ys.iter().position(|&w| w == v).map(|k| xs.len() + k);
    for &(i, j) in &xs {
        let s = xi((i, j)).expect("listed");
        if let Some(t) = xi((i + 1, j)) {
            d.add_edge(0, s, t).expect("acyclic");
        }
        if let Some(t) = xi((i, j + 1)) {
            d.add_edge(1, s, t).expect("acyclic");
        }
    }
    for &(i, j) in &ys {
        let s = yi((i, j)).expect("listed");
        for (g, t) in [
            (0, yi((i + 1, j))),
            (1, yi((i, j + 1))),
            (2, xi((m + i, j))),
            (3, xi((i, m + j))),
        ] {
            if let Some(t) = t {
                d.add_edge(g, s, t).expect("acyclic");
            }
        }
    }
    d
}

/// x-part `i + j <= 2m - 1`, y-part `i + j <= m - 1`.
pub fn family_abxy(m: usize, field: FieldSpec) -> Result<ModuleDiagram, DiagramError> {
    positive("m", m)?;
    Ok(two_part(
        field,
        m,
        &|i, j| i + j < 2 * m,
        &|i, j| i + j < m,
        2 * m,
    ))
}

/// x-part `i, j < 2m` with `min(i, j) < m`, y-part `i, j < m`.
pub fn family_abxy_alt(m: usize, field: FieldSpec) -> Result<ModuleDiagram, DiagramError> {
    positive("m", m)?;
    Ok(two_part(
        field,
        m,
        &|i, j| i.min(j) < m,
        &|i, j| i < m && j < m,
        2 * m,
    ))
}

/// The four matrix units `e13, e14, e23, e24` on `k^4`.
pub fn family_matrix_units(field: FieldSpec) -> Result<CommutingAction, DiagramError> {
    let unit = |i: usize, j: usize| Matrix::unit(field, 4, i - 1, j - 1);
    Ok(build_action(
        field,
        4,
        vec![
            ("e13".into(), unit(1, 3)),
            ("e14".into(), unit(1, 4)),
            ("e23".into(), unit(2, 3)),
            ("e24".into(), unit(2, 4)),
        ],
    )?)
}

/// `m` diagonal copies of the matrix-unit example, with `D + E13` as first
/// generator where `D` is `alpha_j = j + 1` on the `j`-th block.
pub fn family_de(m: usize, field: FieldSpec) -> Result<CommutingAction, DiagramError> {
    positive("m", m)?;
    if let FieldSpec::PrimeField(p) = field {
        if (p as u64) < m as u64 + 1 {
            return Err(DiagramError::FieldTooSmall {
                needed: m as u64 + 1,
                size: p as u64,
            });
        }
    }
    let n = 4 * m;
    let block_sum = |r: usize, c: usize| {
        let mut e = Matrix::zeros(field, n, n);
        for j in 0..m {
            e.set(4 * j + r - 1, 4 * j + c - 1, field.one());
        }
        e
    };
    let mut first = block_sum(1, 3);
    for j in 0..m {
        for i in 0..4 {
            first.set(4 * j + i, 4 * j + i, field.from_i64(j as i64 + 1));
        }
    }
    Ok(build_action(
        field,
        n,
        vec![
            ("D+E13".into(), first),
            ("E14".into(), block_sum(1, 4)),
            ("E23".into(), block_sum(2, 3)),
            ("E24".into(), block_sum(2, 4)),
        ],
    )?)
}

/// `V = V0 ⊕ V1` with one generator per map `u_c -> v_r` from a basis of
/// `V0` to a basis of `V1`.
pub fn family_rd(e0: usize, e1: usize, field: FieldSpec) -> Result<ModuleDiagram, DiagramError> {
    positive("e0", e0)?;
    positive("e1", e1)?;
    let verts: Vec<String> = (1..=e0)
        .map(|c| format!("u{c}"))
        .chain((1..=e1).map(|r| format!("v{r}")))
        .collect();
    let mut gens = Vec::new();
    for c in 1..=e0 {
        for r in 1..=e1 {
            gens.push(format!("g{c}_{r}"));
        }
    }
    let mut d = ModuleDiagram::new(field, gens, verts)?;
    for c in 0..e0 {
        for r in 0..e1 {
            d.add_edge(c * e1 + r, c, e0 + r)?;
        }
    }
    Ok(d)
}

/// `k[t1..t4] / (t_i^(n_i + 1))`.
pub fn family_frobenius(n: [usize; 4], field: FieldSpec) -> Result<LocalAlgebra, DiagramError> {
    for v in n {
        positive("n_i", v)?;
    }
    let ideal: Vec<Vec<u32>> = (0..4)
        .map(|i| {
            let mut g = vec![0u32; 4];
            g[i] = n[i] as u32 + 1;
            g
        })
        .collect();
    Ok(
        LocalAlgebra::monomial_quotient(field, &["t1", "t2", "t3", "t4"], &ideal)
            .expect("monomial ideal"),
    )
}

/// `k[s, t] / (s, t)^n`.
pub fn family_st_power(n: usize, field: FieldSpec) -> Result<LocalAlgebra, DiagramError> {
    positive("n", n)?;
    let ideal: Vec<Vec<u32>> = (0..=n as u32).map(|i| vec![i, n as u32 - i]).collect();
    Ok(LocalAlgebra::monomial_quotient(field, &["s", "t"], &ideal).expect("monomial ideal"))
}
