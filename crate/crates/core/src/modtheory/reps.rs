use std::sync::Arc;

use serde::Serialize;

use crate::exactlin::{FieldSpec, Matrix, Scalar};

use super::{LocalAlgebra, ModError, ModuleOverLocal};

/// Counters from one exhaustive enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RepStats {
    pub dim: usize,
    pub characteristic: u32,
    pub generator_count: usize,
    /// The naive space has `p^(d^2 * generators)` points; this is the exponent.
    pub naive_exponent: usize,
    pub candidates_per_generator: Vec<usize>,
    pub nodes: u64,
    pub modules: u64,
    pub faithful: u64,
}

/// Square matrices mod p as flat residues.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Small(Vec<u32>);

struct Ctx {
    d: usize,
    p: u64,
}

impl Ctx {
    fn identity(&self) -> Small {
        let mut v = vec![0; self.d * self.d];
        for i in 0..self.d {
            v[i * self.d + i] = 1;
        }
        Small(v)
    }

    fn mul(&self, a: &Small, b: &Small) -> Small {
        let d = self.d;
        let mut out = vec![0u32; d * d];
        for i in 0..d {
            for k in 0..d {
                let x = a.0[i * d + k] as u64;
                if x == 0 {
                    continue;
                }
                for j in 0..d {
                    let y = b.0[k * d + j] as u64;
                    if y != 0 {
                        let idx = i * d + j;
                        out[idx] = ((out[idx] as u64 + x * y) % self.p) as u32;
                    }
                }
            }
        }
        Small(out)
    }

    fn axpy(&self, acc: &mut Small, c: u32, x: &Small) {
        if c == 0 {
            return;
        }
        for (a, b) in acc.0.iter_mut().zip(&x.0) {
            *a = ((*a as u64 + c as u64 * *b as u64) % self.p) as u32;
        }
    }

    fn monomial(&self, gens: &[Small], word: &[u32]) -> Small {
        let mut acc = self.identity();
        for (g, &e) in gens.iter().zip(word) {
            for _ in 0..e {
                acc = self.mul(g, &acc);
            }
        }
        acc
    }

    fn is_zero(x: &Small) -> bool {
        x.0.iter().all(|&v| v == 0)
    }
}

/// One defining relation `word - sum c_k label_k = 0`, with residue coefficients.
struct Rel {
    word: Vec<u32>,
    terms: Vec<(Vec<u32>, u32)>,
    top: usize,
    single: bool,
}

fn residue(s: &Scalar) -> u32 {
    match s {
        Scalar::Residue(v) => *v,
        Scalar::Rational(_) => unreachable!("prime field only"),
    }
}

fn highest(word: &[u32]) -> Option<usize> {
    word.iter().rposition(|&e| e > 0)
}

/// Calls `visit` on every `d`-dimensional module over `a`, i.e. every unital
/// homomorphism `A -> End(k^d)`.
///
/// Images are chosen for a minimal generating set of `m` (modulo `m^2`),
/// pre-filtered per generator by nilpotency and the relations in that generator
/// alone, then extended depth-first while checking commutation and every
/// relation whose generators are all assigned. `budget` bounds the number of
/// search nodes and of candidate matrices scanned.
pub fn enumerate_reps_with<F: FnMut(&ModuleOverLocal)>(
    a: &Arc<LocalAlgebra>,
    d: usize,
    budget: u64,
    mut visit: F,
) -> Result<RepStats, ModError> {
    let p = match a.field() {
        FieldSpec::PrimeField(p) => p as u64,
        FieldSpec::Rationals => return Err(ModError::FieldNotFinite),
    };
    if d == 0 {
        return Err(ModError::Invalid(
            "module dimension must be positive".into(),
        ));
    }
    let ctx = Ctx { d, p };
    let pres = a.presentation();
    let r = pres.action().generators().len();
    let rels: Vec<Rel> = pres
        .relations()
        .iter()
        .map(|rel| {
            let terms: Vec<(Vec<u32>, u32)> = rel
                .coordinates
                .iter()
                .enumerate()
                .filter(|(_, c)| residue(c) != 0)
                .map(|(k, c)| (pres.labels()[k].clone(), residue(c)))
                .collect();
            let mut top = highest(&rel.word).unwrap_or(0);
            let mut support: Vec<bool> = rel.word.iter().map(|&e| e > 0).collect();
            for (w, _) in &terms {
                if let Some(h) = highest(w) {
                    top = top.max(h);
                }
                for (s, &e) in support.iter_mut().zip(w) {
                    *s |= e > 0;
                }
            }
            let single = support.iter().filter(|&&s| s).count() <= 1;
            Rel {
                word: rel.word.clone(),
                terms,
                top,
                single,
            }
        })
        .collect();

    let mut stats = RepStats {
        dim: d,
        characteristic: p as u32,
        generator_count: r,
        naive_exponent: d * d * r,
        ..Default::default()
    };
    let space = p
        .checked_pow((d * d) as u32)
        .ok_or(ModError::BudgetExceeded(u64::MAX))?;
    if space.saturating_mul(r as u64) > budget {
        return Err(ModError::BudgetExceeded(space.saturating_mul(r as u64)));
    }

    let holds = |gens: &[Small], rel: &Rel| -> bool {
        let mut acc = ctx.monomial(gens, &rel.word);
        for (w, c) in &rel.terms {
            let m = ctx.monomial(gens, w);
            ctx.axpy(&mut acc, (p - *c as u64) as u32, &m);
        }
        Ctx::is_zero(&acc)
    };

    let mut candidates: Vec<Vec<Small>> = Vec::with_capacity(r);
    for g in 0..r {
        let mut list = Vec::new();
        for idx in 0..space {
            let mut v = vec![0u32; d * d];
            let mut rest = idx;
            for x in v.iter_mut() {
                *x = (rest % p) as u32;
                rest /= p;
            }
            let x = Small(v);
            let mut pw = x.clone();
            for _ in 1..d {
                pw = ctx.mul(&pw, &x);
            }
            if !Ctx::is_zero(&pw) {
                continue;
            }
            // Evaluate single-generator relations with x in slot g.
            let mut slots: Vec<Small> = vec![Small(vec![0; d * d]); r];
            slots[g] = x.clone();
            let ok = rels
                .iter()
                .filter(|rel| rel.single && rel.top == g)
                .all(|rel| holds(&slots, rel));
            if ok {
                list.push(x);
            }
        }
        stats.candidates_per_generator.push(list.len());
        candidates.push(list);
    }

    // Rewrite algebra basis elements over the presentation's monomials.
    let to_labels: Vec<Vec<u32>> = a
        .mult()
        .iter()
        .map(|m| {
            pres.coordinates(m)
                .expect("presentation spans A")
                .iter()
                .map(residue)
                .collect()
        })
        .collect();
    let field = a.field();

    let mut assigned: Vec<Small> = Vec::with_capacity(r);
    let mut nodes = 0u64;
    let mut stack: Vec<usize> = vec![0];
    // Iterative DFS: stack[i] is the next candidate index to try at depth i.
    while let Some(&next) = stack.last() {
        let depth = stack.len() - 1;
        if depth == r {
            let images: Vec<Small> = pres
                .labels()
                .iter()
                .map(|w| ctx.monomial(&assigned, w))
                .collect();
            let action: Vec<Matrix> = to_labels
                .iter()
                .map(|coords| {
                    let mut acc = Small(vec![0; d * d]);
                    for (c, img) in coords.iter().zip(&images) {
                        ctx.axpy(&mut acc, *c, img);
                    }
                    Matrix::from_flat(
                        field,
                        d,
                        d,
                        acc.0.into_iter().map(Scalar::Residue).collect(),
                    )
                })
                .collect();
            let module = ModuleOverLocal::new_unchecked(a.clone(), d, action);
            stats.modules += 1;
            if module.is_faithful() {
                stats.faithful += 1;
            }
            visit(&module);
            stack.pop();
            assigned.pop();
            continue;
        }
        if next >= candidates[depth].len() {
            stack.pop();
            assigned.pop();
            continue;
        }
        *stack.last_mut().expect("nonempty") += 1;
        nodes += 1;
        if nodes > budget {
            return Err(ModError::BudgetExceeded(nodes));
        }
        let x = &candidates[depth][next];
        if assigned.iter().any(|y| ctx.mul(x, y) != ctx.mul(y, x)) {
            continue;
        }
        assigned.push(x.clone());
        let ok = rels
            .iter()
            .filter(|rel| !rel.single && rel.top == depth)
            .all(|rel| holds(&assigned, rel));
        if !ok {
            assigned.pop();
            continue;
        }
        stack.push(0);
    }
    stats.nodes = nodes;
    Ok(stats)
}

pub fn enumerate_reps(
    a: &Arc<LocalAlgebra>,
    d: usize,
    budget: u64,
) -> Result<(Vec<ModuleOverLocal>, RepStats), ModError> {
    let mut out = Vec::new();
    let stats = enumerate_reps_with(a, d, budget, |m| out.push(m.clone()))?;
    Ok((out, stats))
}
