use serde::Serialize;

use crate::exactlin::{FieldSpec, Matrix, Scalar};
use crate::modtheory::{LocalAlgebra, ModError, ModuleOverLocal};
use crate::pid::{InvariantFactors, PidSpec, RingElem};

/// `A = k[s,t]/(s,t)^2` against its dual module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DualNonEmbeddingReport {
    pub field: String,
    pub dim_a: usize,
    pub dim_m: usize,
    pub dual_faithful: bool,
    pub vectors_checked: u64,
    /// Smallest annihilator dimension over all vectors of the dual.
    pub min_annihilator_dim: usize,
    pub no_free_vector: bool,
    /// Invariant factors of `A` and of its dual as `k[s]`-modules.
    pub algebra_factors: Vec<String>,
    pub dual_factors: Vec<String>,
    pub restrictions_match: bool,
}

/// Invariant factors of `k^n` as a `k[x]`-module with `x` acting by `s`,
/// from the Smith form of `xI - S`.
fn restriction_factors(s: &Matrix) -> InvariantFactors {
    let f = s.field();
    let pid = PidSpec::PolyOver(f);
    let n = s.rows();
    let pres: Vec<Vec<RingElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(s.get(i, j));
                    let lead = if i == j { f.one() } else { f.zero() };
                    pid.add(
                        &constant(pid, c),
                        &pid.mul(&constant(pid, lead), &pid.x_pow(1)),
                    )
                })
                .collect()
        })
        .collect();
    InvariantFactors::of_presentation(pid, &pres).expect("xI - S is nonsingular")
}

/// The constant polynomial `c`, trimmed when zero.
fn constant(pid: PidSpec, c: Scalar) -> RingElem {
    pid.add(&pid.zero(), &RingElem::Poly(vec![c]))
}

/// Exhaustive over a prime field: no vector of the dual has zero
/// annihilator, yet `A` and the dual agree as `k[s]`-modules.
pub fn dual_non_embedding(field: FieldSpec) -> Result<DualNonEmbeddingReport, ModError> {
    let elems = field.elements().ok_or(ModError::FieldNotFinite)?;
    let a = LocalAlgebra::preset("st2", field)?.into_shared();
    let regular = ModuleOverLocal::regular(a.clone());
    let dual = regular.dual();
    let n = dual.dim();
    let p = elems.len() as u64;
    let total = p.pow(n as u32);
    let mut min_ann = usize::MAX;
    for idx in 0..total {
        let mut rest = idx;
        let v: Vec<Scalar> = (0..n)
            .map(|_| {
                let e = elems[(rest % p) as usize].clone();
                rest /= p;
                e
            })
            .collect();
        min_ann = min_ann.min(dual.annihilator_of_vector(&v).dim());
    }
    let s = a
        .labels()
        .iter()
        .position(|l| l == "s")
        .expect("s is a basis label");
    let fa = restriction_factors(&regular.action()[s]);
    let fm = restriction_factors(&dual.action()[s]);
    let show = |f: &InvariantFactors| f.chain().iter().map(|q| q.to_string()).collect::<Vec<_>>();
    Ok(DualNonEmbeddingReport {
        field: field.to_string(),
        dim_a: a.dim(),
        dim_m: n,
        dual_faithful: dual.is_faithful(),
        vectors_checked: total,
        min_annihilator_dim: min_ann,
        no_free_vector: min_ann > 0,
        algebra_factors: show(&fa),
        dual_factors: show(&fm),
        restrictions_match: fa == fm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn over_f2() {
        let r = dual_non_embedding(FieldSpec::prime(2).unwrap()).unwrap();
        assert_eq!((r.dim_a, r.dim_m, r.vectors_checked), (3, 3, 8));
        assert!(r.dual_faithful && r.no_free_vector && r.restrictions_match);
        assert_eq!(r.algebra_factors, vec!["x^2", "x"]);
    }

    #[test]
    fn rationals_rejected() {
        assert!(matches!(
            dual_non_embedding(FieldSpec::Rationals),
            Err(ModError::FieldNotFinite)
        ));
    }
}
