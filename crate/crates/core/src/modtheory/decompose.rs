use serde::Serialize;

use crate::exactlin::{Scalar, Subspace};

use super::{ModError, ModuleOverLocal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionKind {
    SumOfCyclics,
    SumOfCocyclics,
    SumOfLocalTops,
    SubdirectSimpleSocles,
    FaithfulSubfactor,
}

/// Pieces of a module together with the vectors certifying them.
///
/// For direct-sum and local-top decompositions `pieces` are submodules and
/// `certificates` their generators. For subdirect decompositions `pieces` are
/// the kernels `N_j` and `certificates` the socle vectors they avoid.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub kind: DecompositionKind,
    pub pieces: Vec<Subspace>,
    pub certificates: Vec<Vec<Scalar>>,
}

fn unit(m: &ModuleOverLocal, c: usize) -> Vec<Scalar> {
    let f = m.field();
    let mut e = vec![f.zero(); m.dim()];
    e[c] = f.one();
    e
}

/// Splits a module of length at most 3 into cyclic or into cocyclic summands.
pub fn lt3_decompose(m: &ModuleOverLocal) -> Result<DecompositionReport, ModError> {
    if m.length() > 3 {
        return Err(ModError::LengthTooLarge(m.length()));
    }
    let f = m.field();
    let mut pieces = Vec::new();
    let mut certificates = Vec::new();
    let mut rest = Subspace::full(f, m.dim());
    loop {
        if rest.is_zero() {
            break;
        }
        let sub = m.restrict(&rest)?;
        if sub.is_cyclic() || sub.is_cocyclic() {
            pieces.push(rest.clone());
            certificates.push(generator_in(m, &rest));
            break;
        }
        // Not cyclic and not cocyclic forces a socle vector outside mL.
        let rad = m.radical_of(&rest);
        let soc = m.socle().intersection(&rest)?;
        let v = soc
            .basis()
            .iter()
            .find(|v| !rad.contains(v))
            .cloned()
            .ok_or_else(|| ModError::Invalid("no simple summand found".into()))?;
        // Complement of v's image in L/mL, lifted, plus mL.
        let with_v = rad.sum(&Subspace::span(f, m.dim(), std::slice::from_ref(&v)))?;
        let mut comp = rad.clone();
        for b in rest.basis() {
            let extended = with_v.sum(&comp)?;
            if !extended.contains(b) {
                comp = comp.sum(&Subspace::span(f, m.dim(), std::slice::from_ref(b)))?;
            }
        }
        pieces.push(Subspace::span(f, m.dim(), std::slice::from_ref(&v)));
        certificates.push(v);
        rest = comp;
    }
    let all = |pred: &dyn Fn(&ModuleOverLocal) -> bool| {
        pieces
            .iter()
            .all(|p| pred(&m.restrict(p).expect("pieces are submodules")))
    };
    let kind = if all(&|x| x.is_cyclic()) {
        DecompositionKind::SumOfCyclics
    } else if all(&|x| x.is_cocyclic()) {
        DecompositionKind::SumOfCocyclics
    } else {
        return Err(ModError::Invalid("mixed summand types".into()));
    };
    Ok(DecompositionReport {
        kind,
        pieces,
        certificates,
    })
}

/// A vector of `sub` outside `m * sub` (or zero if `sub` is zero).
fn generator_in(m: &ModuleOverLocal, sub: &Subspace) -> Vec<Scalar> {
    let rad = m.radical_of(sub);
    sub.basis()
        .iter()
        .find(|b| !rad.contains(b))
        .cloned()
        .unwrap_or_else(|| vec![m.field().zero(); m.dim()])
}

/// Cyclic submodules `A x_i` for lifts `x_i` of a basis of `M/mM`.
///
/// With residue field `k`, each `A x_i` already has a simple top.
pub fn sum_of_local_tops(m: &ModuleOverLocal) -> DecompositionReport {
    let rad = m.radical();
    let mut pieces = Vec::new();
    let mut certificates = Vec::new();
    for c in rad.free_columns() {
        let x = unit(m, c);
        let n = m.cyclic_submodule(&x);
        debug_assert_eq!(n.dim() - m.radical_of(&n).dim(), 1);
        pieces.push(n);
        certificates.push(x);
    }
    DecompositionReport {
        kind: DecompositionKind::SumOfLocalTops,
        pieces,
        certificates,
    }
}

/// Kernels `N_j`, maximal among submodules missing the `j`-th socle line, so
/// that `M` embeds in the product of the `M/N_j`, each with simple socle.
pub fn subdirect_simple_socles(m: &ModuleOverLocal) -> DecompositionReport {
    let f = m.field();
    let soc = m.socle();
    let lines: Vec<Vec<Scalar>> = soc.basis().to_vec();
    let mut pieces = Vec::new();
    for (j, s) in lines.iter().enumerate() {
        let others: Vec<Vec<Scalar>> = lines
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, v)| v.clone())
            .collect();
        let mut n = Subspace::span(f, m.dim(), &others);
        loop {
            let q = m.quotient(&n).expect("n is a submodule");
            let image_s = Subspace::span(f, q.dim(), &[n.quotient_coordinates(s)]);
            let qsoc = q.socle();
            if qsoc.dim() <= 1 {
                break;
            }
            let w = qsoc
                .basis()
                .iter()
                .find(|w| !image_s.contains(w))
                .expect("socle of dimension > 1 escapes a line")
                .clone();
            // Lift: quotient coordinates live at the free columns of n.
            let mut lift = vec![f.zero(); m.dim()];
            for (c, x) in n.free_columns().into_iter().zip(&w) {
                lift[c] = x.clone();
            }
            n = n
                .sum(&Subspace::span(f, m.dim(), &[lift]))
                .expect("same ambient");
        }
        pieces.push(n);
    }
    DecompositionReport {
        kind: DecompositionKind::SubdirectSimpleSocles,
        pieces,
        certificates: lines,
    }
}

/// True when the intersection of the kernels is zero.
pub fn is_subdirect_embedding(m: &ModuleOverLocal, kernels: &[Subspace]) -> bool {
    let mut acc = Subspace::full(m.field(), m.dim());
    for k in kernels {
        acc = acc.intersection(k).expect("same ambient");
    }
    acc.is_zero()
}

/// A faithful submodule with few generators, a faithful quotient with small
/// socle, and a faithful subquotient with both properties.
#[derive(Clone, Debug)]
pub struct FaithfulSubfactorReport {
    /// Length of the socle of the algebra.
    pub bound: usize,
    /// Generators (from the local-top decomposition) of the faithful submodule.
    pub sub_generators: Vec<Vec<Scalar>>,
    pub sub: Subspace,
    pub sub_min_generators: usize,
    /// Kernel `K` of the faithful quotient `M/K`.
    pub quotient_kernel: Subspace,
    pub quotient_socle_length: usize,
    /// The subfactor `M'/K'` with `K'` given in the echelon coordinates of `M'`.
    pub combined_kernel: Subspace,
    pub combined_min_generators: usize,
    pub combined_socle_length: usize,
    pub combined_length: usize,
    pub all_faithful: bool,
}

fn socle_annihilator(a_soc: &Subspace, module: &ModuleOverLocal) -> Subspace {
    module
        .annihilator()
        .intersection(a_soc)
        .expect("same ambient")
}

/// Picks kernels until the quotient by their intersection is faithful.
fn faithful_quotient(m: &ModuleOverLocal, a_soc: &Subspace) -> Subspace {
    let f = m.field();
    let sub = subdirect_simple_socles(m);
    let mut kernel = Subspace::full(f, m.dim());
    let mut z = a_soc.clone();
    for n in &sub.pieces {
        if z.is_zero() {
            break;
        }
        let candidate = kernel.intersection(n).expect("same ambient");
        let q = m.quotient(&candidate).expect("intersection of submodules");
        let z2 = socle_annihilator(a_soc, &q);
        if z2.dim() < z.dim() {
            kernel = candidate;
            z = z2;
        }
    }
    kernel
}

pub fn faithful_small_subfactor(m: &ModuleOverLocal) -> Result<FaithfulSubfactorReport, ModError> {
    if !m.is_faithful() {
        return Err(ModError::NotFaithful);
    }
    let f = m.field();
    let a = m.algebra().clone();
    let reg = ModuleOverLocal::regular(a.clone());
    let a_soc = reg.socle();
    let bound = a_soc.dim();

    let tops = sum_of_local_tops(m);
    let mut sub = Subspace::zero(f, m.dim());
    let mut gens = Vec::new();
    let mut z = a_soc.clone();
    for (piece, x) in tops.pieces.iter().zip(&tops.certificates) {
        if z.is_zero() {
            break;
        }
        let candidate = sub.sum(piece)?;
        let z2 = m.annihilator_of(&candidate).intersection(&a_soc)?;
        if z2.dim() < z.dim() {
            sub = candidate;
            gens.push(x.clone());
            z = z2;
        }
    }
    let sub_module = m.restrict(&sub)?;

    let quotient_kernel = faithful_quotient(m, &a_soc);
    let quotient = m.quotient(&quotient_kernel)?;

    let combined_kernel = faithful_quotient(&sub_module, &a_soc);
    let combined = sub_module.quotient(&combined_kernel)?;

    let all_faithful = sub_module.is_faithful() && quotient.is_faithful() && combined.is_faithful();
    Ok(FaithfulSubfactorReport {
        bound,
        sub_generators: gens,
        sub_min_generators: sub_module.min_generators(),
        sub,
        quotient_socle_length: quotient.socle_length(),
        quotient_kernel,
        combined_min_generators: combined.min_generators(),
        combined_socle_length: combined.socle_length(),
        combined_length: combined.length(),
        combined_kernel,
        all_faithful,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::modtheory::LocalAlgebra;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn alg(name: &str) -> Arc<LocalAlgebra> {
        Arc::new(LocalAlgebra::preset(name, f2()).unwrap())
    }

    /// Every subspace of F2^n invariant under the action, by enumeration.
    fn all_submodules(m: &ModuleOverLocal) -> Vec<Subspace> {
        let n = m.dim();
        let f = m.field();
        let vectors: Vec<Vec<Scalar>> = (0..1u32 << n)
            .map(|bits| {
                (0..n)
                    .map(|i| f.from_i64(((bits >> i) & 1) as i64))
                    .collect()
            })
            .collect();
        let mut out: Vec<Subspace> = Vec::new();
        for mask in 0..1u64 << vectors.len().min(16) {
            let chosen: Vec<Vec<Scalar>> = (0..vectors.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vectors[i].clone())
                .collect();
            let s = Subspace::span(f, n, &chosen);
            if m.is_submodule(&s) && !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn lt3_simple_and_semisimple() {
        let a = alg("st2");
        let k = ModuleOverLocal::simple(a.clone());
        let r = lt3_decompose(&k).unwrap();
        assert_eq!(r.pieces.len(), 1);
        let kkk = k.direct_sum(&k).direct_sum(&k);
        let r = lt3_decompose(&kkk).unwrap();
        assert_eq!(r.pieces.len(), 3);
        assert!(lt3_decompose(&kkk.direct_sum(&k)).is_err());
    }

    #[test]
    fn lt3_splits_s2_plus_k() {
        let a = alg("s2");
        let m = ModuleOverLocal::regular(a.clone()).direct_sum(&ModuleOverLocal::simple(a));
        assert_eq!(m.min_generators(), 2);
        assert_eq!(m.socle_length(), 2);
        let r = lt3_decompose(&m).unwrap();
        let subs = all_submodules(&m);
        let mut total = Subspace::zero(m.field(), 3);
        let mut dims = 0;
        for p in &r.pieces {
            assert!(subs.contains(p), "piece is a submodule");
            total = total.sum(p).unwrap();
            dims += p.dim();
        }
        assert_eq!(total.dim(), 3);
        assert_eq!(dims, 3);
        assert_eq!(r.kind, DecompositionKind::SumOfCyclics);
    }

    #[test]
    fn local_tops_of_regular_and_sum() {
        let a = alg("st2");
        let reg = ModuleOverLocal::regular(a.clone());
        assert_eq!(sum_of_local_tops(&reg).pieces.len(), 1);
        let m = ModuleOverLocal::simple(a).direct_sum(&reg);
        let r = sum_of_local_tops(&m);
        assert_eq!(r.pieces.len(), 2);
    }

    #[test]
    fn subdirect_factors() {
        let a = alg("st2");
        let k = ModuleOverLocal::simple(a.clone());
        let kk = k.direct_sum(&k);
        let r = subdirect_simple_socles(&kk);
        assert_eq!(r.pieces.len(), 2);
        assert!(is_subdirect_embedding(&kk, &r.pieces));
        let dual = ModuleOverLocal::regular(a).dual();
        assert_eq!(subdirect_simple_socles(&dual).pieces.len(), 1);
    }

    #[test]
    fn faithful_subfactor_of_regular() {
        let a = alg("st_sq");
        let reg = ModuleOverLocal::regular(a.clone());
        let big = reg
            .direct_sum(&ModuleOverLocal::simple(a.clone()))
            .direct_sum(&ModuleOverLocal::simple(a));
        let r = faithful_small_subfactor(&big).unwrap();
        assert_eq!(r.bound, 1);
        assert_eq!(r.sub_generators.len(), 1);
        assert_eq!(r.sub.dim(), 4);
        assert!(r.all_faithful);
        assert!(faithful_small_subfactor(&ModuleOverLocal::simple(alg("s2"))).is_err());
    }
}
