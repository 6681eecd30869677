use rand::Rng;
use serde::Serialize;

use super::smith::{smith, PidMatrix};
use super::{PidError, PidSpec, RingElem};

/// Invariant factors `q_0, ..., q_{d-1}` with `q_{i+1} | q_i`, canonical and nonunit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pid: PidSpec,
    chain: Vec<RingElem>,
}

impl InvariantFactors {
    /// Accepts factors in either order; they must form a divisibility chain of nonunits.
    pub fn new(pid: PidSpec, factors: Vec<RingElem>) -> Result<Self, PidError> {
        let mut chain: Vec<RingElem> = factors.iter().map(|q| pid.canonical(q)).collect();
        for q in &chain {
            if pid.is_zero(q) {
                return Err(PidError::NotFiniteLength);
            }
            if pid.is_unit(q) {
                return Err(PidError::UnitFactor(q.to_string()));
            }
        }
        chain.sort_by(|a, b| pid.cmp_size(b, a));
        for w in chain.windows(2) {
            if !pid.divides(&w[1], &w[0]) {
                return Err(PidError::NotChain(w[1].to_string(), w[0].to_string()));
            }
        }
        Ok(InvariantFactors { pid, chain })
    }

    /// Invariant factors of the cokernel of `m` (columns are relations).
    pub fn of_presentation(pid: PidSpec, m: &PidMatrix) -> Result<Self, PidError> {
        let rows = m.len();
        let s = smith(pid, m);
        if s.diagonal.len() < rows || s.diagonal.iter().any(|d| pid.is_zero(d)) {
            return Err(PidError::NotFiniteLength);
        }
        let mut chain: Vec<RingElem> = s.diagonal.into_iter().filter(|d| !pid.is_unit(d)).collect();
        chain.reverse();
        Ok(InvariantFactors { pid, chain })
    }

    pub fn pid(&self) -> PidSpec {
        self.pid
    }

    /// `q_0` (largest) first.
    pub fn chain(&self) -> &[RingElem] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn length(&self) -> usize {
        length_of(self)
    }

    pub fn composition_length(&self) -> Option<usize> {
        self.chain
            .iter()
            .map(|q| self.pid.composition_length(q))
            .sum()
    }
}

/// `sum lt(R/(q_i))`.
pub fn length_of(f: &InvariantFactors) -> usize {
    f.chain.iter().map(|q| f.pid.length(q)).sum()
}

/// `M = ⊕ R/(q_i)` with an endomorphism; row `i` of `endo` is the image of the
/// `i`-th generator, entry `(i, j)` reduced modulo `q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PidModuleWithEndo {
    factors: InvariantFactors,
    endo: PidMatrix,
}

impl PidModuleWithEndo {
    /// Reduces entries and checks `q_j | m_ij q_i` for every entry.
    pub fn new(factors: InvariantFactors, endo: PidMatrix) -> Result<Self, PidError> {
        let pid = factors.pid;
        let d = factors.len();
        if endo.len() != d || endo.iter().any(|r| r.len() != d) {
            return Err(PidError::Shape(d));
        }
        let q = &factors.chain;
        let mut reduced = endo;
        for i in 0..d {
            for j in 0..d {
                let m = pid.reduce(&reduced[i][j], &q[j]);
                if !pid.divides(&q[j], &pid.mul(&m, &q[i])) {
                    return Err(PidError::IllFormedEndo { row: i, col: j });
                }
                reduced[i][j] = m;
            }
        }
        Ok(PidModuleWithEndo {
            factors,
            endo: reduced,
        })
    }

    pub fn factors(&self) -> &InvariantFactors {
        &self.factors
    }

    pub fn endo(&self) -> &PidMatrix {
        &self.endo
    }

    pub fn pid(&self) -> PidSpec {
        self.factors.pid
    }

    /// `f^e` in the same row convention, reduced.
    pub fn power(&self, e: usize) -> PidMatrix {
        let pid = self.pid();
        let d = self.factors.len();
        let q = &self.factors.chain;
        let mut acc = super::smith::identity(pid, d);
        for _ in 0..e {
            let prod = super::smith::mat_mul(pid, &acc, &self.endo);
            acc = prod
                .into_iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(j, x)| pid.reduce(x, &q[j]))
                        .collect()
                })
                .collect();
        }
        acc
    }

    fn flat_power(&self, e: usize) -> Vec<RingElem> {
        self.power(e).into_iter().flatten().collect()
    }

    /// Moduli of the flattened entries of `End(M)` matrices.
    fn entry_moduli(&self) -> Vec<RingElem> {
        let d = self.factors.len();
        (0..d * d)
            .map(|k| self.factors.chain[k % d].clone())
            .collect()
    }
}

/// Submodule of `⊕ R/(Q_k)` spanned by vectors, described by its invariant
/// factors and by the length of the quotient.
#[derive(Clone, Debug)]
pub struct SpanReport {
    pub factors: InvariantFactors,
    pub quotient_length: usize,
    pub ambient_length: usize,
}

/// Structure of the `R`-span of `vectors` inside `⊕ R/(moduli_k)`.
pub fn span_structure(
    pid: PidSpec,
    vectors: &[Vec<RingElem>],
    moduli: &[RingElem],
) -> Result<SpanReport, PidError> {
    let k = moduli.len();
    let s = vectors.len();
    let ambient_length: usize = moduli.iter().map(|q| pid.length(q)).sum();
    if k == 0 {
        return Ok(SpanReport {
            factors: InvariantFactors {
                pid,
                chain: Vec::new(),
            },
            quotient_length: 0,
            ambient_length: 0,
        });
    }
    // [V | D] : R^s ⊕ R^k -> R^k, whose cokernel is the ambient modulo the span.
    let mut vd: PidMatrix = vec![Vec::with_capacity(s + k); k];
    for (r, row) in vd.iter_mut().enumerate() {
        for v in vectors {
            row.push(v[r].clone());
        }
        for (c, q) in moduli.iter().enumerate() {
            row.push(if c == r { q.clone() } else { pid.zero() });
        }
    }
    let sf = smith(pid, &vd);
    let quotient_length: usize = sf.diagonal.iter().map(|d| pid.length(d)).sum();
    // Kernel of [V | D]: the trailing columns of the right transform.
    let rank = sf.diagonal.iter().filter(|d| !pid.is_zero(d)).count();
    let relations: PidMatrix = (0..s)
        .map(|t| (rank..s + k).map(|c| sf.right[t][c].clone()).collect())
        .collect();
    let factors = if s == 0 {
        InvariantFactors {
            pid,
            chain: Vec::new(),
        }
    } else if relations[0].is_empty() {
        return Err(PidError::NotFiniteLength);
    } else {
        InvariantFactors::of_presentation(pid, &relations)?
    };
    Ok(SpanReport {
        factors,
        quotient_length,
        ambient_length,
    })
}

/// Ideals `I_i = (q_i)` for `i < d`, then `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealChain {
    pub generators: Vec<RingElem>,
    pub quotient_lengths: Vec<usize>,
    /// `sum_{i<d} lt(R/I_i)`.
    pub bound: usize,
}

pub fn ideal_chain(m: &PidModuleWithEndo) -> IdealChain {
    let pid = m.pid();
    let mut generators: Vec<RingElem> = m.factors.chain.clone();
    generators.push(pid.one());
    let quotient_lengths: Vec<usize> = generators
        .iter()
        .map(|g| if pid.is_unit(g) { 0 } else { pid.length(g) })
        .collect();
    let bound = quotient_lengths[..m.factors.len()].iter().sum();
    IdealChain {
        generators,
        quotient_lengths,
        bound,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RtReport {
    pub lt_a: usize,
    pub lt_m: usize,
    pub holds: bool,
    pub embedding: bool,
    pub algebra_factors: Vec<String>,
    pub module_factors: Vec<String>,
    /// Composition lengths where irreducible factors can be counted.
    pub composition_lt_a: Option<usize>,
    pub composition_lt_m: Option<usize>,
    /// `lt(A)` recomputed as ambient length minus quotient length.
    pub lt_a_via_quotient: usize,
}

/// Builds `A = R-span{f^0, ..., f^(ltM-1)}` in `End(M)` and compares it with `M`.
pub fn rt_verify(m: &PidModuleWithEndo) -> Result<RtReport, PidError> {
    let pid = m.pid();
    let lt_m = m.factors.length();
    let powers: Vec<Vec<RingElem>> = (0..lt_m.max(1)).map(|e| m.flat_power(e)).collect();
    let span = span_structure(pid, &powers, &m.entry_moduli())?;
    let lt_a = span.factors.length();
    Ok(RtReport {
        lt_a,
        lt_m,
        holds: lt_a <= lt_m,
        embedding: embeds(&span.factors, &m.factors),
        algebra_factors: span.factors.chain.iter().map(|q| q.to_string()).collect(),
        module_factors: m.factors.chain.iter().map(|q| q.to_string()).collect(),
        composition_lt_a: span.factors.composition_length(),
        composition_lt_m: m.factors.composition_length(),
        lt_a_via_quotient: span.ambient_length - span.quotient_length,
    })
}

/// True when `f^d` lies in the `R`-span of `1, f, ..., f^(d-1)`, `d` the number
/// of invariant factors.
pub fn cayley_hamilton_over_pid(m: &PidModuleWithEndo) -> Result<bool, PidError> {
    let pid = m.pid();
    let d = m.factors.len();
    let moduli = m.entry_moduli();
    let lower: Vec<Vec<RingElem>> = (0..d).map(|e| m.flat_power(e)).collect();
    let mut with_top = lower.clone();
    with_top.push(m.flat_power(d));
    let a = span_structure(pid, &lower, &moduli)?;
    let b = span_structure(pid, &with_top, &moduli)?;
    Ok(a.quotient_length == b.quotient_length)
}

/// Pairwise coprime base whose products give every input element.
pub fn coprime_base(pid: PidSpec, elems: &[RingElem]) -> Vec<RingElem> {
    let mut base: Vec<RingElem> = elems
        .iter()
        .map(|e| pid.canonical(e))
        .filter(|e| !pid.is_unit(e) && !pid.is_zero(e))
        .collect();
    loop {
        base.sort_by(|a, b| {
            pid.cmp_size(a, b)
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        base.dedup();
        let mut split = None;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = pid.gcd(&base[i], &base[j]);
                if !pid.is_unit(&g) {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { return base };
        let bi = pid.exact_div(&base[i], &g);
        let bj = pid.exact_div(&base[j], &g);
        base.remove(j);
        base.remove(i);
        for e in [g, bi, bj] {
            let e = pid.canonical(&e);
            if !pid.is_unit(&e) {
                base.push(e);
            }
        }
    }
}

fn exponent(pid: PidSpec, mut q: RingElem, b: &RingElem) -> usize {
    let mut e = 0;
    while pid.divides(b, &q) {
        q = pid.exact_div(&q, b);
        e += 1;
    }
    e
}

/// Whether a module with factors `sub` embeds in one with factors `sup`: for
/// every prime, the sorted exponent lists must be dominated entry by entry.
pub fn embeds(sub: &InvariantFactors, sup: &InvariantFactors) -> bool {
    let pid = sub.pid;
    if sub.len() > sup.len() {
        return false;
    }
    let mut all = sub.chain.clone();
    all.extend(sup.chain.iter().cloned());
    let base = coprime_base(pid, &all);
    base.iter().all(|b| {
        // Chains are sorted by divisibility, so exponents are already descending.
        let es: Vec<usize> = sub
            .chain
            .iter()
            .map(|q| exponent(pid, q.clone(), b))
            .collect();
        let et: Vec<usize> = sup
            .chain
            .iter()
            .map(|q| exponent(pid, q.clone(), b))
            .collect();
        es.iter().zip(&et).all(|(x, y)| x <= y)
    })
}

/// A random module with endomorphism and length at most `max_length`.
///
/// Integers draw prime factors from {2, 3, 5}; polynomial rings draw from `x`,
/// `x + 1` and `x^2 + x + 1` (the last only where it is irreducible).
pub fn random_module_with_endo<R: Rng + ?Sized>(
    pid: PidSpec,
    max_length: usize,
    rng: &mut R,
) -> PidModuleWithEndo {
    let atoms: Vec<RingElem> = match pid {
        PidSpec::Integers => [2, 3, 5].iter().map(|&p| pid.from_i64(p)).collect(),
        PidSpec::PolyOver(_) => ["x", "x+1", "x^2+x+1"]
            .iter()
            .map(|t| pid.parse_elem(t).expect("valid literal"))
            .filter(|q| pid.composition_length(q) != Some(2))
            .collect(),
    };
    loop {
        let d = rng.gen_range(1..=3);
        let mut chain: Vec<RingElem> = Vec::new();
        let mut cur = atoms[rng.gen_range(0..atoms.len())].clone();
        chain.push(cur.clone());
        for _ in 1..d {
            let steps = rng.gen_range(0..=2);
            for _ in 0..steps {
                cur = pid.mul(&cur, &atoms[rng.gen_range(0..atoms.len())]);
            }
            chain.push(cur.clone());
        }
        let factors = match InvariantFactors::new(pid, chain) {
            Ok(f) => f,
            Err(_) => continue,
        };
        if factors.length() > max_length {
            continue;
        }
        return random_endo(factors, rng);
    }
}

/// A uniformly chosen endomorphism of the module with the given factors.
pub fn random_endo<R: Rng + ?Sized>(factors: InvariantFactors, rng: &mut R) -> PidModuleWithEndo {
    let pid = factors.pid;
    let q = factors.chain.clone();
    let endo: PidMatrix = (0..q.len())
        .map(|i| {
            (0..q.len())
                .map(|j| {
                    let step = pid.exact_div(&q[j], &pid.gcd(&q[i], &q[j]));
                    let r = pid.random_below(&q[j], rng);
                    pid.reduce(&pid.mul(&step, &r), &q[j])
                })
                .collect()
        })
        .collect();
    PidModuleWithEndo::new(factors, endo).expect("constructed within the constraints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    fn z(v: i64) -> RingElem {
        PidSpec::Integers.from_i64(v)
    }

    fn module(factors: &[i64], endo: &[&[i64]]) -> Result<PidModuleWithEndo, PidError> {
        let f = InvariantFactors::new(PidSpec::Integers, factors.iter().map(|&x| z(x)).collect())?;
        PidModuleWithEndo::new(
            f,
            endo.iter()
                .map(|r| r.iter().map(|&x| z(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn presentation_factors() {
        let m = vec![vec![z(2), z(0)], vec![z(0), z(4)]];
        let f = InvariantFactors::of_presentation(PidSpec::Integers, &m).unwrap();
        assert_eq!(f.chain(), &[z(4), z(2)]);
        assert_eq!(length_of(&f), 3);
        let id = vec![vec![z(1), z(0)], vec![z(0), z(1)]];
        assert!(InvariantFactors::of_presentation(PidSpec::Integers, &id)
            .unwrap()
            .is_empty());
        let singular = vec![vec![z(2), z(0)], vec![z(0), z(0)]];
        assert_eq!(
            InvariantFactors::of_presentation(PidSpec::Integers, &singular),
            Err(PidError::NotFiniteLength)
        );
    }

    #[test]
    fn polynomial_presentation() {
        let pid = PidSpec::PolyOver(FieldSpec::prime(2).unwrap());
        let m = vec![
            vec![pid.x_pow(1), pid.zero()],
            vec![pid.zero(), pid.x_pow(2)],
        ];
        let f = InvariantFactors::of_presentation(pid, &m).unwrap();
        assert_eq!(f.chain(), &[pid.x_pow(2), pid.x_pow(1)]);
        assert_eq!(length_of(&f), 3);
    }

    #[test]
    fn zero_endo_on_z4_z2() {
        let m = module(&[4, 2], &[&[0, 0], &[0, 0]]).unwrap();
        let r = rt_verify(&m).unwrap();
        assert_eq!((r.lt_a, r.lt_m, r.holds, r.embedding), (2, 3, true, true));
        assert_eq!(r.algebra_factors, vec!["4"]);
        assert_eq!(r.lt_a_via_quotient, 2);
    }

    #[test]
    fn ill_formed_endo() {
        // Entry (1,0): a map Z/2 -> Z/4 must be a multiple of 2.
        assert_eq!(
            module(&[4, 2], &[&[1, 0], &[1, 1]]),
            Err(PidError::IllFormedEndo { row: 1, col: 0 })
        );
        assert!(module(&[4, 2], &[&[1, 1], &[2, 1]]).is_ok());
    }

    #[test]
    fn ideal_chains() {
        let m = module(&[4, 2], &[&[1, 1], &[2, 0]]).unwrap();
        let c = ideal_chain(&m);
        assert_eq!(c.generators, vec![z(4), z(2), z(1)]);
        assert_eq!(c.bound, 3);
        let m = module(&[2, 2, 2], &[&[1, 0, 1], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert_eq!(ideal_chain(&m).generators[..3], [z(2), z(2), z(2)]);
    }

    #[test]
    fn coprime_base_splits_common_factors() {
        let pid = PidSpec::Integers;
        let base = coprime_base(pid, &[z(12), z(18)]);
        // 12 = 4*3, 18 = 2*9; gcd-refinement yields {2, 3}.
        assert_eq!(base, vec![z(2), z(3)]);
        let a = InvariantFactors::new(pid, vec![z(4)]).unwrap();
        let b = InvariantFactors::new(pid, vec![z(2), z(2)]).unwrap();
        assert!(!embeds(&a, &b));
        assert!(embeds(
            &b,
            &InvariantFactors::new(pid, vec![z(4), z(2)]).unwrap()
        ));
    }
}
