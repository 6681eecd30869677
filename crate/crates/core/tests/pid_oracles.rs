use std::collections::BTreeSet;

use commat::exactlin::FieldSpec;
use commat::pid::{
    cayley_hamilton_over_pid, det, ideal_chain, mat_mul, random_module_with_endo, rt_verify, smith,
    InvariantFactors, PidModuleWithEndo, PidSpec, RingElem,
};
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z(v: i64) -> RingElem {
    PidSpec::Integers.from_i64(v)
}

fn as_i64(x: &RingElem) -> i64 {
    match x {
        RingElem::Int(n) => n.to_i64().unwrap(),
        RingElem::Poly(_) => unreachable!(),
    }
}

/// Finite abelian group ⊕ Z/q_j with an endomorphism given by rows.
struct Brute {
    q: Vec<i64>,
    rows: Vec<Vec<i64>>,
}

impl Brute {
    fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &q in &self.q {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.q)
            .map(|((x, y), q)| (x + y) % q)
            .collect()
    }

    fn scale(&self, u: i64, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.q)
            .map(|(x, q)| (u * x).rem_euclid(*q))
            .collect()
    }

    fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.q.len()];
        for (i, &c) in v.iter().enumerate() {
            out = self.add(&out, &self.scale(c, &self.rows[i]));
        }
        out
    }

    fn span(&self, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(vec![0; self.q.len()]);
        loop {
            let mut grew = false;
            let current: Vec<Vec<i64>> = set.iter().cloned().collect();
            for s in &current {
                for g in gens {
                    if set.insert(self.add(s, g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    /// gcd of all u with uM inside some i-generated f-invariant subgroup.
    fn ideal_generator(&self, i: usize) -> i64 {
        let elems = self.elements();
        let exponent = self.q.iter().fold(1, |a, b| a.lcm(b));
        let mut g = exponent;
        let mut tuple = vec![0usize; i];
        loop {
            let gens: Vec<Vec<i64>> = tuple.iter().map(|&k| elems[k].clone()).collect();
            let s = self.span(&gens);
            if gens.iter().all(|x| s.contains(&self.apply(x))) {
                for u in 1..=exponent {
                    if elems.iter().all(|m| s.contains(&self.scale(u, m))) {
                        g = g.gcd(&u);
                    }
                }
            }
            // Next tuple in lexicographic order.
            let mut pos = 0;
            loop {
                if pos == i {
                    return g;
                }
                tuple[pos] += 1;
                if tuple[pos] < elems.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn check_chain_by_brute_force(q: &[i64], rows: &[&[i64]]) {
    let factors =
        InvariantFactors::new(PidSpec::Integers, q.iter().map(|&x| z(x)).collect()).unwrap();
    let endo = rows
        .iter()
        .map(|r| r.iter().map(|&x| z(x)).collect())
        .collect();
    let m = PidModuleWithEndo::new(factors, endo).unwrap();
    let chain = ideal_chain(&m);
    let brute = Brute {
        q: q.to_vec(),
        rows: m
            .endo()
            .iter()
            .map(|r| r.iter().map(as_i64).collect())
            .collect(),
    };
    for i in 0..=q.len() {
        assert_eq!(
            as_i64(&chain.generators[i]),
            brute.ideal_generator(i),
            "I_{i} for {q:?}"
        );
    }
    let r = rt_verify(&m).unwrap();
    assert!(r.lt_a <= chain.bound);
}

#[test]
fn ideal_chain_matches_brute_force() {
    check_chain_by_brute_force(&[4, 2], &[&[0, 0], &[0, 0]]);
    check_chain_by_brute_force(&[4, 2], &[&[1, 1], &[2, 0]]);
    check_chain_by_brute_force(&[4, 2], &[&[3, 1], &[2, 1]]);
    check_chain_by_brute_force(&[2, 2, 2], &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    check_chain_by_brute_force(&[6, 2], &[&[5, 1], &[3, 0]]);
    check_chain_by_brute_force(&[8], &[&[3]]);
}

#[test]
fn identity_endo_spans_a_cyclic_algebra() {
    let factors = InvariantFactors::new(PidSpec::Integers, vec![z(9), z(3)]).unwrap();
    let m = PidModuleWithEndo::new(factors, vec![vec![z(1), z(0)], vec![z(0), z(1)]]).unwrap();
    let r = rt_verify(&m).unwrap();
    // Only the multiples of the identity, of additive order 9.
    assert_eq!((r.lt_a, r.lt_m), (2, 3));
    assert_eq!(r.algebra_factors, vec!["9"]);
}

#[test]
fn polynomial_shift_reaches_equality() {
    // M = F2[x]/(x^3) with f = multiplication by x: A = M.
    let pid = PidSpec::PolyOver(FieldSpec::prime(2).unwrap());
    let factors = InvariantFactors::new(pid, vec![pid.x_pow(3)]).unwrap();
    let m = PidModuleWithEndo::new(factors, vec![vec![pid.x_pow(1)]]).unwrap();
    let r = rt_verify(&m).unwrap();
    assert_eq!((r.lt_a, r.lt_m), (3, 3));
    assert!(r.embedding);
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
}

proptest! {
    #[test]
    fn smith_transforms_are_sound(m in int_matrix()) {
        let pid = PidSpec::Integers;
        let input: Vec<Vec<RingElem>> = m.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect();
        let s = smith(pid, &input);
        let prod = mat_mul(pid, &mat_mul(pid, &s.left, &input), &s.right);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { s.diagonal[i].clone() } else { pid.zero() };
                prop_assert_eq!(x, &expected);
            }
        }
        prop_assert!(pid.is_unit(&det(pid, &s.left)));
        prop_assert!(pid.is_unit(&det(pid, &s.right)));
        for w in s.diagonal.windows(2) {
            prop_assert!(pid.divides(&w[0], &w[1]));
        }
    }

    #[test]
    fn length_bounds_hold_on_random_modules(seed in any::<u64>(), poly in any::<bool>()) {
        let pid = if poly { PidSpec::PolyOver(FieldSpec::prime(2).unwrap()) } else { PidSpec::Integers };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module_with_endo(pid, 6, &mut rng);
        let r = rt_verify(&m).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.embedding);
        prop_assert_eq!(r.lt_a, r.lt_a_via_quotient);
        prop_assert!(r.lt_a <= ideal_chain(&m).bound);
        prop_assert!(r.composition_lt_a.unwrap() <= r.composition_lt_m.unwrap());
        prop_assert!(cayley_hamilton_over_pid(&m).unwrap());
    }
}
