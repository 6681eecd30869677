use std::sync::Arc;

use rand::Rng;

use crate::exactlin::{Scalar, Subspace};

use super::{LocalAlgebra, ModuleOverLocal};

fn random_vector<R: Rng + ?Sized>(m: &ModuleOverLocal, rng: &mut R) -> Vec<Scalar> {
    let f = m.field();
    (0..m.dim()).map(|_| f.random(rng)).collect()
}

/// A random finitely generated module: a submodule of a small free module,
/// modulo a random submodule of it, sometimes dualized.
pub fn random_module<R: Rng + ?Sized>(a: &Arc<LocalAlgebra>, rng: &mut R) -> ModuleOverLocal {
    loop {
        let rank = rng.gen_range(1..=3);
        let reg = ModuleOverLocal::regular(a.clone());
        let mut free = reg.clone();
        for _ in 1..rank {
            free = free.direct_sum(&reg);
        }
        let gens: Vec<Vec<Scalar>> = (0..rng.gen_range(1..=3))
            .map(|_| random_vector(&free, rng))
            .collect();
        let sub = free.submodule_generated(&gens);
        if sub.is_zero() {
            continue;
        }
        let m = free.restrict(&sub).expect("generated submodule");
        let rel_count = rng.gen_range(0..=2);
        let rels: Vec<Vec<Scalar>> = (0..rel_count)
            .map(|_| {
                // Relations drawn from mM keep the top intact half of the time.
                let v = random_vector(&m, rng);
                if rng.gen_bool(0.5) {
                    let s = a.dim();
                    let k = rng.gen_range(0..s);
                    m.action()[k].apply(&v)
                } else {
                    v
                }
            })
            .collect();
        let kernel = if rels.is_empty() {
            Subspace::zero(m.field(), m.dim())
        } else {
            m.submodule_generated(&rels)
        };
        if kernel.dim() == m.dim() {
            continue;
        }
        let q = m.quotient(&kernel).expect("generated submodule");
        return if rng.gen_bool(0.3) { q.dual() } else { q };
    }
}

/// Like [`random_module`] but retried until faithful; falls back to adding a
/// copy of the regular module after a few attempts.
pub fn random_faithful_module<R: Rng + ?Sized>(
    a: &Arc<LocalAlgebra>,
    rng: &mut R,
) -> ModuleOverLocal {
    for _ in 0..20 {
        let m = random_module(a, rng);
        if m.is_faithful() {
            return m;
        }
    }
    random_module(a, rng).direct_sum(&ModuleOverLocal::regular(a.clone()))
}
