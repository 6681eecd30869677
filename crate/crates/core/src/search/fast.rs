//! Algebra dimension of a diagram over F2 with bit operations.
//!
//! Every monomial in the generators of a diagram is again a partial map on the
//! vertices, so the algebra is spanned by the distinct nonzero monomial maps;
//! its dimension is the F2-rank of their 0/1 matrices.

use std::collections::HashSet;

use super::canon::{Shape, NONE};

/// Largest vertex count handled here (matrices packed into `u128`).
pub const MAX_FAST_VERTICES: usize = 11;

/// `(dim A, dims of M / g_i M)` over F2.
pub fn f2_dims(s: &Shape) -> (usize, Vec<usize>) {
    let n = s.n as usize;
    let g = s.g as usize;
    assert!(n <= MAX_FAST_VERTICES);
    let identity: Vec<u8> = (0..n as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(identity.clone());
    let mut queue = vec![identity];
    while let Some(m) = queue.pop() {
        for k in 0..g {
            let next: Vec<u8> = m
                .iter()
                .map(|&t| {
                    if t == NONE {
                        NONE
                    } else {
                        s.target(k, t as usize)
                    }
                })
                .collect();
            if next.iter().all(|&t| t == NONE) {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut basis: Vec<u128> = Vec::new();
    for m in &seen {
        let mut bits = 0u128;
        for (v, &t) in m.iter().enumerate() {
            if t != NONE {
                bits |= 1u128 << (v * n + t as usize);
            }
        }
        for b in &basis {
            bits = bits.min(bits ^ b);
        }
        if bits != 0 {
            basis.push(bits);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let cokernels = (0..g)
        .map(|k| {
            let mut image: Vec<u8> = (0..n)
                .map(|v| s.target(k, v))
                .filter(|&t| t != NONE)
                .collect();
            image.sort_unstable();
            image.dedup();
            n - image.len()
        })
        .collect();
    (basis.len(), cokernels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{analyze_action, bundled, bundled_names, realize};
    use crate::exactlin::FieldSpec;

    #[test]
    fn agrees_with_exact_computation_on_bundled_diagrams() {
        for name in bundled_names() {
            let d = bundled(name).unwrap();
            let (r, _) = analyze_action(
                &realize(&d.clone().with_field(FieldSpec::prime(2).unwrap())).unwrap(),
            );
            assert_eq!(f2_dims(&Shape::from_diagram(&d)).0, r.dim_a, "{name}");
        }
    }
}
