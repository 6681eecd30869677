use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{build_action, format_monomial, generate_algebra, GeneratedAlgebra};
use crate::exactlin::{FieldSpec, Matrix, Scalar, Subspace};

use super::ModError;

/// A commutative local algebra with residue field `k`, given by a basis whose
/// first element is `1` and whose remaining elements span the maximal ideal.
///
/// Multiplication is stored as left-multiplication matrices: column `j` of
/// `mult[i]` holds the coordinates of `b_i * b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalAlgebra {
    field: FieldSpec,
    labels: Vec<String>,
    mult: Vec<Matrix>,
}

impl LocalAlgebra {
    /// Builds and fully validates an algebra from `c[i][j][k]`, the coefficient
    /// of `b_k` in `b_i * b_j`.
    pub fn from_structure_constants(
        field: FieldSpec,
        labels: Vec<String>,
        constants: &[Vec<Vec<Scalar>>],
    ) -> Result<Self, ModError> {
        let n = labels.len();
        if n == 0 || constants.len() != n {
            return Err(ModError::Invalid(
                "structure constants do not match the basis".into(),
            ));
        }
        let mut mult = Vec::with_capacity(n);
        for (i, ci) in constants.iter().enumerate() {
            if ci.len() != n || ci.iter().any(|v| v.len() != n) {
                return Err(ModError::Invalid(format!(
                    "row {i} of the structure constants is ragged"
                )));
            }
            let cols: Vec<Vec<Scalar>> = ci.to_vec();
            mult.push(Matrix::from_columns(field, n, &cols));
        }
        let alg = LocalAlgebra {
            field,
            labels,
            mult,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), ModError> {
        let f = self.field;
        let n = self.dim();
        if !self.mult[0].is_identity() {
            return Err(ModError::Invalid(
                "basis element 0 is not the identity".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if self.mult[i].column(j) != self.mult[j].column(i) {
                    return Err(ModError::Invalid(format!("b{i}*b{j} != b{j}*b{i}")));
                }
            }
        }
        // Associativity: L_i L_j = L_{b_i b_j}.
        for i in 0..n {
            for j in 0..n {
                if self.mult[i].mul(&self.mult[j]) != self.mul_matrix(&self.mult[i].column(j)) {
                    return Err(ModError::Invalid(format!(
                        "associativity fails at b{i}, b{j}"
                    )));
                }
            }
        }
        // span(b_1..) must be an ideal, and each b_i nilpotent.
        for i in 1..n {
            for j in 0..n {
                if !f.is_zero(self.mult[i].get(0, j)) {
                    return Err(ModError::Invalid(format!(
                        "b{i}*b{j} leaves the maximal ideal"
                    )));
                }
            }
            if !self.mult[i].pow(n as u32).is_zero() {
                return Err(ModError::Invalid(format!("b{i} is not nilpotent")));
            }
        }
        Ok(())
    }

    /// `k[x_1..x_r] / I` for a monomial ideal `I` containing a power of every variable.
    ///
    /// Basis: standard monomials ordered by degree, then by descending exponent
    /// vector (so `s^2, st, t^2`).
    pub fn monomial_quotient(
        field: FieldSpec,
        vars: &[&str],
        ideal: &[Vec<u32>],
    ) -> Result<Self, ModError> {
        let r = vars.len();
        let divides = |g: &[u32], w: &[u32]| g.iter().zip(w).all(|(a, b)| a <= b);
        let in_ideal = |w: &[u32]| ideal.iter().any(|g| divides(g, w));
        for v in 0..r {
            let has_power = ideal
                .iter()
                .any(|g| g.iter().enumerate().all(|(i, &e)| i == v || e == 0) && g[v] > 0);
            if !has_power {
                return Err(ModError::Invalid(format!(
                    "no power of {} lies in the ideal",
                    vars[v]
                )));
            }
        }
        let mut words: Vec<Vec<u32>> = Vec::new();
        let mut frontier: BTreeSet<Vec<u32>> = BTreeSet::new();
        frontier.insert(vec![0; r]);
        while !frontier.is_empty() {
            let mut layer: Vec<Vec<u32>> = frontier.into_iter().filter(|w| !in_ideal(w)).collect();
            layer.sort_by(|a, b| b.cmp(a));
            let mut next = BTreeSet::new();
            for w in &layer {
                for v in 0..r {
                    let mut u = w.clone();
                    u[v] += 1;
                    next.insert(u);
                }
            }
            words.extend(layer);
            frontier = next;
        }
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let labels = words.iter().map(|w| format_monomial(&names, w)).collect();
        let n = words.len();
        let mut mult = Vec::with_capacity(n);
        for wi in &words {
            let mut m = Matrix::zeros(field, n, n);
            for (j, wj) in words.iter().enumerate() {
                let prod: Vec<u32> = wi.iter().zip(wj).map(|(a, b)| a + b).collect();
                if let Some(k) = words.iter().position(|w| *w == prod) {
                    m.set(k, j, field.one());
                }
            }
            mult.push(m);
        }
        Ok(LocalAlgebra {
            field,
            labels,
            mult,
        })
    }

    /// The algebra generated by a commuting action, with its defining module.
    ///
    /// Fails with `NotLocal` when some non-identity basis element is not nilpotent.
    pub fn from_generated(alg: &GeneratedAlgebra) -> Result<Self, ModError> {
        let f = alg.field();
        let n = alg.dim();
        let dim_m = alg.action().dim();
        for (i, b) in alg.basis().iter().enumerate().skip(1) {
            if !b.pow(dim_m as u32).is_zero() {
                return Err(ModError::NotLocal(alg.label_strings()[i].clone()));
            }
        }
        let mut mult = Vec::with_capacity(n);
        for bi in alg.basis() {
            let cols: Vec<Vec<Scalar>> = alg
                .basis()
                .iter()
                .map(|bj| {
                    alg.coordinates(&bi.mul(bj))
                        .expect("algebra is closed under products")
                })
                .collect();
            mult.push(Matrix::from_columns(f, n, &cols));
        }
        Ok(LocalAlgebra {
            field: f,
            labels: alg.label_strings(),
            mult,
        })
    }

    pub fn preset(name: &str, field: FieldSpec) -> Result<Self, ModError> {
        let q = |vars: &[&str], ideal: &[&[u32]]| {
            let ideal: Vec<Vec<u32>> = ideal.iter().map(|g| g.to_vec()).collect();
            LocalAlgebra::monomial_quotient(field, vars, &ideal)
        };
        match name {
            "k" => q(&["s"], &[&[1]]),
            "s2" => q(&["s"], &[&[2]]),
            "s3" => q(&["s"], &[&[3]]),
            "s4" => q(&["s"], &[&[4]]),
            "st2" => q(&["s", "t"], &[&[2, 0], &[1, 1], &[0, 2]]),
            "st_sq" => q(&["s", "t"], &[&[2, 0], &[0, 2]]),
            "s3t" => q(&["s", "t"], &[&[3, 0], &[1, 1], &[0, 2]]),
            "m2_3" => q(
                &["s", "t", "u"],
                &[
                    &[2, 0, 0],
                    &[0, 2, 0],
                    &[0, 0, 2],
                    &[1, 1, 0],
                    &[1, 0, 1],
                    &[0, 1, 1],
                ],
            ),
            "m2_4" => LocalAlgebra::square_zero(field, 4),
            _ => Err(ModError::UnknownPreset(name.to_string())),
        }
    }

    /// Names accepted by [`LocalAlgebra::preset`].
    pub fn preset_names() -> &'static [&'static str] {
        &["k", "s2", "s3", "s4", "st2", "st_sq", "s3t", "m2_3", "m2_4"]
    }

    /// `k[t_1..t_r]/(t_1..t_r)^2`, of length `r + 1`.
    pub fn square_zero(field: FieldSpec, r: usize) -> Result<Self, ModError> {
        let names: Vec<String> = (1..=r).map(|i| format!("t{i}")).collect();
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut ideal = Vec::new();
        for i in 0..r {
            for j in i..r {
                let mut g = vec![0; r];
                g[i] += 1;
                g[j] += 1;
                ideal.push(g);
            }
        }
        LocalAlgebra::monomial_quotient(field, &vars, &ideal)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Length as a module over itself; equal to the dimension.
    pub fn length(&self) -> usize {
        self.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mult(&self) -> &[Matrix] {
        &self.mult
    }

    /// Coefficient of `b_k` in `b_i * b_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.mult[i].get(k, j)
    }

    /// Left multiplication by the element with coordinates `x`.
    pub fn mul_matrix(&self, x: &[Scalar]) -> Matrix {
        let f = self.field;
        let n = self.dim();
        let mut acc = Matrix::zeros(f, n, n);
        for (c, m) in x.iter().zip(&self.mult) {
            if !f.is_zero(c) {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mul_matrix(x).apply(y)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn maximal_ideal(&self) -> Subspace {
        let idx: Vec<usize> = (1..self.dim()).collect();
        Subspace::coordinate(self.field, self.dim(), &idx)
    }

    /// `m^2` as a subspace of `A`.
    pub fn maximal_ideal_squared(&self) -> Subspace {
        let n = self.dim();
        let mut v = Vec::new();
        for i in 1..n {
            for j in i..n {
                v.push(self.mult[i].column(j));
            }
        }
        Subspace::span(self.field, n, &v)
    }

    /// `dim m/m^2`, the minimal number of algebra generators of `m`.
    pub fn embedding_dim(&self) -> usize {
        self.dim() - 1 - self.maximal_ideal_squared().dim()
    }

    /// Indices of basis elements forming a minimal generating set of `m` modulo `m^2`.
    pub fn generator_indices(&self) -> Vec<usize> {
        let mut span = self.maximal_ideal_squared();
        let mut picked = Vec::new();
        for i in 1..self.dim() {
            let e = self.unit_vector(i);
            if !span.contains(&e) {
                span = span
                    .sum(&Subspace::span(self.field, self.dim(), &[e]))
                    .expect("same ambient");
                picked.push(i);
            }
        }
        picked
    }

    /// True when the subspace is closed under multiplication by every basis element.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.mult.iter().skip(1).all(|m| s.is_invariant(m))
    }

    /// Ideal generated by the given elements.
    pub fn ideal_generated(&self, elems: &[Vec<Scalar>]) -> Subspace {
        let mut v = Vec::new();
        for x in elems {
            for m in &self.mult {
                v.push(m.apply(x));
            }
        }
        Subspace::span(self.field, self.dim(), &v)
    }

    /// The generated algebra of the regular representation on the chosen
    /// generators; its relations present the algebra.
    pub fn presentation(&self) -> GeneratedAlgebra {
        let idx = self.generator_indices();
        let named = idx
            .iter()
            .map(|&i| (self.labels[i].clone(), self.mult[i].clone()))
            .collect();
        let act =
            build_action(self.field, self.dim(), named).expect("left multiplications commute");
        let gen = generate_algebra(&act);
        assert_eq!(
            gen.dim(),
            self.dim(),
            "generators of m/m^2 generate the algebra"
        );
        gen
    }

    pub fn into_shared(self) -> Arc<LocalAlgebra> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn presets_have_expected_lengths() {
        let expect = [
            ("k", 1),
            ("s2", 2),
            ("s4", 4),
            ("st2", 3),
            ("st_sq", 4),
            ("s3t", 4),
            ("m2_3", 4),
            ("m2_4", 5),
        ];
        for (name, len) in expect {
            let a = LocalAlgebra::preset(name, f2()).unwrap();
            assert_eq!(a.length(), len, "{name}");
            a.validate().unwrap();
        }
        assert!(matches!(
            LocalAlgebra::preset("nope", f2()),
            Err(ModError::UnknownPreset(_))
        ));
    }

    #[test]
    fn monomial_labels_are_ordered() {
        let a = LocalAlgebra::preset("st_sq", FieldSpec::Rationals).unwrap();
        assert_eq!(a.labels(), &["1", "s", "t", "st"]);
        assert_eq!(a.embedding_dim(), 2);
        assert_eq!(a.generator_indices(), vec![1, 2]);
    }

    #[test]
    fn structure_constants_are_checked() {
        let f = FieldSpec::Rationals;
        let z = f.zero();
        let o = f.one();
        // k[s]/(s^2)
        let good = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        assert!(
            LocalAlgebra::from_structure_constants(f, vec!["1".into(), "s".into()], &good).is_ok()
        );
        // s^2 = 1 is not local
        let bad = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
        ];
        assert!(
            LocalAlgebra::from_structure_constants(f, vec!["1".into(), "s".into()], &bad).is_err()
        );
    }

    #[test]
    fn presentation_relations_for_s4() {
        let a = LocalAlgebra::preset("s4", f2()).unwrap();
        let p = a.presentation();
        assert_eq!(p.relation_strings(), vec!["s^4 = 0"]);
    }
}
