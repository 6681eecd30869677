//! Unital algebras generated by commuting matrices.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::exactlin::{kernel_of, FieldSpec, IndependentSet, Matrix, Scalar, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generators `{first}` and `{second}` do not commute (column {column} differs)")]
    NonCommuting {
        first: String,
        second: String,
        column: usize,
    },
    #[error("generator `{0}` is not a {1}x{1} matrix")]
    BadShape(String, usize),
    #[error("generator `{0}` has entries outside the field")]
    WrongField(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("the module must have positive dimension")]
    EmptyModule,
}

/// A vector space `k^dim` with named, pairwise commuting endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingAction {
    field: FieldSpec,
    dim: usize,
    names: Vec<String>,
    generators: Vec<Matrix>,
}

/// Validates shapes and exact pairwise commutation.
pub fn build_action(
    field: FieldSpec,
    dim: usize,
    named: Vec<(String, Matrix)>,
) -> Result<CommutingAction, AlgebraError> {
    if dim == 0 {
        return Err(AlgebraError::EmptyModule);
    }
    let mut seen = HashSet::new();
    for (name, m) in &named {
        if !seen.insert(name.clone()) {
            return Err(AlgebraError::DuplicateName(name.clone()));
        }
        if m.rows() != dim || m.cols() != dim {
            return Err(AlgebraError::BadShape(name.clone(), dim));
        }
        if m.field() != field {
            return Err(AlgebraError::WrongField(name.clone()));
        }
    }
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            if let Some(column) = named[i].1.commutator_witness(&named[j].1) {
                return Err(AlgebraError::NonCommuting {
                    first: named[i].0.clone(),
                    second: named[j].0.clone(),
                    column,
                });
            }
        }
    }
    let (names, generators) = named.into_iter().unzip();
    Ok(CommutingAction {
        field,
        dim,
        names,
        generators,
    })
}

impl CommutingAction {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Matrix> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.generators[i])
    }

    /// Evaluates the monomial with the given exponent vector.
    pub fn evaluate(&self, exponents: &[u32]) -> Matrix {
        assert_eq!(exponents.len(), self.generators.len());
        let mut acc = Matrix::identity(self.field, self.dim);
        for (g, &e) in self.generators.iter().zip(exponents) {
            for _ in 0..e {
                acc = g.mul(&acc);
            }
        }
        acc
    }

    pub fn format_monomial(&self, exponents: &[u32]) -> String {
        format_monomial(&self.names, exponents)
    }
}

/// Renders `a^2b` when every name is one character, `e13*e24^2` otherwise.
pub fn format_monomial(names: &[String], exponents: &[u32]) -> String {
    let short = names.iter().all(|n| n.chars().count() == 1);
    let parts: Vec<String> = names
        .iter()
        .zip(exponents)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| {
            if e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else if short {
        parts.concat()
    } else {
        parts.join("*")
    }
}

/// A monomial that turned out dependent, with its expansion in the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub word: Vec<u32>,
    pub coordinates: Vec<Scalar>,
}

/// Basis of the unital algebra generated by a [`CommutingAction`].
#[derive(Clone, Debug)]
pub struct GeneratedAlgebra {
    action: CommutingAction,
    basis: Vec<Matrix>,
    labels: Vec<Vec<u32>>,
    relations: Vec<Relation>,
    span: IndependentSet,
}

/// Breadth-first monomial closure starting from the identity.
///
/// Words are visited by degree, then by the order in which their parent entered
/// the basis, then by generator index, so each label is the first word found
/// for its basis element.
pub fn generate_algebra(action: &CommutingAction) -> GeneratedAlgebra {
    let f = action.field;
    let n = action.dim;
    let g = action.generators.len();
    let mut span = IndependentSet::new(f, n * n);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut relations = Vec::new();
    let mut tried: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();

    let id = Matrix::identity(f, n);
    span.insert(id.flatten()).expect("identity is nonzero");
    tried.insert(vec![0; g]);
    basis.push(id);
    labels.push(vec![0; g]);
    queue.push_back(0usize);

    while let Some(idx) = queue.pop_front() {
        for (gi, gen) in action.generators.iter().enumerate() {
            let mut word = labels[idx].clone();
            word[gi] += 1;
            if !tried.insert(word.clone()) {
                continue;
            }
            let product = gen.mul(&basis[idx]);
            match span.insert(product.flatten()) {
                Ok(_) => {
                    basis.push(product);
                    labels.push(word);
                    queue.push_back(basis.len() - 1);
                }
                Err(coordinates) => relations.push(Relation { word, coordinates }),
            }
        }
    }
    GeneratedAlgebra {
        action: action.clone(),
        basis,
        labels,
        relations,
        span,
    }
}

impl GeneratedAlgebra {
    pub fn action(&self) -> &CommutingAction {
        &self.action
    }

    pub fn field(&self) -> FieldSpec {
        self.action.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels
            .iter()
            .map(|w| self.action.format_monomial(w))
            .collect()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Coordinates of a matrix in the basis, if it lies in the algebra.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        self.span.coordinates(m.flatten())
    }

    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        let f = self.field();
        let n = self.action.dim;
        let mut acc = Matrix::zeros(f, n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !f.is_zero(c) {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Printable relations such as `a^2 = bc` or `ab = 0`.
    ///
    /// A relation equating two monomials is printed with the monomial that
    /// involves fewer generators on the left.
    pub fn relation_strings(&self) -> Vec<String> {
        let f = self.field();
        self.relations
            .iter()
            .map(|r| {
                let lhs = self.action.format_monomial(&r.word);
                let terms: Vec<(usize, &Scalar)> = r
                    .coordinates
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .collect();
                if terms.is_empty() {
                    return format!("{lhs} = 0");
                }
                if terms.len() == 1 && f.is_one(terms[0].1) {
                    let other = &self.labels[terms[0].0];
                    let support = |w: &[u32]| w.iter().filter(|&&e| e > 0).count();
                    let rhs = self.action.format_monomial(other);
                    return if support(other) < support(&r.word) {
                        format!("{rhs} = {lhs}")
                    } else {
                        format!("{lhs} = {rhs}")
                    };
                }
                let mut rhs = String::new();
                for (k, (i, c)) in terms.iter().enumerate() {
                    let label = self.action.format_monomial(&self.labels[*i]);
                    let neg = c.is_negative();
                    let abs = if neg { f.neg(c) } else { (*c).clone() };
                    if k == 0 {
                        if neg {
                            rhs.push('-');
                        }
                    } else {
                        rhs.push_str(if neg { " - " } else { " + " });
                    }
                    if f.is_one(&abs) {
                        rhs.push_str(&label);
                    } else if label == "1" {
                        rhs.push_str(&abs.to_string());
                    } else {
                        rhs.push_str(&format!("{abs}*{label}"));
                    }
                }
                format!("{lhs} = {rhs}")
            })
            .collect()
    }

    /// Elements of the algebra killing every vector of `sub`.
    pub fn annihilator(&self, sub: &Subspace) -> AnnihilatorReport {
        let f = self.field();
        let n = self.action.dim;
        assert_eq!(sub.ambient(), n);
        let rows = n * sub.dim();
        let mut map = Matrix::zeros(f, rows, self.dim());
        for (i, b) in self.basis.iter().enumerate() {
            for (j, v) in sub.basis().iter().enumerate() {
                for (r, x) in b.apply(v).into_iter().enumerate() {
                    map.set(j * n + r, i, x);
                }
            }
        }
        let kernel = kernel_of(&map);
        AnnihilatorReport {
            annihilator_dim: kernel.dim(),
            faithful: kernel.is_zero(),
            witness: kernel.basis().first().cloned(),
            annihilator: kernel,
        }
    }
}

/// Annihilator of a subspace of `M` inside the generated algebra, in basis coordinates.
#[derive(Clone, Debug)]
pub struct AnnihilatorReport {
    pub annihilator_dim: usize,
    /// True when only zero kills the subspace.
    pub faithful: bool,
    pub witness: Option<Vec<Scalar>>,
    pub annihilator: Subspace,
}

/// True when `f^n` is a linear combination of `1, f, ..., f^(n-1)`.
pub fn cayley_hamilton_check(f: &Matrix, n: usize) -> bool {
    assert!(f.is_square());
    let field = f.field();
    let d = f.rows();
    let mut span = IndependentSet::new(field, d * d);
    let mut power = Matrix::identity(field, d);
    for _ in 0..n {
        // Dependence among lower powers is harmless; only the last test matters.
        let _ = span.insert(power.flatten());
        power = f.mul(&power);
    }
    span.contains(power.flatten())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn units(field: FieldSpec) -> CommutingAction {
        let named = [(0, 2), (0, 3), (1, 2), (1, 3)]
            .iter()
            .map(|&(i, j)| (format!("e{}{}", i + 1, j + 1), Matrix::unit(field, 4, i, j)))
            .collect();
        build_action(field, 4, named).unwrap()
    }

    #[test]
    fn matrix_units_give_dimension_five() {
        let alg = generate_algebra(&units(f2()));
        assert_eq!(alg.dim(), 5);
        assert_eq!(alg.label_strings(), vec!["1", "e13", "e14", "e23", "e24"]);
        assert!(alg.relation_strings().iter().all(|r| r.ends_with("= 0")));
    }

    #[test]
    fn identity_generates_scalars() {
        let q = FieldSpec::Rationals;
        let a = build_action(q, 3, vec![("i".into(), Matrix::identity(q, 3))]).unwrap();
        assert_eq!(generate_algebra(&a).dim(), 1);
    }

    #[test]
    fn jordan_and_identity_commute() {
        let q = FieldSpec::Rationals;
        let j2 = Matrix::from_i64(q, &[vec![0, 1], vec![0, 0]]);
        assert!(build_action(
            q,
            2,
            vec![("j".into(), j2), ("i".into(), Matrix::identity(q, 2))]
        )
        .is_ok());
    }

    #[test]
    fn off_diagonal_units_do_not_commute() {
        let q = FieldSpec::Rationals;
        let err = build_action(
            q,
            2,
            vec![
                ("e12".into(), Matrix::unit(q, 2, 0, 1)),
                ("e21".into(), Matrix::unit(q, 2, 1, 0)),
            ],
        )
        .unwrap_err();
        // e12*e21 = e11 and e21*e12 = e22 differ first in column 0.
        assert_eq!(
            err,
            AlgebraError::NonCommuting {
                first: "e12".into(),
                second: "e21".into(),
                column: 0
            }
        );
    }

    #[test]
    fn cayley_hamilton_cases() {
        let q = FieldSpec::Rationals;
        let m = Matrix::from_i64(q, &[vec![1, 2, 0], vec![3, -1, 4], vec![0, 5, 2]]);
        assert!(cayley_hamilton_check(&m, 3));
        let j2 = Matrix::from_i64(q, &[vec![0, 1], vec![0, 0]]);
        let jj = j2.direct_sum(&j2);
        assert!(cayley_hamilton_check(&jj, 2));
        let diag = Matrix::from_i64(q, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
        assert!(!cayley_hamilton_check(&diag, 2));
    }

    #[test]
    fn annihilators() {
        let alg = generate_algebra(&units(f2()));
        let full = Subspace::full(f2(), 4);
        let r = alg.annihilator(&full);
        assert!(r.faithful);
        assert_eq!(r.annihilator_dim, 0);
        let zero = Subspace::zero(f2(), 4);
        assert_eq!(alg.annihilator(&zero).annihilator_dim, 5);
    }

    #[test]
    fn monomial_formatting() {
        let short: Vec<String> = vec!["a".into(), "b".into()];
        assert_eq!(format_monomial(&short, &[2, 1]), "a^2b");
        let long: Vec<String> = vec!["e13".into(), "e24".into()];
        assert_eq!(format_monomial(&long, &[1, 1]), "e13*e24");
        assert_eq!(format_monomial(&long, &[0, 0]), "1");
    }
}
