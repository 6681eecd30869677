use std::sync::Arc;

use crate::exactlin::{kernel_of, FieldSpec, IndependentSet, Matrix, Scalar, Subspace};

use super::{LocalAlgebra, ModError};

/// A finite-dimensional module over a [`LocalAlgebra`], given by one action
/// matrix per algebra basis element (`action[0]` is the identity).
#[derive(Clone, Debug)]
pub struct ModuleOverLocal {
    algebra: Arc<LocalAlgebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl ModuleOverLocal {
    /// Checks unitality and multiplicativity against the structure constants.
    pub fn new(
        algebra: Arc<LocalAlgebra>,
        dim: usize,
        action: Vec<Matrix>,
    ) -> Result<Self, ModError> {
        let m = ModuleOverLocal {
            algebra,
            dim,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        algebra: Arc<LocalAlgebra>,
        dim: usize,
        action: Vec<Matrix>,
    ) -> Self {
        ModuleOverLocal {
            algebra,
            dim,
            action,
        }
    }

    pub fn validate(&self) -> Result<(), ModError> {
        let a = &self.algebra;
        let n = a.dim();
        if self.action.len() != n {
            return Err(ModError::Invalid(format!(
                "{} action matrices for an algebra of dimension {n}",
                self.action.len()
            )));
        }
        for m in &self.action {
            if m.rows() != self.dim || m.cols() != self.dim || m.field() != a.field() {
                return Err(ModError::Invalid(
                    "action matrix has the wrong shape or field".into(),
                ));
            }
        }
        if !self.action[0].is_identity() {
            return Err(ModError::Invalid(
                "the identity does not act as the identity".into(),
            ));
        }
        for i in 1..n {
            for j in i..n {
                let lhs = self.action[i].mul(&self.action[j]);
                if lhs != self.act_by(&a.mult()[i].column(j)) {
                    return Err(ModError::Invalid(format!(
                        "action is not multiplicative at {} * {}",
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn regular(algebra: Arc<LocalAlgebra>) -> Self {
        let action = algebra.mult().to_vec();
        let dim = algebra.dim();
        ModuleOverLocal {
            algebra,
            dim,
            action,
        }
    }

    /// The residue field `k = A/m`.
    pub fn simple(algebra: Arc<LocalAlgebra>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim())
            .map(|i| {
                if i == 0 {
                    Matrix::identity(f, 1)
                } else {
                    Matrix::zeros(f, 1, 1)
                }
            })
            .collect();
        ModuleOverLocal {
            algebra,
            dim: 1,
            action,
        }
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length; equal to the dimension since the residue field is `k`.
    pub fn length(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Matrix by which the algebra element with coordinates `x` acts.
    pub fn act_by(&self, x: &[Scalar]) -> Matrix {
        let f = self.field();
        let mut acc = Matrix::zeros(f, self.dim, self.dim);
        for (c, m) in x.iter().zip(&self.action) {
            if !f.is_zero(c) {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    fn radical_action(&self) -> Matrix {
        let f = self.field();
        let mut stacked = Matrix::zeros(f, 0, self.dim);
        for m in self.action.iter().skip(1) {
            stacked = stacked.stack(m);
        }
        stacked
    }

    /// `{v : m v = 0}`.
    pub fn socle(&self) -> Subspace {
        if self.action.len() == 1 {
            return Subspace::full(self.field(), self.dim);
        }
        kernel_of(&self.radical_action())
    }

    pub fn socle_length(&self) -> usize {
        self.socle().dim()
    }

    /// `mM`.
    pub fn radical(&self) -> Subspace {
        self.radical_of(&Subspace::full(self.field(), self.dim))
    }

    /// `m N` for a subspace `N`.
    pub fn radical_of(&self, sub: &Subspace) -> Subspace {
        let mut v = Vec::new();
        for m in self.action.iter().skip(1) {
            for b in sub.basis() {
                v.push(m.apply(b));
            }
        }
        Subspace::span(self.field(), self.dim, &v)
    }

    /// Dimensions of `M, mM, m^2 M, ...` down to zero.
    pub fn radical_layers(&self) -> Vec<usize> {
        let mut cur = Subspace::full(self.field(), self.dim);
        let mut out = vec![cur.dim()];
        while !cur.is_zero() {
            let next = self.radical_of(&cur);
            if next.dim() == cur.dim() {
                break;
            }
            cur = next;
            out.push(cur.dim());
        }
        out
    }

    /// `dim M/mM`, the minimal number of generators.
    pub fn min_generators(&self) -> usize {
        self.dim - self.radical().dim()
    }

    pub fn is_cyclic(&self) -> bool {
        self.min_generators() == 1
    }

    pub fn is_cocyclic(&self) -> bool {
        self.socle_length() == 1
    }

    /// True when only the zero element of the algebra acts as zero.
    pub fn is_faithful(&self) -> bool {
        let mut s = IndependentSet::new(self.field(), self.dim * self.dim);
        self.action.iter().all(|m| s.insert(m.flatten()).is_ok())
    }

    /// Annihilator of a subspace, as an ideal in algebra coordinates.
    pub fn annihilator_of(&self, sub: &Subspace) -> Subspace {
        let f = self.field();
        let n = self.algebra.dim();
        let mut map = Matrix::zeros(f, self.dim * sub.dim(), n);
        for (k, a) in self.action.iter().enumerate() {
            for (j, v) in sub.basis().iter().enumerate() {
                for (r, x) in a.apply(v).into_iter().enumerate() {
                    map.set(j * self.dim + r, k, x);
                }
            }
        }
        kernel_of(&map)
    }

    pub fn annihilator(&self) -> Subspace {
        self.annihilator_of(&Subspace::full(self.field(), self.dim))
    }

    pub fn annihilator_of_vector(&self, v: &[Scalar]) -> Subspace {
        self.annihilator_of(&Subspace::span(self.field(), self.dim, &[v.to_vec()]))
    }

    /// `A v`.
    pub fn cyclic_submodule(&self, v: &[Scalar]) -> Subspace {
        let vecs: Vec<Vec<Scalar>> = self.action.iter().map(|m| m.apply(v)).collect();
        Subspace::span(self.field(), self.dim, &vecs)
    }

    /// Submodule generated by a set of vectors.
    pub fn submodule_generated(&self, vs: &[Vec<Scalar>]) -> Subspace {
        let mut vecs = Vec::new();
        for v in vs {
            for m in &self.action {
                vecs.push(m.apply(v));
            }
        }
        Subspace::span(self.field(), self.dim, &vecs)
    }

    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        self.action.iter().skip(1).all(|m| sub.is_invariant(m))
    }

    /// The submodule `sub` as a module in its echelon basis.
    pub fn restrict(&self, sub: &Subspace) -> Result<ModuleOverLocal, ModError> {
        if !self.is_submodule(sub) {
            return Err(ModError::NotSubmodule);
        }
        let f = self.field();
        let d = sub.dim();
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols: Vec<Vec<Scalar>> = sub
                    .basis()
                    .iter()
                    .map(|b| sub.coordinates(&m.apply(b)).expect("invariant subspace"))
                    .collect();
                Matrix::from_columns(f, d, &cols)
            })
            .collect();
        Ok(ModuleOverLocal::new_unchecked(
            self.algebra.clone(),
            d,
            action,
        ))
    }

    /// `M / sub`, with coordinates at the free columns of `sub`.
    pub fn quotient(&self, sub: &Subspace) -> Result<ModuleOverLocal, ModError> {
        if !self.is_submodule(sub) {
            return Err(ModError::NotSubmodule);
        }
        let f = self.field();
        let free = sub.free_columns();
        let d = free.len();
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols: Vec<Vec<Scalar>> = free
                    .iter()
                    .map(|&c| sub.quotient_coordinates(&m.column(c)))
                    .collect();
                Matrix::from_columns(f, d, &cols)
            })
            .collect();
        Ok(ModuleOverLocal::new_unchecked(
            self.algebra.clone(),
            d,
            action,
        ))
    }

    /// Quotient map `M -> M/sub` as a matrix.
    pub fn quotient_map(&self, sub: &Subspace) -> Matrix {
        let f = self.field();
        let free = sub.free_columns();
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|c| {
                let mut e = vec![f.zero(); self.dim];
                e[c] = f.one();
                sub.quotient_coordinates(&e)
            })
            .collect();
        Matrix::from_columns(f, free.len(), &cols)
    }

    /// `Hom_k(M, k)` with the transposed action.
    pub fn dual(&self) -> ModuleOverLocal {
        let action = self.action.iter().map(Matrix::transpose).collect();
        ModuleOverLocal::new_unchecked(self.algebra.clone(), self.dim, action)
    }

    pub fn direct_sum(&self, other: &ModuleOverLocal) -> ModuleOverLocal {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        ModuleOverLocal::new_unchecked(self.algebra.clone(), self.dim + other.dim, action)
    }

    /// Basis of `Hom_A(self, other)` as matrices `other.dim x self.dim`.
    pub fn hom_basis(&self, other: &ModuleOverLocal) -> Vec<Matrix> {
        let f = self.field();
        let (p, q) = (self.dim, other.dim);
        // Unknown X (q x p), flattened row-major; equations X A_k - B_k X = 0.
        let mut rows = Vec::new();
        for (a, b) in self.action.iter().zip(&other.action).skip(1) {
            for i in 0..q {
                for j in 0..p {
                    let mut eq = vec![f.zero(); q * p];
                    for l in 0..p {
                        // (X A)_{ij} = sum_l X_{il} A_{lj}
                        let c = a.get(l, j);
                        if !f.is_zero(c) {
                            eq[i * p + l] = f.add(&eq[i * p + l], c);
                        }
                    }
                    for l in 0..q {
                        // (B X)_{ij} = sum_l B_{il} X_{lj}
                        let c = b.get(i, l);
                        if !f.is_zero(c) {
                            eq[l * p + j] = f.sub(&eq[l * p + j], c);
                        }
                    }
                    rows.push(eq);
                }
            }
        }
        let system = if rows.is_empty() {
            Matrix::zeros(f, 1, q * p)
        } else {
            Matrix::from_rows(f, rows).expect("rectangular system")
        };
        kernel_of(&system)
            .basis()
            .iter()
            .map(|v| Matrix::from_flat(f, q, p, v.clone()))
            .collect()
    }

    /// Isomorphism test by exhaustive search of `Hom` over a finite field.
    ///
    /// Returns `None` when the search space exceeds `limit` elements or the
    /// field is infinite.
    pub fn is_isomorphic(&self, other: &ModuleOverLocal, limit: u64) -> Option<bool> {
        if self.dim != other.dim {
            return Some(false);
        }
        let basis = self.hom_basis(other);
        let p = self.field().size()?;
        let total = p.checked_pow(basis.len() as u32)?;
        if total > limit {
            return None;
        }
        let f = self.field();
        let elems = f.elements()?;
        for idx in 0..total {
            let mut x = Matrix::zeros(f, self.dim, self.dim);
            let mut rest = idx;
            for b in &basis {
                let c = &elems[(rest % p) as usize];
                rest /= p;
                if !f.is_zero(c) {
                    x = x.add(&b.scale(c));
                }
            }
            if x.rank() == self.dim {
                return Some(true);
            }
        }
        Some(false)
    }
}
