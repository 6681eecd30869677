use super::{rref_rows, FieldSpec, LinError, Matrix, Scalar};

/// A subspace of `k^n`, stored as its reduced row-echelon basis.
///
/// The representation is canonical, so structural equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace::span(field, ambient, &Matrix::identity(field, ambient).row_vecs())
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
        for r in &rows {
            assert_eq!(
                r.len(),
                ambient,
                "vector length differs from ambient dimension"
            );
        }
        let pivots = rref_rows(field, &mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace {
            field,
            ambient,
            basis: rows,
            pivots,
        }
    }

    /// Span of the coordinate vectors `e_i` for the given indices.
    pub fn coordinate(field: FieldSpec, ambient: usize, indices: &[usize]) -> Self {
        let vecs: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace::span(field, ambient, &vecs)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots; the matching unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical coset representative of `v` modulo this subspace (zero at every pivot).
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if f.is_zero(&r[p]) {
                continue;
            }
            let c = f.neg(&r[p]);
            for (x, y) in r.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &c, y);
                }
            }
        }
        r
    }

    /// Coordinates of `v` modulo this subspace, read at the free columns.
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.free_columns()
            .into_iter()
            .map(|c| r[c].clone())
            .collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let f = self.field;
        let mut v = vec![f.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = f.mul_add(x, c, y);
            }
        }
        v
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    fn check(&self, other: &Subspace) -> Result<(), LinError> {
        if self.field != other.field {
            return Err(LinError::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(LinError::DimensionMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check(other)?;
        let mut v = self.basis.clone();
        v.extend_from_slice(&other.basis);
        Ok(Subspace::span(self.field, self.ambient, &v))
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinError> {
        self.check(other)?;
        let f = self.field;
        let n = self.ambient;
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.dim() + other.dim());
        for r in &self.basis {
            let mut row = r.clone();
            row.extend_from_slice(r);
            rows.push(row);
        }
        for r in &other.basis {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(f.zero(), n));
            rows.push(row);
        }
        let pivots = rref_rows(f, &mut rows, 2 * n);
        let vecs: Vec<Vec<Scalar>> = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(r, _)| r[n..].to_vec())
            .collect();
        Ok(Subspace::span(f, n, &vecs))
    }

    /// Image under `m` (which maps `k^ambient` to `k^rows`).
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let vecs: Vec<Vec<Scalar>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(self.field, m.rows(), &vecs)
    }

    /// True when `m` maps the subspace into itself.
    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.apply(v)))
    }

    /// The basis as the rows of a matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_flat(
            self.field,
            self.dim(),
            self.ambient,
            self.basis.iter().flatten().cloned().collect(),
        )
    }
}

/// Null space of `m`, as a subspace of `k^cols`.
pub fn kernel_of(m: &Matrix) -> Subspace {
    let f = m.field();
    let n = m.cols();
    let mut rows = m.row_vecs();
    let pivots = rref_rows(f, &mut rows, n);
    let mut is_pivot = vec![None; n];
    for (r, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(r);
    }
    let mut vecs = Vec::new();
    for free in (0..n).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![f.zero(); n];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&rows[r][free]);
        }
        vecs.push(v);
    }
    Subspace::span(f, n, &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(f: FieldSpec, rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn complementary_lines() {
        let f = FieldSpec::Rationals;
        let a = Subspace::coordinate(f, 2, &[0]);
        let b = Subspace::coordinate(f, 2, &[1]);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(f, 2));
        assert!(a.intersection(&b).unwrap().is_zero());
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
    }

    #[test]
    fn f2_lines_by_enumeration() {
        let f = FieldSpec::prime(2).unwrap();
        let a = Subspace::span(f, 3, &vecs(f, &[&[1, 1, 0]]));
        let b = Subspace::span(f, 3, &vecs(f, &[&[0, 1, 1]]));
        // Oracle: list all 8 vectors and test membership in both spans directly.
        let mut common = 0;
        for bits in 0..8i64 {
            let v: Vec<i64> = (0..3).map(|i| (bits >> i) & 1).collect();
            let in_a = v == [0, 0, 0] || v == [1, 1, 0];
            let in_b = v == [0, 0, 0] || v == [0, 1, 1];
            let w = vecs(f, &[&v])[0].clone();
            assert_eq!(a.contains(&w), in_a);
            assert_eq!(b.contains(&w), in_b);
            if in_a && in_b {
                common += 1;
            }
        }
        assert_eq!(common, 1);
        assert!(a.intersection(&b).unwrap().is_zero());
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn mismatch_is_error() {
        let f = FieldSpec::Rationals;
        let a = Subspace::zero(f, 2);
        let b = Subspace::zero(f, 3);
        assert!(matches!(a.sum(&b), Err(LinError::DimensionMismatch(2, 3))));
    }

    #[test]
    fn kernels() {
        let f = FieldSpec::Rationals;
        assert!(kernel_of(&Matrix::identity(f, 3)).is_zero());
        assert_eq!(kernel_of(&Matrix::zeros(f, 3, 3)), Subspace::full(f, 3));
        let j3 = Matrix::from_i64(f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(kernel_of(&j3), Subspace::coordinate(f, 3, &[0]));
    }

    #[test]
    fn quotient_coordinates_are_canonical() {
        let f = FieldSpec::Rationals;
        let w = Subspace::span(f, 3, &vecs(f, &[&[1, 1, 0]]));
        let u = vecs(f, &[&[2, 3, 5]])[0].clone();
        let shifted = vecs(f, &[&[5, 6, 5]])[0].clone();
        assert_eq!(w.quotient_coordinates(&u), w.quotient_coordinates(&shifted));
        assert_eq!(w.free_columns(), vec![1, 2]);
    }
}
