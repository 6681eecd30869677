use std::fmt;

use super::{FieldSpec, LinError, Scalar};

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Matrix with a single `1` at `(i, j)`.
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        m.set(i, j, field.one());
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self, LinError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinError::Ragged);
            }
            for x in row {
                if !field.contains(&x) {
                    return Err(LinError::FieldMismatch);
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged integer matrix");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entries; used to treat matrices as vectors of length `rows*cols`.
    pub fn flatten(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.mul_add(&out.data[idx], a, b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.mul_add(&acc, a, x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Index of the first column where `self*other` and `other*self` differ.
    pub fn commutator_witness(&self, other: &Matrix) -> Option<usize> {
        let ab = self.mul(other);
        let ba = other.mul(self);
        (0..self.cols).find(|&j| (0..self.rows).any(|i| ab.get(i, j) != ba.get(i, j)))
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    /// Some `x` with `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Some(x)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-reduces `rows` in place (each of length `cols`) and returns the pivot columns.
pub(crate) fn rref_rows(field: FieldSpec, rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let f = field;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for x in rows[r][c..].iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = f.neg(&row[c]);
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &factor, y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row-echelon form and rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(m.field, &mut rows, m.cols);
    let rank = pivots.len();
    let data = rows.into_iter().flatten().collect();
    (
        Matrix {
            field: m.field,
            rows: m.rows,
            cols: m.cols,
            data,
        },
        rank,
    )
}

/// Incrementally maintained set of linearly independent vectors in reduced form.
///
/// Every stored row has a unit pivot and zeros at every other stored pivot, so
/// membership tests and coordinate extraction read pivots directly. Coordinates
/// are reported with respect to the vectors in insertion order.
#[derive(Clone, Debug)]
pub struct IndependentSet {
    field: FieldSpec,
    len: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    // rows[k] = sum_i transforms[k][i] * originals[i]
    transforms: Vec<Vec<Scalar>>,
}

impl IndependentSet {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        IndependentSet {
            field,
            len,
            pivots: Vec::new(),
            rows: Vec::new(),
            transforms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let f = self.field;
        let mut rem = v.to_vec();
        let mut lambdas = Vec::with_capacity(self.rows.len());
        for (k, &p) in self.pivots.iter().enumerate() {
            let lambda = v[p].clone();
            if !f.is_zero(&lambda) {
                let neg = f.neg(&lambda);
                for (x, y) in rem.iter_mut().zip(&self.rows[k]) {
                    if !f.is_zero(y) {
                        *x = f.mul_add(x, &neg, y);
                    }
                }
            }
            lambdas.push(lambda);
        }
        (rem, lambdas)
    }

    fn combine(&self, lambdas: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut coords = vec![f.zero(); self.rows.len()];
        for (lambda, t) in lambdas.iter().zip(&self.transforms) {
            if f.is_zero(lambda) {
                continue;
            }
            for (c, x) in coords.iter_mut().zip(t) {
                if !f.is_zero(x) {
                    *c = f.mul_add(c, lambda, x);
                }
            }
        }
        coords
    }

    /// Coordinates of `v` with respect to the inserted vectors, if `v` is in their span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.len);
        let (rem, lambdas) = self.reduce(v);
        if rem.iter().all(|x| self.field.is_zero(x)) {
            Some(self.combine(&lambdas))
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let (rem, _) = self.reduce(v);
        rem.iter().all(|x| self.field.is_zero(x))
    }

    /// Inserts `v` if independent. On dependence returns its coordinates.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<usize, Vec<Scalar>> {
        assert_eq!(v.len(), self.len);
        let f = self.field;
        let (mut rem, lambdas) = self.reduce(v);
        let Some(p) = rem.iter().position(|x| !f.is_zero(x)) else {
            return Err(self.combine(&lambdas));
        };
        let n = self.rows.len();
        // new row = v - sum lambda_k rows_k, expressed over originals
        let mut t = vec![f.zero(); n + 1];
        for (lambda, tk) in lambdas.iter().zip(&self.transforms) {
            if f.is_zero(lambda) {
                continue;
            }
            let neg = f.neg(lambda);
            for (c, x) in t.iter_mut().zip(tk) {
                *c = f.mul_add(c, &neg, x);
            }
        }
        t[n] = f.one();
        let inv = f.inv(&rem[p]).expect("nonzero pivot");
        for x in rem.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for x in t.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for k in 0..n {
            let c = self.rows[k][p].clone();
            if f.is_zero(&c) {
                continue;
            }
            let neg = f.neg(&c);
            for (x, y) in self.rows[k].iter_mut().zip(&rem) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &neg, y);
                }
            }
            self.transforms[k].push(f.zero());
            for (x, y) in self.transforms[k].iter_mut().zip(&t) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &neg, y);
                }
            }
        }
        for tk in self.transforms.iter_mut() {
            tk.resize(n + 1, f.zero());
        }
        self.rows.push(rem);
        self.transforms.push(t);
        self.pivots.push(p);
        Ok(n)
    }
}
