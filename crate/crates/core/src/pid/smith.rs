use super::{PidSpec, RingElem};

/// A matrix over a PID as rows.
pub type PidMatrix = Vec<Vec<RingElem>>;

/// `left * input * right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Entries on the diagonal, each dividing the next; nonzero ones are canonical.
    pub diagonal: Vec<RingElem>,
    pub left: PidMatrix,
    pub right: PidMatrix,
}

pub fn identity(pid: PidSpec, n: usize) -> PidMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { pid.one() } else { pid.zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(pid: PidSpec, a: &PidMatrix, b: &PidMatrix) -> PidMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = pid.zero();
                    for (k, x) in row.iter().enumerate() {
                        if !pid.is_zero(x) && !pid.is_zero(&b[k][j]) {
                            acc = pid.add(&acc, &pid.mul(x, &b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(pid: PidSpec, m: &PidMatrix) -> RingElem {
    let n = m.len();
    if n == 0 {
        return pid.one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = pid.one();
    for k in 0..n - 1 {
        if pid.is_zero(&a[k][k]) {
            match (k + 1..n).find(|&i| !pid.is_zero(&a[i][k])) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return pid.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pid.sub(&pid.mul(&a[i][j], &a[k][k]), &pid.mul(&a[i][k], &a[k][j]));
                a[i][j] = pid.exact_div(&num, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        pid.neg(&d)
    } else {
        d
    }
}

struct Work<'a> {
    pid: PidSpec,
    a: &'a mut PidMatrix,
    u: &'a mut PidMatrix,
    v: &'a mut PidMatrix,
}

impl Work<'_> {
    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &RingElem) {
        let pid = self.pid;
        for m in [&mut *self.a, &mut *self.u] {
            let src = m[t].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                if !pid.is_zero(y) {
                    *x = pid.sub(x, &pid.mul(q, y));
                }
            }
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &RingElem) {
        let pid = self.pid;
        for m in [&mut *self.a, &mut *self.v] {
            for row in m.iter_mut() {
                if !pid.is_zero(&row[t]) {
                    let s = pid.mul(q, &row[t]);
                    row[j] = pid.sub(&row[j], &s);
                }
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for m in [&mut *self.a, &mut *self.v] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &RingElem) {
        let pid = self.pid;
        for m in [&mut *self.a, &mut *self.u] {
            for x in m[i].iter_mut() {
                *x = pid.mul(x, c);
            }
        }
    }
}

/// Smith normal form with transforms.
///
/// Pivot rule: smallest size (absolute value or degree), ties broken by the
/// leftmost column and then the topmost row.
pub fn smith(pid: PidSpec, input: &PidMatrix) -> SmithForm {
    let rows = input.len();
    let cols = input.first().map_or(0, Vec::len);
    let mut a = input.clone();
    let mut u = identity(pid, rows);
    let mut v = identity(pid, cols);
    let mut w = Work {
        pid,
        a: &mut a,
        u: &mut u,
        v: &mut v,
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for j in t..cols {
                for i in t..rows {
                    let x = &w.a[i][j];
                    if pid.is_zero(x) {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => pid.cmp_size(x, &w.a[bi][bj]).is_lt(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let pivot = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if pid.is_zero(&w.a[i][t]) {
                    continue;
                }
                let (q, r) = pid.div_rem(&w.a[i][t], &pivot);
                w.row_sub(i, t, &q);
                dirty |= !pid.is_zero(&r);
            }
            for j in t + 1..cols {
                if pid.is_zero(&w.a[t][j]) {
                    continue;
                }
                let (q, r) = pid.div_rem(&w.a[t][j], &pivot);
                w.col_sub(j, t, &q);
                dirty |= !pid.is_zero(&r);
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !pid.divides(&pivot, &w.a[i][j]));
            match offender {
                Some((i, _)) => {
                    let minus_one = pid.from_i64(-1);
                    w.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if !pid.is_zero(&w.a[t][t]) {
            let (_, unit) = pid.normalize(&w.a[t][t]);
            if !pid.is_zero(&unit) && unit != pid.one() {
                w.scale_row(t, &unit);
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    SmithForm {
        diagonal,
        left: u,
        right: v,
    }
}
