use std::sync::Arc;

use serde::Serialize;

use crate::exactlin::{kernel_of, Matrix, Scalar, Subspace};

use super::{LocalAlgebra, ModError, ModuleOverLocal};

/// Data for gluing `A/I1` and `A/I2` along `J1/I1 ≅ J2/I2`.
///
/// Ideals are subspaces of `A` in basis coordinates. `iso` acts on coordinates
/// with respect to the echelon bases of `J1/I1` and `J2/I2`, both taken inside
/// the quotient coordinates of `A/I1` and `A/I2`.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub i1: Subspace,
    pub i2: Subspace,
    pub j1: Subspace,
    pub j2: Subspace,
    pub iso: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlueLengths {
    pub algebra: usize,
    pub first_quotient: usize,
    pub second_quotient: usize,
    pub identified: usize,
    pub module: usize,
}

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub module: ModuleOverLocal,
    pub lengths: GlueLengths,
    pub faithful: bool,
    /// `lt(M) < lt(A)` for a faithful `M`.
    pub counterexample: bool,
}

/// `J/I` inside the quotient coordinates of `A/I`.
fn sub_quotient(i: &Subspace, j: &Subspace) -> Subspace {
    let free = i.free_columns().len();
    let v: Vec<Vec<Scalar>> = j
        .basis()
        .iter()
        .map(|b| i.quotient_coordinates(b))
        .collect();
    Subspace::span(i.field(), free, &v)
}

/// Canonical lift of quotient coordinates of `A/I` back to `A`.
fn lift(i: &Subspace, coords: &[Scalar]) -> Vec<Scalar> {
    let f = i.field();
    let mut v = vec![f.zero(); i.ambient()];
    for (c, x) in i.free_columns().into_iter().zip(coords) {
        v[c] = x.clone();
    }
    v
}

pub fn glue(a: &Arc<LocalAlgebra>, spec: &GlueSpec) -> Result<GlueResult, ModError> {
    let f = a.field();
    for (name, s) in [
        ("I1", &spec.i1),
        ("I2", &spec.i2),
        ("J1", &spec.j1),
        ("J2", &spec.j2),
    ] {
        if s.ambient() != a.dim() || !a.is_ideal(s) {
            return Err(ModError::NotIdeal(name.to_string()));
        }
    }
    if !spec.j1.contains_subspace(&spec.i1) || !spec.j2.contains_subspace(&spec.i2) {
        return Err(ModError::Invalid("each I must lie inside its J".into()));
    }
    if !spec.i1.intersection(&spec.i2)?.is_zero() {
        return Err(ModError::IdealsIntersect);
    }
    let reg = ModuleOverLocal::regular(a.clone());
    let q1 = reg.quotient(&spec.i1)?;
    let q2 = reg.quotient(&spec.i2)?;
    let jq1 = sub_quotient(&spec.i1, &spec.j1);
    let jq2 = sub_quotient(&spec.i2, &spec.j2);
    let e = jq1.dim();
    if jq2.dim() != e || spec.iso.rows() != e || spec.iso.cols() != e || spec.iso.rank() != e {
        return Err(ModError::NotIsomorphic);
    }
    let r1 = q1.restrict(&jq1)?;
    let r2 = q2.restrict(&jq2)?;
    for (x, y) in r1.action().iter().zip(r2.action()).skip(1) {
        if spec.iso.mul(x) != y.mul(&spec.iso) {
            return Err(ModError::NotIsomorphic);
        }
    }
    let sum = q1.direct_sum(&q2);
    let (d1, d2) = (q1.dim(), q2.dim());
    let mut rels = Vec::with_capacity(e);
    for (r, u) in jq1.basis().iter().enumerate() {
        let image = jq2.combine(&spec.iso.column(r));
        let mut v = u.clone();
        v.extend(image.iter().map(|x| f.neg(x)));
        rels.push(v);
    }
    let n = Subspace::span(f, d1 + d2, &rels);
    let module = sum.quotient(&n)?;
    let faithful = module.is_faithful();
    let lengths = GlueLengths {
        algebra: a.length(),
        first_quotient: d1,
        second_quotient: d2,
        identified: e,
        module: module.length(),
    };
    let counterexample = faithful && lengths.module < lengths.algebra;
    Ok(GlueResult {
        module,
        lengths,
        faithful,
        counterexample,
    })
}

/// Columns `b_k x` for every basis element `b_k`.
fn orbit_map(m: &ModuleOverLocal, x: &[Scalar]) -> Matrix {
    let cols: Vec<Vec<Scalar>> = m.action().iter().map(|a| a.apply(x)).collect();
    Matrix::from_columns(m.field(), m.dim(), &cols)
}

/// Glue data describing `Ax + Ay` inside a module: `I = Ann`, `J = {f : f x ∈ Ax ∩ Ay}`,
/// and the isomorphism `f x = g y ↦ g`.
pub fn glue_spec_from_pair(m: &ModuleOverLocal, x: &[Scalar], y: &[Scalar]) -> GlueSpec {
    let f = m.field();
    let ax = m.cyclic_submodule(x);
    let ay = m.cyclic_submodule(y);
    let common = ax.intersection(&ay).expect("same ambient");
    let mx = orbit_map(m, x);
    let my = orbit_map(m, y);
    let i1 = kernel_of(&mx);
    let i2 = kernel_of(&my);
    let to_common = m.quotient_map(&common);
    let j1 = kernel_of(&to_common.mul(&mx));
    let j2 = kernel_of(&to_common.mul(&my));
    let jq1 = sub_quotient(&i1, &j1);
    let jq2 = sub_quotient(&i2, &j2);
    let cols: Vec<Vec<Scalar>> = jq1
        .basis()
        .iter()
        .map(|u| {
            let w = mx.apply(&lift(&i1, u));
            let g = my.solve(&w).expect("f x lies in A y");
            jq2.coordinates(&i2.quotient_coordinates(&g))
                .expect("g lies in J2")
        })
        .collect();
    let iso = Matrix::from_columns(f, jq2.dim(), &cols);
    GlueSpec {
        i1,
        i2,
        j1,
        j2,
        iso,
    }
}

/// `{f : f u ∈ I}`, the annihilator of the class of `u` in `A/I`.
pub fn quotient_annihilator(a: &LocalAlgebra, i: &Subspace, u: &[Scalar]) -> Subspace {
    let f = a.field();
    let free = i.free_columns().len();
    let cols: Vec<Vec<Scalar>> = a
        .mult()
        .iter()
        .map(|m| i.quotient_coordinates(&m.apply(u)))
        .collect();
    kernel_of(&Matrix::from_columns(f, free, &cols))
}

/// Glue data identifying the cyclic submodules generated by the classes of `u`
/// in `A/I1` and of `v` in `A/I2`, sending `f u ↦ f v`.
pub fn cyclic_identification(
    a: &LocalAlgebra,
    i1: &Subspace,
    u: &[Scalar],
    i2: &Subspace,
    v: &[Scalar],
) -> Result<GlueSpec, ModError> {
    if quotient_annihilator(a, i1, u) != quotient_annihilator(a, i2, v) {
        return Err(ModError::NotIsomorphic);
    }
    let j1 = i1.sum(&a.ideal_generated(&[u.to_vec()]))?;
    let j2 = i2.sum(&a.ideal_generated(&[v.to_vec()]))?;
    let jq1 = sub_quotient(i1, &j1);
    let jq2 = sub_quotient(i2, &j2);
    let f = a.field();
    // Orbit of u mod I1, as a map A -> A/I1.
    let ucols: Vec<Vec<Scalar>> = a
        .mult()
        .iter()
        .map(|m| i1.quotient_coordinates(&m.apply(u)))
        .collect();
    let umap = Matrix::from_columns(f, i1.free_columns().len(), &ucols);
    let cols: Vec<Vec<Scalar>> = jq1
        .basis()
        .iter()
        .map(|w| {
            let g = umap.solve(w).expect("w lies in A u");
            let image = i2.quotient_coordinates(&a.multiply(&g, v));
            jq2.coordinates(&image).expect("g v lies in J2/I2")
        })
        .collect();
    let iso = Matrix::from_columns(f, jq2.dim(), &cols);
    Ok(GlueSpec {
        i1: i1.clone(),
        i2: i2.clone(),
        j1,
        j2,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn square_zero_length_four_counterexample() {
        let a = Arc::new(LocalAlgebra::square_zero(f2(), 4).unwrap());
        let i1 = Subspace::coordinate(f2(), 5, &[1, 2]);
        let i2 = Subspace::coordinate(f2(), 5, &[3, 4]);
        let m = a.maximal_ideal();
        let spec = GlueSpec {
            i1,
            i2,
            j1: m.clone(),
            j2: m,
            iso: Matrix::identity(f2(), 2),
        };
        let r = glue(&a, &spec).unwrap();
        assert!(r.faithful);
        assert_eq!(r.lengths.first_quotient, 3);
        assert_eq!(r.lengths.identified, 2);
        assert_eq!(r.lengths.module, 4);
        assert!(r.counterexample);
        r.module.validate().unwrap();
    }

    #[test]
    fn no_identification_is_direct_sum() {
        let a = Arc::new(LocalAlgebra::square_zero(f2(), 4).unwrap());
        let z = Subspace::zero(f2(), 5);
        let spec = GlueSpec {
            i1: z.clone(),
            i2: z.clone(),
            j1: z.clone(),
            j2: z,
            iso: Matrix::identity(f2(), 0),
        };
        let r = glue(&a, &spec).unwrap();
        assert_eq!(r.lengths.module, 10);
        assert!(!r.counterexample);
    }

    #[test]
    fn intersecting_ideals_rejected() {
        let a = Arc::new(LocalAlgebra::square_zero(f2(), 4).unwrap());
        let i = Subspace::coordinate(f2(), 5, &[1]);
        let spec = GlueSpec {
            i1: i.clone(),
            i2: i.clone(),
            j1: i.clone(),
            j2: i,
            iso: Matrix::identity(f2(), 0),
        };
        assert!(matches!(glue(&a, &spec), Err(ModError::IdealsIntersect)));
    }

    #[test]
    fn non_equivariant_iso_rejected() {
        // Swapping s and s^2 inside (s) of k[s]/(s^3) does not commute with s.
        let a = Arc::new(LocalAlgebra::preset("s3", f2()).unwrap());
        let z = Subspace::zero(f2(), 3);
        let j = Subspace::coordinate(f2(), 3, &[1, 2]);
        let swap = Matrix::from_i64(f2(), &[vec![0, 1], vec![1, 0]]);
        let spec = GlueSpec {
            i1: z.clone(),
            i2: z,
            j1: j.clone(),
            j2: j,
            iso: swap,
        };
        assert!(matches!(glue(&a, &spec), Err(ModError::NotIsomorphic)));
    }
}
