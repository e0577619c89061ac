//! Small dense complex linear algebra.
//!
//! Everything in this crate works on state spaces of at most a few dozen
//! dimensions, so the types here are thin wrappers over `nalgebra` dense
//! storage with the handful of operations the automata code needs: products,
//! adjoints, unitarity checks, SVD-based nullspaces, orthogonal projections and
//! completion of a partial set of orthonormal columns to a unitary.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Complex amplitude.
pub type Complex = nalgebra::Complex<f64>;

/// Tolerance used when building and validating matrices.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// Tolerance for exact algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Shorthand for a complex number with zero imaginary part.
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<Complex>);

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector(DVector<Complex>);

impl CVector {
    pub fn from_vec(entries: Vec<Complex>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CVector(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Self {
        CVector(DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| re(x)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        CVector(DVector::zeros(dim))
    }

    /// Standard basis vector `e_index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = re(1.0);
        CVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex] {
        self.0.as_slice()
    }

    pub fn get(&self, i: usize) -> Complex {
        self.0[i]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    /// Inner product `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVector) -> Complex {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, factor: Complex) -> CVector {
        CVector(&self.0 * factor)
    }

    /// Returns `self / ‖self‖`, or `None` for a (numerically) zero vector.
    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        (n > f64::MIN_POSITIVE).then(|| self.scale(re(1.0 / n)))
    }

    /// Keeps only the coordinates listed in `mask` (others set to zero).
    pub fn restricted_to(&self, mask: &[bool]) -> CVector {
        let mut v = self.0.clone();
        for (i, keep) in mask.iter().enumerate() {
            if !keep {
                v[i] = Complex::new(0.0, 0.0);
            }
        }
        CVector(v)
    }

    /// Squared norm of the coordinates listed in `mask`.
    pub fn masked_norm_sqr(&self, mask: &[bool]) -> f64 {
        self.0
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(z, _)| z.norm_sqr())
            .sum()
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        CVector(&self.0 + &rhs.0)
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        CVector(&self.0 - &rhs.0)
    }
}

impl Neg for &CVector {
    type Output = CVector;
    fn neg(self) -> CVector {
        CVector(-&self.0)
    }
}

impl fmt::Display for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if z.im.abs() < 1e-15 {
                write!(f, "{:.9}", z.re)?;
            } else {
                write!(f, "{:.9}{:+.9}i", z.re, z.im)?;
            }
        }
        write!(f, ")")
    }
}

impl CMatrix {
    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: rows.iter().map(Vec::len).find(|&l| l != ncols).unwrap_or(0),
            });
        }
        if rows
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| re(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Builds a square matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let dim = columns.first().map_or(0, CVector::dim);
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(CMatrix(DMatrix::from_fn(dim, columns.len(), |i, j| {
            columns[j].0[i]
        })))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                re(entries[i])
            } else {
                Complex::new(0.0, 0.0)
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.0[(row, col)]
    }

    pub fn column(&self, col: usize) -> CVector {
        CVector(self.0.column(col).into_owned())
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: rhs.rows(),
            });
        }
        Ok(CMatrix(&self.0 * &rhs.0))
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Zeroes every row whose index is not kept by `mask`, i.e. `P · self`
    /// for the coordinate projection `P`.
    pub fn project_rows(&self, mask: &[bool]) -> CMatrix {
        let mut m = self.0.clone();
        for (i, keep) in mask.iter().enumerate() {
            if !keep {
                m.row_mut(i).fill(Complex::new(0.0, 0.0));
            }
        }
        CMatrix(m)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[CMatrix]) -> Result<CMatrix> {
        let cols = blocks.first().map_or(0, CMatrix::cols);
        if let Some(bad) = blocks.iter().find(|b| b.cols() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.cols(),
            });
        }
        let rows: usize = blocks.iter().map(CMatrix::rows).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            out.rows_mut(offset, b.rows()).copy_from(&b.0);
            offset += b.rows();
        }
        Ok(CMatrix(out))
    }
}

impl Mul<&CMatrix> for &CMatrix {
    type Output = CMatrix;
    /// Panics on a dimension mismatch; use [`CMatrix::mul`] for a checked product.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Orthonormal list of vectors of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    dim: usize,
    vectors: Vec<CVector>,
}

impl Basis {
    /// Wraps vectors that must already be orthonormal within `tol`.
    pub fn new(dim: usize, vectors: Vec<CVector>, tol: f64) -> Result<Self> {
        check_orthonormal(dim, &vectors, tol)?;
        Ok(Basis { dim, vectors })
    }

    pub fn empty(dim: usize) -> Self {
        Basis {
            dim,
            vectors: Vec::new(),
        }
    }

    /// Standard basis vectors `e_i` for each listed index.
    pub fn coordinate(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Basis {
            dim,
            vectors: indices.into_iter().map(|i| CVector::unit(dim, i)).collect(),
        }
    }

    /// Orthonormalizes `vectors` with two-pass modified Gram-Schmidt, dropping
    /// vectors whose residual norm falls below `tol`.
    pub fn span_of(dim: usize, vectors: &[CVector], tol: f64) -> Result<Self> {
        let mut basis = Basis::empty(dim);
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            let r = basis.remove_component(v);
            if let Some(u) = r.normalized().filter(|_| r.norm() > tol) {
                basis.vectors.push(basis.remove_component(&u).normalized().unwrap_or(u));
            }
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Matrix with the basis vectors as columns (`dim × len`).
    pub fn as_matrix(&self) -> CMatrix {
        CMatrix(DMatrix::from_fn(self.dim, self.len(), |i, j| {
            self.vectors[j].0[i]
        }))
    }

    /// Orthonormal basis of the orthogonal complement of this span inside
    /// the span of `ambient` (which must contain it).
    pub fn complement_within(&self, ambient: &Basis) -> Result<Basis> {
        let residuals: Vec<CVector> = ambient
            .vectors
            .iter()
            .map(|v| self.remove_component(v))
            .collect();
        let out = Basis::span_of(self.dim, &residuals, 1e-6)?;
        Ok(out)
    }

    /// `v` minus its projection onto this span (two passes).
    fn remove_component(&self, v: &CVector) -> CVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.vectors {
                let c = b.inner(&r);
                r = &r - &b.scale(c);
            }
        }
        r
    }
}

fn check_orthonormal(dim: usize, vectors: &[CVector], tol: f64) -> Result<()> {
    for (i, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if (v.norm() - 1.0).abs() > tol {
            return Err(Error::NotOrthonormal(format!(
                "vector {i} has norm {}",
                v.norm()
            )));
        }
        for (j, w) in vectors.iter().enumerate().take(i) {
            let ip = w.inner(v).norm();
            if ip > tol {
                return Err(Error::NotOrthonormal(format!(
                    "vectors {j} and {i} have inner product magnitude {ip:e}"
                )));
            }
        }
    }
    Ok(())
}

/// Matrix-vector product.
pub fn mat_vec(m: &CMatrix, v: &CVector) -> Result<CVector> {
    if m.cols() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: v.dim(),
        });
    }
    Ok(CVector(&m.0 * &v.0))
}

/// True iff `‖m†m − I‖_max ≤ tol`.
pub fn is_unitary(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_defect(m)? <= tol)
}

/// `‖m†m − I‖_max` for a square matrix.
pub fn unitarity_defect(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let gram = CMatrix(m.0.adjoint() * &m.0);
    Ok(gram.max_abs_diff(&CMatrix::identity(m.rows())))
}

/// Result of an SVD-based nullspace computation.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub basis: Basis,
    /// One singular value per column of the input (zero-padded when the
    /// input has fewer rows than columns).
    pub singular_values: Vec<f64>,
}

/// Orthonormal basis of `{v : ‖m v‖ ≤ tol ‖v‖}`, by thresholding the
/// singular values of `m` at the absolute value `tol`.
pub fn nullspace(m: &CMatrix, tol: f64) -> Basis {
    nullspace_detailed(m, tol).basis
}

/// [`nullspace`] that also reports the full singular spectrum.
pub fn nullspace_detailed(m: &CMatrix, tol: f64) -> Nullspace {
    let n = m.cols();
    if n == 0 {
        return Nullspace {
            basis: Basis::empty(0),
            singular_values: Vec::new(),
        };
    }
    // Pad to at least n rows so that the SVD yields a full right basis.
    let padded = if m.rows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m.rows()).copy_from(&m.0);
        p
    } else {
        m.0.clone()
    };
    let svd = nalgebra::linalg::SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let candidates: Vec<CVector> = singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(i, _)| CVector(v_t.row(i).adjoint()))
        .collect();
    let basis = Basis::span_of(n, &candidates, 0.5).expect("dimensions agree");
    Nullspace {
        basis,
        singular_values,
    }
}

/// Orthogonal projection `Σ_i <b_i, v> b_i`.
pub fn project(v: &CVector, b: &Basis) -> Result<CVector> {
    if v.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: v.dim(),
        });
    }
    let mut out = CVector::zeros(v.dim());
    for bi in b.vectors() {
        out = &out + &bi.scale(bi.inner(v));
    }
    Ok(out)
}

/// Extends orthonormal columns to a square unitary. The first columns of the
/// result are exactly the given ones; the rest come from Gram-Schmidt over the
/// standard basis `e_0, e_1, …` in order, so the result is reproducible.
pub fn complete_to_unitary(partial_columns: &[CVector], tol: f64) -> Result<CMatrix> {
    let dim = partial_columns
        .first()
        .map(CVector::dim)
        .ok_or(Error::EmptyInput("partial column list"))?;
    check_orthonormal(dim, partial_columns, tol)?;
    if partial_columns.len() > dim {
        return Err(Error::NotOrthonormal(format!(
            "{} columns cannot be orthonormal in dimension {dim}",
            partial_columns.len()
        )));
    }
    let mut span = Basis {
        dim,
        vectors: partial_columns.to_vec(),
    };
    let mut columns = partial_columns.to_vec();
    for j in 0..dim {
        if columns.len() == dim {
            break;
        }
        let r = span.remove_component(&CVector::unit(dim, j));
        if r.norm() > 1e-6 {
            let u = r.normalized().expect("norm checked above");
            span.vectors.push(u.clone());
            columns.push(u);
        }
    }
    debug_assert_eq!(columns.len(), dim);
    CMatrix::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn mat_vec_identity_zero_and_swap() {
        let e0 = CVector::from_real(&[1.0, 0.0, 0.0]);
        assert_eq!(mat_vec(&CMatrix::identity(3), &e0).unwrap(), e0);

        let v = CVector::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)]).unwrap();
        assert_eq!(
            mat_vec(&CMatrix::zeros(3, 3), &v).unwrap(),
            CVector::zeros(3)
        );

        let swap = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let ab = CVector::from_vec(vec![c(0.3, 0.1), c(-0.7, 0.2)]).unwrap();
        let ba = CVector::from_vec(vec![c(-0.7, 0.2), c(0.3, 0.1)]).unwrap();
        assert_eq!(mat_vec(&swap, &ab).unwrap(), ba);
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let err = mat_vec(&CMatrix::identity(2), &CVector::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert!(matches!(
            CVector::from_vec(vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            CMatrix::from_rows(&[vec![c(0.0, f64::INFINITY)]]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn unitarity_checks() {
        assert!(is_unitary(&CMatrix::identity(4), 1e-12).unwrap());
        assert!(!is_unitary(&CMatrix::diagonal(&[1.0, 2.0]), 1e-12).unwrap());
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            is_unitary(&rect, 1e-12),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        // Hadamard with a phase is unitary.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = CMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]])
            .unwrap();
        assert!(is_unitary(&h, 1e-12).unwrap());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&CMatrix::zeros(3, 3), 1e-12).len(), 3);
        assert!(nullspace(&CMatrix::identity(3), 1e-12).is_empty());
        let d = CMatrix::diagonal(&[1.0, 0.0, 1e-15]);
        let ns = nullspace(&d, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns.vectors() {
            assert!(v.get(0).norm() < 1e-12);
        }
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        // One row: null space is 2-dimensional and orthogonal to the row.
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)]]).unwrap();
        let ns = nullspace(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns.vectors() {
            assert!(mat_vec(&m, v).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let axis = Basis::coordinate(2, [0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_real(&[s, s]);
        let p = project(&v, &axis).unwrap();
        assert!((&p - &CVector::from_real(&[s, 0.0])).norm() < 1e-15);

        let inside = CVector::from_real(&[0.4, 0.0]);
        assert_eq!(project(&inside, &axis).unwrap(), inside);
        let orth = CVector::from_real(&[0.0, 2.0]);
        assert_eq!(project(&orth, &axis).unwrap(), CVector::zeros(2));
    }

    #[test]
    fn completion_examples() {
        let u = complete_to_unitary(&[CVector::unit(2, 0)], 1e-12).unwrap();
        assert!(is_unitary(&u, 1e-12).unwrap());
        assert_eq!(u.column(0), CVector::unit(2, 0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let full = vec![CVector::from_real(&[s, s]), CVector::from_real(&[s, -s])];
        let m = complete_to_unitary(&full, 1e-12).unwrap();
        assert_eq!(m, CMatrix::from_columns(&full).unwrap());

        let bad = vec![CVector::from_real(&[1.0, 0.0]), CVector::from_real(&[1.0, 0.0])];
        assert!(matches!(
            complete_to_unitary(&bad, 1e-9),
            Err(Error::NotOrthonormal(_))
        ));
        assert!(matches!(
            complete_to_unitary(&[], 1e-9),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn complement_within_ambient() {
        let ambient = Basis::coordinate(4, [0, 1, 2]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sub = Basis::new(4, vec![CVector::from_real(&[s, s, 0.0, 0.0])], 1e-12).unwrap();
        let comp = sub.complement_within(&ambient).unwrap();
        assert_eq!(comp.len(), 2);
        for v in comp.vectors() {
            assert!(v.inner(&sub.vectors()[0]).norm() < 1e-12);
            assert!(v.get(3).norm() < 1e-12);
        }
    }
}
