//! Complex linear algebra on the tensor space: a compressed sparse row matrix,
//! an operator type that picks sparse or dense storage, and the small set of
//! numerical kernels the decomposition needs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Operators smaller than this are always stored densely.
pub const DENSIFY_BELOW: usize = 256;
/// Tolerance for checking a flagged symmetry on construction.
pub const FLAG_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square or rectangular complex matrix in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, ONE)))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        CVector::from_iterator(
            self.nrows,
            (0..self.nrows).map(|r| self.row(r).map(|(c, x)| x * v[c]).sum()),
        )
    }

    /// `self · dense`.
    pub fn mul_dense(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.nrows, m.ncols());
        for (r, c, v) in self.triplets() {
            for j in 0..m.ncols() {
                out[(r, j)] += v * m[(c, j)];
            }
        }
        out
    }

    pub fn mul_sparse(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut triplets = Vec::new();
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    triplets.push((r, c, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn adjoint(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn scale(&self, s: Complex64) -> SparseMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets()),
        )
    }

    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                triplets.push((r1 * other.nrows + r2, c1 * other.ncols + c2, v1 * v2));
            }
        }
        SparseMatrix::from_triplets(
            self.nrows * other.nrows,
            self.ncols * other.ncols,
            triplets,
        )
    }

    pub fn from_dense(m: &CMatrix) -> SparseMatrix {
        SparseMatrix::from_triplets(
            m.nrows(),
            m.ncols(),
            (0..m.nrows())
                .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, m[(r, c)])),
        )
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Which symmetry an operator is claimed to have.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryFlags {
    pub hermitian: bool,
    pub skew_hermitian: bool,
    pub unitary: bool,
}

impl SymmetryFlags {
    pub const NONE: SymmetryFlags = SymmetryFlags {
        hermitian: false,
        skew_hermitian: false,
        unitary: false,
    };
    pub const HERMITIAN: SymmetryFlags = SymmetryFlags {
        hermitian: true,
        skew_hermitian: false,
        unitary: false,
    };
    pub const SKEW_HERMITIAN: SymmetryFlags = SymmetryFlags {
        hermitian: false,
        skew_hermitian: true,
        unitary: false,
    };
    pub const UNITARY: SymmetryFlags = SymmetryFlags {
        hermitian: false,
        skew_hermitian: false,
        unitary: true,
    };
}

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    Dense(CMatrix),
    Sparse(SparseMatrix),
}

/// A square complex operator with verified symmetry flags.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    storage: Storage,
    flags: SymmetryFlags,
}

impl LinearOperator {
    /// Wraps a sparse matrix, densifying small ones, and checks `flags`.
    pub fn from_sparse(m: SparseMatrix, flags: SymmetryFlags) -> Result<Self> {
        let storage = if m.nrows() < DENSIFY_BELOW {
            Storage::Dense(m.to_dense())
        } else {
            Storage::Sparse(m)
        };
        Self::checked(storage, flags)
    }

    pub fn from_dense(m: CMatrix, flags: SymmetryFlags) -> Result<Self> {
        Self::checked(Storage::Dense(m), flags)
    }

    fn checked(storage: Storage, flags: SymmetryFlags) -> Result<Self> {
        let (r, c) = match &storage {
            Storage::Dense(m) => (m.nrows(), m.ncols()),
            Storage::Sparse(m) => (m.nrows(), m.ncols()),
        };
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: c,
            });
        }
        let op = LinearOperator { storage, flags };
        if flags.hermitian {
            let dev = op.hermitian_deviation();
            if dev > FLAG_TOL {
                return Err(Error::NotHermitianIdempotent { deviation: dev });
            }
        }
        if flags.skew_hermitian {
            let dev = op.skew_hermitian_deviation();
            if dev > FLAG_TOL {
                return Err(Error::NotHermitianIdempotent { deviation: dev });
            }
        }
        if flags.unitary {
            let dev = op.unitary_deviation();
            if dev > FLAG_TOL {
                return Err(Error::NotUnitary { deviation: dev });
            }
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(m) => m.nrows(),
        }
    }

    pub fn flags(&self) -> SymmetryFlags {
        self.flags
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn to_dense(&self) -> CMatrix {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => m.to_dense(),
        }
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        match &self.storage {
            Storage::Dense(m) => SparseMatrix::from_dense(m),
            Storage::Sparse(m) => m.clone(),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        match &self.storage {
            Storage::Dense(m) => m * v,
            Storage::Sparse(m) => m.mul_vec(v),
        }
    }

    /// `self · m` for a dense right factor.
    pub fn mul_dense(&self, m: &CMatrix) -> CMatrix {
        match &self.storage {
            Storage::Dense(a) => a * m,
            Storage::Sparse(a) => a.mul_dense(m),
        }
    }

    /// `U† · self · U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.adjoint() * self.mul_dense(u)
    }

    /// Product, keeping sparse storage when both factors are sparse.
    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a.mul_sparse(b)),
            _ => Storage::Dense(self.mul_dense(&other.to_dense())),
        };
        LinearOperator {
            storage,
            flags: SymmetryFlags::NONE,
        }
    }

    /// `-i · self`, swapping the Hermitian and skew-Hermitian flags.
    pub fn times_minus_i(&self) -> LinearOperator {
        let s = -I;
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * s),
            Storage::Sparse(m) => Storage::Sparse(m.scale(s)),
        };
        LinearOperator {
            storage,
            flags: SymmetryFlags {
                hermitian: self.flags.skew_hermitian,
                skew_hermitian: self.flags.hermitian,
                unitary: false,
            },
        }
    }

    /// `i · self`, the inverse of [`times_minus_i`](Self::times_minus_i).
    pub fn times_i(&self) -> LinearOperator {
        let mut op = self.times_minus_i();
        let flip = |op: &mut LinearOperator| match &mut op.storage {
            Storage::Dense(m) => *m *= Complex64::new(-1.0, 0.0),
            Storage::Sparse(m) => *m = m.scale(Complex64::new(-1.0, 0.0)),
        };
        flip(&mut op);
        op
    }

    fn adjoint_difference(&self, sign: f64) -> f64 {
        match &self.storage {
            Storage::Dense(m) => max_abs(&(m - m.adjoint() * Complex64::new(sign, 0.0))),
            Storage::Sparse(m) => m.add(&m.adjoint().scale(Complex64::new(-sign, 0.0))).max_abs(),
        }
    }

    /// `max |A - A†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.adjoint_difference(1.0)
    }

    /// `max |A + A†|`.
    pub fn skew_hermitian_deviation(&self) -> f64 {
        self.adjoint_difference(-1.0)
    }

    /// `max |A†A - 1|`.
    pub fn unitary_deviation(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => unitary_deviation(m),
            Storage::Sparse(m) => m
                .adjoint()
                .mul_sparse(m)
                .add(&SparseMatrix::identity(m.nrows()).scale(-ONE))
                .max_abs(),
        }
    }

    /// `max |AB - BA|`.
    pub fn commutator_deviation(&self, other: &LinearOperator) -> f64 {
        match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => a
                .mul_sparse(b)
                .add(&b.mul_sparse(a).scale(-ONE))
                .max_abs(),
            _ => {
                let a = self.to_dense();
                let b = other.to_dense();
                max_abs(&(&a * &b - &b * &a))
            }
        }
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn unitary_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - CMatrix::identity(m.ncols(), m.ncols())))
}

/// Kronecker product of dense matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Multiplies by a unit phase so the first entry with modulus above `tol`
/// becomes real and positive.
pub fn fix_phase(v: &mut CVector, tol: f64) {
    if let Some(first) = v.iter().find(|x| x.norm() > tol) {
        let phase = first.conj() / first.norm();
        *v *= phase;
    }
}

/// Incremental modified Gram–Schmidt with one re-orthogonalization pass.
#[derive(Clone, Debug, Default)]
pub struct GramSchmidt {
    basis: Vec<CVector>,
    rel_tol: f64,
}

impl GramSchmidt {
    /// `rel_tol`: a candidate is dropped when its residual norm falls below
    /// `rel_tol` times its original norm.
    pub fn new(rel_tol: f64) -> Self {
        GramSchmidt {
            basis: Vec::new(),
            rel_tol,
        }
    }

    /// Orthogonalizes `v` against the accepted vectors. Returns the index of
    /// the new basis vector, or `None` if `v` was (numerically) dependent.
    pub fn push(&mut self, v: CVector) -> Option<usize> {
        let norm0 = v.norm();
        if norm0 == 0.0 {
            return None;
        }
        let mut r = v;
        for _ in 0..2 {
            for q in &self.basis {
                let c = q.dotc(&r);
                r.axpy(-c, q, ONE);
            }
        }
        let norm = r.norm();
        if norm < self.rel_tol * norm0 {
            return None;
        }
        self.basis.push(r / Complex64::new(norm, 0.0));
        Some(self.basis.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<CVector> {
        self.basis
    }
}

/// Columns stacked into a matrix; an empty list gives a `dim × 0` matrix.
pub fn columns_to_matrix(dim: usize, cols: &[CVector]) -> CMatrix {
    if cols.is_empty() {
        return CMatrix::zeros(dim, 0);
    }
    CMatrix::from_columns(cols)
}

/// Orthogonal projector `X X†` onto the span of orthonormal columns `X`.
pub fn projector_from_columns(x: &CMatrix) -> CMatrix {
    x * x.adjoint()
}

/// Unitary polar factor `W V†` of `Y = W Σ V†`, with the ratio of smallest
/// to largest singular value.
pub fn polar_factor(y: &CMatrix) -> (CMatrix, f64) {
    if y.ncols() == 0 {
        return (y.clone(), 1.0);
    }
    let svd = y.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let sv = &svd.singular_values;
    let max = sv.max();
    let min = sv.min();
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    (u * v_t, ratio)
}

/// Rank of a sparse system given as rows of `(col, value)`, by Gaussian
/// elimination that always pivots on the lowest remaining column. Entries
/// below `tol` after an update are dropped.
pub fn sparse_rank(rows: Vec<Vec<(usize, Complex64)>>, tol: f64) -> usize {
    use std::collections::{BTreeMap, HashMap};
    let mut pivots: HashMap<usize, BTreeMap<usize, Complex64>> = HashMap::new();
    for row in rows {
        let mut r: BTreeMap<usize, Complex64> = BTreeMap::new();
        for (c, v) in row {
            *r.entry(c).or_insert(ZERO) += v;
        }
        r.retain(|_, v| v.norm() > tol);
        while let Some((&lead, &val)) = r.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = val / p[&lead];
                    for (&c, &pv) in p {
                        let e = r.entry(c).or_insert(ZERO);
                        *e -= factor * pv;
                        if e.norm() <= tol {
                            r.remove(&c);
                        }
                    }
                    r.remove(&lead);
                }
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Real inner product `Re tr(X† Y)`.
pub fn real_inner(x: &CMatrix, y: &CMatrix) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Frobenius-norm distance between the orthogonal projectors onto the column
/// spans of two orthonormal frames.
pub fn subspace_distance(x: &CMatrix, y: &CMatrix) -> f64 {
    (projector_from_columns(x) - projector_from_columns(y)).norm()
}
