//! The place-permutation action of `G ⊆ S_n` on `(ℂ^d)^{⊗n}`.
//!
//! Basis words `a₁a₂…aₙ` are indexed as `Σ aᵢ d^{n-i}`, so site 1 is the
//! leftmost Kronecker factor. The operator for `Π` moves the letter at
//! position `i` to position `Π(i)`; with this convention `Π ↦ ρ(Π)` is a
//! homomorphism for the right-to-left product of permutations. In particular
//! the cyclic shift `Z = (1 2 … n)` rotates words to the right, `a₁…aₙ ↦ aₙa₁…aₙ₋₁`.

pub mod counting;

use std::f64::consts::TAU;
use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{AnyElement, ComplexElement};
use crate::error::{Error, Result};
use crate::group::Permutation;
use crate::linalg::{fix_phase, CMatrix, CVector, GramSchmidt, LinearOperator, SparseMatrix, SymmetryFlags};

pub use counting::*;

/// Largest tensor-space dimension `d^n` that will be materialized.
pub const MAX_DIM: usize = 1 << 20;
/// Relative residual below which a Gram–Schmidt candidate counts as dependent.
pub const RANK_TOL: f64 = 1e-8;

/// Amplitudes of a state in the word basis.
pub type StateVector = CVector;

/// `d^n`, or an error when it exceeds [`MAX_DIM`].
pub fn tensor_dim(n: usize, d: usize) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .filter(|&dim| dim <= MAX_DIM);
    dim.ok_or(Error::DimensionTooLarge {
        dim: d.saturating_pow(n.min(u32::MAX as usize) as u32),
        limit: MAX_DIM,
    })
}

/// A word over the alphabet `{0, …, d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisWord {
    letters: Vec<usize>,
    d: usize,
}

impl BasisWord {
    pub fn new(letters: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&a| a >= d) {
            return Err(Error::OutOfRange {
                what: "letter",
                value: bad,
                min: 0,
                max: d.saturating_sub(1),
            });
        }
        Ok(BasisWord { letters, d })
    }

    /// Parses a binary word such as `"1010"`.
    pub fn binary(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::OutOfRange {
                    what: "letter",
                    value: c.to_digit(10).map_or(usize::MAX, |x| x as usize),
                    min: 0,
                    max: 1,
                }),
            })
            .collect::<Result<_>>()?;
        Ok(BasisWord { letters, d: 2 })
    }

    pub fn from_index(mut index: usize, n: usize, d: usize) -> Self {
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        BasisWord { letters, d }
    }

    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, &a| acc * self.d + a)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.d
    }

    /// The word `ρ(p)|w⟩`: letter `i` moves to position `p(i)`.
    pub fn permuted(&self, p: &Permutation) -> BasisWord {
        let mut letters = vec![0; self.len()];
        for (i, &a) in self.letters.iter().enumerate() {
            letters[p.apply(i)] = a;
        }
        BasisWord { letters, d: self.d }
    }

    /// `ρ(Z)^r|w⟩`, rotating right by `r`.
    pub fn rotated(&self, r: usize) -> BasisWord {
        let n = self.len();
        let mut letters = self.letters.clone();
        if n > 0 {
            letters.rotate_right(r % n);
        }
        BasisWord { letters, d: self.d }
    }

    /// Smallest `T ≥ 1` with `Z^T w = w`; always divides the length.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&t| n.is_multiple_of(t) && self.rotated(t) == *self)
            .unwrap_or(1)
    }

    /// Lexicographically smallest rotation.
    pub fn canonical_rotation(&self) -> BasisWord {
        (0..self.len().max(1))
            .map(|r| self.rotated(r))
            .min()
            .expect("at least one rotation")
    }
}

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d <= 10 {
            for a in &self.letters {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

pub fn word_period(w: &BasisWord) -> usize {
    w.period()
}

/// Place values `d^{n-1-j}` for `j = 0..n`.
fn place_values(n: usize, d: usize) -> Vec<usize> {
    let mut pv = vec![1; n];
    for j in (0..n.saturating_sub(1)).rev() {
        pv[j] = pv[j + 1] * d;
    }
    pv
}

/// `index_map[w] = index of ρ(p)|w⟩`.
pub fn index_map(p: &Permutation, d: usize) -> Result<Vec<usize>> {
    let n = p.degree();
    let dim = tensor_dim(n, d)?;
    let pv = place_values(n, d);
    let target: Vec<usize> = (0..n).map(|i| pv[p.apply(i)]).collect();
    Ok((0..dim)
        .map(|idx| {
            let mut rest = idx;
            let mut out = 0;
            for i in (0..n).rev() {
                out += (rest % d) * target[i];
                rest /= d;
            }
            out
        })
        .collect())
}

/// The permutation matrix `ρ(p)` on `(ℂ^d)^{⊗n}`, `n = p.degree()`.
pub fn perm_action_operator(p: &Permutation, d: usize) -> Result<LinearOperator> {
    let map = index_map(p, d)?;
    let dim = map.len();
    let m = SparseMatrix::from_triplets(
        dim,
        dim,
        map.into_iter()
            .enumerate()
            .map(|(col, row)| (row, col, Complex64::new(1.0, 0.0))),
    );
    LinearOperator::from_sparse(m, SymmetryFlags::UNITARY)
}

/// `Σ c_g ρ(g)` as an operator.
pub fn materialize(a: &ComplexElement, d: usize) -> Result<LinearOperator> {
    let dim = tensor_dim(a.degree(), d)?;
    let mut triplets = Vec::with_capacity(a.len() * dim);
    for (g, c) in a.terms() {
        for (col, row) in index_map(g, d)?.into_iter().enumerate() {
            triplets.push((row, col, *c));
        }
    }
    LinearOperator::from_sparse(SparseMatrix::from_triplets(dim, dim, triplets), SymmetryFlags::NONE)
}

/// Index maps of a fixed set of group elements, for repeated materialization.
#[derive(Clone, Debug)]
pub struct TensorRep {
    n: usize,
    d: usize,
    dim: usize,
    maps: HashMap<Permutation, Vec<usize>>,
}

impl TensorRep {
    pub fn new<'a>(
        n: usize,
        d: usize,
        elements: impl IntoIterator<Item = &'a Permutation>,
    ) -> Result<Self> {
        let dim = tensor_dim(n, d)?;
        let mut maps = HashMap::new();
        for g in elements {
            if g.degree() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: g.degree(),
                });
            }
            maps.insert(g.clone(), index_map(g, d)?);
        }
        Ok(TensorRep { n, d, dim, maps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn with_map<T>(&self, g: &Permutation, f: impl FnOnce(&[usize]) -> T) -> T {
        match self.maps.get(g) {
            Some(m) => f(m),
            None => f(&index_map(g, self.d).expect("dimension already checked")),
        }
    }

    /// `ρ(Σ c_g g)` as a sparse matrix.
    pub fn materialize(&self, a: &ComplexElement) -> SparseMatrix {
        let mut triplets = Vec::with_capacity(a.len() * self.dim);
        for (g, c) in a.terms() {
            self.with_map(g, |m| {
                triplets.extend(m.iter().enumerate().map(|(col, &row)| (row, col, *c)));
            });
        }
        SparseMatrix::from_triplets(self.dim, self.dim, triplets)
    }

    /// `ρ(g) X`, permuting the rows of `X`.
    pub fn permute_rows(&self, g: &Permutation, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        self.with_map(g, |m| {
            for (src, &dst) in m.iter().enumerate() {
                out.set_row(dst, &x.row(src));
            }
        });
        out
    }

    pub fn rho(&self, g: &Permutation) -> SparseMatrix {
        self.materialize(&ComplexElement::basis(g.clone()))
    }
}

/// `Σ c_g ρ(g) v`.
pub fn apply_algebra_element(a: &AnyElement, v: &StateVector, d: usize) -> Result<StateVector> {
    let a = a.to_complex();
    let dim = tensor_dim(a.degree(), d)?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    let mut out = CVector::zeros(dim);
    for (g, c) in a.terms() {
        for (src, dst) in index_map(g, d)?.into_iter().enumerate() {
            out[dst] += c * v[src];
        }
    }
    Ok(out)
}

/// `tr ρ(a) = Σ c_g d^{cycles(g)}`.
pub fn element_trace(a: &ComplexElement, d: usize) -> Complex64 {
    a.terms()
        .map(|(g, c)| c * (d as f64).powi(g.cycle_count() as i32))
        .sum()
}

/// Checks `P² = P` and `P† = P`: exactly for rational coefficients, to
/// `1e-10` for complex ones.
pub fn check_hermitian_idempotent(p: &AnyElement) -> Result<()> {
    let (exact, deviation) = match p {
        AnyElement::Rational(r) => {
            let sq = r.multiply(r)?;
            let dag = r.dagger();
            let dev = sq.max_deviation(r)?.max(dag.max_deviation(r)?);
            (sq == *r && dag == *r, dev)
        }
        AnyElement::Complex(c) => {
            let dev = c.multiply(c)?.max_deviation(c)?.max(c.dagger().max_deviation(c)?);
            (dev <= 1e-10, dev)
        }
    };
    if !exact {
        return Err(Error::NotHermitianIdempotent { deviation });
    }
    Ok(())
}

/// Orthonormal basis of `ρ(P)(ℂ^d)^{⊗n}`.
///
/// `P` is applied to basis words in index order and the images are
/// orthonormalized until the rank `tr ρ(P)` is reached. Each vector has its
/// first nonzero amplitude made real and positive.
pub fn projector_image_basis(p: &AnyElement, d: usize) -> Result<Vec<StateVector>> {
    check_hermitian_idempotent(p)?;
    let a = p.to_complex();
    let n = a.degree();
    let dim = tensor_dim(n, d)?;
    let rank = element_trace(&a, d).re.round().max(0.0) as usize;
    let maps: Vec<(Complex64, Vec<usize>)> = a
        .terms()
        .map(|(g, c)| index_map(g, d).map(|m| (*c, m)))
        .collect::<Result<_>>()?;
    let mut gs = GramSchmidt::new(RANK_TOL);
    for idx in 0..dim {
        if gs.len() >= rank {
            break;
        }
        let mut v = CVector::zeros(dim);
        for (c, m) in &maps {
            v[m[idx]] += c;
        }
        // `‖P e‖ ≤ 1` for a projector; anything this small is cancellation noise.
        if v.norm() > 1e-10 {
            gs.push(v);
        }
    }
    let mut basis = gs.into_basis();
    for v in &mut basis {
        fix_phase(v, 1e-12);
    }
    Ok(basis)
}

/// `P_k|w⟩` for the Fourier projector `P_k = (1/n) Σ_j ε^{kj} ρ(Z)^j`,
/// `ε = e^{2πi/n}`: zero unless `(n/T) | k`, otherwise
/// `(1/T) Σ_{r<T} ε^{kr} ρ(Z)^r|w⟩` where `T` is the period of `w`.
pub fn cyclic_projector_on_word(k: usize, w: &BasisWord) -> Result<StateVector> {
    let n = w.len();
    let dim = tensor_dim(n, w.alphabet())?;
    let mut v = CVector::zeros(dim);
    let t = w.period();
    if n == 0 || !k.is_multiple_of(n / t) {
        return Ok(v);
    }
    for r in 0..t {
        let phase = Complex64::from_polar(1.0 / t as f64, TAU * ((k * r) % n) as f64 / n as f64);
        v[w.rotated(r).index()] += phase;
    }
    Ok(v)
}

/// Orthonormal basis of `Im P_k` on `n` qubits: one vector per rotation
/// class whose canonical word has `(n/T) | k`, in index order.
pub fn cyclic_image_basis(k: usize, n: usize) -> Result<Vec<StateVector>> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: n.saturating_sub(1),
        });
    }
    let dim = tensor_dim(n, 2)?;
    let mut out = Vec::new();
    for idx in 0..dim {
        let w = BasisWord::from_index(idx, n, 2);
        if w.canonical_rotation() != w || !k.is_multiple_of(n / w.period()) {
            continue;
        }
        let mut v = cyclic_projector_on_word(k, &w)?;
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        fix_phase(&mut v, 1e-12);
        out.push(v);
    }
    Ok(out)
}

/// Ket notation, e.g. `(1/√3)(|100⟩+|010⟩+|001⟩)`. A common modulus is
/// factored out when all amplitudes share one.
pub fn ket_string(v: &StateVector, n: usize, d: usize, tol: f64) -> String {
    let terms: Vec<(usize, Complex64)> = v
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > tol)
        .map(|(i, a)| (i, *a))
        .collect();
    if terms.is_empty() {
        return "0".into();
    }
    let modulus = terms[0].1.norm();
    let uniform = terms.iter().all(|(_, a)| (a.norm() - modulus).abs() < 1e-9);
    let ket = |i: usize| format!("|{}⟩", BasisWord::from_index(i, n, d));
    if uniform {
        let inv_sq = 1.0 / (modulus * modulus);
        let prefix = if (inv_sq - 1.0).abs() < 1e-9 {
            String::new()
        } else if (inv_sq - inv_sq.round()).abs() < 1e-9 {
            format!("(1/√{})", inv_sq.round() as u64)
        } else {
            format!("{modulus:.6}")
        };
        let mut body = String::new();
        for (pos, (i, a)) in terms.iter().enumerate() {
            let u = a / modulus;
            let coeff = unit_coefficient(u, pos == 0);
            body.push_str(&coeff);
            body.push_str(&ket(*i));
        }
        if prefix.is_empty() {
            body
        } else {
            format!("{prefix}({body})")
        }
    } else {
        terms
            .iter()
            .map(|(i, a)| format!("({})", crate::algebra::format_complex(*a)) + &ket(*i))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn unit_coefficient(u: Complex64, first: bool) -> String {
    let near = |z: Complex64| (u - z).norm() < 1e-9;
    if near(Complex64::new(1.0, 0.0)) {
        if first { String::new() } else { "+".into() }
    } else if near(Complex64::new(-1.0, 0.0)) {
        "-".into()
    } else if near(Complex64::new(0.0, 1.0)) {
        if first { "i".into() } else { "+i".into() }
    } else if near(Complex64::new(0.0, -1.0)) {
        "-i".into()
    } else {
        let sep = if first { "" } else { "+" };
        format!("{sep}({})", crate::algebra::format_complex(u))
    }
}

/// `index,re,im` lines with a header.
pub fn state_csv(v: &StateVector) -> String {
    let mut out = String::from("index,re,im\n");
    for (i, a) in v.iter().enumerate() {
        out.push_str(&format!("{i},{:e},{:e}\n", a.re, a.im));
    }
    out
}
