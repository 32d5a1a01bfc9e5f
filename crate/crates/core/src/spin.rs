//! Spin-1/2 network models: Ising-type drifts with global or local field
//! controls, together with the permutation symmetry each topology carries.
//!
//! Every operator is stored as `-i·H`, an element of `u(2^n)`; the bare
//! Hamiltonian is available through [`LabeledOperator::hamiltonian`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::{CMatrix, LinearOperator, SparseMatrix, SymmetryFlags, ONE, ZERO};
use crate::tensor::{perm_action_operator, tensor_dim};

/// Tolerance for the symmetry check of emitted operators.
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Pauli matrices with `σ_y = [[0, i], [-i, 0]]`.
pub fn pauli(axis: Axis) -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[ZERO, i, -i, ZERO]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// Sparse `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` on 0-based `site` of `n`.
fn embed_sparse(op: &CMatrix, site: usize, n: usize) -> Result<SparseMatrix> {
    if site >= n {
        return Err(Error::OutOfRange {
            what: "site",
            value: site,
            min: 0,
            max: n.saturating_sub(1),
        });
    }
    let left = SparseMatrix::identity(1 << site);
    let right = SparseMatrix::identity(1 << (n - site - 1));
    Ok(left.kron(&SparseMatrix::from_dense(op)).kron(&right))
}

/// Embeds a single-site operator at 0-based `site` of an `n`-site register.
pub fn embed_site(op: &CMatrix, site: usize, n: usize) -> Result<LinearOperator> {
    tensor_dim(n, 2)?;
    LinearOperator::from_sparse(embed_sparse(op, site, n)?, SymmetryFlags::NONE)
}

/// `Σ_j σ_axis^j` over all sites.
pub fn field_sum(axis: Axis, n: usize) -> Result<LinearOperator> {
    let dim = tensor_dim(n, 2)?;
    let s = pauli(axis);
    let mut total = SparseMatrix::from_triplets(dim, dim, std::iter::empty());
    for j in 0..n {
        total = total.add(&embed_sparse(&s, j, n)?);
    }
    LinearOperator::from_sparse(total, SymmetryFlags::HERMITIAN)
}

/// Diagonal `Σ w σ_z^i σ_z^j` over the given weighted edges (0-based sites).
pub fn zz_interaction(n: usize, edges: &[(usize, usize, f64)]) -> Result<LinearOperator> {
    let dim = tensor_dim(n, 2)?;
    for &(i, j, _) in edges {
        for site in [i, j] {
            if site >= n {
                return Err(Error::OutOfRange {
                    what: "site",
                    value: site,
                    min: 0,
                    max: n.saturating_sub(1),
                });
            }
        }
    }
    let spin = |idx: usize, site: usize| {
        if (idx >> (n - 1 - site)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let diag = (0..dim).map(|idx| {
        let e: f64 = edges.iter().map(|&(i, j, w)| w * spin(idx, i) * spin(idx, j)).sum();
        (idx, idx, Complex64::new(e, 0.0))
    });
    LinearOperator::from_sparse(SparseMatrix::from_triplets(dim, dim, diag), SymmetryFlags::HERMITIAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "n")]
pub enum Topology {
    /// All-to-all coupling on `n` sites.
    Complete(usize),
    /// Nearest-neighbour ring on `n` sites.
    Ring(usize),
    /// Open chain of `2h+1` sites, controls on the middle one.
    CentralChain(usize),
    /// User-assembled model on `n` sites.
    Custom(usize),
}

impl Topology {
    pub fn sites(&self) -> usize {
        match *self {
            Topology::Complete(n) | Topology::Ring(n) | Topology::Custom(n) => n,
            Topology::CentralChain(h) => 2 * h + 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Topology::Complete(_) => "complete",
            Topology::Ring(_) => "ring",
            Topology::CentralChain(_) => "central-chain",
            Topology::Custom(_) => "custom",
        }
    }

    /// The symmetry group a topology carries.
    pub fn default_symmetry(&self) -> GroupSpec {
        match *self {
            Topology::Complete(n) => GroupSpec::Symmetric(n),
            Topology::Ring(n) => GroupSpec::Cyclic(n),
            Topology::CentralChain(h) => GroupSpec::Reflection(2 * h + 1),
            Topology::Custom(n) => GroupSpec::trivial(n),
        }
    }
}

/// A skew-Hermitian generator `-i·H` with a name.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    pub label: String,
    pub op: LinearOperator,
}

impl LabeledOperator {
    /// Wraps a Hermitian `H` as `-i·H`.
    pub fn from_hamiltonian(label: impl Into<String>, h: &LinearOperator) -> Result<Self> {
        let dev = h.hermitian_deviation();
        if dev > 1e-12 {
            return Err(Error::NotHermitianIdempotent { deviation: dev });
        }
        Ok(LabeledOperator {
            label: label.into(),
            op: h.times_minus_i(),
        })
    }

    /// The Hermitian `H` with `op = -i·H`.
    pub fn hamiltonian(&self) -> LinearOperator {
        self.op.times_i()
    }
}

/// Drift, controls and declared symmetry of a spin network.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinNetworkModel {
    pub topology: Topology,
    pub drift: LabeledOperator,
    pub controls: Vec<LabeledOperator>,
    pub symmetry: GroupSpec,
}

impl SpinNetworkModel {
    /// Assembles a model after checking that every operator is skew-Hermitian
    /// and commutes with every generator of `symmetry`.
    pub fn new(
        topology: Topology,
        drift: LabeledOperator,
        controls: Vec<LabeledOperator>,
        symmetry: GroupSpec,
    ) -> Result<Self> {
        let n = topology.sites();
        if symmetry.degree() != n {
            return Err(Error::SizeMismatch {
                left: n,
                right: symmetry.degree(),
            });
        }
        let dim = tensor_dim(n, 2)?;
        let generators = symmetry
            .generators()
            .iter()
            .map(|g| perm_action_operator(g, 2))
            .collect::<Result<Vec<_>>>()?;
        for lo in std::iter::once(&drift).chain(&controls) {
            if lo.op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: lo.op.dim(),
                });
            }
            let skew = lo.op.skew_hermitian_deviation();
            if skew > 1e-12 {
                return Err(Error::NotHermitianIdempotent { deviation: skew });
            }
            for rho in &generators {
                let dev = lo.op.commutator_deviation(rho);
                if dev > SYMMETRY_TOL {
                    return Err(Error::SymmetryViolation {
                        label: lo.label.clone(),
                        deviation: dev,
                    });
                }
            }
        }
        Ok(SpinNetworkModel {
            topology,
            drift,
            controls,
            symmetry,
        })
    }

    /// A model on `n` sites with arbitrary Hermitian drift and controls.
    pub fn custom(
        n: usize,
        drift: &LinearOperator,
        controls: &[(&str, LinearOperator)],
        symmetry: GroupSpec,
    ) -> Result<Self> {
        let drift = LabeledOperator::from_hamiltonian("drift", drift)?;
        let controls = controls
            .iter()
            .map(|(label, h)| LabeledOperator::from_hamiltonian(*label, h))
            .collect::<Result<_>>()?;
        Self::new(Topology::Custom(n), drift, controls, symmetry)
    }

    pub fn sites(&self) -> usize {
        self.topology.sites()
    }

    /// Drift followed by controls.
    pub fn generators(&self) -> Vec<&LabeledOperator> {
        std::iter::once(&self.drift).chain(&self.controls).collect()
    }
}

fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value,
            min,
            max,
        });
    }
    Ok(())
}

fn global_controls(n: usize) -> Result<Vec<LabeledOperator>> {
    Ok(vec![
        LabeledOperator::from_hamiltonian("H_x", &field_sum(Axis::X, n)?)?,
        LabeledOperator::from_hamiltonian("H_y", &field_sum(Axis::Y, n)?)?,
    ])
}

/// All-to-all Ising drift `Σ_{j<k} σ_z^j σ_z^k` with global x and y fields,
/// symmetric under `S_n`.
pub fn hamiltonians_complete(n: usize) -> Result<SpinNetworkModel> {
    check_range("n", n, 2, 10)?;
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0)))
        .collect();
    let drift = LabeledOperator::from_hamiltonian("H_zz", &zz_interaction(n, &edges)?)?;
    SpinNetworkModel::new(
        Topology::Complete(n),
        drift,
        global_controls(n)?,
        GroupSpec::Symmetric(n),
    )
}

/// Nearest-neighbour ring drift including the wrap-around edge, with global
/// x and y fields, symmetric under the cyclic shift.
pub fn hamiltonians_ring(n: usize) -> Result<SpinNetworkModel> {
    check_range("n", n, 3, 10)?;
    let edges: Vec<(usize, usize, f64)> = (0..n).map(|j| (j, (j + 1) % n, 1.0)).collect();
    let drift = LabeledOperator::from_hamiltonian("H_zz_nn", &zz_interaction(n, &edges)?)?;
    SpinNetworkModel::new(Topology::Ring(n), drift, global_controls(n)?, GroupSpec::Cyclic(n))
}

/// Open Ising chain on sites `-h..=h` (stored as `0..=2h`) with x, y, z
/// fields on the central site, symmetric under `j ↔ -j`.
pub fn hamiltonians_central_chain(half_length: usize) -> Result<SpinNetworkModel> {
    check_range("half_length", half_length, 1, 4)?;
    let n = 2 * half_length + 1;
    let center = half_length;
    let edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|j| (j, j + 1, 1.0)).collect();
    let drift = LabeledOperator::from_hamiltonian("A", &zz_interaction(n, &edges)?)?;
    let controls = [Axis::X, Axis::Y, Axis::Z]
        .into_iter()
        .map(|axis| {
            let h = embed_site(&pauli(axis), center, n)?;
            LabeledOperator::from_hamiltonian(format!("B_{axis}"), &h)
        })
        .collect::<Result<_>>()?;
    SpinNetworkModel::new(
        Topology::CentralChain(half_length),
        drift,
        controls,
        GroupSpec::Reflection(n),
    )
}

/// Builds the model for a named topology.
pub fn build_model(topology: Topology) -> Result<SpinNetworkModel> {
    match topology {
        Topology::Complete(n) => hamiltonians_complete(n),
        Topology::Ring(n) => hamiltonians_ring(n),
        Topology::CentralChain(h) => hamiltonians_central_chain(h),
        Topology::Custom(_) => Err(Error::UnsupportedGroup(
            "custom models are assembled with SpinNetworkModel::custom".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_group;
    use crate::linalg::{max_abs, CVector};

    fn ket(bits: &str) -> CVector {
        let mut v = CVector::zeros(1 << bits.len());
        v[usize::from_str_radix(bits, 2).unwrap()] = ONE;
        v
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(&pauli(Axis::X) * ket("0"), ket("1"));
        assert_eq!(pauli(Axis::Z), CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE])));
        assert_eq!(pauli(Axis::Y)[(0, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(pauli(Axis::Y)[(1, 0)], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn site_embedding() {
        let x = pauli(Axis::X);
        assert_eq!(embed_site(&x, 0, 1).unwrap().to_dense(), x);
        assert_eq!(embed_site(&x, 1, 2).unwrap().apply(&ket("00")), ket("01"));
        assert_eq!(embed_site(&x, 3, 5).unwrap().apply(&ket("00000")), ket("00010"));
        assert!(embed_site(&x, 2, 2).is_err());
    }

    #[test]
    fn complete_model_terms() {
        let m2 = hamiltonians_complete(2).unwrap();
        let zz = crate::linalg::kron(&pauli(Axis::Z), &pauli(Axis::Z));
        assert!(max_abs(&(m2.drift.hamiltonian().to_dense() - zz)) < 1e-15);
        // Six pair terms: |0000⟩ has energy 6.
        let m4 = hamiltonians_complete(4).unwrap();
        let h = m4.drift.hamiltonian().to_dense();
        assert!((h[(0, 0)].re - 6.0).abs() < 1e-15);
        let rho: Vec<_> = enumerate_group(&GroupSpec::Symmetric(4))
            .unwrap()
            .iter()
            .map(|g| perm_action_operator(g, 2).unwrap())
            .collect();
        for r in &rho {
            assert!(m4.controls[0].op.commutator_deviation(r) < 1e-10);
        }
        assert!(hamiltonians_complete(1).is_err());
        assert!(hamiltonians_complete(11).is_err());
    }

    #[test]
    fn ring_equals_complete_on_three_sites() {
        let ring = hamiltonians_ring(3).unwrap();
        let complete = hamiltonians_complete(3).unwrap();
        for (a, b) in ring.generators().iter().zip(complete.generators()) {
            assert_eq!(a.op.to_dense(), b.op.to_dense());
        }
        let r4 = hamiltonians_ring(4).unwrap();
        assert!((r4.drift.hamiltonian().to_dense()[(0, 0)].re - 4.0).abs() < 1e-15);
        assert!(hamiltonians_ring(2).is_err());
    }

    #[test]
    fn central_chain_structure() {
        let m = hamiltonians_central_chain(1).unwrap();
        assert_eq!(m.sites(), 3);
        assert!((m.drift.hamiltonian().to_dense()[(0, 0)].re - 2.0).abs() < 1e-15);
        let bx = embed_site(&pauli(Axis::X), 1, 3).unwrap().times_minus_i();
        assert_eq!(m.controls[0].op.to_dense(), bx.to_dense());
        let r = perm_action_operator(&crate::group::Permutation::reversal(3), 2).unwrap();
        assert!(m.drift.op.commutator_deviation(&r) < 1e-10);
        assert!(hamiltonians_central_chain(5).is_err());
        assert_eq!(hamiltonians_central_chain(2).unwrap().sites(), 5);
    }

    #[test]
    fn emitted_operators_are_skew_hermitian() {
        for m in [hamiltonians_complete(3).unwrap(), hamiltonians_ring(5).unwrap()] {
            for g in m.generators() {
                assert!(g.op.skew_hermitian_deviation() < 1e-12);
            }
        }
    }

    #[test]
    fn single_spin_fields_square_to_two() {
        let hx = field_sum(Axis::X, 1).unwrap().to_dense();
        let hy = field_sum(Axis::Y, 1).unwrap().to_dense();
        let sum = &hx * &hx + &hy * &hy;
        assert!(max_abs(&(sum - CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        let drift = zz_interaction(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let err = SpinNetworkModel::custom(3, &drift, &[], GroupSpec::Cyclic(3)).unwrap_err();
        assert!(matches!(err, Error::SymmetryViolation { .. }));
        let ok = SpinNetworkModel::custom(3, &drift, &[], GroupSpec::trivial(3));
        assert!(ok.is_ok());
    }
}
