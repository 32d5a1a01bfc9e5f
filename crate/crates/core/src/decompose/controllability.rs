//! End-to-end subspace controllability of a spin network model.

use crate::error::{Error, Result};
use crate::linalg::LinearOperator;
use crate::spin::SpinNetworkModel;

use super::basis::{assemble_verified, ChangeOfBasis};
use super::blocks::{group_block_audit, transform_and_block_check, BlockReport, GroupAudit};
use super::family::{verify_gys_family, GysFamily, VerificationReport};
use super::lie::{block_lie_closure, LieClosureResult};
use super::Tolerances;

/// Alphabet size of spin networks.
const QUBIT: usize = 2;

#[derive(Clone, Debug)]
pub struct ControllabilityReport {
    pub family: GysFamily,
    pub verification: VerificationReport,
    pub basis: ChangeOfBasis,
    pub blocks: BlockReport,
    pub audit: GroupAudit,
    pub lie: LieClosureResult,
}

impl ControllabilityReport {
    /// Every block closure spans `u(d)` or `su(d)`.
    pub fn subspace_controllable(&self) -> bool {
        self.lie.all_blocks_full()
    }
}

/// Family, basis, block check, group audit and Lie closures for `model`.
pub fn subspace_controllability_report(
    model: &SpinNetworkModel,
    tol: &Tolerances,
) -> Result<ControllabilityReport> {
    let family = GysFamily::for_group(&model.symmetry)?;
    let verification = verify_gys_family(&family, QUBIT, tol.block_tol)?;
    if !verification.pass {
        return Err(Error::VerificationFailed(verification.failures().join("; ")));
    }
    let basis = assemble_verified(&family, QUBIT)?;
    let ops: Vec<(&str, &LinearOperator)> = model
        .generators()
        .into_iter()
        .map(|g| (g.label.as_str(), &g.op))
        .collect();
    let blocks = transform_and_block_check(&basis, &ops, tol.block_tol)?;
    let audit = group_block_audit(&basis, false, tol.block_tol)?;
    let lie = block_lie_closure(&blocks, tol.rank_tol)?;
    Ok(ControllabilityReport {
        family,
        verification,
        basis,
        blocks,
        audit,
        lie,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::linalg::SymmetryFlags;
    use crate::spin::{hamiltonians_complete, hamiltonians_ring, pauli, Axis};

    #[test]
    fn ring3_blocks_are_controllable() {
        let r = subspace_controllability_report(&hamiltonians_ring(3).unwrap(), &Tolerances::default())
            .unwrap();
        assert_eq!(r.lie.dimension, 19);
        let dims: Vec<usize> = r.lie.blocks.iter().map(|b| b.dimension).collect();
        assert_eq!(dims, vec![16, 4, 4]);
        assert!(r.subspace_controllable());
        assert_eq!(r.lie.commutant_dimension, Some(24));
        assert!(r.audit.pass);
    }

    #[test]
    fn complete3_closure() {
        let r = subspace_controllability_report(&hamiltonians_complete(3).unwrap(), &Tolerances::default())
            .unwrap();
        assert_eq!(r.lie.dimension, 19);
        assert!(r.subspace_controllable());
    }

    #[test]
    fn single_spin() {
        let zero = LinearOperator::from_dense(crate::linalg::CMatrix::zeros(2, 2), SymmetryFlags::HERMITIAN)
            .unwrap();
        let x = LinearOperator::from_dense(pauli(Axis::X), SymmetryFlags::HERMITIAN).unwrap();
        let y = LinearOperator::from_dense(pauli(Axis::Y), SymmetryFlags::HERMITIAN).unwrap();
        let model =
            SpinNetworkModel::custom(1, &zero, &[("X", x), ("Y", y)], GroupSpec::trivial(1)).unwrap();
        let r = subspace_controllability_report(&model, &Tolerances::default()).unwrap();
        assert_eq!(r.lie.dimension, 3);
        assert_eq!(r.lie.blocks[0].algebra, "su(2)");
    }
}
