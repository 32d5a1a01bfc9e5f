//! Block decomposition of the tensor space under a permutation symmetry.
//!
//! The pipeline runs family → [`verify_gys_family`] →
//! [`assemble_change_of_basis`] → [`transform_and_block_check`] →
//! [`block_lie_closure`].

pub mod basis;
pub mod blocks;
pub mod controllability;
pub mod family;
pub mod lie;
pub mod oracle;

use serde::{Deserialize, Serialize};

pub use basis::{
    assemble_change_of_basis, assemble_verified, find_linking_element, ChangeOfBasis, ClassBlock,
    ColumnLabel,
};
pub use blocks::{
    block_check, group_block_audit, transform_and_block_check, BlockReport, ClassLayout,
    GeneratorAudit, GroupAudit, OperatorBlocks,
};
pub use controllability::{subspace_controllability_report, ControllabilityReport};
pub use family::{
    verify_gys_family, FamilyKind, GysFamily, GysRecord, IsoClass, VerificationReport,
};
pub use lie::{block_lie_closure, closure_dimension, lie_closure, BlockClosure, LieClosureResult};
pub use oracle::commutant_nullspace_oracle;

/// Numerical thresholds shared by the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Coefficients and amplitudes below this are printed as zero.
    pub zero_tol: f64,
    /// Relative residual for admitting a new Lie direction.
    pub rank_tol: f64,
    /// Verification, leakage and copy-equality threshold.
    pub block_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_tol: 1e-12,
            rank_tol: 1e-8,
            block_tol: 1e-8,
        }
    }
}
