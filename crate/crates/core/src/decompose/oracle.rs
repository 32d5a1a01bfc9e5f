//! Brute-force commutant dimension, for cross-checking the closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::sparse_rank;
use crate::tensor::{index_map, tensor_dim};

/// Largest tensor dimension the oracle accepts.
pub const NULLSPACE_MAX_DIM: usize = 64;

/// `dim {X : X ρ(g) = ρ(g) X for every generator g}`, from the rank of the
/// stacked linear system in the `D²` entries of `X`.
pub fn commutant_nullspace_oracle(spec: &GroupSpec, d: usize) -> Result<usize> {
    let n = spec.degree();
    let dim = tensor_dim(n, d)?;
    if dim > NULLSPACE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            limit: NULLSPACE_MAX_DIM,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut rows = Vec::new();
    for g in spec.generators() {
        let fwd = index_map(&g, d)?;
        let mut back = vec![0; dim];
        for (b, &pb) in fwd.iter().enumerate() {
            back[pb] = b;
        }
        // (Xρ)_{ab} = X_{a,π(b)} and (ρX)_{ab} = X_{π⁻¹(a),b}.
        for (a, &pa) in back.iter().enumerate() {
            for (b, &pb) in fwd.iter().enumerate() {
                let lhs = a * dim + pb;
                let rhs = pa * dim + b;
                if lhs != rhs {
                    rows.push(vec![(lhs, one), (rhs, -one)]);
                }
            }
        }
    }
    Ok(dim * dim - sparse_rank(rows, 1e-12))
}
