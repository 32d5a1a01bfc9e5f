//! Real Lie algebra generated by skew-Hermitian matrices.
//!
//! The span is grown breadth-first: each round commutes the directions
//! admitted in the previous round with the whole current basis. Directions
//! live in the real vector space of complex matrices with inner product
//! `Re tr(X†Y)`.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, LinearOperator};

use super::blocks::BlockReport;

pub const ROUND_CAP: usize = 1000;
/// Commutators below this norm are treated as zero regardless of scale.
pub const NORM_FLOOR: f64 = 1e-10;

fn flatten(m: &CMatrix) -> DVector<f64> {
    DVector::from_iterator(2 * m.len(), m.iter().flat_map(|z| [z.re, z.im]))
}

/// Orthonormal basis of a real span, with the matrices that produced it.
struct RealSpan {
    directions: Vec<DVector<f64>>,
    elements: Vec<CMatrix>,
    rel_tol: f64,
}

impl RealSpan {
    fn new(rel_tol: f64) -> Self {
        RealSpan {
            directions: Vec::new(),
            elements: Vec::new(),
            rel_tol,
        }
    }

    fn admit(&mut self, m: CMatrix) -> bool {
        let v = flatten(&m);
        let norm0 = v.norm();
        if norm0 <= NORM_FLOOR {
            return false;
        }
        let mut r = v;
        for _ in 0..2 {
            for q in &self.directions {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let norm = r.norm();
        if norm <= self.rel_tol * norm0 {
            return false;
        }
        self.directions.push(r / norm);
        // Normalized elements keep commutator norms from drifting.
        self.elements.push(m.unscale(norm0));
        true
    }
}

/// Dimension of a Lie closure and the number of commutator rounds used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureDimension {
    pub dimension: usize,
    pub rounds: usize,
}

/// Real dimension of the Lie algebra generated by `generators`.
pub fn closure_dimension(generators: &[CMatrix], rank_tol: f64) -> Result<ClosureDimension> {
    let mut span = RealSpan::new(rank_tol);
    for g in generators {
        span.admit(g.clone());
    }
    let mut frontier = 0..span.elements.len();
    let mut rounds = 0;
    while !frontier.is_empty() {
        if rounds == ROUND_CAP {
            return Err(Error::IterationCap { rounds });
        }
        rounds += 1;
        let start = span.elements.len();
        let candidates: Vec<CMatrix> = frontier
            .clone()
            .into_par_iter()
            .flat_map_iter(|i| {
                let elements = &span.elements;
                let x = &elements[i];
                (0..start).filter(move |&j| j != i).map(move |j| {
                    let y = &elements[j];
                    x * y - y * x
                })
            })
            .collect();
        for c in candidates {
            span.admit(c);
        }
        frontier = start..span.elements.len();
    }
    Ok(ClosureDimension {
        dimension: span.elements.len(),
        rounds,
    })
}

/// Closure restricted to one class block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockClosure {
    pub label: String,
    pub d: usize,
    pub m: usize,
    pub dimension: usize,
    /// The closure spans `su(d)` or `u(d)` on the block.
    pub full: bool,
    /// `"u(d)"`, `"su(d)"`, or `"proper"` when neither.
    pub algebra: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieClosureResult {
    pub generator_labels: Vec<String>,
    pub dimension: usize,
    pub rounds: usize,
    /// `Σ d²` over nonempty classes; empty when no blocks were given.
    pub commutant_dimension: Option<usize>,
    /// Per-block closures in class order; empty classes are skipped.
    pub blocks: Vec<BlockClosure>,
}

impl LieClosureResult {
    /// Commutant dimension minus closure dimension.
    pub fn gap(&self) -> Option<usize> {
        self.commutant_dimension.map(|c| c - self.dimension)
    }

    pub fn all_blocks_full(&self) -> bool {
        self.blocks.iter().all(|b| b.full)
    }
}

fn algebra_name(d: usize, dim: usize) -> (bool, String) {
    if dim == d * d {
        (true, format!("u({d})"))
    } else if dim + 1 == d * d {
        (true, format!("su({d})"))
    } else {
        (false, "proper".to_owned())
    }
}

/// Closure of full-size operators, without block information.
pub fn lie_closure(generators: &[(&str, &LinearOperator)], rank_tol: f64) -> Result<LieClosureResult> {
    let mats: Vec<CMatrix> = generators.iter().map(|(_, op)| op.to_dense()).collect();
    let ClosureDimension { dimension, rounds } = closure_dimension(&mats, rank_tol)?;
    Ok(LieClosureResult {
        generator_labels: generators.iter().map(|(l, _)| l.to_string()).collect(),
        dimension,
        rounds,
        commutant_dimension: None,
        blocks: Vec::new(),
    })
}

/// Closure computed on the representative blocks of a block report.
///
/// Equal copies carry no extra information, so the global closure is taken
/// on the direct sum of one block per class, and each block is closed on its
/// own as well.
pub fn block_lie_closure(report: &BlockReport, rank_tol: f64) -> Result<LieClosureResult> {
    let nonempty: Vec<usize> = (0..report.classes.len())
        .filter(|&c| report.classes[c].d > 0)
        .collect();
    let total: usize = nonempty.iter().map(|&c| report.classes[c].d).sum();
    let direct_sums: Vec<CMatrix> = report
        .operators
        .iter()
        .map(|op| {
            let mut m = CMatrix::zeros(total, total);
            let mut at = 0;
            for &c in &nonempty {
                let b = &op.blocks[c];
                m.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
                at += b.nrows();
            }
            m
        })
        .collect();
    let global = closure_dimension(&direct_sums, rank_tol)?;
    let blocks = nonempty
        .par_iter()
        .map(|&c| -> Result<BlockClosure> {
            let layout = &report.classes[c];
            let mats: Vec<CMatrix> = report.operators.iter().map(|o| o.blocks[c].clone()).collect();
            let dim = closure_dimension(&mats, rank_tol)?.dimension;
            let (full, algebra) = algebra_name(layout.d, dim);
            Ok(BlockClosure {
                label: layout.label.clone(),
                d: layout.d,
                m: layout.m,
                dimension: dim,
                full,
                algebra,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LieClosureResult {
        generator_labels: report.operators.iter().map(|o| o.label.clone()).collect(),
        dimension: global.dimension,
        rounds: global.rounds,
        commutant_dimension: Some(nonempty.iter().map(|&c| report.classes[c].d.pow(2)).sum()),
        blocks,
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::linalg::kron;
    use crate::spin::{pauli, Axis};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use proptest::test_runner::RngSeed;

    fn generators() -> Vec<CMatrix> {
        let id = CMatrix::identity(2, 2);
        let minus_i = Complex64::new(0.0, -1.0);
        vec![
            kron(&pauli(Axis::X), &id) * minus_i,
            kron(&pauli(Axis::Z), &pauli(Axis::Z)) * minus_i,
            kron(&id, &pauli(Axis::Y)) * minus_i,
            (kron(&pauli(Axis::X), &id) + kron(&id, &pauli(Axis::X))) * minus_i,
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig { rng_seed: RngSeed::Fixed(0x5EED), cases: 32, ..ProptestConfig::default() })]

        #[test]
        fn dimension_ignores_generator_order(order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), keep in 1usize..=4) {
            let all = generators();
            let picked: Vec<usize> = order[..keep].to_vec();
            let mut sorted = picked.clone();
            sorted.sort_unstable();
            let shuffled: Vec<CMatrix> = picked.iter().map(|&i| all[i].clone()).collect();
            let reference: Vec<CMatrix> = sorted.iter().map(|&i| all[i].clone()).collect();
            prop_assert_eq!(
                closure_dimension(&shuffled, 1e-8).unwrap().dimension,
                closure_dimension(&reference, 1e-8).unwrap().dimension
            );
        }
    }
}
