//! Block structure of operators in the symmetry-adapted basis.
//!
//! An operator commuting with the group becomes `⊕_A 1_{m_A} ⊗ A` after the
//! change of basis, while `ρ(g)` itself becomes `⊕_A Λ_A(g) ⊗ 1_{d_A}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_group, Permutation};
use crate::linalg::{max_abs, CMatrix, LinearOperator, SymmetryFlags};
use crate::tensor::TensorRep;

use super::basis::ChangeOfBasis;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassLayout {
    pub label: String,
    pub d: usize,
    pub m: usize,
    /// Half-open column range of each copy.
    pub ranges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBlocks {
    pub label: String,
    /// Copy-0 block per class; `0 × 0` for empty classes.
    pub blocks: Vec<CMatrix>,
    /// Largest entrywise difference between a copy and copy 0, per class.
    pub copy_deviation: Vec<f64>,
    /// Largest entry outside the diagonal `(class, copy)` blocks.
    pub leakage: f64,
    /// `‖[op, ρ(g)]‖` maximized over the group generators; `None` when not
    /// checked.
    pub symmetry_deviation: Option<f64>,
}

impl OperatorBlocks {
    pub fn max_copy_deviation(&self) -> f64 {
        self.copy_deviation.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub classes: Vec<ClassLayout>,
    pub operators: Vec<OperatorBlocks>,
    pub tolerance: f64,
    pub pass: bool,
}

impl BlockReport {
    pub fn max_leakage(&self) -> f64 {
        self.operators.iter().map(|o| o.leakage).fold(0.0, f64::max)
    }

    pub fn max_copy_deviation(&self) -> f64 {
        self.operators
            .iter()
            .map(OperatorBlocks::max_copy_deviation)
            .fold(0.0, f64::max)
    }

    pub fn operator(&self, label: &str) -> Option<&OperatorBlocks> {
        self.operators.iter().find(|o| o.label == label)
    }
}

pub(crate) fn layouts(cob: &ChangeOfBasis) -> Vec<ClassLayout> {
    cob.classes
        .iter()
        .map(|c| ClassLayout {
            label: c.label.clone(),
            d: c.d,
            m: c.m,
            ranges: (0..c.m)
                .map(|j| {
                    let r = c.copy_range(j);
                    (r.start, r.end)
                })
                .collect(),
        })
        .collect()
}

/// Owner of each column as a `(class, copy)` pair.
fn column_owner(cob: &ChangeOfBasis) -> Vec<(usize, usize)> {
    cob.columns.iter().map(|c| (c.class, c.copy)).collect()
}

fn split_blocks(cob: &ChangeOfBasis, label: &str, t: &CMatrix) -> OperatorBlocks {
    let owner = column_owner(cob);
    let mut leakage = 0.0f64;
    for (c, oc) in owner.iter().enumerate() {
        for (r, or) in owner.iter().enumerate() {
            if or != oc {
                leakage = leakage.max(t[(r, c)].norm());
            }
        }
    }
    let mut blocks = Vec::with_capacity(cob.classes.len());
    let mut copy_deviation = Vec::with_capacity(cob.classes.len());
    for class in &cob.classes {
        let r0 = class.copy_range(0);
        let rep = t.view((r0.start, r0.start), (class.d, class.d)).into_owned();
        let dev = (1..class.m)
            .map(|j| {
                let r = class.copy_range(j);
                max_abs(&(t.view((r.start, r.start), (class.d, class.d)) - &rep))
            })
            .fold(0.0, f64::max);
        blocks.push(rep);
        copy_deviation.push(dev);
    }
    OperatorBlocks {
        label: label.to_owned(),
        blocks,
        copy_deviation,
        leakage,
        symmetry_deviation: None,
    }
}

/// `U† op U` split into per-class blocks, without raising on failure.
pub fn block_check(cob: &ChangeOfBasis, ops: &[(&str, &LinearOperator)], tol: f64) -> BlockReport {
    let operators: Vec<OperatorBlocks> = ops
        .iter()
        .map(|(label, op)| split_blocks(cob, label, &op.conjugate_by(&cob.unitary)))
        .collect();
    let pass = operators
        .iter()
        .all(|o| o.leakage < tol && o.max_copy_deviation() < tol);
    BlockReport {
        classes: layouts(cob),
        operators,
        tolerance: tol,
        pass,
    }
}

fn symmetry_operators(cob: &ChangeOfBasis) -> Result<Vec<LinearOperator>> {
    let gens = cob.group.generators();
    let rep = TensorRep::new(cob.n, cob.d, &gens)?;
    gens.iter()
        .map(|g| LinearOperator::from_sparse(rep.rho(g), SymmetryFlags::UNITARY))
        .collect()
}

/// Checks that each operator commutes with the symmetry, transforms it and
/// requires block-diagonal form with identical copies.
pub fn transform_and_block_check(
    cob: &ChangeOfBasis,
    ops: &[(&str, &LinearOperator)],
    tol: f64,
) -> Result<BlockReport> {
    let symmetry = symmetry_operators(cob)?;
    let mut deviations = Vec::with_capacity(ops.len());
    for (label, op) in ops {
        if op.dim() != cob.dim() {
            return Err(Error::DimensionMismatch {
                expected: cob.dim(),
                found: op.dim(),
            });
        }
        let deviation = symmetry
            .iter()
            .map(|s| op.commutator_deviation(s))
            .fold(0.0, f64::max);
        if deviation > tol {
            return Err(Error::SymmetryViolation {
                label: label.to_string(),
                deviation,
            });
        }
        deviations.push(deviation);
    }
    let mut report = block_check(cob, ops, tol);
    for (o, dev) in report.operators.iter_mut().zip(deviations) {
        o.symmetry_deviation = Some(dev);
    }
    for o in &report.operators {
        if o.leakage >= tol {
            return Err(Error::BlockLeakage {
                label: o.label.clone(),
                leakage: o.leakage,
            });
        }
        for (class, &dev) in o.copy_deviation.iter().enumerate() {
            if dev >= tol {
                return Err(Error::CopyMismatch {
                    label: o.label.clone(),
                    class: cob.classes[class].label.clone(),
                    deviation: dev,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorAudit {
    pub generator: Permutation,
    /// `Λ_A(g)`, one `m × m` matrix per class (`0 × 0` for empty classes).
    pub lambdas: Vec<CMatrix>,
    /// Largest entry of `U† ρ(g) U` outside the class blocks.
    pub leakage: f64,
    /// Largest deviation from `Λ ⊗ 1` inside the class blocks.
    pub pattern_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupAudit {
    pub generators: Vec<GeneratorAudit>,
    pub tolerance: f64,
    pub pass: bool,
}

impl GroupAudit {
    pub fn max_deviation(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| g.leakage.max(g.pattern_deviation))
            .fold(0.0, f64::max)
    }
}

fn audit_one(cob: &ChangeOfBasis, g: &Permutation, t: &CMatrix) -> GeneratorAudit {
    let class_of: Vec<usize> = cob.columns.iter().map(|c| c.class).collect();
    let mut leakage = 0.0f64;
    for (c, &kc) in class_of.iter().enumerate() {
        for (r, &kr) in class_of.iter().enumerate() {
            if kr != kc {
                leakage = leakage.max(t[(r, c)].norm());
            }
        }
    }
    let mut pattern_deviation = 0.0f64;
    let mut lambdas = Vec::with_capacity(cob.classes.len());
    for class in &cob.classes {
        if class.d == 0 {
            lambdas.push(DMatrix::zeros(0, 0));
            continue;
        }
        let lambda = DMatrix::from_fn(class.m, class.m, |a, b| {
            t[(class.copy_range(a).start, class.copy_range(b).start)]
        });
        for a in 0..class.m {
            for b in 0..class.m {
                let (ra, rb) = (class.copy_range(a), class.copy_range(b));
                let sub = t.view((ra.start, rb.start), (class.d, class.d));
                let expected = DMatrix::<Complex64>::identity(class.d, class.d) * lambda[(a, b)];
                pattern_deviation = pattern_deviation.max(max_abs(&(sub - expected)));
            }
        }
        lambdas.push(lambda);
    }
    GeneratorAudit {
        generator: g.clone(),
        lambdas,
        leakage,
        pattern_deviation,
    }
}

/// Transforms `ρ(g)` for every generator (or every element when `all` is
/// set) and measures its distance from the `Λ ⊗ 1` pattern.
pub fn group_block_audit(cob: &ChangeOfBasis, all: bool, tol: f64) -> Result<GroupAudit> {
    let elements = if all {
        enumerate_group(&cob.group)?
    } else {
        cob.group.generators()
    };
    let rep = TensorRep::new(cob.n, cob.d, &elements)?;
    let generators: Vec<GeneratorAudit> = elements
        .iter()
        .map(|g| {
            let t = cob.unitary.adjoint() * rep.permute_rows(g, &cob.unitary);
            audit_one(cob, g, &t)
        })
        .collect();
    let pass = generators
        .iter()
        .all(|g| g.leakage < tol && g.pattern_deviation < tol);
    Ok(GroupAudit {
        generators,
        tolerance: tol,
        pass,
    })
}
