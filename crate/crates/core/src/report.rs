//! Serializable decomposition reports.
//!
//! Complex matrices are stored as nested arrays of `[re, im]` pairs. The
//! stored deviations are enough to recompute the pass/fail status after a
//! round trip through JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::{
    assemble_verified, block_check, block_lie_closure, commutant_nullspace_oracle,
    group_block_audit, verify_gys_family, ChangeOfBasis, ColumnLabel, GroupAudit, GysFamily,
    LieClosureResult, Tolerances, VerificationReport,
};
use crate::error::Result;
use crate::group::GroupSpec;
use crate::linalg::{CMatrix, LinearOperator, SymmetryFlags};
use crate::spin::SpinNetworkModel;
use crate::tensor::counting::{
    burnside_orbit_count, commutant_dim_trace_oracle, dim_u_cyclic, dim_u_symmetric,
};
use crate::tensor::{element_trace, ket_string, tensor_dim, TensorRep};

pub const SCHEMA_VERSION: u32 = 1;

pub type ComplexGrid = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_grid(m: &CMatrix) -> ComplexGrid {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn grid_to_matrix(g: &ComplexGrid) -> CMatrix {
    let rows = g.len();
    let cols = g.first().map_or(0, Vec::len);
    CMatrix::from_fn(rows, cols, |r, c| {
        num_complex::Complex64::new(g[r][c][0], g[r][c][1])
    })
}

/// The run settings echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub topology: String,
    pub n: usize,
    pub group: String,
    pub tolerances: Tolerances,
    pub with_lie_closure: bool,
    pub with_oracles: bool,
    pub emit_basis: bool,
    pub classical_symmetrizers: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub label: String,
    pub class: usize,
    pub image_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tableau: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub character: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub label: String,
    pub d: usize,
    pub m: usize,
    pub members: Vec<String>,
    pub ranges: Vec<(usize, usize)>,
    /// Linking element from copy 0 to each copy.
    pub links: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationEntry {
    pub completeness: f64,
    pub orthogonality: f64,
    pub primitivity: f64,
    pub hermiticity: f64,
    pub worst_pair: Option<(String, String)>,
    pub primitivity_samples: usize,
    pub primitivity_sampled: bool,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationEntry {
    fn from_report(family: &GysFamily, r: &VerificationReport) -> Self {
        VerificationEntry {
            completeness: r.completeness,
            orthogonality: r.orthogonality,
            primitivity: r.primitivity,
            hermiticity: r.hermiticity,
            worst_pair: r.worst_pair.map(|(i, j)| {
                (family.records[i].label.clone(), family.records[j].label.clone())
            }),
            primitivity_samples: r.primitivity_samples,
            primitivity_sampled: r.primitivity_sampled,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }

    fn max_deviation(&self) -> f64 {
        self.completeness
            .max(self.orthogonality)
            .max(self.primitivity)
            .max(self.hermiticity)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub columns: Vec<ColumnLabel>,
    /// Columns in ket notation.
    pub kets: Vec<String>,
    pub matrix: ComplexGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub label: String,
    pub symmetry_deviation: Option<f64>,
    pub leakage: f64,
    pub copy_deviation: Vec<f64>,
    /// Representative block per class.
    pub blocks: Vec<ComplexGrid>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub generator: String,
    pub leakage: f64,
    pub pattern_deviation: f64,
    /// `Λ(g)` per class.
    pub lambdas: Vec<ComplexGrid>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub burnside: u128,
    pub trace: u128,
    pub nullspace: Option<usize>,
    pub class_sum: usize,
    /// Closed form for the full symmetric or cyclic group on qubits.
    pub closed_form: Option<u128>,
}

impl OracleEntry {
    pub fn agree(&self) -> bool {
        let c = self.class_sum as u128;
        self.burnside == c
            && self.trace == c
            && self.nullspace.is_none_or(|x| x as u128 == c)
            && self.closed_form.is_none_or(|x| x == c)
    }
}

/// Burnside count, fixed-point trace oracle, nullspace oracle where small
/// enough, and the closed form, against `Σ d²` over the family's classes.
pub fn oracle_cross_check(family: &GysFamily, d: usize) -> Result<OracleEntry> {
    let spec = &family.group;
    let class_sum = family
        .classes
        .iter()
        .map(|c| {
            let p = family.records[c.members[0]].element.to_complex();
            let dim = element_trace(&p, d).re.round().max(0.0) as usize;
            dim * dim
        })
        .sum();
    let nullspace = match commutant_nullspace_oracle(spec, d) {
        Ok(x) => Some(x),
        Err(e) if e.is_resource_guard() => None,
        Err(e) => return Err(e),
    };
    let closed_form = match (spec, d) {
        (GroupSpec::Symmetric(n), 2) if *n >= 1 => Some(dim_u_symmetric(*n)),
        (GroupSpec::Cyclic(n), 2) if *n >= 1 => Some(dim_u_cyclic(*n)),
        _ => None,
    };
    Ok(OracleEntry {
        burnside: burnside_orbit_count(spec, d * d)?,
        trace: commutant_dim_trace_oracle(spec, d)?,
        nullspace,
        class_sum,
        closed_form,
    })
}

pub fn family_entries(family: &GysFamily, d: usize) -> Vec<FamilyEntry> {
    family
        .records
        .iter()
        .map(|r| FamilyEntry {
            label: r.label.clone(),
            class: r.class,
            image_dim: element_trace(&r.element.to_complex(), d).re.round().max(0.0) as usize,
            tableau: r.tableau.as_ref().map(|t| t.label()),
            character: r.character_label.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReportFile {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub group: GroupSpec,
    pub family: Vec<FamilyEntry>,
    pub verification: VerificationEntry,
    pub classes: Vec<ClassEntry>,
    pub unitarity_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<BasisEntry>,
    pub operators: Vec<OperatorEntry>,
    pub group_audit: Vec<AuditEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lie_closure: Option<LieClosureResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracles: Option<OracleEntry>,
    pub max_deviations: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    pub pass: bool,
}

const QUBIT: usize = 2;

impl DecompositionReportFile {
    /// Runs the pipeline on `model` with `family`. Tolerance failures are
    /// recorded in the report; only structural errors are returned.
    pub fn build(config: ConfigEcho, model: &SpinNetworkModel, family: &GysFamily) -> Result<Self> {
        let tol = config.tolerances;
        let verification = verify_gys_family(family, QUBIT, tol.block_tol)?;
        let mut report = DecompositionReportFile {
            schema_version: SCHEMA_VERSION,
            group: family.group.clone(),
            family: family_entries(family, QUBIT),
            verification: VerificationEntry::from_report(family, &verification),
            classes: Vec::new(),
            unitarity_deviation: None,
            basis: None,
            operators: Vec::new(),
            group_audit: Vec::new(),
            lie_closure: None,
            oracles: None,
            max_deviations: BTreeMap::new(),
            failures: Vec::new(),
            pass: false,
            config,
        };
        if report.config.with_oracles {
            report.oracles = Some(oracle_cross_check(family, QUBIT)?);
        }
        if verification.pass {
            let cob = assemble_verified(family, QUBIT)?;
            report.fill_from_basis(&cob, model)?;
        }
        report.finish();
        Ok(report)
    }

    fn fill_from_basis(&mut self, cob: &ChangeOfBasis, model: &SpinNetworkModel) -> Result<()> {
        let tol = self.config.tolerances;
        self.unitarity_deviation = Some(cob.unitarity_deviation);
        self.classes = cob
            .classes
            .iter()
            .map(|c| ClassEntry {
                label: c.label.clone(),
                d: c.d,
                m: c.m,
                members: c.member_labels.clone(),
                ranges: (0..c.m)
                    .map(|j| {
                        let r = c.copy_range(j);
                        (r.start, r.end)
                    })
                    .collect(),
                links: c.links.clone(),
            })
            .collect();
        if self.config.emit_basis {
            let n = cob.n;
            self.basis = Some(BasisEntry {
                columns: cob.columns.clone(),
                kets: cob
                    .unitary
                    .column_iter()
                    .map(|c| ket_string(&c.into_owned(), n, cob.d, tol.zero_tol))
                    .collect(),
                matrix: matrix_to_grid(&cob.unitary),
            });
        }
        let ops: Vec<(&str, &LinearOperator)> = model
            .generators()
            .into_iter()
            .map(|g| (g.label.as_str(), &g.op))
            .collect();
        let symmetry: Vec<f64> = ops
            .iter()
            .map(|(_, op)| symmetry_deviation(cob, op))
            .collect::<Result<_>>()?;
        let blocks = block_check(cob, &ops, tol.block_tol);
        self.operators = blocks
            .operators
            .iter()
            .zip(symmetry)
            .map(|(o, s)| OperatorEntry {
                label: o.label.clone(),
                symmetry_deviation: Some(s),
                leakage: o.leakage,
                copy_deviation: o.copy_deviation.clone(),
                blocks: o.blocks.iter().map(matrix_to_grid).collect(),
            })
            .collect();
        let audit = group_block_audit(cob, false, tol.block_tol)?;
        self.group_audit = audit_entries(&audit);
        if self.config.with_lie_closure {
            self.lie_closure = Some(block_lie_closure(&blocks, tol.rank_tol)?);
        }
        Ok(())
    }

    fn deviations(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        let v = &self.verification;
        out.insert("completeness".to_owned(), v.completeness);
        out.insert("orthogonality".to_owned(), v.orthogonality);
        out.insert("primitivity".to_owned(), v.primitivity);
        out.insert("hermiticity".to_owned(), v.hermiticity);
        if let Some(u) = self.unitarity_deviation {
            out.insert("unitarity".to_owned(), u);
        }
        let fold = |xs: &mut dyn Iterator<Item = f64>| xs.fold(0.0, f64::max);
        if !self.operators.is_empty() {
            out.insert(
                "symmetry".to_owned(),
                fold(&mut self.operators.iter().filter_map(|o| o.symmetry_deviation)),
            );
            out.insert("leakage".to_owned(), fold(&mut self.operators.iter().map(|o| o.leakage)));
            out.insert(
                "copy_mismatch".to_owned(),
                fold(&mut self.operators.iter().flat_map(|o| o.copy_deviation.iter().copied())),
            );
        }
        if !self.group_audit.is_empty() {
            out.insert(
                "group_pattern".to_owned(),
                fold(&mut self.group_audit.iter().map(|a| a.leakage.max(a.pattern_deviation))),
            );
        }
        out
    }

    /// Failures implied by the stored numbers.
    pub fn recompute_failures(&self) -> Vec<String> {
        let tol = self.config.tolerances.block_tol;
        let mut out = Vec::new();
        if self.verification.max_deviation().is_nan() || self.verification.max_deviation() >= tol {
            out.push("family verification".to_owned());
        }
        if self.unitarity_deviation.is_none() {
            out.push("no change of basis".to_owned());
        }
        for (key, value) in self.deviations() {
            if value.is_nan() || value >= tol {
                out.push(format!("{key} deviation {value:e}"));
            }
        }
        if let Some(o) = &self.oracles {
            if !o.agree() {
                out.push("oracle mismatch".to_owned());
            }
        }
        out
    }

    pub fn recompute_status(&self) -> bool {
        self.recompute_failures().is_empty()
    }

    fn finish(&mut self) {
        self.max_deviations = self.deviations();
        self.failures = self.recompute_failures();
        self.pass = self.failures.is_empty();
    }
}

fn symmetry_deviation(cob: &ChangeOfBasis, op: &LinearOperator) -> Result<f64> {
    let gens = cob.group.generators();
    let rep = TensorRep::new(cob.n, cob.d, &gens)?;
    let mut worst = 0.0f64;
    for g in &gens {
        let rho = LinearOperator::from_sparse(rep.rho(g), SymmetryFlags::UNITARY)?;
        worst = worst.max(op.commutator_deviation(&rho));
    }
    Ok(worst)
}

fn audit_entries(audit: &GroupAudit) -> Vec<AuditEntry> {
    audit
        .generators
        .iter()
        .map(|g| AuditEntry {
            generator: g.generator.to_string(),
            leakage: g.leakage,
            pattern_deviation: g.pattern_deviation,
            lambdas: g.lambdas.iter().map(matrix_to_grid).collect(),
        })
        .collect()
}

/// Verification and oracle results without a change of basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReportFile {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub d: usize,
    pub family: Vec<FamilyEntry>,
    pub verification: VerificationEntry,
    pub oracles: OracleEntry,
    pub pass: bool,
}

impl VerifyReportFile {
    pub fn build(family: &GysFamily, d: usize, tol: f64) -> Result<Self> {
        tensor_dim(family.degree(), d)?;
        let verification = verify_gys_family(family, d, tol)?;
        let oracles = oracle_cross_check(family, d)?;
        let pass = verification.pass && oracles.agree();
        Ok(VerifyReportFile {
            schema_version: SCHEMA_VERSION,
            group: family.group.clone(),
            d,
            family: family_entries(family, d),
            verification: VerificationEntry::from_report(family, &verification),
            oracles,
            pass,
        })
    }
}
