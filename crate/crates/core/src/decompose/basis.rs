//! Symmetry-adapted orthonormal basis.
//!
//! For each isomorphism class the image of its first member is spanned by an
//! orthonormal frame `X`. Every sibling `P_j` receives the transported frame
//! `P_j ρ(r) X`, where `r` is the first group element making it nonzero. In
//! exact arithmetic this frame is already orthonormal up to a common scale;
//! the unitary polar factor removes that scale and any rounding drift. Using
//! transported frames makes every commuting operator act by the same matrix
//! on all copies of a class.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_group, GroupSpec, Permutation};
use crate::linalg::{columns_to_matrix, polar_factor, unitary_deviation, CMatrix, SparseMatrix};
use crate::tensor::{projector_image_basis, TensorRep};

use super::family::{verify_gys_family, GysFamily};

/// Unitarity tolerance for the assembled change of basis.
pub const ASSEMBLY_TOL: f64 = 1e-9;
/// Frobenius norm above which `P_k ρ(r) P_j` counts as nonzero.
pub const LINK_TOL: f64 = 1e-8;
/// Smallest accepted ratio of singular values of a transported frame.
pub const TRANSPORT_RATIO_TOL: f64 = 1e-8;

/// Which class, copy and within-copy index a column carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub class: usize,
    pub copy: usize,
    pub index: usize,
}

/// Layout of one isomorphism class inside the new basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassBlock {
    pub label: String,
    /// Dimension of each copy.
    pub d: usize,
    /// Number of copies, one per family member.
    pub m: usize,
    /// First column of the class.
    pub start: usize,
    /// Family records providing the copies, in column order.
    pub members: Vec<usize>,
    /// Record labels of the members.
    pub member_labels: Vec<String>,
    /// Linking element from the first copy to each copy, in cycle notation.
    pub links: Vec<Option<String>>,
}

impl ClassBlock {
    /// Column range of copy `j`.
    pub fn copy_range(&self, j: usize) -> std::ops::Range<usize> {
        let s = self.start + j * self.d;
        s..s + self.d
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChangeOfBasis {
    pub group: GroupSpec,
    pub n: usize,
    pub d: usize,
    /// Columns are the new basis vectors.
    pub unitary: CMatrix,
    pub columns: Vec<ColumnLabel>,
    pub classes: Vec<ClassBlock>,
    pub unitarity_deviation: f64,
}

impl ChangeOfBasis {
    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Columns belonging to one copy of one class.
    pub fn copy_columns(&self, class: usize, copy: usize) -> CMatrix {
        let range = self.classes[class].copy_range(copy);
        self.unitary.columns(range.start, range.len()).into_owned()
    }
}

fn rep_for(group: &GroupSpec, d: usize) -> Result<(Vec<Permutation>, TensorRep)> {
    let elements = enumerate_group(group)?;
    let rep = TensorRep::new(group.degree(), d, &elements)?;
    Ok((elements, rep))
}

fn first_link(
    elements: &[Permutation],
    rep: &TensorRep,
    p_k: &SparseMatrix,
    x: &CMatrix,
) -> Option<(Permutation, CMatrix)> {
    if x.ncols() == 0 {
        return None;
    }
    elements.iter().find_map(|r| {
        let y = p_k.mul_dense(&rep.permute_rows(r, x));
        (y.norm() > LINK_TOL).then(|| (r.clone(), y))
    })
}

/// The first group element `r` (in enumeration order) with
/// `‖P_k ρ(r) P_j‖ > 1e-8`, or `None` when the images are not linked.
pub fn find_linking_element(
    family: &GysFamily,
    j: usize,
    k: usize,
    d: usize,
) -> Result<Option<Permutation>> {
    let (elements, rep) = rep_for(&family.group, d)?;
    let x = columns_to_matrix(
        rep.dim(),
        &projector_image_basis(&family.records[j].element, d)?,
    );
    let p_k = rep.materialize(&family.records[k].element.to_complex());
    Ok(first_link(&elements, &rep, &p_k, &x).map(|(r, _)| r))
}

/// Verifies the family and then assembles the change of basis.
pub fn assemble_change_of_basis(family: &GysFamily, d: usize) -> Result<ChangeOfBasis> {
    let report = verify_gys_family(family, d, LINK_TOL)?;
    if !report.pass {
        return Err(Error::VerificationFailed(report.failures().join("; ")));
    }
    assemble_verified(family, d)
}

/// Assembles the change of basis of a family already known to pass
/// verification.
pub fn assemble_verified(family: &GysFamily, d: usize) -> Result<ChangeOfBasis> {
    let (elements, rep) = rep_for(&family.group, d)?;
    let dim = rep.dim();

    let per_class: Vec<(Vec<CMatrix>, Vec<Option<String>>)> = family
        .classes
        .par_iter()
        .map(|class| -> Result<(Vec<CMatrix>, Vec<Option<String>>)> {
            let first = class.members[0];
            let x = columns_to_matrix(
                dim,
                &projector_image_basis(&family.records[first].element, d)?,
            );
            let mut frames = vec![x.clone()];
            let mut links = vec![Some(Permutation::identity(family.degree()).to_string())];
            if x.ncols() == 0 {
                frames.resize(class.members.len(), x);
                links.resize(class.members.len(), None);
                return Ok((frames, links));
            }
            for (copy, &member) in class.members.iter().enumerate().skip(1) {
                let p = rep.materialize(&family.records[member].element.to_complex());
                let (r, y) = first_link(&elements, &rep, &p, &x).ok_or_else(|| Error::MissingLink {
                    class: class.label.clone(),
                    from: 0,
                    to: copy,
                })?;
                let (w, ratio) = polar_factor(&y);
                if ratio < TRANSPORT_RATIO_TOL {
                    return Err(Error::RankDeficientTransport {
                        class: class.label.clone(),
                        ratio,
                    });
                }
                frames.push(w);
                links.push(Some(r.to_string()));
            }
            Ok((frames, links))
        })
        .collect::<Result<_>>()?;

    let mut columns = Vec::with_capacity(dim);
    let mut classes = Vec::with_capacity(family.classes.len());
    let mut blocks: Vec<CMatrix> = Vec::new();
    for (ci, (class, (frames, links))) in family.classes.iter().zip(per_class).enumerate() {
        let d_class = frames[0].ncols();
        classes.push(ClassBlock {
            label: class.label.clone(),
            d: d_class,
            m: class.members.len(),
            start: columns.len(),
            members: class.members.clone(),
            member_labels: class
                .members
                .iter()
                .map(|&i| family.records[i].label.clone())
                .collect(),
            links,
        });
        for (copy, frame) in frames.into_iter().enumerate() {
            if frame.ncols() != d_class {
                return Err(Error::DimensionMismatch {
                    expected: d_class,
                    found: frame.ncols(),
                });
            }
            for index in 0..d_class {
                columns.push(ColumnLabel {
                    class: ci,
                    copy,
                    index,
                });
            }
            blocks.push(frame);
        }
    }
    if columns.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: columns.len(),
        });
    }
    let mut unitary = DMatrix::zeros(dim, dim);
    let mut offset = 0;
    for b in blocks {
        unitary.columns_mut(offset, b.ncols()).copy_from(&b);
        offset += b.ncols();
    }
    let deviation = unitary_deviation(&unitary);
    if deviation > ASSEMBLY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(ChangeOfBasis {
        group: family.group.clone(),
        n: family.degree(),
        d,
        unitary,
        columns,
        classes,
        unitarity_deviation: deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::family::FamilyKind;

    #[test]
    fn s4_layout() {
        let fam = GysFamily::young(4, FamilyKind::Hermitian).unwrap();
        let cob = assemble_change_of_basis(&fam, 2).unwrap();
        let dm: Vec<(usize, usize)> = cob.classes.iter().map(|c| (c.d, c.m)).collect();
        assert_eq!(dm, vec![(5, 1), (3, 3), (1, 2), (0, 3), (0, 1)]);
        assert_eq!(cob.columns.len(), 16);
        assert!(cob.unitarity_deviation < 1e-12);
    }

    #[test]
    fn linking_elements() {
        let fam = GysFamily::young(4, FamilyKind::Hermitian).unwrap();
        // Records 1..=3 have shape (3,1); record 4 is 12|34.
        assert!(find_linking_element(&fam, 1, 2, 2).unwrap().is_some());
        assert_eq!(find_linking_element(&fam, 0, 4, 2).unwrap(), None);
        assert_eq!(
            find_linking_element(&fam, 1, 1, 2).unwrap(),
            Some(Permutation::identity(4))
        );
    }

    #[test]
    fn reflection_sectors() {
        let fam = GysFamily::for_group(&GroupSpec::Reflection(3)).unwrap();
        let cob = assemble_change_of_basis(&fam, 2).unwrap();
        let dims: Vec<usize> = cob.classes.iter().map(|c| c.d).collect();
        assert_eq!(dims, vec![6, 2]);
    }

    #[test]
    fn failed_family_is_rejected() {
        let fam = GysFamily::young(5, FamilyKind::Classical).unwrap();
        assert!(matches!(
            assemble_change_of_basis(&fam, 2),
            Err(Error::VerificationFailed(_))
        ));
    }
}
