//! Complete families of symmetrizers with isomorphism-class metadata, and
//! their numerical verification on the tensor space.

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::gys_family_abelian;
use crate::algebra::{AnyElement, RationalElement};
use crate::error::{Error, Result};
use crate::group::{enumerate_group, GroupSpec, Permutation};
use crate::linalg::SparseMatrix;
use crate::tensor::TensorRep;
use crate::young::{classical_family, ks_family, SymmetrizerRecord, YoungTableau};

/// Exhaustive primitivity check up to this group order; sampled beyond.
pub const EXHAUSTIVE_PRIMITIVITY: usize = 5040;
pub const PRIMITIVITY_SAMPLES: usize = 200;
pub const PRIMITIVITY_SEED: u64 = 0x5EED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Hermitian recursive Young symmetrizers.
    Hermitian,
    /// Normalized `r_T c_T`; not orthogonal beyond four letters.
    Classical,
    /// Character projectors of an Abelian group.
    Character,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GysRecord {
    pub label: String,
    pub element: AnyElement,
    /// Index into [`GysFamily::classes`].
    pub class: usize,
    pub tableau: Option<YoungTableau>,
    pub character_label: Option<Vec<usize>>,
}

/// Records whose images are isomorphic modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoClass {
    pub label: String,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GysFamily {
    pub group: GroupSpec,
    pub kind: FamilyKind,
    pub records: Vec<GysRecord>,
    pub classes: Vec<IsoClass>,
}

impl GysFamily {
    /// Young symmetrizers for `S_n`, character projectors for Abelian groups.
    pub fn for_group(spec: &GroupSpec) -> Result<Self> {
        match spec {
            GroupSpec::Symmetric(n) => Self::young(*n, FamilyKind::Hermitian),
            _ if spec.is_abelian() => Self::abelian(spec),
            _ => Err(Error::UnsupportedGroup(spec.name())),
        }
    }

    /// Young-symmetrizer family; records grouped by shape in partition order.
    pub fn young(n: usize, kind: FamilyKind) -> Result<Self> {
        let records = match kind {
            FamilyKind::Hermitian => ks_family(n)?,
            FamilyKind::Classical => classical_family(n)?,
            FamilyKind::Character => return Err(Error::UnsupportedGroup(format!("S{n}"))),
        };
        Ok(Self::from_young_records(n, kind, records))
    }

    fn from_young_records(n: usize, kind: FamilyKind, records: Vec<SymmetrizerRecord>) -> Self {
        let mut classes: Vec<IsoClass> = Vec::new();
        let mut out = Vec::with_capacity(records.len());
        for (i, rec) in records.into_iter().enumerate() {
            let shape = rec.shape().to_string();
            let class = match classes.iter().position(|c| c.label == shape) {
                Some(c) => c,
                None => {
                    classes.push(IsoClass {
                        label: shape,
                        members: Vec::new(),
                    });
                    classes.len() - 1
                }
            };
            classes[class].members.push(i);
            out.push(GysRecord {
                label: rec.tableau.label(),
                element: AnyElement::Rational(rec.element),
                class,
                tableau: Some(rec.tableau),
                character_label: None,
            });
        }
        GysFamily {
            group: GroupSpec::Symmetric(n),
            kind,
            records: out,
            classes,
        }
    }

    /// One singleton class per character.
    pub fn abelian(spec: &GroupSpec) -> Result<Self> {
        let recs = gys_family_abelian(spec)?;
        let reflection = matches!(spec, GroupSpec::Reflection(_)) && recs.len() == 2;
        let cyclic = matches!(spec, GroupSpec::Cyclic(_));
        let mut records = Vec::with_capacity(recs.len());
        let mut classes = Vec::with_capacity(recs.len());
        for (i, rec) in recs.into_iter().enumerate() {
            let label = if reflection {
                ["P_S", "P_A"][i].to_string()
            } else if cyclic {
                format!("P_{}", rec.character.label[0])
            } else {
                format!("P_{}", rec.character.label_string())
            };
            classes.push(IsoClass {
                label: label.clone(),
                members: vec![i],
            });
            records.push(GysRecord {
                label,
                element: AnyElement::Complex(rec.element),
                class: i,
                tableau: None,
                character_label: Some(rec.character.label),
            });
        }
        Ok(GysFamily {
            group: spec.clone(),
            kind: FamilyKind::Character,
            records,
            classes,
        })
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.records
            .iter()
            .all(|r| matches!(r.element, AnyElement::Rational(_)))
    }
}

/// Largest deviations from the defining properties of a complete family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `max |Σ P_j - 1|`.
    pub completeness: f64,
    /// `max |P_j P_k|` over `j ≠ k` and `max |P_j² - P_j|`.
    pub orthogonality: f64,
    /// Residual of `P_j ρ(g) P_j` after removing its component along `P_j`.
    pub primitivity: f64,
    /// `max |P_j - P_j†|`.
    pub hermiticity: f64,
    /// The pair `(j, k)` attaining the orthogonality deviation.
    pub worst_pair: Option<(usize, usize)>,
    /// Number of group elements used in the primitivity check.
    pub primitivity_samples: usize,
    pub primitivity_sampled: bool,
    /// `λ_g` with `P_j ρ(g) P_j ≈ λ_g P_j`, per record, in the order the
    /// elements were checked.
    pub lambdas: Vec<Vec<[f64; 2]>>,
    /// The elements the `λ_g` refer to, in cycle notation.
    pub lambda_elements: Vec<String>,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn max_deviation(&self) -> f64 {
        self.completeness
            .max(self.orthogonality)
            .max(self.primitivity)
            .max(self.hermiticity)
    }

    /// Recomputes `pass` from the stored deviations.
    pub fn recompute_pass(&self) -> bool {
        [
            self.completeness,
            self.orthogonality,
            self.primitivity,
            self.hermiticity,
        ]
        .iter()
        .all(|&x| x < self.tolerance)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let checks = [
            ("completeness", self.completeness),
            ("orthogonality", self.orthogonality),
            ("primitivity", self.primitivity),
            ("hermiticity", self.hermiticity),
        ];
        for (name, dev) in checks {
            if dev.is_nan() || dev >= self.tolerance {
                out.push(format!("{name} deviation {dev:e}"));
            }
        }
        out
    }
}

/// Product computed exactly when both factors are rational.
fn product(a: &AnyElement, b: &AnyElement) -> Result<AnyElement> {
    a.multiply(b)
}

fn difference_norm(rep: &TensorRep, a: &AnyElement, b: &AnyElement) -> Result<f64> {
    let diff = a.to_complex().sub(&b.to_complex())?;
    Ok(rep.materialize(&diff).max_abs())
}

/// `Σ conj(A) ∘ B` over matching sparse entries.
fn frobenius_inner(a: &SparseMatrix, b: &SparseMatrix) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for r in 0..a.nrows() {
        let row_b: Vec<(usize, Complex64)> = b.row(r).collect();
        for (c, x) in a.row(r) {
            if let Ok(pos) = row_b.binary_search_by_key(&c, |&(cc, _)| cc) {
                total += x.conj() * row_b[pos].1;
            }
        }
    }
    total
}

fn scaled_residual(x: &SparseMatrix, p: &SparseMatrix) -> (Complex64, f64) {
    let pp = frobenius_inner(p, p).re;
    let lambda = if pp > 0.0 {
        frobenius_inner(p, x) / pp
    } else {
        Complex64::new(0.0, 0.0)
    };
    (lambda, x.add(&p.scale(-lambda)).max_abs())
}

/// Checks completeness, orthogonality, primitivity and hermiticity of the
/// materialized family on `(ℂ^d)^{⊗n}`. Failures are reported, not raised.
pub fn verify_gys_family(family: &GysFamily, d: usize, tol: f64) -> Result<VerificationReport> {
    let n = family.degree();
    let elements = enumerate_group(&family.group)?;
    let rep = TensorRep::new(n, d, &elements)?;

    let mut total = AnyElement::Rational(RationalElement::zero(n));
    for r in &family.records {
        total = total.add(&r.element)?;
    }
    let identity = AnyElement::Rational(RationalElement::identity(n));
    let completeness = difference_norm(&rep, &total, &identity)?;

    let k = family.records.len();
    let pair_devs: Vec<(f64, (usize, usize))> = (0..k)
        .into_par_iter()
        .map(|i| -> Result<(f64, (usize, usize))> {
            let mut worst = (0.0, (i, i));
            for j in 0..k {
                let a = &family.records[i].element;
                let p = product(a, &family.records[j].element)?;
                let dev = if i == j {
                    difference_norm(&rep, &p, a)?
                } else {
                    rep.materialize(&p.to_complex()).max_abs()
                };
                if dev > worst.0 {
                    worst = (dev, (i, j));
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let (orthogonality, worst_pair) = pair_devs
        .into_iter()
        .fold((0.0, None), |(best, pair), (dev, p)| {
            if dev > best {
                (dev, Some(p))
            } else {
                (best, pair)
            }
        });

    let hermiticity = family
        .records
        .iter()
        .map(|r| difference_norm(&rep, &r.element.dagger(), &r.element))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let (sample, sampled): (Vec<Permutation>, bool) = if elements.len() <= EXHAUSTIVE_PRIMITIVITY {
        (elements.clone(), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(PRIMITIVITY_SEED);
        let mut picked: Vec<Permutation> = elements
            .choose_multiple(&mut rng, PRIMITIVITY_SAMPLES)
            .cloned()
            .collect();
        picked.sort();
        (picked, true)
    };
    let per_record: Vec<(f64, Vec<[f64; 2]>)> = family
        .records
        .par_iter()
        .map(|r| -> Result<(f64, Vec<[f64; 2]>)> {
            let p_mat = rep.materialize(&r.element.to_complex());
            let mut worst: f64 = 0.0;
            let mut lambdas = Vec::with_capacity(sample.len());
            for g in &sample {
                let g_el = match &r.element {
                    AnyElement::Rational(_) => AnyElement::Rational(RationalElement::basis(g.clone())),
                    AnyElement::Complex(_) => {
                        AnyElement::Complex(crate::algebra::ComplexElement::basis(g.clone()))
                    }
                };
                let x = product(&product(&r.element, &g_el)?, &r.element)?;
                let (lambda, residual) = scaled_residual(&rep.materialize(&x.to_complex()), &p_mat);
                worst = worst.max(residual);
                lambdas.push([lambda.re, lambda.im]);
            }
            Ok((worst, lambdas))
        })
        .collect::<Result<_>>()?;
    let primitivity = per_record.iter().map(|(w, _)| *w).fold(0.0, f64::max);
    let lambdas = per_record.into_iter().map(|(_, l)| l).collect();

    let mut report = VerificationReport {
        completeness,
        orthogonality,
        primitivity,
        hermiticity,
        worst_pair,
        primitivity_samples: sample.len(),
        primitivity_sampled: sampled,
        lambdas,
        lambda_elements: sample.iter().map(|g| g.to_string()).collect(),
        tolerance: tol,
        pass: false,
    };
    report.pass = report.recompute_pass();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_structure_of_s4() {
        let fam = GysFamily::young(4, FamilyKind::Hermitian).unwrap();
        assert_eq!(fam.len(), 10);
        let sizes: Vec<(String, usize)> = fam
            .classes
            .iter()
            .map(|c| (c.label.clone(), c.members.len()))
            .collect();
        assert_eq!(
            sizes,
            vec![
                ("(4)".to_string(), 1),
                ("(3,1)".to_string(), 3),
                ("(2,2)".to_string(), 2),
                ("(2,1,1)".to_string(), 3),
                ("(1,1,1,1)".to_string(), 1)
            ]
        );
    }

    #[test]
    fn abelian_labels() {
        let refl = GysFamily::for_group(&GroupSpec::Reflection(3)).unwrap();
        let labels: Vec<&str> = refl.records.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["P_S", "P_A"]);
        let c3 = GysFamily::for_group(&GroupSpec::Cyclic(3)).unwrap();
        assert_eq!(c3.records[2].label, "P_2");
        assert_eq!(c3.classes.len(), 3);
        let s3 = GroupSpec::generated(3, GroupSpec::Symmetric(3).generators()).unwrap();
        assert!(matches!(GysFamily::for_group(&s3), Err(Error::UnsupportedGroup(_))));
    }

    #[test]
    fn hermitian_s4_family_passes() {
        let fam = GysFamily::young(4, FamilyKind::Hermitian).unwrap();
        let rep = verify_gys_family(&fam, 2, 1e-8).unwrap();
        assert!(rep.pass, "{:?}", rep.failures());
        assert_eq!(rep.primitivity_samples, 24);
    }

    #[test]
    fn character_c4_family_passes() {
        let fam = GysFamily::for_group(&GroupSpec::Cyclic(4)).unwrap();
        let rep = verify_gys_family(&fam, 2, 1e-8).unwrap();
        assert!(rep.pass, "{:?}", rep.failures());
        // P_k Z P_k = χ_k(Z⁻¹) P_k.
        let z_index = rep.lambda_elements.iter().position(|s| s == "(1 2 3 4)").unwrap();
        let l = rep.lambdas[1][z_index];
        assert!((l[0] - 0.0).abs() < 1e-12 && (l[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_family_fails_at_five_letters() {
        let fam = GysFamily::young(5, FamilyKind::Classical).unwrap();
        let rep = verify_gys_family(&fam, 2, 1e-8).unwrap();
        assert!(!rep.pass);
        assert!(rep.orthogonality > 1e-8);
        let (i, j) = rep.worst_pair.unwrap();
        assert_ne!(i, j);
    }
}
