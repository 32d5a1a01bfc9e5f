//! Irreducible characters of Abelian permutation groups and their projectors
//! `P_χ = (1/|G|) Σ_g χ(g) g`.
//!
//! Characters are built by extending from the trivial subgroup one generator
//! at a time. Values are tracked as exact rational phases `θ` with
//! `χ(g) = e^{2πiθ}`, so roots of unity are evaluated once from their angle.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::ComplexElement;
use crate::error::{Error, Result};
use crate::group::{enumerate_group, GroupSpec, Permutation};
use crate::linalg::{I, ONE};

type Phase = Ratio<i64>;

fn reduce_phase(p: Phase) -> Phase {
    let floor = p.floor();
    p - floor
}

/// A one-dimensional character of an Abelian group.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub group: GroupSpec,
    /// Group elements in enumeration order.
    pub elements: Vec<Permutation>,
    /// `values[i] = χ(elements[i])`.
    pub values: Vec<Complex64>,
    /// Exponent of the generator(s): `[k]` for a cyclic group.
    pub label: Vec<usize>,
}

impl Character {
    pub fn value(&self, g: &Permutation) -> Option<Complex64> {
        self.elements.binary_search(g).ok().map(|i| self.values[i])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn label_string(&self) -> String {
        let parts: Vec<String> = self.label.iter().map(usize::to_string).collect();
        format!("chi[{}]", parts.join(","))
    }
}

/// All irreducible characters, ordered lexicographically by label.
pub fn characters(spec: &GroupSpec) -> Result<Vec<Character>> {
    if !spec.is_abelian() {
        return Err(Error::NonAbelian(spec.name()));
    }
    let elements = enumerate_group(spec)?;
    let n = spec.degree();

    let mut subgroup: Vec<Permutation> = vec![Permutation::identity(n)];
    let mut chars: Vec<(Vec<usize>, HashMap<Permutation, Phase>)> = vec![(
        Vec::new(),
        HashMap::from([(Permutation::identity(n), Phase::zero())]),
    )];
    for g in spec.generators() {
        if subgroup.contains(&g) {
            continue;
        }
        // Smallest k with g^k back in the current subgroup.
        let mut k = 1;
        let mut gk = g.clone();
        while !subgroup.contains(&gk) {
            gk = g.compose_unchecked(&gk);
            k += 1;
        }
        let powers: Vec<Permutation> = (0..k).map(|j| g.pow(j)).collect();
        let mut extended_subgroup = Vec::with_capacity(subgroup.len() * k);
        for h in &subgroup {
            for p in &powers {
                extended_subgroup.push(h.compose_unchecked(p));
            }
        }
        let mut extended = Vec::with_capacity(chars.len() * k);
        for (label, phases) in &chars {
            let base = phases[&gk];
            for t in 0..k {
                let step = (base + Phase::from_integer(t as i64)) / Phase::from_integer(k as i64);
                let mut new_phases = HashMap::with_capacity(extended_subgroup.len());
                for h in &subgroup {
                    for (j, p) in powers.iter().enumerate() {
                        let phase = phases[h] + step * Phase::from_integer(j as i64);
                        new_phases.insert(h.compose_unchecked(p), reduce_phase(phase));
                    }
                }
                let mut new_label = label.clone();
                new_label.push(t);
                extended.push((new_label, new_phases));
            }
        }
        subgroup = extended_subgroup;
        chars = extended;
    }

    if chars.len() != elements.len() {
        return Err(Error::CharacterCount {
            found: chars.len(),
            order: elements.len(),
        });
    }
    let cyclic = matches!(spec, GroupSpec::Cyclic(_));
    let mut out: Vec<Character> = chars
        .into_iter()
        .map(|(mut label, phases)| {
            if cyclic && label.is_empty() {
                label.push(0);
            }
            let values = elements
                .iter()
                .map(|g| root_of_unity(&phases[g]))
                .collect();
            Character {
                group: spec.clone(),
                elements: elements.clone(),
                values,
                label,
            }
        })
        .collect();
    out.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(out)
}

/// `e^{2πiθ}`, exact on the real and imaginary axes.
fn root_of_unity(theta: &Ratio<i64>) -> Complex64 {
    let t = theta - theta.floor();
    let quarter = t * 4;
    if quarter.is_integer() {
        return [ONE, I, -ONE, -I][quarter.to_integer() as usize];
    }
    Complex64::from_polar(1.0, TAU * t.to_f64().expect("phase fits in f64"))
}

/// `χ_k(Z^j) = e^{2πi kj/n}` for `k = 0..n`.
pub fn characters_cyclic(n: usize) -> Result<Vec<Character>> {
    characters(&GroupSpec::Cyclic(n))
}

/// A character together with its projector.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianGysRecord {
    pub character: Character,
    pub element: ComplexElement,
}

pub fn gys_from_character(chi: &Character) -> Result<AbelianGysRecord> {
    if !chi.group.is_abelian() {
        return Err(Error::NonAbelian(chi.group.name()));
    }
    let scale = 1.0 / chi.order() as f64;
    let element = ComplexElement::from_terms(
        chi.group.degree(),
        chi.elements
            .iter()
            .zip(&chi.values)
            .map(|(g, v)| (g.clone(), v * scale)),
    )?;
    Ok(AbelianGysRecord {
        character: chi.clone(),
        element,
    })
}

/// One projector per irreducible character, in character order.
pub fn gys_family_abelian(spec: &GroupSpec) -> Result<Vec<AbelianGysRecord>> {
    characters(spec)?.iter().map(gys_from_character).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn cyclic_characters() {
        let c2 = characters_cyclic(2).unwrap();
        assert_eq!(c2.len(), 2);
        assert!(c2[0].values.iter().all(|v| close(*v, Complex64::new(1.0, 0.0))));
        assert!(close(c2[1].values[1], Complex64::new(-1.0, 0.0)));

        let c3 = characters_cyclic(3).unwrap();
        let z = Permutation::cyclic_shift(3);
        assert_eq!(c3[1].label, vec![1]);
        assert!(close(c3[1].value(&z).unwrap(), Complex64::from_polar(1.0, TAU / 3.0)));

        let c4 = characters_cyclic(4).unwrap();
        let z = Permutation::cyclic_shift(4);
        assert!(close(c4[2].value(&z.pow(2)).unwrap(), Complex64::new(1.0, 0.0)));
        assert!(close(c4[2].value(&z).unwrap(), Complex64::new(-1.0, 0.0)));

        assert_eq!(characters_cyclic(1).unwrap()[0].label, vec![0]);
    }

    #[test]
    fn reflection_projectors() {
        let fam = gys_family_abelian(&GroupSpec::Reflection(5)).unwrap();
        let r = Permutation::reversal(5);
        let e = Permutation::identity(5);
        let half = Complex64::new(0.5, 0.0);
        assert!(close(fam[0].element.coefficient(&e), half));
        assert!(close(fam[0].element.coefficient(&r), half));
        assert!(close(fam[1].element.coefficient(&e), half));
        assert!(close(fam[1].element.coefficient(&r), -half));
    }

    #[test]
    fn fourier_projectors_resolve_identity() {
        for n in 1..=5 {
            let fam = gys_family_abelian(&GroupSpec::Cyclic(n)).unwrap();
            assert_eq!(fam.len(), n);
            let mut total = ComplexElement::zero(n);
            for (i, a) in fam.iter().enumerate() {
                total = total.add(&a.element).unwrap();
                for (j, b) in fam.iter().enumerate() {
                    let prod = a.element.multiply(&b.element).unwrap();
                    let want = if i == j { a.element.clone() } else { ComplexElement::zero(n) };
                    assert!(prod.max_deviation(&want).unwrap() < 1e-10);
                }
            }
            assert!(total.max_deviation(&ComplexElement::identity(n)).unwrap() < 1e-12);
        }
        let c1 = gys_family_abelian(&GroupSpec::Cyclic(1)).unwrap();
        assert_eq!(c1[0].element, ComplexElement::identity(1));
    }

    #[test]
    fn product_group_labels() {
        let chars = characters(&GroupSpec::cyclic_product(&[2, 3])).unwrap();
        let labels: Vec<Vec<usize>> = chars.iter().map(|c| c.label.clone()).collect();
        assert_eq!(labels.len(), 6);
        assert_eq!(labels[0], vec![0, 0]);
        assert_eq!(labels[5], vec![1, 2]);
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_abelian() {
        assert!(matches!(characters(&GroupSpec::Symmetric(3)), Err(Error::NonAbelian(_))));
    }

    #[test]
    fn non_cyclic_generator_orders() {
        // <(12)(34), (13)(24)> is the Klein group; the second generator's
        // square is already trivial but its first power is new.
        let a = Permutation::parse_cycles("(12)(34)", 4).unwrap();
        let b = Permutation::parse_cycles("(13)(24)", 4).unwrap();
        let spec = GroupSpec::generated(4, vec![a.clone(), b, a.clone()]).unwrap();
        let chars = characters(&spec).unwrap();
        assert_eq!(chars.len(), 4);
        for c in &chars {
            for (g, x) in c.elements.iter().zip(&c.values) {
                assert!(close(x.conj(), c.value(&g.inverse()).unwrap()));
            }
        }
    }
}
