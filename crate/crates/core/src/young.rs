//! Partitions, standard Young tableaux and Young symmetrizers.
//!
//! Two families of symmetrizers are built here. The classical ones are
//! `r_T c_T`, the row symmetrizer times the column antisymmetrizer. The
//! Hermitian ones follow the Keppeler–Sjödahl recursion
//! `P_T = (P_{Pre T} ⊗ 1) r_T c_T (P_{Pre T} ⊗ 1)`, where `Pre T` drops the
//! box holding the largest letter. Both are normalized to exact idempotents.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::RationalElement;
use crate::error::{Error, Result};
use crate::group::{all_permutations, Partition, Permutation};

/// Largest `n` accepted by [`partitions`].
pub const MAX_PARTITION_N: usize = 20;
/// Largest `n` for which symmetrizers are built.
pub const MAX_SYMMETRIZER_N: usize = 8;

/// All partitions of `n` in reverse-lexicographic order, `(n)` first.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max: MAX_PARTITION_N,
        });
    }
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::new(prefix.clone()).expect("generated partition is valid"));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Product over boxes of the hook lengths.
pub fn hook_length(shape: &Partition) -> BigUint {
    let conj = shape.conjugate();
    let mut product = BigUint::one();
    for (i, &row) in shape.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts()[j] - i - 1;
            product *= BigUint::from(arm + leg + 1);
        }
    }
    product
}

/// Number of standard tableaux of the shape, `n!/hook`.
pub fn count_standard_tableaux(shape: &Partition) -> BigUint {
    factorial(shape.size()) / hook_length(shape)
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Dimension of the image of a symmetrizer of this shape on `(ℂ^N)^{⊗n}`:
/// `∏ (N - row + col) / hook`, zero when the shape has more than `N` rows.
pub fn image_dimension(shape: &Partition, big_n: usize) -> BigUint {
    if shape.rows() > big_n {
        return BigUint::zero();
    }
    let mut numerator = BigUint::one();
    for (i, &row) in shape.parts().iter().enumerate() {
        for j in 0..row {
            numerator *= BigUint::from(big_n - i + j);
        }
    }
    numerator / hook_length(shape)
}

/// A standard Young tableau with entries `1..=n`, stored row by row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct YoungTableau {
    rows: Vec<Vec<usize>>,
}

impl YoungTableau {
    /// Validates shape, content `1..=n` and strict increase along rows and columns.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let lengths: Vec<usize> = rows.iter().map(Vec::len).collect();
        Partition::new(lengths).map_err(|e| Error::InvalidTableau(e.to_string()))?;
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidTableau(format!(
                    "{rows:?} is not a filling by 1..={n}"
                )));
            }
            seen[x] = true;
        }
        for (i, row) in rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTableau(format!("row {} not increasing", i + 1)));
            }
            if i > 0 && row.iter().zip(&rows[i - 1]).any(|(below, above)| below <= above) {
                return Err(Error::InvalidTableau(format!(
                    "column increase violated in row {}",
                    i + 1
                )));
            }
        }
        Ok(YoungTableau { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("validated shape")
    }

    /// Columns as lists of entries, top to bottom.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows[0].len();
        (0..width)
            .map(|j| self.rows.iter().filter_map(|r| r.get(j).copied()).collect())
            .collect()
    }

    /// The row-reading word: rows concatenated top to bottom.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.concat()
    }

    /// The tableau on `n-1` letters obtained by deleting the box holding `n`.
    pub fn pre(&self) -> Result<YoungTableau> {
        let n = self.size();
        if n < 2 {
            return Err(Error::InvalidTableau(
                "a single-box tableau has no predecessor".into(),
            ));
        }
        let mut rows = self.rows.clone();
        let i = rows
            .iter()
            .position(|r| r.last() == Some(&n))
            .expect("largest letter of a standard tableau sits in a corner");
        rows[i].pop();
        if rows[i].is_empty() {
            rows.remove(i);
        }
        Ok(YoungTableau { rows })
    }

    /// Compact label, e.g. `123|4`.
    pub fn label(&self) -> String {
        let sep = if self.size() > 9 { "," } else { "" };
        self.rows
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(sep))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl TryFrom<Vec<Vec<usize>>> for YoungTableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        YoungTableau::new(rows)
    }
}

impl From<YoungTableau> for Vec<Vec<usize>> {
    fn from(t: YoungTableau) -> Self {
        t.rows
    }
}

impl fmt::Display for YoungTableau {
    /// One row per line, entries separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for YoungTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungTableau({})", self.label())
    }
}

/// All standard tableaux of the shape, ordered by row-reading word.
pub fn standard_tableaux(shape: &Partition) -> Vec<YoungTableau> {
    fn rec(parts: &mut Vec<usize>, n: usize) -> Vec<Vec<Vec<usize>>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..parts.len() {
            let is_corner = parts[i] > 0 && parts.get(i + 1).is_none_or(|&below| below < parts[i]);
            if !is_corner {
                continue;
            }
            parts[i] -= 1;
            for mut rows in rec(parts, n - 1) {
                rows.resize(rows.len().max(i + 1), Vec::new());
                rows[i].push(n);
                out.push(rows);
            }
            parts[i] += 1;
        }
        out
    }
    let mut parts = shape.parts().to_vec();
    let mut tableaux: Vec<YoungTableau> = rec(&mut parts, shape.size())
        .into_iter()
        .map(|rows| YoungTableau { rows })
        .collect();
    tableaux.sort_by_key(YoungTableau::reading_word);
    tableaux
}

/// Standard tableaux of every shape of `n`, shapes in partition order.
pub fn all_standard_tableaux(n: usize) -> Result<Vec<YoungTableau>> {
    Ok(partitions(n)?.iter().flat_map(standard_tableaux).collect())
}

/// Every permutation preserving each block setwise, with its sign.
fn block_group(n: usize, blocks: &[Vec<usize>]) -> Vec<(Permutation, i32)> {
    let mut group = vec![(0..n).collect::<Vec<usize>>()];
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let arrangements = all_permutations(block.len());
        let mut next = Vec::with_capacity(group.len() * arrangements.len());
        for images in &group {
            for sigma in &arrangements {
                let mut images = images.clone();
                for (i, &x) in block.iter().enumerate() {
                    images[x - 1] = block[sigma.apply(i)] - 1;
                }
                next.push(images);
            }
        }
        group = next;
    }
    group
        .into_iter()
        .map(|images| {
            let p = Permutation::from_images(images).expect("block permutations are bijections");
            let s = p.sign();
            (p, s)
        })
        .collect()
}

/// `r_T`: the sum of all permutations preserving each row.
pub fn row_symmetrizer(t: &YoungTableau) -> RationalElement {
    let n = t.size();
    RationalElement::from_terms(
        n,
        block_group(n, t.rows())
            .into_iter()
            .map(|(p, _)| (p, BigRational::one())),
    )
    .expect("degrees agree")
}

/// `c_T`: the signed sum of all permutations preserving each column.
pub fn column_antisymmetrizer(t: &YoungTableau) -> RationalElement {
    let n = t.size();
    RationalElement::from_terms(
        n,
        block_group(n, &t.columns())
            .into_iter()
            .map(|(p, s)| (p, BigRational::from_integer(BigInt::from(s)))),
    )
    .expect("degrees agree")
}

/// The unnormalized classical symmetrizer `r_T c_T`.
pub fn classical_symmetrizer(t: &YoungTableau) -> RationalElement {
    row_symmetrizer(t)
        .multiply(&column_antisymmetrizer(t))
        .expect("degrees agree")
}

/// Rescales an essentially idempotent `Q` (with `Q² = λQ`) to an idempotent.
///
/// `λ` is read off at the first permutation in the support of `Q`, and the
/// identity `Q² = λQ` is then checked exactly.
pub fn normalize_idempotent(q: &RationalElement) -> Result<(RationalElement, BigRational)> {
    let (g, c) = q.terms().next().ok_or(Error::ZeroElement)?;
    let square = q.multiply(q)?;
    let lambda = square.coefficient(g) / c;
    if lambda.is_zero() || square != q.scale(&lambda) {
        return Err(Error::NotEssentiallyIdempotent);
    }
    let normalized = q.scale(&lambda.recip());
    Ok((normalized, lambda))
}

/// A normalized symmetrizer together with its tableau.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizerRecord {
    pub tableau: YoungTableau,
    pub element: RationalElement,
    /// The factor the raw construction was divided by at the final step.
    pub normalization: BigRational,
}

impl SymmetrizerRecord {
    pub fn shape(&self) -> Partition {
        self.tableau.shape()
    }

    /// Dimension of the image on `(ℂ^N)^{⊗n}`.
    pub fn image_dimension(&self, big_n: usize) -> BigUint {
        image_dimension(&self.shape(), big_n)
    }
}

fn check_symmetrizer_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SYMMETRIZER_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max: MAX_SYMMETRIZER_N,
        });
    }
    Ok(())
}

/// The classical symmetrizer divided by `n!/f^λ`.
pub fn classical_record(t: &YoungTableau) -> Result<SymmetrizerRecord> {
    check_symmetrizer_size(t.size())?;
    let shape = t.shape();
    let lambda = BigRational::new(
        BigInt::from(factorial(shape.size())),
        BigInt::from(count_standard_tableaux(&shape)),
    );
    let element = classical_symmetrizer(t).scale(&lambda.recip());
    Ok(SymmetrizerRecord {
        tableau: t.clone(),
        element,
        normalization: lambda,
    })
}

/// Builds Hermitian symmetrizers, memoizing predecessors shared between tableaux.
#[derive(Default)]
pub struct KsBuilder {
    cache: HashMap<YoungTableau, SymmetrizerRecord>,
}

impl KsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(&mut self, t: &YoungTableau) -> Result<SymmetrizerRecord> {
        check_symmetrizer_size(t.size())?;
        if let Some(rec) = self.cache.get(t) {
            return Ok(rec.clone());
        }
        let n = t.size();
        let raw = classical_symmetrizer(t);
        let raw = if n <= 2 {
            raw
        } else {
            let pre = self.build(&t.pre()?)?.element.embed(n)?;
            pre.multiply(&raw)?.multiply(&pre)?
        };
        let (element, normalization) = normalize_idempotent(&raw)?;
        let rec = SymmetrizerRecord {
            tableau: t.clone(),
            element,
            normalization,
        };
        self.cache.insert(t.clone(), rec.clone());
        Ok(rec)
    }
}

/// The Hermitian symmetrizer of a single tableau.
pub fn ks_symmetrizer(t: &YoungTableau) -> Result<SymmetrizerRecord> {
    KsBuilder::new().build(t)
}

/// Hermitian symmetrizers for every standard tableau of `n`, in tableau order.
pub fn ks_family(n: usize) -> Result<Vec<SymmetrizerRecord>> {
    check_symmetrizer_size(n)?;
    let mut builder = KsBuilder::new();
    all_standard_tableaux(n)?
        .iter()
        .map(|t| builder.build(t))
        .collect()
}

/// Normalized classical symmetrizers for every standard tableau of `n`.
/// These are orthogonal only for `n ≤ 4`.
pub fn classical_family(n: usize) -> Result<Vec<SymmetrizerRecord>> {
    check_symmetrizer_size(n)?;
    all_standard_tableaux(n)?.iter().map(classical_record).collect()
}


#[cfg(test)]
mod props {
    use super::*;
    use num_traits::{One, Pow};
    use proptest::prelude::*;
    use proptest::test_runner::RngSeed;

    proptest! {
        #![proptest_config(ProptestConfig { rng_seed: RngSeed::Fixed(0x5EED), cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn tableau_counts_square_sum_to_factorial(n in 1usize..=10) {
            let total: BigUint = partitions(n).unwrap().iter().map(|p| {
                let f = count_standard_tableaux(p);
                &f * &f
            }).sum();
            prop_assert_eq!(total, factorial(n));
        }

        #[test]
        fn images_fill_the_tensor_space(n in 1usize..=9, big_n in 1usize..=4) {
            let total: BigUint = partitions(n)
                .unwrap()
                .iter()
                .map(|p| count_standard_tableaux(p) * image_dimension(p, big_n))
                .sum();
            prop_assert_eq!(total, BigUint::from(big_n).pow(n as u32));
        }

        #[test]
        fn hook_formula_matches_enumeration(n in 1usize..=7) {
            for p in partitions(n).unwrap() {
                prop_assert_eq!(BigUint::from(standard_tableaux(&p).len()), count_standard_tableaux(&p));
                prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            }
        }

        #[test]
        fn too_many_rows_give_empty_images(n in 2usize..=8) {
            let column = Partition::new(vec![1; n]).unwrap();
            prop_assert_eq!(image_dimension(&column, n - 1), BigUint::default());
            prop_assert!(image_dimension(&column, n).is_one());
        }
    }
}
