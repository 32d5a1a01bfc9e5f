//! Permutations, partitions and the finite permutation groups used as symmetries.
//!
//! Permutations are stored 0-indexed in one-line notation; every textual form
//! (cycle notation, `Display`) is 1-based. Products compose right to left:
//! `p.compose(&q)` applies `q` first, then `p`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order [`enumerate_group`] will materialize (10!).
pub const MAX_GROUP_ORDER: usize = 3_628_800;

/// A bijection of `{0, .., n-1}` in one-line notation.
///
/// The derived ordering is lexicographic on the one-line images, which is the
/// enumeration order used everywhere a deterministic tie-break is needed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based images, `images[i]` being the image of `i`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(
                "one-based images must be positive".into(),
            ));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation of `n` points from 1-based cycles. Cycles are
    /// composed right to left, so they need not be disjoint.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut result = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let mut images: Vec<usize> = (0..n).collect();
            let mut seen = HashSet::new();
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} outside 1..={n}"
                    )));
                }
                if !seen.insert(x) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} repeated in cycle {cycle:?}"
                    )));
                }
                let next = cycle[(i + 1) % cycle.len()];
                images[x - 1] = next - 1;
            }
            result = Permutation { images }.compose_unchecked(&result);
        }
        Ok(result)
    }

    /// The cyclic shift `(1 2 .. n)`, sending `i` to `i + 1 mod n`.
    pub fn cyclic_shift(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// The reversal `i <-> n-1-i`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            images: (0..n).rev().collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        for _ in 0..k {
            result = self.compose_unchecked(&result);
        }
        result
    }

    /// Extends to `n` points by fixing every new point.
    pub fn extend(&self, n: usize) -> Result<Permutation> {
        if n < self.degree() {
            return Err(Error::SizeMismatch {
                left: self.degree(),
                right: n,
            });
        }
        let mut images = self.images.clone();
        images.extend(self.degree()..n);
        Ok(Permutation { images })
    }

    /// Disjoint cycles (0-based), each starting at its smallest point, in
    /// order of smallest point. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Number of cycles including fixed points.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(5 4 6)(7 8)`.
    ///
    /// Points may be separated by spaces or commas. When `n <= 9` the compact
    /// form `(132)` is also accepted. `()`, `(1)`, `e` and the empty string all
    /// denote the identity.
    pub fn parse_cycles(input: &str, n: usize) -> Result<Permutation> {
        let syntax = |reason: &str| Error::CycleSyntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "1" {
            return Ok(Permutation::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| syntax("expected '('"))?;
            let close = open.find(')').ok_or_else(|| syntax("unclosed '('"))?;
            let body = open[..close].trim();
            rest = open[close + 1..].trim_start();
            if body.is_empty() {
                continue;
            }
            let separated = body.contains(|c: char| c.is_whitespace() || c == ',');
            let points: Vec<usize> = if separated {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| syntax("bad point")))
                    .collect::<Result<_>>()?
            } else if n <= 9 && body.len() > 1 {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| syntax("bad point"))
                    })
                    .collect::<Result<_>>()?
            } else {
                vec![body.parse::<usize>().map_err(|_| syntax("bad point"))?]
            };
            cycles.push(points);
        }
        Permutation::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation without fixed points; the identity prints as `(1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "(1)");
        }
        for cycle in cycles {
            let points: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", points.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.images.iter().map(|x| x + 1).collect();
        one_based.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let one_based = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_based(&one_based).map_err(serde::de::Error::custom)
    }
}

/// A partition `λ₁ ≥ λ₂ ≥ … ≥ λ_k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not non-increasing"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (0..self.parts[0])
            .map(|col| self.parts.iter().filter(|&&p| p > col).count())
            .collect();
        Partition { parts }
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite subgroup of `S_n` acting on `n` tensor factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Symmetric(usize),
    /// Generated by the shift `(1 2 .. n)`.
    Cyclic(usize),
    /// `{e, R}` with `R` reversing the order of the given number of sites.
    Reflection(usize),
    Generated {
        degree: usize,
        generators: Vec<Permutation>,
    },
}

impl GroupSpec {
    /// The trivial group on `n` points.
    pub fn trivial(n: usize) -> Self {
        GroupSpec::Generated {
            degree: n,
            generators: Vec::new(),
        }
    }

    /// `C_{a} × C_{b} × …` acting by independent shifts on consecutive blocks
    /// of `a`, `b`, … points.
    pub fn cyclic_product(orders: &[usize]) -> Self {
        let degree: usize = orders.iter().sum();
        let mut generators = Vec::new();
        let mut offset = 0;
        for &order in orders {
            let mut images: Vec<usize> = (0..degree).collect();
            for i in 0..order {
                images[offset + i] = offset + (i + 1) % order;
            }
            generators.push(Permutation { images });
            offset += order;
        }
        GroupSpec::Generated { degree, generators }
    }

    pub fn generated(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::SizeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(GroupSpec::Generated { degree, generators })
    }

    pub fn degree(&self) -> usize {
        match self {
            GroupSpec::Symmetric(n) | GroupSpec::Cyclic(n) | GroupSpec::Reflection(n) => *n,
            GroupSpec::Generated { degree, .. } => *degree,
        }
    }

    /// A generating set. `S_n` uses the transposition `(1 2)` and the long cycle.
    pub fn generators(&self) -> Vec<Permutation> {
        match self {
            GroupSpec::Symmetric(n) => {
                let n = *n;
                let mut gens = Vec::new();
                if n >= 2 {
                    let mut images: Vec<usize> = (0..n).collect();
                    images.swap(0, 1);
                    gens.push(Permutation { images });
                }
                if n >= 3 {
                    gens.push(Permutation::cyclic_shift(n));
                }
                gens
            }
            GroupSpec::Cyclic(n) => {
                if *n >= 2 {
                    vec![Permutation::cyclic_shift(*n)]
                } else {
                    Vec::new()
                }
            }
            GroupSpec::Reflection(n) => {
                if *n >= 2 {
                    vec![Permutation::reversal(*n)]
                } else {
                    Vec::new()
                }
            }
            GroupSpec::Generated { generators, .. } => generators.clone(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Symmetric(n) => *n <= 2,
            GroupSpec::Cyclic(_) | GroupSpec::Reflection(_) => true,
            GroupSpec::Generated { generators, .. } => generators.iter().enumerate().all(|(i, a)| {
                generators[i + 1..]
                    .iter()
                    .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
            }),
        }
    }

    /// Short human-readable name, e.g. `S4`, `C3`, `R5`.
    pub fn name(&self) -> String {
        match self {
            GroupSpec::Symmetric(n) => format!("S{n}"),
            GroupSpec::Cyclic(n) => format!("C{n}"),
            GroupSpec::Reflection(n) => format!("R{n}"),
            GroupSpec::Generated { degree, generators } => {
                let gens: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                format!("<{}> on {degree} points", gens.join(", "))
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All elements of the group, sorted lexicographically by one-line notation.
pub fn enumerate_group(spec: &GroupSpec) -> Result<Vec<Permutation>> {
    let n = spec.degree();
    if let GroupSpec::Symmetric(_) = spec {
        if n > 10 {
            return Err(Error::GroupTooLarge {
                limit: MAX_GROUP_ORDER,
            });
        }
        return Ok(all_permutations(n));
    }
    let generators = spec.generators();
    let mut seen: HashSet<Permutation> = HashSet::new();
    let identity = Permutation::identity(n);
    seen.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in &generators {
            let y = g.compose_unchecked(&x);
            if seen.insert(y.clone()) {
                if seen.len() > MAX_GROUP_ORDER {
                    return Err(Error::GroupTooLarge {
                        limit: MAX_GROUP_ORDER,
                    });
                }
                queue.push_back(y);
            }
        }
    }
    let sorted: BTreeSet<Permutation> = seen.into_iter().collect();
    Ok(sorted.into_iter().collect())
}

/// Every permutation of `n` points in lexicographic order.
pub(crate) fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation {
        images: current.clone(),
    }];
    // Standard next-permutation step.
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let pivot = i - 1;
        let j = (i..n).rev().find(|&j| current[j] > current[pivot]).unwrap();
        current.swap(pivot, j);
        current[i..].reverse();
        out.push(Permutation {
            images: current.clone(),
        });
    }
    out
}
