//! The group algebra ℂ[G] for permutation groups, over exact rationals or complex doubles.
//!
//! Elements are finitely supported maps from permutations to coefficients and
//! carry the degree `n` of the ambient symmetric group as their group tag.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Permutation;

/// Complex coefficients with modulus below this are dropped.
pub const COMPLEX_ZERO_TOL: f64 = 1e-12;

/// Coefficient field of a group-algebra element.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Whether the coefficient should be pruned from an element.
    fn is_negligible(&self) -> bool;
    fn to_complex(&self) -> Complex64;

    /// Optional specialized product; `None` falls back to the generic convolution.
    fn fast_multiply(
        _a: &GroupAlgebraElement<Self>,
        _b: &GroupAlgebraElement<Self>,
    ) -> Option<GroupAlgebraElement<Self>> {
        None
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn fast_multiply(a: &RationalElement, b: &RationalElement) -> Option<RationalElement> {
        integer_convolution(a, b)
    }
}

/// Largest degree handled by the dense integer product.
const FAST_DEGREE: usize = 8;

/// Integer coefficients keyed by one-line images.
type IntegerTerms = Vec<([u8; FAST_DEGREE], i64)>;

/// Splits an element into integer numerators over a common denominator.
fn common_denominator(e: &RationalElement) -> Option<(IntegerTerms, BigInt)> {
    let denom = e
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms = e
        .terms
        .iter()
        .map(|(g, c)| {
            let mut images = [0u8; FAST_DEGREE];
            for (slot, &x) in images.iter_mut().zip(g.images()) {
                *slot = x as u8;
            }
            let num = c.numer() * (&denom / c.denom());
            num.to_i64().map(|x| (images, x))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((terms, denom))
}

/// Lexicographic rank of a permutation of `n ≤ 8` points.
fn lehmer_rank(images: &[u8], n: usize) -> usize {
    let mut rank = 0;
    for i in 0..n {
        let smaller = images[i + 1..n].iter().filter(|&&x| x < images[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

fn lehmer_unrank(mut rank: usize, n: usize) -> Permutation {
    let mut radices = vec![0; n];
    for (i, slot) in radices.iter_mut().enumerate().rev() {
        let base = n - i;
        *slot = rank % base;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let images = radices.into_iter().map(|r| pool.remove(r)).collect();
    Permutation::from_images(images).expect("unranked permutation is a bijection")
}

/// Exact product via i128 accumulation into a dense array indexed by rank.
/// Returns `None` when the degree is too large or an integer overflows.
fn integer_convolution(a: &RationalElement, b: &RationalElement) -> Option<RationalElement> {
    let n = a.degree;
    if n > FAST_DEGREE || n != b.degree {
        return None;
    }
    let (left, da) = common_denominator(a)?;
    let (right, db) = common_denominator(b)?;
    let order: usize = (1..=n).product();
    let mut acc = vec![0i128; order];
    let mut touched = vec![false; order];
    let mut gh = [0u8; FAST_DEGREE];
    for (g, x) in &left {
        for (h, y) in &right {
            for i in 0..n {
                gh[i] = g[h[i] as usize];
            }
            let r = lehmer_rank(&gh, n);
            acc[r] = acc[r].checked_add(*x as i128 * *y as i128)?;
            touched[r] = true;
        }
    }
    let denom = da * db;
    let terms = acc
        .into_iter()
        .enumerate()
        .filter(|&(r, c)| touched[r] && c != 0)
        .map(|(r, c)| {
            (
                lehmer_unrank(r, n),
                BigRational::new(BigInt::from(c), denom.clone()),
            )
        })
        .collect();
    Some(GroupAlgebraElement { degree: n, terms })
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_negligible(&self) -> bool {
        self.norm() < COMPLEX_ZERO_TOL
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A single coefficient of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Complex(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rational(r) => r.to_complex(),
            Scalar::Complex(c) => *c,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Complex(c) => write!(f, "{}", format_complex(*c)),
        }
    }
}

/// An element `Σ c_g g` of the group algebra of a subgroup of `S_n`.
#[derive(Clone, PartialEq)]
pub struct GroupAlgebraElement<S> {
    degree: usize,
    terms: BTreeMap<Permutation, S>,
}

pub type RationalElement = GroupAlgebraElement<BigRational>;
pub type ComplexElement = GroupAlgebraElement<Complex64>;

impl<S: Coefficient> GroupAlgebraElement<S> {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1·(1)`.
    pub fn identity(degree: usize) -> Self {
        Self::basis(Permutation::identity(degree))
    }

    /// The element `1·g`.
    pub fn basis(g: Permutation) -> Self {
        Self::monomial(g, S::one())
    }

    pub fn monomial(g: Permutation, c: S) -> Self {
        let mut e = Self::zero(g.degree());
        e.add_term(g, c);
        e
    }

    /// Sums the given terms; repeated permutations accumulate.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Permutation, S)>,
    ) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (g, c) in terms {
            if g.degree() != degree {
                return Err(Error::SizeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
            e.add_term(g, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, g: Permutation, c: S) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                if !c.is_negligible() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_negligible() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in enumeration (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Permutation) -> S {
        self.terms.get(g).cloned().unwrap_or_else(S::zero)
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::SizeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.degree);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), x.mul(c));
        }
        out
    }

    /// Convolution product: `(Σ a_g g)(Σ b_h h) = Σ a_g b_h (g∘h)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        if let Some(product) = S::fast_multiply(self, other) {
            return Ok(product);
        }
        let mut acc: BTreeMap<Permutation, S> = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                let gh = g.compose_unchecked(h);
                let prod = a.mul(b);
                match acc.get_mut(&gh) {
                    Some(slot) => *slot = slot.add(&prod),
                    None => {
                        acc.insert(gh, prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_negligible());
        Ok(GroupAlgebraElement {
            degree: self.degree,
            terms: acc,
        })
    }

    /// Conjugate-linear involution `g ↦ g⁻¹`.
    pub fn dagger(&self) -> Self {
        GroupAlgebraElement {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.inverse(), c.conj()))
                .collect(),
        }
    }

    /// Embeds into the algebra of `S_m`, `m ≥ n`, fixing the new letters.
    pub fn embed(&self, m: usize) -> Result<Self> {
        let mut out = Self::zero(m);
        for (g, c) in &self.terms {
            out.terms.insert(g.extend(m)?, c.clone());
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> ComplexElement {
        let mut out = ComplexElement::zero(self.degree);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.to_complex());
        }
        out
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?;
        Ok(diff
            .terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max))
    }
}

impl<S: Coefficient> fmt::Debug for GroupAlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl fmt::Display for RationalElement {
    /// Renders as `+1·(1) -1·(1 3) +1/2·(1 2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let sign = if c.is_negative() { '-' } else { '+' };
                format!("{sign}{}·{g}", c.abs())
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Display for ComplexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("({})·{g}", format_complex(*c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn format_complex(c: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else if re == 0.0 {
        format!("{im:.6}i")
    } else if im < 0.0 {
        format!("{re:.6}-{:.6}i", -im)
    } else {
        format!("{re:.6}+{im:.6}i")
    }
}

/// An element with either kind of coefficient; mixed products promote to complex.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyElement {
    Rational(RationalElement),
    Complex(ComplexElement),
}

impl AnyElement {
    pub fn degree(&self) -> usize {
        match self {
            AnyElement::Rational(e) => e.degree(),
            AnyElement::Complex(e) => e.degree(),
        }
    }

    pub fn to_complex(&self) -> ComplexElement {
        match self {
            AnyElement::Rational(e) => e.to_complex(),
            AnyElement::Complex(e) => e.clone(),
        }
    }

    pub fn coefficient(&self, g: &Permutation) -> Scalar {
        match self {
            AnyElement::Rational(e) => Scalar::Rational(e.coefficient(g)),
            AnyElement::Complex(e) => Scalar::Complex(e.coefficient(g)),
        }
    }

    pub fn multiply(&self, other: &AnyElement) -> Result<AnyElement> {
        match (self, other) {
            (AnyElement::Rational(a), AnyElement::Rational(b)) => {
                Ok(AnyElement::Rational(a.multiply(b)?))
            }
            _ => Ok(AnyElement::Complex(
                self.to_complex().multiply(&other.to_complex())?,
            )),
        }
    }

    pub fn add(&self, other: &AnyElement) -> Result<AnyElement> {
        match (self, other) {
            (AnyElement::Rational(a), AnyElement::Rational(b)) => Ok(AnyElement::Rational(a.add(b)?)),
            _ => Ok(AnyElement::Complex(self.to_complex().add(&other.to_complex())?)),
        }
    }

    pub fn dagger(&self) -> AnyElement {
        match self {
            AnyElement::Rational(e) => AnyElement::Rational(e.dagger()),
            AnyElement::Complex(e) => AnyElement::Complex(e.dagger()),
        }
    }
}

impl fmt::Display for AnyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElement::Rational(e) => e.fmt(f),
            AnyElement::Complex(e) => e.fmt(f),
        }
    }
}

/// Serialized form: one `{perm, re, im}` entry per term, perm 1-based one-line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub perm: Permutation,
    pub cycles: String,
    pub re: f64,
    pub im: f64,
    /// Exact value when the coefficient is rational, e.g. `"-1/3"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl AnyElement {
    pub fn term_records(&self) -> Vec<TermRecord> {
        match self {
            AnyElement::Rational(e) => e
                .terms()
                .map(|(g, c)| TermRecord {
                    perm: g.clone(),
                    cycles: g.to_string(),
                    re: rational_to_f64(c),
                    im: 0.0,
                    exact: Some(c.to_string()),
                })
                .collect(),
            AnyElement::Complex(e) => e
                .terms()
                .map(|(g, c)| TermRecord {
                    perm: g.clone(),
                    cycles: g.to_string(),
                    re: c.re,
                    im: c.im,
                    exact: None,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn el(n: usize, terms: &[(&str, i64)]) -> RationalElement {
        RationalElement::from_terms(n, terms.iter().map(|(s, c)| (perm(s, n), q(*c, 1)))).unwrap()
    }

    #[test]
    fn left_multiplication_by_transposition() {
        let lam = q(2, 3);
        let mu = q(-5, 1);
        let rhs = RationalElement::from_terms(
            3,
            [(perm("(1)", 3), lam.clone()), (perm("(13)", 3), mu.clone())],
        )
        .unwrap();
        let got = RationalElement::basis(perm("(12)", 3)).multiply(&rhs).unwrap();
        let want =
            RationalElement::from_terms(3, [(perm("(12)", 3), lam), (perm("(132)", 3), mu)]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn annihilating_product() {
        let a = el(2, &[("(1)", 1), ("(12)", 1)]);
        let b = el(2, &[("(1)", 1), ("(12)", -1)]);
        assert!(a.multiply(&b).unwrap().is_zero());
        assert_eq!(a.multiply(&RationalElement::identity(2)).unwrap(), a);
        assert!(a.multiply(&RationalElement::identity(3)).is_err());
    }

    #[test]
    fn dagger_inverts_and_conjugates() {
        let a = ComplexElement::monomial(perm("(123)", 3), Complex64::new(0.0, 1.0));
        let want = ComplexElement::monomial(perm("(132)", 3), Complex64::new(0.0, -1.0));
        assert_eq!(a.dagger(), want);
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn complex_terms_are_pruned() {
        let a = ComplexElement::monomial(perm("(12)", 2), Complex64::new(1e-13, 0.0));
        assert!(a.is_zero());
        let b = ComplexElement::identity(2);
        let c = b.sub(&b.scale(&Complex64::new(1.0 - 1e-14, 0.0))).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn mixed_products_promote() {
        let r = AnyElement::Rational(el(2, &[("(12)", 2)]));
        let c = AnyElement::Complex(ComplexElement::identity(2).scale(&Complex64::new(0.0, 1.0)));
        let p = r.multiply(&c).unwrap();
        assert!(matches!(p, AnyElement::Complex(_)));
        assert_eq!(p.coefficient(&perm("(12)", 2)), Scalar::Complex(Complex64::new(0.0, 2.0)));
    }

    #[test]
    fn dense_product_matches_generic_convolution() {
        let a = el(4, &[("(1)", 3), ("(12)", -1), ("(1234)", 2), ("(13)(24)", 5)]);
        let b = el(4, &[("(1)", 1), ("(243)", 7), ("(14)", -2)])
            .scale(&q(1, 6));
        let fast = integer_convolution(&a, &b).unwrap();
        let mut slow = RationalElement::zero(4);
        for (g, x) in a.terms() {
            for (h, y) in b.terms() {
                slow = slow
                    .add(&RationalElement::monomial(g.compose(h).unwrap(), x * y))
                    .unwrap();
            }
        }
        assert_eq!(fast, slow);
        for r in [0, 1, 17, 23] {
            let p = lehmer_unrank(r, 4);
            let images: Vec<u8> = p.images().iter().map(|&x| x as u8).collect();
            assert_eq!(lehmer_rank(&images, 4), r);
        }
    }

    #[test]
    fn renders_coefficient_text() {
        let e = el(3, &[("(1)", 1), ("(13)", -1), ("(12)", 1), ("(132)", -1)]);
        assert_eq!(e.to_string(), "+1·(1) +1·(1 2) -1·(1 3 2) -1·(1 3)");
        assert_eq!(RationalElement::zero(3).to_string(), "0");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::group::{enumerate_group, GroupSpec};
    use proptest::prelude::*;
    use proptest::test_runner::RngSeed;

    fn element() -> impl Strategy<Value = RationalElement> {
        let group = enumerate_group(&GroupSpec::Symmetric(3)).unwrap();
        proptest::collection::vec((0..group.len(), -4i64..=4, 1i64..=3), 0..7).prop_map(move |terms| {
            RationalElement::from_terms(
                3,
                terms
                    .into_iter()
                    .map(|(g, a, b)| (group[g].clone(), BigRational::new(a.into(), b.into()))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { rng_seed: RngSeed::Fixed(0x5EED), ..ProptestConfig::default() })]

        #[test]
        fn multiplication_is_associative(a in element(), b in element(), c in element()) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            prop_assert_eq!(left, a.multiply(&b.multiply(&c).unwrap()).unwrap());
        }

        #[test]
        fn multiplication_distributes(a in element(), b in element(), c in element()) {
            let left = a.multiply(&b.add(&c).unwrap()).unwrap();
            let right = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let left = b.add(&c).unwrap().multiply(&a).unwrap();
            let right = b.multiply(&a).unwrap().add(&c.multiply(&a).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn dagger_reverses_products(a in element(), b in element()) {
            let left = a.multiply(&b).unwrap().dagger();
            prop_assert_eq!(left, b.dagger().multiply(&a.dagger()).unwrap());
            prop_assert_eq!(a.dagger().dagger(), a);
        }

        #[test]
        fn complex_image_is_a_homomorphism(a in element(), b in element()) {
            let exact = a.multiply(&b).unwrap().to_complex();
            let float = a.to_complex().multiply(&b.to_complex()).unwrap();
            prop_assert!(exact.max_deviation(&float).unwrap() < 1e-12);
        }
    }
}
