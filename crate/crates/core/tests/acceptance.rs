//! Acceptance criteria 1–8. Each test prints one `PASS`/`FAIL` line straight
//! to stdout (bypassing libtest capture) and then asserts.

use std::fmt::Display;
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use symdecomp_core::algebra::{AnyElement, RationalElement};
use symdecomp_core::decompose::{
    assemble_verified, block_check, commutant_nullspace_oracle, group_block_audit,
    subspace_controllability_report, verify_gys_family, ChangeOfBasis, FamilyKind, GysFamily,
    Tolerances,
};
use symdecomp_core::group::{enumerate_group, GroupSpec, Permutation};
use symdecomp_core::linalg::{columns_to_matrix, max_abs, subspace_distance, CMatrix, CVector, GramSchmidt};
use symdecomp_core::spin::{build_model, field_sum, Axis, Topology};
use symdecomp_core::tensor::counting::{
    burnside_orbit_count, commutant_dim_trace_oracle, count_words_w, dim_u_cyclic, dim_u_symmetric,
    multiplicity_m_k,
};
use symdecomp_core::tensor::{projector_image_basis, BasisWord, TensorRep};
use symdecomp_core::young::{classical_family, ks_family};

const SUBSPACE_TOL: f64 = 1e-8;
const ENTRY_TOL: f64 = 1e-8;
const BLOCK_TOL: f64 = 1e-8;
const ABELIAN_TOL: f64 = 1e-10;

/// Collects failed checks for one criterion.
#[derive(Default)]
struct Checks {
    total: usize,
    failed: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Display) {
        self.total += 1;
        if !ok {
            self.failed.push(what.to_string());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, format_args!("{what}: got {got:?}, want {want:?}"));
    }

    fn within(&mut self, what: &str, deviation: f64, tol: f64) {
        self.check(deviation <= tol, format_args!("{what}: {deviation:e} > {tol:e}"));
    }

    /// Prints the verdict line and fails the test if anything failed or the
    /// time budget was exceeded.
    fn finish(mut self, criterion: u32, name: &str, start: Instant, budget: Duration) {
        let elapsed = start.elapsed();
        self.check(elapsed <= budget, format_args!("took {elapsed:.2?}, budget {budget:?}"));
        let verdict = if self.failed.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {criterion} ({name}): {verdict}  [{} checks, {elapsed:.2?}]\n",
            self.total
        );
        for f in &self.failed {
            line.push_str(&format!("    {f}\n"));
        }
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        assert!(self.failed.is_empty(), "criterion {criterion} failed:\n{}", self.failed.join("\n"));
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ket(bits: &str) -> usize {
    BasisWord::binary(bits).unwrap().index()
}

fn state(n: usize, terms: &[(Complex64, &str)]) -> CVector {
    let mut v = CVector::zeros(1 << n);
    for (a, bits) in terms {
        v[ket(bits)] += a;
    }
    v
}

fn real_state(n: usize, terms: &[(f64, &str)]) -> CVector {
    let terms: Vec<(Complex64, &str)> = terms.iter().map(|&(a, b)| (c(a, 0.0), b)).collect();
    state(n, &terms)
}

/// Orthonormal frame for the span of `vecs`; panics on dependent input so a
/// wrong reference vector cannot silently shrink the span.
fn frame(dim: usize, vecs: &[CVector]) -> CMatrix {
    let mut gs = GramSchmidt::new(1e-9);
    for v in vecs {
        assert!(gs.push(v.clone()).is_some(), "reference vectors are dependent");
    }
    columns_to_matrix(dim, gs.basis())
}

fn class_index(cob: &ChangeOfBasis, label: &str) -> usize {
    cob.classes
        .iter()
        .position(|k| k.label == label)
        .unwrap_or_else(|| panic!("no class {label}"))
}

/// All columns of a class, every copy.
fn class_frame(cob: &ChangeOfBasis, class: usize) -> CMatrix {
    let k = &cob.classes[class];
    cob.unitary.columns(k.start, k.d * k.m).into_owned()
}

fn family_basis(group: &GroupSpec) -> ChangeOfBasis {
    assemble_verified(&GysFamily::for_group(group).unwrap(), 2).unwrap()
}

fn model_topologies() -> Vec<Topology> {
    vec![
        Topology::Complete(2),
        Topology::Complete(3),
        Topology::Complete(4),
        Topology::Ring(3),
        Topology::Ring(4),
        Topology::CentralChain(1),
    ]
}

#[test]
fn criterion_1_counting() {
    let start = Instant::now();
    let mut ch = Checks::default();
    ch.eq("dim u^S3", dim_u_symmetric(3), 20);
    ch.eq("dim u^S4", dim_u_symmetric(4), 35);
    ch.eq("dim u^C3", dim_u_cyclic(3), 24);
    ch.eq("dim u^C4", dim_u_cyclic(4), 70);
    let m = |n: usize| (0..n).map(|k| multiplicity_m_k(n, k)).collect::<Vec<_>>();
    ch.eq("m_k(4)", m(4), vec![6, 3, 4, 3]);
    ch.eq("m_k(3)", m(3), vec![4, 2, 2]);
    ch.eq("w(6,4,2)", count_words_w(6, 4, 2), 6);

    for p in [2u32, 3, 5, 7, 11, 13] {
        let n = p as usize;
        let (p128, two_p, four_p) = (u128::from(p), 2u128.pow(p), 4u128.pow(p));
        let rest = (two_p - 2) / p128;
        ch.eq(&format!("m_0({p})"), multiplicity_m_k(n, 0), 2 + rest);
        for k in 1..n {
            ch.eq(&format!("m_{k}({p})"), multiplicity_m_k(n, k), rest);
        }
        let closed = 4 + (four_p - 4) / p128;
        ch.eq(&format!("dim u^C{p}"), dim_u_cyclic(n), closed);
        let blocks = ((two_p + 2 * p128 - 2).pow(2) + (p128 - 1) * (two_p - 2).pow(2)) / (p128 * p128);
        ch.eq(&format!("block sum C{p}"), blocks, closed);
    }
    ch.finish(1, "counting formulas", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_oracle_triangle() {
    let start = Instant::now();
    let mut ch = Checks::default();
    for topology in model_topologies() {
        let g = build_model(topology).unwrap().symmetry;
        let burnside = burnside_orbit_count(&g, 4).unwrap();
        let trace = commutant_dim_trace_oracle(&g, 2).unwrap();
        let nullspace = commutant_nullspace_oracle(&g, 2).unwrap() as u128;
        let class_sum: u128 = family_basis(&g).classes.iter().map(|k| (k.d * k.d) as u128).sum();
        let name = g.name();
        ch.eq(&format!("{name} trace"), trace, burnside);
        ch.eq(&format!("{name} nullspace"), nullspace, burnside);
        ch.eq(&format!("{name} Σd²"), class_sum, burnside);
    }
    ch.finish(2, "oracle triangle", start, Duration::from_secs(5));
}

/// P1–P4 checked exactly in the group algebra.
fn exact_axioms(ch: &mut Checks, n: usize, elements: &[RationalElement]) {
    let group = enumerate_group(&GroupSpec::Symmetric(n)).unwrap();
    let mut sum = RationalElement::zero(n);
    for p in elements {
        sum = sum.add(p).unwrap();
    }
    ch.check(sum == RationalElement::identity(n), format_args!("S{n}: Σ P ≠ 1"));
    for (j, p) in elements.iter().enumerate() {
        ch.check(p.dagger() == *p, format_args!("S{n}: P_{j} not Hermitian"));
        for (k, q) in elements.iter().enumerate() {
            let pq = p.multiply(q).unwrap();
            let ok = if j == k { pq == *p } else { pq.is_zero() };
            ch.check(ok, format_args!("S{n}: P_{j} P_{k} wrong"));
        }
        for g in &group {
            let pgp = p
                .multiply(&RationalElement::basis(g.clone()))
                .and_then(|x| x.multiply(p))
                .unwrap();
            let lambda = pgp.coefficient(&Permutation::identity(n)) / p.coefficient(&Permutation::identity(n));
            ch.check(pgp == p.scale(&lambda), format_args!("S{n}: P_{j} g P_{j} ∉ ℚ P_{j}"));
        }
    }
}

#[test]
fn criterion_3_gys_axioms() {
    let start = Instant::now();
    let mut ch = Checks::default();
    for n in 1..=5 {
        let recs = ks_family(n).unwrap();
        let elements: Vec<RationalElement> = recs.into_iter().map(|r| r.element).collect();
        exact_axioms(&mut ch, n, &elements);
        let family = GysFamily::young(n, FamilyKind::Hermitian).unwrap();
        let report = verify_gys_family(&family, 2, BLOCK_TOL).unwrap();
        ch.check(report.pass, format_args!("S{n}: numeric verification failed"));
    }

    let abelian = [
        GroupSpec::Cyclic(2),
        GroupSpec::Cyclic(3),
        GroupSpec::Cyclic(4),
        GroupSpec::Cyclic(5),
        GroupSpec::Cyclic(6),
        GroupSpec::Reflection(3),
        GroupSpec::Reflection(4),
        GroupSpec::Reflection(5),
        GroupSpec::cyclic_product(&[2, 2]),
    ];
    for g in &abelian {
        let family = GysFamily::for_group(g).unwrap();
        let report = verify_gys_family(&family, 2, ABELIAN_TOL).unwrap();
        ch.within(&format!("{} deviation", g.name()), report.max_deviation(), ABELIAN_TOL);
    }

    // Classical symmetrizers at n = 5: some cross product is nonzero.
    let classical: Vec<RationalElement> = classical_family(5).unwrap().into_iter().map(|r| r.element).collect();
    let nonzero_cross = classical.iter().enumerate().any(|(j, p)| {
        classical
            .iter()
            .enumerate()
            .any(|(k, q)| j != k && !p.multiply(q).unwrap().is_zero())
    });
    ch.check(nonzero_cross, "classical S5: every cross product vanished");
    let report = verify_gys_family(&GysFamily::young(5, FamilyKind::Classical).unwrap(), 2, BLOCK_TOL).unwrap();
    ch.check(!report.pass, "classical S5 passed verification");
    ch.check(report.orthogonality > BLOCK_TOL, "classical S5 orthogonality within tolerance");
    ch.finish(3, "GYS axioms", start, Duration::from_secs(30));
}

fn s4_reference() -> [(&'static str, Vec<CVector>); 3] {
    let s = |terms: &[(f64, &str)]| real_state(4, terms);
    let symmetric = vec![
        s(&[(1.0, "0000")]),
        s(&[(1.0, "1000"), (1.0, "0100"), (1.0, "0010"), (1.0, "0001")]),
        s(&[
            (1.0, "1100"),
            (1.0, "1010"),
            (1.0, "1001"),
            (1.0, "0110"),
            (1.0, "0101"),
            (1.0, "0011"),
        ]),
        s(&[(1.0, "1110"), (1.0, "1101"), (1.0, "1011"), (1.0, "0111")]),
        s(&[(1.0, "1111")]),
    ];
    let standard = vec![
        s(&[(1.0, "1000"), (1.0, "0100"), (1.0, "0010"), (-3.0, "0001")]),
        s(&[
            (1.0, "1100"),
            (1.0, "1010"),
            (1.0, "0110"),
            (-1.0, "1001"),
            (-1.0, "0101"),
            (-1.0, "0011"),
        ]),
        s(&[(1.0, "0111"), (1.0, "1011"), (1.0, "1101"), (-3.0, "1110")]),
        s(&[(1.0, "1000"), (1.0, "0100"), (-2.0, "0010")]),
        s(&[
            (2.0, "1100"),
            (-2.0, "0011"),
            (1.0, "1001"),
            (1.0, "0101"),
            (-1.0, "0110"),
            (-1.0, "1010"),
        ]),
        s(&[(1.0, "0111"), (1.0, "1011"), (-2.0, "1101")]),
        s(&[(1.0, "1000"), (-1.0, "0100")]),
        s(&[(1.0, "1010"), (1.0, "1001"), (-1.0, "0110"), (-1.0, "0101")]),
        s(&[(1.0, "0111"), (-1.0, "1011")]),
    ];
    let two_two = vec![
        s(&[
            (2.0, "1100"),
            (2.0, "0011"),
            (-1.0, "0110"),
            (-1.0, "1010"),
            (-1.0, "1001"),
            (-1.0, "0101"),
        ]),
        // Orthogonal to μ and to every other class at weight two.
        s(&[(1.0, "1010"), (1.0, "0101"), (-1.0, "0110"), (-1.0, "1001")]),
    ];
    [("(4)", symmetric), ("(3,1)", standard), ("(2,2)", two_two)]
}

/// `(class label, normalized states)` on three qubits, `ε = e^{2πi/3}`.
fn c3_reference() -> [(&'static str, Vec<CVector>); 3] {
    let eps = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let one = c(1.0, 0.0);
    let r3 = c(1.0 / 3f64.sqrt(), 0.0);
    let s = |terms: &[(Complex64, &str)]| state(3, terms);
    let phi = vec![
        s(&[(one, "000")]),
        s(&[(one, "111")]),
        s(&[(r3, "100"), (r3, "010"), (r3, "001")]),
        s(&[(r3, "011"), (r3, "101"), (r3, "110")]),
    ];
    let twisted = |a: Complex64, b: Complex64| {
        vec![
            s(&[(r3, "100"), (r3 * a, "010"), (r3 * b, "001")]),
            s(&[(r3, "011"), (r3 * a, "101"), (r3 * b, "110")]),
        ]
    };
    [
        ("P_0", phi),
        ("P_1", twisted(eps, eps * eps)),
        ("P_2", twisted(eps * eps, eps)),
    ]
}

/// Distance from `v` to the nearest column of `x` after aligning the phase.
fn phase_distance(x: &CMatrix, v: &CVector) -> f64 {
    x.column_iter()
        .map(|col| {
            let overlap = col.dotc(v);
            let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
            (v - col * phase).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_4_golden_subspaces() {
    let start = Instant::now();
    let mut ch = Checks::default();

    let cob = family_basis(&GroupSpec::Symmetric(4));
    for (label, vecs) in s4_reference() {
        let class = class_index(&cob, label);
        let d = subspace_distance(&class_frame(&cob, class), &frame(16, &vecs));
        ch.within(&format!("S4 {label}"), d, SUBSPACE_TOL);
    }
    for label in ["(2,1,1)", "(1,1,1,1)"] {
        let k = &cob.classes[class_index(&cob, label)];
        ch.eq(&format!("S4 {label} width"), k.d * k.m, 0);
    }

    let cob = family_basis(&GroupSpec::Cyclic(3));
    for (label, vecs) in c3_reference() {
        let x = class_frame(&cob, class_index(&cob, label));
        ch.within(&format!("C3 {label} span"), subspace_distance(&x, &frame(8, &vecs)), SUBSPACE_TOL);
        for (i, v) in vecs.iter().enumerate() {
            ch.within(&format!("C3 {label} vector {i} up to phase"), phase_distance(&x, v), SUBSPACE_TOL);
        }
    }
    ch.finish(4, "golden subspaces", start, Duration::from_secs(10));
}

fn dense(rows: &[[Complex64; 4]]) -> CMatrix {
    DMatrix::from_fn(rows.len(), 4, |i, j| rows[i][j])
}

/// Embeds a `4 × 4` block and two `2 × 2` blocks on the diagonal.
fn three_blocks(big: &CMatrix, small: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(8, 8);
    m.view_mut((0, 0), (4, 4)).copy_from(big);
    m.view_mut((4, 4), (2, 2)).copy_from(small);
    m.view_mut((6, 6), (2, 2)).copy_from(small);
    m
}

#[test]
fn criterion_5_transformed_hamiltonians() {
    let start = Instant::now();
    let mut ch = Checks::default();
    let model = build_model(Topology::Ring(3)).unwrap();
    let report = subspace_controllability_report(&model, &Tolerances::default()).unwrap();
    let cob = &report.basis;

    // Reference basis (φ, ψ, η) and the transition from the computed basis.
    let reference: Vec<(usize, CVector)> = c3_reference()
        .into_iter()
        .flat_map(|(label, vecs)| {
            let class = class_index(cob, label);
            vecs.into_iter().map(move |v| (class, v))
        })
        .collect();
    let w = columns_to_matrix(8, &reference.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
    let s = cob.unitary.adjoint() * &w;
    let mut transition_leak = 0.0f64;
    for (i, col) in cob.columns.iter().enumerate() {
        for (j, (class, _)) in reference.iter().enumerate() {
            if col.class != *class {
                transition_leak = transition_leak.max(s[(i, j)].norm());
            }
        }
    }
    ch.within("transition off-class", transition_leak, ENTRY_TOL);

    let (z, i, r3) = (c(0.0, 0.0), c(0.0, 1.0), 3f64.sqrt());
    let drift = CMatrix::from_diagonal(&CVector::from_vec(
        [-3.0, -3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0].iter().map(|&x| c(0.0, x)).collect(),
    ));
    let hx = three_blocks(
        &dense(&[
            [z, z, -i * r3, z],
            [z, z, z, -i * r3],
            [-i * r3, z, z, -2.0 * i],
            [z, -i * r3, -2.0 * i, z],
        ]),
        &DMatrix::from_row_slice(2, 2, &[z, i, i, z]),
    );
    // With σ_y = [[0, i], [-i, 0]].
    let hy = three_blocks(
        &dense(&[
            [z, z, c(r3, 0.0), z],
            [z, z, z, c(-r3, 0.0)],
            [c(-r3, 0.0), z, z, c(2.0, 0.0)],
            [z, c(r3, 0.0), c(-2.0, 0.0), z],
        ]),
        &DMatrix::from_row_slice(2, 2, &[z, c(-1.0, 0.0), c(1.0, 0.0), z]),
    );
    let expected = [("H_zz_nn", drift), ("H_x", hx), ("H_y", hy)];

    for (label, want) in &expected {
        let g = model.generators().into_iter().find(|g| g.label == *label).unwrap();
        let blocks = g.op.conjugate_by(&cob.unitary);
        let got = s.adjoint() * blocks * &s;
        ch.within(&format!("{label} entries"), max_abs(&(got.clone() - want)), ENTRY_TOL);
        let psi = got.view((4, 4), (2, 2)).into_owned();
        let eta = got.view((6, 6), (2, 2)).into_owned();
        ch.within(&format!("{label} repeated 2×2 blocks"), max_abs(&(psi - eta)), ENTRY_TOL);
    }
    ch.within("leakage", report.blocks.max_leakage(), BLOCK_TOL);
    ch.within("copy deviation", report.blocks.max_copy_deviation(), BLOCK_TOL);
    ch.finish(5, "transformed Hamiltonians", start, Duration::from_secs(5));
}

#[test]
fn criterion_6_lie_closures() {
    let start = Instant::now();
    let mut ch = Checks::default();
    let tol = Tolerances::default();
    for (topology, want) in [
        (Topology::Complete(3), 19),
        (Topology::Ring(3), 19),
        (Topology::Complete(4), 34),
    ] {
        let r = subspace_controllability_report(&build_model(topology).unwrap(), &tol).unwrap();
        ch.eq(
            &format!("{} n={} closure", topology.name(), topology.sites()),
            r.lie.dimension,
            want,
        );
        if topology == Topology::Ring(3) {
            let dims: Vec<usize> = r.lie.blocks.iter().map(|b| b.dimension).collect();
            ch.eq("ring n=3 block closures", dims, vec![16, 4, 4]);
            ch.check(r.subspace_controllable(), "ring n=3 not subspace controllable");
        }
    }
    ch.finish(6, "Lie closures", start, Duration::from_secs(60));
}

#[test]
fn criterion_7_block_audit() {
    let start = Instant::now();
    let mut ch = Checks::default();
    let mut topologies = model_topologies();
    topologies.push(Topology::CentralChain(2));
    for topology in topologies {
        let model = build_model(topology).unwrap();
        let cob = family_basis(&model.symmetry);
        let name = format!("{} n={}", topology.name(), topology.sites());
        let audit = group_block_audit(&cob, false, BLOCK_TOL).unwrap();
        ch.check(audit.pass, format_args!("{name}: generator audit failed"));
        ch.within(&format!("{name} Λ⊗1 generators"), audit.max_deviation(), BLOCK_TOL);
        if topology.sites() <= 4 {
            let all = group_block_audit(&cob, true, BLOCK_TOL).unwrap();
            ch.within(&format!("{name} Λ⊗1 all elements"), all.max_deviation(), BLOCK_TOL);
        }
        let sz = field_sum(Axis::Z, topology.sites()).unwrap();
        let mut ops: Vec<(&str, _)> = model.generators().into_iter().map(|g| (g.label.as_str(), &g.op)).collect();
        ops.push(("S_z", &sz));
        let blocks = block_check(&cob, &ops, BLOCK_TOL);
        ch.within(&format!("{name} leakage"), blocks.max_leakage(), BLOCK_TOL);
        ch.within(&format!("{name} equal copies"), blocks.max_copy_deviation(), BLOCK_TOL);
    }
    ch.finish(7, "structural block audit", start, Duration::from_secs(10));
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[0x5e; 32]))
}

fn record<T: std::fmt::Debug>(ch: &mut Checks, what: &str, result: Result<(), proptest::test_runner::TestError<T>>) {
    let outcome = result.map_err(|e| e.to_string());
    ch.check(outcome.is_ok(), format_args!("{what}: {}", outcome.err().unwrap_or_default()));
}

fn s3_element() -> impl Strategy<Value = RationalElement> {
    let group = enumerate_group(&GroupSpec::Symmetric(3)).unwrap();
    proptest::collection::vec((0..group.len(), -3i64..=3), 0..6).prop_map(move |terms| {
        RationalElement::from_terms(
            3,
            terms
                .into_iter()
                .map(|(g, a)| (group[g].clone(), num_rational::BigRational::from_integer(a.into()))),
        )
        .unwrap()
    })
}

#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();
    let mut ch = Checks::default();

    let triples = (1usize..=6).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)));
    record(
        &mut ch,
        "group laws",
        runner(256).run(&triples, |(p, q, r)| {
            let n = p.degree();
            let e = Permutation::identity(n);
            let pq = p.compose(&q).unwrap();
            prop_assert_eq!(pq.compose(&r).unwrap(), p.compose(&q.compose(&r).unwrap()).unwrap());
            prop_assert_eq!(p.compose(&e).unwrap(), p.clone());
            prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
            prop_assert_eq!(pq.sign(), p.sign() * q.sign());
            let conj = q.compose(&p).unwrap().compose(&q.inverse()).unwrap();
            prop_assert_eq!(conj.cycle_type(), p.cycle_type());
            Ok(())
        }),
    );

    record(
        &mut ch,
        "group algebra laws",
        runner(128).run(&(s3_element(), s3_element(), s3_element()), |(a, b, c)| {
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.multiply(&b.add(&c).unwrap()).unwrap(),
                ab.add(&a.multiply(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(ab.dagger(), b.dagger().multiply(&a.dagger()).unwrap());
            Ok(())
        }),
    );

    for n in 1..=5 {
        let mut sum = RationalElement::zero(n);
        for r in ks_family(n).unwrap() {
            sum = sum.add(&r.element).unwrap();
        }
        ch.check(sum == RationalElement::identity(n), format_args!("Σ P_T ≠ 1 at n={n}"));
    }

    for n in 1..=12usize {
        let m: Vec<u128> = (0..n).map(|k| multiplicity_m_k(n, k)).collect();
        ch.eq(&format!("Σ m_k at n={n}"), m.iter().sum::<u128>(), 1u128 << n);
        ch.eq(&format!("Σ m_k² at n={n}"), m.iter().map(|x| x * x).sum::<u128>(), dim_u_cyclic(n));
    }

    let groups = [GroupSpec::Symmetric(2),
        GroupSpec::Symmetric(3),
        GroupSpec::Symmetric(4),
        GroupSpec::Cyclic(3),
        GroupSpec::Cyclic(5),
        GroupSpec::Cyclic(6),
        GroupSpec::Reflection(4),
        GroupSpec::Reflection(5)];
    let families: Vec<GysFamily> = groups.iter().map(|g| GysFamily::for_group(g).unwrap()).collect();
    let picks = (0..families.len()).prop_flat_map(|f| (Just(f), 0..families[f].len()));
    record(
        &mut ch,
        "projector image orthonormality",
        runner(64).run(&picks, |(f, r)| {
            let element: &AnyElement = &families[f].records[r].element;
            let basis = projector_image_basis(element, 2).unwrap();
            let dim = 1 << families[f].degree();
            let x = columns_to_matrix(dim, &basis);
            let gram = x.adjoint() * &x;
            prop_assert!(max_abs(&(gram - CMatrix::identity(basis.len(), basis.len()))) < 1e-10);
            let p = TensorRep::new(families[f].degree(), 2, std::iter::empty())
                .unwrap()
                .materialize(&element.to_complex());
            prop_assert!(max_abs(&(p.mul_dense(&x) - &x)) < 1e-10);
            let rank = p.to_dense().trace().re.round() as usize;
            prop_assert_eq!(rank, basis.len());
            Ok(())
        }),
    );

    let pairs = (1usize..=5, 2usize..=3).prop_flat_map(|(n, d)| (Just(d), permutation(n), permutation(n)));
    record(
        &mut ch,
        "tensor action homomorphism",
        runner(64).run(&pairs, |(d, p, q)| {
            let rep = TensorRep::new(p.degree(), d, std::iter::empty()).unwrap();
            let lhs = rep.rho(&p.compose(&q).unwrap()).to_dense();
            let rhs = rep.rho(&p).mul_sparse(&rep.rho(&q)).to_dense();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        }),
    );
    ch.finish(8, "property suites", start, Duration::from_secs(60));
}
