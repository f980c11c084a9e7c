//! Independent oracles for the algebra constructions: closed-form
//! dimensions, a brute-force search for the ω sign vector, and structural
//! identities checked on random elements.

use gqs_core::algebras::{build, Algebra, Family, FamilyTag};
use gqs_core::cases::{build_caos, catalog};
use gqs_core::exactfield::Scalar;
use gqs_core::superlinalg::SuperMatrix;
use proptest::prelude::*;

/// `dim sl(p|q) = (p+q)² − 1`, `dim osp(M|2N) = M(M−1)/2 + N(2N+1) + 2MN`.
fn dim_oracle(tag: FamilyTag) -> usize {
    let osp = |big_m: usize, big_n: usize| big_m * big_m.saturating_sub(1) / 2 + big_n * (2 * big_n + 1) + 2 * big_m * big_n;
    match tag.family {
        Family::A => (tag.m + tag.n + 2).pow(2) - 1,
        Family::B => osp(2 * tag.m + 1, tag.n),
        Family::C => osp(2, tag.n - 1),
        Family::D => osp(2 * tag.m, tag.n),
    }
}

fn small_tags() -> Vec<FamilyTag> {
    let mut v = vec![
        FamilyTag::a(0, 1).unwrap(),
        FamilyTag::a(1, 0).unwrap(),
        FamilyTag::a(2, 1).unwrap(),
        FamilyTag::a(0, 3).unwrap(),
        FamilyTag::c(2).unwrap(),
        FamilyTag::c(3).unwrap(),
        FamilyTag::d(2, 1).unwrap(),
        FamilyTag::d(3, 1).unwrap(),
    ];
    for (m, n) in [(0, 1), (0, 2), (1, 0), (1, 1), (2, 1), (1, 2)] {
        v.push(FamilyTag::b(m, n).unwrap());
    }
    v
}

#[test]
fn dimensions_match_closed_forms() {
    for tag in small_tags() {
        let alg = build(tag).unwrap();
        assert_eq!(alg.dim(), dim_oracle(tag), "{tag}");
        assert_eq!(alg.dim(), tag.expected_dim(), "{tag}");
        assert_eq!(alg.roots.len(), alg.dim() - alg.rank(), "{tag}");
    }
}

#[test]
fn basis_closed_under_bracket() {
    for tag in [FamilyTag::b(1, 1).unwrap(), FamilyTag::c(2).unwrap(), FamilyTag::a(1, 0).unwrap()] {
        let alg = build(tag).unwrap();
        for x in alg.basis.basis() {
            for y in alg.basis.basis() {
                assert!(alg.basis.contains(&x.bracket(y)), "{tag}");
            }
        }
    }
}

fn signed_transpose_preserves(alg: &Algebra, signs: &[i8]) -> bool {
    alg.basis.basis().iter().all(|x| alg.contains(&x.signed_transpose(signs)))
}

fn negates_roots(alg: &Algebra, signs: &[i8]) -> bool {
    alg.roots.iter().all(|r| {
        let image = r.matrix.signed_transpose(signs);
        let neg: Vec<i64> = r.weight.iter().map(|w| -w).collect();
        let target = alg.root(&neg).expect("roots come in ± pairs");
        let (j, k, v) = target.matrix.nonzero().next().unwrap();
        let lambda = image.get(j, k) / v;
        !lambda.is_zero() && image == target.matrix.scale(&lambda)
    })
}

/// All `±1` diagonals (first entry fixed to +1) for which `x ↦ D xᵀ D`
/// preserves the algebra, negates roots and exchanges the explicit
/// operators of the case with `(k,l) = (m,n)`.
fn omega_candidates(alg: &Algebra) -> Vec<Vec<i8>> {
    let size = alg.context.size();
    let spec = catalog(alg.tag).into_iter().find(|c| c.has_explicit_caos());
    let caos = spec.map(|s| build_caos(alg, &s).unwrap());
    (0..1u32 << (size - 1))
        .map(|bits| {
            std::iter::once(1)
                .chain((0..size - 1).map(|b| if bits >> b & 1 == 1 { -1 } else { 1 }))
                .collect::<Vec<i8>>()
        })
        .filter(|signs| signed_transpose_preserves(alg, signs) && negates_roots(alg, signs))
        .filter(|signs| {
            caos.as_ref()
                .is_none_or(|c| c.pairs.iter().all(|(p, m)| &p.signed_transpose(signs) == m))
        })
        .collect()
}

#[test]
fn frozen_omega_is_the_searched_one() {
    for tag in [
        FamilyTag::b(0, 1).unwrap(),
        FamilyTag::b(0, 2).unwrap(),
        FamilyTag::b(1, 1).unwrap(),
        FamilyTag::b(2, 0).unwrap(),
    ] {
        let alg = build(tag).unwrap();
        let found = omega_candidates(&alg);
        let frozen: Vec<i8> = alg.omega_sign.iter().map(|s| s * alg.omega_sign[0]).collect();
        assert_eq!(found, vec![frozen], "{tag}");
    }
    // Without printed operators the search only has to contain the frozen vector.
    for tag in [FamilyTag::c(2).unwrap(), FamilyTag::d(2, 1).unwrap(), FamilyTag::a(1, 0).unwrap()] {
        let alg = build(tag).unwrap();
        let frozen: Vec<i8> = alg.omega_sign.iter().map(|s| s * alg.omega_sign[0]).collect();
        assert!(omega_candidates(&alg).contains(&frozen), "{tag}");
    }
}

#[test]
fn omega_involution_and_root_negation() {
    for tag in small_tags() {
        let alg = build(tag).unwrap();
        for x in alg.basis.basis() {
            let w = alg.omega(x).unwrap();
            assert_eq!(&alg.omega(&w).unwrap(), x, "{tag}");
        }
        assert!(negates_roots(&alg, &alg.omega_sign), "{tag}");
    }
}

fn homogeneous_element(alg: &Algebra, parity: u8, coeffs: &[i64]) -> SuperMatrix {
    let mut x = SuperMatrix::zero(&alg.context);
    for (b, &c) in alg.basis.basis().iter().zip(coeffs) {
        x.add_scaled(&Scalar::from_int(c), b);
    }
    x.homogeneous_part(parity)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn omega_is_super_anti_morphism(
        which in 0usize..4,
        px in 0u8..2,
        py in 0u8..2,
        cx in proptest::collection::vec(-2i64..=2, 40),
        cy in proptest::collection::vec(-2i64..=2, 40),
    ) {
        let tag = [FamilyTag::b(1, 1), FamilyTag::c(2), FamilyTag::d(2, 1), FamilyTag::a(0, 1)][which].clone().unwrap();
        let alg = build(tag).unwrap();
        let x = homogeneous_element(&alg, px, &cx);
        let y = homogeneous_element(&alg, py, &cy);
        let lhs = alg.omega(&x.bracket(&y)).unwrap();
        let sign = if px * py == 1 { 1 } else { -1 };
        let rhs = alg.omega(&x).unwrap().bracket(&alg.omega(&y).unwrap()).scale(&Scalar::from_int(sign));
        prop_assert_eq!(lhs, rhs);
    }
}
