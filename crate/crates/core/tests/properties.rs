use gqs_core::algebras::{build, Algebra, FamilyTag};
use gqs_core::cases::{build_caos, catalog, find_case, CAOSet};
use gqs_core::enumerate::signature;
use gqs_core::exactfield::Scalar;
use gqs_core::grading::{grade_by_toral, FiveGrading, ToralElement};
use gqs_core::relations::{verify_relations, TemplateId};
use gqs_core::superlinalg::{Subspace, SuperMatrix};
use proptest::prelude::*;
use proptest::sample::Index;

fn tags() -> [FamilyTag; 4] {
    [FamilyTag::b(1, 1).unwrap(), FamilyTag::c(3).unwrap(), FamilyTag::a(1, 2).unwrap(), FamilyTag::d(2, 1).unwrap()]
}

fn graded(tag: FamilyTag, pick: &Index) -> (Algebra, FiveGrading) {
    let alg = build(tag).unwrap();
    let cases = catalog(tag);
    let spec = &cases[pick.index(cases.len())];
    let g = grade_by_toral(&alg, &spec.toral_element(&alg)).unwrap();
    (alg, g)
}

fn combination(alg: &Algebra, space: &Subspace, coeffs: &[i64]) -> SuperMatrix {
    let mut x = SuperMatrix::zero(&alg.context);
    for (b, &c) in space.basis().iter().zip(coeffs.iter().cycle()) {
        x.add_scaled(&Scalar::from_int(c), b);
    }
    x
}

fn caos(tag: FamilyTag, id: &str) -> CAOSet {
    let alg = build(tag).unwrap();
    build_caos(&alg, &find_case(tag, id).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brackets_add_degrees(
        which in 0usize..4,
        pick in any::<Index>(),
        j in -2i8..=2,
        k in -2i8..=2,
        cx in proptest::collection::vec(-2i64..=2, 1..8),
        cy in proptest::collection::vec(-2i64..=2, 1..8),
    ) {
        let (alg, g) = graded(tags()[which], &pick);
        let x = combination(&alg, g.component(j), &cx);
        let y = combination(&alg, g.component(k), &cy);
        let z = x.bracket(&y);
        if (j + k).abs() <= 2 {
            prop_assert!(g.component(j + k).contains(&z));
        } else {
            prop_assert!(z.is_zero());
        }
    }

    #[test]
    fn component_dims_symmetric(which in 0usize..4, pick in any::<Index>()) {
        let (alg, g) = graded(tags()[which], &pick);
        let d = g.dims();
        prop_assert_eq!(d[0], d[4]);
        prop_assert_eq!(d[1], d[3]);
        prop_assert_eq!(d.iter().sum::<usize>(), alg.dim());
    }

    #[test]
    fn negation_keeps_signature(which in 0usize..3, raw in proptest::collection::vec(-2i64..=2, 4)) {
        let tag = [FamilyTag::b(1, 1).unwrap(), FamilyTag::c(2).unwrap(), FamilyTag::a(1, 0).unwrap()][which];
        let alg = build(tag).unwrap();
        let coords = &raw[..alg.frame_len()];
        let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
        let h = ToralElement::from_integers(&alg, coords).unwrap();
        let minus_h = ToralElement::from_integers(&alg, &neg).unwrap();
        match (grade_by_toral(&alg, &h), grade_by_toral(&alg, &minus_h)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(signature(&a, &alg), signature(&b, &alg)),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "h and -h disagree on admissibility"),
        }
    }

    #[test]
    fn para_bose_invariant_under_relabeling(order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let set = caos(FamilyTag::b(0, 3).unwrap(), "B0.table.i=3").permuted(&order);
        let r = verify_relations(&set, TemplateId::ParaBoseSwapped).unwrap();
        prop_assert!(r.passed);
        prop_assert_eq!(r.checked, 27 * 8);
    }

    #[test]
    fn failure_count_invariant_under_relabeling(order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let base = caos(FamilyTag::b(0, 3).unwrap(), "B0.table.i=3");
        let before = verify_relations(&base, TemplateId::ParaBosePrinted).unwrap();
        let after = verify_relations(&base.permuted(&order), TemplateId::ParaBosePrinted).unwrap();
        prop_assert!(!after.passed);
        prop_assert_eq!(before.failures.len(), after.failures.len());
    }

    #[test]
    fn para_fermi_invariant_under_relabeling(order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let set = caos(FamilyTag::b(3, 0).unwrap(), "B.table.(3,0)").permuted(&order);
        prop_assert!(verify_relations(&set, TemplateId::ParaFermi).unwrap().passed);
    }
}
