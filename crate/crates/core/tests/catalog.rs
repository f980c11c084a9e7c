use gqs_core::algebras::{build, FamilyTag};
use gqs_core::cases::{build_caos, catalog, expected_counts};
use gqs_core::enumerate::signature;
use gqs_core::grading::{grade_by_toral, verify_grading};
use gqs_core::relations::{check_quadratic, compare_with_table, extract_triple_coefficients, verify_relations};
use gqs_core::superlinalg::Subspace;

fn tags_in_scope() -> Vec<FamilyTag> {
    let mut tags = Vec::new();
    for m in 0..=3usize {
        for n in 0..=3usize {
            if m + n >= 1 && m + n <= 3 {
                tags.push(FamilyTag::b(m, n).unwrap());
                if m != n {
                    tags.push(FamilyTag::a(m, n).unwrap());
                }
            }
        }
    }
    tags.push(FamilyTag::b(0, 4).unwrap());
    for n in 2..=4 {
        tags.push(FamilyTag::c(n).unwrap());
    }
    for m in 2..=3 {
        for n in 1..=2 {
            tags.push(FamilyTag::d(m, n).unwrap());
        }
    }
    tags
}

#[test]
fn every_case_grades_and_verifies() {
    for tag in tags_in_scope() {
        let alg = build(tag).unwrap();
        for spec in catalog(tag) {
            let g = grade_by_toral(&alg, &spec.toral_element(&alg))
                .unwrap_or_else(|e| panic!("{tag} {}: {e}", spec.id));
            let report = verify_grading(&alg, &g);
            assert!(report.all_passed(), "{tag} {}: {report:#?}", spec.id);
            assert_eq!((g.length, g.n_ops), expected_counts(&spec), "{tag} {}", spec.id);
            let sig = signature(&g, &alg);
            assert_eq!((sig.g0.even, sig.g0.odd), spec.expected_g0_dims, "{tag} {} G0 {}", spec.id, spec.g0_label);
        }
    }
}

#[test]
fn every_case_has_closed_operator_set() {
    for tag in tags_in_scope() {
        let alg = build(tag).unwrap();
        for spec in catalog(tag) {
            let g = grade_by_toral(&alg, &spec.toral_element(&alg)).unwrap();
            let caos = build_caos(&alg, &spec).unwrap_or_else(|e| panic!("{tag} {}: {e}", spec.id));
            assert_eq!(caos.len(), g.n_ops, "{tag} {}", spec.id);
            for (plus, minus) in &caos.pairs {
                assert_eq!(&alg.omega(plus).unwrap(), minus, "{tag} {}", spec.id);
            }
            let plus = Subspace::from_basis(&alg.context, caos.creators()).unwrap();
            let minus = Subspace::from_basis(&alg.context, caos.annihilators()).unwrap();
            assert!(plus.same_span(g.component(1)), "{tag} {}", spec.id);
            assert!(minus.same_span(g.component(-1)), "{tag} {}", spec.id);
            assert!(check_quadratic(&caos, &g).passed, "{tag} {}", spec.id);
            let table = extract_triple_coefficients(&caos).unwrap_or_else(|e| panic!("{tag} {}: {e}", spec.id));
            if let Some(t) = spec.relation_template {
                let r = verify_relations(&caos, t).unwrap();
                assert!(r.passed, "{tag} {} {t}: {:?}", spec.id, r.failures.first());
                assert!(compare_with_table(&caos, t, &table).unwrap().is_empty(), "{tag} {} {t}", spec.id);
            }
        }
    }
}
