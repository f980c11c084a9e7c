//! Check records for a single catalog case.

use gqs_core::algebras::Algebra;
use gqs_core::cases::{build_caos, expected_counts, CAOSet, CaseSpec};
use gqs_core::enumerate::signature;
use gqs_core::grading::{grade_by_toral, verify_grading, FiveGrading};
use gqs_core::relations::{
    check_quadratic, compare_with_table, extract_triple_coefficients, verify_relations, CoefficientTable,
    RelationReport, TemplateId,
};
use gqs_core::superlinalg::Subspace;

use crate::report::CheckRecord;

pub fn relation_details(r: &RelationReport) -> String {
    match r.failures.first() {
        None => format!("{} instances hold", r.checked),
        Some(f) => format!(
            "{} of {} instances fail; first {}: residual {}",
            r.failures.len(),
            r.checked,
            f.tuple,
            f.residual
        ),
    }
}

fn relation_record(name: String, caos: &CAOSet, id: TemplateId) -> CheckRecord {
    match verify_relations(caos, id) {
        Ok(r) => CheckRecord::new(name, r.passed, relation_details(&r)),
        Err(e) => CheckRecord::new(name, false, e.to_string()),
    }
}

fn table_record(name: String, caos: &CAOSet, id: TemplateId, table: &CoefficientTable) -> CheckRecord {
    match compare_with_table(caos, id, table) {
        Ok(m) if m.is_empty() => CheckRecord::new(name, true, format!("extracted coefficients agree with {id}")),
        Ok(m) => CheckRecord::new(name, false, format!("{} tuples disagree, first {}", m.len(), m[0])),
        Err(e) => CheckRecord::new(name, false, e.to_string()),
    }
}

/// Which of the two para-Bose readings holds. Passes iff exactly one does.
pub fn para_bose_variant(caos: &CAOSet) -> (CheckRecord, Option<TemplateId>) {
    let reports: Vec<(TemplateId, Result<RelationReport, String>)> =
        [TemplateId::ParaBosePrinted, TemplateId::ParaBoseSwapped]
            .into_iter()
            .map(|id| (id, verify_relations(caos, id).map_err(|e| e.to_string())))
            .collect();
    let holding: Vec<TemplateId> =
        reports.iter().filter(|(_, r)| r.as_ref().is_ok_and(|r| r.passed)).map(|(id, _)| *id).collect();
    let parts: Vec<String> = reports
        .iter()
        .map(|(id, r)| match r {
            Ok(r) if r.passed => format!("{id} holds ({})", relation_details(r)),
            Ok(r) => format!("{id} fails ({})", relation_details(r)),
            Err(e) => format!("{id} not applicable ({e})"),
        })
        .collect();
    let ok = holding.len() == 1;
    let record = CheckRecord::new("relations.para_bose_variant", ok, parts.join("; "));
    (record, if ok { Some(holding[0]) } else { None })
}

fn prefixed(id: &str, mut records: Vec<CheckRecord>) -> Vec<CheckRecord> {
    for r in &mut records {
        r.name = format!("{id}.{}", r.name);
    }
    records
}

/// Grading, operator, quadratic and relation checks for one case, each
/// named `<case id>.<check>`.
pub fn case_checks(alg: &Algebra, spec: &CaseSpec) -> Vec<CheckRecord> {
    prefixed(&spec.id, unprefixed_case_checks(alg, spec))
}

fn unprefixed_case_checks(alg: &Algebra, spec: &CaseSpec) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let g = match grade_by_toral(alg, &spec.toral_element(alg)) {
        Ok(g) => g,
        Err(e) => {
            out.push(CheckRecord::new("grading", false, format!("h = {}: {e}", spec.coords_string())));
            return out;
        }
    };
    let report = verify_grading(alg, &g);
    for (name, c) in report.checks() {
        let mut details = c.detail.clone();
        if name == "generation" {
            let strict = if report.generation_strict.passed { "holds" } else { "fails" };
            details.push_str(&format!("; G0 = [[G+1, G-1]] without the Cartan {strict}"));
        }
        out.push(CheckRecord::new(format!("grading.{name}"), c.passed, details));
    }
    let (length, n_ops) = expected_counts(spec);
    out.push(CheckRecord::new(
        "counts",
        (g.length, g.n_ops) == (length, n_ops),
        format!("h = {}; found l={} N={}; expected l={length} N={n_ops}", spec.coords_string(), g.length, g.n_ops),
    ));
    let sig = signature(&g, alg);
    out.push(CheckRecord::new(
        "g0_dims",
        (sig.g0.even, sig.g0.odd) == spec.expected_g0_dims,
        format!(
            "G0 = {}; found ({}|{}); expected ({}|{})",
            spec.g0_label, sig.g0.even, sig.g0.odd, spec.expected_g0_dims.0, spec.expected_g0_dims.1
        ),
    ));
    out.extend(operator_checks(alg, spec, &g));
    out
}

fn operator_checks(alg: &Algebra, spec: &CaseSpec, g: &FiveGrading) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let caos = match build_caos(alg, spec) {
        Ok(c) => c,
        Err(e) => {
            out.push(CheckRecord::new("operators", false, e.to_string()));
            return out;
        }
    };
    let bad_pairs: Vec<String> = (0..caos.len())
        .filter(|&i| alg.omega(&caos.pairs[i].0).map_or(true, |w| w != caos.pairs[i].1))
        .map(|i| caos.labels[i].clone())
        .collect();
    out.push(CheckRecord::new(
        "operators.omega_pairs",
        bad_pairs.is_empty(),
        if bad_pairs.is_empty() {
            format!("omega(x+) = x- for all {} pairs", caos.len())
        } else {
            format!("omega(x+) != x- for {}", bad_pairs.join(", "))
        },
    ));
    let span = |ops: Vec<_>, d: i8| {
        Subspace::from_basis(&alg.context, ops).is_ok_and(|s| s.same_span(g.component(d)))
    };
    let spans = span(caos.creators(), 1) && span(caos.annihilators(), -1);
    out.push(CheckRecord::new(
        "operators.span",
        spans,
        format!("{} creators and annihilators against dim G+1 = {}", caos.len(), g.component(1).dim()),
    ));
    let q = check_quadratic(&caos, g);
    out.push(CheckRecord::new("quadratic", q.passed, relation_details(&q)));

    let table = match extract_triple_coefficients(&caos) {
        Ok(t) => t,
        Err(e) => {
            out.push(CheckRecord::new("extraction", false, e.to_string()));
            return out;
        }
    };
    out.push(CheckRecord::new(
        "extraction",
        true,
        format!("{} triple brackets expanded in the operator basis", table.entries.len()),
    ));
    match spec.relation_template {
        None => out.push(CheckRecord::skipped("relations", "no explicit relation template for this row")),
        Some(TemplateId::ParaBosePrinted | TemplateId::ParaBoseSwapped) => {
            let (record, holding) = para_bose_variant(&caos);
            out.push(record);
            out.push(match holding {
                Some(id) => table_record("relations.table_agreement".into(), &caos, id, &table),
                None => CheckRecord::skipped("relations.table_agreement", "no single para-Bose variant holds"),
            });
        }
        Some(TemplateId::Mix) => {
            out.push(relation_record(format!("relations.{}", TemplateId::Mix), &caos, TemplateId::Mix));
            out.push(table_record("relations.table_agreement".into(), &caos, TemplateId::Mix, &table));
            for (kind, subset, id) in [
                (1, "bose_subset", TemplateId::ParaBoseSwapped),
                (0, "fermi_subset", TemplateId::ParaFermi),
            ] {
                let name = format!("relations.{subset}.{id}");
                let sub = caos.subset_of_kind(kind);
                out.push(if sub.is_empty() {
                    CheckRecord::skipped(name, "no operators of this kind")
                } else {
                    relation_record(name, &sub, id)
                });
            }
        }
        Some(id) => {
            out.push(relation_record(format!("relations.{id}"), &caos, id));
            out.push(table_record("relations.table_agreement".into(), &caos, id, &table));
        }
    }
    out
}
