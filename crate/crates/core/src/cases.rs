//! Catalog of named gradings per family, with their grading coordinates,
//! closed-form `(ℓ, N)` values and creation/annihilation operator sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebras::{Algebra, Family, FamilyTag};
use crate::exactfield::{Rational, Scalar};
use crate::grading::ToralElement;
use crate::relations::TemplateId;
use crate::superlinalg::{ParityContext, SuperMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("case {case}: operator {label} is not a member of {algebra}")]
    NotAMember { case: String, label: String, algebra: String },
    #[error("case {case} does not belong to {algebra}")]
    WrongAlgebra { case: String, algebra: String },
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
}

/// Which row of which table (or which deletion step) a case comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseRow {
    AStep1 { i: usize },
    AStep2 { i: usize, j: usize, variant: u8 },
    AStep5 { i: usize, j: usize },
    AStep6 { i: usize, j: usize, k: usize, variant: u8 },
    BTable { k: usize, l: usize },
    B0Table { i: usize },
    /// `alt` separates the two rows sharing `(k,l) = (m−1,n)`.
    DTable { k: usize, l: usize, alt: Option<char> },
    CTable { k: usize, l: usize, alt: Option<char> },
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseSpec {
    pub id: String,
    #[serde(serialize_with = "serialize_tag")]
    pub tag: FamilyTag,
    pub row: CaseRow,
    /// Toral coordinates in the weight frame (ε's then δ's); may be half-integers.
    #[serde(serialize_with = "serialize_coords")]
    pub grading_coords: Vec<Rational>,
    pub expected_length: u8,
    pub expected_n: usize,
    /// `G₀` summand as printed in the tables, with the parameters filled in.
    pub g0_label: String,
    /// `(even, odd)` dimensions of `G₀` predicted from its summands.
    pub expected_g0_dims: (usize, usize),
    pub relation_template: Option<TemplateId>,
}

fn serialize_tag<S: serde::Serializer>(tag: &FamilyTag, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&tag.to_string())
}

fn serialize_coords<S: serde::Serializer>(c: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

impl CaseSpec {
    pub fn coords_string(&self) -> String {
        let parts: Vec<String> = self.grading_coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }

    pub fn toral_element(&self, alg: &Algebra) -> ToralElement {
        ToralElement::from_coords(alg, self.grading_coords.clone()).expect("catalog coordinates match the frame")
    }

    /// Whether the operators come from printed matrix formulas rather than
    /// the canonical root basis.
    pub fn has_explicit_caos(&self) -> bool {
        let (m, n) = (self.tag.m, self.tag.n);
        match self.row {
            CaseRow::AStep1 { i } => i == 1 || i == 2,
            CaseRow::AStep2 { i, j, variant } => variant == 21 && j == i + 1,
            CaseRow::BTable { k, l } => k == m && l == n,
            CaseRow::B0Table { i } => i == n,
            _ => false,
        }
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn half(numer: i64) -> Rational {
    Rational::new(numer.into(), 2.into())
}

/// Even roots `e(e−1)+o(o−1)` and odd roots `2eo` of `sl(e|o)`.
fn sl_roots(e: usize, o: usize) -> (usize, usize) {
    (e * e.saturating_sub(1) + o * o.saturating_sub(1), 2 * e * o)
}

fn b_roots(a: usize, b: usize) -> (usize, usize) {
    (2 * a * a + 2 * b * b, 2 * b * (2 * a + 1))
}

fn d_roots(a: usize, b: usize) -> (usize, usize) {
    (2 * a * a.saturating_sub(1) + 2 * b * b, 4 * a * b)
}

fn sl_label(e: usize, o: usize) -> String {
    if o == 0 {
        format!("sl({e})")
    } else if e == 0 {
        format!("sl({o})")
    } else {
        format!("sl({e}|{o})")
    }
}

/// `sl(k|l) ⊕ X(a|b)` with `X` one of the orthosymplectic types.
fn osp_g0(rank: usize, k: usize, l: usize, x: char, a: usize, b: usize) -> (String, (usize, usize)) {
    let (se, so) = sl_roots(k, l);
    let (xe, xo) = match x {
        'B' => b_roots(a, b),
        _ => d_roots(a, b),
    };
    let mut parts = Vec::new();
    if k + l > 1 {
        parts.push(sl_label(k, l));
    }
    if xe + xo > 0 {
        parts.push(match (x, a) {
            // Inside C(n) the second summand is sp(2b) or osp(2|2b) = C(b+1).
            ('C', 0) => format!("C{b}"),
            ('C', _) => format!("C({})", b + 1),
            _ => format!("{x}({a}|{b})"),
        });
    }
    let label = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    (label, (rank + se + xe, so + xo))
}

/// `G₀` of an sl grading: one `sl(e|o)` per group of indices sharing a
/// diagonal value.
fn a_g0(tag: FamilyTag, diag: &[i64]) -> (String, (usize, usize)) {
    let evens = tag.m + 1;
    let mut groups: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for (idx, &d) in diag.iter().enumerate() {
        let g = groups.entry(d).or_default();
        if idx < evens {
            g.0 += 1;
        } else {
            g.1 += 1;
        }
    }
    let rank = tag.m + tag.n + 1;
    let (mut even, mut odd) = (rank, 0);
    let mut parts = Vec::new();
    // Order the summands by first index so labels follow the matrix layout.
    let mut order: Vec<(usize, i64)> = groups
        .keys()
        .map(|&d| (diag.iter().position(|&x| x == d).unwrap(), d))
        .collect();
    order.sort();
    for (_, d) in order {
        let (e, o) = groups[&d];
        let (re, ro) = sl_roots(e, o);
        even += re;
        odd += ro;
        if e + o > 1 {
            parts.push(sl_label(e, o));
        }
    }
    let label = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    (label, (even, odd))
}

pub fn expected_counts(spec: &CaseSpec) -> (u8, usize) {
    let (m, n) = (spec.tag.m, spec.tag.n);
    let p = m + n + 2;
    match spec.row {
        CaseRow::AStep1 { i } => (3, i * (p - i)),
        CaseRow::AStep2 { i, j, variant } => match variant {
            21 => (5, (j - i) * (p - j + i)),
            22 => (5, i * (p - i)),
            _ => (5, j * (p - j)),
        },
        CaseRow::AStep5 { i, j } => (3, (j - i) * (p - j + i)),
        CaseRow::AStep6 { i, j, k, variant } => match variant {
            1 => (5, (j - i) * (p - j + i)),
            2 => (5, (k - i) * (p + i - k)),
            _ => (5, (k - j) * (p + j - k)),
        },
        CaseRow::BTable { k, l } => {
            if (k, l) == (1, 0) {
                (3, 2 * m + 2 * n - 1)
            } else {
                (5, (k + l) * (2 * m + 2 * n + 1 - 2 * k - 2 * l))
            }
        }
        CaseRow::B0Table { i } => (5, i * (2 * n + 1 - 2 * i)),
        CaseRow::DTable { k, l, alt } => {
            let tri = (m + n) * (m + n + 1) / 2 - m;
            match (k, l, alt) {
                (1, 0, None) => (3, 2 * (m + n - 1)),
                (_, _, None) if (k, l) == (m, n) => (3, tri),
                (_, _, Some('a')) => (5, tri),
                (_, _, Some(_)) => (5, 2 * (m + n - 1)),
                _ => (5, 2 * (k + l) * (m + n - k - l)),
            }
        }
        CaseRow::CTable { k, l, alt } => {
            let tri = n * (n + 1) / 2 - 1;
            match (k, l, alt) {
                (1, 0, None) => (3, 2 * (n - 1)),
                (1, _, None) if l == n - 1 => (3, tri),
                (_, _, Some('a')) => (5, tri),
                (_, _, Some(_)) => (5, 2 * (n - 1)),
                _ => (5, 2 * (k + l) * (n - k - l)),
            }
        }
    }
}

fn finish(
    tag: FamilyTag,
    id: String,
    row: CaseRow,
    coords: Vec<Rational>,
    g0: (String, (usize, usize)),
    template: Option<TemplateId>,
) -> CaseSpec {
    let mut spec = CaseSpec {
        id,
        tag,
        row,
        grading_coords: coords,
        expected_length: 0,
        expected_n: 0,
        g0_label: g0.0,
        expected_g0_dims: g0.1,
        relation_template: template,
    };
    let (l, n) = expected_counts(&spec);
    spec.expected_length = l;
    spec.expected_n = n;
    spec
}

fn a_case(tag: FamilyTag, id: String, row: CaseRow, diag: Vec<i64>, template: Option<TemplateId>) -> CaseSpec {
    let g0 = a_g0(tag, &diag);
    finish(tag, id, row, diag.into_iter().map(int).collect(), g0, template)
}

fn block_diag(p: usize, blocks: &[(std::ops::RangeInclusive<usize>, i64)]) -> Vec<i64> {
    (1..=p)
        .map(|idx| blocks.iter().find(|(r, _)| r.contains(&idx)).map_or(0, |(_, v)| *v))
        .collect()
}

fn catalog_a(tag: FamilyTag) -> Vec<CaseSpec> {
    let p = tag.m + tag.n + 2;
    let mut out = Vec::new();
    for i in 1..p {
        let template = match i {
            1 => Some(TemplateId::A1),
            2 => Some(TemplateId::ADouble),
            _ => None,
        };
        let diag = block_diag(p, &[(i + 1..=p, 1)]);
        out.push(a_case(tag, format!("A.step1.i={i}"), CaseRow::AStep1 { i }, diag, template));
    }
    // Block values for (1..i, i+1..j, j+1..p), chosen so the printed spans sit in degree −1.
    const STEP2: [(u8, [i64; 3]); 3] = [(21, [0, 1, 2]), (22, [1, 2, 0]), (23, [-1, 1, 0])];
    for i in 1..p {
        for j in i + 1..p {
            for (variant, v) in STEP2 {
                let diag = block_diag(p, &[(1..=i, v[0]), (i + 1..=j, v[1]), (j + 1..=p, v[2])]);
                let template = (variant == 21 && j == i + 1).then_some(TemplateId::A21R);
                let id = format!("A.step2.({i},{j}).variant{variant}");
                out.push(a_case(tag, id, CaseRow::AStep2 { i, j, variant }, diag, template));
            }
        }
    }
    for i in 1..p {
        for j in i + 1..p {
            let diag = block_diag(p, &[(i + 1..=j, -1)]);
            out.push(a_case(tag, format!("A.step5.({i},{j})"), CaseRow::AStep5 { i, j }, diag, None));
        }
    }
    // Blocks {1..i} ∪ {k+1..p}, {i+1..j}, {j+1..k}.
    const STEP6: [(u8, [i64; 3]); 3] = [(1, [0, 1, 2]), (2, [1, 2, 0]), (3, [-1, 1, 0])];
    for i in 1..p {
        for j in i + 1..p {
            for k in j + 1..p {
                for (variant, v) in STEP6 {
                    let diag = block_diag(
                        p,
                        &[(1..=i, v[0]), (k + 1..=p, v[0]), (i + 1..=j, v[1]), (j + 1..=k, v[2])],
                    );
                    let id = format!("A.step6.({i},{j},{k}).variant{variant}");
                    out.push(a_case(tag, id, CaseRow::AStep6 { i, j, k, variant }, diag, None));
                }
            }
        }
    }
    out
}

/// `t = 1` on the first `k` ε-coordinates and `s = 1` on the first `l` δ-coordinates.
fn step_coords(evens: usize, odds: usize, k: usize, l: usize) -> Vec<Rational> {
    (0..evens)
        .map(|x| int((x < k) as i64))
        .chain((0..odds).map(|x| int((x < l) as i64)))
        .collect()
}

fn catalog_b(tag: FamilyTag) -> Vec<CaseSpec> {
    let (m, n) = (tag.m, tag.n);
    let rank = m + n;
    let mut out = Vec::new();
    if m == 0 {
        for i in 1..=n {
            let g0 = osp_g0(rank, 0, i, 'B', 0, n - i);
            let template = (i == n).then_some(TemplateId::ParaBoseSwapped);
            let coords = step_coords(0, n, 0, i);
            out.push(finish(tag, format!("B0.table.i={i}"), CaseRow::B0Table { i }, coords, g0, template));
        }
        return out;
    }
    for k in 0..=m {
        for l in 0..=n {
            if (k, l) == (0, 0) {
                continue;
            }
            let template = ((k, l) == (m, n)).then_some(if n == 0 { TemplateId::ParaFermi } else { TemplateId::Mix });
            let g0 = osp_g0(rank, k, l, 'B', m - k, n - l);
            let coords = step_coords(m, n, k, l);
            out.push(finish(tag, format!("B.table.({k},{l})"), CaseRow::BTable { k, l }, coords, g0, template));
        }
    }
    out
}

fn catalog_d(tag: FamilyTag) -> Vec<CaseSpec> {
    let (m, n) = (tag.m, tag.n);
    let rank = m + n;
    let mut out = Vec::new();
    for k in 0..=m {
        for l in 0..=n {
            if (k, l) == (0, 0) {
                continue;
            }
            let g0 = osp_g0(rank, k, l, 'D', m - k, n - l);
            let row = |alt| CaseRow::DTable { k, l, alt };
            if (k, l) == (m, n) {
                let coords = vec![half(1); m + n];
                out.push(finish(tag, format!("D.table.({k},{l})"), row(None), coords, g0, None));
            } else if (k, l) == (m - 1, n) {
                let mut a: Vec<Rational> = vec![half(1); m + n];
                a[m - 1] = half(3);
                out.push(finish(tag, format!("D.table.({k},{l}).a"), row(Some('a')), a, g0.clone(), None));
                let b = step_coords(m, n, k, l);
                out.push(finish(tag, format!("D.table.({k},{l}).b"), row(Some('b')), b, g0, None));
            } else {
                let coords = step_coords(m, n, k, l);
                out.push(finish(tag, format!("D.table.({k},{l})"), row(None), coords, g0, None));
            }
        }
    }
    out
}

/// `C(n) = osp(2|2n−2)`: one ε-coordinate and `n−1` δ-coordinates.
fn catalog_c(tag: FamilyTag) -> Vec<CaseSpec> {
    let n = tag.n;
    let odds = n - 1;
    let rank = n;
    let mut out = Vec::new();
    let mut push = |k: usize, l: usize, alt: Option<char>, coords: Vec<Rational>| {
        let g0 = osp_g0(rank, k, l, 'C', 1 - k, odds - l);
        let suffix = alt.map_or(String::new(), |c| format!(".{c}"));
        let id = format!("C.table.({k},{l}){suffix}");
        out.push(finish(tag, id, CaseRow::CTable { k, l, alt }, coords, g0, None));
    };
    for k in 0..=1 {
        for l in 1..odds {
            push(k, l, None, step_coords(1, odds, k, l));
        }
    }
    push(1, 0, None, step_coords(1, odds, 1, 0));
    push(1, odds, None, vec![half(1); n]);
    let mut a = vec![half(1); n];
    a[0] = half(3);
    push(0, odds, Some('a'), a);
    push(0, odds, Some('b'), step_coords(1, odds, 0, odds));
    out
}

pub fn catalog(tag: FamilyTag) -> Vec<CaseSpec> {
    match tag.family {
        Family::A => catalog_a(tag),
        Family::B => catalog_b(tag),
        Family::C => catalog_c(tag),
        Family::D => catalog_d(tag),
    }
}

pub fn find_case(tag: FamilyTag, id: &str) -> Result<CaseSpec, CaseError> {
    catalog(tag)
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| CaseError::UnknownCase(id.to_string()))
}

/// How the operator pairs are indexed, which fixes the relation templates
/// that can be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaoLayout {
    /// Canonical root vectors of `G₋₁`, partners obtained through `ω`.
    Canonical,
    /// `B_j^±` only.
    ParaBose,
    /// `F_k^±` only.
    ParaFermi,
    /// `b_1..b_n = B_j`, then `b_{n+1}..b_{n+m} = F_k`.
    Mixed { bose: usize },
    /// `a_j^- = e_{1,j+1}`.
    AStep1One,
    /// `a_{-,j}` for the first `half` pairs, then `a_{+,j}`.
    AStep1Two { half: usize },
    /// Two kinds of operators split at `i`.
    AStep2Adjacent { i: usize },
}

#[derive(Debug, Clone)]
pub struct CAOSet {
    pub case_id: String,
    /// `(x⁺, x⁻)` per pair.
    pub pairs: Vec<(SuperMatrix, SuperMatrix)>,
    pub kinds: Vec<u8>,
    pub parities: Vec<u8>,
    pub labels: Vec<String>,
    pub layout: CaoLayout,
}

impl CAOSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `x_i^σ` with `σ = ±1` and `i` 0-based.
    pub fn op(&self, i: usize, sign: i8) -> &SuperMatrix {
        if sign > 0 {
            &self.pairs[i].0
        } else {
            &self.pairs[i].1
        }
    }

    pub fn creators(&self) -> Vec<SuperMatrix> {
        self.pairs.iter().map(|p| p.0.clone()).collect()
    }

    pub fn annihilators(&self) -> Vec<SuperMatrix> {
        self.pairs.iter().map(|p| p.1.clone()).collect()
    }

    pub fn op_label(&self, i: usize, sign: i8) -> String {
        format!("{}{}", self.labels[i], if sign > 0 { "+" } else { "-" })
    }

    /// Pairs of a single kind, relabelled as a pure para-Bose (kind 1) or
    /// para-Fermi (kind 0) set.
    pub fn subset_of_kind(&self, kind: u8) -> CAOSet {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.kinds[i] == kind).collect();
        CAOSet {
            case_id: format!("{}[kind={kind}]", self.case_id),
            pairs: keep.iter().map(|&i| self.pairs[i].clone()).collect(),
            kinds: keep.iter().map(|&i| self.kinds[i]).collect(),
            parities: keep.iter().map(|&i| self.parities[i]).collect(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            layout: if kind == 1 { CaoLayout::ParaBose } else { CaoLayout::ParaFermi },
        }
    }

    /// Reorders the pairs; `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> CAOSet {
        CAOSet {
            case_id: self.case_id.clone(),
            pairs: order.iter().map(|&i| self.pairs[i].clone()).collect(),
            kinds: order.iter().map(|&i| self.kinds[i]).collect(),
            parities: order.iter().map(|&i| self.parities[i]).collect(),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            layout: self.layout,
        }
    }
}

impl fmt::Display for CAOSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, m)) in self.pairs.iter().enumerate() {
            writeln!(f, "{}+ = {}", self.labels[i], p)?;
            writeln!(f, "{}- = {}", self.labels[i], m)?;
        }
        Ok(())
    }
}

struct Builder {
    plus: Vec<SuperMatrix>,
    minus: Vec<SuperMatrix>,
    kinds: Vec<u8>,
    labels: Vec<String>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            plus: Vec::new(),
            minus: Vec::new(),
            kinds: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn push(&mut self, label: String, kind: u8, plus: SuperMatrix, minus: SuperMatrix) {
        self.labels.push(label);
        self.kinds.push(kind);
        self.plus.push(plus);
        self.minus.push(minus);
    }

    fn finish(self, case_id: String, layout: CaoLayout) -> CAOSet {
        let parities: Vec<u8> = self
            .minus
            .iter()
            .map(|x| x.parity().degree().expect("operators are homogeneous"))
            .collect();
        let kinds = if layout == CaoLayout::Canonical { parities.clone() } else { self.kinds };
        CAOSet {
            case_id,
            pairs: self.plus.into_iter().zip(self.minus).collect(),
            kinds,
            parities,
            labels: self.labels,
            layout,
        }
    }
}

fn r2(q: i64) -> Scalar {
    Scalar::sqrt2_times(q)
}

pub fn build_caos(alg: &Algebra, spec: &CaseSpec) -> Result<CAOSet, CaseError> {
    if alg.tag != spec.tag {
        return Err(CaseError::WrongAlgebra {
            case: spec.id.clone(),
            algebra: alg.tag.to_string(),
        });
    }
    let (m, n) = (spec.tag.m, spec.tag.n);
    let mut b = Builder::new();
    let layout = match spec.row {
        row @ (CaseRow::AStep1 { .. } | CaseRow::AStep2 { .. }) if spec.has_explicit_caos() => {
            explicit_a(&alg.context, m, n, row, &mut b)
        }
        CaseRow::BTable { k, l } if (k, l) == (m, n) => explicit_b(alg, &mut b),
        CaseRow::B0Table { i } if i == n => explicit_b(alg, &mut b),
        _ => {
            let coords = &spec.grading_coords;
            let minus_one = int(-1);
            for root in alg.roots.iter().filter(|r| r.eigenvalue(coords) == minus_one) {
                let x_minus = root.matrix.clone();
                let x_plus = alg.omega(&x_minus).map_err(|_| CaseError::NotAMember {
                    case: spec.id.clone(),
                    label: alg.format_weight(&root.weight),
                    algebra: alg.tag.to_string(),
                })?;
                let neg: Vec<i64> = root.weight.iter().map(|w| -w).collect();
                b.push(format!("x[{}]", alg.format_weight(&neg)), root.parity, x_plus, x_minus);
            }
            CaoLayout::Canonical
        }
    };
    for (idx, label) in b.labels.iter().enumerate() {
        for (x, sign) in [(&b.plus[idx], "+"), (&b.minus[idx], "-")] {
            if !alg.contains(x) {
                return Err(CaseError::NotAMember {
                    case: spec.id.clone(),
                    label: format!("{label}{sign}"),
                    algebra: alg.tag.to_string(),
                });
            }
        }
    }
    Ok(b.finish(spec.id.clone(), layout))
}

/// Operators printed as matrix units of `gl(m+1|n+1)`.
fn explicit_a(ctx: &Arc<ParityContext>, m: usize, n: usize, row: CaseRow, b: &mut Builder) -> CaoLayout {
    let e = |j: usize, k: usize| SuperMatrix::unit(ctx, j, k);
    let p = m + n + 2;
    match row {
        CaseRow::AStep1 { i: 1 } => {
            for j in 1..p {
                b.push(format!("a{j}"), 0, e(j + 1, 1), e(1, j + 1));
            }
            CaoLayout::AStep1One
        }
        CaseRow::AStep1 { i: 2 } => {
            let half = m + n;
            for j in 1..=half {
                b.push(format!("a(-,{j})"), 0, e(j + 2, 1), e(1, j + 2));
            }
            for j in 1..=half {
                b.push(format!("a(+,{j})"), 1, e(j + 2, 2), e(2, j + 2));
            }
            CaoLayout::AStep1Two { half }
        }
        CaseRow::AStep2 { i, j, variant: 21 } if j == i + 1 => {
            for k in 1..p {
                if k <= i {
                    b.push(format!("a{k}"), 0, e(i + 1, k), e(k, i + 1));
                } else {
                    b.push(format!("a{k}"), 1, e(k + 1, i + 1), e(i + 1, k + 1));
                }
            }
            CaoLayout::AStep2Adjacent { i }
        }
        _ => unreachable!("no printed operators for {row:?}"),
    }
}

/// The printed A-family operators as plain supermatrices, without building
/// the algebra. Unlike [`build_caos`] this also accepts `m = n`: the
/// relations are identities among matrix units of `gl(m+1|n+1)`.
pub fn sl_operator_set(m: usize, n: usize, row: CaseRow) -> Option<CAOSet> {
    let p = m + n + 2;
    let valid = match row {
        CaseRow::AStep1 { i } => (i == 1 || i == 2) && i < p,
        CaseRow::AStep2 { i, j, variant } => variant == 21 && i >= 1 && j == i + 1 && j < p,
        _ => false,
    };
    if !valid {
        return None;
    }
    let ctx = ParityContext::blocks(m + 1, n + 1);
    let mut b = Builder::new();
    let layout = explicit_a(&ctx, m, n, row, &mut b);
    let case_id = match row {
        CaseRow::AStep1 { i } => format!("A.step1.i={i}"),
        CaseRow::AStep2 { i, j, .. } => format!("A.step2.({i},{j}).variant21"),
        _ => unreachable!(),
    };
    Some(b.finish(case_id, layout))
}

/// `B_j^±` (odd) and `F_k^±` (even) around the self-paired index `o = 2m+1`.
fn explicit_b(alg: &Algebra, b: &mut Builder) -> CaoLayout {
    let ctx = &alg.context;
    let (m, n) = (alg.tag.m, alg.tag.n);
    let o = 2 * m + 1;
    for j in 1..=n {
        let minus = SuperMatrix::from_terms(ctx, [(o, o + n + j, r2(-1)), (o + j, o, r2(-1))]);
        let plus = SuperMatrix::from_terms(ctx, [(o, o + j, r2(1)), (o + n + j, o, r2(-1))]);
        b.push(format!("B{j}"), 1, plus, minus);
    }
    for k in 1..=m {
        let minus = SuperMatrix::from_terms(ctx, [(k, o, r2(1)), (o, m + k, r2(-1))]);
        let plus = SuperMatrix::from_terms(ctx, [(o, k, r2(1)), (m + k, o, r2(-1))]);
        b.push(format!("F{k}"), 0, plus, minus);
    }
    match (m, n) {
        (0, _) => CaoLayout::ParaBose,
        (_, 0) => CaoLayout::ParaFermi,
        _ => CaoLayout::Mixed { bose: n },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::build;

    fn ids(tag: FamilyTag) -> Vec<String> {
        catalog(tag).into_iter().map(|c| c.id).collect()
    }

    #[test]
    fn b21_rows() {
        let cat = catalog(FamilyTag::b(2, 1).unwrap());
        let rows: Vec<(String, u8, usize)> =
            cat.iter().map(|c| (c.id.clone(), c.expected_length, c.expected_n)).collect();
        assert_eq!(rows.len(), 5);
        let ten = rows.iter().find(|r| r.0 == "B.table.(1,0)").unwrap();
        assert_eq!((ten.1, ten.2), (3, 5));
        for id in ["B.table.(0,1)", "B.table.(1,1)", "B.table.(2,0)", "B.table.(2,1)"] {
            assert_eq!(rows.iter().find(|r| r.0 == id).unwrap().1, 5, "{id}");
        }
    }

    #[test]
    fn b03_rows() {
        let ns: Vec<usize> = catalog(FamilyTag::b(0, 3).unwrap()).iter().map(|c| c.expected_n).collect();
        assert_eq!(ns, vec![5, 6, 3]);
    }

    #[test]
    fn a10_step1() {
        let c = find_case(FamilyTag::a(1, 0).unwrap(), "A.step1.i=1").unwrap();
        assert_eq!(expected_counts(&c), (3, 2));
    }

    #[test]
    fn table_formulas() {
        let d31 = find_case(FamilyTag::d(3, 1).unwrap(), "D.table.(3,1)").unwrap();
        assert_eq!(expected_counts(&d31), (3, 7));
        let c3 = find_case(FamilyTag::c(3).unwrap(), "C.table.(1,0)").unwrap();
        assert_eq!(expected_counts(&c3), (3, 4));
        let d21 = find_case(FamilyTag::d(2, 1).unwrap(), "D.table.(1,0)").unwrap();
        assert_eq!(expected_counts(&d21), (3, 4));
    }

    #[test]
    fn catalog_sizes() {
        assert_eq!(ids(FamilyTag::b(1, 1).unwrap()).len(), 3);
        assert_eq!(ids(FamilyTag::d(2, 1).unwrap()).len(), 6);
        assert_eq!(ids(FamilyTag::c(2).unwrap()).len(), 4);
        // step1: p−1, step2: 3·C(p−1,2), step5: C(p−1,2), step6: 3·C(p−1,3).
        assert_eq!(ids(FamilyTag::a(1, 2).unwrap()).len(), 4 + 18 + 6 + 12);
    }

    #[test]
    fn b0_explicit_operators() {
        let alg = build(FamilyTag::b(0, 2).unwrap()).unwrap();
        let spec = find_case(alg.tag, "B0.table.i=2").unwrap();
        let caos = build_caos(&alg, &spec).unwrap();
        assert_eq!(caos.len(), 2);
        assert_eq!(caos.parities, vec![1, 1]);
        assert_eq!(caos.layout, CaoLayout::ParaBose);
    }

    #[test]
    fn b11_mixed_operators() {
        let alg = build(FamilyTag::b(1, 1).unwrap()).unwrap();
        let spec = find_case(alg.tag, "B.table.(1,1)").unwrap();
        let caos = build_caos(&alg, &spec).unwrap();
        assert_eq!(caos.labels, vec!["B1", "F1"]);
        assert_eq!(caos.parities, vec![1, 0]);
        assert_eq!(caos.kinds, vec![1, 0]);
    }

    #[test]
    fn a11_step1_operators() {
        let caos = sl_operator_set(1, 1, CaseRow::AStep1 { i: 1 }).unwrap();
        assert_eq!(caos.len(), 3);
        let ctx = caos.pairs[0].0.context().clone();
        for (j, (plus, minus)) in caos.pairs.iter().enumerate() {
            assert_eq!(*minus, SuperMatrix::unit(&ctx, 1, j + 2));
            assert_eq!(*plus, SuperMatrix::unit(&ctx, j + 2, 1));
        }
        assert_eq!(caos.parities, vec![0, 1, 1]);
    }

    #[test]
    fn explicit_a_operators_match_matrix_level_builder() {
        let tag = FamilyTag::a(1, 2).unwrap();
        let alg = build(tag).unwrap();
        for spec in catalog(tag).into_iter().filter(|c| c.has_explicit_caos()) {
            let from_alg = build_caos(&alg, &spec).unwrap();
            let plain = sl_operator_set(1, 2, spec.row).unwrap();
            assert_eq!(from_alg.pairs, plain.pairs, "{}", spec.id);
        }
        assert!(sl_operator_set(1, 1, CaseRow::AStep5 { i: 1, j: 2 }).is_none());
    }

    #[test]
    fn wrong_algebra_rejected() {
        let alg = build(FamilyTag::b(0, 2).unwrap()).unwrap();
        let spec = find_case(FamilyTag::b(0, 3).unwrap(), "B0.table.i=3").unwrap();
        assert!(matches!(build_caos(&alg, &spec), Err(CaseError::WrongAlgebra { .. })));
    }
}
