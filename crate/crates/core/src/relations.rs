//! Quadratic and triple relation systems for operator sets, evaluated with
//! exact matrices, plus an independent extractor of triple-bracket
//! coefficients used to cross-check the sign factors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cases::{CAOSet, CaoLayout};
use crate::exactfield::Scalar;
use crate::grading::FiveGrading;
use crate::superlinalg::{SuperMatrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("template {template} does not apply to {case}: {reason}")]
    DomainMismatch { template: TemplateId, case: String, reason: String },
    #[error("triple bracket {tuple} of {case} does not close on the operators")]
    Expansion { case: String, tuple: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TemplateId {
    #[serde(rename = "R-PB-printed")]
    ParaBosePrinted,
    #[serde(rename = "R-PB-swapped")]
    ParaBoseSwapped,
    #[serde(rename = "R-PF")]
    ParaFermi,
    #[serde(rename = "R-A1")]
    A1,
    #[serde(rename = "R-ADOUBLE")]
    ADouble,
    #[serde(rename = "R-A21R")]
    A21R,
    #[serde(rename = "R-MIX")]
    Mix,
}

impl TemplateId {
    pub const ALL: [TemplateId; 7] = [
        TemplateId::ParaBosePrinted,
        TemplateId::ParaBoseSwapped,
        TemplateId::ParaFermi,
        TemplateId::A1,
        TemplateId::ADouble,
        TemplateId::A21R,
        TemplateId::Mix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::ParaBosePrinted => "R-PB-printed",
            TemplateId::ParaBoseSwapped => "R-PB-swapped",
            TemplateId::ParaFermi => "R-PF",
            TemplateId::A1 => "R-A1",
            TemplateId::ADouble => "R-ADOUBLE",
            TemplateId::A21R => "R-A21R",
            TemplateId::Mix => "R-MIX",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown template {s:?}"))
    }
}

/// Human-readable form of a template.
#[derive(Debug, Clone, Serialize)]
pub struct RelationTemplate {
    pub id: TemplateId,
    pub index_domain: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
}

pub fn template(id: TemplateId) -> RelationTemplate {
    let (index_domain, lhs, rhs) = match id {
        TemplateId::ParaBosePrinted => (
            "xi,eta,eps = ±1; j,k,l = 1..N",
            "[[ [[B_j^xi, B_k^eta]], B_l^eps ]]",
            "(eps-xi) d_jl B_k^xi + (eps-eta) d_kl B_j^eta",
        ),
        TemplateId::ParaBoseSwapped => (
            "xi,eta,eps = ±1; j,k,l = 1..N",
            "[[ [[B_j^xi, B_k^eta]], B_l^eps ]]",
            "(eps-xi) d_jl B_k^eta + (eps-eta) d_kl B_j^xi",
        ),
        TemplateId::ParaFermi => (
            "xi,eta,eps = ±1; j,k,l = 1..N",
            "[[ [[F_j^xi, F_k^eta]], F_l^eps ]]",
            "1/2 (eps-eta)^2 d_kl F_j^xi - 1/2 (eps-xi)^2 d_jl F_k^eta",
        ),
        TemplateId::Mix => (
            "xi,eta,eps = ±1; j,k,l = 1..n+m; <j> = deg b_j",
            "[[ [[b_j^xi, b_k^eta]], b_l^eps ]]",
            "-2 d_jl d(eps,-xi) eps^<l> (-1)^(<k><l>) b_k^eta + 2 eps^<l> d_kl d(eps,-eta) b_j^xi",
        ),
        TemplateId::A1 => (
            "j,k,l = 1..m+n+1",
            "[[a_j^±, a_k^±]]; [[ [[a_j^+, a_k^-]], a_l^± ]]",
            "0; (-1)^th(j+1) d_jk a_l^+ + d_kl a_j^+; -(-1)^th(j+1) d_jk a_l^- - (-1)^(th(j+1,k+1) th(l+1)) d_jl a_k^-",
        ),
        TemplateId::ADouble => (
            "xi,eta,eps = ±; j,k,l = 1..m+n",
            "quadratic lines and [[ [[a_(xi j)^+, a_(eta k)^-]], a_(eps l)^± ]]",
            "0 / bracket equalities / sign-weighted deltas",
        ),
        TemplateId::A21R => (
            "k,l,p = 1..m+n+1; two kinds split at i",
            "quadratic lines and [[ [[a_k, a_l]], a_p ]] in four families",
            "sign-weighted deltas with <k> and th(a,b) exponents",
        ),
    };
    RelationTemplate {
        id,
        index_domain,
        lhs,
        rhs,
    }
}

/// Nested bracket of operators `x_i^σ` (pair index 0-based, `σ = ±1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Op { pair: usize, sign: i8 },
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn op(pair: usize, sign: i8) -> Expr {
        Expr::Op { pair, sign }
    }

    pub fn br(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn triple(a: Expr, b: Expr, c: Expr) -> Expr {
        Expr::br(Expr::br(a, b), c)
    }

    pub fn eval(&self, caos: &CAOSet) -> SuperMatrix {
        match self {
            Expr::Op { pair, sign } => caos.op(*pair, *sign).clone(),
            Expr::Bracket(a, b) => a.eval(caos).bracket(&b.eval(caos)),
        }
    }

    pub fn render(&self, caos: &CAOSet) -> String {
        match self {
            Expr::Op { pair, sign } => caos.op_label(*pair, *sign),
            Expr::Bracket(a, b) => format!("[[{}, {}]]", a.render(caos), b.render(caos)),
        }
    }

    /// `(i,σ), (j,τ), (k,υ)` when the expression is `[[ [[x,y]], z ]]` of operators.
    fn as_triple(&self) -> Option<[(usize, i8); 3]> {
        let Expr::Bracket(inner, c) = self else { return None };
        let Expr::Bracket(a, b) = inner.as_ref() else { return None };
        match (a.as_ref(), b.as_ref(), c.as_ref()) {
            (Expr::Op { pair: i, sign: s }, Expr::Op { pair: j, sign: t }, Expr::Op { pair: k, sign: u }) => {
                Some([(*i, *s), (*j, *t), (*k, *u)])
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: Scalar,
    pub expr: Expr,
}

#[derive(Debug, Clone)]
pub struct RelationInstance {
    /// Which printed line of the template this instance comes from.
    pub line: &'static str,
    pub tuple: String,
    pub lhs: Expr,
    pub rhs: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub tuple: String,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub template: String,
    pub case_id: String,
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
    pub passed: bool,
}

impl RelationReport {
    fn new(template: String, case_id: String, checked: usize, failures: Vec<RelationFailure>) -> Self {
        let passed = failures.is_empty();
        RelationReport {
            template,
            case_id,
            checked,
            failures,
            passed,
        }
    }
}

const SIGNS: [i8; 2] = [1, -1];

fn sgn(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

fn delta<T: PartialEq>(a: T, b: T) -> i64 {
    (a == b) as i64
}

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Collects `Σ c·expr`, dropping zero coefficients.
fn terms(parts: impl IntoIterator<Item = (i64, Expr)>) -> Vec<Term> {
    parts
        .into_iter()
        .filter(|(c, _)| *c != 0)
        .map(|(c, expr)| Term {
            coeff: Scalar::from_int(c),
            expr,
        })
        .collect()
}

fn mismatch(id: TemplateId, caos: &CAOSet, reason: impl Into<String>) -> RelationError {
    RelationError::DomainMismatch {
        template: id,
        case: caos.case_id.clone(),
        reason: reason.into(),
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (j, k, l))))
}

fn sign_triples() -> impl Iterator<Item = (i8, i8, i8)> {
    SIGNS
        .into_iter()
        .flat_map(|x| SIGNS.into_iter().flat_map(move |y| SIGNS.into_iter().map(move |e| (x, y, e))))
}

/// Expands a template into concrete instances over its index domain.
pub fn instances(caos: &CAOSet, id: TemplateId) -> Result<Vec<RelationInstance>, RelationError> {
    match id {
        TemplateId::ParaBosePrinted | TemplateId::ParaBoseSwapped | TemplateId::ParaFermi => {
            if caos.kinds.windows(2).any(|w| w[0] != w[1]) {
                return Err(mismatch(id, caos, "operator set mixes kinds"));
            }
            Ok(para_instances(caos, id))
        }
        TemplateId::Mix => match caos.layout {
            CaoLayout::Mixed { .. } | CaoLayout::ParaBose | CaoLayout::ParaFermi => Ok(mix_instances(caos)),
            _ => Err(mismatch(id, caos, "needs para-Bose/para-Fermi labelled operators")),
        },
        TemplateId::A1 => match caos.layout {
            CaoLayout::AStep1One => Ok(a1_instances(caos)),
            _ => Err(mismatch(id, caos, "needs operators a_j^- = e(1,j+1)")),
        },
        TemplateId::ADouble => match caos.layout {
            CaoLayout::AStep1Two { half } => Ok(adouble_instances(caos, half)),
            _ => Err(mismatch(id, caos, "needs operators a_(±,j)")),
        },
        TemplateId::A21R => match caos.layout {
            CaoLayout::AStep2Adjacent { i } => Ok(a21_instances(caos, i)),
            _ => Err(mismatch(id, caos, "needs two-kind operators of an adjacent node pair")),
        },
    }
}

fn para_instances(caos: &CAOSet, id: TemplateId) -> Vec<RelationInstance> {
    let n = caos.len();
    let mut out = Vec::new();
    for (xi, eta, eps) in sign_triples() {
        for (j, k, l) in triples(n) {
            let (x, y, e) = (xi as i64, eta as i64, eps as i64);
            let rhs = match id {
                TemplateId::ParaBosePrinted => terms([
                    ((e - x) * delta(j, l), Expr::op(k, xi)),
                    ((e - y) * delta(k, l), Expr::op(j, eta)),
                ]),
                TemplateId::ParaBoseSwapped => terms([
                    ((e - x) * delta(j, l), Expr::op(k, eta)),
                    ((e - y) * delta(k, l), Expr::op(j, xi)),
                ]),
                _ => terms([
                    ((e - y).pow(2) / 2 * delta(k, l), Expr::op(j, xi)),
                    (-(e - x).pow(2) / 2 * delta(j, l), Expr::op(k, eta)),
                ]),
            };
            out.push(RelationInstance {
                line: "triple",
                tuple: format!("(j,k,l)=({},{},{}) (xi,eta,eps)=({},{},{})", j + 1, k + 1, l + 1, sgn(xi), sgn(eta), sgn(eps)),
                lhs: Expr::triple(Expr::op(j, xi), Expr::op(k, eta), Expr::op(l, eps)),
                rhs,
            });
        }
    }
    out
}

fn mix_instances(caos: &CAOSet) -> Vec<RelationInstance> {
    let n = caos.len();
    let kind = |j: usize| caos.kinds[j] as i64;
    let mut out = Vec::new();
    for (xi, eta, eps) in sign_triples() {
        for (j, k, l) in triples(n) {
            let e = eps as i64;
            let eps_l = if kind(l) == 1 { e } else { 1 };
            let rhs = terms([
                (
                    -2 * delta(j, l) * delta(eps, -xi) * eps_l * parity_sign(kind(k) * kind(l)),
                    Expr::op(k, eta),
                ),
                (2 * eps_l * delta(k, l) * delta(eps, -eta), Expr::op(j, xi)),
            ]);
            out.push(RelationInstance {
                line: "triple",
                tuple: format!("(j,k,l)=({},{},{}) (xi,eta,eps)=({},{},{})", j + 1, k + 1, l + 1, sgn(xi), sgn(eta), sgn(eps)),
                lhs: Expr::triple(Expr::op(j, xi), Expr::op(k, eta), Expr::op(l, eps)),
                rhs,
            });
        }
    }
    out
}

/// `θ` of a 1-based matrix index, read from the operators' parity context.
fn theta_fn(caos: &CAOSet) -> impl Fn(usize) -> i64 + '_ {
    let ctx = caos.pairs[0].0.context();
    move |idx| ctx.theta(idx) as i64
}

fn vanishing(line: &'static str, tuple: String, lhs: Expr) -> RelationInstance {
    RelationInstance {
        line,
        tuple,
        lhs,
        rhs: Vec::new(),
    }
}

fn a1_instances(caos: &CAOSet) -> Vec<RelationInstance> {
    let n = caos.len();
    let th = theta_fn(caos);
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for s in SIGNS {
                let tuple = format!("(j,k)=({},{}) sign={}", j + 1, k + 1, sgn(s));
                out.push(vanishing("quadratic", tuple, Expr::br(Expr::op(j, s), Expr::op(k, s))));
            }
        }
    }
    // Operator `a_j` sits at pair j−1 and involves matrix index j+1.
    for (j0, k0, l0) in triples(n) {
        let (j, k, l) = (j0 + 1, k0 + 1, l0 + 1);
        let tuple = format!("(j,k,l)=({j},{k},{l})");
        let lhs_plus = Expr::triple(Expr::op(j0, 1), Expr::op(k0, -1), Expr::op(l0, 1));
        let rhs_plus = terms([
            (parity_sign(th(j + 1)) * delta(j, k), Expr::op(l0, 1)),
            (delta(k, l), Expr::op(j0, 1)),
        ]);
        out.push(RelationInstance {
            line: "triple+",
            tuple: tuple.clone(),
            lhs: lhs_plus,
            rhs: rhs_plus,
        });
        let lhs_minus = Expr::triple(Expr::op(j0, 1), Expr::op(k0, -1), Expr::op(l0, -1));
        let rhs_minus = terms([
            (-parity_sign(th(j + 1)) * delta(j, k), Expr::op(l0, -1)),
            (-parity_sign((th(j + 1) + th(k + 1)) * th(l + 1)) * delta(j, l), Expr::op(k0, -1)),
        ]);
        out.push(RelationInstance {
            line: "triple-",
            tuple,
            lhs: lhs_minus,
            rhs: rhs_minus,
        });
    }
    out
}

fn adouble_instances(caos: &CAOSet, half: usize) -> Vec<RelationInstance> {
    let th = theta_fn(caos);
    let theta12 = th(1) + th(2);
    // a_(ξ,j) lives at pair j−1 for ξ = −, at half + j − 1 for ξ = +.
    let idx = |xi: i8, j: usize| if xi < 0 { j - 1 } else { half + j - 1 };
    let op = |xi: i8, j: usize, s: i8| Expr::op(idx(xi, j), s);
    let deg = |xi: i8, j: usize| caos.parities[idx(xi, j)] as i64;
    let range = || 1..=half;
    let mut out = Vec::new();
    for (xi, eta) in SIGNS.into_iter().flat_map(|x| SIGNS.into_iter().map(move |y| (x, y))) {
        for j in range() {
            for k in range() {
                for s in SIGNS {
                    let tuple = format!("(xi,eta)=({},{}) (j,k)=({j},{k}) sign={}", sgn(xi), sgn(eta), sgn(s));
                    out.push(vanishing("quadratic", tuple, Expr::br(op(xi, j, s), op(eta, k, s))));
                }
            }
        }
    }
    for j in range() {
        for k in range() {
            if j == k {
                continue;
            }
            for xi in SIGNS {
                let tuple = format!("xi={} (j,k)=({j},{k})", sgn(xi));
                out.push(vanishing("mixed-sign", tuple, Expr::br(op(xi, j, 1), op(-xi, k, -1))));
            }
            out.push(RelationInstance {
                line: "equal-sign",
                tuple: format!("(j,k)=({j},{k})"),
                lhs: Expr::br(op(-1, j, 1), op(-1, k, -1)),
                rhs: vec![Term {
                    coeff: Scalar::one(),
                    expr: Expr::br(op(1, j, 1), op(1, k, -1)),
                }],
            });
            // Same-degree condition on the operators, i.e. on matrix indices j+2 and k+2.
            if th(j + 2) == th(k + 2) {
                for (line, a, b) in [("diagonal+-", 1, -1), ("diagonal-+", -1, 1)] {
                    out.push(RelationInstance {
                        line,
                        tuple: format!("(j,k)=({j},{k})"),
                        lhs: Expr::br(op(a, j, 1), op(b, j, -1)),
                        rhs: vec![Term {
                            coeff: Scalar::one(),
                            expr: Expr::br(op(a, k, 1), op(b, k, -1)),
                        }],
                    });
                }
            }
        }
    }
    for (xi, eta, eps) in sign_triples() {
        for j in range() {
            for k in range() {
                for l in range() {
                    let tuple = format!("(xi,eta,eps)=({},{},{}) (j,k,l)=({j},{k},{l})", sgn(xi), sgn(eta), sgn(eps));
                    let dd = deg(xi, j) * deg(eta, k);
                    let plus = terms([
                        (
                            parity_sign(dd + delta(xi, -eta) * theta12 * deg(eps, l))
                                * delta(eta, eps)
                                * delta(j, k),
                            op(xi, l, 1),
                        ),
                        (delta(xi, eta) * delta(k, l), op(eps, j, 1)),
                    ]);
                    out.push(RelationInstance {
                        line: "triple+",
                        tuple: tuple.clone(),
                        lhs: Expr::triple(op(xi, j, 1), op(eta, k, -1), op(eps, l, 1)),
                        rhs: plus,
                    });
                    let minus = terms([
                        (-parity_sign(dd) * delta(xi, eps) * delta(j, k), op(eta, l, -1)),
                        (
                            -parity_sign((th(j + 2) + th(k + 2)) * deg(eps, l)) * delta(xi, eta) * delta(j, l),
                            op(eps, k, -1),
                        ),
                    ]);
                    out.push(RelationInstance {
                        line: "triple-",
                        tuple,
                        lhs: Expr::triple(op(xi, j, 1), op(eta, k, -1), op(eps, l, -1)),
                        rhs: minus,
                    });
                }
            }
        }
    }
    out
}

fn a21_instances(caos: &CAOSet, i: usize) -> Vec<RelationInstance> {
    let n = caos.len();
    let th = theta_fn(caos);
    let th2 = |a: usize, b: usize| th(a) + th(b);
    let kind = |k: usize| caos.kinds[k - 1] as i64;
    let deg = |k: usize| caos.parities[k - 1] as i64;
    let op = |k: usize, s: i8| Expr::op(k - 1, s);
    let range = || 1..=n;
    let mut out = Vec::new();
    for k in range() {
        for l in range() {
            if kind(k) == kind(l) {
                for s in SIGNS {
                    let tuple = format!("(k,l)=({k},{l}) sign={}", sgn(s));
                    out.push(vanishing("same-kind", tuple, Expr::br(op(k, s), op(l, s))));
                }
            }
            if k <= i && i < l {
                for (a, b) in [(-1, 1), (1, -1)] {
                    let tuple = format!("(k,l)=({k},{l}) signs=({},{})", sgn(a), sgn(b));
                    out.push(vanishing("cross-kind", tuple, Expr::br(op(k, a), op(l, b))));
                }
            }
        }
    }
    for k in range() {
        for l in range() {
            for p in range() {
                let tuple = format!("(k,l,p)=({k},{l},{p})");
                let (kk, ll, pp) = (kind(k), kind(l), kind(p));
                if kk == ll {
                    let base = ll + pp;
                    let plus = terms([
                        (parity_sign(base + kk * th2(k + 1, i + 1)) * delta(k, l), op(p, 1)),
                        (
                            parity_sign(base + (1 - ll) * th2(l, i + 1) * (th2(l, k) + th2(k, i + 1))) * delta(l, p),
                            op(k, 1),
                        ),
                    ]);
                    out.push(RelationInstance {
                        line: "triple+",
                        tuple: tuple.clone(),
                        lhs: Expr::triple(op(k, 1), op(l, -1), op(p, 1)),
                        rhs: plus,
                    });
                    let minus = terms([
                        (
                            -parity_sign(base + deg(k) * (kk * th2(k + 1, l + 1) + (1 - ll) * th2(l, i + 1)))
                                * delta(k, p),
                            op(l, -1),
                        ),
                        (-parity_sign(base + kk * th2(k + 1, i + 1)) * delta(k, l), op(p, -1)),
                    ]);
                    out.push(RelationInstance {
                        line: "triple-",
                        tuple: tuple.clone(),
                        lhs: Expr::triple(op(k, 1), op(l, -1), op(p, -1)),
                        rhs: minus,
                    });
                }
                if k <= i && i < l {
                    for xi in SIGNS {
                        // (1 ± ξ)/2 selects one of the two bracketed exponents.
                        let up = (1 + xi as i64) / 2;
                        let down = (1 - xi as i64) / 2;
                        let e1 = th2(p, i + 1) * (up * th2(l + 1, i + 1) + down * th2(k, l + 1));
                        let e2 = up * th2(l + 1, i + 1) * (th2(k, i + 1) + th2(k, l + 1));
                        let rhs = terms([
                            (-parity_sign(e1) * delta(k, p), op(l, xi)),
                            (parity_sign(e2) * delta(l, p), op(k, xi)),
                        ]);
                        out.push(RelationInstance {
                            line: "same-sign-pair",
                            tuple: format!("{tuple} xi={}", sgn(xi)),
                            lhs: Expr::triple(op(k, xi), op(l, xi), op(p, -xi)),
                            rhs,
                        });
                    }
                }
                for xi in SIGNS {
                    out.push(vanishing(
                        "degree-3",
                        format!("{tuple} xi={}", sgn(xi)),
                        Expr::triple(op(k, xi), op(l, xi), op(p, xi)),
                    ));
                }
            }
        }
    }
    out
}

fn evaluate(caos: &CAOSet, inst: &RelationInstance) -> SuperMatrix {
    let mut residual = inst.lhs.eval(caos);
    for t in &inst.rhs {
        residual.add_scaled(&-&t.coeff, &t.expr.eval(caos));
    }
    residual
}

/// Evaluates every instance of the template; failures carry the residual
/// `lhs − rhs` in the `e(j,k)` basis.
pub fn verify_relations(caos: &CAOSet, id: TemplateId) -> Result<RelationReport, RelationError> {
    let insts = instances(caos, id)?;
    let failures: Vec<RelationFailure> = insts
        .par_iter()
        .filter_map(|inst| {
            let r = evaluate(caos, inst);
            (!r.is_zero()).then(|| RelationFailure {
                tuple: format!("{}: {}", inst.line, inst.tuple),
                residual: r.to_string(),
            })
        })
        .collect();
    Ok(RelationReport::new(id.to_string(), caos.case_id.clone(), insts.len(), failures))
}

/// Same-sign brackets vanish for length 3 and span `G_{±2}` for length 5.
pub fn check_quadratic(caos: &CAOSet, g: &FiveGrading) -> RelationReport {
    let n = caos.len();
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in SIGNS {
        let target = g.component(2 * s);
        let brackets: Vec<(usize, usize, SuperMatrix)> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(j, k)| (j, k, caos.op(j, s).bracket(caos.op(k, s))))
            .collect();
        checked += brackets.len();
        for (j, k, b) in &brackets {
            let ok = if g.length == 3 { b.is_zero() } else { target.contains(b) };
            if !ok {
                failures.push(RelationFailure {
                    tuple: format!("[[{}, {}]]", caos.op_label(*j, s), caos.op_label(*k, s)),
                    residual: b.to_string(),
                });
            }
        }
        if g.length == 5 {
            let ctx = caos.pairs[0].0.context();
            let span = Subspace::span(ctx, brackets.into_iter().map(|(_, _, b)| b));
            if !span.same_span(target) {
                failures.push(RelationFailure {
                    tuple: format!("span of sign {} brackets", sgn(s)),
                    residual: format!("dimension {} but G_{} has dimension {}", span.dim(), 2 * s, target.dim()),
                });
            }
        }
    }
    RelationReport::new("quadratic".into(), caos.case_id.clone(), checked, failures)
}

pub type TripleKey = (usize, i8, usize, i8, usize, i8);

/// `(pair, sign)` naming one operator `x_pair^sign`.
type OpRef = (usize, i8);

/// Expansion of one triple bracket: coefficients on the operators of sign
/// `degree` (degree ±1), or nothing (degree ±3, where the bracket vanishes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleEntry {
    pub degree: i8,
    pub coefficients: Vec<(usize, Scalar)>,
}

#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub case_id: String,
    pub entries: BTreeMap<TripleKey, TripleEntry>,
}

impl CoefficientTable {
    pub fn get(&self, key: &TripleKey) -> Option<&TripleEntry> {
        self.entries.get(key)
    }

    /// `(lhs, rhs)` strings for every entry, in key order.
    pub fn rows(&self, caos: &CAOSet) -> Vec<(String, String)> {
        self.entries
            .iter()
            .map(|(&(i, s, j, t, k, u), e)| {
                let lhs = format!(
                    "[[ [[{}, {}]], {} ]]",
                    caos.op_label(i, s),
                    caos.op_label(j, t),
                    caos.op_label(k, u)
                );
                let rhs = if e.coefficients.is_empty() {
                    "0".to_string()
                } else {
                    e.coefficients
                        .iter()
                        .map(|(p, c)| format!("({c})*{}", caos.op_label(*p, e.degree.signum())))
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                (lhs, rhs)
            })
            .collect()
    }
}

/// Expands every `[[ [[x_i^σ, x_j^τ]], x_k^υ ]]` in the operator basis.
pub fn extract_triple_coefficients(caos: &CAOSet) -> Result<CoefficientTable, RelationError> {
    let n = caos.len();
    let ctx = caos.pairs[0].0.context();
    let bases = [
        Subspace::from_basis(ctx, caos.creators()).expect("creators are independent"),
        Subspace::from_basis(ctx, caos.annihilators()).expect("annihilators are independent"),
    ];
    let ops: Vec<OpRef> = SIGNS.into_iter().flat_map(|s| (0..n).map(move |i| (i, s))).collect();
    let inner: BTreeMap<(OpRef, OpRef), SuperMatrix> = ops
        .iter()
        .flat_map(|&a| ops.iter().map(move |&b| (a, b)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(a, b)| ((a, b), caos.op(a.0, a.1).bracket(caos.op(b.0, b.1))))
        .collect();
    let mut keys: Vec<TripleKey> = Vec::with_capacity(ops.len().pow(3));
    for &a in &ops {
        for &b in &ops {
            keys.extend(ops.iter().map(|&c| (a.0, a.1, b.0, b.1, c.0, c.1)));
        }
    }
    let results: Vec<Result<(TripleKey, TripleEntry), RelationError>> = keys
        .par_iter()
        .map(|&key| {
            let (i, s, j, t, k, u) = key;
            let z = inner[&((i, s), (j, t))].bracket(caos.op(k, u));
            let degree = s + t + u;
            let fail = || RelationError::Expansion {
                case: caos.case_id.clone(),
                tuple: format!("({}{},{}{},{}{})", i + 1, sgn(s), j + 1, sgn(t), k + 1, sgn(u)),
            };
            let coefficients = if degree.abs() == 3 {
                if !z.is_zero() {
                    return Err(fail());
                }
                Vec::new()
            } else {
                let basis = &bases[if degree > 0 { 0 } else { 1 }];
                let coeffs = basis.express_in_basis(&z).map_err(|_| fail())?;
                coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
            };
            Ok((key, TripleEntry { degree, coefficients }))
        })
        .collect();
    let mut entries = BTreeMap::new();
    for r in results {
        let (k, e) = r?;
        entries.insert(k, e);
    }
    Ok(CoefficientTable {
        case_id: caos.case_id.clone(),
        entries,
    })
}

/// Tuples where a template's triple-bracket coefficients differ from the
/// extracted table. Instances that are not operator triples are skipped.
pub fn compare_with_table(
    caos: &CAOSet,
    id: TemplateId,
    table: &CoefficientTable,
) -> Result<Vec<String>, RelationError> {
    let mut mismatches = Vec::new();
    for inst in instances(caos, id)? {
        let Some([(i, s), (j, t), (k, u)]) = inst.lhs.as_triple() else { continue };
        let mut predicted: BTreeMap<(usize, i8), Scalar> = BTreeMap::new();
        for term in &inst.rhs {
            let Expr::Op { pair, sign } = term.expr else { continue };
            *predicted.entry((pair, sign)).or_insert_with(Scalar::zero) += &term.coeff;
        }
        predicted.retain(|_, c| !c.is_zero());
        let entry = table.get(&(i, s, j, t, k, u)).expect("table covers all triples");
        let actual: BTreeMap<(usize, i8), Scalar> =
            entry.coefficients.iter().map(|(p, c)| ((*p, entry.degree.signum()), c.clone())).collect();
        if predicted != actual {
            mismatches.push(format!("{}: {}", inst.line, inst.tuple));
        }
    }
    Ok(mismatches)
}
