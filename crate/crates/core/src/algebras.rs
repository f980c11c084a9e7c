//! Matrix realizations of the basic classical Lie superalgebras.
//!
//! `A(m|n) = sl(m+1|n+1)` is the supertraceless part of `gl(m+1|n+1)`.
//! The orthosymplectic families are cut out as the exact solution space of
//! the invariance conditions of a fixed even supersymmetric form `J`:
//!
//! * even block: `J(i, m+i) = J(m+i, i) = 1`, plus `J(2m+1, 2m+1) = 1` for B;
//! * odd block, pair `(q, p) = (o+j, o+n+j)`: `J(q, p) = -1`, `J(p, q) = 1`.
//!
//! `X` belongs to the algebra iff `B(Xu, v) + (-1)^{|X||u|} B(u, Xv) = 0`
//! on homogeneous basis vectors. This convention is the one under which the
//! explicit para-Bose and para-Fermi operators of B(m|n) are members and the
//! signed transpose `ω(x) = D xᵀ D` maps each creator to its annihilator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{Rational, Scalar};
use crate::superlinalg::{ParityContext, SuperMatrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: Family, reason: String },
    #[error("element is not a member of {0}")]
    NotAMember(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

/// Family and parameters; `C(n)` stores `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyTag {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl FamilyTag {
    pub fn new(family: Family, m: usize, n: usize) -> Result<Self, AlgebraError> {
        let bad = |reason: &str| {
            Err(AlgebraError::InvalidParameters {
                family,
                reason: reason.to_string(),
            })
        };
        match family {
            Family::A if m == n => bad("A(n|n) is not simple; m = n is rejected"),
            Family::B if m + n == 0 => bad("B(0|0) is trivial"),
            Family::C if n < 2 => bad("C(n) needs n >= 2"),
            Family::C if m != 1 => bad("C(n) carries m = 1"),
            Family::D if m < 2 => bad("D(m|n) needs m >= 2"),
            Family::D if n < 1 => bad("D(m|n) needs n >= 1"),
            _ => Ok(FamilyTag { family, m, n }),
        }
    }

    pub fn a(m: usize, n: usize) -> Result<Self, AlgebraError> {
        FamilyTag::new(Family::A, m, n)
    }

    pub fn b(m: usize, n: usize) -> Result<Self, AlgebraError> {
        FamilyTag::new(Family::B, m, n)
    }

    pub fn c(n: usize) -> Result<Self, AlgebraError> {
        FamilyTag::new(Family::C, 1, n)
    }

    pub fn d(m: usize, n: usize) -> Result<Self, AlgebraError> {
        FamilyTag::new(Family::D, m, n)
    }

    /// Closed-form dimension of the algebra.
    pub fn expected_dim(&self) -> usize {
        let (m, n) = (self.m, self.n);
        match self.family {
            Family::A => (m + n + 2) * (m + n + 2) - 1,
            Family::B => m * (2 * m + 1) + n * (2 * n + 1) + 2 * n * (2 * m + 1),
            Family::C => 1 + (n - 1) * (2 * n - 1) + 4 * (n - 1),
            Family::D => m * (2 * m - 1) + n * (2 * n + 1) + 4 * m * n,
        }
    }

    /// Matrix size of the defining realization.
    pub fn matrix_size(&self) -> usize {
        let (m, n) = (self.m, self.n);
        match self.family {
            Family::A => m + n + 2,
            Family::B => 2 * m + 1 + 2 * n,
            Family::C => 2 * n,
            Family::D => 2 * m + 2 * n,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::C => write!(f, "C({})", self.n),
            fam => write!(f, "{}({}|{})", fam, self.m, self.n),
        }
    }
}

/// Simultaneous ad-eigenvector of the Cartan subalgebra with nonzero weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootVector {
    /// Coordinates in the `(ε₁..ε_p | δ₁..δ_q)` basis.
    pub weight: Vec<i64>,
    pub matrix: SuperMatrix,
    pub parity: u8,
}

impl RootVector {
    /// Eigenvalue of `ad h` for the toral element with frame coordinates `coords`.
    pub fn eigenvalue(&self, coords: &[Rational]) -> Rational {
        self.weight
            .iter()
            .zip(coords)
            .filter(|(w, _)| **w != 0)
            .map(|(w, c)| c * Rational::from_integer((*w).into()))
            .fold(Rational::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone)]
pub struct Algebra {
    pub tag: FamilyTag,
    pub context: Arc<ParityContext>,
    /// Cartan basis followed by the root vectors, in root order.
    pub basis: Subspace,
    pub cartan: Subspace,
    pub roots: Vec<RootVector>,
    pub omega_sign: Vec<i8>,
    /// Weight-coordinate functional of each (1-based → 0-based) matrix index.
    frame: Vec<Vec<i64>>,
    epsilon_count: usize,
    /// Defining constraints on row-major matrix entries.
    constraints: Vec<Vec<Scalar>>,
}

pub fn build(tag: FamilyTag) -> Result<Algebra, AlgebraError> {
    FamilyTag::new(tag.family, tag.m, tag.n)?;
    match tag.family {
        Family::A => build_special_linear(tag.m, tag.n),
        _ => build_orthosymplectic(tag),
    }
}

/// `A(m|n) = sl(m+1|n+1)`: supertraceless matrices of size `m+n+2`.
pub fn build_special_linear(m: usize, n: usize) -> Result<Algebra, AlgebraError> {
    let tag = FamilyTag::a(m, n)?;
    let size = m + n + 2;
    let ctx = ParityContext::blocks(m + 1, n + 1);
    let frame = (0..size)
        .map(|j| {
            let mut f = vec![0; size];
            f[j] = 1;
            f
        })
        .collect();
    let mut supertrace = vec![Scalar::zero(); size * size];
    for j in 1..=size {
        supertrace[(j - 1) * size + (j - 1)] = Scalar::from_int(if ctx.theta(j) == 0 { 1 } else { -1 });
    }
    Ok(assemble(tag, ctx, frame, m + 1, vec![supertrace], vec![1; size]))
}

/// B(m|n) = osp(2m+1|2n), C(n) = osp(2|2n−2), D(m|n) = osp(2m|2n).
pub fn build_orthosymplectic(tag: FamilyTag) -> Result<Algebra, AlgebraError> {
    let tag = FamilyTag::new(tag.family, tag.m, tag.n)?;
    let (pairs_even, self_paired, pairs_odd) = match tag.family {
        Family::B => (tag.m, true, tag.n),
        Family::C => (1, false, tag.n - 1),
        Family::D => (tag.m, false, tag.n),
        Family::A => {
            return Err(AlgebraError::InvalidParameters {
                family: Family::A,
                reason: "A(m|n) is not orthosymplectic".into(),
            })
        }
    };
    let evens = 2 * pairs_even + usize::from(self_paired);
    let size = evens + 2 * pairs_odd;
    let ctx = ParityContext::blocks(evens, 2 * pairs_odd);
    let rank = pairs_even + pairs_odd;

    let mut form = vec![vec![0i64; size]; size];
    let mut frame = vec![vec![0i64; rank]; size];
    for i in 0..pairs_even {
        form[i][pairs_even + i] = 1;
        form[pairs_even + i][i] = 1;
        frame[i][i] = -1;
        frame[pairs_even + i][i] = 1;
    }
    if self_paired {
        form[2 * pairs_even][2 * pairs_even] = 1;
    }
    for j in 0..pairs_odd {
        let (q, p) = (evens + j, evens + pairs_odd + j);
        form[q][p] = -1;
        form[p][q] = 1;
        frame[q][pairs_even + j] = -1;
        frame[p][pairs_even + j] = 1;
    }

    let theta = |i: usize| i64::from(ctx.parities()[i]);
    let mut constraints = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            let mut row = vec![0i64; size * size];
            for c in 0..size {
                // (Xᵀ J)_ab = Σ_c X_ca J_cb
                if form[c][b] != 0 {
                    row[c * size + a] += form[c][b];
                }
                // (-1)^{|X_cb| θ_a} (J X)_ab = Σ_c J_ac X_cb
                if form[a][c] != 0 {
                    let entry_parity = (theta(c) + theta(b)) % 2;
                    let sign = if entry_parity * theta(a) == 1 { -1 } else { 1 };
                    row[c * size + b] += sign * form[a][c];
                }
            }
            if row.iter().any(|&x| x != 0) {
                constraints.push(row.into_iter().map(Scalar::from_int).collect());
            }
        }
    }

    let mut omega_sign = vec![1i8; size];
    for j in 0..pairs_odd {
        omega_sign[evens + j] = -1;
    }
    Ok(assemble(tag, ctx, frame, pairs_even, constraints, omega_sign))
}

/// Splits the constraint solution space into weight spaces of the diagonal
/// Cartan and assembles the algebra record.
fn assemble(
    tag: FamilyTag,
    ctx: Arc<ParityContext>,
    frame: Vec<Vec<i64>>,
    epsilon_count: usize,
    constraints: Vec<Vec<Scalar>>,
    omega_sign: Vec<i8>,
) -> Algebra {
    let size = ctx.size();
    let weight_of = |j: usize, k: usize| -> Vec<i64> { frame[j].iter().zip(&frame[k]).map(|(a, b)| a - b).collect() };

    let mut classes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for j in 0..size {
        for k in 0..size {
            classes.entry(weight_of(j, k)).or_default().push(j * size + k);
        }
    }

    let mut cartan = Subspace::empty(&ctx);
    let mut roots = Vec::new();
    for (weight, columns) in &classes {
        let restricted: Vec<Vec<Scalar>> = constraints
            .iter()
            .map(|row| columns.iter().map(|&c| row[c].clone()).collect::<Vec<_>>())
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        for v in crate::superlinalg::nullspace(&restricted, columns.len()) {
            let mut full = vec![Scalar::zero(); size * size];
            for (val, &c) in v.into_iter().zip(columns) {
                full[c] = val;
            }
            let matrix = SuperMatrix::from_vector(&ctx, full);
            if weight.iter().all(|&w| w == 0) {
                assert!(matrix.is_diagonal(), "weight-zero entries are diagonal in this frame");
                cartan.push(matrix);
            } else {
                let parity = matrix.parity().degree().expect("weight spaces are homogeneous");
                roots.push(RootVector {
                    weight: weight.clone(),
                    matrix,
                    parity,
                });
            }
        }
    }
    // Roots in descending lexicographic weight order: positive-looking first.
    roots.sort_by(|a, b| b.weight.cmp(&a.weight));

    let basis = Subspace::from_basis(
        &ctx,
        cartan.basis().iter().cloned().chain(roots.iter().map(|r| r.matrix.clone())).collect(),
    )
    .expect("weight spaces are independent");

    Algebra {
        tag,
        context: ctx,
        basis,
        cartan,
        roots,
        omega_sign,
        frame,
        epsilon_count,
        constraints,
    }
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rank(&self) -> usize {
        self.cartan.dim()
    }

    /// Number of weight coordinates (ε's then δ's).
    pub fn frame_len(&self) -> usize {
        self.frame[0].len()
    }

    /// Free toral coordinates swept by the enumerator: the last sl coordinate
    /// only shifts the identity and is pinned to zero.
    pub fn sweep_rank(&self) -> usize {
        match self.tag.family {
            Family::A => self.frame_len() - 1,
            _ => self.frame_len(),
        }
    }

    pub fn epsilon_count(&self) -> usize {
        self.epsilon_count
    }

    /// Weight coordinate labels `e1.., d1..`.
    pub fn weight_labels(&self) -> Vec<String> {
        (0..self.frame_len())
            .map(|i| {
                if i < self.epsilon_count {
                    format!("e{}", i + 1)
                } else {
                    format!("d{}", i - self.epsilon_count + 1)
                }
            })
            .collect()
    }

    pub fn format_weight(&self, weight: &[i64]) -> String {
        let labels = self.weight_labels();
        let mut out = String::new();
        for (w, l) in weight.iter().zip(&labels) {
            if *w == 0 {
                continue;
            }
            let sign = if *w < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = w.unsigned_abs();
            out.push_str(sign);
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(l);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Root multiset rendered and sorted lexicographically.
    pub fn root_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.roots.iter().map(|r| self.format_weight(&r.weight)).collect();
        v.sort();
        v
    }

    pub fn contains(&self, x: &SuperMatrix) -> bool {
        x.same_context(&SuperMatrix::zero(&self.context)) && self.basis.contains(x)
    }

    /// Checks the defining constraints directly (independent of the basis).
    pub fn satisfies_constraints(&self, x: &SuperMatrix) -> bool {
        self.constraints.iter().all(|row| {
            row.iter()
                .zip(x.as_vector())
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum::<Scalar>()
                .is_zero()
        })
    }

    /// Diagonal matrix `diag(f_j · coords)`; for sl the identity component is
    /// removed so the result is supertraceless.
    pub fn toral_matrix(&self, coords: &[Rational]) -> SuperMatrix {
        assert_eq!(coords.len(), self.frame_len(), "coordinate count mismatch for {}", self.tag);
        let mut diag: Vec<Rational> = self
            .frame
            .iter()
            .map(|f| {
                f.iter()
                    .zip(coords)
                    .filter(|(w, _)| **w != 0)
                    .map(|(w, c)| c * Rational::from_integer((*w).into()))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect();
        if self.tag.family == Family::A {
            let parities = self.context.parities();
            let (mut str_, mut sdim) = (Rational::zero(), 0i64);
            for (d, &p) in diag.iter().zip(parities) {
                if p == 0 {
                    str_ += d;
                    sdim += 1;
                } else {
                    str_ -= d;
                    sdim -= 1;
                }
            }
            let shift = str_ / Rational::from_integer(sdim.into());
            for d in diag.iter_mut() {
                *d -= &shift;
            }
        }
        let diag: Vec<Scalar> = diag.into_iter().map(Scalar::from_rational).collect();
        SuperMatrix::diagonal(&self.context, &diag)
    }

    /// The anti-involution `ω(x) = D xᵀ D`.
    pub fn omega(&self, x: &SuperMatrix) -> Result<SuperMatrix, AlgebraError> {
        if !self.contains(x) {
            return Err(AlgebraError::NotAMember(self.tag.to_string()));
        }
        Ok(self.omega_unchecked(x))
    }

    pub(crate) fn omega_unchecked(&self, x: &SuperMatrix) -> SuperMatrix {
        x.signed_transpose(&self.omega_sign)
    }

    /// Root vector with the given weight, if any.
    pub fn root(&self, weight: &[i64]) -> Option<&RootVector> {
        self.roots.iter().find(|r| r.weight == weight)
    }
}

/// Nonzero-weight spaces of the diagonal Cartan, in root order.
pub fn root_decomposition(alg: &Algebra) -> &[RootVector] {
    &alg.roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(alg: &Algebra, j: usize, k: usize) -> SuperMatrix {
        SuperMatrix::unit(&alg.context, j, k)
    }

    #[test]
    fn special_linear_dimensions() {
        let a01 = build_special_linear(0, 1).unwrap();
        assert_eq!(a01.dim(), 8);
        assert_eq!(a01.context.parities(), &[0, 1, 1]);
        let a10 = build_special_linear(1, 0).unwrap();
        assert_eq!((a10.dim(), a10.roots.len(), a10.rank()), (8, 6, 2));
        assert_eq!(build_special_linear(1, 2).unwrap().dim(), 24);
    }

    #[test]
    fn special_linear_rejects_equal_parameters() {
        assert!(matches!(build_special_linear(1, 1), Err(AlgebraError::InvalidParameters { .. })));
    }

    #[test]
    fn orthosymplectic_dimensions() {
        for (tag, dim) in [
            (FamilyTag::b(0, 2).unwrap(), 14),
            (FamilyTag::b(1, 1).unwrap(), 12),
            (FamilyTag::d(2, 1).unwrap(), 17),
            (FamilyTag::c(2).unwrap(), 1 + 3 + 4),
            (FamilyTag::b(2, 0).unwrap(), 10),
        ] {
            let alg = build(tag).unwrap();
            assert_eq!(alg.dim(), dim, "{tag}");
            assert_eq!(tag.expected_dim(), dim, "{tag}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(FamilyTag::c(1).is_err());
        assert!(FamilyTag::d(1, 1).is_err());
        assert!(FamilyTag::b(0, 0).is_err());
        assert!(build_orthosymplectic(FamilyTag::a(1, 0).unwrap()).is_err());
    }

    #[test]
    fn sl_1_2_roots() {
        let alg = build_special_linear(0, 1).unwrap();
        let mut got = alg.root_strings();
        got.sort();
        let mut want: Vec<String> = ["e1-d1", "-e1+d1", "e1-d2", "-e1+d2", "d1-d2", "-d1+d2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn osp_1_2_roots() {
        let alg = build(FamilyTag::b(0, 1).unwrap()).unwrap();
        assert_eq!(alg.root_strings(), vec!["-2d1", "-d1", "2d1", "d1"]);
    }

    #[test]
    fn roots_complement_cartan() {
        for tag in [FamilyTag::a(2, 1).unwrap(), FamilyTag::b(1, 2).unwrap(), FamilyTag::c(3).unwrap()] {
            let alg = build(tag).unwrap();
            assert_eq!(alg.roots.len(), alg.dim() - alg.rank());
        }
    }

    #[test]
    fn root_vectors_are_eigenvectors() {
        for tag in [FamilyTag::a(1, 2).unwrap(), FamilyTag::b(1, 1).unwrap(), FamilyTag::d(2, 1).unwrap()] {
            let alg = build(tag).unwrap();
            for h in alg.cartan.basis() {
                for r in &alg.roots {
                    let (j, k, _) = r.matrix.nonzero().next().unwrap();
                    let lambda = h.get(j, j) - h.get(k, k);
                    assert_eq!(h.bracket(&r.matrix), r.matrix.scale(&lambda));
                }
            }
        }
    }

    #[test]
    fn omega_on_matrix_units() {
        let alg = build_special_linear(1, 0).unwrap();
        assert_eq!(alg.omega(&e(&alg, 1, 2)).unwrap(), e(&alg, 2, 1));
        let h = alg.cartan.basis()[0].clone();
        assert_eq!(alg.omega(&h).unwrap(), h);
        assert!(alg.omega(&e(&alg, 1, 1)).is_err());
    }

    #[test]
    fn toral_matrix_is_in_cartan() {
        let alg = build_special_linear(2, 0).unwrap();
        let c: Vec<Rational> = [1, 1, 0, 0].iter().map(|&x| Rational::from_integer(x.into())).collect();
        let h = alg.toral_matrix(&c);
        assert!(alg.cartan.contains(&h));
        let osp = build(FamilyTag::d(2, 1).unwrap()).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let h = osp.toral_matrix(&[half.clone(), half.clone(), half]);
        assert!(osp.cartan.contains(&h));
    }
}
