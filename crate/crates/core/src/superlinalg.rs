//! Graded matrices over ℚ(√2), the super-bracket, and exact linear algebra.
//!
//! Matrix indices are 1-based in every public method (`e(j,k)` is the matrix
//! unit with a one in row `j`, column `k`); storage is 0-based and row-major.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("operands live in different parity contexts")]
    ContextMismatch,
    #[error("vector is not a member of the subspace")]
    NotAMember,
    #[error("basis vectors are linearly dependent")]
    Dependent,
}

/// Row/column parities θ_j of a supermatrix space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityContext {
    parity: Vec<u8>,
}

impl ParityContext {
    pub fn new(parity: Vec<u8>) -> Arc<Self> {
        assert!(!parity.is_empty(), "parity context needs at least one index");
        assert!(parity.iter().all(|&p| p <= 1), "parities are 0 or 1");
        Arc::new(ParityContext { parity })
    }

    /// `evens` indices of parity 0 followed by `odds` of parity 1.
    pub fn blocks(evens: usize, odds: usize) -> Arc<Self> {
        let mut parity = vec![0; evens];
        parity.extend(std::iter::repeat_n(1, odds));
        ParityContext::new(parity)
    }

    pub fn size(&self) -> usize {
        self.parity.len()
    }

    /// θ_j for a 1-based index.
    pub fn theta(&self, j: usize) -> u8 {
        self.parity[j - 1]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    /// Parity θ_j + θ_k of the matrix unit e(j,k).
    pub fn entry_parity(&self, j: usize, k: usize) -> u8 {
        (self.theta(j) + self.theta(k)) % 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    /// The ℤ₂ degree of a homogeneous element.
    pub fn degree(self) -> Option<u8> {
        match self {
            Parity::Even => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }
}

/// Square matrix over ℚ(√2) attached to a parity context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperMatrix {
    ctx: Arc<ParityContext>,
    entries: Vec<Scalar>,
}

impl SuperMatrix {
    pub fn zero(ctx: &Arc<ParityContext>) -> Self {
        let n = ctx.size();
        SuperMatrix {
            ctx: Arc::clone(ctx),
            entries: vec![Scalar::zero(); n * n],
        }
    }

    /// Matrix unit e(j,k), 1-based.
    pub fn unit(ctx: &Arc<ParityContext>, j: usize, k: usize) -> Self {
        let mut m = SuperMatrix::zero(ctx);
        m.set(j, k, Scalar::one());
        m
    }

    /// Builds a matrix from `(j, k, value)` triples (1-based); repeated
    /// positions accumulate.
    pub fn from_terms<I>(ctx: &Arc<ParityContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = SuperMatrix::zero(ctx);
        for (j, k, v) in terms {
            let idx = m.index(j, k);
            m.entries[idx] += &v;
        }
        m
    }

    /// Interprets a row-major vector of length `size²` as a matrix.
    pub fn from_vector(ctx: &Arc<ParityContext>, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), ctx.size() * ctx.size());
        SuperMatrix {
            ctx: Arc::clone(ctx),
            entries,
        }
    }

    pub fn diagonal(ctx: &Arc<ParityContext>, diag: &[Scalar]) -> Self {
        assert_eq!(diag.len(), ctx.size());
        SuperMatrix::from_terms(ctx, diag.iter().enumerate().map(|(i, v)| (i + 1, i + 1, v.clone())))
    }

    pub fn context(&self) -> &Arc<ParityContext> {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.ctx.size()
    }

    fn index(&self, j: usize, k: usize) -> usize {
        let n = self.size();
        assert!((1..=n).contains(&j) && (1..=n).contains(&k), "index ({j},{k}) out of range 1..={n}");
        (j - 1) * n + (k - 1)
    }

    pub fn get(&self, j: usize, k: usize) -> &Scalar {
        &self.entries[self.index(j, k)]
    }

    pub fn set(&mut self, j: usize, k: usize, v: Scalar) {
        let idx = self.index(j, k);
        self.entries[idx] = v;
    }

    /// Row-major entries.
    pub fn as_vector(&self) -> &[Scalar] {
        &self.entries
    }

    /// Nonzero entries as 1-based `(j, k, value)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        let n = self.size();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (i / n + 1, i % n + 1, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.nonzero().all(|(j, k, _)| j == k)
    }

    pub fn same_context(&self, other: &SuperMatrix) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn parity(&self) -> Parity {
        let mut seen = [false; 2];
        for (j, k, _) in self.nonzero() {
            seen[self.ctx.entry_parity(j, k) as usize] = true;
        }
        match seen {
            [_, false] => Parity::Even,
            [false, true] => Parity::Odd,
            [true, true] => Parity::Mixed,
        }
    }

    /// Component of parity `deg` (0 even, 1 odd).
    pub fn homogeneous_part(&self, deg: u8) -> SuperMatrix {
        let mut out = SuperMatrix::zero(&self.ctx);
        for (j, k, v) in self.nonzero() {
            if self.ctx.entry_parity(j, k) == deg {
                out.set(j, k, v.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SuperMatrix {
        SuperMatrix {
            ctx: Arc::clone(&self.ctx),
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SuperMatrix) -> SuperMatrix {
        debug_assert!(self.same_context(other));
        SuperMatrix {
            ctx: Arc::clone(&self.ctx),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SuperMatrix) -> SuperMatrix {
        debug_assert!(self.same_context(other));
        SuperMatrix {
            ctx: Arc::clone(&self.ctx),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> SuperMatrix {
        self.scale(&Scalar::from_int(-1))
    }

    /// `self += c·other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &SuperMatrix) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    /// Ordinary matrix product.
    pub fn matmul(&self, other: &SuperMatrix) -> SuperMatrix {
        let n = self.size();
        let mut out = SuperMatrix::zero(&self.ctx);
        for (j, l, a) in self.nonzero() {
            let row = (l - 1) * n;
            for k in 0..n {
                let b = &other.entries[row + k];
                if !b.is_zero() {
                    out.entries[(j - 1) * n + k] += &(a * b);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SuperMatrix {
        SuperMatrix::from_terms(&self.ctx, self.nonzero().map(|(j, k, v)| (k, j, v.clone())))
    }

    /// `D·Xᵀ·D` for a diagonal sign vector `D` (entries ±1, so `D⁻¹ = D`).
    pub fn signed_transpose(&self, signs: &[i8]) -> SuperMatrix {
        assert_eq!(signs.len(), self.size());
        SuperMatrix::from_terms(
            &self.ctx,
            self.nonzero().map(|(j, k, v)| {
                let s = signs[k - 1] * signs[j - 1];
                (k, j, if s < 0 { -v } else { v.clone() })
            }),
        )
    }

    /// Super-bracket `[[x, y]]`, extended bilinearly over homogeneous parts.
    pub fn superbracket(&self, other: &SuperMatrix) -> Result<SuperMatrix, LinalgError> {
        if !self.same_context(other) {
            return Err(LinalgError::ContextMismatch);
        }
        let mut out = SuperMatrix::zero(&self.ctx);
        for dx in 0..2u8 {
            let x = self.homogeneous_part(dx);
            if x.is_zero() {
                continue;
            }
            for dy in 0..2u8 {
                let y = other.homogeneous_part(dy);
                if y.is_zero() {
                    continue;
                }
                let sign = if dx * dy == 1 { Scalar::one() } else { Scalar::from_int(-1) };
                out = out.add(&x.matmul(&y));
                out.add_scaled(&sign, &y.matmul(&x));
            }
        }
        Ok(out)
    }

    /// Super-bracket for operands already known to share a context.
    pub fn bracket(&self, other: &SuperMatrix) -> SuperMatrix {
        self.superbracket(other).expect("bracket operands share a parity context")
    }
}

/// Renders as a combination of matrix units, e.g. `sqrt2*e(1,2) - e(3,1)`.
impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, k, v) in self.nonzero() {
            let text = v.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if v.is_rational() || v.rational_part().is_zero() => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            let coef = if body == "1" {
                String::new()
            } else if v.is_rational() || v.rational_part().is_zero() {
                format!("{body}*")
            } else {
                format!("({body})*")
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            write!(f, "{coef}e({j},{k})")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMatrix[{self}]")
    }
}

/// Incrementally maintained reduced row echelon form of a set of vectors,
/// remembering how every reduced row is built from the accepted inputs.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// `rows[r] = Σ_i combos[r][i] · accepted[i]`
    combos: Vec<Vec<Scalar>>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Residual of `v` after eliminating every pivot column, together with
    /// the coefficients (over accepted inputs) of the removed part.
    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut residual = v.to_vec();
        let mut coeffs = vec![Scalar::zero(); self.rows.len()];
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(&self.rows[r]) {
                if !y.is_zero() {
                    *x -= &(&c * y);
                }
            }
            for (x, y) in coeffs.iter_mut().zip(&self.combos[r]) {
                if !y.is_zero() {
                    *x += &(&c * y);
                }
            }
        }
        (residual, coeffs)
    }

    /// Adds `v`; returns `false` (and leaves the state unchanged) when `v`
    /// already lies in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.cols);
        let (mut residual, coeffs) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let n = self.rows.len();
        // residual = v − Σ coeffs_i accepted_i
        let mut combo: Vec<Scalar> = coeffs.into_iter().map(|c| -c).collect();
        combo.push(Scalar::one());
        let inv = residual[pivot].invert().expect("pivot is nonzero");
        for x in residual.iter_mut() {
            *x *= &inv;
        }
        for x in combo.iter_mut() {
            *x *= &inv;
        }
        for c in self.combos.iter_mut() {
            c.push(Scalar::zero());
        }
        for r in 0..n {
            let f = self.rows[r][pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in self.rows[r].iter_mut().zip(&residual) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            for (x, y) in self.combos[r].iter_mut().zip(&combo) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        self.rows.push(residual);
        self.pivots.push(pivot);
        self.combos.push(combo);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).0.iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` over the accepted inputs, if `v` is in the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (residual, coeffs) = self.reduce(v);
        residual.iter().all(Scalar::is_zero).then_some(coeffs)
    }

    /// Reduced rows sorted by pivot column.
    pub fn reduced_rows(&self) -> Vec<(usize, Vec<Scalar>)> {
        let mut out: Vec<_> = self.pivots.iter().copied().zip(self.rows.iter().cloned()).collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }
}

/// Rank of a list of vectors.
pub fn rank_of_vectors(vectors: &[Vec<Scalar>]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut e = Echelon::new(first.len());
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Rank of a list of matrices viewed as vectors.
pub fn rank(matrices: &[SuperMatrix]) -> usize {
    let Some(first) = matrices.first() else { return 0 };
    let mut e = Echelon::new(first.as_vector().len());
    for m in matrices {
        e.insert(m.as_vector());
    }
    e.rank()
}

/// Kernel of the linear map whose rows are `constraints`, as the canonical
/// basis read off the reduced echelon form: one vector per free column, with
/// a one in that column and zeros in the other free columns.
pub fn nullspace(constraints: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    let mut e = Echelon::new(cols);
    for row in constraints {
        assert_eq!(row.len(), cols);
        e.insert(row);
    }
    let reduced = e.reduced_rows();
    let mut is_pivot = vec![false; cols];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Scalar::zero(); cols];
            v[free] = Scalar::one();
            for (p, row) in &reduced {
                if !row[free].is_zero() {
                    v[*p] = -&row[free];
                }
            }
            v
        })
        .collect()
}

/// A subspace of supermatrices with an exactly independent basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ctx: Arc<ParityContext>,
    basis: Vec<SuperMatrix>,
    echelon: Echelon,
}

impl Subspace {
    pub fn empty(ctx: &Arc<ParityContext>) -> Self {
        Subspace {
            ctx: Arc::clone(ctx),
            basis: Vec::new(),
            echelon: Echelon::new(ctx.size() * ctx.size()),
        }
    }

    /// Subspace with the given basis; fails if the vectors are dependent.
    pub fn from_basis(ctx: &Arc<ParityContext>, basis: Vec<SuperMatrix>) -> Result<Self, LinalgError> {
        let mut s = Subspace::empty(ctx);
        for b in basis {
            if !b.same_context(&s.basis.first().cloned().unwrap_or_else(|| SuperMatrix::zero(ctx))) {
                return Err(LinalgError::ContextMismatch);
            }
            if !s.push(b) {
                return Err(LinalgError::Dependent);
            }
        }
        Ok(s)
    }

    /// Span of arbitrary vectors; dependent ones are dropped in order.
    pub fn span<I: IntoIterator<Item = SuperMatrix>>(ctx: &Arc<ParityContext>, vectors: I) -> Self {
        let mut s = Subspace::empty(ctx);
        for v in vectors {
            s.push(v);
        }
        s
    }

    /// Solution space of `constraints · vec(X) = 0` over row-major `vec(X)`.
    pub fn nullspace(ctx: &Arc<ParityContext>, constraints: &[Vec<Scalar>]) -> Self {
        let cols = ctx.size() * ctx.size();
        let basis = nullspace(constraints, cols)
            .into_iter()
            .map(|v| SuperMatrix::from_vector(ctx, v))
            .collect();
        Subspace::from_basis(ctx, basis).expect("canonical nullspace basis is independent")
    }

    /// Appends `v` if it is independent of the current basis.
    pub fn push(&mut self, v: SuperMatrix) -> bool {
        if self.echelon.insert(v.as_vector()) {
            self.basis.push(v);
            true
        } else {
            false
        }
    }

    pub fn context(&self) -> &Arc<ParityContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SuperMatrix] {
        &self.basis
    }

    pub fn contains(&self, v: &SuperMatrix) -> bool {
        self.echelon.contains(v.as_vector())
    }

    /// Coefficients of `v` in this subspace's basis.
    pub fn express_in_basis(&self, v: &SuperMatrix) -> Result<Vec<Scalar>, LinalgError> {
        if !v.same_context(&SuperMatrix::zero(&self.ctx)) {
            return Err(LinalgError::ContextMismatch);
        }
        self.echelon.express(v.as_vector()).ok_or(LinalgError::NotAMember)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for b in &other.basis {
            s.push(b.clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx3() -> Arc<ParityContext> {
        ParityContext::new(vec![0, 0, 1])
    }

    #[test]
    fn parity_examples() {
        let c = ctx3();
        let e12 = SuperMatrix::unit(&c, 1, 2);
        let e13 = SuperMatrix::unit(&c, 1, 3);
        assert_eq!(e12.parity(), Parity::Even);
        assert_eq!(e13.parity(), Parity::Odd);
        assert_eq!(e12.add(&e13).parity(), Parity::Mixed);
        assert_eq!(SuperMatrix::zero(&c).parity(), Parity::Even);
    }

    #[test]
    fn bracket_examples() {
        let c = ctx3();
        let e = |j, k| SuperMatrix::unit(&c, j, k);
        assert_eq!(e(1, 2).bracket(&e(2, 1)), e(1, 1).sub(&e(2, 2)));
        assert_eq!(e(1, 3).bracket(&e(3, 1)), e(1, 1).add(&e(3, 3)));
        assert!(e(1, 3).bracket(&e(1, 3)).is_zero());
    }

    #[test]
    fn bracket_rejects_foreign_context() {
        let a = SuperMatrix::unit(&ctx3(), 1, 2);
        let b = SuperMatrix::unit(&ParityContext::new(vec![0, 1, 1]), 2, 1);
        assert_eq!(a.superbracket(&b), Err(LinalgError::ContextMismatch));
    }

    #[test]
    fn mixed_bracket_is_bilinear() {
        let c = ctx3();
        let e = |j, k| SuperMatrix::unit(&c, j, k);
        let x = e(1, 2).add(&e(1, 3));
        let y = e(3, 1).add(&e(2, 1));
        let expect = e(1, 2)
            .bracket(&e(3, 1))
            .add(&e(1, 2).bracket(&e(2, 1)))
            .add(&e(1, 3).bracket(&e(3, 1)))
            .add(&e(1, 3).bracket(&e(2, 1)));
        assert_eq!(x.bracket(&y), expect);
    }

    #[test]
    fn rank_examples() {
        let c = ctx3();
        let e12 = SuperMatrix::unit(&c, 1, 2);
        assert_eq!(rank(&[e12.clone(), e12.scale(&Scalar::from_int(2))]), 1);
        assert_eq!(rank(&[e12, SuperMatrix::unit(&c, 2, 1)]), 2);
    }

    #[test]
    fn supertrace_nullspace_gives_sl_2_1() {
        // gl(2|1) has 9 entries; the supertrace is one constraint.
        let c = ctx3();
        let mut row = vec![Scalar::zero(); 9];
        row[0] = Scalar::one();
        row[4] = Scalar::one();
        row[8] = Scalar::from_int(-1);
        let sl = Subspace::nullspace(&c, &[row]);
        assert_eq!(sl.dim(), 8);
        assert!(sl.contains(&SuperMatrix::unit(&c, 1, 1).add(&SuperMatrix::unit(&c, 3, 3))));
        assert!(!sl.contains(&SuperMatrix::unit(&c, 1, 1)));
    }

    #[test]
    fn nullspace_rank_nullity() {
        let rows = vec![
            vec![Scalar::one(), Scalar::from_int(2), Scalar::zero(), Scalar::sqrt2()],
            vec![Scalar::from_int(2), Scalar::from_int(4), Scalar::one(), Scalar::zero()],
        ];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len() + rank_of_vectors(&rows), 4);
        for v in &ns {
            for r in &rows {
                let dot: Scalar = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn express_examples() {
        let c = ctx3();
        let e = |j, k| SuperMatrix::unit(&c, j, k);
        let s = Subspace::from_basis(&c, vec![e(1, 1).sub(&e(2, 2)), e(1, 2)]).unwrap();
        assert_eq!(s.express_in_basis(&e(1, 1).sub(&e(2, 2))).unwrap(), vec![Scalar::one(), Scalar::zero()]);
        let s = Subspace::from_basis(&c, vec![e(1, 2)]).unwrap();
        assert_eq!(s.express_in_basis(&e(1, 3)), Err(LinalgError::NotAMember));
        let s = Subspace::from_basis(&c, vec![e(1, 2), e(2, 1)]).unwrap();
        let v = e(1, 2).scale(&Scalar::sqrt2()).add(&e(2, 1));
        assert_eq!(s.express_in_basis(&v).unwrap(), vec![Scalar::sqrt2(), Scalar::one()]);
    }

    #[test]
    fn express_with_scaled_overlapping_basis() {
        let c = ctx3();
        let e = |j, k| SuperMatrix::unit(&c, j, k);
        let two = Scalar::from_int(2);
        let b1 = e(1, 2).scale(&Scalar::sqrt2()).add(&e(1, 3));
        let b2 = e(1, 3).scale(&two).sub(&e(2, 1));
        let s = Subspace::from_basis(&c, vec![b1.clone(), b2.clone()]).unwrap();
        assert_eq!(s.express_in_basis(&b1).unwrap(), vec![Scalar::one(), Scalar::zero()]);
        let v = b1.scale(&Scalar::from_int(3)).sub(&b2.scale(&Scalar::sqrt2()));
        assert_eq!(s.express_in_basis(&v).unwrap(), vec![Scalar::from_int(3), -Scalar::sqrt2()]);
    }

    proptest! {
        #[test]
        fn express_reconstructs_combinations(
            raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 9), 1..5),
            coeffs in proptest::collection::vec(-4i64..=4, 5),
        ) {
            let c = ctx3();
            let vectors: Vec<SuperMatrix> = raw
                .iter()
                .map(|v| SuperMatrix::from_vector(&c, v.iter().map(|&x| Scalar::from_int(x)).collect()))
                .collect();
            let s = Subspace::span(&c, vectors);
            let mut target = SuperMatrix::zero(&c);
            for (b, &k) in s.basis().iter().zip(&coeffs) {
                target.add_scaled(&Scalar::from_int(k), b);
            }
            let got = s.express_in_basis(&target).unwrap();
            let mut rebuilt = SuperMatrix::zero(&c);
            for (b, k) in s.basis().iter().zip(&got) {
                rebuilt.add_scaled(k, b);
            }
            prop_assert_eq!(rebuilt, target);
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let c = ctx3();
        let e12 = SuperMatrix::unit(&c, 1, 2);
        let r = Subspace::from_basis(&c, vec![e12.clone(), e12.scale(&Scalar::sqrt2())]);
        assert_eq!(r.unwrap_err(), LinalgError::Dependent);
    }

    #[test]
    fn display_in_unit_basis() {
        let c = ctx3();
        let m = SuperMatrix::from_terms(
            &c,
            [(1, 2, Scalar::sqrt2()), (3, 1, Scalar::from_int(-1)), (2, 2, "1/2 + sqrt2".parse().unwrap())],
        );
        assert_eq!(m.to_string(), "sqrt2*e(1,2) + (1/2 + sqrt2)*e(2,2) - e(3,1)");
        assert_eq!(SuperMatrix::zero(&c).to_string(), "0");
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        (-3i64..=3, -2i64..=2).prop_map(|(a, b)| Scalar::from_int(a) + Scalar::sqrt2_times(b))
    }

    /// Random homogeneous element of the given degree in a 2|2 context.
    fn homogeneous(deg: u8) -> impl Strategy<Value = SuperMatrix> {
        proptest::collection::vec(small_scalar(), 16).prop_map(move |vals| {
            let c = ParityContext::new(vec![0, 0, 1, 1]);
            let m = SuperMatrix::from_vector(&c, vals);
            m.homogeneous_part(deg)
        })
    }

    fn sign(a: u8, b: u8) -> Scalar {
        if a * b == 1 { Scalar::from_int(-1) } else { Scalar::one() }
    }

    proptest! {
        #[test]
        fn super_jacobi((dx, dy, x, y, z) in (0u8..2, 0u8..2, 0u8..2).prop_flat_map(|(a, b, c)| {
            (Just(a), Just(b), homogeneous(a), homogeneous(b), homogeneous(c))
        })) {
            let lhs = x.bracket(&y.bracket(&z));
            let rhs = x.bracket(&y).bracket(&z).add(&y.bracket(&x.bracket(&z)).scale(&sign(dx, dy)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn super_skew_symmetry((dx, dy, x, y) in (0u8..2, 0u8..2).prop_flat_map(|(a, b)| {
            (Just(a), Just(b), homogeneous(a), homogeneous(b))
        })) {
            prop_assert_eq!(x.bracket(&y), y.bracket(&x).scale(&sign(dx, dy)).neg());
        }

        #[test]
        fn rank_invariant_under_permutation_and_rescaling(
            vals in proptest::collection::vec(small_scalar(), 16 * 4),
            scales in proptest::collection::vec(1i64..5, 4),
        ) {
            let c = ParityContext::new(vec![0, 0, 1, 1]);
            let ms: Vec<SuperMatrix> = vals.chunks(16).map(|ch| SuperMatrix::from_vector(&c, ch.to_vec())).collect();
            let r = rank(&ms);
            let mut shuffled: Vec<SuperMatrix> = ms.iter().rev().zip(&scales)
                .map(|(m, s)| m.scale(&Scalar::from_int(*s))).collect();
            shuffled.rotate_left(1);
            prop_assert_eq!(rank(&shuffled), r);
        }
    }
}
