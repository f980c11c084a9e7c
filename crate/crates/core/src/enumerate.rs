//! Exhaustive sweep over toral coordinates: every admissible grading is
//! reduced to a signature, duplicates are merged, and the result is
//! reconciled against the case catalog.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebras::{Algebra, Family};
use crate::cases::catalog;
use crate::exactfield::Rational;
use crate::grading::{verify_grading, FiveGrading, ToralElement};
use crate::superlinalg::{SuperMatrix, Subspace};

/// Largest number of lattice points a sweep may visit.
pub const SEARCH_LIMIT: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("search space has {points} points, above the limit of {limit}")]
    TooLarge { points: u128, limit: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct G0Profile {
    pub even: usize,
    pub odd: usize,
    /// `dim [[G₀, G₀]]`.
    pub derived: usize,
    pub cartan_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GradingSignature {
    pub length: u8,
    pub n_ops: usize,
    /// `dim G_d` for `d = −2..2`.
    pub dims: [usize; 5],
    pub g0: G0Profile,
}

impl GradingSignature {
    /// The part compared against the tables: `(ℓ, N, dim G₀̄, dim G₀₁)`.
    pub fn table_key(&self) -> (u8, usize, usize, usize) {
        (self.length, self.n_ops, self.g0.even, self.g0.odd)
    }
}

pub fn signature(g: &FiveGrading, alg: &Algebra) -> GradingSignature {
    let g0 = g.component(0);
    let ctx = &alg.context;
    // G₀ is spanned by homogeneous vectors, so its parity split is read off
    // the homogeneous parts of the basis.
    let even = Subspace::span(ctx, g0.basis().iter().map(|x| x.homogeneous_part(0))).dim();
    let odd = Subspace::span(ctx, g0.basis().iter().map(|x| x.homogeneous_part(1))).dim();
    let pairs: Vec<(&SuperMatrix, &SuperMatrix)> =
        g0.basis().iter().enumerate().flat_map(|(i, x)| g0.basis()[i..].iter().map(move |y| (x, y))).collect();
    let derived = Subspace::span(ctx, pairs.par_iter().map(|(x, y)| x.bracket(y)).collect::<Vec<_>>()).dim();
    let cartan_rank = Subspace::span(ctx, g0.basis().iter().filter(|x| x.is_diagonal()).cloned()).dim();
    GradingSignature {
        length: g.length,
        n_ops: g.n_ops,
        dims: g.dims(),
        g0: G0Profile {
            even,
            odd,
            derived,
            cartan_rank,
        },
    }
}

/// Lattice of toral coordinates: integers in `[−bound, bound]` and, when
/// enabled, half-integers in `(−bound, bound)`, modulo overall negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    pub bound: i64,
    pub rank: usize,
    pub half_integers: bool,
}

impl SearchSpace {
    /// Sweeps the free coordinates of `alg`; half-integers are included for
    /// the orthosymplectic families, where some gradings need them.
    pub fn for_algebra(alg: &Algebra, bound: i64) -> Self {
        SearchSpace {
            bound,
            rank: alg.sweep_rank(),
            half_integers: alg.tag.family != Family::A,
        }
    }

    fn integer_points(&self) -> u128 {
        (2 * self.bound as u128 + 1).pow(self.rank as u32)
    }

    fn half_points(&self) -> u128 {
        if self.half_integers {
            (2 * self.bound as u128).pow(self.rank as u32)
        } else {
            0
        }
    }

    pub fn points(&self) -> u128 {
        self.integer_points().saturating_add(self.half_points())
    }

    pub fn check(&self) -> Result<(), EnumerateError> {
        let points = self.points();
        if points > SEARCH_LIMIT || self.rank > 64 {
            return Err(EnumerateError::TooLarge {
                points,
                limit: SEARCH_LIMIT,
            });
        }
        Ok(())
    }

    /// Doubled coordinates of the `idx`-th point, first coordinate most significant.
    fn point(&self, idx: u64) -> Vec<i64> {
        let ints = self.integer_points() as u64;
        let (mut rest, base, lo, step) = if idx < ints {
            (idx, (2 * self.bound + 1) as u64, -2 * self.bound, 2)
        } else {
            (idx - ints, (2 * self.bound) as u64, -2 * self.bound + 1, 2)
        };
        let mut out = vec![0i64; self.rank];
        for slot in out.iter_mut().rev() {
            *slot = lo + step * (rest % base) as i64;
            rest /= base;
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FoundGrading {
    /// Lexicographically first coordinates producing this signature.
    #[serde(serialize_with = "serialize_coords")]
    pub coords: Vec<Rational>,
    pub signature: GradingSignature,
    /// Lattice points (up to negation) with this signature.
    pub points: u64,
    /// Distinct root-degree assignments merged into this signature.
    pub assignments: usize,
    pub verified: bool,
}

fn serialize_coords<S: serde::Serializer>(c: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

impl FoundGrading {
    pub fn toral(&self, alg: &Algebra) -> ToralElement {
        ToralElement::from_coords(alg, self.coords.clone()).expect("sweep coordinates match the frame")
    }

    pub fn coords_string(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Degrees of all roots at the doubled point `c2`, if admissible.
fn degrees(weights: &[Vec<i64>], c2: &[i64]) -> Option<Vec<i8>> {
    let mut out = Vec::with_capacity(weights.len());
    let (mut plus, mut minus) = (false, false);
    for w in weights {
        let twice: i64 = w.iter().zip(c2).map(|(a, b)| a * b).sum();
        if twice % 2 != 0 || twice.abs() > 4 {
            return None;
        }
        let d = (twice / 2) as i8;
        plus |= d == 1;
        minus |= d == -1;
        out.push(d);
    }
    (plus && minus).then_some(out)
}

fn grading_from_degrees(alg: &Algebra, degs: &[i8]) -> FiveGrading {
    let mut parts: [Vec<SuperMatrix>; 5] = Default::default();
    parts[2].extend(alg.cartan.basis().iter().cloned());
    for (root, &d) in alg.roots.iter().zip(degs) {
        parts[(d + 2) as usize].push(root.matrix.clone());
    }
    FiveGrading::from_components(parts.map(|v| Subspace::from_basis(&alg.context, v).expect("roots are independent")))
}

pub fn enumerate_gradings(alg: &Algebra, space: &SearchSpace) -> Result<Vec<FoundGrading>, EnumerateError> {
    space.check()?;
    let frame = alg.frame_len();
    let weights: Vec<Vec<i64>> = alg.roots.iter().map(|r| r.weight.clone()).collect();
    let pad = |mut c2: Vec<i64>| {
        c2.resize(frame, 0);
        c2
    };

    // Distinct degree assignments → (first point index, number of points).
    let total = space.points() as u64;
    let assignments: BTreeMap<Vec<i8>, (u64, u64)> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let c2 = space.point(idx);
            // Keep the representative whose first nonzero coordinate is positive.
            match c2.iter().find(|&&x| x != 0) {
                Some(&x) if x > 0 => {}
                _ => return None,
            }
            degrees(&weights, &pad(c2)).map(|d| (d, idx))
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<Vec<i8>, (u64, u64)>, (d, idx)| {
            let e = acc.entry(d).or_insert((idx, 0));
            e.0 = e.0.min(idx);
            e.1 += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, (idx, n)) in b {
                let e = a.entry(k).or_insert((idx, 0));
                e.0 = e.0.min(idx);
                e.1 += n;
            }
            a
        });

    let graded: Vec<(u64, u64, GradingSignature)> = assignments
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(degs, (idx, n))| (idx, n, signature(&grading_from_degrees(alg, &degs), alg)))
        .collect();

    let mut by_sig: BTreeMap<GradingSignature, (u64, u64, usize)> = BTreeMap::new();
    for (idx, n, sig) in graded {
        let e = by_sig.entry(sig).or_insert((idx, 0, 0));
        e.0 = e.0.min(idx);
        e.1 += n;
        e.2 += 1;
    }

    let mut found: Vec<FoundGrading> = by_sig
        .into_par_iter()
        .map(|(signature, (idx, points, assignments))| {
            let coords: Vec<Rational> =
                pad(space.point(idx)).into_iter().map(|x| Rational::new(x.into(), 2.into())).collect();
            let h = ToralElement::from_coords(alg, coords.clone()).expect("frame length");
            let g = crate::grading::grade_by_toral(alg, &h).expect("admissible by construction");
            let verified = verify_grading(alg, &g).all_passed();
            FoundGrading {
                coords,
                signature,
                points,
                assignments,
                verified,
            }
        })
        .collect();
    found.sort_by(|a, b| a.signature.cmp(&b.signature));
    Ok(found)
}

#[derive(Debug, Clone, Serialize)]
pub struct RowMatch {
    pub case_id: String,
    pub g0_label: String,
    pub expected_length: u8,
    pub expected_n: usize,
    pub expected_g0: (usize, usize),
    /// Indices into the found signatures.
    pub matches: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Collision {
    pub signature: usize,
    pub case_ids: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconcileReport {
    pub algebra: String,
    pub found: Vec<GradingSignature>,
    pub rows: Vec<RowMatch>,
    pub unmatched_rows: Vec<String>,
    /// Found signatures that no catalog row accounts for.
    pub unmatched_found: Vec<usize>,
    /// Found signatures claimed by more than one catalog row.
    pub collisions: Vec<Collision>,
}

impl ReconcileReport {
    pub fn passed(&self) -> bool {
        self.unmatched_rows.is_empty()
    }
}

pub fn reconcile(alg: &Algebra, found: &[GradingSignature]) -> ReconcileReport {
    let rows: Vec<RowMatch> = catalog(alg.tag)
        .into_iter()
        .map(|c| {
            let key = (c.expected_length, c.expected_n, c.expected_g0_dims.0, c.expected_g0_dims.1);
            let matches = found.iter().enumerate().filter(|(_, s)| s.table_key() == key).map(|(i, _)| i).collect();
            RowMatch {
                case_id: c.id,
                g0_label: c.g0_label,
                expected_length: c.expected_length,
                expected_n: c.expected_n,
                expected_g0: c.expected_g0_dims,
                matches,
            }
        })
        .collect();
    let unmatched_rows = rows.iter().filter(|r| r.matches.is_empty()).map(|r| r.case_id.clone()).collect();
    let mut claims: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for r in &rows {
        for &i in &r.matches {
            claims.entry(i).or_default().push(r.case_id.clone());
        }
    }
    let unmatched_found = (0..found.len()).filter(|i| !claims.contains_key(i)).collect();
    let collisions = claims
        .into_iter()
        .filter(|(_, ids)| ids.len() > 1)
        .map(|(signature, case_ids)| Collision { signature, case_ids })
        .collect();
    ReconcileReport {
        algebra: alg.tag.to_string(),
        found: found.to_vec(),
        rows,
        unmatched_rows,
        unmatched_found,
        collisions,
    }
}
