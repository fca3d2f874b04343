//! Partial spreads: the recursive rank-metric construction meeting the
//! classical lower bound, and verification of arbitrary spreads.
//!
//! At each level the ambient block `F_q^{t+m}` receives the `q^m` subspaces
//! `rowspace[I_t | M_a]`, where `M_a` is the matrix of multiplication by
//! `a ∈ GF(q^m)` restricted to the first `t` power-basis elements. These
//! matrices pairwise differ by full-rank matrices, so the graphs are
//! pairwise disjoint and all miss `0 × F_q^m`, where the recursion continues.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bounds::{best_known, lower_bound, BoundsError, SpreadParams};
use crate::gf::{ExtElement, ExtField, Field, GfError};
use crate::linalg::{LinalgError, MatrixFq, Subspace};

/// Largest `q^n` for which disjointness is checked through a point table.
const POINT_TABLE_LIMIT: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("construction produced {built} members, expected {expected}")]
    ConstructionSizeMismatch { built: BigInt, expected: BigInt },
    #[error("constructed spread failed verification: {0:?}")]
    NotVerified(SpreadViolation),
    #[error("need 1 ≤ t ≤ m, got t={t}, m={m}")]
    BadWidth { t: usize, m: usize },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpreadViolation {
    /// Member lives in the wrong ambient space or over the wrong field.
    WrongAmbient { index: usize },
    WrongDimension { index: usize, dim: usize },
    /// Members `first < second` share a nonzero vector.
    Overlap { first: usize, second: usize },
    ExceedsUpperBound { size: usize, upper: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verification {
    Unchecked,
    Verified,
    Failed { violation: SpreadViolation },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified)
    }
}

/// A collection of `t`-subspaces of V(n,q) with its verification state.
#[derive(Debug, Clone)]
pub struct PartialSpread {
    params: SpreadParams,
    field: Field,
    members: Vec<Subspace>,
    status: Verification,
}

impl PartialSpread {
    pub fn new(params: SpreadParams, members: Vec<Subspace>) -> Result<Self, ConstructError> {
        let field = Field::with_order(params.q())?;
        Ok(PartialSpread {
            params,
            field,
            members,
            status: Verification::Unchecked,
        })
    }

    pub fn params(&self) -> &SpreadParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn status(&self) -> &Verification {
        &self.status
    }

    /// Runs [`verify_partial_spread`] and records the outcome.
    pub fn verify(&mut self) -> &Verification {
        self.status = verify_partial_spread(self);
        &self.status
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }
}

#[derive(Serialize, Deserialize)]
struct SpreadFile {
    q: u64,
    n: u32,
    t: u32,
    members: Vec<Subspace>,
}

impl Serialize for PartialSpread {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpreadFile {
            q: self.params.q(),
            n: self.params.n(),
            t: self.params.t(),
            members: self.members.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialSpread {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let file = SpreadFile::deserialize(d)?;
        let params = SpreadParams::new(file.q, file.n, file.t).map_err(D::Error::custom)?;
        PartialSpread::new(params, file.members).map_err(D::Error::custom)
    }
}

/// Checks member dimensions and pairwise disjointness. On failure reports the
/// first member (in order) that meets an earlier one, paired with the
/// earliest such earlier member.
pub fn verify_partial_spread(spread: &PartialSpread) -> Verification {
    let p = spread.params;
    let (n, t) = (p.n() as usize, p.t() as usize);
    for (index, m) in spread.members.iter().enumerate() {
        if m.ambient() != n || m.field() != &spread.field {
            return fail(SpreadViolation::WrongAmbient { index });
        }
        if m.dim() != t {
            return fail(SpreadViolation::WrongDimension { index, dim: m.dim() });
        }
    }
    let q = spread.field.order() as u64;
    let overlap = match q.checked_pow(n as u32) {
        Some(cells) if cells <= POINT_TABLE_LIMIT => first_overlap_by_points(spread, cells as usize),
        _ => first_overlap_pairwise(&spread.members),
    };
    if let Some((first, second)) = overlap {
        return fail(SpreadViolation::Overlap { first, second });
    }
    let upper = best_known(&p).best_upper;
    if BigInt::from(spread.len()) > upper {
        return fail(SpreadViolation::ExceedsUpperBound {
            size: spread.len(),
            upper: upper.to_string(),
        });
    }
    Verification::Verified
}

fn fail(violation: SpreadViolation) -> Verification {
    Verification::Failed { violation }
}

fn first_overlap_by_points(spread: &PartialSpread, cells: usize) -> Option<(usize, usize)> {
    const FREE: u32 = u32::MAX;
    let mut owner = vec![FREE; cells];
    for (j, m) in spread.members.iter().enumerate() {
        let mut earliest: Option<usize> = None;
        let pts = m.point_codes();
        for &code in &pts {
            let o = owner[code];
            if o != FREE {
                earliest = Some(earliest.map_or(o as usize, |e: usize| e.min(o as usize)));
            }
        }
        if let Some(i) = earliest {
            return Some((i, j));
        }
        for code in pts {
            owner[code] = j as u32;
        }
    }
    None
}

pub(crate) fn first_overlap_pairwise(members: &[Subspace]) -> Option<(usize, usize)> {
    for j in 0..members.len() {
        for i in 0..j {
            if members[i].intersect_dim(&members[j]).map_or(true, |d| d > 0) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `t × m` matrix whose row `i` holds the base coordinates of `a·α^i`.
pub fn mult_map_matrix(ext: &ExtField, a: ExtElement, t: usize) -> Result<MatrixFq, ConstructError> {
    let m = ext.degree();
    if t == 0 || t > m {
        return Err(ConstructError::BadWidth { t, m });
    }
    let alpha = ext.generator();
    let mut beta = ext.one();
    let mut rows = Vec::with_capacity(t);
    for _ in 0..t {
        let prod = ext.mul(a, beta)?;
        rows.push(ext.coord(prod)?.iter().map(|c| c.value()).collect::<Vec<u32>>());
        beta = ext.mul(beta, alpha)?;
    }
    Ok(MatrixFq::from_rows(ext.base(), m, &rows)?)
}

/// Builds a verified partial spread of size `lower_bound(params)`.
pub fn build_lower_bound_spread(params: &SpreadParams) -> Result<PartialSpread, ConstructError> {
    let field = Field::with_order(params.q())?;
    let (n, t) = (params.n() as usize, params.t() as usize);
    let mut members = Vec::new();
    // The current block is the last `block` coordinates of V(n,q).
    let mut block = n;
    while block >= 2 * t {
        let m = block - t;
        let offset = n - block;
        let ext = ExtField::new(&field, m)?;
        for a in ext.elements() {
            let graph = mult_map_matrix(&ext, a, t)?;
            let rows: Vec<Vec<u32>> = (0..t)
                .map(|i| {
                    let mut row = vec![0u32; n];
                    row[offset + i] = 1;
                    row[offset + t..].copy_from_slice(graph.row(i));
                    row
                })
                .collect();
            members.push(Subspace::span(&field, n, &rows)?);
        }
        block = m;
    }
    members.push(Subspace::coordinate(&field, n, n - block, t));

    let expected = lower_bound(params);
    if BigInt::from(members.len()) != expected {
        return Err(ConstructError::ConstructionSizeMismatch {
            built: BigInt::from(members.len()),
            expected,
        });
    }
    let mut spread = PartialSpread::new(*params, members)?;
    match spread.verify() {
        Verification::Verified => Ok(spread),
        Verification::Failed { violation } => Err(ConstructError::NotVerified(violation.clone())),
        Verification::Unchecked => unreachable!("verify always decides"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u64, n: u32, t: u32) -> SpreadParams {
        SpreadParams::new(q, n, t).unwrap()
    }

    #[test]
    fn mult_map_examples() {
        let gf2 = Field::new(2, 1).unwrap();
        let gf8 = ExtField::new(&gf2, 3).unwrap();
        assert!(mult_map_matrix(&gf8, gf8.zero(), 2).unwrap().is_zero());
        assert_eq!(
            mult_map_matrix(&gf8, gf8.one(), 3).unwrap(),
            MatrixFq::identity(&gf2, 3)
        );
        assert!(matches!(
            mult_map_matrix(&gf8, gf8.one(), 4),
            Err(ConstructError::BadWidth { .. })
        ));
        let mats: Vec<_> = gf8
            .elements()
            .map(|a| mult_map_matrix(&gf8, a, 2).unwrap())
            .collect();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                assert_eq!(mats[i].sub(&mats[j]).unwrap().rank(), 2);
            }
        }
    }

    #[test]
    fn build_examples() {
        let s = build_lower_bound_spread(&sp(2, 7, 3)).unwrap();
        assert_eq!(s.len(), 17);
        assert!(s.status().is_verified());
        assert_eq!(build_lower_bound_spread(&sp(2, 6, 3)).unwrap().len(), 9);
        assert_eq!(build_lower_bound_spread(&sp(3, 5, 2)).unwrap().len(), 28);
        // n < 2t: one member
        assert_eq!(build_lower_bound_spread(&sp(2, 5, 3)).unwrap().len(), 1);
    }

    #[test]
    fn verification_failures() {
        let p = sp(2, 4, 2);
        let f = Field::new(2, 1).unwrap();
        let a = Subspace::coordinate(&f, 4, 0, 2);
        let b = Subspace::coordinate(&f, 4, 2, 2);
        let mut dup = PartialSpread::new(p, vec![a.clone(), b.clone(), a.clone()]).unwrap();
        assert_eq!(
            dup.verify(),
            &Verification::Failed {
                violation: SpreadViolation::Overlap { first: 0, second: 2 }
            }
        );
        let mut empty = PartialSpread::new(p, vec![]).unwrap();
        assert!(empty.verify().is_verified());
        let line = Subspace::coordinate(&f, 4, 0, 1);
        let mut wrong = PartialSpread::new(p, vec![a, line]).unwrap();
        assert!(matches!(
            wrong.verify(),
            Verification::Failed { violation: SpreadViolation::WrongDimension { index: 1, dim: 1 } }
        ));
    }

    #[test]
    fn point_table_and_pairwise_agree() {
        let f = Field::new(3, 1).unwrap();
        let p = sp(3, 4, 2);
        let members: Vec<Subspace> = crate::linalg::enumerate_subspaces(4, 2, &f, 1000)
            .unwrap()
            .step_by(7)
            .collect();
        let s = PartialSpread::new(p, members.clone()).unwrap();
        let cells = 81;
        assert_eq!(first_overlap_by_points(&s, cells), first_overlap_pairwise(&members));
    }

    #[test]
    fn spread_file_round_trip() {
        let s = build_lower_bound_spread(&sp(2, 4, 2)).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"q":2,"n":4,"t":2,"members":[{"q":2,"n":4,"dim":2,"rows":"#));
        let back: PartialSpread = serde_json::from_str(&json).unwrap();
        assert_eq!(back.members(), s.members());
        assert_eq!(back.status(), &Verification::Unchecked);
    }
}
