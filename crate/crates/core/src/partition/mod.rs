//! Subspace partitions of V(n,q), their hyperplane-type profiles, Heden's
//! lower bounds on the number of smallest parts, and descent certificates.

mod certificate;

pub use certificate::{
    check_certificate, descent_certificate, AverageBound, CaseHigherDim, CertificateCheck,
    Closure, DescentCertificate, DescentStep, StepTransition,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{qpow, theta};
use crate::construct::PartialSpread;
use crate::gf::Field;
use crate::linalg::{decode_vector, encode_vector, hyperplanes, LinalgError, Subspace};

/// Default cap on `q^n` for direct cover checks.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("spread must be verified before it can be completed to a partition")]
    UnverifiedSpread,
    #[error("V({n}) over GF({q}) has {cells} vectors, over the budget {budget}")]
    BudgetExceeded { n: usize, q: u32, cells: u128, budget: u64 },
    #[error("identity {identity} violated{}", hyperplane.map(|h| format!(" at hyperplane {h}")).unwrap_or_default())]
    IdentityViolation {
        identity: String,
        hyperplane: Option<usize>,
    },
    #[error("part {index} does not live in V({n}) over GF({q})")]
    WrongAmbient { index: usize, n: usize, q: u32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A collection of nonzero subspaces meant to cover every nonzero vector of
/// V(n,q) exactly once. Coverage is established by [`verify_partition`].
#[derive(Debug, Clone)]
pub struct SubspacePartition {
    field: Field,
    n: usize,
    parts: Vec<Subspace>,
}

impl SubspacePartition {
    pub fn new(field: &Field, n: usize, parts: Vec<Subspace>) -> Result<Self, PartitionError> {
        for (index, p) in parts.iter().enumerate() {
            if p.ambient() != n || p.field() != field {
                return Err(PartitionError::WrongAmbient {
                    index,
                    n,
                    q: field.order(),
                });
            }
        }
        Ok(SubspacePartition {
            field: field.clone(),
            n,
            parts,
        })
    }

    /// All `Θ_n` one-dimensional subspaces.
    pub fn trivial(field: &Field, n: usize) -> Self {
        let parts = Subspace::full(field, n)
            .points()
            .into_iter()
            .map(|v| Subspace::span(field, n, &[v]).expect("point is well formed"))
            .collect();
        SubspacePartition {
            field: field.clone(),
            n,
            parts,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `d ↦ n_d`.
    pub fn type_vector(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for p in &self.parts {
            *out.entry(p.dim()).or_insert(0) += 1;
        }
        out
    }

    /// Type written `[d_s^{n_s}, …, d_1^{n_1}]`, largest dimension first.
    pub fn type_string(&self) -> String {
        let parts: Vec<String> = self
            .type_vector()
            .iter()
            .rev()
            .map(|(d, c)| format!("{d}^{c}"))
            .collect();
        format!("[{}]", parts.join(", "))
    }

    /// Dimension multiplicities as `(dim, count)` pairs, largest dimension first.
    pub fn type_entries(&self) -> Vec<TypeEntry> {
        self.type_vector()
            .iter()
            .rev()
            .map(|(&dim, &count)| TypeEntry { dim, count })
            .collect()
    }

    /// `Σ n_d Θ_d`.
    pub fn point_count(&self) -> BigInt {
        let q = self.field.order() as u64;
        self.type_vector()
            .iter()
            .map(|(&d, &c)| theta(d as u32, q) * c)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntry {
    pub dim: usize,
    pub count: usize,
}

fn cells(field: &Field, n: usize, budget: u64) -> Result<usize, PartitionError> {
    let q = field.order();
    let cells = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if cells > budget as u128 {
        return Err(PartitionError::BudgetExceeded {
            n,
            q,
            cells,
            budget,
        });
    }
    Ok(cells as usize)
}

/// Completes a verified partial spread with one 1-subspace per uncovered
/// point, giving a partition of type `[t^{n_t}, 1^{n_1}]`.
pub fn partition_from_spread(spread: &PartialSpread) -> Result<SubspacePartition, PartitionError> {
    if !spread.status().is_verified() {
        return Err(PartitionError::UnverifiedSpread);
    }
    let field = spread.field();
    let n = spread.params().n() as usize;
    let q = field.order();
    let mut covered = vec![false; cells(field, n, DEFAULT_POINT_BUDGET)?];
    for m in spread.members() {
        for code in m.point_codes() {
            covered[code] = true;
        }
    }
    let mut parts: Vec<Subspace> = spread.members().to_vec();
    for code in Subspace::full(field, n).point_codes() {
        if !covered[code] {
            parts.push(Subspace::span(field, n, &[decode_vector(q, n, code)])?);
        }
    }
    SubspacePartition::new(field, n, parts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionDefect {
    ZeroPart { index: usize },
    /// `vector` lies in parts `first` and `second`.
    DoublyCovered { vector: Vec<u32>, first: usize, second: usize },
    Uncovered { vector: Vec<u32> },
    /// `Σ n_d Θ_d ≠ Θ_n`.
    CountMismatch { covered: String, expected: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PartitionCheck {
    Valid,
    Invalid { defect: PartitionDefect },
}

impl PartitionCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, PartitionCheck::Valid)
    }
}

/// Direct cover check: every nonzero vector lies in exactly one part. Works
/// on projective points, since parts are closed under scalar multiples.
pub fn verify_partition(p: &SubspacePartition, budget: u64) -> Result<PartitionCheck, PartitionError> {
    let q = p.field.order();
    let mut owner = vec![u32::MAX; cells(&p.field, p.n, budget)?];
    let invalid = |defect| Ok(PartitionCheck::Invalid { defect });
    for (index, part) in p.parts.iter().enumerate() {
        if part.dim() == 0 {
            return invalid(PartitionDefect::ZeroPart { index });
        }
        for code in part.point_codes() {
            let slot = &mut owner[code];
            if *slot != u32::MAX {
                return invalid(PartitionDefect::DoublyCovered {
                    vector: decode_vector(q, p.n, code),
                    first: *slot as usize,
                    second: index,
                });
            }
            *slot = index as u32;
        }
    }
    for code in Subspace::full(&p.field, p.n).point_codes() {
        if owner[code] == u32::MAX {
            return invalid(PartitionDefect::Uncovered {
                vector: decode_vector(q, p.n, code),
            });
        }
    }
    let covered = p.point_count();
    let expected = theta(p.n as u32, q as u64);
    if covered != expected {
        return invalid(PartitionDefect::CountMismatch {
            covered: covered.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(PartitionCheck::Valid)
}

/// Per-hyperplane counts `b_{H,d}` of parts of dimension `d` inside `H`,
/// and the tally `s_b` of hyperplanes sharing each vector `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneProfile {
    /// Part dimensions present, largest first; indexes every `b` vector.
    dims: Vec<usize>,
    /// Row-major `Θ_n × dims.len()` table, hyperplanes in [`hyperplanes`] order.
    counts: Vec<u64>,
    tally: BTreeMap<Vec<u64>, u64>,
}

impl HyperplaneProfile {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn hyperplane_count(&self) -> usize {
        self.counts.len() / self.dims.len().max(1)
    }

    /// `b_H` for the hyperplane with index `h`.
    pub fn b(&self, h: usize) -> &[u64] {
        let k = self.dims.len();
        &self.counts[h * k..(h + 1) * k]
    }

    /// `b ↦ s_b`.
    pub fn tally(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.tally
    }

    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            dims: self.dims.clone(),
            hyperplanes: self.hyperplane_count() as u64,
            types: self
                .tally
                .iter()
                .map(|(b, &s)| HyperplaneType { b: b.clone(), s })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneType {
    pub b: Vec<u64>,
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub dims: Vec<usize>,
    pub hyperplanes: u64,
    pub types: Vec<HyperplaneType>,
}

/// Computes every `b_H` and checks, before returning, that `|P| = 1 + Σ_d
/// b_{H,d} q^d` for each hyperplane, `Σ_b s_b = Θ_n`, and `Σ_b b_d s_b =
/// n_d Θ_{n−d}` for each dimension present. The partition is assumed valid;
/// a failed identity means it was not.
///
/// The hyperplanes containing a part `S` are exactly the points of its
/// annihilator, so each part contributes `Θ_{n−dim S}` increments.
pub fn hyperplane_profile(p: &SubspacePartition) -> Result<HyperplaneProfile, PartitionError> {
    let q = p.field.order();
    let n = p.n;
    let types = p.type_vector();
    let dims: Vec<usize> = types.keys().rev().copied().collect();
    let k = dims.len();
    let slot_of = |d: usize| dims.iter().position(|&x| x == d).expect("dimension present");

    let mut index = vec![u32::MAX; cells(&p.field, n, DEFAULT_POINT_BUDGET)?];
    let mut total = 0usize;
    for (i, h) in hyperplanes(n, &p.field).enumerate() {
        index[encode_vector(q, h.dual())] = i as u32;
        total += 1;
    }
    let mut counts = vec![0u64; total * k];
    for part in &p.parts {
        let slot = slot_of(part.dim());
        for code in part.annihilator().point_codes() {
            let h = index[code] as usize;
            counts[h * k + slot] += 1;
        }
    }

    let violation = |identity: &str, hyperplane| PartitionError::IdentityViolation {
        identity: identity.to_string(),
        hyperplane,
    };
    let size = BigInt::from(p.parts.len());
    let weights: Vec<BigInt> = dims.iter().map(|&d| qpow(q as u64, d as u32)).collect();
    let mut tally: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for h in 0..total {
        let b = &counts[h * k..(h + 1) * k];
        let rhs: BigInt = 1 + b.iter().zip(&weights).map(|(&c, w)| w * c).sum::<BigInt>();
        if rhs != size {
            return Err(violation("|P| = 1 + Σ b_{H,d} q^d", Some(h)));
        }
        *tally.entry(b.to_vec()).or_insert(0) += 1;
    }
    let s_total: u64 = tally.values().sum();
    if BigInt::from(s_total) != theta(n as u32, q as u64) {
        return Err(violation("Σ s_b = Θ_n", None));
    }
    for (slot, &d) in dims.iter().enumerate() {
        if d == 0 || d >= n {
            continue;
        }
        let lhs: BigInt = tally.iter().map(|(b, &s)| BigInt::from(b[slot]) * s).sum();
        let rhs = theta((n - d) as u32, q as u64) * types[&d];
        if lhs != rhs {
            return Err(violation(&format!("Σ b_{d} s_b = n_{d} Θ_{}", n - d), None));
        }
    }
    Ok(HyperplaneProfile {
        dims,
        counts,
        tally,
    })
}

/// Which of Heden's four cases applies to `(n_{d_1}, d_1, d_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HedenCase {
    /// `q^{d2−d1} ∤ n_{d1}`, `d2 < 2d1`: `n_{d1} ≥ q^{d1} + 1`.
    I,
    /// `q^{d2−d1} ∤ n_{d1}`, `d2 ≥ 2d1`: `n_{d1} = (q^{d2}−1)/(q^{d1}−1)` or `n_{d1} > 2q^{d2−d1}`.
    II,
    /// `q^{d2−d1} | n_{d1}`, `d2 < 2d1`: `n_{d1} ≥ q^{d2} − q^{d1} + q^{d2−d1}`.
    III,
    /// `q^{d2−d1} | n_{d1}`, `d2 ≥ 2d1`: `n_{d1} ≥ q^{d2}`.
    IV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HedenVerdict {
    pub case: HedenCase,
    /// Smallest count allowed by the case (exceptional value aside).
    #[serde(with = "crate::json::bigint")]
    pub required_min: BigInt,
    /// Case II also admits exactly `(q^{d2}−1)/(q^{d1}−1)` when that is an integer.
    #[serde(default, with = "opt_bigint")]
    pub exceptional: Option<BigInt>,
    pub satisfied: bool,
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "crate::json::bigint")] BigInt);

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// Heden's conclusion for a partition whose two smallest dimensions are
/// `d1 < d2` with `n_{d1}` parts of dimension `d1`.
pub fn heden_case(n_d1: &BigInt, d1: u32, d2: u32, q: u64) -> HedenVerdict {
    assert!(d2 > d1 && d1 >= 1, "need d2 > d1 ≥ 1");
    let gap = qpow(q, d2 - d1);
    let divides = (n_d1 % &gap).is_zero();
    let wide = d2 >= 2 * d1;
    let (case, required_min, exceptional) = match (divides, wide) {
        (false, false) => (HedenCase::I, qpow(q, d1) + 1, None),
        (false, true) => {
            let (num, den) = (qpow(q, d2) - 1u32, qpow(q, d1) - 1u32);
            let exc = num.is_multiple_of(&den).then(|| num / den);
            (HedenCase::II, BigInt::from(2) * &gap + 1, exc)
        }
        (true, false) => (HedenCase::III, qpow(q, d2) - qpow(q, d1) + &gap, None),
        (true, true) => (HedenCase::IV, qpow(q, d2), None),
    };
    let satisfied = n_d1 >= &required_min || exceptional.as_ref() == Some(n_d1);
    HedenVerdict {
        case,
        required_min,
        exceptional,
        satisfied,
    }
}

/// Checks a partition's type against [`heden_case`] for its two smallest
/// dimensions. `None` when fewer than two dimensions occur.
pub fn heden_check(p: &SubspacePartition) -> Option<HedenVerdict> {
    let types = p.type_vector();
    let mut it = types.iter();
    let (&d1, &n1) = it.next()?;
    let (&d2, _) = it.next()?;
    Some(heden_case(
        &BigInt::from(n1),
        d1 as u32,
        d2 as u32,
        p.field.order() as u64,
    ))
}
