//! Exact-integer bounds on the maximum size `μ_q(n,t)` of a partial
//! `(t−1)`-spread of PG(n−1,q), the defect sequence `δ_i` that drives the
//! hyperplane-averaging descent, and the combined best-known oracle.
//!
//! Every quantity here is an arbitrary-precision integer; no floating point
//! is used anywhere in this module.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("outside the regime 2 ≤ r < t ≤ Θ_r (q={q}, n={n}, t={t}, r={r})")]
    OutOfRegime { q: u64, n: u32, t: u32, r: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// `(q, n, t)` with `q` a prime power and `n > t ≥ 1`; `r = n mod t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SpreadParams {
    q: u64,
    n: u32,
    t: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    q: u64,
    n: u32,
    t: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
}

impl TryFrom<RawParams> for SpreadParams {
    type Error = BoundsError;
    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        let p = SpreadParams::new(raw.q, raw.n, raw.t)?;
        if raw.r.is_some_and(|r| r != p.r()) {
            return Err(BoundsError::InvalidParams(format!("r must equal n mod t = {}", p.r())));
        }
        Ok(p)
    }
}

impl From<SpreadParams> for RawParams {
    fn from(p: SpreadParams) -> Self {
        RawParams {
            q: p.q,
            n: p.n,
            t: p.t,
            r: Some(p.r()),
        }
    }
}

impl SpreadParams {
    pub fn new(q: u64, n: u32, t: u32) -> Result<Self, BoundsError> {
        if prime_power(q).is_none() {
            return Err(BoundsError::InvalidParams(format!("q={q} is not a prime power")));
        }
        if t < 1 || n <= t {
            return Err(BoundsError::InvalidParams(format!("need n > t ≥ 1, got n={n}, t={t}")));
        }
        Ok(SpreadParams { q, n, t })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn r(&self) -> u32 {
        self.n % self.t
    }

    /// `2 ≤ r < t ≤ Θ_r`.
    pub fn in_main_regime(&self) -> bool {
        let r = self.r();
        r >= 2 && BigInt::from(self.t) <= theta(r, self.q)
    }
}

impl fmt::Display for SpreadParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, n={}, t={})", self.q, self.n, self.t)
    }
}

pub(crate) fn qpow(q: u64, k: u32) -> BigInt {
    BigInt::from(q).pow(k)
}

/// `Θ_i = (q^i − 1)/(q − 1)`, with `Θ_0 = 0`.
pub fn theta(i: u32, q: u64) -> BigInt {
    (qpow(q, i) - 1) / (q - 1)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// `(q^n − q^{t+r})/(q^t − 1)`; the division is exact.
fn base_term(p: &SpreadParams) -> BigInt {
    let (q, n, t, r) = (p.q, p.n, p.t, p.r());
    let num = qpow(q, n) - qpow(q, t + r);
    let den = qpow(q, t) - 1u32;
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// The classical construction size `(q^n − q^{t+r})/(q^t − 1) + 1`.
pub fn lower_bound(p: &SpreadParams) -> BigInt {
    base_term(p) + 1
}

/// `⌊ω⌋` where `2ω = √(4q^t(q^t − q^r) + 1) − (2q^t − 2q^r + 1)`, via isqrt.
pub fn omega_floor(q: u64, t: u32, r: u32) -> Result<BigInt, BoundsError> {
    if r == 0 {
        return Err(BoundsError::InvalidParams("⌊ω⌋ needs r > 0".into()));
    }
    let (qt, qr) = (qpow(q, t), qpow(q, r));
    let disc = BigInt::from(4) * &qt * (&qt - &qr) + 1u32;
    let m = BigInt::from(2) * &qt - BigInt::from(2) * &qr + 1u32;
    // √D ∈ [isqrt(D), isqrt(D)+1), so the floor only depends on isqrt(D).
    Ok((disc.sqrt() - m).div_floor(&BigInt::from(2)))
}

/// The Drake–Freeman upper bound, defined for `r > 0`.
pub fn drake_freeman(p: &SpreadParams) -> Result<BigInt, BoundsError> {
    let r = p.r();
    let omega = omega_floor(p.q, p.t, r)?;
    Ok(base_term(p) + qpow(p.q, r) - omega - 1)
}

/// `c_1 ≡ t − 2 (mod q)` in `[0, q)`, and `c_2 ∈ {0, q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1C2 {
    pub c1: u64,
    pub c2: u64,
}

pub fn c1_c2(q: u64, t: u32) -> C1C2 {
    let c1 = (t as u64 + q * q - 2) % q;
    let s = BigInt::from(q - 1) * (t as i64 - 2) + c1;
    let c2 = if (s % (q * q)).is_zero() { q } else { 0 };
    C1C2 { c1, c2 }
}

/// The additive excess `q^r − (q−1)(t−2) − c_1 + c_2` over `(q^n−q^{t+r})/(q^t−1)`.
pub fn main_excess(q: u64, t: u32, r: u32) -> BigInt {
    let C1C2 { c1, c2 } = c1_c2(q, t);
    qpow(q, r) - BigInt::from(q - 1) * (t as i64 - 2) - c1 + c2
}

fn check_regime(p: &SpreadParams) -> Result<(), BoundsError> {
    if p.in_main_regime() {
        Ok(())
    } else {
        Err(BoundsError::OutOfRegime {
            q: p.q,
            n: p.n,
            t: p.t,
            r: p.r(),
        })
    }
}

/// Upper bound valid for `2 ≤ r < t ≤ Θ_r`.
pub fn main_bound(p: &SpreadParams) -> Result<BigInt, BoundsError> {
    check_regime(p)?;
    Ok(base_term(p) + main_excess(p.q, p.t, p.r()))
}

/// The weaker divisibility-free form `… + q^r − (q−1)(t−3) + 1`.
pub fn main_bound_weak(p: &SpreadParams) -> Result<BigInt, BoundsError> {
    check_regime(p)?;
    Ok(base_term(p) + qpow(p.q, p.r()) - BigInt::from(p.q - 1) * (p.t as i64 - 3) + 1)
}

/// `main_bound − drake_freeman`, for `r ≥ 2` and `2r ≤ t ≤ Θ_r`.
pub fn compare_bounds(p: &SpreadParams) -> Result<BigInt, BoundsError> {
    check_regime(p)?;
    if p.t < 2 * p.r() {
        return Err(BoundsError::OutOfRegime {
            q: p.q,
            n: p.n,
            t: p.t,
            r: p.r(),
        });
    }
    Ok(main_bound(p)? - drake_freeman(p)?)
}

/// `⌈x Θ_i / q^i⌉`.
pub fn scaled_theta_ceil(x: &BigInt, i: u32, q: u64) -> BigInt {
    ceil_div(&(x * theta(i, q)), &qpow(q, i))
}

/// `δ_i = q^i ⌈x q^{−i} Θ_i⌉ − x Θ_i`.
pub fn delta(x: &BigInt, i: u32, q: u64) -> BigInt {
    qpow(q, i) * scaled_theta_ceil(x, i, q) - x * theta(i, q)
}

/// `h = ⌈x/(q−1)⌉`.
pub fn h_of(x: &BigInt, q: u64) -> BigInt {
    ceil_div(x, &BigInt::from(q - 1))
}

/// `ℓ = (q^{n−t} − q^r)/(q^t − 1)`.
pub fn ell(p: &SpreadParams) -> BigInt {
    (qpow(p.q, p.n - p.t) - qpow(p.q, p.r())) / (qpow(p.q, p.t) - 1)
}

/// Checks `q | x`, `q² ∤ x`, `r ≥ 2` and `t ≥ Θ_r − ⌈x/(q−1)⌉ + 2`.
pub fn check_descent_hypotheses(p: &SpreadParams, x: &BigInt) -> Result<(), BoundsError> {
    let q = BigInt::from(p.q);
    let fail = |msg: String| Err(BoundsError::HypothesisViolated(msg));
    if !x.is_positive() {
        return fail(format!("x > 0 (x = {x})"));
    }
    if !(x % &q).is_zero() {
        return fail(format!("q | x (q = {q}, x = {x})"));
    }
    if (x % (&q * &q)).is_zero() {
        return fail(format!("q² ∤ x (q = {q}, x = {x})"));
    }
    if p.r() < 2 {
        return fail(format!("r ≥ 2 (r = {})", p.r()));
    }
    let need = theta(p.r(), p.q) - h_of(x, p.q) + 2;
    if BigInt::from(p.t) < need {
        return fail(format!("t ≥ Θ_r − ⌈x/(q−1)⌉ + 2 = {need} (t = {})", p.t));
    }
    Ok(())
}

/// `ℓ q^t + x`, valid under the descent hypotheses.
pub fn lemma_main_bound(p: &SpreadParams, x: &BigInt) -> Result<BigInt, BoundsError> {
    check_descent_hypotheses(p, x)?;
    Ok(ell(p) * qpow(p.q, p.t) + x)
}

/// Which result supplied a value in a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundSource {
    TrivialOverlap,
    DrakeFreeman,
    MainTheorem,
    NsExact,
    KurzExact,
    EjsssExact,
    SpreadExact,
    BhpExact,
}

impl BoundSource {
    pub fn tag(self) -> &'static str {
        match self {
            BoundSource::TrivialOverlap => "TRIVIAL_OVERLAP",
            BoundSource::DrakeFreeman => "DRAKE_FREEMAN",
            BoundSource::MainTheorem => "MAIN_THEOREM",
            BoundSource::NsExact => "NS_EXACT",
            BoundSource::KurzExact => "KURZ_EXACT",
            BoundSource::EjsssExact => "EJSSS_EXACT",
            BoundSource::SpreadExact => "SPREAD_EXACT",
            BoundSource::BhpExact => "BHP_EXACT",
        }
    }
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourcedValue {
    #[serde(with = "crate::json::bigint")]
    pub value: BigInt,
    pub source: BoundSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub params: SpreadParams,
    #[serde(with = "crate::json::bigint")]
    pub lower: BigInt,
    pub uppers: Vec<SourcedValue>,
    #[serde(with = "crate::json::bigint")]
    pub best_upper: BigInt,
    pub exact: Option<SourcedValue>,
}

impl BoundReport {
    pub fn upper_from(&self, source: BoundSource) -> Option<&BigInt> {
        self.uppers.iter().find(|u| u.source == source).map(|u| &u.value)
    }
}

/// Exact value when one of the known theorems decides `μ_q(n,t)`.
/// Every exact result that applies, in precedence order. The first decides.
fn exact_values(p: &SpreadParams) -> Vec<SourcedValue> {
    let (q, n, t, r) = (p.q, p.n, p.t, p.r());
    let at = |value: BigInt, source| SourcedValue { value, source };
    if n < 2 * t {
        // Any two t-subspaces of V(n,q) meet when n < 2t.
        return vec![at(BigInt::one(), BoundSource::TrivialOverlap)];
    }
    if r == 0 {
        return vec![at(theta(n, q) / theta(t, q), BoundSource::SpreadExact)];
    }
    let mut out = Vec::new();
    if r == 1 {
        out.push(at(lower_bound(p), BoundSource::BhpExact));
    }
    if q == 2 && t == 3 && r == 2 && n >= 8 {
        out.push(at((qpow(2, n) - 32) / 7 + 2, BoundSource::EjsssExact));
    }
    if q == 2 && t > 3 && r == 2 {
        out.push(at(lower_bound(p), BoundSource::KurzExact));
    }
    if BigInt::from(t) > theta(r, q) {
        out.push(at(lower_bound(p), BoundSource::NsExact));
    }
    out
}

/// Combines every applicable result into one report, keeping all sources.
pub fn best_known(p: &SpreadParams) -> BoundReport {
    let mut uppers = Vec::new();
    if p.r() > 0 {
        uppers.push(SourcedValue {
            value: drake_freeman(p).expect("r > 0"),
            source: BoundSource::DrakeFreeman,
        });
    }
    if let Ok(v) = main_bound(p) {
        uppers.push(SourcedValue {
            value: v,
            source: BoundSource::MainTheorem,
        });
    }
    let exacts = exact_values(p);
    let exact = exacts.first().cloned();
    uppers.extend(exacts);
    let best_upper = uppers
        .iter()
        .map(|u| u.value.clone())
        .min()
        .expect("every parameter set has an applicable upper bound");
    let lower = match &exact {
        Some(e) => e.value.clone(),
        None => lower_bound(p),
    };
    BoundReport {
        params: *p,
        lower,
        uppers,
        best_upper,
        exact,
    }
}
