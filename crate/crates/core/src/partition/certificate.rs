//! Descent certificates: the number trail behind the upper bound `ℓq^t + x`.
//!
//! Assuming a partial spread of size `ℓq^t + 1 + x` yields a partition of
//! type `[t^{n_t}, 1^{n_1}]`. Restricting repeatedly to a hyperplane whose
//! count of 1-dimensional parts is at most the average keeps that count in
//! the residue class of `δ_{t−j}` modulo `q^{t−j}`, with a shrinking cap on
//! the quotient. After `t − 2` steps it equals `δ_2 ∈ (0, q²)` with `q | δ_2`,
//! which no partition allows. A certificate records every number in that
//! trail; [`check_certificate`] recomputes each of them from `(q, n, t, x)`.
//!
//! The certificate covers the arithmetic only. The existence of a
//! below-average hyperplane at each step is the averaging argument itself and
//! is not re-derived here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{heden_case, HedenCase, HedenVerdict};
use crate::bounds::{
    check_descent_hypotheses, delta, drake_freeman, ell, h_of, main_excess, qpow, theta,
    BoundsError, SpreadParams,
};
use crate::gf::prime_power;

/// Averaging bound `b_avg = m Θ_{n−1−j}/Θ_{n−j} < m/q` at the cap `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AverageBound {
    #[serde(with = "crate::json::bigint")]
    pub numerator: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub denominator: BigInt,
    /// `q · numerator < m1_max · denominator`.
    pub below_m1_over_q: bool,
}

/// Passage from step `j` to `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepTransition {
    pub average: AverageBound,
    /// `x + δ_{t−j}`.
    #[serde(with = "crate::json::bigint")]
    pub lifted: BigInt,
    pub q_divides_lifted: bool,
    /// `(x + δ_{t−j}) / q`.
    #[serde(with = "crate::json::bigint")]
    pub quotient: BigInt,
    /// `q^{t−j−1}`.
    #[serde(with = "crate::json::bigint")]
    pub next_modulus: BigInt,
    /// `quotient mod q^{t−j−1}`, which must equal `δ_{t−j−1}`.
    #[serde(with = "crate::json::bigint")]
    pub residue: BigInt,
    /// `max(c_cap − 1, 0)`, bounded by the next step's cap.
    #[serde(with = "crate::json::bigint")]
    pub next_c_cap: BigInt,
}

/// Step `j`: a partition of a space of dimension `n − j` whose count of
/// 1-dimensional parts is `m_{j,1} = c_j q^{t−j} + δ_{t−j}` with
/// `0 ≤ c_j ≤ c_cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub j: u32,
    pub ambient_dim: u32,
    /// `t − j`.
    pub delta_index: u32,
    /// `δ_{t−j}`.
    #[serde(with = "crate::json::bigint")]
    pub delta: BigInt,
    /// `q^{t−j}`, the modulus of the residue statement `m_{j,1} ≡ δ_{t−j}`.
    #[serde(with = "crate::json::bigint")]
    pub modulus: BigInt,
    /// `max(Θ_r − h − j, 0)`.
    #[serde(with = "crate::json::bigint")]
    pub c_cap: BigInt,
    /// `c_cap q^{t−j} + δ_{t−j}`.
    #[serde(with = "crate::json::bigint")]
    pub m1_max: BigInt,
    pub transition: Option<StepTransition>,
}

/// Closing case `s ≥ 3`: `min{Θ_s, 2q^{s−1}, q^s}` grows with `s`, so its
/// value at `s = 3` exceeding `q²` closes every `s ≥ 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseHigherDim {
    #[serde(with = "crate::json::bigint")]
    pub theta_3: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub two_q_squared: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub q_cubed: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub minimum: BigInt,
    pub exceeds_q_squared: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
#[allow(clippy::large_enum_variant)]
pub enum Closure {
    /// The final count `δ_2` contradicts Heden's bounds whatever the second
    /// smallest dimension `s` is.
    HedenCases {
        #[serde(with = "crate::json::bigint")]
        delta_2: BigInt,
        #[serde(with = "crate::json::bigint")]
        q_squared: BigInt,
        /// `0 < δ_2 < q²`.
        delta_2_in_range: bool,
        q_divides_delta_2: bool,
        case_s_ge_3: CaseHigherDim,
        case_s_eq_2: HedenVerdict,
    },
    /// `x ≥ q^r`: the Drake–Freeman bound is already at most `ℓq^t + x`.
    DrakeFreeman {
        #[serde(with = "crate::json::bigint")]
        bound: BigInt,
        at_most_claim: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCertificate {
    pub q: u64,
    pub n: u32,
    pub t: u32,
    pub r: u32,
    #[serde(with = "crate::json::bigint")]
    pub x: BigInt,
    /// `⌈x/(q−1)⌉`.
    #[serde(with = "crate::json::bigint")]
    pub h: BigInt,
    /// `(q^{n−t} − q^r)/(q^t − 1)`.
    #[serde(with = "crate::json::bigint")]
    pub ell: BigInt,
    /// `ℓq^t + x`.
    #[serde(with = "crate::json::bigint")]
    pub claimed_bound: BigInt,
    /// `ℓq^t + 1 + x`, the size assumed for contradiction.
    #[serde(with = "crate::json::bigint")]
    pub n_t: BigInt,
    /// `Θ_n − n_t Θ_t`.
    #[serde(with = "crate::json::bigint")]
    pub n_1: BigInt,
    /// `q^t (Θ_r − h) + δ_t`, which must equal `n_1`.
    #[serde(with = "crate::json::bigint")]
    pub n_1_form: BigInt,
    pub steps: Vec<DescentStep>,
    pub closure: Closure,
}

/// Builds the certificate for `μ_q(n,t) ≤ ℓq^t + x`. Without `x`, uses
/// `x = q^r − (q−1)(t−2) − c_1 + c_2`.
pub fn descent_certificate(
    params: &SpreadParams,
    x: Option<BigInt>,
) -> Result<DescentCertificate, BoundsError> {
    let (q, n, t, r) = (params.q(), params.n(), params.t(), params.r());
    let x = x.unwrap_or_else(|| main_excess(q, t, r));
    check_descent_hypotheses(params, &x)?;

    let h = h_of(&x, q);
    let ell = ell(params);
    let qt = qpow(q, t);
    let claimed_bound = &ell * &qt + &x;
    let n_t = &claimed_bound + 1;
    let n_1 = theta(n, q) - &n_t * theta(t, q);
    let theta_r = theta(r, q);

    if x >= qpow(q, r) {
        let bound = drake_freeman(params)?;
        return Ok(DescentCertificate {
            q,
            n,
            t,
            r,
            n_1_form: &qt * (&theta_r - &h) + delta(&x, t, q),
            x,
            h,
            ell,
            claimed_bound: claimed_bound.clone(),
            n_t,
            n_1,
            steps: Vec::new(),
            closure: Closure::DrakeFreeman {
                at_most_claim: bound <= claimed_bound,
                bound,
            },
        });
    }

    let qb = BigInt::from(q);
    let mut steps = Vec::with_capacity(t as usize - 1);
    for j in 0..=t - 2 {
        let k = t - j;
        let d = delta(&x, k, q);
        let modulus = qpow(q, k);
        let c_cap = (&theta_r - &h - j).max(BigInt::zero());
        let m1_max = &c_cap * &modulus + &d;
        let transition = (j < t - 2).then(|| {
            let numerator = &m1_max * theta(n - 1 - j, q);
            let denominator = theta(n - j, q);
            let lifted = &x + &d;
            let quotient = lifted.div_floor(&qb);
            let next_modulus = qpow(q, k - 1);
            StepTransition {
                average: AverageBound {
                    below_m1_over_q: &qb * &numerator < &m1_max * &denominator,
                    numerator,
                    denominator,
                },
                q_divides_lifted: lifted.is_multiple_of(&qb),
                residue: quotient.mod_floor(&next_modulus),
                lifted,
                quotient,
                next_modulus,
                next_c_cap: (&c_cap - 1u32).max(BigInt::zero()),
            }
        });
        steps.push(DescentStep {
            j,
            ambient_dim: n - j,
            delta_index: k,
            delta: d,
            modulus,
            c_cap,
            m1_max,
            transition,
        });
    }

    let delta_2 = delta(&x, 2, q);
    let q_squared = qpow(q, 2);
    let theta_3 = theta(3, q);
    let two_q_squared = BigInt::from(2) * &q_squared;
    let q_cubed = qpow(q, 3);
    let minimum = theta_3.clone().min(two_q_squared.clone()).min(q_cubed.clone());
    let closure = Closure::HedenCases {
        delta_2_in_range: delta_2.is_positive() && delta_2 < q_squared,
        q_divides_delta_2: delta_2.is_multiple_of(&qb),
        case_s_ge_3: CaseHigherDim {
            exceeds_q_squared: minimum > q_squared,
            theta_3,
            two_q_squared,
            q_cubed,
            minimum,
        },
        case_s_eq_2: heden_case(&delta_2, 1, 2, q),
        delta_2,
        q_squared,
    };

    Ok(DescentCertificate {
        q,
        n,
        t,
        r,
        n_1_form: &qt * (&theta_r - &h) + delta(&x, t, q),
        x,
        h,
        ell,
        claimed_bound,
        n_t,
        n_1,
        steps,
        closure,
    })
}

/// Outcome of [`check_certificate`]: the first field whose stated value
/// differs from the recomputed one, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub mismatch: Option<String>,
}

impl CertificateCheck {
    fn ok() -> Self {
        CertificateCheck {
            valid: true,
            mismatch: None,
        }
    }

    fn at(field: impl Into<String>) -> Self {
        CertificateCheck {
            valid: false,
            mismatch: Some(field.into()),
        }
    }
}

/// Recomputes every recorded quantity from `(q, n, t, x)` using only `Θ`,
/// `δ` and integer arithmetic, and confirms that each stated fact holds.
pub fn check_certificate(cert: &DescentCertificate) -> CertificateCheck {
    match recheck(cert) {
        Ok(()) => CertificateCheck::ok(),
        Err(field) => CertificateCheck::at(field),
    }
}

fn same<T: PartialEq>(field: &str, stated: &T, expected: &T) -> Result<(), String> {
    if stated == expected {
        Ok(())
    } else {
        Err(field.to_string())
    }
}

fn holds(field: &str, fact: bool) -> Result<(), String> {
    if fact {
        Ok(())
    } else {
        Err(field.to_string())
    }
}

fn recheck(c: &DescentCertificate) -> Result<(), String> {
    let q = c.q;
    holds("q", prime_power(q).is_some())?;
    holds("t", c.t >= 1 && c.n > c.t)?;
    let (n, t) = (c.n, c.t);
    same("r", &c.r, &(n % t))?;
    let r = c.r;
    let x = &c.x;
    let qb = BigInt::from(q);

    // Hypotheses on x.
    holds("x", x.is_positive())?;
    holds("x", x.is_multiple_of(&qb))?;
    holds("x", !x.is_multiple_of(&(&qb * &qb)))?;
    holds("r", r >= 2)?;
    let h = (x + BigInt::from(q - 2)) / BigInt::from(q - 1);
    same("h", &c.h, &h)?;
    let theta_r = theta(r, q);
    holds("t", BigInt::from(t) >= &theta_r - &h + 2)?;

    let qt = BigInt::from(q).pow(t);
    let ell_num = BigInt::from(q).pow(n - t) - BigInt::from(q).pow(r);
    let ell_den = &qt - 1;
    holds("ell", ell_num.is_multiple_of(&ell_den))?;
    same("ell", &c.ell, &(ell_num / ell_den))?;
    let bound = &c.ell * &qt + x;
    same("claimed_bound", &c.claimed_bound, &bound)?;
    same("n_t", &c.n_t, &(&bound + 1))?;
    let n_1 = theta(n, q) - &c.n_t * theta(t, q);
    same("n_1", &c.n_1, &n_1)?;
    same("n_1_form", &c.n_1_form, &(&qt * (&theta_r - &h) + delta(x, t, q)))?;
    holds("n_1_form", c.n_1_form == c.n_1)?;

    if x >= &BigInt::from(q).pow(r) {
        holds("steps", c.steps.is_empty())?;
        let Closure::DrakeFreeman { bound: df, at_most_claim } = &c.closure else {
            return Err("closure.kind".into());
        };
        // Drake–Freeman bound recomputed with an integer square root.
        let qr = BigInt::from(q).pow(r);
        let disc = BigInt::from(4) * &qt * (&qt - &qr) + 1u32;
        let m = BigInt::from(2) * &qt - BigInt::from(2) * &qr + 1u32;
        let omega = (num_integer::Roots::sqrt(&disc) - m).div_floor(&BigInt::from(2));
        let expected = (BigInt::from(q).pow(n) - BigInt::from(q).pow(t + r)) / (&qt - 1) + &qr - omega - 1;
        same("closure.bound", df, &expected)?;
        same("closure.at_most_claim", at_most_claim, &(expected <= c.claimed_bound))?;
        return holds("closure.at_most_claim", *at_most_claim);
    }

    holds("steps", c.steps.len() as u32 == t - 1)?;
    for (j, step) in c.steps.iter().enumerate() {
        let j = j as u32;
        let at = |f: &str| format!("steps[{j}].{f}");
        let k = t - j;
        same(&at("j"), &step.j, &j)?;
        same(&at("ambient_dim"), &step.ambient_dim, &(n - j))?;
        same(&at("delta_index"), &step.delta_index, &k)?;
        let d = delta(x, k, q);
        same(&at("delta"), &step.delta, &d)?;
        holds(&at("delta"), !d.is_negative())?;
        let modulus = BigInt::from(q).pow(k);
        same(&at("modulus"), &step.modulus, &modulus)?;
        holds(&at("delta"), d < modulus)?;
        let cap = (&theta_r - &h - BigInt::from(j)).max(BigInt::zero());
        same(&at("c_cap"), &step.c_cap, &cap)?;
        same(&at("m1_max"), &step.m1_max, &(&cap * &modulus + &d))?;
        if j == 0 {
            // The cap is attained: m_{0,1} = n_1 exactly.
            holds(&at("m1_max"), step.m1_max == c.n_1)?;
        }
        match (&step.transition, j < t - 2) {
            (None, false) => {}
            (Some(tr), true) => {
                let num = &step.m1_max * theta(n - 1 - j, q);
                let den = theta(n - j, q);
                same(&at("transition.average.numerator"), &tr.average.numerator, &num)?;
                same(&at("transition.average.denominator"), &tr.average.denominator, &den)?;
                let below = &qb * &num < &step.m1_max * &den;
                same(&at("transition.average.below_m1_over_q"), &tr.average.below_m1_over_q, &below)?;
                holds(&at("transition.average.below_m1_over_q"), below || step.m1_max.is_zero())?;
                let lifted = x + &d;
                same(&at("transition.lifted"), &tr.lifted, &lifted)?;
                let divisible = lifted.is_multiple_of(&qb);
                same(&at("transition.q_divides_lifted"), &tr.q_divides_lifted, &divisible)?;
                holds(&at("transition.q_divides_lifted"), divisible)?;
                let quotient = &lifted / &qb;
                same(&at("transition.quotient"), &tr.quotient, &quotient)?;
                let next_mod = BigInt::from(q).pow(k - 1);
                same(&at("transition.next_modulus"), &tr.next_modulus, &next_mod)?;
                let residue = quotient.mod_floor(&next_mod);
                same(&at("transition.residue"), &tr.residue, &residue)?;
                holds(&at("transition.residue"), residue == delta(x, k - 1, q))?;
                let next_cap = (&cap - 1u32).max(BigInt::zero());
                same(&at("transition.next_c_cap"), &tr.next_c_cap, &next_cap)?;
                let following = (&theta_r - &h - BigInt::from(j + 1)).max(BigInt::zero());
                holds(&at("transition.next_c_cap"), next_cap <= following)?;
            }
            _ => return Err(at("transition")),
        }
    }
    let last = c.steps.last().expect("t ≥ 3 in the regime");
    holds("steps.last.c_cap", last.c_cap.is_zero())?;

    let Closure::HedenCases {
        delta_2,
        q_squared,
        delta_2_in_range,
        q_divides_delta_2,
        case_s_ge_3,
        case_s_eq_2,
    } = &c.closure
    else {
        return Err("closure.kind".into());
    };
    let d2 = delta(x, 2, q);
    same("closure.delta_2", delta_2, &d2)?;
    holds("closure.delta_2", last.m1_max == d2)?;
    let qq = &qb * &qb;
    same("closure.q_squared", q_squared, &qq)?;
    let in_range = d2.is_positive() && d2 < qq;
    same("closure.delta_2_in_range", delta_2_in_range, &in_range)?;
    holds("closure.delta_2_in_range", in_range)?;
    let divides = d2.is_multiple_of(&qb);
    same("closure.q_divides_delta_2", q_divides_delta_2, &divides)?;
    holds("closure.q_divides_delta_2", divides)?;

    let t3 = &qq + &qb + 1;
    same("closure.case_s_ge_3.theta_3", &case_s_ge_3.theta_3, &t3)?;
    let tq = BigInt::from(2) * &qq;
    same("closure.case_s_ge_3.two_q_squared", &case_s_ge_3.two_q_squared, &tq)?;
    let qc = &qq * &qb;
    same("closure.case_s_ge_3.q_cubed", &case_s_ge_3.q_cubed, &qc)?;
    let min = t3.min(tq).min(qc);
    same("closure.case_s_ge_3.minimum", &case_s_ge_3.minimum, &min)?;
    let exceeds = min > qq;
    same("closure.case_s_ge_3.exceeds_q_squared", &case_s_ge_3.exceeds_q_squared, &exceeds)?;
    holds("closure.case_s_ge_3.exceeds_q_squared", exceeds && min > d2)?;

    // s = 2 with q | δ_2 and 2 ≥ 2·1 is Heden's case IV: at least q² parts.
    let v = case_s_eq_2;
    same("closure.case_s_eq_2.case", &v.case, &HedenCase::IV)?;
    holds("closure.case_s_eq_2.case", divides)?;
    same("closure.case_s_eq_2.required_min", &v.required_min, &qq)?;
    same("closure.case_s_eq_2.exceptional", &v.exceptional, &None)?;
    let satisfied = d2 >= qq;
    same("closure.case_s_eq_2.satisfied", &v.satisfied, &satisfied)?;
    holds("closure.case_s_eq_2.satisfied", !satisfied)
}
