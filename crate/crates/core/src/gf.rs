//! Exact arithmetic in GF(p^e) and in extensions GF(q^m) over a base field.
//!
//! Elements of GF(p^e) are packed as a single integer `Σ c_i p^i` where the
//! `c_i ∈ [0, p)` are the coefficients of the polynomial representative
//! modulo the field's defining polynomial. When `p = 2` this is plain bit
//! packing and addition is XOR.
//!
//! Field construction is deterministic: the defining polynomial is the
//! smallest monic irreducible of the requested degree when its coefficient
//! tuple `(c_0, …, c_{e-1})` is read as a base-`p` integer. Two
//! constructions of the same field always agree, so element encodings are
//! stable across runs and safe to serialize.
//!
//! ```
//! use spreadlab::gf::Field;
//!
//! let gf4 = Field::new(2, 2).unwrap();
//! assert_eq!(gf4.modulus(), &[1, 1, 1]); // X^2 + X + 1
//! let alpha = gf4.element(2).unwrap();
//! assert_eq!(gf4.mul(alpha, alpha).unwrap().value(), 3); // alpha + 1
//! ```

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default cap on field orders so element encodings stay in `u32`.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Log/antilog tables are built up to this order.
const TABLE_MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {order} exceeds the configured maximum {max}")]
    Overflow { order: u128, max: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {value} does not belong to a field of order {order}")]
    FieldMismatch { value: u64, order: u64 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0:?} does not define this field")]
    BadModulus(Vec<u32>),
}

/// Field-order cap: `SPREADLAB_MAX_Q` when set, otherwise [`DEFAULT_MAX_ORDER`].
pub fn max_order() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("SPREADLAB_MAX_Q")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(|v| v.min(u32::MAX as u64))
            .unwrap_or(DEFAULT_MAX_ORDER)
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e` with `p` prime, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Coefficient arithmetic for the polynomial helpers below.
trait Coeffs {
    fn order(&self) -> u32;
    fn cadd(&self, a: u32, b: u32) -> u32;
    fn csub(&self, a: u32, b: u32) -> u32;
    fn cmul(&self, a: u32, b: u32) -> u32;
    fn cinv(&self, a: u32) -> u32;
}

struct PrimeCoeffs(u32);

impl Coeffs for PrimeCoeffs {
    fn order(&self) -> u32 {
        self.0
    }
    fn cadd(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }
    fn csub(&self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }
    fn cmul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn cinv(&self, a: u32) -> u32 {
        // a^(p-2) mod p
        let p = self.0 as u64;
        let (mut base, mut exp, mut acc) = (a as u64 % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
}

impl Coeffs for Field {
    fn order(&self) -> u32 {
        self.0.q
    }
    fn cadd(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, b)
    }
    fn csub(&self, a: u32, b: u32) -> u32 {
        self.sub_raw(a, b)
    }
    fn cmul(&self, a: u32, b: u32) -> u32 {
        self.mul_raw(a, b)
    }
    fn cinv(&self, a: u32) -> u32 {
        self.inv_raw(a)
    }
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Remainder of `a` modulo the monic or non-monic nonzero `b`.
fn poly_rem<C: Coeffs>(c: &C, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = c.cinv(b[db]);
    while r.len() > db {
        let top = r.len() - 1;
        let coef = c.cmul(r[top], lead_inv);
        if coef != 0 {
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = c.csub(r[shift + i], c.cmul(coef, bi));
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_mul<C: Coeffs>(c: &C, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = c.cadd(out[i + j], c.cmul(ai, bj));
        }
    }
    trim(&mut out);
    out
}

/// Digits of `v` in base `base`, exactly `len` of them, least significant first.
fn digits(mut v: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % base) as u32);
        v /= base;
    }
    out
}

fn undigits(d: &[u32], base: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &c| acc * base + c as u64)
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `low`.
fn monic_from(low: u64, base: u64, deg: usize) -> Vec<u32> {
    let mut p = digits(low, base, deg);
    p.push(1);
    p
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
fn is_irreducible<C: Coeffs>(c: &C, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let base = c.order() as u64;
    for d in 1..=deg / 2 {
        for low in 0..base.pow(d as u32) {
            let divisor = monic_from(low, base, d);
            if poly_rem(c, poly, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible<C: Coeffs>(c: &C, deg: usize) -> Vec<u32> {
    let base = c.order() as u64;
    (0..base.pow(deg as u32))
        .map(|low| monic_from(low, base, deg))
        .find(|p| is_irreducible(c, p))
        .expect("an irreducible polynomial exists in every degree")
}

struct LogTables {
    /// exp[i] = g^i for i in [0, 2(q-1)).
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

/// A finite field GF(p^e). Cheap to clone; contexts are immutable and
/// shared between threads.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

/// An element of some GF(q), tagged with the order of its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    order: u32,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

impl Field {
    /// GF(p^e) with the deterministic smallest irreducible modulus.
    pub fn new(p: u64, e: u32) -> Result<Self, GfError> {
        Self::with_max_order(p, e, max_order())
    }

    pub fn with_max_order(p: u64, e: u32, max: u64) -> Result<Self, GfError> {
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let order = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        let max = max.min(u32::MAX as u64);
        if order > max as u128 {
            return Err(GfError::Overflow { order, max });
        }
        let pc = PrimeCoeffs(p as u32);
        let modulus = smallest_irreducible(&pc, e as usize);
        let mut inner = FieldInner {
            p: p as u32,
            e,
            q: order as u32,
            modulus,
            tables: None,
        };
        if inner.q <= TABLE_MAX_ORDER {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// The field with `q` elements.
    pub fn with_order(q: u64) -> Result<Self, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Coefficients `[c_0, …, c_e]` of the defining polynomial, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, GfError> {
        if value >= self.0.q {
            return Err(GfError::FieldMismatch {
                value: value as u64,
                order: self.0.q as u64,
            });
        }
        Ok(self.wrap(value))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(|v| self.wrap(v))
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement {
            value,
            order: self.0.q,
        }
    }

    fn check(&self, a: FieldElement) -> Result<u32, GfError> {
        if a.order != self.0.q || a.value >= self.0.q {
            return Err(GfError::FieldMismatch {
                value: a.value as u64,
                order: self.0.q as u64,
            });
        }
        Ok(a.value)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.add_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.sub_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.neg_raw(self.check(a)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        match self.check(a)? {
            0 => Err(GfError::DivisionByZero),
            v => Ok(self.wrap(self.inv_raw(v))),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        let b_inv = self.inv(b)?;
        self.mul(a, b_inv)
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> Result<FieldElement, GfError> {
        Ok(self.wrap(self.pow_raw(self.check(a)?, k)))
    }

    // Unchecked arithmetic on raw encodings; callers guarantee `< q`.

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 {
            return a ^ b;
        }
        if inner.e == 1 {
            return (a + b) % inner.p;
        }
        let p = inner.p;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 {
            return a;
        }
        if inner.e == 1 {
            return (inner.p - a) % inner.p;
        }
        let p = inner.p;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        match &inner.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => poly_mul_raw(inner, a, b),
        }
    }

    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let inner = &*self.0;
        match &inner.tables {
            Some(t) => t.exp[((inner.q - 1 - t.log[a as usize]) % (inner.q - 1)) as usize],
            None => self.pow_raw(a, inner.q as u64 - 2),
        }
    }

    pub(crate) fn pow_raw(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }
}

fn poly_mul_raw(inner: &FieldInner, a: u32, b: u32) -> u32 {
    let pc = PrimeCoeffs(inner.p);
    let (p, e) = (inner.p as u64, inner.e as usize);
    let prod = poly_mul(&pc, &digits(a as u64, p, e), &digits(b as u64, p, e));
    let r = poly_rem(&pc, &prod, &inner.modulus);
    undigits(&r, p) as u32
}

fn build_tables(inner: &FieldInner) -> LogTables {
    let q = inner.q;
    let group = q as u64 - 1;
    let factors = prime_factors(group);
    let pow = |mut a: u32, mut k: u64| {
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = poly_mul_raw(inner, acc, a);
            }
            a = poly_mul_raw(inner, a, a);
            k >>= 1;
        }
        acc
    };
    let generator = (1..q)
        .find(|&g| factors.iter().all(|&f| pow(g, group / f) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * group as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..group as usize {
        exp[i] = cur;
        exp[i + group as usize] = cur;
        log[cur as usize] = i as u32;
        cur = poly_mul_raw(inner, cur, generator);
    }
    LogTables { exp, log }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.e, self.0.modulus)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u64,
    e: u32,
    modulus: Vec<u32>,
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldRepr {
            p: self.0.p as u64,
            e: self.0.e,
            modulus: self.0.modulus.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(d)?;
        let field = Field::new(repr.p, repr.e).map_err(serde::de::Error::custom)?;
        if field.modulus() != repr.modulus.as_slice() {
            return Err(serde::de::Error::custom(GfError::BadModulus(repr.modulus)));
        }
        Ok(field)
    }
}

/// An element of an extension field, packed as `Σ c_i q^i` over base coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExtElement(u64);

impl ExtElement {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// GF(q^m) as a degree-`m` extension of a base field GF(q), with the power
/// basis `1, α, …, α^{m-1}` of a root `α` of the defining polynomial.
#[derive(Clone)]
pub struct ExtField {
    base: Field,
    m: usize,
    modulus: Vec<u32>,
    order: u64,
}

impl ExtField {
    pub fn new(base: &Field, m: usize) -> Result<Self, GfError> {
        Self::with_max_order(base, m, max_order())
    }

    pub fn with_max_order(base: &Field, m: usize, max: u64) -> Result<Self, GfError> {
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = (base.order() as u128)
            .checked_pow(m as u32)
            .unwrap_or(u128::MAX);
        if order > max as u128 {
            return Err(GfError::Overflow { order, max });
        }
        let modulus = smallest_irreducible(base, m);
        Ok(ExtField {
            base: base.clone(),
            m,
            modulus,
            order: order as u64,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Defining polynomial over the base field, low to high, as base encodings.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement(0)
    }

    pub fn one(&self) -> ExtElement {
        ExtElement(1)
    }

    /// The adjoined root `α` (for `m = 1`, the root of the linear modulus).
    pub fn generator(&self) -> ExtElement {
        if self.m == 1 {
            ExtElement(self.base.neg_raw(self.modulus[0]) as u64)
        } else {
            ExtElement(self.base.order() as u64)
        }
    }

    pub fn element(&self, value: u64) -> Result<ExtElement, GfError> {
        if value >= self.order {
            return Err(GfError::FieldMismatch {
                value,
                order: self.order,
            });
        }
        Ok(ExtElement(value))
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElement> {
        (0..self.order).map(ExtElement)
    }

    fn check(&self, a: ExtElement) -> Result<Vec<u32>, GfError> {
        if a.0 >= self.order {
            return Err(GfError::FieldMismatch {
                value: a.0,
                order: self.order,
            });
        }
        Ok(digits(a.0, self.base.order() as u64, self.m))
    }

    /// Coordinates of `a` over the base field in the power basis.
    pub fn coord(&self, a: ExtElement) -> Result<Vec<FieldElement>, GfError> {
        Ok(self
            .check(a)?
            .into_iter()
            .map(|c| self.base.wrap(c))
            .collect())
    }

    pub fn from_coord(&self, coords: &[FieldElement]) -> Result<ExtElement, GfError> {
        if coords.len() != self.m {
            return Err(GfError::FieldMismatch {
                value: coords.len() as u64,
                order: self.m as u64,
            });
        }
        let raw = coords
            .iter()
            .map(|&c| self.base.check(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExtElement(undigits(&raw, self.base.order() as u64)))
    }

    pub fn add(&self, a: ExtElement, b: ExtElement) -> Result<ExtElement, GfError> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        let sum: Vec<u32> = x
            .iter()
            .zip(&y)
            .map(|(&u, &v)| self.base.add_raw(u, v))
            .collect();
        Ok(ExtElement(undigits(&sum, self.base.order() as u64)))
    }

    pub fn mul(&self, a: ExtElement, b: ExtElement) -> Result<ExtElement, GfError> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        let prod = poly_mul(&self.base, &x, &y);
        let r = poly_rem(&self.base, &prod, &self.modulus);
        Ok(ExtElement(undigits(&r, self.base.order() as u64)))
    }

    pub fn pow(&self, a: ExtElement, mut k: u64) -> Result<ExtElement, GfError> {
        let (mut base, mut acc) = (a, self.one());
        self.check(a)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base)?;
            }
            base = self.mul(base, base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}) over {:?} mod {:?}",
            self.base.order(),
            self.m,
            self.base,
            self.modulus
        )
    }
}
