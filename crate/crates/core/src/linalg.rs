//! Matrices over GF(q), subspaces of V(n,q) in reduced row echelon form,
//! hyperplanes, enumeration, and q-analog counting.
//!
//! A [`Subspace`] always stores its basis in RREF with zero rows removed, so
//! two subspaces are equal exactly when their stored grids are equal.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient mismatch: V({0}) over GF({1}) vs V({2}) over GF({3})")]
    AmbientMismatch(usize, u32, usize, u32),
    #[error("enumeration of {count} items exceeds budget {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Dense matrix over a finite field, entries stored as raw encodings.
#[derive(Clone)]
pub struct MatrixFq {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixFq {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of raw encodings; `cols` is needed so that an
    /// empty row list still has a width.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for &v in row {
                field.element(v)?;
            }
            data.extend_from_slice(row);
        }
        Ok(MatrixFq {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.data[i * self.cols + j]).expect("entries are in range")
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) -> Result<(), LinalgError> {
        if v.order() != self.field.order() {
            return Err(GfError::FieldMismatch {
                value: v.value() as u64,
                order: self.field.order() as u64,
            }
            .into());
        }
        self.data[i * self.cols + j] = v.value();
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Entrywise difference; shapes and fields must agree.
    pub fn sub(&self, other: &MatrixFq) -> Result<MatrixFq, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape("difference of unequal shapes".into()));
        }
        if self.field != other.field {
            return Err(LinalgError::AmbientMismatch(
                self.cols,
                self.field.order(),
                other.cols,
                other.field.order(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub_raw(a, b))
            .collect();
        Ok(MatrixFq {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &MatrixFq) -> Result<MatrixFq, LinalgError> {
        if self.cols != other.cols || self.field != other.field {
            return Err(LinalgError::AmbientMismatch(
                self.cols,
                self.field.order(),
                other.cols,
                other.field.order(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> MatrixFq {
        if self.field.order() == 2 && self.cols <= 64 {
            self.rref_packed()
        } else {
            self.rref_generic()
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    fn rref_generic(&self) -> MatrixFq {
        let f = &self.field;
        let cols = self.cols;
        let mut rows: Vec<Vec<u32>> = self.to_rows();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = f.inv_raw(rows[rank][col]);
            if inv != 1 {
                for v in rows[rank].iter_mut() {
                    *v = f.mul_raw(*v, inv);
                }
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v = f.sub_raw(*v, f.mul_raw(factor, pv));
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        MatrixFq {
            field: f.clone(),
            rows: rank,
            cols,
            data: rows.concat(),
        }
    }

    /// GF(2) elimination with each row packed into one machine word.
    fn rref_packed(&self) -> MatrixFq {
        let cols = self.cols;
        let mut rows: Vec<u64> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &v)| acc | ((v as u64) << j))
            })
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let bit = 1u64 << col;
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let p = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= p;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        let data = rows[..rank]
            .iter()
            .flat_map(|&w| (0..cols).map(move |j| ((w >> j) & 1) as u32))
            .collect();
        MatrixFq {
            field: self.field.clone(),
            rows: rank,
            cols,
            data,
        }
    }
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for MatrixFq {}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over GF({}) ", self.rows, self.cols, self.field.order())?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Free-function form of [`MatrixFq::rref`].
pub fn rref(m: &MatrixFq) -> MatrixFq {
    m.rref()
}

/// A subspace of V(n,q), stored as its canonical RREF basis.
#[derive(Clone)]
pub struct Subspace {
    n: usize,
    basis: MatrixFq,
}

impl Subspace {
    /// Row space of the given rows (any spanning set).
    pub fn span(field: &Field, n: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let m = MatrixFq::from_rows(field, n, rows)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &MatrixFq) -> Self {
        Subspace {
            n: m.cols,
            basis: m.rref(),
        }
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        Subspace {
            n,
            basis: MatrixFq::zeros(field, 0, n),
        }
    }

    pub fn full(field: &Field, n: usize) -> Self {
        Subspace {
            n,
            basis: MatrixFq::identity(field, n),
        }
    }

    /// Span of the standard basis vectors `e_i` for `i` in `start..start+dim`.
    pub fn coordinate(field: &Field, n: usize, start: usize, dim: usize) -> Self {
        let mut basis = MatrixFq::zeros(field, dim, n);
        for i in 0..dim {
            basis.data[i * n + start + i] = 1;
        }
        Subspace { n, basis }
    }

    pub fn field(&self) -> &Field {
        &self.basis.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.basis.to_rows()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().position(|&v| v != 0).expect("nonzero row"))
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.n != other.n || self.field() != other.field() {
            return Err(LinalgError::AmbientMismatch(
                self.n,
                self.field().order(),
                other.n,
                other.field().order(),
            ));
        }
        Ok(())
    }

    /// `dim(A ∩ B) = dim A + dim B − rank([A; B])`.
    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        self.check_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(self.dim() + other.dim() - stacked.rank())
    }

    pub fn is_disjoint(&self, other: &Subspace) -> Result<bool, LinalgError> {
        Ok(self.intersect_dim(other)? == 0)
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        Ok(self.intersect_dim(other)? == other.dim())
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        if v.len() != self.n {
            return false;
        }
        // Reduce v against the RREF basis; it lies in the span iff it vanishes.
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots().iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                for (x, &b) in w.iter_mut().zip(self.basis.row(i)) {
                    *x = f.sub_raw(*x, f.mul_raw(c, b));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// The `Θ_d` normalized nonzero vectors of this subspace (first nonzero
    /// coordinate equal to 1), i.e. its projective points.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let f = self.field();
        let d = self.dim();
        normalized_vectors(f.order(), d)
            .map(|coeffs| {
                let mut v = vec![0u32; self.n];
                for (i, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                        *x = f.add_raw(*x, f.mul_raw(c, b));
                    }
                }
                v
            })
            .collect()
    }

    /// [`encode_vector`] of each of [`Subspace::points`], same order, computed
    /// by updating one running combination instead of rebuilding each vector.
    pub fn point_codes(&self) -> Vec<usize> {
        let f = self.field();
        let q = f.order();
        let (d, n) = (self.dim(), self.n);
        let mut out = Vec::new();
        let mut v = vec![0u32; n];
        let mut coef = vec![0u32; d];
        for lead in 0..d {
            v.copy_from_slice(self.basis.row(lead));
            coef.iter_mut().for_each(|c| *c = 0);
            coef[lead] = 1;
            loop {
                out.push(encode_vector(q, &v));
                // Odometer over positions lead+1..d, last fastest.
                let mut k = d;
                loop {
                    if k == lead + 1 || k == 0 {
                        k = usize::MAX;
                        break;
                    }
                    k -= 1;
                    let old = coef[k];
                    let new = if old + 1 == q { 0 } else { old + 1 };
                    coef[k] = new;
                    let step = f.sub_raw(new, old);
                    for (x, &b) in v.iter_mut().zip(self.basis.row(k)) {
                        *x = f.add_raw(*x, f.mul_raw(step, b));
                    }
                    if new != 0 {
                        break;
                    }
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
        out
    }

    /// Annihilator under the standard dot product; dimension `n − dim`.
    pub fn annihilator(&self) -> Subspace {
        let f = self.field();
        let pivots = self.pivots();
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        let rows: Vec<Vec<u32>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.n];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg_raw(self.basis.row(i)[fc]);
                }
                v
            })
            .collect();
        Subspace::span(f, self.n, &rows).expect("rows are well formed")
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.field.order().hash(state);
        self.n.hash(state);
        self.basis.data.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, dim={}, ", self.n, self.dim())?;
        f.debug_list()
            .entries((0..self.dim()).map(|i| self.basis.row(i)))
            .finish()?;
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    q: u64,
    n: usize,
    dim: usize,
    rows: Vec<Vec<u32>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            q: self.field().order() as u64,
            n: self.n,
            dim: self.dim(),
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SubspaceRepr::deserialize(d)?;
        let field = Field::with_order(repr.q).map_err(D::Error::custom)?;
        let s = Subspace::span(&field, repr.n, &repr.rows).map_err(D::Error::custom)?;
        if s.dim() != repr.dim {
            return Err(D::Error::custom(format!(
                "declared dim {} but rows span dimension {}",
                repr.dim,
                s.dim()
            )));
        }
        Ok(s)
    }
}

/// Normalized nonzero vectors of GF(q)^len: leading nonzero entry is 1.
/// Ordered by the position of the leading one, then lexicographically.
pub fn normalized_vectors(q: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..len).flat_map(move |lead| {
        let tail = len - lead - 1;
        let count = (q as u64).pow(tail as u32);
        (0..count).map(move |mut code| {
            let mut v = vec![0u32; len];
            v[lead] = 1;
            for j in (lead + 1..len).rev() {
                v[j] = (code % q as u64) as u32;
                code /= q as u64;
            }
            v
        })
    })
}

/// Base-`q` integer encoding of a vector, first coordinate most significant.
pub fn encode_vector(q: u32, v: &[u32]) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Inverse of [`encode_vector`] for vectors of length `len`.
pub fn decode_vector(q: u32, len: usize, mut code: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for x in v.iter_mut().rev() {
        *x = (code % q as usize) as u32;
        code /= q as usize;
    }
    v
}

/// Gaussian binomial coefficient `[n choose k]_q`, exact.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qb.pow(n - i) - 1u32;
        den *= qb.pow(i + 1) - 1u32;
    }
    num / den
}

/// A hyperplane of V(n,q) given by its normalized dual functional.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hyperplane {
    dual: Vec<u32>,
}

impl Hyperplane {
    /// Normalizes a nonzero functional so its first nonzero entry is 1.
    pub fn new(field: &Field, dual: &[u32]) -> Result<Self, LinalgError> {
        for &v in dual {
            field.element(v)?;
        }
        let lead = dual
            .iter()
            .find(|&&v| v != 0)
            .ok_or_else(|| LinalgError::Shape("zero functional".into()))?;
        let inv = field.inv_raw(*lead);
        Ok(Hyperplane {
            dual: dual.iter().map(|&v| field.mul_raw(v, inv)).collect(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.dual.len()
    }

    pub fn dual(&self) -> &[u32] {
        &self.dual
    }

    pub fn as_subspace(&self, field: &Field) -> Subspace {
        Subspace::span(field, self.dual.len(), std::slice::from_ref(&self.dual))
            .expect("dual is well formed")
            .annihilator()
    }
}

/// All `Θ_n` hyperplanes of V(n,q).
pub fn hyperplanes(n: usize, field: &Field) -> impl Iterator<Item = Hyperplane> {
    normalized_vectors(field.order(), n).map(|dual| Hyperplane { dual })
}

/// True iff `h`'s functional annihilates every basis row of `s`.
pub fn contains(h: &Hyperplane, s: &Subspace) -> bool {
    let f = s.field();
    (0..s.dim()).all(|i| {
        s.basis
            .row(i)
            .iter()
            .zip(&h.dual)
            .fold(0u32, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, b)))
            == 0
    })
}

/// Streams every `d`-subspace of V(n,q) exactly once, ordered by pivot set
/// (lexicographic), then by free entries read row-major with the last entry
/// varying fastest.
pub fn enumerate_subspaces(
    n: usize,
    d: usize,
    field: &Field,
    budget: u64,
) -> Result<SubspaceIter, LinalgError> {
    if d > n {
        return Err(LinalgError::Shape(format!("dimension {d} exceeds ambient {n}")));
    }
    let count = gaussian_binomial(n as u32, d as u32, field.order() as u64);
    if count > BigUint::from(budget) {
        return Err(LinalgError::BudgetExceeded { count, budget });
    }
    let mut it = SubspaceIter {
        field: field.clone(),
        n,
        d,
        pivots: (0..d).collect(),
        free: Vec::new(),
        values: Vec::new(),
        done: false,
    };
    it.reset_free();
    Ok(it)
}

pub struct SubspaceIter {
    field: Field,
    n: usize,
    d: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u32>,
    done: bool,
}

impl SubspaceIter {
    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for j in p + 1..self.n {
                if !self.pivots.contains(&j) {
                    self.free.push((i, j));
                }
            }
        }
        self.values = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) -> bool {
        let (n, d) = (self.n, self.d);
        let mut i = d;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - d + i {
                self.pivots[i] += 1;
                for k in i + 1..d {
                    self.pivots[k] = self.pivots[k - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut basis = MatrixFq::zeros(&self.field, self.d, self.n);
        for (i, &p) in self.pivots.iter().enumerate() {
            basis.data[i * self.n + p] = 1;
        }
        for (&(i, j), &v) in self.free.iter().zip(&self.values) {
            basis.data[i * self.n + j] = v;
        }
        let item = Subspace { n: self.n, basis };

        let q = self.field.order();
        let mut k = self.values.len();
        loop {
            if k == 0 {
                if self.advance_pivots() {
                    self.reset_free();
                } else {
                    self.done = true;
                }
                break;
            }
            k -= 1;
            self.values[k] += 1;
            if self.values[k] < q {
                break;
            }
            self.values[k] = 0;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(2);
        let id = MatrixFq::identity(&f, 3);
        assert_eq!(id.rref(), id);
        let m = MatrixFq::from_rows(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.rref().to_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let z = MatrixFq::zeros(&f, 3, 4);
        assert_eq!(z.rref().rows(), 0);
    }

    #[test]
    fn packed_and_generic_agree() {
        let f = gf(2);
        let m = MatrixFq::from_rows(
            &f,
            5,
            &[vec![1, 1, 0, 1, 0], vec![1, 0, 1, 1, 1], vec![0, 1, 1, 0, 1], vec![0, 0, 0, 1, 1]],
        )
        .unwrap();
        assert_eq!(m.rref_packed(), m.rref_generic());
    }

    #[test]
    fn intersections() {
        let f = gf(2);
        let a = Subspace::coordinate(&f, 4, 0, 2);
        let b = Subspace::coordinate(&f, 4, 2, 2);
        assert_eq!(a.intersect_dim(&a).unwrap(), 2);
        assert_eq!(a.intersect_dim(&b).unwrap(), 0);
        let c = Subspace::coordinate(&f, 5, 0, 2);
        assert!(matches!(
            a.intersect_dim(&c),
            Err(LinalgError::AmbientMismatch(..))
        ));
    }

    #[test]
    fn enumeration_counts() {
        let f = gf(2);
        assert_eq!(enumerate_subspaces(4, 2, &f, 1000).unwrap().count(), 35);
        assert_eq!(enumerate_subspaces(4, 4, &f, 1000).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(4, 0, &f, 1000).unwrap().count(), 1);
        assert!(matches!(
            enumerate_subspaces(7, 3, &f, 1000),
            Err(LinalgError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_canonical_and_distinct() {
        let f = gf(3);
        let all: Vec<Subspace> = enumerate_subspaces(4, 2, &f, 10_000).unwrap().collect();
        assert_eq!(all.len(), 130);
        for s in &all {
            assert_eq!(s.basis().rref(), *s.basis());
        }
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(all[0], Subspace::coordinate(&f, 4, 0, 2));
    }

    #[test]
    fn point_codes_match_points() {
        for q in [2u64, 3, 4] {
            let f = gf(q);
            for d in 0..=3 {
                for s in enumerate_subspaces(3, d, &f, 10_000).unwrap() {
                    let direct: Vec<usize> = s.points().iter().map(|v| encode_vector(f.order(), v)).collect();
                    assert_eq!(s.point_codes(), direct);
                }
            }
        }
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 7), BigUint::from(8u32));
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(9, 0, 5), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(7, 3, 2), BigUint::from(11811u32));
    }

    #[test]
    fn hyperplane_containment() {
        let f = gf(2);
        let hs: Vec<_> = hyperplanes(4, &f).collect();
        assert_eq!(hs.len(), 15);
        let full = Subspace::full(&f, 4);
        let zero = Subspace::zero(&f, 4);
        assert!(hs.iter().all(|h| !contains(h, &full)));
        assert!(hs.iter().all(|h| contains(h, &zero)));
    }

    #[test]
    fn annihilator_matches_containment() {
        let f = gf(3);
        for s in enumerate_subspaces(4, 2, &f, 1000).unwrap() {
            let ann = s.annihilator();
            assert_eq!(ann.dim(), 2);
            let via_ann: Vec<_> = ann.points();
            let via_scan: Vec<_> = hyperplanes(4, &f)
                .filter(|h| contains(h, &s))
                .map(|h| h.dual().to_vec())
                .collect();
            let mut a = via_ann.clone();
            let mut b = via_scan.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn points_and_membership() {
        let f = gf(4);
        let s = Subspace::span(&f, 3, &[vec![1, 2, 3], vec![0, 1, 1]]).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|p| s.contains_vector(p)));
        assert!(!s.contains_vector(&[0, 0, 1]) || s.dim() == 3);
    }

    #[test]
    fn subspace_json() {
        let f = gf(3);
        let s = Subspace::span(&f, 3, &[vec![2, 0, 1]]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"q":3,"n":3,"dim":1,"rows":[[1,0,2]]}"#);
        assert_eq!(serde_json::from_str::<Subspace>(&json).unwrap(), s);
        assert!(serde_json::from_str::<Subspace>(r#"{"q":3,"n":3,"dim":2,"rows":[[1,0,2]]}"#).is_err());
        assert!(serde_json::from_str::<Subspace>(r#"{"q":6,"n":3,"dim":1,"rows":[[1,0,2]]}"#).is_err());
    }
}
