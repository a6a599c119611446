//! Exact linear algebra kernel.
//!
//! Everything here works over the rationals or the integers; nothing goes
//! through floating point. Small dense problems (vectors in the reflection
//! representation, n <= 8) use [`Q`] directly. Large sparse boundary
//! matrices go through [`SparseMatrix::rank`], a fraction-free elimination
//! that runs on `i128` and falls back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Rank of a small integer matrix given as rows (Bareiss elimination).
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over the rationals; zero rows dropped.
pub fn rref(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return m;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let d = &f * &m[rank][c];
                    m[r][c] -= d;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    m.truncate(rank);
    m
}

pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    rref(rows).len()
}

/// Determinant of a square rational matrix.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let s = &f * &a[col][c];
                a[r][c] -= s;
            }
        }
    }
    d
}

/// Basis of the kernel `{x : m x = 0}` of a matrix given by rows.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let r = rref(rows);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Coordinates of `target` in the basis `generators`, if it lies in their span.
///
/// Fails when the generators are linearly dependent.
pub fn solve_in_span(generators: &[Vec<Q>], target: &[Q]) -> Result<Option<Vec<Q>>> {
    let k = generators.len();
    let dim = target.len();
    if rank_q(generators) != k {
        return Err(Error::Argument("generators are linearly dependent".into()));
    }
    // augmented system: columns are generators, last column the target
    let rows: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Q> = generators.iter().map(|g| g[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let r = rref(&rows);
    let mut coords = vec![Q::zero(); k];
    for row in &r {
        let p = row.iter().position(|x| !x.is_zero()).unwrap();
        if p == k {
            return Ok(None);
        }
        coords[p] = row[k].clone();
    }
    Ok(Some(coords))
}

/// Ring operations needed by the fraction-free elimination. `None` signals overflow.
trait ElimRing: Clone + PartialEq + Zero {
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit_abs(&self) -> bool;
}

impl ElimRing for i128 {
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit_abs(&self) -> bool {
        self.abs() == 1
    }
}

impl ElimRing for BigInt {
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit_abs(&self) -> bool {
        self.abs().is_one()
    }
}

/// Sparse integer matrix, stored by rows with sorted column indices.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Adds `value` to entry `(row, col)`.
    pub fn add(&mut self, row: usize, col: usize, value: i64) {
        let r = &mut self.rows[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(i) => {
                r[i].1 += value;
                if r[i].1 == 0 {
                    r.remove(i);
                }
            }
            Err(i) => {
                if value != 0 {
                    r.insert(i, (col, value));
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        let r = &self.rows[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(i) => r[i].1,
            Err(_) => 0,
        }
    }

    pub fn row(&self, row: usize) -> &[(usize, i64)] {
        &self.rows[row]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `self * other`, both sparse.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseMatrix::new(self.nrows, other.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    *acc.entry(j).or_insert(0) += a * b;
                }
            }
            out.rows[i] = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let small: Vec<Vec<(usize, i128)>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, v as i128)).collect())
            .collect();
        if let Some(r) = sparse_rank(small) {
            return r;
        }
        let big: Vec<Vec<(usize, BigInt)>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
            .collect();
        sparse_rank(big).expect("big integer elimination cannot overflow")
    }
}

/// Incremental echelon basis keyed by leading column. Returns `None` on overflow.
fn sparse_rank<T: ElimRing>(mut rows: Vec<Vec<(usize, T)>>) -> Option<usize> {
    // short rows first keeps fill-in low
    rows.sort_by_key(Vec::len);
    let mut basis: std::collections::HashMap<usize, Vec<(usize, T)>> = Default::default();
    for mut row in rows {
        while let Some(&(lead, _)) = row.first() {
            let Some(piv) = basis.get(&lead) else {
                break;
            };
            row = eliminate(&row, piv)?;
        }
        if let Some(&(lead, _)) = row.first() {
            basis.insert(lead, row);
        }
    }
    Some(basis.len())
}

/// `piv[0] * row - row[0] * piv`, divided by the content; both share the leading column.
fn eliminate<T: ElimRing>(row: &[(usize, T)], piv: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let a = &piv[0].1;
    let b = &row[0].1;
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (1, 1);
    let zero = T::zero();
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, x, y) = if ci == cj {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1, &piv[j - 1].1)
        } else if ci < cj {
            i += 1;
            (ci, &row[i - 1].1, &zero)
        } else {
            j += 1;
            (cj, &zero, &piv[j - 1].1)
        };
        let v = T::mul_sub(a, x, b, y)?;
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    if let Some(first) = out.first() {
        let mut g = first.1.clone();
        for (_, v) in &out[1..] {
            if g.is_unit_abs() {
                break;
            }
            g = g.gcd(v);
        }
        if !g.is_unit_abs() && !g.is_zero() {
            for e in out.iter_mut() {
                e.1 = e.1.div_exact(&g);
            }
        }
    }
    Some(out)
}

/// Clears denominators of a rational row, producing a primitive integer row.
pub fn primitive_integer_row(row: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::Integer::gcd(&g, x);
    }
    if g.is_zero() {
        return ints;
    }
    let first_sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap();
    ints.into_iter().map(|x| x / &g * &first_sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn int_rank_basic() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
        assert_eq!(int_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(int_rank(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]), 3);
    }

    #[test]
    fn determinant_and_nullspace() {
        let m = vec![qs(&[1, 1]), qs(&[1, 0])];
        assert_eq!(det(&m), q(-1));
        let ns = nullspace(&[qs(&[1, -1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(&v[0] - &v[1], q(0));
        }
    }

    #[test]
    fn solve_cases() {
        let g = vec![qs(&[1, 0]), qs(&[0, 1])];
        assert_eq!(solve_in_span(&g, &qs(&[1, 1])).unwrap(), Some(qs(&[1, 1])));
        let g = vec![qs(&[1, 0, 0])];
        assert_eq!(solve_in_span(&g, &qs(&[0, 1, 0])).unwrap(), None);
        assert_eq!(solve_in_span(&g, &qs(&[3, 0, 0])).unwrap(), Some(qs(&[3])));
        let dep = vec![qs(&[1, 0]), qs(&[2, 0])];
        assert!(solve_in_span(&dep, &qs(&[1, 0])).is_err());
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let dense = [vec![1, 2, 0, 3], vec![2, 4, 0, 6], vec![0, 1, 1, 0], vec![1, 3, 1, 3]];
        let mut s = SparseMatrix::new(4, 4);
        for (i, r) in dense.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                s.add(i, j, v);
            }
        }
        assert_eq!(s.rank(), 2);
        let rows: Vec<Vec<i64>> = dense.to_vec();
        assert_eq!(int_rank(&rows), 2);
    }

    #[test]
    fn sparse_rank_overflow_falls_back() {
        // entries near i64::MAX force the i128 path past its range
        let big = i64::MAX / 3;
        let mut s = SparseMatrix::new(3, 3);
        let vals = [[big, big - 1, 7], [big - 5, big, 11], [3, big - 7, big]];
        for (i, r) in vals.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                s.add(i, j, v);
            }
        }
        let dense: Vec<Vec<Q>> = vals.iter().map(|r| qs(r)).collect();
        assert_eq!(s.rank(), rank_q(&dense));
    }
}
