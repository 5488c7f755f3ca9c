//! Exact linear algebra: sparse fraction-free rank and rational solving.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse integer row: `(column, value)` with strictly increasing columns and
/// nonzero values.
pub type SparseRow = Vec<(usize, i64)>;

trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i128::checked_sub(*self, *o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// `p_lead * row - row_lead * pivot`, dropping the shared leading column.
fn eliminate<T: Scalar>(row: &[(usize, T)], pivot: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let (col, val) = match (row.get(i), pivot.get(j)) {
            (Some(r), Some(p)) if r.0 == p.0 => {
                i += 1;
                j += 1;
                (r.0, a.checked_mul(&r.1)?.checked_sub(&b.checked_mul(&p.1)?)?)
            }
            (Some(r), Some(p)) if r.0 < p.0 => {
                i += 1;
                (r.0, a.checked_mul(&r.1)?)
            }
            (Some(r), None) => {
                i += 1;
                (r.0, a.checked_mul(&r.1)?)
            }
            (_, Some(p)) => {
                j += 1;
                (p.0, T::zero().checked_sub(&b.checked_mul(&p.1)?)?)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    normalize(&mut out);
    Some(out)
}

fn normalize<T: Scalar>(row: &mut [(usize, T)]) {
    if row.is_empty() {
        return;
    }
    let mut g = row[0].1.gcd(&row[0].1);
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = g.neg();
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

fn rank_generic<T: Scalar>(rows: impl Iterator<Item = Vec<(usize, T)>>) -> Option<usize> {
    let mut pivots: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
    for mut row in rows {
        normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p)?,
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Exact rank of a sparse integer matrix.
///
/// Runs in `i128` with checked arithmetic and restarts over `BigInt` if any
/// intermediate overflows.
pub fn sparse_rank(rows: &[SparseRow]) -> usize {
    let small = rank_generic(
        rows.iter()
            .map(|r| r.iter().map(|&(c, v)| (c, v as i128)).collect::<Vec<_>>()),
    );
    match small {
        Some(r) => r,
        None => rank_generic(
            rows.iter()
                .map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect::<Vec<_>>()),
        )
        .expect("BigInt elimination cannot overflow"),
    }
}

/// Exact rank of a sparse matrix with arbitrary-precision entries.
pub fn sparse_rank_big(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    rank_generic(rows.into_iter()).expect("BigInt elimination cannot overflow")
}

/// Rank of a dense matrix over the rationals.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let ints = rows.iter().map(|r| {
        let lcm = r.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        r.iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(c, q)| (c, q.numer() * (&lcm / q.denom())))
            .collect::<Vec<_>>()
    });
    rank_generic(ints).expect("BigInt elimination cannot overflow")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    Underdetermined { free: usize },
    Inconsistent { row: usize },
}

/// Solves `A x = b` over the rationals, requiring a unique solution.
pub fn solve_unique(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>, SolveError> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if let Some(row) = (r..m.len()).find(|&i| !m[i][n].is_zero()) {
        return Err(SolveError::Inconsistent { row });
    }
    if pivot_cols.len() < n {
        return Err(SolveError::Underdetermined { free: n - pivot_cols.len() });
    }
    Ok((0..n).map(|i| m[i][n].clone()).collect())
}
