//! Polyhedral cones given by homogeneous inequalities.

use num_integer::Integer;

use crate::ambient::LinearInequality;
use crate::error::{Error, Result};

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// Primitive generators of the extreme rays of `{x : a_i . x >= 0}`.
///
/// Only the homogeneous parts of the inequalities are used. The cone is
/// assumed pointed; rays come out sorted.
pub fn extreme_rays(ineqs: &[LinearInequality], rank: usize) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<i128>> = ineqs
        .iter()
        .map(|q| q.coeffs.iter().map(|&c| c as i128).collect())
        .collect();
    let inside = |v: &[i128]| rows.iter().all(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<i128>() >= 0);

    let mut rays: Vec<Vec<i64>> = Vec::new();
    for subset in combinations(rows.len(), rank.saturating_sub(1)) {
        let sub: Vec<&Vec<i128>> = subset.iter().map(|&i| &rows[i]).collect();
        // kernel of the subset via signed maximal minors
        let v: Vec<i128> = (0..rank)
            .map(|j| {
                let minor: Vec<Vec<i128>> = sub
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * det(&minor)
            })
            .collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let v = primitive(v);
        let neg: Vec<i128> = v.iter().map(|x| -x).collect();
        for cand in [v, neg] {
            if inside(&cand) {
                let r: Vec<i64> = cand.iter().map(|&x| x as i64).collect();
                if !rays.contains(&r) {
                    rays.push(r);
                }
            }
        }
    }
    rays.sort();
    rays
}

/// True when the rays are linearly independent and generate the saturated
/// lattice of their span, so cone points are exactly the nonnegative
/// integer combinations of the rays.
pub fn is_unimodular(rays: &[Vec<i64>], rank: usize) -> bool {
    let k = rays.len();
    if k == 0 || k > rank {
        return false;
    }
    let m: Vec<Vec<i128>> = rays.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let g = combinations(rank, k).into_iter().fold(0i128, |g, cols| {
        let sub: Vec<Vec<i128>> = m.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        g.gcd(&det(&sub))
    });
    g == 1
}

/// All integer points `x` of the cone with `0 < weight . x <= cap`.
///
/// `weight` must be positive on every ray. Requires a unimodular simplicial
/// cone (every cone of the built-in ambients is one).
pub fn lattice_points(rays: &[Vec<i64>], rank: usize, weight: &[i64], cap: i64) -> Result<Vec<Vec<i64>>> {
    if !is_unimodular(rays, rank) {
        return Err(Error::InvalidDocument("curve cone is not unimodular simplicial".into()));
    }
    let w: Vec<i64> = rays
        .iter()
        .map(|r| r.iter().zip(weight).map(|(a, b)| a * b).sum())
        .collect();
    if w.iter().any(|&x| x <= 0) {
        return Err(Error::Internal("degree is not positive on a cone ray".into()));
    }
    let mut out = Vec::new();
    let mut lambda = vec![0i64; rays.len()];
    fn go(i: usize, budget: i64, w: &[i64], lambda: &mut Vec<i64>, rays: &[Vec<i64>], rank: usize, out: &mut Vec<Vec<i64>>) {
        if i == w.len() {
            if lambda.iter().any(|&l| l > 0) {
                let mut x = vec![0i64; rank];
                for (l, r) in lambda.iter().zip(rays) {
                    for (xi, ri) in x.iter_mut().zip(r) {
                        *xi += l * ri;
                    }
                }
                out.push(x);
            }
            return;
        }
        let mut l = 0;
        while l * w[i] <= budget {
            lambda[i] = l;
            go(i + 1, budget - l * w[i], w, lambda, rays, rank, out);
            l += 1;
        }
        lambda[i] = 0;
    }
    go(0, cap, &w, &mut lambda, rays, rank, &mut out);
    Ok(out)
}
