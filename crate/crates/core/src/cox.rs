//! Cox-ring section spaces and section-dominating checks.
//!
//! Every ambient here is a smooth toric threefold (for `P111n` the
//! resolution of the cone point), so `H^0(A, D)` has a basis of Cox
//! monomials of multidegree `D`, and the torus orbits are indexed by the
//! sets of Cox variables allowed to vanish together. The evaluation maps
//! are torus-equivariant, so a rank computed at one point of an orbit holds
//! on the whole orbit; one representative per orbit (vanishing coordinates
//! 0, all others 1) therefore decides a statement quantified over all
//! points.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::ambient::{AmbientId, AmbientKind, AmbientThreefold, DivisorClass};
use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, sparse_rank_big, SparseRow};

#[derive(Clone, Debug, Serialize)]
pub struct CoxVariable {
    pub name: String,
    pub degree: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct CoxPresentation {
    pub ambient: AmbientId,
    pub variables: Vec<CoxVariable>,
    /// Minimal sets of variables that never vanish simultaneously.
    pub forbidden: Vec<Vec<usize>>,
    /// One vanishing pattern per torus orbit, the empty pattern first.
    pub vanishing_patterns: Vec<Vec<usize>>,
    /// Weight vector positive on every variable degree.
    grading: Vec<i64>,
}

impl CoxPresentation {
    pub fn for_ambient(amb: &AmbientThreefold) -> Self {
        let e = amb.params.e.unwrap_or(0);
        let n = amb.params.n.unwrap_or(0);
        let (vars, forbidden, grading): (Vec<(&str, Vec<i64>)>, Vec<Vec<usize>>, Vec<i64>) = match amb.kind {
            AmbientKind::P1P1P1 => (
                vec![
                    ("x0", vec![1, 0, 0]),
                    ("x1", vec![1, 0, 0]),
                    ("y0", vec![0, 1, 0]),
                    ("y1", vec![0, 1, 0]),
                    ("z0", vec![0, 0, 1]),
                    ("z1", vec![0, 0, 1]),
                ],
                vec![vec![0, 1], vec![2, 3], vec![4, 5]],
                vec![1, 1, 1],
            ),
            AmbientKind::P2xP1 => (
                vec![("x", vec![1, 0]), ("y", vec![1, 0]), ("z", vec![1, 0]), ("s", vec![0, 1]), ("t", vec![0, 1])],
                vec![vec![0, 1, 2], vec![3, 4]],
                vec![1, 1],
            ),
            AmbientKind::FexP1 => (
                vec![
                    ("t0", vec![0, 1, 0]),
                    ("t1", vec![0, 1, 0]),
                    ("x0", vec![1, 0, 0]),
                    ("x1", vec![1, e, 0]),
                    ("s0", vec![0, 0, 1]),
                    ("s1", vec![0, 0, 1]),
                ],
                vec![vec![0, 1], vec![2, 3], vec![4, 5]],
                vec![1, 1, 1],
            ),
            AmbientKind::BlP3 => (
                vec![("x1", vec![1, -1]), ("x2", vec![1, -1]), ("x3", vec![1, -1]), ("x4", vec![1, 0]), ("x5", vec![0, 1])],
                vec![vec![0, 1, 2], vec![3, 4]],
                vec![2, 1],
            ),
            AmbientKind::P111n => (
                vec![("x", vec![0, 1]), ("y", vec![0, 1]), ("z", vec![0, 1]), ("u", vec![1, -n]), ("v", vec![1, 0])],
                vec![vec![0, 1, 2], vec![3, 4]],
                vec![n + 1, 1],
            ),
        };
        let variables: Vec<CoxVariable> = vars
            .into_iter()
            .map(|(name, degree)| CoxVariable { name: name.to_string(), degree })
            .collect();
        let nv = variables.len();
        let mut vanishing_patterns: Vec<Vec<usize>> = (0u32..(1 << nv))
            .filter(|&mask| forbidden.iter().all(|f| !f.iter().all(|&v| mask & (1 << v) != 0)))
            .map(|mask| (0..nv).filter(|&v| mask & (1 << v) != 0).collect())
            .collect();
        vanishing_patterns.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        CoxPresentation { ambient: amb.id(), variables, forbidden, vanishing_patterns, grading }
    }

    pub fn pattern_names(&self, pattern: &[usize]) -> Vec<String> {
        pattern.iter().map(|&v| self.variables[v].name.clone()).collect()
    }

    /// Representative point of the orbit: 0 on the pattern, 1 elsewhere.
    pub fn representative(&self, pattern: &[usize]) -> Vec<BigRational> {
        (0..self.variables.len())
            .map(|v| if pattern.contains(&v) { BigRational::zero() } else { BigRational::one() })
            .collect()
    }

    fn pattern_of(&self, point: &[BigRational]) -> Result<Vec<usize>> {
        if point.len() != self.variables.len() {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.variables.len(),
                point.len()
            )));
        }
        let zeros: Vec<usize> = (0..point.len()).filter(|&i| point[i].is_zero()).collect();
        if self.vanishing_patterns.contains(&zeros) {
            Ok(zeros)
        } else {
            Err(Error::InvalidPoint(format!("coordinates {:?} cannot vanish together", self.pattern_names(&zeros))))
        }
    }
}

/// Monomial basis of `H^0(A, D)` as exponent vectors over the Cox variables.
#[derive(Clone, Debug, Serialize)]
pub struct SectionSpace {
    #[serde(skip)]
    pub ambient: AmbientId,
    pub class: Vec<i64>,
    pub basis: Vec<Vec<u32>>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn index(&self) -> HashMap<&[u32], usize> {
        self.basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect()
    }
}

/// Enumerates monomials of multidegree `D`, lexicographically descending in
/// the exponent vector.
pub fn monomial_basis(cox: &CoxPresentation, d: &DivisorClass) -> SectionSpace {
    let r = d.coeffs().len();
    let weights: Vec<i64> = cox
        .variables
        .iter()
        .map(|v| v.degree.iter().zip(&cox.grading).map(|(a, b)| a * b).sum())
        .collect();
    let budget: i64 = d.coeffs().iter().zip(&cox.grading).map(|(a, b)| a * b).sum();
    let mut basis = Vec::new();
    if budget >= 0 {
        let mut exps = vec![0u32; cox.variables.len()];
        let mut deg = vec![0i64; r];
        enumerate(cox, &weights, d.coeffs(), 0, budget, &mut exps, &mut deg, &mut basis);
    }
    SectionSpace { ambient: d.ambient(), class: d.coeffs().to_vec(), basis }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    cox: &CoxPresentation,
    weights: &[i64],
    target: &[i64],
    var: usize,
    budget: i64,
    exps: &mut Vec<u32>,
    deg: &mut Vec<i64>,
    out: &mut Vec<Vec<u32>>,
) {
    let nv = weights.len();
    if var == nv {
        if budget == 0 && deg.as_slice() == target {
            out.push(exps.clone());
        }
        return;
    }
    let w = weights[var];
    let degree = &cox.variables[var].degree;
    let max = (budget / w) as u32;
    if var + 1 == nv {
        if budget % w != 0 {
            return;
        }
        exps[var] = max;
        let ok = deg
            .iter()
            .zip(degree)
            .zip(target)
            .all(|((d, g), t)| d + g * max as i64 == *t);
        if ok {
            out.push(exps.clone());
        }
        exps[var] = 0;
        return;
    }
    for k in (0..=max).rev() {
        exps[var] = k;
        for (d, g) in deg.iter_mut().zip(degree) {
            *d += g * k as i64;
        }
        enumerate(cox, weights, target, var + 1, budget - w * k as i64, exps, deg, out);
        for (d, g) in deg.iter_mut().zip(degree) {
            *d -= g * k as i64;
        }
    }
    exps[var] = 0;
}

fn monomial_value(m: &[u32], point: &[BigRational]) -> BigRational {
    m.iter()
        .zip(point)
        .filter(|(&k, _)| k > 0)
        .fold(BigRational::one(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
}

fn is_nonvanishing_on(m: &[u32], pattern: &[usize]) -> bool {
    pattern.iter().all(|&v| m[v] == 0)
}

/// Spanning set of the sections of `D` vanishing at `point`, as sparse
/// coordinate vectors in the monomial basis.
pub fn vanishing_subspace_sparse(
    cox: &CoxPresentation,
    space: &SectionSpace,
    point: &[BigRational],
) -> Result<Vec<Vec<(usize, BigRational)>>> {
    cox.pattern_of(point)?;
    let values: Vec<BigRational> = space.basis.iter().map(|m| monomial_value(m, point)).collect();
    let anchor = values.iter().position(|v| !v.is_zero());
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            out.push(vec![(i, BigRational::one())]);
        } else if let Some(a) = anchor {
            if i != a {
                // v_a * e_i - v_i * e_a vanishes at the point
                let mut row = vec![(i, values[a].clone()), (a, -v.clone())];
                row.sort_by_key(|p| p.0);
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// Dense form of [`vanishing_subspace_sparse`].
pub fn vanishing_subspace(
    amb: &AmbientThreefold,
    d: &DivisorClass,
    point: &[BigRational],
) -> Result<Vec<Vec<BigRational>>> {
    let cox = CoxPresentation::for_ambient(amb);
    let space = monomial_basis(&cox, d);
    let sparse = vanishing_subspace_sparse(&cox, &space, point)?;
    Ok(sparse
        .into_iter()
        .map(|row| {
            let mut v = vec![BigRational::zero(); space.dim()];
            for (i, q) in row {
                v[i] = q;
            }
            v
        })
        .collect())
}

pub fn is_globally_generated(amb: &AmbientThreefold, d: &DivisorClass) -> bool {
    let cox = CoxPresentation::for_ambient(amb);
    let space = monomial_basis(&cox, d);
    gg_on(&cox, &space)
}

fn gg_on(cox: &CoxPresentation, space: &SectionSpace) -> bool {
    cox.vanishing_patterns
        .iter()
        .all(|p| space.basis.iter().any(|m| is_nonvanishing_on(m, p)))
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRank {
    pub pattern: Vec<String>,
    pub required_rank: usize,
    pub achieved_rank: usize,
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<SparseRow>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SDReport {
    pub ambient: String,
    pub eclass: Vec<i64>,
    pub bundles: Vec<Vec<i64>>,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_precondition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_stratum: Option<Vec<String>>,
    pub per_stratum: Vec<StratumRank>,
}

struct Factor {
    l_space: SectionSpace,
    rest: SectionSpace,
}

/// Rows spanning the image of `sum_i H^0(L_i (x) I_p) (x) H^0(E - L_i)` in
/// `H^0(E)`, over the rationals.
fn image_rows(
    cox: &CoxPresentation,
    e_index: &HashMap<&[u32], usize>,
    factors: &[Factor],
    point: &[BigRational],
) -> Result<Vec<Vec<(usize, BigRational)>>> {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for f in factors {
        let vanishing = vanishing_subspace_sparse(cox, &f.l_space, point)?;
        for v in &vanishing {
            for n in &f.rest.basis {
                let mut row: Vec<(usize, BigRational)> = v
                    .iter()
                    .map(|(i, q)| {
                        let prod: Vec<u32> = f.l_space.basis[*i].iter().zip(n).map(|(a, b)| a + b).collect();
                        (e_index[prod.as_slice()], q.clone())
                    })
                    .collect();
                row.sort_by_key(|p| p.0);
                if seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn integer_rows(rows: &[Vec<(usize, BigRational)>]) -> Option<Vec<SparseRow>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(c, q)| {
                    if q.is_integer() {
                        i64::try_from(q.numer()).ok().map(|v| (*c, v))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

fn rational_row_rank(rows: &[Vec<(usize, BigRational)>]) -> usize {
    let ints = rows
        .iter()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
            r.iter().map(|(c, q)| (*c, q.numer() * (&lcm / q.denom()))).collect()
        })
        .collect();
    sparse_rank_big(ints)
}

fn factors_for(cox: &CoxPresentation, e: &DivisorClass, ls: &[DivisorClass]) -> Result<Vec<Factor>> {
    ls.iter()
        .map(|l| {
            Ok(Factor {
                l_space: monomial_basis(cox, l),
                rest: monomial_basis(cox, &e.try_sub(l)?),
            })
        })
        .collect()
}

/// `(required, achieved)` rank of the multiplication map at an arbitrary
/// point given by Cox coordinates.
pub fn rank_at_point(
    amb: &AmbientThreefold,
    e: &DivisorClass,
    ls: &[DivisorClass],
    point: &[BigRational],
) -> Result<(usize, usize)> {
    let cox = CoxPresentation::for_ambient(amb);
    let e_space = monomial_basis(&cox, e);
    let idx = e_space.index();
    let factors = factors_for(&cox, e, ls)?;
    let rows = image_rows(&cox, &idx, &factors, point)?;
    let required = vanishing_dim(&e_space, point);
    Ok((required, rational_row_rank(&rows)))
}

fn vanishing_dim(space: &SectionSpace, point: &[BigRational]) -> usize {
    let any_nonzero = space.basis.iter().any(|m| !monomial_value(m, point).is_zero());
    space.dim() - usize::from(any_nonzero)
}

/// Checks whether `ls` is a section-dominating collection for `e`.
///
/// A failed hypothesis (some `L` trivial or not globally generated, or some
/// `E - L` not globally generated) yields `verdict = false` with the reason
/// recorded; the ranks are still reported.
pub fn is_section_dominating(
    amb: &AmbientThreefold,
    e: &DivisorClass,
    ls: &[DivisorClass],
    with_matrices: bool,
) -> Result<SDReport> {
    if ls.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let cox = CoxPresentation::for_ambient(amb);
    let e_space = monomial_basis(&cox, e);
    let idx = e_space.index();
    let factors = factors_for(&cox, e, ls)?;

    let mut failed_precondition = None;
    for (l, f) in ls.iter().zip(&factors) {
        let reason = if l.is_zero() {
            Some(format!("L = {l} is trivial"))
        } else if f.l_space.dim() == 0 || !gg_on(&cox, &f.l_space) {
            Some(format!("L = {l} is not globally generated"))
        } else if f.rest.dim() == 0 || !gg_on(&cox, &f.rest) {
            Some(format!("E - L = {} is not globally generated", e.try_sub(l)?))
        } else {
            None
        };
        if reason.is_some() {
            failed_precondition = reason;
            break;
        }
    }

    let per_stratum: Vec<StratumRank> = cox
        .vanishing_patterns
        .par_iter()
        .map(|pattern| -> Result<StratumRank> {
            let point = cox.representative(pattern);
            let rows = image_rows(&cox, &idx, &factors, &point)?;
            let required = vanishing_dim(&e_space, &point);
            let (achieved, matrix) = match integer_rows(&rows) {
                Some(int_rows) => {
                    let r = sparse_rank(&int_rows);
                    (r, with_matrices.then_some(int_rows))
                }
                None => (rational_row_rank(&rows), None),
            };
            Ok(StratumRank {
                pattern: cox.pattern_names(pattern),
                required_rank: required,
                achieved_rank: achieved,
                rows: rows.len(),
                cols: e_space.dim(),
                matrix,
            })
        })
        .collect::<Result<_>>()?;

    let failing_stratum = per_stratum
        .iter()
        .find(|s| s.achieved_rank != s.required_rank)
        .map(|s| s.pattern.clone());
    let verdict = failed_precondition.is_none() && failing_stratum.is_none();
    Ok(SDReport {
        ambient: amb.id().to_string(),
        eclass: e.coeffs().to_vec(),
        bundles: ls.iter().map(|l| l.coeffs().to_vec()).collect(),
        verdict,
        failed_precondition,
        failing_stratum,
        per_stratum,
    })
}

/// Lower bound `-L.D.C` on the degree of a rank-one quotient of the
/// Lazarsfeld-Mukai bundle of `L` restricted to `C`.
pub fn lm_degree_bound(amb: &AmbientThreefold, l: &DivisorClass, d: &DivisorClass, c: &DivisorClass) -> Result<BigInt> {
    Ok(-amb.triple(l, d, c)?)
}
