//! Independent computations used to validate the registry and the engine.
//!
//! Nothing here reads the frozen intersection tensors except
//! [`exhaustive_epsilon_check`], which audits the engine's own bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::ambient::{genus_from_euler, AmbientKind, AmbientThreefold, DivisorClass, Params};
use crate::cone::{extreme_rays, lattice_points};
use crate::error::{Error, Result};
use crate::hyperbolicity::certified_plan;
use crate::linalg::{solve_unique, SolveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    P1xP1,
    P2,
    Fe(i64),
    BlownP2,
}

/// A surface of Picard rank at most two with its intersection pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub canonical: Vec<i64>,
    pub pairing: Vec<Vec<i64>>,
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind) -> Self {
        let (canonical, pairing) = match kind {
            SurfaceKind::P1xP1 => (vec![-2, -2], vec![vec![0, 1], vec![1, 0]]),
            SurfaceKind::P2 => (vec![-3], vec![vec![1]]),
            // basis (E, F)
            SurfaceKind::Fe(e) => (vec![-2, -(e + 2)], vec![vec![-e, 1], vec![1, 0]]),
            // basis (L, Ex)
            SurfaceKind::BlownP2 => (vec![-3, 1], vec![vec![1, 0], vec![0, -1]]),
        };
        SurfaceModel { kind, canonical, pairing }
    }

    pub fn dot(&self, x: &[i64], y: &[i64]) -> BigInt {
        let mut acc = BigInt::from(0);
        for (i, row) in self.pairing.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                acc += BigInt::from(p) * x[i] * y[j];
            }
        }
        acc
    }
}

/// Genus of a smooth curve of class `c` on `s`, from `2g - 2 = C.(C + K)`.
pub fn surface_curve_genus(s: &SurfaceModel, c: &[i64]) -> Result<BigInt> {
    if c.len() != s.canonical.len() {
        return Err(Error::InvalidParam(format!("surface class needs {} coefficients", s.canonical.len())));
    }
    let ck: Vec<i64> = c.iter().zip(&s.canonical).map(|(a, k)| a + k).collect();
    genus_from_euler(&s.dot(c, &ck))
}

fn binom(n: i64, k: i64) -> BigInt {
    if n < k || k < 0 || n < 0 {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `h^0(A, D)` by closed-form counting, independent of the Cox enumeration.
pub fn h0_oracle(amb: &AmbientThreefold, d: &DivisorClass) -> BigInt {
    let a = d.coeffs();
    let zero = BigInt::from(0);
    match amb.kind {
        AmbientKind::P1P1P1 => {
            if a.iter().any(|&x| x < 0) {
                zero
            } else {
                a.iter().map(|&x| BigInt::from(x + 1)).product()
            }
        }
        AmbientKind::P2xP1 => {
            if a[0] < 0 || a[1] < 0 {
                zero
            } else {
                binom(a[0] + 2, 2) * (a[1] + 1)
            }
        }
        AmbientKind::FexP1 => {
            let e = amb.params.e.unwrap_or(0);
            if a[0] < 0 || a[2] < 0 {
                return zero;
            }
            let s: i64 = (0..=a[0]).map(|j| (a[1] - e * j + 1).max(0)).sum();
            BigInt::from(s) * (a[2] + 1)
        }
        AmbientKind::BlP3 => {
            let (p, q) = (a[0], a[1]);
            // polynomials of degree p vanishing to order max(0, -q) at a point
            let s0 = (-q).max(0);
            if p < s0 {
                zero
            } else {
                binom(p + 3, 3) - binom(s0 + 2, 3)
            }
        }
        AmbientKind::P111n => {
            let n = amb.params.n.unwrap_or(1);
            let (h, f) = (a[0], a[1]);
            (0..=h.max(-1))
                .filter(|i| f + n * i >= 0)
                .map(|i| binom(f + n * i + 2, 2))
                .sum()
        }
    }
}

type Tensor = Vec<Vec<Vec<i64>>>;

/// One linear condition `T(u, v, w) = rhs` on the unknown tensor.
#[derive(Clone, Debug)]
pub struct TensorEquation {
    pub u: Vec<i64>,
    pub v: Vec<i64>,
    pub w: Vec<i64>,
    pub rhs: i64,
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// Solves for a symmetric tensor from structural zeros and linear identities.
pub fn solve_tensor(rank: usize, structural_zero: impl Fn(&[usize; 3]) -> bool, eqs: &[TensorEquation]) -> Result<Tensor> {
    let mut unknowns: Vec<[usize; 3]> = Vec::new();
    for i in 0..rank {
        for j in i..rank {
            for k in j..rank {
                if !structural_zero(&[i, j, k]) {
                    unknowns.push([i, j, k]);
                }
            }
        }
    }
    let pos = |i: usize, j: usize, k: usize| {
        let mut s = [i, j, k];
        s.sort();
        unknowns.iter().position(|x| *x == s)
    };
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut a = Vec::new();
    let mut b = Vec::new();
    for eq in eqs {
        let mut row = vec![q(0); unknowns.len()];
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    let c = eq.u[i] * eq.v[j] * eq.w[k];
                    if c != 0 {
                        if let Some(p) = pos(i, j, k) {
                            row[p] += q(c);
                        }
                    }
                }
            }
        }
        a.push(row);
        b.push(q(eq.rhs));
    }
    if a.is_empty() && !unknowns.is_empty() {
        return Err(Error::UnderdeterminedSystem { free: unknowns.len() });
    }
    let sol = match solve_unique(&a, &b) {
        Ok(s) => s,
        Err(SolveError::Underdetermined { free }) => return Err(Error::UnderdeterminedSystem { free }),
        Err(SolveError::Inconsistent { row }) => {
            return Err(Error::InconsistentSystem(format!("identity {row} contradicts the others")))
        }
    };
    let mut t = vec![vec![vec![0i64; rank]; rank]; rank];
    for (idx, [i, j, k]) in unknowns.iter().enumerate() {
        let val = &sol[idx];
        if !val.is_integer() {
            return Err(Error::InconsistentSystem(format!("non-integral entry {val}")));
        }
        let v = val.to_integer().to_i64().ok_or_else(|| Error::InconsistentSystem("entry overflow".into()))?;
        for (x, y, z) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            t[*x][*y][*z] = v;
        }
    }
    Ok(t)
}

fn degree_equations(rank: usize, href: &[i64], printed: impl Fn(&[i64], &[i64]) -> i64) -> Vec<TensorEquation> {
    let mut out = Vec::new();
    for j in 0..rank {
        for k in 0..rank {
            let (dj, ck) = (unit(rank, j), unit(rank, k));
            out.push(TensorEquation { u: href.to_vec(), v: dj.clone(), w: ck.clone(), rhs: printed(&dj, &ck) });
        }
    }
    out
}

/// Structural zeros and printed identities for one ambient.
pub fn identity_system(kind: AmbientKind, params: Params) -> Result<(usize, Box<dyn Fn(&[usize; 3]) -> bool>, Vec<TensorEquation>)> {
    Ok(match kind {
        AmbientKind::P1P1P1 => {
            // a1c2 + a1c3 + a2c1 + a2c3 + a3c1 + a3c2
            let eqs = degree_equations(3, &[1, 1, 1], |a, c| {
                a[0] * c[1] + a[0] * c[2] + a[1] * c[0] + a[1] * c[2] + a[2] * c[0] + a[2] * c[1]
            });
            (3, Box::new(|t: &[usize; 3]| t[0] == t[1] || t[1] == t[2]), eqs)
        }
        AmbientKind::P2xP1 => {
            // ac + ad + bc
            let eqs = degree_equations(2, &[1, 1], |x, y| x[0] * y[0] + x[0] * y[1] + x[1] * y[0]);
            (
                2,
                Box::new(|t: &[usize; 3]| t.iter().filter(|&&i| i == 1).count() >= 2 || *t == [0, 0, 0]),
                eqs,
            )
        }
        AmbientKind::FexP1 => {
            let e = params.e.ok_or_else(|| Error::InvalidParam("FexP1 requires e".into()))?;
            // a1c2 + a2c1 + a2c3 + a3c2 + a1c3 + a3c1 - e a1c1
            let eqs = degree_equations(3, &[1, e + 1, 1], |a, c| {
                a[0] * c[1] + a[1] * c[0] + a[1] * c[2] + a[2] * c[1] + a[0] * c[2] + a[2] * c[0] - e * a[0] * c[0]
            });
            (3, Box::new(|t: &[usize; 3]| t.iter().filter(|&&i| i == 2).count() != 1), eqs)
        }
        AmbientKind::BlP3 => {
            // D = aH - bE, C = cH - dE: 2ac - bd
            let mut eqs = degree_equations(2, &[2, -1], |x, y| 2 * x[0] * y[0] - (-x[1]) * (-y[1]));
            // X meets E in a plane curve of degree b: 2g - 2 = b^2 - 3b
            for b in [4i64, 5, 6] {
                let d = [b + 3, -b];
                let e = [0, 1];
                let k = [-4 + d[0] + e[0], 2 + d[1] + e[1]];
                eqs.push(TensorEquation { u: k.to_vec(), v: d.to_vec(), w: e.to_vec(), rhs: b * b - 3 * b });
            }
            (2, Box::new(|t: &[usize; 3]| t[0] != t[2]), eqs)
        }
        AmbientKind::P111n => {
            let n = params.n.ok_or_else(|| Error::InvalidParam("P111n requires n".into()))?;
            let mut eqs = vec![TensorEquation { u: vec![1, 0], v: vec![1, 0], w: vec![1, 0], rhs: n * n }];
            // K_X = (n(m-1) - 3)F, tested against Y = H and Y = F on X = mH
            for m in 1..=4i64 {
                let d = vec![m, 0];
                let lhs_minus_rhs = vec![m - 2, (n - 3) - (n * (m - 1) - 3)];
                for y in [vec![1, 0], vec![0, 1]] {
                    eqs.push(TensorEquation { u: lhs_minus_rhs.clone(), v: d.clone(), w: y, rhs: 0 });
                }
            }
            (2, Box::new(|t: &[usize; 3]| *t == [1, 1, 1]), eqs)
        }
    })
}

/// Intersection tensor solved from the printed degree and adjunction
/// identities.
pub fn derive_tensor(kind: AmbientKind, params: Params) -> Result<Tensor> {
    let (rank, zero, eqs) = identity_system(kind, params)?;
    solve_tensor(rank, zero, &eqs)
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonCheck {
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vec<i64>>,
}

/// Checks `bound(C) >= epsilon * deg(C)` for every cone class of degree at
/// most `cap`, where `bound` is the certified plan's guarantee.
pub fn exhaustive_epsilon_check(amb: &AmbientThreefold, d: &DivisorClass, epsilon: &BigRational, cap: i64) -> Result<EpsilonCheck> {
    let ev = certified_plan(amb, d, None)?
        .ok_or_else(|| Error::NotHyperbolicInput(format!("{} {} has no certified plan", amb.id(), d)))?;
    let rank = amb.picard_rank();
    let rays = extreme_rays(&amb.curve_cone, rank);
    let href = amb.reference_ample();
    let weight: Vec<i64> = (0..rank)
        .map(|i| amb.triple(&href, d, &amb.basis_class(i)).map(|v| v.to_i64().unwrap_or(i64::MAX)))
        .collect::<Result<_>>()?;
    let points = lattice_points(&rays, rank, &weight, cap)?;
    // every bound is linear in C, so evaluate it through its values on the basis
    let to_i128 = |v: BigInt| v.to_i128().ok_or_else(|| Error::Internal("bound overflow".into()));
    let forms: Vec<Vec<i128>> = ev
        .plan
        .forms
        .iter()
        .map(|f| (0..rank).map(|k| to_i128(f.genus_bound(amb, d, &amb.basis_class(k))?)).collect())
        .collect::<Result<_>>()?;
    let specials = crate::hyperbolicity::special_values(amb, d, &ev.plan)?;
    let (en, ed) = (to_i128(epsilon.numer().clone())?, to_i128(epsilon.denom().clone())?);
    let mut checked = 0;
    for p in points {
        let deg: i128 = p.iter().zip(&weight).map(|(&x, &w)| x as i128 * w as i128).sum();
        let mut bound = forms
            .iter()
            .map(|f| f.iter().zip(&p).map(|(&a, &x)| a * x as i128).sum::<i128>())
            .min()
            .unwrap_or(0);
        for (_, r, euler) in &specials {
            if r.coeffs() == p.as_slice() {
                bound = bound.min(to_i128(euler.clone())?);
            }
        }
        checked += 1;
        if bound * ed < en * deg {
            return Ok(EpsilonCheck { passed: false, checked, violation: Some(p) });
        }
    }
    // special curves outside the cone (the residual curve on the blowup)
    for (_, r, euler) in crate::hyperbolicity::special_values(amb, d, &ev.plan)? {
        if !amb.in_curve_cone(&r)? {
            let deg = amb.curve_degree(d, &r, None)?;
            checked += 1;
            if !deg.is_positive() || BigRational::from_integer(euler) < epsilon * BigRational::from_integer(deg) {
                return Ok(EpsilonCheck { passed: false, checked, violation: Some(r.coeffs().to_vec()) });
            }
        }
    }
    Ok(EpsilonCheck { passed: true, checked, violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::make_ambient;

    #[test]
    fn ruled_quadric_genus() {
        let s = SurfaceModel::new(SurfaceKind::P1xP1);
        for m in 0..8 {
            for n in 0..8 {
                let g = surface_curve_genus(&s, &[m, n]).unwrap();
                assert_eq!(g, BigInt::from((m - 1) * (n - 1)));
                assert_eq!(g, surface_curve_genus(&s, &[n, m]).unwrap());
            }
        }
        assert_eq!(surface_curve_genus(&s, &[1, 1]).unwrap(), BigInt::from(0));
        assert_eq!(surface_curve_genus(&s, &[1, 0]).unwrap(), BigInt::from(0));
    }

    #[test]
    fn plane_and_blown_up_plane() {
        let p2 = SurfaceModel::new(SurfaceKind::P2);
        for d in 1..12 {
            assert_eq!(surface_curve_genus(&p2, &[d]).unwrap(), BigInt::from((d - 1) * (d - 2) / 2));
        }
        // quartics with a node at the blown-up point have genus 2
        let bl = SurfaceModel::new(SurfaceKind::BlownP2);
        assert_eq!(surface_curve_genus(&bl, &[4, -2]).unwrap(), BigInt::from(2));
    }

    #[test]
    fn hirzebruch_section_and_fiber_are_rational() {
        for e in 1..5 {
            let s = SurfaceModel::new(SurfaceKind::Fe(e));
            assert_eq!(surface_curve_genus(&s, &[1, 0]).unwrap(), BigInt::from(0));
            assert_eq!(surface_curve_genus(&s, &[0, 1]).unwrap(), BigInt::from(0));
        }
        // F_1 with 2E + 4F is the blown-up plane with 4L - 2Ex
        let f1 = SurfaceModel::new(SurfaceKind::Fe(1));
        assert_eq!(surface_curve_genus(&f1, &[2, 4]).unwrap(), BigInt::from(2));
    }

    #[test]
    fn odd_euler_characteristic_rejected() {
        let p2 = SurfaceModel::new(SurfaceKind::P2);
        assert!(surface_curve_genus(&p2, &[1, 1]).is_err());
    }

    #[test]
    fn h0_closed_forms() {
        let p = make_ambient(AmbientKind::P1P1P1, Params::none()).unwrap();
        assert_eq!(h0_oracle(&p, &p.class(&[1, 2, 3]).unwrap()), BigInt::from(24));
        let b = make_ambient(AmbientKind::BlP3, Params::none()).unwrap();
        assert_eq!(h0_oracle(&b, &b.class(&[6, -4]).unwrap()), BigInt::from(84 - 20));
        let w = make_ambient(AmbientKind::P111n, Params::n(2)).unwrap();
        // 1 + 6 + 15
        assert_eq!(h0_oracle(&w, &w.class(&[2, 0]).unwrap()), BigInt::from(22));
    }

    #[test]
    fn missing_identities_leave_entries_free() {
        let (rank, zero, eqs) = identity_system(AmbientKind::FexP1, Params::e(2)).unwrap();
        let err = solve_tensor(rank, zero, &eqs[..1]).unwrap_err();
        assert!(matches!(err, Error::UnderdeterminedSystem { free: 2 }));
    }

    #[test]
    fn contradictory_identities_are_reported() {
        let (rank, zero, mut eqs) = identity_system(AmbientKind::BlP3, Params::none()).unwrap();
        eqs[0].rhs += 1;
        assert!(matches!(solve_tensor(rank, zero, &eqs), Err(Error::InconsistentSystem(_))));
    }
}
