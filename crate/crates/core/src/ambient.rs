//! The five ambient threefolds as exact lattice data.
//!
//! Each ambient carries its Picard basis, the symmetric trilinear
//! intersection form on that basis, its canonical class, the reference
//! ample class used to measure curve degrees, the coefficient inequalities
//! under which the Picard group of a very general surface is the
//! restriction of the ambient one, and the cone of curve classes the genus
//! bounds quantify over.
//!
//! `P111n` is modelled on the resolution of the cone point, with Picard
//! basis `(H, F)` where `H` is the pullback of `O(n)` and `E = H - nF` is
//! the exceptional divisor. A surface of class `mH` misses `E`, so on the
//! surface `H = nF`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AmbientKind {
    P1P1P1,
    P2xP1,
    FexP1,
    BlP3,
    P111n,
}

impl AmbientKind {
    pub const ALL: [AmbientKind; 5] = [
        AmbientKind::P1P1P1,
        AmbientKind::P2xP1,
        AmbientKind::FexP1,
        AmbientKind::BlP3,
        AmbientKind::P111n,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AmbientKind::P1P1P1 => "P1P1P1",
            AmbientKind::P2xP1 => "P2xP1",
            AmbientKind::FexP1 => "FexP1",
            AmbientKind::BlP3 => "BlP3",
            AmbientKind::P111n => "P111n",
        }
    }
}

impl fmt::Display for AmbientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AmbientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1p1p1" | "p1xp1xp1" => Ok(AmbientKind::P1P1P1),
            "p2p1" | "p2xp1" => Ok(AmbientKind::P2xP1),
            "fep1" | "fexp1" => Ok(AmbientKind::FexP1),
            "blp3" => Ok(AmbientKind::BlP3),
            "p111n" => Ok(AmbientKind::P111n),
            other => Err(Error::InvalidParam(format!("unknown ambient '{other}'"))),
        }
    }
}

/// Integer parameters of an ambient: `e` for `FexP1`, `n` for `P111n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

impl Params {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn e(e: i64) -> Self {
        Self { e: Some(e), n: None }
    }

    pub fn n(n: i64) -> Self {
        Self { e: None, n: Some(n) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientId {
    pub kind: AmbientKind,
    pub params: Params,
}

impl AmbientId {
    /// `e` for `FexP1`, `n` for `P111n`; 0 otherwise.
    pub fn param(&self) -> i64 {
        self.params.e.or(self.params.n).unwrap_or(0)
    }
}

impl fmt::Display for AmbientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.params.e, self.params.n) {
            (Some(e), _) => write!(f, "{}(e={e})", self.kind),
            (_, Some(n)) => write!(f, "{}(n={n})", self.kind),
            _ => write!(f, "{}", self.kind),
        }
    }
}

/// Integer combination of the Picard basis of one ambient.
///
/// Also used for curve classes on a surface `X` of the ambient, read as
/// restrictions of ambient divisor classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    ambient: AmbientId,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn ambient(&self) -> AmbientId {
        self.ambient
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_ambient(&self, other: &DivisorClass) -> Result<()> {
        if self.ambient != other.ambient || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::MismatchedAmbient {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &DivisorClass, op: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        self.same_ambient(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| op(a, b).ok_or_else(|| Error::InvalidParam("coefficient overflow".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ambient: self.ambient, coeffs })
    }

    pub fn try_add(&self, other: &DivisorClass) -> Result<Self> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn try_sub(&self, other: &DivisorClass) -> Result<Self> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(k).ok_or_else(|| Error::InvalidParam("coefficient overflow".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ambient: self.ambient, coeffs })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// `coeffs . x + constant >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearInequality {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl LinearInequality {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        Self { coeffs, constant }
    }

    /// `x_index >= bound`.
    pub fn at_least(rank: usize, index: usize, bound: i64) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[index] = 1;
        Self { coeffs, constant: -bound }
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum::<i128>()
            + self.constant as i128;
        lhs >= 0
    }
}

/// Exact lattice data for one ambient threefold.
///
/// Serializes to the JSON ambient document; `to_json` followed by
/// `from_json` is the identity, and re-serializing is byte-identical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientThreefold {
    pub kind: AmbientKind,
    pub params: Params,
    pub basis: Vec<String>,
    /// Dense symmetric `T[i][j][k]`, the triple product of basis classes.
    pub tensor: Vec<Vec<Vec<i64>>>,
    pub canonical: Vec<i64>,
    pub reference_ample: Vec<i64>,
    pub nl_predicate: Vec<LinearInequality>,
    pub curve_cone: Vec<LinearInequality>,
}

fn sym_tensor(rank: usize, entries: &[((usize, usize, usize), i64)]) -> Vec<Vec<Vec<i64>>> {
    let mut t = vec![vec![vec![0i64; rank]; rank]; rank];
    for &((i, j, k), v) in entries {
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            t[a][b][c] = v;
        }
    }
    t
}

fn nonneg_cone(rank: usize) -> Vec<LinearInequality> {
    (0..rank).map(|i| LinearInequality::at_least(rank, i, 0)).collect()
}

/// Builds one of the five ambients.
pub fn make_ambient(kind: AmbientKind, params: Params) -> Result<AmbientThreefold> {
    let labels = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let reject_extra = |ok_e: bool, ok_n: bool| -> Result<()> {
        if (params.e.is_some() && !ok_e) || (params.n.is_some() && !ok_n) {
            return Err(Error::InvalidParam(format!("{kind} takes no such parameter")));
        }
        Ok(())
    };

    let amb = match kind {
        AmbientKind::P1P1P1 => {
            reject_extra(false, false)?;
            AmbientThreefold {
                kind,
                params,
                basis: labels(&["H1", "H2", "H3"]),
                tensor: sym_tensor(3, &[((0, 1, 2), 1)]),
                canonical: vec![-2, -2, -2],
                reference_ample: vec![1, 1, 1],
                nl_predicate: (0..3).map(|i| LinearInequality::at_least(3, i, 2)).collect(),
                curve_cone: nonneg_cone(3),
            }
        }
        AmbientKind::P2xP1 => {
            reject_extra(false, false)?;
            AmbientThreefold {
                kind,
                params,
                basis: labels(&["H1", "H2"]),
                tensor: sym_tensor(2, &[((0, 0, 1), 1)]),
                canonical: vec![-3, -2],
                reference_ample: vec![1, 1],
                nl_predicate: vec![LinearInequality::at_least(2, 0, 3), LinearInequality::at_least(2, 1, 2)],
                curve_cone: nonneg_cone(2),
            }
        }
        AmbientKind::FexP1 => {
            reject_extra(true, false)?;
            let e = params
                .e
                .ok_or_else(|| Error::InvalidParam("FexP1 requires e".into()))?;
            if e <= 0 {
                return Err(Error::InvalidParam(format!("FexP1 requires e >= 1, got {e}")));
            }
            AmbientThreefold {
                kind,
                params,
                basis: labels(&["E", "F", "H"]),
                tensor: sym_tensor(3, &[((0, 0, 2), -e), ((0, 1, 2), 1)]),
                canonical: vec![-2, -(e + 2), -2],
                reference_ample: vec![1, e + 1, 1],
                nl_predicate: vec![
                    LinearInequality::at_least(3, 0, 2),
                    LinearInequality::at_least(3, 1, e + 2),
                    LinearInequality::at_least(3, 2, 2),
                ],
                curve_cone: nonneg_cone(3),
            }
        }
        AmbientKind::BlP3 => {
            reject_extra(false, false)?;
            AmbientThreefold {
                kind,
                params,
                basis: labels(&["H", "E"]),
                tensor: sym_tensor(2, &[((0, 0, 0), 1), ((1, 1, 1), 1)]),
                canonical: vec![-4, 2],
                reference_ample: vec![2, -1],
                // a >= 4 and b >= 2 for D = aH - bE, coefficients (a, -b)
                nl_predicate: vec![LinearInequality::new(vec![1, 0], -4), LinearInequality::new(vec![0, -1], -2)],
                // c >= d >= 0 for C = cH - dE
                curve_cone: vec![LinearInequality::new(vec![1, 1], 0), LinearInequality::new(vec![0, -1], 0)],
            }
        }
        AmbientKind::P111n => {
            reject_extra(false, true)?;
            let n = params
                .n
                .ok_or_else(|| Error::InvalidParam("P111n requires n".into()))?;
            if n <= 0 {
                return Err(Error::InvalidParam(format!("P111n requires n >= 1, got {n}")));
            }
            AmbientThreefold {
                kind,
                params,
                basis: labels(&["H", "F"]),
                tensor: sym_tensor(2, &[((0, 0, 0), n * n), ((0, 0, 1), n), ((0, 1, 1), 1)]),
                canonical: vec![-2, n - 3],
                reference_ample: vec![0, 1],
                nl_predicate: vec![],
                // curve classes on X are multiples of F
                curve_cone: vec![
                    LinearInequality::new(vec![1, 0], 0),
                    LinearInequality::new(vec![-1, 0], 0),
                    LinearInequality::new(vec![0, 1], 0),
                ],
            }
        }
    };
    Ok(amb)
}

impl AmbientThreefold {
    pub fn id(&self) -> AmbientId {
        AmbientId { kind: self.kind, params: self.params }
    }

    pub fn picard_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn class(&self, coeffs: &[i64]) -> Result<DivisorClass> {
        if coeffs.len() != self.picard_rank() {
            return Err(Error::ArityMismatch {
                ambient: self.id(),
                expected: self.picard_rank(),
                found: coeffs.len(),
            });
        }
        Ok(DivisorClass { ambient: self.id(), coeffs: coeffs.to_vec() })
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass { ambient: self.id(), coeffs: vec![0; self.picard_rank()] }
    }

    pub fn basis_class(&self, index: usize) -> DivisorClass {
        let mut coeffs = vec![0; self.picard_rank()];
        coeffs[index] = 1;
        DivisorClass { ambient: self.id(), coeffs }
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass { ambient: self.id(), coeffs: self.canonical.clone() }
    }

    pub fn reference_ample(&self) -> DivisorClass {
        DivisorClass { ambient: self.id(), coeffs: self.reference_ample.clone() }
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.ambient != self.id() || d.coeffs.len() != self.picard_rank() {
            return Err(Error::MismatchedAmbient { left: self.id(), right: d.ambient });
        }
        Ok(())
    }

    /// Evaluates the intersection form on coefficient vectors over any
    /// commutative ring containing the integers.
    pub fn trilinear<T>(&self, u: &[T], v: &[T], w: &[T]) -> T
    where
        T: Clone + Zero + std::ops::Mul<Output = T> + From<i64>,
    {
        let r = self.picard_rank();
        let mut acc = T::zero();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let t = self.tensor[i][j][k];
                    if t != 0 {
                        acc = acc + T::from(t) * u[i].clone() * v[j].clone() * w[k].clone();
                    }
                }
            }
        }
        acc
    }

    fn big(d: &DivisorClass) -> Vec<BigInt> {
        d.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn triple(&self, d1: &DivisorClass, d2: &DivisorClass, d3: &DivisorClass) -> Result<BigInt> {
        self.check(d1)?;
        self.check(d2)?;
        self.check(d3)?;
        Ok(self.trilinear(&Self::big(d1), &Self::big(d2), &Self::big(d3)))
    }

    /// `K_A + D`, the ambient class restricting to `K_X` for `X` of class `D`.
    pub fn adjoint_canonical(&self, d: &DivisorClass) -> Result<DivisorClass> {
        self.check(d)?;
        self.canonical().try_add(d)
    }

    /// Degree of the curve class `C` on `X` of class `D` with respect to
    /// `href` (the reference ample class when `None`).
    pub fn curve_degree(&self, d: &DivisorClass, c: &DivisorClass, href: Option<&DivisorClass>) -> Result<BigInt> {
        match href {
            Some(h) => self.triple(h, d, c),
            None => self.triple(&self.reference_ample(), d, c),
        }
    }

    /// Genus of the smooth complete intersection of surfaces of classes
    /// `d1` and `d2`.
    pub fn complete_intersection_genus(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<BigInt> {
        let k = self.adjoint_canonical(d1)?.try_add(d2)?;
        let two_g_minus_two = self.triple(&k, d1, d2)?;
        genus_from_euler(&two_g_minus_two)
    }

    pub fn satisfies_nl(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        Ok(self.nl_predicate.iter().all(|ineq| ineq.holds(&d.coeffs)))
    }

    pub fn in_curve_cone(&self, c: &DivisorClass) -> Result<bool> {
        self.check(c)?;
        Ok(self.curve_cone.iter().all(|ineq| ineq.holds(&c.coeffs)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let amb: AmbientThreefold = serde_json::from_str(text)?;
        amb.validate()?;
        Ok(amb)
    }

    /// Structural checks on an imported document.
    pub fn validate(&self) -> Result<()> {
        let r = self.basis.len();
        let bad = |msg: String| Err(Error::InvalidDocument(msg));
        let expected = match self.kind {
            AmbientKind::P1P1P1 | AmbientKind::FexP1 => 3,
            AmbientKind::P2xP1 | AmbientKind::BlP3 | AmbientKind::P111n => 2,
        };
        if r != expected {
            return bad(format!("{} has Picard rank {expected}, basis lists {r} classes", self.kind.name()));
        }
        if self.tensor.len() != r
            || self.tensor.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r))
        {
            return bad(format!("tensor must be {r}x{r}x{r}"));
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let t = self.tensor[i][j][k];
                    if [self.tensor[i][k][j], self.tensor[j][i][k], self.tensor[j][k][i], self.tensor[k][i][j], self.tensor[k][j][i]]
                        .iter()
                        .any(|&s| s != t)
                    {
                        return bad(format!("tensor not symmetric at ({i},{j},{k})"));
                    }
                }
            }
        }
        if self.canonical.len() != r || self.reference_ample.len() != r {
            return bad("canonical/reference_ample arity".into());
        }
        if self.nl_predicate.iter().chain(&self.curve_cone).any(|q| q.coeffs.len() != r) {
            return bad("inequality arity".into());
        }
        match self.kind {
            AmbientKind::FexP1 if self.params.e.is_none() => bad("FexP1 needs params.e".into()),
            AmbientKind::P111n if self.params.n.is_none() => bad("P111n needs params.n".into()),
            _ => Ok(()),
        }
    }
}

/// `g` from `2g - 2`, rejecting odd values.
pub fn genus_from_euler(two_g_minus_two: &BigInt) -> Result<BigInt> {
    let shifted = two_g_minus_two + 2;
    if num_integer::Integer::is_odd(&shifted) {
        return Err(Error::NonIntegralGenus(two_g_minus_two.to_string()));
    }
    Ok(shifted / 2)
}
