//! Genus lower bounds, special curves, witnesses and the classification.
//!
//! A curve `C` on a very general `X` of class `D` meeting the homogeneous
//! locus satisfies `2g - 2 >= (K_A + D - L).D.C + r(C)` for some bundle `L`
//! of a section-dominating collection whose Lazarsfeld-Mukai bundle maps
//! with non-torsion image to the normal sheaf; `r` is zero for the plain
//! bound and a nonnegative linear correction for the scroll-refined one.
//! A [`Plan`] lists the bundles that can play that role in one case of the
//! argument, the special curves left over when all of them have torsion
//! image, and the boundary curves outside the homogeneous locus.
//!
//! Every bound is linear in `C` and the degree `Href.D.C` is linear and
//! positive on the curve cone, so the infimum of the ratio over the cone is
//! attained on an extreme ray. The certified `epsilon` of a plan is the
//! minimum over its bundles and rays, and over its special and boundary
//! curves.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::ambient::{genus_from_euler, AmbientKind, AmbientThreefold, DivisorClass, Params};
use crate::cone::extreme_rays;
use crate::error::{Error, Result};

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Exact rational with a JSON form `{"num": .., "den": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Rational {
    #[serde(serialize_with = "ser_bigint")]
    pub num: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub den: BigInt,
}

impl From<&BigRational> for Rational {
    fn from(q: &BigRational) -> Self {
        Rational { num: q.numer().clone(), den: q.denom().clone() }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == BigInt::from(1) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    CorMain,
    ScrollRefined,
    SpecialCurveExclusion,
    BoundaryCurve,
}

/// Curves whose genus is computed directly instead of bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpecialFamily {
    /// Ramification of the double cover forgetting factor `i` of `P1P1P1`.
    FactorRamification { factor: usize },
    /// Ramification of the double cover `X -> P2` when `b = 2`.
    PlaneRamification,
    /// Ramification of `X -> F_e` when `a3 = 2`.
    HirzebruchRamification,
    /// Ramification of `X -> P1 x P1` when `a1 = 2`.
    RulingRamification,
    /// `X` meets the pullback of `E` from `F_e`.
    ExceptionalSection,
    /// `X` meets the exceptional divisor of the blowup of `P3`.
    ExceptionalPlaneCurve,
    /// Residual curve `bH - (b+1)E` for `a = b + 2`.
    ResidualCurve,
    /// Branch curve `(b+1)(H - E)` for `a = b + 2`.
    BranchCurve,
    /// Ramification of the double cover of the plane when `m = 2`.
    WeightedRamification,
}

impl SpecialFamily {
    pub fn name(&self) -> String {
        match self {
            SpecialFamily::FactorRamification { factor } => format!("FactorRamification{}", factor + 1),
            other => format!("{other:?}"),
        }
    }
}

/// Class of the special curve, as an ambient class restricted to `X`.
pub fn special_curve_class(amb: &AmbientThreefold, d: &DivisorClass, family: SpecialFamily) -> Result<DivisorClass> {
    let a = d.coeffs();
    let e = amb.params.e.unwrap_or(0);
    let n = amb.params.n.unwrap_or(0);
    let na = |why: &str| Err(Error::FamilyNotApplicable(format!("{} on {} {}: {why}", family.name(), amb.id(), d)));
    let coeffs: Vec<i64> = match (amb.kind, family) {
        (AmbientKind::P1P1P1, SpecialFamily::FactorRamification { factor }) if factor < 3 => {
            if a[factor] != 2 {
                return na("needs coefficient 2");
            }
            let mut r = a.to_vec();
            r[factor] = 0;
            r
        }
        (AmbientKind::P2xP1, SpecialFamily::PlaneRamification) => {
            if a[1] != 2 {
                return na("needs b = 2");
            }
            vec![a[0], 0]
        }
        (AmbientKind::FexP1, SpecialFamily::HirzebruchRamification) => {
            if a[2] != 2 {
                return na("needs a3 = 2");
            }
            vec![a[0], a[1], 0]
        }
        (AmbientKind::FexP1, SpecialFamily::RulingRamification) => {
            if a[0] != 2 {
                return na("needs a1 = 2");
            }
            vec![0, a[1] - e, a[2]]
        }
        (AmbientKind::FexP1, SpecialFamily::ExceptionalSection) => vec![1, 0, 0],
        (AmbientKind::BlP3, SpecialFamily::ExceptionalPlaneCurve) => vec![0, 1],
        (AmbientKind::BlP3, SpecialFamily::ResidualCurve) | (AmbientKind::BlP3, SpecialFamily::BranchCurve) => {
            let (aa, b) = (a[0], -a[1]);
            if aa != b + 2 {
                return na("needs a = b + 2");
            }
            if family == SpecialFamily::ResidualCurve {
                vec![b, -(b + 1)]
            } else {
                vec![b + 1, -(b + 1)]
            }
        }
        (AmbientKind::P111n, SpecialFamily::WeightedRamification) => {
            if a != [2, 0] {
                return na("needs m = 2");
            }
            vec![0, n]
        }
        _ => return na("wrong ambient"),
    };
    amb.class(&coeffs)
}

/// `2g - 2` of the special curve by adjunction on `X`.
pub fn special_curve_euler(amb: &AmbientThreefold, d: &DivisorClass, family: SpecialFamily) -> Result<BigInt> {
    let r = special_curve_class(amb, d, family)?;
    let k = amb.adjoint_canonical(d)?.try_add(&r)?;
    amb.triple(&k, d, &r)
}

pub fn special_curve_genus(amb: &AmbientThreefold, d: &DivisorClass, family: SpecialFamily) -> Result<BigInt> {
    genus_from_euler(&special_curve_euler(amb, d, family)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    pub bound_kind: BoundKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_bundle: Option<DivisorClass>,
    /// Curve class on which the bound is evaluated: the extreme ray where
    /// the bundle's ratio is smallest, or the special curve.
    pub curve: DivisorClass,
    #[serde(serialize_with = "ser_bigint")]
    pub normal_degree_bound: BigInt,
    /// Lower bound for `2g - 2`.
    #[serde(serialize_with = "ser_bigint")]
    pub genus_bound: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub degree: BigInt,
    pub excluded_families: Vec<String>,
}

/// `-max_i L_i.D.C` and the matching lower bound for `2g - 2`.
pub fn cor_main_bound(
    amb: &AmbientThreefold,
    d: &DivisorClass,
    c: &DivisorClass,
    ls: &[DivisorClass],
) -> Result<BoundCertificate> {
    if ls.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut best: Option<(BigInt, &DivisorClass)> = None;
    for l in ls {
        let v = amb.triple(l, d, c)?;
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, l));
        }
    }
    let (max, l) = best.expect("nonempty");
    let normal = -max;
    let genus_bound = amb.triple(&amb.adjoint_canonical(d)?, d, c)? + &normal;
    Ok(BoundCertificate {
        bound_kind: BoundKind::CorMain,
        line_bundle: Some(l.clone()),
        curve: c.clone(),
        normal_degree_bound: normal,
        genus_bound,
        degree: amb.curve_degree(d, c, None)?,
        excluded_families: Vec::new(),
    })
}

/// `d + (a-4)(bc+ad) + (b-2)ac`, the bound from the scroll swept by the
/// quotient when `M_{H1}` maps onto the normal sheaf and `a = 4`.
pub fn scroll_refined_bound_p2p1(a: i64, b: i64, c: i64, d: i64) -> BigInt {
    let (a, b, c, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
    &d + (&a - 4) * (&b * &c + &a * &d) + (&b - 2) * &a * &c
}

/// One bundle of a plan with its optional linear correction.
#[derive(Clone, Debug, Serialize)]
pub struct BoundForm {
    pub bundle: DivisorClass,
    pub kind: BoundKind,
    /// Added to the bound as `correction . C`.
    pub correction: Vec<i64>,
}

impl BoundForm {
    fn plain(bundle: DivisorClass) -> Self {
        let r = bundle.coeffs().len();
        BoundForm { bundle, kind: BoundKind::CorMain, correction: vec![0; r] }
    }

    fn scroll(bundle: DivisorClass, correction: Vec<i64>) -> Self {
        BoundForm { bundle, kind: BoundKind::ScrollRefined, correction }
    }

    /// Certified lower bound for `2g - 2` on a curve of class `c`.
    pub fn genus_bound(&self, amb: &AmbientThreefold, d: &DivisorClass, c: &DivisorClass) -> Result<BigInt> {
        let u = amb.adjoint_canonical(d)?.try_sub(&self.bundle)?;
        Ok(amb.triple(&u, d, c)? + self.correction_at(c))
    }

    fn correction_at(&self, c: &DivisorClass) -> BigInt {
        self.correction
            .iter()
            .zip(c.coeffs())
            .map(|(&a, &b)| BigInt::from(a) * b)
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Plan {
    pub name: String,
    pub forms: Vec<BoundForm>,
    pub exclusions: Vec<SpecialFamily>,
    pub boundary: Vec<SpecialFamily>,
    /// Collection whose section-dominating property the plan relies on.
    pub sd_collection: Vec<DivisorClass>,
}

/// `BlP3` gates its NL-dependent plans itself; the `b = 0` plans do not
/// need the condition.
fn needs_nl(kind: AmbientKind) -> bool {
    !matches!(kind, AmbientKind::P111n | AmbientKind::BlP3)
}

/// The case analyses applicable to `d`, before any positivity check.
pub fn plans(amb: &AmbientThreefold, d: &DivisorClass) -> Result<Vec<Plan>> {
    let a = d.coeffs().to_vec();
    if needs_nl(amb.kind) && !amb.satisfies_nl(d)? {
        return Ok(Vec::new());
    }
    let b = |i| amb.basis_class(i);
    let cls = |v: &[i64]| amb.class(v);
    let mut out = Vec::new();
    match amb.kind {
        AmbientKind::P1P1P1 => {
            let all: Vec<DivisorClass> = (0..3).map(b).collect();
            out.push(Plan {
                name: "H1,H2,H3".into(),
                forms: all.iter().cloned().map(BoundForm::plain).collect(),
                exclusions: vec![],
                boundary: vec![],
                sd_collection: all.clone(),
            });
            for i in 0..3 {
                if a[i] == 2 {
                    let others: Vec<DivisorClass> = (0..3).filter(|&j| j != i).map(b).collect();
                    out.push(Plan {
                        name: format!("ramification over factors other than {}", i + 1),
                        forms: others.into_iter().map(BoundForm::plain).collect(),
                        exclusions: vec![SpecialFamily::FactorRamification { factor: i }],
                        boundary: vec![],
                        sd_collection: all.clone(),
                    });
                }
            }
        }
        AmbientKind::P2xP1 => {
            let all = vec![b(0), b(1)];
            out.push(Plan {
                name: "H1,H2".into(),
                forms: all.iter().cloned().map(BoundForm::plain).collect(),
                exclusions: vec![],
                boundary: vec![],
                sd_collection: all.clone(),
            });
            if a[0] == 4 {
                out.push(Plan {
                    name: "scroll H1,H2".into(),
                    forms: vec![BoundForm::scroll(b(0), vec![0, 1]), BoundForm::plain(b(1))],
                    exclusions: vec![],
                    boundary: vec![],
                    sd_collection: all.clone(),
                });
            }
            if a[1] == 2 {
                out.push(Plan {
                    name: "H1 with plane ramification".into(),
                    forms: vec![BoundForm::plain(b(0))],
                    exclusions: vec![SpecialFamily::PlaneRamification],
                    boundary: vec![],
                    sd_collection: all,
                });
            }
        }
        AmbientKind::FexP1 => {
            let e = amb.params.e.unwrap_or(0);
            let epf = cls(&[1, e, 0])?;
            let all = vec![epf.clone(), b(1), b(2)];
            let boundary = vec![SpecialFamily::ExceptionalSection];
            out.push(Plan {
                name: "E+eF,F,H".into(),
                forms: all.iter().cloned().map(BoundForm::plain).collect(),
                exclusions: vec![],
                boundary: boundary.clone(),
                sd_collection: all.clone(),
            });
            if a[2] == 2 {
                out.push(Plan {
                    name: "E+eF,F with ramification over F_e".into(),
                    forms: vec![BoundForm::plain(epf.clone()), BoundForm::plain(b(1))],
                    exclusions: vec![SpecialFamily::HirzebruchRamification],
                    boundary: boundary.clone(),
                    sd_collection: all.clone(),
                });
            }
            if a[0] == 2 {
                out.push(Plan {
                    name: "F,H with ramification over P1xP1".into(),
                    forms: vec![BoundForm::plain(b(1)), BoundForm::plain(b(2))],
                    exclusions: vec![SpecialFamily::RulingRamification],
                    boundary,
                    sd_collection: all,
                });
            }
        }
        AmbientKind::BlP3 => {
            let (aa, bb) = (a[0], -a[1]);
            let h = b(0);
            let hme = cls(&[1, -1])?;
            if bb == 0 {
                out.push(Plan {
                    name: "H".into(),
                    forms: vec![BoundForm::plain(h.clone())],
                    exclusions: vec![],
                    boundary: vec![],
                    sd_collection: vec![h.clone()],
                });
                if aa > 0 {
                    // deg_H(C) / a, which is the H-coefficient of C
                    out.push(Plan {
                        name: "scroll H".into(),
                        forms: vec![BoundForm::scroll(h.clone(), vec![1, 0])],
                        exclusions: vec![],
                        boundary: vec![],
                        sd_collection: vec![h.clone()],
                    });
                }
            }
            if amb.satisfies_nl(d)? {
                let all = vec![h.clone(), hme.clone()];
                out.push(Plan {
                    name: "H,H-E".into(),
                    forms: all.iter().cloned().map(BoundForm::plain).collect(),
                    exclusions: vec![],
                    boundary: vec![SpecialFamily::ExceptionalPlaneCurve],
                    sd_collection: all.clone(),
                });
                if aa == bb + 2 {
                    out.push(Plan {
                        name: "H-E with residual and branch curves".into(),
                        forms: vec![BoundForm::plain(hme)],
                        exclusions: vec![SpecialFamily::ResidualCurve, SpecialFamily::BranchCurve],
                        boundary: vec![SpecialFamily::ExceptionalPlaneCurve],
                        sd_collection: all,
                    });
                }
            }
        }
        AmbientKind::P111n => {
            let m = a[0];
            let n = amb.params.n.unwrap_or(1);
            if a[1] != 0 || m < 2 {
                return Ok(out);
            }
            let h = b(0);
            out.push(Plan {
                name: "H".into(),
                forms: vec![BoundForm::plain(h.clone())],
                exclusions: vec![],
                boundary: vec![],
                sd_collection: vec![h.clone()],
            });
            if n == 1 {
                // deg_H(C) / m, which is the F-coefficient of C
                out.push(Plan {
                    name: "scroll H".into(),
                    forms: vec![BoundForm::scroll(h.clone(), vec![0, 1])],
                    exclusions: vec![],
                    boundary: vec![],
                    sd_collection: vec![h],
                });
            }
            if m == 2 {
                out.push(Plan {
                    name: "F with ramification".into(),
                    forms: vec![BoundForm::plain(b(1))],
                    exclusions: vec![SpecialFamily::WeightedRamification],
                    boundary: vec![],
                    sd_collection: vec![],
                });
            }
        }
    }
    Ok(out)
}

/// Where a plan's epsilon is attained.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Attainment {
    Ray { ray: DivisorClass, bundle_index: usize },
    Special { family: String, curve: DivisorClass },
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanEvaluation {
    pub plan: Plan,
    #[serde(skip)]
    pub epsilon: BigRational,
    pub attained: Attainment,
    pub certificates: Vec<BoundCertificate>,
}

/// Curve classes on `X` where a special or boundary curve's genus is known
/// exactly, with `2g - 2`.
pub fn special_values(amb: &AmbientThreefold, d: &DivisorClass, plan: &Plan) -> Result<Vec<(SpecialFamily, DivisorClass, BigInt)>> {
    plan.exclusions
        .iter()
        .chain(&plan.boundary)
        .map(|&f| Ok((f, special_curve_class(amb, d, f)?, special_curve_euler(amb, d, f)?)))
        .collect()
}

pub fn evaluate_plan(
    amb: &AmbientThreefold,
    d: &DivisorClass,
    plan: &Plan,
    href: Option<&DivisorClass>,
) -> Result<Option<PlanEvaluation>> {
    let rays: Vec<DivisorClass> = extreme_rays(&amb.curve_cone, amb.picard_rank())
        .iter()
        .map(|r| amb.class(r))
        .collect::<Result<_>>()?;
    let k = amb.adjoint_canonical(d)?;
    let exclusion_names: Vec<String> = plan.exclusions.iter().map(SpecialFamily::name).collect();

    let mut best: Option<(BigRational, Attainment)> = None;
    let mut consider = |q: BigRational, at: Attainment| {
        if best.as_ref().map_or(true, |(b, _)| q < *b) {
            best = Some((q, at));
        }
    };
    let mut certificates = Vec::new();

    for (idx, form) in plan.forms.iter().enumerate() {
        let mut worst: Option<(BigRational, BoundCertificate)> = None;
        for ray in &rays {
            let den = amb.curve_degree(d, ray, href)?;
            if !den.is_positive() {
                return Ok(None);
            }
            let num = form.genus_bound(amb, d, ray)?;
            let q = BigRational::new(num.clone(), den.clone());
            consider(q.clone(), Attainment::Ray { ray: ray.clone(), bundle_index: idx });
            if worst.as_ref().map_or(true, |(w, _)| q < *w) {
                let cert = BoundCertificate {
                    bound_kind: form.kind,
                    line_bundle: Some(form.bundle.clone()),
                    curve: ray.clone(),
                    normal_degree_bound: &num - amb.triple(&k, d, ray)?,
                    genus_bound: num,
                    degree: den,
                    excluded_families: exclusion_names.clone(),
                };
                worst = Some((q, cert));
            }
        }
        if let Some((_, c)) = worst {
            certificates.push(c);
        }
    }

    for (fam, r, euler) in special_values(amb, d, plan)? {
        let den = amb.curve_degree(d, &r, href)?;
        if !den.is_positive() {
            return Ok(None);
        }
        let q = BigRational::new(euler.clone(), den.clone());
        consider(q, Attainment::Special { family: fam.name(), curve: r.clone() });
        let kind = if plan.exclusions.contains(&fam) {
            BoundKind::SpecialCurveExclusion
        } else {
            BoundKind::BoundaryCurve
        };
        certificates.push(BoundCertificate {
            bound_kind: kind,
            line_bundle: None,
            normal_degree_bound: &euler - amb.triple(&k, d, &r)?,
            genus_bound: euler,
            degree: den,
            curve: r,
            excluded_families: vec![fam.name()],
        });
    }

    Ok(best.map(|(epsilon, attained)| PlanEvaluation { plan: plan.clone(), epsilon, attained, certificates }))
}

/// The applicable plan with the largest positive epsilon.
pub fn certified_plan(amb: &AmbientThreefold, d: &DivisorClass, href: Option<&DivisorClass>) -> Result<Option<PlanEvaluation>> {
    let mut best: Option<PlanEvaluation> = None;
    for plan in plans(amb, d)? {
        if let Some(ev) = evaluate_plan(amb, d, &plan, href)? {
            if ev.epsilon.is_positive() && best.as_ref().map_or(true, |b| ev.epsilon > b.epsilon) {
                best = Some(ev);
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    BirationalToRational,
    EllipticFiberFamily,
    DegeneratingGenus2Family,
    BitangentPreimage,
    ConeRuling,
    ExceptionalPlaneSection,
    SingularQuarticFamily,
    RationalCurveFamily,
    BoundaryCurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFamily {
    pub kind: WitnessKind,
    pub description: String,
    pub genus_attained: i64,
    /// Genus of a general member when the witness is a degeneration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic_genus: Option<i64>,
}

fn witness(kind: WitnessKind, genus: i64, generic: Option<i64>, description: impl Into<String>) -> Option<WitnessFamily> {
    Some(WitnessFamily { kind, description: description.into(), genus_attained: genus, generic_genus: generic })
}

/// Genus of the preimage of a line under a double cover of the plane
/// branched along a curve of degree `2k`, with `tangencies` simple
/// tangency points of the line to the branch curve.
pub fn double_cover_line_genus(k: i64, tangencies: i64) -> i64 {
    k - 1 - tangencies
}

fn invalid_reason(amb: &AmbientThreefold, d: &DivisorClass) -> Option<String> {
    let a = d.coeffs();
    match amb.kind {
        AmbientKind::P1P1P1 => a.iter().any(|&x| x <= 0).then(|| "every coefficient must be positive".into()),
        AmbientKind::P2xP1 => {
            if a[0] <= 0 {
                Some("a must be positive".into())
            } else if a[1] < 0 {
                Some("b must be nonnegative".into())
            } else {
                None
            }
        }
        AmbientKind::FexP1 => {
            let e = amb.params.e.unwrap_or(0);
            let a2p = a[1] - e * a[0];
            if a[0] <= 0 || a[2] <= 0 {
                Some("a1 and a3 must be positive".into())
            } else if a2p < 0 {
                Some(format!("a2 - e*a1 = {a2p} is negative; the class contains the pullback of E"))
            } else {
                None
            }
        }
        AmbientKind::BlP3 => {
            let (aa, b) = (a[0], -a[1]);
            if (aa, b) == (0, -1) {
                None
            } else if b < 0 {
                Some("b must be nonnegative".into())
            } else if aa < b {
                Some("a < b: the class contains E in its base locus".into())
            } else if aa <= 0 {
                Some("a must be positive".into())
            } else {
                None
            }
        }
        AmbientKind::P111n => {
            if a[1] != 0 {
                Some("class must be a multiple of H".into())
            } else if a[0] <= 0 {
                Some("m must be positive".into())
            } else {
                None
            }
        }
    }
}

/// A family of rational or elliptic curves forcing non-hyperbolicity.
pub fn not_hyperbolic_witness(amb: &AmbientThreefold, d: &DivisorClass) -> Option<WitnessFamily> {
    use WitnessKind::*;
    let a = d.coeffs();
    match amb.kind {
        AmbientKind::P1P1P1 => {
            let mut s = a.to_vec();
            s.sort();
            match (s[0], s[1]) {
                (1, _) => witness(BirationalToRational, 0, None, "a coefficient equals 1: X is birational to P1 x P1"),
                (2, 2) => witness(EllipticFiberFamily, 1, None, "fibers over the third factor are (2,2) curves of genus 1"),
                (2, 3) => witness(
                    DegeneratingGenus2Family,
                    1,
                    Some(2),
                    "a pencil of (2,3) curves of genus 2 has singular members of geometric genus at most 1",
                ),
                _ => None,
            }
        }
        AmbientKind::P2xP1 => {
            let (aa, b) = (a[0], a[1]);
            if b == 0 {
                witness(RationalCurveFamily, 0, None, "b = 0: X is a plane curve times P1, ruled by lines")
            } else if b == 1 {
                witness(BirationalToRational, 0, None, "b = 1: X is birational to P2")
            } else if aa <= 2 {
                witness(RationalCurveFamily, 0, None, format!("fibers over P1 are plane curves of degree {aa}"))
            } else if aa == 3 {
                witness(EllipticFiberFamily, 1, None, "fibers over P1 are plane cubics")
            } else if (aa, b) == (4, 2) {
                witness(
                    BitangentPreimage,
                    double_cover_line_genus(4, 2),
                    Some(double_cover_line_genus(4, 0)),
                    "double cover of P2 branched along an octic: bitangent lines pull back to elliptic curves",
                )
            } else {
                None
            }
        }
        AmbientKind::FexP1 => {
            let e = amb.params.e.unwrap_or(0);
            let (a1, a3) = (a[0], a[2]);
            let a2p = a[1] - e * a1;
            if a3 == 1 {
                witness(BirationalToRational, 0, None, "a3 = 1: X is birational to F_e")
            } else if a1 == 1 {
                witness(RationalCurveFamily, 0, None, "a1 = 1: X meets pullbacks of F in (1, a3) curves, which are rational")
            } else if a2p <= 1 {
                witness(BoundaryCurve, 0, None, format!("X meets the pullback of E in a ({a2p}, {a3}) curve, which is rational"))
            } else if a3 == 2 && a1 == 2 {
                witness(EllipticFiberFamily, 1, None, "X meets pullbacks of F in (2,2) curves of genus 1")
            } else if a3 == 2 && a2p == 2 {
                witness(BoundaryCurve, 1, None, "X meets the pullback of E in a (2,2) curve of genus 1")
            } else if (a1, a3) == (2, 3) || (a1, a3) == (3, 2) {
                witness(
                    DegeneratingGenus2Family,
                    1,
                    Some(2),
                    "pullbacks of F cut a pencil of genus 2 curves with singular members of geometric genus at most 1",
                )
            } else if e == 1 && a1 == 2 && a2p == 2 {
                witness(
                    SingularQuarticFamily,
                    1,
                    Some(2),
                    "fibers over P1 are 2E+4F curves on F_1: plane quartics singular at the blown-up point",
                )
            } else {
                None
            }
        }
        AmbientKind::BlP3 => {
            let (aa, b) = (a[0], -a[1]);
            if (aa, b) == (0, -1) {
                witness(RationalCurveFamily, 0, None, "X is the exceptional divisor, a plane")
            } else if (1..=3).contains(&b) {
                witness(
                    ExceptionalPlaneSection,
                    (b - 1) * (b - 2) / 2,
                    None,
                    format!("X meets E in a plane curve of degree {b}"),
                )
            } else if aa == b {
                witness(ConeRuling, 0, None, "X is a cone with vertex at the blown-up point, ruled by lines")
            } else if aa == b + 1 {
                witness(BirationalToRational, 0, None, "projection from the point makes X birational to P2")
            } else if b == 0 && aa <= 3 {
                witness(RationalCurveFamily, 0, None, format!("surfaces of degree {aa} in P3 contain rational curves"))
            } else if b == 0 && aa == 4 {
                witness(RationalCurveFamily, 0, None, "quartic K3 surfaces contain rational curves")
            } else {
                None
            }
        }
        AmbientKind::P111n => {
            let m = a[0];
            let n = amb.params.n.unwrap_or(1);
            if m <= 1 {
                witness(RationalCurveFamily, 0, None, "m = 1: X is the Veronese plane")
            } else if m == 2 && n <= 2 {
                witness(RationalCurveFamily, 0, None, "del Pezzo double plane: X contains rational curves")
            } else if m == 2 && (n == 3 || n == 4) {
                witness(
                    BitangentPreimage,
                    double_cover_line_genus(n, 2),
                    Some(double_cover_line_genus(n, 0)),
                    format!("double cover of P2 branched along a curve of degree {}: bitangent lines", 2 * n),
                )
            } else if n == 1 && m == 3 {
                witness(RationalCurveFamily, 0, None, "cubic surfaces contain lines")
            } else if n == 1 && m == 4 {
                witness(RationalCurveFamily, 0, None, "quartic K3 surfaces contain rational curves")
            } else {
                None
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Hyperbolic,
    NotHyperbolic,
    Open,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub ambient: AmbientKind,
    pub params: Params,
    pub class: Vec<i64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<String>,
    pub certificates: Vec<BoundCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFamily>,
    pub reason: String,
}

impl Verdict {
    fn bare(amb: &AmbientThreefold, d: &DivisorClass, status: Status, reason: String) -> Self {
        Verdict {
            ambient: amb.kind,
            params: amb.params,
            class: d.coeffs().to_vec(),
            status,
            epsilon: None,
            epsilon_kind: None,
            plan: None,
            certificates: Vec::new(),
            witness: None,
            reason,
        }
    }
}

pub fn classify(amb: &AmbientThreefold, d: &DivisorClass) -> Result<Verdict> {
    classify_with(amb, d, None)
}

/// Classification with epsilon measured against `href` instead of the
/// ambient's reference ample class.
pub fn classify_with(amb: &AmbientThreefold, d: &DivisorClass, href: Option<&DivisorClass>) -> Result<Verdict> {
    if d.ambient() != amb.id() {
        return Err(Error::MismatchedAmbient { left: amb.id(), right: d.ambient() });
    }
    if let Some(reason) = invalid_reason(amb, d) {
        return Ok(Verdict::bare(amb, d, Status::Invalid, reason));
    }
    let wit = not_hyperbolic_witness(amb, d);
    let cert = certified_plan(amb, d, href)?;
    match (wit, cert) {
        (Some(w), Some(c)) => Err(Error::Internal(format!(
            "{} {}: witness {:?} contradicts certified epsilon {} from plan '{}'",
            amb.id(),
            d,
            w.kind,
            c.epsilon,
            c.plan.name
        ))),
        (Some(w), None) => {
            let mut v = Verdict::bare(amb, d, Status::NotHyperbolic, w.description.clone());
            v.witness = Some(w);
            Ok(v)
        }
        (None, Some(c)) => {
            let mut v = Verdict::bare(amb, d, Status::Hyperbolic, format!("certified by plan '{}'", c.plan.name));
            v.epsilon = Some(Rational::from(&c.epsilon));
            v.epsilon_kind = Some("certified");
            v.plan = Some(c.plan.name.clone());
            v.certificates = c.certificates;
            Ok(v)
        }
        (None, None) => Ok(Verdict::bare(
            amb,
            d,
            Status::Open,
            "no bound certifies a positive epsilon and no rational or elliptic family is known".into(),
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonResult {
    pub epsilon: Rational,
    pub plan: String,
    pub attained: Attainment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle_index: Option<usize>,
}

/// Certified epsilon for a class classified as hyperbolic.
pub fn best_epsilon(amb: &AmbientThreefold, d: &DivisorClass, href: Option<&DivisorClass>) -> Result<(BigRational, EpsilonResult)> {
    let v = classify_with(amb, d, href)?;
    if v.status != Status::Hyperbolic {
        return Err(Error::NotHyperbolicInput(format!("{} {} is {}: {}", amb.id(), d, v.status, v.reason)));
    }
    let ev = certified_plan(amb, d, href)?.ok_or_else(|| Error::Internal("certified plan vanished".into()))?;
    let bundle_index = match &ev.attained {
        Attainment::Ray { bundle_index, .. } => Some(*bundle_index),
        Attainment::Special { .. } => None,
    };
    Ok((
        ev.epsilon.clone(),
        EpsilonResult { epsilon: Rational::from(&ev.epsilon), plan: ev.plan.name, attained: ev.attained, bundle_index },
    ))
}

/// Classifies every class in the box, in lexicographic order.
pub fn survey(amb: &AmbientThreefold, bounds: &[RangeInclusive<i64>]) -> Result<Vec<Verdict>> {
    if bounds.len() != amb.picard_rank() {
        return Err(Error::ArityMismatch { ambient: amb.id(), expected: amb.picard_rank(), found: bounds.len() });
    }
    let mut classes: Vec<Vec<i64>> = vec![Vec::new()];
    for r in bounds {
        classes = classes
            .into_iter()
            .flat_map(|prefix| {
                r.clone().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    if bounds.iter().any(|r| r.is_empty()) {
        return Ok(Vec::new());
    }
    classes
        .par_iter()
        .map(|c| classify(amb, &amb.class(c)?))
        .collect()
}

/// Rational lower bound for `2g - 2` that the certified plan guarantees on
/// curves of class `c`, taking special and boundary curves of that class
/// into account.
pub fn certified_genus_bound(amb: &AmbientThreefold, d: &DivisorClass, ev: &PlanEvaluation, c: &DivisorClass) -> Result<BigInt> {
    let mut bound: Option<BigInt> = None;
    for f in &ev.plan.forms {
        let v = f.genus_bound(amb, d, c)?;
        bound = Some(bound.map_or(v.clone(), |b| b.min(v)));
    }
    let mut bound = bound.unwrap_or_else(BigInt::zero);
    for (_, r, euler) in special_values(amb, d, &ev.plan)? {
        if &r == c {
            bound = bound.min(euler);
        }
    }
    Ok(bound)
}
