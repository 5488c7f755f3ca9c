//! Built-in consistency checks of the engine against the independent oracles.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::ambient::{make_ambient, AmbientKind, AmbientThreefold, Params};
use crate::cox::{is_section_dominating, monomial_basis, CoxPresentation};
use crate::error::Result;
use crate::hyperbolicity::{best_epsilon, certified_plan, special_curve_euler, SpecialFamily};
use crate::identities::{case_identities, formula_identities, IdentityOutcome};
use crate::oracles::{derive_tensor, exhaustive_epsilon_check, h0_oracle, SurfaceKind, SurfaceModel};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTestReport {
    pub passed: bool,
    pub degree_cap: i64,
    pub groups: Vec<GroupReport>,
}

fn outcome(name: impl Into<String>, passed: bool, detail: Option<String>) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail }
}

fn group(name: &str, checks: Vec<CheckOutcome>) -> GroupReport {
    GroupReport { group: name.into(), passed: checks.iter().all(|c| c.passed), checks }
}

fn registry() -> Result<Vec<AmbientThreefold>> {
    let mut out = vec![
        make_ambient(AmbientKind::P1P1P1, Params::none())?,
        make_ambient(AmbientKind::P2xP1, Params::none())?,
        make_ambient(AmbientKind::BlP3, Params::none())?,
    ];
    for p in 1..=5 {
        out.push(make_ambient(AmbientKind::FexP1, Params::e(p))?);
        out.push(make_ambient(AmbientKind::P111n, Params::n(p))?);
    }
    Ok(out)
}

/// Hyperbolic sample classes covering every plan shape.
fn samples() -> Result<Vec<(AmbientThreefold, Vec<i64>)>> {
    let mut out = Vec::new();
    let p = make_ambient(AmbientKind::P1P1P1, Params::none())?;
    for c in [[3, 3, 3], [2, 4, 4], [4, 2, 5], [3, 5, 4]] {
        out.push((p.clone(), c.to_vec()));
    }
    let q = make_ambient(AmbientKind::P2xP1, Params::none())?;
    for c in [[4, 3], [5, 2], [6, 4]] {
        out.push((q.clone(), c.to_vec()));
    }
    for e in 1..=3 {
        let f = make_ambient(AmbientKind::FexP1, Params::e(e))?;
        let delta = i64::from(e == 1);
        for (a1, a2p, a3) in [(3, 2, 3), (4, 3, 2), (2, 2 + delta, 4)] {
            out.push((f.clone(), vec![a1, a2p + e * a1, a3]));
        }
    }
    let b = make_ambient(AmbientKind::BlP3, Params::none())?;
    for c in [[5, 0], [6, -4], [7, -4], [9, -6]] {
        out.push((b.clone(), c.to_vec()));
    }
    for (n, m) in [(1, 5), (2, 4), (4, 3), (5, 2)] {
        out.push((make_ambient(AmbientKind::P111n, Params::n(n))?, vec![m, 0]));
    }
    Ok(out)
}

fn identity_group() -> Result<GroupReport> {
    let checks = formula_identities()?
        .iter()
        .chain(&case_identities()?)
        .map(|c| {
            let o = IdentityOutcome::from(c);
            outcome(format!("{}: {}", o.group, o.name), o.passed, o.detail)
        })
        .collect();
    Ok(group("identities", checks))
}

fn tensor_group() -> Result<GroupReport> {
    let checks = registry()?
        .iter()
        .map(|a| match derive_tensor(a.kind, a.params) {
            Ok(t) if t == a.tensor => outcome(a.id().to_string(), true, None),
            Ok(_) => outcome(a.id().to_string(), false, Some("derived tensor differs from the registry".into())),
            Err(e) => outcome(a.id().to_string(), false, Some(e.to_string())),
        })
        .collect();
    Ok(group("tensors", checks))
}

fn h0_group() -> Result<GroupReport> {
    let mut checks = Vec::new();
    for a in registry()? {
        let cox = CoxPresentation::for_ambient(&a);
        let rank = a.picard_rank();
        let mut mismatches = Vec::new();
        let mut count = 0;
        let range: Vec<i64> = (0..=4).collect();
        let mut grid: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..rank {
            grid = grid.into_iter().flat_map(|p| range.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
        }
        for c in grid {
            let c = match a.kind {
                AmbientKind::BlP3 => vec![c[0] + c[1], -c[1]],
                AmbientKind::FexP1 => vec![c[0], c[1] + a.params.e.unwrap_or(0) * c[0], c[2]],
                AmbientKind::P111n if c[1] != 0 => continue,
                _ => c,
            };
            let d = a.class(&c)?;
            count += 1;
            let n = monomial_basis(&cox, &d).dim();
            if h0_oracle(&a, &d) != BigInt::from(n) {
                mismatches.push(format!("{c:?}"));
            }
        }
        let detail = if mismatches.is_empty() {
            Some(format!("{count} classes"))
        } else {
            Some(format!("mismatch at {}", mismatches.join(", ")))
        };
        checks.push(outcome(a.id().to_string(), mismatches.is_empty(), detail));
    }
    Ok(group("h0", checks))
}

fn sd_group(samples: &[(AmbientThreefold, Vec<i64>)]) -> Result<GroupReport> {
    let checks: Vec<Option<CheckOutcome>> = samples
        .par_iter()
        .map(|(a, c)| -> Result<Option<CheckOutcome>> {
            let d = a.class(c)?;
            let Some(ev) = certified_plan(a, &d, None)? else {
                return Ok(Some(outcome(format!("{} {d}", a.id()), false, Some("no certified plan".into()))));
            };
            if ev.plan.sd_collection.is_empty() {
                return Ok(None);
            }
            let rep = is_section_dominating(a, &d, &ev.plan.sd_collection, false)?;
            let names: Vec<String> = ev.plan.sd_collection.iter().map(|l| l.to_string()).collect();
            let detail = rep
                .failed_precondition
                .or(rep.failing_stratum.map(|s| format!("rank drops on stratum {}", s.join(","))));
            Ok(Some(outcome(format!("{} {d} with {{{}}}", a.id(), names.join(", ")), rep.verdict, detail)))
        })
        .collect::<Result<_>>()?;
    Ok(group("section_dominating", checks.into_iter().flatten().collect()))
}

fn epsilon_group(samples: &[(AmbientThreefold, Vec<i64>)], cap: i64) -> Result<GroupReport> {
    let checks = samples
        .par_iter()
        .map(|(a, c)| -> Result<CheckOutcome> {
            let d = a.class(c)?;
            let name = format!("{} {d}", a.id());
            let (eps, _) = match best_epsilon(a, &d, None) {
                Ok(r) => r,
                Err(e) => return Ok(outcome(name, false, Some(e.to_string()))),
            };
            let check = exhaustive_epsilon_check(a, &d, &eps, cap)?;
            let detail = match &check.violation {
                Some(v) => format!("epsilon {eps} fails at {v:?}"),
                None => format!("epsilon {eps}, {} classes", check.checked),
            };
            Ok(outcome(name, check.passed, Some(detail)))
        })
        .collect::<Result<_>>()?;
    Ok(group("epsilon", checks))
}

fn special_group() -> Result<GroupReport> {
    let mut checks = Vec::new();
    let mut compare = |name: String, engine: BigInt, surface: &SurfaceModel, c: &[i64]| {
        let expected = surface.dot(c, c) + surface.dot(c, &surface.canonical);
        let passed = engine == expected;
        let detail = (!passed).then(|| format!("engine {engine}, surface {expected}"));
        checks.push(outcome(name, passed, detail));
    };
    let p = make_ambient(AmbientKind::P1P1P1, Params::none())?;
    let p1p1 = SurfaceModel::new(SurfaceKind::P1xP1);
    for (a2, a3) in [(2, 2), (4, 5), (8, 3)] {
        let d = p.class(&[2, a2, a3])?;
        let v = special_curve_euler(&p, &d, SpecialFamily::FactorRamification { factor: 0 })?;
        compare(format!("P1P1P1 ramification {d}"), v, &p1p1, &[2 * a2, 2 * a3]);
    }
    let q = make_ambient(AmbientKind::P2xP1, Params::none())?;
    let plane = SurfaceModel::new(SurfaceKind::P2);
    for a in [3, 5, 8] {
        let d = q.class(&[a, 2])?;
        compare(format!("P2xP1 ramification {d}"), special_curve_euler(&q, &d, SpecialFamily::PlaneRamification)?, &plane, &[2 * a]);
    }
    for e in 1..=3 {
        let f = make_ambient(AmbientKind::FexP1, Params::e(e))?;
        let fe = SurfaceModel::new(SurfaceKind::Fe(e));
        for (a1, a2p) in [(4, 3), (6, 5)] {
            let a2 = a2p + e * a1;
            let d = f.class(&[a1, a2, 2])?;
            let v = special_curve_euler(&f, &d, SpecialFamily::HirzebruchRamification)?;
            compare(format!("{} ramification {d}", f.id()), v, &fe, &[2 * a1, 2 * a2]);
            let d = f.class(&[2, a2, 4])?;
            let v = special_curve_euler(&f, &d, SpecialFamily::RulingRamification)?;
            compare(format!("{} ruling ramification {d}", f.id()), v, &p1p1, &[2 * (a2 - e), 8]);
        }
    }
    let b = make_ambient(AmbientKind::BlP3, Params::none())?;
    for bb in [4, 5, 6] {
        let d = b.class(&[bb + 2, -bb])?;
        let v = special_curve_euler(&b, &d, SpecialFamily::BranchCurve)?;
        compare(format!("BlP3 branch curve {d}"), v, &plane, &[2 * (bb + 1)]);
        let v = special_curve_euler(&b, &d, SpecialFamily::ExceptionalPlaneCurve)?;
        compare(format!("BlP3 exceptional plane curve {d}"), v, &plane, &[bb]);
    }
    for n in [3, 5] {
        let w = make_ambient(AmbientKind::P111n, Params::n(n))?;
        let d = w.class(&[2, 0])?;
        let v = special_curve_euler(&w, &d, SpecialFamily::WeightedRamification)?;
        compare(format!("{} ramification {d}", w.id()), v, &plane, &[2 * n]);
    }
    Ok(group("special_curves", checks))
}

/// Runs every group; `cap` bounds the curve degree in the epsilon audit.
pub fn run(cap: i64) -> Result<SelfTestReport> {
    let samples = samples()?;
    let groups = vec![
        identity_group()?,
        tensor_group()?,
        h0_group()?,
        special_group()?,
        sd_group(&samples)?,
        epsilon_group(&samples, cap)?,
    ];
    Ok(SelfTestReport { passed: groups.iter().all(|g| g.passed), degree_cap: cap, groups })
}
