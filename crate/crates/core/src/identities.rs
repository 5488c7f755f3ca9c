//! Printed formulas checked against symbolic expansions of the registry.
//!
//! Each check expands an engine quantity over free integer coefficients and
//! compares it, coefficient by coefficient, with the formula as printed.
//! Parameters `e` and `n` are instantiated over `1..=5`.

use serde::Serialize;

use crate::ambient::{make_ambient, AmbientKind, AmbientThreefold, Params};
use crate::error::Result;
use crate::symbolic::Poly;

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub group: &'static str,
    pub name: String,
    pub engine: Vec<Poly>,
    pub printed: Vec<Poly>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.engine == self.printed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityOutcome {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<&IdentityCheck> for IdentityOutcome {
    fn from(c: &IdentityCheck) -> Self {
        let passed = c.passed();
        let detail = (!passed).then(|| {
            let show = |v: &[Poly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
            format!("engine [{}] vs printed [{}]", show(&c.engine), show(&c.printed))
        });
        IdentityOutcome { group: c.group, name: c.name.clone(), passed, detail }
    }
}

fn consts(v: &[i64]) -> Vec<Poly> {
    v.iter().map(|&x| Poly::constant(x)).collect()
}

fn lift(v: &[i64]) -> Vec<Poly> {
    consts(v)
}

fn add(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

fn sub(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

/// `(K_A + D - L).D.C` with symbolic `D` and `C`.
fn form(amb: &AmbientThreefold, d: &[Poly], c: &[Poly], l: &[i64]) -> Poly {
    let u = sub(&add(&lift(&amb.canonical), d), &lift(l));
    amb.trilinear(&u, d, c)
}

fn check(group: &'static str, name: String, engine: Vec<Poly>, printed: Vec<Poly>) -> IdentityCheck {
    IdentityCheck { group, name, engine, printed }
}

fn p(x: &Poly) -> Poly {
    x.clone()
}

/// All canonical-class, adjunction and degree identities.
pub fn formula_identities() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let v = Poly::vars(8);

    // P1P1P1: D = (a1,a2,a3) vars 0..3, C = (c1,c2,c3) vars 3..6
    let a = make_ambient(AmbientKind::P1P1P1, Params::none())?;
    out.push(check("canonical", "P1P1P1".into(), consts(&a.canonical), consts(&[-2, -2, -2])));
    {
        let (a1, a2, a3, c1, c2, c3) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]), p(&v[4]), p(&v[5]));
        let d = vec![a1.clone(), a2.clone(), a3.clone()];
        let c = vec![c1.clone(), c2.clone(), c3.clone()];
        let printed = a1.clone() * c2.clone()
            + a1.clone() * c3.clone()
            + a2.clone() * c1.clone()
            + a2.clone() * c3.clone()
            + a3.clone() * c1.clone()
            + a3.clone() * c2.clone();
        out.push(check("degree", "P1P1P1 deg_H".into(), vec![a.trilinear(&lift(&a.reference_ample), &d, &c)], vec![printed]));
    }

    // P2xP1: D = (a,b), C = (c,d)
    let a = make_ambient(AmbientKind::P2xP1, Params::none())?;
    out.push(check("canonical", "P2xP1".into(), consts(&a.canonical), consts(&[-3, -2])));
    {
        let (aa, bb, cc, dd) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]));
        let d = vec![aa.clone(), bb.clone()];
        let c = vec![cc.clone(), dd.clone()];
        let printed = (aa.clone() + bb.clone()) * cc.clone() + aa.clone() * dd.clone();
        out.push(check("degree", "P2xP1 deg_H".into(), vec![a.trilinear(&lift(&a.reference_ample), &d, &c)], vec![printed]));
        out.push(check("adjunction", "P2xP1 K_X".into(), add(&lift(&a.canonical), &d), vec![aa - 3, bb - 2]));
    }

    // FexP1: D = (a1,a2,a3), C = (c1,c2,c3)
    for e in 1..=5 {
        let a = make_ambient(AmbientKind::FexP1, Params::e(e))?;
        out.push(check("canonical", format!("FexP1 e={e}"), consts(&a.canonical), consts(&[-2, -(e + 2), -2])));
        let (a1, a2, a3, c1, c2, c3) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]), p(&v[4]), p(&v[5]));
        let d = vec![a1.clone(), a2.clone(), a3.clone()];
        let c = vec![c1.clone(), c2.clone(), c3.clone()];
        let printed = a1.clone() * c2.clone()
            + a2.clone() * c1.clone()
            + a2.clone() * c3.clone()
            + a3.clone() * c2.clone()
            + a1.clone() * c3.clone()
            + a3.clone() * c1.clone()
            - a1.clone() * c1.clone() * e;
        out.push(check(
            "degree",
            format!("FexP1 e={e} deg_L"),
            vec![a.trilinear(&lift(&a.reference_ample), &d, &c)],
            vec![printed],
        ));
        out.push(check(
            "adjunction",
            format!("FexP1 e={e} K_X"),
            add(&lift(&a.canonical), &d),
            vec![a1 - 2, a2 - (e + 2), a3 - 2],
        ));
    }

    // BlP3: D = aH - bE, C = cH - dE
    let a = make_ambient(AmbientKind::BlP3, Params::none())?;
    out.push(check("canonical", "BlP3".into(), consts(&a.canonical), consts(&[-4, 2])));
    {
        let (aa, bb, cc, dd) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]));
        let d = vec![aa.clone(), -bb.clone()];
        let c = vec![cc.clone(), -dd.clone()];
        let printed = aa * cc * 2 - bb * dd;
        out.push(check("degree", "BlP3 deg_{2H-E}".into(), vec![a.trilinear(&lift(&a.reference_ample), &d, &c)], vec![printed]));
    }

    // P111n: D = mH, C = cF
    for n in 1..=5 {
        let a = make_ambient(AmbientKind::P111n, Params::n(n))?;
        out.push(check("canonical", format!("P111n n={n}"), consts(&a.canonical), consts(&[-2, -(3 - n)])));
        let (m, cc) = (p(&v[0]), p(&v[1]));
        let d = vec![m.clone(), Poly::constant(0)];
        let c = vec![Poly::constant(0), cc];
        // K_A + D contracted to X through H = nF
        let k = add(&lift(&a.canonical), &d);
        let contracted = k[0].clone() * n + k[1].clone();
        out.push(check(
            "adjunction",
            format!("P111n n={n} K_X"),
            vec![contracted],
            vec![(m.clone() - 1) * n - 3],
        ));
        // H.C = nF.C on X
        let h_c = a.trilinear(&consts(&[1, 0]), &d, &c);
        let f_c = a.trilinear(&consts(&[0, 1]), &d, &c);
        out.push(check("degree", format!("P111n n={n} H = nF"), vec![h_c], vec![f_c * n]));
    }
    Ok(out)
}

/// The displayed case inequalities of the genus-bound arguments.
pub fn case_identities() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let v = Poly::vars(8);

    let a = make_ambient(AmbientKind::P1P1P1, Params::none())?;
    {
        let (a1, a2, a3, c1, c2, c3) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]), p(&v[4]), p(&v[5]));
        let d = vec![a1.clone(), a2.clone(), a3.clone()];
        let c = vec![c1.clone(), c2.clone(), c3.clone()];
        let printed = (a1.clone() - 3) * (a2.clone() * c3.clone() + a3.clone() * c2.clone())
            + (a2.clone() - 2) * (a1.clone() * c3.clone() + a3.clone() * c1.clone())
            + (a3.clone() - 2) * (a1.clone() * c2.clone() + a2.clone() * c1.clone());
        out.push(check("case", "P1P1P1 via H1".into(), vec![form(&a, &d, &c, &[1, 0, 0])], vec![printed]));
    }

    let a = make_ambient(AmbientKind::P2xP1, Params::none())?;
    {
        let (aa, bb, cc, dd) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]));
        let d = vec![aa.clone(), bb.clone()];
        let c = vec![cc.clone(), dd.clone()];
        let bc_ad = bb.clone() * cc.clone() + aa.clone() * dd.clone();
        let case1 = (aa.clone() - 4) * bc_ad.clone() + (bb.clone() - 2) * aa.clone() * cc.clone();
        out.push(check("case", "P2xP1 case 1 via H1".into(), vec![form(&a, &d, &c, &[1, 0])], vec![case1.clone()]));
        out.push(check(
            "case",
            "P2xP1 case 2 scroll via H1".into(),
            vec![form(&a, &d, &c, &[1, 0]) + dd.clone()],
            vec![dd.clone() + case1],
        ));
        let case3 = (aa.clone() - 3) * bc_ad + (bb.clone() - 3) * aa.clone() * cc.clone();
        out.push(check("case", "P2xP1 case 3 via H2".into(), vec![form(&a, &d, &c, &[0, 1])], vec![case3]));
    }

    for e in 1..=5 {
        let a = make_ambient(AmbientKind::FexP1, Params::e(e))?;
        let (a1, a2, a3, c1, c2, c3) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]), p(&v[4]), p(&v[5]));
        let d = vec![a1.clone(), a2.clone(), a3.clone()];
        let c = vec![c1.clone(), c2.clone(), c3.clone()];
        let t13 = a1.clone() * c3.clone() + a3.clone() * c1.clone();
        let t23 = a2.clone() * c3.clone() + a3.clone() * c2.clone();
        let t12 = a1.clone() * c2.clone() + a2.clone() * c1.clone() - a1.clone() * c1.clone() * e;
        let a2p = a2.clone() - a1.clone() * e;
        let case1 = (a2p.clone() + (e - 2)) * t13.clone() + (a1.clone() - 3) * t23.clone() + (a3.clone() - 2) * t12.clone();
        let case2 = (a2p.clone() + (e - 3)) * t13.clone() + (a1.clone() - 2) * t23.clone() + (a3.clone() - 2) * t12.clone();
        let case3 = (a2p + (e - 2)) * t13 + (a1.clone() - 2) * t23 + (a3.clone() - 3) * t12;
        out.push(check("case", format!("FexP1 e={e} case 1 via E+eF"), vec![form(&a, &d, &c, &[1, e, 0])], vec![case1]));
        out.push(check("case", format!("FexP1 e={e} case 2 via F"), vec![form(&a, &d, &c, &[0, 1, 0])], vec![case2]));
        out.push(check("case", format!("FexP1 e={e} case 3 via H"), vec![form(&a, &d, &c, &[0, 0, 1])], vec![case3]));
    }

    let a = make_ambient(AmbientKind::BlP3, Params::none())?;
    {
        let (aa, bb, cc, dd) = (p(&v[0]), p(&v[1]), p(&v[2]), p(&v[3]));
        let d = vec![aa.clone(), -bb.clone()];
        let c = vec![cc.clone(), -dd.clone()];
        let case1 = (aa.clone() - 5) * aa.clone() * cc.clone() - (bb.clone() - 2) * bb.clone() * dd.clone();
        let case2 = (aa.clone() - 5) * aa.clone() * cc.clone() - (bb.clone() - 3) * bb.clone() * dd.clone();
        out.push(check("case", "BlP3 case 1 via H".into(), vec![form(&a, &d, &c, &[1, 0])], vec![case1]));
        out.push(check("case", "BlP3 case 2 via H-E".into(), vec![form(&a, &d, &c, &[1, -1])], vec![case2]));
    }

    for n in 1..=5 {
        let a = make_ambient(AmbientKind::P111n, Params::n(n))?;
        let (m, cc) = (p(&v[0]), p(&v[1]));
        let d = vec![m.clone(), Poly::constant(0)];
        let c = vec![Poly::constant(0), cc];
        let f_c = a.trilinear(&consts(&[0, 1]), &d, &c);
        out.push(check(
            "case",
            format!("P111n n={n} via H"),
            vec![form(&a, &d, &c, &[1, 0])],
            vec![((m.clone() - 2) * n - 3) * f_c.clone()],
        ));
        out.push(check(
            "case",
            format!("P111n n={n} via F"),
            vec![form(&a, &d, &c, &[0, 1])],
            vec![((m - 1) * n - 4) * f_c],
        ));
    }
    Ok(out)
}
