//! Reference classification tables for very general surfaces in the five
//! ambients, written as plain case lists with no use of the engine.

use hyplab::hyperbolicity::Status;
use hyplab::AmbientKind;

/// Expected verdict for the class with the given coefficients.
///
/// `param` is `e` for `FexP1` and `n` for `P111n`. `FexP1` coefficients are
/// `(a1, a2, a3)` with `a2` the coefficient of `F`; `BlP3` coefficients are
/// `(a, -b)` for the class `aH - bE`; `P111n` coefficients are `(m, 0)`.
pub fn expected_status(kind: AmbientKind, param: i64, c: &[i64]) -> Status {
    use Status::*;
    let verdict = |h: bool| if h { Hyperbolic } else { NotHyperbolic };
    match kind {
        AmbientKind::P1P1P1 => {
            if c.iter().any(|&x| x <= 0) {
                return Invalid;
            }
            let mut s = c.to_vec();
            s.sort();
            verdict(s[0] >= 3 || (s[0] == 2 && s[1] >= 4))
        }
        AmbientKind::P2xP1 => {
            let (a, b) = (c[0], c[1]);
            if a <= 0 || b < 0 {
                return Invalid;
            }
            verdict((a >= 4 && b >= 3) || (b == 2 && a >= 5))
        }
        AmbientKind::FexP1 => {
            let e = param;
            let (a1, a3) = (c[0], c[2]);
            let a2p = c[1] - e * a1;
            if a1 <= 0 || a3 <= 0 || a2p < 0 {
                return Invalid;
            }
            let delta = i64::from(e == 1);
            verdict(
                (a2p >= 2 && a1 >= 3 && a3 >= 3)
                    || (a3 == 2 && a1 >= 4 && a2p >= 3)
                    || (a1 == 2 && a3 >= 4 && a2p >= 2 + delta),
            )
        }
        AmbientKind::BlP3 => {
            let (a, b) = (c[0], -c[1]);
            if b < 0 || a < b || a <= 0 {
                return Invalid;
            }
            verdict((b >= 4 && a >= b + 2) || (b == 0 && a >= 5))
        }
        AmbientKind::P111n => {
            let (n, m) = (param, c[0]);
            if c[1] != 0 || m <= 0 {
                return Invalid;
            }
            if n == 1 {
                return verdict(m >= 5);
            }
            if m == 1 || (m == 2 && n <= 4) {
                return NotHyperbolic;
            }
            if m >= 4 || (m == 3 && n >= 4) || (m == 2 && n >= 5) {
                return Hyperbolic;
            }
            Open
        }
    }
}

/// `2g - 2` of a smooth curve of class `aE + bF` on the Hirzebruch surface
/// `F_e`, expanded by hand from `C.(C + K)` with `E^2 = -e`, `E.F = 1`,
/// `F^2 = 0` and `K = -2E - (e + 2)F`.
pub fn hirzebruch_euler(e: i64, a: i64, b: i64) -> i64 {
    -e * a * (a - 2) + a * (b - e - 2) + b * (a - 2)
}

/// The simplified expansion of the ramification genus printed alongside the
/// `a3 = 2` case of `F_e x P1`, as a function of `(a1, a2)`.
pub fn printed_ramification_expansion(e: i64, a1: i64, a2: i64) -> i64 {
    2 * a1 * (2 * a2 - 2 * a1 - e) + 2 * a2 * (2 * a1 - 2)
}
