//! The polynomial systems of order `m` in normalized Gauss sums: the g-level
//! system in `g_0, ..., g_{m-1}, h` and its discrete Fourier transform, the
//! `(ghat, theta)`-level system. Subscripts are always reduced mod `m`.

mod solution;
mod text;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use solution::{
    dft, dft_bridge, dft_bridge_inverse, dft_numeric, explicit_solution, gauss_solution, planar_probe,
    sqrt_q, symmetry_transform, unscale, verify_solution, Direction, Membership, PlanarReport,
    Provenance, ResidualEntry, Residuals, SolValue, SolutionVector, Transform, VerifyMode, DEFAULT_TOL,
    NUMERIC_PREC,
};
pub use text::{export_system, parse_system};

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly};

/// Term order of generated systems and of the text format.
pub const SYSTEM_ORDER: MonomialOrder = MonomialOrder::DegLex;

pub const DEFAULT_SYSTEM_BOUND: u64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    G,
    Ghat,
}

impl Level {
    pub fn tag(self) -> &'static str {
        match self {
            Level::G => "g",
            Level::Ghat => "ghat",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub m: u64,
    pub level: Level,
    /// Stored mod `m / 2`; zero on the g-level.
    pub theta: u64,
    /// `q = m^2 + m + 1` for the planar variant.
    pub planar_q: Option<u64>,
    pub vars: Vec<String>,
    pub polys: Vec<Poly>,
}

impl PolySystem {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Index of `h` on the g-level.
    pub fn h_index(&self) -> Option<usize> {
        (self.level == Level::G).then_some(self.m as usize)
    }
}

fn check_even(m: u64, bound: u64) -> Result<()> {
    if !m.is_multiple_of(2) || m == 0 {
        return Err(Error::OddOrder(m));
    }
    if m > bound {
        return Err(Error::BoundExceeded {
            what: "m",
            value: m,
            bound,
        });
    }
    Ok(())
}

fn idx(s: i64, m: u64) -> usize {
    s.rem_euclid(m as i64) as usize
}

fn term(exps: &[(usize, u32)], c: i64) -> (Monomial, BigInt) {
    let mut mono = Monomial::one();
    for &(i, e) in exps {
        mono = mono.mul(&Monomial::var(i, e as u8));
    }
    (mono, BigInt::from(c))
}

fn pair(a: usize, b: usize) -> Vec<(usize, u32)> {
    if a == b {
        vec![(a, 2)]
    } else {
        vec![(a, 1), (b, 1)]
    }
}

pub fn g_vars(m: u64) -> Vec<String> {
    let mut v: Vec<String> = (0..m).map(|i| format!("g{i}")).collect();
    v.push("h".into());
    v
}

pub fn ghat_vars(m: u64) -> Vec<String> {
    (0..m).map(|i| format!("ghat{i}")).collect()
}

pub fn gen_g_system(m: u64) -> Result<PolySystem> {
    gen_g_system_bounded(m, DEFAULT_SYSTEM_BOUND)
}

/// `3m/2 - 1` polynomials in `g_0, ..., g_{m-1}, h`.
pub fn gen_g_system_bounded(m: u64, bound: u64) -> Result<PolySystem> {
    check_even(m, bound)?;
    let half = m / 2;
    let h = m as usize;
    let mut polys = Vec::new();
    for s in 1..half as i64 {
        let terms = (0..m as i64).map(|t| {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            term(&pair(t as usize, idx(2 * s - t, m)), sign)
        });
        polys.push(Poly::from_terms(SYSTEM_ORDER, terms));
    }
    for s in 1..=half as i64 {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        polys.push(Poly::from_terms(
            SYSTEM_ORDER,
            [term(&pair(s as usize, idx(-s, m)), 1), term(&[], -sign)],
        ));
    }
    for s in 1..half as i64 {
        let mut lhs = pair(s as usize, idx(half as i64 + s, m));
        lhs.push((h, s as u32));
        polys.push(Poly::from_terms(
            SYSTEM_ORDER,
            [term(&lhs, 1), term(&pair(idx(2 * s, m), half as usize), -1)],
        ));
    }
    polys.push(Poly::from_terms(
        SYSTEM_ORDER,
        [term(&[(h, half as u32)], 1), term(&[], -1)],
    ));
    Ok(PolySystem {
        m,
        level: Level::G,
        theta: 0,
        planar_q: None,
        vars: g_vars(m),
        polys,
    })
}

pub fn gen_ghat_system(m: u64, theta: i64) -> Result<PolySystem> {
    gen_ghat_system_bounded(m, theta, DEFAULT_SYSTEM_BOUND)
}

/// `3m/2` polynomials in `ghat_0, ..., ghat_{m-1}`; `theta` is taken mod `m/2`.
pub fn gen_ghat_system_bounded(m: u64, theta: i64, bound: u64) -> Result<PolySystem> {
    check_even(m, bound)?;
    let half = m / 2;
    let theta = theta.rem_euclid(half as i64);
    let mi = m as i64;
    let o = SYSTEM_ORDER;
    let v = |i: i64| Poly::var(o, idx(i, m));
    let c = |k: i64| Poly::constant(o, k);
    let total = (0..mi).fold(Poly::zero(o), |acc, t| acc.add(&v(t)));
    let total_sq = total.mul(&total);
    let alt = (0..mi).fold(Poly::zero(o), |acc, t| {
        if t % 2 == 0 {
            acc.add(&v(t))
        } else {
            acc.sub(&v(t))
        }
    });
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut third = Vec::new();
    for s in 0..half as i64 {
        first.push(
            c(mi * mi)
                .mul(&v(s))
                .mul(&v(half as i64 + s))
                .sub(&total_sq)
                .sub(&c(mi * mi * (mi - 1))),
        );
        let conv = (0..mi).fold(Poly::zero(o), |acc, t| acc.add(&v(t).mul(&v(s + t))));
        second.push(c(mi).mul(&conv).sub(&total_sq).add(&c(mi * mi)));
        let lhs = (0..mi).fold(Poly::zero(o), |acc, t| {
            let prod = v(t).mul(&v(2 * s - 2 * theta - t));
            if t % 2 == 0 {
                acc.add(&prod)
            } else {
                acc.sub(&prod)
            }
        });
        third.push(lhs.sub(&v(s).add(&v(half as i64 + s)).mul(&alt)));
    }
    let mut polys = first;
    polys.extend(second);
    polys.extend(third);
    Ok(PolySystem {
        m,
        level: Level::Ghat,
        theta: theta as u64,
        planar_q: None,
        vars: ghat_vars(m),
        polys,
    })
}

/// The g-level system with `h - 1` appended, for planar difference sets of order `m + 1`.
pub fn planar_system(m: u64) -> Result<PolySystem> {
    let mut sys = gen_g_system(m)?;
    let h = m as usize;
    sys.polys.push(Poly::from_terms(
        SYSTEM_ORDER,
        [term(&[(h, 1)], 1), term(&[], -1)],
    ));
    sys.planar_q = Some(m * m + m + 1);
    Ok(sys)
}

/// `(r, d)` with `gcd(r, m) = 1` and `r theta = d (mod m/2)`, where `d = gcd(theta, m/2)`
/// (so `d = m/2` when `theta = 0 mod m/2`).
pub fn theta_reduce(theta: i64, m: u64) -> Result<(i64, u64)> {
    check_even(m, u64::MAX)?;
    let half = (m / 2) as i64;
    let t = theta.rem_euclid(half);
    if t == 0 {
        return Ok((1, half as u64));
    }
    let d = arith::gcd(t as u64, half as u64) as i64;
    let ok = |r: i64| arith::gcd(r as u64, m) == 1 && (r * t - d).rem_euclid(half) == 0;
    let (_, s, _) = arith::ext_gcd(t, half);
    let s = s.rem_euclid(m as i64);
    let candidate = if s % 2 == 1 { s } else { (s + half).rem_euclid(m as i64) };
    if ok(candidate) {
        return Ok((candidate, d as u64));
    }
    // The Bezout coefficient need not be a unit mod m/2; other lifts are.
    let r = (1..m as i64)
        .find(|&r| ok(r))
        .expect("a unit r with r * theta = gcd exists");
    Ok((r, d as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for m in (2..=40).step_by(2) {
            let g = gen_g_system(m).unwrap();
            assert_eq!(g.polys.len() as u64, 3 * m / 2 - 1);
            assert_eq!(g.nvars() as u64, m + 1);
            let gh = gen_ghat_system(m, 0).unwrap();
            assert_eq!(gh.polys.len() as u64, 3 * m / 2);
            assert_eq!(gh.nvars() as u64, m);
        }
        assert!(matches!(gen_g_system(7), Err(Error::OddOrder(7))));
        assert!(matches!(gen_g_system(42), Err(Error::BoundExceeded { .. })));
        assert!(matches!(gen_ghat_system(5, 0), Err(Error::OddOrder(5))));
    }

    #[test]
    fn small_instances() {
        let g = gen_g_system(4).unwrap();
        let names = g.vars.clone();
        let shown: Vec<String> = g.polys.iter().map(|p| p.display(&names).to_string()).collect();
        assert!(shown.contains(&"g2^2 - 1".to_string()), "{shown:?}");
        assert!(shown.contains(&"g1*g3 + 1".to_string()), "{shown:?}");
        assert!(shown.contains(&"h^2 - 1".to_string()), "{shown:?}");
        let g6 = gen_g_system(6).unwrap();
        assert_eq!((g6.polys.len(), g6.nvars()), (8, 7));
        let g22 = gen_g_system(22).unwrap();
        assert_eq!((g22.polys.len(), g22.nvars()), (32, 23));
    }

    #[test]
    fn theta_periodic() {
        for th in 0..3 {
            assert_eq!(gen_ghat_system(6, th).unwrap(), gen_ghat_system(6, th + 3).unwrap());
        }
        assert_ne!(gen_ghat_system(6, 0).unwrap(), gen_ghat_system(6, 1).unwrap());
    }

    #[test]
    fn theta_reduction() {
        let (r, d) = theta_reduce(4, 12).unwrap();
        assert_eq!(d, 2);
        assert_eq!(arith::gcd(r as u64, 12), 1);
        assert_eq!((4 * r - 2).rem_euclid(6), 0);
        assert_eq!(theta_reduce(0, 10).unwrap(), (1, 5));
        assert_eq!(theta_reduce(1, 10).unwrap(), (1, 1));
        for m in (2..=60u64).step_by(2) {
            for th in 0..(m / 2) as i64 {
                let (r, d) = theta_reduce(th, m).unwrap();
                assert_eq!(arith::gcd(r as u64, m), 1);
                let half = (m / 2) as i64;
                assert_eq!((r * th - d as i64).rem_euclid(half), 0);
            }
        }
    }

    #[test]
    fn planar() {
        let p = planar_system(8).unwrap();
        assert_eq!(p.planar_q, Some(73));
        assert_eq!(p.polys.len(), 12);
    }
}
