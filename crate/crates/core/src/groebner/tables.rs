//! Stored univariate polynomials `F_{m,theta}` and their products `F_m`, in factored
//! form, with the coherence checks they must satisfy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith;
use crate::cyclotomic::IntPoly;
use crate::error::{Error, Result};

pub const TABULATED_M: [u64; 8] = [6, 10, 12, 14, 16, 18, 20, 22];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FTableEntry {
    pub theta: u64,
    /// Empty for `F = 1`, meaning the variety is empty.
    pub factors: Vec<IntPoly>,
}

impl FTableEntry {
    pub fn poly(&self) -> IntPoly {
        IntPoly::product(&self.factors)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FTable {
    pub m: u64,
    pub entries: Vec<FTableEntry>,
    /// Factors of `F_m` as listed in the summary table.
    pub product_factors: Vec<IntPoly>,
}

impl FTable {
    pub fn entry(&self, theta: u64) -> Option<&FTableEntry> {
        self.entries.iter().find(|e| e.theta == theta)
    }

    pub fn product(&self) -> IntPoly {
        IntPoly::product(&self.product_factors)
    }
}

/// `a x + b`.
fn lin(a: i64, b: i64) -> IntPoly {
    IntPoly::linear(a, b)
}

/// `(c x - d)(c x + d)`.
fn pm(c: i64, d: i64) -> [IntPoly; 2] {
    [lin(c, -d), lin(c, d)]
}

/// `a x^2 + b`.
fn quad(a: i64, b: i64) -> IntPoly {
    IntPoly::from_i64(&[b, 0, a])
}

fn cat<const N: usize>(parts: &[&[IntPoly]]) -> Vec<IntPoly> {
    let _ = N;
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

pub fn f_table(m: u64) -> Result<FTable> {
    let e = |theta: u64, factors: Vec<IntPoly>| FTableEntry { theta, factors };
    let x = IntPoly::x();
    let (entries, product_factors) = match m {
        6 => (
            vec![e(0, pm(1, 2).to_vec()), e(1, vec![quad(7, -1)])],
            cat::<0>(&[&pm(1, 2), &[quad(7, -1)]]),
        ),
        10 => (
            vec![e(0, cat::<0>(&[std::slice::from_ref(&x), &pm(1, 4)])), e(1, vec![quad(11, -1)])],
            cat::<0>(&[std::slice::from_ref(&x), &pm(1, 4), &[quad(11, -1)]]),
        ),
        12 => (
            vec![
                e(0, vec![]),
                e(1, vec![quad(13, -1)]),
                e(2, vec![]),
                e(3, cat::<0>(&[&pm(1, 3), &pm(1, 5), &pm(5, 7)])),
            ],
            cat::<0>(&[&pm(1, 3), &pm(1, 5), &pm(5, 7), &[quad(13, -1)]]),
        ),
        14 => (
            vec![e(0, cat::<0>(&[&pm(1, 6), &[quad(4, 3)]])), e(1, vec![])],
            cat::<0>(&[&pm(1, 6), &[quad(4, 3)]]),
        ),
        16 => (
            vec![
                e(0, cat::<0>(&[&pm(7, 17), &[quad(4, 3)]])),
                e(1, vec![]),
                e(2, vec![quad(17, -1)]),
                e(4, pm(1, 7).to_vec()),
            ],
            cat::<0>(&[&pm(1, 7), &pm(7, 17), &[quad(17, -1)]]),
        ),
        18 => (
            vec![
                e(0, cat::<0>(&[std::slice::from_ref(&x), &pm(1, 8)])),
                e(1, vec![quad(19, -1)]),
                e(3, vec![]),
            ],
            cat::<0>(&[std::slice::from_ref(&x), &pm(1, 8), &[quad(19, -1)]]),
        ),
        20 => {
            let big = cat::<0>(&[&pm(1, 7), &pm(1, 9), &pm(9, 31), &pm(13, 67)]);
            (
                vec![e(0, vec![]), e(1, vec![]), e(2, vec![]), e(5, big.clone())],
                big,
            )
        }
        22 => {
            let quartic = IntPoly::from_i64(&[243, 0, -60, 0, 4]);
            (
                vec![
                    e(0, cat::<0>(&[&pm(1, 10), std::slice::from_ref(&quartic)])),
                    e(1, vec![quad(23, -1)]),
                ],
                cat::<0>(&[&pm(1, 10), &[quartic], &[quad(23, -1)]]),
            )
        }
        _ => return Err(Error::NotTabulated(m)),
    };
    Ok(FTable {
        m,
        entries,
        product_factors,
    })
}

/// A nonzero real root violating `rho^2 >= 1` or `rho^2 = 1/(m+1)`, or a factor
/// whose real roots cannot be decided here.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateViolation {
    pub factor: IntPoly,
    pub reason: String,
}

fn ratio(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

/// Checks a rational value `X = rho^2` of a real root square.
fn square_ok(x: &BigRational, m: u64) -> bool {
    let one = BigRational::from_integer(BigInt::from(1));
    // X < 0 has no real root; X = 0 is the zero root, outside the gate.
    !x.is_positive() || *x >= one || *x == BigRational::new(1.into(), BigInt::from(m + 1))
}

/// Real-root gate for one factor: linear factors, and even factors of degree at
/// most 4 (quadratic in `x^2`).
fn gate_factor(f: &IntPoly, m: u64) -> Option<GateViolation> {
    let bad = |reason: &str| {
        Some(GateViolation {
            factor: f.clone(),
            reason: reason.into(),
        })
    };
    match f.degree() {
        None | Some(0) => return None,
        Some(1) => {
            let r = ratio(&-f.coeff(0), &f.coeff(1));
            return (!square_ok(&(&r * &r), m)).then(|| GateViolation {
                factor: f.clone(),
                reason: format!("root {r} has 0 < rho^2 < 1"),
            });
        }
        _ => {}
    }
    let Some(g) = f.even_part_in_square().filter(|g| g.degree() <= Some(2)) else {
        return bad("unsupported factor shape");
    };
    if g.degree() == Some(1) {
        let x = ratio(&-g.coeff(0), &g.coeff(1));
        return (!square_ok(&x, m)).then(|| GateViolation {
            factor: f.clone(),
            reason: format!("rho^2 = {x}"),
        });
    }
    // a X^2 + b X + c with a > 0.
    let sign = BigInt::from(if g.lead().is_negative() { -1 } else { 1 });
    let (a, b, c) = (g.coeff(2) * &sign, g.coeff(1) * &sign, g.coeff(0) * &sign);
    let disc: BigInt = &b * &b - BigInt::from(4) * &a * &c;
    if disc.is_negative() {
        return None;
    }
    let root = disc.sqrt();
    if &root * &root == disc {
        for s in [-1, 1] {
            let x = ratio(&(-&b + &root * s), &(BigInt::from(2) * &a));
            if !square_ok(&x, m) {
                return bad(&format!("rho^2 = {x}"));
            }
        }
        return None;
    }
    // Irrational X = (-b + s sqrt(D)) / 2a can only pass through X >= 1 or X <= 0.
    let t = BigInt::from(2) * &a + &b;
    for s in [-1i32, 1] {
        let positive = if s == 1 {
            b.is_negative() || disc > &b * &b
        } else {
            b.is_negative() && disc < &b * &b
        };
        let at_least_one = if s == 1 {
            !t.is_positive() || disc >= &t * &t
        } else {
            !t.is_positive() && disc <= &t * &t
        };
        if positive && !at_least_one {
            return bad("irrational rho^2 in (0, 1)");
        }
    }
    None
}

/// Every nonzero real root `rho` of the factors satisfies `rho^2 >= 1` or `rho^2 = 1/(m+1)`.
pub fn real_root_gate(m: u64, factors: &[IntPoly]) -> Vec<GateViolation> {
    factors.iter().filter_map(|f| gate_factor(f, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub m: u64,
    /// `F_m(m/2 - 1) = 0`.
    pub vanishes_at_explicit_g0: bool,
    pub m_plus_one_prime_power: bool,
    /// `(m+1) x^2 - 1` divides `F_m`.
    pub has_prime_power_factor: bool,
    pub has_x_factor: bool,
    pub gate_violations: Vec<GateViolation>,
    /// The squarefree product of the per-theta entries equals that of `F_m`.
    pub product_matches: bool,
    /// Squarefree factor of the per-theta product missing from `F_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_extra: Option<IntPoly>,
    /// Squarefree factor of `F_m` missing from the per-theta product.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_missing: Option<IntPoly>,
}

impl CoherenceReport {
    /// The fixture-level checks: explicit root, prime-power factor, real-root gate.
    pub fn consistent(&self) -> bool {
        self.vanishes_at_explicit_g0
            && self.has_prime_power_factor == self.m_plus_one_prime_power
            && self.gate_violations.is_empty()
    }
}

pub fn coherence(m: u64) -> Result<CoherenceReport> {
    let t = f_table(m)?;
    let fm = t.product();
    let pp = IntPoly::from_i64(&[-1, 0, m as i64 + 1]);
    let mut factors = t.product_factors.clone();
    for e in &t.entries {
        factors.extend(e.factors.iter().cloned());
    }
    let theta_prod = IntPoly::product(t.entries.iter().flat_map(|e| &e.factors)).squarefree_part()?;
    let table_sf = fm.squarefree_part()?;
    let common = theta_prod.gcd(&table_sf);
    let leftover = |f: &IntPoly| {
        let q = f.div_exact(&common).expect("gcd divides").primitive();
        (q.degree() != Some(0)).then_some(q)
    };
    let product_extra = leftover(&theta_prod);
    let product_missing = leftover(&table_sf);
    Ok(CoherenceReport {
        m,
        vanishes_at_explicit_g0: fm.eval_int(&BigInt::from(m / 2 - 1)).is_zero(),
        m_plus_one_prime_power: arith::as_prime_power(m + 1).is_some(),
        has_prime_power_factor: fm.div_exact(&pp).is_some(),
        has_x_factor: fm.coeff(0).is_zero(),
        gate_violations: real_root_gate(m, &factors),
        product_matches: product_extra.is_none() && product_missing.is_none(),
        product_extra,
        product_missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let t14 = f_table(14).unwrap();
        assert_eq!(t14.entries.len(), 2);
        assert_eq!(t14.entry(1).unwrap().poly(), IntPoly::one());
        assert_eq!(
            t14.entry(0).unwrap().poly(),
            IntPoly::product(&[lin(1, -6), lin(1, 6), quad(4, 3)])
        );
        let t22 = f_table(22).unwrap();
        assert!(t22.product().div_exact(&IntPoly::from_i64(&[243, 0, -60, 0, 4])).is_some());
        let t20 = f_table(20).unwrap();
        for th in [0, 1, 2] {
            assert_eq!(t20.entry(th).unwrap().poly(), IntPoly::one());
        }
        assert_eq!(t20.entry(5).unwrap().poly().degree(), Some(8));
        assert!(matches!(f_table(8), Err(Error::NotTabulated(8))));
        for m in TABULATED_M {
            let t = f_table(m).unwrap();
            for e in &t.entries {
                assert_eq!((m / 2) % e.theta.max(1), 0, "theta must divide m/2 (or be 0)");
            }
        }
    }

    #[test]
    fn coherence_of_all_fixtures() {
        let mut with_x = Vec::new();
        for m in TABULATED_M {
            let r = coherence(m).unwrap();
            assert!(r.consistent(), "{r:?}");
            if r.has_x_factor {
                with_x.push(m);
            }
            if m == 16 {
                assert_eq!(r.product_extra, Some(quad(4, 3)));
                assert!(r.product_missing.is_none());
            } else {
                assert!(r.product_matches, "m={m}: {r:?}");
            }
        }
        assert_eq!(with_x, [10, 18]);
    }

    #[test]
    fn gate_catches_bad_roots() {
        assert!(real_root_gate(6, &[lin(2, -1)]).len() == 1);
        assert!(real_root_gate(6, &[quad(7, -1), quad(4, 3), IntPoly::x(), lin(1, -2)]).is_empty());
        assert_eq!(real_root_gate(6, &[quad(5, -1)]).len(), 1);
        // x^4 - 3x^2 + 1: X = (3 +- sqrt 5)/2, the smaller lies in (0, 1).
        assert_eq!(real_root_gate(6, &[IntPoly::from_i64(&[1, 0, -3, 0, 1])]).len(), 1);
        // x^4 - 6x^2 + 7: X = 3 +- sqrt 2, both above 1.
        assert!(real_root_gate(6, &[IntPoly::from_i64(&[7, 0, -6, 0, 1])]).is_empty());
        assert_eq!(real_root_gate(6, &[IntPoly::from_i64(&[1, 1, 0, 1])]).len(), 1);
    }
}
