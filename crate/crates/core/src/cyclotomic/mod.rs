//! Exact arithmetic in `Z[zeta_n]` using the power basis modulo `Phi_n`.

mod ball;
mod intpoly;
mod qcyc;
mod rootsum;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use ball::{cos_sin, pi, roots_of_unity, Ball, ComplexBall};
pub use intpoly::IntPoly;
pub use qcyc::QCyc;
pub use rootsum::RootSum;

use crate::arith;
use crate::config::Limits;
use crate::error::{Error, Result};

/// Guard bits added on top of the requested embedding precision.
pub const GUARD_BITS: u32 = 64;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Phi_n` as i64 coefficients (low first), without bound checks.
pub(crate) fn phi(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(hit) = phi_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply first, then divide exactly.
    let divs = arith::divisors(n);
    let mut poly: Vec<i128> = vec![1];
    for &d in &divs {
        if arith::mobius(n / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divs {
        if arith::mobius(n / d) == -1 {
            let d = d as usize;
            let top = poly.len() - 1;
            let mut quot = vec![0i128; top + 1 - d];
            for k in (d..=top).rev() {
                let above = if k < quot.len() { quot[k] } else { 0 };
                quot[k - d] = poly[k] + above;
            }
            poly = quot;
        }
    }
    let out: Vec<i64> = poly.into_iter().map(|c| c as i64).collect();
    debug_assert_eq!(out.len() as u64 - 1, arith::euler_phi(n));
    let out = Arc::new(out);
    phi_cache().lock().unwrap().insert(n, out.clone());
    out
}

/// The n-th cyclotomic polynomial, subject to the default cyclotomic bound.
pub fn cyclotomic_polynomial(n: u64) -> Result<IntPoly> {
    cyclotomic_polynomial_bounded(n, Limits::default().cyclotomic_bound)
}

pub fn cyclotomic_polynomial_bounded(n: u64, bound: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "n",
            value: n,
            bound,
        });
    }
    Ok(IntPoly::from_i64(&phi(n)))
}

/// Reduces a dense polynomial modulo the monic `phi`; `None` on i128 overflow.
fn reduce_i128(mut a: Vec<i128>, phi: &[i64]) -> Option<Vec<i128>> {
    let deg = phi.len() - 1;
    while a.len() > deg {
        let top = a.len() - 1;
        let c = a[top];
        if c != 0 {
            for (i, &f) in phi[..deg].iter().enumerate() {
                let idx = top - deg + i;
                a[idx] = a[idx].checked_sub(c.checked_mul(f as i128)?)?;
            }
        }
        a.pop();
    }
    a.resize(deg, 0);
    Some(a)
}

fn reduce_big(mut a: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let deg = phi.len() - 1;
    while a.len() > deg {
        let top = a.len() - 1;
        let c = std::mem::take(&mut a[top]);
        if !c.is_zero() {
            for (i, &f) in phi[..deg].iter().enumerate() {
                if f != 0 {
                    a[top - deg + i] -= &c * f;
                }
            }
        }
        a.pop();
    }
    a.resize(deg, BigInt::zero());
    a
}

const FAST_LIMIT: u32 = 96;

fn to_small(a: &[BigInt]) -> Option<Vec<i128>> {
    a.iter()
        .map(|c| if c.bits() <= FAST_LIMIT as u64 { c.to_i128() } else { None })
        .collect()
}

/// Reduces an arbitrary dense polynomial in `zeta_n` to the power basis.
fn reduce(a: Vec<BigInt>, n: u64) -> Vec<BigInt> {
    let phi = phi(n);
    if let Some(small) = to_small(&a) {
        if let Some(r) = reduce_i128(small, &phi) {
            return r.into_iter().map(BigInt::from).collect();
        }
    }
    reduce_big(a, &phi)
}

/// Element of `Z[zeta_n]`: coefficients of `1, zeta, ..., zeta^{phi(n)-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycInt {
    n: u64,
    coeffs: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    /// Multiply `a` by the rational integer `b`.
    ScalarMul,
}

/// Same-order arithmetic; mixed orders must be lifted first.
pub fn cyc_arith(op: CycOp, a: &CycInt, b: &CycInt) -> Result<CycInt> {
    if op == CycOp::ScalarMul {
        let c = b
            .as_integer()
            .ok_or_else(|| Error::InvalidArgument("scalar must be a rational integer".into()))?;
        return Ok(a.scale(&c));
    }
    if a.n != b.n {
        return Err(Error::OrderMismatch(a.n, b.n));
    }
    Ok(match op {
        CycOp::Add => a.add_same(b),
        CycOp::Sub => a.sub_same(b),
        CycOp::Mul => a.mul_same(b),
        CycOp::ScalarMul => unreachable!(),
    })
}

pub fn cyc_lift(a: &CycInt, target: u64) -> Result<CycInt> {
    a.lift(target)
}

pub fn galois(a: &CycInt, k: i64) -> Result<CycInt> {
    a.galois(k)
}

pub fn embed(a: &CycInt, precision: u32) -> ComplexBall {
    a.embed(precision)
}

impl CycInt {
    pub fn zero(n: u64) -> Self {
        let d = phi(n).len() - 1;
        CycInt {
            n,
            coeffs: vec![BigInt::zero(); d],
        }
    }

    pub fn from_int(n: u64, c: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c.into();
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// `zeta_n^k` for any integer `k`.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let j = k.rem_euclid(n as i64) as usize;
        let mut dense = vec![BigInt::zero(); j + 1];
        dense[j] = BigInt::one();
        Self::from_dense(n, dense)
    }

    /// Reduces `sum_j a_j zeta_n^j` (any length) to canonical form.
    pub fn from_dense(n: u64, a: Vec<BigInt>) -> Self {
        CycInt {
            n,
            coeffs: reduce(a, n),
        }
    }

    /// Builds from exponent/coefficient pairs, exponents taken mod `n`.
    pub fn from_terms(n: u64, terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut dense = vec![BigInt::zero(); n as usize];
        for (e, c) in terms {
            dense[e.rem_euclid(n as i64) as usize] += c;
        }
        Self::from_dense(n, dense)
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn add_same(&self, o: &CycInt) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub_same(&self, o: &CycInt) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul_same(&self, o: &CycInt) -> CycInt {
        let d = self.coeffs.len();
        if let (Some(a), Some(b)) = (to_small(&self.coeffs), to_small(&o.coeffs)) {
            if let Some(prod) = mul_i128(&a, &b) {
                if let Some(r) = reduce_i128(prod, &phi(self.n)) {
                    return CycInt {
                        n: self.n,
                        coeffs: r.into_iter().map(BigInt::from).collect(),
                    };
                }
            }
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycInt {
            n: self.n,
            coeffs: reduce_big(prod, &phi(self.n)),
        }
    }

    pub fn pow(&self, k: u32) -> CycInt {
        let mut acc = CycInt::one(self.n);
        for _ in 0..k {
            acc = acc.mul_same(self);
        }
        acc
    }

    /// Image under `zeta_n -> zeta_target^{target/n}`.
    pub fn lift(&self, target: u64) -> Result<CycInt> {
        if target == 0 || !target.is_multiple_of(self.n) {
            return Err(Error::NotAMultiple {
                order: self.n,
                target,
            });
        }
        if target == self.n {
            return Ok(self.clone());
        }
        let step = (target / self.n) as i64;
        Ok(CycInt::from_terms(
            target,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64 * step, c.clone())),
        ))
    }

    /// Galois automorphism `zeta -> zeta^k`.
    pub fn galois(&self, k: i64) -> Result<CycInt> {
        if arith::gcd(k.unsigned_abs(), self.n) != 1 {
            return Err(Error::NotCoprime { k, n: self.n });
        }
        Ok(CycInt::from_terms(
            self.n,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64 * k, c.clone())),
        ))
    }

    pub fn conj(&self) -> CycInt {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Rigorous enclosure of the complex value; `precision` in bits.
    pub fn embed(&self, precision: u32) -> ComplexBall {
        let w = precision.max(53) + GUARD_BITS;
        let roots = roots_of_unity(self.n, w);
        let mut acc = ComplexBall::zero(w);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&roots[j].scale_int(c));
            }
        }
        acc
    }

    /// Brings both operands to `lcm` of their orders.
    pub fn unify(a: &CycInt, b: &CycInt) -> (CycInt, CycInt) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let n = arith::lcm(a.n, b.n);
        (a.lift(n).unwrap(), b.lift(n).unwrap())
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

fn mul_i128(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
    }
    Some(out)
}

macro_rules! lifting_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                let (a, b) = CycInt::unify(self, rhs);
                a.$inner(&b)
            }
        }
        impl $tr for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

lifting_op!(Add, add, add_same);
lifting_op!(Sub, sub, sub_same);
lifting_op!(Mul, mul, mul_same);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let z = format!("z{}", self.n);
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{z}")?,
                (1, false) => write!(f, "{mag}*{z}")?,
                (_, true) => write!(f, "{z}^{j}")?,
                (_, false) => write!(f, "{mag}*{z}^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycInt", 2)?;
        st.serialize_field("n", &self.n)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CycInt {
        CycInt::zeta_pow(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(
            cyclotomic_polynomial(12).unwrap(),
            IntPoly::from_i64(&[1, 0, -1, 0, 1])
        );
        assert_eq!(
            cyclotomic_polynomial(7).unwrap(),
            IntPoly::from_i64(&[1; 7])
        );
        assert!(matches!(
            cyclotomic_polynomial(1001),
            Err(Error::BoundExceeded { .. })
        ));
        // Phi_105 is the first with a coefficient -2
        assert!(phi(105).contains(&-2));
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for n in 1..=200u64 {
            let terms = phi(n)
                .iter()
                .enumerate()
                .map(|(j, &c)| (j as i64, BigInt::from(c)))
                .collect::<Vec<_>>();
            assert!(CycInt::from_terms(n, terms).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycInt::from_int(4, -1));
        assert_eq!(&z(3, 1) + &z(3, 2), CycInt::from_int(3, -1));
        assert_eq!(&z(12, 3) * &z(12, 3), CycInt::from_int(12, -1));
        assert!(matches!(
            cyc_arith(CycOp::Add, &z(3, 1), &z(4, 1)),
            Err(Error::OrderMismatch(3, 4))
        ));
        let five = CycInt::from_int(1, 5);
        assert_eq!(
            cyc_arith(CycOp::ScalarMul, &z(5, 2), &five).unwrap(),
            z(5, 2).scale(&BigInt::from(5))
        );
    }

    #[test]
    fn lifting() {
        assert_eq!(z(2, 1).lift(6).unwrap(), z(6, 3));
        assert_eq!(z(6, 3), CycInt::from_int(6, -1));
        assert_eq!(CycInt::from_int(1, 5).lift(30).unwrap(), CycInt::from_int(30, 5));
        assert_eq!(z(3, 1).lift(12).unwrap(), z(12, 4));
        assert!(matches!(z(3, 1).lift(10), Err(Error::NotAMultiple { .. })));
    }

    #[test]
    fn galois_examples() {
        assert_eq!(z(4, 1).galois(-1).unwrap(), -z(4, 1));
        assert_eq!(CycInt::from_int(9, 7).galois(2).unwrap(), CycInt::from_int(9, 7));
        let real = &z(5, 1) + &z(5, 4);
        assert_eq!(real.galois(-1).unwrap(), real);
        assert!(matches!(z(6, 1).galois(3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn embedding_examples() {
        let m1 = CycInt::from_int(3, -1).embed(128);
        assert!((m1.mid().0 + 1.0).abs() < 1e-30 && m1.im.contains_zero());
        let z6 = z(6, 1).embed(128);
        let (re, im) = z6.mid();
        assert!((re - 0.5).abs() < 1e-12 && (im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(z6.radius() < 1e-12);
        let real = (&z(7, 1) + &z(7, 6)).embed(128);
        assert!(real.im.contains_zero() && real.im.rad_f64() < 1e-30);
    }

    #[test]
    fn display() {
        let a = &(&z(12, 1).scale(&BigInt::from(2)) - &z(12, 3)) + &CycInt::from_int(12, 1);
        assert_eq!(a.to_string(), "1 + 2*z12 - z12^3");
        assert_eq!(CycInt::zero(5).to_string(), "0");
    }
}
