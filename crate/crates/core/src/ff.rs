//! Finite fields `F_q`, `q = p^e`, with dense discrete-log tables.
//!
//! Elements are stored as their polynomial-basis coefficient vectors packed
//! into one integer: `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. This index is also
//! the order used to pick the modulus and the generator, so "smallest" always
//! means "smallest index".

use std::fmt;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

/// A field element, canonical by construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct FFElement(u32);

impl FFElement {
    pub const ZERO: FFElement = FFElement(0);
    pub const ONE: FFElement = FFElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FFElement,
    log: Vec<u32>,
    exp: Vec<u32>,
    traces: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Builds `F_{p^e}` with the default size bound.
pub fn make_field(p: u64, e: u32) -> Result<FiniteField> {
    make_field_bounded(p, e, DEFAULT_FIELD_BOUND)
}

/// Builds the field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<FiniteField> {
    let (p, e) = arith::as_prime_power(q)
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    make_field(p, e)
}

pub fn make_field_bounded(p: u64, e: u32, bound: u64) -> Result<FiniteField> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    let q = (p as u128).pow(e);
    if q > bound as u128 || q > u32::MAX as u128 {
        return Err(Error::BoundExceeded {
            what: "q",
            value: q.min(u64::MAX as u128) as u64,
            bound,
        });
    }
    let (p, q) = (p as u32, q as u32);
    let modulus = smallest_irreducible(p, e);
    let raw = RawField { p, e, modulus: &modulus };

    let order = q - 1;
    let cofactors: Vec<u32> = arith::prime_divisors(order as u64)
        .into_iter()
        .map(|r| order / r as u32)
        .collect();
    let generator = (1..q)
        .find(|&g| {
            raw.pow(g, order as u64) == 1 && cofactors.iter().all(|&c| raw.pow(g, c as u64) != 1)
        })
        .expect("a finite field has a primitive element");

    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1u32;
    for k in 0..order {
        debug_assert_eq!(log[x as usize], u32::MAX);
        exp.push(x);
        log[x as usize] = k;
        x = raw.mul(x, generator);
    }
    debug_assert_eq!(x, 1);

    let mut field = FiniteField {
        p,
        e,
        q,
        modulus,
        generator: FFElement(generator),
        log,
        exp,
        traces: Vec::new(),
    };
    let basis_traces: Vec<u32> = (0..e)
        .map(|i| field.trace(FFElement(p.pow(i))))
        .collect();
    field.traces = (0..q)
        .map(|idx| {
            let mut t = 0u64;
            let mut rest = idx;
            for bt in &basis_traces {
                t += (rest % p) as u64 * *bt as u64;
                rest /= p;
            }
            (t % p as u64) as u32
        })
        .collect();
    Ok(field)
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, coefficients low degree first (length `e + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FFElement {
        self.generator
    }

    pub fn element(&self, index: u32) -> Result<FFElement> {
        if index < self.q {
            Ok(FFElement(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "{index} is not an element index of F_{}",
                self.q
            )))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FFElement> {
        if coeffs.len() > self.e as usize {
            return Err(Error::InvalidArgument("too many coefficients".into()));
        }
        let idx = coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p);
        Ok(FFElement(idx))
    }

    pub fn coeffs(&self, x: FFElement) -> Vec<u32> {
        let mut rest = x.0;
        (0..self.e)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FFElement {
        FFElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElement> {
        (0..self.q).map(FFElement)
    }

    pub fn add(&self, a: FFElement, b: FFElement) -> FFElement {
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FFElement, b: FFElement) -> FFElement {
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FFElement) -> FFElement {
        self.sub(FFElement::ZERO, a)
    }

    #[inline]
    fn digitwise(&self, a: FFElement, b: FFElement, op: impl Fn(u32, u32, u32) -> u32) -> FFElement {
        let p = self.p;
        if p == 2 {
            return FFElement(a.0 ^ b.0);
        }
        if self.e == 1 {
            return FFElement(op(a.0, b.0, p));
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut weight = 1;
        for _ in 0..self.e {
            out += op(x % p, y % p, p) * weight;
            weight *= p;
            x /= p;
            y /= p;
        }
        FFElement(out)
    }

    pub fn mul(&self, a: FFElement, b: FFElement) -> FFElement {
        if a.is_zero() || b.is_zero() {
            return FFElement::ZERO;
        }
        let k = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FFElement(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: FFElement) -> Result<FFElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let k = (order - self.log[a.0 as usize]) % order;
        Ok(FFElement(self.exp[k as usize]))
    }

    pub fn div(&self, a: FFElement, b: FFElement) -> Result<FFElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`; negative exponents invert, `0^0 = 1`.
    pub fn pow(&self, a: FFElement, k: i64) -> Result<FFElement> {
        if a.is_zero() {
            return match k.cmp(&0) {
                std::cmp::Ordering::Equal => Ok(FFElement::ONE),
                std::cmp::Ordering::Greater => Ok(FFElement::ZERO),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            };
        }
        let order = (self.q - 1) as i64;
        let j = (self.log[a.0 as usize] as i64 * k.rem_euclid(order)).rem_euclid(order);
        Ok(FFElement(self.exp[j as usize]))
    }

    /// `g^k` for the fixed generator.
    pub fn gen_pow(&self, k: i64) -> FFElement {
        let order = (self.q - 1) as i64;
        FFElement(self.exp[k.rem_euclid(order) as usize])
    }

    pub fn dlog(&self, x: FFElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(self.log[x.0 as usize])
    }

    /// Discrete log without the zero check; `u32::MAX` for zero.
    #[inline]
    pub(crate) fn dlog_raw(&self, x: FFElement) -> u32 {
        self.log[x.0 as usize]
    }

    /// Absolute trace to `F_p`, computed as `x + x^p + ... + x^{p^{e-1}}`.
    pub fn trace(&self, x: FFElement) -> u32 {
        let mut acc = FFElement::ZERO;
        let mut frob = x;
        for _ in 0..self.e {
            acc = self.add(acc, frob);
            frob = self.pow(frob, self.p as i64).expect("nonnegative exponent");
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Precomputed trace, identical to [`FiniteField::trace`].
    #[inline]
    pub fn trace_fast(&self, x: FFElement) -> u32 {
        self.traces[x.0 as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FFElement) -> Result<u64> {
        let k = self.dlog(x)? as u64;
        let n = self.q as u64 - 1;
        Ok(n / arith::gcd(n, k))
    }
}

/// Polynomial arithmetic modulo `(p, modulus)` before log tables exist.
struct RawField<'a> {
    p: u32,
    e: u32,
    modulus: &'a [u32],
}

impl RawField<'_> {
    fn unpack(&self, x: u32) -> Vec<u64> {
        let mut rest = x;
        (0..self.e)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c as u64
            })
            .collect()
    }

    fn pack(&self, c: &[u64]) -> u32 {
        c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d as u32)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let e = self.e as usize;
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u64; 2 * e];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        for deg in (e..2 * e).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..e {
                let sub = c * self.modulus[i] as u64 % p;
                prod[deg - e + i] = (prod[deg - e + i] + p - sub) % p;
            }
        }
        self.pack(&prod[..e])
    }

    fn pow(&self, base: u32, mut k: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            k >>= 1;
        }
        acc
    }
}

type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    arith::pow_mod(a, p - 2, p)
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or: `f` of degree `e` is irreducible iff `gcd(x^{p^i} - x, f) = 1` for `i <= e/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    let x: FpPoly = fp_rem(&[0, 1], f, p);
    let mut frob = x.clone();
    for _ in 1..=e / 2 {
        // frob <- frob^p
        let mut acc: FpPoly = vec![1];
        for _ in 0..p {
            acc = fp_mulmod(&acc, &frob, f, p);
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(f, &trim(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `e`, ranked by packed coefficient index.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut f: Vec<u64> = Vec::with_capacity(e as usize + 1);
        let mut rest = idx;
        for _ in 0..e {
            f.push(rest % p64);
            rest /= p64;
        }
        f.push(1);
        if e == 1 || (f[0] != 0 && is_irreducible(&f, p64)) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
