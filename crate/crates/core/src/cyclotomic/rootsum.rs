//! Group-ring sums `sum_j c_j zeta_n^j` with machine-integer coefficients.
//!
//! Character sums are accumulated here without reducing modulo `Phi_n`, so
//! large ambient orders (such as `m * p` for Gauss sums) stay cheap. Zero
//! testing recurses over the prime factorization of `n` and never needs
//! `Phi_n` itself.

use num_bigint::BigInt;

use super::{roots_of_unity, ComplexBall, CycInt, GUARD_BITS};
use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    n: u64,
    coeffs: Vec<i128>,
}

impl RootSum {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1);
        RootSum {
            n,
            coeffs: vec![0; n as usize],
        }
    }

    pub fn constant(n: u64, c: i128) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c;
        z
    }

    pub fn monomial(n: u64, j: i64, c: i128) -> Self {
        let mut z = Self::zero(n);
        z.add_term(j, c);
        z
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    #[inline]
    pub fn add_term(&mut self, j: i64, c: i128) {
        let idx = j.rem_euclid(self.n as i64) as usize;
        self.coeffs[idx] += c;
    }

    pub fn add_assign(&mut self, o: &RootSum) {
        assert_eq!(self.n, o.n);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, o: &RootSum) {
        assert_eq!(self.n, o.n);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a -= b;
        }
    }

    pub fn add(&self, o: &RootSum) -> RootSum {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &RootSum) -> RootSum {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn scale(&self, c: i128) -> RootSum {
        RootSum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn support(&self) -> Vec<(usize, i128)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect()
    }

    /// Multiplies `self * o` and accumulates the product into `acc` scaled by `zeta^shift`.
    pub fn mul_acc(&self, o: &RootSum, shift: i64, acc: &mut RootSum) {
        assert!(self.n == o.n && self.n == acc.n);
        let n = self.n as usize;
        let shift = shift.rem_euclid(n as i64) as usize;
        let b = o.support();
        for (i, x) in self.support() {
            let base = i + shift;
            for &(j, y) in &b {
                let mut idx = base + j;
                if idx >= n {
                    idx -= n;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc.coeffs[idx] += x * y;
            }
        }
    }

    pub fn mul(&self, o: &RootSum) -> RootSum {
        let mut acc = RootSum::zero(self.n);
        self.mul_acc(o, 0, &mut acc);
        acc
    }

    /// `zeta -> zeta^k`; a permutation of the group-ring coordinates.
    pub fn galois(&self, k: i64) -> Result<RootSum> {
        if arith::gcd(k.unsigned_abs(), self.n) != 1 {
            return Err(Error::NotCoprime { k, n: self.n });
        }
        let mut out = RootSum::zero(self.n);
        for (j, c) in self.support() {
            out.add_term(j as i64 * k, c);
        }
        Ok(out)
    }

    pub fn lift(&self, target: u64) -> Result<RootSum> {
        if !target.is_multiple_of(self.n) {
            return Err(Error::NotAMultiple {
                order: self.n,
                target,
            });
        }
        let step = (target / self.n) as i64;
        let mut out = RootSum::zero(target);
        for (j, c) in self.support() {
            out.add_term(j as i64 * step, c);
        }
        Ok(out)
    }

    /// Exact test for the value being zero in `Z[zeta_n]`.
    pub fn is_zero(&self) -> bool {
        is_zero_rec(&self.coeffs, self.n)
    }

    /// Exact equality of values, lifting to a common order.
    pub fn same_value(&self, o: &RootSum) -> bool {
        let n = arith::lcm(self.n, o.n);
        self.lift(n).unwrap().sub(&o.lift(n).unwrap()).is_zero()
    }

    pub fn to_cyc(&self) -> CycInt {
        CycInt::from_dense(self.n, self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn embed(&self, precision: u32) -> ComplexBall {
        let w = precision.max(53) + GUARD_BITS;
        let roots = roots_of_unity(self.n, w);
        let mut acc = ComplexBall::zero(w);
        for (j, c) in self.support() {
            acc = acc.add(&roots[j].scale_int(&BigInt::from(c)));
        }
        acc
    }
}

fn is_zero_rec(c: &[i128], n: u64) -> bool {
    if c.iter().all(|&x| x == 0) {
        return true;
    }
    if n == 1 {
        return false;
    }
    let p = arith::factorize(n)[0].0;
    let n1 = n / p;
    let (pu, n1u) = (p as usize, n1 as usize);
    if n1.is_multiple_of(p) {
        // basis 1, zeta_n, ..., zeta_n^{p-1} over Q(zeta_{n1})
        let mut sub = vec![0i128; n1u];
        for r in 0..pu {
            for (i, s) in sub.iter_mut().enumerate() {
                *s = c[r + pu * i];
            }
            if !is_zero_rec(&sub, n1) {
                return false;
            }
        }
        true
    } else {
        // zeta_n = zeta_p^x zeta_{n1}^y with x*n1 + y*p = 1
        let (_, x, y) = arith::ext_gcd(n1 as i64, p as i64);
        let mut parts = vec![vec![0i128; n1u]; pu];
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            let r = (j as i64 * x).rem_euclid(p as i64) as usize;
            let e = (j as i64 * y).rem_euclid(n1 as i64) as usize;
            parts[r][e] += cj;
        }
        let last = parts.pop().unwrap();
        parts.into_iter().all(|mut b| {
            for (bi, li) in b.iter_mut().zip(&last) {
                *bi -= li;
            }
            is_zero_rec(&b, n1)
        })
    }
}
