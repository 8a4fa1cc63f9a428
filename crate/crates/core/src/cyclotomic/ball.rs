//! Fixed-point midpoint-radius balls for certified complex embeddings.
//!
//! A [`Ball`] at precision `w` encloses the reals `[(mid - rad) / 2^w, (mid + rad) / 2^w]`.
//! Every operation widens `rad` enough to absorb its own rounding.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Ball {
    pub fn zero(prec: u32) -> Self {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(c: &BigInt, prec: u32) -> Self {
        Ball {
            mid: c << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let mid = (&self.mid * &o.mid) >> p;
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        Ball {
            mid,
            rad: (err >> p) + 2,
            prec: p,
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Ball {
        Ball {
            mid: &self.mid * c,
            rad: &self.rad * c.abs(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, k: u64) -> Ball {
        let k = BigInt::from(k);
        Ball {
            mid: &self.mid / &k,
            rad: &self.rad / &k + 1,
            prec: self.prec,
        }
    }

    /// Widens the radius by `extra` units in the last place.
    pub fn inflate(&self, extra: &BigInt) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: &self.rad + extra,
            prec: self.prec,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        scaled_to_f64(&self.rad, self.prec)
    }

    /// Upper bound on `|x|` as an f64 (rounded up slightly).
    pub fn abs_upper(&self) -> f64 {
        let v = scaled_to_f64(&(self.mid.abs() + &self.rad), self.prec);
        v * (1.0 + 1e-15) + f64::MIN_POSITIVE
    }

    /// `sqrt(n)` for a nonnegative integer.
    pub fn sqrt_int(n: u64, prec: u32) -> Ball {
        let scaled = BigInt::from(n) << (2 * prec);
        Ball {
            mid: scaled.sqrt(),
            rad: BigInt::one(),
            prec,
        }
    }

    /// Encloses the closed interval `[lo, hi]`; `None` for non-finite or reversed bounds.
    pub fn from_f64_interval(lo: f64, hi: f64, prec: u32) -> Option<Ball> {
        if lo > hi {
            return None;
        }
        let fixed = |x: f64| BigRational::from_float(x).map(|r| (r.numer() << prec) / r.denom());
        let (a, b) = (fixed(lo)?, fixed(hi)?);
        let mid: BigInt = (&a + &b) >> 1u32;
        let rad = (&b - &a) / 2 + 2;
        Some(Ball { mid, rad, prec })
    }

    /// Exact rational `num / den` enclosed at the given precision.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Ball {
        Ball {
            mid: (num << prec) / den,
            rad: BigInt::one(),
            prec,
        }
    }
}

fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0) as u32;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top * 2f64.powi(shift as i32 - prec as i32)
}

/// `atan(1/k)` by its alternating series.
fn atan_inv(k: u64, prec: u32) -> Ball {
    let one = BigInt::one() << prec;
    let k2 = BigInt::from(k * k);
    let mut power = &one / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut i = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        i += 1;
    }
    Ball {
        mid: sum,
        rad: BigInt::from(2 * i + 2),
        prec,
    }
}

pub fn pi(prec: u32) -> Ball {
    let a = atan_inv(5, prec).scale_int(&BigInt::from(16));
    let b = atan_inv(239, prec).scale_int(&BigInt::from(4));
    a.sub(&b)
}

/// Cosine and sine of a ball argument with `|x| <= 4`.
pub fn cos_sin(x: &Ball) -> (Ball, Ball) {
    let p = x.prec;
    let one = BigInt::one() << p;
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = one;
    let mut k = 0u64;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = ((&term * &x.mid) >> p) / BigInt::from(k);
    }
    let err = BigInt::from(32 * k + 8) + &x.rad;
    (
        Ball {
            mid: cos,
            rad: err.clone(),
            prec: p,
        },
        Ball {
            mid: sin,
            rad: err,
            prec: p,
        },
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: Ball::zero(prec),
            im: Ball::zero(prec),
        }
    }

    pub fn from_real(re: Ball) -> Self {
        let prec = re.prec;
        ComplexBall {
            re,
            im: Ball::zero(prec),
        }
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> ComplexBall {
        ComplexBall {
            re: self.re.scale_int(c),
            im: self.im.scale_int(c),
        }
    }

    pub fn div_int(&self, k: u64) -> ComplexBall {
        ComplexBall {
            re: self.re.div_int(k),
            im: self.im.div_int(k),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Upper bound on the modulus.
    pub fn abs_upper(&self) -> f64 {
        self.re.abs_upper().hypot(self.im.abs_upper())
    }

    pub fn radius(&self) -> f64 {
        self.re.rad_f64().max(self.im.rad_f64())
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sq(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

type RootKey = (u64, u32);

fn root_cache() -> &'static Mutex<HashMap<RootKey, Arc<Vec<ComplexBall>>>> {
    static CACHE: OnceLock<Mutex<HashMap<RootKey, Arc<Vec<ComplexBall>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosures of `zeta_n^j` for `j = 0..n` at working precision `prec`.
pub fn roots_of_unity(n: u64, prec: u32) -> Arc<Vec<ComplexBall>> {
    if let Some(hit) = root_cache().lock().unwrap().get(&(n, prec)) {
        return hit.clone();
    }
    let pi = pi(prec);
    let table: Vec<ComplexBall> = (0..n as i64)
        .map(|j| {
            // centered exponent keeps the angle inside [-pi, pi]
            let jc = if 2 * j > n as i64 { j - n as i64 } else { j };
            if jc == 0 {
                return ComplexBall::from_real(Ball::from_int(&BigInt::one(), prec));
            }
            let angle = pi.scale_int(&BigInt::from(2 * jc)).div_int(n);
            let (c, s) = cos_sin(&angle);
            ComplexBall { re: c, im: s }
        })
        .collect();
    let table = Arc::new(table);
    root_cache()
        .lock()
        .unwrap()
        .insert((n, prec), table.clone());
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!((p.mid_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad_f64() < 1e-50);
    }

    #[test]
    fn sixth_root() {
        let r = roots_of_unity(6, 192);
        let (re, im) = r[1].mid();
        assert!((re - 0.5).abs() < 1e-12);
        assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(r[1].radius() < 1e-40);
        // zeta_6^3 = -1
        let minus_one = ComplexBall::from_real(Ball::from_int(&BigInt::from(-1), 192));
        assert!(r[3].sub(&minus_one).contains_zero());
    }

    #[test]
    fn unit_modulus() {
        let r = roots_of_unity(7, 128);
        for z in r.iter() {
            let d = z.norm_sq().sub(&Ball::from_int(&BigInt::one(), 128));
            assert!(d.contains_zero());
        }
    }
}
