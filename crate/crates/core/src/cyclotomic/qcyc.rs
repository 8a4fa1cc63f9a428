//! Elements of `Q(zeta_n)` as an integral numerator over a positive integer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{Ball, ComplexBall, CycInt};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QCyc {
    num: CycInt,
    den: BigInt,
}

impl QCyc {
    pub fn new(num: CycInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut q = if den.is_negative() {
            QCyc { num: -num, den: -den }
        } else {
            QCyc { num, den }
        };
        q.normalize();
        q
    }

    fn normalize(&mut self) {
        let g = self
            .num
            .coeffs()
            .iter()
            .fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            let coeffs = self.num.coeffs().iter().map(|c| c / &g).collect();
            self.num = CycInt::from_dense(self.num.order(), coeffs);
            self.den = &self.den / &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn from_cyc(num: CycInt) -> Self {
        QCyc {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_int(n: u64, c: impl Into<BigInt>) -> Self {
        Self::from_cyc(CycInt::from_int(n, c))
    }

    pub fn from_ratio(n: u64, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(CycInt::from_int(n, num), den.into())
    }

    pub fn zero(n: u64) -> Self {
        Self::from_cyc(CycInt::zero(n))
    }

    pub fn zeta_pow(n: u64, k: i64) -> Self {
        Self::from_cyc(CycInt::zeta_pow(n, k))
    }

    pub fn order(&self) -> u64 {
        self.num.order()
    }

    pub fn numerator(&self) -> &CycInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Integral value, when the denominator is one.
    pub fn as_cyc(&self) -> Option<&CycInt> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn scale(&self, num: &BigInt, den: &BigInt) -> QCyc {
        QCyc::new(self.num.scale(num), &self.den * den)
    }

    pub fn lift(&self, target: u64) -> Result<QCyc> {
        Ok(QCyc {
            num: self.num.lift(target)?,
            den: self.den.clone(),
        })
    }

    pub fn galois(&self, k: i64) -> Result<QCyc> {
        Ok(QCyc {
            num: self.num.galois(k)?,
            den: self.den.clone(),
        })
    }

    pub fn conj(&self) -> QCyc {
        self.galois(-1).expect("-1 is a unit")
    }

    pub fn embed(&self, precision: u32) -> ComplexBall {
        let z = self.num.embed(precision);
        if self.den.is_one() {
            return z;
        }
        let inv = Ball::from_ratio(&BigInt::one(), &self.den, z.re.prec());
        z.mul(&ComplexBall::from_real(inv))
    }

    /// Value equality regardless of ambient order.
    pub fn same_value(&self, o: &QCyc) -> bool {
        (self - o).is_zero()
    }

    pub fn pow(&self, k: u32) -> QCyc {
        let mut acc = QCyc::from_int(self.order(), 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl From<CycInt> for QCyc {
    fn from(c: CycInt) -> Self {
        QCyc::from_cyc(c)
    }
}

impl Add for &QCyc {
    type Output = QCyc;
    fn add(self, o: &QCyc) -> QCyc {
        if self.den == o.den {
            return QCyc::new(&self.num + &o.num, self.den.clone());
        }
        QCyc::new(
            &self.num.scale(&o.den) + &o.num.scale(&self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &QCyc {
    type Output = QCyc;
    fn sub(self, o: &QCyc) -> QCyc {
        self + &(-o)
    }
}

impl Mul for &QCyc {
    type Output = QCyc;
    fn mul(self, o: &QCyc) -> QCyc {
        QCyc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &QCyc {
    type Output = QCyc;
    fn neg(self) -> QCyc {
        QCyc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QCyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / {}", self.num, self.den)
        }
    }
}

impl Serialize for QCyc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QCyc", 3)?;
        st.serialize_field("n", &self.num.order())?;
        let coeffs: Vec<String> = self.num.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}
