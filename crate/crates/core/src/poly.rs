//! Sparse multivariate polynomials with integer coefficients.
//!
//! A [`Poly`] keeps its terms sorted in descending order under its own
//! [`MonomialOrder`]. Over the rationals every polynomial is stored as an
//! integer multiple, which is all Gröbner computations and exact evaluation need.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::IntPoly;

pub const MAX_VARS: usize = 48;

/// Exponent vector over at most [`MAX_VARS`] variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            deg: 0,
            exps: [0; MAX_VARS],
        }
    }

    pub fn var(i: usize, e: u8) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = e;
        m.deg = e as u32;
        m
    }

    /// Panics when an exponent exceeds 255 or there are too many variables.
    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).expect("exponent fits in u8");
            m.deg += e;
        }
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i]
                .checked_add(o.exps[i])
                .expect("exponent overflow");
        }
        Monomial {
            deg: self.deg + o.deg,
            exps,
        }
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self`; requires `self | o`.
    #[inline]
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = o.exps[i] - self.exps[i];
        }
        Monomial {
            deg: o.deg - self.deg,
            exps,
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        let mut deg = 0;
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i].max(o.exps[i]);
            deg += *e as u32;
        }
        Monomial { deg, exps }
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&o.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Whether only variable `i` occurs.
    pub fn only_var(&self, i: usize) -> bool {
        self.exps[i] as u32 == self.deg
    }

    /// `(variable, exponent)` for the variables that occur.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e as u32))
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    DegLex,
    /// Grevlex on the first `k` variables, ties broken by grevlex on the rest;
    /// eliminates the first block.
    Block(usize),
}

fn grevlex_range(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = a.exps[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b.exps[lo..hi].iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for i in (lo..hi).rev() {
            if a.exps[i] != b.exps[i] {
                return b.exps[i].cmp(&a.exps[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegLex => a.deg.cmp(&b.deg).then_with(|| a.exps.cmp(&b.exps)),
            MonomialOrder::Block(k) => {
                grevlex_range(a, b, 0, k).then_with(|| grevlex_range(a, b, k, MAX_VARS))
            }
        }
    }

    /// Whether this order eliminates every variable before `keep` (which must be last).
    pub fn eliminates_before(&self, keep: usize) -> bool {
        matches!(*self, MonomialOrder::Lex) || *self == MonomialOrder::Block(keep)
    }
}

/// A polynomial with integer coefficients, terms descending under `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    order: MonomialOrder,
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero(order: MonomialOrder) -> Self {
        Poly {
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(order: MonomialOrder, c: impl Into<BigInt>) -> Self {
        Poly::from_terms(order, [(Monomial::one(), c.into())])
    }

    pub fn var(order: MonomialOrder, i: usize) -> Self {
        Poly::from_terms(order, [(Monomial::var(i, 1), BigInt::one())])
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(order: MonomialOrder, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut v: Vec<(Monomial, BigInt)> = terms.into_iter().collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => {
                    if out.last().is_some_and(|l| l.1.is_zero()) {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|l| l.1.is_zero()) {
            out.pop();
        }
        Poly { order, terms: out }
    }

    /// Trusts that `terms` is already sorted, merged and free of zeros.
    pub(crate) fn from_sorted(order: MonomialOrder, terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Poly { order, terms }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        Poly::from_terms(order, self.terms.iter().cloned())
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.deg()).max().unwrap_or(0)
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|t| t.1.bits()).max().unwrap_or(0)
    }

    fn check_order(&self, o: &Poly) {
        assert_eq!(self.order, o.order, "polynomials use different orders");
    }

    /// `a * self + b * mono * o`, with sorted merging.
    pub(crate) fn combine(&self, a: &BigInt, o: &Poly, b: &BigInt, mono: &Monomial) -> Poly {
        self.check_order(o);
        let ord = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let shifted = |k: usize| o.terms[k].0.mul(mono);
        while i < self.terms.len() || j < o.terms.len() {
            let take = if i == self.terms.len() {
                Ordering::Less
            } else if j == o.terms.len() {
                Ordering::Greater
            } else {
                ord.cmp(&self.terms[i].0, &shifted(j))
            };
            match take {
                Ordering::Greater => {
                    out.push((self.terms[i].0, a * &self.terms[i].1));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted(j), b * &o.terms[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a * &self.terms[i].1 + b * &o.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly::from_sorted(ord, out)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.combine(&BigInt::one(), o, &BigInt::one(), &Monomial::one())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.combine(&BigInt::one(), o, &-BigInt::one(), &Monomial::one())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.order);
        }
        Poly {
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Exact division of every coefficient by `d`.
    pub fn scale_down(&self, d: &BigInt) -> Poly {
        Poly {
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, c / d)).collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.order);
        }
        Poly {
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.check_order(o);
        let mut acc = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                acc.push((ma.mul(mb), a * b));
            }
        }
        Poly::from_terms(self.order, acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.order, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divided by its content, with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        Poly {
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, c / &g)).collect(),
        }
    }

    /// Whether some variable other than `i` occurs.
    pub fn involves_other_than(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| !m.only_var(i))
    }

    /// The polynomial as univariate in variable `i`, when nothing else occurs.
    pub fn to_univariate(&self, i: usize) -> Option<IntPoly> {
        if self.involves_other_than(i) {
            return None;
        }
        let deg = self.terms.iter().map(|t| t.0.exp(i)).max().unwrap_or(0) as usize;
        let mut c = vec![BigInt::zero(); deg + 1];
        for (m, a) in &self.terms {
            c[m.exp(i) as usize] += a;
        }
        Some(IntPoly::new(c))
    }

    pub fn from_univariate(order: MonomialOrder, i: usize, p: &IntPoly) -> Poly {
        Poly::from_terms(
            order,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(i, k as u8), c.clone())),
        )
    }

    /// Generic evaluation with the supplied ring operations.
    pub fn eval_with<V: Clone>(
        &self,
        vals: &[V],
        lift: impl Fn(&BigInt) -> V,
        add: impl Fn(&V, &V) -> V,
        mul: impl Fn(&V, &V) -> V,
    ) -> V {
        let mut acc = lift(&BigInt::zero());
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (i, e) in m.support() {
                for _ in 0..e {
                    t = mul(&t, &vals[i]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_VARS).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for (i, e) in m.support() {
                if e == 1 {
                    parts.push(self.names[i].clone());
                } else {
                    parts.push(format!("{}^{e}", self.names[i]));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn orders() {
        let (x2, xy, y2, z) = (mono(&[2, 0, 0]), mono(&[1, 1, 0]), mono(&[0, 2, 0]), mono(&[0, 0, 1]));
        let g = MonomialOrder::Grevlex;
        assert_eq!(g.cmp(&x2, &xy), Ordering::Greater);
        assert_eq!(g.cmp(&xy, &y2), Ordering::Greater);
        assert_eq!(g.cmp(&y2, &z), Ordering::Greater);
        // grevlex: x*z^2 < y^3 but lex: x*z^2 > y^3
        let (xz2, y3) = (mono(&[1, 0, 2]), mono(&[0, 3, 0]));
        assert_eq!(g.cmp(&xz2, &y3), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&xz2, &y3), Ordering::Greater);
        assert_eq!(MonomialOrder::DegLex.cmp(&xz2, &y3), Ordering::Greater);
        let b = MonomialOrder::Block(2);
        assert_eq!(b.cmp(&mono(&[0, 1, 0]), &mono(&[0, 0, 5])), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        let o = MonomialOrder::Grevlex;
        let x = Poly::var(o, 0);
        let y = Poly::var(o, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, q);
        assert_eq!(x.sub(&x), Poly::zero(o));
        let r = q.scale(&BigInt::from(-6)).primitive();
        assert_eq!(r, q);
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(format!("{}", q.display(&names)), "x^2 - y^2");
        let v = q.eval_with(&[BigInt::from(5), BigInt::from(3)], |c| c.clone(), |a, b| a + b, |a, b| a * b);
        assert_eq!(v, BigInt::from(16));
    }

    #[test]
    fn univariate_round_trip() {
        let o = MonomialOrder::Block(2);
        let p = IntPoly::from_i64(&[-4, 0, 1]);
        let q = Poly::from_univariate(o, 2, &p);
        assert_eq!(q.to_univariate(2), Some(p));
        assert!(Poly::var(o, 0).to_univariate(2).is_none());
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, 5).prop_map(|v| Monomial::from_exps(&v))
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            for o in [MonomialOrder::Grevlex, MonomialOrder::Lex, MonomialOrder::DegLex, MonomialOrder::Block(3)] {
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
                prop_assert_ne!(o.cmp(&a.mul(&c), &Monomial::one()), Ordering::Less);
                prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            }
        }

        #[test]
        fn lcm_and_division(a in arb_mono(), b in arb_mono()) {
            let l = a.lcm(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
            prop_assert_eq!(a.quotient_of(&l).mul(&a), l);
            prop_assert_eq!(a.coprime(&b), l == a.mul(&b));
        }
    }
}
