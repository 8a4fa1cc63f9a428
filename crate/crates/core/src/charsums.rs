//! Multiplicative characters with the zero convention `chi^s(0) = [m | s]`,
//! and exact Gauss, Jacobi and class sums.
//!
//! Sums are accumulated as [`RootSum`]s: Jacobi and class sums in the group
//! ring of order `m`, Gauss sums in order `m * p` (always coprime factors,
//! since `m | q - 1`).

use serde::Serialize;

use crate::config::Limits;
use crate::cyclotomic::{CycInt, RootSum};
use crate::error::{Error, Result};
use crate::ff::{FFElement, FiniteField};

/// The character of order `m` with `chi(g) = zeta_m` for the field's generator.
#[derive(Clone, Copy, Debug)]
pub struct Character<'f> {
    field: &'f FiniteField,
    m: u64,
}

pub fn character(field: &FiniteField, m: u64) -> Result<Character<'_>> {
    Character::new(field, m)
}

pub fn chi_eval(chi: &Character<'_>, s: i64, alpha: FFElement) -> CycInt {
    chi.eval(s, alpha)
}

impl<'f> Character<'f> {
    pub fn new(field: &'f FiniteField, m: u64) -> Result<Self> {
        let qm1 = field.q() as u64 - 1;
        if m == 0 || !qm1.is_multiple_of(m) {
            return Err(Error::OrderDoesNotDivide { m, q_minus_one: qm1 });
        }
        Ok(Character { field, m })
    }

    pub fn field(&self) -> &'f FiniteField {
        self.field
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `f = (q - 1) / m`.
    pub fn f(&self) -> u64 {
        (self.field.q() as u64 - 1) / self.m
    }

    pub fn is_trivial_power(&self, s: i64) -> bool {
        s.rem_euclid(self.m as i64) == 0
    }

    /// `e` with `chi^s(alpha) = zeta_m^e`, or `None` when `chi^s(alpha) = 0`.
    #[inline]
    pub fn exponent(&self, s: i64, alpha: FFElement) -> Option<u64> {
        let m = self.m as i64;
        if alpha.is_zero() {
            return self.is_trivial_power(s).then_some(0);
        }
        let k = self.field.dlog_raw(alpha) as i64 % m;
        Some((k * s.rem_euclid(m)).rem_euclid(m) as u64)
    }

    pub fn eval(&self, s: i64, alpha: FFElement) -> CycInt {
        match self.exponent(s, alpha) {
            Some(e) => CycInt::zeta_pow(self.m, e as i64),
            None => CycInt::zero(self.m),
        }
    }

    /// `chi^s(-1)`, which is always `+1` or `-1`.
    pub fn sign_at_minus_one(&self, s: i64) -> i64 {
        let minus_one = self.field.neg(FFElement::ONE);
        let e = self.exponent(s, minus_one).expect("-1 is nonzero");
        if e == 0 {
            1
        } else {
            debug_assert_eq!(2 * e, self.m);
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Gauss,
    Jacobi,
    Class,
    JacobiRow,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharSumValue {
    pub kind: SumKind,
    pub q: u64,
    pub m: u64,
    pub s: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    pub value: CycInt,
}

/// Precomputed counting tables for one `(field, m)`; all sums in O(m^2) or O(q).
pub struct SumTables<'f> {
    chi: Character<'f>,
    /// `(dlog mod m, trace, multiplicity)` over nonzero elements.
    gauss: Vec<(u32, u32, i128)>,
    /// `joint[a * (m + 1) + b]` counts alpha with class `a` and `1 - alpha` of class `b`;
    /// class `m` stands for zero.
    joint: Vec<i128>,
    /// Class of `1 - alpha` over `alpha` in `H`, same zero marker.
    class: Vec<i128>,
}

impl<'f> SumTables<'f> {
    pub fn new(chi: Character<'f>) -> Self {
        let field = chi.field;
        let m = chi.m as usize;
        let cls = |x: FFElement| -> usize {
            if x.is_zero() {
                m
            } else {
                field.dlog_raw(x) as usize % m
            }
        };

        let mut pairs: Vec<(u32, u32)> = field
            .elements()
            .skip(1)
            .map(|a| (cls(a) as u32, field.trace_fast(a)))
            .collect();
        pairs.sort_unstable();
        let mut gauss: Vec<(u32, u32, i128)> = Vec::new();
        for pr in pairs {
            match gauss.last_mut() {
                Some(last) if (last.0, last.1) == pr => last.2 += 1,
                _ => gauss.push((pr.0, pr.1, 1)),
            }
        }

        let mut joint = vec![0i128; (m + 1) * (m + 1)];
        for a in field.elements() {
            let b = field.sub(FFElement::ONE, a);
            joint[cls(a) * (m + 1) + cls(b)] += 1;
        }

        let mut class = vec![0i128; m + 1];
        let f = chi.f() as i64;
        for j in 0..f {
            let alpha = field.gen_pow(chi.m as i64 * j);
            class[cls(field.sub(FFElement::ONE, alpha))] += 1;
        }

        SumTables {
            chi,
            gauss,
            joint,
            class,
        }
    }

    pub fn character(&self) -> &Character<'f> {
        &self.chi
    }

    /// Order of the ring holding Gauss sums.
    pub fn gauss_order(&self) -> u64 {
        self.chi.m * self.chi.field.p() as u64
    }

    /// `G(chi^s) = sum_alpha chi^s(alpha) zeta_p^{tr alpha}` in order `m * p`.
    pub fn gauss(&self, s: i64) -> RootSum {
        let m = self.chi.m as i64;
        let p = self.chi.field.p() as i64;
        let n = m * p;
        let sm = s.rem_euclid(m);
        let mut out = RootSum::zero(n as u64);
        for &(a, b, c) in &self.gauss {
            out.add_term(p * ((a as i64 * sm) % m) + m * b as i64, c);
        }
        if sm == 0 {
            out.add_term(0, 1);
        }
        out
    }

    /// Gaussian periods `eta_a = sum_{dlog alpha = a mod m} zeta_p^{tr alpha}` mapped
    /// through `zeta_p -> w` in `F_l`, for `a = 0..m`.
    pub(crate) fn periods_mod(&self, w: u64, l: u64) -> Vec<u64> {
        let p = self.chi.field.p() as u64;
        let mut pw = Vec::with_capacity(p as usize);
        let mut x = 1u64;
        for _ in 0..p {
            pw.push(x);
            x = mul_mod(x, w, l);
        }
        let mut eta = vec![0u64; self.chi.m as usize];
        for &(a, b, c) in &self.gauss {
            let c = c.rem_euclid(l as i128) as u64;
            let e = &mut eta[a as usize];
            *e = (*e + mul_mod(c, pw[b as usize], l)) % l;
        }
        eta
    }

    /// `J(chi^s, chi^t)` in order `m`.
    pub fn jacobi(&self, s: i64, t: i64) -> RootSum {
        let m = self.chi.m as usize;
        let (sm, tm) = (s.rem_euclid(m as i64), t.rem_euclid(m as i64));
        let mut out = RootSum::zero(m as u64);
        for a in 0..=m {
            if a == m && sm != 0 {
                continue;
            }
            let ea = if a == m { 0 } else { a as i64 * sm };
            for b in 0..=m {
                let c = self.joint[a * (m + 1) + b];
                if c == 0 || (b == m && tm != 0) {
                    continue;
                }
                let eb = if b == m { 0 } else { b as i64 * tm };
                out.add_term(ea + eb, c);
            }
        }
        out
    }

    /// `S_s = sum_{alpha in H} chi^s(1 - alpha)` in order `m`.
    pub fn class_sum(&self, s: i64) -> RootSum {
        let m = self.chi.m as usize;
        let sm = s.rem_euclid(m as i64);
        let mut out = RootSum::zero(m as u64);
        for (b, &c) in self.class.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if b == m {
                if sm == 0 {
                    out.add_term(0, c);
                }
            } else {
                out.add_term(b as i64 * sm, c);
            }
        }
        out
    }

    /// `sum_{t=1}^{m-1} J(chi^s, chi^t)`.
    pub fn jacobi_row(&self, s: i64) -> Result<RootSum> {
        if self.chi.is_trivial_power(s) {
            return Err(Error::TrivialPower { s, m: self.chi.m });
        }
        // Summing over t first: sum_{t=1}^{m-1} zeta^{b t} is m [b = 0] - 1, and zero
        // for the zero class. Only the row weights of the joint table survive.
        let m = self.chi.m as usize;
        let sm = s.rem_euclid(m as i64);
        let mut acc = RootSum::zero(self.chi.m);
        for a in 0..m {
            let row = &self.joint[a * (m + 1)..a * (m + 1) + m];
            let w = m as i128 * row[0] - row.iter().sum::<i128>();
            if w != 0 {
                acc.add_term(a as i64 * sm, w);
            }
        }
        Ok(acc)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    (a as u128 * b as u128 % l as u128) as u64
}

fn wrap(chi: &Character<'_>, kind: SumKind, s: i64, t: Option<i64>, value: CycInt) -> CharSumValue {
    CharSumValue {
        kind,
        q: chi.field.q() as u64,
        m: chi.m,
        s,
        t,
        value,
    }
}

pub fn gauss_sum(chi: &Character<'_>, s: i64) -> Result<CharSumValue> {
    gauss_sum_bounded(chi, s, Limits::default().cyclotomic_bound)
}

pub fn gauss_sum_bounded(chi: &Character<'_>, s: i64, bound: u64) -> Result<CharSumValue> {
    let n = chi.m * chi.field.p() as u64;
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "lcm(m, p)",
            value: n,
            bound,
        });
    }
    let g = SumTables::new(*chi).gauss(s);
    Ok(wrap(chi, SumKind::Gauss, s, None, g.to_cyc()))
}

pub fn jacobi_sum(chi: &Character<'_>, s: i64, t: i64) -> CharSumValue {
    let j = SumTables::new(*chi).jacobi(s, t);
    wrap(chi, SumKind::Jacobi, s, Some(t), j.to_cyc())
}

pub fn h_class_sum(chi: &Character<'_>, s: i64) -> CharSumValue {
    let v = SumTables::new(*chi).class_sum(s);
    wrap(chi, SumKind::Class, s, None, v.to_cyc())
}

pub fn jacobi_row_sum(chi: &Character<'_>, s: i64) -> Result<CharSumValue> {
    let v = SumTables::new(*chi).jacobi_row(s)?;
    Ok(wrap(chi, SumKind::JacobiRow, s, None, v.to_cyc()))
}

/// `k` with `k = r (mod m)` and `k = 1 (mod p)`: the automorphism of order
/// `m * p` that sends `G(chi^s)` to `G(chi^{rs})`.
pub fn gauss_galois_lift(r: i64, m: u64, p: u64) -> i64 {
    let (m, p) = (m as i64, p as i64);
    let (_, x, _) = crate::arith::ext_gcd(m, p);
    // k = r + m * ((1 - r) * x mod p), where m * x = 1 (mod p)
    let t = ((1 - r).rem_euclid(p) * x.rem_euclid(p)).rem_euclid(p);
    (r.rem_euclid(m) + m * t).rem_euclid(m * p)
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::ff::make_field;

    fn int(n: u64, c: i64) -> CycInt {
        CycInt::from_int(n, c)
    }

    #[test]
    fn characters() {
        let f7 = make_field(7, 1).unwrap();
        let chi = character(&f7, 2).unwrap();
        assert_eq!(chi.eval(1, f7.element(3).unwrap()), int(2, -1));
        assert_eq!(chi.eval(1, f7.element(4).unwrap()), int(2, 1));
        let triv = character(&f7, 1).unwrap();
        assert_eq!(triv.eval(1, FFElement::ZERO), int(1, 1));
        assert_eq!(chi.eval(0, FFElement::ZERO), int(2, 1));
        let f5 = make_field(5, 1).unwrap();
        let chi4 = character(&f5, 4).unwrap();
        assert_eq!(chi4.eval(2, FFElement::ZERO), CycInt::zero(4));
        assert!(matches!(
            character(&f7, 4),
            Err(Error::OrderDoesNotDivide { .. })
        ));
        let f16 = make_field(2, 4).unwrap();
        let chi3 = character(&f16, 3).unwrap();
        assert_eq!(chi3.eval(1, f16.element(2).unwrap()), CycInt::zeta_pow(3, 1));
    }

    #[test]
    fn gauss_examples() {
        let f5 = make_field(5, 1).unwrap();
        let chi = character(&f5, 2).unwrap();
        let g = gauss_sum(&chi, 1).unwrap().value;
        assert_eq!(&g * &g.conj(), int(10, 5));
        assert!(gauss_sum(&chi, 2).unwrap().value.is_zero());
        let f7 = make_field(7, 1).unwrap();
        let chi = character(&f7, 2).unwrap();
        let g = gauss_sum(&chi, 1).unwrap().value;
        assert_eq!(&g * &g, int(14, -7));
        let f997 = make_field(997, 1).unwrap();
        let chi = character(&f997, 2).unwrap();
        assert!(matches!(
            gauss_sum(&chi, 1),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn jacobi_examples() {
        let f5 = make_field(5, 1).unwrap();
        let chi = character(&f5, 4).unwrap();
        assert_eq!(jacobi_sum(&chi, 2, 2).value, int(4, -1));
        let f13 = make_field(13, 1).unwrap();
        let chi = character(&f13, 4).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                assert_eq!(jacobi_sum(&chi, s, t).value, jacobi_sum(&chi, t, s).value);
            }
        }
        let f7 = make_field(7, 1).unwrap();
        let chi = character(&f7, 2).unwrap();
        assert_eq!(jacobi_sum(&chi, 1, 1).value, int(2, 1));
    }

    #[test]
    fn class_sum_examples() {
        let f16 = make_field(2, 4).unwrap();
        let chi = character(&f16, 3).unwrap();
        assert_eq!(h_class_sum(&chi, 1).value, int(3, -2));
        assert_eq!(jacobi_row_sum(&chi, 1).unwrap().value, int(3, -5));
        let f7 = make_field(7, 1).unwrap();
        let chi = character(&f7, 2).unwrap();
        assert!(h_class_sum(&chi, 1).value.is_zero());
        assert_eq!(h_class_sum(&chi, 0).value, int(2, 3));
        assert_eq!(jacobi_row_sum(&chi, 1).unwrap().value, int(2, 1));
        assert!(matches!(
            jacobi_row_sum(&chi, 2),
            Err(Error::TrivialPower { .. })
        ));
    }

    #[test]
    fn row_sum_two_paths_f13() {
        let f13 = make_field(13, 1).unwrap();
        let chi = character(&f13, 4).unwrap();
        let row = jacobi_row_sum(&chi, 2).unwrap().value;
        let s2 = h_class_sum(&chi, 2).value;
        assert_eq!(row, &int(4, 1) + &s2.scale(&BigInt::from(4)));
    }

    #[test]
    fn row_sum_matches_termwise_jacobi() {
        for (p, e, m) in [(13, 1, 4), (2, 4, 3), (31, 1, 6), (37, 1, 9), (2, 6, 21), (7, 2, 8)] {
            let f = make_field(p, e).unwrap();
            let tables = SumTables::new(character(&f, m).unwrap());
            for s in 1..m as i64 {
                let mut direct = RootSum::zero(m);
                for t in 1..m as i64 {
                    direct.add_assign(&tables.jacobi(s, t));
                }
                direct.sub_assign(&tables.jacobi_row(s).unwrap());
                assert!(direct.is_zero(), "q={} m={m} s={s}", f.q());
            }
        }
    }

    #[test]
    fn galois_lift_moves_gauss_sums() {
        let f31 = make_field(31, 1).unwrap();
        let chi = character(&f31, 6).unwrap();
        let tables = SumTables::new(chi);
        let k = gauss_galois_lift(5, 6, 31);
        assert_eq!(k.rem_euclid(6), 5);
        assert_eq!(k.rem_euclid(31), 1);
        assert_eq!(tables.gauss(1).galois(k).unwrap(), tables.gauss(5));
    }
}
