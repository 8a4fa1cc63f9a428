//! Exact checks of the Gauss and Jacobi sum identities and the counting lemmas
//! relating class sums to difference counts.
//!
//! Products of Gauss sums over pairs `(s, t)` are tested on one representative
//! per orbit under `(s, t) -> (rs, rt)` with `r` a unit mod `m`; the Galois
//! automorphism `zeta_m -> zeta_m^r`, `zeta_p -> zeta_p` carries each identity
//! for `(s, t)` onto the one for `(rs, rt)`. Everything else runs over full ranges.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::charsums::{Character, SumTables};
use crate::cyclotomic::RootSum;
use crate::error::Result;
use crate::ff::{make_field, FFElement, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `G(chi^s) conj(G(chi^s)) = q` for `m` not dividing `s`.
    GaussNorm,
    /// `G(chi^0) = 0`.
    GaussTrivial,
    /// `G(chi^s) G(chi^-s) = chi^s(-1) q`.
    GaussReflection,
    /// `G(chi^s) G(chi^t) = J(chi^s, chi^t) G(chi^{s+t})` when `s + t` is nonzero mod `m`.
    GaussJacobi,
    /// `J(chi^s, chi^-s) = -chi^s(-1)`.
    JacobiOpposite,
    /// `chi^s(4) J(chi^s, chi^s) = J(chi^s, chi^{m/2})` for even `m`.
    JacobiDuplication,
    /// `sum_t J(chi^s, chi^t) = 1 + m S_s`.
    JacobiRowSum,
    /// `sum_{beta, gamma in H} chi^s(beta - gamma) = f S_s`.
    DoubleClassSum,
    /// `sum_s chi^-s(gamma) S_s = m |A| + 1`.
    ClassFourier,
    /// `|A| = |B|`.
    DifferenceBijection,
    /// `|C| = |B| + [gamma in H] + [-gamma in H]`.
    ModifiedDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: Identity,
    pub q: u64,
    pub m: u64,
    pub s: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub fields: u64,
    pub characters: u64,
    pub checked: BTreeMap<Identity, u64>,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, id: Identity, q: u64, m: u64, s: i64, t: Option<i64>, ok: bool) {
        *self.checked.entry(id).or_default() += 1;
        if !ok {
            self.failures.push(IdentityFailure {
                identity: id,
                q,
                m,
                s,
                t,
            });
        }
    }

    fn merge(&mut self, o: IdentityReport) {
        self.fields += o.fields;
        self.characters += o.characters;
        for (k, v) in o.checked {
            *self.checked.entry(k).or_default() += v;
        }
        self.failures.extend(o.failures);
    }
}

fn orbit_canonical(s: i64, t: i64, units: &[i64], m: i64) -> bool {
    units
        .iter()
        .all(|&r| ((r * s).rem_euclid(m), (r * t).rem_euclid(m)) >= (s, t))
}

/// All identities for the character of order `m` on `field`.
pub fn check_character(field: &FiniteField, m: u64) -> Result<IdentityReport> {
    let chi = Character::new(field, m)?;
    let tables = SumTables::new(chi);
    let q = field.q() as u64;
    let p = field.p() as u64;
    let mi = m as i64;
    let n = m * p;
    let mut rep = IdentityReport {
        characters: 1,
        ..Default::default()
    };

    let gauss: Vec<RootSum> = (0..mi).map(|s| tables.gauss(s)).collect();
    rep.record(Identity::GaussTrivial, q, m, 0, None, gauss[0].is_zero());

    let q_const = RootSum::constant(n, q as i128);
    for s in 1..mi {
        let g = &gauss[s as usize];
        let norm = g.mul(&g.galois(-1)?);
        rep.record(Identity::GaussNorm, q, m, s, None, norm.same_value(&q_const));
        let sign = chi.sign_at_minus_one(s) as i128;
        let refl = g.mul(&gauss[(mi - s) as usize]);
        rep.record(
            Identity::GaussReflection,
            q,
            m,
            s,
            None,
            refl.same_value(&q_const.scale(sign)),
        );
        let opp = tables.jacobi(s, -s);
        rep.record(
            Identity::JacobiOpposite,
            q,
            m,
            s,
            Some(-s),
            opp.same_value(&RootSum::constant(m, -sign)),
        );
        let mut row = tables.jacobi_row(s)?;
        row.sub_assign(&tables.class_sum(s).scale(m as i128));
        row.add_term(0, -1);
        rep.record(Identity::JacobiRowSum, q, m, s, None, row.is_zero());
        if m.is_multiple_of(2) {
            let four = field.from_int(4);
            let mut lhs = RootSum::zero(m);
            if let Some(e) = chi.exponent(s, four) {
                tables.jacobi(s, s).mul_acc(&RootSum::constant(m, 1), e as i64, &mut lhs);
            }
            let rhs = tables.jacobi(s, mi / 2);
            rep.record(Identity::JacobiDuplication, q, m, s, Some(s), lhs.same_value(&rhs));
        }
    }

    let units: Vec<i64> = (1..mi.max(2))
        .filter(|&r| arith::gcd(r as u64, m) == 1)
        .collect();
    for s in 0..mi {
        for t in 0..mi {
            if (s == 0 && t == 0) || (s + t) % mi == 0 || !orbit_canonical(s, t, &units, mi) {
                continue;
            }
            let lhs = gauss[s as usize].mul(&gauss[t as usize]);
            let j = tables.jacobi(s, t).lift(n)?;
            let rhs = j.mul(&gauss[((s + t) % mi) as usize]);
            rep.record(Identity::GaussJacobi, q, m, s, Some(t), lhs.same_value(&rhs));
        }
    }

    if m >= 2 {
        check_counting(field, &chi, &tables, &mut rep);
    }
    Ok(rep)
}

/// The counting lemmas; `m = 1` is excluded since `chi(0) = 1` then breaks the
/// correspondence between `alpha = 1` and the zero difference.
fn check_counting(field: &FiniteField, chi: &Character<'_>, tables: &SumTables<'_>, rep: &mut IdentityReport) {
    let q = field.q() as u64;
    let m = chi.m();
    let mi = m as i64;
    let f = chi.f() as i64;
    let h: Vec<FFElement> = (0..f).map(|j| field.gen_pow(mi * j)).collect();
    let class_sums: Vec<RootSum> = (0..mi).map(|s| tables.class_sum(s)).collect();

    // Double sum over H x H, grouped by the class of beta - gamma.
    let mut diff_class = vec![0i128; m as usize + 1];
    let mut b = vec![0u64; q as usize];
    let mut c = vec![0u64; q as usize];
    let mut m_set = h.clone();
    m_set.push(FFElement::ZERO);
    for &x in &m_set {
        for &y in &m_set {
            c[field.sub(x, y).index() as usize] += 1;
        }
    }
    for &x in &h {
        for &y in &h {
            let d = field.sub(x, y);
            b[d.index() as usize] += 1;
            let slot = if d.is_zero() { m as usize } else { (field.dlog_raw(d) as u64 % m) as usize };
            diff_class[slot] += 1;
        }
    }
    for s in 0..mi {
        let mut lhs = RootSum::zero(m);
        for (cls, &c) in diff_class.iter().enumerate() {
            if cls == m as usize {
                if s == 0 {
                    lhs.add_term(0, c);
                }
            } else {
                lhs.add_term(cls as i64 * s, c);
            }
        }
        let rhs = class_sums[s as usize].scale(f as i128);
        rep.record(Identity::DoubleClassSum, q, m, s, None, lhs.same_value(&rhs));
    }

    // |A| depends only on the class of gamma.
    let mut a_by_class = vec![0u64; m as usize];
    for &alpha in &h {
        let d = field.sub(FFElement::ONE, alpha);
        if !d.is_zero() {
            a_by_class[(field.dlog_raw(d) as u64 % m) as usize] += 1;
        }
    }
    for k in 0..mi {
        let mut lhs = RootSum::zero(m);
        for s in 0..mi {
            class_sums[s as usize].mul_acc(&RootSum::constant(m, 1), -s * k, &mut lhs);
        }
        let rhs = RootSum::constant(m, (m * a_by_class[k as usize] + 1) as i128);
        rep.record(Identity::ClassFourier, q, m, k, None, lhs.same_value(&rhs));
    }

    let mut in_h = vec![false; q as usize];
    for &x in &h {
        in_h[x.index() as usize] = true;
    }
    for gamma in field.elements().skip(1) {
        let gi = gamma.index() as usize;
        let a = a_by_class[(field.dlog_raw(gamma) as u64 % m) as usize];
        rep.record(Identity::DifferenceBijection, q, m, gi as i64, None, a == b[gi]);
        // C adds the pairs (gamma, 0) and (0, -gamma) to B.
        let predicted = b[gi] + in_h[gi] as u64 + in_h[field.neg(gamma).index() as usize] as u64;
        rep.record(Identity::ModifiedDecomposition, q, m, gi as i64, None, c[gi] == predicted);
    }
}

/// Every identity for every `q <= q_max` and every `m | q - 1`, in parallel over `q`.
pub fn check_all_up_to(q_max: u64) -> Result<IdentityReport> {
    let fields: Vec<(u64, u64, u32)> = arith::prime_powers_up_to(q_max);
    let parts: Vec<Result<IdentityReport>> = fields
        .par_iter()
        .map(|&(q, p, e)| {
            let field = make_field(p, e)?;
            let mut rep = IdentityReport {
                fields: 1,
                ..Default::default()
            };
            for m in arith::divisors(q - 1) {
                rep.merge(check_character(&field, m)?);
            }
            Ok(rep)
        })
        .collect();
    let mut total = IdentityReport::default();
    for p in parts {
        total.merge(p?);
    }
    total.failures.sort_by_key(|f| (f.q, f.m, f.identity, f.s, f.t));
    Ok(total)
}
