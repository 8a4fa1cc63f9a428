//! Cyclotomic classes `H_{q,m}`, `M_{q,m}` and four independent difference-set checkers.
//!
//! The direct checker counts differences and uses no character theory. The
//! other three evaluate character, Jacobi and Gauss sums exactly. All three
//! character criteria are Galois-equivariant in `s`, so only `s` dividing `m`
//! is evaluated: the automorphism `zeta_m -> zeta_m^r` (extended by
//! `zeta_p -> zeta_p` for Gauss sums) maps the condition for `s` onto the
//! condition for `rs`.

mod family;
mod scan;

use std::fmt;

use serde::Serialize;

pub use family::{known_family_match, Family};
pub use scan::{scan, ClassificationEntry, ClassificationTable, ModifiedMode, ScanRequest};

use crate::arith;
use crate::charsums::{mul_mod, Character, SumTables};
use crate::config::Limits;
use crate::cyclotomic::RootSum;
use crate::error::{Error, Result};
use crate::ff::{FFElement, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    DifferenceSet,
    NotDifferenceSet,
    InfeasibleParams,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::DifferenceSet => "difference_set",
            Verdict::NotDifferenceSet => "not_difference_set",
            Verdict::InfeasibleParams => "infeasible_params",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Charsum,
    Jacobi,
    Gauss,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Direct, Method::Charsum, Method::Jacobi, Method::Gauss];

    pub fn parse(s: &str) -> Result<Method> {
        match s.trim() {
            "direct" => Ok(Method::Direct),
            "charsum" => Ok(Method::Charsum),
            "jacobi" => Ok(Method::Jacobi),
            "gauss" => Ok(Method::Gauss),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSParams {
    pub v: u64,
    pub k: u64,
    pub lambda: Option<u64>,
    pub n: Option<u64>,
    pub m: u64,
    pub f: u64,
    pub modified: bool,
}

impl DSParams {
    pub fn new(q: u64, m: u64, modified: bool) -> Result<DSParams> {
        if m == 0 || !(q - 1).is_multiple_of(m) {
            return Err(Error::OrderDoesNotDivide {
                m,
                q_minus_one: q - 1,
            });
        }
        let f = (q - 1) / m;
        let (k, top) = if modified { (f + 1, f + 1) } else { (f, f - 1) };
        let lambda = (top % m == 0).then_some(top / m);
        let n = lambda.map(|l| k - l);
        Ok(DSParams {
            v: q,
            k,
            lambda,
            n,
            m,
            f,
            modified,
        })
    }

    pub fn feasible(&self) -> bool {
        self.lambda.is_some()
    }

    pub fn trivial(&self) -> bool {
        self.n.is_some_and(|n| n <= 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicClass {
    pub q: u64,
    pub m: u64,
    pub modified: bool,
    pub elements: Vec<FFElement>,
}

pub fn cyclotomic_class(field: &FiniteField, m: u64, modified: bool) -> Result<CyclotomicClass> {
    let chi = Character::new(field, m)?;
    let mut elements: Vec<FFElement> = (0..chi.f() as i64)
        .map(|j| field.gen_pow(m as i64 * j))
        .collect();
    if modified {
        elements.push(FFElement::ZERO);
    }
    elements.sort_unstable();
    Ok(CyclotomicClass {
        q: field.q() as u64,
        m,
        modified,
        elements,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub gamma: FFElement,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSReport {
    pub q: u64,
    pub params: DSParams,
    pub verdict: Verdict,
    pub methods_agreeing: Vec<Method>,
    pub methods_disagreeing: Vec<Method>,
    pub witness: Option<Witness>,
    pub family: Option<Family>,
}

impl DSReport {
    pub fn nontrivial_hit(&self) -> bool {
        self.verdict == Verdict::DifferenceSet && !self.params.trivial()
    }

    pub fn consistent(&self) -> bool {
        self.methods_disagreeing.is_empty()
    }
}

fn family_for(params: &DSParams, verdict: Verdict) -> Option<Family> {
    (verdict == Verdict::DifferenceSet && !params.trivial()).then(|| {
        known_family_match(params.v, params.m, params.modified).unwrap_or(Family::Unexplained)
    })
}

/// O(k^2) difference counting.
pub fn check_direct(field: &FiniteField, class: &CyclotomicClass) -> DSReport {
    let params = DSParams::new(class.q, class.m, class.modified).expect("class is well formed");
    let mut verdict = Verdict::InfeasibleParams;
    let mut witness = None;
    if let Some(lambda) = params.lambda {
        let mut counts = vec![0u64; field.q() as usize];
        for &a in &class.elements {
            for &b in &class.elements {
                counts[field.sub(a, b).index() as usize] += 1;
            }
        }
        verdict = Verdict::DifferenceSet;
        if let Some((g, &c)) = counts.iter().enumerate().skip(1).find(|(_, &c)| c != lambda) {
            verdict = Verdict::NotDifferenceSet;
            witness = Some(Witness {
                gamma: field.element(g as u32).unwrap(),
                count: c,
            });
        }
    }
    DSReport {
        q: class.q,
        family: family_for(&params, verdict),
        params,
        verdict,
        methods_agreeing: vec![Method::Direct],
        methods_disagreeing: Vec::new(),
        witness,
    }
}

/// Representatives `s` of `{1, ..., m-1}` modulo multiplication by units of `Z/m`.
pub fn orbit_representatives(m: u64) -> Vec<i64> {
    arith::divisors(m)
        .into_iter()
        .filter(|&d| d < m)
        .map(|d| d as i64)
        .collect()
}

fn feasibility(field: &FiniteField, m: u64, modified: bool) -> Result<DSParams> {
    DSParams::new(field.q() as u64, m, modified)
}

fn decide(all_zero: bool) -> Verdict {
    if all_zero {
        Verdict::DifferenceSet
    } else {
        Verdict::NotDifferenceSet
    }
}

pub(crate) fn charsum_verdict(tables: &SumTables<'_>, modified: bool) -> Verdict {
    let chi = tables.character();
    let m = chi.m();
    decide(orbit_representatives(m).into_iter().all(|s| {
        let mut v = tables.class_sum(s);
        if modified {
            // S_s + 1 + chi^s(-1) = 0
            v.add_term(0, 1 + chi.sign_at_minus_one(s) as i128);
        }
        v.is_zero()
    }))
}

pub(crate) fn jacobi_verdict(tables: &SumTables<'_>, modified: bool) -> Verdict {
    let chi = tables.character();
    let m = chi.m() as i128;
    decide(orbit_representatives(chi.m()).into_iter().all(|s| {
        let mut v = tables.jacobi_row(s).expect("s is not a multiple of m");
        let target = if modified {
            1 - m - m * chi.sign_at_minus_one(s) as i128
        } else {
            1
        };
        v.add_term(0, -target);
        v.is_zero()
    }))
}

pub(crate) fn gauss_verdict(tables: &SumTables<'_>, modified: bool) -> Verdict {
    let chi = tables.character();
    let m = chi.m() as i64;
    let n = tables.gauss_order();
    let sums: Vec<RootSum> = (0..m).map(|t| tables.gauss(t)).collect();
    let factor = if modified { 1 - m } else { 1 };
    decide(orbit_representatives(chi.m()).into_iter().all(|s| {
        let mut lhs = RootSum::zero(n);
        for t in 1..m {
            if t == s {
                continue;
            }
            let term = sums[t as usize].mul(&sums[(s - t).rem_euclid(m) as usize]);
            let sign = chi.sign_at_minus_one(t) as i128;
            lhs.add_assign(&term.scale(sign));
        }
        let coeff = factor as i128 * (1 + chi.sign_at_minus_one(s) as i128);
        lhs.sub_assign(&sums[s as usize].scale(coeff));
        lhs.is_zero()
    }))
}

/// A prime `l = 1 (mod n)` above `bound` and an element of order exactly `n` in `F_l`.
fn split_prime(n: u64, bound: u64) -> (u64, u64) {
    let primes = arith::prime_divisors(n);
    let mut l = (bound / n + 1) * n + 1;
    loop {
        if arith::is_prime(l) {
            let cofactor = (l - 1) / n;
            for a in 2..l {
                let w = arith::pow_mod(a, cofactor, l);
                if primes.iter().all(|&r| arith::pow_mod(w, n / r, l) != 1) {
                    return (l, w);
                }
            }
        }
        l += n;
    }
}

/// The Gauss-sum criterion evaluated in `F_l` for every `s` in `1..m`.
///
/// Exact: each residual has all complex conjugates bounded by `B = m q + 2 m sqrt q < l`,
/// so vanishing modulo every prime of `Z[zeta_{mp}]` above `l` forces it to be zero.
/// The Galois group permutes the residuals over `s` up to roots of unity, so checking
/// every `s` under one embedding covers every embedding of the orbit representatives.
pub(crate) fn gauss_verdict_modular(tables: &SumTables<'_>, modified: bool) -> Verdict {
    let chi = tables.character();
    let m = chi.m();
    let p = chi.field().p() as u64;
    let q = chi.field().q() as u64;
    let (l, w) = split_prime(m * p, 2 * m * q + 2 * m * (arith::isqrt(q) + 1) + 2);
    let wm = arith::pow_mod(w, p, l); // order m
    let wp = arith::pow_mod(w, m, l); // order p
    let eta = tables.periods_mod(wp, l);
    let zm: Vec<u64> = (0..m).map(|i| arith::pow_mod(wm, i, l)).collect();
    let g: Vec<u64> = (0..m)
        .map(|t| {
            (0..m).fold(0u64, |acc, a| {
                (acc + mul_mod(eta[a as usize], zm[((a * t) % m) as usize], l)) % l
            })
        })
        .collect();
    let sign = |t: u64| chi.sign_at_minus_one(t as i64);
    let reduce = |x: i128| x.rem_euclid(l as i128) as u64;
    let factor: i128 = if modified { 1 - m as i128 } else { 1 };
    decide((1..m).all(|s| {
        let mut acc = 0u64;
        for t in (1..m).filter(|&t| t != s) {
            let term = mul_mod(g[t as usize], g[((s + m - t) % m) as usize], l);
            acc = if sign(t) == 1 { (acc + term) % l } else { (acc + l - term) % l };
        }
        let c = reduce(factor * (1 + sign(s) as i128));
        (acc + l - mul_mod(c, g[s as usize], l)).is_multiple_of(l)
    }))
}

pub fn check_charsum(field: &FiniteField, m: u64, modified: bool) -> Result<Verdict> {
    if !feasibility(field, m, modified)?.feasible() {
        return Ok(Verdict::InfeasibleParams);
    }
    let tables = SumTables::new(Character::new(field, m)?);
    Ok(charsum_verdict(&tables, modified))
}

pub fn check_jacobi(field: &FiniteField, m: u64, modified: bool) -> Result<Verdict> {
    if !feasibility(field, m, modified)?.feasible() {
        return Ok(Verdict::InfeasibleParams);
    }
    let tables = SumTables::new(Character::new(field, m)?);
    Ok(jacobi_verdict(&tables, modified))
}

/// Group-ring evaluation when `m p` is within the cyclotomic bound, modular otherwise.
pub fn check_gauss(field: &FiniteField, m: u64, modified: bool, limits: &Limits) -> Result<Verdict> {
    if !feasibility(field, m, modified)?.feasible() {
        return Ok(Verdict::InfeasibleParams);
    }
    let tables = SumTables::new(Character::new(field, m)?);
    Ok(gauss_dispatch(&tables, modified, limits))
}

fn gauss_dispatch(tables: &SumTables<'_>, modified: bool, limits: &Limits) -> Verdict {
    if tables.gauss_order() <= limits.cyclotomic_bound {
        gauss_verdict(tables, modified)
    } else {
        gauss_verdict_modular(tables, modified)
    }
}

/// Runs the requested checkers; the direct verdict is authoritative when requested.
pub fn check_all(
    field: &FiniteField,
    m: u64,
    modified: bool,
    methods: &[Method],
    limits: &Limits,
) -> Result<DSReport> {
    let class = cyclotomic_class(field, m, modified)?;
    let params = DSParams::new(field.q() as u64, m, modified)?;
    let mut methods: Vec<Method> = methods.to_vec();
    methods.sort_unstable();
    methods.dedup();

    let mut results: Vec<(Method, Verdict)> = Vec::new();
    let mut witness = None;
    let needs_tables = params.feasible() && methods.iter().any(|&x| x != Method::Direct);
    let tables = needs_tables
        .then(|| Character::new(field, m).map(SumTables::new))
        .transpose()?;

    for &method in &methods {
        let verdict = if !params.feasible() {
            Verdict::InfeasibleParams
        } else {
            let t = tables.as_ref();
            match method {
                Method::Direct => {
                    let r = check_direct(field, &class);
                    witness = r.witness;
                    r.verdict
                }
                Method::Charsum => charsum_verdict(t.unwrap(), modified),
                Method::Jacobi => jacobi_verdict(t.unwrap(), modified),
                Method::Gauss => gauss_dispatch(t.unwrap(), modified, limits),
            }
        };
        results.push((method, verdict));
    }

    let reference = results
        .iter()
        .find(|(mm, _)| *mm == Method::Direct)
        .or(results.first())
        .map(|&(_, v)| v)
        .ok_or_else(|| Error::InvalidArgument("no checker could run".into()))?;
    let (agree, disagree): (Vec<_>, Vec<_>) = results.iter().partition(|(_, v)| *v == reference);
    Ok(DSReport {
        q: field.q() as u64,
        family: family_for(&params, reference),
        params,
        verdict: reference,
        methods_agreeing: agree.into_iter().map(|&(mm, _)| mm).collect(),
        methods_disagreeing: disagree.into_iter().map(|&(mm, _)| mm).collect(),
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// `|A_{chi,gamma}|`, `|B_{q,m,gamma}|` and `|C_{q,m,gamma}|` by enumeration.
pub fn difference_counts(field: &FiniteField, m: u64, gamma: FFElement) -> Result<DifferenceCounts> {
    if gamma.is_zero() {
        return Err(Error::ZeroGamma);
    }
    let chi = Character::new(field, m)?;
    let h = cyclotomic_class(field, m, false)?;
    let target = chi.exponent(1, gamma);
    let a = h
        .elements
        .iter()
        .filter(|&&x| chi.exponent(1, field.sub(FFElement::ONE, x)) == target)
        .count() as u64;
    let count_pairs = |set: &[FFElement]| -> u64 {
        let mut c = 0;
        for &x in set {
            for &y in set {
                if field.sub(x, y) == gamma {
                    c += 1;
                }
            }
        }
        c
    };
    let b = count_pairs(&h.elements);
    let mut m_set = h.elements.clone();
    m_set.push(FFElement::ZERO);
    let c = count_pairs(&m_set);
    Ok(DifferenceCounts { a, b, c })
}

/// Whether multiplication by `t * 1` maps `D` onto a translate of itself.
pub fn multiplier_check(field: &FiniteField, class: &CyclotomicClass, t: i64) -> Result<bool> {
    let t = field.from_int(t);
    if t.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let mut member = vec![false; field.q() as usize];
    for &d in &class.elements {
        member[d.index() as usize] = true;
    }
    let scaled: Vec<FFElement> = class.elements.iter().map(|&d| field.mul(t, d)).collect();
    Ok(field.elements().any(|s| {
        scaled
            .iter()
            .all(|&x| member[field.sub(x, s).index() as usize])
    }))
}
