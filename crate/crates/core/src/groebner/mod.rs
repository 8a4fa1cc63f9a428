//! Buchberger's algorithm over the rationals, with polynomials kept primitive
//! over the integers, plus elimination to a univariate generator and the
//! tabulated univariate polynomials used as regression targets.

mod elim;
mod tables;

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use elim::{
    aggregate_system, eliminate_to_univariate, eliminate_with, probe_g0_zero, squarefree_part, Aggregate,
    ElimMethod, ElimOptions, Elimination, ProbeOutcome,
};
pub use tables::{
    coherence, f_table, real_root_gate, CoherenceReport, FTable, FTableEntry, GateViolation, TABULATED_M,
};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly};

/// How the next critical pair is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Smallest lcm degree, ties broken by the term order.
    Normal,
    /// Smallest sugar degree, ties broken by the term order.
    Sugar,
    /// Normal selection over a seeded shuffle of the input; pairs with equal
    /// lcm are drawn at random.
    Seeded(u64),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub s_pairs: u64,
    pub zero_reductions: u64,
    pub product_pruned: u64,
    pub chain_pruned: u64,
    pub max_coeff_bits: u64,
    pub basis_size: usize,
    pub wall_ms: u64,
}

impl Stats {
    /// Adds the counters of an earlier run; `basis_size` stays that of this run.
    pub fn absorb(&mut self, earlier: &Stats) {
        self.s_pairs += earlier.s_pairs;
        self.zero_reductions += earlier.zero_reductions;
        self.product_pruned += earlier.product_pruned;
        self.chain_pruned += earlier.chain_pruned;
        self.max_coeff_bits = self.max_coeff_bits.max(earlier.max_coeff_bits);
        self.wall_ms += earlier.wall_ms;
    }
}

/// A reduced Groebner basis, or a partial one when `certified` is false.
#[derive(Clone, Debug)]
pub struct GBasis {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
    pub nvars: usize,
    pub stats: Stats,
    /// The run finished; every critical pair was treated.
    pub certified: bool,
}

impl GBasis {
    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_unit()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.generators.iter().map(Poly::lm)
    }
}

/// Why a run stopped early.
enum Abort {
    Pairs,
    Bits,
    Time,
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Bit `i` set when variable `i` occurs.
fn mask(m: &Monomial) -> u64 {
    m.support().fold(0, |acc, (i, _)| acc | (1u64 << i))
}

/// Reducer set: leading monomials with occurrence masks for quick rejection.
struct Reducers<'a> {
    polys: Vec<&'a Poly>,
    masks: Vec<u64>,
}

impl<'a> Reducers<'a> {
    fn new(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let polys: Vec<&Poly> = polys.into_iter().collect();
        let masks = polys.iter().map(|p| mask(p.lm())).collect();
        Reducers { polys, masks }
    }

    fn find(&self, m: &Monomial) -> Option<&'a Poly> {
        let mm = mask(m);
        self.polys
            .iter()
            .zip(&self.masks)
            .find(|(p, &k)| k & !mm == 0 && p.lm().divides(m))
            .map(|(p, _)| *p)
    }
}

/// Content stripping kicks in once coefficients pass this many bits.
const STRIP_BITS: u64 = 256;

/// Fraction-free reduction of `f`: the result equals `mult * NF(f)` for the
/// returned rational `mult`. With `full` false only the leading term is reduced.
fn reduce_tracked(
    f: Poly,
    red: &Reducers<'_>,
    full: bool,
    mut tick: impl FnMut() -> bool,
) -> std::result::Result<(Poly, BigRational), Abort> {
    let mut f = f;
    let mut mult = BigRational::one();
    let mut i = 0;
    let mut steps = 0u32;
    while i < f.len() {
        let (mono, c) = &f.terms()[i];
        let Some(g) = red.find(mono) else {
            if !full {
                break;
            }
            i += 1;
            continue;
        };
        let q = g.lm().quotient_of(mono);
        let d = c.gcd(g.lc());
        let a = g.lc() / &d;
        let b = -(c / &d);
        f = f.combine(&a, g, &b, &q);
        mult *= BigRational::from_integer(a);
        steps += 1;
        if steps.is_multiple_of(16) && f.max_coeff_bits() > STRIP_BITS {
            let content = f.content();
            if !content.is_one() && !content.is_zero() {
                f = f.scale_down(&content);
                mult /= BigRational::from_integer(content);
            }
        }
        if steps.is_multiple_of(64) && tick() {
            return Err(Abort::Time);
        }
    }
    Ok((f, mult))
}

fn reduce(f: Poly, red: &Reducers<'_>, tick: impl FnMut() -> bool) -> std::result::Result<Poly, Abort> {
    reduce_tracked(f, red, true, tick).map(|(p, _)| p.primitive())
}

/// Remainder of `f` on division by `basis`, primitive with positive leading coefficient.
pub fn normal_form(f: &Poly, basis: &GBasis) -> Result<Poly> {
    if f.order() != basis.order {
        return Err(Error::TermOrderMismatch);
    }
    let red = Reducers::new(&basis.generators);
    Ok(reduce(f.clone(), &red, || false).unwrap_or_else(|_| unreachable!()))
}

/// Normal form together with `mult`, where the returned polynomial is `mult * NF(f)`.
pub(crate) fn normal_form_tracked(f: &Poly, basis: &GBasis) -> (Poly, BigRational) {
    let red = Reducers::new(&basis.generators);
    reduce_tracked(f.clone(), &red, true, || false).unwrap_or_else(|_| unreachable!())
}

fn s_poly(f: &Poly, g: &Poly, lcm: &Monomial) -> Poly {
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = -(f.lc() / &d);
    f.mul_term(&f.lm().quotient_of(lcm), &a)
        .combine(&BigInt::one(), g, &b, &g.lm().quotient_of(lcm))
}

struct Engine<'l> {
    order: MonomialOrder,
    polys: Vec<Poly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    stats: Stats,
    limits: &'l Limits,
    selection: Selection,
    rng: ChaCha8Rng,
    start: Instant,
}

impl Engine<'_> {
    fn timed_out(&self) -> bool {
        self.start.elapsed() > self.limits.timeout
    }

    fn active_polys(&self) -> impl Iterator<Item = &Poly> {
        self.polys.iter().zip(&self.active).filter(|(_, &a)| a).map(|(p, _)| p)
    }

    /// Gebauer-Moeller installation of a new element.
    fn update(&mut self, h: Poly, sugar: u32) {
        let hi = self.polys.len();
        let lh = *h.lm();
        let mut cands: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lg = self.polys[g].lm();
                let lcm = lh.lcm(lg);
                let s = (sugar + lcm.deg() - lh.deg()).max(self.sugar[g] + lcm.deg() - lg.deg());
                Pair { i: g, j: hi, lcm, sugar: s }
            })
            .collect();
        let total = cands.len() as u64;
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = cands.pop() {
            let lg = self.polys[p.i].lm();
            let dominated = cands.iter().chain(&kept).any(|o| o.lcm.divides(&p.lcm));
            if lh.coprime(lg) || !dominated {
                kept.push(p);
            }
        }
        let after_chain = kept.len() as u64;
        kept.retain(|p| !lh.coprime(self.polys[p.i].lm()));
        self.stats.chain_pruned += total - after_chain;
        self.stats.product_pruned += after_chain - kept.len() as u64;

        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && lh.lcm(polys[p.i].lm()) != p.lcm
                && lh.lcm(polys[p.j].lm()) != p.lcm)
        });
        self.stats.chain_pruned += (before - self.pairs.len()) as u64;
        self.pairs.extend(kept);

        for g in 0..hi {
            if self.active[g] && lh.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
        self.stats.max_coeff_bits = self.stats.max_coeff_bits.max(h.max_coeff_bits());
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.order;
        let key = |p: &Pair| match self.selection {
            Selection::Sugar => p.sugar,
            _ => p.lcm.deg(),
        };
        let cmp = |pa: &Pair, pb: &Pair| key(pa).cmp(&key(pb)).then_with(|| ord.cmp(&pa.lcm, &pb.lcm));
        let mut best = 0;
        for k in 1..self.pairs.len() {
            if cmp(&self.pairs[k], &self.pairs[best]).is_lt() {
                best = k;
            }
        }
        if let Selection::Seeded(_) = self.selection {
            let ties: Vec<usize> = (0..self.pairs.len())
                .filter(|&k| cmp(&self.pairs[k], &self.pairs[best]).is_eq())
                .collect();
            best = ties[self.rng.gen_range(0..ties.len())];
        }
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self, input: Vec<Poly>) -> std::result::Result<(), Abort> {
        for f in input {
            let red = Reducers::new(self.active_polys());
            let start = self.start;
            let timeout = self.limits.timeout;
            let sugar = f.total_degree();
            let h = reduce(f, &red, || start.elapsed() > timeout)?;
            if !h.is_zero() {
                if h.is_unit() {
                    return {
                        self.collapse_to_unit();
                        Ok(())
                    };
                }
                self.update(h, sugar);
            }
        }
        while let Some(p) = self.select() {
            if self.stats.s_pairs >= self.limits.max_pairs {
                self.pairs.push(p);
                return Err(Abort::Pairs);
            }
            if self.timed_out() {
                self.pairs.push(p);
                return Err(Abort::Time);
            }
            self.stats.s_pairs += 1;
            let s = s_poly(&self.polys[p.i], &self.polys[p.j], &p.lcm);
            let red = Reducers::new(self.active_polys());
            let (start, timeout) = (self.start, self.limits.timeout);
            let h = reduce(s, &red, || start.elapsed() > timeout)?;
            if h.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            if h.is_unit() {
                return {
                    self.collapse_to_unit();
                    Ok(())
                };
            }
            if h.max_coeff_bits() > self.limits.max_coeff_bits {
                self.stats.max_coeff_bits = self.stats.max_coeff_bits.max(h.max_coeff_bits());
                return Err(Abort::Bits);
            }
            self.update(h, p.sugar);
        }
        Ok(())
    }

    fn collapse_to_unit(&mut self) {
        self.polys = vec![Poly::constant(self.order, 1)];
        self.sugar = vec![0];
        self.active = vec![true];
        self.pairs.clear();
    }
}

/// Minimal, tail-reduced, primitive basis sorted by ascending leading monomial.
fn interreduce(polys: Vec<Poly>, order: MonomialOrder) -> Vec<Poly> {
    let mut polys = polys;
    polys.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in polys {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    (0..minimal.len())
        .map(|i| {
            let red = Reducers::new(minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, p)| p));
            reduce(minimal[i].clone(), &red, || false).unwrap_or_else(|_| unreachable!())
        })
        .collect()
}

/// Reduced Groebner basis with the normal selection strategy.
pub fn buchberger(input: &[Poly], nvars: usize, order: MonomialOrder, limits: &Limits) -> Result<GBasis> {
    buchberger_with(input, nvars, order, limits, Selection::Normal)
}

/// Reduced Groebner basis; on a limit the partial basis comes back inside
/// [`Error::LimitExceeded`] with `certified` false.
pub fn buchberger_with(
    input: &[Poly],
    nvars: usize,
    order: MonomialOrder,
    limits: &Limits,
    selection: Selection,
) -> Result<GBasis> {
    let seed = match selection {
        Selection::Seeded(s) => s,
        _ => 0,
    };
    let mut eng = Engine {
        order,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: Stats::default(),
        limits,
        selection,
        rng: ChaCha8Rng::seed_from_u64(seed),
        start: Instant::now(),
    };
    let mut input: Vec<Poly> = input
        .iter()
        .map(|p| p.with_order(order).primitive())
        .filter(|p| !p.is_zero())
        .collect();
    if let Selection::Seeded(_) = selection {
        input.shuffle(&mut eng.rng);
    }
    let outcome = eng.run(input);
    let done = outcome.is_ok();
    let active: Vec<Poly> = eng.active_polys().cloned().collect();
    let generators = if done { interreduce(active, order) } else { active };
    let mut stats = eng.stats;
    stats.basis_size = generators.len();
    stats.max_coeff_bits = generators
        .iter()
        .map(Poly::max_coeff_bits)
        .fold(stats.max_coeff_bits, u64::max);
    stats.wall_ms = eng.start.elapsed().as_millis() as u64;
    let basis = GBasis {
        generators,
        order,
        nvars,
        stats,
        certified: done,
    };
    match outcome {
        Ok(()) => Ok(basis),
        Err(why) => {
            log::info!(
                "groebner run stopped ({}) after {} pairs",
                match why {
                    Abort::Pairs => "pair limit",
                    Abort::Bits => "coefficient limit",
                    Abort::Time => "timeout",
                },
                basis.stats.s_pairs
            );
            Err(Error::LimitExceeded(Box::new(basis)))
        }
    }
}

/// Independent check that every S-polynomial of the basis reduces to zero.
pub fn certify(basis: &GBasis) -> bool {
    let g = &basis.generators;
    let red = Reducers::new(g);
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let s = s_poly(&g[i], &g[j], &g[i].lm().lcm(g[j].lm()));
            match reduce(s, &red, || false) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

/// True iff every variable has a pure power among the leading monomials.
pub fn is_zero_dimensional(basis: &GBasis) -> Result<bool> {
    if !basis.certified {
        return Err(Error::UncertifiedBasis);
    }
    Ok((0..basis.nvars).all(|i| basis.leading_monomials().any(|m| m.only_var(i))))
}
