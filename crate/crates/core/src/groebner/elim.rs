//! Elimination of everything but an aggregate variable `y`, by a block order
//! or by the minimal polynomial of `y` in the quotient of a grevlex basis.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{buchberger_with, is_zero_dimensional, normal_form_tracked, GBasis, Selection, Stats};
use crate::config::Limits;
use crate::cyclotomic::IntPoly;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::polysys::{Level, PolySystem, SYSTEM_ORDER};

/// The quantity kept by elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    /// `g_0` on the g-level.
    G0,
    /// `(1/m) sum_t ghat_t` on the ghat-level, which equals `g_0`.
    MeanGhat,
}

impl Aggregate {
    pub fn for_level(level: Level) -> Aggregate {
        match level {
            Level::G => Aggregate::G0,
            Level::Ghat => Aggregate::MeanGhat,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElimMethod {
    /// Block order with `y` alone in the last block.
    Block,
    /// Grevlex basis, then the minimal polynomial of `y` by linear algebra on normal forms.
    Minpoly,
}

#[derive(Clone, Debug)]
pub struct ElimOptions {
    pub limits: Limits,
    pub method: ElimMethod,
    pub selection: Selection,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions {
            limits: Limits::default(),
            method: ElimMethod::Block,
            selection: Selection::Normal,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    /// Primitive generator of the elimination ideal, positive leading coefficient.
    pub generator: IntPoly,
    pub squarefree: IntPoly,
    pub method: ElimMethod,
    pub stats: Stats,
}

/// The system's polynomials plus the aggregate definition in a new last variable `y`.
/// Returns the polynomials, the variable count and the index of `y`.
pub fn aggregate_system(sys: &PolySystem, target: Aggregate) -> Result<(Vec<Poly>, usize, usize)> {
    if Aggregate::for_level(sys.level) != target {
        return Err(Error::InvalidArgument(format!(
            "aggregate {target:?} does not apply to a {}-level system",
            sys.level.tag()
        )));
    }
    let y = sys.nvars();
    if y + 1 > crate::poly::MAX_VARS {
        return Err(Error::InvalidArgument("too many variables".into()));
    }
    let o = SYSTEM_ORDER;
    let def = match target {
        Aggregate::G0 => Poly::var(o, y).sub(&Poly::var(o, 0)),
        Aggregate::MeanGhat => (0..sys.m as usize).fold(
            Poly::var(o, y).scale(&BigInt::from(sys.m)),
            |acc, t| acc.sub(&Poly::var(o, t)),
        ),
    };
    let mut polys = sys.polys.clone();
    polys.push(def);
    Ok((polys, y + 1, y))
}

pub fn eliminate_to_univariate(sys: &PolySystem, target: Aggregate, limits: &Limits) -> Result<IntPoly> {
    let opts = ElimOptions {
        limits: limits.clone(),
        ..ElimOptions::default()
    };
    eliminate_with(sys, target, &opts).map(|e| e.generator)
}

pub fn eliminate_with(sys: &PolySystem, target: Aggregate, opts: &ElimOptions) -> Result<Elimination> {
    let (polys, nvars, y) = aggregate_system(sys, target)?;
    let mut basis = buchberger_with(&polys, nvars, MonomialOrder::Grevlex, &opts.limits, opts.selection)?;
    if opts.method == ElimMethod::Block && !basis.is_unit() {
        // The reduced grevlex basis is a far better starting point than the raw system.
        let seed: Vec<Poly> = basis
            .generators
            .iter()
            .map(|g| g.with_order(MonomialOrder::Block(y)))
            .collect();
        let first = basis.stats.clone();
        basis = buchberger_with(&seed, nvars, MonomialOrder::Block(y), &opts.limits, opts.selection)
            .map_err(|e| match e {
                Error::LimitExceeded(mut b) => {
                    b.stats.absorb(&first);
                    Error::LimitExceeded(b)
                }
                e => e,
            })?;
        basis.stats.absorb(&first);
    }
    let generator = if basis.is_unit() {
        IntPoly::one()
    } else {
        match opts.method {
            ElimMethod::Block => basis
                .generators
                .iter()
                .find_map(|g| g.to_univariate(y))
                .ok_or(Error::NotZeroDimensional)?,
            ElimMethod::Minpoly => {
                if !is_zero_dimensional(&basis)? {
                    return Err(Error::NotZeroDimensional);
                }
                minimal_polynomial(&basis, y)?
            }
        }
    };
    let generator = generator.primitive();
    Ok(Elimination {
        squarefree: squarefree_part(&generator)?,
        generator,
        method: opts.method,
        stats: basis.stats,
    })
}

pub fn squarefree_part(f: &IntPoly) -> Result<IntPoly> {
    f.squarefree_part()
}

type SparseVec = HashMap<usize, BigRational>;

/// Minimal polynomial of variable `y` modulo a zero-dimensional basis.
fn minimal_polynomial(basis: &GBasis, y: usize) -> Result<IntPoly> {
    let order = basis.order;
    let mut columns: HashMap<Monomial, usize> = HashMap::new();
    // Echelon rows: pivot column, row with pivot 1, and the combination of powers of y.
    let mut rows: Vec<(usize, SparseVec, Vec<BigRational>)> = Vec::new();
    let mut current = Poly::constant(order, 1);
    let mut mult = BigRational::one();
    let ypoly = Poly::var(order, y);
    // The quotient has at most one standard monomial per... bound the search generously.
    for k in 0..=4096usize {
        if k > 0 {
            let (r, m) = normal_form_tracked(&current.mul(&ypoly), basis);
            mult *= m;
            let content = r.content();
            current = if content.is_zero() { r } else { r.scale_down(&content) };
            if !content.is_zero() {
                mult /= BigRational::from_integer(content);
            }
        }
        let mut v: SparseVec = HashMap::new();
        for (mono, c) in current.terms() {
            let n = columns.len();
            let col = *columns.entry(*mono).or_insert(n);
            v.insert(col, BigRational::from_integer(c.clone()) / &mult);
        }
        let mut comb = vec![BigRational::zero(); k + 1];
        comb[k] = BigRational::one();
        for (pivot, row, rcomb) in &rows {
            let Some(f) = v.get(pivot).cloned() else { continue };
            for (col, a) in row {
                let e = v.entry(*col).or_insert_with(BigRational::zero);
                *e -= &f * a;
                if e.is_zero() {
                    v.remove(col);
                }
            }
            for (j, a) in rcomb.iter().enumerate() {
                comb[j] -= &f * a;
            }
        }
        if v.is_empty() {
            let den = comb.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            let coeffs = comb.iter().map(|c| c.numer() * (&den / c.denom())).collect();
            return Ok(IntPoly::new(coeffs).primitive());
        }
        let pivot = *v.keys().min().unwrap();
        let inv = v[&pivot].recip();
        for a in v.values_mut() {
            *a *= &inv;
        }
        for a in comb.iter_mut() {
            *a *= &inv;
        }
        rows.push((pivot, v, comb));
    }
    Err(Error::NotZeroDimensional)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeOutcome {
    Empty,
    Nonempty,
    Undecided,
}

/// Whether the variety meets `g_0 = 0` (g-level) or `sum_t ghat_t = 0` (ghat-level).
pub fn probe_g0_zero(sys: &PolySystem, limits: &Limits) -> Result<(ProbeOutcome, Stats)> {
    let o = SYSTEM_ORDER;
    let zero = match sys.level {
        Level::G => Poly::var(o, 0),
        Level::Ghat => (0..sys.m as usize).fold(Poly::zero(o), |acc, t| acc.add(&Poly::var(o, t))),
    };
    let mut polys = sys.polys.clone();
    polys.push(zero);
    match buchberger_with(&polys, sys.nvars(), MonomialOrder::Grevlex, limits, Selection::Normal) {
        Ok(b) if b.is_unit() => Ok((ProbeOutcome::Empty, b.stats)),
        Ok(b) => Ok((ProbeOutcome::Nonempty, b.stats)),
        Err(Error::LimitExceeded(b)) => Ok((ProbeOutcome::Undecided, b.stats)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::polysys::{gen_g_system, gen_ghat_system};

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn squarefree_examples() {
        let f = IntPoly::product(&[ip(&[-2, 1]), ip(&[-2, 1]), ip(&[2, 1])]);
        assert_eq!(squarefree_part(&f).unwrap(), ip(&[-4, 0, 1]));
        assert_eq!(squarefree_part(&ip(&[-1, 0, 7])).unwrap(), ip(&[-1, 0, 7]));
        assert_eq!(squarefree_part(&ip(&[0, 0, 0, 1])).unwrap(), ip(&[0, 1]));
        assert!(matches!(squarefree_part(&IntPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn aggregate_definitions() {
        let sys = gen_ghat_system(6, 0).unwrap();
        let (polys, nvars, y) = aggregate_system(&sys, Aggregate::MeanGhat).unwrap();
        assert_eq!((nvars, y), (7, 6));
        assert_eq!(polys.len(), sys.polys.len() + 1);
        assert!(aggregate_system(&sys, Aggregate::G0).is_err());
    }

    #[test]
    fn m6_both_methods() {
        let expected = [
            (0, IntPoly::from_i64(&[-4, 0, 1])),
            (1, IntPoly::from_i64(&[-1, 0, 7])),
        ];
        for (theta, want) in expected {
            let sys = gen_ghat_system(6, theta).unwrap();
            for method in [ElimMethod::Block, ElimMethod::Minpoly] {
                let opts = ElimOptions {
                    method,
                    ..ElimOptions::default()
                };
                let e = eliminate_with(&sys, Aggregate::MeanGhat, &opts).unwrap();
                assert_eq!(e.squarefree, want, "theta={theta} {method:?}");
                assert!(e.generator.lead().is_positive());
            }
        }
    }

    #[test]
    fn m6_ideal_membership_and_dimension() {
        let target = IntPoly::product(&[ip(&[-2, 1]), ip(&[2, 1]), ip(&[-1, 0, 7])]);
        for theta in [0, 1] {
            let (polys, nvars, y) = aggregate_system(&gen_ghat_system(6, theta).unwrap(), Aggregate::MeanGhat).unwrap();
            let basis = super::super::buchberger(&polys, nvars, MonomialOrder::Grevlex, &Limits::default()).unwrap();
            assert!(basis.certified);
            assert!(is_zero_dimensional(&basis).unwrap());
            let f = Poly::from_univariate(MonomialOrder::Grevlex, y, &target);
            assert!(super::super::normal_form(&f, &basis).unwrap().is_zero(), "theta={theta}");
            let one = Poly::constant(MonomialOrder::Grevlex, 1);
            assert!(!super::super::normal_form(&one, &basis).unwrap().is_zero());
        }
    }

    #[test]
    fn m6_seed_invariance() {
        let sys = gen_ghat_system(6, 1).unwrap();
        let base = eliminate_with(&sys, Aggregate::MeanGhat, &ElimOptions::default()).unwrap();
        for seed in [1, 7, 12345] {
            let opts = ElimOptions {
                method: ElimMethod::Minpoly,
                selection: Selection::Seeded(seed),
                ..ElimOptions::default()
            };
            assert_eq!(eliminate_with(&sys, Aggregate::MeanGhat, &opts).unwrap().squarefree, base.squarefree);
        }
    }

    #[test]
    fn m4_degenerate() {
        // Too few independent equations: theta = 1 leaves a curve through the explicit point.
        let e0 = eliminate_with(&gen_ghat_system(4, 0).unwrap(), Aggregate::MeanGhat, &ElimOptions::default()).unwrap();
        assert_eq!(e0.generator, IntPoly::one());
        for method in [ElimMethod::Block, ElimMethod::Minpoly] {
            let opts = ElimOptions {
                method,
                ..ElimOptions::default()
            };
            let r = eliminate_with(&gen_ghat_system(4, 1).unwrap(), Aggregate::MeanGhat, &opts);
            assert!(matches!(r, Err(Error::NotZeroDimensional)), "{method:?}");
        }
    }

    #[test]
    fn g_level_m6() {
        let sys = gen_g_system(6).unwrap();
        let f = eliminate_to_univariate(&sys, Aggregate::G0, &Limits::default()).unwrap();
        let sf = squarefree_part(&f).unwrap();
        // Both theta classes: roots 2, -2 and 1/sqrt 7 appear, and the explicit g_0 = m/2 - 1.
        for want in [ip(&[-2, 1]), ip(&[2, 1]), ip(&[-1, 0, 7])] {
            assert!(sf.div_exact(&want).is_some(), "{sf}");
        }
    }

    #[test]
    fn probe_m6() {
        for theta in [0, 1] {
            let (out, _) = probe_g0_zero(&gen_ghat_system(6, theta).unwrap(), &Limits::default()).unwrap();
            assert_eq!(out, ProbeOutcome::Empty, "theta={theta}");
        }
        let tight = Limits {
            max_pairs: 1,
            ..Limits::default()
        };
        let (out, _) = probe_g0_zero(&gen_ghat_system(6, 0).unwrap(), &tight).unwrap();
        assert_eq!(out, ProbeOutcome::Undecided);
    }
}
