//! Candidate points of the polynomial systems: the explicit family, tuples of
//! Gauss sums, the symmetries acting on them, the DFT bridge between the two
//! levels, and residual checks.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{planar_system, Level, PolySystem};
use crate::arith;
use crate::charsums::{Character, SumTables};
use crate::cyclotomic::{roots_of_unity, Ball, ComplexBall, CycInt, QCyc, RootSum, GUARD_BITS};
use crate::diffsets::{check_direct, cyclotomic_class, known_family_match, Family, Verdict};
use crate::error::{Error, Result};
use crate::ff::{make_field, FiniteField};
use crate::poly::Poly;

/// Embedding precision of numeric checks.
pub const NUMERIC_PREC: u32 = 128;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest root-of-unity order accepted when reading a solution file.
const MAX_READ_ORDER: u64 = 1 << 16;

fn working_prec() -> u32 {
    NUMERIC_PREC.max(53) + GUARD_BITS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "r", rename_all = "snake_case")]
pub enum Transform {
    Negate,
    Twist(i64),
    Reindex(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    ExplicitProp,
    GaussSum { q: u64, modified: bool },
    Transform { base: Box<Provenance>, transform: Transform },
    DftBridge { base: Box<Provenance> },
    Manual,
}

/// One coordinate: an exact element of some `Q(zeta_n)` or a complex box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ValueRepr", into = "ValueRepr")]
pub enum SolValue {
    Exact(QCyc),
    Interval { re: [f64; 2], im: [f64; 2] },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueRepr {
    Exact {
        n: u64,
        coeffs: Vec<String>,
        den: String,
    },
    Interval {
        re_interval: [f64; 2],
        im_interval: [f64; 2],
    },
}

impl From<SolValue> for ValueRepr {
    fn from(v: SolValue) -> Self {
        match v {
            SolValue::Exact(x) => ValueRepr::Exact {
                n: x.order(),
                coeffs: x.numerator().coeffs().iter().map(|c| c.to_string()).collect(),
                den: x.denominator().to_string(),
            },
            SolValue::Interval { re, im } => ValueRepr::Interval {
                re_interval: re,
                im_interval: im,
            },
        }
    }
}

impl TryFrom<ValueRepr> for SolValue {
    type Error = String;

    fn try_from(r: ValueRepr) -> std::result::Result<Self, String> {
        match r {
            ValueRepr::Exact { n, coeffs, den } => {
                if n == 0 || n > MAX_READ_ORDER {
                    return Err(format!("root-of-unity order {n} out of range"));
                }
                let parse = |s: &str| s.parse::<BigInt>().map_err(|_| format!("bad integer `{s}`"));
                let coeffs = coeffs.iter().map(|c| parse(c)).collect::<std::result::Result<Vec<_>, _>>()?;
                let den = parse(&den)?;
                if den.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(SolValue::Exact(QCyc::new(CycInt::from_dense(n, coeffs), den)))
            }
            ValueRepr::Interval {
                re_interval,
                im_interval,
            } => {
                let ok = |[lo, hi]: [f64; 2]| lo.is_finite() && hi.is_finite() && lo <= hi;
                if !(ok(re_interval) && ok(im_interval)) {
                    return Err("malformed interval".into());
                }
                Ok(SolValue::Interval {
                    re: re_interval,
                    im: im_interval,
                })
            }
        }
    }
}

impl SolValue {
    pub fn as_exact(&self) -> Option<&QCyc> {
        match self {
            SolValue::Exact(x) => Some(x),
            SolValue::Interval { .. } => None,
        }
    }

    /// Interval enclosing an exact value, rounded outward to f64.
    pub fn to_interval(&self) -> SolValue {
        match self {
            SolValue::Exact(x) => {
                let z = x.embed(NUMERIC_PREC);
                let widen = |b: &Ball| {
                    let (mid, rad) = (b.mid_f64(), b.rad_f64() + b.mid_f64().abs() * 4.0 * f64::EPSILON);
                    [mid - rad, mid + rad]
                };
                SolValue::Interval {
                    re: widen(&z.re),
                    im: widen(&z.im),
                }
            }
            v => v.clone(),
        }
    }

    pub fn embed(&self) -> Result<ComplexBall> {
        match self {
            SolValue::Exact(x) => Ok(x.embed(NUMERIC_PREC)),
            SolValue::Interval { re, im } => {
                let w = working_prec();
                let ball = |[lo, hi]: [f64; 2]| {
                    Ball::from_f64_interval(lo, hi, w)
                        .ok_or_else(|| Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")))
                };
                Ok(ComplexBall {
                    re: ball(*re)?,
                    im: ball(*im)?,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionVector {
    pub level: Level,
    pub m: u64,
    /// `h = zeta_{m/2}^theta`, reduced mod `m/2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<u64>,
    pub provenance: Provenance,
    pub values: Vec<SolValue>,
    /// `Some(q)`: the first `m` entries are `sqrt(q)` times the coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_by_sqrt_q: Option<u64>,
    #[serde(default)]
    pub non_solution_expected: bool,
}

fn expected_len(level: Level, m: u64) -> usize {
    match level {
        Level::G => m as usize + 1,
        Level::Ghat => m as usize,
    }
}

impl SolutionVector {
    pub fn exact(level: Level, m: u64, theta: Option<u64>, provenance: Provenance, values: Vec<QCyc>) -> Self {
        SolutionVector {
            level,
            m,
            theta,
            provenance,
            values: values.into_iter().map(SolValue::Exact).collect(),
            scaled_by_sqrt_q: None,
            non_solution_expected: false,
        }
    }

    pub fn exact_values(&self) -> Option<Vec<QCyc>> {
        self.values.iter().map(|v| v.as_exact().cloned()).collect()
    }

    fn require_exact(&self, what: &str) -> Result<Vec<QCyc>> {
        self.exact_values()
            .ok_or_else(|| Error::ModeUnsupported(format!("{what} needs exact values")))
    }

    /// Replaces exact entries by enclosing f64 boxes.
    pub fn to_intervals(&self) -> SolutionVector {
        SolutionVector {
            values: self.values.iter().map(SolValue::to_interval).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution vectors serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sol: SolutionVector = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if sol.m == 0 || !sol.m.is_multiple_of(2) {
            return Err(Error::OddOrder(sol.m));
        }
        let expected = expected_len(sol.level, sol.m);
        if sol.values.len() != expected {
            return Err(Error::ArityMismatch {
                expected,
                found: sol.values.len(),
            });
        }
        Ok(sol)
    }
}

fn sign(x: i64) -> i64 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_even(m: u64) -> Result<()> {
    if m == 0 || !m.is_multiple_of(2) {
        Err(Error::OddOrder(m))
    } else {
        Ok(())
    }
}

/// The closed-form point with `g_0 = m/2 - 1`.
pub fn explicit_solution(m: u64) -> Result<SolutionVector> {
    check_even(m)?;
    let mi = m as i64;
    let (n, g0, h, theta) = if m.is_multiple_of(4) {
        (m / 2, mi / 2 - 1, -1, m / 4)
    } else {
        (2 * m, sign((mi + 6) * (mi - 6) / 32) * (mi / 2 - 1), 1, 0)
    };
    let mut vals = vec![QCyc::from_int(n, g0)];
    for s in 1..mi {
        let e = if m.is_multiple_of(4) {
            sign((s - 1) * (s - 2) / 2)
        } else {
            sign((4 * s + mi + 2) * (4 * s + mi - 2) / 32)
        };
        vals.push(QCyc::from_cyc(CycInt::zeta_pow(n, s).scale(&BigInt::from(e))));
    }
    if g0 < 0 {
        vals = vals.iter().map(|v| -v).collect();
    }
    vals.push(QCyc::from_int(n, h));
    Ok(SolutionVector::exact(Level::G, m, Some(theta), Provenance::ExplicitProp, vals))
}

/// `(G_0, G(chi), ..., G(chi^{m-1}), chi(4))` with `G_0 = -1` or `m - 1`,
/// i.e. the point scaled by `sqrt(q)` in its first `m` entries.
pub fn gauss_solution(field: &FiniteField, m: u64, modified: bool) -> Result<SolutionVector> {
    check_even(m)?;
    let q = field.q() as u64;
    if !(q - 1).is_multiple_of(m) {
        return Err(Error::OrderDoesNotDivide { m, q_minus_one: q - 1 });
    }
    let class = cyclotomic_class(field, m, modified)?;
    let is_ds = check_direct(field, &class).verdict == Verdict::DifferenceSet;
    let chi = Character::new(field, m)?;
    // m even forces odd characteristic, so 4 is a unit and a square.
    let e = chi.exponent(1, field.from_int(4)).expect("4 is nonzero");
    let tables = SumTables::new(chi);
    let n = tables.gauss_order();
    let g0 = if modified { m as i64 - 1 } else { -1 };
    let mut vals = vec![QCyc::from_int(n, g0)];
    vals.extend((1..m as i64).map(|s| QCyc::from_cyc(tables.gauss(s).to_cyc())));
    vals.push(QCyc::zeta_pow(m, e as i64));
    let mut sol = SolutionVector::exact(
        Level::G,
        m,
        Some((e / 2) % (m / 2)),
        Provenance::GaussSum { q, modified },
        vals,
    );
    sol.scaled_by_sqrt_q = Some(q);
    sol.non_solution_expected = !is_ds;
    Ok(sol)
}

/// `sqrt(q)` exactly, from the quadratic Gauss sum over the prime field.
pub fn sqrt_q(q: u64) -> Result<QCyc> {
    let (p, e) = arith::as_prime_power(q).ok_or(Error::NotPrime(q))?;
    let root_p = if p == 2 {
        QCyc::from_cyc(&CycInt::zeta_pow(8, 1) + &CycInt::zeta_pow(8, 7))
    } else {
        let g = CycInt::from_terms(p, (0..p).map(|x| ((x * x % p) as i64, BigInt::one())));
        if p % 4 == 1 {
            QCyc::from_cyc(g)
        } else {
            -&QCyc::from_cyc(&CycInt::zeta_pow(4, 1) * &g)
        }
    };
    let mut out = QCyc::from_int(1, BigInt::from(p).pow(e / 2));
    if e % 2 == 1 {
        out = &out * &root_p;
    }
    Ok(out)
}

/// Divides the scaled entries of a Gauss-sum tuple by `sqrt(q)`, exactly.
pub fn unscale(sol: &SolutionVector) -> Result<SolutionVector> {
    let Some(q) = sol.scaled_by_sqrt_q else {
        return Ok(sol.clone());
    };
    let vals = sol.require_exact("unscaling")?;
    let factor = sqrt_q(q)?.scale(&BigInt::one(), &BigInt::from(q));
    let m = sol.m as usize;
    let out = vals
        .iter()
        .enumerate()
        .map(|(i, v)| if i < m { v * &factor } else { v.clone() })
        .collect();
    let mut r = SolutionVector::exact(sol.level, sol.m, sol.theta, sol.provenance.clone(), out);
    r.non_solution_expected = sol.non_solution_expected;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyMode {
    Exact,
    ScaledExact,
    Numeric { tol: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub index: usize,
    pub zero: bool,
    /// Upper bound on the modulus of the residual.
    pub magnitude: f64,
}

/// Numeric membership in `R x (S^1)^m`; deviations are of `Im g_0` and of `|z|^2` from 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub g0_real: bool,
    pub on_unit_circle: bool,
    pub h_on_unit_circle: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub mode: VerifyMode,
    pub entries: Vec<ResidualEntry>,
    pub all_zero: bool,
    pub max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<Membership>,
}

impl Residuals {
    pub fn nonzero(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !e.zero)
    }
}

fn eval_exact(p: &Poly, vals: &[QCyc]) -> QCyc {
    p.eval_with(vals, |c| QCyc::from_int(1, c.clone()), |a, b| a + b, |a, b| a * b)
}

fn eval_ball(p: &Poly, vals: &[ComplexBall]) -> ComplexBall {
    let w = working_prec();
    p.eval_with(
        vals,
        |c| ComplexBall::from_real(Ball::from_int(c, w)),
        |a, b| a.add(b),
        |a, b| a.mul(b),
    )
}

fn to_rootsum(x: &QCyc, n: u64) -> Result<RootSum> {
    let c = x
        .as_cyc()
        .ok_or_else(|| Error::ModeUnsupported("scaled tuple has a non-integral entry".into()))?;
    let mut r = RootSum::zero(c.order());
    for (j, a) in c.coeffs().iter().enumerate() {
        let a = a
            .to_i128()
            .ok_or_else(|| Error::InvalidArgument("coefficient exceeds i128".into()))?;
        r.add_term(j as i64, a);
    }
    r.lift(n)
}

/// Multiplies each term by `q^{(D - d)/2}`, where `d` is its degree in the first `m`
/// variables and `D` the largest such degree.
fn homogenize(p: &Poly, m: usize, q: u64) -> Result<Poly> {
    let gdeg = |mono: &crate::poly::Monomial| -> u32 {
        mono.support().filter(|&(i, _)| i < m).map(|(_, e)| e).sum()
    };
    let top = p.terms().iter().map(|(mono, _)| gdeg(mono)).max().unwrap_or(0);
    let mut terms = Vec::with_capacity(p.len());
    for (mono, c) in p.terms() {
        let gap = top - gdeg(mono);
        if gap % 2 != 0 {
            return Err(Error::ModeUnsupported(
                "polynomial is not of uniform parity in the g-variables".into(),
            ));
        }
        terms.push((*mono, c * BigInt::from(q).pow(gap / 2)));
    }
    Ok(Poly::from_terms(p.order(), terms))
}

/// Balls for every coordinate, with scaled entries divided by `sqrt(q)`.
fn numeric_values(sol: &SolutionVector) -> Result<Vec<ComplexBall>> {
    let mut out: Vec<ComplexBall> = sol.values.iter().map(SolValue::embed).collect::<Result<_>>()?;
    if let Some(q) = sol.scaled_by_sqrt_q {
        let f = ComplexBall::from_real(Ball::sqrt_int(q, working_prec()).div_int(q));
        for z in out.iter_mut().take(sol.m as usize) {
            *z = z.mul(&f);
        }
    }
    Ok(out)
}

fn membership(vals: &[ComplexBall], m: usize, tol: f64) -> Membership {
    let dev = |z: &ComplexBall| {
        let n = z.norm_sq();
        (n.mid_f64() - 1.0).abs() + n.rad_f64()
    };
    let g0 = vals[0].im.abs_upper();
    let unit = vals[1..m].iter().map(dev).fold(0.0, f64::max);
    let h = dev(&vals[m]);
    Membership {
        g0_real: g0 <= tol,
        on_unit_circle: unit <= tol,
        h_on_unit_circle: h <= tol,
        max_deviation: g0.max(unit).max(h),
    }
}

pub fn verify_solution(system: &PolySystem, sol: &SolutionVector, mode: VerifyMode) -> Result<Residuals> {
    let expected = system.nvars();
    if sol.values.len() != expected {
        return Err(Error::ArityMismatch {
            expected,
            found: sol.values.len(),
        });
    }
    if sol.level != system.level || sol.m != system.m {
        return Err(Error::ModeUnsupported(format!(
            "solution is for m={} level={}, system for m={} level={}",
            sol.m,
            sol.level.tag(),
            system.m,
            system.level.tag()
        )));
    }
    let entry = |index: usize, zero: bool, z: Option<ComplexBall>| ResidualEntry {
        index,
        zero,
        magnitude: if zero && z.is_none() {
            0.0
        } else {
            z.map_or(0.0, |z| z.abs_upper())
        },
    };
    let entries: Vec<ResidualEntry> = match mode {
        VerifyMode::Exact => {
            if sol.scaled_by_sqrt_q.is_some() {
                return Err(Error::ModeUnsupported(
                    "scaled Gauss-sum tuple: use scaled_exact or numeric".into(),
                ));
            }
            let vals = sol.require_exact("exact mode")?;
            system
                .polys
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let r = eval_exact(p, &vals);
                    let zero = r.is_zero();
                    entry(i, zero, (!zero).then(|| r.embed(53)))
                })
                .collect()
        }
        VerifyMode::ScaledExact => {
            let q = sol
                .scaled_by_sqrt_q
                .filter(|_| sol.level == Level::G)
                .ok_or_else(|| Error::ModeUnsupported("scaled_exact needs a g-level Gauss-sum tuple".into()))?;
            let vals = sol.require_exact("scaled_exact mode")?;
            let n = vals.iter().fold(1, |n, v| arith::lcm(n, v.order()));
            let rs: Vec<RootSum> = vals.iter().map(|v| to_rootsum(v, n)).collect::<Result<_>>()?;
            let mut out = Vec::with_capacity(system.polys.len());
            for (i, p) in system.polys.iter().enumerate() {
                let hp = homogenize(p, system.m as usize, q)?;
                if hp.max_coeff_bits() > 100 {
                    return Err(Error::InvalidArgument("scaled coefficients exceed i128".into()));
                }
                let r = hp.eval_with(
                    &rs,
                    |c| RootSum::constant(n, c.to_i128().expect("checked above")),
                    |a, b| a.add(b),
                    |a, b| a.mul(b),
                );
                let zero = r.is_zero();
                out.push(entry(i, zero, (!zero).then(|| r.embed(53))));
            }
            out
        }
        VerifyMode::Numeric { tol } => {
            let vals = numeric_values(sol)?;
            system
                .polys
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let r = eval_ball(p, &vals);
                    let zero = r.abs_upper() <= tol;
                    entry(i, zero, Some(r))
                })
                .collect()
        }
    };
    let tol = match mode {
        VerifyMode::Numeric { tol } => tol,
        _ => DEFAULT_TOL,
    };
    let membership = match sol.level {
        Level::G => Some(membership(&numeric_values(sol)?, sol.m as usize, tol)),
        Level::Ghat => None,
    };
    Ok(Residuals {
        mode,
        all_zero: entries.iter().all(|e| e.zero),
        max_abs: entries.iter().map(|e| e.magnitude).fold(0.0, f64::max),
        entries,
        membership,
    })
}

/// Applies a symmetry of the solution set. On the g-level `reindex(r)` sends
/// `g_s -> g_{rs}` and `h -> h^r`; on the ghat-level it is the DFT conjugate
/// `ghat_t -> ghat_{t/r}`, moving `theta` to `r theta`. `twist(r)` is the cyclic
/// shift `ghat_t -> ghat_{t-r}` on the ghat-level.
pub fn symmetry_transform(sol: &SolutionVector, t: Transform) -> Result<SolutionVector> {
    let vals = sol.require_exact("symmetry transforms")?;
    let m = sol.m;
    let mi = m as i64;
    let at = |i: i64| vals[i.rem_euclid(mi) as usize].clone();
    let mut theta = sol.theta;
    let out: Vec<QCyc> = match (sol.level, t) {
        (Level::G, Transform::Negate) => (0..mi)
            .map(|s| -&vals[s as usize])
            .chain([vals[m as usize].clone()])
            .collect(),
        (Level::Ghat, Transform::Negate) => vals.iter().map(|v| -v).collect(),
        (Level::G, Transform::Twist(r)) => {
            let r = r.rem_euclid(mi);
            (0..mi)
                .map(|s| &vals[s as usize] * &QCyc::zeta_pow(m, s * r))
                .chain([vals[m as usize].clone()])
                .collect()
        }
        (Level::Ghat, Transform::Twist(r)) => (0..mi).map(|i| at(i - r.rem_euclid(mi))).collect(),
        (level, Transform::Reindex(r)) => {
            let rr = r.rem_euclid(mi);
            if arith::gcd(rr as u64, m) != 1 {
                return Err(Error::NotCoprime { k: r, n: m });
            }
            let half = m / 2;
            theta = theta.map(|th| (th * rr as u64) % half);
            match level {
                Level::G => (0..mi)
                    .map(|s| at(s * rr))
                    .chain([vals[m as usize].pow(rr as u32)])
                    .collect(),
                Level::Ghat => {
                    let inv = arith::ext_gcd(rr, mi).1.rem_euclid(mi);
                    (0..mi).map(|i| at(i * inv)).collect()
                }
            }
        }
    };
    Ok(SolutionVector {
        level: sol.level,
        m,
        theta,
        provenance: Provenance::Transform {
            base: Box::new(sol.provenance.clone()),
            transform: t,
        },
        values: out.into_iter().map(SolValue::Exact).collect(),
        scaled_by_sqrt_q: sol.scaled_by_sqrt_q,
        non_solution_expected: sol.non_solution_expected,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Forward: `X^(s) = sum_t zeta_r^{-st} X(t)`; inverse: `(1/r) sum_t zeta_r^{st} X^(t)`.
pub fn dft(values: &[QCyc], dir: Direction) -> Vec<QCyc> {
    let r = values.len() as i64;
    let sgn = match dir {
        Direction::Forward => -1,
        Direction::Inverse => 1,
    };
    (0..r)
        .map(|s| {
            let acc = values.iter().enumerate().fold(QCyc::zero(r as u64), |acc, (t, x)| {
                &acc + &(&QCyc::zeta_pow(r as u64, sgn * s * t as i64) * x)
            });
            match dir {
                Direction::Forward => acc,
                Direction::Inverse => acc.scale(&BigInt::one(), &BigInt::from(r)),
            }
        })
        .collect()
}

/// The same transform on enclosures.
pub fn dft_numeric(values: &[ComplexBall], dir: Direction) -> Vec<ComplexBall> {
    let r = values.len();
    let Some(w) = values.first().map(|z| z.re.prec()) else {
        return Vec::new();
    };
    let roots = roots_of_unity(r as u64, w);
    (0..r)
        .map(|s| {
            let acc = values.iter().enumerate().fold(ComplexBall::zero(w), |acc, (t, x)| {
                let k = match dir {
                    Direction::Forward => (r - s * t % r) % r,
                    Direction::Inverse => s * t % r,
                };
                acc.add(&roots[k].mul(x))
            });
            match dir {
                Direction::Forward => acc,
                Direction::Inverse => acc.div_int(r as u64),
            }
        })
        .collect()
}

/// Maps a ghat-level point for `theta` to the g-level point with `h = zeta_{m/2}^theta`.
pub fn dft_bridge(ghat_sol: &SolutionVector, m: u64, theta: i64) -> Result<SolutionVector> {
    check_even(m)?;
    if ghat_sol.values.len() != m as usize {
        return Err(Error::ArityMismatch {
            expected: m as usize,
            found: ghat_sol.values.len(),
        });
    }
    if ghat_sol.level != Level::Ghat || ghat_sol.scaled_by_sqrt_q.is_some() {
        return Err(Error::ModeUnsupported("bridge input must be an unscaled ghat-level point".into()));
    }
    let vals = ghat_sol.require_exact("the DFT bridge")?;
    let half = m / 2;
    let th = theta.rem_euclid(half as i64);
    let mut g = dft(&vals, Direction::Inverse);
    g.push(QCyc::zeta_pow(half, th));
    let mut sol = SolutionVector::exact(
        Level::G,
        m,
        Some(th as u64),
        Provenance::DftBridge {
            base: Box::new(ghat_sol.provenance.clone()),
        },
        g,
    );
    sol.non_solution_expected = ghat_sol.non_solution_expected;
    Ok(sol)
}

/// Inverse bridge; `theta` is read off from `h`, which must be an `(m/2)`-th root of unity.
pub fn dft_bridge_inverse(g_sol: &SolutionVector) -> Result<SolutionVector> {
    let m = g_sol.m;
    check_even(m)?;
    if g_sol.values.len() != m as usize + 1 {
        return Err(Error::ArityMismatch {
            expected: m as usize + 1,
            found: g_sol.values.len(),
        });
    }
    if g_sol.level != Level::G || g_sol.scaled_by_sqrt_q.is_some() {
        return Err(Error::ModeUnsupported("bridge input must be an unscaled g-level point".into()));
    }
    let vals = g_sol.require_exact("the DFT bridge")?;
    let half = m / 2;
    let h = &vals[m as usize];
    let theta = (0..half as i64)
        .find(|&t| h.same_value(&QCyc::zeta_pow(half, t)))
        .ok_or_else(|| Error::InvalidArgument("h is not an (m/2)-th root of unity".into()))?;
    let mut sol = SolutionVector::exact(
        Level::Ghat,
        m,
        Some(theta as u64),
        Provenance::DftBridge {
            base: Box::new(g_sol.provenance.clone()),
        },
        dft(&vals[..m as usize], Direction::Forward),
    );
    sol.non_solution_expected = g_sol.non_solution_expected;
    Ok(sol)
}

/// Flag-transitive planar probe at `v = m^2 + m + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanarReport {
    pub m: u64,
    pub v: u64,
    pub v_prime: bool,
    pub v_prime_power: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_in_h: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_is_one: Option<bool>,
    /// Scaled residual of the planar system at the Gauss-sum tuple, for difference sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar_residual_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    pub unexplained: bool,
}

pub fn planar_probe(m: u64) -> Result<PlanarReport> {
    let sys = planar_system(m)?;
    let v = m * m + m + 1;
    let mut rep = PlanarReport {
        m,
        v,
        v_prime: arith::is_prime(v),
        v_prime_power: false,
        verdict: None,
        two_in_h: None,
        h_is_one: None,
        planar_residual_zero: None,
        family: None,
        unexplained: false,
    };
    let Some((p, e)) = arith::as_prime_power(v) else {
        return Ok(rep);
    };
    rep.v_prime_power = true;
    let field = make_field(p, e)?;
    let verdict = check_direct(&field, &cyclotomic_class(&field, m, false)?).verdict;
    rep.verdict = Some(verdict);
    rep.two_in_h = Some((field.dlog(field.from_int(2))? as u64).is_multiple_of(m));
    let chi = Character::new(&field, m)?;
    rep.h_is_one = Some(chi.exponent(1, field.from_int(4)) == Some(0));
    if verdict == Verdict::DifferenceSet {
        let sol = gauss_solution(&field, m, false)?;
        rep.planar_residual_zero = Some(verify_solution(&sys, &sol, VerifyMode::ScaledExact)?.all_zero);
        rep.family = known_family_match(v, m, false);
        rep.unexplained = rep.family.is_none();
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{gen_g_system, gen_ghat_system, theta_reduce};

    fn exact_zero(sys: &PolySystem, sol: &SolutionVector) -> bool {
        verify_solution(sys, sol, VerifyMode::Exact).unwrap().all_zero
    }

    #[test]
    fn explicit_family() {
        for m in (2..=22).step_by(2) {
            let sol = explicit_solution(m).unwrap();
            assert!(exact_zero(&gen_g_system(m).unwrap(), &sol), "m={m}");
            assert!(sol.values[0].as_exact().unwrap().same_value(&QCyc::from_int(1, m as i64 / 2 - 1)));
        }
        let s6 = explicit_solution(6).unwrap().exact_values().unwrap();
        let z = |k| QCyc::zeta_pow(12, k);
        assert!(s6[1].same_value(&-&z(1)));
        assert!(s6[2].same_value(&z(2)));
        assert!(s6[3].same_value(&z(3)));
        assert!(s6[4].same_value(&-&z(4)));
        assert!(s6[5].same_value(&-&z(5)));
        assert!(s6[6].same_value(&QCyc::from_int(1, 1)));
        let s8 = explicit_solution(8).unwrap().exact_values().unwrap();
        assert!(s8[8].same_value(&QCyc::from_int(1, -1)));
        assert!(matches!(explicit_solution(5), Err(Error::OddOrder(5))));
    }

    #[test]
    fn explicit_membership() {
        let sys = gen_g_system(10).unwrap();
        let r = verify_solution(&sys, &explicit_solution(10).unwrap(), VerifyMode::Exact).unwrap();
        let mem = r.membership.unwrap();
        assert!(mem.g0_real && mem.on_unit_circle && mem.h_on_unit_circle);
    }

    #[test]
    fn gauss_tuples() {
        let f73 = make_field(73, 1).unwrap();
        let sol = gauss_solution(&f73, 8, false).unwrap();
        assert!(!sol.non_solution_expected);
        assert_eq!(sol.theta, Some(0));
        let r = verify_solution(&gen_g_system(8).unwrap(), &sol, VerifyMode::ScaledExact).unwrap();
        assert!(r.all_zero);
        let mem = r.membership.unwrap();
        assert!(mem.g0_real && mem.on_unit_circle && mem.h_on_unit_circle, "{mem:?}");

        let f13 = make_field(13, 1).unwrap();
        let sol = gauss_solution(&f13, 4, true).unwrap();
        assert!(!sol.non_solution_expected);
        assert!(verify_solution(&gen_g_system(4).unwrap(), &sol, VerifyMode::ScaledExact).unwrap().all_zero);

        let f29 = make_field(29, 1).unwrap();
        for modified in [false, true] {
            let sol = gauss_solution(&f29, 4, modified).unwrap();
            assert!(sol.non_solution_expected);
            let r = verify_solution(&gen_g_system(4).unwrap(), &sol, VerifyMode::ScaledExact).unwrap();
            assert!(r.nonzero().count() >= 1);
        }
        assert!(matches!(gauss_solution(&f29, 3, false), Err(Error::OddOrder(3))));
        assert!(matches!(gauss_solution(&f29, 6, false), Err(Error::OrderDoesNotDivide { .. })));
    }

    #[test]
    fn mode_errors() {
        let f13 = make_field(13, 1).unwrap();
        let sys = gen_g_system(4).unwrap();
        let sol = gauss_solution(&f13, 4, true).unwrap();
        assert!(matches!(verify_solution(&sys, &sol, VerifyMode::Exact), Err(Error::ModeUnsupported(_))));
        let ex = explicit_solution(4).unwrap();
        assert!(matches!(verify_solution(&sys, &ex, VerifyMode::ScaledExact), Err(Error::ModeUnsupported(_))));
        let mut short = ex.clone();
        short.values.pop();
        assert!(matches!(
            verify_solution(&sys, &short, VerifyMode::Exact),
            Err(Error::ArityMismatch { expected: 5, found: 4 })
        ));
        let num = verify_solution(&sys, &sol, VerifyMode::Numeric { tol: DEFAULT_TOL }).unwrap();
        assert!(num.all_zero);
    }

    #[test]
    fn perturbation_is_caught() {
        let sys = gen_g_system(6).unwrap();
        let mut sol = explicit_solution(6).unwrap();
        let tol = VerifyMode::Numeric { tol: 1e-9 };
        assert!(verify_solution(&sys, &sol, tol).unwrap().all_zero);
        assert!(verify_solution(&sys, &sol.to_intervals(), tol).unwrap().all_zero);
        let g1 = sol.values[1].as_exact().unwrap().scale(&BigInt::from(1001), &BigInt::from(1000));
        sol.values[1] = SolValue::Exact(g1);
        let r = verify_solution(&sys, &sol, tol).unwrap();
        assert!(!r.all_zero);
        assert!(r.max_abs > 1e-4);
        assert!(!r.membership.unwrap().on_unit_circle);
        assert!(!verify_solution(&sys, &sol, VerifyMode::Exact).unwrap().all_zero);
    }

    #[test]
    fn symmetries_preserve_solutions() {
        let sys = gen_g_system(6).unwrap();
        let sol = explicit_solution(6).unwrap();
        let back = symmetry_transform(&symmetry_transform(&sol, Transform::Negate).unwrap(), Transform::Negate).unwrap();
        assert_eq!(back.values, sol.values);
        for t in [Transform::Negate, Transform::Twist(1), Transform::Twist(-7), Transform::Reindex(5)] {
            assert!(exact_zero(&sys, &symmetry_transform(&sol, t).unwrap()), "{t:?}");
        }
        assert!(matches!(
            symmetry_transform(&sol, Transform::Reindex(2)),
            Err(Error::NotCoprime { k: 2, n: 6 })
        ));
        let f73 = make_field(73, 1).unwrap();
        let g = gauss_solution(&f73, 8, false).unwrap();
        let sys8 = gen_g_system(8).unwrap();
        for t in [Transform::Twist(3), Transform::Reindex(3), Transform::Negate] {
            let moved = symmetry_transform(&g, t).unwrap();
            assert!(verify_solution(&sys8, &moved, VerifyMode::ScaledExact).unwrap().all_zero);
        }
    }

    fn sample(n: usize, seed: i64) -> Vec<QCyc> {
        (0..n as i64)
            .map(|i| {
                let a = (seed * 31 + i * 17) % 11 - 5;
                let b = (seed * 7 + i * 5) % 9 - 4;
                &QCyc::from_int(1, a) + &QCyc::zeta_pow(3, 1).scale(&BigInt::from(b), &BigInt::from(2))
            })
            .collect()
    }

    #[test]
    fn dft_properties() {
        let mut delta = vec![QCyc::zero(1); 6];
        delta[0] = QCyc::from_int(1, 1);
        for x in dft(&delta, Direction::Forward) {
            assert!(x.same_value(&QCyc::from_int(1, 1)));
        }
        for seed in 0..4 {
            let x = sample(6, seed);
            let y = sample(6, seed + 10);
            let back = dft(&dft(&x, Direction::Forward), Direction::Inverse);
            assert!(back.iter().zip(&x).all(|(a, b)| a.same_value(b)));
            let conv: Vec<QCyc> = (0..6)
                .map(|s| (0..6).fold(QCyc::zero(1), |acc, t| &acc + &(&x[t] * &y[(s + 6 - t) % 6])))
                .collect();
            let lhs = dft(&conv, Direction::Forward);
            let (fx, fy) = (dft(&x, Direction::Forward), dft(&y, Direction::Forward));
            assert!((0..6).all(|s| lhs[s].same_value(&(&fx[s] * &fy[s]))));
            let twice = dft(&fx, Direction::Forward);
            assert!((0..6).all(|s| twice[(6 - s) % 6].scale(&BigInt::one(), &BigInt::from(6)).same_value(&x[s])));
        }
        let x = sample(5, 3);
        let num = dft_numeric(&x.iter().map(|v| v.embed(NUMERIC_PREC)).collect::<Vec<_>>(), Direction::Forward);
        for (a, b) in num.iter().zip(dft(&x, Direction::Forward)) {
            assert!(a.sub(&b.embed(NUMERIC_PREC)).abs_upper() < 1e-30);
        }
    }

    #[test]
    fn bridge_m6() {
        let ex = explicit_solution(6).unwrap();
        let hat = dft_bridge_inverse(&ex).unwrap();
        assert_eq!(hat.theta, Some(0));
        assert!(exact_zero(&gen_ghat_system(6, 0).unwrap(), &hat));
        assert!(!exact_zero(&gen_ghat_system(6, 1).unwrap(), &hat));
        let again = dft_bridge(&hat, 6, 0).unwrap();
        assert!(again.exact_values().unwrap().iter().zip(ex.exact_values().unwrap()).all(|(a, b)| a.same_value(&b)));

        // theta = 1 through the trivial class H_{7,6} = {1}.
        let f7 = make_field(7, 1).unwrap();
        let g = unscale(&gauss_solution(&f7, 6, false).unwrap()).unwrap();
        assert!(exact_zero(&gen_g_system(6).unwrap(), &g));
        let hat = dft_bridge_inverse(&g).unwrap();
        let th = hat.theta.unwrap() as i64;
        assert!(exact_zero(&gen_ghat_system(6, th).unwrap(), &hat));
        let (r, d) = theta_reduce(th, 6).unwrap();
        assert_eq!(d, 1);
        let moved = symmetry_transform(&hat, Transform::Reindex(r)).unwrap();
        assert_eq!(moved.theta, Some(1));
        assert!(exact_zero(&gen_ghat_system(6, 1).unwrap(), &moved));
        let g_moved = dft_bridge(&moved, 6, 1).unwrap();
        assert!(exact_zero(&gen_g_system(6).unwrap(), &g_moved));
        let g0 = g_moved.values[0].as_exact().unwrap();
        assert!((&g0.pow(2) * &QCyc::from_int(1, 7)).same_value(&QCyc::from_int(1, 1)));
    }

    #[test]
    fn bridge_m4() {
        let ex = explicit_solution(4).unwrap();
        let hat = dft_bridge_inverse(&ex).unwrap();
        assert_eq!(hat.theta, Some(1));
        assert!(exact_zero(&gen_ghat_system(4, 1).unwrap(), &hat));
        let f13 = make_field(13, 1).unwrap();
        let g = unscale(&gauss_solution(&f13, 4, true).unwrap()).unwrap();
        let hat = dft_bridge_inverse(&g).unwrap();
        assert!(exact_zero(&gen_ghat_system(4, hat.theta.unwrap() as i64).unwrap(), &hat));
        assert!(matches!(dft_bridge(&ex, 4, 0), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn exact_square_roots() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 81, 121, 125] {
            let r = sqrt_q(q).unwrap();
            assert!(r.pow(2).same_value(&QCyc::from_int(1, q as i64)), "q={q}");
            let (re, im) = r.embed(64).mid();
            assert!((re - (q as f64).sqrt()).abs() < 1e-12 && im.abs() < 1e-12, "q={q}");
        }
        assert!(sqrt_q(12).is_err());
    }

    #[test]
    fn planar_cases() {
        let r8 = planar_probe(8).unwrap();
        assert_eq!(r8.v, 73);
        assert!(r8.v_prime);
        assert_eq!(r8.verdict, Some(Verdict::DifferenceSet));
        assert_eq!(r8.two_in_h, Some(true));
        assert_eq!(r8.h_is_one, Some(true));
        assert_eq!(r8.planar_residual_zero, Some(true));
        assert!(!r8.unexplained);
        let r10 = planar_probe(10).unwrap();
        assert!(!r10.v_prime && !r10.v_prime_power && r10.verdict.is_none());
        let r2 = planar_probe(2).unwrap();
        assert_eq!((r2.v, r2.h_is_one, r2.planar_residual_zero), (7, Some(true), Some(true)));
    }

    #[test]
    fn json_round_trip() {
        let f13 = make_field(13, 1).unwrap();
        for sol in [
            explicit_solution(6).unwrap(),
            gauss_solution(&f13, 4, true).unwrap(),
            explicit_solution(4).unwrap().to_intervals(),
            symmetry_transform(&explicit_solution(6).unwrap(), Transform::Twist(2)).unwrap(),
        ] {
            let back = SolutionVector::from_json(&sol.to_json()).unwrap();
            assert_eq!(back, sol);
        }
        let text = explicit_solution(4).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["level"], "g");
        assert_eq!(v["provenance"]["kind"], "explicit_prop");
        assert!(v["values"][0]["coeffs"].is_array());
        let iv: serde_json::Value = serde_json::from_str(&explicit_solution(4).unwrap().to_intervals().to_json()).unwrap();
        assert!(iv["values"][1]["re_interval"].is_array());
        assert!(SolutionVector::from_json("{\"level\":\"g\",\"m\":4,\"provenance\":{\"kind\":\"manual\"},\"values\":[]}").is_err());
    }
}
