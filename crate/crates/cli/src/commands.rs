use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use cyclodiff::charsums::{gauss_sum_bounded, h_class_sum, jacobi_sum, CharSumValue, Character};
use cyclodiff::diffsets::{check_all, scan, DSReport, Family, Method, ModifiedMode, ScanRequest};
use cyclodiff::ff::make_field_bounded;
use cyclodiff::groebner::{
    coherence, eliminate_with, f_table, probe_g0_zero, Aggregate, CoherenceReport, ElimMethod, ElimOptions,
    Elimination, FTable, ProbeOutcome, Selection, Stats, TABULATED_M,
};
use cyclodiff::polysys::{
    dft_bridge, dft_bridge_inverse, explicit_solution, export_system, g_vars, gauss_solution, gen_g_system_bounded,
    gen_ghat_system_bounded, ghat_vars, parse_system, planar_probe, planar_system, verify_solution, Level,
    PolySystem, SolValue, SolutionVector, VerifyMode,
};
use cyclodiff::{arith, Error, FiniteField, IntPoly, Limits};

use crate::args::*;
use crate::output::{CliError, CliResult, Out, Status};

struct Ctx {
    limits: Limits,
    seed: u64,
    out: Out,
}

pub fn run(cli: Cli) -> CliResult<Status> {
    let mut limits = Limits::from_env()?;
    if let Some(spec) = &cli.limits {
        limits = limits.with_overrides(spec)?;
    }
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let mut ctx = Ctx {
        limits,
        seed: cli.seed,
        out: Out::new(cli.format, cli.output.as_deref())?,
    };
    let status = match cli.command {
        Command::Field(FieldCmd::Info { p, e }) => field_info(&mut ctx, p, e),
        Command::Sums(a) => sums(&mut ctx, &a),
        Command::Ds(DsCmd::Check { q, m, modified, methods }) => ds_check(&mut ctx, q, m, modified, &methods),
        Command::Ds(DsCmd::Scan(a)) => ds_scan(&mut ctx, &a),
        Command::Sys(cmd) => sys(&mut ctx, cmd),
        Command::Gb(cmd) => gb(&mut ctx, cmd),
    }?;
    ctx.out.finish()?;
    Ok(status)
}

fn field(q: u64, limits: &Limits) -> CliResult<FiniteField> {
    let (p, e) = arith::as_prime_power(q).ok_or_else(|| CliError::Usage(format!("{q} is not a prime power")))?;
    Ok(make_field_bounded(p, e, limits.field_bound)?)
}

fn parse_methods(list: &str) -> CliResult<Vec<Method>> {
    let methods = list.split(',').map(Method::parse).collect::<Result<Vec<_>, _>>()?;
    if methods.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    Ok(methods)
}

#[derive(Serialize)]
struct FieldInfo {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients low to high.
    modulus: Vec<u32>,
    /// Generator as a polynomial in the adjoined root, low to high.
    generator: Vec<u32>,
    log_table_complete: bool,
}

fn field_info(ctx: &mut Ctx, p: u64, e: u32) -> CliResult<Status> {
    let f = make_field_bounded(p, e, ctx.limits.field_bound)?;
    let g = f.generator();
    let info = FieldInfo {
        p: f.p(),
        e: f.e(),
        q: f.q(),
        modulus: f.modulus().to_vec(),
        generator: f.coeffs(g),
        log_table_complete: f.elements().skip(1).all(|x| f.dlog(x).is_ok()),
    };
    ctx.out.emit(&info, || {
        format!(
            "F_{} (p = {}, e = {})\nmodulus   {}\ngenerator {}\n",
            info.q,
            info.p,
            info.e,
            poly_from_u32(&info.modulus),
            poly_from_u32(&info.generator)
        )
    })?;
    Ok(Status::Ok)
}

fn poly_from_u32(c: &[u32]) -> IntPoly {
    IntPoly::from_i64(&c.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct NumericValue {
    re: f64,
    im: f64,
    radius: f64,
}

#[derive(Serialize)]
struct SumReport {
    #[serde(flatten)]
    sum: CharSumValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericValue>,
}

fn sums(ctx: &mut Ctx, a: &SumsArgs) -> CliResult<Status> {
    let f = field(a.q, &ctx.limits)?;
    let chi = Character::new(&f, a.m)?;
    let sum = match a.kind {
        SumKindArg::Gauss => gauss_sum_bounded(&chi, a.s, ctx.limits.cyclotomic_bound)?,
        SumKindArg::Jacobi => {
            let t = a.t.ok_or_else(|| CliError::Usage("jacobi needs --t".into()))?;
            jacobi_sum(&chi, a.s, t)
        }
        SumKindArg::Class => h_class_sum(&chi, a.s),
    };
    let numeric = a.numeric.then(|| {
        let b = sum.value.embed(cyclodiff::polysys::NUMERIC_PREC);
        let (re, im) = b.mid();
        NumericValue {
            re,
            im,
            radius: b.radius(),
        }
    });
    let rep = SumReport { sum, numeric };
    ctx.out.emit(&rep, || {
        let mut s = format!("{:?}(q={}, m={}, s={}", rep.sum.kind, rep.sum.q, rep.sum.m, rep.sum.s);
        if let Some(t) = rep.sum.t {
            let _ = write!(s, ", t={t}");
        }
        let _ = writeln!(s, ") = {}", rep.sum.value);
        if let Some(n) = &rep.numeric {
            let _ = writeln!(s, "  ~ {:.12} {:+.12}i  (radius {:.1e})", n.re, n.im, n.radius);
        }
        s
    })?;
    Ok(Status::Ok)
}

fn class_name(q: u64, m: u64, modified: bool) -> String {
    format!("{}_{{{q},{m}}}", if modified { 'M' } else { 'H' })
}

fn ds_status(rep: &DSReport) -> Status {
    if !rep.consistent() || rep.family == Some(Family::Unexplained) {
        Status::Discrepancy
    } else {
        Status::Ok
    }
}

fn ds_check(ctx: &mut Ctx, q: u64, m: u64, modified: bool, methods: &str) -> CliResult<Status> {
    let methods = parse_methods(methods)?;
    let f = field(q, &ctx.limits)?;
    let rep = check_all(&f, m, modified, &methods, &ctx.limits)?;
    let status = ds_status(&rep);
    ctx.out.emit(&rep, || {
        let p = &rep.params;
        let lambda = p.lambda.map_or("-".to_string(), |l| l.to_string());
        let mut s = format!(
            "{}  (v, k, lambda) = ({}, {}, {lambda})  verdict {}",
            class_name(q, m, modified),
            p.v,
            p.k,
            rep.verdict
        );
        if let Some(fam) = rep.family {
            let _ = write!(s, "  family {}", fam.tag());
        }
        let _ = writeln!(s, "\n  agreeing {:?}", rep.methods_agreeing);
        if !rep.methods_disagreeing.is_empty() {
            let _ = writeln!(s, "  DISAGREEING {:?}", rep.methods_disagreeing);
        }
        s
    })?;
    Ok(status)
}

fn ds_scan(ctx: &mut Ctx, a: &ScanArgs) -> CliResult<Status> {
    let (m_min, m_max) = match (a.m, a.m_min, a.m_max) {
        (Some(m), _, _) => (m, m),
        (None, Some(lo), Some(hi)) if lo <= hi => (lo, hi),
        _ => return Err(CliError::Usage("give --m or --m-min <= --m-max".into())),
    };
    let req = ScanRequest {
        m_min,
        m_max,
        odd: if a.odd {
            Some(true)
        } else if a.even {
            Some(false)
        } else {
            None
        },
        q_max: a.q_max,
        mode: match a.modified_mode {
            ModeArg::Plain => ModifiedMode::Plain,
            ModeArg::Modified => ModifiedMode::Modified,
            ModeArg::Both => ModifiedMode::Both,
        },
        methods: parse_methods(&a.methods)?,
    };
    let table = scan(&req, &ctx.limits)?;
    let hits: Vec<_> = table.nontrivial_hits().collect();
    let unexplained = table.unexplained().count();
    let disagreements = table.disagreements().count();
    log::info!(
        "scanned {} feasible instances: {} nontrivial hits, {unexplained} unexplained, {disagreements} disagreements",
        table.entries().len(),
        hits.len()
    );
    let status = if unexplained > 0 || disagreements > 0 {
        Status::Discrepancy
    } else {
        Status::Ok
    };
    ctx.out.emit(&table, || {
        let mut s = format!(
            "feasible instances {}  nontrivial hits {}  unexplained {unexplained}  disagreements {disagreements}\n",
            table.entries().len(),
            hits.len()
        );
        for e in &hits {
            let _ = writeln!(
                s,
                "  {:<14} ({}, {}, {})  n = {}  {}",
                class_name(e.q, e.m, e.modified),
                e.v,
                e.k,
                e.lambda,
                e.n,
                e.family.map_or("", |f| f.tag())
            );
        }
        for e in table.disagreements() {
            let _ = writeln!(s, "  DISAGREE {} {:?}", class_name(e.q, e.m, e.modified), e.disagreeing);
        }
        s
    })?;
    Ok(status)
}

fn read(path: &Path) -> CliResult<String> {
    Ok(fs::read_to_string(path)?)
}

fn solution_text(sol: &SolutionVector) -> String {
    let names = match sol.level {
        Level::G => g_vars(sol.m),
        Level::Ghat => ghat_vars(sol.m),
    };
    let mut s = format!("{}-level solution, m = {}", sol.level.tag(), sol.m);
    if let Some(t) = sol.theta {
        let _ = write!(s, ", theta = {t}");
    }
    if let Some(q) = sol.scaled_by_sqrt_q {
        let _ = write!(s, ", scaled by sqrt({q})");
    }
    if sol.non_solution_expected {
        s.push_str(", not a difference set (residual expected nonzero)");
    }
    s.push('\n');
    for (name, v) in names.iter().zip(&sol.values) {
        let _ = match v {
            SolValue::Exact(x) => writeln!(s, "  {name} = {x}"),
            SolValue::Interval { re, im } => {
                writeln!(s, "  {name} in [{:e}, {:e}] + i[{:e}, {:e}]", re[0], re[1], im[0], im[1])
            }
        };
    }
    s
}

fn emit_solution(ctx: &mut Ctx, sol: &SolutionVector) -> CliResult<()> {
    match ctx.out.format {
        Format::Json => ctx.out.raw(&format!("{}\n", sol.to_json())),
        Format::Text => ctx.out.raw(&solution_text(sol)),
    }
}

fn sys(ctx: &mut Ctx, cmd: SysCmd) -> CliResult<Status> {
    match cmd {
        SysCmd::Gen { m, level, theta, planar } => {
            let sys = match (level, planar) {
                (LevelArg::G, _) if theta.is_some_and(|t| t != 0) => {
                    return Err(CliError::Usage("--theta applies to the ghat level only".into()))
                }
                (LevelArg::G, true) => planar_system(m)?,
                (LevelArg::G, false) => gen_g_system_bounded(m, ctx.limits.system_bound)?,
                (LevelArg::Ghat, true) => return Err(CliError::Usage("--planar needs --level g".into())),
                (LevelArg::Ghat, false) => gen_ghat_system_bounded(m, theta.unwrap_or(0), ctx.limits.system_bound)?,
            };
            ctx.out.raw(&export_system(&sys))?;
        }
        SysCmd::Parse { system } => {
            let sys = parse_system(&read(&system)?)?;
            ctx.out.raw(&export_system(&sys))?;
        }
        SysCmd::Verify {
            system,
            solution,
            mode,
            tol,
        } => {
            let sys = parse_system(&read(&system)?)?;
            let sol = SolutionVector::from_json(&read(&solution)?)?;
            let mode = match mode {
                VerifyModeArg::Exact => VerifyMode::Exact,
                VerifyModeArg::Scaled => VerifyMode::ScaledExact,
                VerifyModeArg::Numeric => VerifyMode::Numeric { tol },
            };
            let res = verify_solution(&sys, &sol, mode)?;
            ctx.out.emit(&res, || {
                let mut s = format!(
                    "{} residuals, all zero: {}, max |r| <= {:e}\n",
                    res.entries.len(),
                    res.all_zero,
                    res.max_abs
                );
                for e in res.nonzero() {
                    let _ = writeln!(s, "  poly {} nonzero (|r| <= {:e})", e.index, e.magnitude);
                }
                if let Some(mem) = &res.membership {
                    let _ = writeln!(
                        s,
                        "  g0 real {}  unit circle {}  h on unit circle {}",
                        mem.g0_real, mem.on_unit_circle, mem.h_on_unit_circle
                    );
                }
                s
            })?;
            return Ok(if res.all_zero { Status::Ok } else { Status::Discrepancy });
        }
        SysCmd::Explicit { m } => emit_solution(ctx, &explicit_solution(m)?)?,
        SysCmd::FromField { q, m, modified } => {
            let f = field(q, &ctx.limits)?;
            emit_solution(ctx, &gauss_solution(&f, m, modified)?)?
        }
        SysCmd::Bridge { m, theta, solution } => {
            let sol = SolutionVector::from_json(&read(&solution)?)?;
            if sol.m != m {
                return Err(CliError::Usage(format!("solution has m = {}, not {m}", sol.m)));
            }
            let mapped = match sol.level {
                Level::Ghat => dft_bridge(&sol, m, theta)?,
                Level::G => dft_bridge_inverse(&sol)?,
            };
            emit_solution(ctx, &mapped)?
        }
        SysCmd::Planar { m } => {
            let rep = planar_probe(m)?;
            ctx.out.emit(&rep, || {
                let mut s = format!(
                    "m = {}  v = m^2 + m + 1 = {}  prime {}  prime power {}\n",
                    rep.m, rep.v, rep.v_prime, rep.v_prime_power
                );
                if let Some(v) = rep.verdict {
                    let _ = writeln!(s, "  H_{{{},{}}}: {v}", rep.v, rep.m);
                }
                for (label, val) in [
                    ("2 in H", rep.two_in_h),
                    ("h = 1", rep.h_is_one),
                    ("planar residual zero", rep.planar_residual_zero),
                ] {
                    if let Some(b) = val {
                        let _ = writeln!(s, "  {label}: {b}");
                    }
                }
                let _ = writeln!(s, "  unexplained: {}", rep.unexplained);
                s
            })?;
            return Ok(if rep.unexplained { Status::Discrepancy } else { Status::Ok });
        }
    }
    Ok(Status::Ok)
}

fn elim_options(ctx: &Ctx, engine: &EngineArgs) -> ElimOptions {
    ElimOptions {
        limits: ctx.limits.clone(),
        method: match engine.method {
            MethodArg::Block => ElimMethod::Block,
            MethodArg::Minpoly => ElimMethod::Minpoly,
        },
        selection: match engine.strategy {
            StrategyArg::Normal => Selection::Normal,
            StrategyArg::Sugar => Selection::Sugar,
            StrategyArg::Seeded => Selection::Seeded(ctx.seed),
        },
    }
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
enum RunStatus {
    Computed,
    Undecided,
    NotZeroDimensional,
}

#[derive(Serialize)]
struct SolveReport {
    m: u64,
    level: Level,
    theta: u64,
    status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<IntPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    squarefree: Option<IntPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture: Option<IntPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture_match: Option<bool>,
    stats: Stats,
}

impl SolveReport {
    fn status(&self) -> Status {
        match (self.status, self.fixture_match) {
            (_, Some(false)) => Status::Discrepancy,
            (RunStatus::Computed, _) => Status::Ok,
            _ => Status::Resource,
        }
    }

    /// `F m theta : c0, c1, ...` followed by the stats as JSON.
    fn text(&self) -> String {
        let mut s = match &self.squarefree {
            Some(f) => format!("F {} {} : {}\n", self.m, self.theta, f.coeff_strings().join(", ")),
            None => format!("F {} {} : {:?}\n", self.m, self.theta, self.status),
        };
        if let Some(ok) = self.fixture_match {
            let _ = writeln!(s, "fixture {}", if ok { "match" } else { "MISMATCH" });
        }
        let _ = writeln!(s, "{}", serde_json::to_string(&self.stats).unwrap_or_default());
        s
    }
}

fn fixture_squarefree(m: u64, level: Level, theta: u64) -> Option<IntPoly> {
    let t = f_table(m).ok()?;
    let f = match level {
        Level::Ghat => t.entry(theta)?.poly(),
        Level::G => t.product(),
    };
    f.squarefree_part().ok()
}

fn solve_one(m: u64, level: Level, theta: i64, opts: &ElimOptions, bound: u64) -> CliResult<SolveReport> {
    let (sys, target): (PolySystem, Aggregate) = match level {
        Level::Ghat => (gen_ghat_system_bounded(m, theta, bound)?, Aggregate::MeanGhat),
        Level::G => (gen_g_system_bounded(m, bound)?, Aggregate::G0),
    };
    let theta = sys.theta;
    let fixture = fixture_squarefree(m, level, theta);
    let mut rep = SolveReport {
        m,
        level,
        theta,
        status: RunStatus::Computed,
        generator: None,
        squarefree: None,
        fixture_match: None,
        fixture,
        stats: Stats::default(),
    };
    match eliminate_with(&sys, target, opts) {
        Ok(Elimination {
            generator,
            squarefree,
            stats,
            ..
        }) => {
            rep.fixture_match = rep.fixture.as_ref().map(|f| *f == squarefree);
            rep.generator = Some(generator);
            rep.squarefree = Some(squarefree);
            rep.stats = stats;
        }
        Err(Error::LimitExceeded(b)) => {
            rep.status = RunStatus::Undecided;
            rep.stats = b.stats;
        }
        Err(Error::NotZeroDimensional) => rep.status = RunStatus::NotZeroDimensional,
        Err(e) => return Err(e.into()),
    }
    Ok(rep)
}

#[derive(Serialize)]
struct TableReport {
    table: FTable,
    coherence: CoherenceReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    computed: Vec<SolveReport>,
}

fn factored(factors: &[IntPoly]) -> String {
    match factors {
        [] => "1".into(),
        [f] => f.to_string(),
        fs => fs.iter().map(|f| format!("({f})")).collect(),
    }
}

fn table_text(rep: &TableReport) -> String {
    let t = &rep.table;
    let mut s = format!("m = {}\n{:<6} {:<44} computed\n", t.m, "theta", "F_{m,theta}(x)");
    for e in &t.entries {
        let computed = rep.computed.iter().find(|c| c.theta == e.theta);
        let cell = match computed {
            None => "-".to_string(),
            Some(c) => match (c.status, c.fixture_match) {
                (RunStatus::Computed, Some(true)) => "match".into(),
                (RunStatus::Computed, _) => format!("MISMATCH: {}", c.squarefree.as_ref().map_or(String::new(), |f| f.to_string())),
                (RunStatus::Undecided, _) => format!("undecided ({} S-pairs)", c.stats.s_pairs),
                (RunStatus::NotZeroDimensional, _) => "no univariate relation".into(),
            },
        };
        let _ = writeln!(s, "{:<6} {:<44} {cell}", e.theta, factored(&e.factors));
    }
    let c = &rep.coherence;
    let _ = writeln!(s, "F_{}(x) = {}", t.m, factored(&t.product_factors));
    let _ = writeln!(
        s,
        "F_m(m/2 - 1) = 0: {}  (m+1)x^2 - 1 factor: {} (m+1 prime power: {})  x factor: {}  gate violations: {}",
        c.vanishes_at_explicit_g0,
        c.has_prime_power_factor,
        c.m_plus_one_prime_power,
        c.has_x_factor,
        c.gate_violations.len()
    );
    if !c.product_matches {
        let _ = writeln!(
            s,
            "product of theta entries differs from F_m: extra {}, missing {}",
            c.product_extra.as_ref().map_or("-".into(), |f| f.to_string()),
            c.product_missing.as_ref().map_or("-".into(), |f| f.to_string())
        );
    }
    s
}

fn gb(ctx: &mut Ctx, cmd: GbCmd) -> CliResult<Status> {
    match cmd {
        GbCmd::Solve {
            m,
            theta,
            level,
            engine,
        } => {
            let level = match level {
                LevelArg::G => Level::G,
                LevelArg::Ghat => Level::Ghat,
            };
            let opts = elim_options(ctx, &engine);
            let rep = solve_one(m, level, theta, &opts, ctx.limits.system_bound)?;
            ctx.out.emit(&rep, || rep.text())?;
            Ok(rep.status())
        }
        GbCmd::Table {
            m,
            fixtures_only,
            engine,
        } => {
            if !TABULATED_M.contains(&m) {
                return Err(Error::NotTabulated(m).into());
            }
            let table = f_table(m)?;
            let coherence = coherence(m)?;
            let opts = elim_options(ctx, &engine);
            let bound = ctx.limits.system_bound;
            let computed = if fixtures_only {
                Vec::new()
            } else {
                table
                    .entries
                    .par_iter()
                    .map(|e| solve_one(m, Level::Ghat, e.theta as i64, &opts, bound))
                    .collect::<CliResult<Vec<_>>>()?
            };
            let worst = computed.iter().map(SolveReport::status).max().unwrap_or(Status::Ok);
            let fixtures_ok = coherence.consistent() && coherence.product_matches;
            let rep = TableReport {
                table,
                coherence,
                computed,
            };
            ctx.out.emit(&rep, || table_text(&rep))?;
            Ok(if fixtures_ok { worst } else { Status::Discrepancy })
        }
        GbCmd::ProbeZero { m, theta } => {
            let sys = gen_ghat_system_bounded(m, theta, ctx.limits.system_bound)?;
            let (outcome, stats) = probe_g0_zero(&sys, &ctx.limits)?;
            // A stored F has an x factor exactly when 0 lies on the variety.
            let expected = f_table(m).ok().and_then(|t| t.entry(sys.theta).map(|e| e.poly())).map(|f| {
                if f.coeff(0) == 0.into() {
                    ProbeOutcome::Nonempty
                } else {
                    ProbeOutcome::Empty
                }
            });
            #[derive(Serialize)]
            struct ProbeReport {
                m: u64,
                theta: u64,
                outcome: ProbeOutcome,
                #[serde(skip_serializing_if = "Option::is_none")]
                fixture_expects: Option<ProbeOutcome>,
                stats: Stats,
            }
            let rep = ProbeReport {
                m,
                theta: sys.theta,
                outcome,
                fixture_expects: expected,
                stats,
            };
            ctx.out.emit(&rep, || {
                let mut s = format!("m = {} theta = {}: {:?}", rep.m, rep.theta, rep.outcome);
                if let Some(e) = rep.fixture_expects {
                    let _ = write!(s, " (tables: {e:?})");
                }
                s.push('\n');
                s
            })?;
            let contradicts = outcome != ProbeOutcome::Undecided && expected.is_some_and(|e| e != outcome);
            Ok(if contradicts { Status::Discrepancy } else { Status::Ok })
        }
    }
}
