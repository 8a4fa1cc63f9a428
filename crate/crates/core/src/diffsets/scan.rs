//! Parallel classification over ranges of `(q, m)`.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_all, DSParams, Family, Method, Verdict};
use crate::arith;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ff::make_field_bounded;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModifiedMode {
    Plain,
    Modified,
    Both,
}

impl ModifiedMode {
    fn flags(self) -> &'static [bool] {
        match self {
            ModifiedMode::Plain => &[false],
            ModifiedMode::Modified => &[true],
            ModifiedMode::Both => &[false, true],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanRequest {
    pub m_min: u64,
    pub m_max: u64,
    /// `Some(true)` keeps odd `m` only, `Some(false)` even only.
    pub odd: Option<bool>,
    pub q_max: u64,
    pub mode: ModifiedMode,
    pub methods: Vec<Method>,
}

impl ScanRequest {
    pub fn single(m: u64, q_max: u64) -> Self {
        ScanRequest {
            m_min: m,
            m_max: m,
            odd: None,
            q_max,
            mode: ModifiedMode::Both,
            methods: vec![Method::Direct],
        }
    }

    fn accepts(&self, m: u64) -> bool {
        (self.m_min..=self.m_max).contains(&m) && self.odd.is_none_or(|odd| (m % 2 == 1) == odd)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationEntry {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub m: u64,
    pub modified: bool,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub n: u64,
    pub verdict: Verdict,
    pub family: Option<Family>,
    pub methods: Vec<Method>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub disagreeing: Vec<Method>,
}

impl ClassificationEntry {
    pub fn nontrivial_hit(&self) -> bool {
        self.verdict == Verdict::DifferenceSet && self.n > 1
    }
}

/// Feasible instances in `(m, q, modified)` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ClassificationTable(pub Vec<ClassificationEntry>);

impl ClassificationTable {
    pub fn entries(&self) -> &[ClassificationEntry] {
        &self.0
    }

    pub fn nontrivial_hits(&self) -> impl Iterator<Item = &ClassificationEntry> {
        self.0.iter().filter(|e| e.nontrivial_hit())
    }

    pub fn unexplained(&self) -> impl Iterator<Item = &ClassificationEntry> {
        self.0
            .iter()
            .filter(|e| e.family == Some(Family::Unexplained))
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &ClassificationEntry> {
        self.0.iter().filter(|e| !e.disagreeing.is_empty())
    }
}

pub fn scan(req: &ScanRequest, limits: &Limits) -> Result<ClassificationTable> {
    let bound = limits.scan_bound.min(limits.field_bound);
    if req.q_max > bound {
        return Err(Error::BoundExceeded {
            what: "q_max",
            value: req.q_max,
            bound,
        });
    }
    if req.methods.is_empty() {
        return Err(Error::InvalidArgument("no checker methods requested".into()));
    }
    let jobs: Vec<(u64, u64, u32, Vec<(u64, bool)>)> = arith::prime_powers_up_to(req.q_max)
        .into_iter()
        .filter_map(|(q, p, e)| {
            let inst: Vec<(u64, bool)> = arith::divisors(q - 1)
                .into_iter()
                .filter(|&m| req.accepts(m))
                .flat_map(|m| req.mode.flags().iter().map(move |&md| (m, md)))
                .filter(|&(m, md)| DSParams::new(q, m, md).is_ok_and(|pr| pr.feasible()))
                .collect();
            (!inst.is_empty()).then_some((q, p, e, inst))
        })
        .collect();

    let results: Vec<Result<Vec<ClassificationEntry>>> = jobs
        .par_iter()
        .map(|(q, p, e, inst)| {
            let field = make_field_bounded(*p, *e, limits.field_bound)?;
            inst.iter()
                .map(|&(m, modified)| {
                    let r = check_all(&field, m, modified, &req.methods, limits)?;
                    Ok(ClassificationEntry {
                        q: *q,
                        p: *p,
                        e: *e,
                        m,
                        modified,
                        v: r.params.v,
                        k: r.params.k,
                        lambda: r.params.lambda.expect("feasible"),
                        n: r.params.n.expect("feasible"),
                        verdict: r.verdict,
                        family: r.family,
                        methods: r.methods_agreeing,
                        disagreeing: r.methods_disagreeing,
                    })
                })
                .collect()
        })
        .collect();

    let mut entries = Vec::new();
    for r in results {
        entries.extend(r?);
    }
    entries.sort_by_key(|e| (e.m, e.q, e.modified));
    Ok(ClassificationTable(entries))
}
