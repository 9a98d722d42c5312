//! Scenario evaluation.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::config::SweepConfig;
use super::scenario::{scenarios, Scenario};
use super::{Status, VerificationRow};
use crate::error::{Error, Result};
use crate::functions::{eta_fn, real_fn, EtaFn, RealFn};
use crate::inequalities::{
    bound_amt, bound_classic_hh, bound_ds, bound_eta_hh, bound_kka, bound_mr1, bound_mr2, bound_mr3, bound_mr4,
    eq_id_report, lemma1_report, lemma2_report, verify_hypothesis, BoundReport, HolderParams, Hypothesis, Precheck,
    TheoremId, PRECHECK_GRID,
};
use crate::operators::{FracParams, Interval};
use crate::quadrature::QuadSpec;

/// Rows of a sweep plus its run log.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<VerificationRow>,
    pub log: Vec<String>,
    pub scenarios_total: usize,
    pub scenarios_skipped: usize,
}

impl SweepOutcome {
    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

struct Prepared<'s> {
    scenario: &'s Scenario,
    g: RealFn,
    eta: EtaFn,
    params: FracParams,
    iv: Interval,
    holder: HolderParams,
}

fn prepare(s: &Scenario) -> Result<Prepared<'_>> {
    let params = FracParams::new(s.alpha, s.k, s.r)?;
    let iv = Interval::new(s.a, s.b)?;
    params.check_domain(iv.a, iv.b)?;
    let holder = HolderParams::from_q(s.holder_q()).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(Prepared {
        scenario: s,
        g: real_fn(&s.fn_label)?,
        eta: eta_fn(&s.eta_label)?,
        params,
        iv,
        holder,
    })
}

fn evaluate(t: TheoremId, p: &Prepared, q: &QuadSpec) -> Result<BoundReport> {
    let pre = Precheck::Assume;
    let (g, eta, iv, fp, hp) = (&p.g, &p.eta, &p.iv, &p.params, &p.holder);
    let binding = |pair: (BoundReport, BoundReport)| BoundReport::binding(pair.0, pair.1);
    let alternate = |r: BoundReport| {
        r.alternate()
            .ok_or_else(|| Error::Domain(format!("{t} has no alternate reading here")))
    };
    match t {
        TheoremId::Hh1 => bound_classic_hh(g, iv, q, pre).map(binding),
        TheoremId::EtaHh => bound_eta_hh(g, eta, iv, q, pre).map(binding),
        TheoremId::EtaHhStated => alternate(bound_eta_hh(g, eta, iv, q, pre)?.0),
        TheoremId::Ds => bound_ds(g, eta, iv, q, pre),
        TheoremId::DsSigned => alternate(bound_ds(g, eta, iv, q, pre)?),
        TheoremId::Kka => bound_kka(g, eta, iv, fp.alpha, q, pre),
        TheoremId::Amt => bound_amt(g, iv, fp, q, pre).map(binding),
        TheoremId::Mr1 => bound_mr1(g, eta, iv, fp, q, pre),
        TheoremId::Mr2 => bound_mr2(g, eta, iv, fp, q, pre),
        TheoremId::Mr3 => bound_mr3(g, eta, iv, fp, hp, q, pre),
        TheoremId::Mr4 => bound_mr4(g, eta, iv, fp, hp, q, pre),
        TheoremId::Mr4Stated => alternate(bound_mr4(g, eta, iv, fp, hp, q, pre)?),
        TheoremId::Lemma1 => lemma1_report(g, iv, fp, q),
        TheoremId::Lemma2 => lemma2_report(g, iv, fp, q),
        TheoremId::EqId => eq_id_report(g, iv, fp, q),
    }
}

fn status_of(error: &Error) -> Option<Status> {
    match error {
        Error::Precondition(_) => Some(Status::PreconditionFailed),
        Error::NonConvergence { .. } | Error::Evaluation { .. } => Some(Status::Nonconverged),
        Error::Domain(_) => Some(Status::Skipped),
        Error::Config(_) | Error::Io(_) => None,
    }
}

/// Rows of one valid scenario, plus log lines for rows that did not
/// produce a verdict.
fn scenario_rows(
    p: &Prepared,
    theorems: &[TheoremId],
    q: &QuadSpec,
    seed: u64,
) -> Result<(Vec<VerificationRow>, Vec<String>)> {
    let s = p.scenario;
    let mut verdicts: HashMap<Hypothesis, Result<()>> = HashMap::new();
    let mut rows = Vec::with_capacity(theorems.len());
    let mut log = Vec::new();
    for &t in theorems {
        let h = t.hypothesis();
        let checked = verdicts
            .entry(h)
            .or_insert_with(|| verify_hypothesis(h, &p.g, &p.eta, &p.iv, Some(p.holder.q), PRECHECK_GRID, seed))
            .clone();
        let outcome = checked.and_then(|_| evaluate(t, p, q));
        let mut row = VerificationRow::blank(s, t);
        match outcome {
            Ok(report) => {
                row.lhs = Some(report.lhs);
                row.rhs = Some(report.rhs);
                row.margin = Some(report.margin);
                row.status = if report.holds { Status::Holds } else { Status::Violated };
            }
            Err(e) => {
                let Some(status) = status_of(&e) else {
                    return Err(e);
                };
                row.status = status;
                log.push(format!("scenario {} {t}: {}: {e}", s.id, status.as_str()));
            }
        }
        rows.push(row);
    }
    Ok((rows, log))
}

/// Evaluate every selected theorem on every valid scenario of `cfg`.
///
/// Scenarios with invalid parameters are skipped and logged. The rows are
/// sorted by scenario id, then by theorem, so the output does not depend on
/// the evaluation order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let theorems = cfg.theorem_ids()?;
    let q = cfg.quad_spec()?;
    let all = scenarios(cfg);
    let mut log = Vec::new();
    let mut valid = Vec::with_capacity(all.len());
    for s in &all {
        match prepare(s) {
            Ok(p) => valid.push(p),
            Err(Error::Config(msg)) => return Err(Error::Config(msg)),
            Err(e) => log.push(format!("scenario {} skipped: {}", s.id, reason(&e))),
        }
    }
    if valid.is_empty() {
        return Err(Error::Config(format!("no valid scenarios among {}", all.len())));
    }
    let skipped = all.len() - valid.len();

    let results = valid
        .par_iter()
        .map(|p| scenario_rows(p, &theorems, &q, cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(valid.len() * theorems.len());
    for (r, l) in results {
        rows.extend(r);
        log.extend(l);
    }
    rows.sort_by_key(|r| (r.scenario_id, r.theorem));

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for status in Status::ALL {
        counts.insert(status.as_str(), 0);
    }
    for r in &rows {
        *counts.entry(r.status.as_str()).or_default() += 1;
    }
    log.push(format!(
        "scenarios: {} total, {} evaluated, {skipped} skipped; rows: {}",
        all.len(),
        valid.len(),
        rows.len()
    ));
    log.push(
        counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    Ok(SweepOutcome {
        rows,
        log,
        scenarios_total: all.len(),
        scenarios_skipped: skipped,
    })
}

fn reason(e: &Error) -> String {
    match e {
        Error::Domain(msg) | Error::Precondition(msg) => msg.clone(),
        other => other.to_string(),
    }
}
