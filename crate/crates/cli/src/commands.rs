use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use critnum::formula::{
    chi_hat_interval3, chi_hat_interval3_raw, evaluate, max_incomplete, sumfree_bound,
};
use critnum::oracle::{HARD_MAX_ORDER, SINGLE_QUERY_MAX_ORDER, SWEEP_MAX_ORDER};
use critnum::witness::{prop_bound_search, witness_chi_hat_h, witness_chi_interval, witness_prop_bound};
use critnum::{CriticalKind, Error, GroupType, Oracle, OracleConfig, OracleQuery};

use crate::select::{collect_groups, parse_params};
use crate::table::{render, Format, Row, Status};
use crate::{OracleArgs, Quantity, Selection};

/// One (group, quantity, parameter) to evaluate.
#[derive(Debug, Clone)]
pub struct Job {
    pub group: GroupType,
    pub kind: CriticalKind,
    /// Use the structure-dependent `[0,3]` form with its small-order guard.
    pub interval3: bool,
}

impl Job {
    fn quantity(&self) -> &'static str {
        if self.interval3 {
            "chi_hat_interval3"
        } else {
            self.kind.name()
        }
    }

    fn reproduce(&self) -> String {
        let param = match (self.interval3, self.kind) {
            (true, _) => String::new(),
            (_, CriticalKind::ChiH(p) | CriticalKind::ChiHatH(p)) => format!(" --h {p}"),
            (_, CriticalKind::ChiInterval(p) | CriticalKind::ChiHatInterval(p)) => format!(" --s {p}"),
            _ => String::new(),
        };
        format!("critnum verify --quantity {} --group {}{param}", self.quantity(), self.group)
    }
}

pub fn jobs(quantity: Quantity, selection: &Selection, h: Option<&str>, s: Option<&str>) -> Result<Vec<Job>> {
    let groups = collect_groups(&selection.group, &selection.orders()?)?;
    let need = |flag: &str, value: Option<&str>| -> Result<Vec<u32>> {
        match value {
            Some(text) => parse_params(flag, text),
            None => bail!("quantity {quantity:?} needs --{flag}"),
        }
    };
    let forbid = |flag: &str, value: Option<&str>| -> Result<()> {
        if value.is_some() {
            bail!("quantity {quantity:?} takes no --{flag}");
        }
        Ok(())
    };
    let kinds: Vec<CriticalKind> = match quantity {
        Quantity::ChiH | Quantity::ChiHatH => {
            forbid("s", s)?;
            let make = if quantity == Quantity::ChiH { CriticalKind::ChiH } else { CriticalKind::ChiHatH };
            need("h", h)?.into_iter().map(make).collect()
        }
        Quantity::ChiInterval | Quantity::ChiHatInterval => {
            forbid("h", h)?;
            let make = if quantity == Quantity::ChiInterval {
                CriticalKind::ChiInterval
            } else {
                CriticalKind::ChiHatInterval
            };
            need("s", s)?.into_iter().map(make).collect()
        }
        Quantity::ChiHatInterval3 => {
            forbid("h", h)?;
            forbid("s", s)?;
            vec![CriticalKind::ChiHatInterval(3)]
        }
        Quantity::Cr | Quantity::CrStar => {
            forbid("h", h)?;
            forbid("s", s)?;
            if quantity == Quantity::Cr {
                vec![CriticalKind::CrStar, CriticalKind::Cr]
            } else {
                vec![CriticalKind::CrStar]
            }
        }
    };
    for k in &kinds {
        k.validate()?;
    }
    Ok(groups
        .iter()
        .flat_map(|g| {
            kinds.iter().map(move |&kind| Job {
                group: g.clone(),
                kind,
                interval3: quantity == Quantity::ChiHatInterval3,
            })
        })
        .collect())
}

struct FormulaCell {
    value: Option<u64>,
    branch: String,
    status: Status,
}

fn is_domain_error(e: &Error) -> bool {
    matches!(
        e,
        Error::OutsideTheoremDomain(_) | Error::OutsideValidatedDomain(_) | Error::WrongGroupClass(_)
    )
}

fn formula_cell(job: &Job) -> Result<FormulaCell> {
    if job.interval3 {
        return match chi_hat_interval3(&job.group) {
            Ok(value) => {
                let raw = chi_hat_interval3_raw(&job.group)?;
                let branch = match raw.subgroup_order {
                    Some(m) => format!("m={m}"),
                    None => "floor".into(),
                };
                Ok(FormulaCell { value: Some(value), branch, status: Status::Computed })
            }
            Err(e @ Error::OutsideValidatedDomain(_)) => Ok(FormulaCell {
                // the unguarded value is shown so the exclusion can be inspected
                value: Some(chi_hat_interval3_raw(&job.group)?.value),
                branch: format!("excluded: {e}"),
                status: Status::Excluded,
            }),
            Err(e) if is_domain_error(&e) => Ok(FormulaCell {
                value: None,
                branch: format!("excluded: {e}"),
                status: Status::Excluded,
            }),
            Err(e) => Err(e.into()),
        };
    }
    match evaluate(&job.group, job.kind) {
        Ok(fv) => Ok(FormulaCell { value: Some(fv.value), branch: fv.branch, status: Status::Computed }),
        Err(e) if is_domain_error(&e) => Ok(FormulaCell {
            value: None,
            branch: e.to_string(),
            status: Status::NoFormula,
        }),
        Err(e) => Err(e.into()),
    }
}

fn row(job: &Job, cell: &FormulaCell) -> Row {
    Row {
        group: job.group.to_string(),
        n: job.group.order(),
        quantity: job.quantity().into(),
        param: job.kind.parameter(),
        formula: cell.value,
        oracle: None,
        witness_ok: None,
        branch: cell.branch.clone(),
        status: cell.status,
    }
}

fn emit(rows: &[Row], format: Format) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    render(rows, format, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Exit status 1 when some requested value has no closed form.
pub fn formula(jobs: &[Job], format: Format) -> Result<ExitCode> {
    let mut rows = Vec::with_capacity(jobs.len());
    let mut missing = 0;
    for job in jobs {
        let cell = formula_cell(job)?;
        if cell.status == Status::NoFormula {
            missing += 1;
            eprintln!("{} {}: {}", job.group, job.kind, cell.branch);
        }
        rows.push(row(job, &cell));
    }
    emit(&rows, format)?;
    Ok(if missing == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

pub fn build_oracle(args: &OracleArgs, single_group: bool) -> Result<Oracle> {
    let default = if single_group { SINGLE_QUERY_MAX_ORDER } else { SWEEP_MAX_ORDER };
    let env = match std::env::var("CRITNUM_MAX_N") {
        Ok(v) => Some(v.trim().parse::<u64>().with_context(|| format!("CRITNUM_MAX_N={v:?}"))?),
        Err(_) => None,
    };
    let max_order = args.max_n.or(env).unwrap_or(default);
    if max_order > default && !args.budget_ack {
        bail!(
            "an oracle cap of {max_order} exceeds the default {default}; pass --budget-ack to allow it \
             (exhaustive search doubles in cost with each extra element, hard limit {HARD_MAX_ORDER})"
        );
    }
    let mut config = OracleConfig { max_order, ..OracleConfig::default() };
    if let Some(w) = args.workers {
        config.workers = w.max(1);
    }
    Ok(Oracle::new(config)?)
}

/// Certificate check for one row: the construction verifies and is
/// consistent with the exhaustive value.
fn witness_check(job: &Job, oracle_value: u64) -> Result<Option<bool>> {
    let ok = match job.kind {
        CriticalKind::ChiH(h) | CriticalKind::ChiHatH(h) => {
            let c = witness_chi_hat_h(&job.group, h)?;
            c.recheck().is_ok() && c.claimed_size + 1 == oracle_value
        }
        CriticalKind::ChiInterval(s) => {
            let c = witness_chi_interval(&job.group, s)?;
            c.recheck().is_ok() && c.claimed_size + 1 == oracle_value
        }
        CriticalKind::ChiHatInterval(s) => {
            let c = prop_bound_search(&job.group, s)?;
            c.recheck().is_ok() && c.bound <= oracle_value
        }
        CriticalKind::Cr | CriticalKind::CrStar => return Ok(None),
    };
    Ok(Some(ok))
}

/// Exit status 0 iff no row is a mismatch. Stops at the first group over the
/// oracle budget, after printing the rows finished so far.
pub fn verify(jobs: &[Job], oracle: &Oracle, format: Format) -> Result<ExitCode> {
    let mut rows = Vec::with_capacity(jobs.len());
    let mut mismatches = 0;
    for job in jobs {
        let cell = formula_cell(job)?;
        let query = OracleQuery::new(job.group.clone(), job.kind)?;
        let outcome = match oracle.brute_critical_detailed(&query) {
            Ok(o) => o,
            Err(e @ Error::BudgetExceeded { .. }) => {
                emit(&rows, format)?;
                return Err(anyhow::Error::new(e).context(format!(
                    "{}: report stopped at {} after {} rows",
                    job.quantity(),
                    job.group,
                    rows.len()
                )));
            }
            Err(e) => return Err(e.into()),
        };
        let witness_ok = witness_check(job, outcome.value)?;
        let status = match cell.status {
            Status::Excluded | Status::NoFormula => cell.status,
            _ if cell.value == Some(outcome.value) && witness_ok != Some(false) => Status::Agree,
            _ => Status::Mismatch,
        };
        if status == Status::Mismatch {
            mismatches += 1;
            let extremal = outcome.extremal.as_ref().map_or_else(
                || "none".to_string(),
                |a| format!("{:?} (hex {})", a.to_coords(), a.to_hex()),
            );
            eprintln!(
                "mismatch: group={} quantity={} param={} formula={} oracle={} witness_ok={} extremal={extremal}; reproduce with: {}",
                job.group,
                job.quantity(),
                job.kind.parameter().map_or_else(|| "-".into(), |p| p.to_string()),
                cell.value.map_or_else(|| "-".into(), |v| v.to_string()),
                outcome.value,
                witness_ok.map_or_else(|| "-".into(), |b| b.to_string()),
                job.reproduce(),
            );
        }
        let mut r = row(job, &cell);
        r.oracle = Some(outcome.value);
        r.witness_ok = witness_ok;
        r.status = status;
        rows.push(r);
    }
    emit(&rows, format)?;
    let excluded = rows.iter().filter(|r| r.status == Status::Excluded).count();
    let no_formula = rows.iter().filter(|r| r.status == Status::NoFormula).count();
    eprintln!(
        "{} rows: {} agree, {mismatches} mismatch, {excluded} excluded, {no_formula} without closed form",
        rows.len(),
        rows.iter().filter(|r| r.status == Status::Agree).count()
    );
    Ok(if mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn witness(ty: &GroupType, h: Option<u32>, s: Option<u32>) -> Result<()> {
    let cert = match (h, s) {
        (Some(h), None) => witness_chi_hat_h(ty, h)?,
        (None, Some(s)) => witness_chi_interval(ty, s)?,
        _ => bail!("pass exactly one of --h and --s"),
    };
    cert.recheck()?;
    print_json(&cert)
}

pub fn bound(ty: &GroupType, s: u32, explicit: Option<(Vec<u64>, Vec<u64>)>) -> Result<()> {
    let cert = match explicit {
        Some((quotient, c)) => witness_prop_bound(ty, &quotient, &c, s)?,
        None => prop_bound_search(ty, s)?,
    };
    cert.recheck()?;
    print_json(&cert)
}

pub fn sumfree(orders: &[u64], oracle: Option<&Oracle>, format: Format) -> Result<ExitCode> {
    let mut rows = Vec::with_capacity(orders.len());
    let mut mismatches = 0;
    for &n in orders {
        let ty = GroupType::cyclic(n)?;
        let bound = sumfree_bound(n)?;
        let d = max_incomplete(n, 3)?.maximizers[0];
        let brute = match oracle {
            Some(o) => match o.brute_max_sumfree(n) {
                Ok(v) => Some(v),
                Err(e @ Error::BudgetExceeded { .. }) => {
                    emit(&rows, format)?;
                    return Err(anyhow::Error::new(e).context(format!("sumfree stopped at order {n}")));
                }
                Err(e) => return Err(e.into()),
            },
            None => None,
        };
        let status = match brute {
            None => Status::Computed,
            Some(b) if b == bound => Status::Agree,
            Some(b) => {
                mismatches += 1;
                eprintln!("mismatch: Z{n} largest sum-free set {b}, bound {bound}");
                Status::Mismatch
            }
        };
        rows.push(Row {
            group: ty.to_string(),
            n,
            quantity: "sumfree".into(),
            param: None,
            formula: Some(bound),
            oracle: brute,
            witness_ok: None,
            branch: format!("d={d}"),
            status,
        });
    }
    emit(&rows, format)?;
    Ok(if mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
