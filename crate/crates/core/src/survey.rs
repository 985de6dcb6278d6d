//! Runs the selected checks over every ideal of a root system.
//!
//! Each verdict carries a scope: `proven` where the factorization is a
//! theorem for that type, `conjectural` otherwise. Only proven verdicts
//! decide [`SurveyReport::exit_class`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arrangement::{
    build_ideal_arrangement, chamber_poly, char_poly, freeness_certificate, thm2_expected, Budget, ChiMethod, Freeness,
};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals, ideal_exponents, Ideal};
use crate::macdonald::{macdonald_lhs, macdonald_lhs_work, macdonald_rhs};
use crate::par::Exec;
use crate::poly::IntPolynomial;
use crate::rootsys::{CartanType, RootSystem, WeylGroup};
use crate::weylcomb::{check_factorization_thm1, poincare_poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Thm1,
    Thm2,
    Free,
    Macdonald,
    Chambers,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Thm1, Check::Thm2, Check::Free, Check::Macdonald, Check::Chambers];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Thm1 => "thm1",
            Check::Thm2 => "thm2",
            Check::Free => "free",
            Check::Macdonald => "macdonald",
            Check::Chambers => "chambers",
        }
    }

    /// Whether the check enumerates the Weyl group.
    pub fn needs_weyl(self) -> bool {
        matches!(self, Check::Thm1 | Check::Macdonald | Check::Chambers)
    }

    pub fn scope(self, kind: CartanType) -> Scope {
        let proven = match self {
            Check::Thm1 => matches!(kind.letter, 'A' | 'B' | 'C' | 'G' | 'F') || (kind.letter == 'E' && kind.rank == 6),
            Check::Thm2 | Check::Free => matches!(kind.letter, 'A' | 'B' | 'C' | 'D' | 'G'),
            Check::Macdonald | Check::Chambers => true,
        };
        if proven {
            Scope::Proven
        } else {
            Scope::Conjectural
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| format!("unknown check {s:?} (expected thm1, thm2, free, macdonald or chambers)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Proven,
    Conjectural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Mismatch,
    Found,
    NotFound,
    Budget,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Mismatch => "mismatch",
            Verdict::Found => "found",
            Verdict::NotFound => "not_found",
            Verdict::Budget => "budget",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Equal | Verdict::Found)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub verdict: Verdict,
    pub scope: Scope,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_coeffs: Option<IntPolynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_coeffs: Option<IntPolynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn compared(check: Check, scope: Scope, lhs: IntPolynomial, rhs: IntPolynomial) -> Self {
        Self {
            check,
            verdict: if lhs == rhs { Verdict::Equal } else { Verdict::Mismatch },
            scope,
            lhs_coeffs: Some(lhs),
            rhs_coeffs: Some(rhs),
            certificate_depth: None,
            detail: None,
        }
    }

    fn bare(check: Check, scope: Scope, verdict: Verdict, detail: Option<String>) -> Self {
        Self { check, verdict, scope, lhs_coeffs: None, rhs_coeffs: None, certificate_depth: None, detail }
    }

    /// A proven-scope verdict that is neither equal nor found (and not a
    /// budget stop).
    pub fn is_proven_failure(&self) -> bool {
        self.scope == Scope::Proven && matches!(self.verdict, Verdict::Mismatch | Verdict::NotFound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRecord {
    /// Position in the deterministic ideal order.
    pub ideal_id: usize,
    pub ideal_roots: Vec<usize>,
    pub generators: Vec<usize>,
    pub k: usize,
    pub lambda: Vec<usize>,
    pub exponents: Vec<usize>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl IdealRecord {
    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: Check,
    pub scope: Scope,
    pub equal: usize,
    pub mismatch: usize,
    pub found: usize,
    pub not_found: usize,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub ideal_count: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub records: Vec<IdealRecord>,
    pub summary: Vec<CheckSummary>,
}

/// How a survey should end, in decreasing priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitClass {
    Ok,
    ProvenFailure,
    BudgetStop,
}

impl SurveyReport {
    pub fn exit_class(&self) -> ExitClass {
        let outcomes = || self.records.iter().flat_map(|r| r.checks.iter());
        if outcomes().any(CheckOutcome::is_proven_failure) {
            ExitClass::ProvenFailure
        } else if outcomes().any(|o| o.scope == Scope::Proven && o.verdict == Verdict::Budget) {
            ExitClass::BudgetStop
        } else {
            ExitClass::Ok
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub checks: Vec<Check>,
    pub exec: Exec,
    pub budget: Budget,
    /// Upper bound on [`macdonald_lhs_work`] per ideal.
    pub macdonald_work: u64,
    /// Drop timings and the timestamp so output is byte-stable.
    pub reproducible: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        Self {
            checks: vec![Check::Thm1, Check::Thm2, Check::Free],
            exec: Exec::default(),
            budget: Budget::default(),
            macdonald_work: 200_000_000,
            reproducible: false,
        }
    }
}

fn run_check(
    check: Check,
    rs: &RootSystem,
    weyl: Option<&WeylGroup>,
    ideal: &Ideal,
    opts: &SurveyOptions,
) -> Result<CheckOutcome> {
    let scope = check.scope(rs.kind());
    let need_weyl = || weyl.ok_or_else(|| Error::InvalidIdeal(format!("check {check} needs the Weyl group")));
    let budget_stop = |e: Error| match e {
        Error::BudgetExceeded { .. } => Ok(CheckOutcome::bare(check, scope, Verdict::Budget, Some(e.to_string()))),
        e => Err(e),
    };
    match check {
        Check::Thm1 => {
            let r = check_factorization_thm1(rs, need_weyl()?, ideal);
            Ok(CheckOutcome::compared(check, scope, r.lhs, r.rhs))
        }
        Check::Thm2 => {
            let arr = build_ideal_arrangement(rs, ideal);
            match char_poly(&arr, ChiMethod::Lattice, &opts.budget) {
                Ok(chi) => Ok(CheckOutcome::compared(check, scope, chi, thm2_expected(rs, ideal))),
                Err(e) => budget_stop(e),
            }
        }
        Check::Free => {
            let arr = build_ideal_arrangement(rs, ideal);
            match freeness_certificate(&arr, opts.budget.certificate_nodes) {
                Ok(Freeness::Found(c)) => {
                    let mut o = CheckOutcome::bare(check, scope, Verdict::Found, None);
                    o.certificate_depth = Some(c.depth());
                    o.detail = Some(format!("exponents {:?}", c.exponents));
                    Ok(o)
                }
                Ok(Freeness::NotFound) => Ok(CheckOutcome::bare(check, scope, Verdict::NotFound, None)),
                Err(e) => budget_stop(e),
            }
        }
        Check::Macdonald => {
            let weyl = need_weyl()?;
            let r = ideal.complement();
            let work = macdonald_lhs_work(weyl, r);
            if work > opts.macdonald_work {
                return budget_stop(Error::BudgetExceeded {
                    what: "Macdonald left side",
                    needed: work,
                    budget: opts.macdonald_work,
                });
            }
            let lhs = macdonald_lhs(rs, weyl, r, Exec::Sequential)?;
            Ok(CheckOutcome::compared(check, scope, lhs, macdonald_rhs(weyl, r)))
        }
        Check::Chambers => {
            let weyl = need_weyl()?;
            Ok(CheckOutcome::compared(check, scope, chamber_poly(weyl, ideal), poincare_poly(weyl, ideal)))
        }
    }
}

/// Runs the selected checks on one ideal.
pub fn ideal_record(
    rs: &RootSystem,
    weyl: Option<&WeylGroup>,
    ideal_id: usize,
    ideal: &Ideal,
    opts: &SurveyOptions,
) -> Result<IdealRecord> {
    let start = Instant::now();
    let profile = ideal_exponents(rs, ideal);
    let checks = opts.checks.iter().map(|&c| run_check(c, rs, weyl, ideal, opts)).collect::<Result<Vec<_>>>()?;
    Ok(IdealRecord {
        ideal_id,
        ideal_roots: ideal.members().to_vec(),
        generators: ideal.generators(rs),
        k: profile.k,
        lambda: profile.lambda,
        exponents: profile.exponents,
        checks,
        millis: (!opts.reproducible).then(|| start.elapsed().as_millis() as u64),
    })
}

/// Surveys every ideal. `weyl` is required when a selected check needs it.
pub fn run_survey(rs: &RootSystem, weyl: Option<&WeylGroup>, opts: &SurveyOptions) -> Result<SurveyReport> {
    let ideals = enumerate_ideals(rs);
    log::info!("{}: {} ideals, checks {:?}", rs.kind(), ideals.len(), opts.checks);
    let records = opts
        .exec
        .map_range(ideals.len(), |i| ideal_record(rs, weyl, i, &ideals[i], opts))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = opts
        .checks
        .iter()
        .map(|&check| {
            let mut s = CheckSummary {
                check,
                scope: check.scope(rs.kind()),
                equal: 0,
                mismatch: 0,
                found: 0,
                not_found: 0,
                budget: 0,
            };
            for o in records.iter().filter_map(|r| r.outcome(check)) {
                *match o.verdict {
                    Verdict::Equal => &mut s.equal,
                    Verdict::Mismatch => &mut s.mismatch,
                    Verdict::Found => &mut s.found,
                    Verdict::NotFound => &mut s.not_found,
                    Verdict::Budget => &mut s.budget,
                } += 1;
            }
            s
        })
        .collect();
    let generated_unix = (!opts.reproducible)
        .then(|| std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    Ok(SurveyReport {
        kind: rs.kind().to_string(),
        rank: rs.rank(),
        ideal_count: records.len(),
        checks: opts.checks.clone(),
        generated_unix,
        records,
        summary,
    })
}
