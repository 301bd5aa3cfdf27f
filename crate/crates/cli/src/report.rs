//! `analyze`: every applicable criterion, the oracle, and the aggregate.

use lcrec_core::criteria::{
    classify_const_with, classify_fixed, classify_prec, cone_membership, theorem, ConstantSecondOrder,
};
use lcrec_core::ell::{self, OracleReport};
use lcrec_core::qform::{
    build_qform, d2_psd_condition, d2_psd_for_all, default_tolerance, lambda_min_bound, psd_exact, threshold_n,
};
use lcrec_core::{Property, Rational, RecurrenceSpec, Scope, SequenceWindow, Status, Verdict, Witness};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::claims::{self, Erratum};
use crate::error::{CliError, CliResult};

pub const QFORM_POINTWISE: &str = "quadratic form pointwise";
pub const THRESHOLD: &str = "quadratic form threshold";
pub const D2_CLOSED_FORM: &str = "second-order closed form";
pub const R_FACTOR: &str = "r-factor";

/// Largest `N` for which the pointwise PSD gap `[d−1, N)` is checked.
const MAX_THRESHOLD_SCAN: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub depth: usize,
    pub horizon: usize,
    pub parallel: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { depth: ell::DEFAULT_DEPTH, horizon: ell::DEFAULT_HORIZON, parallel: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub level: usize,
    pub start: usize,
    pub end: usize,
    pub first_negative: Option<usize>,
    #[serde(with = "lcrec_core::rational::serde_str")]
    pub min: Rational,
    pub all_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub depth: usize,
    pub horizon: usize,
    pub levels: Vec<LevelSummary>,
    /// First negative entry at a level `≥ 1`.
    pub witness: Option<Witness>,
}

impl From<&OracleReport> for OracleSummary {
    fn from(r: &OracleReport) -> Self {
        let levels = r
            .levels
            .iter()
            .map(|l| LevelSummary {
                level: l.level,
                start: l.window.start(),
                end: l.window.end(),
                first_negative: l.first_negative,
                min: l.window.terms().iter().min().cloned().unwrap_or_else(Rational::zero),
                all_zero: l.window.terms().iter().all(Zero::is_zero),
            })
            .collect();
        Self { depth: r.depth, horizon: r.horizon, levels, witness: r.witness() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overall {
    pub status: Status,
    pub property: Option<Property>,
    pub criterion: Option<String>,
    pub witness: Option<Witness>,
    pub log_concave: Status,
    pub infinitely_log_concave: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub spec: RecurrenceSpec,
    pub criteria: Vec<Verdict>,
    pub oracle: OracleSummary,
    pub overall: Overall,
    pub errata: Vec<Erratum>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn qform_pointwise(spec: &RecurrenceSpec, horizon: usize) -> CliResult<Verdict> {
    let d = spec.order();
    let pair = build_qform(spec)?;
    let (from, to) = (d - 1, horizon - 1);
    let scope = Scope::Window { start: from, end: to };
    for n in from..=to {
        let cert = psd_exact(&pair.at(n));
        if let Some((idx, minor)) = cert.violated {
            let reason = format!("Q_{n} is not PSD: principal minor {idx:?} = {minor}");
            return Ok(Verdict::inconclusive(QFORM_POINTWISE, Property::LogConcave, reason, Vec::new(), None)
                .with_scope(scope));
        }
    }
    let facts = vec![format!("all principal minors of Q_n nonnegative for {from} <= n <= {to}")];
    Ok(Verdict::proved(QFORM_POINTWISE, Property::LogConcave, scope, theorem::QFORM_PSD, facts))
}

fn threshold(spec: &RecurrenceSpec, window: &SequenceWindow) -> CliResult<Verdict> {
    let d = spec.order();
    let pair = build_qform(spec)?;
    let tol = default_tolerance();
    let l0 = lambda_min_bound(&pair.q0, &tol)?;
    let l1 = lambda_min_bound(&pair.q1, &tol)?;
    let mut facts = vec![
        format!("lambda_min(Q0) in [{}, {}]", l0.lower, l0.upper),
        format!("lambda_min(Q1) in [{}, {}]", l1.lower, l1.upper),
    ];
    let Some(n) = threshold_n(&pair, &tol)? else {
        let reason = "lambda_min(Q1) is not certified positive";
        return Ok(Verdict::inconclusive(THRESHOLD, Property::LogConcave, reason, facts, None));
    };
    facts.push(format!("Q_n PSD for all n >= N = {n}"));
    if n > MAX_THRESHOLD_SCAN {
        let reason = format!("N = {n} is too large to check the gap pointwise");
        return Ok(Verdict::inconclusive(THRESHOLD, Property::LogConcave, reason, facts, None));
    }
    if let Some(k) = (d as u64 - 1..n).find(|&k| !psd_exact(&pair.at(k as usize)).psd) {
        let reason = format!("Q_{k} is not PSD below N");
        return Ok(Verdict::inconclusive(THRESHOLD, Property::LogConcave, reason, facts, None));
    }
    facts.push(format!("Q_n PSD pointwise for {} <= n < {n}", d - 1));
    // b_1 .. b_{d-2} sit before the first full state vector
    let head = ell::apply_l(window)?;
    if let Some((k, v)) = head.iter().take_while(|(k, _)| *k + 1 < d).find(|(_, v)| v.is_negative()) {
        let w = Witness { level: 1, index: k, value: v.clone() };
        return Ok(Verdict::refuted(THRESHOLD, Property::LogConcave, w, facts));
    }
    if d > 2 {
        facts.push(format!("b_1 .. b_{} nonnegative", d - 2));
    }
    Ok(Verdict::proved(THRESHOLD, Property::LogConcave, Scope::AllIndices, theorem::QFORM_THRESHOLD, facts))
}

/// `p n + q` without zero terms or `+ -`.
fn linear(p: &Rational, q: &Rational) -> String {
    let slope = match p {
        p if p.is_zero() => String::new(),
        p if p.is_one() => "n".to_string(),
        p if (-p).is_one() => "-n".to_string(),
        p => format!("{p} n"),
    };
    match (slope.is_empty(), q) {
        (true, q) => q.to_string(),
        (false, q) if q.is_zero() => slope,
        (false, q) if q.is_negative() => format!("{slope} - {}", -q),
        (false, q) => format!("{slope} + {q}"),
    }
}

fn d2_closed_form(spec: &RecurrenceSpec, horizon: usize) -> CliResult<Verdict> {
    let (p0, p1) = (&spec.p()[0], &spec.p()[1]);
    let (q0, q1) = (&spec.q()[0], &spec.q()[1]);
    let condition = format!("({})^2 <= -4 ({})", linear(p0, q0), linear(p1, q1));
    if d2_psd_for_all(spec, 1)? {
        let facts = vec![
            format!("{condition} holds at n = 1"),
            "p0 = 0 and -4 p1 >= 0, so the condition persists for all n >= 1".to_string(),
        ];
        return Ok(Verdict::proved(D2_CLOSED_FORM, Property::LogConcave, Scope::AllIndices, theorem::QFORM_PSD, facts));
    }
    let fails = (1..horizon).find(|&n| !d2_psd_condition(spec, n).unwrap_or(false));
    let reason = match fails {
        Some(n) => format!("{condition} fails at n = {n}"),
        None if !p0.is_zero() => format!("{condition} fails for large n since p0 != 0"),
        None => format!("{condition} fails for large n since p1 > 0"),
    };
    Ok(Verdict::inconclusive(D2_CLOSED_FORM, Property::LogConcave, reason, Vec::new(), None))
}

fn r_factor(window: &SequenceWindow) -> CliResult<Verdict> {
    let r = ell::default_r_factor();
    debug_assert!(ell::at_least_r0(&r));
    let scope = Scope::Window { start: window.start() + 1, end: window.end() - 1 };
    let reason = match ell::r_factor_check(window, &r)? {
        None => format!(
            "a_n^2 >= {r} a_(n+1) a_(n-1) on the window with {r} >= (3 + sqrt 5)/2; no tail argument"
        ),
        Some(n) => format!("a_n^2 >= {r} a_(n+1) a_(n-1) fails at n = {n}; this refutes nothing"),
    };
    Ok(Verdict::inconclusive(R_FACTOR, Property::InfinitelyLogConcave, reason, Vec::new(), None).with_scope(scope))
}

type Job<'a> = Box<dyn Fn() -> CliResult<Verdict> + Send + Sync + 'a>;

fn jobs<'a>(spec: &'a RecurrenceSpec, window: &'a SequenceWindow, opts: AnalyzeOptions) -> Vec<Job<'a>> {
    let horizon = opts.horizon;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    if spec.order() >= 2 {
        jobs.push(Box::new(move || qform_pointwise(spec, horizon)));
        jobs.push(Box::new(move || threshold(spec, window)));
    }
    if spec.order() == 2 {
        jobs.push(Box::new(move || d2_closed_form(spec, horizon)));
    }
    if let Some(cs) = ConstantSecondOrder::from_spec(spec) {
        let depth = opts.depth;
        let applicable = cs.discriminant().is_positive() && cs.beta.is_negative();
        let cone = cs.clone();
        jobs.push(Box::new(move || Ok(classify_const_with(&cs, depth, horizon))));
        if applicable {
            jobs.push(Box::new(move || Ok(cone_membership(&cone))));
        }
    }
    jobs.push(Box::new(move || Ok(classify_fixed(window, &Rational::zero())?)));
    if spec.order() == 2 {
        jobs.push(Box::new(move || Ok(classify_prec(spec, horizon)?)));
    }
    jobs.push(Box::new(move || r_factor(window)));
    jobs
}

fn run(jobs: Vec<Job<'_>>, parallel: bool) -> CliResult<Vec<Verdict>> {
    if !parallel {
        return jobs.iter().map(|j| j()).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|j| s.spawn(j)).collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Internal("criterion thread panicked".into()))?)
            .collect()
    })
}

fn is_lc_claim(p: Property) -> bool {
    matches!(p, Property::LogConcave | Property::InfinitelyLogConcave)
}

/// Refuted if anything exhibits a negative iterate, Proved if a criterion
/// certifies all indices, otherwise Inconclusive.
pub fn aggregate(criteria: &[Verdict], oracle: &OracleReport) -> Overall {
    let lc_witness = oracle.level_one_witness().or_else(|| {
        criteria
            .iter()
            .filter(|v| v.status == Status::Refuted && v.property == Property::LogConcave)
            .find_map(|v| v.witness().cloned())
    });
    let any_witness = lc_witness.clone().or_else(|| oracle.witness()).or_else(|| {
        criteria.iter().filter(|v| v.status == Status::Refuted && is_lc_claim(v.property)).find_map(|v| v.witness().cloned())
    });
    let proved = |p: Property| {
        criteria
            .iter()
            .find(|v| v.status == Status::Proved && v.property == p && v.covers_all_indices())
            .map(|v| v.criterion.clone())
    };
    let inf_proof = proved(Property::InfinitelyLogConcave);
    let lc_proof = inf_proof.clone().or_else(|| proved(Property::LogConcave));

    let log_concave = match (&lc_witness, &lc_proof) {
        (Some(_), _) => Status::Refuted,
        (None, Some(_)) => Status::Proved,
        (None, None) => Status::Inconclusive,
    };
    let infinitely_log_concave = match (&any_witness, &inf_proof) {
        (Some(_), _) => Status::Refuted,
        (None, Some(_)) => Status::Proved,
        (None, None) => Status::Inconclusive,
    };

    if let Some(w) = any_witness {
        let property = if w.level == 1 { Property::LogConcave } else { Property::InfinitelyLogConcave };
        return Overall {
            status: Status::Refuted,
            property: Some(property),
            criterion: None,
            witness: Some(w),
            log_concave,
            infinitely_log_concave,
        };
    }
    let (status, property, criterion) = match (inf_proof, lc_proof) {
        (Some(c), _) => (Status::Proved, Some(Property::InfinitelyLogConcave), Some(c)),
        (None, Some(c)) => (Status::Proved, Some(Property::LogConcave), Some(c)),
        (None, None) => (Status::Inconclusive, None, None),
    };
    Overall { status, property, criterion, witness: None, log_concave, infinitely_log_concave }
}

pub fn analyze(spec: &RecurrenceSpec, opts: AnalyzeOptions) -> CliResult<AnalysisReport> {
    analyze_with_errata(spec, opts, Vec::new())
}

pub fn analyze_text(text: &str, opts: AnalyzeOptions) -> CliResult<AnalysisReport> {
    let spec = RecurrenceSpec::parse(text)?;
    let errata = claims::errata(&spec, text)?;
    analyze_with_errata(&spec, opts, errata)
}

fn analyze_with_errata(spec: &RecurrenceSpec, opts: AnalyzeOptions, errata: Vec<Erratum>) -> CliResult<AnalysisReport> {
    if opts.depth == 0 {
        return Err(CliError::Input("depth must be at least 1".into()));
    }
    let need = (spec.order() - 1 + 2 * opts.depth).max(3);
    if opts.horizon < need {
        return Err(CliError::Input(format!(
            "horizon {} too small for depth {}: need at least {need}",
            opts.horizon, opts.depth
        )));
    }
    let oracle = ell::oracle(spec, opts.depth, opts.horizon)?;
    let window = oracle.level(0).expect("level 0 is always present").clone();
    let criteria = run(jobs(spec, &window, opts), opts.parallel)?;
    let overall = aggregate(&criteria, &oracle);
    let oracle = OracleSummary::from(&oracle);
    if overall.status == Status::Proved && oracle.witness.is_some() {
        return Err(CliError::Internal("proved verdict alongside a negative oracle witness".into()));
    }
    Ok(AnalysisReport { spec: spec.clone(), criteria, oracle, overall, errata })
}
