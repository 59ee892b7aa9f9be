use std::fmt;
use std::thread;
use std::time::Instant;

use selfsim_core::algnum::{make_beta, AlgebraicNumber, BetaSpec, Field};
use selfsim_core::decide::{
    closed_form_m1, decide_values, graph_report, resolve_translation, verify_report_witness,
    Branch, DecideConfig, DecisionReport, Side, Verdict,
};
use selfsim_core::numeric::WitnessCheck;
use selfsim_core::oracle::{Oracle, OracleOutcome};
use selfsim_core::theta::{apply_assertion, in_b_n, vartheta, BnStatus, BnVerdict};
use selfsim_core::words::{build_translation, conjugate_values, t_level_values, WordsError};

use crate::problem::{Problem, ProblemOptions};
use crate::report::{ReportFile, Timings, WitnessFile};
use crate::{CliError, EXIT_DECIDED, EXIT_UNKNOWN};

pub const DEFAULT_DEPTH: usize = 8;

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::SelfSimilar | Verdict::NotSelfSimilar => EXIT_DECIDED,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

struct Resolved {
    field: Field,
    values: Vec<AlgebraicNumber>,
    config: DecideConfig,
}

fn resolve(problem: &Problem, flags: &ProblemOptions) -> Result<Resolved, CliError> {
    let (field, _) = make_beta(&problem.beta).map_err(selfsim_core::DecideError::from)?;
    let values = problem
        .translations
        .iter()
        .map(|t| resolve_translation(&field, t))
        .collect::<Result<Vec<_>, _>>()?;
    let config = problem.options.overridden_by(flags).decide_config();
    Ok(Resolved {
        field,
        values,
        config,
    })
}

pub struct DecideOutcome {
    pub report: DecisionReport,
    pub file: ReportFile,
}

impl DecideOutcome {
    pub fn exit_code(&self) -> i32 {
        exit_code(self.report.verdict)
    }
}

pub fn cmd_decide(problem: &Problem, flags: &ProblemOptions) -> Result<DecideOutcome, CliError> {
    let r = resolve(problem, flags)?;
    if r.values.is_empty() {
        return Err(CliError::Field {
            path: "translations".into(),
            message: "at least one translation is required".into(),
        });
    }
    let start = Instant::now();
    let report = decide_values(&r.field, &r.values, &r.config)?;
    let timings = Timings {
        decide_us: start.elapsed().as_micros() as u64,
        verify_us: None,
    };
    let file = ReportFile::from_report(&report, timings);
    Ok(DecideOutcome { report, file })
}

pub struct ThetaOutcome {
    pub n: u32,
    pub status: BnStatus,
    pub vartheta: Option<u32>,
}

impl fmt::Display for ThetaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_N (N={}): {} [{}]", self.n, self.status.verdict, self.status.provenance.as_str())?;
        if let Some(w) = &self.status.witness {
            write!(f, " relation {w}")?;
        }
        writeln!(f)?;
        match self.vartheta {
            Some(v) => writeln!(f, "vartheta: {v}"),
            None => writeln!(f, "vartheta: unresolved"),
        }
    }
}

pub fn cmd_theta(problem: &Problem, flags: &ProblemOptions) -> Result<ThetaOutcome, CliError> {
    let r = resolve(problem, flags)?;
    let status = apply_assertion(in_b_n(&r.field, r.config.search_degree), r.config.assert_in_bn)
        .map_err(selfsim_core::DecideError::from)?;
    let v = match status.verdict {
        BnVerdict::Unknown => None,
        _ => Some(vartheta(&r.field, &status).map_err(selfsim_core::DecideError::from)?),
    };
    Ok(ThetaOutcome {
        n: r.field.n(),
        status,
        vartheta: v,
    })
}

#[derive(Clone, Debug)]
pub struct SweepParams {
    pub beta: BetaSpec,
    pub tau_max: usize,
    pub m: usize,
    pub options: ProblemOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub t: Vec<AlgebraicNumber>,
    pub verdict: Verdict,
    pub branch: Option<Branch>,
    pub n0: Option<usize>,
    pub v_size: Option<usize>,
    /// `cycle=...` or `l=...`.
    pub detail: String,
    pub closed_form: Option<Verdict>,
}

fn combinations(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    rec(0, k, n, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// Every vector `0 < t_1 < … < t_m` with entries in `T_{τ_max}`, decided.
pub fn cmd_sweep(params: &SweepParams) -> Result<Vec<SweepRow>, CliError> {
    if params.m == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    let (field, _) = make_beta(&params.beta).map_err(selfsim_core::DecideError::from)?;
    let mut config = params.options.decide_config();
    config.cross_check_closed_form = false;
    let ts = t_level_values(&field, params.tau_max, config.enum_cap)?;
    let count = binomial(ts.len(), params.m);
    if count > config.enum_cap as u128 {
        return Err(WordsError::CapExceeded {
            n: params.tau_max,
            size: count,
            cap: config.enum_cap,
        }
        .into());
    }
    let bn = apply_assertion(in_b_n(&field, config.search_degree), config.assert_in_bn)
        .map_err(selfsim_core::DecideError::from)?;
    let vectors: Vec<Vec<AlgebraicNumber>> = combinations(params.m, ts.len())
        .into_iter()
        .map(|c| c.into_iter().map(|i| ts[i].clone()).collect())
        .collect();
    let threads = thread::available_parallelism().map_or(1, |n| n.get()).min(vectors.len().max(1));
    let chunk = vectors.len().div_ceil(threads).max(1);
    let results: Vec<Result<Vec<SweepRow>, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = vectors
            .chunks(chunk)
            .map(|part| {
                let (field, config, bn) = (&field, &config, &bn);
                s.spawn(move || {
                    part.iter()
                        .map(|t| sweep_row(field, t, config, bn))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker")).collect()
    });
    let mut rows = Vec::with_capacity(vectors.len());
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn sweep_row(
    field: &Field,
    t: &[AlgebraicNumber],
    config: &DecideConfig,
    bn: &BnStatus,
) -> Result<SweepRow, CliError> {
    let report = decide_values(field, t, config)?;
    let g = report.admissible_graph().or_else(|| report.direct.graph());
    let detail = match g {
        Some(g) => match (&g.cycle, g.witness_level) {
            (Some(c), _) => format!(
                "cycle={}",
                c.iter().map(|w| w.render(field.n())).collect::<Vec<_>>().join(" ")
            ),
            (None, Some(l)) => format!("l={l}"),
            _ => String::new(),
        },
        None => String::new(),
    };
    let closed_form = (t.len() == 1 && bn.verdict == BnVerdict::InBN)
        .then(|| closed_form_m1(field, bn, &t[0]))
        .transpose()?;
    Ok(SweepRow {
        t: t.to_vec(),
        verdict: report.verdict,
        branch: report.branch,
        n0: g.map(|g| g.n0),
        v_size: g.map(|g| g.vertices.len()),
        detail,
        closed_form,
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("t,verdict,branch,n0,v_size,cycle_or_level,closed_form\n");
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        let t: Vec<String> = r.t.iter().map(ToString::to_string).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t.join(";"),
            r.verdict,
            r.branch.map(Branch::as_str).unwrap_or(""),
            opt(r.n0),
            opt(r.v_size),
            r.detail,
            r.closed_form.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBranch {
    pub side: Side,
    pub graph_admissible: bool,
    pub n0: usize,
    pub bound: usize,
    pub outcome: OracleOutcome,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub branches: Vec<OracleBranch>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.branches.iter().all(|b| b.agrees)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "decide: {}", self.verdict)?;
        for b in &self.branches {
            writeln!(
                f,
                "{}: oracle {} graph {} (n0={}, bound={}) {}",
                b.side.as_str(),
                b.outcome,
                if b.graph_admissible { "acyclic" } else { "cycle" },
                b.n0,
                b.bound,
                if b.agrees { "match" } else { "MISMATCH" }
            )?;
        }
        Ok(())
    }
}

/// Brute-force check of every branch whose vector lies in `T`.
///
/// The default bound is `n₀ + L + 1` for an acyclic graph and `n₀ + |V| + 2`
/// otherwise.
pub fn cmd_oracle(
    problem: &Problem,
    flags: &ProblemOptions,
    max_level: Option<usize>,
) -> Result<OracleReport, CliError> {
    let r = resolve(problem, flags)?;
    let report = decide_values(&r.field, &r.values, &r.config)?;
    let mut branches = Vec::new();
    let Some(theta) = report.vartheta else {
        return Ok(OracleReport {
            verdict: report.verdict,
            branches,
        });
    };
    let mut values = vec![r.field.zero()];
    values.extend(r.values.iter().cloned());
    for (side, vals) in [(Side::Direct, values.clone()), (Side::Conjugate, conjugate_values(&values))] {
        let Ok(tv) = build_translation(&r.field, &vals) else { continue };
        let g = graph_report(&r.field, &tv, theta, r.config.enum_cap)?;
        let bound = max_level.unwrap_or(match g.witness_level {
            Some(l) => l,
            None => g.n0 + g.vertices.len() + 2,
        });
        let outcome = Oracle::new(&r.field, &tv, r.config.enum_cap).brute_decide(bound)?;
        let agrees = match outcome {
            OracleOutcome::AdmissibleAt(l) => {
                g.admissible() && g.witness_level.map_or(false, |w| l <= w)
            }
            OracleOutcome::NotAdmissibleUpTo(_) => {
                !g.admissible() || g.witness_level.map_or(false, |w| w > bound)
            }
        };
        branches.push(OracleBranch {
            side,
            graph_admissible: g.admissible(),
            n0: g.n0,
            bound,
            outcome,
            agrees,
        });
    }
    Ok(OracleReport {
        verdict: report.verdict,
        branches,
    })
}

pub struct WitnessOutcome {
    pub decide: DecideOutcome,
    pub witness: Option<WitnessFile>,
    pub check: Option<WitnessCheck<f64>>,
}

impl fmt::Display for WitnessOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.decide.report.verdict)?;
        let Some(w) = &self.witness else {
            if let Some(note) = &self.decide.report.witness_note {
                writeln!(f, "no witness: {note}")?;
            }
            return Ok(());
        };
        writeln!(f, "witness level {} via {} branch, {} maps", w.level, w.side, w.maps.len())?;
        for m in &w.maps {
            writeln!(
                f,
                "  x -> ({})*x + ({})  [word {} j={}{}]",
                m.ratio,
                m.offset,
                m.word,
                m.j,
                if m.reflected { " reflected" } else { "" }
            )?;
        }
        if let Some(c) = &w.check {
            writeln!(
                f,
                "verify_witness depth={} distance={:e} tol={:e} {}",
                c.depth,
                c.distance,
                c.tol,
                if c.passed { "true" } else { "false" }
            )?;
        }
        Ok(())
    }
}

pub fn cmd_witness(problem: &Problem, flags: &ProblemOptions) -> Result<WitnessOutcome, CliError> {
    let mut decide = cmd_decide(problem, flags)?;
    let options = problem.options.overridden_by(flags);
    let depth = options.depth.unwrap_or(DEFAULT_DEPTH);
    let start = Instant::now();
    let check = verify_report_witness(&decide.report, depth, options.tol)?;
    decide.file.timings.verify_us = Some(start.elapsed().as_micros() as u64);
    let witness = decide.report.witness.as_ref().map(|w| {
        let file = WitnessFile::from_witness(w, decide.report.n);
        match &check {
            Some(c) => file.with_check(depth, c),
            None => file,
        }
    });
    decide.file.witness = witness.clone();
    Ok(WitnessOutcome {
        decide,
        witness,
        check,
    })
}

pub fn cmd_render(
    problem: &Problem,
    flags: &ProblemOptions,
    with_witness: bool,
) -> Result<crate::render::RenderOutput, CliError> {
    let options = problem.options.overridden_by(flags);
    let depth = options.depth.unwrap_or(3);
    let r = resolve(problem, flags)?;
    let mut t = vec![0.0];
    t.extend(r.values.iter().map(AlgebraicNumber::to_f64));
    let witness = if with_witness {
        let d = cmd_decide(problem, flags)?;
        d.report
            .witness
            .as_ref()
            .map(selfsim_core::decide::witness_ifs)
            .transpose()?
    } else {
        None
    };
    let ub = num_traits::ToPrimitive::to_f64(&r.field.upper_bound()).unwrap_or(f64::NAN);
    crate::render::render(r.field.n(), r.field.beta().to_f64(), &t, depth, witness.as_ref(), ub)
        .map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_sorted_and_complete() {
        assert_eq!(combinations(2, 3), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(1, 0), Vec::<Vec<usize>>::new());
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(3, 0), 1);
    }
}
