//! JSON proof certificate. Every real number is stored as the shortest decimal
//! string that parses back to the same f64, so the verifier sees exactly the
//! endpoints the prover compared.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{lower_transfer, AiryStep, ProofConfig, Verdict};
use crate::airy_lower::mu_bar_bound;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ritz::SweepResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertConfig {
    pub n_basis: usize,
    pub n_s: usize,
    pub t0: [String; 2],
    pub quad_target: String,
    pub kappa_box: [String; 2],
    pub threshold_mu: String,
    pub apex_function: bool,
    pub refine_above: String,
    pub max_refine_depth: u32,
    pub positivity_depth: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivitySummary {
    pub pieces: usize,
    pub min_inf: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertSubinterval {
    pub s_lo: String,
    pub s_hi: String,
    pub upper: String,
    pub posdef: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub started: u64,
    pub finished: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub config: CertConfig,
    #[serde(rename = "U")]
    pub u: Option<String>,
    #[serde(rename = "L")]
    pub l: Option<String>,
    pub kappa3_zero: Option<[String; 2]>,
    pub positivity: Option<PositivitySummary>,
    pub mu_bar3_lower: Option<String>,
    pub per_subinterval: Vec<CertSubinterval>,
    pub verdict: Verdict,
    pub error: Option<StageError>,
    pub provenance: Provenance,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn pair(x: Interval) -> [String; 2] {
    [num(x.lo()), num(x.hi())]
}

fn parse(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Certificate(format!("{what}: not a number: {s:?}")))
}

fn parse_pair(p: &[String; 2], what: &str) -> Result<Interval> {
    Interval::new(parse(&p[0], what)?, parse(&p[1], what)?).map_err(|_| Error::Certificate(format!("{what}: bad interval")))
}

fn field<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Certificate(format!("missing {what}")))
}

pub(super) fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl ProofCertificate {
    pub(super) fn skeleton(cfg: &ProofConfig, started: u64) -> Self {
        ProofCertificate {
            config: CertConfig {
                n_basis: cfg.n_basis,
                n_s: cfg.n_s,
                t0: pair(cfg.t0),
                quad_target: num(cfg.quad_target),
                kappa_box: pair(cfg.kappa_box),
                threshold_mu: num(cfg.threshold_mu),
                apex_function: cfg.apex_function,
                refine_above: num(cfg.refine_above),
                max_refine_depth: cfg.max_refine_depth,
                positivity_depth: cfg.positivity_depth,
            },
            u: None,
            l: None,
            kappa3_zero: None,
            positivity: None,
            mu_bar3_lower: None,
            per_subinterval: Vec::new(),
            verdict: Verdict::Error,
            error: None,
            provenance: Provenance { version: env!("CARGO_PKG_VERSION").into(), started, finished: started },
        }
    }

    pub(super) fn fail(mut self, stage: &str, e: Error) -> Self {
        self.verdict = Verdict::Error;
        self.error = Some(StageError { stage: stage.into(), message: e.to_string() });
        self.provenance.finished = now();
        self
    }

    pub(super) fn set_upper(&mut self, sweep: &SweepResult) {
        self.u = Some(num(sweep.u));
        self.per_subinterval = sweep
            .per_subinterval
            .iter()
            .map(|r| CertSubinterval {
                s_lo: num(r.s_interval.lo()),
                s_hi: num(r.s_interval.hi()),
                upper: num(r.upper),
                posdef: r.posdef_certified,
            })
            .collect();
    }

    pub(super) fn set_airy(&mut self, a: &AiryStep) {
        self.kappa3_zero = Some(pair(a.kappa3_zero));
        self.positivity = Some(PositivitySummary { pieces: a.positivity.s_cover.len(), min_inf: num(a.positivity.min_inf) });
        self.mu_bar3_lower = Some(num(a.mu_bar3_lower));
    }

    pub(super) fn finish(mut self, l: f64, proven: bool) -> Self {
        self.l = Some(num(l));
        self.verdict = if proven { Verdict::Proven } else { Verdict::NotProven };
        self.provenance.finished = now();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate is serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Copy with the timestamps zeroed, for run-to-run comparison.
    pub fn without_timestamps(&self) -> Self {
        let mut c = self.clone();
        c.provenance.started = 0;
        c.provenance.finished = 0;
        c
    }

    pub fn upper(&self) -> Option<f64> {
        self.u.as_deref().and_then(|s| s.parse().ok())
    }

    pub fn lower(&self) -> Option<f64> {
        self.l.as_deref().and_then(|s| s.parse().ok())
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::CheckFailed(msg()))
    }
}

/// Re-checks every inequality recorded in a certificate from its stored
/// endpoints. Only the closed-form scalar maps (μ̄ bound, transfer) are
/// re-evaluated; no sweep is repeated.
pub fn verify_certificate(c: &ProofCertificate) -> Result<()> {
    if c.verdict == Verdict::Error {
        return check(c.error.is_some(), || "error verdict without a stage".into());
    }
    let u = parse(field(&c.u, "U")?, "U")?;
    let l = parse(field(&c.l, "L")?, "L")?;
    let t0 = parse_pair(&c.config.t0, "t0")?;
    let kbox = parse_pair(&c.config.kappa_box, "kappa_box")?;
    let threshold = parse(&c.config.threshold_mu, "threshold_mu")?;

    // the s-cover is [0,1] without gaps and every bound is at most U
    check(!c.per_subinterval.is_empty(), || "empty sweep".into())?;
    let mut reach = 0.0;
    let mut max = f64::NEG_INFINITY;
    for p in &c.per_subinterval {
        let (lo, hi, up) = (parse(&p.s_lo, "s_lo")?, parse(&p.s_hi, "s_hi")?, parse(&p.upper, "upper")?);
        check(lo <= reach && lo < hi, || format!("gap in the s-cover before {lo}"))?;
        check(p.posdef, || format!("mass matrix not certified on [{lo}, {hi}]"))?;
        reach = reach.max(hi);
        max = max.max(up);
    }
    check(reach >= 1.0, || format!("s-cover ends at {reach}"))?;
    check(max == u, || format!("U = {u} differs from the largest subinterval bound {max}"))?;

    let k3 = parse_pair(field(&c.kappa3_zero, "kappa3_zero")?, "kappa3_zero")?;
    check(k3.lo() > kbox.hi(), || "kappa_3(0) does not lie above the box".into())?;
    let pos = field(&c.positivity, "positivity")?;
    check(pos.pieces > 0 && parse(&pos.min_inf, "min_inf")? > 0.0, || "positivity not certified".into())?;
    let mb = parse(field(&c.mu_bar3_lower, "mu_bar3_lower")?, "mu_bar3_lower")?;
    check(mb <= mu_bar_bound(kbox.hi())?.lo(), || "mu_bar_3 bound exceeds (2pi^2)^(2/3) kappa".into())?;
    check(mb >= threshold, || "mu_bar_3 bound below the threshold".into())?;
    check(l <= lower_transfer(Interval::point(threshold), t0)?.lo(), || "L exceeds the transferred threshold".into())?;

    let proven = u < l;
    check(proven == (c.verdict == Verdict::Proven), || format!("verdict {:?} inconsistent with U = {u}, L = {l}", c.verdict))
}
