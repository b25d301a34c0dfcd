//! Orchestration: elimination first, certified bounds as fallback, plus the
//! wire protocol, HTTP service and benchmark reports built on top.

pub mod bench;
pub mod server;
pub mod wire;

use std::fmt;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::construct::{
    algebraize, check_homogeneity, parse_construction, pin_coordinates, statement_polys,
    ConstructError, ConstructionProgram, GeomExpr, ParseError,
};
use crate::delin::delinearize;
use crate::eqpath::{exact_ratio, numeric_crosscheck, ratio_varies, EqError, Witness};
use crate::ineqpath::{
    bounds, Attainment, Bound, BoundsConfig, BoundsError, BoundsOrPlanError, BoundsResult, PlanError,
    SupBound,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact ratio first, bounds when there is none.
    Auto,
    Eq,
    Bounds,
}

#[derive(Clone, Debug)]
pub struct CompareConfig {
    pub timeout: Duration,
    pub tol: f64,
    pub mode: Mode,
    pub transcript: bool,
    /// Seed of the numeric cross-check.
    pub seed: u64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            timeout: Duration::from_secs(5),
            tol: 1e-6,
            mode: Mode::Auto,
            transcript: false,
            seed: 2021,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    Timeout,
    ResourceLimit,
    NoPositiveRoot,
    NotHomogeneous,
    DegreeMismatch,
    /// No constant ratio exists (eq mode only).
    NotConstant,
    /// The construction or its system is outside what the pipeline handles.
    Unsupported,
    /// No nondegenerate configuration exists.
    Infeasible,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateOut {
    /// Radical form when one exists, else the algebraic number.
    pub value: String,
    pub decimal: f64,
    /// Seen on a random numeric instance of the figure.
    pub witnessed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundOut {
    /// Exact constant when recognized, else a decimal.
    pub value: String,
    pub lo: f64,
    pub hi: f64,
    /// `attained`, `limit-conjectured` or `unknown`.
    pub attained: String,
    pub witness: Option<Vec<f64>>,
    /// `value` is an exact constant rather than a decimal.
    pub exact: bool,
}

impl BoundOut {
    fn from_bound(b: &Bound) -> BoundOut {
        let (attained, witness) = match &b.attainment {
            Attainment::Attained(w) => ("attained", Some(w.clone())),
            Attainment::LimitConjectured => ("limit-conjectured", None),
            Attainment::Unknown => ("unknown", None),
        };
        BoundOut {
            value: b.value_text(),
            lo: b.enclosure.lo,
            hi: b.enclosure.hi,
            attained: attained.to_string(),
            witness,
            exact: b.exact.is_some(),
        }
    }

    pub fn strict(&self) -> bool {
        self.attained != "attained"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Outcome {
    ExactRatio {
        candidates: Vec<CandidateOut>,
    },
    Bounds {
        inf: BoundOut,
        /// `None` when the ratio grows without bound.
        sup: Option<BoundOut>,
        boxes: usize,
    },
    Inconclusive {
        reason: InconclusiveReason,
        detail: String,
    },
}

/// Milliseconds per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub parse: f64,
    pub algebraize: f64,
    pub delinearize: f64,
    pub eliminate: f64,
    pub bounds: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.parse + self.algebraize + self.delinearize + self.eliminate + self.bounds
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareResult {
    pub lhs: String,
    pub rhs: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Plain-text answer in the service grammar (`m > 3/2`).
    pub result: String,
    pub timings: Timings,
    pub transcript: Option<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the program has no compare statement")]
    MissingStatement,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Spaced rendering of a side: `(f + g)`, `a*b + b*c`, `(a + b + c)^2`.
pub fn pretty(e: &GeomExpr) -> String {
    fn go(e: &GeomExpr, top: bool) -> String {
        let s = match e {
            GeomExpr::Leaf(n) => return n.clone(),
            GeomExpr::Const(c) => return crate::polycore::render_rational(c),
            GeomExpr::Add(a, b) => format!("{} + {}", go(a, true), go(b, false)),
            GeomExpr::Sub(a, b) => format!("{} - {}", go(a, true), go(b, false)),
            GeomExpr::Mul(a, b) => return format!("{}*{}", go(a, false), go(b, false)),
            GeomExpr::Pow(a, k) => return format!("{}^{k}", go(a, false)),
        };
        if top {
            s
        } else {
            format!("({s})")
        }
    }
    let sum = matches!(e, GeomExpr::Add(..) | GeomExpr::Sub(..));
    go(e, !sum)
}

fn coefficient(v: &str) -> String {
    if v.chars().all(|c| c.is_ascii_digit()) {
        v.to_string()
    } else {
        format!("({v})")
    }
}

impl CompareResult {
    /// The comparison as a relation between the two sides, e.g.
    /// `(f + g) > (3/2)·c`.
    pub fn render_relation(&self) -> String {
        let (l, r) = (&self.lhs, &self.rhs);
        let term = |v: &str| format!("{} · {r}", coefficient(v));
        match &self.outcome {
            Outcome::ExactRatio { candidates } => candidates
                .iter()
                .map(|c| format!("{l} = {}", term(&c.value)))
                .collect::<Vec<_>>()
                .join(" or "),
            Outcome::Bounds { inf, sup, .. } => {
                let low = |b: &BoundOut| if b.strict() { "<" } else { "<=" };
                match sup {
                    Some(s) if s.value == inf.value && s.exact && inf.exact => {
                        format!("{l} = {}", term(&inf.value))
                    }
                    Some(s) => format!("{} {} {l} {} {}", term(&inf.value), low(inf), low(s), term(&s.value)),
                    None => {
                        let op = if inf.strict() { ">" } else { ">=" };
                        format!("{l} {op} {}", term(&inf.value))
                    }
                }
            }
            Outcome::Inconclusive { reason, .. } => format!("inconclusive ({reason})"),
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self.outcome, Outcome::Inconclusive { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<CompareResult> {
        serde_json::from_str(s)
    }

    /// Multi-line human report: relation, result line and timings.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.render_relation());
        out.push('\n');
        match &self.outcome {
            Outcome::ExactRatio { candidates } if candidates.len() > 1 => {
                for c in candidates {
                    let mark = if c.witnessed { "  (witnessed)" } else { "" };
                    out.push_str(&format!("  m = {}  ~ {:.10}{mark}\n", c.value, c.decimal));
                }
            }
            Outcome::ExactRatio { candidates } => {
                for c in candidates {
                    out.push_str(&format!("  m = {}  ~ {:.10}\n", c.value, c.decimal));
                }
            }
            Outcome::Bounds { inf, sup, boxes } => {
                out.push_str(&format!("  inf in [{:.12}, {:.12}] {}\n", inf.lo, inf.hi, inf.attained));
                match sup {
                    Some(s) => out.push_str(&format!("  sup in [{:.12}, {:.12}] {}\n", s.lo, s.hi, s.attained)),
                    None => out.push_str("  sup unbounded\n"),
                }
                out.push_str(&format!("  {boxes} boxes\n"));
            }
            Outcome::Inconclusive { detail, .. } if !detail.is_empty() => {
                out.push_str(&format!("  {detail}\n"));
            }
            Outcome::Inconclusive { .. } => {}
        }
        let t = &self.timings;
        out.push_str(&format!(
            "timings (ms): parse {:.1}, algebraize {:.1}, delinearize {:.1}, eliminate {:.1}, bounds {:.1}\n",
            t.parse, t.algebraize, t.delinearize, t.eliminate, t.bounds
        ));
        if let Some(tr) = &self.transcript {
            out.push_str("delinearization:\n");
            for line in tr {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

fn inconclusive(reason: InconclusiveReason, detail: impl Into<String>) -> Outcome {
    Outcome::Inconclusive {
        reason,
        detail: detail.into(),
    }
}

fn construct_reason(e: &ConstructError) -> InconclusiveReason {
    match e {
        ConstructError::NotHomogeneous(_) => InconclusiveReason::NotHomogeneous,
        ConstructError::DegreeMismatch { .. } => InconclusiveReason::DegreeMismatch,
        _ => InconclusiveReason::Unsupported,
    }
}

fn bounds_outcome(r: &BoundsResult) -> Outcome {
    if !r.converged {
        let sup = match &r.sup {
            SupBound::Finite(b) => format!("[{:?}, {:?}]", b.enclosure.lo, b.enclosure.hi),
            SupBound::UnboundedEvidence => "unbounded".into(),
        };
        let detail = format!("inf in [{:?}, {:?}], sup {sup}", r.inf.enclosure.lo, r.inf.enclosure.hi);
        return inconclusive(InconclusiveReason::Timeout, detail);
    }
    Outcome::Bounds {
        inf: BoundOut::from_bound(&r.inf),
        sup: match &r.sup {
            SupBound::Finite(b) => Some(BoundOut::from_bound(b)),
            SupBound::UnboundedEvidence => None,
        },
        boxes: r.boxes,
    }
}

/// Plain-text answer in the service grammar.
pub fn result_text(o: &Outcome, bounds: Option<&BoundsResult>) -> String {
    match o {
        Outcome::ExactRatio { candidates } => candidates
            .iter()
            .map(|c| format!("m = {}", c.value))
            .collect::<Vec<_>>()
            .join(" or "),
        Outcome::Bounds { .. } => bounds.map(|b| b.render()).unwrap_or_default(),
        Outcome::Inconclusive {
            reason: InconclusiveReason::Timeout,
            ..
        } => "timeout".into(),
        Outcome::Inconclusive { reason, .. } => format!("inconclusive: {reason}"),
    }
}

/// Parses and compares.
pub fn compare_source(src: &str, cfg: &CompareConfig) -> Result<CompareResult, CompareError> {
    let t0 = Instant::now();
    let prog = parse_construction(src)?;
    let parse = ms(t0);
    let mut r = compare(&prog, cfg)?;
    r.timings.parse = parse;
    Ok(r)
}

/// Runs the pipeline on a parsed program.
pub fn compare(prog: &ConstructionProgram, cfg: &CompareConfig) -> Result<CompareResult, CompareError> {
    let start = Instant::now();
    let deadline = start + cfg.timeout;
    let st = prog.statement.as_ref().ok_or(CompareError::MissingStatement)?;
    let mut timings = Timings::default();
    let mut transcript = None;
    let mut bounds_res = None;
    let outcome = 'run: {
        let t = Instant::now();
        if let Err(e) = check_homogeneity(&st.lhs, &st.rhs) {
            break 'run inconclusive(construct_reason(&e), e.to_string());
        }
        let pinned = match algebraize(prog)
            .map(|a| statement_polys(&a, &st.lhs, &st.rhs))
            .and_then(|a| pin_coordinates(&a))
        {
            Ok(p) => p,
            Err(e) => break 'run inconclusive(construct_reason(&e), e.to_string()),
        };
        timings.algebraize = ms(t);

        let t = Instant::now();
        let (delin, report) = delinearize(&pinned);
        if cfg.transcript {
            transcript = Some(report.transcript.clone());
        }
        timings.delinearize = ms(t);

        if cfg.mode != Mode::Bounds {
            let t = Instant::now();
            let mut rng = StdRng::seed_from_u64(cfg.seed);
            // a ratio seen to vary numerically has no constant value
            let skip = cfg.mode == Mode::Auto && ratio_varies(prog, 8, &mut rng);
            let exact = if skip { Ok(None) } else { exact_ratio(&delin, Some(deadline)) };
            let out = match exact {
                Ok(Some(res)) => {
                    let seen = numeric_crosscheck(&res, prog, 20, &mut rng);
                    let witnessed = match &seen {
                        Ok(w) => w.iter().map(|x| *x == Witness::Witnessed).collect(),
                        Err(_) => vec![false; res.candidates.len()],
                    };
                    let mut candidates: Vec<CandidateOut> = res
                        .candidates
                        .iter()
                        .zip(&witnessed)
                        .map(|(c, w)| CandidateOut {
                            value: c.render(),
                            decimal: c.value.to_f64(),
                            witnessed: *w,
                        })
                        .collect();
                    if cfg.mode == Mode::Auto {
                        candidates.retain(|c| c.witnessed);
                    }
                    (!candidates.is_empty()).then_some(Outcome::ExactRatio { candidates })
                }
                Ok(None) if cfg.mode == Mode::Eq => Some(inconclusive(
                    InconclusiveReason::NotConstant,
                    "elimination found no polynomial in m alone",
                )),
                Ok(None) => None,
                Err(EqError::ResourceLimit(e)) if cfg.mode == Mode::Eq => {
                    let reason = if Instant::now() >= deadline {
                        InconclusiveReason::Timeout
                    } else {
                        InconclusiveReason::ResourceLimit
                    };
                    Some(inconclusive(reason, e.to_string()))
                }
                Err(e @ EqError::NoPositiveRoot(_)) if cfg.mode == Mode::Eq => {
                    Some(inconclusive(InconclusiveReason::NoPositiveRoot, e.to_string()))
                }
                Err(e) if cfg.mode == Mode::Eq => Some(inconclusive(InconclusiveReason::Unsupported, e.to_string())),
                Err(_) => None,
            };
            timings.eliminate = ms(t);
            if let Some(o) = out {
                break 'run o;
            }
        }

        let t = Instant::now();
        // the pinned system first on a short slice, then the delinearized one
        let left = deadline.saturating_duration_since(Instant::now());
        let first = BoundsConfig {
            tol: cfg.tol,
            deadline: Instant::now() + left / 4,
        };
        let mut r = bounds(&pinned, &first);
        if !matches!(&r, Ok(b) if b.converged) {
            let rest = BoundsConfig {
                tol: cfg.tol,
                deadline,
            };
            match bounds(&delin, &rest) {
                Ok(b) if b.converged || r.is_err() => r = Ok(b),
                Err(_) | Ok(_) => {}
            }
        }
        timings.bounds = ms(t);
        match r {
            Ok(r) => {
                let o = bounds_outcome(&r);
                bounds_res = Some(r);
                o
            }
            Err(BoundsOrPlanError::Bounds(BoundsError::Infeasible))
            | Err(BoundsOrPlanError::Plan(PlanError::Infeasible(_))) => {
                inconclusive(InconclusiveReason::Infeasible, "no nondegenerate configuration found")
            }
            Err(e) => inconclusive(InconclusiveReason::Unsupported, e.to_string()),
        }
    };
    let result = result_text(&outcome, bounds_res.as_ref());
    Ok(CompareResult {
        lhs: pretty(&st.lhs),
        rhs: pretty(&st.rhs),
        outcome,
        result,
        timings,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn run(c: &corpus::CorpusCase, mode: Mode) -> CompareResult {
        let cfg = CompareConfig {
            timeout: Duration::from_secs(c.timeout_s),
            mode,
            ..Default::default()
        };
        compare_source(c.source, &cfg).unwrap()
    }

    #[test]
    fn pretty_sides() {
        let p = parse_construction(corpus::MEDIANS.source).unwrap();
        let st = p.statement.unwrap();
        assert_eq!(pretty(&st.lhs), "(f + g)");
        assert_eq!(pretty(&st.rhs), "c");
        let p = parse_construction(corpus::BOTTEMA_1_1.source).unwrap();
        let st = p.statement.unwrap();
        assert_eq!(pretty(&st.lhs), "(a + b + c)^2");
        assert_eq!(pretty(&st.rhs), "(a*b + b*c + c*a)");
    }

    #[test]
    fn medians_relation() {
        let r = run(&corpus::MEDIANS, Mode::Auto);
        assert_eq!(r.render_relation(), "(f + g) > (3/2) · c");
        assert_eq!(r.result, "m > 3/2");
        assert!(r.timings.bounds > 0.0);
    }

    #[test]
    fn pentagon_modes() {
        let r = run(&corpus::PENTAGON_CONVEX, Mode::Eq);
        let Outcome::ExactRatio { candidates } = &r.outcome else { panic!("{r:?}") };
        let vals: Vec<_> = candidates.iter().map(|c| (c.value.as_str(), c.witnessed)).collect();
        assert_eq!(vals, [("(sqrt(5)-1)/2", false), ("(1+sqrt(5))/2", true)]);
        let r = run(&corpus::PENTAGON_CONVEX, Mode::Auto);
        assert_eq!(r.result, "m = (1+sqrt(5))/2");
        assert_eq!(r.timings.bounds, 0.0);
    }

    #[test]
    fn json_round_trip() {
        for c in [corpus::PYTHAGORAS, corpus::PYTHAGORAS_RELAXED] {
            let r = run(&c, Mode::Auto);
            let s = r.to_json();
            let back = CompareResult::from_json(&s).unwrap();
            assert_eq!(back.to_json(), s);
            assert_eq!(back, r);
        }
    }

    #[test]
    fn inconclusive_cases() {
        let src = "point A; point B; point C; segment a B C; segment c A B; compare a^2 vs c";
        let r = compare_source(src, &CompareConfig::default()).unwrap();
        assert!(matches!(
            r.outcome,
            Outcome::Inconclusive {
                reason: InconclusiveReason::DegreeMismatch,
                ..
            }
        ));
        let src = "point A; point B; segment c A B";
        assert!(matches!(
            compare_source(src, &CompareConfig::default()),
            Err(CompareError::MissingStatement)
        ));
    }
}
