//! Bounds path: enclosures of the infimum and supremum of lhs/rhs over all
//! nondegenerate configurations, by interval branch-and-bound, followed by
//! recognition of exact constants.

mod exactify;
mod iv;
mod plan;
mod search;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::algnum::{to_radical, AlgebraicNumber};
use crate::construct::AlgebraicTranslation;
use crate::polycore::{render_rational, Polynomial};

pub use exactify::exactify;
pub use iv::{Ad, Iv};
pub use plan::{plan, Domain, Param, PlanError, PlanInput, PlanStep, Problem};

use search::{optimize, Evaluator, Side};

#[derive(Clone, Debug, PartialEq)]
pub enum Attainment {
    /// Reached at an interior configuration (parameter values).
    Attained(Vec<f64>),
    LimitConjectured,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Bound {
    pub enclosure: Iv,
    pub attainment: Attainment,
    pub exact: Option<AlgebraicNumber>,
}

impl Bound {
    pub fn strict(&self) -> bool {
        !matches!(self.attainment, Attainment::Attained(_))
    }

    /// Exact form if recognized, else a decimal.
    pub fn value_text(&self) -> String {
        match &self.exact {
            Some(a) => render_exact(a),
            None => format!("{:.10}", self.enclosure.mid()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SupBound {
    Finite(Bound),
    UnboundedEvidence,
}

#[derive(Clone, Debug)]
pub struct BoundsResult {
    pub inf: Bound,
    pub sup: SupBound,
    /// Both searches closed their gap before the deadline.
    pub converged: bool,
    pub boxes: usize,
}

pub fn render_exact(a: &AlgebraicNumber) -> String {
    if let Some(r) = a.as_rational() {
        return render_rational(&r);
    }
    match to_radical(a) {
        Some(r) => r.to_ascii(),
        None => a.approx_decimal(12),
    }
}

impl BoundsResult {
    /// Plain-text form: `m > 3/2`, `m >= 3`, `3 <= m < 4`, `m = 1`, ...
    pub fn render(&self) -> String {
        let lo_op = |b: &Bound| if b.strict() { "<" } else { "<=" };
        match &self.sup {
            SupBound::UnboundedEvidence => {
                if self.inf.attainment == Attainment::Unknown {
                    "m unbounded above".to_string()
                } else {
                    let op = if self.inf.strict() { ">" } else { ">=" };
                    format!("m {op} {}", self.inf.value_text())
                }
            }
            SupBound::Finite(sup) => {
                let (a, b) = (self.inf.value_text(), sup.value_text());
                // equal exact ends: the ratio is constant
                if a == b && self.inf.exact.is_some() && sup.exact.is_some() {
                    format!("m = {a}")
                } else {
                    format!("{a} {} m {} {b}", lo_op(&self.inf), lo_op(sup))
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundsConfig {
    pub tol: f64,
    pub deadline: Instant,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            tol: 1e-6,
            deadline: Instant::now() + Duration::from_secs(5),
        }
    }
}

/// Parametrizes the system of a translation (pinned, possibly delinearized).
pub fn compactify(t: &AlgebraicTranslation) -> Result<Problem, PlanError> {
    let sv = t.statement.as_ref().ok_or(PlanError::Unplannable)?;
    let polys: Vec<Polynomial> = t
        .polys
        .iter()
        .filter(|p| !p.contains_var(&sv.m) && !p.contains_var(&sv.n))
        .cloned()
        .collect();
    let preferred: Vec<String> = t
        .free_coords
        .iter()
        .flat_map(|(x, y)| [x.clone(), y.clone()])
        .filter(|v| polys.iter().any(|p| p.contains_var(v)))
        .collect();
    let signconds: Vec<Polynomial> = t.signconds.iter().map(|s| s.poly.clone()).collect();
    plan(&PlanInput {
        polys: &polys,
        posvars: &t.posvars,
        halfplane: t.halfplane_var.as_deref(),
        preferred: &preferred,
        lhs: &sv.lhs,
        rhs: &sv.rhs,
        signconds: &signconds,
    })
}

/// Parametrizes a bare system where the ratio is `lhs/rhs`.
pub fn compactify_system(
    polys: &[Polynomial],
    posvars: &BTreeSet<String>,
    lhs: &Polynomial,
    rhs: &Polynomial,
) -> Result<Problem, PlanError> {
    plan(&PlanInput {
        polys,
        posvars,
        halfplane: None,
        preferred: &[],
        lhs,
        rhs,
        signconds: &[],
    })
}

/// Shrinks a compactified box by discarding infeasible edge slices until
/// the gain drops below 1%. `None` when the whole box is infeasible.
pub fn hull_contract(prob: &Problem, sbox: &[Iv], choice: &[usize]) -> Option<Vec<Iv>> {
    let ev = Evaluator::new(prob);
    ev.eval(sbox, choice)?;
    let mut b = sbox.to_vec();
    loop {
        let before: f64 = b.iter().map(|s| s.width()).sum();
        for k in 0..b.len() {
            let slices = 8;
            let w = b[k].width() / slices as f64;
            if w <= 0.0 {
                continue;
            }
            let piece = |i: usize| Iv::new(b[k].lo + w * i as f64, if i + 1 == slices { b[k].hi } else { b[k].lo + w * (i + 1) as f64 });
            let feasible = |i: usize| {
                let mut t = b.clone();
                t[k] = piece(i);
                ev.eval(&t, choice).is_some()
            };
            let first = (0..slices).find(|&i| feasible(i))?;
            let last = (0..slices).rev().find(|&i| feasible(i))?;
            b[k] = Iv::new(piece(first).lo, piece(last).hi);
        }
        let after: f64 = b.iter().map(|s| s.width()).sum();
        if after >= before * 0.99 {
            return Some(b);
        }
    }
}

fn attainment(side: &Side, doms: &[Domain]) -> Attainment {
    match &side.witness {
        _ if !side.converged => Attainment::Unknown,
        None => Attainment::Unknown,
        Some(w) if side.tiny_low || w.near_boundary(doms) => Attainment::LimitConjectured,
        Some(w) => Attainment::Attained(w.x.clone()),
    }
}

fn bound(enc: Iv, attainment: Attainment) -> Bound {
    let exact = exactify(enc.lo, enc.hi);
    Bound {
        enclosure: enc,
        attainment,
        exact,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("no configuration satisfies the hypotheses")]
    Infeasible,
}

/// Enclosures of inf and sup of the ratio.
pub fn branch_and_bound(prob: &Problem, cfg: &BoundsConfig) -> Result<BoundsResult, BoundsError> {
    let ev = Evaluator::new(prob);
    let branches = ev.branches();
    let doms: Vec<Domain> = prob.params.iter().map(|p| p.domain).collect();
    let mut infs: Vec<Side> = Vec::new();
    let mut sups: Vec<Side> = Vec::new();
    if prob.params.is_empty() {
        for choice in &branches {
            let Some(out) = ev.eval(&[], choice) else { continue };
            if !out.certain {
                continue;
            }
            let v = out.ratio.v;
            let w = search::Witness {
                x: vec![],
                s: vec![],
                margin: out.margin,
            };
            let side = |lo: f64, hi: f64| Side {
                lo,
                hi,
                witness: Some(w.clone()),
                converged: true,
                unbounded: false,
                tiny_low: false,
                boxes: 0,
            };
            infs.push(side(v.lo, v.hi));
            sups.push(side(-v.hi, -v.lo));
        }
    } else {
        // one task per (branch, side), spread over worker threads; a first
        // round with short slices, then the unfinished ones share the rest
        let tasks: Vec<(usize, f64)> = (0..branches.len())
            .flat_map(|i| [(i, 1.0), (i, -1.0)])
            .collect();
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(tasks.len());
        let run_round = |ids: &[usize], share: u32| -> Vec<(usize, Option<Side>)> {
            let next = AtomicUsize::new(0);
            let out: Mutex<Vec<(usize, Option<Side>)>> = Mutex::new(Vec::new());
            std::thread::scope(|sc| {
                for _ in 0..workers.min(ids.len()) {
                    sc.spawn(|| loop {
                        let j = next.fetch_add(1, AtomicOrdering::SeqCst);
                        let Some(&k) = ids.get(j) else { break };
                        let (i, sign) = tasks[k];
                        let rounds = (ids.len() - j).div_ceil(workers) as u32;
                        let left = cfg.deadline.saturating_duration_since(Instant::now());
                        let d = Instant::now() + left / (rounds * share).max(1);
                        let r = optimize(&ev, &branches[i], sign, cfg.tol, d);
                        out.lock().unwrap().push((k, r));
                    });
                }
            });
            out.into_inner().unwrap()
        };
        let all: Vec<usize> = (0..tasks.len()).collect();
        let mut results = run_round(&all, 2);
        let retry: Vec<usize> = results
            .iter()
            .filter(|(_, r)| r.as_ref().is_some_and(|s| !s.converged && !s.unbounded))
            .map(|(k, _)| *k)
            .collect();
        if !retry.is_empty() && Instant::now() < cfg.deadline {
            let again = run_round(&retry, 1);
            results.retain(|(k, _)| !retry.contains(k));
            results.extend(again);
        }
        let results = Mutex::new(results);
        let mut results = results.into_inner().unwrap();
        results.sort_by_key(|r| r.0);
        for (k, r) in results {
            if let Some(s) = r {
                if tasks[k].1 > 0.0 {
                    infs.push(s);
                } else {
                    sups.push(s);
                }
            }
        }
    }
    let pick = |sides: &[Side]| -> Option<Side> {
        let best = sides.iter().min_by(|a, b| a.hi.total_cmp(&b.hi))?;
        let mut out = best.clone();
        out.lo = sides.iter().map(|s| s.lo).fold(f64::INFINITY, f64::min);
        out.converged = sides.iter().all(|s| s.converged);
        out.unbounded = sides.iter().any(|s| s.unbounded);
        out.boxes = sides.iter().map(|s| s.boxes).sum();
        Some(out)
    };
    let inf = pick(&infs).ok_or(BoundsError::Infeasible)?;
    let sup = pick(&sups).ok_or(BoundsError::Infeasible)?;

    let inf_bound = bound(Iv::new(inf.lo, inf.hi), attainment(&inf, &doms));
    let sup_bound = if sup.unbounded {
        SupBound::UnboundedEvidence
    } else {
        SupBound::Finite(bound(Iv::new(-sup.hi, -sup.lo), attainment(&sup, &doms)))
    };
    Ok(BoundsResult {
        inf: inf_bound,
        sup: sup_bound,
        converged: inf.converged && (sup.converged || sup.unbounded),
        boxes: inf.boxes + sup.boxes,
    })
}

/// `compactify` then `branch_and_bound`.
pub fn bounds(t: &AlgebraicTranslation, cfg: &BoundsConfig) -> Result<BoundsResult, BoundsOrPlanError> {
    let prob = compactify(t)?;
    Ok(branch_and_bound(&prob, cfg)?)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoundsOrPlanError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};

    pub(crate) fn pinned(src: &str) -> AlgebraicTranslation {
        let p = parse_construction(src).unwrap();
        let st = p.statement.clone().unwrap();
        pin_coordinates(&statement_polys(&algebraize(&p).unwrap(), &st.lhs, &st.rhs)).unwrap()
    }

    fn run(src: &str) -> BoundsResult {
        let t = pinned(src);
        let cfg = BoundsConfig {
            tol: 1e-6,
            deadline: Instant::now() + Duration::from_secs(10),
        };
        let t0 = Instant::now();
        let r = bounds(&t, &cfg).unwrap();
        eprintln!("{src}\n  -> {} ({} boxes, {:?}) {:?} {:?}", r.render(), r.boxes, t0.elapsed(), r.inf.enclosure, r.inf.attainment);
        r
    }

    const TRI: &str = "point A; point B; point C; segment a B C; segment b A C; segment c A B;";

    #[test]
    fn bottema_1_1() {
        let r = run(&format!("{TRI} compare (a+b+c)^2 vs a*b+b*c+c*a"));
        assert!(r.converged);
        assert!(r.inf.enclosure.contains(3.0));
        assert!(r.inf.enclosure.width() <= 1e-6);
        assert!(matches!(r.inf.attainment, Attainment::Attained(_)));
        let SupBound::Finite(sup) = &r.sup else { panic!() };
        assert!(sup.enclosure.contains(4.0));
        assert_eq!(sup.attainment, Attainment::LimitConjectured);
        assert_eq!(r.render(), "3 <= m < 4");
    }

    #[test]
    fn medians() {
        let r = run("point A; point B; point C; midpoint D B C; midpoint E A C; \
                     segment c A B; segment g B E; segment f A D; compare f+g vs c");
        assert_eq!(r.render(), "m > 3/2");
    }

    #[test]
    fn pythagoras_relaxed() {
        let r = run(&format!("{TRI} compare a^2+b^2 vs c^2"));
        assert_eq!(r.render(), "m > 1/2");
    }

    #[test]
    fn bottema_5_3() {
        let r = run("point A; point B; point C; rightangle A C B; circumcenter O A B C; \
                     segment a B C; segment b A C; segment c A B; segment R O A; compare a+b+c vs R");
        assert_eq!(r.render(), "4 < m <= 2+2*sqrt(2)");
    }

    #[test]
    fn euler() {
        let r = run("point A; point B; point C; segment a B C; segment b A C; equal a b; \
                     circumcenter O A B C; incenter I A B C; segment R O A; line l A B; \
                     perpfoot F I l; segment r I F; compare R vs r");
        assert_eq!(r.render(), "m >= 2");
    }

    #[test]
    fn contract_keeps_solutions() {
        let t = pinned(&format!("{TRI} compare (a+b+c)^2 vs a*b+b*c+c*a"));
        let prob = compactify(&t).unwrap();
        let ev = Evaluator::new(&prob);
        let b = hull_contract(&prob, &ev.root_box(), &[]).unwrap();
        // equilateral apex (1/2, sqrt(3)/2) in compactified coordinates
        let s_of = |x: f64| if x == 0.0 { 0.0 } else { (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x) };
        let want = [s_of(0.5), s_of(3f64.sqrt() / 2.0)];
        for (p, iv) in prob.params.iter().zip(&b) {
            let v = if p.var == "v5" { want[0] } else { want[1] };
            assert!(iv.contains(v));
        }
    }

    fn corpus_bounds(c: &crate::corpus::CorpusCase) -> BoundsResult {
        let t = pinned(c.source);
        let cfg = BoundsConfig {
            tol: 1e-6,
            deadline: Instant::now() + Duration::from_secs(c.timeout_s),
        };
        bounds(&t, &cfg).unwrap()
    }

    #[test]
    fn enclosures_hold_sampled_ratios() {
        use crate::construct::numeric::instantiate;
        use crate::corpus::*;
        use rand::{rngs::StdRng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for c in [BOTTEMA_1_1, MEDIANS, PYTHAGORAS_RELAXED, BOTTEMA_5_3, EULER_ISOSCELES] {
            let r = corpus_bounds(&c);
            let lo = r.inf.enclosure.lo - 1e-6;
            let hi = match &r.sup {
                SupBound::Finite(b) => b.enclosure.hi + 1e-6,
                SupBound::UnboundedEvidence => f64::INFINITY,
            };
            let prog = parse_construction(c.source).unwrap();
            for _ in 0..2000 {
                let fig = instantiate(&prog, &mut rng, false).unwrap();
                let Some(q) = fig.ratio() else { continue };
                let q = q.to_f64();
                assert!(lo <= q && q <= hi, "{}: {q} outside [{lo}, {hi}]", c.name);
            }
        }
    }

    #[test]
    fn agrees_with_constant_ratios() {
        use crate::corpus::*;
        let cases = [
            (PYTHAGORAS, 1.0),
            (PENTAGON_CONVEX, (1.0 + 5f64.sqrt()) / 2.0),
            (KOCHANSKI, (40.0 / 3.0 - 2.0 * 3f64.sqrt()).sqrt()),
            (MIDLINE, 0.5),
        ];
        for (c, mu) in cases {
            let t = crate::delin::delinearize(&pinned(c.source)).0;
            let cfg = BoundsConfig {
                tol: 1e-6,
                deadline: Instant::now() + Duration::from_secs(c.timeout_s),
            };
            let r = bounds(&t, &cfg).unwrap();
            assert!(r.converged, "{}", c.name);
            if r.inf.exact.is_some() {
                assert_eq!(r.render(), format!("m = {}", r.inf.value_text()), "{}", c.name);
            }
            let SupBound::Finite(sup) = &r.sup else { panic!("{}", c.name) };
            let near = |iv: Iv| iv.lo - 1e-9 <= mu && mu <= iv.hi + 1e-9;
            assert!(near(r.inf.enclosure), "{}: inf {:?}", c.name, r.inf.enclosure);
            assert!(near(sup.enclosure), "{}: sup {:?}", c.name, sup.enclosure);
        }
    }
}
