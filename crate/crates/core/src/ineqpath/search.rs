//! Interval evaluation of a planned problem and branch-and-bound over the
//! compactified parameter box.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use super::iv::{Ad, Iv};
use super::plan::{algebraic_iv, rational_iv, Domain, Param, PlanStep, Problem};
use crate::polycore::Polynomial;

/// Ratio enclosure on a box.
pub(crate) struct EvalOut {
    pub ratio: Ad,
    /// Every square root argument and denominator is bounded away from zero.
    pub smooth: bool,
    /// The box (a point) is a genuine configuration.
    pub certain: bool,
    /// Smallest magnitude among degeneracy indicators.
    pub margin: f64,
    sides: Option<Sides>,
}

/// Box and midpoint evaluations of both sides of the comparison.
struct Sides {
    lhs: Ad,
    rhs: Ad,
    mid: Option<(Ad, Ad)>,
}

impl EvalOut {
    /// Enclosure of `lhs - t*rhs`, or `None` when `rhs` may vanish.
    pub fn gap(&self, t: f64, sbox: &[Iv]) -> Option<Iv> {
        let s = self.sides.as_ref()?;
        if s.rhs.v.lo <= 0.0 {
            return None;
        }
        let t = Iv::point(t);
        let mut d = s.lhs.sub(&s.rhs.scale(t));
        if let Some((l, r)) = &s.mid {
            let dm = l.sub(&r.scale(t));
            let mid: Vec<f64> = sbox.iter().map(|x| x.mid()).collect();
            centered(&mut d, &dm, sbox, &mid);
        }
        Some(d.v)
    }
}

pub(crate) struct Evaluator<'a> {
    pub prob: &'a Problem,
    roots: Vec<Vec<Iv>>,
    nslots: usize,
    steps: Vec<CStep>,
    residuals: Vec<CPoly>,
    signconds: Vec<CPoly>,
    lhs: CPoly,
    rhs: CPoly,
    degenerate: Vec<usize>,
    degenerate_polys: Vec<CPoly>,
}

/// Polynomial with f64 interval coefficients over slot indices.
struct CPoly {
    terms: Vec<(Iv, Vec<(usize, u32)>)>,
}

enum CStep {
    Linear {
        slot: usize,
        num: CPoly,
        den: CPoly,
        positive: bool,
    },
    Sqrt {
        slot: usize,
        num: CPoly,
        den: CPoly,
    },
    Root {
        slot: usize,
    },
}

struct Slots(BTreeMap<String, usize>);

impl Slots {
    fn get(&mut self, v: &str) -> usize {
        let n = self.0.len();
        *self.0.entry(v.to_string()).or_insert(n)
    }

    fn poly(&mut self, p: &Polynomial) -> CPoly {
        CPoly {
            terms: p
                .terms()
                .map(|(m, c)| {
                    let f = m.factors().iter().map(|(v, e)| (self.get(v), *e)).collect();
                    (rational_iv(c), f)
                })
                .collect(),
        }
    }
}

fn eval_c(p: &CPoly, env: &[Option<Ad>], n: usize) -> Option<Ad> {
    let mut acc = Ad::constant(Iv::point(0.0), n);
    for (c, f) in &p.terms {
        let mut t = Ad::constant(*c, n);
        for (v, e) in f {
            t = t.mul(&env[*v].as_ref()?.powi(*e));
        }
        acc = acc.add(&t);
    }
    Some(acc)
}

/// Interval image of `s` under `s/(1-s^2)`.
fn phi(s: f64) -> Iv {
    if s >= 1.0 {
        return Iv::new(f64::MAX, f64::INFINITY);
    }
    if s <= -1.0 {
        return Iv::new(f64::NEG_INFINITY, f64::MIN);
    }
    let s = Iv::point(s);
    s / (Iv::point(1.0) - s.sqr())
}

pub(crate) fn phi_mid(s: f64) -> f64 {
    s / (1.0 - s * s)
}

fn param_ad(s: Iv, i: usize, n: usize) -> Ad {
    let v = Iv::new(phi(s.lo).lo, phi(s.hi).hi);
    let s2 = s.sqr();
    let d = (Iv::point(1.0) + s2) / (Iv::point(1.0) - s2).sqr();
    let mut g = vec![Iv::point(0.0); n];
    g[i] = d;
    Ad { v, g }
}

const RESIDUAL_TOL: f64 = 1e-9;

impl<'a> Evaluator<'a> {
    pub fn new(prob: &'a Problem) -> Self {
        let roots = prob
            .steps
            .iter()
            .filter_map(|s| match s {
                PlanStep::Root { roots, .. } => Some(roots.iter().map(algebraic_iv).collect()),
                _ => None,
            })
            .collect();
        let mut sl = Slots(BTreeMap::new());
        for p in &prob.params {
            sl.get(&p.var);
        }
        let steps = prob
            .steps
            .iter()
            .map(|s| match s {
                PlanStep::Linear {
                    var,
                    num,
                    den,
                    positive,
                } => CStep::Linear {
                    num: sl.poly(num),
                    den: sl.poly(den),
                    slot: sl.get(var),
                    positive: *positive,
                },
                PlanStep::Sqrt { var, num, den } => CStep::Sqrt {
                    num: sl.poly(num),
                    den: sl.poly(den),
                    slot: sl.get(var),
                },
                PlanStep::Root { var, .. } => CStep::Root { slot: sl.get(var) },
            })
            .collect();
        let residuals = prob.residuals.iter().map(|p| sl.poly(p)).collect();
        let signconds = prob.signconds.iter().map(|p| sl.poly(p)).collect();
        let lhs = sl.poly(&prob.lhs);
        let rhs = sl.poly(&prob.rhs);
        let degenerate = prob.degenerate.iter().map(|v| sl.get(v)).collect();
        let degenerate_polys = prob.degenerate_polys.iter().map(|p| sl.poly(p)).collect();
        Evaluator {
            prob,
            roots,
            nslots: sl.0.len(),
            steps,
            residuals,
            signconds,
            lhs,
            rhs,
            degenerate,
            degenerate_polys,
        }
    }

    /// Every combination of root choices.
    pub fn branches(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for r in &self.roots {
            let mut next = Vec::new();
            for b in &out {
                for i in 0..r.len() {
                    let mut c = b.clone();
                    c.push(i);
                    next.push(c);
                }
            }
            out = next;
            if out.len() > 256 {
                out.truncate(256);
            }
        }
        out
    }

    pub fn root_box(&self) -> Vec<Iv> {
        self.prob
            .params
            .iter()
            .map(|p| match p.domain {
                Domain::Real => Iv::new(-1.0, 1.0),
                Domain::Positive => Iv::new(0.0, 1.0),
            })
            .collect()
    }

    /// `None` when the box certainly holds no configuration.
    pub fn eval(&self, sbox: &[Iv], choice: &[usize]) -> Option<EvalOut> {
        let n = sbox.len();
        let mid: Vec<f64> = sbox.iter().map(|s| s.mid()).collect();
        let point = sbox.iter().all(|s| s.lo == s.hi);
        let mut env: Vec<Option<Ad>> = vec![None; self.nslots];
        let mut envm: Option<Vec<Option<Ad>>> = (!point).then(|| vec![None; self.nslots]);
        for (i, s) in sbox.iter().enumerate() {
            env[i] = Some(param_ad(*s, i, n));
            if let Some(m) = envm.as_mut() {
                m[i] = Some(param_ad(Iv::point(mid[i]), i, n));
            }
        }
        // evaluates on the box, tightened by the centered form around the midpoint
        let poly = |p: &CPoly,
                    env: &[Option<Ad>],
                    envm: &Option<Vec<Option<Ad>>>|
         -> Option<(Ad, Option<Ad>)> {
            let mut a = eval_c(p, env, n)?;
            let am = envm.as_ref().and_then(|m| eval_c(p, m, n));
            if let Some(am) = &am {
                centered(&mut a, am, sbox, &mid);
            }
            Some((a, am))
        };
        let mut smooth = true;
        let mut certain = true;
        let mut root_i = 0;
        for step in &self.steps {
            match step {
                CStep::Linear {
                    slot,
                    num,
                    den,
                    positive,
                } => {
                    let (a, am) = poly(num, &env, &envm)?;
                    let (b, bm) = poly(den, &env, &envm)?;
                    if b.v.contains_zero() {
                        smooth = false;
                        if b.v.lo == 0.0 && b.v.hi == 0.0 {
                            return None;
                        }
                        certain = false;
                    }
                    let mut x = a.div(&b);
                    let xm = match (am, bm) {
                        (Some(am), Some(bm)) if !bm.v.contains_zero() => Some(am.div(&bm)),
                        _ => None,
                    };
                    if let Some(xm) = &xm {
                        centered(&mut x, xm, sbox, &mid);
                    }
                    if *positive {
                        if x.v.hi <= 0.0 {
                            return None;
                        }
                        if x.v.lo <= 0.0 {
                            certain = false;
                        }
                    }
                    set(&mut env, &mut envm, *slot, x, xm);
                }
                CStep::Sqrt { slot, num, den } => {
                    let (a, am) = poly(num, &env, &envm)?;
                    let (b, bm) = poly(den, &env, &envm)?;
                    let unit = b.v.lo == 1.0 && b.v.hi == 1.0;
                    let mut q = if unit { a } else { a.div(&b) };
                    let qm = match (am, bm) {
                        (Some(am), _) if unit => Some(am),
                        (Some(am), Some(bm)) if !bm.v.contains_zero() => Some(am.div(&bm)),
                        _ => None,
                    };
                    if let Some(qm) = &qm {
                        centered(&mut q, qm, sbox, &mid);
                    }
                    if q.v.hi < 0.0 {
                        return None;
                    }
                    if q.v.lo <= 0.0 {
                        smooth = false;
                        if q.v.lo < 0.0 {
                            certain = false;
                        }
                    }
                    let r = q.sqrt()?;
                    let rm = qm.and_then(|qm| qm.sqrt());
                    set(&mut env, &mut envm, *slot, r, rm);
                }
                CStep::Root { slot } => {
                    let v = self.roots[root_i][choice[root_i]];
                    root_i += 1;
                    let c = Ad::constant(v, n);
                    set(&mut env, &mut envm, *slot, c.clone(), Some(c));
                }
            }
        }
        for r in &self.residuals {
            let v = poly(r, &env, &envm)?.0.v;
            if !v.contains_zero() && (v.lo > RESIDUAL_TOL || v.hi < -RESIDUAL_TOL) {
                return None;
            }
            if v.lo < -RESIDUAL_TOL || v.hi > RESIDUAL_TOL {
                certain = false;
            }
        }
        for s in &self.signconds {
            let v = poly(s, &env, &envm)?.0.v;
            if v.hi <= 0.0 {
                return None;
            }
            if v.lo <= 0.0 {
                certain = false;
            }
        }
        let (lhs, lm) = poly(&self.lhs, &env, &envm)?;
        let (rhs, rm) = poly(&self.rhs, &env, &envm)?;
        if rhs.v.contains_zero() {
            certain = false;
            smooth = false;
        }
        let mut ratio = lhs.div(&rhs);
        if let (Some(lm), Some(rm)) = (&lm, &rm) {
            if !rm.v.contains_zero() {
                centered(&mut ratio, &lm.div(rm), sbox, &mid);
            }
        }
        let sides = Some(Sides {
            lhs,
            rhs,
            mid: lm.zip(rm),
        });
        let mut margin = f64::INFINITY;
        for v in &self.degenerate {
            if let Some(x) = &env[*v] {
                margin = margin.min(x.v.mid().abs());
            }
        }
        for p in &self.degenerate_polys {
            if let Some(x) = eval_c(p, &env, n) {
                margin = margin.min(x.v.mid().abs());
            }
        }
        if !ratio.v.is_finite() {
            certain = false;
        }
        Some(EvalOut {
            ratio,
            smooth,
            certain,
            margin,
            sides,
        })
    }
}

fn set(env: &mut [Option<Ad>], envm: &mut Option<Vec<Option<Ad>>>, slot: usize, x: Ad, xm: Option<Ad>) {
    env[slot] = Some(x);
    match xm {
        Some(xm) => {
            if let Some(m) = envm.as_mut() {
                m[slot] = Some(xm);
            }
        }
        None => *envm = None,
    }
}

/// Mean value tightening: `f(X) in f(c) + f'(X)(X - c)`.
fn centered(a: &mut Ad, am: &Ad, sbox: &[Iv], mid: &[f64]) {
    if !am.v.is_finite() || a.g.iter().any(|g| !g.is_finite()) {
        return;
    }
    let mut mv = am.v;
    for (i, s) in sbox.iter().enumerate() {
        mv = mv + a.g[i] * Iv::new(s.lo - mid[i], s.hi - mid[i]);
    }
    if let Some(v) = a.v.intersect(&mv) {
        a.v = v;
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Witness {
    /// Parameter values in the original coordinates.
    pub x: Vec<f64>,
    /// Compactified coordinates.
    pub s: Vec<f64>,
    pub margin: f64,
}

impl Witness {
    pub fn near_boundary(&self, doms: &[Domain]) -> bool {
        self.margin < BOUNDARY_MARGIN
            || self
                .s
                .iter()
                .zip(doms)
                .any(|(s, d)| 1.0 - s.abs() < 1e-3 || (*d == Domain::Positive && *s < 1e-3))
    }
}

pub(crate) const BOUNDARY_MARGIN: f64 = 1e-2;
const SLAB: f64 = 2e-2;

/// Dimension with the largest gradient smear (widest when the gradient is
/// unknown) among those that can still be halved meaningfully.
fn split_dim(sbox: &[Iv], smear: &[f64]) -> Option<usize> {
    let use_smear = smear.iter().all(|x| x.is_finite()) && smear.iter().any(|x| *x > 0.0);
    sbox.iter()
        .enumerate()
        .filter(|(_, s)| {
            let m = s.mid();
            m > s.lo && m < s.hi && s.width() > 4e-16 * s.lo.abs().max(s.hi.abs())
        })
        .map(|(i, s)| (i, if use_smear { smear[i] } else { s.width() }))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

const ZERO_SLAB: f64 = 1e-6;

/// A thin box touching infinity, or zero of a positive coordinate: the
/// coordinate index and two sample positions (near, deep) for it.
fn limit_slab(sbox: &[Iv], params: &[Param]) -> Option<(usize, [f64; 2])> {
    // 1 - 2^-26 keeps 1 - s^2 exact
    let near = 2f64.powi(-26);
    sbox.iter().zip(params).enumerate().find_map(|(i, (s, p))| {
        if s.hi >= 1.0 && s.width() < SLAB {
            Some((i, [1.0 - near, 1.0 - 1e-12]))
        } else if s.lo <= -1.0 && s.width() < SLAB {
            Some((i, [near - 1.0, 1e-12 - 1.0]))
        } else if p.domain == Domain::Positive && s.lo == 0.0 && s.width() < ZERO_SLAB {
            Some((i, [near * near, 1e-30]))
        } else {
            None
        }
    })
}
const HUGE: f64 = 1e9;

#[derive(Clone, Debug)]
pub(crate) struct Side {
    /// Enclosure of the optimum of the minimized objective.
    pub lo: f64,
    pub hi: f64,
    pub witness: Option<Witness>,
    pub converged: bool,
    /// Objective went below -1e9.
    pub unbounded: bool,
    /// Unsplittable boxes near a singularity set the lower end.
    pub tiny_low: bool,
    pub boxes: usize,
}

struct Node {
    lb: f64,
    sbox: Vec<Iv>,
    smear: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.lb.total_cmp(&o.lb) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        // min-heap on lb
        o.lb.total_cmp(&self.lb)
    }
}

fn scaled(iv: Iv, sign: f64) -> Iv {
    if sign > 0.0 {
        iv
    } else {
        -iv
    }
}

/// Minimizes `sign * ratio` over the parameter box.
pub(crate) fn optimize(
    ev: &Evaluator,
    choice: &[usize],
    sign: f64,
    tol: f64,
    deadline: Instant,
) -> Option<Side> {
    // stop at half the tolerance so the reported enclosure fits inside it
    let tol = 0.5 * tol;
    let mut incumbent = f64::INFINITY;
    let mut witness: Option<Witness> = None;
    let mut heap = BinaryHeap::new();
    let mut tiny_min = f64::INFINITY;
    let mut boxes = 0usize;

    let probe = |sbox: &[Iv], incumbent: &mut f64, witness: &mut Option<Witness>| -> Option<(f64, Vec<f64>)> {
        let out = ev.eval(sbox, choice)?;
        let naive = scaled(out.ratio.v, sign);
        let mid: Vec<f64> = sbox.iter().map(|s| s.mid()).collect();
        let pbox: Vec<Iv> = mid.iter().map(|m| Iv::point(*m)).collect();
        let at_mid = ev.eval(&pbox, choice);
        let mut lb = naive.lo;
        if let Some(pm) = &at_mid {
            let fc = scaled(pm.ratio.v, sign);
            if pm.certain && fc.hi < *incumbent {
                *incumbent = fc.hi;
                *witness = Some(Witness {
                    x: ev.prob.params.iter().zip(&mid).map(|(_, s)| phi_mid(*s)).collect(),
                    s: mid.clone(),
                    margin: pm.margin,
                });
            }
            if out.smooth && fc.is_finite() {
                let mut mv = fc;
                for (i, s) in sbox.iter().enumerate() {
                    let g = scaled(out.ratio.g[i], sign);
                    mv = mv + g * Iv::new(s.lo - mid[i], s.hi - mid[i]);
                }
                if mv.lo.is_finite() {
                    lb = lb.max(mv.lo);
                }
            }
        }
        if lb.is_nan() {
            lb = f64::NEG_INFINITY;
        }
        if lb < *incumbent - tol && incumbent.is_finite() {
            // ratio >= t (or <= t) on the whole box, checked without dividing
            let t = sign * (*incumbent - tol);
            if let Some(d) = out.gap(t, sbox) {
                if (sign > 0.0 && d.lo >= 0.0) || (sign < 0.0 && d.hi <= 0.0) {
                    lb = *incumbent - tol;
                }
            }
        }
        let smear = sbox
            .iter()
            .zip(&out.ratio.g)
            .map(|(s, g)| g.lo.abs().max(g.hi.abs()) * s.width())
            .collect();
        Some((lb, smear))
    };

    let root = ev.root_box();
    let (lb, smear) = probe(&root, &mut incumbent, &mut witness)?;
    heap.push(Node { lb, sbox: root, smear });
    let mut converged = false;
    let mut unbounded = false;
    let mut final_lb = f64::NEG_INFINITY;
    while let Some(node) = heap.pop() {
        if node.lb >= incumbent - tol {
            converged = true;
            final_lb = node.lb;
            break;
        }
        if incumbent < -HUGE {
            unbounded = true;
            final_lb = f64::NEG_INFINITY;
            break;
        }
        if Instant::now() >= deadline {
            final_lb = node.lb;
            heap.push(node);
            break;
        }
        if let Some((k, at)) = limit_slab(&node.sbox, &ev.prob.params) {
            // thin slab at a boundary: sample the limit instead of splitting;
            // the deeper probe only detects growth
            for (x, deep) in [(at[0], false), (at[1], true)] {
                let mut pt: Vec<f64> = node.sbox.iter().map(|s| s.mid()).collect();
                pt[k] = x;
                let pbox: Vec<Iv> = pt.iter().map(|x| Iv::point(*x)).collect();
                if let Some(out) = ev.eval(&pbox, choice) {
                    let v = scaled(out.ratio.v, sign);
                    let a = v.mid().abs();
                    let ok = v.width() <= 1e-6 * a.max(1.0)
                        || (deep && a > 1e6 && v.width() <= 1e-3 * a);
                    if v.is_finite() && ok {
                        tiny_min = tiny_min.min(v.lo);
                        if v.hi < incumbent {
                            incumbent = v.hi;
                            witness = Some(Witness {
                                x: pt.iter().map(|s| phi_mid(*s)).collect(),
                                s: pt.clone(),
                                margin: out.margin,
                            });
                        }
                    }
                }
            }
            continue;
        }
        let Some(k) = split_dim(&node.sbox, &node.smear) else {
            // too small to split: trust the value at its center
            let pbox: Vec<Iv> = node.sbox.iter().map(|s| Iv::point(s.mid())).collect();
            if let Some(out) = ev.eval(&pbox, choice) {
                if out.certain {
                    tiny_min = tiny_min.min(scaled(out.ratio.v, sign).lo);
                }
            }
            continue;
        };
        let m = node.sbox[k].mid();
        for half in [Iv::new(node.sbox[k].lo, m), Iv::new(m, node.sbox[k].hi)] {
            let mut b = node.sbox.clone();
            b[k] = half;
            boxes += 1;
            if let Some((lb, smear)) = probe(&b, &mut incumbent, &mut witness) {
                if lb < incumbent - tol {
                    heap.push(Node { lb, sbox: b, smear });
                }
            }
        }
        if heap.is_empty() {
            converged = true;
            final_lb = incumbent - tol;
        }
    }
    if witness.is_none() && tiny_min == f64::INFINITY && heap.is_empty() && converged {
        return None;
    }
    let mut lo = final_lb.min(incumbent - tol);
    if let Some(top) = heap.peek() {
        lo = lo.min(top.lb);
    }
    let tiny_low = tiny_min < lo;
    if tiny_low {
        lo = tiny_min;
    }
    let hi = incumbent;
    Some(Side {
        lo: lo.min(hi),
        hi,
        witness,
        converged,
        unbounded,
        tiny_low,
        boxes,
    })
}
