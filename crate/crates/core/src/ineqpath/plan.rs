//! Turns a polynomial system into an explicit evaluation order: independent
//! parameters, then variables solved one at a time.

use std::collections::BTreeSet;

use crate::algnum::{isolate_real_roots, AlgebraicNumber};
use crate::polycore::{Polynomial, Rational};

use super::iv::Iv;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub var: String,
    pub domain: Domain,
}

#[derive(Clone, Debug)]
pub enum PlanStep {
    /// `var = num/den`.
    Linear {
        var: String,
        num: Polynomial,
        den: Polynomial,
        positive: bool,
    },
    /// `var = sqrt(num/den)`.
    Sqrt {
        var: String,
        num: Polynomial,
        den: Polynomial,
    },
    /// `var` is one of finitely many constants; a branch picks one.
    Root {
        var: String,
        roots: Vec<AlgebraicNumber>,
    },
}

impl PlanStep {
    pub fn var(&self) -> &str {
        match self {
            PlanStep::Linear { var, .. } | PlanStep::Sqrt { var, .. } | PlanStep::Root { var, .. } => var,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("no real solution for {0}")]
    Infeasible(String),
    #[error("could not order the system")]
    Unplannable,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub params: Vec<Param>,
    pub steps: Vec<PlanStep>,
    /// Equations left over once every variable is known.
    pub residuals: Vec<Polynomial>,
    /// Must be strictly positive.
    pub signconds: Vec<Polynomial>,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
    /// Variables whose vanishing means a degenerate figure.
    pub degenerate: Vec<String>,
    /// Polynomials whose vanishing means a degenerate figure.
    pub degenerate_polys: Vec<Polynomial>,
}

pub struct PlanInput<'a> {
    pub polys: &'a [Polynomial],
    pub posvars: &'a BTreeSet<String>,
    pub halfplane: Option<&'a str>,
    pub preferred: &'a [String],
    pub lhs: &'a Polynomial,
    pub rhs: &'a Polynomial,
    pub signconds: &'a [Polynomial],
}

#[derive(Clone, Debug)]
struct St {
    polys: Vec<Polynomial>,
    known: BTreeSet<String>,
    steps: Vec<PlanStep>,
    deferred: Vec<(String, Polynomial)>,
    params: Vec<Param>,
    residuals: Vec<Polynomial>,
}

struct Ctx<'a> {
    input: &'a PlanInput<'a>,
}

impl Ctx<'_> {
    fn positive(&self, v: &str) -> bool {
        self.input.posvars.contains(v) || self.input.halfplane == Some(v)
    }

    fn preferred(&self, v: &str) -> bool {
        self.input.preferred.iter().any(|p| p == v)
    }
}

fn unknowns(p: &Polynomial, known: &BTreeSet<String>) -> Vec<String> {
    p.vars().into_iter().filter(|v| !known.contains(v)).collect()
}

/// `p = c*x^2 + r` with `x` absent from `r`: returns `(c, r)`.
fn pure_square(p: &Polynomial, x: &str) -> Option<(Polynomial, Polynomial)> {
    let cs = p.coefficients_in(x);
    if cs.len() == 3 && cs[1].is_zero() {
        Some((cs[2].clone(), cs[0].clone()))
    } else {
        None
    }
}

impl St {
    fn substitute(&mut self, x: &str, e: &Polynomial) {
        for p in &mut self.polys {
            *p = p.substitute(x, e);
        }
        for (_, d) in &mut self.deferred {
            *d = d.substitute(x, e);
        }
        self.polys.retain(|p| !p.is_zero());
    }

    /// One solving move; `Ok(false)` when stuck.
    fn step(&mut self, ctx: &Ctx) -> Result<bool, PlanError> {
        // fully known equations become residual checks
        if let Some(i) = self.polys.iter().position(|p| unknowns(p, &self.known).is_empty()) {
            let p = self.polys.remove(i);
            if let Some(c) = p.as_constant() {
                return Err(PlanError::Infeasible(c.to_string()));
            }
            self.residuals.push(p);
            return Ok(true);
        }
        for i in 0..self.polys.len() {
            let p = &self.polys[i];
            let u = unknowns(p, &self.known);
            if u.len() != 1 {
                continue;
            }
            let x = u[0].clone();
            let deg = p.degree_in(&x);
            if deg == 1 {
                let cs = p.coefficients_in(&x);
                let step = PlanStep::Linear {
                    var: x.clone(),
                    num: -&cs[0],
                    den: cs[1].clone(),
                    positive: ctx.positive(&x),
                };
                self.polys.remove(i);
                self.steps.push(step);
                self.known.insert(x);
                return Ok(true);
            }
            if ctx.positive(&x) {
                if let Some((c, r)) = pure_square(p, &x) {
                    self.polys.remove(i);
                    self.steps.push(PlanStep::Sqrt {
                        var: x.clone(),
                        num: -&r,
                        den: c,
                    });
                    self.known.insert(x);
                    return Ok(true);
                }
            }
            if p.vars().len() == 1 {
                let mut roots = isolate_real_roots(p).map_err(|_| PlanError::Unplannable)?;
                if ctx.positive(&x) {
                    roots.retain(|r| r.sign() > 0);
                }
                if roots.is_empty() {
                    return Err(PlanError::Infeasible(x));
                }
                self.polys.remove(i);
                self.steps.push(PlanStep::Root {
                    var: x.clone(),
                    roots,
                });
                self.known.insert(x);
                return Ok(true);
            }
        }
        // cancel a common pure square between two equations
        for i in 0..self.polys.len() {
            for j in 0..self.polys.len() {
                if i == j {
                    continue;
                }
                let (pi, pj) = (&self.polys[i], &self.polys[j]);
                let ui = unknowns(pi, &self.known);
                for x in ui.iter().filter(|x| pj.contains_var(x)) {
                    let (Some((ci, _)), Some((cj, _))) = (pure_square(pi, x), pure_square(pj, x)) else {
                        continue;
                    };
                    let (Some(ci), Some(cj)) = (ci.as_constant(), cj.as_constant()) else { continue };
                    let q = &pi.scale(&cj) - &pj.scale(&ci);
                    if q.is_zero() || q.vars().len() >= pi.vars().len() {
                        continue;
                    }
                    self.polys[i] = q;
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Eliminates a variable occurring linearly with a constant coefficient.
    fn symbolic(&mut self, ctx: &Ctx) -> bool {
        for i in 0..self.polys.len() {
            let p = &self.polys[i];
            let u = unknowns(p, &self.known);
            for x in &u {
                if ctx.preferred(x) || p.degree_in(x) != 1 {
                    continue;
                }
                let cs = p.coefficients_in(x);
                let Some(a) = cs[1].as_constant() else { continue };
                let e = cs[0].scale(&-a.recip());
                let x = x.clone();
                self.polys.remove(i);
                self.substitute(&x, &e);
                self.deferred.push((x, e));
                return true;
            }
        }
        false
    }

    fn saturate(&mut self, ctx: &Ctx) -> Result<(), PlanError> {
        for _ in 0..10_000 {
            if !self.step(ctx)? {
                return Ok(());
            }
        }
        Err(PlanError::Unplannable)
    }

    fn candidates(&self, ctx: &Ctx) -> Vec<String> {
        let mut all = BTreeSet::new();
        for p in &self.polys {
            all.extend(unknowns(p, &self.known));
        }
        let mut out: Vec<String> = ctx
            .input
            .preferred
            .iter()
            .filter(|v| all.contains(*v))
            .cloned()
            .collect();
        let mut rest: Vec<String> = all.into_iter().filter(|v| !out.contains(v)).collect();
        let uses = |v: &String| self.polys.iter().filter(|p| p.contains_var(v)).count();
        rest.sort_by_key(|v| (std::cmp::Reverse(uses(v)), ctx.positive(v)));
        out.extend(rest);
        out
    }

    fn add_param(&mut self, v: &str, ctx: &Ctx) {
        self.params.push(Param {
            var: v.to_string(),
            domain: if ctx.positive(v) {
                Domain::Positive
            } else {
                Domain::Real
            },
        });
        self.known.insert(v.to_string());
    }

    fn score(&self) -> (usize, usize) {
        (self.residuals.len(), self.params.len())
    }
}

enum Move {
    Param(String),
    Symbolic,
}

fn search(st: St, ctx: &Ctx, budget: &mut usize) -> Result<Option<St>, PlanError> {
    let mut st = st;
    st.saturate(ctx)?;
    if st.polys.is_empty() {
        return Ok(Some(st));
    }
    let cands = st.candidates(ctx);
    let npref = cands.iter().filter(|v| ctx.preferred(v)).count();
    let mut moves: Vec<Move> = cands[..npref].iter().cloned().map(Move::Param).collect();
    if !ctx.input.preferred.is_empty() {
        moves.push(Move::Symbolic);
    }
    moves.extend(cands[npref..].iter().cloned().map(Move::Param));
    if ctx.input.preferred.is_empty() {
        moves.push(Move::Symbolic);
    }
    let mut best: Option<St> = None;
    for mv in moves {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        let mut next = st.clone();
        match &mv {
            Move::Param(v) => next.add_param(v, ctx),
            Move::Symbolic => {
                if !next.symbolic(ctx) {
                    continue;
                }
            }
        }
        let Ok(Some(done)) = search(next, ctx, budget) else { continue };
        if done.residuals.is_empty() {
            return Ok(Some(done));
        }
        if best.as_ref().is_none_or(|b| done.score() < b.score()) {
            best = Some(done);
        }
    }
    Ok(best)
}

pub fn plan(input: &PlanInput) -> Result<Problem, PlanError> {
    let ctx = Ctx { input };
    let st = St {
        polys: input.polys.iter().filter(|p| !p.is_zero()).cloned().collect(),
        known: BTreeSet::new(),
        steps: vec![],
        deferred: vec![],
        params: vec![],
        residuals: vec![],
    };
    let mut budget = 400;
    let mut st = search(st, &ctx, &mut budget)?.ok_or(PlanError::Unplannable)?;

    // anything the targets need that no equation fixes is free
    let deferred: BTreeSet<String> = st.deferred.iter().map(|d| d.0.clone()).collect();
    let mut loose = BTreeSet::new();
    for p in [input.lhs, input.rhs].into_iter().chain(input.signconds) {
        loose.extend(p.vars());
    }
    for (_, e) in &st.deferred {
        loose.extend(e.vars());
    }
    for v in loose {
        if !st.known.contains(&v) && !deferred.contains(&v) {
            st.add_param(&v, &ctx);
        }
    }
    for (x, e) in std::mem::take(&mut st.deferred) {
        st.steps.push(PlanStep::Linear {
            positive: ctx.positive(&x),
            var: x,
            num: e,
            den: Polynomial::one(),
        });
    }

    // drop linear steps nothing depends on
    let mut needed: BTreeSet<String> = BTreeSet::new();
    for p in [input.lhs, input.rhs]
        .into_iter()
        .chain(input.signconds)
        .chain(&st.residuals)
    {
        needed.extend(p.vars());
    }
    let mut kept = Vec::new();
    let mut degenerate_polys: Vec<Polynomial> = Vec::new();
    for s in &st.steps {
        if let PlanStep::Linear { den, .. } | PlanStep::Sqrt { den, .. } = s {
            if den.as_constant().is_none() && !degenerate_polys.contains(den) {
                degenerate_polys.push(den.clone());
            }
        }
    }
    for s in st.steps.into_iter().rev() {
        let keep = match &s {
            PlanStep::Linear { var, .. } => needed.contains(var),
            _ => true,
        };
        if keep {
            match &s {
                PlanStep::Linear { num, den, .. } | PlanStep::Sqrt { num, den, .. } => {
                    needed.extend(num.vars());
                    needed.extend(den.vars());
                }
                PlanStep::Root { .. } => {}
            }
            kept.push(s);
        }
    }
    kept.reverse();

    let mut degenerate: Vec<String> = input.posvars.iter().cloned().collect();
    if let Some(h) = input.halfplane {
        degenerate.push(h.to_string());
    }
    degenerate.retain(|v| st.params.iter().any(|p| &p.var == v) || kept.iter().any(|s| s.var() == v));

    Ok(Problem {
        params: st.params,
        steps: kept,
        residuals: st.residuals,
        signconds: input.signconds.to_vec(),
        lhs: input.lhs.clone(),
        rhs: input.rhs.clone(),
        degenerate,
        degenerate_polys,
    })
}

pub fn rational_iv(r: &Rational) -> Iv {
    use num_traits::ToPrimitive;
    let x = r.to_f64().unwrap_or(f64::NAN);
    if r.is_integer() && x.abs() < 9.0e15 {
        return Iv::point(x);
    }
    let i = Iv::around(x);
    Iv::around(i.lo).hull(&Iv::around(i.hi))
}

pub fn algebraic_iv(a: &AlgebraicNumber) -> Iv {
    let w = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 70);
    let e = a.refine(&w).enclosure();
    rational_iv(e.lo()).hull(&rational_iv(e.hi()))
}

/// Interval evaluation of `p` under `env` (missing variables are an error).
#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, parse_poly_list};

    fn run(polys: &str, pos: &[&str], half: Option<&str>, pref: &[&str], lhs: &str, rhs: &str) -> Problem {
        let polys = parse_poly_list(polys).unwrap();
        let posvars: BTreeSet<String> = pos.iter().map(|s| s.to_string()).collect();
        let preferred: Vec<String> = pref.iter().map(|s| s.to_string()).collect();
        let (lhs, rhs) = (parse_poly(lhs).unwrap(), parse_poly(rhs).unwrap());
        plan(&PlanInput {
            polys: &polys,
            posvars: &posvars,
            halfplane: half,
            preferred: &preferred,
            lhs: &lhs,
            rhs: &rhs,
            signconds: &[],
        })
        .unwrap()
    }

    #[test]
    fn median_system() {
        let p = run(
            "-v12^2+v8^2+v9^2-2*v9+1,-v13^2+v8^2+v9^2+v9+1/4,2*v14*v8-1,v12+v13-w1,1-v11",
            &["v11", "v12", "v13"],
            Some("v8"),
            &[],
            "w1",
            "v11",
        );
        let mut names: Vec<&str> = p.params.iter().map(|p| p.var.as_str()).collect();
        names.sort();
        assert_eq!(names, ["v8", "v9"]);
        assert!(p.params.iter().any(|p| p.domain == Domain::Positive));
        assert!(p.residuals.is_empty());
        assert!(p.steps.iter().all(|s| s.var() != "v14"));
    }

    #[test]
    fn right_angle_circle() {
        let p = run("v5^2-v5+v6^2,-v9^2+v5^2-2*v5+v6^2+1", &["v9"], Some("v6"), &["v5", "v6"], "v9", "1");
        assert_eq!(p.params.len(), 1);
        assert_eq!(p.params[0].var, "v5");
        assert!(p.residuals.is_empty());
    }

    #[test]
    fn equal_sides_cancel() {
        let p = run(
            "-a^2+x^2-2*x+y^2+1,-b^2+x^2+y^2,a-b",
            &["a", "b"],
            Some("y"),
            &["x", "y"],
            "a",
            "1",
        );
        let names: Vec<&str> = p.params.iter().map(|p| p.var.as_str()).collect();
        assert_eq!(names, ["y"]);
        assert!(p.residuals.is_empty());
    }

    #[test]
    fn finite_roots() {
        let p = run("4*c^2+2*c-1,s^2+c^2-1", &["s"], None, &[], "s", "1");
        assert!(p.params.is_empty());
        assert!(matches!(&p.steps[0], PlanStep::Root { roots, .. } if roots.len() == 2));
    }
}
