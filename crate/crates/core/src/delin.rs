//! Delinearization: removes variables defined by linear equations and fixes
//! positive variables whose univariate equation has a single positive
//! rational root.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::algnum::isolate_real_roots;
use crate::construct::AlgebraicTranslation;
use crate::polycore::{render_rational, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DelinStep {
    /// `var` fixed to `value`; `witness` (`value-var`) stays in the set.
    PositiveRoot {
        var: String,
        value: Rational,
        witness: String,
    },
    /// `removed` solved for `var` and substituted everywhere.
    LinearSubst {
        var: String,
        replacement: Polynomial,
        removed: Polynomial,
    },
    /// A variable that disappeared without being solved for.
    Dropped(String),
    /// An equation that became identically zero.
    Redundant(Polynomial),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DelinReport {
    pub input_eqs: usize,
    pub input_vars: usize,
    pub output_eqs: usize,
    pub output_vars: usize,
    pub steps: Vec<DelinStep>,
    pub transcript: Vec<String>,
}

impl DelinReport {
    pub fn render(&self) -> String {
        let mut s = self.transcript.join("\n");
        s.push('\n');
        s
    }
}

fn var_count<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for p in polys {
        out.extend(p.vars());
    }
    out
}

fn render_set(items: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(","))
}

/// `x := -rest/a`, expanded if the coefficients stay integral, otherwise as
/// `1/a*(-rest)`.
fn render_replacement(a: &Rational, rest: &Polynomial) -> String {
    let repl = rest.scale(&-a.recip());
    if repl.terms().all(|(_, c)| c.is_integer()) {
        repl.to_string()
    } else {
        format!("{}*({})", render_rational(&a.recip()), -rest)
    }
}

struct Work {
    polys: Vec<Polynomial>,
    /// Polynomials kept outside the set that still receive substitutions.
    extra: Vec<Polynomial>,
    witnesses: Vec<(Polynomial, String)>,
    posvars: BTreeSet<String>,
    halfplane: Option<String>,
    protected: BTreeSet<String>,
    steps: Vec<DelinStep>,
    log: Vec<String>,
    subst: BTreeMap<String, Polynomial>,
}

impl Work {
    fn new_set_line(&self) -> String {
        format!("New set: {}", render_set(self.polys.iter().map(|p| p.to_string())))
    }

    fn apply(&mut self, var: &str, repl: &Polynomial) {
        let mut kept = Vec::new();
        for p in std::mem::take(&mut self.polys) {
            let q = p.substitute(var, repl);
            if q.is_zero() {
                continue;
            }
            kept.push(q);
        }
        self.polys = kept;
        for p in &mut self.extra {
            *p = p.substitute(var, repl);
        }
        for r in self.subst.values_mut() {
            *r = r.substitute(var, repl);
        }
        self.subst.insert(var.to_string(), repl.clone());
    }

    /// Drops zero polynomials after a substitution of `var`, recording them
    /// (the solved equation itself excluded).
    fn substitute_and_track(&mut self, idx: usize, var: &str, repl: &Polynomial) {
        let solved = self.polys.remove(idx);
        let before: Vec<Polynomial> = self.polys.clone();
        self.apply(var, repl);
        if self.polys.len() < before.len() {
            for p in before {
                if p.substitute(var, repl).is_zero() {
                    self.steps.push(DelinStep::Redundant(p));
                }
            }
        }
        let _ = solved;
    }

    fn resolve_once(&mut self) -> bool {
        for i in 0..self.polys.len() {
            let p = &self.polys[i];
            let vars = p.vars();
            if vars.len() != 1 {
                continue;
            }
            let var = vars.into_iter().next().unwrap();
            if !self.posvars.contains(&var) {
                continue;
            }
            let Ok(roots) = isolate_real_roots(p) else { continue };
            let pos: Vec<_> = roots.iter().filter(|r| r.sign() > 0).collect();
            if pos.len() != 1 {
                continue;
            }
            let Some(value) = pos[0].as_rational() else { continue };
            let p = p.clone();
            self.log.push(format!("Considering positive roots of {p}=0 in variable {var}"));
            self.log.push(render_set(roots.iter().map(|r| format!("{var}={r}"))));
            self.log.push(format!("Positive root is {}", render_rational(&value)));
            self.substitute_and_track(i, &var, &Polynomial::constant(value.clone()));
            self.log.push(self.new_set_line());
            let witness = format!("{}-{var}", render_rational(&value));
            self.log.push(format!("Keeping {witness}"));
            self.witnesses.push((
                &Polynomial::constant(value.clone()) - &Polynomial::var(&var),
                witness.clone(),
            ));
            self.steps.push(DelinStep::PositiveRoot { var, value, witness });
            return true;
        }
        false
    }

    fn linear_once(&mut self) -> bool {
        for i in 0..self.polys.len() {
            let p = &self.polys[i];
            let pick = p.vars().into_iter().find_map(|v| {
                if self.protected.contains(&v) {
                    return None;
                }
                let (a, rest) = p.linear_in(&v)?;
                let a = a.as_constant()?;
                Some((v, a, rest))
            });
            let Some((var, a, rest)) = pick else { continue };
            let p = p.clone();
            let repl = rest.scale(&-a.recip());
            self.log.push(format!(
                "Removing {p}, substituting {var} by {}",
                render_replacement(&a, &rest)
            ));
            if repl.num_terms() == 1 {
                let (m, c) = repl.terms().next().unwrap();
                if c.is_positive() && m.degree() == 1 {
                    let y = m.factors()[0].0.clone();
                    if self.halfplane.as_deref() == Some(var.as_str()) {
                        self.halfplane = Some(y.clone());
                    }
                    if self.posvars.contains(&var) {
                        self.posvars.insert(y);
                    }
                }
            }
            self.substitute_and_track(i, &var, &repl);
            self.posvars.remove(&var);
            self.log.push(self.new_set_line());
            self.steps.push(DelinStep::LinearSubst {
                var,
                replacement: repl,
                removed: p,
            });
            return true;
        }
        false
    }
}

fn work(polys: &[Polynomial], posvars: &BTreeSet<String>, protected: &BTreeSet<String>) -> Work {
    Work {
        polys: polys.to_vec(),
        extra: vec![],
        witnesses: vec![],
        posvars: posvars.clone(),
        halfplane: None,
        protected: protected.clone(),
        steps: vec![],
        log: vec![],
        subst: BTreeMap::new(),
    }
}

/// Fixes every positive variable that a univariate equation pins to a single
/// positive rational root. Witnesses `r-var` are appended at the end.
pub fn resolve_signed_roots(
    polys: &[Polynomial],
    posvars: &BTreeSet<String>,
) -> (Vec<Polynomial>, Vec<DelinStep>) {
    let mut w = work(polys, posvars, &BTreeSet::new());
    while w.resolve_once() {}
    let mut out = w.polys;
    out.extend(w.witnesses.into_iter().map(|x| x.0));
    (out, w.steps)
}

/// Repeatedly solves the first equation (in listing order) that is linear
/// with a constant coefficient in some unprotected variable.
pub fn substitute_linear(
    polys: &[Polynomial],
    protected: &BTreeSet<String>,
) -> (Vec<Polynomial>, Vec<DelinStep>) {
    let mut w = work(polys, &BTreeSet::new(), protected);
    while w.linear_once() {}
    (w.polys, w.steps)
}

/// Alternates root resolution and linear substitution to a fixed point.
pub fn delinearize(t: &AlgebraicTranslation) -> (AlgebraicTranslation, DelinReport) {
    // Witnesses from an earlier run are kept aside untouched.
    let is_witness = |p: &Polynomial| {
        t.resolved.iter().any(|(v, r)| {
            *p == &Polynomial::constant(r.clone()) - &Polynomial::var(v)
        })
    };
    let mut w = work(&[], &t.posvars, &t.protected());
    w.halfplane = t.halfplane_var.clone();
    let mut old_witnesses = Vec::new();
    for (p, s) in t.polys.iter().zip(&t.listing) {
        if is_witness(p) {
            old_witnesses.push((p.clone(), s.clone()));
        } else {
            w.polys.push(p.clone());
        }
    }
    let input_vars = var_count(&t.polys);
    let input_eqs = t.polys.len();
    w.log.push(format!("Input: {input_eqs} eqs in {} vars", input_vars.len()));

    // extra: nonvanishing, ndg, statement sides, then sign conditions
    let mut extra = Vec::new();
    extra.push(t.nonvanishing.as_ref().map(|x| x.0.clone()).unwrap_or_else(Polynomial::zero));
    extra.push(t.ndg.as_ref().map(|x| x.0.clone()).unwrap_or_else(Polynomial::zero));
    let (sl, sr) = match &t.statement {
        Some(st) => (st.lhs.clone(), st.rhs.clone()),
        None => (Polynomial::zero(), Polynomial::zero()),
    };
    extra.push(sl);
    extra.push(sr);
    extra.extend(t.signconds.iter().map(|s| s.poly.clone()));
    w.extra = extra;

    loop {
        let mut changed = false;
        while w.resolve_once() {
            changed = true;
        }
        while w.linear_once() {
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let mut out = t.clone();
    out.polys = w.polys.clone();
    out.listing = w.polys.iter().map(|p| p.to_string()).collect();
    for (p, s) in old_witnesses.iter().chain(&w.witnesses) {
        out.polys.push(p.clone());
        out.listing.push(s.clone());
    }
    w.log.push(format!("Set after delinearization: {}", render_set(out.listing.iter().cloned())));
    let output_vars = var_count(&out.polys);
    w.log.push(format!(
        "Delinearization output: {} eqs in {} vars",
        out.polys.len(),
        output_vars.len()
    ));

    for step in &w.steps {
        if let DelinStep::PositiveRoot { var, value, .. } = step {
            out.resolved.insert(var.clone(), value.clone());
        }
    }
    let substituted: BTreeSet<String> = w
        .steps
        .iter()
        .filter_map(|s| match s {
            DelinStep::LinearSubst { var, .. } => Some(var.clone()),
            _ => None,
        })
        .collect();
    let dropped: Vec<String> = input_vars
        .iter()
        .filter(|v| !output_vars.contains(*v) && !substituted.contains(*v))
        .cloned()
        .collect();
    w.steps.extend(dropped.into_iter().map(DelinStep::Dropped));

    let mut ex = w.extra.into_iter();
    if let Some(nv) = &mut out.nonvanishing {
        nv.0 = ex.next().unwrap();
    } else {
        ex.next();
    }
    let ndg = ex.next().unwrap();
    out.ndg = match &t.ndg {
        Some((_, v)) if ndg.contains_var(v) => Some((ndg, v.clone())),
        _ => None,
    };
    let (sl, sr) = (ex.next().unwrap(), ex.next().unwrap());
    if let Some(st) = &mut out.statement {
        st.lhs = sl;
        st.rhs = sr;
    }
    for s in &mut out.signconds {
        s.poly = ex.next().unwrap();
    }
    out.posvars = w.posvars.clone();
    out.posvars.retain(|v| !substituted.contains(v));
    let keep: BTreeSet<String> = var_count(out.polys.iter().chain(out.nonvanishing.iter().map(|x| &x.0)));
    out.vars.retain(|v| keep.contains(v));
    out.halfplane_var = w.halfplane.clone().filter(|h| !substituted.contains(h) && keep.contains(h));

    let report = DelinReport {
        input_eqs,
        input_vars: input_vars.len(),
        output_eqs: out.polys.len(),
        output_vars: output_vars.len(),
        steps: w.steps,
        transcript: w.log,
    };
    (out, report)
}

/// Values of the substituted variables in terms of the surviving ones, in
/// substitution order (each replacement is already fully substituted).
pub fn recorded_substitutions(report: &DelinReport) -> Vec<(String, Polynomial)> {
    let mut out: Vec<(String, Polynomial)> = Vec::new();
    for s in &report.steps {
        let (var, repl) = match s {
            DelinStep::LinearSubst { var, replacement, .. } => (var.clone(), replacement.clone()),
            DelinStep::PositiveRoot { var, value, .. } => {
                (var.clone(), Polynomial::constant(value.clone()))
            }
            _ => continue,
        };
        for (_, r) in out.iter_mut() {
            *r = r.substitute(&var, &repl);
        }
        out.push((var, repl));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
    use crate::polycore::parse_poly_list;

    pub(crate) fn pinned(src: &str) -> AlgebraicTranslation {
        let p = parse_construction(src).unwrap();
        let st = p.statement.clone().unwrap();
        pin_coordinates(&statement_polys(&algebraize(&p).unwrap(), &st.lhs, &st.rhs)).unwrap()
    }

    const MEDIANS: &str = "point A; point B; point C; midpoint D B C; midpoint E A C; \
                           segment c A B; segment g B E; segment f A D; compare f+g vs c";

    const GOLDEN: &str = "\
Input: 10 eqs in 12 vars
Considering positive roots of -v11^2+1=0 in variable v11
{v11=-1,v11=1}
Positive root is 1
New set: {-v5+2*v7-1,-v6+2*v8,-v5+2*v9,2*v10-v6,v10^2-v12^2+v9^2-2*v9+1,-v13^2+v7^2+v8^2,v14*v6-1,v12+v13-w1,-m+w1}
Keeping 1-v11
Removing -v5+2*v7-1, substituting v5 by 2*v7-1
New set: {-v6+2*v8,-2*v7+2*v9+1,2*v10-v6,v10^2-v12^2+v9^2-2*v9+1,-v13^2+v7^2+v8^2,v14*v6-1,v12+v13-w1,-m+w1}
Removing -v6+2*v8, substituting v6 by 2*v8
New set: {-2*v7+2*v9+1,2*v10-2*v8,v10^2-v12^2+v9^2-2*v9+1,-v13^2+v7^2+v8^2,2*v14*v8-1,v12+v13-w1,-m+w1}
Removing -2*v7+2*v9+1, substituting v7 by -1/2*(-2*v9-1)
New set: {2*v10-2*v8,v10^2-v12^2+v9^2-2*v9+1,-v13^2+v8^2+v9^2+v9+1/4,2*v14*v8-1,v12+v13-w1,-m+w1}
Removing 2*v10-2*v8, substituting v10 by v8
New set: {-v12^2+v8^2+v9^2-2*v9+1,-v13^2+v8^2+v9^2+v9+1/4,2*v14*v8-1,v12+v13-w1,-m+w1}
Set after delinearization: {-v12^2+v8^2+v9^2-2*v9+1,-v13^2+v8^2+v9^2+v9+1/4,2*v14*v8-1,v12+v13-w1,-m+w1,1-v11}
Delinearization output: 6 eqs in 8 vars
";

    #[test]
    fn median_transcript_golden() {
        let (out, report) = delinearize(&pinned(MEDIANS));
        assert_eq!(report.render(), GOLDEN);
        assert_eq!((report.input_eqs, report.input_vars), (10, 12));
        assert_eq!((report.output_eqs, report.output_vars), (6, 8));
        assert_eq!(out.vars, ["v8", "v9", "v11", "v12", "v13", "v14", "w1", "m"]);
        assert_eq!(out.nonvanishing.as_ref().unwrap().0.to_string(), "n-1");
    }

    #[test]
    fn idempotent() {
        let (once, _) = delinearize(&pinned(MEDIANS));
        let (twice, report) = delinearize(&once);
        let real_steps = report
            .steps
            .iter()
            .filter(|s| !matches!(s, DelinStep::Dropped(_)))
            .count();
        assert_eq!(real_steps, 0);
        assert_eq!(once.polys, twice.polys);
    }

    #[test]
    fn counts_follow_steps() {
        for src in [
            MEDIANS,
            "point A; point B; point C; segment a B C; segment b A C; segment c A B; \
             compare (a+b+c)^2 vs a*b+b*c+c*a",
            "point A; point B; regular A B C D E 5; segment f A B; segment k A C; compare k vs f",
        ] {
            let (_, r) = delinearize(&pinned(src));
            let lin = r.steps.iter().filter(|s| matches!(s, DelinStep::LinearSubst { .. })).count();
            let drop = r.steps.iter().filter(|s| matches!(s, DelinStep::Dropped(_))).count();
            let red = r.steps.iter().filter(|s| matches!(s, DelinStep::Redundant(_))).count();
            assert_eq!(r.output_vars, r.input_vars - lin - drop, "{src}");
            assert_eq!(r.output_eqs, r.input_eqs - lin - red, "{src}");
        }
    }

    #[test]
    fn bottema_removes_variables() {
        let src = "point A; point B; point C; segment a B C; segment b A C; segment c A B; \
                   compare (a+b+c)^2 vs a*b+b*c+c*a";
        let p = parse_construction(src).unwrap();
        let raw = algebraize(&p).unwrap();
        let (out, r) = delinearize(&pinned(src));
        assert!(r.steps.iter().any(|s| matches!(s, DelinStep::PositiveRoot { .. })));
        // pinned coordinates plus the fixed side length
        let free: BTreeSet<String> = var_count(&out.polys)
            .into_iter()
            .filter(|v| !out.resolved.contains_key(v))
            .collect();
        let before = var_count(&raw.polys);
        assert!(before.iter().filter(|v| !free.contains(*v)).count() >= 4);
    }

    #[test]
    fn preserves_solutions() {
        use crate::construct::numeric::{eval_fx, instantiate, Fx};
        use rand::{rngs::StdRng, SeedableRng};
        let progs = [
            MEDIANS,
            "point A; point B; point C; segment a B C; segment b A C; segment c A B; \
             compare (a+b+c)^2 vs a*b+b*c+c*a",
            "point A; point B; point C; point D; line l A B; line k C D; intersect X l k; \
             segment a A X; segment b B X; compare a vs b",
            "point A; point B; point C; circumcenter O A B C; segment r O A; segment c A B; compare c vs r",
        ];
        let mut rng = StdRng::seed_from_u64(7);
        let tol = Fx::eps(120);
        let mut checked = 0;
        for src in progs {
            let prog = parse_construction(src).unwrap();
            let t = pinned(src);
            let (out, report) = delinearize(&t);
            let subs = recorded_substitutions(&report);
            for _ in 0..25 {
                let fig = instantiate(&prog, &mut rng, true).unwrap();
                let env = fig.assignment(&t);
                for p in &out.polys {
                    let r = eval_fx(p, &env).unwrap();
                    assert!(r.abs() < tol, "{src}: {p}");
                }
                for (v, e) in &subs {
                    let d = &eval_fx(e, &env).unwrap() - &env[v];
                    assert!(d.abs() < tol, "{src}: {v}");
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 100);
    }

    #[test]
    fn small_cases() {
        let none = BTreeSet::new();
        let sys = parse_poly_list("x-y,y^2-1").unwrap();
        let (out, steps) = substitute_linear(&sys, &none);
        assert_eq!(out, parse_poly_list("y^2-1").unwrap());
        assert_eq!(steps.len(), 1);
        let nl = parse_poly_list("x^2+y^2-1,x*y-1").unwrap();
        assert_eq!(substitute_linear(&nl, &none), (nl.clone(), vec![]));

        let pos: BTreeSet<String> = ["x".to_string()].into();
        let (out, steps) = resolve_signed_roots(&parse_poly_list("-x^2-1").unwrap(), &pos);
        assert!(steps.is_empty());
        assert_eq!(out.len(), 1);
        let (out, steps) = resolve_signed_roots(&parse_poly_list("x^2-4,x*y-1").unwrap(), &pos);
        assert_eq!(steps.len(), 1);
        assert_eq!(out, parse_poly_list("2*y-1,2-x").unwrap());

        let (t, r) = delinearize(&AlgebraicTranslation {
            polys: vec![],
            ..pinned("point A; point B; segment c A B; compare c vs c")
        });
        assert!(t.polys.is_empty());
        assert_eq!(r.input_eqs, 0);
    }
}
