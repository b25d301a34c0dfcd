//! Translation of a construction into polynomial equations.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use crate::polycore::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("unsupported step: {0}")]
    UnsupportedStep(String),
    #[error("at least two free points are needed to fix coordinates")]
    NotEnoughFreePoints,
    #[error("expression is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("compared expressions have degrees {lhs} and {rhs}")]
    DegreeMismatch { lhs: u32, rhs: u32 },
    #[error("the program has no compare statement")]
    MissingStatement,
}

/// Requires `poly > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCond {
    pub poly: Polynomial,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatementVars {
    /// Left side of the comparison in length variables.
    pub lhs: Polynomial,
    pub rhs: Polynomial,
    pub w1: String,
    pub m: String,
    pub n: String,
    /// Source-order texts of both sides.
    pub lhs_text: String,
    pub rhs_text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraicTranslation {
    pub polys: Vec<Polynomial>,
    /// Text of each entry of `polys`, in the construction's own term order
    /// where a template exists.
    pub listing: Vec<String>,
    /// Variables in numbering order (`v1`, ..., then `w1`, `m` once a
    /// statement is attached).
    pub vars: Vec<String>,
    /// `A.x`, `A.y` for points, segment names, `X.t` for line parameters,
    /// `#k.c`/`#k.s` for the k-th regular step, `I.a` etc. for incenter side
    /// lengths, and `#ndg`, `#w1`, `#m`, `#n`.
    pub varmap: BTreeMap<String, String>,
    pub posvars: BTreeSet<String>,
    pub signconds: Vec<SignCond>,
    /// Nondegeneracy equation `t*det-1` and its variable `t`.
    pub ndg: Option<(Polynomial, String)>,
    /// `(rhs)*n-1`, kept apart from `polys`.
    pub nonvanishing: Option<(Polynomial, String)>,
    pub statement: Option<StatementVars>,
    /// Coordinate variables of the free points.
    pub free_coords: Vec<(String, String)>,
    pub pinned: bool,
    /// Reflection in the line through the first two free points maps
    /// solutions to solutions; then this third-point ordinate may be taken
    /// nonnegative.
    pub halfplane_var: Option<String>,
    /// Variables fixed to a rational value by delinearization; their
    /// witnesses `r-var` stay in `polys`.
    pub resolved: BTreeMap<String, Rational>,
}

impl AlgebraicTranslation {
    pub fn var(&self, key: &str) -> Option<&str> {
        self.varmap.get(key).map(|s| s.as_str())
    }

    /// Variables that linear substitution must keep.
    pub fn protected(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(st) = &self.statement {
            out.insert(st.w1.clone());
            out.insert(st.m.clone());
            out.extend(st.lhs.vars());
            out.extend(st.rhs.vars());
        }
        out
    }

    /// `polys` as a comma separated list in listing style.
    pub fn render_listing(&self) -> String {
        self.listing.join(",")
    }
}

type P = Polynomial;

fn v(name: &str) -> P {
    P::var(name)
}

fn det(a: &(P, P), b: &(P, P), c: &(P, P)) -> P {
    &(&(&b.0 - &a.0) * &(&c.1 - &a.1)) - &(&(&b.1 - &a.1) * &(&c.0 - &a.0))
}

fn dist2(a: &(P, P), b: &(P, P)) -> P {
    let dx = &a.0 - &b.0;
    let dy = &a.1 - &b.1;
    &(&dx * &dx) + &(&dy * &dy)
}

fn cross(u: &(P, P), w: &(P, P)) -> P {
    &(&u.0 * &w.1) - &(&u.1 * &w.0)
}

fn dot(u: &(P, P), w: &(P, P)) -> P {
    &(&u.0 * &w.0) + &(&u.1 * &w.1)
}

fn diff(a: &(P, P), b: &(P, P)) -> (P, P) {
    (&a.0 - &b.0, &a.1 - &b.1)
}

struct Builder<'a> {
    prog: &'a ConstructionProgram,
    t: AlgebraicTranslation,
    next: usize,
}

impl Builder<'_> {
    fn fresh(&mut self, key: String) -> String {
        self.next += 1;
        let name = format!("v{}", self.next);
        self.t.varmap.insert(key, name.clone());
        self.t.vars.push(name.clone());
        name
    }

    fn pv(&self, point: &str) -> (String, String) {
        (
            self.t.varmap[&format!("{point}.x")].clone(),
            self.t.varmap[&format!("{point}.y")].clone(),
        )
    }

    fn pt(&self, point: &str) -> (P, P) {
        let (x, y) = self.pv(point);
        (v(&x), v(&y))
    }

    fn line(&self, l: &str) -> (&str, &str) {
        self.prog.line(l).expect("validated by the parser")
    }

    fn emit(&mut self, p: P, text: Option<String>) {
        let text = text.unwrap_or_else(|| p.to_string());
        self.t.polys.push(p);
        self.t.listing.push(text);
    }

    fn allocate(&mut self) {
        for s in self.prog.steps() {
            let pts: Vec<&String> = match s {
                Step::FreePoint(n) => vec![n],
                Step::Midpoint { name, .. }
                | Step::Intersect { name, .. }
                | Step::PerpFoot { name, .. }
                | Step::Circumcenter { name, .. }
                | Step::Incenter { name, .. } => vec![name],
                Step::Regular { names, .. } => names[2..].iter().collect(),
                Step::Line { .. } | Step::Segment { .. } => vec![],
            };
            for p in pts {
                let x = self.fresh(format!("{p}.x"));
                let y = self.fresh(format!("{p}.y"));
                if matches!(s, Step::FreePoint(_)) {
                    self.t.free_coords.push((x, y));
                }
            }
        }
        for s in self.prog.steps() {
            if let Step::Segment { name, .. } = s {
                let l = self.fresh(name.clone());
                self.t.posvars.insert(l);
            }
        }
        for (k, item) in self.prog.items.iter().enumerate() {
            match item {
                Item::Step(Step::Intersect { name, .. } | Step::PerpFoot { name, .. }) => {
                    self.fresh(format!("{name}.t"));
                }
                Item::Step(Step::Regular { .. }) => {
                    self.fresh(format!("#{k}.c"));
                    let s = self.fresh(format!("#{k}.s"));
                    self.t.posvars.insert(s);
                }
                Item::Step(Step::Incenter { name, .. }) => {
                    for side in ["a", "b", "c"] {
                        let l = self.fresh(format!("{name}.{side}"));
                        self.t.posvars.insert(l);
                    }
                }
                _ => {}
            }
        }
        if self.t.free_coords.len() >= 3 {
            self.fresh("#ndg".into());
        }
    }

    fn step(&mut self, k: usize, s: &Step) -> Result<(), ConstructError> {
        match s {
            Step::FreePoint(_) | Step::Line { .. } => {}
            Step::Midpoint { name, p, q } => {
                let (mx, my) = self.pv(name);
                let (px, py) = self.pv(p);
                let (qx, qy) = self.pv(q);
                for (m, a, b) in [(&mx, &px, &qx), (&my, &py, &qy)] {
                    let poly = &(&v(m).scale(&Rational::from_integer(2.into())) - &v(b)) - &v(a);
                    self.emit(poly, Some(format!("2*{m}-{b}-{a}")));
                }
            }
            Step::Segment { name, p, q } => {
                let l = self.t.varmap[name].clone();
                let (px, py) = self.pv(p);
                let (qx, qy) = self.pv(q);
                let poly = &dist2(&self.pt(p), &self.pt(q)) - &v(&l).pow(2);
                let text = format!(
                    "-{l}^2+{qy}^2+{qx}^2-2*{qy}*{py}+{py}^2-2*{qx}*{px}+{px}^2"
                );
                self.emit(poly, Some(text));
            }
            Step::Intersect { name, l1, l2 } => {
                let (p, q) = self.line(l1);
                let (r, s2) = self.line(l2);
                let (pp, qq, rr, ss) = (self.pt(p), self.pt(q), self.pt(r), self.pt(s2));
                let t = v(&self.t.varmap[&format!("{name}.t")]);
                self.on_param_line(name, &pp, &qq, &t);
                let d = diff(&ss, &rr);
                let poly = &(&t * &cross(&diff(&qq, &pp), &d)) - &cross(&diff(&rr, &pp), &d);
                self.emit(poly, None);
            }
            Step::PerpFoot { name, p, line } => {
                let (q, r) = self.line(line);
                let (pp, qq, rr) = (self.pt(p), self.pt(q), self.pt(r));
                let t = v(&self.t.varmap[&format!("{name}.t")]);
                self.on_param_line(name, &qq, &rr, &t);
                let d = diff(&rr, &qq);
                let poly = &(&t * &dot(&d, &d)) - &dot(&diff(&pp, &qq), &d);
                self.emit(poly, None);
            }
            Step::Circumcenter { name, a, b, c } => {
                let o = self.pt(name);
                let oa = dist2(&o, &self.pt(a));
                self.emit(&oa - &dist2(&o, &self.pt(b)), None);
                self.emit(&oa - &dist2(&o, &self.pt(c)), None);
            }
            Step::Incenter { name, a, b, c } => {
                let (pa, pb, pc) = (self.pt(a), self.pt(b), self.pt(c));
                let la = v(&self.t.varmap[&format!("{name}.a")]);
                let lb = v(&self.t.varmap[&format!("{name}.b")]);
                let lc = v(&self.t.varmap[&format!("{name}.c")]);
                self.emit(&dist2(&pb, &pc) - &la.pow(2), None);
                self.emit(&dist2(&pa, &pc) - &lb.pow(2), None);
                self.emit(&dist2(&pa, &pb) - &lc.pow(2), None);
                let i = self.pt(name);
                let sum = &(&la + &lb) + &lc;
                for (ic, ac, bc, cc) in [(&i.0, &pa.0, &pb.0, &pc.0), (&i.1, &pa.1, &pb.1, &pc.1)] {
                    let poly = &(&(&(ic * &sum) - &(&la * ac)) - &(&lb * bc)) - &(&lc * cc);
                    self.emit(poly, None);
                }
            }
            Step::Regular { names, n } => {
                let c = v(&self.t.varmap[&format!("#{k}.c")]);
                let s = v(&self.t.varmap[&format!("#{k}.s")]);
                let cpoly = match n {
                    3 => &c.scale(&Rational::from_integer(2.into())) + &P::int(1),
                    4 => c.clone(),
                    5 => &(&c.pow(2).scale(&Rational::from_integer(4.into()))
                        + &c.scale(&Rational::from_integer(2.into())))
                        - &P::int(1),
                    6 => &c.scale(&Rational::from_integer(2.into())) - &P::int(1),
                    _ => return Err(ConstructError::UnsupportedStep(format!("regular {n}-gon"))),
                };
                self.emit(cpoly, None);
                self.emit(&(&s.pow(2) + &c.pow(2)) - &P::int(1), None);
                for w in names.windows(3) {
                    let (a, b, x) = (self.pt(&w[0]), self.pt(&w[1]), self.pt(&w[2]));
                    let d = diff(&b, &a);
                    let px = &(&(&(&x.0 - &b.0) - &(&c * &d.0)) + &(&s * &d.1)).clone();
                    let py = &(&(&x.1 - &b.1) - &(&s * &d.0)) - &(&c * &d.1);
                    self.emit(px.clone(), None);
                    self.emit(py, None);
                }
            }
        }
        Ok(())
    }

    fn on_param_line(&mut self, name: &str, p: &(P, P), q: &(P, P), t: &P) {
        let x = self.pt(name);
        let d = diff(q, p);
        self.emit(&(&x.0 - &p.0) - &(t * &d.0), None);
        self.emit(&(&x.1 - &p.1) - &(t * &d.1), None);
    }

    fn constraint(&mut self, c: &Constraint) {
        match c {
            Constraint::RightAngle(p, q, r) => {
                let (pp, qq, rr) = (self.pt(p), self.pt(q), self.pt(r));
                self.emit(dot(&diff(&pp, &qq), &diff(&rr, &qq)), None);
            }
            Constraint::Equal(s, t) => {
                let (a, b) = self.prog.segment(s).unwrap();
                let (c, d) = self.prog.segment(t).unwrap();
                let poly = &dist2(&self.pt(a), &self.pt(b)) - &dist2(&self.pt(c), &self.pt(d));
                self.emit(poly, None);
            }
            Constraint::SameHalfPlane(p, q, l) => {
                let (a, b) = self.line(l);
                let (pa, pb) = (self.pt(a), self.pt(b));
                let poly = &det(&pa, &pb, &self.pt(p)) * &det(&pa, &pb, &self.pt(q));
                self.t.signconds.push(SignCond {
                    poly,
                    label: format!("samehalfplane {p} {q} {l}"),
                });
            }
        }
    }

    fn ndg(&mut self) {
        let Some(t) = self.t.varmap.get("#ndg").cloned() else {
            return;
        };
        let fc = self.t.free_coords.clone();
        let [(ax, ay), (bx, by), (cx, cy)] = [&fc[0], &fc[1], &fc[2]];
        let pt = |(x, y): &(String, String)| (v(x), v(y));
        let poly = &(&v(&t) * &det(&pt(&fc[0]), &pt(&fc[1]), &pt(&fc[2]))) - &P::int(1);
        let text = format!(
            "-1-{t}*{cx}*{by}+{t}*{cy}*{bx}+{t}*{cx}*{ay}-{t}*{bx}*{ay}-{t}*{cy}*{ax}+{t}*{by}*{ax}"
        );
        self.emit(poly.clone(), Some(text));
        self.t.ndg = Some((poly, t));
    }
}

/// Translates the figure (not the statement) into equations.
pub fn algebraize(prog: &ConstructionProgram) -> Result<AlgebraicTranslation, ConstructError> {
    let mut b = Builder {
        prog,
        t: AlgebraicTranslation {
            polys: vec![],
            listing: vec![],
            vars: vec![],
            varmap: BTreeMap::new(),
            posvars: BTreeSet::new(),
            signconds: vec![],
            ndg: None,
            nonvanishing: None,
            statement: None,
            free_coords: vec![],
            pinned: false,
            halfplane_var: None,
            resolved: BTreeMap::new(),
        },
        next: 0,
    };
    b.allocate();
    for (k, item) in prog.items.iter().enumerate() {
        match item {
            Item::Step(s) => b.step(k, s)?,
            Item::Constraint(c) => b.constraint(c),
        }
    }
    b.ndg();
    let has_regular = prog.steps().any(|s| matches!(s, Step::Regular { .. }));
    if !has_regular && b.t.free_coords.len() >= 3 {
        b.t.halfplane_var = Some(b.t.free_coords[2].1.clone());
    }
    Ok(b.t)
}

fn homogeneous_degree(p: &Polynomial, what: &str) -> Result<u32, ConstructError> {
    let mut degs = p.terms().map(|(m, _)| m.degree());
    let Some(d) = degs.next() else {
        return Err(ConstructError::NotHomogeneous(format!("{what} vanishes identically")));
    };
    if degs.any(|e| e != d) {
        return Err(ConstructError::NotHomogeneous(format!("{what} mixes degrees")));
    }
    Ok(d)
}

/// Common degree of both sides in length units.
pub fn check_homogeneity(lhs: &GeomExpr, rhs: &GeomExpr) -> Result<u32, ConstructError> {
    let id = |s: &str| s.to_string();
    let l = homogeneous_degree(&lhs.to_poly(&id), "left side")?;
    let r = homogeneous_degree(&rhs.to_poly(&id), "right side")?;
    if l != r {
        return Err(ConstructError::DegreeMismatch { lhs: l, rhs: r });
    }
    Ok(l)
}

/// Appends `-w1+(lhs)^1`, `rhs*m-(w1)` and keeps `(rhs)*n-1` aside.
pub fn statement_polys(
    t: &AlgebraicTranslation,
    lhs: &GeomExpr,
    rhs: &GeomExpr,
) -> AlgebraicTranslation {
    let mut t = t.clone();
    let name = |s: &str| t.varmap[s].clone();
    let l = lhs.to_poly(&name);
    let r = rhs.to_poly(&name);
    let ltext = lhs.render_with(&name);
    let rtext = rhs.render_with(&name);
    let rfactor = if rhs.is_atomic() {
        rtext.clone()
    } else {
        format!("({rtext})")
    };
    let (w1, m, n) = ("w1".to_string(), "m".to_string(), "n".to_string());
    t.polys.push(&l - &v(&w1));
    t.listing.push(format!("-{w1}+({ltext})^1"));
    t.polys.push(&(&r * &v(&m)) - &v(&w1));
    t.listing.push(format!("{rfactor}*{m}-({w1})"));
    t.nonvanishing = Some((&(&r * &v(&n)) - &P::int(1), format!("({rtext})*{n}-1")));
    for x in [&w1, &m, &n] {
        t.varmap.insert(format!("#{x}"), x.clone());
    }
    t.vars.push(w1.clone());
    t.vars.push(m.clone());
    t.statement = Some(StatementVars {
        lhs: l,
        rhs: r,
        w1,
        m,
        n,
        lhs_text: ltext,
        rhs_text: rtext,
    });
    t
}

/// Places the first two free points at (0,0) and (1,0).
pub fn pin_coordinates(t: &AlgebraicTranslation) -> Result<AlgebraicTranslation, ConstructError> {
    if t.pinned {
        return Ok(t.clone());
    }
    if t.free_coords.len() < 2 {
        return Err(ConstructError::NotEnoughFreePoints);
    }
    if let Some(st) = &t.statement {
        let l = homogeneous_degree(&st.lhs, "left side")?;
        let r = homogeneous_degree(&st.rhs, "right side")?;
        if l != r {
            return Err(ConstructError::DegreeMismatch { lhs: l, rhs: r });
        }
    }
    let (ax, ay) = &t.free_coords[0];
    let (bx, by) = &t.free_coords[1];
    let values: BTreeMap<String, Polynomial> = [
        (ax.clone(), P::int(0)),
        (ay.clone(), P::int(0)),
        (bx.clone(), P::int(1)),
        (by.clone(), P::int(0)),
    ]
    .into_iter()
    .collect();
    let mut out = t.clone();
    out.polys.clear();
    out.listing.clear();
    let (w1_eq, m_eq) = match &t.statement {
        Some(st) => (
            Some(&st.lhs - &v(&st.w1)),
            Some(&(&st.rhs * &v(&st.m)) - &v(&st.w1)),
        ),
        None => (None, None),
    };
    let ints: BTreeMap<String, i64> = [(ax, 0), (ay, 0), (bx, 1), (by, 0)]
        .into_iter()
        .map(|(k, x)| (k.clone(), x))
        .collect();
    for (p, text) in t.polys.iter().zip(&t.listing) {
        let q = p.substitute_all(&values);
        if q.is_zero() {
            continue;
        }
        let st = t.statement.as_ref();
        let (q, text) = if Some(p) == m_eq.as_ref() {
            let st = st.unwrap();
            (-q, format!("({})-{}*({})", st.w1, st.m, st.rhs_text))
        } else if Some(p) == w1_eq.as_ref() {
            let st = st.unwrap();
            (q, format!("{}-{}", st.lhs_text, st.w1))
        } else {
            let text = subst_terms(text, &ints).unwrap_or_else(|| q.to_string());
            (q, text)
        };
        out.listing.push(text);
        out.polys.push(q);
    }
    out.signconds = t
        .signconds
        .iter()
        .map(|s| SignCond {
            poly: s.poly.substitute_all(&values),
            label: s.label.clone(),
        })
        .collect();
    out.ndg = t
        .ndg
        .as_ref()
        .map(|(p, v)| (p.substitute_all(&values), v.clone()));
    out.vars.retain(|x| !values.contains_key(x));
    out.pinned = true;
    Ok(out)
}

/// Term-wise substitution of 0/1 values into a parenthesis-free sum of
/// products, keeping the surviving terms in their original order.
fn subst_terms(text: &str, values: &BTreeMap<String, i64>) -> Option<String> {
    if text.contains('(') {
        return None;
    }
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let flush = |sign: i64, body: &str, terms: &mut Vec<(i64, String)>| -> Option<()> {
        let mut coef = sign;
        let mut factors = Vec::new();
        for f in body.split('*') {
            if let Ok(k) = f.parse::<i64>() {
                coef *= k;
                continue;
            }
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().ok()?),
                None => (f, 1),
            };
            match values.get(name) {
                Some(x) => coef *= x.pow(e),
                None => factors.push(f.to_string()),
            }
        }
        if coef == 0 {
            return Some(());
        }
        let key = factors.join("*");
        match terms.iter_mut().find(|(_, k)| *k == key) {
            Some(t) => t.0 += coef,
            None => terms.push((coef, key)),
        }
        Some(())
    };
    for ch in text.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            flush(sign, &cur, &mut terms)?;
            cur.clear();
        }
        match ch {
            '+' => sign = 1,
            '-' => sign = -1,
            c => cur.push(c),
        }
    }
    flush(sign, &cur, &mut terms)?;
    let mut out = String::new();
    for (c, f) in terms.into_iter().filter(|(c, _)| *c != 0) {
        if c > 0 && !out.is_empty() {
            out.push('+');
        }
        match (c, f.is_empty()) {
            (_, true) => out.push_str(&c.to_string()),
            (1, false) => out.push_str(&f),
            (-1, false) => {
                out.push('-');
                out.push_str(&f);
            }
            _ => out.push_str(&format!("{c}*{f}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::parse_construction;
    use crate::polycore::{parse_poly, parse_poly_list};

    const MEDIANS: &str = "point A; point B; point C; midpoint D B C; midpoint E A C; \
                           segment c A B; segment g B E; segment f A D; compare f+g vs c";

    fn translate(src: &str) -> AlgebraicTranslation {
        let p = parse_construction(src).unwrap();
        let st = p.statement.clone().unwrap();
        statement_polys(&algebraize(&p).unwrap(), &st.lhs, &st.rhs)
    }

    #[test]
    fn median_listing_matches_golden() {
        let t = translate(MEDIANS);
        let golden = [
            "2*v7-v5-v3",
            "2*v8-v6-v4",
            "2*v9-v5-v1",
            "2*v10-v6-v2",
            "-v11^2+v4^2+v3^2-2*v4*v2+v2^2-2*v3*v1+v1^2",
            "-v12^2+v10^2+v9^2-2*v10*v4+v4^2-2*v9*v3+v3^2",
            "-v13^2+v8^2+v7^2-2*v8*v2+v2^2-2*v7*v1+v1^2",
            "-1-v14*v5*v4+v14*v6*v3+v14*v5*v2-v14*v3*v2-v14*v6*v1+v14*v4*v1",
            "-w1+(v13+v12)^1",
            "v11*m-(w1)",
        ];
        assert_eq!(t.listing, golden);
        assert_eq!(t.nonvanishing.as_ref().unwrap().1, "(v11)*n-1");
        assert_eq!(t.posvars.iter().cloned().collect::<Vec<_>>(), ["v11", "v12", "v13"]);
        // the listing reparses to the same system
        let re = parse_poly_list(&t.render_listing()).unwrap();
        assert_eq!(re, t.polys);
    }

    #[test]
    fn pinned_median_system() {
        let t = pin_coordinates(&translate(MEDIANS)).unwrap();
        let expected = parse_poly_list(
            "2*v7-v5-1,2*v8-v6,2*v9-v5,2*v10-v6,-v11^2+1,-v12^2+v10^2+v9^2-2*v9+1,\
             -v13^2+v8^2+v7^2,-1+v14*v6,v13+v12-w1,(w1)-m*(v11)",
        )
        .unwrap();
        assert_eq!(t.polys, expected);
        assert_eq!(
            t.render_listing(),
            "2*v7-v5-1,2*v8-v6,2*v9-v5,2*v10-v6,-v11^2+1,-v12^2+v10^2+v9^2-2*v9+1,\
             -v13^2+v8^2+v7^2,-1+v14*v6,v13+v12-w1,(w1)-m*(v11)"
        );
        for (p, s) in t.polys.iter().zip(&t.listing) {
            assert_eq!(&parse_poly(s).unwrap(), p);
        }
        assert_eq!(t.vars.len(), 12);
        assert_eq!(pin_coordinates(&t).unwrap(), t);
    }

    #[test]
    fn pinning_errors() {
        let p = parse_construction("point A; midpoint M A A").unwrap();
        let t = algebraize(&p).unwrap();
        assert_eq!(pin_coordinates(&t).unwrap_err(), ConstructError::NotEnoughFreePoints);
        assert!(t.ndg.is_none());
        let bad = translate("point A; point B; segment c A B; compare c+1 vs c");
        assert!(matches!(pin_coordinates(&bad), Err(ConstructError::NotHomogeneous(_))));
    }

    #[test]
    fn homogeneity() {
        let st = |s: &str| {
            parse_construction(&format!(
                "point A; point B; point C; segment a B C; segment b A C; segment c A B; compare {s}"
            ))
            .unwrap()
            .statement
            .unwrap()
        };
        let s = st("(a+b+c)^2 vs a*b+b*c+c*a");
        assert_eq!(check_homogeneity(&s.lhs, &s.rhs), Ok(2));
        let s = st("a+b vs c");
        assert_eq!(check_homogeneity(&s.lhs, &s.rhs), Ok(1));
        let s = st("a*b*c*a vs c");
        assert_eq!(
            check_homogeneity(&s.lhs, &s.rhs),
            Err(ConstructError::DegreeMismatch { lhs: 4, rhs: 1 })
        );
        let s = st("a^2+b vs c");
        assert!(matches!(check_homogeneity(&s.lhs, &s.rhs), Err(ConstructError::NotHomogeneous(_))));
    }

    #[test]
    fn regular_and_constraint_listing_round_trip() {
        let t = translate(
            "point A; point B; regular A B C D E 5; line l A B; samehalfplane C D l; \
             segment f A B; segment k A C; compare k vs f",
        );
        for (p, s) in t.polys.iter().zip(&t.listing) {
            assert_eq!(&parse_poly(s).unwrap(), p);
        }
        assert_eq!(t.signconds.len(), 1);
        assert!(t.halfplane_var.is_none());
        assert!(t.posvars.contains(t.var("#2.s").unwrap()));
    }

    #[test]
    fn same_statement_sides_still_emit_everything() {
        let t = translate("point A; point B; segment c A B; compare c vs c");
        assert_eq!(t.listing[t.listing.len() - 2..], ["-w1+(v5)^1", "v5*m-(w1)"]);
        assert!(t.nonvanishing.is_some());
    }
}
