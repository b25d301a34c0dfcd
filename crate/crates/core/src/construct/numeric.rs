//! High-precision numeric instantiation of a construction, computed
//! directly from the geometry (not from the polynomial encoding).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use super::algebra::AlgebraicTranslation;
use super::ast::*;
use crate::polycore::{Polynomial, Rational};

const BITS: u64 = 256;

/// Binary fixed point with 256 fractional bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(BigInt);

impl Fx {
    pub fn int(n: i64) -> Fx {
        Fx(BigInt::from(n) << BITS)
    }

    pub fn from_rational(r: &Rational) -> Fx {
        Fx((r.numer() << BITS) / r.denom())
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.0.clone(), BigInt::from(1) << BITS)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = BITS - 60;
        (&self.0 >> shift).to_f64().unwrap_or(f64::NAN) / (2f64).powi(60)
    }

    pub fn sqrt(&self) -> Fx {
        assert!(!self.0.is_negative(), "square root of a negative number");
        Fx((&self.0 << BITS).sqrt())
    }

    pub fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// 2^-k.
    pub fn eps(k: u64) -> Fx {
        Fx(BigInt::from(1) << (BITS - k))
    }

    pub fn recip(&self) -> Fx {
        &Fx::int(1) / self
    }
}

impl fmt::Debug for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.to_f64())
    }
}

macro_rules! fx_op {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Fx> for &Fx {
            type Output = Fx;
            fn $m(self, o: &Fx) -> Fx {
                let f: fn(&BigInt, &BigInt) -> BigInt = $body;
                Fx(f(&self.0, &o.0))
            }
        }
        impl $tr<Fx> for Fx {
            type Output = Fx;
            fn $m(self, o: Fx) -> Fx {
                (&self).$m(&o)
            }
        }
    };
}

fx_op!(Add, add, |a, b| a + b);
fx_op!(Sub, sub, |a, b| a - b);
fx_op!(Mul, mul, |a, b| (a * b) >> BITS);
fx_op!(Div, div, |a, b| (a << BITS) / b);

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-&self.0)
    }
}

type Pt = (Fx, Fx);

fn sub(a: &Pt, b: &Pt) -> Pt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(u: &Pt, w: &Pt) -> Fx {
    &(&u.0 * &w.1) - &(&u.1 * &w.0)
}

fn dot(u: &Pt, w: &Pt) -> Fx {
    &(&u.0 * &w.0) + &(&u.1 * &w.1)
}

fn dist(a: &Pt, b: &Pt) -> Fx {
    let d = sub(a, b);
    dot(&d, &d).sqrt()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("no nondegenerate instance found in {0} attempts")]
    NoInstance(usize),
}

/// A concrete figure: points, segment lengths and auxiliary quantities keyed
/// like [`AlgebraicTranslation::varmap`].
#[derive(Clone, Debug)]
pub struct Figure {
    pub points: BTreeMap<String, Pt>,
    pub values: BTreeMap<String, Fx>,
    pub lhs: Option<Fx>,
    pub rhs: Option<Fx>,
}

impl Figure {
    pub fn ratio(&self) -> Option<Fx> {
        Some(self.lhs.as_ref()? / self.rhs.as_ref()?)
    }

    /// Values of the translation's variables.
    pub fn assignment(&self, t: &AlgebraicTranslation) -> BTreeMap<String, Fx> {
        let mut out = BTreeMap::new();
        for (key, var) in &t.varmap {
            if let Some(x) = self.values.get(key) {
                out.insert(var.clone(), x.clone());
            }
        }
        if let Some((p, tv)) = &t.ndg {
            let coeff = p.coefficients_in(tv);
            if coeff.len() == 2 {
                if let Some(d) = eval_fx(&coeff[1], &out) {
                    out.insert(tv.clone(), d.recip());
                }
            }
        }
        out
    }

    /// Residual of `p` at this figure; `None` if a variable is missing.
    pub fn residual(&self, t: &AlgebraicTranslation, p: &Polynomial) -> Option<Fx> {
        eval_fx(p, &self.assignment(t))
    }
}

pub fn eval_fx(p: &Polynomial, env: &BTreeMap<String, Fx>) -> Option<Fx> {
    let mut acc = Fx::int(0);
    for (m, c) in p.terms() {
        let mut t = Fx::from_rational(c);
        for (v, e) in m.factors() {
            let x = env.get(v)?;
            for _ in 0..*e {
                t = &t * x;
            }
        }
        acc = &acc + &t;
    }
    Some(acc)
}

fn too_small(x: &Fx, k: i32) -> bool {
    x.abs().to_f64() < 10f64.powi(-k)
}

fn regular_cs(n: u32) -> (Fx, Fx) {
    let half = Fx::from_rational(&Rational::new(1.into(), 2.into()));
    let r3 = Fx::int(3).sqrt();
    match n {
        3 => (-&half, &r3 * &half),
        4 => (Fx::int(0), Fx::int(1)),
        5 => {
            let c = &(&Fx::int(5).sqrt() - &Fx::int(1)) / &Fx::int(4);
            let s = (&Fx::int(1) - &(&c * &c)).sqrt();
            (c, s)
        }
        _ => (half.clone(), &r3 * &half),
    }
}

fn eval_expr(e: &GeomExpr, len: &BTreeMap<String, Fx>) -> Fx {
    match e {
        GeomExpr::Leaf(n) => len[n].clone(),
        GeomExpr::Const(c) => Fx::from_rational(c),
        GeomExpr::Add(a, b) => &eval_expr(a, len) + &eval_expr(b, len),
        GeomExpr::Sub(a, b) => &eval_expr(a, len) - &eval_expr(b, len),
        GeomExpr::Mul(a, b) => &eval_expr(a, len) * &eval_expr(b, len),
        GeomExpr::Pow(a, k) => {
            let x = eval_expr(a, len);
            let mut acc = Fx::int(1);
            for _ in 0..*k {
                acc = &acc * &x;
            }
            acc
        }
    }
}

/// Builds the figure from free-point coordinates (flattened x, y pairs).
/// Returns `None` for degenerate configurations.
pub fn build(prog: &ConstructionProgram, free: &[Fx]) -> Option<Figure> {
    let mut pts: BTreeMap<String, Pt> = BTreeMap::new();
    let mut vals: BTreeMap<String, Fx> = BTreeMap::new();
    let mut fi = 0;
    let line = |pts: &BTreeMap<String, Pt>, l: &str| -> (Pt, Pt) {
        let (p, q) = prog.line(l).unwrap();
        (pts[p].clone(), pts[q].clone())
    };
    for (k, item) in prog.items.iter().enumerate() {
        let Item::Step(s) = item else { continue };
        match s {
            Step::FreePoint(n) => {
                pts.insert(n.clone(), (free[fi].clone(), free[fi + 1].clone()));
                fi += 2;
            }
            Step::Midpoint { name, p, q } => {
                let two = Fx::int(2);
                let (a, b) = (&pts[p], &pts[q]);
                let m = (&(&a.0 + &b.0) / &two, &(&a.1 + &b.1) / &two);
                pts.insert(name.clone(), m);
            }
            Step::Line { p, q, .. } => {
                if too_small(&dist(&pts[p], &pts[q]), 6) {
                    return None;
                }
            }
            Step::Segment { name, p, q } => {
                vals.insert(name.clone(), dist(&pts[p], &pts[q]));
            }
            Step::Intersect { name, l1, l2 } => {
                let (p, q) = line(&pts, l1);
                let (r, s2) = line(&pts, l2);
                let d = sub(&s2, &r);
                let den = cross(&sub(&q, &p), &d);
                if too_small(&den, 6) {
                    return None;
                }
                let t = &cross(&sub(&r, &p), &d) / &den;
                let x = (&p.0 + &(&t * &(&q.0 - &p.0)), &p.1 + &(&t * &(&q.1 - &p.1)));
                pts.insert(name.clone(), x);
                vals.insert(format!("{name}.t"), t);
            }
            Step::PerpFoot { name, p, line: l } => {
                let (q, r) = line(&pts, l);
                let d = sub(&r, &q);
                let t = &dot(&sub(&pts[p], &q), &d) / &dot(&d, &d);
                let x = (&q.0 + &(&t * &d.0), &q.1 + &(&t * &d.1));
                pts.insert(name.clone(), x);
                vals.insert(format!("{name}.t"), t);
            }
            Step::Circumcenter { name, a, b, c } => {
                let (pa, pb, pc) = (&pts[a], &pts[b], &pts[c]);
                let ba = sub(pb, pa);
                let ca = sub(pc, pa);
                let d = &Fx::int(2) * &cross(&ba, &ca);
                if too_small(&d, 6) {
                    return None;
                }
                let (b2, c2) = (dot(&ba, &ba), dot(&ca, &ca));
                let ox = &(&(&ca.1 * &b2) - &(&ba.1 * &c2)) / &d;
                let oy = &(&(&ba.0 * &c2) - &(&ca.0 * &b2)) / &d;
                pts.insert(name.clone(), (&pa.0 + &ox, &pa.1 + &oy));
            }
            Step::Incenter { name, a, b, c } => {
                let (pa, pb, pc) = (pts[a].clone(), pts[b].clone(), pts[c].clone());
                let la = dist(&pb, &pc);
                let lb = dist(&pa, &pc);
                let lc = dist(&pa, &pb);
                let sum = &(&la + &lb) + &lc;
                if too_small(&cross(&sub(&pb, &pa), &sub(&pc, &pa)), 6) {
                    return None;
                }
                let ix = &(&(&(&la * &pa.0) + &(&lb * &pb.0)) + &(&lc * &pc.0)) / &sum;
                let iy = &(&(&(&la * &pa.1) + &(&lb * &pb.1)) + &(&lc * &pc.1)) / &sum;
                pts.insert(name.clone(), (ix, iy));
                vals.insert(format!("{name}.a"), la);
                vals.insert(format!("{name}.b"), lb);
                vals.insert(format!("{name}.c"), lc);
            }
            Step::Regular { names, n } => {
                let (c, s) = regular_cs(*n);
                for w in names.windows(3) {
                    let (a, b) = (pts[&w[0]].clone(), pts[&w[1]].clone());
                    let d = sub(&b, &a);
                    let x = (
                        &(&b.0 + &(&c * &d.0)) - &(&s * &d.1),
                        &(&b.1 + &(&s * &d.0)) + &(&c * &d.1),
                    );
                    pts.insert(w[2].clone(), x);
                }
                vals.insert(format!("#{k}.c"), c);
                vals.insert(format!("#{k}.s"), s);
            }
        }
    }
    for c in prog.constraints() {
        if let Constraint::SameHalfPlane(p, q, l) = c {
            let (a, b) = line(&pts, l);
            let d = sub(&b, &a);
            let sp = cross(&d, &sub(&pts[p], &a));
            let sq = cross(&d, &sub(&pts[q], &a));
            if too_small(&sp, 6) || too_small(&sq, 6) || (&sp * &sq).is_negative() {
                return None;
            }
        }
    }
    for (key, p) in &pts {
        vals.insert(format!("{key}.x"), p.0.clone());
        vals.insert(format!("{key}.y"), p.1.clone());
    }
    let (mut lhs, mut rhs) = (None, None);
    if let Some(st) = &prog.statement {
        let l = eval_expr(&st.lhs, &vals);
        let r = eval_expr(&st.rhs, &vals);
        if too_small(&r, 6) {
            return None;
        }
        vals.insert("#w1".into(), l.clone());
        vals.insert("#m".into(), &l / &r);
        vals.insert("#n".into(), r.recip());
        lhs = Some(l);
        rhs = Some(r);
    }
    Some(Figure {
        points: pts,
        values: vals,
        lhs,
        rhs,
    })
}

/// Residuals of the metric constraints (right angles, equal lengths).
fn constraint_residuals(prog: &ConstructionProgram, fig: &Figure) -> Vec<Fx> {
    let p = &fig.points;
    prog.constraints()
        .filter_map(|c| match c {
            Constraint::RightAngle(a, b, c) => {
                Some(dot(&sub(&p[a], &p[b]), &sub(&p[c], &p[b])))
            }
            Constraint::Equal(s, t) => {
                let (a, b) = prog.segment(s).unwrap();
                let (c, d) = prog.segment(t).unwrap();
                let u = sub(&p[a], &p[b]);
                let w = sub(&p[c], &p[d]);
                Some(&dot(&u, &u) - &dot(&w, &w))
            }
            Constraint::SameHalfPlane(..) => None,
        })
        .collect()
}

/// Solves `a x = b` for small dense systems.
fn solve(mut a: Vec<Vec<Fx>>, mut b: Vec<Fx>) -> Option<Vec<Fx>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by_key(|r| a[*r][col].abs())?;
        if too_small(&a[piv][col], 30) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
                let d = &f * &b[col];
                b[r] = &b[r] - &d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Moves the unpinned free coordinates onto the constraint set by
/// minimum-norm Newton steps.
fn project(prog: &ConstructionProgram, free: &mut [Fx], first: usize) -> Option<Figure> {
    let tol = Fx::eps(200);
    for _ in 0..80 {
        let fig = build(prog, free)?;
        let f = constraint_residuals(prog, &fig);
        if f.iter().all(|r| r.abs() < tol) {
            return Some(fig);
        }
        let h = Fx::eps(90);
        let d = free.len() - first;
        let mut jac = vec![vec![Fx::int(0); d]; f.len()];
        for j in 0..d {
            let mut z = free.to_vec();
            z[first + j] = &z[first + j] + &h;
            let fz = constraint_residuals(prog, &build(prog, &z)?);
            for i in 0..f.len() {
                jac[i][j] = &(&fz[i] - &f[i]) / &h;
            }
        }
        let k = f.len();
        let jjt: Vec<Vec<Fx>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|l| {
                        (0..d).fold(Fx::int(0), |acc, j| &acc + &(&jac[i][j] * &jac[l][j]))
                    })
                    .collect()
            })
            .collect();
        let y = solve(jjt, f.iter().map(|x| -x).collect())?;
        for j in 0..d {
            let step = (0..k).fold(Fx::int(0), |acc, i| &acc + &(&jac[i][j] * &y[i]));
            free[first + j] = &free[first + j] + &step;
        }
    }
    None
}

/// A random nondegenerate instance. With `pinned`, the first two free points
/// sit at (0,0) and (1,0).
pub fn instantiate<R: Rng>(
    prog: &ConstructionProgram,
    rng: &mut R,
    pinned: bool,
) -> Result<Figure, NumericError> {
    let nfree = prog.free_points().len();
    let attempts = 2000;
    for _ in 0..attempts {
        let mut free: Vec<Fx> = (0..2 * nfree)
            .map(|_| Fx::from_rational(&Rational::new(rng.gen_range(-2000..=2000).into(), 1000.into())))
            .collect();
        let mut first = 0;
        if pinned && nfree >= 2 {
            free[0] = Fx::int(0);
            free[1] = Fx::int(0);
            free[2] = Fx::int(1);
            free[3] = Fx::int(0);
            first = 4;
        }
        if nfree >= 3 {
            let p: Vec<Pt> = (0..3).map(|i| (free[2 * i].clone(), free[2 * i + 1].clone())).collect();
            if too_small(&cross(&sub(&p[1], &p[0]), &sub(&p[2], &p[0])), 2) {
                continue;
            }
        }
        let fig = if prog.constraints().any(|c| !matches!(c, Constraint::SameHalfPlane(..))) {
            project(prog, &mut free, first)
        } else {
            build(prog, &free)
        };
        if let Some(f) = fig {
            if nfree >= 3 {
                let names = prog.free_points();
                let p: Vec<&Pt> = names.iter().take(3).map(|n| &f.points[*n]).collect();
                if too_small(&cross(&sub(p[1], p[0]), &sub(p[2], p[0])), 3) {
                    continue;
                }
            }
            return Ok(f);
        }
    }
    Err(NumericError::NoInstance(attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn translation(prog: &ConstructionProgram) -> AlgebraicTranslation {
        let st = prog.statement.clone().unwrap();
        statement_polys(&algebraize(prog).unwrap(), &st.lhs, &st.rhs)
    }

    fn check_residuals(src: &str, trials: usize) {
        let prog = parse_construction(src).unwrap();
        let t = translation(&prog);
        let pinned = pin_coordinates(&t).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let tiny = 1e-20;
        for k in 0..trials {
            let pin = k % 2 == 0;
            let fig = instantiate(&prog, &mut rng, pin).unwrap();
            let tr = if pin { &pinned } else { &t };
            for p in tr.polys.iter().chain(tr.nonvanishing.as_ref().map(|x| &x.0)) {
                let r = fig.residual(tr, p).unwrap();
                assert!(r.abs().to_f64() < tiny, "{src}: {p} has residual {r:?}");
            }
            for s in &tr.signconds {
                assert!(!fig.residual(tr, &s.poly).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn figures_satisfy_their_equations() {
        check_residuals(
            "point A; point B; point C; midpoint D B C; midpoint E A C; \
             segment c A B; segment g B E; segment f A D; compare f+g vs c",
            20,
        );
        check_residuals(
            "point A; point B; regular A B C D E 5; line l A B; samehalfplane C D l; \
             segment f A B; segment k A C; compare k vs f",
            10,
        );
        check_residuals(
            "point C; point A; point B; rightangle A C B; segment a B C; segment b A C; \
             segment c A B; circumcenter O A B C; segment R O A; compare a+b+c vs R",
            10,
        );
        check_residuals(
            "point A; point B; point C; segment a B C; segment b A C; segment c A B; equal a b; \
             circumcenter O A B C; segment R O A; incenter I A B C; line l A B; perpfoot F I l; \
             segment r I F; compare R vs r",
            10,
        );
        check_residuals(
            "point A; point B; point C; point D; line l A B; line k C D; intersect X l k; \
             segment x A X; segment y A B; compare x vs y",
            10,
        );
    }

    #[test]
    fn pentagon_ratio_is_golden() {
        let prog = parse_construction(
            "point A; point B; regular A B C D E 5; segment f A B; segment k A C; compare k vs f",
        )
        .unwrap();
        let fig = instantiate(&prog, &mut StdRng::seed_from_u64(1), false).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((fig.ratio().unwrap().to_f64() - phi).abs() < 1e-12);
    }
}
