use std::fmt;

use crate::polycore::{render_rational, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    FreePoint(String),
    Midpoint { name: String, p: String, q: String },
    Line { name: String, p: String, q: String },
    Intersect { name: String, l1: String, l2: String },
    PerpFoot { name: String, p: String, line: String },
    Circumcenter { name: String, a: String, b: String, c: String },
    Incenter { name: String, a: String, b: String, c: String },
    /// `names[0]`, `names[1]` exist already; the rest are new vertices.
    Regular { names: Vec<String>, n: u32 },
    Segment { name: String, p: String, q: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Right angle at the middle point.
    RightAngle(String, String, String),
    /// Two segments of equal length.
    Equal(String, String),
    /// Two points strictly on the same side of a line.
    SameHalfPlane(String, String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Step(Step),
    Constraint(Constraint),
}

/// Arithmetic over segment lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomExpr {
    Leaf(String),
    Const(Rational),
    Add(Box<GeomExpr>, Box<GeomExpr>),
    Sub(Box<GeomExpr>, Box<GeomExpr>),
    Mul(Box<GeomExpr>, Box<GeomExpr>),
    Pow(Box<GeomExpr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub lhs: GeomExpr,
    pub rhs: GeomExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstructionProgram {
    /// Steps and constraints in source order.
    pub items: Vec<Item>,
    pub statement: Option<Statement>,
}

impl ConstructionProgram {
    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.items.iter().filter_map(|i| match i {
            Item::Step(s) => Some(s),
            _ => None,
        })
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.items.iter().filter_map(|i| match i {
            Item::Constraint(c) => Some(c),
            _ => None,
        })
    }

    pub fn free_points(&self) -> Vec<&str> {
        self.steps()
            .filter_map(|s| match s {
                Step::FreePoint(n) => Some(n.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn segment(&self, name: &str) -> Option<(&str, &str)> {
        self.steps().find_map(|s| match s {
            Step::Segment { name: n, p, q } if n == name => Some((p.as_str(), q.as_str())),
            _ => None,
        })
    }

    pub fn line(&self, name: &str) -> Option<(&str, &str)> {
        self.steps().find_map(|s| match s {
            Step::Line { name: n, p, q } if n == name => Some((p.as_str(), q.as_str())),
            _ => None,
        })
    }
}

impl GeomExpr {
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GeomExpr::Leaf(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n)
                }
            }
            GeomExpr::Const(_) => {}
            GeomExpr::Add(a, b) | GeomExpr::Sub(a, b) | GeomExpr::Mul(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            GeomExpr::Pow(a, _) => a.collect(out),
        }
    }

    /// Expands to a polynomial, leaves renamed by `var`.
    pub fn to_poly(&self, var: &dyn Fn(&str) -> String) -> Polynomial {
        match self {
            GeomExpr::Leaf(n) => Polynomial::var(&var(n)),
            GeomExpr::Const(c) => Polynomial::constant(c.clone()),
            GeomExpr::Add(a, b) => &a.to_poly(var) + &b.to_poly(var),
            GeomExpr::Sub(a, b) => &a.to_poly(var) - &b.to_poly(var),
            GeomExpr::Mul(a, b) => &a.to_poly(var) * &b.to_poly(var),
            GeomExpr::Pow(a, e) => a.to_poly(var).pow(*e),
        }
    }

    /// Source-order rendering with leaves renamed by `var`.
    pub fn render_with(&self, var: &dyn Fn(&str) -> String) -> String {
        match self {
            GeomExpr::Leaf(n) => var(n),
            GeomExpr::Const(c) => render_rational(c),
            GeomExpr::Add(a, b) => format!("{}+{}", a.render_with(var), b.render_with(var)),
            GeomExpr::Sub(a, b) => {
                let r = b.render_with(var);
                if b.is_sum() {
                    format!("{}-({r})", a.render_with(var))
                } else {
                    format!("{}-{r}", a.render_with(var))
                }
            }
            GeomExpr::Mul(a, b) => {
                let f = |x: &GeomExpr| {
                    let s = x.render_with(var);
                    if x.is_sum() {
                        format!("({s})")
                    } else {
                        s
                    }
                };
                format!("{}*{}", f(a), f(b))
            }
            GeomExpr::Pow(a, e) => {
                let s = a.render_with(var);
                if a.is_atomic() {
                    format!("{s}^{e}")
                } else {
                    format!("({s})^{e}")
                }
            }
        }
    }

    fn is_sum(&self) -> bool {
        matches!(self, GeomExpr::Add(..) | GeomExpr::Sub(..))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, GeomExpr::Leaf(_)) || matches!(self, GeomExpr::Const(c) if c.is_integer())
    }
}

impl fmt::Display for GeomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|s| s.to_string()))
    }
}
