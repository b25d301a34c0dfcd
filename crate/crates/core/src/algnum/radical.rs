//! Closed forms with nested square roots for algebraic numbers of degree
//! at most two, and for roots of biquadratic quartics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::number::AlgebraicNumber;
use crate::polycore::{render_rational, Interval, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadicalForm {
    Rat(Rational),
    Sqrt(Box<RadicalForm>),
    Neg(Box<RadicalForm>),
    Add(Box<RadicalForm>, Box<RadicalForm>),
    Sub(Box<RadicalForm>, Box<RadicalForm>),
    Mul(Box<RadicalForm>, Box<RadicalForm>),
    Div(Box<RadicalForm>, Box<RadicalForm>),
}

use RadicalForm::*;

fn b(r: RadicalForm) -> Box<RadicalForm> {
    Box::new(r)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl RadicalForm {
    /// Nesting depth of square roots.
    pub fn sqrt_depth(&self) -> usize {
        match self {
            Rat(_) => 0,
            Sqrt(x) => 1 + x.sqrt_depth(),
            Neg(x) => x.sqrt_depth(),
            Add(x, y) | Sub(x, y) | Mul(x, y) | Div(x, y) => x.sqrt_depth().max(y.sqrt_depth()),
        }
    }

    /// Interval enclosure; square roots are bounded to within `prec`.
    pub fn eval_interval(&self, prec: &Rational) -> Option<Interval> {
        Some(match self {
            Rat(r) => Interval::point(r.clone()),
            Sqrt(x) => {
                let i = x.eval_interval(prec)?;
                if i.lo().is_negative() {
                    return None;
                }
                i.sqrt(prec)?
            }
            Neg(x) => x.eval_interval(prec)?.neg(),
            Add(x, y) => x.eval_interval(prec)?.add(&y.eval_interval(prec)?),
            Sub(x, y) => x.eval_interval(prec)?.sub(&y.eval_interval(prec)?),
            Mul(x, y) => x.eval_interval(prec)?.mul(&y.eval_interval(prec)?),
            Div(x, y) => x.eval_interval(prec)?.div(&y.eval_interval(prec)?)?,
        })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            Sqrt(x) => x.to_f64().sqrt(),
            Neg(x) => -x.to_f64(),
            Add(x, y) => x.to_f64() + y.to_f64(),
            Sub(x, y) => x.to_f64() - y.to_f64(),
            Mul(x, y) => x.to_f64() * y.to_f64(),
            Div(x, y) => x.to_f64() / y.to_f64(),
        }
    }

    fn is_sum(&self) -> bool {
        matches!(self, Add(..) | Sub(..))
            || matches!(self, Rat(r) if r.is_negative())
            || matches!(self, Neg(_))
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Sqrt(_)) || matches!(self, Rat(r) if r.is_integer() && !r.is_negative())
    }

    /// ASCII rendering: `sqrt(...)`, `+`, `-`, `*`, `/`.
    pub fn to_ascii(&self) -> String {
        self.render(false)
    }

    /// Rendering with `√`.
    pub fn to_unicode(&self) -> String {
        self.render(true)
    }

    fn render(&self, uni: bool) -> String {
        let paren = |x: &RadicalForm| {
            if x.is_sum() {
                format!("({})", x.render(uni))
            } else {
                x.render(uni)
            }
        };
        match self {
            Rat(r) => render_rational(r),
            Sqrt(x) => {
                if uni {
                    if x.is_atomic() {
                        format!("√{}", x.render(uni))
                    } else {
                        format!("√({})", x.render(uni))
                    }
                } else {
                    format!("sqrt({})", x.render(uni))
                }
            }
            Neg(x) => format!("-{}", paren(x)),
            Add(x, y) => {
                let r = y.render(uni);
                if r.starts_with('-') {
                    format!("{}+({})", x.render(uni), r)
                } else {
                    format!("{}+{}", x.render(uni), r)
                }
            }
            Sub(x, y) => format!("{}-{}", x.render(uni), paren(y)),
            Mul(x, y) => {
                let l = match &**x {
                    Rat(r) if !r.is_integer() => format!("({})", x.render(uni)),
                    _ => paren(x),
                };
                if uni && matches!(**y, Sqrt(_)) {
                    format!("{}{}", l, y.render(uni))
                } else {
                    format!("{}*{}", l, paren(y))
                }
            }
            Div(x, y) => {
                let d = if y.is_atomic() {
                    y.render(uni)
                } else {
                    format!("({})", y.render(uni))
                };
                let n = if x.is_sum() || matches!(**x, Div(..)) {
                    format!("({})", x.render(uni))
                } else {
                    x.render(uni)
                };
                format!("{n}/{d}")
            }
        }
    }
}

impl fmt::Display for RadicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// `k * sqrt(s)` with `s` a squarefree positive integer.
fn simplify_sqrt(r: &Rational) -> (Rational, BigInt) {
    assert!(r.is_positive());
    let n = r.numer() * r.denom();
    let mut rest = n;
    let mut f = BigInt::one();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &p * &p <= rest && p <= limit {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    let sq = rest.sqrt();
    if &sq * &sq == rest {
        f *= sq;
    } else {
        s *= rest;
    }
    (Rational::new(f, r.denom().clone()), s)
}

/// `a + b*sqrt(c)`.
#[derive(Clone, Debug)]
struct Surd {
    a: Rational,
    b: Rational,
    c: BigInt,
}

impl Surd {
    fn sqrt_of(r: &Rational, sign: i64) -> Surd {
        let (k, s) = simplify_sqrt(r);
        if s.is_one() {
            Surd {
                a: k * int(sign),
                b: Rational::zero(),
                c: s,
            }
        } else {
            Surd {
                a: Rational::zero(),
                b: k * int(sign),
                c: s,
            }
        }
    }

    fn coef_sqrt(k: &Rational, c: &BigInt) -> RadicalForm {
        let root = Sqrt(b(Rat(Rational::from_integer(c.clone()))));
        if k.is_one() {
            root
        } else {
            Mul(b(Rat(k.clone())), b(root))
        }
    }

    /// Plain form `a+b*sqrt(c)`, or `b*sqrt(c)-|a|` when `a < 0`.
    fn plain(&self) -> RadicalForm {
        if self.b.is_zero() || self.c.is_one() {
            return Rat(&self.a + &self.b);
        }
        let bs = self.b.abs();
        let term = Surd::coef_sqrt(&bs, &self.c);
        let term = if self.b.is_negative() {
            Neg(b(term))
        } else {
            term
        };
        if self.a.is_zero() {
            return term;
        }
        match (self.a.is_negative(), self.b.is_negative()) {
            (false, false) => Add(b(Rat(self.a.clone())), b(term)),
            (false, true) => Sub(b(Rat(self.a.clone())), b(Surd::coef_sqrt(&bs, &self.c))),
            (true, false) => Sub(b(term), b(Rat(-self.a.clone()))),
            (true, true) => Neg(b(Add(
                b(Rat(-self.a.clone())),
                b(Surd::coef_sqrt(&bs, &self.c)),
            ))),
        }
    }

    /// Over a common denominator: `(1+sqrt(5))/2`.
    fn over_common_denominator(&self) -> RadicalForm {
        let den = num_integer::lcm(self.a.denom().clone(), self.b.denom().clone());
        if den.is_one() {
            return self.plain();
        }
        let d = Rational::from_integer(den.clone());
        let num = Surd {
            a: &self.a * &d,
            b: &self.b * &d,
            c: self.c.clone(),
        };
        if num.a.is_zero() && num.b.is_negative() {
            let pos = Surd {
                a: Rational::zero(),
                b: -num.b,
                c: num.c,
            };
            return Neg(b(Div(b(pos.plain()), b(Rat(d)))));
        }
        Div(b(num.plain()), b(Rat(d)))
    }
}

/// `sqrt(A + B*sqrt(C))`, denested when possible.
fn sqrt_of_surd(s: &Surd) -> RadicalForm {
    if s.b.is_zero() || s.c.is_one() {
        return Surd::sqrt_of(&(&s.a + &s.b), 1).over_common_denominator();
    }
    let c = Rational::from_integer(s.c.clone());
    let disc = &s.a * &s.a - &s.b * &s.b * &c;
    if !disc.is_negative() {
        let (k, sq) = simplify_sqrt_or_zero(&disc);
        if sq.is_one() {
            let d = k;
            let x = (&s.a + &d) / int(2);
            let y = (&s.a - &d) / int(2);
            if x.is_positive() && y.is_positive() {
                let sign = if s.b.is_negative() { -1 } else { 1 };
                let sx = Surd::sqrt_of(&x, 1);
                let sy = Surd::sqrt_of(&y, sign);
                let merged = if sx.c == sy.c || sx.b.is_zero() || sy.b.is_zero() {
                    let c = if sx.b.is_zero() { sy.c.clone() } else { sx.c.clone() };
                    Some(Surd {
                        a: &sx.a + &sy.a,
                        b: &sx.b + &sy.b,
                        c,
                    })
                } else {
                    None
                };
                return match merged {
                    Some(m) => m.over_common_denominator(),
                    None => {
                        let l = sx.plain();
                        if sign < 0 {
                            Sub(b(l), b(Surd::coef_sqrt(&sy.b.abs(), &sy.c)))
                        } else {
                            Add(b(l), b(sy.plain()))
                        }
                    }
                };
            }
        }
    }
    Sqrt(b(s.plain()))
}

fn simplify_sqrt_or_zero(r: &Rational) -> (Rational, BigInt) {
    if r.is_zero() {
        (Rational::zero(), BigInt::one())
    } else {
        simplify_sqrt(r)
    }
}

fn negate(f: RadicalForm) -> RadicalForm {
    match f {
        Rat(r) => Rat(-r),
        Neg(x) => *x,
        Sub(x, y) => match *x {
            Rat(r) if r.is_zero() => *y,
            x => Sub(y, b(x)),
        },
        other => Neg(b(other)),
    }
}

/// Picks the candidate whose enclosure is the only one meeting `alpha`'s.
fn select(alpha: &AlgebraicNumber, cands: Vec<RadicalForm>) -> Option<RadicalForm> {
    let mut w = Rational::new(1.into(), 1024.into());
    for _ in 0..40 {
        let a = alpha.refine(&w).enclosure();
        let hits: Vec<&RadicalForm> = cands
            .iter()
            .filter(|c| c.eval_interval(&w).is_some_and(|i| i.overlaps(&a)))
            .collect();
        match hits.len() {
            0 => return None,
            1 => return Some(hits[0].clone()),
            _ => w = &w * &w,
        }
    }
    None
}

/// Closed form for `alpha` when its defining polynomial has degree at most
/// two, or is a biquadratic quartic.
pub fn to_radical(alpha: &AlgebraicNumber) -> Option<RadicalForm> {
    if let Some(r) = alpha.as_rational() {
        return Some(Rat(r));
    }
    let p = alpha.defining_poly().monic();
    let c = p.coeffs();
    match p.degree() {
        2 => {
            let (q, pp) = (&c[0], &c[1]);
            let disc = pp * pp - q * int(4);
            if !disc.is_positive() {
                return None;
            }
            let (k, s) = simplify_sqrt(&disc);
            let a = -pp / int(2);
            let cands = [1, -1]
                .iter()
                .map(|sg| {
                    Surd {
                        a: a.clone(),
                        b: &k * int(*sg) / int(2),
                        c: s.clone(),
                    }
                    .over_common_denominator()
                })
                .collect();
            select(alpha, cands)
        }
        4 if c[1].is_zero() && c[3].is_zero() => {
            let (q, pp) = (&c[0], &c[2]);
            let disc = pp * pp - q * int(4);
            if disc.is_negative() {
                return None;
            }
            let mut cands = Vec::new();
            let (k, s) = simplify_sqrt_or_zero(&disc);
            for sg in [1, -1] {
                let y = Surd {
                    a: -pp / int(2),
                    b: &k * int(sg) / int(2),
                    c: s.clone(),
                };
                let y = if s.is_one() {
                    Surd {
                        a: &y.a + &y.b,
                        b: Rational::zero(),
                        c: s.clone(),
                    }
                } else {
                    y
                };
                let root = sqrt_of_surd(&y);
                if root.eval_interval(&Rational::new(1.into(), 1024.into())).is_none() {
                    continue;
                }
                cands.push(negate(root.clone()));
                cands.push(root);
            }
            select(alpha, cands)
        }
        _ => None,
    }
}
