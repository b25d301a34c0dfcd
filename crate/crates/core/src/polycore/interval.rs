//! Closed intervals with exact rational endpoints, and interval evaluation of
//! polynomials with square-root defined variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Interval::new(Rational::from_integer(lo.into()), Rational::from_integer(hi.into()))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then(|| Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        o.recip().map(|r| self.mul(&r))
    }

    /// Integer power, tight for even exponents over intervals straddling 0.
    pub fn powi(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if self.lo.is_negative() && self.hi.is_positive() {
            Interval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        } else if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Enclosure of the square root over the nonnegative part, each endpoint
    /// within `precision` of the true value. `None` if entirely negative.
    pub fn sqrt(&self, precision: &Rational) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_positive() {
            sqrt_bounds(&self.lo, precision).0
        } else {
            Rational::zero()
        };
        let hi = sqrt_bounds(&self.hi, precision).1;
        Some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rational `(lo, hi)` with `lo^2 <= x <= hi^2` and `hi - lo <= precision`.
/// Exact squares of rationals come back as a degenerate pair.
pub fn sqrt_bounds(x: &Rational, precision: &Rational) -> (Rational, Rational) {
    assert!(!x.is_negative());
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        let r = Rational::new(rn, rd);
        return (r.clone(), r);
    }
    // Smallest k with 2^-k <= precision.
    let mut k: u32 = 0;
    let mut step = Rational::one();
    while &step > precision {
        step /= Rational::from_integer(2.into());
        k += 1;
    }
    let scale = BigInt::one() << (2 * k);
    let scaled = (x * Rational::from_integer(scale)).floor().to_integer();
    let s = scaled.sqrt();
    let denom = BigInt::one() << k;
    let lo = Rational::new(s.clone(), denom.clone());
    let hi = Rational::new(s + 1, denom);
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable {0} has no assignment")]
    Unassigned(String),
    #[error("radicand of {0} is entirely negative")]
    NegativeRadicand(String),
    #[error("square-root definitions of {0} are cyclic")]
    CyclicDefinition(String),
}

/// A square-root defined variable: `var = sqrt(radicand)` enclosed to `precision`.
#[derive(Clone, Debug)]
pub struct SqrtDef {
    pub radicand: Polynomial,
    pub precision: Rational,
}

/// Default enclosure width for square roots: 2^-32.
pub fn default_sqrt_precision() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 32)
}

/// Interval evaluation of `f`. Variables come from `assignment` or, failing
/// that, from `sqrt_defs` (which may refer to further assigned or
/// sqrt-defined variables).
pub fn eval_interval(
    f: &Polynomial,
    assignment: &BTreeMap<String, Interval>,
    sqrt_defs: &BTreeMap<String, SqrtDef>,
) -> Result<Interval, EvalError> {
    let mut env = assignment.clone();
    let mut visiting = Vec::new();
    for v in f.vars() {
        resolve(&v, &mut env, sqrt_defs, &mut visiting)?;
    }
    Ok(eval_with(f, &env))
}

fn resolve(
    v: &str,
    env: &mut BTreeMap<String, Interval>,
    defs: &BTreeMap<String, SqrtDef>,
    visiting: &mut Vec<String>,
) -> Result<(), EvalError> {
    if env.contains_key(v) {
        return Ok(());
    }
    let def = defs
        .get(v)
        .ok_or_else(|| EvalError::Unassigned(v.to_string()))?;
    if visiting.iter().any(|x| x == v) {
        return Err(EvalError::CyclicDefinition(v.to_string()));
    }
    visiting.push(v.to_string());
    for w in def.radicand.vars() {
        resolve(&w, env, defs, visiting)?;
    }
    visiting.pop();
    let rad = eval_with(&def.radicand, env);
    let root = rad
        .sqrt(&def.precision)
        .ok_or_else(|| EvalError::NegativeRadicand(v.to_string()))?;
    env.insert(v.to_string(), root);
    Ok(())
}

/// Term-wise natural interval extension; every variable must be in `env`.
pub fn eval_with(f: &Polynomial, env: &BTreeMap<String, Interval>) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for (m, c) in f.terms() {
        let mut t = Interval::point(c.clone());
        for (v, e) in m.factors() {
            t = t.mul(&env[v].powi(*e));
        }
        acc = acc.add(&t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn square_over_straddling_interval() {
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), Interval::from_ints(-1, 2));
        let out = eval_interval(&parse_poly("x^2").unwrap(), &a, &BTreeMap::new()).unwrap();
        assert_eq!(out, Interval::from_ints(0, 4));
    }

    #[test]
    fn constant_needs_no_assignment() {
        let out = eval_interval(&Polynomial::int(3), &BTreeMap::new(), &BTreeMap::new()).unwrap();
        assert_eq!(out, Interval::from_ints(3, 3));
    }

    #[test]
    fn sqrt_defined_length() {
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), Interval::from_ints(3, 3));
        let eps = r(1, 1 << 20);
        let mut defs = BTreeMap::new();
        defs.insert(
            "l".to_string(),
            SqrtDef {
                radicand: parse_poly("x^2").unwrap(),
                precision: eps.clone(),
            },
        );
        let out = eval_interval(&parse_poly("l").unwrap(), &a, &defs).unwrap();
        assert!(out.contains(&r(3, 1)));
        assert!(out.width() <= eps);
    }

    #[test]
    fn sqrt_of_irrational_is_tight() {
        let eps = r(1, 1 << 30);
        let (lo, hi) = sqrt_bounds(&r(2, 1), &eps);
        assert!(&lo * &lo <= r(2, 1) && r(2, 1) <= &hi * &hi);
        assert!(&hi - &lo <= eps);
    }

    #[test]
    fn negative_radicand_is_reported() {
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), Interval::from_ints(1, 2));
        let mut defs = BTreeMap::new();
        defs.insert(
            "l".to_string(),
            SqrtDef {
                radicand: parse_poly("-x").unwrap(),
                precision: default_sqrt_precision(),
            },
        );
        let err = eval_interval(&parse_poly("l+1").unwrap(), &a, &defs).unwrap_err();
        assert_eq!(err, EvalError::NegativeRadicand("l".into()));
    }

    #[test]
    fn unassigned_variable() {
        let err =
            eval_interval(&parse_poly("y").unwrap(), &BTreeMap::new(), &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, EvalError::Unassigned(_)));
    }
}
