//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are identified by name. A [`Monomial`] keeps its factors sorted
//! by name with no zero exponents, and a [`Polynomial`] never stores a zero
//! coefficient, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// A power product of named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    /// Builds a monomial from arbitrary `(name, exponent)` pairs, merging
    /// repeated names and dropping zero exponents.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v.into()).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0
            .binary_search_by(|(v, _)| v.as_str().cmp(var))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            other
                .0
                .iter()
                .map(|(v, e)| (v.clone(), e - self.exponent(v))),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            let slot = map.entry(v.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Monomial(map.into_iter().collect())
    }

    /// Removes `var`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, var: &str) -> (u32, Monomial) {
        let e = self.exponent(var);
        let rest = Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect());
        (e, rest)
    }

    fn render(&self) -> String {
        self.0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Display order: lexicographic with variables compared by name (the
/// alphabetically smaller name is more significant), constant term last.
pub fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (x, y) = (a.factors(), b.factors());
    let (mut i, mut j) = (0, 0);
    loop {
        match (x.get(i), y.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(name))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Collects `self` as a polynomial in `var`: index `k` holds the
    /// coefficient of `var^k`.
    pub fn coefficients_in(&self, var: &str) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn substitute(&self, var: &str, replacement: &Polynomial) -> Polynomial {
        if !self.contains_var(var) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        // Horner in the replacement.
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * replacement) + c;
        }
        acc
    }

    pub fn substitute_all(&self, values: &BTreeMap<String, Polynomial>) -> Polynomial {
        values
            .iter()
            .fold(self.clone(), |acc, (v, r)| acc.substitute(v, r))
    }

    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = values.get(v)?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Integer coefficients with unit content and a positive display-leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
        let lead_sign = self.display_leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mut factor = Rational::new(lcm, g);
        if lead_sign {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn monic_display(&self) -> Polynomial {
        match self.display_leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn display_leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| display_cmp(a.0, b.0))
    }

    /// Terms sorted in display order (highest first).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| display_cmp(b.0, a.0));
        v
    }

    /// Linear coefficient of `var` when the polynomial is affine in it with a
    /// constant coefficient: returns `(a, rest)` with `self = a*var + rest`.
    pub fn linear_in(&self, var: &str) -> Option<(Polynomial, Polynomial)> {
        if self.degree_in(var) != 1 {
            return None;
        }
        let mut c = self.coefficients_in(var);
        let rest = c.remove(0);
        Some((c.remove(0), rest))
    }
}

pub(crate) fn render_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text rendering: `2*v7-v5-v3`, `-v12^2+v8^2+v9^2-2*v9+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            if m.is_one() {
                out.push_str(&render_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&m.render());
            } else {
                out.push_str(&render_rational(&abs));
                out.push('*');
                out.push_str(&m.render());
            }
        }
        f.write_str(&out)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Polynomial {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}

/// Exact substitution `var <- replacement`.
pub fn substitute(f: &Polynomial, var: &str, replacement: &Polynomial) -> Polynomial {
    f.substitute(var, replacement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x+1") * &p("x-1"), p("x^2-1"));
    }

    #[test]
    fn cancellation_leaves_canonical_form() {
        let s = &p("2*v7-v5-v3") + &p("v5+v3");
        assert_eq!(s, p("2*v7"));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn zero_absorbs() {
        let q = p("3*x^2*y-y+7/2");
        assert!((&Polynomial::zero() * &q).is_zero());
    }

    #[test]
    fn renders_in_log_style() {
        for s in [
            "-v12^2+v8^2+v9^2-2*v9+1",
            "-v13^2+v8^2+v9^2+v9+1/4",
            "2*v14*v8-1",
            "v12+v13-w1",
            "-m+w1",
            "v10^2-v12^2+v9^2-2*v9+1",
            "-2*v7+2*v9+1",
        ] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn substitution_examples() {
        assert!(substitute(&p("-v5+2*v7-1"), "v5", &p("2*v7-1")).is_zero());
        assert_eq!(substitute(&p("x^2"), "x", &p("y+1")), p("y^2+2*y+1"));
        let f = p("x^3*y-2*x+5");
        assert_eq!(substitute(&f, "x", &p("x")), f);
    }

    #[test]
    fn linear_split() {
        let (a, rest) = p("-2*v7+2*v9+1").linear_in("v7").unwrap();
        assert_eq!(a, p("-2"));
        assert_eq!(rest, p("2*v9+1"));
        assert!(p("v7^2+v7").linear_in("v7").is_none());
    }
}
