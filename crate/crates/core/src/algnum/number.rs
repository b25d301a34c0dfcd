//! Real algebraic numbers by isolating interval, and real root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{sturm_count_in, sturm_sequence, UPoly};
use crate::polycore::{Interval, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
}

/// A real root of `poly` (squarefree) inside `[lo, hi]`, the only root there.
/// Rational values have `lo == hi`.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicNumber {
            poly: UPoly::linear_root(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    pub(crate) fn from_parts(poly: UPoly, lo: Rational, hi: Rational) -> Self {
        AlgebraicNumber { poly, lo, hi }
    }

    /// Defining polynomial in variable `var`.
    pub fn minpoly(&self, var: &str) -> Polynomial {
        self.poly.to_polynomial(var)
    }

    pub fn defining_poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn enclosure(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        None
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    fn bisect(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) * half();
        let sm = self.poly.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if sm == self.poly.sign_at(&self.hi) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Narrows the isolating interval to width at most `width`.
    pub fn refine(&self, width: &Rational) -> AlgebraicNumber {
        let mut a = self.clone();
        while &(&a.hi - &a.lo) > width {
            a.bisect();
        }
        a
    }

    pub fn sign(&self) -> i32 {
        let mut a = self.clone();
        loop {
            if a.lo.is_positive() {
                return 1;
            }
            if a.hi.is_negative() {
                return -1;
            }
            if a.lo.is_zero() && a.hi.is_zero() {
                return 0;
            }
            if a.poly.sign_at(&Rational::zero()) == 0 {
                // 0 is a root inside the interval, and the only one.
                return 0;
            }
            a.bisect();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.refine(&Rational::new(1.into(), BigInt::one() << 60));
        a.lo.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &AlgebraicNumber) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        let g = a.poly.gcd(&b.poly);
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if g.degree() > 0 {
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                let seq = sturm_sequence(&g);
                let n = sturm_count_in(&seq, &lo, &hi) + usize::from(g.sign_at(&lo) == 0);
                if n > 0 {
                    // A common root lies in both isolating intervals.
                    return Ordering::Equal;
                }
            }
            a.bisect();
            b.bisect();
        }
    }

    /// Correctly rounded decimal with `digits` significant digits.
    pub fn approx_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let mut a = self.clone();
        if a.sign() == 0 {
            return if digits > 1 {
                format!("0.{}", "0".repeat(digits - 1))
            } else {
                "0".into()
            };
        }
        let neg = a.sign() < 0;
        let ten = Rational::from_integer(10.into());
        loop {
            let (lo, hi) = if neg {
                (-a.hi.clone(), -a.lo.clone())
            } else {
                (a.lo.clone(), a.hi.clone())
            };
            if lo.is_positive() {
                let (elo, ehi) = (exponent10(&lo), exponent10(&hi));
                if elo == ehi {
                    let e = elo;
                    let shift = digits as i64 - 1 - e;
                    let s = pow10(shift, &ten);
                    let rlo = (&lo * &s + half()).floor().to_integer();
                    let rhi = (&hi * &s + half()).floor().to_integer();
                    if rlo == rhi {
                        return format_digits(neg, rlo, e, digits);
                    }
                }
            }
            let w = (&a.hi - &a.lo) * half();
            a = a.refine(&w);
            if a.is_rational() {
                let r = a.lo.abs();
                let e = exponent10(&r);
                let s = pow10(digits as i64 - 1 - e, &ten);
                let n = (&r * &s + half()).floor().to_integer();
                return format_digits(neg, n, e, digits);
            }
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match super::to_radical(self) {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.approx_decimal(12)),
        }
    }
}

fn pow10(k: i64, ten: &Rational) -> Rational {
    if k >= 0 {
        num_traits::pow(ten.clone(), k as usize)
    } else {
        num_traits::pow(ten.clone(), (-k) as usize).recip()
    }
}

/// floor(log10 x) for positive x.
fn exponent10(x: &Rational) -> i64 {
    let ten = Rational::from_integer(10.into());
    let mut e = (x.numer().bits() as i64 - x.denom().bits() as i64) * 3 / 10;
    loop {
        let p = pow10(e, &ten);
        if &p > x {
            e -= 1;
        } else if &(p * &ten) <= x {
            e += 1;
        } else {
            return e;
        }
    }
}

fn format_digits(neg: bool, mut n: BigInt, mut e: i64, digits: usize) -> String {
    let mut s = n.to_string();
    if s.len() > digits {
        // rounding carried into a new digit
        n /= 10;
        e += 1;
        s = n.to_string();
    }
    let body = if e >= 0 {
        let int_len = (e + 1) as usize;
        if int_len >= s.len() {
            format!("{}{}", s, "0".repeat(int_len - s.len()))
        } else {
            format!("{}.{}", &s[..int_len], &s[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > 40 {
        return None;
    }
    let n = n.to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Exact rational roots of a polynomial with integer coefficients.
fn rational_roots(p: &UPoly) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut q = p.clone();
    if q.degree() == 0 {
        return out;
    }
    if q.coeffs()[0].is_zero() {
        out.push(Rational::zero());
        q = q.div_rem(&UPoly::linear_root(&Rational::zero())).0;
    }
    if q.degree() == 0 {
        return out;
    }
    let ints = q.primitive_integer();
    let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return out;
    };
    let mut cands: Vec<Rational> = Vec::new();
    for a in &num {
        for b in &den {
            if a.gcd(b).is_one() {
                let r = Rational::new(a.clone(), b.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
    }
    for r in cands {
        if q.degree() > 0 && q.eval(&r).is_zero() {
            out.push(r.clone());
            q = q.div_rem(&UPoly::linear_root(&r)).0;
        }
    }
    out
}

fn isolate(seq: &[UPoly], lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
    let n = sturm_count_in(seq, &lo, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) * half();
    isolate(seq, lo, mid.clone(), out);
    isolate(seq, mid, hi, out);
}

/// All distinct real roots of a univariate polynomial, ascending.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<AlgebraicNumber>, AlgError> {
    let (_, u) = UPoly::from_polynomial(p).ok_or(AlgError::NotUnivariate)?;
    isolate_upoly(&u)
}

pub fn isolate_upoly(u: &UPoly) -> Result<Vec<AlgebraicNumber>, AlgError> {
    if u.is_zero() {
        return Err(AlgError::ZeroPolynomial);
    }
    if u.degree() == 0 {
        return Ok(vec![]);
    }
    let sf = u.squarefree();
    let rats = rational_roots(&sf);
    let mut rest = sf.clone();
    let mut out: Vec<AlgebraicNumber> = Vec::new();
    for r in &rats {
        rest = rest.div_rem(&UPoly::linear_root(r)).0;
        out.push(AlgebraicNumber::from_rational(r.clone()));
    }
    let rest = rest.monic();
    if rest.degree() > 0 {
        let seq = sturm_sequence(&rest);
        let b = rest.root_bound();
        let mut ivs = Vec::new();
        isolate(&seq, -b.clone(), b, &mut ivs);
        for (lo, hi) in ivs {
            let mut a = AlgebraicNumber::from_parts(rest.clone(), lo, hi);
            // (lo, hi] is half-open; the root is never a rational endpoint
            // here, so the closed interval isolates it as well.
            while rats.iter().any(|r| a.lo <= *r && *r <= a.hi) {
                a.bisect();
            }
            out.push(a);
        }
    }
    out.sort_by(|a, b| a.cmp_value(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;
    use proptest::prelude::*;

    fn roots(s: &str) -> Vec<AlgebraicNumber> {
        isolate_real_roots(&parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn rational_and_irrational_roots() {
        let r = roots("x^3-2*x");
        assert_eq!(r.len(), 3);
        assert_eq!(r[1].as_rational(), Some(Rational::zero()));
        assert_eq!(r[2].approx_decimal(6), "1.41421");
        assert_eq!(r[0].approx_decimal(6), "-1.41421");
        let r = roots("4*x^2-9");
        assert_eq!(r[1].approx_decimal(3), "1.50");
    }

    #[test]
    fn decimal_rounding() {
        let r = roots("x^2+x-1");
        assert_eq!(r[1].approx_decimal(5), "0.61803");
        let r = roots("x-99999/100");
        assert_eq!(r[0].approx_decimal(3), "1000");
        let r = roots("x^2-10");
        assert_eq!(r[1].approx_decimal(1), "3");
    }

    #[test]
    fn refine_is_idempotent() {
        let a = &roots("x^2-2")[1];
        let w = Rational::new(1.into(), 1000.into());
        let b = a.refine(&w);
        let c = b.refine(&w);
        assert_eq!(b.enclosure(), c.enclosure());
        assert!(b.enclosure().width() <= w);
    }

    #[test]
    fn comparisons() {
        let a = &roots("x^2-2")[1];
        let b = &roots("x^4-4")[1];
        assert_eq!(a.cmp_value(b), Ordering::Equal);
        let c = AlgebraicNumber::from_rational(Rational::new(3.into(), 2.into()));
        assert_eq!(a.cmp_value(&c), Ordering::Less);
    }

    #[test]
    fn errors() {
        assert_eq!(
            isolate_real_roots(&Polynomial::zero()).unwrap_err(),
            AlgError::ZeroPolynomial
        );
        assert!(isolate_real_roots(&parse_poly("x*y").unwrap()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn root_count_matches_sturm(c in prop::collection::vec(-20i64..20, 2..8)) {
            let u = UPoly::from_ints(&c).squarefree();
            prop_assume!(u.degree() >= 1);
            let r = isolate_upoly(&u).unwrap();
            prop_assert_eq!(r.len(), super::super::upoly::sturm_count(&u));
            for w in r.windows(2) {
                prop_assert_eq!(w[0].cmp_value(&w[1]), Ordering::Less);
            }
            for a in &r {
                let e = a.enclosure();
                let sl = u.sign_at(e.lo());
                let sh = u.sign_at(e.hi());
                prop_assert!(a.is_rational() || sl * sh < 0);
            }
        }
    }
}
