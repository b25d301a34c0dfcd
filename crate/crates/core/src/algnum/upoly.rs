//! Dense univariate polynomials over the rationals and Sturm sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::polycore::{Monomial, Polynomial, Rational};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|x| Rational::from_integer((*x).into())).collect())
    }

    /// Linear polynomial `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        UPoly::new(vec![-r.clone(), Rational::one()])
    }

    /// Converts a polynomial in at most one variable. Returns the variable
    /// name (if any) alongside.
    pub fn from_polynomial(p: &Polynomial) -> Option<(Option<String>, UPoly)> {
        let vars = p.vars();
        if vars.len() > 1 {
            return None;
        }
        let var = vars.into_iter().next();
        let coeffs = match &var {
            Some(v) => p
                .coefficients_in(v)
                .into_iter()
                .map(|c| c.as_constant().unwrap())
                .collect(),
            None => vec![p.as_constant().unwrap()],
        };
        Some((var, UPoly::new(coeffs)))
    }

    pub fn to_polynomial(&self, var: &str) -> Polynomial {
        Polynomial::from_terms(self.0.iter().enumerate().map(|(k, c)| {
            (Monomial::from_pairs([(var, k as u32)]), c.clone())
        }))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        UPoly::new(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn scale(&self, k: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (UPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let lc = d.lc();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (i, di) in d.0.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    /// Integer coefficients with unit content and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    /// Upper bound on the absolute value of every real root.
    pub fn root_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        seq.push(r.scale(&-Rational::one()));
    }
    seq.pop();
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

pub fn variations_at(seq: &[UPoly], x: &Rational) -> usize {
    variations(seq.iter().map(|p| p.sign_at(x)))
}

fn sign_of(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn variations_at_pos_inf(seq: &[UPoly]) -> usize {
    variations(seq.iter().map(|p| sign_of(&p.lc())))
}

pub fn variations_at_neg_inf(seq: &[UPoly]) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign_of(&p.lc());
        if p.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of `p` (Sturm's theorem).
pub fn sturm_count(p: &UPoly) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    let seq = sturm_sequence(&p.squarefree());
    variations_at_neg_inf(&seq) - variations_at_pos_inf(&seq)
}

/// Distinct roots in the half-open interval `(a, b]`.
pub fn sturm_count_in(seq: &[UPoly], a: &Rational, b: &Rational) -> usize {
    variations_at(seq, a).saturating_sub(variations_at(seq, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = UPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let d = UPoly::from_ints(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, UPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let sq = UPoly::from_ints(&[1, -2, 1]); // (x-1)^2
        assert_eq!(sq.squarefree(), d);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_count(&UPoly::from_ints(&[-2, 0, 1])), 2);
        assert_eq!(sturm_count(&UPoly::from_ints(&[1, 0, 1])), 0);
        assert_eq!(sturm_count(&UPoly::from_ints(&[1, 0, -3, 0, 1])), 4);
        assert_eq!(sturm_count(&UPoly::from_ints(&[0, 0, 0, 1])), 1);
    }
}
