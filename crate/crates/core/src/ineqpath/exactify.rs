//! Recognizes simple exact constants inside a narrow enclosure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive};

use crate::algnum::{isolate_real_roots, AlgebraicNumber};
use crate::polycore::{Polynomial, Rational};

/// Rational in `[lo, hi]` with the smallest denominator (Stern-Brocot).
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inner = simplest_between(&hi_f.recip(), &lo_f.recip());
    fl + inner.recip()
}

fn rational_bits(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Denominator cap scaled with the enclosure width so that a hit is
/// unlikely to be accidental.
fn den_cap(width: f64) -> i64 {
    let c = (1.0 / (100.0 * width.max(1e-30))).sqrt();
    c.min(1e4).max(1.0) as i64
}

fn height_cap(width: f64) -> i64 {
    let c = (1e-2 / width.max(1e-30)).cbrt();
    c.min(40.0).max(1.0) as i64
}

/// Tries a small rational, then a root of a small integer quadratic.
pub fn exactify(lo: f64, hi: f64) -> Option<AlgebraicNumber> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return None;
    }
    let width = hi - lo;
    if width > 1e-4 {
        return None;
    }
    let (rl, rh) = (rational_bits(lo)?, rational_bits(hi)?);
    let r = simplest_between(&rl, &rh);
    if r.denom().to_i64().is_some_and(|d| d <= den_cap(width)) {
        return Some(AlgebraicNumber::from_rational(r));
    }
    let h = height_cap(width);
    for height in 1..=h {
        for a in 1..=height {
            for b in -height..=height {
                for c in -height..=height {
                    if a.abs().max(b.abs()).max(c.abs()) != height {
                        continue;
                    }
                    if a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    let d = b * b - 4 * a * c;
                    if d <= 0 {
                        continue;
                    }
                    let sd = (d as f64).sqrt();
                    if (sd.round() as i64).pow(2) == d {
                        continue;
                    }
                    for sgn in [-1.0, 1.0] {
                        let x = (-(b as f64) + sgn * sd) / (2.0 * a as f64);
                        let slack = 1e-12 * x.abs().max(1.0);
                        if x >= lo - slack && x <= hi + slack {
                            return quadratic_root(a, b, c, x);
                        }
                    }
                }
            }
        }
    }
    None
}

fn quadratic_root(a: i64, b: i64, c: i64, x: f64) -> Option<AlgebraicNumber> {
    let m = Polynomial::var("m");
    let p = &(&m.pow(2).scale(&Rational::from_integer(BigInt::from(a)))
        + &m.scale(&Rational::from_integer(BigInt::from(b))))
        + &Polynomial::constant(Rational::from_integer(BigInt::from(c)));
    let roots = isolate_real_roots(&p).ok()?;
    roots
        .into_iter()
        .min_by(|u, v| (u.to_f64() - x).abs().total_cmp(&(v.to_f64() - x).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::to_radical;

    #[test]
    fn rationals() {
        let x = exactify(1.4999999, 1.5000001).unwrap();
        assert_eq!(x.as_rational().unwrap(), Rational::new(3.into(), 2.into()));
        assert_eq!(exactify(2.9999995, 3.0000005).unwrap().to_string(), "3");
        assert_eq!(exactify(0.4999995, 0.5000005).unwrap().to_string(), "1/2");
    }

    #[test]
    fn quadratic() {
        let v = 2.0 + 2.0 * 2f64.sqrt();
        let x = exactify(v - 5e-7, v + 5e-7).unwrap();
        assert_eq!(to_radical(&x).unwrap().to_ascii(), "2+2*sqrt(2)");
    }

    #[test]
    fn nothing() {
        let e = std::f64::consts::E.powf(std::f64::consts::PI);
        assert!(exactify(e - 5e-7, e + 5e-7).is_none());
        assert!(exactify(1.0, 2.0).is_none());
    }
}
