//! Outward-rounded f64 intervals and interval forward-mode derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Iv {
    pub lo: f64,
    pub hi: f64,
}

const ENTIRE: Iv = Iv {
    lo: f64::NEG_INFINITY,
    hi: f64::INFINITY,
};

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Iv {
    pub fn new(lo: f64, hi: f64) -> Iv {
        if lo.is_nan() || hi.is_nan() {
            return ENTIRE;
        }
        Iv { lo, hi }
    }

    pub fn point(x: f64) -> Iv {
        Iv { lo: x, hi: x }
    }

    /// `x` widened by one ulp each way.
    pub fn around(x: f64) -> Iv {
        Iv::new(down(x), up(x))
    }

    pub fn entire() -> Iv {
        ENTIRE
    }

    fn rounded(lo: f64, hi: f64) -> Iv {
        Iv::new(down(lo), up(hi))
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo + (self.hi - self.lo) / 2.0
        } else if self.lo.is_finite() {
            self.lo.max(0.0) * 2.0 + 1.0
        } else if self.hi.is_finite() {
            self.hi.min(0.0) * 2.0 - 1.0
        } else {
            0.0
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn hull(&self, o: &Iv) -> Iv {
        Iv::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    pub fn intersect(&self, o: &Iv) -> Option<Iv> {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        (lo <= hi).then_some(Iv { lo, hi })
    }

    pub fn sqr(&self) -> Iv {
        if self.lo >= 0.0 {
            Iv::rounded(self.lo * self.lo, self.hi * self.hi)
        } else if self.hi <= 0.0 {
            Iv::rounded(self.hi * self.hi, self.lo * self.lo)
        } else {
            let m = self.lo.abs().max(self.hi);
            Iv::new(0.0, up(m * m))
        }
    }

    pub fn powi(&self, e: u32) -> Iv {
        match e {
            0 => Iv::point(1.0),
            1 => *self,
            2 => self.sqr(),
            _ if e % 2 == 0 => self.powi(e / 2).sqr(),
            _ => *self * self.powi(e - 1),
        }
    }

    /// Square root of the nonnegative part; `None` when entirely negative.
    pub fn sqrt(&self) -> Option<Iv> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = self.lo.max(0.0);
        Some(Iv::new(down(lo.sqrt()).max(0.0), up(self.hi.sqrt())))
    }

    pub fn recip(&self) -> Iv {
        if self.contains_zero() {
            return ENTIRE;
        }
        Iv::rounded(1.0 / self.hi, 1.0 / self.lo)
    }
}

impl Add for Iv {
    type Output = Iv;
    fn add(self, o: Iv) -> Iv {
        Iv::rounded(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Iv {
    type Output = Iv;
    fn sub(self, o: Iv) -> Iv {
        Iv::rounded(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Iv {
    type Output = Iv;
    fn neg(self) -> Iv {
        Iv {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

fn mul_end(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Mul for Iv {
    type Output = Iv;
    fn mul(self, o: Iv) -> Iv {
        let c = [
            mul_end(self.lo, o.lo),
            mul_end(self.lo, o.hi),
            mul_end(self.hi, o.lo),
            mul_end(self.hi, o.hi),
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Iv::rounded(lo, hi)
    }
}

impl Div for Iv {
    type Output = Iv;
    fn div(self, o: Iv) -> Iv {
        self * o.recip()
    }
}

/// Value enclosure plus gradient enclosure with respect to the parameters.
#[derive(Clone, Debug)]
pub struct Ad {
    pub v: Iv,
    pub g: Vec<Iv>,
}

impl Ad {
    pub fn constant(x: Iv, n: usize) -> Ad {
        Ad {
            v: x,
            g: vec![Iv::point(0.0); n],
        }
    }

    fn map_g(&self, f: impl Fn(Iv) -> Iv) -> Vec<Iv> {
        self.g.iter().map(|g| f(*g)).collect()
    }

    pub fn add(&self, o: &Ad) -> Ad {
        Ad {
            v: self.v + o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn sub(&self, o: &Ad) -> Ad {
        Ad {
            v: self.v - o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn neg(&self) -> Ad {
        Ad {
            v: -self.v,
            g: self.map_g(|g| -g),
        }
    }

    pub fn mul(&self, o: &Ad) -> Ad {
        Ad {
            v: self.v * o.v,
            g: self
                .g
                .iter()
                .zip(&o.g)
                .map(|(a, b)| *a * o.v + self.v * *b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Iv) -> Ad {
        Ad {
            v: self.v * c,
            g: self.map_g(|g| g * c),
        }
    }

    pub fn powi(&self, e: u32) -> Ad {
        match e {
            0 => Ad::constant(Iv::point(1.0), self.g.len()),
            1 => self.clone(),
            _ => {
                let d = self.v.powi(e - 1) * Iv::point(e as f64);
                Ad {
                    v: self.v.powi(e),
                    g: self.map_g(|g| g * d),
                }
            }
        }
    }

    pub fn div(&self, o: &Ad) -> Ad {
        let q = self.v / o.v;
        let inv = o.v.recip();
        Ad {
            v: q,
            g: self
                .g
                .iter()
                .zip(&o.g)
                .map(|(a, b)| (*a - q * *b) * inv)
                .collect(),
        }
    }

    pub fn sqrt(&self) -> Option<Ad> {
        let v = self.v.sqrt()?;
        let d = if v.lo > 0.0 {
            (v * Iv::point(2.0)).recip()
        } else {
            Iv::entire()
        };
        Some(Ad {
            v,
            g: self.map_g(|g| g * d),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ops_contain_pointwise(a in -10.0f64..10.0, b in -10.0f64..10.0, w in 0.0f64..2.0, t in 0.0f64..1.0) {
            let x = Iv::new(a, a + w);
            let y = Iv::new(b, b + w);
            let px = a + t * w;
            let py = b + (1.0 - t) * w;
            prop_assert!((x + y).contains(px + py));
            prop_assert!((x - y).contains(px - py));
            prop_assert!((x * y).contains(px * py));
            prop_assert!(x.sqr().contains(px * px));
            prop_assert!(x.powi(3).contains(px * px * px));
            if !y.contains_zero() {
                prop_assert!((x / y).contains(px / py));
            }
            if px >= 0.0 {
                prop_assert!(x.sqrt().unwrap().contains(px.sqrt()));
            }
        }
    }

    #[test]
    fn infinities() {
        let x = Iv::new(0.0, f64::INFINITY);
        assert!((x * Iv::point(0.0)).width() < 1e-300);
        assert!((x * Iv::new(-1.0, 1.0)).lo.is_infinite());
        assert_eq!(Iv::new(-4.0, -1.0).sqrt(), None);
        assert!(Iv::new(-1.0, 1.0).recip().lo.is_infinite());
    }
}
