use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Monomial, Polynomial};

/// A monomial order over named variables.
///
/// Variables listed earlier are more significant. Variables that an order
/// does not mention are appended in name order as the least significant ones
/// (for `Block`, they join the kept block).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Lex(Vec<String>),
    GrevLex(Vec<String>),
    /// Graded reverse lexicographic inside each block; any monomial with a
    /// larger `eliminate` part dominates.
    Block {
        eliminate: Vec<String>,
        keep: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DenseKind {
    Lex,
    GrevLex,
    Block(usize),
}

impl TermOrder {
    pub fn lex<S: AsRef<str>>(vars: &[S]) -> Self {
        TermOrder::Lex(vars.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn grevlex<S: AsRef<str>>(vars: &[S]) -> Self {
        TermOrder::GrevLex(vars.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn block<S: AsRef<str>, T: AsRef<str>>(eliminate: &[S], keep: &[T]) -> Self {
        TermOrder::Block {
            eliminate: eliminate.iter().map(|s| s.as_ref().to_string()).collect(),
            keep: keep.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// Full variable sequence covering `extra`, most significant first.
    pub(crate) fn layout(&self, extra: &BTreeSet<String>) -> (Vec<String>, DenseKind) {
        let (mut vars, kind) = match self {
            TermOrder::Lex(v) => (v.clone(), DenseKind::Lex),
            TermOrder::GrevLex(v) => (v.clone(), DenseKind::GrevLex),
            TermOrder::Block { eliminate, keep } => {
                let mut v = eliminate.clone();
                v.extend(keep.iter().cloned());
                (v, DenseKind::Block(eliminate.len()))
            }
        };
        for x in extra {
            if !vars.contains(x) {
                vars.push(x.clone());
            }
        }
        (vars, kind)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let mut extra: BTreeSet<String> = BTreeSet::new();
        for m in [a, b] {
            extra.extend(m.factors().iter().map(|(v, _)| v.clone()));
        }
        let (vars, kind) = self.layout(&extra);
        let ea: Vec<u32> = vars.iter().map(|v| a.exponent(v)).collect();
        let eb: Vec<u32> = vars.iter().map(|v| b.exponent(v)).collect();
        dense_cmp(kind, &ea, &eb)
    }

    /// Leading monomial and coefficient of a nonzero polynomial.
    pub fn leading<'a>(&self, p: &'a Polynomial) -> Option<(&'a Monomial, &'a super::Rational)> {
        p.terms().max_by(|x, y| self.cmp(x.0, y.0))
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

pub(crate) fn dense_cmp(kind: DenseKind, a: &[u32], b: &[u32]) -> Ordering {
    match kind {
        DenseKind::Lex => a.cmp(b),
        DenseKind::GrevLex => grevlex(a, b),
        DenseKind::Block(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_pairs(["x", "y", "z"].iter().zip(e).map(|(v, e)| (*v, *e)))
    }

    fn orders() -> Vec<TermOrder> {
        vec![
            TermOrder::lex(&["x", "y", "z"]),
            TermOrder::grevlex(&["x", "y", "z"]),
            TermOrder::block(&["x"], &["y", "z"]),
            TermOrder::block(&["z", "y"], &["x"]),
        ]
    }

    #[test]
    fn lex_and_grevlex_basics() {
        let lex = TermOrder::lex(&["x", "y"]);
        assert_eq!(lex.cmp(&mono(&[1, 0, 0]), &mono(&[0, 5, 0])), Ordering::Greater);
        let grl = TermOrder::grevlex(&["x", "y", "z"]);
        // x*z < y^2 in grevlex
        assert_eq!(grl.cmp(&mono(&[1, 0, 1]), &mono(&[0, 2, 0])), Ordering::Less);
        let blk = TermOrder::block(&["x"], &["y"]);
        assert_eq!(blk.cmp(&mono(&[1, 0, 0]), &mono(&[0, 9, 0])), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn order_axioms(a in prop::collection::vec(0u32..4, 3),
                        b in prop::collection::vec(0u32..4, 3),
                        c in prop::collection::vec(0u32..4, 3)) {
            let (ma, mb, mc) = (mono(&a), mono(&b), mono(&c));
            for ord in orders() {
                // totality and antisymmetry
                let ab = ord.cmp(&ma, &mb);
                prop_assert_eq!(ab, ord.cmp(&mb, &ma).reverse());
                prop_assert_eq!(ab == Ordering::Equal, ma == mb);
                // multiplicativity
                prop_assert_eq!(ab, ord.cmp(&ma.mul(&mc), &mb.mul(&mc)));
                // 1 is minimal
                prop_assert!(ord.cmp(&Monomial::one(), &ma) != Ordering::Greater);
                // transitivity
                if ab != Ordering::Less && ord.cmp(&mb, &mc) != Ordering::Less {
                    prop_assert!(ord.cmp(&ma, &mc) != Ordering::Less);
                }
            }
        }
    }
}
