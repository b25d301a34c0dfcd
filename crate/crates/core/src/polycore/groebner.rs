//! Multivariate division, S-polynomials, Buchberger's algorithm and
//! elimination ideals.
//!
//! The public functions take and return [`Polynomial`]s. Internally the work
//! happens on dense exponent vectors laid out by the requested [`TermOrder`],
//! with terms kept sorted from leading to trailing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use num_traits::{One, Zero};

use super::order::{dense_cmp, DenseKind};
use super::{Monomial, Polynomial, Rational, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("problem too large: {0}")]
    ResourceLimit(String),
    #[error("deadline exceeded")]
    Deadline,
}

/// Caps on a Gröbner basis computation.
#[derive(Clone, Debug)]
pub struct GbLimits {
    /// Maximum number of pending critical pairs.
    pub max_pairs: usize,
    /// Maximum number of basis elements (before final reduction).
    pub max_basis: usize,
    pub deadline: Option<Instant>,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_pairs: 50_000,
            max_basis: 5_000,
            deadline: None,
        }
    }
}

impl GbLimits {
    pub fn with_deadline(deadline: Instant) -> Self {
        GbLimits {
            deadline: Some(deadline),
            ..Default::default()
        }
    }

    fn check_deadline(&self) -> Result<(), GroebnerError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(GroebnerError::Deadline),
            _ => Ok(()),
        }
    }
}

type Exp = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
struct DPoly {
    terms: Vec<(Exp, Rational)>,
}

struct Ring {
    vars: Vec<String>,
    kind: DenseKind,
}

impl Ring {
    fn new(ord: &TermOrder, polys: &[&Polynomial]) -> Ring {
        let mut extra = BTreeSet::new();
        for p in polys {
            extra.extend(p.vars());
        }
        let (vars, kind) = ord.layout(&extra);
        Ring { vars, kind }
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        dense_cmp(self.kind, a, b)
    }

    fn to_dense(&self, p: &Polynomial) -> DPoly {
        let idx: BTreeMap<&str, usize> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut terms: Vec<(Exp, Rational)> = p
            .terms()
            .map(|(m, c)| {
                let mut e = vec![0u32; self.vars.len()];
                for (v, k) in m.factors() {
                    e[idx[v.as_str()]] = *k;
                }
                (e, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        DPoly { terms }
    }

    fn to_sparse(&self, p: &DPoly) -> Polynomial {
        Polynomial::from_terms(p.terms.iter().map(|(e, c)| {
            let m = Monomial::from_pairs(self.vars.iter().zip(e).map(|(v, k)| (v.as_str(), *k)));
            (m, c.clone())
        }))
    }

    /// `a - c * x^shift * b`, merging sorted term lists.
    fn sub_scaled(&self, a: &DPoly, c: &Rational, shift: &[u32], b: &DPoly) -> DPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut bs = b.terms.iter().map(|(e, k)| {
            let e2: Exp = e.iter().zip(shift).map(|(x, y)| x + y).collect();
            (e2, k * c)
        });
        let mut next_b = bs.next();
        while i < a.terms.len() || next_b.is_some() {
            match (&a.terms.get(i), &next_b) {
                (Some(ta), Some(tb)) => match self.cmp(&ta.0, &tb.0) {
                    Ordering::Greater => {
                        out.push((*ta).clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        let (e, k) = next_b.take().unwrap();
                        out.push((e, -k));
                        next_b = bs.next();
                    }
                    Ordering::Equal => {
                        let k = &ta.1 - &tb.1;
                        if !k.is_zero() {
                            out.push((ta.0.clone(), k));
                        }
                        i += 1;
                        next_b = bs.next();
                    }
                },
                (Some(ta), None) => {
                    out.push((*ta).clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    let (e, k) = next_b.take().unwrap();
                    out.push((e, -k));
                    next_b = bs.next();
                }
                (None, None) => unreachable!(),
            }
        }
        DPoly { terms: out }
    }

    /// Full reduction of `f` by `g` (indices in `active`); optionally records
    /// quotient terms per divisor.
    fn reduce(
        &self,
        f: &DPoly,
        g: &[DPoly],
        active: &[usize],
        mut quotients: Option<&mut Vec<Vec<(Exp, Rational)>>>,
        limits: &GbLimits,
    ) -> Result<DPoly, GroebnerError> {
        let mut p = f.clone();
        let mut rem: Vec<(Exp, Rational)> = Vec::new();
        let mut steps = 0usize;
        while let Some((lt, lc)) = p.terms.first().cloned() {
            steps += 1;
            if steps % 256 == 0 {
                limits.check_deadline()?;
            }
            let div = active
                .iter()
                .copied()
                .find(|&k| divides(&g[k].terms[0].0, &lt));
            match div {
                Some(k) => {
                    let (gl, gc) = &g[k].terms[0];
                    let shift: Exp = lt.iter().zip(gl).map(|(a, b)| a - b).collect();
                    let c = &lc / gc;
                    if let Some(q) = quotients.as_deref_mut() {
                        q[k].push((shift.clone(), c.clone()));
                    }
                    p = self.sub_scaled(&p, &c, &shift, &g[k]);
                }
                None => {
                    rem.push(p.terms.remove(0));
                }
            }
        }
        Ok(DPoly { terms: rem })
    }

    fn spoly(&self, f: &DPoly, g: &DPoly) -> DPoly {
        let (fl, fc) = &f.terms[0];
        let (gl, gc) = &g.terms[0];
        let l = lcm(fl, gl);
        let sf: Exp = l.iter().zip(fl).map(|(a, b)| a - b).collect();
        let sg: Exp = l.iter().zip(gl).map(|(a, b)| a - b).collect();
        // (l/lm f) * f / lc f - (l/lm g) * g / lc g
        let zero = DPoly { terms: vec![] };
        let a = self.sub_scaled(&zero, &-fc.recip(), &sf, f);
        self.sub_scaled(&a, &gc.recip(), &sg, g)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn make_monic(p: &mut DPoly) {
    if let Some((_, c)) = p.terms.first() {
        if !c.is_one() {
            let inv = c.recip();
            for t in &mut p.terms {
                t.1 = &t.1 * &inv;
            }
        }
    }
}

/// Multivariate division: `f = sum(q_i * g_i) + r` with no term of `r`
/// divisible by a leading term of `g`.
pub fn reduce(f: &Polynomial, g: &[Polynomial], ord: &TermOrder) -> (Polynomial, Vec<Polynomial>) {
    assert!(!g.is_empty(), "reduce needs at least one divisor");
    assert!(g.iter().all(|p| !p.is_zero()), "divisors must be nonzero");
    let mut all: Vec<&Polynomial> = g.iter().collect();
    all.push(f);
    let ring = Ring::new(ord, &all);
    let dg: Vec<DPoly> = g.iter().map(|p| ring.to_dense(p)).collect();
    let active: Vec<usize> = (0..g.len()).collect();
    let mut q = vec![Vec::new(); g.len()];
    let r = ring
        .reduce(&ring.to_dense(f), &dg, &active, Some(&mut q), &GbLimits::default())
        .expect("reduction without a deadline cannot fail");
    let quotients = q
        .into_iter()
        .map(|terms| {
            let mut terms = terms;
            terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
            // merge equal exponents
            let mut merged: Vec<(Exp, Rational)> = Vec::new();
            for (e, c) in terms {
                match merged.last_mut() {
                    Some(last) if last.0 == e => last.1 = &last.1 + &c,
                    _ => merged.push((e, c)),
                }
            }
            ring.to_sparse(&DPoly { terms: merged })
        })
        .collect();
    (ring.to_sparse(&r), quotients)
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &TermOrder) -> Polynomial {
    assert!(!f.is_zero() && !g.is_zero());
    let ring = Ring::new(ord, &[f, g]);
    ring.to_sparse(&ring.spoly(&ring.to_dense(f), &ring.to_dense(g)))
}

/// Reduced Gröbner basis of the ideal generated by `f`.
pub fn buchberger(
    f: &[Polynomial],
    ord: &TermOrder,
    limits: &GbLimits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let refs: Vec<&Polynomial> = f.iter().collect();
    let ring = Ring::new(ord, &refs);
    let mut basis: Vec<DPoly> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();

    let add = |h: DPoly,
               basis: &mut Vec<DPoly>,
               alive: &mut Vec<bool>,
               pending: &mut HashSet<(usize, usize)>,
               queue: &mut Vec<(usize, usize)>|
     -> Result<(), GroebnerError> {
        let n = basis.len();
        basis.push(h);
        alive.push(true);
        for i in 0..n {
            if alive[i] {
                pending.insert((i, n));
                queue.push((i, n));
            }
        }
        if pending.len() > limits.max_pairs {
            return Err(GroebnerError::ResourceLimit(format!(
                "{} pending pairs exceeds the cap of {}",
                pending.len(),
                limits.max_pairs
            )));
        }
        if basis.len() > limits.max_basis {
            return Err(GroebnerError::ResourceLimit(format!(
                "basis grew past {} elements",
                limits.max_basis
            )));
        }
        Ok(())
    };

    for p in f {
        if p.is_zero() {
            continue;
        }
        let mut d = ring.to_dense(p);
        make_monic(&mut d);
        if d.terms[0].0.iter().all(|e| *e == 0) {
            return Ok(vec![Polynomial::one()]);
        }
        add(d, &mut basis, &mut alive, &mut pending, &mut queue)?;
    }

    while !queue.is_empty() {
        limits.check_deadline()?;
        // Normal strategy: the pair with the smallest lcm.
        let pick = (0..queue.len())
            .min_by(|&a, &b| {
                let (i, j) = queue[a];
                let (k, l) = queue[b];
                let la = lcm(&basis[i].terms[0].0, &basis[j].terms[0].0);
                let lb = lcm(&basis[k].terms[0].0, &basis[l].terms[0].0);
                ring.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = queue.swap_remove(pick);
        pending.remove(&(i, j));
        if !alive[i] || !alive[j] {
            continue;
        }
        let (li, lj) = (&basis[i].terms[0].0, &basis[j].terms[0].0);
        if coprime(li, lj) {
            continue;
        }
        let l = lcm(li, lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && alive[k]
                && divides(&basis[k].terms[0].0, &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = ring.spoly(&basis[i], &basis[j]);
        let active: Vec<usize> = (0..basis.len()).filter(|&k| alive[k]).collect();
        let mut h = ring.reduce(&s, &basis, &active, None, limits)?;
        if h.terms.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h.terms[0].0.iter().all(|e| *e == 0) {
            return Ok(vec![Polynomial::one()]);
        }
        add(h, &mut basis, &mut alive, &mut pending, &mut queue)?;
    }

    // Minimalize then interreduce.
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| ring.cmp(&basis[a].terms[0].0, &basis[b].terms[0].0));
    let mut keep: Vec<usize> = Vec::new();
    for &a in &idx {
        if !keep
            .iter()
            .any(|&b| divides(&basis[b].terms[0].0, &basis[a].terms[0].0))
        {
            keep.push(a);
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for (pos, &a) in keep.iter().enumerate() {
        let others: Vec<usize> = keep
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &b)| b)
            .collect();
        let tail = DPoly {
            terms: basis[a].terms[1..].to_vec(),
        };
        let mut r = ring.reduce(&tail, &basis, &others, None, limits)?;
        r.terms.insert(0, basis[a].terms[0].clone());
        make_monic(&mut r);
        reduced.push(r);
    }
    reduced.sort_by(|a, b| ring.cmp(&a.terms[0].0, &b.terms[0].0));
    Ok(reduced.iter().map(|p| ring.to_sparse(p)).collect())
}

/// Generators of `<f> ∩ Q[kept variables]`, via a block order with the
/// dropped variables in the first (graded reverse lexicographic) block.
pub fn eliminate(
    f: &[Polynomial],
    drop: &[String],
    limits: &GbLimits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let mut all: BTreeSet<String> = BTreeSet::new();
    for p in f {
        all.extend(p.vars());
    }
    let keep: Vec<String> = all.iter().filter(|v| !drop.contains(v)).cloned().collect();
    let ord = TermOrder::block(drop, &keep);
    let gb = buchberger(f, &ord, limits)?;
    Ok(gb
        .into_iter()
        .filter(|p| drop.iter().all(|v| !p.contains_var(v)))
        .collect())
}

/// True when every S-polynomial of `g` reduces to zero modulo `g`.
pub fn is_groebner_basis(g: &[Polynomial], ord: &TermOrder) -> bool {
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            let s = s_polynomial(&g[i], &g[j], ord);
            if !s.is_zero() && !reduce(&s, g, ord).0.is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    fn lex_xy() -> TermOrder {
        TermOrder::lex(&["x", "y"])
    }

    #[test]
    fn reduce_examples() {
        let (r, _) = reduce(&p("x^2+1"), &[p("x")], &lex_xy());
        assert_eq!(r, p("1"));
        let g = p("x^3*y-2*y+1");
        assert!(reduce(&g, &[g.clone()], &TermOrder::grevlex(&["x", "y"])).0.is_zero());
        let (r, _) = reduce(&p("x-y"), &[p("x-y"), p("y^2-1")], &lex_xy());
        assert!(r.is_zero());
    }

    #[test]
    fn reduce_reconstructs_dividend() {
        let f = p("x^2*y+x*y^2+y^2");
        let g = [p("x*y-1"), p("y^2-1")];
        let (r, q) = reduce(&f, &g, &lex_xy());
        let back = &(&(&q[0] * &g[0]) + &(&q[1] * &g[1])) + &r;
        assert_eq!(back, f);
        assert_eq!(r, p("x+y+1"));
    }

    #[test]
    fn s_polynomial_examples() {
        assert!(s_polynomial(&p("x"), &p("y"), &lex_xy()).is_zero());
        let s = s_polynomial(&p("x^2-1"), &p("x*y-1"), &lex_xy());
        // y*(x^2-1) - x*(x*y-1) = x - y
        assert_eq!(s, p("x-y"));
    }

    #[test]
    fn buchberger_examples() {
        let gb = buchberger(&[p("x^2-1"), p("x*y-1")], &lex_xy(), &GbLimits::default()).unwrap();
        assert_eq!(gb, vec![p("y^2-1"), p("x-y")]);
        let gb = buchberger(&[p("x")], &lex_xy(), &GbLimits::default()).unwrap();
        assert_eq!(gb, vec![p("x")]);
        let gb = buchberger(&[p("x-1"), p("x-2")], &lex_xy(), &GbLimits::default()).unwrap();
        assert_eq!(gb, vec![p("1")]);
    }

    #[test]
    fn elimination_examples() {
        let e = eliminate(&[p("x^2-1"), p("x*y-1")], &["x".into()], &GbLimits::default()).unwrap();
        assert_eq!(e, vec![p("y^2-1")]);
        // common zeros (1,1) and (-1,-1) satisfy the eliminant
        for y in [1, -1] {
            let mut env = BTreeMap::new();
            env.insert("y".to_string(), Rational::from_integer(y.into()));
            assert!(e[0].eval(&env).unwrap().is_zero());
        }
        let e = eliminate(&[p("x-y")], &[], &GbLimits::default()).unwrap();
        assert_eq!(e, vec![p("x-y")]);
    }

    #[test]
    fn pair_cap_is_enforced() {
        let limits = GbLimits {
            max_pairs: 0,
            ..Default::default()
        };
        let err = buchberger(&[p("x^2-y"), p("x*y-1")], &lex_xy(), &limits).unwrap_err();
        assert!(matches!(err, GroebnerError::ResourceLimit(_)));
    }
}
