//! Elimination-first path: find the constants μ > 0 with lhs = μ·rhs.

use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;

use crate::algnum::{isolate_real_roots, to_radical, AlgebraicNumber, RadicalForm};
use crate::construct::numeric::{instantiate, Fx};
use crate::construct::{AlgebraicTranslation, ConstructionProgram};
use crate::polycore::{eliminate, GbLimits, GroebnerError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EqError {
    #[error("elimination aborted: {0}")]
    ResourceLimit(#[from] GroebnerError),
    #[error("no positive root of {0}")]
    NoPositiveRoot(String),
    #[error("no candidate ratio was observed numerically")]
    NoCandidateWitnessed,
    #[error("could not instantiate the construction")]
    NoInstance,
    #[error("statement polynomials missing")]
    MissingStatement,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub value: AlgebraicNumber,
    pub radical: Option<RadicalForm>,
}

impl Candidate {
    pub fn render(&self) -> String {
        match &self.radical {
            Some(r) => r.to_ascii(),
            None => self.value.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactRatioResult {
    pub candidates: Vec<Candidate>,
    pub eliminated_poly: Polynomial,
}

impl ExactRatioResult {
    /// `lhs = μ·rhs`, one line per candidate joined by " or ".
    pub fn render(&self, lhs: &str, rhs: &str) -> String {
        self.candidates
            .iter()
            .map(|c| format!("{lhs} = {}·{rhs}", c.render()))
            .collect::<Vec<_>>()
            .join(" or ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Witnessed,
    NeverWitnessed,
}

/// Eliminates every variable except `m` (the statement's `n` included).
/// `None` when nothing constrains `m`.
pub fn eliminate_to_mu(
    t: &AlgebraicTranslation,
    limits: &GbLimits,
) -> Result<Option<Polynomial>, EqError> {
    let sv = t.statement.as_ref().ok_or(EqError::MissingStatement)?;
    let mut polys = t.polys.clone();
    if let Some((nv, _)) = &t.nonvanishing {
        polys.push(nv.clone());
    }
    let mut drop: Vec<String> = t.vars.iter().filter(|v| **v != sv.m).cloned().collect();
    for p in &polys {
        for v in p.vars() {
            if v != sv.m && !drop.contains(&v) {
                drop.push(v);
            }
        }
    }
    let gens = eliminate(&polys, &drop, limits)?;
    let Some(g) = gens.into_iter().find(|p| !p.is_zero()) else {
        return Ok(None);
    };
    Ok(Some(g.primitive()))
}

/// Positive real roots of `p`, with radical forms where available.
pub fn solve_mu(p: &Polynomial) -> Result<ExactRatioResult, EqError> {
    let none = || EqError::NoPositiveRoot(p.to_string());
    let roots = isolate_real_roots(p).map_err(|_| none())?;
    let candidates: Vec<Candidate> = roots
        .into_iter()
        .filter(|r| r.sign() > 0)
        .map(|value| Candidate {
            radical: to_radical(&value),
            value,
        })
        .collect();
    if candidates.is_empty() {
        return Err(none());
    }
    Ok(ExactRatioResult {
        candidates,
        eliminated_poly: p.clone(),
    })
}

fn approx(a: &AlgebraicNumber) -> Fx {
    let w = Rational::new(1.into(), BigInt::from(1u8) << 120);
    Fx::from_rational(&a.refine(&w).enclosure().lo())
}

/// Instantiates the construction `trials` times and marks each candidate
/// seen when some trial's ratio agrees with it to 1e-20.
pub fn numeric_crosscheck<R: Rng>(
    result: &ExactRatioResult,
    prog: &ConstructionProgram,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<Witness>, EqError> {
    let vals: Vec<Fx> = result.candidates.iter().map(|c| approx(&c.value)).collect();
    let tol = Fx::from_rational(&Rational::new(1.into(), BigInt::from(10u8).pow(20)));
    let mut seen = vec![Witness::NeverWitnessed; vals.len()];
    for _ in 0..trials.max(1) {
        let fig = instantiate(prog, rng, false).map_err(|_| EqError::NoInstance)?;
        let Some(ratio) = fig.ratio() else { continue };
        for (i, v) in vals.iter().enumerate() {
            if (&ratio - v).abs() < tol {
                seen[i] = Witness::Witnessed;
            }
        }
    }
    if seen.iter().all(|w| *w == Witness::NeverWitnessed) {
        return Err(EqError::NoCandidateWitnessed);
    }
    Ok(seen)
}

/// Two random instances whose ratios differ by more than 1e-6, if found.
pub fn ratio_varies<R: Rng>(prog: &ConstructionProgram, trials: usize, rng: &mut R) -> bool {
    let mut first: Option<f64> = None;
    for _ in 0..trials {
        let Ok(fig) = instantiate(prog, rng, false) else { return false };
        let Some(r) = fig.ratio().map(|x| x.to_f64()) else { continue };
        match first {
            None => first = Some(r),
            Some(f) if (f - r).abs() > 1e-6 => return true,
            _ => {}
        }
    }
    false
}

/// Convenience: elimination with a deadline, then root solving.
pub fn exact_ratio(
    t: &AlgebraicTranslation,
    deadline: Option<Instant>,
) -> Result<Option<ExactRatioResult>, EqError> {
    let limits = GbLimits {
        deadline,
        ..Default::default()
    };
    match eliminate_to_mu(t, &limits)? {
        None => Ok(None),
        Some(p) => solve_mu(&p).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
    use crate::delin::delinearize;
    use crate::polycore::parse_poly;
    use rand::{rngs::StdRng, SeedableRng};

    fn prepared(src: &str) -> (ConstructionProgram, AlgebraicTranslation) {
        let p = parse_construction(src).unwrap();
        let st = p.statement.clone().unwrap();
        let t = pin_coordinates(&statement_polys(&algebraize(&p).unwrap(), &st.lhs, &st.rhs)).unwrap();
        (p, delinearize(&t).0)
    }

    fn mu(src: &str) -> Option<Polynomial> {
        eliminate_to_mu(&prepared(src).1, &GbLimits::default()).unwrap()
    }

    const PENTAGON: &str = "point A; point B; regular A B C D E 5; line l A B; samehalfplane C D l; \
                            segment f A B; segment k A C; compare k vs f";
    const KOCHANSKI: &str = "point M; point A; regular M A P Q 4; regular A M E 3; midpoint F A E; \
                             line l1 M F; line l2 A P; intersect C l1 l2; regular A M U V 4; \
                             regular U M S T 4; regular U T X Y 4; regular Y X G H 4; \
                             segment k C G; segment r M A; compare k vs r";

    #[test]
    fn pythagoras() {
        let src = "point A; point B; point C; rightangle A C B; segment a B C; segment b A C; \
                   segment c A B; compare a^2+b^2 vs c^2";
        let p = mu(src).unwrap();
        let r = solve_mu(&p).unwrap();
        assert_eq!(r.candidates.len(), 1);
        assert_eq!(r.candidates[0].render(), "1");
        let prog = prepared(src).0;
        let w = numeric_crosscheck(&r, &prog, 5, &mut StdRng::seed_from_u64(1)).unwrap();
        assert_eq!(w, [Witness::Witnessed]);
    }

    #[test]
    fn medians_fall_through() {
        let src = "point A; point B; point C; midpoint D B C; midpoint E A C; \
                   segment c A B; segment g B E; segment f A D; compare f+g vs c";
        assert_eq!(mu(src), None);
        let prog = prepared(src).0;
        assert!(ratio_varies(&prog, 10, &mut StdRng::seed_from_u64(2)));
    }

    #[test]
    fn pentagon() {
        let p = mu(PENTAGON).unwrap();
        let target = parse_poly("m^4-3*m^2+1").unwrap();
        let q = crate::algnum::UPoly::from_polynomial(&p).unwrap().1;
        let t = crate::algnum::UPoly::from_polynomial(&target).unwrap().1;
        assert_eq!(q.monic(), t.monic(), "{p}");
        let r = solve_mu(&p).unwrap();
        let shown: Vec<String> = r.candidates.iter().map(|c| c.render()).collect();
        assert_eq!(shown, ["(sqrt(5)-1)/2", "(1+sqrt(5))/2"]);
        let (prog, _) = prepared(PENTAGON);
        let w = numeric_crosscheck(&r, &prog, 5, &mut StdRng::seed_from_u64(3)).unwrap();
        assert_eq!(w, [Witness::NeverWitnessed, Witness::Witnessed]);
    }

    #[test]
    fn kochanski() {
        let p = mu(KOCHANSKI).unwrap();
        let r = solve_mu(&p).unwrap();
        let (prog, _) = prepared(KOCHANSKI);
        let w = numeric_crosscheck(&r, &prog, 3, &mut StdRng::seed_from_u64(4)).unwrap();
        let hit: Vec<String> = r
            .candidates
            .iter()
            .zip(&w)
            .filter(|(_, w)| **w == Witness::Witnessed)
            .map(|(c, _)| c.render())
            .collect();
        assert_eq!(hit, ["sqrt(40/3-2*sqrt(3))"], "{p}");
    }

    #[test]
    fn witnessed_ratio_is_stable() {
        let (prog, t) = prepared(PENTAGON);
        let r = exact_ratio(&t, None).unwrap().unwrap();
        let phi = approx(&r.candidates[1].value);
        let tol = Fx::from_rational(&Rational::new(1.into(), BigInt::from(10u8).pow(20)));
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..300 {
            let fig = instantiate(&prog, &mut rng, false).unwrap();
            assert!((&fig.ratio().unwrap() - &phi).abs() < tol);
        }
    }

    #[test]
    fn solve_examples() {
        let r = solve_mu(&parse_poly("m-1").unwrap()).unwrap();
        assert_eq!(r.candidates[0].render(), "1");
        let r = solve_mu(&parse_poly("9*m^4-240*m^2+1492").unwrap()).unwrap();
        assert!(r.candidates.iter().any(|c| c.render() == "sqrt(40/3-2*sqrt(3))"));
        assert!(matches!(solve_mu(&parse_poly("m+2").unwrap()), Err(EqError::NoPositiveRoot(_))));
        assert!(matches!(solve_mu(&parse_poly("m").unwrap()), Err(EqError::NoPositiveRoot(_))));
        assert!(matches!(solve_mu(&parse_poly("1").unwrap()), Err(EqError::NoPositiveRoot(_))));
    }
}
