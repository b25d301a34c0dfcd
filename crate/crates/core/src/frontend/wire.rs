//! The `euclideansolver` query: a bare polynomial system plus the names of
//! the two compared quantities.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use percent_encoding::percent_decode_str;

use crate::construct::{AlgebraicTranslation, StatementVars};
use crate::delin::delinearize;
use crate::eqpath::exact_ratio;
use crate::ineqpath::{bounds, BoundsConfig, BoundsOrPlanError, BoundsError, PlanError};
use crate::polycore::{parse_poly_list, Polynomial, Rational};
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverQuery {
    pub lhs: String,
    pub rhs: String,
    pub polys: Vec<Polynomial>,
    pub vars: Vec<String>,
    pub posvariables: BTreeSet<String>,
    pub timeout: Duration,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QueryError {
    #[error("missing parameter {0}")]
    Missing(&'static str),
    #[error("bad polynomial at offset {offset}: {message}")]
    Poly { offset: usize, message: String },
    #[error("bad variable name {0:?}")]
    BadVar(String),
    #[error("bad timeout {0:?}")]
    BadTimeout(String),
}

/// Service reply: `Ok(body)` or a timeout.
#[derive(Clone, Debug, PartialEq)]
pub enum SolverReply {
    Answer(String),
    Timeout,
}

fn names(s: &str) -> Result<Vec<String>, QueryError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            let ok = x.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && x.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if ok {
                Ok(x.to_string())
            } else {
                Err(QueryError::BadVar(x.to_string()))
            }
        })
        .collect()
}

impl SolverQuery {
    /// From a decoded query string (`lhs=w1&rhs=v11&polys=...`).
    pub fn from_query(q: &str) -> Result<SolverQuery, QueryError> {
        // `+` stays literal: it is part of the polynomial grammar
        let params: BTreeMap<String, String> = q
            .split('&')
            .filter(|kv| !kv.is_empty())
            .map(|kv| {
                let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
                let dec = |s: &str| percent_decode_str(s).decode_utf8_lossy().into_owned();
                (dec(k), dec(v))
            })
            .collect();
        let get = |k: &'static str| params.get(k).ok_or(QueryError::Missing(k));
        let lhs = names(get("lhs")?)?.pop().ok_or(QueryError::Missing("lhs"))?;
        let rhs = names(get("rhs")?)?.pop().ok_or(QueryError::Missing("rhs"))?;
        let polys = parse_poly_list(get("polys")?).map_err(|e| QueryError::Poly {
            offset: e.offset,
            message: e.message,
        })?;
        let vars = match params.get("vars") {
            Some(v) => names(v)?,
            None => {
                let mut all = BTreeSet::new();
                for p in &polys {
                    all.extend(p.vars());
                }
                all.into_iter().collect()
            }
        };
        let posvariables = match params.get("posvariables") {
            Some(v) => names(v)?.into_iter().collect(),
            None => BTreeSet::new(),
        };
        let timeout = match params.get("timeout") {
            Some(t) => t
                .parse::<f64>()
                .ok()
                .filter(|x| *x > 0.0 && x.is_finite())
                .map(Duration::from_secs_f64)
                .ok_or_else(|| QueryError::BadTimeout(t.clone()))?,
            None => Duration::from_secs(5),
        };
        Ok(SolverQuery {
            lhs,
            rhs,
            polys,
            vars,
            posvariables,
            timeout,
        })
    }

    /// Builds the statement system. When `vars` starts with `v1,v2,v3,v4`
    /// those are the first two free points and get pinned to (0,0), (1,0).
    pub fn translation(&self) -> AlgebraicTranslation {
        let pin: BTreeMap<String, Polynomial> = if self.vars.len() >= 4
            && self.vars[..4].iter().map(String::as_str).eq(["v1", "v2", "v3", "v4"])
        {
            [("v1", 0), ("v2", 0), ("v3", 1), ("v4", 0)]
                .into_iter()
                .map(|(k, x)| (k.to_string(), Polynomial::int(x)))
                .collect()
        } else {
            BTreeMap::new()
        };
        let (m, n) = ("m".to_string(), "n".to_string());
        let polys: Vec<Polynomial> = self.polys.iter().map(|p| p.substitute_all(&pin)).collect();
        let lhs = defining(&polys, &self.lhs);
        let rhs = defining(&polys, &self.rhs);
        let mut t = AlgebraicTranslation::default();
        for q in polys {
            if !q.is_zero() {
                t.listing.push(q.to_string());
                t.polys.push(q);
            }
        }
        let link = &Polynomial::var(&self.lhs) - &(&Polynomial::var(&self.rhs) * &Polynomial::var(&m));
        t.listing.push(format!("({})-{m}*({})", self.lhs, self.rhs));
        t.polys.push(link);
        t.vars = self.vars.iter().filter(|v| !pin.contains_key(*v)).cloned().collect();
        t.vars.push(m.clone());
        t.varmap = t.vars.iter().map(|v| (v.clone(), v.clone())).collect();
        t.posvars = self.posvariables.clone();
        t.nonvanishing = Some((&(&rhs * &Polynomial::var(&n)) - &Polynomial::int(1), format!("({})*{n}-1", self.rhs)));
        t.pinned = !pin.is_empty();
        t.statement = Some(StatementVars {
            lhs,
            rhs,
            w1: self.lhs.clone(),
            m,
            n,
            lhs_text: self.lhs.clone(),
            rhs_text: self.rhs.clone(),
        });
        t
    }

    /// Elimination, then bounds, within the query's timeout.
    pub fn solve(&self) -> SolverReply {
        let deadline = Instant::now() + self.timeout;
        let t = self.translation();
        let (delin, _) = delinearize(&t);
        // elimination gets a share of the budget, bounds the rest
        let eq_deadline = Instant::now() + self.timeout / 3;
        if let Ok(Some(r)) = exact_ratio(&delin, Some(eq_deadline)) {
            let pos: Vec<String> = r.candidates.iter().map(|c| format!("m = {}", c.render())).collect();
            if !pos.is_empty() {
                return SolverReply::Answer(pos.join(" or "));
            }
        }
        let cfg = BoundsConfig { tol: 1e-6, deadline };
        match bounds(&delin, &cfg) {
            Ok(r) if r.converged => SolverReply::Answer(r.render()),
            Ok(_) => SolverReply::Timeout,
            Err(BoundsOrPlanError::Bounds(BoundsError::Infeasible))
            | Err(BoundsOrPlanError::Plan(PlanError::Infeasible(_))) => {
                SolverReply::Answer("infeasible".into())
            }
            Err(e) => SolverReply::Answer(format!("unsupported: {e}")),
        }
    }
}

/// `L` when some poly reads `±(x - L)` with `x` not in `L`, else `x`.
fn defining(polys: &[Polynomial], x: &str) -> Polynomial {
    for p in polys {
        if let Some((a, rest)) = p.linear_in(x) {
            if let Some(c) = a.as_constant() {
                if !rest.contains_var(x) && (c == Rational::one() || c == -Rational::one()) {
                    return if c == Rational::one() { -rest } else { rest };
                }
            }
        }
    }
    Polynomial::var(x)
}

/// The medians request as a dynamic geometry client sends it.
pub const MEDIANS_QUERY: &str = "lhs=w1&rhs=v11&polys=2*v7-v5-v3,2*v8-v6-v4,2*v9-v5-v1,2*v10-v6-v2,\
-v12^2+v10^2+v9^2-2*v10*v4+v4^2-2*v9*v3+v3^2,-v11^2+v4^2+v3^2-2*v4*v2+v2^2-2*v3*v1+v1^2,\
-v13^2+v8^2+v7^2-2*v8*v2+v2^2-2*v7*v1+v1^2,\
-1-v14*v5*v4+v14*v6*v3+v14*v5*v2-v14*v3*v2-v14*v6*v1+v14*v4*v1,-w1+(v13+v12)^1\
&vars=v1,v2,v3,v4,v5,v6,v7,v8,v9,v10,v11,v12,v13,v14,w1&posvariables=v11,v12,v13";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians_over_the_wire() {
        let q = SolverQuery::from_query(MEDIANS_QUERY).unwrap();
        assert_eq!(q.polys.len(), 9);
        assert_eq!(q.solve(), SolverReply::Answer("m > 3/2".into()));
    }

    #[test]
    fn constant_ratio() {
        let q = SolverQuery::from_query("lhs=x&rhs=x&polys=x-1&vars=x").unwrap();
        assert_eq!(q.solve(), SolverReply::Answer("m = 1".into()));
    }

    #[test]
    fn malformed() {
        let e = SolverQuery::from_query("lhs=x&rhs=x&polys=x^^2&vars=x").unwrap_err();
        assert!(matches!(e, QueryError::Poly { .. }), "{e}");
        assert_eq!(
            SolverQuery::from_query("rhs=x&polys=x").unwrap_err(),
            QueryError::Missing("lhs")
        );
    }
}
