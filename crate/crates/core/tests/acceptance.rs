//! Acceptance criteria 1-10, run in sequence so timings are not skewed by
//! each other. Prints one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::net::TcpStream;
use std::time::{Duration, Instant};

use geocompare::algnum::UPoly;
use geocompare::construct::numeric::{eval_fx, instantiate, Fx};
use geocompare::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
use geocompare::corpus::{self, CorpusCase};
use geocompare::delin::{delinearize, recorded_substitutions};
use geocompare::eqpath::{exact_ratio, numeric_crosscheck, Witness};
use geocompare::frontend::wire::MEDIANS_QUERY;
use geocompare::frontend::{compare_source, server, BoundOut, CompareConfig, CompareResult, Mode, Outcome};
use geocompare::ineqpath::Iv;
use geocompare::polycore::{
    buchberger, is_groebner_basis, reduce, rat, GbLimits, Interval, Monomial, Polynomial, Rational, TermOrder,
};
use num_traits::FromPrimitive;
use rand::{rngs::StdRng, Rng, SeedableRng};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(c: &CorpusCase, mode: Mode, timeout: u64) -> Result<CompareResult, String> {
    let cfg = CompareConfig {
        timeout: Duration::from_secs(timeout),
        mode,
        transcript: true,
        ..Default::default()
    };
    compare_source(c.source, &cfg).map_err(|e| e.to_string())
}

fn bounds_of(r: &CompareResult) -> Result<(&BoundOut, Option<&BoundOut>), String> {
    match &r.outcome {
        Outcome::Bounds { inf, sup, .. } => Ok((inf, sup.as_ref())),
        o => Err(format!("expected bounds, got {o:?}")),
    }
}

fn candidates(r: &CompareResult) -> Result<Vec<(String, bool)>, String> {
    match &r.outcome {
        Outcome::ExactRatio { candidates } => Ok(candidates.iter().map(|c| (c.value.clone(), c.witnessed)).collect()),
        o => Err(format!("expected an exact ratio, got {o:?}")),
    }
}

fn bottema_1_1() -> Check {
    let r = run(&corpus::BOTTEMA_1_1, Mode::Bounds, 10)?;
    let (inf, sup) = bounds_of(&r)?;
    let sup = sup.ok_or("sup reported unbounded")?;
    ensure(inf.lo <= 3.0 && 3.0 <= inf.hi && inf.hi - inf.lo <= 1e-6, || format!("inf [{}, {}]", inf.lo, inf.hi))?;
    ensure(inf.attained == "attained", || format!("inf {}", inf.attained))?;
    let w = inf.witness.clone().unwrap_or_default();
    let equilateral = w.len() == 2 && (w[0] - 0.5).abs() < 0.05 && (w[1].abs() - 3f64.sqrt() / 2.0).abs() < 0.05;
    ensure(equilateral, || format!("witness {w:?}"))?;
    ensure(sup.lo <= 4.0 && 4.0 <= sup.hi, || format!("sup [{}, {}]", sup.lo, sup.hi))?;
    ensure(sup.attained == "limit-conjectured", || format!("sup {}", sup.attained))?;
    ensure(inf.value == "3" && sup.value == "4", || format!("{} / {}", inf.value, sup.value))?;
    ensure(
        r.render_relation() == "3 · (a*b + b*c + c*a) <= (a + b + c)^2 < 4 · (a*b + b*c + c*a)",
        || r.render_relation(),
    )
}

fn medians() -> Check {
    let r = run(&corpus::MEDIANS, Mode::Auto, 10)?;
    let (inf, sup) = bounds_of(&r)?;
    ensure(inf.value == "3/2" && inf.strict(), || format!("inf {} {}", inf.value, inf.attained))?;
    ensure(sup.is_none(), || "sup is finite".into())?;
    ensure(r.render_relation() == "(f + g) > (3/2) · c", || r.render_relation())?;
    let tr = r.transcript.clone().unwrap_or_default();
    ensure(tr.iter().any(|l| l == "Input: 10 eqs in 12 vars"), || "input count".into())?;
    ensure(tr.iter().any(|l| l == "Delinearization output: 6 eqs in 8 vars"), || "output count".into())
}

fn pythagoras_relaxed() -> Check {
    let r = run(&corpus::PYTHAGORAS_RELAXED, Mode::Auto, 10)?;
    let (inf, _) = bounds_of(&r)?;
    ensure(inf.value == "1/2" && inf.strict(), || format!("inf {} {}", inf.value, inf.attained))
}

fn pythagoras() -> Check {
    let r = run(&corpus::PYTHAGORAS, Mode::Eq, 2)?;
    let c = candidates(&r)?;
    ensure(c == [("1".to_string(), true)], || format!("{c:?}"))
}

fn pentagon() -> Check {
    let r = run(&corpus::PENTAGON, Mode::Eq, 10)?;
    let c = candidates(&r)?;
    let want = [("(sqrt(5)-1)/2".to_string(), false), ("(1+sqrt(5))/2".to_string(), true)];
    ensure(c == want, || format!("eq mode {c:?}"))?;
    let r = run(&corpus::PENTAGON_CONVEX, Mode::Auto, 10)?;
    let c = candidates(&r)?;
    ensure(c == [("(1+sqrt(5))/2".to_string(), true)], || format!("half-plane {c:?}"))
}

fn kochanski() -> Check {
    let prog = parse_construction(corpus::KOCHANSKI.source).map_err(|e| e.to_string())?;
    let st = prog.statement.clone().ok_or("no statement")?;
    let t = algebraize(&prog)
        .map(|a| statement_polys(&a, &st.lhs, &st.rhs))
        .and_then(|a| pin_coordinates(&a))
        .map_err(|e| e.to_string())?;
    let (d, _) = delinearize(&t);
    let res = exact_ratio(&d, Some(Instant::now() + Duration::from_secs(5)))
        .map_err(|e| e.to_string())?
        .ok_or("no polynomial in m")?;
    let mut rng = StdRng::seed_from_u64(5);
    let seen = numeric_crosscheck(&res, &prog, 10, &mut rng).map_err(|e| e.to_string())?;
    let hits: Vec<_> = res.candidates.iter().zip(&seen).filter(|(_, w)| **w == Witness::Witnessed).collect();
    ensure(hits.len() == 1, || format!("{} witnessed candidates", hits.len()))?;
    let mp = UPoly::from_polynomial(&hits[0].0.value.minpoly("m")).ok_or("minpoly")?.1;
    ensure(mp.monic() == UPoly::from_ints(&[1492, 0, -240, 0, 9]).monic(), || format!("minpoly {mp:?}"))?;
    let r = run(&corpus::KOCHANSKI, Mode::Auto, 5)?;
    let c = candidates(&r)?;
    ensure(c.len() == 1 && c[0].0 == "sqrt(40/3-2*sqrt(3))", || format!("{c:?}"))?;
    let Outcome::ExactRatio { candidates } = &r.outcome else { unreachable!() };
    let dec = format!("{:.7}", candidates[0].decimal);
    ensure(dec == "3.1415333", || dec)
}

fn bottema_5_3() -> Check {
    let r = run(&corpus::BOTTEMA_5_3, Mode::Bounds, 10)?;
    let (inf, sup) = bounds_of(&r)?;
    let sup = sup.ok_or("sup reported unbounded")?;
    ensure(inf.lo <= 4.0 && 4.0 <= inf.hi && inf.attained == "limit-conjectured", || format!("inf {inf:?}"))?;
    ensure(sup.value == "2+2*sqrt(2)" && sup.attained == "attained", || format!("sup {sup:?}"))
}

fn euler() -> Check {
    let r = run(&corpus::EULER_ISOSCELES, Mode::Auto, 60)?;
    let (inf, _) = bounds_of(&r)?;
    ensure(inf.value == "2", || format!("inf {inf:?}"))
}

fn wire() -> Check {
    let srv = server::start("127.0.0.1:0").map_err(|e| e.to_string())?;
    let mut s = TcpStream::connect(srv.addr).map_err(|e| e.to_string())?;
    s.set_read_timeout(Some(Duration::from_secs(15))).map_err(|e| e.to_string())?;
    let req = format!("GET /euclideansolver?{MEDIANS_QUERY} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n");
    s.write_all(req.as_bytes()).map_err(|e| e.to_string())?;
    let mut resp = String::new();
    s.read_to_string(&mut resp).map_err(|e| e.to_string())?;
    srv.stop();
    let (head, body) = resp.split_once("\r\n\r\n").ok_or("malformed response")?;
    ensure(head.starts_with("HTTP/1.1 200"), || head.lines().next().unwrap_or("").to_string())?;
    ensure(body == "m > 3/2", || format!("body {body:?}"))
}

fn random_poly(rng: &mut StdRng, vars: &[&str], terms: usize, deg: u32, coef: i64) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let m: Vec<(String, u32)> = vars.iter().map(|v| (v.to_string(), rng.gen_range(0..=deg))).collect();
        let c = loop {
            let c = rng.gen_range(-coef..=coef);
            if c != 0 {
                break c;
            }
        };
        p = &p + &Polynomial::term(rat(c, 1), Monomial::from_pairs(m));
    }
    p
}

fn properties() -> Check {
    let mut rng = StdRng::seed_from_u64(20210201);

    // Buchberger: the result is a Groebner basis and contains the input ideal
    let vars = ["x", "y", "z"];
    let mut bases = 0;
    for i in 0..200 {
        let f: Vec<Polynomial> = (0..rng.gen_range(2..=3))
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_poly(&mut rng, &vars, n, 2, 5)
            })
            .filter(|p| !p.is_zero())
            .collect();
        let ord = if i % 2 == 0 { TermOrder::grevlex(&vars) } else { TermOrder::lex(&vars) };
        let limits = GbLimits::with_deadline(Instant::now() + Duration::from_secs(5));
        let Ok(g) = buchberger(&f, &ord, &limits) else { continue };
        ensure(is_groebner_basis(&g, &ord), || format!("not a basis for {f:?}"))?;
        for p in &f {
            ensure(reduce(p, &g, &ord).0.is_zero(), || format!("{p} not in the ideal of its basis"))?;
        }
        bases += 1;
    }
    ensure(bases >= 190, || format!("only {bases} of 200 bases finished"))?;

    // interval inclusion, exact and floating
    for _ in 0..1000 {
        let n = rng.gen_range(1..=5);
        let p = random_poly(&mut rng, &vars, n, 3, 9);
        let mut exact = BTreeMap::new();
        let mut float = BTreeMap::new();
        let mut point = BTreeMap::new();
        for v in vars {
            let a = rng.gen_range(-128..=128);
            let b = a + rng.gen_range(0..=64);
            let x = rng.gen_range(a..=b);
            exact.insert(v.to_string(), Interval::new(rat(a, 32), rat(b, 32)));
            float.insert(v, Iv::new(a as f64 / 32.0, b as f64 / 32.0));
            point.insert(v.to_string(), Polynomial::constant(rat(x, 32)));
        }
        let value = p.substitute_all(&point).as_constant().ok_or("not constant")?;
        let e = geocompare::polycore::eval_with(&p, &exact);
        ensure(e.contains(&value), || format!("{p}: {value} outside {e}"))?;
        let mut acc = Iv::point(0.0);
        for (m, c) in p.terms() {
            let mut t = Iv::point(num_traits::ToPrimitive::to_f64(c).ok_or("coefficient")?);
            for (v, k) in m.factors() {
                t = t * float[v.as_str()].powi(*k);
            }
            acc = acc + t;
        }
        let lo = Rational::from_f64(acc.lo).ok_or("lo")?;
        let hi = Rational::from_f64(acc.hi).ok_or("hi")?;
        ensure(lo <= value && value <= hi, || format!("{p}: {value} outside [{}, {}]", acc.lo, acc.hi))?;
    }

    // delinearization keeps sampled solutions
    let mut samples = 0;
    for c in [corpus::MEDIANS, corpus::BOTTEMA_1_1, corpus::MIDLINE, corpus::HYPOTENUSE_MEDIAN] {
        let prog = parse_construction(c.source).map_err(|e| e.to_string())?;
        let st = prog.statement.clone().ok_or("no statement")?;
        let t = algebraize(&prog)
            .map(|a| statement_polys(&a, &st.lhs, &st.rhs))
            .and_then(|a| pin_coordinates(&a))
            .map_err(|e| e.to_string())?;
        let (out, report) = delinearize(&t);
        let subs = recorded_substitutions(&report);
        let tol = Fx::eps(120);
        let mut attempts = 0;
        let mut kept = 0;
        while kept < 25 && attempts < 200 {
            attempts += 1;
            let fig = instantiate(&prog, &mut rng, true).map_err(|e| e.to_string())?;
            let mut env = fig.assignment(&t);
            // statement variables from the figure
            let (Some(l), Some(ratio)) = (fig.lhs.clone(), fig.ratio()) else { continue };
            let sv = t.statement.as_ref().ok_or("no statement vars")?;
            env.insert(sv.w1.clone(), l);
            env.insert(sv.m.clone(), ratio);
            for p in &out.polys {
                let r = eval_fx(p, &env).ok_or_else(|| format!("{}: unassigned in {p}", c.name))?;
                ensure(r.abs() < tol, || format!("{}: {p} does not vanish", c.name))?;
            }
            for (v, e) in &subs {
                let d = &eval_fx(e, &env).ok_or("unassigned")? - &env[v];
                ensure(d.abs() < tol, || format!("{}: substitution for {v}", c.name))?;
            }
            kept += 1;
        }
        samples += kept;
    }
    ensure(samples == 100, || format!("{samples} samples"))?;

    // elimination and bounds agree on constant ratios
    for c in [corpus::PYTHAGORAS, corpus::PENTAGON_CONVEX, corpus::KOCHANSKI, corpus::MIDLINE] {
        let eq = run(&c, Mode::Eq, 10)?;
        let Outcome::ExactRatio { candidates } = &eq.outcome else {
            return Err(format!("{}: {:?}", c.name, eq.outcome));
        };
        let mu = candidates.iter().find(|x| x.witnessed).ok_or("nothing witnessed")?.decimal;
        let b = run(&c, Mode::Bounds, 10)?;
        let (inf, sup) = bounds_of(&b)?;
        let sup = sup.ok_or("unbounded")?;
        let slack = 1e-9 * mu.abs().max(1.0);
        ensure(
            inf.lo - slack <= mu && mu <= inf.hi + slack && sup.lo - slack <= mu && mu <= sup.hi + slack,
            || format!("{}: mu {mu} vs inf [{}, {}] sup [{}, {}]", c.name, inf.lo, inf.hi, sup.lo, sup.hi),
        )?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("Bottema 1.1 bounds", 10, bottema_1_1),
        ("medians inequality", 10, medians),
        ("relaxed Pythagoras", 10, pythagoras_relaxed),
        ("Pythagoras ratio", 2, pythagoras),
        ("pentagon candidates", 10, pentagon),
        ("Kochanski constant", 5, kochanski),
        ("Bottema 5.3 bounds", 10, bottema_5_3),
        ("Euler isosceles", 60, euler),
        ("wire protocol", 10, wire),
        ("property suites", 120, properties),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let r = r.and_then(|_| ensure(secs <= *budget as f64, || format!("over budget ({budget} s)")));
        match &r {
            Ok(()) => println!("criterion {:2} PASS  {name} ({secs:.2} s)", i + 1),
            Err(e) => {
                println!("criterion {:2} FAIL  {name} ({secs:.2} s): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
