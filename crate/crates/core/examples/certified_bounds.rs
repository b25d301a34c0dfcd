//! Interval branch-and-bound on Bottema's 3(ab+bc+ca) <= (a+b+c)^2 < 4(ab+bc+ca).
use std::time::{Duration, Instant};

use geocompare::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
use geocompare::ineqpath::{bounds, BoundsConfig, SupBound};

fn main() {
    let prog = parse_construction(geocompare::corpus::BOTTEMA_1_1.source).unwrap();
    let st = prog.statement.clone().unwrap();
    let t = pin_coordinates(&statement_polys(&algebraize(&prog).unwrap(), &st.lhs, &st.rhs)).unwrap();
    let cfg = BoundsConfig {
        tol: 1e-6,
        deadline: Instant::now() + Duration::from_secs(10),
    };
    let r = bounds(&t, &cfg).unwrap();
    println!("{}", r.render());
    println!("inf in {:?} ({:?})", r.inf.enclosure, r.inf.attainment);
    if let SupBound::Finite(s) = &r.sup {
        println!("sup in {:?} ({:?})", s.enclosure, s.attainment);
    }
    println!("{} boxes, converged: {}", r.boxes, r.converged);
}
