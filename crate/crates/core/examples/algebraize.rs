//! Translates a .gct construction into its polynomial system.
//!
//!     cargo run --example algebraize [FILE]
use geocompare::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};

fn main() {
    let src = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable file"),
        None => geocompare::corpus::MEDIANS.source.to_string(),
    };
    let prog = parse_construction(&src).expect("valid construction");
    let st = prog.statement.clone().expect("a compare statement");
    let t = statement_polys(&algebraize(&prog).unwrap(), &st.lhs, &st.rhs);
    println!("polys={}", t.render_listing());
    let p = pin_coordinates(&t).unwrap();
    println!("pinned={}", p.render_listing());
    let mut keys: Vec<_> = t.varmap.iter().collect();
    keys.sort_by_key(|(_, v)| (v.len(), v.to_string()));
    for (k, v) in keys {
        println!("  {v:>4} = {k}");
    }
}
