//! Reduced Groebner basis and an elimination ideal.
use geocompare::polycore::{buchberger, eliminate, parse_poly_list, GbLimits, TermOrder};

fn main() {
    let f = parse_poly_list("x^2+y^2-1,x-y").unwrap();
    let gb = buchberger(&f, &TermOrder::lex(&["x", "y"]), &GbLimits::default()).unwrap();
    println!("lex basis of <x^2+y^2-1, x-y>:");
    for g in &gb {
        println!("  {g}");
    }
    // circle meets line y = 2x: what is left for y alone
    let f = parse_poly_list("x^2+y^2-5,y-2*x").unwrap();
    let e = eliminate(&f, &["x".to_string()], &GbLimits::default()).unwrap();
    println!("eliminating x: {}", e.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
}
