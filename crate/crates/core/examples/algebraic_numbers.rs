//! Real roots of a polynomial as exact algebraic numbers, with radical forms.
use geocompare::algnum::{isolate_real_roots, to_radical};
use geocompare::polycore::parse_poly;

fn main() {
    for src in ["m^4-3*m^2+1", "9*m^4-240*m^2+1492", "m^3-2"] {
        let p = parse_poly(src).unwrap();
        println!("{src}:");
        for r in isolate_real_roots(&p).unwrap() {
            let rad = to_radical(&r).map(|x| x.to_ascii()).unwrap_or_else(|| "-".into());
            println!("  {:>22}  radical {rad}", r.approx_decimal(15));
        }
    }
}
