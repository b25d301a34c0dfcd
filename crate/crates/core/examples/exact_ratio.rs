//! Elimination path: the constant ratio of a regular pentagon's diagonal to
//! its side, and Kochanski's approximation of pi.
use geocompare::corpus;
use geocompare::frontend::{compare_source, CompareConfig, Mode};

fn main() {
    let cfg = CompareConfig {
        mode: Mode::Eq,
        ..Default::default()
    };
    for case in [corpus::PENTAGON, corpus::KOCHANSKI] {
        let r = compare_source(case.source, &cfg).unwrap();
        println!("{}:", case.name);
        print!("{}", r.report());
    }
}
