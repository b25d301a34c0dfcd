//! Full pipeline on a construction given inline, printed as JSON.
use geocompare::frontend::{compare_source, CompareConfig};

const SRC: &str = "\
# the two medians from A and B against the side AB
point A; point B; point C
midpoint D B C; midpoint E A C
segment c A B; segment g B E; segment f A D
compare f+g vs c
";

fn main() {
    let r = compare_source(SRC, &CompareConfig::default()).unwrap();
    println!("{}", r.render_relation());
    println!("{}", r.to_json());
}
