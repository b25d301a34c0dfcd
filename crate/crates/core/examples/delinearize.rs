//! Prints the delinearization log of the medians construction.
use geocompare::construct::{algebraize, parse_construction, pin_coordinates, statement_polys};
use geocompare::delin::delinearize;

fn main() {
    let prog = parse_construction(geocompare::corpus::MEDIANS.source).unwrap();
    let st = prog.statement.clone().unwrap();
    let t = pin_coordinates(&statement_polys(&algebraize(&prog).unwrap(), &st.lhs, &st.rhs)).unwrap();
    let (_, report) = delinearize(&t);
    print!("{}", report.render());
}
