//! Runs the builtin suite and writes bench.csv and bench.html to the
//! current directory.
use geocompare::corpus::SUITE;
use geocompare::frontend::bench::{run_benchmarks, BenchCase};
use geocompare::frontend::CompareConfig;

fn main() -> std::io::Result<()> {
    let cases: Vec<BenchCase> = SUITE.iter().map(BenchCase::from).collect();
    let report = run_benchmarks(&cases, &CompareConfig::default());
    std::fs::write("bench.csv", report.to_csv())?;
    std::fs::write("bench.html", report.to_html())?;
    for r in &report.rows {
        println!("{:<20} {:<8} {}", r.name, r.status, r.result);
    }
    println!("{} of {} passed", report.passed(), report.rows.len());
    Ok(())
}
