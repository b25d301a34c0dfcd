//! The shipped example constructions and the benchmark suite built from them.

use crate::frontend::Mode;

/// One named construction with the answer the comparison should give.
#[derive(Clone, Copy, Debug)]
pub struct CorpusCase {
    pub name: &'static str,
    pub source: &'static str,
    /// Expected plain-text result (`m > 3/2`, `m = 1`, ...).
    pub expected: Option<&'static str>,
    pub timeout_s: u64,
    pub mode: Mode,
}

macro_rules! case {
    ($name:literal, $expected:expr, $t:expr) => {
        case!($name, $expected, $t, Mode::Auto)
    };
    ($name:literal, $expected:expr, $t:expr, $mode:expr) => {
        CorpusCase {
            name: $name,
            source: include_str!(concat!("../data/", $name, ".gct")),
            expected: $expected,
            timeout_s: $t,
            mode: $mode,
        }
    };
}

pub const BOTTEMA_1_1: CorpusCase = case!("bottema_1_1", Some("3 <= m < 4"), 10);
pub const MEDIANS: CorpusCase = case!("medians", Some("m > 3/2"), 10);
pub const PYTHAGORAS_RELAXED: CorpusCase = case!("pythagoras_relaxed", Some("m > 1/2"), 10);
pub const PYTHAGORAS: CorpusCase = case!("pythagoras", Some("m = 1"), 2);
pub const PENTAGON: CorpusCase = case!(
    "pentagon",
    Some("m = (sqrt(5)-1)/2 or m = (1+sqrt(5))/2"),
    10,
    Mode::Eq
);
pub const PENTAGON_CONVEX: CorpusCase = case!("pentagon_convex", Some("m = (1+sqrt(5))/2"), 10);
pub const KOCHANSKI: CorpusCase = case!("kochanski", Some("m = sqrt(40/3-2*sqrt(3))"), 5);
pub const BOTTEMA_5_3: CorpusCase = case!("bottema_5_3", Some("4 < m <= 2+2*sqrt(2)"), 10);
pub const EULER_ISOSCELES: CorpusCase = case!("euler_isosceles", Some("m >= 2"), 60);
pub const MIDLINE: CorpusCase = case!("midline", Some("m = 1/2"), 5);
pub const HYPOTENUSE_MEDIAN: CorpusCase = case!("hypotenuse_median", Some("m = 1/2"), 5);
pub const TRIANGLE_INEQUALITY: CorpusCase = case!("triangle_inequality", Some("m > 1"), 10);
pub const SQUARE_DIAGONAL: CorpusCase = case!("square_diagonal", Some("m = sqrt(2)"), 5);

/// The benchmark suite.
pub const SUITE: [CorpusCase; 12] = [
    BOTTEMA_1_1,
    MEDIANS,
    PYTHAGORAS_RELAXED,
    PYTHAGORAS,
    PENTAGON,
    PENTAGON_CONVEX,
    KOCHANSKI,
    BOTTEMA_5_3,
    EULER_ISOSCELES,
    MIDLINE,
    HYPOTENUSE_MEDIAN,
    TRIANGLE_INEQUALITY,
];

/// Every shipped construction, suite first.
pub fn all() -> Vec<CorpusCase> {
    let mut v = SUITE.to_vec();
    v.push(SQUARE_DIAGONAL);
    v
}

pub fn by_name(name: &str) -> Option<CorpusCase> {
    all().into_iter().find(|c| c.name == name)
}
