//! Bundled example problems.

use crate::error::{Error, Result};
use crate::problem::{Problem, ProblemSpec};

pub const EXAMPLES: &[(&str, &str)] = &[
    ("abelian", include_str!("../corpus/abelian.spec")),
    ("circle", include_str!("../corpus/circle.spec")),
    ("fourterm", include_str!("../corpus/fourterm.spec")),
    ("heisenberg", include_str!("../corpus/heisenberg.spec")),
    ("obstruction", include_str!("../corpus/obstruction.spec")),
];

pub fn names() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(n, _)| *n).collect()
}

pub fn source(name: &str) -> Result<&'static str> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::Input(format!("no bundled example named {name:?}")))
}

pub fn load(name: &str) -> Result<Problem> {
    ProblemSpec::parse(source(name)?)?.to_problem()
}
