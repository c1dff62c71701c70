//! Hand-transcribed example matrices with their critical sets.
//!
//! Each fixture is a complete member of `Λ_{2m}^m` plus a critical set, both
//! in the text format. The sets are checked in the test suite.

use crate::error::{Error, Result};
use crate::matrix::PartialMatrix;

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub matrix: &'static str,
    pub set: &'static str,
}

macro_rules! fixture {
    ($name:literal, $summary:literal) => {
        Fixture {
            name: $name,
            summary: $summary,
            matrix: include_str!(concat!("../fixtures/", $name, ".txt")),
            set: include_str!(concat!("../fixtures/", $name, "_cs.txt")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("fig1", "member of Λ_6^3 with a critical set of size 14"),
    fixture!("ookii", "X_8 with its staircase critical set of size 34"),
    fixture!("tryagain", "M(20) for m = 4, critical set of size 20"),
    fixture!("fig3", "X_10 with its staircase critical set of size 57"),
    fixture!("fig4", "Y_10 with its adjusted-walk critical set of size 56"),
    fixture!("filly-left", "member of Λ_6^3 with a critical set of size 15"),
    fixture!("filly-right", "member of Λ_8^4 with a critical set of size 26"),
    fixture!("suprri", "B_8 in interleaved order with a critical set of size 28"),
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

pub fn find(name: &str) -> Result<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// The fixture's matrix and critical set.
pub fn load(name: &str) -> Result<(PartialMatrix, PartialMatrix)> {
    let f = find(name)?;
    let m = PartialMatrix::parse_text(f.matrix)?;
    let c = PartialMatrix::parse_text_with_margins(f.set, m.margins())?;
    Ok((m, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse_and_nest() {
        for f in FIXTURES {
            let (m, c) = load(f.name).unwrap();
            assert!(m.is_complete(), "{}", f.name);
            assert!(c.is_subset_of(&m).unwrap(), "{}", f.name);
            assert_eq!(m.to_text(), f.matrix, "{} is in canonical form", f.name);
            let n = m.rows();
            assert!(m.margins().row_sums().iter().all(|&r| 2 * r == n));
        }
        assert!(matches!(load("nope"), Err(Error::UnknownFixture(_))));
    }
}
