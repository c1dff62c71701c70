use std::io::Read;

use anyhow::{bail, Context, Result};
use critset::fixtures;
use critset::matrix::{MarginSpec, PartialMatrix};

use crate::{MatrixInput, PairInput};

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// A matrix in either format; text needs a header unless it is complete.
pub fn read_matrix(path: &str) -> Result<PartialMatrix> {
    let text = read_source(path)?;
    let m = if is_json(&text) { PartialMatrix::from_json(&text) } else { PartialMatrix::parse_text(&text) };
    m.with_context(|| format!("parsing {path}"))
}

/// A partial matrix whose margins default to `margins`.
pub fn read_set(path: &str, margins: &MarginSpec) -> Result<PartialMatrix> {
    let text = read_source(path)?;
    let d = if is_json(&text) {
        let d = PartialMatrix::from_json(&text).with_context(|| format!("parsing {path}"))?;
        if d.margins() != margins {
            bail!("{path}: margins differ from the matrix");
        }
        d
    } else {
        PartialMatrix::parse_text_with_margins(&text, margins).with_context(|| format!("parsing {path}"))?
    };
    Ok(d)
}

pub fn complete_matrix(m: PartialMatrix, what: &str) -> Result<PartialMatrix> {
    if !m.is_complete() {
        bail!("{what} is not a complete member of its class");
    }
    Ok(m)
}

pub fn pair(input: &PairInput) -> Result<(PartialMatrix, PartialMatrix)> {
    if let Some(name) = &input.fixture {
        return Ok(fixtures::load(name)?);
    }
    let (Some(mp), Some(sp)) = (&input.matrix, &input.set) else {
        bail!("give --matrix and --set, or --fixture");
    };
    let m = complete_matrix(read_matrix(mp)?, mp)?;
    let d = read_set(sp, m.margins())?;
    Ok((m, d))
}

pub fn matrix(input: &MatrixInput) -> Result<PartialMatrix> {
    if let Some(name) = &input.fixture {
        return Ok(fixtures::load(name)?.0);
    }
    let Some(mp) = &input.matrix else { bail!("give --matrix or --fixture") };
    complete_matrix(read_matrix(mp)?, mp)
}
