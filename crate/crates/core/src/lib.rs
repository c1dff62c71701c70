//! Defining and critical sets of (0,1)-matrices with fixed row and column sums.

pub mod cellset;
pub mod constructions;
pub mod completion;
pub mod defsets;
pub mod error;
pub mod extremal;
pub mod fixtures;
pub mod matrix;
pub mod trades;
pub mod walks;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/intro.md")]
mod book_intro {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/matrices.md")]
mod book_matrices {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/completion.md")]
mod book_completion {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/trades.md")]
mod book_trades {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/walks.md")]
mod book_walks {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/constructions.md")]
mod book_constructions {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/extremal.md")]
mod book_extremal {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
