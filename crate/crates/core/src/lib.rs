//! Exact computation of the bosonic form of the Ẑ-invariant of negative
//! definite plumbed 3-manifolds, together with the colored-DAG calculus whose
//! characters produce the same series through nested Weyl-type sums.

pub mod dagcat;
pub mod error;
pub mod graphio;
pub mod kgroup;
pub mod plumbing;
pub mod qseries;
pub mod treenest;
pub mod zhat;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct BookIntroduction;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/plumbings.md")]
pub struct BookPlumbings;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
pub struct BookSeries;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/nested.md")]
pub struct BookNested;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/calculus.md")]
pub struct BookCalculus;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct BookCli;
