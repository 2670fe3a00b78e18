//! Exact solver and support-distribution experiments for symmetric
//! zero-sum games.

pub mod action_set;
pub mod error;
pub mod experiments;
pub mod game;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod sampling;
pub mod solver;

pub use action_set::ActionSet;
pub use error::{Error, Result};
pub use game::{RationalVector, SkewGame, Strategy};
pub use rational::Rational;
pub use solver::{analyze, SolveReport};

// Compile and run the guide's snippets as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/games.md")]
    struct Games;
    #[doc = include_str!("../../../book/src/pfaffians.md")]
    struct Pfaffians;
    #[doc = include_str!("../../../book/src/solving.md")]
    struct Solving;
    #[doc = include_str!("../../../book/src/sampling.md")]
    struct Sampling;
    #[doc = include_str!("../../../book/src/experiments.md")]
    struct Experiments;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
