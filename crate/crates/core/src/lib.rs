//! Migrates class emulations in legacy JavaScript to ES6 `class` syntax.
//!
//! The pipeline is `parse -> detect -> analyze -> migrate -> churn`:
//!
//! * [`js`] splits files into statements, recognizing the constructs that
//!   emulate classes and passing everything else through byte for byte.
//! * [`detect`] finds constructor functions and their methods and computes
//!   class counts and class density.
//! * [`cases`] finds constructs that need special handling: those with a
//!   known rewrite and those that have no class-syntax equivalent.
//! * [`migrate`] applies the three class rules to a fixed point.
//! * [`churn`] measures the size of the change with a line diff.

pub mod cases;
pub mod churn;
pub mod cli;
pub mod detect;
pub mod error;
pub mod exec;
pub mod files;
pub mod js;
pub mod migrate;
pub mod report;

pub use error::{Error, ParseError, Result};
