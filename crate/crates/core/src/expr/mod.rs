//! Symbolic scalar expressions over a coordinate chart and time.

mod chart;
mod diff;
mod display;
mod eval;
mod node;
mod number;
mod parse;

pub use chart::{cosn, sinn, ChartError, CoordinateChart, ExcludedLocus};
pub use display::Printer;
pub use eval::EvalError;
pub use node::{Expression, Function, Node, Variable};
pub use number::Number;
pub use parse::{parse, ParseError};
