//! Command-line surface: parsing, dispatch and reports.

pub mod parse;
pub mod run;

pub use parse::{
    parse_operator, parse_rational, parse_ratfun_n, parse_ratfun_x, parse_seq_expr, parse_shift_operator, Operator,
    SyntaxError,
};
pub use run::{run, Command, Report, Status};
