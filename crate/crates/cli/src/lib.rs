//! Expression language, interactive session and batch checks on top of the
//! `twistlaurent` kernel.

pub mod config;
pub mod error;
pub mod parse;
pub mod session;

pub use config::{Check, Cli};
pub use error::CliError;
pub use parse::{parse, parse_statement, Expr, ExprKind, Statement};
pub use session::{OutputFormat, Session, Value};
