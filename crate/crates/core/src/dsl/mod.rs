//! Textual form of the intention DSL (`.icb` files).
//!
//! ```text
//! contract "Vehicle Auction" on ethereum {
//!   participant "Owner" creator { }
//!   participant "Bidder" {
//!     deposit: decimal
//!   }
//!   asset "Vehicle" { }
//!   transaction "Place-bid" { }
//!   tranrel "Place-bid" -> "Bidder"
//!   condition on "Place-bid": Bidder.deposit >= 10
//! }
//! ```
//!
//! [`parse`] reports every syntax error it can find, recovering at block
//! boundaries. [`serialize`] emits the canonical layout; the two are inverse
//! on every shape-valid model.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{IntentionModel, Operand};

pub use printer::serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}, found {}", self.line, self.column, self.expected, self.found)
    }
}

pub fn parse(source: &str) -> Result<IntentionModel, Vec<SyntaxError>> {
    parser::Parser::new(source).parse_model()
}

/// Parses a single condition operand such as `Vehicle.price`, `"sold"` or `10`.
pub fn parse_operand(source: &str) -> Result<Operand, SyntaxError> {
    parser::Parser::new(source).parse_operand()
}

#[cfg(test)]
mod tests;
