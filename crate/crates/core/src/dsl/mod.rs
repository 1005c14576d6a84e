//! The `.ncdp` text format: declarations of algebras, forms, brackets,
//! morphisms and Frobenius algebras, and check directives run against them.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod runner;

pub use parser::{parse, parse_expr, ParseError};
pub use print::to_source;
pub use runner::{run, Options, Record, Report, Verdict};

use crate::algebra::{Elem, Grading, Tensor};
use crate::necklace::Cyclic;
use crate::scalar::Rational;
use crate::serialize::{elem_to_string, tensor_to_string};

/// A value with a canonical text form that parses back.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Element(Elem<Rational>),
    Tensor(Tensor<Rational>),
    Necklace(Cyclic<Rational>),
}

pub fn serialize_value(v: &Value, names: &[String]) -> String {
    match v {
        Value::Element(e) => elem_to_string(e, names),
        Value::Tensor(t) => tensor_to_string(t, names),
        Value::Necklace(c) => format!("cyc: {}", elem_to_string(c.lift(), names)),
    }
}

/// Inverse of [`serialize_value`]; `x`, `d(x)` and `theta(x)` are all allowed.
pub fn parse_value(text: &str, names: &[String], g: &Grading) -> Result<Value, String> {
    let (necklace, body) = match text.trim_start().strip_prefix("cyc:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let expr = parse_expr(body).map_err(|e| e.to_string())?;
    let v = runner::eval_value(&expr, names).map_err(|(pos, m)| format!("{pos}: {m}"))?;
    Ok(match v {
        Value::Element(e) if necklace => Value::Necklace(Cyclic::project(&e, g)),
        other if necklace => return Err(format!("necklace body must be an element, found {other:?}")),
        other => other,
    })
}
