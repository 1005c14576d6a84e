//! Canonical text forms.
//!
//! `2 * x.d(y) - 1/3 * theta(x) + 5`: terms in lexicographic word order,
//! coefficient `1` omitted, the unit word printed as its coefficient alone,
//! zero printed as `0`. Tensors print factors as `(u)ox(v)`.

use crate::algebra::{Elem, Sym, Tensor, Word};
use crate::scalar::Coeff;

pub fn sym_to_string(s: Sym, names: &[String]) -> String {
    let name = |i: u32| names.get(i as usize).cloned().unwrap_or_else(|| format!("g{i}"));
    match s {
        Sym::X(i) => name(i),
        Sym::D(i) => format!("d({})", name(i)),
        Sym::T(i) => format!("theta({})", name(i)),
    }
}

pub fn word_to_string(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.0.iter().map(|&s| sym_to_string(s, names)).collect::<Vec<_>>().join(".")
}

/// Joins `(coefficient, body)` pairs; an empty body stands for the unit.
fn join_terms<C: Coeff>(terms: impl Iterator<Item = (C, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let text = c.to_string();
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (abs.as_str(), body.is_empty()) {
            (_, true) => out.push_str(&abs),
            ("1", false) => out.push_str(&body),
            _ => {
                out.push_str(&abs);
                out.push_str(" * ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn elem_to_string<C: Coeff>(e: &Elem<C>, names: &[String]) -> String {
    join_terms(e.terms().map(|(w, c)| {
        let body = if w.is_empty() { String::new() } else { word_to_string(w, names) };
        (c.clone(), body)
    }))
}

pub fn tensor_to_string<C: Coeff>(t: &Tensor<C>, names: &[String]) -> String {
    join_terms(t.terms().map(|(f, c)| {
        let body = f.iter().map(|w| format!("({})", word_to_string(w, names))).collect::<Vec<_>>().join("ox");
        (c.clone(), body)
    }))
}
