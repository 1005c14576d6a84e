//! Canonical source text for a parsed file. Positions are not preserved,
//! so `parse(to_source(f))` equals `f` up to positions.

use std::fmt::Write;

use super::ast::*;

fn prec(e: &Expr) -> u8 {
    match e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 0,
        ExprKind::Tensor(_) => 1,
        ExprKind::Mul(..) => 2,
        ExprKind::Neg(_) => 3,
        _ => 4,
    }
}

fn child(e: &Expr, min: u8) -> String {
    let s = expr_to_source(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn expr_to_source(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(s) => s.clone(),
        ExprKind::Gen(g) => g.clone(),
        ExprKind::D(g) => format!("d({g})"),
        ExprKind::Theta(g) => format!("theta({g})"),
        ExprKind::Cyc(inner) => format!("cyc({})", expr_to_source(inner)),
        ExprKind::Neg(inner) => format!("-{}", child(inner, 3)),
        ExprKind::Add(l, r) => format!("{} + {}", child(l, 0), child(r, 1)),
        ExprKind::Sub(l, r) => format!("{} - {}", child(l, 0), child(r, 1)),
        ExprKind::Mul(l, r) => format!("{} * {}", child(l, 2), child(r, 3)),
        ExprKind::Tensor(fs) => fs.iter().map(|f| child(f, 2)).collect::<Vec<_>>().join(" ox "),
    }
}

fn vector(v: &[String]) -> String {
    format!("[{}]", v.join(", "))
}

fn shift_clause(shift: Option<i64>) -> String {
    shift.map(|n| format!(" shift {n}")).unwrap_or_default()
}

pub fn to_source(f: &SourceFile) -> String {
    let mut out = String::new();
    for item in &f.items {
        match &item.kind {
            ItemKind::Algebra { name, gens, diffs } => {
                writeln!(out, "algebra {} {{", name.name).unwrap();
                for (g, deg) in gens {
                    writeln!(out, "  gen {} : degree {deg};", g.name).unwrap();
                }
                for (g, e) in diffs {
                    writeln!(out, "  d {} = {};", g.name, expr_to_source(e)).unwrap();
                }
                out.push_str("}\n");
            }
            ItemKind::Form { name, on, shift, expr } => {
                let on = on.as_ref().map(|a| format!(" on {}", a.name)).unwrap_or_default();
                writeln!(out, "form {}{on}{} = {};", name.name, shift_clause(*shift), expr_to_source(expr)).unwrap();
            }
            ItemKind::Bracket { name, on, shift, entries } => {
                let on = on.as_ref().map(|a| format!(" on {}", a.name)).unwrap_or_default();
                writeln!(out, "bracket {}{on} shift {shift} {{", name.name).unwrap();
                for (args, e) in entries {
                    let args: Vec<_> = args.iter().map(|a| a.name.as_str()).collect();
                    writeln!(out, "  {{{{{}}}}} = {};", args.join(", "), expr_to_source(e)).unwrap();
                }
                out.push_str("}\n");
            }
            ItemKind::Morphism { name, source, target, images } => {
                writeln!(out, "morphism {} : {} -> {} {{", name.name, source.name, target.name).unwrap();
                for (g, e) in images {
                    writeln!(out, "  {} |-> {};", g.name, expr_to_source(e)).unwrap();
                }
                out.push_str("}\n");
            }
            ItemKind::Frobenius { name, body } => {
                writeln!(out, "frobenius {} {{", name.name).unwrap();
                match body {
                    FrobeniusBody::Matrix(k) => writeln!(out, "  matrix {k};").unwrap(),
                    FrobeniusBody::Table { dim, labels, mult, trace, pairing } => {
                        writeln!(out, "  dim {dim};").unwrap();
                        if let Some(l) = labels {
                            let l: Vec<_> = l.iter().map(|i| i.name.as_str()).collect();
                            writeln!(out, "  labels {};", l.join(", ")).unwrap();
                        }
                        for (i, j, v) in mult {
                            writeln!(out, "  mult {i} {j} = {};", vector(v)).unwrap();
                        }
                        writeln!(out, "  trace {};", vector(trace)).unwrap();
                        if let Some(rows) = pairing {
                            let rows: Vec<_> = rows.iter().map(|r| vector(r)).collect();
                            writeln!(out, "  pairing [{}];", rows.join(", ")).unwrap();
                        }
                    }
                }
                out.push_str("}\n");
            }
            ItemKind::Directive(d) => {
                out.push_str(&directive_to_source(d));
                out.push_str(";\n");
            }
        }
    }
    out
}

/// The directive as written, without the terminator.
pub fn directive_to_source(d: &Directive) -> String {
    match d {
        Directive::PreBisymplectic { form, shift } => format!("check prebisymplectic {} shift {shift}", form.name),
        Directive::Mc(b) => format!("check mc {}", b.name),
        Directive::Nondeg(b) => format!("check nondeg {}", b.name),
        Directive::Compatible { form, bracket, witness } => {
            let w = witness.as_ref().map(|e| format!(" witness {}", expr_to_source(e))).unwrap_or_default();
            format!("check compatible {} {}{w}", form.name, bracket.name)
        }
        Directive::Isotropic { form, morphism, witness } => {
            format!("check isotropic {} via {} witness {}", form.name, morphism.name, witness.name)
        }
        Directive::Rep { bracket, dim } => format!("rep {} dim {dim}", bracket.name),
        Directive::Legendre { name, shift } => format!("legendre {}{}", name.name, shift_clause(*shift)),
        Directive::Frobenius(n) => format!("check frobenius {}", n.name),
    }
}
