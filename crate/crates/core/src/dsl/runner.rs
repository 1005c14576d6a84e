//! Executes a parsed file: declarations build an environment, directives
//! produce report records. A failing declaration becomes an ERROR record and
//! leaves its name undefined; later directives still run.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::ast::*;
use super::lexer::Pos;
use super::parser::RESERVED;
use super::print::directive_to_source;
use crate::algebra::{Elem, Presentation, Tensor};
use crate::compat::{compat_check, form_nondeg, legendre_omega_to_pi, legendre_pi_to_omega, CompatVerdict};
use crate::double_poisson::{mc_check, nondeg_check, DoublePoisson, KBracket, NondegMode};
use crate::finite_models::{check_centrality, check_cyclic_pairing, correspondence, correspondence_inverse, PairingDatum};
use crate::forms::{check_bi_isotropic, check_pre_bisymplectic, AlgebraMorphism, FormCheck, PreBisymplecticDatum};
use crate::linalg::Matrix;
use crate::necklace::Cyclic;
use crate::polyvector::PolAlgebra;
use crate::representations::{commutativize, rep_double_bracket, FrobeniusData, RepAlgebra};
use crate::scalar::{parse_rational, Rational};
use crate::serialize::{elem_to_string, tensor_to_string};

type Q = Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "PASS-STRICT")]
    PassStrict,
    #[serde(rename = "PASS-WITNESSED")]
    PassWitnessed,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "ERROR")]
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::PassStrict => "PASS-STRICT",
            Verdict::PassWitnessed => "PASS-WITNESSED",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Error)
    }

    fn of(passed: bool) -> Self {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub directive: String,
    pub position: String,
    pub verdict: Verdict,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{:<14} {}  [{}]", r.verdict.name(), r.directive, r.position));
            if let Some(t) = r.timing_ms {
                out.push_str(&format!("  {t} ms"));
            }
            out.push('\n');
            if let Value::Object(map) = &r.details {
                for (k, v) in map {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("    {k}: {text}\n"));
                }
            }
        }
        let s = &self.summary;
        out.push_str(&format!("{} passed, {} failed, {} errors\n", s.pass, s.fail, s.error));
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    /// Form components and bracket arities above this weight are dropped.
    pub max_weight: Option<usize>,
    pub mode: NondegMode,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_weight: None, mode: NondegMode::Strict, timing: false }
    }
}

#[derive(Clone, Debug)]
struct SemanticError {
    pos: Pos,
    message: String,
}

type SResult<T> = Result<T, SemanticError>;

fn err<T>(pos: Pos, message: impl Into<String>) -> SResult<T> {
    Err(SemanticError { pos, message: message.into() })
}

#[derive(Clone, Debug)]
struct FormDecl {
    algebra: String,
    shift: Option<i64>,
    value: Cyclic<Q>,
}

#[derive(Clone, Debug)]
struct BracketDecl {
    algebra: String,
    value: DoublePoisson<Q>,
}

#[derive(Clone, Debug)]
struct FrobeniusDecl {
    data: FrobeniusData<Q>,
    pairing: Option<Matrix<Q>>,
}

#[derive(Clone, Debug)]
enum Entity {
    Algebra(Presentation<Q>),
    Form(FormDecl),
    Bracket(BracketDecl),
    Morphism(AlgebraMorphism<Q>),
    Frobenius(FrobeniusDecl),
}

impl Entity {
    fn kind(&self) -> &'static str {
        match self {
            Entity::Algebra(_) => "an algebra",
            Entity::Form(_) => "a form",
            Entity::Bracket(_) => "a bracket",
            Entity::Morphism(_) => "a morphism",
            Entity::Frobenius(_) => "a frobenius algebra",
        }
    }
}

#[derive(Default)]
struct Env {
    names: BTreeMap<String, Entity>,
    last_algebra: Option<String>,
}

/// Which symbols an expression may contain.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Algebra,
    Form,
    Polyvector,
}

enum Val {
    Elem(Elem<Q>),
    Tensor(Tensor<Q>),
}

fn eval(e: &Expr, names: &[String], ctx: Ctx) -> SResult<Val> {
    let gen = |g: &str| -> SResult<usize> {
        match names.iter().position(|n| n == g) {
            Some(i) => Ok(i),
            None => err(e.pos, format!("unknown generator `{g}`")),
        }
    };
    let elem = |v: Val, pos: Pos| -> SResult<Elem<Q>> {
        match v {
            Val::Elem(x) => Ok(x),
            Val::Tensor(_) => err(pos, "tensor used where an element is expected"),
        }
    };
    Ok(match &e.kind {
        ExprKind::Num(s) => match parse_rational(s) {
            Some(q) => Val::Elem(Elem::scalar(q)),
            None => return err(e.pos, format!("bad number `{s}`")),
        },
        ExprKind::Gen(g) => Val::Elem(Elem::x(gen(g)?)),
        ExprKind::D(g) => {
            if ctx != Ctx::Form {
                return err(e.pos, "d(…) is only allowed in forms");
            }
            Val::Elem(Elem::dx(gen(g)?))
        }
        ExprKind::Theta(g) => {
            if ctx != Ctx::Polyvector {
                return err(e.pos, "theta(…) is only allowed in polyvectors");
            }
            Val::Elem(Elem::theta(gen(g)?))
        }
        ExprKind::Cyc(inner) => {
            if ctx == Ctx::Algebra {
                return err(e.pos, "cyc(…) is only allowed in forms and polyvectors");
            }
            Val::Elem(elem(eval(inner, names, ctx)?, inner.pos)?)
        }
        ExprKind::Neg(inner) => match eval(inner, names, ctx)? {
            Val::Elem(x) => Val::Elem(-&x),
            Val::Tensor(t) => Val::Tensor(t.scale(&-Q::from_integer(1.into()))),
        },
        ExprKind::Add(l, r) | ExprKind::Sub(l, r) => {
            let sign = if matches!(e.kind, ExprKind::Sub(..)) { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) };
            match (eval(l, names, ctx)?, eval(r, names, ctx)?) {
                (Val::Elem(a), Val::Elem(b)) => {
                    let mut out = a;
                    out.add_scaled(&b, &sign);
                    Val::Elem(out)
                }
                (Val::Tensor(a), Val::Tensor(b)) if a.arity() == b.arity() => {
                    let mut out = a;
                    out.add_scaled(&b, &sign);
                    Val::Tensor(out)
                }
                (Val::Tensor(a), Val::Elem(b)) | (Val::Elem(b), Val::Tensor(a)) if b.is_zero() => Val::Tensor(a),
                _ => return err(e.pos, "terms of different tensor arity"),
            }
        }
        ExprKind::Mul(l, r) => {
            let a = elem(eval(l, names, ctx)?, l.pos)?;
            let b = elem(eval(r, names, ctx)?, r.pos)?;
            Val::Elem(&a * &b)
        }
        ExprKind::Tensor(fs) => {
            let mut t = Tensor::units(0, Q::from_integer(1.into()));
            for f in fs {
                let x = elem(eval(f, names, ctx)?, f.pos)?;
                let mut one = Tensor::zero(1);
                for (w, c) in x.terms() {
                    one.add_term(vec![w.clone()], c.clone());
                }
                t = t.tensor(&one);
            }
            Val::Tensor(t)
        }
    })
}

fn eval_elem(e: &Expr, names: &[String], ctx: Ctx) -> SResult<Elem<Q>> {
    match eval(e, names, ctx)? {
        Val::Elem(x) => Ok(x),
        Val::Tensor(_) => err(e.pos, "tensor used where an element is expected"),
    }
}

fn eval_tensor(e: &Expr, names: &[String], arity: usize) -> SResult<Tensor<Q>> {
    let t = match eval(e, names, Ctx::Algebra)? {
        Val::Tensor(t) => t,
        Val::Elem(x) if arity == 1 => {
            let mut t = Tensor::zero(1);
            for (w, c) in x.terms() {
                t.add_term(vec![w.clone()], c.clone());
            }
            t
        }
        Val::Elem(x) if x.is_zero() => Tensor::zero(arity),
        Val::Elem(_) => return err(e.pos, format!("expected a tensor with {arity} factors")),
    };
    if t.arity() != arity && !t.is_zero() {
        return err(e.pos, format!("expected a tensor with {arity} factors, found {}", t.arity()));
    }
    Ok(if t.is_zero() { Tensor::zero(arity) } else { t })
}

fn q(s: &str, pos: Pos) -> SResult<Q> {
    parse_rational(s).map_or_else(|| err(pos, format!("bad number `{s}`")), Ok)
}

impl Env {
    fn define(&mut self, name: &Ident, e: Entity) -> SResult<()> {
        if let Some(old) = self.names.get(&name.name) {
            return err(name.pos, format!("`{}` is already declared as {}", name.name, old.kind()));
        }
        if matches!(e, Entity::Algebra(_)) {
            self.last_algebra = Some(name.name.clone());
        }
        self.names.insert(name.name.clone(), e);
        Ok(())
    }

    fn get(&self, name: &Ident) -> SResult<&Entity> {
        self.names.get(&name.name).map_or_else(|| err(name.pos, format!("unknown identifier `{}`", name.name)), Ok)
    }

    fn algebra(&self, name: &Ident) -> SResult<&Presentation<Q>> {
        match self.get(name)? {
            Entity::Algebra(a) => Ok(a),
            other => err(name.pos, format!("`{}` is {}, not an algebra", name.name, other.kind())),
        }
    }

    fn form(&self, name: &Ident) -> SResult<&FormDecl> {
        match self.get(name)? {
            Entity::Form(f) => Ok(f),
            other => err(name.pos, format!("`{}` is {}, not a form", name.name, other.kind())),
        }
    }

    fn bracket(&self, name: &Ident) -> SResult<&BracketDecl> {
        match self.get(name)? {
            Entity::Bracket(b) => Ok(b),
            other => err(name.pos, format!("`{}` is {}, not a bracket", name.name, other.kind())),
        }
    }

    fn target_algebra(&self, on: &Option<Ident>, pos: Pos) -> SResult<(String, Presentation<Q>)> {
        match on {
            Some(a) => Ok((a.name.clone(), self.algebra(a)?.clone())),
            None => match &self.last_algebra {
                Some(a) => match &self.names[a] {
                    Entity::Algebra(p) => Ok((a.clone(), p.clone())),
                    _ => unreachable!("last_algebra names an algebra"),
                },
                None => err(pos, "no algebra declared before this item"),
            },
        }
    }

    fn presentation_of(&self, name: &str) -> &Presentation<Q> {
        match &self.names[name] {
            Entity::Algebra(p) => p,
            _ => unreachable!("declarations record algebra names"),
        }
    }

    fn declare(&mut self, item: &Item) -> SResult<()> {
        match &item.kind {
            ItemKind::Algebra { name, gens, diffs } => {
                let mut seen: Vec<&str> = Vec::new();
                for (g, _) in gens {
                    if RESERVED.contains(&g.name.as_str()) {
                        return err(g.pos, format!("`{}` is reserved", g.name));
                    }
                    if seen.contains(&g.name.as_str()) {
                        return err(g.pos, format!("DuplicateGenerator: `{}`", g.name));
                    }
                    seen.push(&g.name);
                }
                let names: Vec<String> = gens.iter().map(|(g, _)| g.name.clone()).collect();
                let free = Presentation::<Q>::new(gens.iter().map(|(g, d)| (g.name.clone(), *d)).collect(), Vec::new())
                    .expect("names checked above");
                let g = free.grading(0);
                let mut diff = Vec::new();
                for (x, e) in diffs {
                    let Some(i) = names.iter().position(|n| *n == x.name) else {
                        return err(x.pos, format!("unknown generator `{}`", x.name));
                    };
                    if diff.iter().any(|(n, _): &(String, Elem<Q>)| *n == x.name) {
                        return err(x.pos, format!("differential of `{}` given twice", x.name));
                    }
                    let v = eval_elem(e, &names, Ctx::Algebra)?;
                    if let Some((w, _)) = v.terms().find(|(w, _)| g.word_degree(w) != gens[i].1 - 1) {
                        return err(
                            e.pos,
                            format!("degree mismatch: d {} has degree {}, expected {}", x.name, g.word_degree(w), gens[i].1 - 1),
                        );
                    }
                    diff.push((x.name.clone(), v));
                }
                let p = Presentation::new(gens.iter().map(|(g, d)| (g.name.clone(), *d)).collect(), diff)
                    .or_else(|e| err(item.pos, e.to_string()))?;
                self.define(name, Entity::Algebra(p))
            }
            ItemKind::Form { name, on, shift, expr } => {
                let (alg, p) = self.target_algebra(on, item.pos)?;
                let e = eval_elem(expr, p.names(), Ctx::Form)?;
                let value = Cyclic::project(&e, &p.grading(0));
                self.define(name, Entity::Form(FormDecl { algebra: alg, shift: *shift, value }))
            }
            ItemKind::Bracket { name, on, shift, entries } => {
                let (alg, p) = self.target_algebra(on, item.pos)?;
                let pol = Arc::new(PolAlgebra::new(&p, *shift));
                let g = pol.grading().clone();
                let mut by_arity: BTreeMap<usize, BTreeMap<Vec<usize>, Tensor<Q>>> = BTreeMap::new();
                for (args, e) in entries {
                    let k = args.len();
                    if k < 2 {
                        return err(args[0].pos, "brackets take at least two arguments");
                    }
                    let mut tuple = Vec::new();
                    for a in args {
                        match p.index_of(&a.name) {
                            Some(i) => tuple.push(i),
                            None => return err(a.pos, format!("unknown generator `{}`", a.name)),
                        }
                    }
                    let v = eval_tensor(e, p.names(), k)?;
                    let expected = tuple.iter().map(|&i| g.degrees()[i]).sum::<i64>() + (k as i64 - 1) * pol.bracket_degree() - 1;
                    if let Some((f, _)) = v.terms().find(|(f, _)| f.iter().map(|w| g.word_degree(w)).sum::<i64>() != expected) {
                        let found: i64 = f.iter().map(|w| g.word_degree(w)).sum();
                        return err(e.pos, format!("degree mismatch: value has degree {found}, expected {expected}"));
                    }
                    if by_arity.entry(k).or_default().insert(tuple, v).is_some() {
                        return err(args[0].pos, "bracket entry given twice");
                    }
                }
                let mut brackets = Vec::new();
                for (k, table) in by_arity {
                    brackets.push(KBracket::complete(pol.clone(), k, table).or_else(|e| err(item.pos, e.to_string()))?);
                }
                let value = DoublePoisson::new(pol, brackets).or_else(|e| err(item.pos, e.to_string()))?;
                self.define(name, Entity::Bracket(BracketDecl { algebra: alg, value }))
            }
            ItemKind::Morphism { name, source, target, images } => {
                let s = self.algebra(source)?.clone();
                let t = self.algebra(target)?.clone();
                let mut imgs = vec![None; s.rank()];
                for (g, e) in images {
                    let Some(i) = s.index_of(&g.name) else {
                        return err(g.pos, format!("unknown generator `{}` of `{}`", g.name, source.name));
                    };
                    imgs[i] = Some(eval_elem(e, t.names(), Ctx::Algebra)?);
                }
                if let Some(i) = imgs.iter().position(Option::is_none) {
                    return err(item.pos, format!("no image given for `{}`", s.names()[i]));
                }
                let f = AlgebraMorphism::new(s, t, imgs.into_iter().map(Option::unwrap).collect())
                    .or_else(|e| err(item.pos, e.to_string()))?;
                self.define(name, Entity::Morphism(f))
            }
            ItemKind::Frobenius { name, body } => {
                let decl = match body {
                    FrobeniusBody::Matrix(k) => {
                        if *k == 0 {
                            return err(item.pos, "matrix size must be positive");
                        }
                        FrobeniusDecl { data: FrobeniusData::matrix(*k), pairing: None }
                    }
                    FrobeniusBody::Table { dim, labels, mult, trace, pairing } => {
                        let m = *dim;
                        let labels: Vec<String> = match labels {
                            Some(l) if l.len() == m => l.iter().map(|i| i.name.clone()).collect(),
                            Some(l) => return err(l[0].pos, format!("{} labels for dimension {m}", l.len())),
                            None => (1..=m).map(|i| format!("e{i}")).collect(),
                        };
                        let zero = Q::from_integer(0.into());
                        let mut table = vec![vec![vec![zero.clone(); m]; m]; m];
                        for (i, j, v) in mult {
                            if *i == 0 || *j == 0 || *i > m || *j > m || v.len() != m {
                                return err(item.pos, format!("bad mult entry {i} {j}"));
                            }
                            for (k, s) in v.iter().enumerate() {
                                table[i - 1][j - 1][k] = q(s, item.pos)?;
                            }
                        }
                        if trace.len() != m {
                            return err(item.pos, format!("trace has {} entries for dimension {m}", trace.len()));
                        }
                        let trace = trace.iter().map(|s| q(s, item.pos)).collect::<SResult<Vec<_>>>()?;
                        let data = FrobeniusData::algebra(labels, table, trace).or_else(|e| err(item.pos, e.to_string()))?;
                        let pairing = match pairing {
                            None => None,
                            Some(rows) => {
                                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                                    return err(item.pos, "pairing matrix has the wrong size");
                                }
                                let rows = rows
                                    .iter()
                                    .map(|r| r.iter().map(|s| q(s, item.pos)).collect::<SResult<Vec<_>>>())
                                    .collect::<SResult<Vec<_>>>()?;
                                Some(Matrix::from_rows(rows))
                            }
                        };
                        FrobeniusDecl { data, pairing }
                    }
                };
                self.define(name, Entity::Frobenius(decl))
            }
            ItemKind::Directive(_) => Ok(()),
        }
    }
}

fn truncate_form(omega: &Cyclic<Q>, shift: i64, max: Option<usize>) -> SResult<(PreBisymplecticDatum<Q>, bool)> {
    let full = PreBisymplecticDatum::from_form(shift, omega).or_else(|e| err(Pos::default(), e.to_string()))?;
    let Some(w) = max else { return Ok((full, false)) };
    let dropped = full.components.keys().any(|&i| i > w);
    let components = full.components.into_iter().filter(|(i, _)| *i <= w).collect();
    Ok((PreBisymplecticDatum { shift, components }, dropped))
}

fn truncate_bracket(b: &DoublePoisson<Q>, max: Option<usize>) -> (DoublePoisson<Q>, bool) {
    let Some(w) = max else { return (b.clone(), false) };
    let kept: Vec<_> = (2..=b.top()).filter(|&k| k <= w).filter_map(|k| b.bracket(k).cloned()).collect();
    let dropped = b.top() > w;
    (DoublePoisson::new(b.pol().clone(), kept).expect("subset of a valid structure"), dropped)
}

fn cyc_text(c: &Cyclic<Q>, names: &[String]) -> String {
    format!("cyc: {}", elem_to_string(c.lift(), names))
}

fn form_check_details(fc: &FormCheck<Q>, names: &[String]) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    if !fc.degree_errors.is_empty() {
        m.insert("degree_errors".into(), json!(fc.degree_errors));
    }
    for r in &fc.residues {
        m.insert(format!("residue[{}]", r.label), json!(cyc_text(&r.value, names)));
    }
    m
}

fn bracket_table(b: &DoublePoisson<Q>) -> Value {
    let names = b.pol().names();
    let mut m = serde_json::Map::new();
    for k in 2..=b.top() {
        if let Some(br) = b.bracket(k) {
            for (tuple, v) in br.table() {
                let args: Vec<_> = tuple.iter().map(|&i| names[i].as_str()).collect();
                m.insert(format!("{{{{{}}}}}", args.join(", ")), json!(tensor_to_string(v, names)));
            }
        }
    }
    Value::Object(m)
}

fn run_directive(env: &Env, d: &Directive, opts: &Options) -> SResult<(Verdict, Value)> {
    let mut details = serde_json::Map::new();
    let verdict = match d {
        Directive::PreBisymplectic { form, shift } => {
            let f = env.form(form)?;
            if let Some(s) = f.shift.filter(|s| s != shift) {
                return err(form.pos, format!("form `{}` is declared with shift {s}", form.name));
            }
            let p = env.presentation_of(&f.algebra);
            let (datum, dropped) = truncate_form(&f.value, *shift, opts.max_weight)?;
            let fc = check_pre_bisymplectic(p, &datum);
            details.extend(form_check_details(&fc, p.names()));
            let pol = PolAlgebra::new(p, *shift);
            let nd = form_nondeg(&pol, &datum.component(2), opts.mode);
            details.insert(format!("nondegenerate[{}]", opts.mode.name()), json!(nd.passed));
            if dropped {
                details.insert("truncated".into(), json!(true));
            }
            Verdict::of(fc.passed())
        }
        Directive::Mc(b) => {
            let (dp, dropped) = truncate_bracket(&env.bracket(b)?.value, opts.max_weight);
            let rep = mc_check(&dp);
            for (w, r) in &rep.residues {
                details.insert(format!("residue[{w}]"), json!(cyc_text(r, dp.pol().names())));
            }
            if dropped {
                details.insert("truncated".into(), json!(true));
            }
            Verdict::of(rep.passed())
        }
        Directive::Nondeg(b) => {
            let dp = &env.bracket(b)?.value;
            let zero = KBracket::zero(dp.pol().clone(), 2);
            let rep = nondeg_check(dp.bracket(2).unwrap_or(&zero), opts.mode);
            details.insert("mode".into(), json!(opts.mode.name()));
            if let Some(m) = &rep.scalar_matrix {
                let rows: Vec<Vec<String>> = (0..m.rows).map(|i| m.row(i).iter().map(|c| c.to_string()).collect()).collect();
                details.insert("matrix".into(), json!(rows));
            }
            if let Some(r) = &rep.reason {
                details.insert("reason".into(), json!(r));
            }
            Verdict::of(rep.passed)
        }
        Directive::Compatible { form, bracket, witness } => {
            let f = env.form(form)?;
            let b = env.bracket(bracket)?;
            if f.algebra != b.algebra {
                return err(bracket.pos, format!("`{}` and `{}` live on different algebras", form.name, bracket.name));
            }
            let (dp, _) = truncate_bracket(&b.value, opts.max_weight);
            let shift = dp.pol().shift();
            if let Some(s) = f.shift.filter(|&s| s != shift) {
                return err(form.pos, format!("form has shift {s}, bracket has shift {shift}"));
            }
            let (datum, _) = truncate_form(&f.value, shift, opts.max_weight)?;
            let h = match witness {
                Some(e) => {
                    let v = eval_elem(e, dp.pol().names(), Ctx::Polyvector)?;
                    Some(Cyclic::project(&v, dp.pol().grading()))
                }
                None => None,
            };
            let rep = compat_check(&datum, &dp, h.as_ref()).or_else(|e| err(Pos::default(), e.to_string()))?;
            details.insert("defect".into(), json!(cyc_text(&rep.defect, dp.pol().names())));
            if rep.degenerate {
                details.insert("degenerate".into(), json!(true));
            }
            if !rep.notes.is_empty() {
                details.insert("notes".into(), json!(rep.notes));
            }
            match rep.verdict {
                CompatVerdict::PassStrict => Verdict::PassStrict,
                CompatVerdict::PassWitnessed => Verdict::PassWitnessed,
                CompatVerdict::Fail => Verdict::Fail,
            }
        }
        Directive::Isotropic { form, morphism, witness } => {
            let f = env.form(form)?;
            let Entity::Morphism(m) = env.get(morphism)? else {
                return err(morphism.pos, format!("`{}` is not a morphism", morphism.name));
            };
            let l = env.form(witness)?;
            let shift = match (f.shift, l.shift) {
                (Some(a), Some(b)) if a != b => return err(witness.pos, format!("shifts {a} and {b} differ")),
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => return err(form.pos, "isotropy needs a shift: declare the form with `shift N`"),
            };
            if env.presentation_of(&f.algebra) != &m.source || env.presentation_of(&l.algebra) != &m.target {
                return err(morphism.pos, "morphism does not match the algebras of the forms");
            }
            let (omega, _) = truncate_form(&f.value, shift, opts.max_weight)?;
            let (lambda, _) = truncate_form(&l.value, shift, opts.max_weight)?;
            let fc = check_bi_isotropic(&omega, m, &lambda).or_else(|e| err(Pos::default(), e.to_string()))?;
            details.extend(form_check_details(&fc, m.target.names()));
            Verdict::of(fc.passed())
        }
        Directive::Rep { bracket, dim } => {
            if *dim == 0 {
                return err(bracket.pos, "dimension must be positive");
            }
            let b = env.bracket(bracket)?;
            let (dp, _) = truncate_bracket(&b.value, opts.max_weight);
            let rep = RepAlgebra::new(dp.pol().base(), &FrobeniusData::matrix(*dim)).or_else(|e| err(Pos::default(), e.to_string()))?;
            let big = rep_double_bracket(&dp, &rep).or_else(|e| err(Pos::default(), e.to_string()))?;
            let cp = commutativize(&big).or_else(|e| err(Pos::default(), e.to_string()))?;
            let names = rep.rep.names();
            details.insert("generators".into(), json!(names.len()));
            let mut table = serde_json::Map::new();
            for (&(i, j), v) in &cp.table {
                table.insert(format!("{{{}, {}}}", names[i], names[j]), json!(elem_to_string(&v.as_elem(), names)));
            }
            details.insert("poisson".into(), Value::Object(table));
            Verdict::Pass
        }
        Directive::Legendre { name, shift } => match env.get(name)? {
            Entity::Bracket(b) => {
                if shift.is_some_and(|s| s != b.value.pol().shift()) {
                    return err(name.pos, "shift differs from the bracket's shift");
                }
                let omega = legendre_pi_to_omega(&b.value).or_else(|e| err(name.pos, e.to_string()))?;
                let rep = compat_check(&omega, &b.value, None).or_else(|e| err(name.pos, e.to_string()))?;
                details.insert("form".into(), json!(cyc_text(&omega.component(2), b.value.pol().names())));
                details.insert("compatible".into(), json!(rep.verdict.name()));
                Verdict::of(rep.verdict == CompatVerdict::PassStrict)
            }
            Entity::Form(f) => {
                let Some(n) = shift.or(f.shift) else {
                    return err(name.pos, "legendre on a form needs `shift N`");
                };
                let pol = Arc::new(PolAlgebra::new(env.presentation_of(&f.algebra), n));
                let datum = PreBisymplecticDatum::from_form(n, &f.value).or_else(|e| err(name.pos, e.to_string()))?;
                let pi = legendre_omega_to_pi(pol, &datum).or_else(|e| err(name.pos, e.to_string()))?;
                let rep = compat_check(&datum, &pi, None).or_else(|e| err(name.pos, e.to_string()))?;
                details.insert("bracket".into(), bracket_table(&pi));
                details.insert("compatible".into(), json!(rep.verdict.name()));
                Verdict::of(rep.verdict == CompatVerdict::PassStrict)
            }
            other => return err(name.pos, format!("`{}` is {}, not a form or bracket", name.name, other.kind())),
        },
        Directive::Frobenius(n) => {
            let Entity::Frobenius(fd) = env.get(n)? else {
                return err(n.pos, format!("`{}` is not a frobenius algebra", n.name));
            };
            let gram = fd.pairing.clone().unwrap_or_else(|| fd.data.gram());
            let p = PairingDatum::new(fd.data.clone(), gram).or_else(|e| err(n.pos, e.to_string()))?;
            let cyc = check_cyclic_pairing(&p);
            details.insert("cyclic".into(), json!(cyc.passed));
            if let Some(f) = cyc.failures.first() {
                details.insert("cyclic_failure".into(), json!(f));
            }
            match correspondence(&p) {
                Err(_) => {
                    details.insert("nondegenerate".into(), json!(false));
                    Verdict::Fail
                }
                Ok(pi) => {
                    details.insert("nondegenerate".into(), json!(true));
                    let cen = check_centrality(&p.algebra, &pi);
                    details.insert("central".into(), json!(cen.passed));
                    if let Some(f) = cen.failures.first() {
                        details.insert("central_failure".into(), json!(f));
                    }
                    let round = correspondence_inverse(&p.algebra, &pi).is_ok_and(|back| back == p);
                    details.insert("round_trip".into(), json!(round));
                    Verdict::of(cyc.passed && cen.passed && round)
                }
            }
        }
    };
    Ok((verdict, Value::Object(details)))
}

fn error_record(directive: String, pos: Pos, e: SemanticError) -> Record {
    let at = if e.pos == Pos::default() { pos } else { e.pos };
    Record {
        directive,
        position: pos.to_string(),
        verdict: Verdict::Error,
        details: json!({ "error": format!("{at}: {}", e.message) }),
        timing_ms: None,
    }
}

pub fn run(file: &SourceFile, opts: &Options) -> Report {
    let mut env = Env::default();
    let mut records = Vec::new();
    for item in &file.items {
        match &item.kind {
            ItemKind::Directive(d) => {
                let start = Instant::now();
                let text = directive_to_source(d);
                let mut rec = match run_directive(&env, d, opts) {
                    Ok((verdict, details)) => {
                        Record { directive: text, position: item.pos.to_string(), verdict, details, timing_ms: None }
                    }
                    Err(e) => error_record(text, item.pos, e),
                };
                if opts.timing {
                    rec.timing_ms = Some(start.elapsed().as_millis() as u64);
                }
                records.push(rec);
            }
            _ => {
                if let Err(e) = env.declare(item) {
                    records.push(error_record(declaration_label(item), item.pos, e));
                }
            }
        }
    }
    let mut summary = Summary::default();
    for r in &records {
        match r.verdict {
            Verdict::Fail => summary.fail += 1,
            Verdict::Error => summary.error += 1,
            _ => summary.pass += 1,
        }
    }
    Report { records, summary }
}

fn declaration_label(item: &Item) -> String {
    match &item.kind {
        ItemKind::Algebra { name, .. } => format!("algebra {}", name.name),
        ItemKind::Form { name, .. } => format!("form {}", name.name),
        ItemKind::Bracket { name, .. } => format!("bracket {}", name.name),
        ItemKind::Morphism { name, .. } => format!("morphism {}", name.name),
        ItemKind::Frobenius { name, .. } => format!("frobenius {}", name.name),
        ItemKind::Directive(d) => directive_to_source(d),
    }
}

/// Evaluates with every kind of symbol allowed.
pub(crate) fn eval_value(e: &Expr, names: &[String]) -> Result<super::Value, (Pos, String)> {
    let all = |c| eval(e, names, c);
    let v = match all(Ctx::Form) {
        Ok(v) => v,
        Err(_) => all(Ctx::Polyvector).map_err(|e| (e.pos, e.message))?,
    };
    Ok(match v {
        Val::Elem(x) => super::Value::Element(x),
        Val::Tensor(t) => super::Value::Tensor(t),
    })
}
