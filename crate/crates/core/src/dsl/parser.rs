//! Recursive-descent parser. Expression precedence, loosest first:
//! `+`/`-`, then `ox`, then `*`/`.`, then unary minus.

use std::fmt;

use super::ast::*;
use super::lexer::{lex, Pos, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expected.is_empty() {
            write!(f, "{}: {}", self.pos, self.found)
        } else {
            write!(f, "{}: expected {}, found {}", self.pos, self.expected.join(" or "), self.found)
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse(src: &str) -> Result<SourceFile, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError { pos: e.pos, expected: Vec::new(), found: e.message })?;
    let mut p = Parser { tokens, at: 0 };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(SourceFile { items })
}

/// Parses a standalone expression (used for value round trips).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError { pos: e.pos, expected: Vec::new(), found: e.message })?;
    let mut p = Parser { tokens, at: 0 };
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.at + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<Pos> {
        if self.peek() == &t {
            Ok(self.bump().pos)
        } else {
            self.error(&[what])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        if self.is_kw(kw) {
            Ok(self.bump().pos)
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                Ok(Ident { name, pos })
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.peek() == &Tok::Minus;
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('/') => match s.parse::<i64>() {
                Ok(v) => {
                    self.bump();
                    Ok(if neg { -v } else { v })
                }
                Err(_) => Err(ParseError { pos: self.pos(), expected: vec!["integer".into()], found: format!("out-of-range `{s}`") }),
            },
            _ => self.error(&["integer"]),
        }
    }

    fn count(&mut self) -> PResult<usize> {
        let pos = self.pos();
        let v = self.int()?;
        usize::try_from(v).map_err(|_| ParseError { pos, expected: vec!["non-negative integer".into()], found: v.to_string() })
    }

    /// A possibly signed rational literal.
    fn number(&mut self) -> PResult<String> {
        let neg = self.peek() == &Tok::Minus;
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(if neg { format!("-{s}") } else { s })
            }
            _ => self.error(&["number"]),
        }
    }

    fn vector(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut v = Vec::new();
        if self.peek() != &Tok::RBracket {
            v.push(self.number()?);
            while self.peek() == &Tok::Comma {
                self.bump();
                v.push(self.number()?);
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(v)
    }

    fn item(&mut self) -> PResult<Item> {
        let pos = self.pos();
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.error(&["declaration or directive"]);
        };
        let kind = match kw.as_str() {
            "algebra" => self.algebra()?,
            "form" => self.form()?,
            "bracket" => self.bracket()?,
            "morphism" => self.morphism()?,
            "frobenius" => self.frobenius()?,
            "check" => ItemKind::Directive(self.check()?),
            "rep" => {
                self.bump();
                let bracket = self.ident()?;
                self.keyword("dim")?;
                let dim = self.count()?;
                ItemKind::Directive(Directive::Rep { bracket, dim })
            }
            "legendre" => {
                self.bump();
                let name = self.ident()?;
                let shift = if self.is_kw("shift") {
                    self.bump();
                    Some(self.int()?)
                } else {
                    None
                };
                ItemKind::Directive(Directive::Legendre { name, shift })
            }
            _ => return self.error(&["declaration or directive"]),
        };
        if matches!(kind, ItemKind::Directive(_)) || matches!(kind, ItemKind::Form { .. }) {
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(Item { kind, pos })
    }

    fn algebra(&mut self) -> PResult<ItemKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(Tok::LBrace, "`{`")?;
        let (mut gens, mut diffs) = (Vec::new(), Vec::new());
        loop {
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            if self.is_kw("gen") {
                self.bump();
                let mut names = vec![self.ident()?];
                while self.peek() == &Tok::Comma {
                    self.bump();
                    names.push(self.ident()?);
                }
                self.expect(Tok::Colon, "`:`")?;
                self.keyword("degree")?;
                let deg = self.int()?;
                gens.extend(names.into_iter().map(|n| (n, deg)));
            } else if self.is_kw("d") {
                self.bump();
                let g = self.ident()?;
                self.expect(Tok::Eq, "`=`")?;
                diffs.push((g, self.expr()?));
            } else {
                return self.error(&["`gen`", "`d`", "`}`"]);
            }
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(ItemKind::Algebra { name, gens, diffs })
    }

    fn on_clause(&mut self) -> PResult<Option<Ident>> {
        if self.is_kw("on") {
            self.bump();
            Ok(Some(self.ident()?))
        } else {
            Ok(None)
        }
    }

    fn form(&mut self) -> PResult<ItemKind> {
        self.bump();
        let name = self.ident()?;
        let on = self.on_clause()?;
        let shift = if self.is_kw("shift") {
            self.bump();
            Some(self.int()?)
        } else {
            None
        };
        self.expect(Tok::Eq, "`=`")?;
        let expr = self.expr()?;
        Ok(ItemKind::Form { name, on, shift, expr })
    }

    fn bracket(&mut self) -> PResult<ItemKind> {
        self.bump();
        let name = self.ident()?;
        let on = self.on_clause()?;
        self.keyword("shift")?;
        let shift = self.int()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut entries = Vec::new();
        loop {
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            if self.peek() != &Tok::LDouble {
                return self.error(&["`{{`", "`}`"]);
            }
            self.bump();
            let mut args = vec![self.ident()?];
            while self.peek() == &Tok::Comma {
                self.bump();
                args.push(self.ident()?);
            }
            self.expect(Tok::RDouble, "`}}`")?;
            self.expect(Tok::Eq, "`=`")?;
            entries.push((args, self.expr()?));
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(ItemKind::Bracket { name, on, shift, entries })
    }

    fn morphism(&mut self) -> PResult<ItemKind> {
        self.bump();
        let name = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let source = self.ident()?;
        self.expect(Tok::Arrow, "`->`")?;
        let target = self.ident()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut images = Vec::new();
        loop {
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            let g = self.ident()?;
            self.expect(Tok::MapsTo, "`|->`")?;
            images.push((g, self.expr()?));
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(ItemKind::Morphism { name, source, target, images })
    }

    fn frobenius(&mut self) -> PResult<ItemKind> {
        self.bump();
        let name = self.ident()?;
        let open = self.expect(Tok::LBrace, "`{`")?;
        if self.is_kw("matrix") {
            self.bump();
            let k = self.count()?;
            self.expect(Tok::Semi, "`;`")?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(ItemKind::Frobenius { name, body: FrobeniusBody::Matrix(k) });
        }
        let (mut dim, mut labels, mut mult, mut trace, mut pairing) = (None, None, Vec::new(), None, None);
        loop {
            if self.peek() == &Tok::RBrace {
                self.bump();
                break;
            }
            let Tok::Ident(kw) = self.peek().clone() else {
                return self.error(&["`dim`", "`labels`", "`mult`", "`trace`", "`pairing`", "`}`"]);
            };
            match kw.as_str() {
                "dim" => {
                    self.bump();
                    dim = Some(self.count()?);
                }
                "labels" => {
                    self.bump();
                    let mut v = vec![self.label()?];
                    while self.peek() == &Tok::Comma {
                        self.bump();
                        v.push(self.label()?);
                    }
                    labels = Some(v);
                }
                "mult" => {
                    self.bump();
                    let i = self.count()?;
                    let j = self.count()?;
                    self.expect(Tok::Eq, "`=`")?;
                    mult.push((i, j, self.vector()?));
                }
                "trace" => {
                    self.bump();
                    trace = Some(self.vector()?);
                }
                "pairing" => {
                    self.bump();
                    self.expect(Tok::LBracket, "`[`")?;
                    let mut rows = vec![self.vector()?];
                    while self.peek() == &Tok::Comma {
                        self.bump();
                        rows.push(self.vector()?);
                    }
                    self.expect(Tok::RBracket, "`]`")?;
                    pairing = Some(rows);
                }
                _ => return self.error(&["`dim`", "`labels`", "`mult`", "`trace`", "`pairing`", "`}`"]),
            }
            self.expect(Tok::Semi, "`;`")?;
        }
        let missing = |what: &str| ParseError { pos: open, expected: vec![format!("`{what}` entry")], found: "end of block".into() };
        let dim = dim.ok_or_else(|| missing("dim"))?;
        let trace = trace.ok_or_else(|| missing("trace"))?;
        Ok(ItemKind::Frobenius { name, body: FrobeniusBody::Table { dim, labels, mult, trace, pairing } })
    }

    /// Labels may be identifiers or numerals.
    fn label(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('/') => {
                let pos = self.bump().pos;
                Ok(Ident { name: s, pos })
            }
            _ => self.ident(),
        }
    }

    fn check(&mut self) -> PResult<Directive> {
        self.bump();
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.error(&CHECKS);
        };
        let d = match kw.as_str() {
            "prebisymplectic" => {
                self.bump();
                let form = self.ident()?;
                self.keyword("shift")?;
                Directive::PreBisymplectic { form, shift: self.int()? }
            }
            "mc" => {
                self.bump();
                Directive::Mc(self.ident()?)
            }
            "nondeg" => {
                self.bump();
                Directive::Nondeg(self.ident()?)
            }
            "compatible" => {
                self.bump();
                let form = self.ident()?;
                let bracket = self.ident()?;
                let witness = if self.is_kw("witness") {
                    self.bump();
                    Some(self.expr()?)
                } else {
                    None
                };
                Directive::Compatible { form, bracket, witness }
            }
            "isotropic" => {
                self.bump();
                let form = self.ident()?;
                self.keyword("via")?;
                let morphism = self.ident()?;
                self.keyword("witness")?;
                Directive::Isotropic { form, morphism, witness: self.ident()? }
            }
            "frobenius" => {
                self.bump();
                Directive::Frobenius(self.ident()?)
            }
            _ => return self.error(&CHECKS),
        };
        Ok(d)
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.tensor()?;
        loop {
            let pos = self.pos();
            let kind = match self.peek() {
                Tok::Plus => ExprKind::Add as fn(Box<Expr>, Box<Expr>) -> ExprKind,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.tensor()?;
            lhs = Expr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn tensor(&mut self) -> PResult<Expr> {
        let first = self.product()?;
        if !self.is_kw("ox") {
            return Ok(first);
        }
        let pos = first.pos;
        let mut factors = vec![first];
        while self.is_kw("ox") {
            self.bump();
            factors.push(self.product()?);
        }
        Ok(Expr { kind: ExprKind::Tensor(factors), pos })
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Tok::Star | Tok::Dot) {
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek() == &Tok::Minus {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Num(s), pos })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if self.peek_at(1) == &Tok::LParen && matches!(name.as_str(), "d" | "theta" | "cyc") => {
                self.bump();
                self.bump();
                let kind = if name == "cyc" {
                    ExprKind::Cyc(Box::new(self.expr()?))
                } else {
                    let g = self.ident()?.name;
                    if name == "d" {
                        ExprKind::D(g)
                    } else {
                        ExprKind::Theta(g)
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr { kind, pos })
            }
            Tok::Ident(name) if !RESERVED.contains(&name.as_str()) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Gen(name), pos })
            }
            _ => self.error(&["number", "generator", "`d(`", "`theta(`", "`cyc(`", "`(`", "`-`"]),
        }
    }
}

const CHECKS: [&str; 6] = ["`prebisymplectic`", "`mc`", "`nondeg`", "`compatible`", "`isotropic`", "`frobenius`"];

/// Names that cannot be generators.
pub const RESERVED: [&str; 4] = ["d", "theta", "cyc", "ox"];
