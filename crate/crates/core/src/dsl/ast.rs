use super::lexer::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Num(String),
    Gen(String),
    D(String),
    Theta(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `u ox v ox …`
    Tensor(Vec<Expr>),
    Cyc(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrobeniusBody {
    Matrix(usize),
    Table {
        dim: usize,
        labels: Option<Vec<Ident>>,
        /// 1-based `(i, j)` with the coordinates of `e_i e_j`.
        mult: Vec<(usize, usize, Vec<String>)>,
        trace: Vec<String>,
        pairing: Option<Vec<Vec<String>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    PreBisymplectic { form: Ident, shift: i64 },
    Mc(Ident),
    Nondeg(Ident),
    Compatible { form: Ident, bracket: Ident, witness: Option<Expr> },
    Isotropic { form: Ident, morphism: Ident, witness: Ident },
    Rep { bracket: Ident, dim: usize },
    Legendre { name: Ident, shift: Option<i64> },
    Frobenius(Ident),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemKind {
    Algebra { name: Ident, gens: Vec<(Ident, i64)>, diffs: Vec<(Ident, Expr)> },
    Form { name: Ident, on: Option<Ident>, shift: Option<i64>, expr: Expr },
    Bracket { name: Ident, on: Option<Ident>, shift: i64, entries: Vec<(Vec<Ident>, Expr)> },
    Morphism { name: Ident, source: Ident, target: Ident, images: Vec<(Ident, Expr)> },
    Frobenius { name: Ident, body: FrobeniusBody },
    Directive(Directive),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub kind: ItemKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceFile {
    pub items: Vec<Item>,
}
