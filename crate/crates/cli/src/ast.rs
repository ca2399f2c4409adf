//! Statements of a check document and their canonical rendering.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Statements compare by content only; spans are diagnostics.
#[derive(Clone, Debug)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: Span,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecDocument {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StatementKind {
    Algebra { name: String, expr: AlgebraExpr },
    Split { name: String, expr: SplitExpr },
    Connection { name: String, softened: bool, algebra: String },
    Lagrangian { name: String, kind: LagrangianKind, connection: String },
    Gauge { name: String, connection: String, selectors: Vec<Selector> },
    Fda { name: String, expr: FdaExpr },
    Extend { name: String, base: String, potential: String, cochain: Cochain },
    Check(CheckExpr),
}

impl StatementKind {
    pub fn defined_name(&self) -> Option<&str> {
        match self {
            StatementKind::Algebra { name, .. }
            | StatementKind::Split { name, .. }
            | StatementKind::Connection { name, .. }
            | StatementKind::Lagrangian { name, .. }
            | StatementKind::Gauge { name, .. }
            | StatementKind::Fda { name, .. }
            | StatementKind::Extend { name, .. } => Some(name),
            StatementKind::Check(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraExpr {
    Catalog { name: String, params: Vec<i64> },
    /// `C^a_{bc} += delta`, generators given by label.
    Mutate { base: String, a: String, b: String, c: String, delta: Number },
    /// The standard single-entry perturbation of `base`.
    Perturb { base: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitExpr {
    DeSitter { algebra: String, axis: u16 },
    Subalgebra { algebra: String, selectors: Vec<Selector> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagrangianKind {
    EinsteinCartan,
    MacDowellMansouri,
    Euler,
    Sugra4,
    Topological,
    ChernSimons,
}

impl LagrangianKind {
    pub const ALL: [LagrangianKind; 6] = [
        LagrangianKind::EinsteinCartan,
        LagrangianKind::MacDowellMansouri,
        LagrangianKind::Euler,
        LagrangianKind::Sugra4,
        LagrangianKind::Topological,
        LagrangianKind::ChernSimons,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            LagrangianKind::EinsteinCartan => "einstein_cartan",
            LagrangianKind::MacDowellMansouri => "macdowell_mansouri",
            LagrangianKind::Euler => "euler",
            LagrangianKind::Sugra4 => "sugra4",
            LagrangianKind::Topological => "topological",
            LagrangianKind::ChernSimons => "chern_simons",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FdaExpr {
    Base { algebra: String, relative: Vec<Selector> },
    D11,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSymmetry {
    Asym,
    Sym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexItem {
    Var(String),
    Value(u16),
}

/// A generator family such as `M[a b] asym`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    pub name: String,
    pub index: Vec<IndexItem>,
    pub symmetry: Option<BlockSymmetry>,
}

impl Selector {
    /// A selector without brackets matches every index of its name.
    pub fn matches(&self, name: &str, index: &[u16]) -> bool {
        if name != self.name {
            return false;
        }
        if self.index.is_empty() && self.symmetry.is_none() {
            return true;
        }
        if index.len() != self.index.len() {
            return false;
        }
        let mut bound: Vec<(&str, u16)> = Vec::new();
        for (item, &v) in self.index.iter().zip(index) {
            match item {
                IndexItem::Value(x) if *x != v => return false,
                IndexItem::Value(_) => {}
                IndexItem::Var(l) => match bound.iter().find(|(y, _)| y == l) {
                    Some((_, w)) if *w != v => return false,
                    Some(_) => {}
                    None => bound.push((l, v)),
                },
            }
        }
        match self.symmetry {
            Some(BlockSymmetry::Asym) => index.windows(2).all(|w| w[0] < w[1]),
            Some(BlockSymmetry::Sym) => index.windows(2).all(|w| w[0] <= w[1]),
            None => true,
        }
    }
}

/// Gaussian rational `re + im i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Number {
    pub re: Ratio<i64>,
    pub im: Ratio<i64>,
}

impl Number {
    pub fn real(r: Ratio<i64>) -> Self {
        Self { re: r, im: Ratio::zero() }
    }

    pub fn one() -> Self {
        Self::real(Ratio::one())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// `ψ̄ Γ_I ψ` with lowered indices.
    Bar(Vec<IndexItem>),
    /// A generator form or potential with upper indices.
    Form { name: String, index: Vec<IndexItem> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Number,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckExpr {
    Jacobi(String),
    Nilpotency(String),
    Bianchi(String),
    DeSitter(String),
    Reductive(String),
    Variation(String),
    Invariance { lagrangian: String, gauge: String },
    Noether { lagrangian: String, gauge: String, vanish: Vec<Selector> },
    Closure(String),
    Fierz(String),
    Suite(String),
}

pub const SUITES: [&str; 4] = ["all-catalog-jacobi", "all-catalog-nilpotency", "all-catalog-bianchi", "all-catalog-mutations"];

pub const FIERZ_IDENTITIES: [&str; 3] = ["d4-triple", "d11", "d4-control"];

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &Ratio<i64>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_ratio(f, &self.re),
            (true, false) => {
                write_ratio(f, &self.im)?;
                write!(f, "i")
            }
            (false, false) => {
                write!(f, "(")?;
                write_ratio(f, &self.re)?;
                write!(f, "{}", if self.im.is_negative() { " - " } else { " + " })?;
                write_ratio(f, &self.im.abs())?;
                write!(f, "i)")
            }
        }
    }
}

fn write_index(f: &mut fmt::Formatter<'_>, idx: &[IndexItem]) -> fmt::Result {
    write!(f, "[")?;
    for (k, i) in idx.iter().enumerate() {
        if k > 0 {
            write!(f, " ")?;
        }
        match i {
            IndexItem::Var(v) => write!(f, "{v}")?,
            IndexItem::Value(x) => write!(f, "{x}")?,
        }
    }
    write!(f, "]")
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.index.is_empty() {
            write_index(f, &self.index)?;
        }
        match self.symmetry {
            Some(BlockSymmetry::Asym) => write!(f, " asym"),
            Some(BlockSymmetry::Sym) => write!(f, " sym"),
            None => Ok(()),
        }
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Bar(idx) => {
                write!(f, "bar")?;
                write_index(f, idx)
            }
            Factor::Form { name, index } => {
                write!(f, "{name}")?;
                if !index.is_empty() {
                    write_index(f, index)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} * {}", t.coeff, t.factors.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ^ "))?;
        }
        Ok(())
    }
}

impl fmt::Display for CheckExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckExpr::Jacobi(x) => write!(f, "jacobi({x})"),
            CheckExpr::Nilpotency(x) => write!(f, "nilpotency({x})"),
            CheckExpr::Bianchi(x) => write!(f, "bianchi({x})"),
            CheckExpr::DeSitter(x) => write!(f, "desitter({x})"),
            CheckExpr::Reductive(x) => write!(f, "reductive({x})"),
            CheckExpr::Variation(x) => write!(f, "variation({x})"),
            CheckExpr::Invariance { lagrangian, gauge } => write!(f, "invariance({lagrangian}, {gauge})"),
            CheckExpr::Noether { lagrangian, gauge, vanish } => {
                write!(f, "noether({lagrangian}, {gauge}")?;
                for s in vanish {
                    write!(f, ", {s}")?;
                }
                write!(f, ")")
            }
            CheckExpr::Closure(x) => write!(f, "closure({x})"),
            CheckExpr::Fierz(x) => write!(f, "fierz({x})"),
            CheckExpr::Suite(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::Algebra { name, expr } => match expr {
                AlgebraExpr::Catalog { name: cat, params } => {
                    write!(f, "algebra {name} = catalog({cat:?}")?;
                    for p in params {
                        write!(f, ", {p}")?;
                    }
                    write!(f, ")")
                }
                AlgebraExpr::Mutate { base, a, b, c, delta } => {
                    write!(f, "algebra {name} = mutate({base}, {a:?}, {b:?}, {c:?}, {delta})")
                }
                AlgebraExpr::Perturb { base } => write!(f, "algebra {name} = perturb({base})"),
            },
            StatementKind::Split { name, expr } => match expr {
                SplitExpr::DeSitter { algebra, axis } => write!(f, "split {name} = desitter({algebra}, {axis})"),
                SplitExpr::Subalgebra { algebra, selectors } => {
                    write!(f, "split {name} = subalgebra({algebra}, {})", list(selectors))
                }
            },
            StatementKind::Connection { name, softened, algebra } => {
                write!(f, "connection {name} = {}({algebra})", if *softened { "softened" } else { "flat" })
            }
            StatementKind::Lagrangian { name, kind, connection } => {
                write!(f, "lagrangian {name} = {}({connection})", kind.keyword())
            }
            StatementKind::Gauge { name, connection, selectors } => {
                write!(f, "gauge {name} = on({connection}, {})", list(selectors))
            }
            StatementKind::Fda { name, expr } => match expr {
                FdaExpr::Base { algebra, relative } => {
                    write!(f, "fda {name} = base({algebra}")?;
                    for s in relative {
                        write!(f, ", {s}")?;
                    }
                    write!(f, ")")
                }
                FdaExpr::D11 => write!(f, "fda {name} = d11"),
            },
            StatementKind::Extend { name, base, potential, cochain } => {
                write!(f, "extend {name} = {base} with {potential} : {cochain}")
            }
            StatementKind::Check(c) => write!(f, "check {c}"),
        }
    }
}

/// Canonical text, one statement per line.
pub fn render(doc: &SpecDocument) -> String {
    doc.statements.iter().map(|s| format!("{}\n", s.kind)).collect()
}
