//! Line-oriented parser with name resolution.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use supercartan::algebra::CatalogEntry;

use crate::ast::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Arity,
    Unresolved,
    Duplicate,
    Type,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Arity => "arity",
            ParseErrorKind::Unresolved => "unresolved",
            ParseErrorKind::Duplicate => "duplicate",
            ParseErrorKind::Type => "type",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {kind} error: {message}")]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Algebra,
    Split,
    Connection,
    Lagrangian,
    Gauge,
    Fda,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Algebra => "algebra",
            ValueKind::Split => "split",
            ValueKind::Connection => "connection",
            ValueKind::Lagrangian => "lagrangian",
            ValueKind::Gauge => "gauge",
            ValueKind::Fda => "fda",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    /// Integer literal; `imag` when written with a trailing `i`.
    Int { value: i64, imag: bool },
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Int { value, imag } => write!(f, "`{value}{}`", if *imag { "i" } else { "" }),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError { span: Span { line: lineno, column: col + 1 }, kind: ParseErrorKind::Syntax, message: msg };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line: lineno, column: i + 1 };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len()
                && (is_ident_char(chars[i])
                    || (chars[i] == '-' && i + 1 < chars.len() && is_ident_char(chars[i + 1]) && is_ident_char(chars[i - 1])))
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), span));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<i64>().map_err(|_| err(start, format!("integer {text} out of range")))?;
            let imag = i < chars.len() && chars[i] == 'i' && !(i + 1 < chars.len() && is_ident_char(chars[i + 1]));
            if imag {
                i += 1;
            } else if i < chars.len() && is_ident_start(chars[i]) {
                return Err(err(i, format!("unexpected `{}` after number", chars[i])));
            }
            out.push((Tok::Int { value, imag }, span));
        } else if c == '"' {
            let start = i;
            i += 1;
            let s0 = i;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(err(start, "unterminated string".into()));
            }
            out.push((Tok::Str(chars[s0..i].iter().collect()), span));
            i += 1;
        } else if "=()[],*^/+-:".contains(c) {
            out.push((Tok::Punct(c), span));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Line<'a> {
    toks: &'a [(Tok, Span)],
    pos: usize,
    end: Span,
}

impl<'a> Line<'a> {
    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError { span: self.span(), kind, message: message.into() }
    }

    fn unexpected(&self, want: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::Syntax, format!("expected {want}, found {t}")),
            None => self.error(ParseErrorKind::Syntax, format!("expected {want}, found end of line")),
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let sp = self.span();
                self.pos += 1;
                Ok((s.clone(), sp))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn keyword(&mut self, words: &[&str]) -> Result<(String, Span), ParseError> {
        let sp = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) if words.contains(&s.as_str()) => {
                self.pos += 1;
                Ok((s.clone(), sp))
            }
            Some(Tok::Ident(s)) => Err(ParseError {
                span: sp,
                kind: ParseErrorKind::Unresolved,
                message: format!("unknown form `{s}`; expected one of {}", words.join(", ")),
            }),
            _ => Err(self.unexpected(&format!("one of {}", words.join(", ")))),
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected("a string")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int { value, imag: false }) => {
                self.pos += 1;
                Ok(if neg { -value } else { *value })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }

    /// `p`, `p/q`, either part may carry the `i` suffix.
    fn unsigned_number(&mut self) -> Result<Number, ParseError> {
        let (num, imag1) = match self.peek() {
            Some(Tok::Int { value, imag }) => (*value, *imag),
            Some(Tok::Ident(s)) if s == "i" => (1, true),
            _ => return Err(self.unexpected("a number")),
        };
        self.pos += 1;
        let (den, imag2) = if self.eat('/') {
            match self.peek() {
                Some(Tok::Int { value, imag }) if *value != 0 => {
                    self.pos += 1;
                    (*value, *imag)
                }
                Some(Tok::Int { .. }) => return Err(self.error(ParseErrorKind::Syntax, "zero denominator")),
                _ => return Err(self.unexpected("a denominator")),
            }
        } else {
            (1, false)
        };
        if imag1 && imag2 {
            return Err(self.error(ParseErrorKind::Syntax, "number carries two imaginary units"));
        }
        let r = Ratio::new(num, den);
        Ok(if imag1 || imag2 { Number { re: Ratio::zero(), im: r } } else { Number::real(r) })
    }

    fn signed_number(&mut self) -> Result<Number, ParseError> {
        let neg = self.eat('-');
        let n = if self.eat('(') {
            let mut a = self.signed_number()?;
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Err(self.unexpected("`+` or `-`"));
            };
            let b = self.unsigned_number()?;
            self.expect(')')?;
            a.re += b.re * sign;
            a.im += b.im * sign;
            a
        } else {
            self.unsigned_number()?
        };
        Ok(if neg { Number { re: -n.re, im: -n.im } } else { n })
    }

    fn index(&mut self) -> Result<Vec<IndexItem>, ParseError> {
        let mut out = Vec::new();
        if !self.eat('[') {
            return Ok(out);
        }
        loop {
            if self.eat(']') {
                return Ok(out);
            }
            match self.peek() {
                Some(Tok::Ident(s)) => out.push(IndexItem::Var(s.clone())),
                Some(Tok::Int { value, imag: false }) => {
                    let v = u16::try_from(*value).map_err(|_| self.error(ParseErrorKind::Syntax, "index value out of range"))?;
                    out.push(IndexItem::Value(v));
                }
                _ => return Err(self.unexpected("an index or `]`")),
            }
            self.pos += 1;
            self.eat(',');
        }
    }

    fn selector(&mut self) -> Result<Selector, ParseError> {
        let (name, _) = self.ident()?;
        let index = self.index()?;
        let symmetry = match self.peek() {
            Some(Tok::Ident(s)) if s == "asym" => Some(BlockSymmetry::Asym),
            Some(Tok::Ident(s)) if s == "sym" => Some(BlockSymmetry::Sym),
            _ => None,
        };
        if symmetry.is_some() {
            self.pos += 1;
        }
        Ok(Selector { name, index, symmetry })
    }

    /// Comma-separated selectors up to the closing parenthesis.
    fn selectors(&mut self) -> Result<Vec<Selector>, ParseError> {
        let mut out = Vec::new();
        while self.eat(',') {
            out.push(self.selector()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (name, _) = self.ident()?;
        let index = self.index()?;
        Ok(if name == "bar" { Factor::Bar(index) } else { Factor::Form { name, index } })
    }

    fn term(&mut self, sign: i64) -> Result<Term, ParseError> {
        let starts_number = match self.peek() {
            Some(Tok::Int { .. }) | Some(Tok::Punct('(')) => true,
            Some(Tok::Ident(s)) => s == "i" && self.peek_at(1) == Some(&Tok::Punct('*')),
            _ => false,
        };
        let mut coeff = if starts_number {
            let n = self.signed_number()?;
            self.expect('*')?;
            n
        } else {
            Number::one()
        };
        if sign < 0 {
            coeff = Number { re: -coeff.re, im: -coeff.im };
        }
        let mut factors = vec![self.factor()?];
        while self.eat('^') {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors })
    }

    fn cochain(&mut self) -> Result<Cochain, ParseError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            let sp = self.span();
            let t = self.term(sign)?;
            check_summation(&t).map_err(|m| ParseError { span: sp, kind: ParseErrorKind::Syntax, message: m })?;
            terms.push(t);
            if self.eat('+') {
                sign = if self.eat('-') { -1 } else { 1 };
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(Cochain { terms });
            }
        }
    }
}

/// Each index letter of a term must occur exactly twice.
fn check_summation(t: &Term) -> Result<(), String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for f in &t.factors {
        let idx = match f {
            Factor::Bar(i) | Factor::Form { index: i, .. } => i,
        };
        for item in idx {
            if let IndexItem::Var(v) = item {
                *count.entry(v).or_default() += 1;
            }
        }
    }
    let mut bad: Vec<&str> = count.iter().filter(|(_, &n)| n != 2).map(|(v, _)| *v).collect();
    bad.sort_unstable();
    match bad.first() {
        Some(v) => Err(format!("index `{v}` must appear exactly twice in a term")),
        None => Ok(()),
    }
}

const CATALOG_ARITY: &[(&str, usize)] =
    &[("so", 2), ("iso", 2), ("co", 2), ("conformal", 2), ("super-poincare", 2), ("osp", 2), ("abelian", 1)];

struct Scope {
    names: HashMap<String, (ValueKind, Span)>,
}

impl Scope {
    fn define(&mut self, name: &str, kind: ValueKind, span: Span) -> Result<(), ParseError> {
        if let Some((_, prev)) = self.names.get(name) {
            return Err(ParseError {
                span,
                kind: ParseErrorKind::Duplicate,
                message: format!("`{name}` is already defined at {prev}"),
            });
        }
        self.names.insert(name.to_string(), (kind, span));
        Ok(())
    }

    fn resolve(&self, name: &str, span: Span, want: &[ValueKind]) -> Result<ValueKind, ParseError> {
        match self.names.get(name) {
            None => Err(ParseError { span, kind: ParseErrorKind::Unresolved, message: format!("`{name}` is not defined") }),
            Some((k, _)) if want.contains(k) => Ok(*k),
            Some((k, _)) => Err(ParseError {
                span,
                kind: ParseErrorKind::Type,
                message: format!(
                    "`{name}` is a {k}, expected {}",
                    want.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" or ")
                ),
            }),
        }
    }
}

/// Parses and resolves a whole document; the first error aborts.
pub fn parse_document(src: &str) -> Result<SpecDocument, ParseError> {
    let mut scope = Scope { names: HashMap::new() };
    let mut statements = Vec::new();
    for (k, text) in src.lines().enumerate() {
        let lineno = k + 1;
        let toks = lex(text, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let end = Span { line: lineno, column: text.chars().count() + 1 };
        let mut line = Line { toks: &toks, pos: 0, end };
        let span = line.span();
        let kind = statement(&mut line, &mut scope)?;
        line.done()?;
        statements.push(Statement { kind, span });
    }
    Ok(SpecDocument { statements })
}

fn reference(line: &mut Line, scope: &Scope, want: &[ValueKind]) -> Result<String, ParseError> {
    let (name, sp) = line.ident()?;
    scope.resolve(&name, sp, want)?;
    Ok(name)
}

fn statement(line: &mut Line, scope: &mut Scope) -> Result<StatementKind, ParseError> {
    use ValueKind as V;
    let (kw, _) = line.keyword(&["algebra", "split", "connection", "lagrangian", "gauge", "fda", "extend", "check"])?;
    match kw.as_str() {
        "algebra" => {
            // resolve the right-hand side before defining the name
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let (form, _) = line.keyword(&["catalog", "mutate", "perturb"])?;
            line.expect('(')?;
            let expr = match form.as_str() {
                "catalog" => {
                    let csp = line.span();
                    let cat = line.string()?;
                    let mut params = Vec::new();
                    while line.eat(',') {
                        params.push(line.int()?);
                    }
                    let close = line.span();
                    line.expect(')')?;
                    match CATALOG_ARITY.iter().find(|(n, _)| *n == cat) {
                        None => {
                            return Err(ParseError {
                                span: csp,
                                kind: ParseErrorKind::Unresolved,
                                message: format!("unknown catalog algebra {cat:?}"),
                            })
                        }
                        Some((_, k)) if *k != params.len() => {
                            return Err(ParseError {
                                span: close,
                                kind: ParseErrorKind::Arity,
                                message: format!("catalog {cat:?} takes {k} parameters, got {}", params.len()),
                            })
                        }
                        _ => {}
                    }
                    CatalogEntry::parse(&cat, &params)
                        .map_err(|e| ParseError { span: csp, kind: ParseErrorKind::Type, message: e.to_string() })?;
                    AlgebraExpr::Catalog { name: cat, params }
                }
                "mutate" => {
                    let base = reference(line, scope, &[V::Algebra])?;
                    let mut labels = Vec::new();
                    for _ in 0..3 {
                        line.expect(',')?;
                        labels.push(line.string()?);
                    }
                    line.expect(',')?;
                    let delta = line.signed_number()?;
                    line.expect(')')?;
                    let [a, b, c]: [String; 3] = labels.try_into().unwrap();
                    AlgebraExpr::Mutate { base, a, b, c, delta }
                }
                _ => {
                    let base = reference(line, scope, &[V::Algebra])?;
                    line.expect(')')?;
                    AlgebraExpr::Perturb { base }
                }
            };
            scope.define(&name, V::Algebra, sp)?;
            Ok(StatementKind::Algebra { name, expr })
        }
        "split" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let (form, _) = line.keyword(&["desitter", "subalgebra"])?;
            line.expect('(')?;
            let algebra = reference(line, scope, &[V::Algebra])?;
            let expr = if form == "desitter" {
                line.expect(',')?;
                let asp = line.span();
                let k = line.int()?;
                let axis = u16::try_from(k)
                    .map_err(|_| ParseError { span: asp, kind: ParseErrorKind::Type, message: format!("axis {k} is negative") })?;
                line.expect(')')?;
                SplitExpr::DeSitter { algebra, axis }
            } else {
                let selectors = line.selectors()?;
                if selectors.is_empty() {
                    return Err(line.error(ParseErrorKind::Arity, "subalgebra needs at least one selector"));
                }
                SplitExpr::Subalgebra { algebra, selectors }
            };
            scope.define(&name, V::Split, sp)?;
            Ok(StatementKind::Split { name, expr })
        }
        "connection" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let (form, _) = line.keyword(&["flat", "softened"])?;
            line.expect('(')?;
            let algebra = reference(line, scope, &[V::Algebra])?;
            line.expect(')')?;
            scope.define(&name, V::Connection, sp)?;
            Ok(StatementKind::Connection { name, softened: form == "softened", algebra })
        }
        "lagrangian" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let words: Vec<&str> = LagrangianKind::ALL.iter().map(|k| k.keyword()).collect();
            let (form, _) = line.keyword(&words)?;
            let kind = *LagrangianKind::ALL.iter().find(|k| k.keyword() == form).unwrap();
            line.expect('(')?;
            let connection = reference(line, scope, &[V::Connection])?;
            line.expect(')')?;
            scope.define(&name, V::Lagrangian, sp)?;
            Ok(StatementKind::Lagrangian { name, kind, connection })
        }
        "gauge" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            line.keyword(&["on"])?;
            line.expect('(')?;
            let connection = reference(line, scope, &[V::Connection])?;
            let selectors = line.selectors()?;
            if selectors.is_empty() {
                return Err(line.error(ParseErrorKind::Arity, "gauge needs at least one selector"));
            }
            scope.define(&name, V::Gauge, sp)?;
            Ok(StatementKind::Gauge { name, connection, selectors })
        }
        "fda" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let (form, _) = line.keyword(&["base", "d11"])?;
            let expr = if form == "d11" {
                FdaExpr::D11
            } else {
                line.expect('(')?;
                let algebra = reference(line, scope, &[V::Algebra])?;
                let relative = line.selectors()?;
                FdaExpr::Base { algebra, relative }
            };
            scope.define(&name, V::Fda, sp)?;
            Ok(StatementKind::Fda { name, expr })
        }
        "extend" => {
            let (name, sp) = line.ident()?;
            line.expect('=')?;
            let base = reference(line, scope, &[V::Fda])?;
            line.keyword(&["with"])?;
            let (potential, _) = line.ident()?;
            line.expect(':')?;
            let cochain = line.cochain()?;
            scope.define(&name, V::Fda, sp)?;
            Ok(StatementKind::Extend { name, base, potential, cochain })
        }
        _ => {
            let words = [
                "jacobi", "nilpotency", "bianchi", "desitter", "reductive", "variation", "invariance", "noether", "closure",
                "fierz",
            ];
            let all: Vec<&str> = words.iter().chain(SUITES.iter()).copied().collect();
            let (form, _) = line.keyword(&all)?;
            if SUITES.contains(&form.as_str()) {
                return Ok(StatementKind::Check(CheckExpr::Suite(form)));
            }
            line.expect('(')?;
            let one = |line: &mut Line, want: &[ValueKind]| -> Result<String, ParseError> {
                let r = reference(line, scope, want)?;
                line.expect(')')?;
                Ok(r)
            };
            let expr = match form.as_str() {
                "jacobi" => CheckExpr::Jacobi(one(line, &[V::Algebra])?),
                "nilpotency" => CheckExpr::Nilpotency(one(line, &[V::Algebra, V::Connection])?),
                "bianchi" => CheckExpr::Bianchi(one(line, &[V::Algebra, V::Connection])?),
                "desitter" => CheckExpr::DeSitter(one(line, &[V::Split])?),
                "reductive" => CheckExpr::Reductive(one(line, &[V::Split])?),
                "variation" => CheckExpr::Variation(one(line, &[V::Lagrangian])?),
                "closure" => CheckExpr::Closure(one(line, &[V::Fda])?),
                "fierz" => {
                    let (id, sp) = line.ident()?;
                    if !FIERZ_IDENTITIES.contains(&id.as_str()) {
                        return Err(ParseError {
                            span: sp,
                            kind: ParseErrorKind::Unresolved,
                            message: format!("unknown identity `{id}`; expected one of {}", FIERZ_IDENTITIES.join(", ")),
                        });
                    }
                    line.expect(')')?;
                    CheckExpr::Fierz(id)
                }
                _ => {
                    let lagrangian = reference(line, scope, &[V::Lagrangian])?;
                    line.expect(',')?;
                    let gauge = reference(line, scope, &[V::Gauge])?;
                    if form == "invariance" {
                        line.expect(')')?;
                        CheckExpr::Invariance { lagrangian, gauge }
                    } else {
                        let vanish = line.selectors()?;
                        CheckExpr::Noether { lagrangian, gauge, vanish }
                    }
                }
            };
            Ok(StatementKind::Check(expr))
        }
    }
}
