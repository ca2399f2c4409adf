use num_rational::Ratio;
use proptest::prelude::*;
use supercartan_cli::ast::*;
use supercartan_cli::{builtin, parse_document, render, ParseErrorKind};

#[test]
fn smoke() {
    let doc = parse_document("algebra g = catalog(\"so\", 1, 4)\ncheck jacobi(g)\n").unwrap();
    assert_eq!(doc.statements.len(), 2);
    assert_eq!(doc.statements[1].span, Span { line: 2, column: 1 });
    assert_eq!(doc.statements[1].kind, StatementKind::Check(CheckExpr::Jacobi("g".into())));
}

#[test]
fn empty_and_comments() {
    assert!(parse_document("").unwrap().statements.is_empty());
    assert!(parse_document("# nothing\n\n   # here\n").unwrap().statements.is_empty());
}

fn error(src: &str) -> (ParseErrorKind, usize, usize) {
    let e = parse_document(src).unwrap_err();
    (e.kind, e.span.line, e.span.column)
}

#[test]
fn diagnostics() {
    assert_eq!(error("algebra g = catalog(\"so\", 1)"), (ParseErrorKind::Arity, 1, 28));
    assert_eq!(error("algebra g = catalog(\"sl\", 1, 2)"), (ParseErrorKind::Unresolved, 1, 21));
    assert_eq!(error("algebra g = catalog(\"so\", -1, 2)").0, ParseErrorKind::Type);
    assert_eq!(error("\ncheck jacobi(h)"), (ParseErrorKind::Unresolved, 2, 14));
    assert_eq!(error("algebra g = catalog(\"so\", 1, 4)\nalgebra g = perturb(g)"), (ParseErrorKind::Duplicate, 2, 9));
    assert_eq!(error("algebra g = catalog(\"so\", 1, 4)\ncheck variation(g)").0, ParseErrorKind::Type);
    assert_eq!(error("algebra g = catalog(\"so\", 1, 4) extra").0, ParseErrorKind::Syntax);
    assert_eq!(error("theorem x").0, ParseErrorKind::Unresolved);
    assert_eq!(error("check fierz(d5)").0, ParseErrorKind::Unresolved);
    assert_eq!(error("algebra g = perturb(g)").0, ParseErrorKind::Unresolved);
    assert_eq!(error("fda F = d11\nextend G = F with A : bar[a] ^ P[b]").0, ParseErrorKind::Syntax);
}

#[test]
fn builtins_round_trip() {
    for name in builtin::NAMES {
        let doc = parse_document(builtin::builtin(name).unwrap()).unwrap();
        let text = render(&doc);
        assert_eq!(parse_document(&text).unwrap(), doc);
        assert_eq!(render(&parse_document(&text).unwrap()), text);
    }
}

const CATALOG: [(&str, &[i64]); 5] =
    [("so", &[1, 4]), ("iso", &[1, 3]), ("super-poincare", &[4, 1]), ("abelian", &[1]), ("osp", &[1, 4])];

fn number(a: i8, b: i8) -> Number {
    let d = i64::from(b.unsigned_abs() % 5 + 1);
    let r = Ratio::new(i64::from(a), d);
    match b.rem_euclid(3) {
        0 => Number::real(r),
        1 => Number { re: Ratio::from_integer(0), im: r },
        _ => Number { re: r, im: Ratio::new(i64::from(b), 7) },
    }
}

fn selector(a: u8) -> Selector {
    let (name, index) = match a % 4 {
        0 => ("M", vec![IndexItem::Var("a".into()), IndexItem::Var("b".into())]),
        1 => ("P", vec![IndexItem::Value(u16::from(a % 3))]),
        2 => ("P", vec![]),
        _ => ("M", vec![IndexItem::Value(0), IndexItem::Var("c".into())]),
    };
    let symmetry = match (a / 4) % 3 {
        1 if !index.is_empty() => Some(BlockSymmetry::Asym),
        2 if !index.is_empty() => Some(BlockSymmetry::Sym),
        _ => None,
    };
    Selector { name: name.into(), index, symmetry }
}

fn cochain(a: u8, b: i8) -> Cochain {
    let v = |s: &str| IndexItem::Var(s.into());
    let mut terms = vec![Term {
        coeff: number(b, b.wrapping_add(1)),
        factors: vec![Factor::Bar(vec![v("a"), v("b")]), Factor::Form { name: "P".into(), index: vec![v("a")] }, Factor::Form {
            name: "P".into(),
            index: vec![v("b")],
        }],
    }];
    if a % 2 == 1 {
        terms.push(Term { coeff: number(1, b), factors: vec![Factor::Form { name: "A".into(), index: vec![] }] });
    }
    Cochain { terms }
}

/// Builds a well-scoped document from a choice tape.
fn document(tape: &[(u8, u8, i8)]) -> SpecDocument {
    let mut names: Vec<(String, &str)> = Vec::new();
    let mut out = Vec::new();
    let pick = |names: &[(String, &str)], kind: &str, k: u8| -> Option<String> {
        let c: Vec<&String> = names.iter().filter(|(_, t)| *t == kind).map(|(n, _)| n).collect();
        (!c.is_empty()).then(|| c[k as usize % c.len()].clone())
    };
    for (i, &(op, k, x)) in tape.iter().enumerate() {
        let fresh = format!("x{i}");
        let alg = pick(&names, "algebra", k);
        let conn = pick(&names, "connection", k);
        let lag = pick(&names, "lagrangian", k);
        let gauge = pick(&names, "gauge", k);
        let split = pick(&names, "split", k);
        let fda = pick(&names, "fda", k);
        let kind = match (op % 12, alg, conn, lag, gauge, split, fda) {
            (1, Some(a), ..) => Some((
                "algebra",
                StatementKind::Algebra {
                    name: fresh.clone(),
                    expr: AlgebraExpr::Mutate { base: a, a: "M[0 1]".into(), b: "P[0]".into(), c: "P[1]".into(), delta: number(x, k as i8) },
                },
            )),
            (2, Some(a), ..) => Some(("algebra", StatementKind::Algebra { name: fresh.clone(), expr: AlgebraExpr::Perturb { base: a } })),
            (3, Some(a), ..) => Some(("connection", StatementKind::Connection { name: fresh.clone(), softened: x % 2 == 0, algebra: a })),
            (4, _, Some(c), ..) => {
                let kind = LagrangianKind::ALL[k as usize % 6];
                Some(("lagrangian", StatementKind::Lagrangian { name: fresh.clone(), kind, connection: c }))
            }
            (5, _, Some(c), ..) => Some((
                "gauge",
                StatementKind::Gauge { name: fresh.clone(), connection: c, selectors: vec![selector(k), selector(x as u8)] },
            )),
            (6, Some(a), ..) => {
                let expr = if x % 2 == 0 {
                    SplitExpr::DeSitter { algebra: a, axis: u16::from(k % 5) }
                } else {
                    SplitExpr::Subalgebra { algebra: a, selectors: vec![selector(k)] }
                };
                Some(("split", StatementKind::Split { name: fresh.clone(), expr }))
            }
            (7, a, ..) => {
                let expr = match a {
                    Some(a) if x % 2 == 0 => FdaExpr::Base { algebra: a, relative: (0..k % 3).map(selector).collect() },
                    _ => FdaExpr::D11,
                };
                Some(("fda", StatementKind::Fda { name: fresh.clone(), expr }))
            }
            (8, _, _, _, _, _, Some(f)) => Some((
                "fda",
                StatementKind::Extend { name: fresh.clone(), base: f, potential: "A".into(), cochain: cochain(k, x) },
            )),
            (9, _, _, Some(l), g, ..) => Some((
                "",
                StatementKind::Check(match g {
                    Some(g) if x % 2 == 0 => CheckExpr::Noether { lagrangian: l, gauge: g, vanish: vec![selector(k)] },
                    Some(g) => CheckExpr::Invariance { lagrangian: l, gauge: g },
                    None => CheckExpr::Variation(l),
                }),
            )),
            (10, a, c, ..) => Some((
                "",
                StatementKind::Check(match (a, c) {
                    (Some(a), _) if x % 3 == 0 => CheckExpr::Jacobi(a),
                    (_, Some(c)) if x % 3 == 1 => CheckExpr::Bianchi(c),
                    (Some(a), _) => CheckExpr::Nilpotency(a),
                    _ => CheckExpr::Suite(SUITES[k as usize % SUITES.len()].into()),
                }),
            )),
            (11, _, _, _, _, s, f) => Some((
                "",
                StatementKind::Check(match (s, f) {
                    (Some(s), _) if x % 3 == 0 => CheckExpr::DeSitter(s),
                    (Some(s), _) if x % 3 == 1 => CheckExpr::Reductive(s),
                    (_, Some(f)) => CheckExpr::Closure(f),
                    _ => CheckExpr::Fierz(FIERZ_IDENTITIES[k as usize % 3].into()),
                }),
            )),
            _ => {
                let (n, p) = CATALOG[k as usize % CATALOG.len()];
                Some((
                    "algebra",
                    StatementKind::Algebra { name: fresh.clone(), expr: AlgebraExpr::Catalog { name: n.into(), params: p.to_vec() } },
                ))
            }
        };
        if let Some((t, kind)) = kind {
            if !t.is_empty() {
                names.push((fresh, t));
            }
            out.push(Statement { kind, span: Span::default() });
        }
    }
    SpecDocument { statements: out }
}

proptest! {
    #[test]
    fn parse_render_round_trip(tape in prop::collection::vec(any::<(u8, u8, i8)>(), 0..30)) {
        let doc = document(&tape);
        let text = render(&doc);
        let back = parse_document(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &doc);
        for (i, st) in back.statements.iter().enumerate() {
            prop_assert_eq!(st.span, Span { line: i + 1, column: 1 });
        }
    }
}
