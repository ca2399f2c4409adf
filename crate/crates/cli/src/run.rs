//! Evaluation of a resolved document.

use std::collections::HashMap;
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use supercartan::algebra::{analyze_split, catalog_algebra, jacobi_mutation, validate_algebra, SplitReport, CATALOG_SUITE};
use supercartan::cartan::{bianchi_check, compare_with_poincare, de_sitter_split, soften, soften_unchecked, ConnectionModel, DeSitterSplit, Mode};
use supercartan::clifford::{build_gamma, fierz_residual, named_identity};
use supercartan::fda::{check_fda_closure, d11_base, FdaSpec};
use supercartan::forms::FormPoly;
use supercartan::variational::{
    abelian_chern_simons, abelian_topological, einstein_cartan, euler_density, gauge_check, macdowell_mansouri,
    noether_current, sugra4, vary, GaugeCheck, JetSpace, LagrangianForm, OnShellRuleSet,
};
use supercartan::{Coeff, Error, GammaRep, GaussianRational as Q, Scalar, SuperAlgebra};

use crate::ast::*;
use crate::report::{CheckReport, CheckResult, Status};

const RESIDUAL_LIMIT: usize = 600;
const SPLIT_PARAMETER: &str = "lambda";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub jobs: usize,
    pub timeout: Duration,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1, timeout: Duration::from_secs(600) }
    }
}

enum SplitValue {
    DeSitter(DeSitterSplit),
    Sub(SplitReport),
}

enum Value {
    Algebra(SuperAlgebra),
    Split { algebra: SuperAlgebra, split: SplitValue },
    Connection(ConnectionModel<Q>),
    Lagrangian { form: LagrangianForm<Q>, model: ConnectionModel<Q>, connection: String },
    Gauge { connection: String, subset: Vec<usize> },
    Fda { spec: FdaSpec<Q>, rep: Option<GammaRep> },
}

/// Failed definitions keep their message so dependents can report it.
type Env = HashMap<String, Result<Arc<Value>, String>>;

struct Outcome {
    passed: bool,
    residual: Option<String>,
}

impl Outcome {
    fn pass() -> Self {
        Self { passed: true, residual: None }
    }

    fn from(passed: bool, residual: impl FnOnce() -> String) -> Self {
        if passed {
            Self::pass()
        } else {
            Self { passed: false, residual: Some(residual()) }
        }
    }
}

enum Failure {
    /// A refused construction: the mathematics said no.
    Refused(String),
    Error(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Refused(m) => Failure::Refused(m),
            other => Failure::Error(other.to_string()),
        }
    }
}

fn truncate(s: String) -> String {
    if s.chars().count() <= RESIDUAL_LIMIT {
        return s;
    }
    let mut t: String = s.chars().take(RESIDUAL_LIMIT).collect();
    t.push_str(" ...");
    t
}

fn lookup<'a>(env: &'a Env, name: &str) -> Result<&'a Value, Failure> {
    match env.get(name) {
        Some(Ok(v)) => Ok(v),
        Some(Err(m)) => Err(Failure::Error(format!("`{name}` failed: {m}"))),
        None => Err(Failure::Error(format!("`{name}` is not defined"))),
    }
}

fn wrong(name: &str, want: &str) -> Failure {
    Failure::Error(format!("`{name}` is not a {want}"))
}

fn algebra<'a>(env: &'a Env, name: &str) -> Result<&'a SuperAlgebra, Failure> {
    match lookup(env, name)? {
        Value::Algebra(a) => Ok(a),
        _ => Err(wrong(name, "algebra")),
    }
}

fn connection<'a>(env: &'a Env, name: &str) -> Result<&'a ConnectionModel<Q>, Failure> {
    match lookup(env, name)? {
        Value::Connection(m) => Ok(m),
        _ => Err(wrong(name, "connection")),
    }
}

fn fda<'a>(env: &'a Env, name: &str) -> Result<(&'a FdaSpec<Q>, Option<&'a GammaRep>), Failure> {
    match lookup(env, name)? {
        Value::Fda { spec, rep } => Ok((spec, rep.as_ref())),
        _ => Err(wrong(name, "fda")),
    }
}

fn select(alg: &SuperAlgebra, selectors: &[Selector]) -> Vec<usize> {
    (0..alg.len())
        .filter(|&i| {
            let g = &alg.generators()[i];
            selectors.iter().any(|s| s.matches(&g.name, &g.index))
        })
        .collect()
}

fn to_q(n: &Number) -> Q {
    let r = |x: &Ratio<i64>| Q::from_ratio(*x.numer(), *x.denom());
    r(&n.re) + Q::imag_unit() * r(&n.im)
}

/// Spinor representation matching an algebra with odd generators.
fn representation(alg: &SuperAlgebra) -> Result<Option<GammaRep>, Failure> {
    if alg.count_by_parity().1 == 0 {
        return Ok(None);
    }
    let Some(d) = alg.dimension else { return Ok(None) };
    let sig = alg.signature.unwrap_or((1, d - 1));
    Ok(Some(build_gamma(d, sig)?))
}

fn define(env: &Env, kind: &StatementKind) -> Result<Value, Failure> {
    Ok(match kind {
        StatementKind::Algebra { expr, .. } => Value::Algebra(match expr {
            AlgebraExpr::Catalog { name, params } => catalog_algebra(name, params)?,
            AlgebraExpr::Mutate { base, a, b, c, delta } => {
                let alg = algebra(env, base)?;
                let find = |l: &str| alg.find(l).ok_or_else(|| Failure::Error(format!("{} has no generator {l}", alg.name)));
                alg.mutate(find(a)?, find(b)?, find(c)?, Scalar::constant(to_q(delta)))?
            }
            AlgebraExpr::Perturb { base } => jacobi_mutation(algebra(env, base)?)?,
        }),
        StatementKind::Split { expr, .. } => match expr {
            SplitExpr::DeSitter { algebra: a, axis } => {
                let alg = algebra(env, a)?;
                Value::Split { algebra: alg.clone(), split: SplitValue::DeSitter(de_sitter_split(alg, *axis, SPLIT_PARAMETER)?) }
            }
            SplitExpr::Subalgebra { algebra: a, selectors } => {
                let alg = algebra(env, a)?;
                let sub = select(alg, selectors);
                Value::Split { algebra: alg.clone(), split: SplitValue::Sub(analyze_split(alg, &sub, None)?) }
            }
        },
        StatementKind::Connection { softened, algebra: a, .. } => {
            Value::Connection(soften(algebra(env, a)?, if *softened { Mode::Softened } else { Mode::Flat })?)
        }
        StatementKind::Lagrangian { kind, connection: c, .. } => {
            let model = connection(env, c)?;
            let form = match kind {
                LagrangianKind::EinsteinCartan => einstein_cartan(model, &Scalar::param("Lambda"))?,
                LagrangianKind::MacDowellMansouri => macdowell_mansouri(model, &Scalar::param("eps"), &Scalar::param("l_inv"))?,
                LagrangianKind::Euler => euler_density(model)?,
                LagrangianKind::Sugra4 => {
                    let rep = build_gamma::<Q>(4, (1, 3))?;
                    sugra4(model, &rep, &-Q::imag_unit())?
                }
                LagrangianKind::Topological => abelian_topological(model)?,
                LagrangianKind::ChernSimons => abelian_chern_simons(model)?,
            };
            Value::Lagrangian { form, model: model.clone(), connection: c.clone() }
        }
        StatementKind::Gauge { connection: c, selectors, .. } => {
            let subset = select(&connection(env, c)?.algebra, selectors);
            if subset.is_empty() {
                return Err(Failure::Error("gauge selectors match no generator".into()));
            }
            Value::Gauge { connection: c.clone(), subset }
        }
        StatementKind::Fda { expr, .. } => match expr {
            FdaExpr::D11 => Value::Fda { spec: d11_base()?, rep: Some(build_gamma(11, (1, 10))?) },
            FdaExpr::Base { algebra: a, relative } => {
                let alg = algebra(env, a)?;
                let model = soften(alg, Mode::Flat)?;
                Value::Fda { spec: FdaSpec::new(&model, &select(alg, relative))?, rep: representation(alg)? }
            }
        },
        StatementKind::Extend { base, potential, cochain, .. } => {
            let (spec, rep) = fda(env, base)?;
            let poly = build_cochain(spec, rep, cochain)?;
            Value::Fda { spec: spec.extend(&poly, potential, &[], &[])?, rep: rep.cloned() }
        }
        StatementKind::Check(_) => unreachable!("checks are not definitions"),
    })
}

fn index_range(spec: &FdaSpec<Q>, rep: Option<&GammaRep>) -> Result<u16, Failure> {
    if let Some(r) = rep {
        return Ok(r.dim as u16);
    }
    let alg = &spec.base.algebra;
    alg.dimension
        .or(alg.signature.map(|(r, s)| r + s))
        .map(|d| d as u16)
        .ok_or_else(|| Failure::Error(format!("{} has no index range for summation", alg.name)))
}

/// Expands the summation convention over the full index range.
fn build_cochain(spec: &FdaSpec<Q>, rep: Option<&GammaRep>, c: &Cochain) -> Result<FormPoly<Q>, Failure> {
    let n = index_range(spec, rep)?;
    let mut bilinears: HashMap<Vec<usize>, FormPoly<Q>> = HashMap::new();
    let mut total = FormPoly::zero();
    for term in &c.terms {
        let mut vars: Vec<&str> = Vec::new();
        for f in &term.factors {
            let idx = match f {
                Factor::Bar(i) | Factor::Form { index: i, .. } => i,
            };
            for item in idx {
                if let IndexItem::Var(v) = item {
                    if !vars.contains(&v.as_str()) {
                        vars.push(v);
                    }
                }
            }
        }
        let coeff = Scalar::constant(to_q(&term.coeff));
        let mut values = vec![0u16; vars.len()];
        loop {
            let resolve = |idx: &[IndexItem]| -> Vec<u16> {
                idx.iter()
                    .map(|i| match i {
                        IndexItem::Value(x) => *x,
                        IndexItem::Var(v) => values[vars.iter().position(|w| w == v).unwrap()],
                    })
                    .collect()
            };
            let mut acc = FormPoly::constant(coeff.clone());
            for f in &term.factors {
                let part = match f {
                    Factor::Bar(idx) => {
                        let rep = rep.ok_or_else(|| Failure::Error("bar needs a spinor representation".into()))?;
                        let v: Vec<usize> = resolve(idx).into_iter().map(usize::from).collect();
                        if (1..v.len()).any(|i| v[..i].contains(&v[i])) {
                            acc = FormPoly::zero();
                            break;
                        }
                        if !bilinears.contains_key(&v) {
                            bilinears.insert(v.clone(), spec.bilinear(rep, &v)?);
                        }
                        bilinears[&v].clone()
                    }
                    Factor::Form { name, index } => spec.form(name, &resolve(index))?,
                };
                acc = acc.wedge(&part, &spec.space);
                if acc.is_zero() {
                    break;
                }
            }
            total.add_assign(&acc);
            // odometer over the summed letters
            let mut k = 0;
            while k < values.len() {
                values[k] += 1;
                if values[k] < n {
                    break;
                }
                values[k] = 0;
                k += 1;
            }
            if k == values.len() {
                break;
            }
        }
    }
    Ok(total)
}

fn nonzero_blocks(blocks: &[(String, FormPoly<Q>)], space: &supercartan::forms::FormSpace) -> String {
    blocks
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(l, r)| format!("{l}: {}", r.render(space)))
        .collect::<Vec<_>>()
        .join("; ")
}

fn suite_algebras() -> Result<Vec<SuperAlgebra>, Failure> {
    CATALOG_SUITE.iter().map(|(n, p)| Ok(catalog_algebra(n, p)?)).collect()
}

fn suite<F>(f: F) -> Result<Outcome, Failure>
where
    F: Fn(&SuperAlgebra) -> Result<bool, Failure> + Sync,
{
    let algs = suite_algebras()?;
    let results: Vec<(String, bool)> =
        algs.par_iter().map(|a| f(a).map(|ok| (a.name.clone(), ok))).collect::<Result<_, _>>()?;
    let bad: Vec<String> = results.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    Ok(Outcome::from(bad.is_empty(), || format!("failing: {}", bad.join(", "))))
}

fn check(env: &Env, expr: &CheckExpr) -> Result<Outcome, Failure> {
    match expr {
        CheckExpr::Jacobi(a) => {
            let alg = algebra(env, a)?;
            let r = validate_algebra(alg)?;
            Ok(Outcome::from(r.passed(), || {
                let mut parts = vec![format!(
                    "{} Jacobi failures, {} antisymmetry defects, {} parity violations",
                    r.jacobi.len(),
                    r.antisymmetry.len(),
                    r.parity.len()
                )];
                if let Some(f) = r.jacobi.first() {
                    let g = alg.generators();
                    let (x, y, z) = f.triple;
                    let terms: Vec<String> = f.residual.iter().map(|(a, c)| format!("({c}) {}", g[*a].label())).collect();
                    parts.push(format!("J({}, {}, {}) = {}", g[x].label(), g[y].label(), g[z].label(), terms.join(" + ")));
                }
                parts.join("; ")
            }))
        }
        CheckExpr::Nilpotency(x) | CheckExpr::Bianchi(x) => {
            let bianchi = matches!(expr, CheckExpr::Bianchi(_));
            let owned;
            let model = match lookup(env, x)? {
                Value::Algebra(a) => {
                    owned = soften_unchecked(a, if bianchi { Mode::Softened } else { Mode::Flat })?;
                    &owned
                }
                Value::Connection(m) => m,
                _ => return Err(wrong(x, "algebra or connection")),
            };
            if bianchi && model.mode == Mode::Flat {
                return Err(Failure::Error(format!("`{x}` is flat; Bianchi identities need a softened connection")));
            }
            let r = if bianchi { bianchi_check(model)? } else { model.nilpotency()? };
            Ok(Outcome::from(r.passed(), || r.render(&model.space)))
        }
        CheckExpr::DeSitter(s) | CheckExpr::Reductive(s) => {
            let (alg, split) = match lookup(env, s)? {
                Value::Split { algebra, split } => (algebra, split),
                _ => return Err(wrong(s, "split")),
            };
            let report = match split {
                SplitValue::DeSitter(d) => &d.split,
                SplitValue::Sub(r) => r,
            };
            if let CheckExpr::Reductive(_) = expr {
                return Ok(Outcome::from(report.is_reductive, || {
                    if report.is_subalgebra_closed { "complement is not invariant".into() } else { "subalgebra is not closed".into() }
                }));
            }
            let SplitValue::DeSitter(d) = split else {
                return Err(Failure::Error(format!("`{s}` is not a de Sitter split")));
            };
            let sp = d.apply(&soften(alg, Mode::Flat)?)?;
            let cmp = compare_with_poincare(&sp, SPLIT_PARAMETER)?;
            Ok(Outcome::from(cmp.passed(), || {
                format!(
                    "curvature: {} | contraction: {}",
                    nonzero_blocks(&cmp.curvature, &sp.space),
                    nonzero_blocks(&cmp.contraction, &sp.space)
                )
            }))
        }
        CheckExpr::Variation(l) => {
            let Value::Lagrangian { form, model, .. } = lookup(env, l)? else { return Err(wrong(l, "lagrangian")) };
            let v = vary(form, model)?;
            let r = v.round_trip_residual()?;
            Ok(Outcome::from(r.is_zero(), || r.render(&v.jet.space)))
        }
        CheckExpr::Invariance { lagrangian, gauge } | CheckExpr::Noether { lagrangian, gauge, .. } => {
            let Value::Lagrangian { form, model, connection: lc } = lookup(env, lagrangian)? else {
                return Err(wrong(lagrangian, "lagrangian"));
            };
            let Value::Gauge { connection: gc, subset } = lookup(env, gauge)? else { return Err(wrong(gauge, "gauge")) };
            if lc != gc {
                return Err(Failure::Error(format!("`{lagrangian}` lives on `{lc}` but `{gauge}` acts on `{gc}`")));
            }
            let mut jet = JetSpace::new(model)?;
            let rule = jet.add_gauge(subset)?;
            match expr {
                CheckExpr::Noether { vanish, .. } => {
                    let mut onshell = OnShellRuleSet::new();
                    if model.curvature.is_empty() {
                        return Err(Failure::Error("on-shell rules need a softened connection".into()));
                    }
                    for i in select(&model.algebra, vanish) {
                        onshell.vanish(model.curvature[i]);
                    }
                    let v = vary(form, model)?;
                    let n = noether_current(form, &v, &jet, &rule, &onshell)?;
                    let ok = n.is_exact_onshell() && n.conservation_residual.is_zero();
                    Ok(Outcome::from(ok, || {
                        format!(
                            "J - dq on shell: {} | conservation: {}",
                            n.onshell_remainder.render(&jet.space),
                            n.conservation_residual.render(&jet.space)
                        )
                    }))
                }
                _ => {
                    let g = gauge_check(form, &jet, &rule)?;
                    Ok(match g {
                        GaugeCheck::NonInvariant { residual } => Outcome::from(false, || residual.render(&jet.space)),
                        _ => Outcome::pass(),
                    })
                }
            }
        }
        CheckExpr::Closure(f) => {
            let (spec, rep) = fda(env, f)?;
            let r = check_fda_closure(spec, rep)?;
            Ok(Outcome::from(r.passed(), || r.render(&spec.space)))
        }
        CheckExpr::Fierz(name) => {
            let (dim, spec) = named_identity::<Q>(name).ok_or_else(|| Failure::Error(format!("unknown identity {name}")))?;
            let rep = build_gamma::<Q>(dim, (1, dim - 1))?;
            let r = fierz_residual(&rep, &spec)?;
            Ok(Outcome::from(r.is_empty(), || {
                let shown: Vec<String> = r
                    .entries
                    .iter()
                    .take(4)
                    .map(|(v, s, t, c)| format!("{v:?} {s:?} {t:?} -> {c}"))
                    .collect();
                format!("{} nonzero components; {}", r.entries.len(), shown.join("; "))
            }))
        }
        CheckExpr::Suite(name) => match name.as_str() {
            "all-catalog-jacobi" => suite(|a| Ok(validate_algebra(a)?.passed())),
            "all-catalog-nilpotency" => suite(|a| Ok(soften(a, Mode::Flat)?.nilpotency()?.passed())),
            "all-catalog-bianchi" => suite(|a| Ok(bianchi_check(&soften(a, Mode::Softened)?)?.passed())),
            "all-catalog-mutations" => suite(|a| {
                let m = jacobi_mutation(a)?;
                let jacobi_fails = !validate_algebra(&m)?.passed();
                let d2_fails = !soften_unchecked(&m, Mode::Flat)?.nilpotency()?.passed();
                Ok(jacobi_fails && d2_fails)
            }),
            other => Err(Failure::Error(format!("unknown suite {other}"))),
        },
    }
}

fn result(name: String, outcome: Result<Outcome, Failure>, started: Instant) -> CheckResult {
    let millis = started.elapsed().as_millis() as u64;
    let (status, residual) = match outcome {
        Ok(Outcome { passed: true, .. }) => (Status::Pass, None),
        Ok(Outcome { residual, .. }) => (Status::Fail, residual),
        Err(Failure::Refused(m)) => (Status::Fail, Some(m)),
        Err(Failure::Error(m)) => (Status::Error, Some(m)),
    };
    CheckResult { name, status, residual: residual.map(truncate), millis }
}

fn run_with_timeout(env: &Arc<Env>, pool: &Arc<rayon::ThreadPool>, expr: &CheckExpr, timeout: Duration) -> CheckResult {
    let started = Instant::now();
    let (tx, rx) = mpsc::channel();
    let env = Arc::clone(env);
    let pool = Arc::clone(pool);
    let e = expr.clone();
    std::thread::spawn(move || {
        let _ = tx.send(pool.install(|| check(&env, &e)));
    });
    let outcome = match rx.recv_timeout(timeout) {
        Ok(o) => o,
        Err(mpsc::RecvTimeoutError::Timeout) => Err(Failure::Error(format!("timed out after {} s", timeout.as_secs_f64()))),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(Failure::Error("check panicked".into())),
    };
    result(expr.to_string(), outcome, started)
}

/// Directives run in order on the calling thread; `jobs` sizes the pool used
/// inside each check. Successful definitions produce no report entry.
pub fn run_document(doc: &SpecDocument, opts: &RunOptions) -> CheckReport {
    let pool = Arc::new(rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build().expect("thread pool"));
    let mut env: Env = HashMap::new();
    let mut checks = Vec::new();
    for st in &doc.statements {
        match &st.kind {
            StatementKind::Check(c) => {
                // checks only read definitions, so a snapshot suffices
                let snapshot = Arc::new(std::mem::take(&mut env));
                checks.push(run_with_timeout(&snapshot, &pool, c, opts.timeout));
                env = Arc::try_unwrap(snapshot).unwrap_or_else(|a| clone_env(&a));
            }
            kind => {
                let name = kind.defined_name().unwrap().to_string();
                let started = Instant::now();
                let value = pool.install(|| {
                    std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| define(&env, kind)))
                        .unwrap_or_else(|_| Err(Failure::Error("definition panicked".into())))
                });
                match value {
                    Ok(v) => {
                        env.insert(name, Ok(Arc::new(v)));
                    }
                    Err(f) => {
                        let msg = match &f {
                            Failure::Refused(m) | Failure::Error(m) => m.clone(),
                        };
                        let label = kind.to_string();
                        let label = label.split(" = ").next().unwrap_or(&label).to_string();
                        checks.push(result(label, Err(f), started));
                        env.insert(name, Err(msg));
                    }
                }
            }
        }
    }
    CheckReport { checks }
}

/// Values are shared, so this only copies the map.
fn clone_env(env: &Env) -> Env {
    env.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}
