//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (zero tolerance on rational coefficients); the
//! only tolerances are the wall-time budgets pinned in `CRITERIA`.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::One;
use supercartan::algebra::{catalog_algebra, jacobi_mutation, validate_algebra, Parity, CATALOG_SUITE};
use supercartan::cartan::{bianchi_check, compare_with_poincare, de_sitter_split, soften, soften_unchecked, ConnectionModel, Mode};
use supercartan::clifford::{build_gamma, fierz_residual, named_identity, BilinearFactor, FierzSpec, FierzTerm, VecIdx};
use supercartan::fda::{check_fda_closure, d11_base, d11_fda};
use supercartan::forms::{bar, generic_expansion, sector_decompose, spinor_apply, FormClass, FormPoly};
use supercartan::variational::{
    einstein_cartan, euler_density, gamma5, lorentz_curvature, macdowell_mansouri, noether_current, sugra4, vary,
    InvariantPairing, JetSpace, LagrangianForm, OnShellRuleSet, VariationResult,
};
use supercartan::{Coeff, Error, GaussianRational as Q, Scalar as S, SuperAlgebra};

type P = FormPoly<Q>;
type Outcome = Result<(bool, String), Error>;

/// (number, title, wall-time budget, check)
const CRITERIA: [(u8, &str, u64, fn() -> Outcome); 11] = [
    (1, "catalog validation and Jacobi mutations", 180, catalog),
    (2, "Maurer-Cartan nilpotency and Jacobi equivalence", 60, nilpotency),
    (3, "Bianchi identities on softened systems", 120, bianchi),
    (4, "de Sitter curvature split and contraction", 30, de_sitter),
    (5, "Einstein-Cartan variation", 30, einstein_cartan_variation),
    (6, "MacDowell-Mansouri / Einstein-Cartan identity", 30, mm_identity),
    (7, "Noether current exact with torsion -> 0", 30, noether),
    (8, "Fierz identities", 120, fierz),
    (9, "D=11 FDA closure through the three-form", 300, d11),
    (10, "D=4 supergravity field equations", 60, sugra),
    (11, "command-line contract", 120, cli),
];

/// Criteria whose literal statement does not hold under this library's
/// conventions; the run fails if their verdict changes in either direction.
const DOCUMENTED_FAILURES: [u8; 1] = [10];

fn main() {
    let mut unexpected = Vec::new();
    for (n, title, budget, f) in CRITERIA {
        let started = Instant::now();
        let outcome = f();
        let elapsed = started.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = ok && in_time;
        let timing = format!("{:.1}s / {budget}s", elapsed.as_secs_f64());
        println!("{} {n:>2}. {title} [{timing}] {detail}", if pass { "PASS" } else { "FAIL" });
        if pass == DOCUMENTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected verdicts for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

fn suite() -> Result<Vec<SuperAlgebra>, Error> {
    CATALOG_SUITE.iter().map(|(n, p)| catalog_algebra(n, p)).collect()
}

fn names(algs: &[&SuperAlgebra]) -> String {
    algs.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join(", ")
}

fn catalog() -> Outcome {
    let algs = suite()?;
    let mut bad = Vec::new();
    let mut undetected = Vec::new();
    for a in &algs {
        if !validate_algebra(a)?.passed() {
            bad.push(a);
        }
        if validate_algebra(&jacobi_mutation(a)?)?.passed() {
            undetected.push(a);
        }
    }
    let ok = bad.is_empty() && undetected.is_empty();
    Ok((ok, format!("{} algebras; invalid: [{}]; undetected mutations: [{}]", algs.len(), names(&bad), names(&undetected))))
}

fn nilpotency() -> Outcome {
    let algs = suite()?;
    let mut bad = Vec::new();
    let mut disagree = Vec::new();
    for a in &algs {
        let jacobi = validate_algebra(a)?.passed();
        let d2 = soften(a, Mode::Flat)?.nilpotency()?.passed();
        if !(jacobi && d2) {
            bad.push(a);
        }
        let m = jacobi_mutation(a)?;
        let mj = validate_algebra(&m)?.passed();
        let md = soften_unchecked(&m, Mode::Flat)?.nilpotency()?.passed();
        if mj != md || mj {
            disagree.push(a);
        }
    }
    let ok = bad.is_empty() && disagree.is_empty() && algs.len() >= 3;
    Ok((ok, format!("{} systems, {} mutations; failing: [{}]; Jacobi/d^2 disagreement: [{}]", algs.len(), algs.len(), names(&bad), names(&disagree))))
}

fn bianchi() -> Outcome {
    let algs = suite()?;
    let mut bad = Vec::new();
    for a in &algs {
        if !bianchi_check(&soften(a, Mode::Softened)?)?.passed() {
            bad.push(a);
        }
    }
    Ok((bad.is_empty(), format!("{} softened systems; failing: [{}]", algs.len(), names(&bad))))
}

fn de_sitter() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (sig, axis, eps) in [((1, 4), 4u16, 1i64), ((2, 3), 0, -1)] {
        let alg = catalog_algebra::<Q>("so", &[sig.0, sig.1])?;
        let ds = de_sitter_split(&alg, axis, "lambda")?;
        let sp = ds.apply(&soften(&alg, Mode::Flat)?)?;
        let cmp = compare_with_poincare(&sp, "lambda")?;
        let good = cmp.passed() && ds.epsilon == eps && ds.split.is_reductive;
        ok &= good;
        parts.push(format!("so({},{}) eps={} {}", sig.0, sig.1, ds.epsilon, if good { "ok" } else { "mismatch" }));
    }
    Ok((ok, parts.join("; ")))
}

fn poincare() -> Result<ConnectionModel<Q>, Error> {
    soften(&catalog_algebra::<Q>("iso", &[1, 3])?, Mode::Softened)
}

fn levi_civita() -> InvariantPairing<Q> {
    InvariantPairing::levi_civita(4)
}

struct Jet<'a>(&'a JetSpace<Q>);

impl Jet<'_> {
    fn e(&self, a: u16) -> P {
        P::generator(self.0.field(&format!("P[{a}]")).unwrap())
    }
    fn t(&self, a: u16) -> P {
        P::generator(self.0.curvature(&format!("P[{a}]")).unwrap())
    }
    fn r(&self, a: u16, b: u16) -> P {
        lorentz_curvature(&self.0.model, a, b).unwrap()
    }
    fn delta(&self, label: &str) -> P {
        let f = self.0.field(label).unwrap();
        P::generator(self.0.var[self.0.field_index(f).unwrap()])
    }
    fn w(&self, a: &P, b: &P) -> P {
        a.wedge(b, &self.0.space)
    }
}

/// Common factor `k` with `got[i] = k want[i]` for all `i`.
fn proportional(got: &[P], want: &[P]) -> Option<Q> {
    let mut k: Option<Q> = None;
    for (g, w) in got.iter().zip(want) {
        if w.is_zero() {
            if !g.is_zero() {
                return None;
            }
            continue;
        }
        let r = g.proportional(w)?;
        match &k {
            None => k = Some(r),
            Some(k0) if *k0 == r => {}
            Some(_) => return None,
        }
    }
    k
}

fn lorentz_pairs() -> Vec<(u16, u16)> {
    (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect()
}

fn show(k: &Option<Q>) -> String {
    k.as_ref().map_or_else(|| "none".into(), |k| k.to_string())
}

fn einstein_cartan_variation() -> Outcome {
    let model = poincare()?;
    let lambda = S::param("Lambda");
    let l = einstein_cartan(&model, &lambda)?;
    let v = vary(&l, &model)?;
    let round_trip = v.round_trip_residual()?.is_zero();
    let x = Jet(&v.jet);
    let eps = levi_civita();
    let third = &lambda * &S::from_ratio(1, 3);
    // vielbein equation ε_{abcd} (R^{ab} - Λ/3 e^a e^b) e^d
    let mut got = Vec::new();
    let mut want = Vec::new();
    for c in 0..4u16 {
        let mut w = P::zero();
        for (idx, k) in eps.entries.iter().filter(|(i, _)| i[2] == c) {
            let inner = x.r(idx[0], idx[1]).sub(&x.w(&x.e(idx[0]), &x.e(idx[1])).scale(&third));
            w.add_assign(&x.w(&inner, &x.e(idx[3])).scale(k));
        }
        got.push(v.covariant_equation(v.jet.field(&format!("P[{c}]")).unwrap()));
        want.push(w);
    }
    let k_e = proportional(&got, &want);
    // connection equation ε_{abcd} T^c e^d
    let (mut got, mut want) = (Vec::new(), Vec::new());
    for (a, b) in lorentz_pairs() {
        let mut w = P::zero();
        for (idx, k) in eps.entries.iter().filter(|(i, _)| i[0] == a && i[1] == b) {
            w.add_assign(&x.w(&x.t(idx[2]), &x.e(idx[3])).scale(k));
        }
        got.push(v.covariant_equation(v.jet.field(&format!("M[{a} {b}]")).unwrap()));
        want.push(w);
    }
    let k_w = proportional(&got, &want);
    // boundary term δω_{ab} e^c e^d ε_{abcd}
    let mut theta = P::zero();
    for (idx, k) in eps.entries.iter().filter(|(i, _)| i[0] < i[1]) {
        let d = x.delta(&format!("M[{} {}]", idx[0], idx[1]));
        theta.add_assign(&x.w(&d, &x.w(&x.e(idx[2]), &x.e(idx[3]))).scale(k));
    }
    let k_theta = proportional(&[v.covariant_theta()], &[theta]);
    let ok = round_trip && k_e.is_some() && k_w.is_some() && k_theta.is_some();
    Ok((ok, format!("round trip {round_trip}; E_e x{}, E_w x{}, theta x{}", show(&k_e), show(&k_w), show(&k_theta))))
}

fn mm_identity() -> Outcome {
    let model = poincare()?;
    let (eps, l_inv) = (S::param("eps"), S::param("l_inv"));
    let l2 = &l_inv * &l_inv;
    let k = -(&eps * &l2);
    let mm = macdowell_mansouri(&model, &eps, &l_inv)?;
    let ec = einstein_cartan(&model, &(&(&eps * &l2) * &S::from_int(3)))?;
    let euler = euler_density(&model)?;
    let identity = mm.poly == euler.poly.add(&ec.poly.scale(&k));
    let vm = vary(&mm, &model)?;
    let ve = vary(&ec, &model)?;
    let equations = model.connection.iter().all(|&f| vm.equation(f) == ve.equation(f).scale(&k));
    Ok((identity && equations, format!("L_MM = 1/2 R.R + ({k}) L_EC(Lambda = 3 eps l^-2): {identity}; E_MM = ({k}) E_EC: {equations}")))
}

fn lorentz_noether(l: &LagrangianForm<Q>, model: &ConnectionModel<Q>, torsion_rule: bool) -> Result<(bool, bool), Error> {
    let mut jet = JetSpace::new(model)?;
    let lorentz: Vec<usize> = (0..model.algebra.len()).filter(|&i| model.algebra.generators()[i].name == "M").collect();
    let rule = jet.add_gauge(&lorentz)?;
    let v: VariationResult<Q> = vary(l, model)?;
    let mut onshell = OnShellRuleSet::new();
    if torsion_rule {
        for a in 0..4u16 {
            onshell.vanish(model.curvature_of(&format!("P[{a}]")).unwrap());
        }
    }
    let n = noether_current(l, &v, &jet, &rule, &onshell)?;
    Ok((n.is_exact_onshell(), n.conservation_residual.is_zero()))
}

fn noether() -> Outcome {
    let model = poincare()?;
    let ec = einstein_cartan(&model, &S::param("Lambda"))?;
    let mm = macdowell_mansouri(&model, &S::param("eps"), &S::param("l_inv"))?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, l) in [("EC", &ec), ("MM", &mm)] {
        let (exact, conserved) = lorentz_noether(l, &model, true)?;
        let (bare, _) = lorentz_noether(l, &model, false)?;
        ok &= exact && conserved && !bare;
        parts.push(format!("{name}: exact with T=0 {exact}, without {bare}, dJ on shell {conserved}"));
    }
    Ok((ok, parts.join("; ")))
}

fn fierz() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, want_empty) in [("d4-triple", true), ("d11", true), ("d4-control", false)] {
        let (dim, spec) = named_identity::<Q>(name).expect("named identity");
        let rep = build_gamma::<Q>(dim, (1, dim - 1))?;
        let r = fierz_residual(&rep, &spec)?;
        ok &= r.is_empty() == want_empty;
        parts.push(format!("{name}: {} nonzero", r.entries.len()));
    }
    Ok((ok, parts.join("; ")))
}

fn d11() -> Outcome {
    let rep = build_gamma::<Q>(11, (1, 10))?;
    let fda = d11_fda(&rep, false)?;
    let closure = check_fda_closure(&fda, Some(&rep))?;
    // wrong tensor structure: ψ̄Γ_aψ V^a V^0 in place of ψ̄Γ_{ab}ψ V^a V^b
    let base = d11_base::<Q>()?;
    let wrong = base.bilinear_vielbein(&rep, 1)?.wedge(&base.vielbein(0)?, &base.space);
    let refused = matches!(base.extend(&wrong, "A", &[], &[]), Err(Error::Refused(_)));
    let mut forced = base.clone();
    let id = forced.space.add_simple("A", &[], 3, Parity::Even, FormClass::Potential)?;
    forced.rules.set(id, wrong.neg());
    let forced_fails = !check_fda_closure(&forced, Some(&rep))?.passed();
    // the same conditions through the Fierz module
    let germ = base.bilinear_vielbein(&rep, 2)?;
    let germ_closed = base.ce_differential(&germ)?.is_zero();
    let cg = |i: Vec<VecIdx>| BilinearFactor::cgamma(i);
    let down = |s: &str| VecIdx::Down(s.into());
    let up = |s: &str| VecIdx::Up(s.into());
    let spec = |factors, free: &[&str]| FierzSpec::<Q> {
        terms: vec![FierzTerm { coeff: Q::one(), factors }],
        free_vector: free.iter().map(|s| s.to_string()).collect(),
    };
    let germ_fierz = fierz_residual(&rep, &spec(vec![cg(vec![down("a"), down("b")]), cg(vec![up("a")])], &["b"]))?.is_empty();
    let wrong_open = !base.ce_differential(&wrong)?.is_zero();
    let wrong_fierz =
        !fierz_residual(&rep, &spec(vec![cg(vec![down("b")]), cg(vec![VecIdx::Fixed { value: 0, lowered: false }])], &["b"]))?
            .is_empty();
    let agree = germ_closed == germ_fierz && wrong_open == wrong_fierz;
    let ok = closure.passed() && closure.checked > 0 && refused && forced_fails && agree && germ_closed;
    Ok((
        ok,
        format!(
            "closure on {} generators {}; mutation refused {refused}, forced step fails {forced_fails}; \
             closure/fierz agree: germ {germ_closed}/{germ_fierz}, mutation open {wrong_open}/{wrong_fierz}",
            closure.checked,
            closure.passed()
        ),
    ))
}

fn sugra() -> Outcome {
    let alg = catalog_algebra::<Q>("super-poincare", &[4, 1])?;
    let model = soften(&alg, Mode::Softened)?;
    let rep = build_gamma::<Q>(4, (1, 3))?;
    let zeta = -Q::imag_unit();
    let l = sugra4(&model, &rep, &zeta)?;
    let v = vary(&l, &model)?;
    let x = Jet(&v.jet);
    let s = &v.jet.space;
    let g5 = gamma5(&rep, &zeta);
    let psi: Vec<P> = (0..4).map(|a| P::generator(model.connection_of(&format!("Q[{a}]")).unwrap())).collect();
    let rho: Vec<P> = (0..4).map(|a| P::generator(model.curvature_of(&format!("Q[{a}]")).unwrap())).collect();
    let eps = levi_civita();
    let eq = |label: &str| v.covariant_equation(model.connection_of(label).unwrap());

    // ε_{abcd} R^c V^d
    let (mut got, mut want) = (Vec::new(), Vec::new());
    for (a, b) in lorentz_pairs() {
        let mut w = P::zero();
        for (idx, k) in eps.entries.iter().filter(|(i, _)| i[0] == a && i[1] == b) {
            w.add_assign(&x.w(&x.t(idx[2]), &x.e(idx[3])).scale(k));
        }
        got.push(eq(&format!("M[{a} {b}]")));
        want.push(w);
    }
    let k_omega = proportional(&got, &want);

    // ε_{abcd} R^{ab} V^c - 2 ψ̄ γ5 γ_d ρ, literal and with the bilinear sign reversed
    let (mut got, mut literal, mut reversed) = (Vec::new(), Vec::new(), Vec::new());
    for d in 0..4u16 {
        let mut w = P::zero();
        for (idx, k) in eps.entries.iter().filter(|(i, _)| i[3] == d) {
            w.add_assign(&x.w(&x.r(idx[0], idx[1]), &x.e(idx[2])).scale(k));
        }
        let cm = rep.c.mul(&g5).mul(&rep.gamma_lower(&[d as usize]));
        let b = bar(&psi, &cm, &rho, s).scale(&S::from_int(2));
        got.push(eq(&format!("P[{d}]")));
        literal.push(w.sub(&b));
        reversed.push(w.add(&b));
    }
    let k_v = proportional(&got, &literal);
    let k_v_reversed = proportional(&got, &reversed);

    // C (2 γ5 γ_a ρ ∧ V^a - γ5 γ_a ψ ∧ R^a), literal and with ρ∧V read as -V∧ρ
    let mut literal = vec![P::zero(); 4];
    let mut reordered = vec![P::zero(); 4];
    for a in 0..4u16 {
        let m = g5.mul(&rep.gamma_lower(&[a as usize]));
        let (mr, mp) = (spinor_apply(&m, &rho), spinor_apply(&m, &psi));
        for al in 0..4 {
            let kinetic = x.w(&mr[al], &x.e(a)).scale(&S::from_int(2));
            let torsion = x.w(&mp[al], &x.t(a));
            literal[al].add_assign(&kinetic.sub(&torsion));
            reordered[al].add_assign(&kinetic.neg().sub(&torsion));
        }
    }
    let literal = spinor_apply(&rep.c, &literal);
    let reordered = spinor_apply(&rep.c, &reordered);
    let got: Vec<P> = (0..4).map(|al| eq(&format!("Q[{al}]"))).collect();
    let k_psi = proportional(&got, &literal);
    let k_psi_reordered = proportional(&got, &reordered);

    // sectors after generic expansion of every curvature
    let mut space = s.clone();
    let vs: Vec<u32> = (0..4).map(|a| model.connection_of(&format!("P[{a}]")).unwrap()).collect();
    let ps: Vec<u32> = (0..4).map(|a| model.connection_of(&format!("Q[{a}]")).unwrap()).collect();
    let map = generic_expansion::<Q>(&mut space, &model.curvature, &vs, &ps)?;
    let sectors = |prefix: &str| -> Result<BTreeSet<(usize, usize)>, Error> {
        let mut out = BTreeSet::new();
        for g in alg.generators().iter().filter(|g| g.name == prefix) {
            for (k, p) in sector_decompose(&eq(&g.label()).substitute(&map, &space), &space, &vs, &ps)? {
                if !p.is_zero() {
                    out.insert(k);
                }
            }
        }
        Ok(out)
    };
    let all: BTreeSet<(usize, usize)> = [(3, 0), (2, 1), (1, 2), (0, 3)].into_iter().collect();
    let per_eq = [("omega", sectors("M")?), ("V", sectors("P")?), ("psi", sectors("Q")?)];
    let union: BTreeSet<(usize, usize)> = per_eq.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    let each_all = per_eq.iter().all(|(_, s)| *s == all);
    let missing: Vec<String> =
        per_eq.iter().filter(|(_, s)| *s != all).map(|(n, s)| format!("E_{n} has {}", s.len())).collect();

    let ok = k_omega.is_some() && k_v.is_some() && k_psi.is_some() && each_all;
    let detail = format!(
        "E_omega x{}; E_V literal {} (bilinear sign reversed: x{}); E_psi literal {} (rho^V = -V^rho: x{}); \
         sectors union complete {}, each complete {each_all} [{}]",
        show(&k_omega),
        show(&k_v),
        show(&k_v_reversed),
        show(&k_psi),
        show(&k_psi_reordered),
        union == all,
        missing.join(", ")
    );
    // the analysed deviation: only the relative bilinear sign and the ρ∧V ordering differ
    let documented = k_omega == Some(Q::from_int(4))
        && k_v.is_none()
        && k_v_reversed == Some(Q::from_int(-2))
        && k_psi.is_none()
        && k_psi_reordered == Some(Q::from_int(-4))
        && union == all;
    if !ok && !documented {
        return Err(Error::Structural(format!("deviation differs from the documented one: {detail}")));
    }
    Ok((ok, detail))
}

fn binary(args: &[&str]) -> Result<(i32, String), Error> {
    let o = Command::new(env!("CARGO_BIN_EXE_supercartan"))
        .args(args)
        .output()
        .map_err(|e| Error::Structural(e.to_string()))?;
    Ok((o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned()))
}

fn statuses_from_json(s: &str) -> Vec<(String, String)> {
    let v: serde_json::Value = serde_json::from_str(s).unwrap_or_default();
    v["checks"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|c| (c["name"].as_str().unwrap_or("").to_string(), c["status"].as_str().unwrap_or("").to_string()))
                .collect()
        })
        .unwrap_or_default()
}

fn statuses_from_text(s: &str) -> Vec<(String, String)> {
    s.lines()
        .filter(|l| !l.starts_with(' ') && l.ends_with(" ms)"))
        .filter_map(|l| {
            let (word, rest) = l.split_once(' ')?;
            Some((rest.trim_start().rsplit_once(" (")?.0.to_string(), word.to_lowercase()))
        })
        .collect()
}

fn cli() -> Outcome {
    let (standard, json) = binary(&["run", "--builtin", "standard", "--format", "json"])?;
    let std_statuses = statuses_from_json(&json);
    let (mutations, text) = binary(&["run", "--builtin", "mutations"])?;
    let (mutations_json, json_m) = binary(&["run", "--builtin", "mutations", "--format", "json"])?;
    let dir = std::env::temp_dir().join(format!("supercartan-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Structural(e.to_string()))?;
    let doc = dir.join("unresolved.sc");
    std::fs::write(&doc, "algebra g = catalog(\"so\", 1, 4)\ncheck jacobi(h)\n").map_err(|e| Error::Structural(e.to_string()))?;
    let (unresolved, _) = binary(&["run", doc.to_str().unwrap()])?;
    let _ = std::fs::remove_dir_all(&dir);
    let agree = statuses_from_text(&text) == statuses_from_json(&json_m) && !statuses_from_text(&text).is_empty();
    let all_pass = !std_statuses.is_empty() && std_statuses.iter().all(|(_, s)| s == "pass");
    let ok = standard == 0 && all_pass && mutations == 1 && mutations_json == 1 && unresolved == 2 && agree;
    Ok((
        ok,
        format!(
            "standard exit {standard} ({} checks), mutations exit {mutations}, unresolved exit {unresolved}, text/json agree {agree}",
            std_statuses.len()
        ),
    ))
}
