use std::time::Duration;

use supercartan_cli::{parse_document, run_document, CheckReport, RunOptions, Status};

fn run(src: &str, jobs: usize) -> CheckReport {
    run_document(&parse_document(src).unwrap(), &RunOptions { jobs, timeout: Duration::from_secs(300) })
}

fn statuses(r: &CheckReport) -> Vec<(String, Status)> {
    r.checks.iter().map(|c| (c.name.clone(), c.status)).collect()
}

const SMALL: &str = r#"
algebra p = catalog("iso", 1, 3)
algebra q = perturb(p)
algebra a = catalog("abelian", 1)
connection w = softened(p)
connection u = softened(a)
lagrangian ec = einstein_cartan(w)
lagrangian top = topological(u)
lagrangian cs = chern_simons(u)
gauge lorentz = on(w, M[a b] asym)
gauge phase = on(u, T)
check jacobi(p)
check jacobi(q)
check nilpotency(q)
check bianchi(w)
check variation(ec)
check invariance(ec, lorentz)
check noether(ec, lorentz, P)
check noether(ec, lorentz, M)
check invariance(top, phase)
check invariance(cs, phase)
check variation(cs)
"#;

#[test]
fn statuses_and_exit_codes() {
    let r = run(SMALL, 1);
    let want = [
        ("jacobi(p)", Status::Pass),
        ("jacobi(q)", Status::Fail),
        ("nilpotency(q)", Status::Fail),
        ("bianchi(w)", Status::Pass),
        ("variation(ec)", Status::Pass),
        ("invariance(ec, lorentz)", Status::Pass),
        ("noether(ec, lorentz, P)", Status::Pass),
        ("noether(ec, lorentz, M)", Status::Fail),
        ("invariance(top, phase)", Status::Pass),
        ("invariance(cs, phase)", Status::Pass),
        ("variation(cs)", Status::Pass),
    ];
    assert_eq!(statuses(&r), want.iter().map(|(n, s)| (n.to_string(), *s)).collect::<Vec<_>>());
    assert!(r.checks[1].residual.as_deref().unwrap().contains("Jacobi"));
    assert!(r.checks[0].residual.is_none());
    assert_eq!(r.exit_code(), 1);
    assert_eq!(run("algebra p = catalog(\"iso\", 1, 3)\ncheck jacobi(p)", 1).exit_code(), 0);
    assert_eq!(run("", 1).exit_code(), 0);
}

#[test]
fn failed_definitions() {
    // a perturbed algebra has no connection system
    let r = run("algebra p = catalog(\"iso\", 1, 3)\nalgebra q = perturb(p)\nconnection w = flat(q)\ncheck nilpotency(w)", 1);
    assert_eq!(statuses(&r), vec![("connection w".into(), Status::Fail), ("nilpotency(w)".into(), Status::Error)]);
    assert_eq!(r.exit_code(), 2);
    // structural: flat model has no Bianchi identity
    let r = run("algebra p = catalog(\"iso\", 1, 3)\nconnection w = flat(p)\ncheck bianchi(w)", 1);
    assert_eq!(r.checks[0].status, Status::Error);
    let r = run("algebra p = catalog(\"iso\", 1, 3)\nalgebra m = mutate(p, \"M[0 1]\", \"X\", \"P[1]\", 1)", 1);
    assert_eq!(r.checks[0].status, Status::Error);
    let r = run("algebra p = catalog(\"so\", 1, 4)\nsplit s = desitter(p, 9)", 1);
    assert_eq!(r.checks[0].status, Status::Error);
}

#[test]
fn mutate_by_label() {
    // doubling [M01, P1] = P0 on top of the catalog value breaks Jacobi
    let r = run("algebra p = catalog(\"iso\", 1, 3)\nalgebra m = mutate(p, \"P[0]\", \"M[0 1]\", \"P[1]\", 1)\ncheck jacobi(m)\ncheck nilpotency(m)", 1);
    assert_eq!(r.checks.iter().map(|c| c.status).collect::<Vec<_>>(), vec![Status::Fail, Status::Fail]);
}

#[test]
fn splits() {
    let r = run(
        "algebra g = catalog(\"so\", 1, 4)\nalgebra p = catalog(\"iso\", 1, 3)\nsplit s = desitter(g, 4)\nsplit t = subalgebra(p, M[a b] asym)\nsplit u = subalgebra(p, P)\nsplit v = subalgebra(p, M[0 1], M[0 2])\ncheck reductive(s)\ncheck desitter(s)\ncheck reductive(t)\ncheck reductive(u)\ncheck reductive(v)\ncheck desitter(t)",
        1,
    );
    let got: Vec<Status> = r.checks.iter().map(|c| c.status).collect();
    assert_eq!(got, vec![Status::Pass, Status::Pass, Status::Pass, Status::Fail, Status::Fail, Status::Error]);
}

#[test]
fn fda_extension() {
    let src = r#"
algebra sp = catalog("super-poincare", 4, 1)
fda F = base(sp, M)
extend G = F with B : i * bar[a] ^ P[a] ^ P[0] ^ P[1]
extend H = F with B : bar[a] ^ P[a]
check closure(F)
check closure(H)
"#;
    let r = run(src, 1);
    let s: Vec<(String, Status)> = statuses(&r);
    assert_eq!(s[0], ("extend G".into(), Status::Fail));
    assert!(r.checks[0].residual.as_deref().unwrap().contains("not closed"));
    assert_eq!(s[1..], [("closure(F)".into(), Status::Pass), ("closure(H)".into(), Status::Pass)]);
}

#[test]
fn timeout_is_an_error() {
    let doc = parse_document("check all-catalog-bianchi\ncheck fierz(d4-triple)").unwrap();
    let r = run_document(&doc, &RunOptions { jobs: 1, timeout: Duration::from_millis(1) });
    assert_eq!(r.checks[0].status, Status::Error);
    assert!(r.checks[0].residual.as_deref().unwrap().contains("timed out"));
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn parallelism_does_not_change_statuses() {
    let one = run(SMALL, 1);
    let four = run(SMALL, 4);
    assert_eq!(statuses(&one), statuses(&four));
    let strip = |r: &CheckReport| r.checks.iter().map(|c| c.residual.clone()).collect::<Vec<_>>();
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn text_and_json_agree() {
    let r = run(SMALL, 2);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let text = r.to_text();
    let from_text: Vec<(String, String)> = text
        .lines()
        .filter(|l| !l.starts_with(' ') && l.contains(" ms)"))
        .map(|l| {
            let (word, rest) = l.split_once(' ').unwrap();
            let name = rest.trim_start().rsplit_once(" (").unwrap().0;
            (name.to_string(), word.to_lowercase())
        })
        .collect();
    let from_json: Vec<(String, String)> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(from_text, from_json);
    assert!(json["checks"][0]["millis"].is_u64());
}
