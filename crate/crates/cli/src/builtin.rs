//! Documents shipped with the binary.

pub const STANDARD: &str = r#"# catalog systems
check all-catalog-jacobi
check all-catalog-nilpotency
check all-catalog-bianchi
check all-catalog-mutations

# first-order gravity
algebra poincare = catalog("iso", 1, 3)
connection w = softened(poincare)
lagrangian ec = einstein_cartan(w)
lagrangian mm = macdowell_mansouri(w)
lagrangian eu = euler(w)
gauge lorentz = on(w, M)
check variation(ec)
check variation(mm)
check variation(eu)
check invariance(ec, lorentz)
check invariance(mm, lorentz)
check noether(ec, lorentz, P)
check noether(mm, lorentz, P)

# de Sitter and anti de Sitter
algebra ds = catalog("so", 1, 4)
split dss = desitter(ds, 4)
check reductive(dss)
check desitter(dss)
algebra ads = catalog("so", 2, 3)
split adss = desitter(ads, 0)
check desitter(adss)

# N=1, D=4
algebra sp4 = catalog("super-poincare", 4, 1)
connection s4 = softened(sp4)
lagrangian sg = sugra4(s4)
check variation(sg)

# eleven dimensions
fda F = d11
extend F3 = F with A : -1/2 * bar[a b] ^ P[a] ^ P[b]
check closure(F3)
check fierz(d4-triple)
check fierz(d11)
"#;

pub const MUTATIONS: &str = r#"# perturbed systems; every check here is expected to fail
algebra p = catalog("iso", 1, 3)
algebra q = perturb(p)
check jacobi(q)
check nilpotency(q)
check fierz(d4-control)
fda F = d11
extend W = F with A : bar[a] ^ P[a] ^ P[0]
"#;

pub const NAMES: [&str; 2] = ["standard", "mutations"];

pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "standard" => Some(STANDARD),
        "mutations" => Some(MUTATIONS),
        _ => None,
    }
}
