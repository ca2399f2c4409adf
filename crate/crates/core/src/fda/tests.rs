use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::algebra::catalog_algebra;
use crate::clifford::{build_gamma, fierz_residual, BilinearFactor, FierzSpec, FierzTerm, VecIdx};
use crate::GaussianRational as Q;

fn flat(name: &str, params: &[i64]) -> ConnectionModel<Q> {
    soften(&catalog_algebra::<Q>(name, params).unwrap(), Mode::Flat).unwrap()
}

fn d4() -> (FdaSpec<Q>, GammaRep<Q>) {
    (FdaSpec::lorentz_relative(&flat("super-poincare", &[4, 1])).unwrap(), build_gamma(4, (1, 3)).unwrap())
}

#[test]
fn abelian_cochains_are_closed() {
    let fda = FdaSpec::new(&flat("abelian", &[3]), &[]).unwrap();
    let s: Vec<FormPoly<Q>> = (0..3).map(|i| FormPoly::generator(fda.base.connection[i])).collect();
    let c = s[0].wedge(&s[1], &fda.space).add(&s[1].wedge(&s[2], &fda.space).scale(&ParamPoly::from_int(3)));
    assert!(fda.ce_differential(&c).unwrap().is_zero());

    let mut ansatz = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            ansatz.push(s[a].wedge(&s[b], &fda.space));
        }
    }
    let basis = relative_cocycles(&fda, 2, &ansatz).unwrap();
    assert_eq!(basis.dimension(), 3);
    for k in 0..basis.dimension() {
        assert!(fda.ce_differential(&basis.cochain(k, &ansatz)).unwrap().is_zero());
    }
    assert!(relative_cocycles(&fda, 2, &[]).unwrap().empty_ansatz);
}

#[test]
fn d4_three_form_cocycle() {
    let (fda, rep) = d4();
    let c = fda.bilinear_vielbein(&rep, 1).unwrap();
    assert_eq!(c.degree(&fda.space), Some(3));
    assert!(fda.ce_differential(&c).unwrap().is_zero());

    let basis = relative_cocycles(&fda, 3, std::slice::from_ref(&c)).unwrap();
    assert_eq!(basis.dimension(), 1);

    let ext = fda.extend(&c, "A", &[], &[]).unwrap();
    assert!(!ext.steps[0].trivial);
    assert_eq!(ext.space.degree(ext.steps[0].potential), 2);
    assert!(check_fda_closure(&ext, Some(&rep)).unwrap().passed());

    let v0v1 = fda.vielbein(0).unwrap().wedge(&fda.vielbein(1).unwrap(), &fda.space);
    assert!(fda.extend(&c.scale(&ParamPoly::from_int(2)), "A", &[], &[v0v1.clone()]).is_ok());
    let exact = fda.ce_differential(&v0v1).unwrap();
    let t = fda.extend(&exact, "E", &[], &[v0v1]).unwrap();
    assert!(t.steps[0].trivial);
    assert!(check_fda_closure(&t, None).unwrap().passed());
}

#[test]
fn refusals() {
    let (fda, rep) = d4();
    let omega = FormPoly::generator(fda.base.connection_of("M[0 1]").unwrap());
    assert!(fda.ce_differential(&omega).is_err());

    let v: Vec<_> = (0..4).map(|a| fda.vielbein(a).unwrap()).collect();
    let open = fda.bilinear(&rep, &[0]).unwrap().wedge(&v[1], &fda.space);
    assert!(matches!(fda.extend(&open, "A", &[], &[]), Err(Error::Refused(_))));

    let softened = soften(&catalog_algebra::<Q>("iso", &[1, 3]).unwrap(), Mode::Softened).unwrap();
    assert!(FdaSpec::new(&softened, &[]).is_err());

    let rep3: GammaRep<Q> = build_gamma(3, (1, 2)).unwrap();
    assert!(matches!(check_fda_closure(&fda, Some(&rep3)), Err(Error::Representation(_))));
}

fn d11() -> (FdaSpec<Q>, GammaRep<Q>) {
    (d11_base().unwrap(), build_gamma(11, (1, 10)).unwrap())
}

/// Coefficient of `V^b ψ^{m0} .. ψ^{m3}` in `p`.
fn quartic_coefficient(fda: &FdaSpec<Q>, p: &FormPoly<Q>, b: u16, m: &[u16]) -> Q {
    let mut ids = vec![fda.generator("P", &[b]).unwrap()];
    ids.extend(m.iter().map(|&a| fda.generator("Q", &[a]).unwrap()));
    let w = FormPoly::<Q>::word(&fda.space, &ids);
    let (mono, sign) = w.terms().next().map(|(m, c)| (m.clone(), c.constant_value().unwrap())).unwrap();
    p.coefficient(&mono).constant_value().unwrap_or_else(Q::zero) * sign
}

fn arrangements(m: &[u16]) -> i64 {
    let mut r: i64 = (1..=m.len() as i64).product();
    let mut i = 0;
    while i < m.len() {
        let j = (i..m.len()).find(|&j| m[j] != m[i]).unwrap_or(m.len());
        r /= (1..=(j - i) as i64).product::<i64>();
        i = j;
    }
    r
}

#[test]
fn d11_germ_closes() {
    let (base, rep) = d11();
    let c = base.bilinear_vielbein(&rep, 2).unwrap().scale(&ParamPoly::from_ratio(1, 2));
    assert!(base.ce_differential(&c).unwrap().is_zero());
    let fda = d11_add_three_form(&base, &rep).unwrap();
    let report = check_fda_closure(&fda, Some(&rep)).unwrap();
    assert!(report.passed(), "{}", report.render(&fda.space));
    assert_eq!(report.checked, 11 + 32 + 1);
}

#[test]
fn d11_wrong_tensor_structure() {
    let (base, rep) = d11();
    let v0 = base.vielbein(0).unwrap();
    let c = base.bilinear_vielbein(&rep, 1).unwrap().wedge(&v0, &base.space);
    let Err(Error::Refused(_)) = base.extend(&c, "A", &[], &[]) else { panic!("mutated cocycle accepted") };
    let residual = base.ce_differential(&c).unwrap();
    assert!(!residual.is_zero());

    // a system carrying the mutated step directly fails closure
    let mut forced = base.clone();
    let id = forced.space.add_simple("A", &[], 3, Parity::Even, FormClass::Potential).unwrap();
    forced.rules.set(id, c.neg());
    let report = check_fda_closure(&forced, Some(&rep)).unwrap();
    assert_eq!(report.residuals.len(), 1);
    assert_eq!(report.residuals[0].0, id);

    // entrywise against the symmetrized bilinear products:
    // d c = (i/2) [ (ψ̄Γ_aψ)(ψ̄Γ^aψ) V^0 - (ψ̄Γ_bψ)(ψ̄Γ^0ψ) V^b ]
    let contracted = FierzSpec {
        terms: vec![FierzTerm {
            coeff: Q::one(),
            factors: vec![
                BilinearFactor::cgamma(vec![VecIdx::Down("a".into())]),
                BilinearFactor::cgamma(vec![VecIdx::Up("a".into())]),
            ],
        }],
        free_vector: vec![],
    };
    let fixed = FierzSpec {
        terms: vec![FierzTerm {
            coeff: Q::one(),
            factors: vec![
                BilinearFactor::cgamma(vec![VecIdx::Down("b".into())]),
                BilinearFactor::cgamma(vec![VecIdx::Fixed { value: 0, lowered: false }]),
            ],
        }],
        free_vector: vec!["b".into()],
    };
    let f1 = fierz_residual(&rep, &contracted).unwrap();
    let f2 = fierz_residual(&rep, &fixed).unwrap();
    assert!(!f2.is_empty());
    let half_i = Q::imag_unit() * Q::from_ratio(1, 2);
    let mut seen = 0;
    let mut keys: Vec<(Vec<u16>, u16)> = f2.entries.iter().map(|e| (e.0.clone(), e.2[0])).collect();
    keys.extend(f1.entries.iter().map(|e| (e.0.clone(), 0)));
    keys.sort();
    keys.dedup();
    for (m, b) in &keys {
        let mut want = -f2.get(m, &[], &[*b]);
        if *b == 0 {
            want = want + f1.get(m, &[], &[]);
        }
        let want = want * half_i.clone() * Q::from_int(arrangements(m));
        assert_eq!(quartic_coefficient(&base, &residual, *b, m), want, "m = {m:?}, b = {b}");
        if !want.is_zero() {
            seen += 1;
        }
    }
    // every term of the residual is accounted for
    assert_eq!(seen, residual.len());
}

#[test]
fn d11_germ_agrees_with_fierz() {
    let (base, rep) = d11();
    let c = base.bilinear_vielbein(&rep, 2).unwrap().scale(&ParamPoly::from_ratio(1, 2));
    let closed = base.ce_differential(&c).unwrap().is_zero();
    let spec = FierzSpec {
        terms: vec![FierzTerm {
            coeff: Q::one(),
            factors: vec![
                BilinearFactor::cgamma(vec![VecIdx::Down("a".into()), VecIdx::Down("b".into())]),
                BilinearFactor::cgamma(vec![VecIdx::Up("a".into())]),
            ],
        }],
        free_vector: vec!["b".into()],
    };
    assert_eq!(closed, fierz_residual(&rep, &spec).unwrap().is_empty());
    assert!(closed);
}

#[test]
fn d11_relative_cocycles() {
    let (base, rep) = d11();
    let germ = base.bilinear_vielbein(&rep, 2).unwrap();
    let mut square = FormPoly::zero();
    let mut v_bilinear = FormPoly::zero();
    for a in 0..11 {
        let b = base.bilinear(&rep, &[a]).unwrap();
        square.add_assign(&b.wedge(&b, &base.space).scale(&ParamPoly::from_int(rep.eta(a))));
        v_bilinear.add_assign(&base.vielbein(a).unwrap().wedge(&b, &base.space));
    }
    let ansatz = vec![germ.clone(), square.clone(), v_bilinear];
    let basis = relative_cocycles(&base, 4, &ansatz).unwrap();
    assert_eq!(basis.columns, vec![0, 1]);
    assert_eq!(basis.dimension(), 1);
    assert!(basis.vectors[0][1].is_zero());
    assert!(base.ce_differential(&basis.cochain(0, &ansatz)).unwrap().is_zero());
    // the quartic gravitino term is closed but exact
    assert!(base.ce_differential(&square).unwrap().is_zero());
    assert!(base.is_exact(&square, &ansatz[2..]).unwrap());
}

#[test]
#[ignore = "long-running six-form closure"]
fn d11_six_form() {
    let rep = build_gamma::<Q>(11, (1, 10)).unwrap();
    let fda = d11_fda(&rep, true).unwrap();
    assert!(check_fda_closure(&fda, Some(&rep)).unwrap().passed());
    // a different ratio of the two terms is not closed
    let three = d11_fda(&rep, false).unwrap();
    let c = d11_six_form_cocycle(&three, &rep, &Q::from_int(15), &Q::from_ratio(1, 2)).unwrap();
    assert!(matches!(three.extend(&c, "B", &[], &[]), Err(Error::Refused(_))));
}

fn random_cochain(fda: &FdaSpec<Q>, picks: &[(Vec<usize>, i64)]) -> FormPoly<Q> {
    let gens = fda.rules.ids();
    let mut acc = FormPoly::zero();
    for (w, c) in picks {
        let ids: Vec<u32> = w.iter().map(|&i| gens[i % gens.len()]).collect();
        acc.add_assign(&FormPoly::word(&fda.space, &ids).scale(&ParamPoly::from_int(*c)));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ce_differential_squares_to_zero(
        picks in prop::collection::vec((prop::collection::vec(0usize..64, 1..4), -3i64..4), 1..6),
        relative in any::<bool>(),
    ) {
        let model = flat("super-poincare", &[4, 1]);
        let fda = if relative { FdaSpec::lorentz_relative(&model).unwrap() } else { FdaSpec::new(&model, &[]).unwrap() };
        let c = random_cochain(&fda, &picks);
        let dc = fda.ce_differential(&c).unwrap();
        prop_assert!(fda.ce_differential(&dc).unwrap().is_zero());
    }

    #[test]
    fn cocycle_basis_is_closed(coeffs in prop::collection::vec(-2i64..3, 4)) {
        let (fda, rep) = d4();
        let v: Vec<_> = (0..4).map(|a| fda.vielbein(a).unwrap()).collect();
        let germ = fda.bilinear_vielbein(&rep, 1).unwrap();
        let mut mixed = FormPoly::zero();
        for (a, &k) in coeffs.iter().enumerate() {
            mixed.add_assign(&fda.bilinear(&rep, &[a]).unwrap().wedge(&v[(a + 1) % 4], &fda.space).scale(&ParamPoly::from_int(k)));
        }
        let ansatz = vec![germ, mixed];
        let basis = relative_cocycles(&fda, 3, &ansatz).unwrap();
        prop_assert!(basis.dimension() >= 1);
        for k in 0..basis.dimension() {
            prop_assert!(fda.ce_differential(&basis.cochain(k, &ansatz)).unwrap().is_zero());
        }
    }
}
