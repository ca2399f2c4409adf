
use super::{FormPoly, FormSpace};
use crate::coeff::Coeff;
use crate::scalar::ParamPoly;
use crate::spmat::SpMat;

/// Spinor-valued form, one polynomial per component.
pub type SpinorForm<C> = Vec<FormPoly<C>>;

/// `(M ψ)^α = M^α_β ψ^β`.
pub fn spinor_apply<C: Coeff>(m: &SpMat<C>, psi: &[FormPoly<C>]) -> SpinorForm<C> {
    (0..m.size())
        .map(|a| {
            let mut acc = FormPoly::zero();
            for (b, v) in m.row(a) {
                if !v.is_zero() {
                    acc.add_assign(&psi[*b].scale_coeff(v));
                }
            }
            acc
        })
        .collect()
}

/// `ψ̄ M χ = ψ^α (C M)_{αβ} χ^β` for a lowered bilinear matrix `cm = C M`.
pub fn bar<C: Coeff>(psi: &[FormPoly<C>], cm: &SpMat<C>, chi: &[FormPoly<C>], space: &FormSpace) -> FormPoly<C> {
    let mut acc = FormPoly::zero();
    for (a, b, v) in cm.entries() {
        if v.is_zero() || psi[a].is_zero() || chi[b].is_zero() {
            continue;
        }
        acc.add_assign(&psi[a].wedge(&chi[b], space).scale(&ParamPoly::constant(v.clone())));
    }
    acc
}
