use std::collections::{BTreeMap, HashMap, HashSet};

use super::{FormClass, FormPoly, FormSpace};
use crate::algebra::Parity;
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Split a polynomial by the number of bosonic (`vielbeins`) and fermionic
/// (`gravitinos`) 1-form factors. Degree-0 factors are ignored; any other
/// form-valued factor is an error.
pub fn sector_decompose<C: Coeff>(
    poly: &FormPoly<C>,
    space: &FormSpace,
    vielbeins: &[u32],
    gravitinos: &[u32],
) -> Result<BTreeMap<(usize, usize), FormPoly<C>>> {
    let vs: HashSet<u32> = vielbeins.iter().copied().collect();
    let ps: HashSet<u32> = gravitinos.iter().copied().collect();
    let mut out: BTreeMap<(usize, usize), FormPoly<C>> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let (mut nv, mut np) = (0, 0);
        for &x in m {
            if vs.contains(&x) {
                nv += 1;
            } else if ps.contains(&x) {
                np += 1;
            } else if space.degree(x) > 0 {
                return Err(Error::Partition(format!(
                    "factor {} is neither a vielbein nor a gravitino",
                    space.get(x).label()
                )));
            }
        }
        out.entry((nv, np)).or_default().add_term(m.clone(), c.clone());
    }
    Ok(out)
}

/// Generic expansion of 2-form symbols along the (V, ψ) basis:
/// `X = Σ X_vv V V + Σ X_vp V ψ + Σ X_pp ψ ψ` with fresh degree-0 components.
pub fn generic_expansion<C: Coeff>(
    space: &mut FormSpace,
    symbols: &[u32],
    vielbeins: &[u32],
    gravitinos: &[u32],
) -> Result<HashMap<u32, FormPoly<C>>> {
    let mut out = HashMap::new();
    for &x in symbols {
        let g = space.get(x).clone();
        if g.degree != 2 {
            return Err(Error::Structural(format!("{} is not a 2-form", g.label())));
        }
        let p = g.parity.bit();
        let mut poly = FormPoly::zero();
        let mut add = |space: &mut FormSpace, tag: &str, extra: &[u16], parity: u8, a: u32, b: u32| -> Result<()> {
            let mut index = g.index.clone();
            index.extend_from_slice(extra);
            let comp = space.add_simple(&format!("{}_{tag}", g.name), &index, 0, Parity::from_bit(parity), FormClass::Component)?;
            poly.add_assign(&FormPoly::word(space, &[comp, a, b]));
            Ok(())
        };
        for (i, &v) in vielbeins.iter().enumerate() {
            for (j, &w) in vielbeins.iter().enumerate().skip(i + 1) {
                add(space, "vv", &[i as u16, j as u16], p, v, w)?;
            }
            for (j, &q) in gravitinos.iter().enumerate() {
                add(space, "vp", &[i as u16, j as u16], p + 1, v, q)?;
            }
        }
        for (i, &q) in gravitinos.iter().enumerate() {
            for (j, &r) in gravitinos.iter().enumerate().skip(i) {
                add(space, "pp", &[i as u16, j as u16], p, q, r)?;
            }
        }
        out.insert(x, poly);
    }
    Ok(out)
}
