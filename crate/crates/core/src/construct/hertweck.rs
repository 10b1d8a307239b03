use std::sync::Arc;

use rayon::prelude::*;

use super::ConstructError;
use crate::group::hertweck::{
    coords, cocycle_inverse, cocycle_value, d_module_matrices, delta_m, hertweck_a, DeltaRep, HertweckA,
    HertweckParams,
};
use crate::structure::{Equivariance, GModule, IybStructure, VerificationSummary, Violation};

pub struct HertweckStructure {
    pub structure: IybStructure,
    pub a: HertweckA,
    pub summary: VerificationSummary,
}

/// The `A`-equivariant structure on `D` over `M = (Z/q)³`.
///
/// `q ≡ 3 mod 4` is refused unless `allow_any_odd_q` is set.
pub fn hertweck_d_structure(
    q: u64,
    zeta: Option<u64>,
    allow_any_odd_q: bool,
) -> Result<HertweckStructure, ConstructError> {
    let params = HertweckParams::with_zeta(q, zeta)?;
    if !params.sylow_claims_apply && !allow_any_odd_q {
        return Err(ConstructError::Hypothesis(format!("q = {q} is not 1 mod 4")));
    }
    let a = hertweck_a(params)?;
    let delta = DeltaRep::new(params);
    delta.verify()?;
    let d = a.d.clone();
    let n = d.order();
    let mut flat = Vec::with_capacity(3 * n);
    for x in 0..n {
        flat.extend(cocycle_value(&params, coords(q, x)));
    }
    let module = GModule::new(vec![q; 3], d_module_matrices(q).iter().map(|m| m.to_rows()).collect())?;
    let eq = Equivariance {
        automorphisms: a.action.generator_images().iter().map(|x| x.map().to_vec()).collect(),
        module_actions: delta.generators.iter().map(|g| delta_m(g).to_rows()).collect(),
    };
    let structure = IybStructure::from_flat(Arc::clone(&d), module, flat, Some(eq))?;
    // bijectivity through the closed-form inverse, on every element
    if let Some(x) = (0..n).into_par_iter().find_first(|&x| {
        let v = structure.chi(x);
        cocycle_inverse(&params, [v[0], v[1], v[2]]) != coords(q, x)
    }) {
        return Err(Violation::Other(format!("closed-form inverse fails at element {x}")).into());
    }
    let summary = structure.verify(false)?;
    Ok(HertweckStructure { structure, a, summary })
}
