use std::collections::BTreeSet;

use super::{IybStructure, Violation};
use crate::zmod::{FiniteAbelian, HowellBasis};

/// An isomorphism of structures, `χ′ = φ ∘ χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleIsomorphism {
    /// Column `j` is `φ(e_j)` in the coordinates of the second module.
    pub matrix: Vec<Vec<u64>>,
    /// Whether the equivariance actions were compared as well.
    pub intertwines_equivariance: bool,
}

/// The only possible isomorphism is `φ = χ′∘χ⁻¹`; it is returned when it is
/// additive and intertwines the `G`-actions and, when both structures carry
/// equivariance data for the same automorphisms, the `A`-actions.
pub fn structures_isomorphic(s1: &IybStructure, s2: &IybStructure) -> Result<Option<ModuleIsomorphism>, Violation> {
    let g = s1.group();
    if g.order() != s2.group().order() || g.generators().len() != s2.group().generators().len() {
        return Err(Violation::Shape("structures live on different groups".into()));
    }
    let inv1 = s1.inverse_table()?;
    s2.verify_bijective()?;
    let m1 = &s1.module().abelian;
    let m2 = &s2.module().abelian;
    let phi = |x: &[u64]| -> Vec<u64> { s2.chi(inv1[m1.index_of(x)]).to_vec() };
    let r1 = m1.rank();
    let units: Vec<Vec<u64>> = (0..r1).map(|j| m1.unit(j)).collect();
    let images: Vec<Vec<u64>> = units.iter().map(|u| phi(u)).collect();
    // additivity: φ(x + e_j) = φ(x) + φ(e_j) for all x, which gives all pairs
    for idx in 0..g.order() {
        let x = m1.element(idx);
        let fx = phi(&x);
        for (u, fu) in units.iter().zip(&images) {
            if phi(&m1.add(&x, u)) != m2.add(&fx, fu) {
                return Ok(None);
            }
        }
    }
    let t1 = s1.action_table()?;
    let t2 = s2.action_table()?;
    for &s in g.generators() {
        for (u, fu) in units.iter().zip(&images) {
            if phi(&t1.apply(s, u)) != t2.apply(s, fu) {
                return Ok(None);
            }
        }
    }
    let mut both = false;
    if let (Some(e1), Some(e2)) = (s1.equivariance(), s2.equivariance()) {
        if e1.automorphisms != e2.automorphisms {
            return Err(Violation::Shape("equivariance generators differ".into()));
        }
        for (a1, a2) in e1.module_actions.iter().zip(&e2.module_actions) {
            for (u, fu) in units.iter().zip(&images) {
                if phi(&m1.apply(a1, u)) != m2.apply(a2, fu) {
                    return Ok(None);
                }
            }
        }
        both = true;
    }
    let r2 = m2.rank();
    let matrix = (0..r2).map(|i| images.iter().map(|c| c[i]).collect()).collect();
    Ok(Some(ModuleIsomorphism { matrix, intertwines_equivariance: both }))
}

fn stable_closure(m: &FiniteAbelian, mats: &[&Vec<Vec<u64>>], start: HowellBasis) -> HowellBasis {
    let mut b = start;
    loop {
        let mut rows: Vec<Vec<u64>> = b.rows().to_vec();
        for r in b.rows() {
            let x = m.unembed(r);
            for mat in mats {
                rows.push(m.embed(&m.apply(mat, &x)));
            }
        }
        let next = HowellBasis::from_rows(b.modulus(), b.dim(), rows);
        if next == b {
            return b;
        }
        b = next;
    }
}

/// All `G`-submodules of the module of `s`, as subgroups in the embedded
/// coordinates of its [`FiniteAbelian`], in canonical order.
pub fn enumerate_submodules(s: &IybStructure, limit: usize) -> Result<Vec<HowellBasis>, Violation> {
    let m = &s.module().abelian;
    let order = m.order_u64().ok_or_else(|| Violation::Other("module too large".into()))? as usize;
    if order > limit {
        return Err(Violation::Other(format!("module of order {order} exceeds enumeration limit {limit}")));
    }
    let mats: Vec<&Vec<Vec<u64>>> = s.module().generator_actions.iter().collect();
    let elems: Vec<Vec<u64>> = (0..order).map(|i| m.embed(&m.element(i))).collect();
    let zero = HowellBasis::zero(m.embedding_modulus(), m.rank());
    let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    seen.insert(zero.rows().to_vec());
    let mut out = vec![zero];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        for e in &elems {
            if cur.contains(e) {
                continue;
            }
            let grown = HowellBasis::from_rows(cur.modulus(), cur.dim(), cur.rows().iter().cloned().chain([e.clone()]));
            let closed = stable_closure(m, &mats, grown);
            if seen.insert(closed.rows().to_vec()) {
                out.push(closed);
            }
        }
        head += 1;
    }
    out.sort_by(|a, b| a.cardinality().cmp(&b.cardinality()).then_with(|| a.rows().cmp(b.rows())));
    Ok(out)
}

/// `χ⁻¹(S)` for a submodule `S` (embedded coordinates), checked to be a subgroup.
pub fn subgroup_preimage_check(s: &IybStructure, sub: &HowellBasis) -> Result<Vec<usize>, Violation> {
    let g = s.group();
    let m = &s.module().abelian;
    let member: Vec<bool> = (0..g.order()).map(|x| sub.contains(&m.embed(s.chi(x)))).collect();
    let pre: Vec<usize> = (0..g.order()).filter(|&x| member[x]).collect();
    for &x in &pre {
        for &y in &pre {
            if !member[g.mul(x, y)] {
                return Err(Violation::Preimage(x, y));
            }
        }
    }
    Ok(pre)
}
