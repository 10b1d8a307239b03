use std::sync::Arc;

use super::ConstructError;
use crate::group::{Group, GroupAction, GroupError};
use crate::structure::{Equivariance, GModule, IybStructure};
use crate::zmod::FiniteAbelian;

fn block_matrix(r: usize, n: usize, blocks: impl Fn(usize, usize) -> Option<Vec<Vec<u64>>>) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; r * n]; r * n];
    for bi in 0..n {
        for bj in 0..n {
            if let Some(b) = blocks(bi, bj) {
                for i in 0..r {
                    out[bi * r + i][bj * r..(bj + 1) * r].copy_from_slice(&b[i]);
                }
            }
        }
    }
    out
}

/// The structure `χ⁽ⁿ⁾(g_1, …, g_n) = (χ(g_1), …, χ(g_n))` on `G^n`,
/// equivariant under `B` acting through `hom: B → A ≀ Σ_n`, given by the
/// images of the generators of `B` in the wreath group built by
/// [`GroupAction::direct_power_with_wreath`].
pub fn power_wreath(
    s: &IybStructure,
    act: &GroupAction,
    n: usize,
    b: &Arc<Group>,
    hom: &[usize],
) -> Result<(IybStructure, GroupAction), ConstructError> {
    let eq = s
        .equivariance()
        .ok_or_else(|| ConstructError::Mismatch("structure carries no equivariance data".into()))?;
    if eq.automorphisms.len() != act.generator_images().len()
        || eq.automorphisms.iter().zip(act.generator_images()).any(|(p, a)| p.as_slice() != a.map())
    {
        return Err(ConstructError::Mismatch("equivariance generators differ from the action".into()));
    }
    let g = s.group();
    if g.order() < 2 {
        return Err(ConstructError::Hypothesis("the base group is trivial".into()));
    }
    let (gn, wact) = act.direct_power_with_wreath(n)?;
    let w = wact.actor().clone();
    if hom.len() != b.generators().len() || hom.iter().any(|&x| x >= w.order()) {
        return Err(ConstructError::Mismatch("one image in the wreath group per generator of B".into()));
    }
    let values = b.extend_along_tree(0usize, hom, |x, y| w.mul(*x, *y));
    for x in 0..b.order() {
        for (k, &t) in b.generators().iter().enumerate() {
            if values[b.mul(x, t)] != w.mul(values[x], hom[k]) {
                return Err(GroupError::NotHomomorphism(x, t).into());
            }
        }
    }

    let m = &s.module().abelian;
    let r = m.rank();
    let big = FiniteAbelian::new(m.invariants().repeat(n));
    let id = m.identity_matrix();
    let mut actions = Vec::new();
    for slot in 0..n {
        for mat in &s.module().generator_actions {
            actions.push(block_matrix(r, n, |i, j| {
                (i == j).then(|| if i == slot { mat.clone() } else { id.clone() })
            }));
        }
    }
    let module = GModule::new(big.invariants().to_vec(), actions)?;

    // module matrices of the wreath generators
    let na = eq.module_actions.len();
    let mut wmats = Vec::new();
    for slot in 0..n {
        for mat in &eq.module_actions {
            wmats.push(block_matrix(r, n, |i, j| (i == j).then(|| if i == slot { mat.clone() } else { id.clone() })));
        }
    }
    let probe = g.generators()[0];
    let gsize = g.order();
    for img in &wact.generator_images()[n * na..] {
        let mut target = vec![0usize; n];
        for (j, t) in target.iter_mut().enumerate() {
            let moved = img.apply(probe * gsize.pow(j as u32));
            *t = (0..n)
                .find(|&i| (moved / gsize.pow(i as u32)) % gsize != 0)
                .ok_or_else(|| ConstructError::Failed("coordinate permutation not recognized".into()))?;
        }
        wmats.push(block_matrix(r, n, |i, j| (target[j] == i).then(|| id.clone())));
    }
    let mut eq_perms = Vec::new();
    let mut eq_mats = Vec::new();
    for &x in hom {
        let word = w.word(x);
        let mut mat = big.identity_matrix();
        for &k in &word {
            mat = big.compose(&mat, &wmats[k]);
        }
        eq_mats.push(mat);
        eq_perms.push(wact.image(x));
    }
    let mut flat = Vec::with_capacity(gn.order() * r * n);
    for x in 0..gn.order() {
        let mut y = x;
        for _ in 0..n {
            flat.extend_from_slice(s.chi(y % gsize));
            y /= gsize;
        }
    }
    let out = IybStructure::from_flat(
        gn,
        module,
        flat,
        Some(Equivariance { automorphisms: eq_perms, module_actions: eq_mats }),
    )?;
    out.verify(false)?;
    Ok((out, wact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Automorphism;

    fn c3_inversion() -> (IybStructure, GroupAction) {
        let c3 = Arc::new(Group::cyclic(3).unwrap());
        let c2 = Arc::new(Group::cyclic(2).unwrap());
        let act = GroupAction::new(c2, c3.clone(), vec![Automorphism::new(&c3, vec![0, 2, 1]).unwrap()]).unwrap();
        let s = IybStructure::new(
            c3,
            GModule::trivial(vec![3], 1),
            vec![vec![0], vec![1], vec![2]],
            Some(Equivariance { automorphisms: vec![vec![0, 2, 1]], module_actions: vec![vec![vec![2]]] }),
        )
        .unwrap();
        (s, act)
    }

    #[test]
    fn power_one_keeps_the_structure() {
        let (s, act) = c3_inversion();
        let gens = act.actor().generators().to_vec();
        let (p, _) = power_wreath(&s, &act, 1, act.actor(), &gens).unwrap();
        assert_eq!(p.cocycle_table(), s.cocycle_table());
    }

    #[test]
    fn sigma_two_on_c3_squared() {
        let (s, act) = c3_inversion();
        let (_, wact) = act.direct_power_with_wreath(2).unwrap();
        let w = wact.actor();
        let swap = *w.generators().last().unwrap();
        let sigma = Arc::new(Group::cyclic(2).unwrap());
        let (p, _) = power_wreath(&s, &act, 2, &sigma, &[swap]).unwrap();
        assert_eq!(p.group().order(), 9);
        p.verify(true).unwrap();
        // full wreath group
        let all = w.generators().to_vec();
        let (q, _) = power_wreath(&s, &act, 2, w, &all).unwrap();
        assert_eq!(q.equivariance().unwrap().automorphisms.len(), 3);
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let (s, act) = c3_inversion();
        let c3 = Arc::new(Group::cyclic(3).unwrap());
        let (_, wact) = act.direct_power_with_wreath(2).unwrap();
        let swap = *wact.actor().generators().last().unwrap();
        assert!(power_wreath(&s, &act, 2, &c3, &[swap]).is_err());
    }
}
