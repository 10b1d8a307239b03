use std::sync::Arc;

use super::ConstructError;
use crate::group::{Automorphism, Group, GroupAction, Perm};
use crate::structure::{Equivariance, GModule, IybStructure};
use crate::zmod::{gcd, FiniteAbelian};

fn same_group(a: &Group, b: &Group) -> bool {
    a.order() == b.order()
        && a.generators() == b.generators()
        && (0..a.order()).all(|x| a.generators().iter().all(|&s| a.mul(x, s) == b.mul(x, s)))
}

fn block_diag(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0u64; ra + rb]; ra + rb];
    for i in 0..ra {
        out[i][..ra].copy_from_slice(&a[i]);
    }
    for i in 0..rb {
        out[ra + i][ra..].copy_from_slice(&b[i]);
    }
    out
}

/// Structure on `N ⋊ H` from a structure on `H` and an `H`-equivariant
/// structure on `N`: `M = M_N ⊕ M_H`, `N` acting trivially on `M_H`, and
/// `χ(n·h) = (χ_N(n), χ_H(h))`. For trivial `H` the structure on `N` is
/// returned without its equivariance data.
pub fn combine_semidirect(
    s_h: &IybStructure,
    s_n: &IybStructure,
    act: &GroupAction,
) -> Result<IybStructure, ConstructError> {
    if act.actor().order() == 1 {
        return Ok(s_n.with_equivariance(None)?);
    }
    let eq = s_n
        .equivariance()
        .ok_or_else(|| ConstructError::Mismatch("structure on N carries no equivariance data".into()))?;
    let images: Vec<&[u32]> = act.generator_images().iter().map(|a| a.map()).collect();
    if eq.automorphisms.len() != images.len()
        || eq.automorphisms.iter().zip(&images).any(|(p, q)| p.as_slice() != *q)
    {
        return Err(ConstructError::Mismatch("equivariance generators differ from the action".into()));
    }
    if !same_group(s_h.group(), act.actor()) {
        return Err(ConstructError::Mismatch("structure on H lives on a different group".into()));
    }
    if !same_group(s_n.group(), act.target()) {
        return Err(ConstructError::Mismatch("structure on N lives on a different group".into()));
    }
    let group = Arc::new(Group::semidirect(act)?);
    let mn = s_n.module();
    let mh = s_h.module();
    let id_h = mh.abelian.identity_matrix();
    let mut actions = Vec::new();
    for m in &mn.generator_actions {
        actions.push(block_diag(m, &id_h));
    }
    for (a, m) in eq.module_actions.iter().zip(&mh.generator_actions) {
        actions.push(block_diag(a, m));
    }
    let invariants: Vec<u64> = mn.invariants().iter().chain(mh.invariants()).copied().collect();
    let module = GModule::new(invariants, actions)?;
    let nn = s_n.group().order();
    let mut flat = Vec::with_capacity(group.order() * module.rank());
    for x in 0..group.order() {
        flat.extend_from_slice(s_n.chi(x % nn));
        flat.extend_from_slice(s_h.chi(x / nn));
    }
    let s = IybStructure::from_flat(group, module, flat, None)?;
    s.verify(false)?;
    Ok(s)
}

/// Result of splitting a structure along a Hall decomposition `G = N ⋊ H`.
pub struct HallDecomposition {
    pub h: IybStructure,
    /// `H`-equivariant under conjugation.
    pub n: IybStructure,
    pub action: GroupAction,
    /// `g` with `χ⁻¹(M_H) = ᵍH`.
    pub conjugator: usize,
    pub n_elements: Vec<usize>,
    pub h_elements: Vec<usize>,
}

/// The part of `⊕ Z/e_i` killed by `d`, presented as `⊕ Z/gcd(e_i, d)`.
struct Part {
    ambient: FiniteAbelian,
    abelian: FiniteAbelian,
    positions: Vec<usize>,
    steps: Vec<u64>,
}

impl Part {
    fn new(ambient: &FiniteAbelian, d: u64) -> Self {
        let mut positions = Vec::new();
        let mut inv = Vec::new();
        let mut steps = Vec::new();
        for (i, &e) in ambient.invariants().iter().enumerate() {
            let f = gcd(e, d);
            if f > 1 {
                positions.push(i);
                inv.push(f);
                steps.push(e / f);
            }
        }
        Part { ambient: ambient.clone(), abelian: FiniteAbelian::new(inv), positions, steps }
    }

    fn down(&self, x: &[u64]) -> Option<Vec<u64>> {
        for (i, &v) in x.iter().enumerate() {
            if v != 0 && !self.positions.contains(&i) {
                return None;
            }
        }
        let mut out = Vec::with_capacity(self.positions.len());
        for (&p, &st) in self.positions.iter().zip(&self.steps) {
            if x[p] % st != 0 {
                return None;
            }
            out.push(x[p] / st);
        }
        Some(out)
    }

    fn up(&self, y: &[u64]) -> Vec<u64> {
        let mut x = self.ambient.zero();
        for ((&p, &st), &v) in self.positions.iter().zip(&self.steps).zip(y) {
            x[p] = v * st;
        }
        x
    }

    fn restrict(&self, mat: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let r = self.abelian.rank();
        let mut out = vec![vec![0u64; r]; r];
        for j in 0..r {
            let img = self.ambient.apply(mat, &self.up(&self.abelian.unit(j)));
            let col = self.down(&img)?;
            for i in 0..r {
                out[i][j] = col[i];
            }
        }
        Some(out)
    }
}

fn subgroup_group(g: &Group, elems: &[usize], gens: &[usize]) -> Result<Group, ConstructError> {
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let table: Vec<Vec<u32>> =
        elems.iter().map(|&x| elems.iter().map(|&y| pos[g.mul(x, y)] as u32).collect()).collect();
    let sub = Group::from_table(table)?;
    if gens.is_empty() {
        return Ok(sub);
    }
    Ok(sub.with_generators(gens.iter().map(|&x| pos[x]).collect())?)
}

/// Splits a structure on `G = N ⋊ H` with `gcd(|N|, |H|) = 1` into a
/// structure on `H` and an `H`-equivariant structure on `N`, after twisting
/// by a conjugator that moves `χ⁻¹(M_H)` onto `H`.
pub fn hall_decompose(
    s: &IybStructure,
    n_gens: &[usize],
    h_gens: &[usize],
) -> Result<HallDecomposition, ConstructError> {
    let g = s.group().clone();
    let mut n_elements = g.closure(n_gens);
    let mut h_elements = g.closure(h_gens);
    n_elements.sort_unstable();
    h_elements.sort_unstable();
    let (nn, nh) = (n_elements.len(), h_elements.len());
    if gcd(nn as u64, nh as u64) != 1 || nn * nh != g.order() {
        return Err(ConstructError::Hypothesis(format!("|N| = {nn}, |H| = {nh} is not a Hall decomposition")));
    }
    let mut in_n = vec![false; g.order()];
    for &x in &n_elements {
        in_n[x] = true;
    }
    for &x in &n_elements {
        for &t in g.generators() {
            if !in_n[g.conj(x, t)] {
                return Err(ConstructError::Hypothesis("N is not normal".into()));
            }
        }
    }
    let ambient = &s.module().abelian;
    let part_n = Part::new(ambient, nn as u64);
    let part_h = Part::new(ambient, nh as u64);
    let pre_h: Vec<bool> = (0..g.order()).map(|x| part_h.down(s.chi(x)).is_some()).collect();
    if pre_h.iter().filter(|&&b| b).count() != nh {
        return Err(ConstructError::Failed("χ⁻¹(M_H) has the wrong size".into()));
    }
    let conjugator = (0..g.order())
        .find(|&c| h_elements.iter().all(|&h| pre_h[g.conj_left(c, h)]))
        .ok_or_else(|| ConstructError::Failed("no conjugate of H equals χ⁻¹(M_H)".into()))?;
    let t = s.twisted_by(conjugator)?;
    let table = t.action_table()?;
    let mat_of = |x: usize| -> Vec<Vec<u64>> {
        let r = ambient.rank();
        let flat = table.mat(x);
        (0..r).map(|i| flat[i * r..(i + 1) * r].to_vec()).collect()
    };
    let restrict = |part: &Part, x: usize| {
        part.restrict(&mat_of(x)).ok_or_else(|| ConstructError::Failed("module part is not G-stable".into()))
    };
    let n_group = Arc::new(subgroup_group(&g, &n_elements, n_gens)?);
    let h_group = Arc::new(subgroup_group(&g, &h_elements, h_gens)?);
    for &x in n_gens {
        if restrict(&part_h, x)? != part_h.abelian.identity_matrix() {
            return Err(ConstructError::Failed("N acts non-trivially on M_H".into()));
        }
    }
    let chi_part = |part: &Part, elems: &[usize]| -> Result<Vec<Vec<u64>>, ConstructError> {
        elems
            .iter()
            .map(|&x| part.down(t.chi(x)).ok_or_else(|| ConstructError::Failed(format!("χ({x}) leaves its part"))))
            .collect()
    };
    let n_chi = chi_part(&part_n, &n_elements)?;
    let h_chi = chi_part(&part_h, &h_elements)?;
    let mut pos_n = vec![usize::MAX; g.order()];
    for (i, &x) in n_elements.iter().enumerate() {
        pos_n[x] = i;
    }
    let mut autos: Vec<Perm> = Vec::new();
    let mut eq_mats = Vec::new();
    for &h in h_gens {
        autos.push(n_elements.iter().map(|&x| pos_n[g.conj_left(h, x)] as u32).collect());
        eq_mats.push(restrict(&part_n, h)?);
    }
    let n_module = GModule::new(
        part_n.abelian.invariants().to_vec(),
        n_gens.iter().map(|&x| restrict(&part_n, x)).collect::<Result<_, _>>()?,
    )?;
    let h_module = GModule::new(
        part_h.abelian.invariants().to_vec(),
        h_gens.iter().map(|&x| restrict(&part_h, x)).collect::<Result<_, _>>()?,
    )?;
    let images = autos
        .iter()
        .map(|p| Automorphism::new(&n_group, p.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let action = GroupAction::new(h_group.clone(), n_group.clone(), images)?;
    let n = IybStructure::new(
        n_group,
        n_module,
        n_chi,
        Some(Equivariance { automorphisms: autos, module_actions: eq_mats }),
    )?;
    let h = IybStructure::new(h_group, h_module, h_chi, None)?;
    n.verify(false)?;
    h.verify(false)?;
    Ok(HallDecomposition { h, n, action, conjugator, n_elements, h_elements })
}
