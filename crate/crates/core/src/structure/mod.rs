//! IYB structures: a `G`-module `M` with `|M| = |G|` and a bijective
//! 1-cocycle `χ: G → M`, `χ(gh) = χ(g) + g·χ(h)`, optionally equivariant
//! under a group `A` acting on both `G` and `M`.
//!
//! # Generator-mode verification
//!
//! Suppose the module action is a homomorphism and `χ(sh) = χ(s) + s·χ(h)`
//! holds for every generator `s` and every `h`. For a word `g = s·g'` with the
//! law known for `g'`,
//!
//! ```text
//! χ(s g' h) = χ(s) + s·χ(g'h) = χ(s) + s·χ(g') + s g'·χ(h) = χ(s g') + (s g')·χ(h),
//! ```
//!
//! so induction on word length gives the law for every pair. The module
//! action itself is checked on every edge of the Cayley graph, which makes it
//! a homomorphism exactly. Verification with [`CocycleMode::Generators`] is
//! therefore complete, not a heuristic.

mod cert;
mod ideal;
mod iso;

pub use cert::{Certificate, CertificateError, CertKind, Provenance};
pub use ideal::{ideal_to_structure, verify_transversal, TransversalReport};
pub use iso::{enumerate_submodules, structures_isomorphic, subgroup_preimage_check, ModuleIsomorphism};

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::group::{Automorphism, Group, Perm};
use crate::zmod::{add_mod, mul_mod, FiniteAbelian};

/// Groups above this order default to generator-mode cocycle checks.
pub const FULL_MODE_LIMIT: usize = 10_000;

/// Random pairs checked in addition to generator mode on large groups.
pub const SAMPLED_PAIRS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("malformed structure: {0}")]
    Shape(String),
    #[error("module matrix for generator {0} is not an endomorphism of M")]
    NotEndomorphism(usize),
    #[error("module action is not a homomorphism at (x, s) = ({0}, {1})")]
    ActionNotHom(usize, usize),
    #[error("χ(e) ≠ 0")]
    IdentityNotZero,
    #[error("cocycle law fails at (g, h) = ({0}, {1})")]
    Cocycle(usize, usize),
    #[error("|M| = {module} but |G| = {group}")]
    OrderMismatch { group: usize, module: String },
    #[error("χ is not injective: χ({0}) = χ({1})")]
    NotInjective(usize, usize),
    #[error("equivariance generator {0} is not an automorphism of G: {1}")]
    BadAutomorphism(usize, String),
    #[error("χ(ᵃg) ≠ a·χ(g) for equivariance generator {0} at g = {1}")]
    Equivariance(usize, usize),
    #[error("a·s·a⁻¹ ≠ ᵃs on M for equivariance generator {0} and group generator {1}")]
    Compatibility(usize, usize),
    #[error("ideal is not contained in the augmentation ideal")]
    NotInOmega,
    #[error("ideal is not a left ideal (generator {0})")]
    NotLeftIdeal(usize),
    #[error("index [ω : I] = {index}, expected {expected}")]
    Index { index: String, expected: usize },
    #[error("1 − g ≡ 1 − h modulo I for (g, h) = ({0}, {1})")]
    Transversal(usize, usize),
    #[error("ideal is not stable under equivariance generator {0}")]
    NotStable(usize),
    #[error("preimage of a submodule is not a subgroup (witness {0}·{1})")]
    Preimage(usize, usize),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleMode {
    /// All `|G|²` pairs.
    Full,
    /// `(s, h)` for generators `s` and all `h`.
    Generators,
    /// Uniformly random pairs, seeded.
    Sampled { pairs: usize, seed: u64 },
}

/// A finite abelian group `⊕ Z/m_i` with a left action of `G` given by one
/// matrix per generator (row `i` taken mod `m_i`, acting on column vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    pub abelian: FiniteAbelian,
    pub generator_actions: Vec<Vec<Vec<u64>>>,
}

impl GModule {
    pub fn new(invariants: Vec<u64>, generator_actions: Vec<Vec<Vec<u64>>>) -> Result<Self, Violation> {
        if invariants.contains(&0) {
            return Err(Violation::Shape("invariant factors must be positive".into()));
        }
        let abelian = FiniteAbelian::new(invariants);
        let mut reduced = Vec::with_capacity(generator_actions.len());
        for (k, m) in generator_actions.into_iter().enumerate() {
            if m.len() != abelian.rank() || m.iter().any(|r| r.len() != abelian.rank()) {
                return Err(Violation::Shape(format!("matrix {k} has the wrong size")));
            }
            if !abelian.is_endomorphism(&m) {
                return Err(Violation::NotEndomorphism(k));
            }
            let m: Vec<Vec<u64>> =
                m.iter().zip(abelian.invariants()).map(|(r, &e)| r.iter().map(|&a| a % e).collect()).collect();
            reduced.push(m);
        }
        Ok(GModule { abelian, generator_actions: reduced })
    }

    pub fn trivial(invariants: Vec<u64>, generators: usize) -> Self {
        let abelian = FiniteAbelian::new(invariants);
        let id = abelian.identity_matrix();
        GModule { generator_actions: vec![id; generators], abelian }
    }

    pub fn invariants(&self) -> &[u64] {
        self.abelian.invariants()
    }

    pub fn rank(&self) -> usize {
        self.abelian.rank()
    }

    pub fn order(&self) -> BigUint {
        self.abelian.order()
    }

    /// Matrices for every group element, built along the spanning tree and
    /// checked on every Cayley-graph edge.
    pub fn element_table(&self, group: &Group) -> Result<ActionTable, Violation> {
        if self.generator_actions.len() != group.generators().len() {
            return Err(Violation::Shape(format!(
                "{} module matrices for {} generators",
                self.generator_actions.len(),
                group.generators().len()
            )));
        }
        let r = self.rank();
        let inv = self.abelian.invariants().to_vec();
        let gens: Vec<Vec<u64>> = self.generator_actions.iter().map(|m| m.concat()).collect();
        let id: Vec<u64> = self.abelian.identity_matrix().concat();
        let n = group.order();
        let tree = group.spanning_tree();
        let mut mats = vec![0u64; n * r * r];
        mats[..r * r].copy_from_slice(&id);
        for y in group.bfs_order().into_iter().skip(1) {
            let (p, k) = tree[y];
            let prod = compose_flat(&inv, &mats[p as usize * r * r..(p as usize + 1) * r * r], &gens[k as usize]);
            mats[y * r * r..(y + 1) * r * r].copy_from_slice(&prod);
        }
        let table = ActionTable { rank: r, invariants: inv, mats };
        let bad = (0..n).into_par_iter().find_first(|&x| {
            group.generators().iter().enumerate().any(|(k, &s)| {
                compose_flat(&table.invariants, table.mat(x), &gens[k]) != table.mat(group.mul(x, s))
            })
        });
        if let Some(x) = bad {
            let s = group
                .generators()
                .iter()
                .enumerate()
                .find(|&(k, &s)| compose_flat(&table.invariants, table.mat(x), &gens[k]) != table.mat(group.mul(x, s)))
                .map(|(_, &s)| s)
                .unwrap_or(0);
            return Err(Violation::ActionNotHom(x, s));
        }
        Ok(table)
    }
}

/// Flattened module matrices of all group elements.
#[derive(Clone, Debug)]
pub struct ActionTable {
    rank: usize,
    invariants: Vec<u64>,
    mats: Vec<u64>,
}

impl ActionTable {
    pub fn mat(&self, g: usize) -> &[u64] {
        let rr = self.rank * self.rank;
        &self.mats[g * rr..(g + 1) * rr]
    }

    pub fn apply(&self, g: usize, x: &[u64]) -> Vec<u64> {
        apply_flat(&self.invariants, self.mat(g), x)
    }
}

pub(crate) fn compose_flat(inv: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let r = inv.len();
    let mut out = vec![0u64; r * r];
    for i in 0..r {
        let e = inv[i];
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                out[i * r + j] = add_mod(out[i * r + j], mul_mod(aik, b[k * r + j], e), e);
            }
        }
    }
    out
}

pub(crate) fn apply_flat(inv: &[u64], m: &[u64], x: &[u64]) -> Vec<u64> {
    let r = inv.len();
    (0..r)
        .map(|i| {
            let e = inv[i];
            (0..r).fold(0u64, |acc, j| add_mod(acc, mul_mod(m[i * r + j], x[j], e), e))
        })
        .collect()
}

/// Equivariance data: generators of `A` as automorphisms of `G` and the
/// matching module matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivariance {
    pub automorphisms: Vec<Perm>,
    pub module_actions: Vec<Vec<Vec<u64>>>,
}

/// A candidate IYB structure. Construction checks shapes and `χ(e) = 0`; the
/// `verify_*` methods check the axioms.
#[derive(Clone, Debug)]
pub struct IybStructure {
    group: Arc<Group>,
    module: GModule,
    cocycle: Vec<u64>,
    equivariance: Option<Equivariance>,
    table: Arc<OnceLock<Result<ActionTable, Violation>>>,
}

/// Summary of a successful verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationSummary {
    pub order: usize,
    pub cocycle_modes: Vec<String>,
    pub pairs_checked: u64,
    pub equivariance_generators: usize,
}

impl IybStructure {
    pub fn new(
        group: Arc<Group>,
        module: GModule,
        cocycle: Vec<Vec<u64>>,
        equivariance: Option<Equivariance>,
    ) -> Result<Self, Violation> {
        let r = module.rank();
        if cocycle.len() != group.order() {
            return Err(Violation::Shape(format!("{} cocycle values for {} elements", cocycle.len(), group.order())));
        }
        let mut flat = Vec::with_capacity(group.order() * r);
        for v in &cocycle {
            if v.len() != r {
                return Err(Violation::Shape("cocycle value of wrong length".into()));
            }
            flat.extend(module.abelian.normalize(v));
        }
        Self::from_flat(group, module, flat, equivariance)
    }

    pub fn from_flat(
        group: Arc<Group>,
        module: GModule,
        cocycle: Vec<u64>,
        equivariance: Option<Equivariance>,
    ) -> Result<Self, Violation> {
        let r = module.rank();
        if cocycle.len() != group.order() * r {
            return Err(Violation::Shape("cocycle table has the wrong size".into()));
        }
        if module.generator_actions.len() != group.generators().len() {
            return Err(Violation::Shape("one module matrix per group generator required".into()));
        }
        if let Some(eq) = &equivariance {
            if eq.automorphisms.len() != eq.module_actions.len() {
                return Err(Violation::Shape("equivariance generators and module actions differ in number".into()));
            }
            for (k, m) in eq.module_actions.iter().enumerate() {
                if m.len() != r || m.iter().any(|row| row.len() != r) {
                    return Err(Violation::Shape(format!("equivariance matrix {k} has the wrong size")));
                }
                if !module.abelian.is_endomorphism(m) {
                    return Err(Violation::NotEndomorphism(k));
                }
            }
            if eq.automorphisms.iter().any(|p| p.len() != group.order()) {
                return Err(Violation::Shape("equivariance permutation of wrong length".into()));
            }
        }
        if cocycle[..r].iter().any(|&x| x != 0) {
            return Err(Violation::IdentityNotZero);
        }
        Ok(IybStructure { group, module, cocycle, equivariance, table: Arc::new(OnceLock::new()) })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn equivariance(&self) -> Option<&Equivariance> {
        self.equivariance.as_ref()
    }

    pub fn with_equivariance(&self, eq: Option<Equivariance>) -> Result<Self, Violation> {
        Self::from_flat(self.group.clone(), self.module.clone(), self.cocycle.clone(), eq)
    }

    pub fn chi(&self, g: usize) -> &[u64] {
        let r = self.module.rank();
        &self.cocycle[g * r..(g + 1) * r]
    }

    pub fn cocycle_table(&self) -> Vec<Vec<u64>> {
        (0..self.group.order()).map(|g| self.chi(g).to_vec()).collect()
    }

    pub fn action_table(&self) -> Result<&ActionTable, Violation> {
        self.table.get_or_init(|| self.module.element_table(&self.group)).as_ref().map_err(Clone::clone)
    }

    /// `g·x` on `M`.
    pub fn act(&self, g: usize, x: &[u64]) -> Result<Vec<u64>, Violation> {
        Ok(self.action_table()?.apply(g, x))
    }

    fn law_holds(&self, t: &ActionTable, g: usize, h: usize) -> bool {
        let lhs = self.chi(self.group.mul(g, h));
        let rhs = self.module.abelian.add(self.chi(g), &t.apply(g, self.chi(h)));
        lhs == rhs.as_slice()
    }

    pub fn verify_cocycle(&self, mode: CocycleMode) -> Result<u64, Violation> {
        let t = self.action_table()?;
        if self.chi(0).iter().any(|&x| x != 0) {
            return Err(Violation::IdentityNotZero);
        }
        let n = self.group.order();
        match mode {
            CocycleMode::Full => {
                let bad = (0..n).into_par_iter().find_first(|&g| (0..n).any(|h| !self.law_holds(t, g, h)));
                if let Some(g) = bad {
                    let h = (0..n).find(|&h| !self.law_holds(t, g, h)).unwrap();
                    return Err(Violation::Cocycle(g, h));
                }
                Ok((n * n) as u64)
            }
            CocycleMode::Generators => {
                let gens = self.group.generators();
                for &s in gens {
                    if let Some(h) = (0..n).into_par_iter().find_first(|&h| !self.law_holds(t, s, h)) {
                        return Err(Violation::Cocycle(s, h));
                    }
                }
                Ok((gens.len() * n) as u64)
            }
            CocycleMode::Sampled { pairs, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sample: Vec<(usize, usize)> =
                    (0..pairs).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
                if let Some(&(g, h)) = sample.par_iter().find_first(|&&(g, h)| !self.law_holds(t, g, h)) {
                    return Err(Violation::Cocycle(g, h));
                }
                Ok(pairs as u64)
            }
        }
    }

    /// `|M| = |G|` and `χ` injective.
    pub fn verify_bijective(&self) -> Result<(), Violation> {
        let n = self.group.order();
        if self.module.order() != BigUint::from(n) {
            return Err(Violation::OrderMismatch { group: n, module: self.module.order().to_string() });
        }
        let mut owner = vec![u32::MAX; n];
        for g in 0..n {
            let idx = self.module.abelian.index_of(self.chi(g));
            if owner[idx] != u32::MAX {
                return Err(Violation::NotInjective(owner[idx] as usize, g));
            }
            owner[idx] = g as u32;
        }
        Ok(())
    }

    /// Equivariance for every generator of `A` against every `g ∈ G`, plus
    /// compatibility of the two module actions.
    pub fn verify_equivariant(&self) -> Result<usize, Violation> {
        let Some(eq) = &self.equivariance else {
            return Ok(0);
        };
        let t = self.action_table()?;
        let ab = &self.module.abelian;
        let inv = ab.invariants();
        for (k, (perm, mat)) in eq.automorphisms.iter().zip(&eq.module_actions).enumerate() {
            Automorphism::new(&self.group, perm.clone()).map_err(|e| Violation::BadAutomorphism(k, e.to_string()))?;
            let n = self.group.order();
            if let Some(g) =
                (0..n).into_par_iter().find_first(|&g| self.chi(perm[g] as usize) != ab.apply(mat, self.chi(g)).as_slice())
            {
                return Err(Violation::Equivariance(k, g));
            }
            let flat = mat.concat();
            for &s in self.group.generators() {
                let lhs = compose_flat(inv, &flat, t.mat(s));
                let rhs = compose_flat(inv, t.mat(perm[s] as usize), &flat);
                if lhs != rhs {
                    return Err(Violation::Compatibility(k, s));
                }
            }
        }
        Ok(eq.automorphisms.len())
    }

    /// Default verification: full mode up to `FULL_MODE_LIMIT`, generator mode
    /// plus sampled pairs above; `force_full` always checks all pairs.
    pub fn verify(&self, force_full: bool) -> Result<VerificationSummary, Violation> {
        let n = self.group.order();
        let mut modes = Vec::new();
        let mut pairs = 0;
        if force_full || n <= FULL_MODE_LIMIT {
            pairs += self.verify_cocycle(CocycleMode::Full)?;
            modes.push("full".to_string());
        } else {
            pairs += self.verify_cocycle(CocycleMode::Generators)?;
            pairs += self.verify_cocycle(CocycleMode::Sampled { pairs: SAMPLED_PAIRS, seed: 0 })?;
            modes.push("generators".to_string());
            modes.push(format!("sampled:{SAMPLED_PAIRS}"));
        }
        self.verify_bijective()?;
        let eqn = self.verify_equivariant()?;
        Ok(VerificationSummary { order: n, cocycle_modes: modes, pairs_checked: pairs, equivariance_generators: eqn })
    }

    /// `x ↦ g⁻¹·χ(g x g⁻¹)`, again a bijective cocycle. Equivariance data is
    /// dropped.
    pub fn twisted_by(&self, g: usize) -> Result<IybStructure, Violation> {
        let t = self.action_table()?;
        let gi = self.group.inv(g);
        let table: Vec<Vec<u64>> =
            (0..self.group.order()).map(|x| t.apply(gi, self.chi(self.group.conj_left(g, x)))).collect();
        IybStructure::new(self.group.clone(), self.module.clone(), table, None)
    }

    /// Inverse of `χ` as a lookup from module index to group element.
    pub fn inverse_table(&self) -> Result<Vec<usize>, Violation> {
        self.verify_bijective()?;
        let mut inv = vec![0usize; self.group.order()];
        for g in 0..self.group.order() {
            inv[self.module.abelian.index_of(self.chi(g))] = g;
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_trivial() -> IybStructure {
        let g = Arc::new(Group::cyclic(3).unwrap());
        let m = GModule::trivial(vec![3], 1);
        IybStructure::new(g, m, vec![vec![0], vec![1], vec![2]], None).unwrap()
    }

    #[test]
    fn trivial_action_cocycle_is_homomorphism() {
        let s = c3_trivial();
        s.verify(true).unwrap();
        assert_eq!(s.verify_cocycle(CocycleMode::Generators).unwrap(), 3);
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let g = Arc::new(Group::cyclic(3).unwrap());
        let m = GModule::trivial(vec![3], 1);
        let s = IybStructure::new(g, m, vec![vec![0], vec![1], vec![1]], None).unwrap();
        assert!(matches!(s.verify_cocycle(CocycleMode::Full), Err(Violation::Cocycle(_, _))));
        assert!(matches!(s.verify_cocycle(CocycleMode::Generators), Err(Violation::Cocycle(_, _))));
        assert!(s.verify_bijective().is_err());
    }

    #[test]
    fn identity_must_map_to_zero() {
        let g = Arc::new(Group::cyclic(3).unwrap());
        let m = GModule::trivial(vec![3], 1);
        let r = IybStructure::new(g, m, vec![vec![1], vec![2], vec![0]], None);
        assert_eq!(r.err(), Some(Violation::IdentityNotZero));
    }

    #[test]
    fn non_homomorphic_module_action_is_caught() {
        // C_2 cannot act on Z/3 by multiplication by... 1 is fine, but a
        // generator of C_3 acting by −1 is not an action
        let g = Arc::new(Group::cyclic(3).unwrap());
        let m = GModule::new(vec![3], vec![vec![vec![2]]]).unwrap();
        let s = IybStructure::new(g, m, vec![vec![0], vec![1], vec![2]], None).unwrap();
        assert!(matches!(s.verify_cocycle(CocycleMode::Generators), Err(Violation::ActionNotHom(_, _))));
    }

    #[test]
    fn matrix_must_respect_invariants() {
        // Z/2 ⊕ Z/4, a_10 = 1 would send the order-2 generator to an order-4 element
        assert!(GModule::new(vec![2, 4], vec![vec![vec![1, 0], vec![1, 1]]]).is_err());
        assert!(GModule::new(vec![2, 4], vec![vec![vec![1, 0], vec![2, 1]]]).is_ok());
    }

    #[test]
    fn twisting_preserves_validity() {
        let s = c3_trivial();
        let t = s.twisted_by(1).unwrap();
        t.verify(true).unwrap();
    }
}
