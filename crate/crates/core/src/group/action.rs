use std::sync::{Arc, OnceLock};

use super::{compose, Group, GroupError, Perm};

/// Largest `|A|·|G|` for which an action is checked on the full table.
const FULL_ACTION_CHECK: usize = 50_000_000;

/// An automorphism of a group, stored as the image of every element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    map: Perm,
}

impl Automorphism {
    /// Checks bijectivity, `map(0) = 0` and `map(x·s) = map(x)·map(s)` for all
    /// `x` and every generator `s`, which forces multiplicativity on all pairs.
    pub fn new(group: &Group, map: Perm) -> Result<Self, GroupError> {
        let n = group.order();
        if map.len() != n {
            return Err(GroupError::Invalid(format!("automorphism has {} entries, expected {n}", map.len())));
        }
        let mut seen = vec![false; n];
        for &y in &map {
            let y = y as usize;
            if y >= n || seen[y] {
                return Err(GroupError::NotBijective);
            }
            seen[y] = true;
        }
        if map[0] != 0 {
            return Err(GroupError::NotHomomorphism(0, 0));
        }
        for x in 0..n {
            for &s in group.generators() {
                let lhs = map[group.mul(x, s)] as usize;
                let rhs = group.mul(map[x] as usize, map[s] as usize);
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism(x, s));
                }
            }
        }
        Ok(Automorphism { map })
    }

    /// The endomorphism determined by images of the generators, extended
    /// along the spanning tree and then checked like [`Automorphism::new`].
    pub fn from_generator_images(group: &Group, images: &[usize]) -> Result<Self, GroupError> {
        if images.len() != group.generators().len() {
            return Err(GroupError::Invalid("one image per generator required".into()));
        }
        let vals = group.extend_along_tree(0usize, images, |&a, &b| group.mul(a, b));
        Self::new(group, vals.into_iter().map(|v| v as u32).collect())
    }

    pub fn identity(group: &Group) -> Self {
        Automorphism { map: (0..group.order() as u32).collect() }
    }

    /// Conjugation `x ↦ g·x·g⁻¹`.
    pub fn inner(group: &Group, g: usize) -> Self {
        Automorphism { map: (0..group.order()).map(|x| group.conj_left(g, x) as u32).collect() }
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { map: compose(&self.map, &other.map) }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { map: super::invert_perm(&self.map) }
    }

    pub(crate) fn from_perm_unchecked(map: Perm) -> Self {
        Automorphism { map }
    }
}

/// A left action of `actor` on `target` by automorphisms, given on the
/// generators of `actor`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    actor: Arc<Group>,
    target: Arc<Group>,
    images: Vec<Automorphism>,
    all: Arc<OnceLock<Vec<Perm>>>,
}

/// A relator: word of `(generator position, exponent)` pairs.
pub type Relator = Vec<(usize, i64)>;

impl GroupAction {
    /// Builds and checks the action on the full table of `actor`: the images
    /// are propagated along the spanning tree and every Cayley-graph edge is
    /// checked, so the result is a homomorphism `actor → Aut(target)`.
    pub fn new(actor: Arc<Group>, target: Arc<Group>, images: Vec<Automorphism>) -> Result<Self, GroupError> {
        Self::check_shape(&actor, &target, &images)?;
        if actor.order().saturating_mul(target.order()) > FULL_ACTION_CHECK {
            return Err(GroupError::TooLarge(actor.order() * target.order()));
        }
        let act = GroupAction { actor, target, images, all: Arc::new(OnceLock::new()) };
        let all = act.extend();
        for a in 0..act.actor.order() {
            for (k, &s) in act.actor.generators().iter().enumerate() {
                let lhs = &all[act.actor.mul(a, s)];
                if *lhs != compose(&all[a], act.images[k].map()) {
                    return Err(GroupError::NotHomomorphism(a, s));
                }
            }
        }
        let _ = act.all.set(all);
        Ok(act)
    }

    /// Builds the action after checking that each relator of a presentation
    /// of `actor` evaluates to the identity both in `actor` and in
    /// `Aut(target)`. The caller asserts that the relators present `actor`.
    pub fn with_relators(
        actor: Arc<Group>,
        target: Arc<Group>,
        images: Vec<Automorphism>,
        relators: &[Relator],
    ) -> Result<Self, GroupError> {
        Self::check_shape(&actor, &target, &images)?;
        let id: Perm = (0..target.order() as u32).collect();
        for rel in relators {
            let mut in_actor = 0usize;
            let mut perm = id.clone();
            for &(k, e) in rel {
                let gen = *actor.generators().get(k).ok_or(GroupError::Invalid("relator index".into()))?;
                in_actor = actor.mul(in_actor, actor.pow(gen, e));
                let base = if e < 0 { images[k].inverse() } else { images[k].clone() };
                for _ in 0..e.unsigned_abs() {
                    perm = compose(&perm, base.map());
                }
            }
            if in_actor != 0 {
                return Err(GroupError::ActionMismatch(format!("relator {rel:?} is not trivial in the actor")));
            }
            if perm != id {
                return Err(GroupError::ActionMismatch(format!("relator {rel:?} does not act trivially")));
            }
        }
        Ok(GroupAction { actor, target, images, all: Arc::new(OnceLock::new()) })
    }

    /// The trivial action.
    pub fn trivial(actor: Arc<Group>, target: Arc<Group>) -> Self {
        let images = vec![Automorphism::identity(&target); actor.generators().len()];
        GroupAction { actor, target, images, all: Arc::new(OnceLock::new()) }
    }

    /// The permutation group generated by `images` acting on `target`; the
    /// actor is built by closure.
    pub fn generated_by(target: Arc<Group>, images: Vec<Automorphism>) -> Result<Self, GroupError> {
        let perms: Vec<Perm> = images.iter().map(|a| a.map().to_vec()).collect();
        let (actor, elems) = Group::from_permutations(target.order(), &perms)?;
        let actor = actor.with_generators_unchecked(
            perms.iter().map(|p| elems.iter().position(|e| e == p).unwrap()).collect(),
        );
        let act = GroupAction { actor: Arc::new(actor), target, images, all: Arc::new(OnceLock::new()) };
        let all: Vec<Perm> = elems;
        let _ = act.all.set(all);
        Ok(act)
    }

    fn check_shape(actor: &Group, target: &Group, images: &[Automorphism]) -> Result<(), GroupError> {
        if images.len() != actor.generators().len() {
            return Err(GroupError::ActionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                actor.generators().len()
            )));
        }
        if images.iter().any(|a| a.map().len() != target.order()) {
            return Err(GroupError::ActionMismatch("image size differs from target order".into()));
        }
        Ok(())
    }

    fn extend(&self) -> Vec<Perm> {
        let id: Perm = (0..self.target.order() as u32).collect();
        let gens: Vec<Perm> = self.images.iter().map(|a| a.map().to_vec()).collect();
        self.actor.extend_along_tree(id, &gens, |a, b| compose(a, b))
    }

    pub fn actor(&self) -> &Arc<Group> {
        &self.actor
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn generator_images(&self) -> &[Automorphism] {
        &self.images
    }

    /// The permutation of every actor element; only for tabulable sizes.
    pub fn all_images(&self) -> Result<Vec<Perm>, GroupError> {
        if let Some(all) = self.all.get() {
            return Ok(all.clone());
        }
        if self.actor.order().saturating_mul(self.target.order()) > FULL_ACTION_CHECK {
            return Err(GroupError::TooLarge(self.actor.order()));
        }
        Ok(self.all.get_or_init(|| self.extend()).clone())
    }

    /// `ᵃg`, through the cached table or the factorization of `a`.
    pub fn act(&self, a: usize, g: usize) -> usize {
        if let Some(all) = self.all.get() {
            return all[a][g] as usize;
        }
        let w = self.actor.word(a);
        w.iter().rev().fold(g, |x, &k| self.images[k].apply(x))
    }

    /// Permutation for one actor element.
    pub fn image(&self, a: usize) -> Perm {
        if let Some(all) = self.all.get() {
            return all[a].clone();
        }
        let w = self.actor.word(a);
        let id: Perm = (0..self.target.order() as u32).collect();
        w.iter().fold(id, |p, &k| compose(&p, self.images[k].map()))
    }

    /// `G^n` with the action of `A ≀ Σ_n`: `((a_i), σ)·(x_i) = (a_i·x_{σ⁻¹(i)})`.
    /// The wreath group is `A^n ⋊ Σ_n` with `Σ_n` permuting coordinates.
    pub fn direct_power_with_wreath(&self, n: usize) -> Result<(Arc<Group>, GroupAction), GroupError> {
        if n < 1 {
            return Err(GroupError::Invalid("power must be at least 1".into()));
        }
        if n == 1 {
            let g1 = Arc::new(Group::direct_product(vec![self.target.clone()])?);
            let act = GroupAction {
                actor: self.actor.clone(),
                target: g1.clone(),
                images: self.images.clone(),
                all: self.all.clone(),
            };
            return Ok((g1, act));
        }
        let gn = Arc::new(Group::direct_product(vec![self.target.clone(); n])?);
        let an = Arc::new(Group::direct_product(vec![self.actor.clone(); n])?);
        let (sym, sym_perms) = Group::symmetric_with_perms(n)?;
        let sym = Arc::new(sym);
        let gsize = self.target.order();
        let asize = self.actor.order();
        // Σ_n on A^n and on G^n, (σ·x)_i = x_{σ⁻¹(i)}
        let permute = |size: usize, total: usize, sigma: &Perm| -> Perm {
            let inv = super::invert_perm(sigma);
            (0..total)
                .map(|x| {
                    let coords = digits(x, size, n);
                    let moved: Vec<usize> = (0..n).map(|i| coords[inv[i] as usize]).collect();
                    undigits(&moved, size) as u32
                })
                .collect()
        };
        let sym_gen_perms: Vec<&Perm> = sym.generators().iter().map(|&s| &sym_perms[s]).collect();
        let on_an: Vec<Automorphism> = sym_gen_perms
            .iter()
            .map(|p| Automorphism::new(&an, permute(asize, an.order(), p)))
            .collect::<Result<_, _>>()?;
        let sym_on_an = GroupAction::new(sym.clone(), an.clone(), on_an)?;
        let wreath = Arc::new(Group::semidirect(&sym_on_an)?);
        let mut images = Vec::new();
        for slot in 0..n {
            for a in self.images.iter() {
                let map: Perm = (0..gn.order())
                    .map(|x| {
                        let mut c = digits(x, gsize, n);
                        c[slot] = a.apply(c[slot]);
                        undigits(&c, gsize) as u32
                    })
                    .collect();
                images.push(Automorphism::from_perm_unchecked(map));
            }
        }
        for p in &sym_gen_perms {
            images.push(Automorphism::new(&gn, permute(gsize, gn.order(), p))?);
        }
        let act = if wreath.order().saturating_mul(gn.order()) <= FULL_ACTION_CHECK {
            GroupAction::new(wreath, gn.clone(), images)?
        } else {
            return Err(GroupError::TooLarge(wreath.order()));
        };
        Ok((gn, act))
    }

    /// Restrict to the subgroup generated by the given actor elements.
    pub fn restrict(&self, elements: &[usize]) -> Result<GroupAction, GroupError> {
        let imgs: Vec<Automorphism> =
            elements.iter().map(|&a| Automorphism::from_perm_unchecked(self.image(a))).collect();
        GroupAction::generated_by(self.target.clone(), imgs)
    }

    /// Same action with a different (equal) target handle.
    pub fn with_target(&self, target: Arc<Group>) -> Result<GroupAction, GroupError> {
        if target.order() != self.target.order() {
            return Err(GroupError::ActionMismatch("target order differs".into()));
        }
        let mut out = self.clone();
        out.target = target;
        Ok(out)
    }
}

fn digits(mut x: usize, base: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = x % base;
            x /= base;
            d
        })
        .collect()
}

fn undigits(d: &[usize], base: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}
