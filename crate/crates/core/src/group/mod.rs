//! Finite groups with indexed elements.
//!
//! Elements are indices `0..order` with the identity at `0`. Small groups are
//! usually stored as Cayley tables; Heisenberg groups, abelian groups and
//! direct/semidirect products use coordinate arithmetic with a mixed-radix
//! index encoding (documented on each constructor), so large groups such as
//! the Heisenberg group mod 97 never need a table.

mod action;
pub mod hertweck;
mod invariants;
mod spec;

pub use action::{Automorphism, GroupAction};
pub use invariants::{StructuralInvariants, Subgroup};
pub use spec::{parse_table, read_action_file, write_table, GroupDesc, SemidirectDesc};

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Image array of a permutation of element indices.
pub type Perm = Vec<u32>;

/// Largest order for which a full Cayley table is materialized.
pub const MAX_TABLE_ORDER: usize = 1 << 13;

/// Orders up to this are checked exhaustively on all triples.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("index 0 is not a two-sided identity (witness {0})")]
    BadIdentity(usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("cannot parse group spec {spec:?}: {reason}")]
    Spec { spec: String, reason: String },
    #[error("io error on {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("not a homomorphism: witness ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("map is not a bijection")]
    NotBijective,
    #[error("element {0} has even order; no odd-order square root")]
    EvenOrder(usize),
    #[error("subgroup is not normal (witness {0})")]
    NotNormal(usize),
    #[error("group of order {0} is too large for this operation")]
    TooLarge(usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("action mismatch: {0}")]
    ActionMismatch(String),
}

#[derive(Debug)]
enum Repr {
    Table { mult: Vec<u32>, inv: Vec<u32> },
    Abelian { factors: Vec<u64> },
    Heisenberg { q: u64 },
    Direct { factors: Vec<Arc<Group>> },
    Semidirect { normal: Arc<Group>, complement: Arc<Group>, action: Vec<Perm> },
}

/// A finite group. Immutable after construction; cheap to share behind `Arc`.
#[derive(Debug)]
pub struct Group {
    repr: Repr,
    order: usize,
    generators: Vec<usize>,
    desc: GroupDesc,
    tree: OnceLock<Vec<(u32, u32)>>,
}

impl Group {
    fn build(repr: Repr, order: usize, generators: Vec<usize>, desc: GroupDesc) -> Group {
        Group { repr, order, generators, desc, tree: OnceLock::new() }
    }

    /// Cyclic group `Z/n`, element `k` is `g^k`.
    pub fn cyclic(n: usize) -> Result<Group, GroupError> {
        Self::abelian_desc(&[n as u64], GroupDesc::Spec(format!("cyclic:{n}")))
    }

    /// `Z/n_1 × … × Z/n_r`, index `x_1 + n_1·x_2 + n_1·n_2·x_3 + …`.
    pub fn abelian(factors: &[u64]) -> Result<Group, GroupError> {
        let spec = factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("x");
        Self::abelian_desc(factors, GroupDesc::Spec(format!("abelian:{spec}")))
    }

    fn abelian_desc(factors: &[u64], desc: GroupDesc) -> Result<Group, GroupError> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(GroupError::Invalid("abelian factors must be positive".into()));
        }
        let order = factors.iter().try_fold(1usize, |a, &f| a.checked_mul(f as usize));
        let order = order.ok_or(GroupError::TooLarge(usize::MAX))?;
        let mut gens = Vec::new();
        let mut stride = 1usize;
        for &f in factors {
            if f > 1 {
                gens.push(stride);
            }
            stride *= f as usize;
        }
        Ok(Self::build(Repr::Abelian { factors: factors.to_vec() }, order, gens, desc))
    }

    /// Heisenberg group mod the odd prime `q`: triples `(n1, n2, n3)` with
    /// `(n1,n2,n3)·(m1,m2,m3) = (n1+m1, n2+m2, n3+m3+n2·m1)`, index
    /// `n1 + q·n2 + q²·n3`. Generators `d1 = (1,0,0)`, `d2 = (0,1,0)`,
    /// `d3 = (0,0,1)`; the triple `(n1,n2,n3)` equals `d1^n1·d2^n2·d3^n3`.
    pub fn heisenberg(q: u64) -> Result<Group, GroupError> {
        if q < 3 || !crate::zmod::is_prime(q) {
            return Err(GroupError::NotOddPrime(q));
        }
        let qq = q as usize;
        Ok(Self::build(
            Repr::Heisenberg { q },
            qq * qq * qq,
            vec![1, qq, qq * qq],
            GroupDesc::Spec(format!("heis:{q}")),
        ))
    }

    /// Dihedral group of order `n` (`n` even, at least 4): `r^a s^b` at index
    /// `a + (n/2)·b`, generators `r`, `s`.
    pub fn dihedral(n: usize) -> Result<Group, GroupError> {
        if n < 4 || n % 2 != 0 {
            return Err(GroupError::Invalid(format!("dihedral order {n} must be even and at least 4")));
        }
        let h = n / 2;
        let g = Self::from_fn(n, |x, y| {
            let (a, b) = (x % h, x / h);
            let (c, d) = (y % h, y / h);
            let c = if b == 1 { (h - c) % h } else { c };
            (a + c) % h + h * ((b + d) % 2)
        })?;
        Ok(g.with_desc(GroupDesc::Spec(format!("dihedral:{n}"))).with_generators_unchecked(vec![1, h]))
    }

    /// Generalized quaternion group of order `n = 2^k ≥ 8`: `x^a y^b` at index
    /// `a + (n/2)·b` with `y² = x^(n/4)` and `y x y⁻¹ = x⁻¹`.
    pub fn quaternion(n: usize) -> Result<Group, GroupError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(GroupError::Invalid(format!("quaternion order {n} must be a power of two ≥ 8")));
        }
        let h = n / 2;
        let g = Self::from_fn(n, |x, y| {
            let (a, b) = (x % h, x / h);
            let (c, d) = (y % h, y / h);
            let c = if b == 1 { (h - c) % h } else { c };
            if b == 1 && d == 1 {
                (a + c + n / 4) % h
            } else {
                (a + c) % h + h * (b + d)
            }
        })?;
        let spec = if n == 8 { "quaternion".to_string() } else { format!("quaternion:{n}") };
        Ok(g.with_desc(GroupDesc::Spec(spec)).with_generators_unchecked(vec![1, h]))
    }

    /// Symmetric group on `n` points, elements in breadth-first order from
    /// the generators `(0 1)` and `(0 1 … n-1)`.
    pub fn symmetric(n: usize) -> Result<Group, GroupError> {
        let (g, _) = Self::symmetric_with_perms(n)?;
        Ok(g)
    }

    pub fn symmetric_with_perms(n: usize) -> Result<(Group, Vec<Perm>), GroupError> {
        if n == 0 || n > 7 {
            return Err(GroupError::Invalid(format!("symmetric degree {n} out of range 1..=7")));
        }
        let mut gens: Vec<Perm> = Vec::new();
        if n >= 2 {
            let mut t: Perm = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        }
        let (g, perms) = Self::from_permutations(n, &gens)?;
        Ok((g.with_desc(GroupDesc::Spec(format!("sym:{n}"))), perms))
    }

    /// Permutation group generated by `gens` (maps on `0..degree`, composed as
    /// functions so `x·y` applies `y` first). Elements are numbered in
    /// breadth-first order from the identity; returns the element permutations.
    pub fn from_permutations(degree: usize, gens: &[Perm]) -> Result<(Group, Vec<Perm>), GroupError> {
        let id: Perm = (0..degree as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elems.len() {
            for g in gens {
                let p = compose(&elems[head], g);
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_TABLE_ORDER {
                        return Err(GroupError::TooLarge(elems.len()));
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                mult[i * n + j] = index[&compose(a, b)] as u32;
            }
        }
        let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).filter(|&i| i != 0).collect();
        let g = Self::from_mult(n, mult)?.with_generators_unchecked(dedup(gen_idx));
        Ok((g, elems))
    }

    fn from_fn<F: Fn(usize, usize) -> usize>(n: usize, f: F) -> Result<Group, GroupError> {
        let mut mult = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mult[x * n + y] = f(x, y) as u32;
            }
        }
        Self::from_mult(n, mult)
    }

    fn from_mult(n: usize, mult: Vec<u32>) -> Result<Group, GroupError> {
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if mult[x * n + y] == 0 {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        if let Some(x) = inv.iter().position(|&i| i == u32::MAX) {
            return Err(GroupError::NoInverse(x));
        }
        let table: Vec<Vec<u32>> = mult.chunks(n).map(|c| c.to_vec()).collect();
        let mut g = Self::build(Repr::Table { mult, inv }, n, Vec::new(), GroupDesc::Table { table, generators: None });
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// Ingest a Cayley table (`table[g][h] = g·h`, identity at 0), checking the
    /// group axioms: all triples for order ≤ 256, 10⁵ random triples above.
    pub fn from_table(table: Vec<Vec<u32>>) -> Result<Group, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::MalformedTable(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as usize >= n) {
                return Err(GroupError::MalformedTable(format!("entry {bad} out of range in row {i}")));
            }
        }
        for x in 0..n {
            if table[0][x] as usize != x || table[x][0] as usize != x {
                return Err(GroupError::BadIdentity(x));
            }
        }
        let mult: Vec<u32> = table.into_iter().flatten().collect();
        let g = Self::from_mult(n, mult)?;
        for x in 0..n {
            let i = g.inv(x);
            if g.mul(i, x) != 0 {
                return Err(GroupError::NoInverse(x));
            }
        }
        g.check_associative()?;
        Ok(g)
    }

    pub fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let assoc = |x: usize, y: usize, z: usize| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z));
        if n <= EXHAUSTIVE_CHECK_ORDER {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return Err(GroupError::NotAssociative(x, y, z));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x1b5);
            for _ in 0..100_000 {
                let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !assoc(x, y, z) {
                    return Err(GroupError::NotAssociative(x, y, z));
                }
            }
        }
        Ok(())
    }

    /// Direct product, index `i_1 + |G_1|·i_2 + …`.
    pub fn direct_product(factors: Vec<Arc<Group>>) -> Result<Group, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::Invalid("direct product of no factors".into()));
        }
        let order = factors.iter().try_fold(1usize, |a, f| a.checked_mul(f.order));
        let order = order.ok_or(GroupError::TooLarge(usize::MAX))?;
        let mut gens = Vec::new();
        let mut stride = 1;
        for f in &factors {
            gens.extend(f.generators.iter().map(|&g| g * stride));
            stride *= f.order;
        }
        let desc = GroupDesc::Direct { direct: factors.iter().map(|f| f.desc.clone()).collect() };
        Ok(Self::build(Repr::Direct { factors }, order, gens, desc))
    }

    /// Semidirect product `N ⋊ H` for an action of `H` on `N`. Elements are
    /// pairs `(n, h)` at index `n + |N|·h`, multiplied as
    /// `(n1,h1)(n2,h2) = (n1·ʰ¹n2, h1h2)`; `N` sits at indices `0..|N|` and
    /// generators are those of `N` followed by those of `H`.
    pub fn semidirect(action: &GroupAction) -> Result<Group, GroupError> {
        let normal = action.target().clone();
        let complement = action.actor().clone();
        let order = normal.order.checked_mul(complement.order).ok_or(GroupError::TooLarge(usize::MAX))?;
        let perms = action.all_images()?;
        let mut gens: Vec<usize> = normal.generators.clone();
        gens.extend(complement.generators.iter().map(|&h| h * normal.order));
        let desc = GroupDesc::Semidirect {
            semidirect: SemidirectDesc {
                normal: Box::new(normal.desc.clone()),
                complement: Box::new(complement.desc.clone()),
                action: action.generator_images().iter().map(|a| a.map().to_vec()).collect(),
            },
        };
        Ok(Self::build(Repr::Semidirect { normal, complement, action: perms }, order, gens, desc))
    }

    fn with_desc(mut self, desc: GroupDesc) -> Group {
        self.desc = desc;
        self
    }

    pub(crate) fn with_generators_unchecked(mut self, gens: Vec<usize>) -> Group {
        if let GroupDesc::Table { generators, .. } = &mut self.desc {
            *generators = Some(gens.clone());
        }
        self.generators = gens;
        self.tree = OnceLock::new();
        self
    }

    /// Replace the generating set; fails unless `gens` generate the group.
    pub fn with_generators(self, gens: Vec<usize>) -> Result<Group, GroupError> {
        if let Some(&bad) = gens.iter().find(|&&g| g >= self.order) {
            return Err(GroupError::IndexOutOfRange { index: bad, order: self.order });
        }
        let span = self.closure(&gens);
        if span.len() != self.order {
            return Err(GroupError::Invalid("elements do not generate the group".into()));
        }
        Ok(self.with_generators_unchecked(gens))
    }

    /// Regenerate the Cayley table representation with a table descriptor.
    pub fn to_table_group(&self) -> Result<Group, GroupError> {
        if self.order > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(self.order));
        }
        let g = Self::from_fn(self.order, |x, y| self.mul(x, y))?;
        Ok(g.with_generators_unchecked(self.generators.clone()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn desc(&self) -> &GroupDesc {
        &self.desc
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The Heisenberg prime, when this is a Heisenberg group.
    pub fn heisenberg_prime(&self) -> Option<u64> {
        match self.repr {
            Repr::Heisenberg { q } => Some(q),
            _ => None,
        }
    }

    /// `(N, H)` when this group was built by [`Group::semidirect`].
    pub fn semidirect_factors(&self) -> Option<(&Arc<Group>, &Arc<Group>)> {
        match &self.repr {
            Repr::Semidirect { normal, complement, .. } => Some((normal, complement)),
            _ => None,
        }
    }

    /// The action of `H` on `N` for a group built by [`Group::semidirect`].
    pub fn semidirect_action(&self) -> Option<GroupAction> {
        match &self.repr {
            Repr::Semidirect { normal, complement, action } => {
                let images = complement
                    .generators
                    .iter()
                    .map(|&h| Automorphism::from_perm_unchecked(action[h].clone()))
                    .collect();
                GroupAction::new(complement.clone(), normal.clone(), images).ok()
            }
            _ => None,
        }
    }

    pub fn direct_factors(&self) -> Option<&[Arc<Group>]> {
        match &self.repr {
            Repr::Direct { factors } => Some(factors),
            _ => None,
        }
    }

    fn check(&self, x: usize) -> Result<(), GroupError> {
        if x >= self.order {
            Err(GroupError::IndexOutOfRange { index: x, order: self.order })
        } else {
            Ok(())
        }
    }

    /// Checked product.
    pub fn multiply(&self, x: usize, y: usize) -> Result<usize, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Product of valid indices; panics on out-of-range input.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.repr {
            Repr::Table { mult, .. } => mult[x * self.order + y] as usize,
            Repr::Abelian { factors } => {
                let mut idx = 0usize;
                let mut stride = 1usize;
                let (mut a, mut b) = (x, y);
                for &f in factors {
                    let f = f as usize;
                    idx += ((a % f + b % f) % f) * stride;
                    a /= f;
                    b /= f;
                    stride *= f;
                }
                idx
            }
            Repr::Heisenberg { q } => {
                let q = *q as usize;
                let (n1, n2, n3) = (x % q, (x / q) % q, x / (q * q));
                let (m1, m2, m3) = (y % q, (y / q) % q, y / (q * q));
                let a = (n1 + m1) % q;
                let b = (n2 + m2) % q;
                let c = (n3 + m3 + n2 * m1) % q;
                a + q * b + q * q * c
            }
            Repr::Direct { factors } => {
                let mut idx = 0usize;
                let mut stride = 1usize;
                let (mut a, mut b) = (x, y);
                for f in factors {
                    let n = f.order;
                    idx += f.mul(a % n, b % n) * stride;
                    a /= n;
                    b /= n;
                    stride *= n;
                }
                idx
            }
            Repr::Semidirect { normal, complement, action } => {
                let n = normal.order;
                let (n1, h1) = (x % n, x / n);
                let (n2, h2) = (y % n, y / n);
                let nn = normal.mul(n1, action[h1][n2] as usize);
                nn + n * complement.mul(h1, h2)
            }
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        match &self.repr {
            Repr::Table { inv, .. } => inv[x] as usize,
            Repr::Abelian { factors } => {
                let mut idx = 0usize;
                let mut stride = 1usize;
                let mut a = x;
                for &f in factors {
                    let f = f as usize;
                    idx += ((f - a % f) % f) * stride;
                    a /= f;
                    stride *= f;
                }
                idx
            }
            Repr::Heisenberg { q } => {
                let q = *q as usize;
                let (n1, n2, n3) = (x % q, (x / q) % q, x / (q * q));
                let a = (q - n1) % q;
                let b = (q - n2) % q;
                let c = (q - n3 + n1 * n2 % q) % q;
                a + q * b + q * q * c
            }
            Repr::Direct { factors } => {
                let mut idx = 0usize;
                let mut stride = 1usize;
                let mut a = x;
                for f in factors {
                    let n = f.order;
                    idx += f.inv(a % n) * stride;
                    a /= n;
                    stride *= n;
                }
                idx
            }
            Repr::Semidirect { normal, complement, action } => {
                // (n,h)^{-1} = (h^{-1}·n^{-1}, h^{-1})
                let n = normal.order;
                let (nn, h) = (x % n, x / n);
                let hi = complement.inv(h);
                action[hi][normal.inv(nn)] as usize + n * hi
            }
        }
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `x^y = y⁻¹·x·y`.
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(y), x), y)
    }

    /// `ᵍx = g·x·g⁻¹`.
    pub fn conj_left(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a⁻¹·b⁻¹·a·b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn checked_commutator(&self, a: usize, b: usize) -> Result<usize, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.commutator(a, b))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// The square root of `x` inside `⟨x⟩`, `x^((ord x + 1)/2)`; requires odd order.
    pub fn sqrt_odd(&self, x: usize) -> Result<usize, GroupError> {
        self.check(x)?;
        let o = self.element_order(x);
        if o % 2 == 0 {
            return Err(GroupError::EvenOrder(x));
        }
        Ok(self.pow(x, ((o + 1) / 2) as i64))
    }

    /// Elements of the subgroup generated by `gens`, in breadth-first order.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut out = vec![0usize];
        seen[0] = true;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            head += 1;
        }
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut count = 1;
        for x in 1..self.order {
            if count == self.order {
                break;
            }
            if !seen[x] {
                gens.push(x);
                let span = self.closure(&gens);
                for &y in &span {
                    seen[y] = true;
                }
                count = span.len();
            }
        }
        gens
    }

    /// Breadth-first spanning tree of the right Cayley graph: entry `y` is
    /// `(x, k)` with `y = x·gens[k]`. The root entry is `(0, u32::MAX)`.
    pub fn spanning_tree(&self) -> &[(u32, u32)] {
        self.tree.get_or_init(|| {
            let mut tree = vec![(u32::MAX, u32::MAX); self.order];
            tree[0] = (0, u32::MAX);
            let mut queue = vec![0usize];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                for (k, &g) in self.generators.iter().enumerate() {
                    let y = self.mul(x, g);
                    if tree[y].0 == u32::MAX && y != 0 {
                        tree[y] = (x as u32, k as u32);
                        queue.push(y);
                    }
                }
                head += 1;
            }
            tree
        })
    }

    /// Breadth-first order of the spanning tree (parents before children).
    pub fn bfs_order(&self) -> Vec<usize> {
        let tree = self.spanning_tree();
        let mut order = Vec::with_capacity(self.order);
        order.push(0);
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.order];
        for (y, &(p, _)) in tree.iter().enumerate().skip(1) {
            children[p as usize].push(y);
        }
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            order.extend_from_slice(&children[x]);
            head += 1;
        }
        order
    }

    /// Factorization oracle: a word in generator positions whose product is `x`.
    pub fn word(&self, x: usize) -> Vec<usize> {
        let tree = self.spanning_tree();
        let mut w = Vec::new();
        let mut y = x;
        while y != 0 {
            let (p, k) = tree[y];
            w.push(k as usize);
            y = p as usize;
        }
        w.reverse();
        w
    }

    pub fn evaluate_word(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &k| self.mul(acc, self.generators[k]))
    }

    /// Extend an assignment on generators to every element along the spanning
    /// tree, `value(x·s) = combine(value(x), gen_value(s))`.
    pub fn extend_along_tree<T: Clone, F>(&self, identity: T, gen_values: &[T], combine: F) -> Vec<T>
    where
        F: Fn(&T, &T) -> T,
    {
        let tree = self.spanning_tree();
        let mut out: Vec<Option<T>> = vec![None; self.order];
        out[0] = Some(identity);
        for y in self.bfs_order().into_iter().skip(1) {
            let (p, k) = tree[y];
            let v = combine(out[p as usize].as_ref().unwrap(), &gen_values[k as usize]);
            out[y] = Some(v);
        }
        out.into_iter().map(Option::unwrap).collect()
    }

    /// The quotient by a normal subgroup, as a table group, with the
    /// projection map. Cosets are numbered by their smallest element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(Group, Vec<usize>), GroupError> {
        let mut in_n = vec![false; self.order];
        for &x in normal {
            self.check(x)?;
            in_n[x] = true;
        }
        for &x in normal {
            for &g in &self.generators {
                let c = self.conj(x, g);
                if !in_n[c] {
                    return Err(GroupError::NotNormal(x));
                }
            }
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset[x] == usize::MAX {
                let id = reps.len();
                reps.push(x);
                for &n in normal {
                    coset[self.mul(x, n)] = id;
                }
            }
        }
        let k = reps.len();
        if k > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(k));
        }
        let mut mult = vec![0u32; k * k];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mult[i * k + j] = coset[self.mul(a, b)] as u32;
            }
        }
        let q = Self::from_mult(k, mult)?;
        let gens = dedup(self.generators.iter().map(|&g| coset[g]).filter(|&c| c != 0).collect());
        let q = if gens.is_empty() && k == 1 { q } else { q.with_generators(gens)? };
        Ok((q, coset))
    }

    /// Cayley table rows (only for tabulable orders).
    pub fn table(&self) -> Result<Vec<Vec<u32>>, GroupError> {
        if self.order > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(self.order));
        }
        Ok((0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y) as u32).collect())
            .collect())
    }

    /// Identity, inverse and (sampled or exhaustive) associativity laws.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        for x in 0..self.order {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::BadIdentity(x));
            }
            let i = self.inv(x);
            if self.mul(x, i) != 0 || self.mul(i, x) != 0 {
                return Err(GroupError::NoInverse(x));
            }
        }
        self.check_associative()
    }
}

/// `(p∘q)[i] = p[q[i]]`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&i| p[i as usize]).collect()
}

pub fn invert_perm(p: &[u32]) -> Perm {
    let mut out = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn dedup(v: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis_idx(q: usize, n: (usize, usize, usize)) -> usize {
        n.0 + q * n.1 + q * q * n.2
    }

    #[test]
    fn heisenberg_products() {
        let g = Group::heisenberg(3).unwrap();
        let d1 = heis_idx(3, (1, 0, 0));
        let d2 = heis_idx(3, (0, 1, 0));
        assert_eq!(g.mul(d1, d2), heis_idx(3, (1, 1, 0)));
        assert_eq!(g.mul(d2, d1), heis_idx(3, (1, 1, 1)));
        for x in 0..27 {
            assert_eq!(g.mul(0, x), x);
        }
    }

    #[test]
    fn heisenberg_commutator_and_conjugation() {
        let g = Group::heisenberg(3).unwrap();
        let (d1, d2, d3) = (1, 3, 9);
        assert_eq!(g.commutator(d2, d1), d3);
        // d1^{-1} d2 d1 = d2 d3
        assert_eq!(g.conj(d2, d1), g.mul(d2, d3));
    }

    #[test]
    fn dihedral_commutator() {
        let g = Group::dihedral(8).unwrap();
        let (r, s) = (1, 4);
        assert_eq!(g.commutator(r, s), g.pow(r, 2));
        let c = Group::cyclic(6).unwrap();
        assert_eq!(c.commutator(1, 2), 0);
    }

    #[test]
    fn square_roots() {
        let c9 = Group::cyclic(9).unwrap();
        assert_eq!(c9.sqrt_odd(1).unwrap(), 5);
        let h = Group::heisenberg(3).unwrap();
        assert_eq!(h.sqrt_odd(9).unwrap(), 18);
        assert_eq!(h.sqrt_odd(0).unwrap(), 0);
        let c4 = Group::cyclic(4).unwrap();
        assert_eq!(c4.sqrt_odd(1), Err(GroupError::EvenOrder(1)));
    }

    #[test]
    fn structured_groups_satisfy_axioms() {
        let groups = vec![
            Group::cyclic(12).unwrap(),
            Group::abelian(&[2, 4, 3]).unwrap(),
            Group::dihedral(12).unwrap(),
            Group::quaternion(8).unwrap(),
            Group::quaternion(16).unwrap(),
            Group::heisenberg(3).unwrap(),
            Group::heisenberg(5).unwrap(),
            Group::symmetric(4).unwrap(),
        ];
        for g in &groups {
            g.check_axioms().unwrap();
            assert_eq!(g.closure(g.generators()).len(), g.order());
            for x in 0..g.order() {
                assert_eq!(g.evaluate_word(&g.word(x)), x);
            }
        }
    }

    #[test]
    fn large_heisenberg_sampled_axioms() {
        let g = Group::heisenberg(97).unwrap();
        assert_eq!(g.order(), 912_673);
        g.check_associative().unwrap();
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // identity row/column fine, but (1·1)·2 ≠ 1·(1·2)
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(Group::from_table(t).is_err());
    }

    #[test]
    fn quotient_of_d8_by_center() {
        let g = Group::dihedral(8).unwrap();
        let z = vec![0, 2];
        let (q, proj) = g.quotient(&z).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_abelian());
        assert_eq!(proj[2], 0);
        assert!(g.quotient(&[0, 4]).is_err());
    }

    #[test]
    fn checked_multiply_rejects_out_of_range() {
        let g = Group::cyclic(5).unwrap();
        assert!(g.multiply(5, 0).is_err());
        assert_eq!(g.multiply(3, 4).unwrap(), 2);
    }
}
