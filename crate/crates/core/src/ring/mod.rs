//! The group ring `(Z/m)G` and its augmentation ideal filtration.
//!
//! Ring elements are coefficient vectors indexed by group elements. Every
//! additive subgroup is carried as a [`HowellBasis`] over `Z/m` of dimension
//! `|G|`, so inclusion, sums, quotients and indices are exact.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use thiserror::Error;

use crate::group::{Group, GroupError, Subgroup};
use crate::zmod::{
    add_mod, axpy, mul_mod, neg_mod, prime_power, pure_complement, FiniteAbelian, HowellBasis, LinalgError,
    QuotientModule,
};

/// Largest group order accepted for group-ring computations.
pub const MAX_RING_ORDER: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("group of order {0} exceeds the group-ring size bound")]
    TooLarge(usize),
    #[error("omega power {0} outside 1..=3")]
    Depth(usize),
    #[error("modulus {0} is not a power of the group's prime")]
    NotPGroupModulus(u64),
    #[error("nilpotency class exceeds 2")]
    ClassTooLarge,
    #[error("submodule is not a left ideal (witness generator {0})")]
    NotLeftIdeal(usize),
    #[error("{0}")]
    Failed(String),
}

/// `(Z/m)G` for a finite group `G`.
#[derive(Clone, Debug)]
pub struct GroupRing {
    group: Arc<Group>,
    modulus: u64,
    omega: [OnceLock<HowellBasis>; 3],
}

impl GroupRing {
    pub fn new(group: Arc<Group>, modulus: u64) -> Result<Self, RingError> {
        if group.order() > MAX_RING_ORDER {
            return Err(RingError::TooLarge(group.order()));
        }
        if modulus < 2 {
            return Err(RingError::Failed("modulus must be at least 2".into()));
        }
        Ok(GroupRing { group, modulus, omega: Default::default() })
    }

    /// `(Z/p^k)G` for a `p`-group `G` of order `p^n`, with `k = factor·n`.
    pub fn for_p_group(group: Arc<Group>, factor: u32) -> Result<Self, RingError> {
        let (p, n) = prime_power(group.order() as u64).ok_or(RingError::NotPGroupModulus(0))?;
        let m = p.checked_pow(n * factor).ok_or(RingError::TooLarge(group.order()))?;
        Self::new(group, m)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn basis_vector(&self, g: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.dim()];
        v[g] = 1;
        v
    }

    /// `1 − g`.
    pub fn one_minus(&self, g: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.dim()];
        v[0] = 1;
        v[g] = add_mod(v[g], self.modulus - 1, self.modulus);
        v
    }

    pub fn augmentation(&self, v: &[u64]) -> u64 {
        v.iter().fold(0, |a, &x| add_mod(a, x, self.modulus))
    }

    /// `g·v`.
    pub fn left_mul_group(&self, g: usize, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim()];
        for (x, &c) in v.iter().enumerate() {
            if c != 0 {
                out[self.group.mul(g, x)] = c;
            }
        }
        out
    }

    /// `(1 − g)·v`.
    pub fn one_minus_times(&self, g: usize, v: &[u64]) -> Vec<u64> {
        let gv = self.left_mul_group(g, v);
        v.iter().zip(gv).map(|(&a, b)| crate::zmod::sub_mod(a, b, self.modulus)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; self.dim()];
        for (x, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (y, &cb) in b.iter().enumerate() {
                if cb != 0 {
                    let z = self.group.mul(x, y);
                    out[z] = add_mod(out[z], mul_mod(ca, cb, m), m);
                }
            }
        }
        out
    }

    /// Apply a group automorphism coefficientwise: `Σ c_x x ↦ Σ c_x φ(x)`.
    pub fn apply_automorphism(&self, map: &[u32], v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim()];
        for (x, &c) in v.iter().enumerate() {
            out[map[x] as usize] = c;
        }
        out
    }

    fn span(&self, rows: impl IntoIterator<Item = Vec<u64>>) -> HowellBasis {
        HowellBasis::from_rows(self.modulus, self.dim(), rows)
    }

    /// Smallest left ideal containing `rows`.
    pub fn left_ideal_closure(&self, rows: impl IntoIterator<Item = Vec<u64>>) -> HowellBasis {
        let mut basis = self.span(rows);
        loop {
            let mut all: Vec<Vec<u64>> = basis.rows().to_vec();
            for r in basis.rows() {
                for &s in self.group.generators() {
                    all.push(self.left_mul_group(s, r));
                }
            }
            let next = self.span(all);
            if next == basis {
                return basis;
            }
            basis = next;
        }
    }

    /// Whether `g·I ⊆ I` for all generators `g`.
    pub fn is_left_ideal(&self, basis: &HowellBasis) -> bool {
        self.left_ideal_witness(basis).is_none()
    }

    /// A generator `g` with `g·I ⊄ I`, if any.
    pub fn left_ideal_witness(&self, basis: &HowellBasis) -> Option<usize> {
        for r in basis.rows() {
            for &s in self.group.generators() {
                if !basis.contains(&self.left_mul_group(s, r)) {
                    return Some(s);
                }
            }
        }
        None
    }

    /// `ω·J`, the left ideal spanned by `(1 − s)·b` for generators `s`.
    pub fn omega_times(&self, j: &HowellBasis) -> HowellBasis {
        let rows: Vec<Vec<u64>> = j
            .rows()
            .iter()
            .flat_map(|b| self.group.generators().iter().map(move |&s| (s, b)))
            .map(|(s, b)| self.one_minus_times(s, b))
            .collect();
        self.left_ideal_closure(rows)
    }

    /// `ω^i` for `i ∈ 1..=3`, memoized.
    pub fn omega_power(&self, i: usize) -> Result<&HowellBasis, RingError> {
        if !(1..=3).contains(&i) {
            return Err(RingError::Depth(i));
        }
        if let Some(b) = self.omega[i - 1].get() {
            return Ok(b);
        }
        let b = if i == 1 {
            self.span((1..self.dim()).map(|g| self.one_minus(g)))
        } else {
            let prev = self.omega_power(i - 1)?.clone();
            self.omega_times(&prev)
        };
        Ok(self.omega[i - 1].get_or_init(|| b))
    }

    /// `{g : 1 − g ∈ ω^i}`.
    pub fn dimension_subgroup_probe(&self, i: usize) -> Result<Vec<usize>, RingError> {
        let w = self.omega_power(i)?;
        Ok((0..self.dim()).filter(|&g| w.contains(&self.one_minus(g))).collect())
    }

    /// Checks that `g[G,G] ↦ 1 − g + ω²` is a well-defined bijective
    /// homomorphism `G/[G,G] → ω/ω²`.
    pub fn abelianization_iso_check(&self) -> Result<AbelianizationReport, RingError> {
        let q = QuotientModule::new(self.omega_power(1)?, self.omega_power(2)?)?;
        let derived = self.group.derived_subgroup();
        let fa = FiniteAbelian::new(q.invariants().to_vec());
        let image: Vec<Vec<u64>> = (0..self.dim())
            .map(|g| q.coords(&self.one_minus(g)).ok_or(LinalgError::NotInModule))
            .collect::<Result<_, _>>()?;
        let gens = self.group.generators();
        for g in 0..self.dim() {
            for &s in gens {
                let gs = self.group.mul(g, s);
                if image[gs] != fa.add(&image[g], &image[s]) {
                    return Ok(AbelianizationReport::failed(q.order(), (g, s)));
                }
            }
        }
        // kernel is exactly [G,G]
        for g in 0..self.dim() {
            let zero = image[g].iter().all(|&c| c == 0);
            if zero != derived.contains(g) {
                return Ok(AbelianizationReport::failed(q.order(), (g, 0)));
            }
        }
        let distinct: HashSet<&Vec<u64>> = image.iter().collect();
        let size = distinct.len();
        let bijective = BigUint::from(size) == q.order() && size * derived.order() == self.dim();
        Ok(AbelianizationReport { size, quotient_order: q.order(), bijective, witness: None })
    }

    /// Preimage of a left ideal of `(Z/m)(G/N)` under the projection.
    /// `quotient` and `projection` come from [`Group::quotient`].
    pub fn left_ideal_preimage(
        &self,
        quotient: &GroupRing,
        projection: &[usize],
        ideal: &HowellBasis,
    ) -> Result<HowellBasis, RingError> {
        if quotient.modulus != self.modulus {
            return Err(LinalgError::Modulus(self.modulus, quotient.modulus).into());
        }
        let k = quotient.dim();
        let mut reps = vec![usize::MAX; k];
        for (x, &c) in projection.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        let m = self.modulus;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for r in ideal.rows() {
            let mut v = vec![0u64; self.dim()];
            for (c, &a) in r.iter().enumerate() {
                v[reps[c]] = a;
            }
            rows.push(v);
        }
        for (x, &c) in projection.iter().enumerate() {
            if reps[c] != x {
                let mut v = vec![0u64; self.dim()];
                v[x] = 1;
                v[reps[c]] = neg_mod(1, m);
                rows.push(v);
            }
        }
        Ok(self.span(rows))
    }

    /// `rad J = pJ + ωJ` for a `p`-group.
    pub fn radical_of(&self, j: &HowellBasis) -> Result<HowellBasis, RingError> {
        let (p, _) = prime_power(self.dim() as u64).ok_or(RingError::NotPGroupModulus(self.modulus))?;
        if prime_power(self.modulus).map(|(q, _)| q) != Some(p) {
            return Err(RingError::NotPGroupModulus(self.modulus));
        }
        let wj = self.omega_times(j);
        let rows = j
            .rows()
            .iter()
            .map(|r| r.iter().map(|&x| mul_mod(x, p, self.modulus)).collect())
            .chain(wj.rows().iter().cloned());
        Ok(self.span(rows))
    }

    /// The map `G → ω/ω²`-style coordinates of `1 − g` in a quotient.
    pub fn coords_of_one_minus(&self, q: &QuotientModule, g: usize) -> Result<Vec<u64>, RingError> {
        Ok(q.coords(&self.one_minus(g)).ok_or(LinalgError::NotInModule)?)
    }

    /// Splitting of `1 − N' + ω³` inside `ω²/ω³` for a class-2 `p`-group.
    pub fn sandling_complement(&self) -> Result<SandlingSplit, RingError> {
        let p = self.group.prime_of_p_group();
        if p.is_none() || prime_power(self.modulus).map(|(q, _)| q) != p {
            return Err(RingError::NotPGroupModulus(self.modulus));
        }
        let (series, class) = self.group.lower_central_series();
        if class.is_none_or(|c| c > 2) {
            return Err(RingError::ClassTooLarge);
        }
        let derived = series.get(1).cloned().unwrap_or_else(|| self.group.subgroup(&[]));
        let quotient = QuotientModule::new(self.omega_power(2)?, self.omega_power(3)?)?;
        let group = FiniteAbelian::new(quotient.invariants().to_vec());
        let s_elems: Vec<Vec<u64>> = derived
            .elements
            .iter()
            .map(|&n| self.coords_of_one_minus(&quotient, n))
            .collect::<Result<_, _>>()?;
        let s = group.subgroup(s_elems.iter());
        // the set {1 − n + ω³} is already a subgroup
        let as_set: HashSet<Vec<u64>> = s_elems.iter().map(|x| group.embed(x)).collect();
        let enumerated: HashSet<Vec<u64>> = s.enumerate().into_iter().collect();
        if as_set != enumerated {
            return Err(RingError::Failed("1 − N' + ω³ is not closed under addition".into()));
        }
        let ambient = group.ambient();
        let c = pure_complement(&s, &ambient)?;
        Ok(SandlingSplit { quotient, group, derived, s, c })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationReport {
    /// Number of distinct images `1 − g + ω²`.
    pub size: usize,
    pub quotient_order: BigUint,
    pub bijective: bool,
    pub witness: Option<(usize, usize)>,
}

impl AbelianizationReport {
    fn failed(order: BigUint, w: (usize, usize)) -> Self {
        AbelianizationReport { size: 0, quotient_order: order, bijective: false, witness: Some(w) }
    }
}

/// `ω²/ω³ = S ⊕ C` with `S` generated by `1 − N'`; `S` and `C` are given in
/// the embedded coordinates of `group`.
#[derive(Clone, Debug)]
pub struct SandlingSplit {
    pub quotient: QuotientModule,
    pub group: FiniteAbelian,
    pub derived: Subgroup,
    pub s: HowellBasis,
    pub c: HowellBasis,
}

impl SandlingSplit {
    /// Preimage in `ω²` of a subgroup of `ω²/ω³` (embedded coordinates).
    pub fn preimage(&self, sub: &HowellBasis) -> HowellBasis {
        let m = self.quotient.modulus();
        let dim = self.quotient.ambient_dim();
        let mut rows: Vec<Vec<u64>> = self.quotient.bottom().rows().to_vec();
        for r in sub.rows() {
            let c = self.group.unembed(r);
            rows.push(self.quotient.lift(&c));
        }
        HowellBasis::from_rows(m, dim, rows)
    }
}

/// Coefficient-weighted sum helper used by tests and constructors.
pub fn combine_rows(m: u64, dim: usize, coeffs: &[u64], rows: &[Vec<u64>]) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    for (c, r) in coeffs.iter().zip(rows) {
        axpy(&mut v, *c, r, m);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(g: Group, m: u64) -> GroupRing {
        GroupRing::new(Arc::new(g), m).unwrap()
    }

    #[test]
    fn omega_of_c2_mod_4() {
        let r = ring(Group::cyclic(2).unwrap(), 4);
        assert_eq!(r.omega_power(1).unwrap().cardinality_u64(), Some(4));
        assert_eq!(r.omega_power(2).unwrap().cardinality_u64(), Some(2));
        let w2 = r.omega_power(2).unwrap();
        assert!(w2.contains(&[2, 2]));
        for row in r.omega_power(1).unwrap().rows() {
            assert_eq!(r.augmentation(row), 0);
        }
    }

    #[test]
    fn omega_powers_are_left_ideals_and_match_full_products() {
        let r = ring(Group::dihedral(8).unwrap(), 16);
        for i in 1..=3 {
            assert!(r.is_left_ideal(r.omega_power(i).unwrap()));
        }
        // full product ω·ω over all group elements
        let w1 = r.omega_power(1).unwrap();
        let rows: Vec<Vec<u64>> = (1..8)
            .flat_map(|g| w1.rows().iter().map(move |b| (g, b)))
            .map(|(g, b)| r.mul(&r.one_minus(g), b))
            .collect();
        let full = HowellBasis::from_rows(16, 8, rows);
        assert_eq!(&full, r.omega_power(2).unwrap());
    }

    #[test]
    fn heisenberg_abelianization() {
        let r = ring(Group::heisenberg(3).unwrap(), 27);
        let q = QuotientModule::new(r.omega_power(1).unwrap(), r.omega_power(2).unwrap()).unwrap();
        assert_eq!(q.order(), BigUint::from(9u32));
        let rep = r.abelianization_iso_check().unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.size, 9);
    }

    #[test]
    fn abelianization_small_groups() {
        let r = ring(Group::cyclic(4).unwrap(), 8);
        assert_eq!(r.abelianization_iso_check().unwrap().size, 4);
        let r = ring(Group::dihedral(8).unwrap(), 16);
        assert!(r.abelianization_iso_check().unwrap().bijective);
    }

    #[test]
    fn closure_check_rejects_span_of_one_minus_g() {
        let r = ring(Group::dihedral(8).unwrap(), 16);
        let b = HowellBasis::from_rows(16, 8, vec![r.one_minus(4)]);
        assert!(!r.is_left_ideal(&b));
    }

    #[test]
    fn radical_examples() {
        let r = ring(Group::cyclic(2).unwrap(), 4);
        let w = r.omega_power(1).unwrap().clone();
        let rad = r.radical_of(&w).unwrap();
        assert_eq!(rad, HowellBasis::from_rows(4, 2, vec![vec![2, 2]]));
        let zero = HowellBasis::zero(4, 2);
        assert!(r.radical_of(&zero).unwrap().is_zero());
        let r = ring(Group::cyclic(3).unwrap(), 27);
        let w = r.omega_power(1).unwrap().clone();
        let rad = r.radical_of(&w).unwrap();
        let q = QuotientModule::new(&w, &rad).unwrap();
        assert_eq!(q.invariants(), &[3]);
    }

    #[test]
    fn preimage_from_c2_to_c4() {
        let g = Arc::new(Group::cyclic(4).unwrap());
        let (q, proj) = g.quotient(&[0, 2]).unwrap();
        let big = GroupRing::new(g, 4).unwrap();
        let small = GroupRing::new(Arc::new(q), 4).unwrap();
        let w = small.omega_power(1).unwrap().clone();
        let j = big.left_ideal_preimage(&small, &proj, &w).unwrap();
        assert_eq!(&j, big.omega_power(1).unwrap());
        let i2 = HowellBasis::from_rows(4, 2, vec![vec![2, 2]]);
        let j2 = big.left_ideal_preimage(&small, &proj, &i2).unwrap();
        assert!(big.is_left_ideal(&j2));
        assert_eq!(j2.index_in(big.omega_power(1).unwrap()).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn sandling_for_heisenberg_3() {
        let r = ring(Group::heisenberg(3).unwrap(), 27);
        let sp = r.sandling_complement().unwrap();
        assert_eq!(sp.s.cardinality_u64(), Some(3));
        assert!(sp.s.intersection(&sp.c).unwrap().is_zero());
        assert_eq!(sp.s.cardinality() * sp.c.cardinality(), sp.quotient.order());
        // (1 − d3) + (1 − d3²) ≡ 0 mod ω³
        let a = r.coords_of_one_minus(&sp.quotient, 9).unwrap();
        let b = r.coords_of_one_minus(&sp.quotient, 18).unwrap();
        assert!(sp.group.add(&a, &b).iter().all(|&x| x == 0));
    }

    #[test]
    fn sandling_for_abelian_is_trivial() {
        let r = ring(Group::abelian(&[3, 3]).unwrap(), 9);
        let sp = r.sandling_complement().unwrap();
        assert!(sp.s.is_zero());
        assert_eq!(sp.c.cardinality(), sp.quotient.order());
    }
}
