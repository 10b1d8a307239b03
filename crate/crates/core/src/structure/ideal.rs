use std::collections::HashMap;

use num_bigint::BigUint;

use super::{Equivariance, GModule, IybStructure, Violation};
use crate::group::Perm;
use crate::ring::GroupRing;
use crate::zmod::{HowellBasis, QuotientModule};

/// Pairwise membership tests are used up to this group order; above it the
/// canonical residues of `1 − g` are compared instead.
pub const PAIRWISE_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalReport {
    pub index: BigUint,
    /// Number of `(g, h)` membership tests, or 0 when residues were compared.
    pub pairwise_tests: u64,
}

fn linalg(e: impl std::fmt::Display) -> Violation {
    Violation::Other(e.to_string())
}

/// Checks that `I ⊆ ω` is a left ideal with `[ω : I] = |G|` and that the
/// elements `1 − g` are pairwise incongruent modulo `I`.
pub fn verify_transversal(ring: &GroupRing, ideal: &HowellBasis) -> Result<TransversalReport, Violation> {
    let omega = ring.omega_power(1).map_err(linalg)?;
    if ideal.modulus() != ring.modulus() || ideal.dim() != ring.dim() {
        return Err(Violation::Shape("ideal does not live in this group ring".into()));
    }
    if !ideal.is_subset_of(omega) {
        return Err(Violation::NotInOmega);
    }
    if let Some(s) = ring.left_ideal_witness(ideal) {
        return Err(Violation::NotLeftIdeal(s));
    }
    let n = ring.dim();
    let index = ideal.index_in(omega).map_err(linalg)?;
    if index != BigUint::from(n) {
        return Err(Violation::Index { index: index.to_string(), expected: n });
    }
    let mut tests = 0u64;
    if n <= PAIRWISE_LIMIT {
        let m = ring.modulus();
        for g in 0..n {
            for h in g + 1..n {
                // (1 − g) − (1 − h) = h − g
                let mut v = vec![0u64; n];
                v[h] = 1;
                v[g] = m - 1;
                tests += 1;
                if ideal.contains(&v) {
                    return Err(Violation::Transversal(g, h));
                }
            }
        }
    } else {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for g in 0..n {
            if let Some(h) = seen.insert(ideal.residue(&ring.one_minus(g)), g) {
                return Err(Violation::Transversal(h, g));
            }
        }
    }
    Ok(TransversalReport { index, pairwise_tests: tests })
}

/// `M = ω/I` with `G` acting by left multiplication and `χ(g) = 1 − g + I`.
/// When automorphisms of `G` are supplied, `I` must be stable under them and
/// the resulting structure carries the induced equivariance data.
pub fn ideal_to_structure(
    ring: &GroupRing,
    ideal: &HowellBasis,
    automorphisms: Option<&[Perm]>,
) -> Result<IybStructure, Violation> {
    verify_transversal(ring, ideal)?;
    let omega = ring.omega_power(1).map_err(linalg)?;
    let q = QuotientModule::new(omega, ideal).map_err(linalg)?;
    let group = ring.group();
    let actions = group
        .generators()
        .iter()
        .map(|&s| q.induced_matrix(|v| ring.left_mul_group(s, v)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(linalg)?;
    let module = GModule::new(q.invariants().to_vec(), actions)?;
    let chi = (0..ring.dim())
        .map(|g| q.coords(&ring.one_minus(g)).ok_or(Violation::NotInOmega))
        .collect::<Result<Vec<_>, _>>()?;
    let equivariance = match automorphisms {
        None => None,
        Some(perms) => {
            let mut mats = Vec::with_capacity(perms.len());
            for (k, p) in perms.iter().enumerate() {
                if ideal.rows().iter().any(|r| !ideal.contains(&ring.apply_automorphism(p, r))) {
                    return Err(Violation::NotStable(k));
                }
                mats.push(q.induced_matrix(|v| ring.apply_automorphism(p, v)).map_err(linalg)?);
            }
            Some(Equivariance { automorphisms: perms.to_vec(), module_actions: mats })
        }
    };
    IybStructure::new(group.clone(), module, chi, equivariance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use std::sync::Arc;

    #[test]
    fn c2_mod_4() {
        let r = GroupRing::new(Arc::new(Group::cyclic(2).unwrap()), 4).unwrap();
        let i = HowellBasis::from_rows(4, 2, vec![vec![2, 2]]);
        let rep = verify_transversal(&r, &i).unwrap();
        assert_eq!(rep.index, BigUint::from(2u32));
        let s = ideal_to_structure(&r, &i, None).unwrap();
        assert_eq!(s.module().invariants(), &[2]);
        assert_eq!(s.chi(1), &[1]);
        s.verify(true).unwrap();
        let omega = r.omega_power(1).unwrap().clone();
        assert!(matches!(verify_transversal(&r, &omega), Err(Violation::Index { .. })));
    }

    #[test]
    fn c3_mod_27() {
        let r = GroupRing::new(Arc::new(Group::cyclic(3).unwrap()), 27).unwrap();
        let w = r.omega_power(1).unwrap().clone();
        let w2 = r.omega_power(2).unwrap().clone();
        let three_w: Vec<Vec<u64>> = w.rows().iter().map(|row| row.iter().map(|&x| x * 3 % 27).collect()).collect();
        let i = w2.sum(&HowellBasis::from_rows(27, 3, three_w)).unwrap();
        let s = ideal_to_structure(&r, &i, None).unwrap();
        assert_eq!(s.module().invariants(), &[3]);
        let step = s.chi(1)[0];
        for k in 0..3 {
            assert_eq!(s.chi(k)[0], (k as u64 * step) % 3);
        }
        s.verify(true).unwrap();
    }
}
