use num_bigint::BigUint;

use super::ConstructError;
use crate::group::{GroupAction, Perm};
use crate::ring::GroupRing;
use crate::structure::{ideal_to_structure, verify_transversal, IybStructure};
use crate::zmod::{gcd, inv_mod, HowellBasis, ProjectionMap};

/// Output of the equivariant Sandling pipeline.
pub struct SandlingOutput {
    pub structure: IybStructure,
    pub ring: GroupRing,
    pub ideal: HowellBasis,
    /// Generators of `H` as automorphisms of `N`.
    pub automorphisms: Vec<Perm>,
    pub index: BigUint,
    pub pairwise_tests: u64,
}

/// An `H`-equivariant structure on a `p`-group `N` of class at most 2, for
/// `H` of order prime to `p`, from an `H`-stable complement of `1 − N'` in
/// `ω²/ω³`. The ring is `(Z/p^k)N`, `k = log_p |N|` unless given.
pub fn class2_equivariant_sandling(act: &GroupAction, k: Option<u32>) -> Result<SandlingOutput, ConstructError> {
    let n_group = act.target().clone();
    let h_group = act.actor().clone();
    let n = n_group.order();
    if n == 1 {
        return Err(ConstructError::Hypothesis("N is trivial".into()));
    }
    let p = n_group
        .prime_of_p_group()
        .ok_or_else(|| ConstructError::Hypothesis("N is not a p-group".into()))?;
    let nh = h_group.order() as u64;
    if gcd(nh, p) != 1 {
        return Err(ConstructError::Hypothesis(format!("|H| = {nh} is divisible by p = {p}")));
    }
    match n_group.nilpotency_class() {
        Some(c) if c <= 2 => {}
        _ => return Err(ConstructError::Hypothesis("N has class above 2".into())),
    }
    let k = k.unwrap_or_else(|| (n as f64).log(p as f64).round() as u32);
    let modulus = p.checked_pow(k).ok_or_else(|| ConstructError::Hypothesis("modulus overflows".into()))?;
    let ring = GroupRing::new(n_group.clone(), modulus)?;

    let split = ring.sandling_complement()?;
    let ab = &split.group;
    let q = &split.quotient;
    for &s in n_group.generators() {
        let mat = q.induced_matrix(|v| ring.left_mul_group(s, v))?;
        if mat != ab.identity_matrix() {
            return Err(ConstructError::Failed("N acts non-trivially on ω²/ω³".into()));
        }
    }
    let pi = ProjectionMap::along(ab, &split.s, &split.c)?;

    let perms: Vec<Perm> = (0..h_group.order()).map(|h| act.image(h)).collect();
    let mats = perms
        .iter()
        .map(|p| q.induced_matrix(|v| ring.apply_automorphism(p, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let r = ab.rank();
    let mut sum = vec![vec![0u64; r]; r];
    for h in 0..h_group.order() {
        let hi = h_group.inv(h);
        let term = ab.compose(&mats[hi], &ab.compose(&pi.matrix, &mats[h]));
        for i in 0..r {
            let e = ab.invariants()[i];
            for j in 0..r {
                sum[i][j] = (sum[i][j] + term[i][j]) % e;
            }
        }
    }
    let exp = ab.exponent().max(1);
    let inv = inv_mod(nh % exp, exp).ok_or_else(|| ConstructError::Failed("|H| is not invertible".into()))?;
    let averaged: Vec<Vec<u64>> = sum
        .iter()
        .zip(ab.invariants())
        .map(|(row, &e)| row.iter().map(|&x| (x as u128 * inv as u128 % e as u128) as u64).collect())
        .collect();
    let pi_hat = ProjectionMap { group: ab.clone(), matrix: averaged };
    if !pi_hat.is_idempotent() {
        return Err(ConstructError::Failed("averaged projection is not idempotent".into()));
    }
    let c_prime = pi_hat.kernel();
    if !c_prime.intersection(&split.s)?.is_zero() || c_prime.cardinality() * split.s.cardinality() != ab.order() {
        return Err(ConstructError::Failed("averaged kernel is not a complement of S".into()));
    }
    for &h in h_group.generators() {
        for row in c_prime.rows() {
            let img = ab.embed(&ab.apply(&mats[h], &ab.unembed(row)));
            if !c_prime.contains(&img) {
                return Err(ConstructError::Failed("averaged kernel is not H-stable".into()));
            }
        }
    }

    let ideal = split.preimage(&c_prime);
    let automorphisms: Vec<Perm> = act.generator_images().iter().map(|a| a.map().to_vec()).collect();
    for p in &automorphisms {
        if ideal.rows().iter().any(|row| !ideal.contains(&ring.apply_automorphism(p, row))) {
            return Err(ConstructError::Failed("ideal is not H-stable".into()));
        }
    }
    if let Some(s) = ring.left_ideal_witness(&ideal) {
        return Err(ConstructError::Failed(format!("ideal is not closed under generator {s}")));
    }
    let report = verify_transversal(&ring, &ideal)?;
    let structure = ideal_to_structure(&ring, &ideal, Some(&automorphisms))?;
    structure.verify(false)?;
    Ok(SandlingOutput {
        structure,
        ring,
        ideal,
        automorphisms,
        index: report.index,
        pairwise_tests: report.pairwise_tests,
    })
}
