use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{check_p_group, SearchError};
use crate::group::Group;
use crate::ring::GroupRing;
use crate::structure::verify_transversal;
use crate::zmod::HowellBasis;

/// Largest `|ω|` the enumeration accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 20;

/// Every left ideal `I ⊆ ω` of `(Z/p^k)G` complementing `1 − G`, sorted by
/// Howell rows. Ideals are grown one generator at a time, pruned at the
/// target size `|ω|/|G|`.
pub fn brute_force_ideals(group: Arc<Group>, k: u32) -> Result<Vec<HowellBasis>, SearchError> {
    let n = group.order();
    if n == 1 {
        return Ok(Vec::new());
    }
    let p = check_p_group(&group, 64)?;
    let ring = GroupRing::new(group, p.pow(k))?;
    let omega = ring.omega_power(1)?.clone();
    let size = omega
        .cardinality_u64()
        .filter(|&s| s <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| SearchError::TooLarge(format!("|ω| = {} exceeds {BRUTE_FORCE_LIMIT}", omega.cardinality())))?;
    let target = BigUint::from(size / n as u64);
    let elements = omega.enumerate();
    let zero = HowellBasis::zero(ring.modulus(), ring.dim());
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    seen.insert(zero.rows().to_vec());
    let mut queue = vec![zero];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        if cur.cardinality() >= target {
            continue;
        }
        for e in &elements {
            if cur.contains(e) {
                continue;
            }
            let next = ring.left_ideal_closure(cur.rows().iter().cloned().chain([e.clone()]));
            if next.cardinality() <= target && seen.insert(next.rows().to_vec()) {
                queue.push(next);
            }
        }
    }
    let mut out: Vec<HowellBasis> = queue
        .into_iter()
        .filter(|i| i.cardinality() == target && verify_transversal(&ring, i).is_ok())
        .collect();
    out.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}
