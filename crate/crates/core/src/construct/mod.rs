//! Constructions of IYB structures. Every constructor returns a structure
//! that has already passed [`IybStructure::verify`]; nothing is trusted on
//! the strength of the theory alone.

mod hertweck;
mod sandling;
mod semidirect;
mod wreath;

pub use hertweck::{hertweck_d_structure, HertweckStructure};
pub use sandling::{class2_equivariant_sandling, SandlingOutput};
pub use semidirect::{combine_semidirect, hall_decompose, HallDecomposition};
pub use wreath::power_wreath;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{Group, GroupError, Perm, EXHAUSTIVE_CHECK_ORDER};
use crate::ring::RingError;
use crate::structure::{Equivariance, GModule, IybStructure, Violation};
use crate::zmod::{HowellBasis, LinalgError, QuotientModule};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("verification failed: {0}")]
    Verification(#[from] Violation),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("inputs do not match: {0}")]
    Mismatch(String),
    #[error("construction failed: {0}")]
    Failed(String),
}

/// Coordinates of a finite abelian group given by its addition.
#[derive(Clone, Debug)]
pub(crate) struct AdditiveCoords {
    pub invariants: Vec<u64>,
    pub coords: Vec<Vec<u64>>,
    /// Element with coordinates `e_j`, for each `j`.
    pub units: Vec<usize>,
}

/// Greedy basis, relation matrix and Smith reduction for an abelian group on
/// `0..n` with identity `0`.
pub(crate) fn additive_coordinates<F>(n: usize, add: F) -> Result<AdditiveCoords, ConstructError>
where
    F: Fn(usize, usize) -> usize,
{
    let mut span: Vec<Option<Vec<u64>>> = vec![None; n];
    span[0] = Some(Vec::new());
    let mut members = vec![0usize];
    let mut relations: Vec<Vec<u64>> = Vec::new();
    let m = n as u64;
    for x in 1..n {
        if span[x].is_some() {
            continue;
        }
        let k = relations.len();
        let mut y = x;
        let mut t = 1u64;
        while span[y].is_none() {
            y = add(y, x);
            t += 1;
            if t > m {
                return Err(ConstructError::Failed("addition has no finite order".into()));
            }
        }
        let c = span[y].clone().unwrap();
        let mut rel: Vec<u64> = c.iter().map(|&a| (m - a % m) % m).collect();
        rel.resize(k, 0);
        rel.push(t % m);
        relations.push(rel);
        let mut fresh = Vec::new();
        for &s in &members {
            let base = span[s].clone().unwrap();
            let mut cur = s;
            for i in 1..t {
                cur = add(cur, x);
                if span[cur].is_some() {
                    return Err(ConstructError::Failed("addition is not a group law".into()));
                }
                let mut v = base.clone();
                v.resize(k, 0);
                v.push(i);
                span[cur] = Some(v);
                fresh.push(cur);
            }
        }
        members.extend(fresh);
    }
    let k = relations.len();
    let rel_rows: Vec<Vec<u64>> = relations
        .into_iter()
        .map(|mut r| {
            r.resize(k, 0);
            r
        })
        .collect();
    if k == 0 {
        return Ok(AdditiveCoords { invariants: Vec::new(), coords: vec![Vec::new(); n], units: Vec::new() });
    }
    let q = QuotientModule::new(&HowellBasis::full(m, k), &HowellBasis::from_rows(m, k, rel_rows))?;
    let mut coords = Vec::with_capacity(n);
    for v in span {
        let mut v = v.unwrap();
        v.resize(k, 0);
        coords.push(q.coords(&v).ok_or(LinalgError::NotInModule)?);
    }
    let invariants = q.invariants().to_vec();
    let r = invariants.len();
    let mut units = vec![usize::MAX; r];
    for (x, c) in coords.iter().enumerate() {
        let nz: Vec<usize> = (0..r).filter(|&i| c[i] != 0).collect();
        if nz.len() == 1 && c[nz[0]] == 1 && units[nz[0]] == usize::MAX {
            units[nz[0]] = x;
        }
    }
    if units.contains(&usize::MAX) || invariants.iter().product::<u64>() != m {
        return Err(ConstructError::Failed("coordinate system does not cover the group".into()));
    }
    Ok(AdditiveCoords { invariants, coords, units })
}

fn matrix_from_columns(cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let r = cols.len();
    (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// The trivial-module structure `χ = coordinates` on an abelian group.
pub fn abelian_structure(group: Arc<Group>) -> Result<IybStructure, ConstructError> {
    if !group.is_abelian() {
        return Err(ConstructError::Hypothesis("group is not abelian".into()));
    }
    let c = additive_coordinates(group.order(), |a, b| group.mul(a, b))?;
    let module = GModule::trivial(c.invariants, group.generators().len());
    let s = IybStructure::new(group, module, c.coords, None)?;
    s.verify(false)?;
    Ok(s)
}

/// Checks that `add` is commutative and associative: exhaustively up to
/// [`EXHAUSTIVE_CHECK_ORDER`], on seeded random triples above.
fn check_abelian_law<F: Fn(usize, usize) -> usize>(n: usize, add: &F) -> Result<(), ConstructError> {
    let fail = |a, b, c| ConstructError::Failed(format!("addition is not associative at ({a}, {b}, {c})"));
    if n <= EXHAUSTIVE_CHECK_ORDER {
        let table: Vec<usize> = (0..n * n).map(|i| add(i / n, i % n)).collect();
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] != table[b * n + a] {
                    return Err(ConstructError::Failed(format!("addition is not commutative at ({a}, {b})")));
                }
                for c in 0..n {
                    if table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]] {
                        return Err(fail(a, b, c));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100_000 {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if add(a, b) != add(b, a) {
                return Err(ConstructError::Failed(format!("addition is not commutative at ({a}, {b})")));
            }
            if add(add(a, b), c) != add(a, add(b, c)) {
                return Err(fail(a, b, c));
            }
        }
    }
    Ok(())
}

/// The addition `x + y = x·y·√[y, x]` on an odd group of class at most 2.
pub fn class2_addition(group: &Group, x: usize, y: usize) -> usize {
    let c = group.commutator(y, x);
    let r = group.sqrt_odd(c).expect("odd order");
    group.mul(group.mul(x, y), r)
}

/// Structure on an odd group of class at most 2 from the abelian group
/// `(N, +)`, with `ⁿ¹n2 = n1·n2 + n1⁻¹` and `χ` the identity set map.
/// Equivariant under every automorphism in `automorphisms`.
pub fn class2_odd(group: Arc<Group>, automorphisms: &[Perm]) -> Result<IybStructure, ConstructError> {
    let n = group.order();
    if n % 2 == 0 {
        return Err(ConstructError::Hypothesis(format!("order {n} is even")));
    }
    match group.nilpotency_class() {
        Some(c) if c <= 2 => {}
        _ => return Err(ConstructError::Hypothesis("nilpotency class exceeds 2".into())),
    }
    let g = group.as_ref();
    let add = |x: usize, y: usize| class2_addition(g, x, y);
    check_abelian_law(n, &add)?;
    let c = additive_coordinates(n, add)?;
    let actions: Vec<Vec<Vec<u64>>> = g
        .generators()
        .iter()
        .map(|&s| {
            let si = g.inv(s);
            let cols: Vec<Vec<u64>> = c.units.iter().map(|&u| c.coords[add(g.mul(s, u), si)].clone()).collect();
            matrix_from_columns(&cols)
        })
        .collect();
    for p in automorphisms {
        if p.len() != n {
            return Err(ConstructError::Mismatch("automorphism of the wrong size".into()));
        }
    }
    let eq_mats: Vec<Vec<Vec<u64>>> = automorphisms
        .iter()
        .map(|p| {
            let cols: Vec<Vec<u64>> = c.units.iter().map(|&u| c.coords[p[u] as usize].clone()).collect();
            matrix_from_columns(&cols)
        })
        .collect();
    let module = GModule::new(c.invariants.clone(), actions)?;
    let eq = (!automorphisms.is_empty())
        .then(|| Equivariance { automorphisms: automorphisms.to_vec(), module_actions: eq_mats });
    let s = IybStructure::new(group.clone(), module, c.coords, eq)?;
    s.verify(false)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_3_addition() {
        let g = Group::heisenberg(3).unwrap();
        // d1 + d2 = d1·d2·d3² = (1, 1, 2)
        assert_eq!(class2_addition(&g, 1, 3), 1 + 3 + 2 * 9);
        for x in 0..27 {
            assert_eq!(class2_addition(&g, x, g.inv(x)), 0);
        }
    }

    #[test]
    fn cyclic_9_addition_is_multiplication() {
        let g = Group::cyclic(9).unwrap();
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(class2_addition(&g, x, y), g.mul(x, y));
            }
        }
        let s = class2_odd(Arc::new(g), &[]).unwrap();
        assert_eq!(s.module().invariants(), &[9]);
    }

    #[test]
    fn class2_odd_heisenberg_is_verified() {
        let g = Arc::new(Group::heisenberg(3).unwrap());
        let s = class2_odd(g.clone(), &[]).unwrap();
        assert_eq!(s.module().invariants(), &[3, 3, 3]);
        s.verify(true).unwrap();
    }

    #[test]
    fn class2_odd_rejects_even_and_class_three() {
        assert!(matches!(
            class2_odd(Arc::new(Group::cyclic(4).unwrap()), &[]),
            Err(ConstructError::Hypothesis(_))
        ));
    }

    #[test]
    fn abelian_coordinates_of_c2_c4() {
        let g = Arc::new(Group::abelian(&[2, 4]).unwrap());
        let s = abelian_structure(g).unwrap();
        let mut inv = s.module().invariants().to_vec();
        inv.sort();
        assert_eq!(inv, vec![2, 4]);
    }
}
