//! The Heisenberg group `D` mod an odd prime `q` together with the
//! automorphisms `τ`, `α1`, `α2` and the representations `Δ` and `Δ_M`.

use std::sync::Arc;

use super::action::Relator;
use super::{Automorphism, Group, GroupAction, GroupError};
use crate::zmod::{inv_mod, is_prime, mul_mod, neg_mod, pow_mod, primitive_root, sub_mod, ZkMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HertweckParams {
    pub q: u64,
    pub zeta: u64,
    /// `q ≡ 1 mod 4`; the Sylow statements about `Δ(A)` need this.
    pub sylow_claims_apply: bool,
}

impl HertweckParams {
    pub fn new(q: u64) -> Result<Self, GroupError> {
        Self::with_zeta(q, None)
    }

    /// Parameters with an explicit generator of `(Z/q)^×` (default: the
    /// smallest primitive root).
    pub fn with_zeta(q: u64, zeta: Option<u64>) -> Result<Self, GroupError> {
        if q < 3 || !is_prime(q) {
            return Err(GroupError::NotOddPrime(q));
        }
        let zeta = match zeta {
            Some(z) => {
                let z = z % q;
                if z == 0 || (1..q - 1).any(|k| pow_mod(z, k, q) == 1) {
                    return Err(GroupError::Invalid(format!("{z} does not generate (Z/{q})^×")));
                }
                z
            }
            None => primitive_root(q).expect("prime modulus"),
        };
        Ok(HertweckParams { q, zeta, sylow_claims_apply: q % 4 == 1 })
    }

    /// `1/2 mod q`, realized as `(q+1)/2`.
    pub fn half(&self) -> u64 {
        (self.q + 1) / 2
    }
}

pub fn hertweck_d(q: u64) -> Result<Group, GroupError> {
    Group::heisenberg(q)
}

/// Triple of a Heisenberg index.
pub fn coords(q: u64, x: usize) -> (u64, u64, u64) {
    let q = q as usize;
    ((x % q) as u64, ((x / q) % q) as u64, (x / (q * q)) as u64)
}

pub fn index(q: u64, (n1, n2, n3): (u64, u64, u64)) -> usize {
    let q = q as usize;
    n1 as usize + q * n2 as usize + q * q * n3 as usize
}

/// `τ(n1,n2,n3) = (n2, n1, n1·n2 − n3)`, i.e. `d1 ↔ d2`, `d3 ↦ d3⁻¹`.
pub fn tau_map(q: u64) -> Vec<u32> {
    map_over(q, |(n1, n2, n3)| (n2, n1, sub_mod(mul_mod(n1, n2, q), n3, q)))
}

/// `α1(n1,n2,n3) = (ζ·n1, n2, ζ·n3)`.
pub fn alpha1_map(q: u64, zeta: u64) -> Vec<u32> {
    map_over(q, |(n1, n2, n3)| (mul_mod(zeta, n1, q), n2, mul_mod(zeta, n3, q)))
}

/// `α2(n1,n2,n3) = (n1, ζ·n2, ζ·n3)`.
pub fn alpha2_map(q: u64, zeta: u64) -> Vec<u32> {
    map_over(q, |(n1, n2, n3)| (n1, mul_mod(zeta, n2, q), mul_mod(zeta, n3, q)))
}

fn map_over<F: Fn((u64, u64, u64)) -> (u64, u64, u64)>(q: u64, f: F) -> Vec<u32> {
    let n = (q * q * q) as usize;
    (0..n).map(|x| index(q, f(coords(q, x))) as u32).collect()
}

/// The automorphism group `A = ⟨τ, α1, α2⟩` and its action on `D`.
pub struct HertweckA {
    pub params: HertweckParams,
    pub d: Arc<Group>,
    /// `(C_{q-1} × C_{q-1}) ⋊ C_2` with generators `[τ, α1, α2]`; element
    /// `α1^i α2^j τ^t` sits at index `i + (q−1)·j + (q−1)²·t`.
    pub a: Arc<Group>,
    pub action: GroupAction,
}

/// The presentation of `A` on the generator positions `τ = 0, α1 = 1, α2 = 2`.
pub fn a_relators(q: u64) -> Vec<Relator> {
    let e = (q - 1) as i64;
    vec![
        vec![(0, 2)],
        vec![(1, e)],
        vec![(2, e)],
        vec![(1, 1), (2, 1), (1, -1), (2, -1)],
        // τ⁻¹ α1 τ = α2
        vec![(0, -1), (1, 1), (0, 1), (2, -1)],
    ]
}

/// Abstract `A` with generator order `[τ, α1, α2]`.
pub fn abstract_a(q: u64) -> Result<Group, GroupError> {
    let base = Arc::new(Group::abelian(&[q - 1, q - 1])?);
    let c2 = Arc::new(Group::cyclic(2)?);
    let k = (q - 1) as usize;
    let swap: Vec<u32> = (0..k * k).map(|x| ((x / k) + k * (x % k)) as u32).collect();
    let swap = Automorphism::new(&base, swap)?;
    let act = GroupAction::new(c2, base, vec![swap])?;
    let a = Group::semidirect(&act)?;
    a.with_generators(vec![k * k, 1, k])
}

pub fn hertweck_a(params: HertweckParams) -> Result<HertweckA, GroupError> {
    let q = params.q;
    let d = Arc::new(hertweck_d(q)?);
    let a = Arc::new(abstract_a(q)?);
    let images = vec![
        Automorphism::new(&d, tau_map(q))?,
        Automorphism::new(&d, alpha1_map(q, params.zeta))?,
        Automorphism::new(&d, alpha2_map(q, params.zeta))?,
    ];
    let action = GroupAction::with_relators(a.clone(), d.clone(), images, &a_relators(q))?;
    Ok(HertweckA { params, d, a, action })
}

/// `Δ: A → GL_2(q)`: `τ ↦ antidiag(1,1)`, `α1 ↦ diag(ζ,1)`, `α2 ↦ diag(1,ζ)`.
pub struct DeltaRep {
    pub params: HertweckParams,
    pub generators: [ZkMatrix; 3],
}

impl DeltaRep {
    pub fn new(params: HertweckParams) -> Self {
        let (q, z) = (params.q, params.zeta);
        let m = |r: Vec<Vec<u64>>| ZkMatrix::from_rows(q, &r).expect("rectangular");
        DeltaRep {
            params,
            generators: [
                m(vec![vec![0, 1], vec![1, 0]]),
                m(vec![vec![z, 0], vec![0, 1]]),
                m(vec![vec![1, 0], vec![0, z]]),
            ],
        }
    }

    /// `Δ(a)` for an element of the abstract `A`, via its generator word.
    pub fn image(&self, a_group: &Group, a: usize) -> ZkMatrix {
        let q = self.params.q;
        a_group
            .word(a)
            .iter()
            .fold(ZkMatrix::identity(q, 2), |acc, &k| mm(&acc, &self.generators[k]))
    }

    /// Relators map to the identity and the image has order `2(q−1)²`,
    /// so `Δ` is an injective homomorphism on `A`.
    pub fn verify(&self) -> Result<(), GroupError> {
        let q = self.params.q;
        let id = ZkMatrix::identity(q, 2);
        for rel in a_relators(q) {
            let mut acc = id.clone();
            for (k, e) in rel {
                let g = &self.generators[k];
                let base = if e < 0 { inverse_2x2(g) } else { g.clone() };
                for _ in 0..e.unsigned_abs() {
                    acc = mm(&acc, &base);
                }
            }
            if acc != id {
                return Err(GroupError::ActionMismatch(format!("relator {:?} fails under Δ", a_relators(q))));
            }
        }
        let order = self.image_order();
        let expected = 2 * (q as usize - 1) * (q as usize - 1);
        if order != expected {
            return Err(GroupError::ActionMismatch(format!("|Δ(A)| = {order}, expected {expected}")));
        }
        Ok(())
    }

    /// Order of the matrix group generated by the three images.
    pub fn image_order(&self) -> usize {
        let q = self.params.q;
        let mut seen = std::collections::HashSet::new();
        let id = ZkMatrix::identity(q, 2);
        seen.insert(id.to_rows());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            for g in &self.generators {
                let y = mm(&x, g);
                if seen.insert(y.to_rows()) {
                    queue.push(y);
                }
            }
            head += 1;
        }
        queue.len()
    }
}

fn mm(a: &ZkMatrix, b: &ZkMatrix) -> ZkMatrix {
    a.mul(b).expect("matching shapes")
}

fn inverse_2x2(m: &ZkMatrix) -> ZkMatrix {
    let q = m.modulus();
    let det = m.determinant();
    let di = inv_mod(det, q).expect("invertible");
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    ZkMatrix::from_rows(
        q,
        &[
            vec![mul_mod(di, d, q), mul_mod(di, neg_mod(b, q), q)],
            vec![mul_mod(di, neg_mod(c, q), q), mul_mod(di, a, q)],
        ],
    )
    .expect("2x2")
}

/// `Δ_M(a) = det(Δ(a))·(1 ⊕ Δ(a⁻¹)^⊤)` as a 3×3 matrix over `Z/q`.
pub fn delta_m(delta: &ZkMatrix) -> ZkMatrix {
    let q = delta.modulus();
    let det = delta.determinant();
    let inv_t = inverse_2x2(delta).transpose();
    let mut out = ZkMatrix::zeros(q, 3, 3);
    out.set(0, 0, det % q);
    for i in 0..2 {
        for j in 0..2 {
            out.set(i + 1, j + 1, mul_mod(det, inv_t.get(i, j), q));
        }
    }
    out
}

/// Module matrices of `d1`, `d2`, `d3` on `M = (Z/q)³`.
pub fn d_module_matrices(q: u64) -> [ZkMatrix; 3] {
    [
        ZkMatrix::from_rows(q, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).expect("3x3"),
        ZkMatrix::from_rows(q, &[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]).expect("3x3"),
        ZkMatrix::identity(q, 3),
    ]
}

/// `χ(d1^n1 d2^n2 d3^n3) = (n3 − n1·n2/2, −n2/2, n1/2)`.
pub fn cocycle_value(params: &HertweckParams, (n1, n2, n3): (u64, u64, u64)) -> [u64; 3] {
    let q = params.q;
    let h = params.half();
    [
        sub_mod(n3, mul_mod(mul_mod(n1, n2, q), h, q), q),
        neg_mod(mul_mod(n2, h, q), q),
        mul_mod(n1, h, q),
    ]
}

/// Explicit inverse of [`cocycle_value`]: `n1 = 2z`, `n2 = −2y`, `n3 = x + n1·n2/2`.
pub fn cocycle_inverse(params: &HertweckParams, [x, y, z]: [u64; 3]) -> (u64, u64, u64) {
    let q = params.q;
    let n1 = mul_mod(2, z, q);
    let n2 = neg_mod(mul_mod(2, y, q), q);
    let n3 = (x + mul_mod(mul_mod(n1, n2, q), params.half(), q)) % q;
    (n1, n2, n3)
}
