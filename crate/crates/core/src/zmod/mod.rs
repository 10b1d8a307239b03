//! Exact linear algebra over `Z/m`.
//!
//! Submodules of `(Z/m)^n` are carried in Howell normal form, which makes
//! membership decidable by straight elimination and gives a canonical
//! representative for every submodule. Smith form over `Z/m` is only used to
//! read off abelian invariants of quotient modules.

mod abelian;
mod complement;
mod howell;
mod matrix;
mod quotient;
mod smith;

pub use abelian::FiniteAbelian;
pub use complement::{pure_complement, HyperplaneSpace, ProjectionMap};
pub use howell::{kernel, HowellBasis, LinearSolver};
pub use matrix::ZkMatrix;
pub use quotient::QuotientModule;
pub use smith::{smith_form, SmithForm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u64, u64),
    #[error("submodule is not a direct summand of the ambient module")]
    NotASummand,
    #[error("submodule is not contained in the ambient module")]
    NotContained,
    #[error("quotient is not elementary abelian")]
    NotElementary,
    #[error("vector is not in the module")]
    NotInModule,
    #[error("{0}")]
    Other(String),
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended gcd on integers: returns `(s, t, g)` with `s*a + t*b = g`, `g >= 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-s0, -t0, -r0)
    } else {
        (s0, t0, r0)
    }
}

#[inline]
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let a = a % m;
    let b = b % m;
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    sub_mod(0, a, m)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (s, _, g) = xgcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(reduce(s, m))
}

/// A unit `u` of `Z/m` with `u*a = gcd(a, m)` in `Z/m`.
pub fn unit_normalizer(a: u64, m: u64) -> u64 {
    let a = a % m;
    if a == 0 {
        return 1;
    }
    let d = gcd(a, m);
    let m1 = m / d;
    if m1 == 1 {
        return 1;
    }
    let u0 = inv_mod((a / d) % m1, m1).expect("a/d is a unit mod m/d");
    let mut u = u0;
    while gcd(u, m) != 1 {
        u += m1;
    }
    u % m
}

/// Prime factorization by trial division; fine for the moduli and group
/// orders handled here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Smallest primitive root modulo the prime `q`.
pub fn primitive_root(q: u64) -> Option<u64> {
    if !is_prime(q) {
        return None;
    }
    if q == 2 {
        return Some(1);
    }
    let factors = factorize(q - 1);
    (2..q).find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (q - 1) / f, q) != 1))
}

pub(crate) fn axpy(acc: &mut [u64], f: u64, row: &[u64], m: u64) {
    if f % m == 0 {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        if r != 0 {
            *a = add_mod(*a, mul_mod(f, r, m), m);
        }
    }
}

pub(crate) fn scale(row: &[u64], f: u64, m: u64) -> Vec<u64> {
    row.iter().map(|&r| mul_mod(f, r, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_hits_gcd() {
        for m in [4u64, 8, 9, 12, 27, 30, 125] {
            for a in 0..m {
                let u = unit_normalizer(a, m);
                assert_eq!(gcd(u, m), 1);
                assert_eq!(mul_mod(u, a, m), gcd(a, m) % m, "a={a} m={m}");
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5), Some(2));
        assert_eq!(primitive_root(13), Some(2));
        assert_eq!(primitive_root(17), Some(3));
        assert_eq!(primitive_root(29), Some(2));
        assert_eq!(primitive_root(97), Some(5));
        assert_eq!(primitive_root(6), None);
    }

    #[test]
    fn xgcd_identity() {
        for a in -20i128..20 {
            for b in -20i128..20 {
                let (s, t, g) = xgcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert!(g >= 0);
            }
        }
    }
}
