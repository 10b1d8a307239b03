//! Desk-scale self checks bundled into the binary.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{class2_equivariant_sandling, class2_odd, hertweck_d_structure};
use crate::group::hertweck::{alpha1_map, hertweck_a, HertweckParams};
use crate::group::{Automorphism, Group, GroupAction};
use crate::ring::GroupRing;
use crate::search::{brute_force_ideals, heuristic_lift, iyb_search, SearchConfig, SearchHint};
use crate::structure::{
    enumerate_submodules, structures_isomorphic, subgroup_preimage_check, Certificate, Provenance,
};
use crate::zmod::HowellBasis;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub module: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type Outcome = Result<String, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// `H = ⟨α1⟩ ≅ C_{q−1}` acting on `D(q)`.
pub fn alpha1_action(q: u64) -> Result<GroupAction, String> {
    let params = HertweckParams::new(q).map_err(err)?;
    let d = Arc::new(Group::heisenberg(q).map_err(err)?);
    let h = Arc::new(Group::cyclic((q - 1) as usize).map_err(err)?);
    let a = Automorphism::new(&d, alpha1_map(q, params.zeta)).map_err(err)?;
    GroupAction::new(h, d, vec![a]).map_err(err)
}

fn span_by_enumeration(m: u64, gens: &[Vec<u64>], dim: usize) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; dim]);
    let mut frontier = vec![vec![0; dim]];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

fn linalg_oracle(instances: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shapes = [(4u64, 3usize), (8, 2), (9, 2)];
    for i in 0..instances {
        let (m, dim) = shapes[i % shapes.len()];
        let random_gens = |rng: &mut ChaCha8Rng| -> Vec<Vec<u64>> {
            let k = rng.random_range(0..=3);
            (0..k).map(|_| (0..dim).map(|_| rng.random_range(0..m)).collect()).collect()
        };
        let ga = random_gens(&mut rng);
        let gb = random_gens(&mut rng);
        let a = HowellBasis::from_rows(m, dim, ga.iter().cloned());
        let b = HowellBasis::from_rows(m, dim, gb.iter().cloned());
        let sa = span_by_enumeration(m, &ga, dim);
        let sb = span_by_enumeration(m, &gb, dim);
        let enumerated: BTreeSet<Vec<u64>> = a.enumerate().into_iter().collect();
        ensure(enumerated == sa, format!("instance {i}: span differs"))?;
        ensure(a.cardinality() == BigUint::from(sa.len()), format!("instance {i}: cardinality"))?;
        let v: Vec<u64> = (0..dim).map(|_| rng.random_range(0..m)).collect();
        ensure(a.contains(&v) == sa.contains(&v), format!("instance {i}: membership"))?;
        let sum: BTreeSet<Vec<u64>> = a.sum(&b).map_err(err)?.enumerate().into_iter().collect();
        let all: Vec<Vec<u64>> = ga.iter().chain(&gb).cloned().collect();
        ensure(sum == span_by_enumeration(m, &all, dim), format!("instance {i}: sum"))?;
        let cap: BTreeSet<Vec<u64>> = a.intersection(&b).map_err(err)?.enumerate().into_iter().collect();
        let expected: BTreeSet<Vec<u64>> = sa.intersection(&sb).cloned().collect();
        ensure(cap == expected, format!("instance {i}: intersection"))?;
        let ab = a.sum(&b).map_err(err)?;
        let idx = a.index_in(&ab).map_err(err)?;
        ensure(idx * BigUint::from(sa.len()) == BigUint::from(sum.len()), format!("instance {i}: index"))?;
    }
    Ok(format!("{instances} instances"))
}

fn probes() -> Outcome {
    let groups = [
        ("D8", Group::dihedral(8).map_err(err)?),
        ("Q8", Group::quaternion(8).map_err(err)?),
        ("Heis(3)", Group::heisenberg(3).map_err(err)?),
    ];
    for (name, g) in groups {
        let g = Arc::new(g);
        let ring = GroupRing::for_p_group(g.clone(), 2).map_err(err)?;
        let derived = g.derived_subgroup();
        let gamma3 = g.commutator_with_group(&derived);
        ensure(ring.dimension_subgroup_probe(2).map_err(err)? == derived.elements, format!("{name}: probe(2)"))?;
        ensure(ring.dimension_subgroup_probe(3).map_err(err)? == gamma3.elements, format!("{name}: probe(3)"))?;
        let report = ring.abelianization_iso_check().map_err(err)?;
        ensure(report.bijective, format!("{name}: ω/ω² ≇ G/[G,G]"))?;
    }
    Ok("D8, Q8, Heis(3)".into())
}

fn hertweck(qs: &[u64]) -> Outcome {
    for &q in qs {
        let h = hertweck_d_structure(q, None, false).map_err(err)?;
        let cert = Certificate::from_structure(&h.structure, Provenance::new("selftest", serde_json::json!({ "q": q }), None));
        cert.verify(q == 5).map_err(err)?;
    }
    Ok(format!("q ∈ {qs:?}"))
}

fn sandling_heis5() -> Outcome {
    let out = class2_equivariant_sandling(&alpha1_action(5)?, None).map_err(err)?;
    ensure(out.index == BigUint::from(125u32), format!("index {}", out.index))?;
    Ok(format!("index {}, {} pairwise tests", out.index, out.pairwise_tests))
}

fn uniqueness_echo() -> Outcome {
    let a = hertweck_a(HertweckParams::new(5).map_err(err)?).map_err(err)?;
    let out = class2_equivariant_sandling(&a.action, None).map_err(err)?;
    let canonical = hertweck_d_structure(5, None, false).map_err(err)?;
    let iso = structures_isomorphic(&out.structure, &canonical.structure)
        .map_err(err)?
        .ok_or("structures are not isomorphic")?;
    ensure(iso.intertwines_equivariance, "A-actions not compared")?;
    Ok("full A on D(5)".into())
}

fn cross_construction(qs: &[u64]) -> Outcome {
    let mut subs = 0;
    for &q in qs {
        let g = Arc::new(Group::heisenberg(q).map_err(err)?);
        let odd = class2_odd(g.clone(), &[]).map_err(err)?;
        let trivial = Arc::new(Group::cyclic(1).map_err(err)?);
        let sand = class2_equivariant_sandling(&GroupAction::trivial(trivial, g), None).map_err(err)?.structure;
        for s in [&odd, &sand] {
            for sub in enumerate_submodules(s, 1 << 12).map_err(err)? {
                subgroup_preimage_check(s, &sub).map_err(err)?;
                subs += 1;
            }
        }
    }
    Ok(format!("{subs} submodules"))
}

fn heuristic_small() -> Outcome {
    let cfg = SearchConfig::default();
    let specs = ["cyclic:8", "abelian:4x2", "abelian:2x2x2", "dihedral:8", "quaternion:8", "heis:3"];
    for spec in specs {
        let g = Arc::new(Group::from_spec(spec).map_err(err)?);
        let out = heuristic_lift(g, &cfg).map_err(|e| format!("{spec}: {e}"))?;
        let text = out.certificate.to_canonical_string();
        Certificate::parse(&text).map_err(err)?.verify(false).map_err(|e| format!("{spec}: {e}"))?;
    }
    Ok(format!("{} groups", specs.len()))
}

fn oracle_containment() -> Outcome {
    let mut counts = Vec::new();
    for spec in ["cyclic:2", "cyclic:3", "cyclic:4", "abelian:2x2"] {
        let g = Arc::new(Group::from_spec(spec).map_err(err)?);
        for k in 1..=3 {
            let all = brute_force_ideals(g.clone(), k).map_err(err)?;
            let cfg = SearchConfig { k: Some(k), ..SearchConfig::default() };
            let out = heuristic_lift(g.clone(), &cfg).map_err(|e| format!("{spec} k={k}: {e}"))?;
            if out.k == k {
                ensure(all.contains(&out.ideal), format!("{spec} k={k}: ideal missing from the enumeration"))?;
            }
            counts.push(all.len());
        }
    }
    Ok(format!("counts {counts:?}"))
}

fn hinted(include_500: bool) -> Outcome {
    let cfg = SearchConfig::default();
    let c3 = Arc::new(Group::cyclic(3).map_err(err)?);
    let c2 = Arc::new(Group::cyclic(2).map_err(err)?);
    let v4 = Arc::new(Group::abelian(&[2, 2]).map_err(err)?);
    let q8 = Arc::new(Group::quaternion(8).map_err(err)?);
    let mut actions = vec![
        GroupAction::new(c2, c3.clone(), vec![Automorphism::new(&c3, vec![0, 2, 1]).map_err(err)?]).map_err(err)?,
        GroupAction::new(c3.clone(), v4.clone(), vec![Automorphism::new(&v4, vec![0, 2, 3, 1]).map_err(err)?])
            .map_err(err)?,
        GroupAction::new(c3, q8.clone(), vec![Automorphism::from_generator_images(&q8, &[4, 5]).map_err(err)?])
            .map_err(err)?,
    ];
    if include_500 {
        actions.push(alpha1_action(5)?);
    }
    let mut orders = Vec::new();
    for act in actions {
        let g = Arc::new(Group::semidirect(&act).map_err(err)?);
        let res = iyb_search(g, &SearchHint::Semidirect(act), &cfg).map_err(err)?;
        res.certificate.verify(false).map_err(err)?;
        orders.push(res.structure.group().order());
    }
    Ok(format!("orders {orders:?}"))
}

fn round_trip() -> Outcome {
    let g = Arc::new(Group::heisenberg(3).map_err(err)?);
    let s = class2_odd(g, &[]).map_err(err)?;
    let cert = Certificate::from_structure(&s, Provenance::new("selftest", serde_json::Value::Null, None));
    let text = cert.to_canonical_string();
    let again = Certificate::parse(&text).map_err(err)?;
    again.verify(true).map_err(err)?;
    ensure(again.to_canonical_string() == text, "re-serialization differs")?;
    let cfg = SearchConfig::default();
    let d8 = Arc::new(Group::dihedral(8).map_err(err)?);
    let a = heuristic_lift(d8.clone(), &cfg).map_err(err)?.certificate.to_canonical_string();
    let b = heuristic_lift(d8, &cfg).map_err(err)?.certificate.to_canonical_string();
    ensure(a == b, "same seed gave different certificates")?;
    Ok("byte-identical".into())
}

fn run_check(name: &'static str, module: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult { name, module, passed, detail, millis: t.elapsed().as_millis() }
}

/// Runs every check; `quick` keeps the total well under half a minute.
pub fn run(quick: bool, mut report: impl FnMut(&CheckResult)) -> (Vec<CheckResult>, Duration) {
    let t = Instant::now();
    let mut out = Vec::new();
    let mut push = |r: CheckResult| {
        report(&r);
        out.push(r);
    };
    push(run_check("howell-oracle", "zk-linalg", || linalg_oracle(if quick { 200 } else { 1000 })));
    push(run_check("dimension-probes", "modgroupring", probes));
    push(run_check("round-trip", "iyb-core", round_trip));
    push(run_check("hertweck-d", "constructors", || hertweck(if quick { &[5, 13] } else { &[5, 13, 29, 97] })));
    push(run_check("sandling-heis5", "constructors", sandling_heis5));
    push(run_check("uniqueness-echo", "constructors", uniqueness_echo));
    push(run_check("class2-cross", "constructors", || cross_construction(if quick { &[3] } else { &[3, 5] })));
    push(run_check("heuristic-small", "search", heuristic_small));
    push(run_check("oracle-containment", "search", oracle_containment));
    push(run_check("hinted-assemblies", "search", || hinted(!quick)));
    (out, t.elapsed())
}
