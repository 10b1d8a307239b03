use std::sync::Arc;
use std::time::Instant;

use iyb::construct::{
    class2_equivariant_sandling, class2_odd, combine_semidirect, hall_decompose, hertweck_d_structure, power_wreath,
};
use iyb::group::hertweck::{alpha1_map, hertweck_a, HertweckParams};
use iyb::group::{Automorphism, Group, GroupAction};
use iyb::structure::{enumerate_submodules, structures_isomorphic, subgroup_preimage_check, IybStructure};
use num_bigint::BigUint;

fn alpha1_action(q: u64) -> GroupAction {
    let params = HertweckParams::new(q).unwrap();
    let d = Arc::new(Group::heisenberg(q).unwrap());
    let h = Arc::new(Group::cyclic((q - 1) as usize).unwrap());
    let a = Automorphism::new(&d, alpha1_map(q, params.zeta)).unwrap();
    GroupAction::new(h, d, vec![a]).unwrap()
}

fn cyclic_structure(n: usize) -> IybStructure {
    iyb::construct::abelian_structure(Arc::new(Group::cyclic(n).unwrap())).unwrap()
}

#[test]
fn sandling_heisenberg_5_with_alpha1() {
    let out = class2_equivariant_sandling(&alpha1_action(5), None).unwrap();
    assert_eq!(out.index, BigUint::from(125u32));
    assert_eq!(out.pairwise_tests, 125 * 124 / 2);
}

#[test]
fn sandling_with_full_a_matches_hertweck() {
    let params = HertweckParams::new(5).unwrap();
    let a = hertweck_a(params).unwrap();
    let out = class2_equivariant_sandling(&a.action, None).unwrap();
    let canonical = hertweck_d_structure(5, None, false).unwrap();
    let iso = structures_isomorphic(&out.structure, &canonical.structure).unwrap().unwrap();
    assert!(iso.intertwines_equivariance);
}

#[test]
fn order_500_from_heisenberg_5_and_c4() {
    let act = alpha1_action(5);
    let s_n = class2_equivariant_sandling(&act, None).unwrap().structure;
    let s_h = cyclic_structure(4);
    let s = combine_semidirect(&s_h, &s_n, &act).unwrap();
    assert_eq!(s.group().order(), 500);
    let gens = s.group().generators().to_vec();
    let split = gens.len() - 1;
    let d = hall_decompose(&s, &gens[..split], &gens[split..]).unwrap();
    assert!(structures_isomorphic(&s_h, &d.h).unwrap().is_some());
    assert!(structures_isomorphic(&s_n, &d.n).unwrap().is_some());
}

#[test]
fn class2_constructions_agree_on_submodule_preimages() {
    for q in [3u64, 5] {
        let g = Arc::new(Group::heisenberg(q).unwrap());
        let odd = class2_odd(g.clone(), &[]).unwrap();
        let trivial = Arc::new(Group::cyclic(1).unwrap());
        let act = GroupAction::trivial(trivial, g.clone());
        let sand = class2_equivariant_sandling(&act, None).unwrap().structure;
        for s in [&odd, &sand] {
            for sub in enumerate_submodules(s, 1 << 12).unwrap() {
                subgroup_preimage_check(s, &sub).unwrap();
            }
        }
    }
}

#[test]
fn power_of_hertweck_structure() {
    let t = Instant::now();
    let h = hertweck_d_structure(5, None, false).unwrap();
    let w = h.a.action.direct_power_with_wreath(2).unwrap().1;
    let gens = w.actor().generators().to_vec();
    let (p, _) = power_wreath(&h.structure, &h.a.action, 2, w.actor(), &gens).unwrap();
    assert_eq!(p.group().order(), 15625);
    eprintln!("power_wreath D(5)^2: {:?}", t.elapsed());
}

#[test]
fn hertweck_small_primes() {
    for q in [5u64, 13, 17] {
        let h = hertweck_d_structure(q, None, false).unwrap();
        assert_eq!(h.summary.cocycle_modes, vec!["full".to_string()]);
    }
    assert!(hertweck_d_structure(7, None, false).is_err());
    hertweck_d_structure(7, None, true).unwrap();
}

#[test]
fn hertweck_97_generator_mode() {
    let t = Instant::now();
    let h = hertweck_d_structure(97, None, false).unwrap();
    assert_eq!(h.structure.group().order(), 912_673);
    assert_eq!(h.summary.equivariance_generators, 3);
    eprintln!("hertweck q=97: {:?}", t.elapsed());
}
