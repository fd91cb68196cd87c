use std::collections::{BTreeSet, HashSet};

use dng_core::brute::brute_solve;
use dng_core::catalog::{catalog_up_to, quaternion};
use dng_core::group::{direct_product, from_permutation_generators, make_cyclic, make_dihedral, Permutation};
use dng_core::solver::{solve, solve_with, CompressedGameState, MoveClass, TieBreak};
use dng_core::theory::{covering_class, predict_cyclic, predict_dihedral, predict_nilpotent, CoveringClass};
use dng_core::{build_group, FiniteGroup, Seat, SubgroupLattice, DEFAULT_ORDER_CAP};
use proptest::prelude::*;

fn small_catalog() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = catalog_up_to(16)
        .unwrap()
        .iter()
        .filter(|d| !d.starts_with("table:"))
        .map(|d| build_group(d, DEFAULT_ORDER_CAP).unwrap())
        .collect();
    out.push(quaternion());
    out
}

#[test]
fn solving_is_deterministic() {
    for g in small_catalog() {
        let (a_outcome, a) = solve(&g).unwrap();
        let (b_outcome, b) = solve(&g).unwrap();
        assert_eq!(a_outcome, b_outcome);
        assert_eq!(a, b, "{}", g.descriptor());
    }
}

#[test]
fn stored_states_are_well_formed() {
    for g in small_catalog() {
        let lat = SubgroupLattice::build(&g);
        let table = solve_with(&g, &lat, TieBreak::Canonical).unwrap();
        for (s, _) in table.states() {
            assert!(s.selected <= lat.get(s.subgroup_id).size());
            assert!(s.selected > 0 || s.subgroup_id == lat.trivial_id());
            assert_eq!(s.mover(), Seat::new((s.selected % 3) as u8 + 1).unwrap());
        }
        let longest = lat.maximal_ids().iter().map(|&m| lat.get(m).size()).max().unwrap();
        assert!(table.total_moves() <= longest + 1);
        assert!(lat.is_maximal(table.final_subgroup()));
        assert_eq!(table.total_moves(), lat.get(table.final_subgroup()).size() + 1);
    }
}

/// From any state whose subgroup has order divisible by 3, every maximal
/// subgroup reachable by escalation has order divisible by 3.
#[test]
fn order_three_propagates_to_terminals() {
    for g in small_catalog().into_iter().filter(|g| g.order() % 3 == 0) {
        let lat = SubgroupLattice::build(&g);
        let table = solve_with(&g, &lat, TieBreak::Canonical).unwrap();
        let reachable: BTreeSet<usize> = table.states().map(|(s, _)| s.subgroup_id).collect();
        for &h in reachable.iter().filter(|&&h| lat.get(h).size().is_multiple_of(3)) {
            let mut stack = vec![h];
            let mut seen = HashSet::new();
            while let Some(cur) = stack.pop() {
                if !seen.insert(cur) {
                    continue;
                }
                if lat.is_maximal(cur) {
                    assert_eq!(lat.get(cur).size() % 3, 0, "{}", g.descriptor());
                }
                for &t in table.escalations(cur).into_iter().flat_map(|c| c.keys()) {
                    if t != lat.full_id() {
                        stack.push(t);
                    }
                }
            }
        }
    }
}

#[test]
fn recommended_class_realizes_the_value() {
    for g in small_catalog() {
        let lat = SubgroupLattice::build(&g);
        let table = solve_with(&g, &lat, TieBreak::Canonical).unwrap();
        for (s, v) in table.states() {
            assert_eq!(table.successor_outcome(s, v.best), Some(v.outcome));
            let classes = table.move_classes(&lat, s).unwrap();
            assert!(classes.iter().any(|c| c.class == v.best));
            // Nothing strictly better for the mover.
            for c in classes {
                let o = table.successor_outcome(s, c.class).unwrap();
                assert!(s.mover().rank_in(o) <= s.mover().rank_in(v.outcome));
            }
            if v.best == MoveClass::Generates {
                assert!(table.move_classes(&lat, s).unwrap().iter().all(|c| table
                    .successor_outcome(s, c.class)
                    .unwrap()
                    .loser
                    == s.mover()));
            }
        }
    }
}

#[test]
fn nilpotent_prediction_extends_cyclic_and_dihedral() {
    for n in 2..=120 {
        let g = make_cyclic(n).unwrap();
        let lat = SubgroupLattice::build(&g);
        assert_eq!(
            predict_nilpotent(&g, &lat).unwrap().predicted,
            predict_cyclic(n).unwrap().predicted,
            "n = {n}"
        );
    }
    for n in [4, 8, 16, 32] {
        let g = make_dihedral(n).unwrap();
        let lat = SubgroupLattice::build(&g);
        assert_eq!(
            predict_nilpotent(&g, &lat).unwrap().predicted,
            predict_dihedral(n).unwrap().predicted,
            "D{n}"
        );
    }
}

#[test]
fn cyclic_and_dihedral_maximal_order_laws() {
    for n in 2..=60usize {
        let lat = SubgroupLattice::build(&make_cyclic(n).unwrap());
        let got: BTreeSet<usize> = lat.maximal_ids().iter().map(|&m| lat.get(m).size()).collect();
        let expected: BTreeSet<usize> = dng_core::arith::prime_divisors(n).iter().map(|p| n / p).collect();
        assert_eq!(got, expected, "Z{n}");
        assert_eq!(lat.maximal_ids().len(), expected.len());
    }
    for n in 3..=30usize {
        let lat = SubgroupLattice::build(&make_dihedral(n).unwrap());
        for m in lat.maximal_ids() {
            let size = lat.get(m).size();
            let ok = size == n || dng_core::arith::prime_divisors(n).iter().any(|p| size == 2 * n / p);
            assert!(ok, "D{n}: maximal of order {size}");
        }
    }
}

#[test]
fn nilpotent_maximal_index_is_prime() {
    for d in dng_core::verify::enumerate_abelian(40) {
        let g = build_group(&d, DEFAULT_ORDER_CAP).unwrap();
        let lat = SubgroupLattice::build(&g);
        for m in lat.maximal_ids() {
            let index = g.order() / lat.get(m).size();
            assert!(dng_core::arith::prime_divisors(g.order()).contains(&index), "{d}");
        }
    }
}

#[test]
fn two_cover_implies_one_cover() {
    let z3 = make_cyclic(3).unwrap();
    let g = direct_product(&direct_product(&z3, &z3).unwrap(), &z3).unwrap();
    let lat = SubgroupLattice::build(&g);
    assert_eq!(covering_class(&g, &lat).unwrap(), CoveringClass::TwoCover);
    for x in g.elements() {
        assert!(lat
            .maximal_ids()
            .iter()
            .any(|&m| lat.get(m).size().is_multiple_of(3) && lat.get(m).contains(x)));
    }
}

#[test]
fn start_state_is_trivial_subgroup() {
    let g = make_cyclic(5).unwrap();
    let (_, table) = solve(&g).unwrap();
    assert!(table.get(CompressedGameState::start()).is_some());
}

fn perm_strategy() -> impl Strategy<Value = Vec<Permutation>> {
    let perm = Just((0..5).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap());
    proptest::collection::vec(perm, 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Compressed and uncompressed solvers agree on random small permutation groups.
    #[test]
    fn compression_is_sound(gens in perm_strategy()) {
        if let Ok(g) = from_permutation_generators(&gens, 16) {
            let (outcome, _) = solve(&g).unwrap();
            prop_assert_eq!(brute_solve(&g).unwrap(), outcome);
        }
    }

    /// Random abelian products: compressed and uncompressed solvers agree.
    #[test]
    fn compression_is_sound_on_products(factors in proptest::collection::vec(2usize..6, 1..4)) {
        let order: usize = factors.iter().product();
        prop_assume!(order <= 16);
        let mut g = make_cyclic(factors[0]).unwrap();
        for &f in &factors[1..] {
            g = direct_product(&g, &make_cyclic(f).unwrap()).unwrap();
        }
        let (outcome, _) = solve(&g).unwrap();
        prop_assert_eq!(brute_solve(&g).unwrap(), outcome);
    }
}
