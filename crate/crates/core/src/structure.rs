//! Structural invariants: minimal generating sets, nilpotence, and the
//! residue-class split of a nilpotent group's Sylow factors.

use std::collections::HashSet;

use crate::arith::{factorize, is_power_of, prime_divisors};
use crate::bitset::ElementSet;
use crate::error::GroupError;
use crate::group::FiniteGroup;
use crate::lattice::{Subgroup, SubgroupLattice};

/// `d(G)`: the size of a smallest generating set.
pub fn min_generators(g: &FiniteGroup) -> usize {
    let whole = Subgroup::new(ElementSet::full(g.order()), vec![]);
    min_generators_of(g, &whole)
}

/// Smallest number of elements of `target` whose closure is `target`
/// (0 for the trivial subgroup).
///
/// Searches subset sizes in ascending order. A `k`-subset is represented by
/// the subgroup it generates, since adding an element only depends on that
/// subgroup; level `k` therefore holds every subgroup generated by some
/// `k`-subset.
pub fn min_generators_of(g: &FiniteGroup, target: &Subgroup) -> usize {
    let goal = target.members();
    let mut frontier = vec![Subgroup::new(ElementSet::from_indices(g.order(), [0]), vec![])];
    let mut visited: HashSet<ElementSet> = frontier.iter().map(|s| s.members().clone()).collect();
    let mut k = 0;
    loop {
        if frontier.iter().any(|s| s.members() == goal) {
            return k;
        }
        k += 1;
        let mut next = Vec::new();
        for current in &frontier {
            for x in goal.iter().filter(|&x| !current.contains(x)) {
                let mut gens = current.generators().to_vec();
                gens.push(x);
                let members = g.generate_from(Some(current.members()), &gens);
                if visited.insert(members.clone()) {
                    next.push(Subgroup::new(members, gens));
                }
            }
        }
        frontier = next;
    }
}

/// Nilpotence test: every maximal subgroup is normal.
pub fn nilpotent_by_maximals(g: &FiniteGroup, lat: &SubgroupLattice) -> bool {
    lat.maximal_ids().into_iter().all(|m| lat.get(m).is_normal_in(g))
}

/// Nilpotence test: every Sylow subgroup is normal, i.e. `G` is the direct
/// product of its Sylow subgroups. A Sylow `p`-subgroup is unique exactly
/// when the `p`-elements number `|G|_p` and form a subgroup.
pub fn nilpotent_by_sylow(g: &FiniteGroup) -> bool {
    factorize(g.order()).into_iter().all(|(p, e)| {
        let p_elements: Vec<usize> = g.elements().filter(|&x| is_power_of(g.element_order(x), p)).collect();
        p_elements.len() == p.pow(e) && g.closure_set(&p_elements).count() == p_elements.len()
    })
}

/// Both nilpotence criteria must agree; the maximal-subgroup one is returned.
pub fn is_nilpotent(g: &FiniteGroup, lat: &SubgroupLattice) -> bool {
    let by_maximals = nilpotent_by_maximals(g, lat);
    debug_assert_eq!(
        by_maximals,
        nilpotent_by_sylow(g),
        "nilpotence criteria disagree on {}",
        g.descriptor()
    );
    by_maximals
}

/// The products of Sylow factors of a nilpotent group, grouped by the prime's
/// residue mod 3: `h` for primes `≡ 1`, `k` for primes `≡ 2`, `t` for `p = 3`.
#[derive(Clone, Debug)]
pub struct SylowSplit {
    pub h: Subgroup,
    pub k: Subgroup,
    pub t: Subgroup,
}

pub fn sylow_hk_split(g: &FiniteGroup, lat: &SubgroupLattice) -> Result<SylowSplit, GroupError> {
    if !is_nilpotent(g, lat) {
        return Err(GroupError::NotNilpotent);
    }
    let part = |residue: usize| -> Result<Subgroup, GroupError> {
        let elements: Vec<usize> = g
            .elements()
            .filter(|&x| {
                prime_divisors(g.element_order(x)).iter().all(|&p| {
                    if residue == 0 {
                        p == 3
                    } else {
                        p != 3 && p % 3 == residue
                    }
                })
            })
            .collect();
        let sub = g.closure(&elements)?;
        if sub.size() != elements.len() {
            return Err(GroupError::NotNilpotent);
        }
        Ok(sub)
    };
    Ok(SylowSplit {
        h: part(1)?,
        k: part(2)?,
        t: part(0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, from_cayley_file, make_cyclic, make_dihedral};

    fn product(factors: &[usize]) -> FiniteGroup {
        let mut g = make_cyclic(factors[0]).unwrap();
        for &n in &factors[1..] {
            g = direct_product(&g, &make_cyclic(n).unwrap()).unwrap();
        }
        g
    }

    /// Plain subset enumeration in ascending size.
    fn brute_min_generators(g: &FiniteGroup) -> usize {
        let n = g.order();
        fn search(g: &FiniteGroup, chosen: &mut Vec<usize>, start: usize, left: usize) -> bool {
            if left == 0 {
                return g.closure_set(chosen).count() == g.order();
            }
            for x in start..g.order() {
                chosen.push(x);
                let hit = search(g, chosen, x + 1, left - 1);
                chosen.pop();
                if hit {
                    return true;
                }
            }
            false
        }
        (0..=n).find(|&k| search(g, &mut Vec::new(), 0, k)).unwrap()
    }

    #[test]
    fn min_generators_examples() {
        assert_eq!(min_generators(&make_cyclic(6).unwrap()), 1);
        assert_eq!(min_generators(&product(&[2, 2])), 2);
        assert_eq!(min_generators(&product(&[3, 3, 3, 3])), 4);
        assert_eq!(min_generators(&make_dihedral(5).unwrap()), 2);
    }

    #[test]
    fn min_generators_matches_subset_enumeration() {
        for g in [
            product(&[2, 2, 2]),
            product(&[2, 4]),
            product(&[2, 2, 3]),
            make_dihedral(6).unwrap(),
            make_cyclic(10).unwrap(),
        ] {
            assert_eq!(min_generators(&g), brute_min_generators(&g), "{}", g.descriptor());
        }
    }

    #[test]
    fn nilpotence() {
        for (g, expected) in [
            (make_dihedral(4).unwrap(), true),
            (make_dihedral(3).unwrap(), false),
            (make_cyclic(12).unwrap(), true),
            (make_dihedral(6).unwrap(), false),
            (product(&[2, 2, 7]), true),
        ] {
            let lat = SubgroupLattice::build(&g);
            assert_eq!(nilpotent_by_maximals(&g, &lat), expected, "{}", g.descriptor());
            assert_eq!(nilpotent_by_sylow(&g), expected, "{}", g.descriptor());
        }
    }

    #[test]
    fn sylow_split_examples() {
        let g = product(&[2, 2, 7]);
        let s = sylow_hk_split(&g, &SubgroupLattice::build(&g)).unwrap();
        assert_eq!((s.h.size(), s.k.size(), s.t.size()), (7, 4, 1));
        let g = make_cyclic(9).unwrap();
        let s = sylow_hk_split(&g, &SubgroupLattice::build(&g)).unwrap();
        assert_eq!((s.h.size(), s.k.size(), s.t.size()), (1, 1, 9));
        let g = from_cayley_file(include_str!("../fixtures/q8.json")).unwrap();
        let s = sylow_hk_split(&g, &SubgroupLattice::build(&g)).unwrap();
        assert_eq!((s.h.size(), s.k.size(), s.t.size()), (1, 8, 1));
        let g = make_dihedral(3).unwrap();
        assert!(matches!(
            sylow_hk_split(&g, &SubgroupLattice::build(&g)),
            Err(GroupError::NotNilpotent)
        ));
    }
}
