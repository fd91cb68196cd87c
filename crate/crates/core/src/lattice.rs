//! Subgroups and the full subgroup lattice.

use std::collections::HashMap;

use crate::bitset::ElementSet;
use crate::error::GroupError;
use crate::group::FiniteGroup;

/// A subgroup as a membership bitset plus a (not necessarily minimal) list
/// of generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: ElementSet,
    size: usize,
    generators: Vec<usize>,
    lattice_id: Option<usize>,
}

impl Subgroup {
    pub(crate) fn new(members: ElementSet, generators: Vec<usize>) -> Self {
        let size = members.count();
        Subgroup {
            members,
            size,
            generators,
            lattice_id: None,
        }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn lattice_id(&self) -> Option<usize> {
        self.lattice_id
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// `x M x^-1 = M` for every `x` in the group.
    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.elements()
            .all(|x| self.members.iter().all(|m| self.members.contains(g.conjugate(x, m))))
    }
}

/// Every subgroup of a finite group, ordered by `(size, members)`, so the
/// trivial subgroup is id 0 and the whole group is the last id.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    index: HashMap<ElementSet, usize>,
    inclusion: Vec<(usize, usize)>,
    maximal: Vec<bool>,
    cyclic_of: Vec<usize>,
}

/// Join of a subgroup with extra generators, keeping the generator list short.
fn join_with(g: &FiniteGroup, base: &Subgroup, extra: &[usize]) -> Subgroup {
    let mut gens = base.generators.clone();
    let mut members = base.members.clone();
    for &x in extra {
        if !members.contains(x) {
            gens.push(x);
            members = g.generate_from(Some(&members), &gens);
        }
    }
    Subgroup::new(members, gens)
}

impl SubgroupLattice {
    /// Closure of all cyclic subgroups, then pairwise joins until nothing new
    /// appears.
    pub fn build(g: &FiniteGroup) -> Self {
        let mut found: Vec<Subgroup> = Vec::new();
        let mut seen: HashMap<ElementSet, usize> = HashMap::new();
        for x in g.elements() {
            let gens = if x == 0 { vec![] } else { vec![x] };
            let members = g.closure_set(&gens);
            if !seen.contains_key(&members) {
                seen.insert(members.clone(), found.len());
                found.push(Subgroup::new(members, gens));
            }
        }

        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let (a, b) = (&found[i], &found[j]);
                if a.members.is_subset(&b.members) || b.members.is_subset(&a.members) {
                    continue;
                }
                let joined = join_with(g, a, &b.generators);
                if !seen.contains_key(&joined.members) {
                    seen.insert(joined.members.clone(), found.len());
                    found.push(joined);
                }
            }
            i += 1;
        }

        Self::assemble(g, found)
    }

    /// Rebuild a lattice from raw member lists (e.g. a persisted cache).
    pub fn from_member_lists(g: &FiniteGroup, lists: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut found = Vec::with_capacity(lists.len());
        for list in lists {
            let sub = g.closure(list)?;
            if sub.size() != list.len() {
                return Err(GroupError::TableFormat(format!(
                    "cached member list of size {} is not a subgroup",
                    list.len()
                )));
            }
            found.push(sub);
        }
        let present: std::collections::HashSet<&ElementSet> = found.iter().map(|s| &s.members).collect();
        let complete = present.len() == found.len()
            && present.contains(&ElementSet::full(g.order()))
            && g.elements().all(|x| present.contains(&g.closure_set(&[x])));
        if !complete {
            return Err(GroupError::TableFormat("cached lattice is incomplete".into()));
        }
        Ok(Self::assemble(g, found))
    }

    fn assemble(g: &FiniteGroup, mut found: Vec<Subgroup>) -> Self {
        found.sort_by(|a, b| (a.size, &a.members).cmp(&(b.size, &b.members)));
        found.dedup_by(|a, b| a.members == b.members);
        let mut index = HashMap::with_capacity(found.len());
        for (id, s) in found.iter_mut().enumerate() {
            s.lattice_id = Some(id);
            index.insert(s.members.clone(), id);
        }

        let count = found.len();
        let mut inclusion = Vec::new();
        let mut has_proper_super = vec![false; count];
        for i in 0..count {
            for j in (i + 1)..count {
                if found[i].size < found[j].size && found[i].members.is_subset(&found[j].members) {
                    inclusion.push((i, j));
                    if j != count - 1 {
                        has_proper_super[i] = true;
                    }
                }
            }
        }
        let maximal = (0..count).map(|i| i != count - 1 && !has_proper_super[i]).collect();

        let cyclic_of = g
            .elements()
            .map(|x| {
                let gens = if x == 0 { vec![] } else { vec![x] };
                index[&g.closure_set(&gens)]
            })
            .collect();

        SubgroupLattice {
            subgroups: found,
            index,
            inclusion,
            maximal,
            cyclic_of,
        }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, id: usize) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn trivial_id(&self) -> usize {
        0
    }

    pub fn full_id(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn full(&self) -> &Subgroup {
        &self.subgroups[self.full_id()]
    }

    pub fn id_of(&self, members: &ElementSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Lattice id of `<x>`.
    pub fn cyclic_id(&self, x: usize) -> usize {
        self.cyclic_of[x]
    }

    /// Pairs `(i, j)` with subgroup `i` strictly inside subgroup `j`.
    pub fn inclusion(&self) -> &[(usize, usize)] {
        &self.inclusion
    }

    pub fn is_maximal(&self, id: usize) -> bool {
        self.maximal[id]
    }

    pub fn maximal_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.maximal[i]).collect()
    }

    /// Lattice id of `<H, K>`.
    pub fn join(&self, g: &FiniteGroup, h: usize, k: usize) -> usize {
        let (a, b) = (&self.subgroups[h], &self.subgroups[k]);
        if b.members.is_subset(&a.members) {
            return h;
        }
        if a.members.is_subset(&b.members) {
            return k;
        }
        let joined = join_with(g, a, &b.generators);
        self.index[&joined.members]
    }

    /// Lattice id of `<H, x>`.
    pub fn join_element(&self, g: &FiniteGroup, h: usize, x: usize) -> usize {
        self.join(g, h, self.cyclic_of[x])
    }
}

/// The maximality-flagged subgroups of `lat`.
pub fn maximal_subgroups(lat: &SubgroupLattice) -> Vec<&Subgroup> {
    lat.maximal_ids().into_iter().map(|i| lat.get(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, make_cyclic, make_dihedral};

    fn orders(lat: &SubgroupLattice) -> Vec<usize> {
        let mut o: Vec<usize> = maximal_subgroups(lat).iter().map(|s| s.size()).collect();
        o.sort_unstable();
        o
    }

    #[test]
    fn cyclic_six_lattice() {
        let lat = SubgroupLattice::build(&make_cyclic(6).unwrap());
        let sizes: Vec<usize> = lat.subgroups().iter().map(Subgroup::size).collect();
        assert_eq!(sizes, vec![1, 2, 3, 6]);
        assert_eq!(orders(&lat), vec![2, 3]);
    }

    #[test]
    fn klein_four_lattice() {
        let z2 = make_cyclic(2).unwrap();
        let lat = SubgroupLattice::build(&direct_product(&z2, &z2).unwrap());
        assert_eq!(lat.len(), 5);
        assert_eq!(orders(&lat), vec![2, 2, 2]);
    }

    #[test]
    fn cyclic_nine_chain() {
        let lat = SubgroupLattice::build(&make_cyclic(9).unwrap());
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.maximal_ids().len(), 1);
        assert_eq!(lat.inclusion(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn maximal_orders_z12_and_d5() {
        let lat = SubgroupLattice::build(&make_cyclic(12).unwrap());
        assert_eq!(orders(&lat), vec![4, 6]);
        let lat = SubgroupLattice::build(&make_dihedral(5).unwrap());
        // one rotation subgroup of order 5, five reflection subgroups of order 2
        assert_eq!(orders(&lat), vec![2, 2, 2, 2, 2, 5]);
    }

    #[test]
    fn join_and_lookup() {
        let g = make_dihedral(4).unwrap();
        let lat = SubgroupLattice::build(&g);
        let rot = lat.cyclic_id(1);
        assert_eq!(lat.get(rot).size(), 4);
        assert_eq!(lat.join_element(&g, rot, 4), lat.full_id());
        assert_eq!(lat.join_element(&g, rot, 2), rot);
        let lists: Vec<Vec<usize>> = lat.subgroups().iter().map(|s| s.members().to_vec()).collect();
        let rebuilt = SubgroupLattice::from_member_lists(&g, &lists).unwrap();
        assert_eq!(rebuilt.maximal_ids(), lat.maximal_ids());
        assert!(SubgroupLattice::from_member_lists(&g, &lists[1..]).is_err());
    }
}
