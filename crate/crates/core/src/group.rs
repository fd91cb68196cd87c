//! Finite groups as validated Cayley tables.
//!
//! Every constructor funnels through [`FiniteGroup::from_rows`], which checks
//! the Latin-square property, locates the identity, relabels it to index 0,
//! verifies associativity over all triples and derives inverses and element
//! orders. Elements are plain `usize` indices from then on.

use std::collections::{HashMap, VecDeque};

use serde::Deserialize;

use crate::bitset::ElementSet;
use crate::error::GroupError;
use crate::lattice::Subgroup;

/// Default cap on group order for permutation closure and descriptor builds.
pub const DEFAULT_ORDER_CAP: usize = 400;

/// An immutable finite group with identity at index 0.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    element_orders: Vec<usize>,
    descriptor: String,
}

impl FiniteGroup {
    /// Validate a multiplication table given as rows and canonicalize it.
    pub fn from_rows(descriptor: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n < 2 {
            return Err(GroupError::Trivial);
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(GroupError::BadShape {
                expected: n,
                found: row.len(),
            });
        }
        for row in rows {
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::EntryOutOfRange { value: v, order: n });
            }
        }
        check_latin(rows)?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|j| rows[e][j] == j && rows[j][e] == j))
            .ok_or(GroupError::NoIdentity)?;

        // Swap labels `identity` and 0.
        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0; n * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                table[relabel(i) * n + relabel(j)] = relabel(v);
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a * n + b] == 0)
                    .expect("latin square row has identity")
            })
            .collect();
        let element_orders = (0..n)
            .map(|a| {
                let mut x = a;
                let mut k = 1;
                while x != 0 {
                    x = table[x * n + a];
                    k += 1;
                }
                k
            })
            .collect();

        Ok(FiniteGroup {
            order: n,
            table,
            inverses,
            element_orders,
            descriptor: descriptor.into(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element_orders[a]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.element_orders
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_orders.contains(&self.order)
    }

    /// `x * m * x^-1`.
    pub fn conjugate(&self, x: usize, m: usize) -> usize {
        self.mul(self.mul(x, m), self.inverses[x])
    }

    /// All elements whose order is exactly `k`.
    pub fn elements_of_order(&self, k: usize) -> Vec<usize> {
        (0..self.order).filter(|&i| self.element_orders[i] == k).collect()
    }

    /// Closure of `gens` under the product, grown from `start` (which must
    /// already be a subgroup) or from the trivial subgroup.
    pub(crate) fn generate_from(&self, start: Option<&ElementSet>, gens: &[usize]) -> ElementSet {
        let mut members = match start {
            Some(s) => s.clone(),
            None => ElementSet::from_indices(self.order, [0]),
        };
        let mut queue: VecDeque<usize> = members.iter().collect();
        while let Some(m) = queue.pop_front() {
            for &g in gens {
                let p = self.mul(m, g);
                if members.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        members
    }

    /// The smallest subgroup containing `seed`.
    pub fn closure(&self, seed: &[usize]) -> Result<Subgroup, GroupError> {
        if let Some(&bad) = seed.iter().find(|&&x| x >= self.order) {
            return Err(GroupError::ElementOutOfRange {
                element: bad,
                order: self.order,
            });
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut members = ElementSet::from_indices(self.order, [0]);
        for &x in seed {
            if !members.contains(x) {
                gens.push(x);
                members = self.generate_from(Some(&members), &gens);
            }
        }
        Ok(Subgroup::new(members, gens))
    }

    /// Element set generated by `seed`, no validation.
    pub fn closure_set(&self, seed: &[usize]) -> ElementSet {
        self.generate_from(None, seed)
    }
}

fn check_latin(rows: &[Vec<usize>]) -> Result<(), GroupError> {
    let n = rows.len();
    let mut seen = vec![false; n];
    for (i, row) in rows.iter().enumerate() {
        seen.iter_mut().for_each(|s| *s = false);
        for &v in row {
            if std::mem::replace(&mut seen[v], true) {
                return Err(GroupError::NotLatinSquare(format!("row {i} repeats {v}")));
            }
        }
    }
    for j in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for row in rows {
            let v = row[j];
            if std::mem::replace(&mut seen[v], true) {
                return Err(GroupError::NotLatinSquare(format!("column {j} repeats {v}")));
            }
        }
    }
    Ok(())
}

/// Cyclic group of order `n`; element `i` is `g^i`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::Trivial);
    }
    let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_rows(format!("cyclic:{n}"), &rows)
}

/// Dihedral group of order `2n`. Indices `0..n` are rotations `r^i`,
/// indices `n..2n` are reflections `f r^(i-n)`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 3 {
        return Err(GroupError::DihedralTooSmall(n));
    }
    let m = 2 * n;
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| {
                    let (xf, a) = (x >= n, x % n);
                    let (yf, b) = (y >= n, y % n);
                    match (xf, yf) {
                        (false, false) => (a + b) % n,
                        // r^a f r^b = f r^(b - a)
                        (false, true) => n + (b + n - a) % n,
                        (true, false) => n + (a + b) % n,
                        // f r^a f r^b = r^(b - a)
                        (true, true) => (b + n - a) % n,
                    }
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_rows(format!("dihedral:{n}"), &rows)
}

/// Direct product; `(x, y)` has index `x * |b| + y`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let (ux, uy) = (u / nb, u % nb);
            (0..n).map(|v| a.mul(ux, v / nb) * nb + b.mul(uy, v % nb)).collect()
        })
        .collect();
    let left = a.descriptor().to_string();
    let left = left.strip_prefix("product:").map(str::to_string).unwrap_or(left);
    let right = if b.descriptor().starts_with("product:") {
        format!("[{}]", b.descriptor())
    } else {
        b.descriptor().to_string()
    };
    FiniteGroup::from_rows(format!("product:{left}*{right}"), &rows)
}

/// A permutation of `0..k`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in &images {
            if v >= k || std::mem::replace(&mut seen[v], true) {
                return Err(GroupError::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation(images))
    }

    /// Build from disjoint cycles over 1-based points on `k` points.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (idx, &p) in cycle.iter().enumerate() {
                if p == 0 || p > k {
                    return Err(GroupError::InvalidPermutation(format!("point {p} outside 1..={k}")));
                }
                if std::mem::replace(&mut touched[p - 1], true) {
                    return Err(GroupError::InvalidPermutation(format!("point {p} repeated in cycles")));
                }
                let next = cycle[(idx + 1) % cycle.len()];
                images[p - 1] = next - 1;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }
}

/// Breadth-first closure of permutation generators (applied left to right).
pub fn from_permutation_generators(gens: &[Permutation], cap: usize) -> Result<FiniteGroup, GroupError> {
    let k = gens.iter().map(Permutation::degree).max().unwrap_or(0);
    let gens: Vec<Permutation> = gens
        .iter()
        .map(|g| {
            let mut images = g.0.clone();
            images.extend(g.0.len()..k);
            Permutation(images)
        })
        .collect();

    let mut elements = vec![Permutation::identity(k)];
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for g in &gens {
            let p = current.then(g);
            if !index.contains_key(&p) {
                if elements.len() >= cap {
                    return Err(GroupError::TooLarge { cap });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
    }
    if elements.len() < 2 {
        return Err(GroupError::Trivial);
    }
    let rows: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&a.then(b)]).collect())
        .collect();
    FiniteGroup::from_rows("perm", &rows)
}

#[derive(Deserialize)]
struct CayleyDocument {
    name: String,
    order: usize,
    table: Vec<Vec<usize>>,
}

/// Parse a Cayley table JSON document `{"name", "order", "table"}`.
pub fn from_cayley_file(content: &str) -> Result<FiniteGroup, GroupError> {
    let doc: CayleyDocument = serde_json::from_str(content).map_err(|e| GroupError::TableFormat(e.to_string()))?;
    if doc.order != doc.table.len() {
        return Err(GroupError::TableFormat(format!(
            "declared order {} but table has {} rows",
            doc.order,
            doc.table.len()
        )));
    }
    FiniteGroup::from_rows(doc.name, &doc.table)
}
