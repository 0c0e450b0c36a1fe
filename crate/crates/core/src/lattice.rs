//! Exhaustive enumeration of all Grothendieck topologies on a finite category
//! and the lattice they form.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::category::FiniteCategory;
use crate::topology::{generated_topology, GrothendieckTopology, SieveTable, TopologyError};

/// Default cap on the number of maximal-containing sieve assignments.
pub const DEFAULT_MAX_ASSIGNMENTS: u64 = 1 << 16;

/// Environment variable overriding [`DEFAULT_MAX_ASSIGNMENTS`].
pub const MAX_ASSIGNMENTS_ENV: &str = "FINSITE_MAX_ASSIGNMENTS";

/// The configured enumeration bound.
pub fn max_assignments() -> u64 {
    std::env::var(MAX_ASSIGNMENTS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ASSIGNMENTS)
}

/// `log2` of the number of sieve assignments containing every maximal sieve.
pub fn candidate_exponent(cat: &FiniteCategory) -> usize {
    SieveTable::new(cat).candidate_exponent()
}

/// All topologies on a category, ordered by inclusion, with meet, join and
/// Heyting implication tables.
#[derive(Debug, Clone)]
pub struct TopologyLattice {
    elements: Vec<GrothendieckTopology>,
    le: Vec<FixedBitSet>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    implies: Vec<Vec<usize>>,
}

impl TopologyLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GrothendieckTopology] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &GrothendieckTopology {
        &self.elements[i]
    }

    pub fn index_of(&self, j: &GrothendieckTopology) -> Option<usize> {
        self.elements.iter().position(|e| e == j)
    }

    /// The trivial topology.
    pub fn bottom(&self) -> usize {
        0
    }

    /// The maximal topology.
    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i].contains(j)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn implies(&self, i: usize, j: usize) -> usize {
        self.implies[i][j]
    }
}

/// Enumerates every topology, refusing when the number of candidate
/// assignments exceeds `limit`.
///
/// The search walks sieves in canonical order, deciding each one in or out;
/// an "in" decision is immediately closed under the axioms and pruned if the
/// closure hits a sieve already decided out. Every topology is reached
/// exactly once.
pub fn enumerate_topologies(
    cat: &FiniteCategory,
    limit: u64,
) -> Result<TopologyLattice, TopologyError> {
    let table = SieveTable::new(cat);
    let exponent = table.candidate_exponent();
    if exponent >= 64 || (1u64 << exponent) > limit {
        return Err(TopologyError::SizeBoundExceeded {
            log2_candidates: exponent,
            limit,
        });
    }
    let decisions: Vec<(usize, usize)> = (0..table.n_objects())
        .flat_map(|c| (0..table.sieves[c].len()).map(move |s| (c, s)))
        .filter(|&(c, s)| s != table.maximal_index(c))
        .collect();
    let mut start = table.trivial();
    table.close(&mut start);
    let mut found = Vec::new();
    let mut excluded = table.empty_sets();
    search(&table, &decisions, 0, start, &mut excluded, &mut found);

    let mut elements: Vec<GrothendieckTopology> =
        found.iter().map(|s| table.to_topology(s)).collect();
    elements.sort_by(|a, b| {
        a.total_covering()
            .cmp(&b.total_covering())
            .then_with(|| a.cmp(b))
    });
    Ok(build_lattice(cat, elements))
}

fn search(
    table: &SieveTable,
    decisions: &[(usize, usize)],
    mut pos: usize,
    current: Vec<FixedBitSet>,
    excluded: &mut Vec<FixedBitSet>,
    found: &mut Vec<Vec<FixedBitSet>>,
) {
    while pos < decisions.len() {
        let (c, s) = decisions[pos];
        if !current[c].contains(s) && !excluded[c].contains(s) {
            break;
        }
        pos += 1;
    }
    if pos == decisions.len() {
        found.push(current);
        return;
    }
    let (c, s) = decisions[pos];
    let mut with = current.clone();
    with[c].insert(s);
    table.close(&mut with);
    if with
        .iter()
        .zip(excluded.iter())
        .all(|(w, e)| w.is_disjoint(e))
    {
        search(table, decisions, pos + 1, with, excluded, found);
    }
    excluded[c].insert(s);
    search(table, decisions, pos + 1, current, excluded, found);
    excluded[c].set(s, false);
}

fn build_lattice(cat: &FiniteCategory, elements: Vec<GrothendieckTopology>) -> TopologyLattice {
    let n = elements.len();
    let le: Vec<FixedBitSet> = elements
        .par_iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, b) in elements.iter().enumerate() {
                row.set(j, a.le(b));
            }
            row
        })
        .collect();
    let find = |t: &GrothendieckTopology| {
        elements
            .iter()
            .position(|e| e == t)
            .expect("lattice is closed under its operations")
    };
    let meet: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| find(&elements[i].meet(&elements[j])))
                .collect()
        })
        .collect();
    let join: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if le[i].contains(j) {
                        return j;
                    }
                    if le[j].contains(i) {
                        return i;
                    }
                    let union: Vec<_> = (0..cat.n_objects())
                        .map(|c| {
                            let mut u = elements[i].covering(c).to_vec();
                            u.extend_from_slice(elements[j].covering(c));
                            u
                        })
                        .collect();
                    find(&generated_topology(cat, &union).expect("well-typed union"))
                })
                .collect()
        })
        .collect();
    // largest K with K ∧ A ≤ B, found by scanning
    let implies: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| {
                    let candidates: Vec<usize> =
                        (0..n).filter(|&k| le[meet[k][a]].contains(b)).collect();
                    let best = candidates
                        .iter()
                        .copied()
                        .find(|&k| candidates.iter().all(|&other| le[other].contains(k)))
                        .expect("the topology lattice is a Heyting algebra");
                    best
                })
                .collect()
        })
        .collect();
    TopologyLattice {
        elements,
        le,
        meet,
        join,
        implies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::topology::{maximal_topology, trivial_topology};

    #[test]
    fn small_counts() {
        assert_eq!(
            enumerate_topologies(&catalog::term(), DEFAULT_MAX_ASSIGNMENTS)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            enumerate_topologies(&catalog::arrow(), DEFAULT_MAX_ASSIGNMENTS)
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            enumerate_topologies(&catalog::z2(), DEFAULT_MAX_ASSIGNMENTS)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn bounds_are_trivial_and_maximal() {
        for (name, c) in catalog::named() {
            let l = enumerate_topologies(&c, DEFAULT_MAX_ASSIGNMENTS).unwrap();
            assert_eq!(l.get(l.bottom()), &trivial_topology(&c), "{name}");
            assert_eq!(l.get(l.top()), &maximal_topology(&c), "{name}");
        }
    }

    #[test]
    fn size_bound_is_enforced() {
        let c = catalog::square();
        assert_eq!(candidate_exponent(&c), 10);
        assert!(matches!(
            enumerate_topologies(&c, 512),
            Err(TopologyError::SizeBoundExceeded {
                log2_candidates: 10,
                limit: 512
            })
        ));
        assert!(enumerate_topologies(&c, 1024).is_ok());
    }
}
