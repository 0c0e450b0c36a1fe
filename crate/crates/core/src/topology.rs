//! Grothendieck topologies as explicit per-object families of covering sieves.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::MorphSet;
use crate::category::{
    has_right_ore, FiniteCategory, OreCounterexample, Subcategory, SubcategoryView,
};
use crate::sieve::{generated, is_right_closed, pullback, sieves_on, Sieve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("arrow `{arrow}` does not have codomain `{base}`")]
    CodomainMismatch { arrow: String, base: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("arrow set on `{object}` is not closed under precomposition")]
    NotASieve { object: String },
    #[error(
        "enumeration needs 2^{log2_candidates} candidate assignments, over the limit of {limit}"
    )]
    SizeBoundExceeded { log2_candidates: usize, limit: u64 },
    #[error("right Ore condition fails at the cospan ({f}, {g})")]
    RightOreFails {
        f: String,
        g: String,
        witness: OreCounterexample,
    },
    #[error("invalid subcategory: {0}")]
    InvalidSubcategory(String),
    #[error("not a Grothendieck topology: {0}")]
    NotATopology(AxiomViolation),
}

/// Which axiom a candidate assignment breaks, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    Shape {
        detail: String,
    },
    NotASieve {
        object: usize,
        arrows: MorphSet,
    },
    Maximality {
        object: usize,
    },
    Stability {
        object: usize,
        sieve: MorphSet,
        along: usize,
    },
    Transitivity {
        object: usize,
        covering: MorphSet,
        sieve: MorphSet,
    },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::Shape { detail } => write!(f, "malformed assignment: {detail}"),
            AxiomViolation::NotASieve { object, arrows } => {
                write!(f, "{arrows:?} on object #{object} is not a sieve")
            }
            AxiomViolation::Maximality { object } => {
                write!(f, "maximality: the maximal sieve on #{object} does not cover")
            }
            AxiomViolation::Stability { object, sieve, along } => write!(
                f,
                "stability: pulling {sieve:?} on #{object} back along morphism #{along} does not cover"
            ),
            AxiomViolation::Transitivity { object, covering, sieve } => write!(
                f,
                "transitivity: {sieve:?} on #{object} is locally covering over {covering:?} but does not cover"
            ),
        }
    }
}

/// Covering sieves per object, each list sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GrothendieckTopology {
    covering: Vec<Vec<MorphSet>>,
}

impl GrothendieckTopology {
    /// Wraps a candidate assignment without checking the axioms.
    pub fn from_covering(mut covering: Vec<Vec<MorphSet>>) -> Self {
        for family in &mut covering {
            family.sort_unstable();
            family.dedup();
        }
        GrothendieckTopology { covering }
    }

    pub fn n_objects(&self) -> usize {
        self.covering.len()
    }

    pub fn covering(&self, c: usize) -> &[MorphSet] {
        &self.covering[c]
    }

    pub fn covering_sieves(&self, c: usize) -> impl Iterator<Item = Sieve> + '_ {
        self.covering[c]
            .iter()
            .map(move |&arrows| Sieve { base: c, arrows })
    }

    pub fn covers(&self, c: usize, arrows: MorphSet) -> bool {
        self.covering[c].binary_search(&arrows).is_ok()
    }

    pub fn total_covering(&self) -> usize {
        self.covering.iter().map(Vec::len).sum()
    }

    /// Pointwise inclusion.
    pub fn le(&self, other: &Self) -> bool {
        self.covering
            .iter()
            .zip(&other.covering)
            .all(|(a, b)| a.iter().all(|s| b.binary_search(s).is_ok()))
    }

    /// Objectwise intersection of covering families.
    pub fn meet(&self, other: &Self) -> Self {
        GrothendieckTopology {
            covering: self
                .covering
                .iter()
                .zip(&other.covering)
                .map(|(a, b)| {
                    a.iter()
                        .copied()
                        .filter(|s| b.binary_search(s).is_ok())
                        .collect()
                })
                .collect(),
        }
    }

    /// Intersection of all covering sieves on `c`; itself covering.
    pub fn smallest_covering(&self, c: usize) -> MorphSet {
        self.covering[c]
            .iter()
            .fold(MorphSet(u64::MAX), |acc, &s| acc.intersection(s))
    }
}

/// Checks maximality, stability and transitivity, in that order.
pub fn is_topology(
    cat: &FiniteCategory,
    candidate: &GrothendieckTopology,
) -> Result<(), AxiomViolation> {
    if candidate.n_objects() != cat.n_objects() {
        return Err(AxiomViolation::Shape {
            detail: format!(
                "{} families for {} objects",
                candidate.n_objects(),
                cat.n_objects()
            ),
        });
    }
    for c in 0..cat.n_objects() {
        for &s in candidate.covering(c) {
            if !s.is_subset(cat.arrows_into(c)) || !is_right_closed(cat, s) {
                return Err(AxiomViolation::NotASieve {
                    object: c,
                    arrows: s,
                });
            }
        }
    }
    for c in 0..cat.n_objects() {
        if !candidate.covers(c, cat.arrows_into(c)) {
            return Err(AxiomViolation::Maximality { object: c });
        }
    }
    for c in 0..cat.n_objects() {
        for &s in candidate.covering(c) {
            for h in cat.arrows_into(c) {
                if !candidate.covers(cat.dom(h), pullback(cat, s, h)) {
                    return Err(AxiomViolation::Stability {
                        object: c,
                        sieve: s,
                        along: h,
                    });
                }
            }
        }
    }
    for c in 0..cat.n_objects() {
        let all = sieves_on(cat, c).expect("object in range");
        for &r in candidate.covering(c) {
            for s in &all {
                if candidate.covers(c, s.arrows) {
                    continue;
                }
                if r.iter()
                    .all(|g| candidate.covers(cat.dom(g), pullback(cat, s.arrows, g)))
                {
                    return Err(AxiomViolation::Transitivity {
                        object: c,
                        covering: r,
                        sieve: s.arrows,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Only maximal sieves cover.
pub fn trivial_topology(cat: &FiniteCategory) -> GrothendieckTopology {
    GrothendieckTopology {
        covering: (0..cat.n_objects())
            .map(|c| vec![cat.arrows_into(c)])
            .collect(),
    }
}

/// Every sieve covers.
pub fn maximal_topology(cat: &FiniteCategory) -> GrothendieckTopology {
    GrothendieckTopology {
        covering: (0..cat.n_objects())
            .map(|c| {
                sieves_on(cat, c)
                    .expect("in range")
                    .into_iter()
                    .map(|s| s.arrows)
                    .collect()
            })
            .collect(),
    }
}

/// Every nonempty sieve covers; requires the right Ore condition.
pub fn atomic_topology(cat: &FiniteCategory) -> Result<GrothendieckTopology, TopologyError> {
    has_right_ore(cat).map_err(|w| TopologyError::RightOreFails {
        f: cat.morphism_name(w.f).to_string(),
        g: cat.morphism_name(w.g).to_string(),
        witness: w,
    })?;
    let j = GrothendieckTopology {
        covering: (0..cat.n_objects())
            .map(|c| {
                sieves_on(cat, c)
                    .expect("in range")
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .map(|s| s.arrows)
                    .collect()
            })
            .collect(),
    };
    debug_assert_eq!(is_topology(cat, &j), Ok(()));
    Ok(j)
}

/// Smallest topology in which the sieve generated by each listed family
/// covers its object. `coverage[c]` lists generating families on `c`.
pub fn generated_topology(
    cat: &FiniteCategory,
    coverage: &[Vec<MorphSet>],
) -> Result<GrothendieckTopology, TopologyError> {
    if coverage.len() > cat.n_objects() {
        return Err(TopologyError::TypeMismatch(format!(
            "coverage given for {} objects, category has {}",
            coverage.len(),
            cat.n_objects()
        )));
    }
    let table = SieveTable::new(cat);
    let mut seed = table.trivial();
    for (c, families) in coverage.iter().enumerate() {
        for &family in families {
            if let Some(f) = family.difference(cat.arrows_into(c)).first() {
                return Err(TopologyError::CodomainMismatch {
                    arrow: cat.morphism_name(f).to_string(),
                    base: cat.object_name(c).to_string(),
                });
            }
            seed[c].insert(table.index(c, generated(cat, family)));
        }
    }
    table.close(&mut seed);
    Ok(table.to_topology(&seed))
}

/// A subcategory with the topology it inherits.
#[derive(Debug, Clone)]
pub struct InducedSite {
    pub view: SubcategoryView,
    pub topology: GrothendieckTopology,
}

/// A sieve on an object of `sub` covers iff the sieve it generates in the
/// parent covers. The result is checked against the axioms.
pub fn induced_topology(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    sub: &Subcategory,
) -> Result<InducedSite, TopologyError> {
    if !sub.belongs_to(cat) {
        return Err(TopologyError::InvalidSubcategory(
            "subcategory of a different category".into(),
        ));
    }
    let view = sub.view(cat);
    let covering = (0..view.category.n_objects())
        .map(|d| {
            let parent = view.objects[d];
            sieves_on(&view.category, d)
                .expect("in range")
                .into_iter()
                .filter(|s| j.covers(parent, generated(cat, view.lift_morphisms(s.arrows))))
                .map(|s| s.arrows)
                .collect()
        })
        .collect();
    let topology = GrothendieckTopology::from_covering(covering);
    is_topology(&view.category, &topology).map_err(TopologyError::NotATopology)?;
    Ok(InducedSite { view, topology })
}

/// Indexed sieves of a category, with precomputed pullbacks; the workhorse
/// behind topology generation and enumeration.
pub(crate) struct SieveTable {
    pub sieves: Vec<Vec<MorphSet>>,
    lookup: Vec<HashMap<MorphSet, usize>>,
    /// `pullbacks[c][s]` lists `(dom h, index of h*(s))` for every `h` into `c`.
    pullbacks: Vec<Vec<Vec<(usize, usize)>>>,
    /// `arrows[c]` lists `(h, dom h)` for every `h` into `c`, aligned with `pullbacks`.
    arrows: Vec<Vec<usize>>,
    maximal: Vec<usize>,
}

impl SieveTable {
    pub fn new(cat: &FiniteCategory) -> Self {
        let sieves: Vec<Vec<MorphSet>> = (0..cat.n_objects())
            .map(|c| {
                sieves_on(cat, c)
                    .expect("in range")
                    .into_iter()
                    .map(|s| s.arrows)
                    .collect()
            })
            .collect();
        let lookup: Vec<HashMap<MorphSet, usize>> = sieves
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, &s)| (s, i)).collect())
            .collect();
        let arrows: Vec<Vec<usize>> = (0..cat.n_objects())
            .map(|c| cat.arrows_into(c).iter().collect())
            .collect();
        let pullbacks = (0..cat.n_objects())
            .map(|c| {
                sieves[c]
                    .iter()
                    .map(|&s| {
                        arrows[c]
                            .iter()
                            .map(|&h| {
                                let d = cat.dom(h);
                                (d, lookup[d][&pullback(cat, s, h)])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let maximal = (0..cat.n_objects())
            .map(|c| lookup[c][&cat.arrows_into(c)])
            .collect();
        SieveTable {
            sieves,
            lookup,
            pullbacks,
            arrows,
            maximal,
        }
    }

    pub fn n_objects(&self) -> usize {
        self.sieves.len()
    }

    pub fn index(&self, c: usize, s: MorphSet) -> usize {
        self.lookup[c][&s]
    }

    pub fn maximal_index(&self, c: usize) -> usize {
        self.maximal[c]
    }

    /// `log2` of the number of maximal-containing assignments.
    pub fn candidate_exponent(&self) -> usize {
        self.sieves.iter().map(|s| s.len() - 1).sum()
    }

    pub fn empty_sets(&self) -> Vec<FixedBitSet> {
        self.sieves
            .iter()
            .map(|s| FixedBitSet::with_capacity(s.len()))
            .collect()
    }

    pub fn trivial(&self) -> Vec<FixedBitSet> {
        let mut sets = self.empty_sets();
        for (c, set) in sets.iter_mut().enumerate() {
            set.insert(self.maximal[c]);
        }
        sets
    }

    /// Least fixed point of the stability and transitivity rules above `sets`.
    pub fn close(&self, sets: &mut [FixedBitSet]) {
        loop {
            let mut changed = false;
            for c in 0..self.n_objects() {
                let members: Vec<usize> = sets[c].ones().collect();
                for s in members {
                    for &(d, t) in &self.pullbacks[c][s] {
                        if !sets[d].contains(t) {
                            sets[d].insert(t);
                            changed = true;
                        }
                    }
                }
            }
            for c in 0..self.n_objects() {
                for s in 0..self.sieves[c].len() {
                    if sets[c].contains(s) {
                        continue;
                    }
                    let locally = sets[c].ones().any(|r| {
                        self.sieves[c][r].iter().all(|g| {
                            let k = self.arrows[c].binary_search(&g).expect("arrow into c");
                            let (d, t) = self.pullbacks[c][s][k];
                            sets[d].contains(t)
                        })
                    });
                    if locally {
                        sets[c].insert(s);
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn to_topology(&self, sets: &[FixedBitSet]) -> GrothendieckTopology {
        GrothendieckTopology {
            covering: sets
                .iter()
                .enumerate()
                .map(|(c, set)| set.ones().map(|i| self.sieves[c][i]).collect())
                .collect(),
        }
    }
}
