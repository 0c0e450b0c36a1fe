//! Object properties in the sheaf topos: atoms, indecomposables, compactness,
//! and the sieve criteria for representables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{down_sets, MorphSet};
use crate::category::FiniteCategory;
use crate::sheaf::{
    is_sheaf, kernel_pair, nat_transformations, representable_sheaf, subpresheaf, yoneda,
    NatTransformation, Presheaf, SheafError,
};
use crate::sieve::generated;
use crate::topology::{trivial_topology, GrothendieckTopology};

/// The subsheaves of a sheaf, as sets of elements of its disjoint union.
///
/// Bit `offset(c) + x` stands for `x ∈ A(c)`. Elements are sorted ascending,
/// so the least subsheaf comes first and `A` itself last. Closed subsheaves
/// are closed under intersection, so meets are intersections and the join
/// of a family is the least element above its union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubobjectLattice {
    offsets: Vec<usize>,
    elements: Vec<u64>,
}

impl SubobjectLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.elements[a] & !self.elements[b] == 0
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        index_of(&self.elements, self.elements[a] & self.elements[b])
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.least_above(self.elements[a] | self.elements[b])
    }

    /// Index of the least subobject containing every element in `set`.
    pub fn least_above(&self, set: u64) -> usize {
        let above = self
            .elements
            .iter()
            .filter(|&&e| set & !e == 0)
            .fold(u64::MAX, |acc, &e| acc & e);
        index_of(&self.elements, above)
    }

    /// Whether `x ∈ A(c)` lies in subobject `i`.
    pub fn contains(&self, i: usize, c: usize, x: usize) -> bool {
        self.elements[i] & (1 << (self.offsets[c] + x)) != 0
    }

    /// Objectwise sizes of subobject `i`.
    pub fn sizes(&self, i: usize) -> Vec<usize> {
        let ends = self
            .offsets
            .iter()
            .skip(1)
            .copied()
            .chain(std::iter::once(64));
        self.offsets
            .iter()
            .zip(ends)
            .map(|(&lo, hi)| {
                let span = hi - lo;
                let mask = if span >= 64 {
                    u64::MAX
                } else {
                    (1u64 << span) - 1
                };
                ((self.elements[i] >> lo) & mask).count_ones() as usize
            })
            .collect()
    }
}

fn index_of(elements: &[u64], set: u64) -> usize {
    elements
        .binary_search(&set)
        .expect("lattice is closed under its operations")
}

/// Adds every element whose sieve of restrictions into `set` covers.
fn closure(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
    offsets: &[usize],
    mut set: u64,
) -> u64 {
    loop {
        let mut grown = set;
        for c in 0..cat.n_objects() {
            for x in 0..a.size(c) {
                if grown & (1 << (offsets[c] + x)) != 0 {
                    continue;
                }
                let sieve: MorphSet = cat
                    .arrows_into(c)
                    .iter()
                    .filter(|&f| set & (1 << (offsets[cat.dom(f)] + a.act(f, x))) != 0)
                    .collect();
                if j.covers(c, sieve) {
                    grown |= 1 << (offsets[c] + x);
                }
            }
        }
        if grown == set {
            return set;
        }
        set = grown;
    }
}

/// Every subsheaf of the sheaf `a`, with meets and joins.
///
/// Subsheaves of a sheaf are its subpresheaves closed under covering
/// sieves; the join of two is the closure of their union.
pub fn subobjects(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
) -> Result<SubobjectLattice, SheafError> {
    is_sheaf(cat, j, a).map_err(SheafError::NotASheaf)?;
    let total = a.total_size();
    if total > 64 {
        return Err(SheafError::TooLarge(total));
    }
    let offsets = a.offsets();
    let mut below = vec![0u64; total];
    for c in 0..cat.n_objects() {
        for x in 0..a.size(c) {
            for f in cat.arrows_into(c) {
                below[offsets[c] + x] |= 1 << (offsets[cat.dom(f)] + a.act(f, x));
            }
        }
    }
    let universe = if total == 64 {
        u64::MAX
    } else {
        (1u64 << total) - 1
    };
    let elements: Vec<u64> = down_sets(universe, &below)
        .into_par_iter()
        .filter(|&s| closure(cat, j, a, &offsets, s) == s)
        .collect();
    debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
    Ok(SubobjectLattice { offsets, elements })
}

/// The subsheaf `i` of `a` as a sheaf in its own right, with its inclusion.
pub fn subobject_sheaf(
    cat: &FiniteCategory,
    a: &Presheaf,
    lattice: &SubobjectLattice,
    i: usize,
) -> (Presheaf, NatTransformation) {
    let keep: Vec<Vec<bool>> = (0..cat.n_objects())
        .map(|c| (0..a.size(c)).map(|x| lattice.contains(i, c, x)).collect())
        .collect();
    subpresheaf(cat, a, &keep)
}

pub fn is_atom(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
) -> Result<bool, SheafError> {
    Ok(subobjects(cat, j, a)?.len() == 2)
}

/// A pair of complementary proper subobjects, by lattice index.
pub fn decomposition(lattice: &SubobjectLattice) -> Option<(usize, usize)> {
    let e = lattice.elements();
    let (bottom, top) = (e[lattice.bottom()], lattice.top());
    (1..top)
        .flat_map(|b| (b + 1..top).map(move |c| (b, c)))
        .find(|&(b, c)| e[b] & e[c] == bottom && lattice.join(b, c) == top)
}

/// Not the initial object, and no decomposition into two proper summands.
pub fn is_indecomposable(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
) -> Result<bool, SheafError> {
    let lattice = subobjects(cat, j, a)?;
    Ok(lattice.len() > 1 && decomposition(&lattice).is_none())
}

/// `a` is not the join of its proper subobjects.
pub fn is_supercompact_object(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
) -> Result<bool, SheafError> {
    let lattice = subobjects(cat, j, a)?;
    let top = lattice.top();
    let union = lattice.elements()[..top].iter().fold(0, |acc, &e| acc | e);
    Ok(lattice.least_above(union) != top)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactVerdict {
    pub compact: bool,
    /// The subobject lattice is finite, so compactness holds for free.
    pub degenerate: bool,
}

pub fn is_compact_object(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    a: &Presheaf,
) -> Result<CompactVerdict, SheafError> {
    is_sheaf(cat, j, a).map_err(SheafError::NotASheaf)?;
    Ok(CompactVerdict {
        compact: true,
        degenerate: true,
    })
}

fn check_object(cat: &FiniteCategory, c: usize) -> Result<(), SheafError> {
    if c >= cat.n_objects() {
        return Err(SheafError::UnknownObject(format!("#{c}")));
    }
    Ok(())
}

/// Every covering sieve on `c` contains a finite family generating a covering sieve.
pub fn rep_is_compact(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<bool, SheafError> {
    check_object(cat, c)?;
    // a finite sieve is its own finite generating family
    Ok(j.covering(c)
        .iter()
        .all(|&s| j.covers(c, generated(cat, s))))
}

/// Every covering sieve on `c` contains a single arrow generating a covering sieve.
pub fn rep_is_supercompact(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<bool, SheafError> {
    check_object(cat, c)?;
    Ok(j.covering(c).iter().all(|&s| {
        s.iter()
            .any(|f| j.covers(c, generated(cat, MorphSet::singleton(f))))
    }))
}

/// The only covering sieve on `c` is the maximal one.
pub fn rep_is_irreducible(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<bool, SheafError> {
    check_object(cat, c)?;
    Ok(j.covering(c) == [cat.arrows_into(c)])
}

/// Is `p` a retract of a representable presheaf? Only meaningful in the
/// presheaf topos, so `j` must be trivial.
pub fn is_indecomposable_projective(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    p: &Presheaf,
) -> Result<Option<usize>, SheafError> {
    if *j != trivial_topology(cat) {
        return Err(SheafError::WrongTopology);
    }
    let identity = NatTransformation::identity(p);
    Ok((0..cat.n_objects()).find(|&c| {
        let y = yoneda(cat, c).expect("object in range");
        let sections = nat_transformations(cat, p, &y);
        if sections.is_empty() {
            return false;
        }
        let retractions = nat_transformations(cat, &y, p);
        sections
            .iter()
            .any(|s| retractions.iter().any(|r| s.then(r) == identity))
    }))
}

/// Outcome of a kernel-pair probe over maps between representable sheaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeVerdict {
    pub holds: bool,
    /// Only maps out of representable sheaves were probed.
    pub probe_restricted: bool,
    /// Domain object of the first probe whose kernel pair fails.
    pub failing_probe: Option<usize>,
}

fn probe(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
    base: fn(&FiniteCategory, &GrothendieckTopology, usize) -> Result<bool, SheafError>,
    apex_ok: &dyn Fn(&Presheaf) -> Result<bool, SheafError>,
) -> Result<ProbeVerdict, SheafError> {
    if !base(cat, j, c)? {
        return Ok(ProbeVerdict {
            holds: false,
            probe_restricted: true,
            failing_probe: None,
        });
    }
    let target = representable_sheaf(cat, j, c)?.sheaf;
    for d in 0..cat.n_objects() {
        if !base(cat, j, d)? {
            continue;
        }
        let source = representable_sheaf(cat, j, d)?.sheaf;
        for t in nat_transformations(cat, &source, &target) {
            if !apex_ok(&kernel_pair(cat, &source, &t).apex)? {
                return Ok(ProbeVerdict {
                    holds: false,
                    probe_restricted: true,
                    failing_probe: Some(d),
                });
            }
        }
    }
    Ok(ProbeVerdict {
        holds: true,
        probe_restricted: true,
        failing_probe: None,
    })
}

/// `l(c)` is compact and kernel pairs of maps into it from compact
/// representables have compact domains.
pub fn rep_is_coherent(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<ProbeVerdict, SheafError> {
    probe(cat, j, c, rep_is_compact, &|k| {
        Ok(is_compact_object(cat, j, k)?.compact)
    })
}

/// As [`rep_is_coherent`] with supercompactness in place of compactness.
pub fn rep_is_regular(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<ProbeVerdict, SheafError> {
    probe(cat, j, c, rep_is_supercompact, &|k| {
        is_supercompact_object(cat, j, k)
    })
}
