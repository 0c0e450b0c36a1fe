//! Sieves: right-closed sets of arrows into a fixed object.

use serde::{Deserialize, Serialize};

use crate::bits::{down_sets, MorphSet};
use crate::category::FiniteCategory;
use crate::topology::TopologyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sieve {
    pub base: usize,
    pub arrows: MorphSet,
}

impl Sieve {
    /// Checks codomains and right-closure.
    pub fn new(cat: &FiniteCategory, base: usize, arrows: MorphSet) -> Result<Self, TopologyError> {
        if base >= cat.n_objects() {
            return Err(TopologyError::UnknownObject(format!("#{base}")));
        }
        if let Some(f) = arrows.difference(cat.arrows_into(base)).first() {
            return Err(TopologyError::CodomainMismatch {
                arrow: cat.morphism_name(f).to_string(),
                base: cat.object_name(base).to_string(),
            });
        }
        if !is_right_closed(cat, arrows) {
            return Err(TopologyError::NotASieve {
                object: cat.object_name(base).to_string(),
            });
        }
        Ok(Sieve { base, arrows })
    }

    pub fn maximal(cat: &FiniteCategory, c: usize) -> Self {
        Sieve {
            base: c,
            arrows: cat.arrows_into(c),
        }
    }

    pub fn empty(c: usize) -> Self {
        Sieve {
            base: c,
            arrows: MorphSet::EMPTY,
        }
    }

    pub fn is_maximal(&self, cat: &FiniteCategory) -> bool {
        self.arrows == cat.arrows_into(self.base)
    }

    pub fn contains(&self, f: usize) -> bool {
        self.arrows.contains(f)
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// `{f∘h | cod h = dom f}`, the sieve generated by a single arrow.
pub fn principal(cat: &FiniteCategory, f: usize) -> MorphSet {
    cat.arrows_into(cat.dom(f))
        .iter()
        .map(|h| cat.comp(f, h))
        .collect()
}

pub fn is_right_closed(cat: &FiniteCategory, arrows: MorphSet) -> bool {
    arrows.iter().all(|f| principal(cat, f).is_subset(arrows))
}

/// All sieves on `c`, ascending by bitset value (so `∅` first).
pub fn sieves_on(cat: &FiniteCategory, c: usize) -> Result<Vec<Sieve>, TopologyError> {
    if c >= cat.n_objects() {
        return Err(TopologyError::UnknownObject(format!("#{c}")));
    }
    let below: Vec<u64> = (0..cat.n_morphisms())
        .map(|f| {
            if cat.cod(f) == c {
                principal(cat, f).0
            } else {
                0
            }
        })
        .collect();
    Ok(down_sets(cat.arrows_into(c).0, &below)
        .into_iter()
        .map(|bits| Sieve {
            base: c,
            arrows: MorphSet(bits),
        })
        .collect())
}

/// Smallest sieve on `c` containing `arrows`.
pub fn generate_sieve(
    cat: &FiniteCategory,
    c: usize,
    arrows: MorphSet,
) -> Result<Sieve, TopologyError> {
    if c >= cat.n_objects() {
        return Err(TopologyError::UnknownObject(format!("#{c}")));
    }
    if let Some(f) = arrows.difference(cat.arrows_into(c)).first() {
        return Err(TopologyError::CodomainMismatch {
            arrow: cat.morphism_name(f).to_string(),
            base: cat.object_name(c).to_string(),
        });
    }
    Ok(Sieve {
        base: c,
        arrows: generated(cat, arrows),
    })
}

/// Right-composition closure without codomain checks.
pub(crate) fn generated(cat: &FiniteCategory, arrows: MorphSet) -> MorphSet {
    arrows
        .iter()
        .fold(MorphSet::EMPTY, |acc, f| acc.union(principal(cat, f)))
}

/// `h*(S) = {g | h∘g ∈ S}`.
pub fn pullback_sieve(
    cat: &FiniteCategory,
    sieve: &Sieve,
    h: usize,
) -> Result<Sieve, TopologyError> {
    if cat.cod(h) != sieve.base {
        return Err(TopologyError::TypeMismatch(format!(
            "cannot pull a sieve on `{}` back along `{}`",
            cat.object_name(sieve.base),
            cat.morphism_name(h)
        )));
    }
    Ok(Sieve {
        base: cat.dom(h),
        arrows: pullback(cat, sieve.arrows, h),
    })
}

pub(crate) fn pullback(cat: &FiniteCategory, arrows: MorphSet, h: usize) -> MorphSet {
    cat.arrows_into(cat.dom(h))
        .iter()
        .filter(|&g| arrows.contains(cat.comp(h, g)))
        .collect()
}

/// Whether the full subcategory of the slice on the sieve's arrows is
/// connected. The empty sieve is not connected.
pub fn is_sieve_connected(cat: &FiniteCategory, sieve: &Sieve) -> bool {
    let arrows: Vec<usize> = sieve.arrows.iter().collect();
    let Some((&first, _)) = arrows.split_first() else {
        return false;
    };
    let mut reached = MorphSet::singleton(first);
    let mut frontier = vec![first];
    while let Some(f) = frontier.pop() {
        for &g in &arrows {
            if reached.contains(g) {
                continue;
            }
            // a slice morphism in either direction links f and g
            if principal(cat, f).contains(g) || principal(cat, g).contains(f) {
                reached.insert(g);
                frontier.push(g);
            }
        }
    }
    reached == sieve.arrows
}

/// Some arrow generating the whole sieve, if one exists.
pub fn single_generator(cat: &FiniteCategory, sieve: &Sieve) -> Option<usize> {
    sieve
        .arrows
        .iter()
        .find(|&f| principal(cat, f) == sieve.arrows)
}
