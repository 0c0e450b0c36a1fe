//! The plus construction and the associated sheaf.

use std::collections::HashMap;

use super::matching::matching_families;
use super::{NatTransformation, Presheaf};
use crate::category::FiniteCategory;
use crate::topology::GrothendieckTopology;

/// A presheaf with the canonical map into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sheafification {
    pub sheaf: Presheaf,
    pub unit: NatTransformation,
}

/// One application of the plus construction.
///
/// `P⁺(c)` is the colimit of matching families over the covering sieves of
/// `c` ordered by refinement. Covering sieves on `c` are closed under finite
/// intersection, so the smallest one is final in that diagram and every
/// equivalence class has exactly one representative there; elements are
/// those representatives, in lexicographic order.
pub fn plus(cat: &FiniteCategory, j: &GrothendieckTopology, p: &Presheaf) -> Sheafification {
    let smallest: Vec<_> = (0..cat.n_objects())
        .map(|c| j.smallest_covering(c))
        .collect();
    let families: Vec<Vec<Vec<usize>>> = (0..cat.n_objects())
        .map(|c| matching_families(cat, p, smallest[c]))
        .collect();
    let lookup: Vec<HashMap<&[usize], usize>> = families
        .iter()
        .map(|fs| {
            fs.iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect()
        })
        .collect();
    // position of each arrow within its object's smallest sieve
    let slot = |c: usize, f: usize| {
        smallest[c]
            .iter()
            .position(|g| g == f)
            .expect("arrow in sieve")
    };

    let actions = (0..cat.n_morphisms())
        .map(|h| {
            let (d, c) = (cat.dom(h), cat.cod(h));
            families[c]
                .iter()
                .map(|x| {
                    // (h·x)_g = x_{h∘g}; the smallest sieve on d lies inside h*(S_c)
                    let y: Vec<usize> = smallest[d]
                        .iter()
                        .map(|g| x[slot(c, cat.comp(h, g))])
                        .collect();
                    lookup[d][y.as_slice()]
                })
                .collect()
        })
        .collect();
    let unit = NatTransformation {
        components: (0..cat.n_objects())
            .map(|c| {
                (0..p.size(c))
                    .map(|x| {
                        let y: Vec<usize> = smallest[c].iter().map(|f| p.act(f, x)).collect();
                        lookup[c][y.as_slice()]
                    })
                    .collect()
            })
            .collect(),
    };
    let sheaf = Presheaf::new_unchecked(families.iter().map(Vec::len).collect(), actions);
    Sheafification { sheaf, unit }
}

/// `a(P) = P⁺⁺` with the composite unit `P → P⁺ → P⁺⁺`.
pub fn sheafify(cat: &FiniteCategory, j: &GrothendieckTopology, p: &Presheaf) -> Sheafification {
    let first = plus(cat, j, p);
    let second = plus(cat, j, &first.sheaf);
    Sheafification {
        unit: first.unit.then(&second.unit),
        sheaf: second.sheaf,
    }
}
