#![allow(dead_code)]

use std::sync::OnceLock;

use finsite::io::{corpus_categories, random_presheaf, CorpusBounds};
use finsite::{enumerate_topologies, FiniteCategory, MorphSet, Presheaf, TopologyLattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Entry {
    pub name: String,
    pub cat: FiniteCategory,
    pub lattice: TopologyLattice,
}

/// The seed-0 corpus categories with their full topology lattices.
pub fn entries() -> &'static [Entry] {
    static ENTRIES: OnceLock<Vec<Entry>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        corpus_categories(0, &CorpusBounds::default())
            .into_iter()
            .map(|(name, cat)| {
                let lattice =
                    enumerate_topologies(&cat, 1 << 16).expect("corpus lattices are small");
                Entry { name, cat, lattice }
            })
            .collect()
    })
}

pub fn presheaf(cat: &FiniteCategory, seed: u64, max_size: usize) -> Presheaf {
    random_presheaf(cat, &mut ChaCha8Rng::seed_from_u64(seed), max_size)
}

/// Every subset of the arrows into `c` that is closed under precomposition.
pub fn brute_sieves(cat: &FiniteCategory, c: usize) -> Vec<MorphSet> {
    let into: Vec<usize> = cat.arrows_into(c).iter().collect();
    (0..1u64 << into.len())
        .map(|mask| {
            into.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect::<MorphSet>()
        })
        .filter(|s| {
            s.iter().all(|f| {
                cat.arrows_into(cat.dom(f))
                    .iter()
                    .all(|g| s.contains(cat.comp(f, g)))
            })
        })
        .collect()
}
