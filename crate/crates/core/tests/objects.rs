mod common;

use common::{entries, presheaf};
use finsite::classify::classify_report;
use finsite::objects::{decomposition, is_supercompact_object, subobjects};
use finsite::sheaf::sheafify;
use finsite::{FiniteCategory, GrothendieckTopology, MorphSet, Presheaf};
use proptest::prelude::*;

fn offsets(p: &Presheaf) -> Vec<usize> {
    p.sizes()
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}

/// Subsets of the disjoint union that are closed under the actions and
/// contain every element whose pulled-back sieve into them covers.
fn brute_subsheaves(cat: &FiniteCategory, j: &GrothendieckTopology, a: &Presheaf) -> Vec<u64> {
    let off = offsets(a);
    let total = a.total_size();
    let bit = |c: usize, x: usize| 1u64 << (off[c] + x);
    (0..1u64 << total)
        .filter(|&s| {
            (0..cat.n_objects()).all(|c| {
                (0..a.size(c)).all(|x| {
                    let into: MorphSet = cat
                        .arrows_into(c)
                        .iter()
                        .filter(|&f| s & bit(cat.dom(f), a.act(f, x)) != 0)
                        .collect();
                    let inside = s & bit(c, x) != 0;
                    // inside ⇒ sieve maximal; covering sieve ⇒ inside
                    (!inside || into == cat.arrows_into(c)) && (inside || !j.covers(c, into))
                })
            })
        })
        .collect()
}

fn small_sheaf(which: usize, t: usize, seed: u64) -> Option<(usize, usize, Presheaf)> {
    let e = &entries()[which % entries().len()];
    let t = t % e.lattice.len();
    let a = sheafify(&e.cat, e.lattice.get(t), &presheaf(&e.cat, seed, 2)).sheaf;
    (a.total_size() <= 12).then_some((which % entries().len(), t, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subsheaves_match_brute_force(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>()) {
        if let Some((i, t, a)) = small_sheaf(which, t, seed) {
            let e = &entries()[i];
            let j = e.lattice.get(t);
            let lattice = subobjects(&e.cat, j, &a).unwrap();
            let want = brute_subsheaves(&e.cat, j, &a);
            prop_assert_eq!(lattice.elements(), want.as_slice());
        }
    }

    #[test]
    fn subobjects_form_a_distributive_lattice(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>(), picks in any::<[usize; 3]>()) {
        if let Some((i, t, a)) = small_sheaf(which, t, seed) {
            let e = &entries()[i];
            let l = subobjects(&e.cat, e.lattice.get(t), &a).unwrap();
            let [x, y, z] = picks.map(|p| p % l.len());
            prop_assert_eq!(l.meet(x, y), l.meet(y, x));
            prop_assert_eq!(l.join(x, y), l.join(y, x));
            prop_assert_eq!(l.join(x, l.meet(x, y)), x);
            prop_assert_eq!(l.meet(x, l.join(x, y)), x);
            prop_assert_eq!(l.meet(x, l.join(y, z)), l.join(l.meet(x, y), l.meet(x, z)));
            prop_assert!(l.le(l.bottom(), x) && l.le(x, l.top()));
            prop_assert!(l.le(x, l.join(x, y)) && l.le(l.meet(x, y), y));
        }
    }

    #[test]
    fn supercompact_and_decomposition_match_subset_search(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>()) {
        if let Some((i, t, a)) = small_sheaf(which, t, seed) {
            let e = &entries()[i];
            let j = e.lattice.get(t);
            let l = subobjects(&e.cat, j, &a).unwrap();
            let top = l.top();
            if l.len() <= 14 {
                let proper: Vec<usize> = (0..l.len()).filter(|&k| k != top).collect();
                let covered = (0..1u32 << proper.len()).any(|mask| {
                    let union = proper.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).fold(0, |acc, (_, &k)| acc | l.elements()[k]);
                    l.least_above(union) == top
                });
                prop_assert_eq!(is_supercompact_object(&e.cat, j, &a).unwrap(), l.len() > 1 && !covered);
            }
            let complemented = (0..l.len()).any(|b| b != l.bottom() && b != top
                && (0..l.len()).any(|c| c != l.bottom() && c != top && l.meet(b, c) == l.bottom() && l.join(b, c) == top));
            prop_assert_eq!(decomposition(&l).is_some(), complemented);
        }
    }
}

#[test]
fn classification_is_independent_of_thread_count() {
    let run = |threads: usize| -> Vec<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            entries()
                .iter()
                .flat_map(|e| e.lattice.elements().iter().map(move |j| (e, j)))
                .map(|(e, j)| {
                    serde_json::to_string(&classify_report(&e.name, &e.cat, j).unwrap()).unwrap()
                })
                .collect()
        })
    };
    assert_eq!(run(1), run(4));
}
