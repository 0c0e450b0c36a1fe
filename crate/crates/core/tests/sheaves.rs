mod common;

use std::collections::HashMap;

use common::{entries, presheaf};
use finsite::sheaf::{find_isomorphism, hom_count, is_sheaf, plus, product, sheafify, yoneda};
use finsite::{FiniteCategory, GrothendieckTopology, MorphSet, Presheaf};
use proptest::prelude::*;

/// Skip brute-force enumerations with more assignments than this.
const BUDGET: usize = 20_000;

/// Every matching family on `s`, as a map from arrow to element, by
/// filtering the full product.
fn families(cat: &FiniteCategory, p: &Presheaf, s: MorphSet) -> Option<Vec<HashMap<usize, usize>>> {
    let arrows: Vec<usize> = s.iter().collect();
    let total = arrows
        .iter()
        .try_fold(1usize, |acc, &f| acc.checked_mul(p.size(cat.dom(f))))?;
    if total > BUDGET {
        return None;
    }
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut x = HashMap::new();
        for &f in &arrows {
            let n = p.size(cat.dom(f));
            x.insert(f, code % n);
            code /= n;
        }
        let matching = arrows.iter().all(|&f| {
            cat.arrows_into(cat.dom(f))
                .iter()
                .all(|g| x[&cat.comp(f, g)] == p.act(g, x[&f]))
        });
        if matching {
            out.push(x);
        }
    }
    Some(out)
}

fn brute_is_sheaf(cat: &FiniteCategory, j: &GrothendieckTopology, p: &Presheaf) -> Option<bool> {
    for c in 0..cat.n_objects() {
        for &s in j.covering(c) {
            for x in families(cat, p, s)? {
                let glue = (0..p.size(c))
                    .filter(|&e| s.iter().all(|f| p.act(f, e) == x[&f]))
                    .count();
                if glue != 1 {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// The plus construction taken literally: pairs (covering sieve, matching
/// family), identified when they agree on some common covering sieve.
fn literal_plus(cat: &FiniteCategory, j: &GrothendieckTopology, p: &Presheaf) -> Option<Presheaf> {
    let mut pairs: Vec<Vec<(MorphSet, HashMap<usize, usize>)>> = Vec::new();
    for c in 0..cat.n_objects() {
        let mut here = Vec::new();
        for &s in j.covering(c) {
            for x in families(cat, p, s)? {
                here.push((s, x));
            }
        }
        pairs.push(here);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut sizes = Vec::new();
    for (c, here) in pairs.iter().enumerate() {
        let mut parent: Vec<usize> = (0..here.len()).collect();
        for a in 0..here.len() {
            for b in a + 1..here.len() {
                let (s, x) = &here[a];
                let (t, y) = &here[b];
                let agree = j
                    .covering(c)
                    .iter()
                    .any(|&r| r.is_subset(s.intersection(*t)) && r.iter().all(|f| x[&f] == y[&f]));
                if agree {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let mut label = HashMap::new();
        let class: Vec<usize> = (0..here.len())
            .map(|i| {
                let r = find(&mut parent, i);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect();
        sizes.push(label.len());
        classes.push(class);
    }
    let actions = (0..cat.n_morphisms())
        .map(|h| {
            let (d, c) = (cat.dom(h), cat.cod(h));
            let mut table = vec![usize::MAX; sizes[c]];
            for (i, (s, x)) in pairs[c].iter().enumerate() {
                let pulled: MorphSet = cat
                    .arrows_into(d)
                    .iter()
                    .filter(|&g| s.contains(cat.comp(h, g)))
                    .collect();
                let moved: HashMap<usize, usize> =
                    pulled.iter().map(|g| (g, x[&cat.comp(h, g)])).collect();
                let k = pairs[d]
                    .iter()
                    .position(|(t, y)| *t == pulled && *y == moved)
                    .expect("pullback covers");
                table[classes[c][i]] = classes[d][k];
            }
            table
        })
        .collect();
    Some(Presheaf::new(cat, sizes, actions).expect("literal plus is a presheaf"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn plus_matches_the_literal_colimit(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>()) {
        let e = &entries()[which % entries().len()];
        let j = e.lattice.get(t % e.lattice.len());
        let p = presheaf(&e.cat, seed, 2);
        if let Some(oracle) = literal_plus(&e.cat, j, &p) {
            let got = plus(&e.cat, j, &p).sheaf;
            prop_assert_eq!(got.sizes(), oracle.sizes());
            prop_assert!(find_isomorphism(&e.cat, &got, &oracle).is_some());
        }
    }

    #[test]
    fn sheaf_test_matches_brute_force(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>()) {
        let e = &entries()[which % entries().len()];
        let j = e.lattice.get(t % e.lattice.len());
        let p = presheaf(&e.cat, seed, 3);
        if let Some(want) = brute_is_sheaf(&e.cat, j, &p) {
            prop_assert_eq!(is_sheaf(&e.cat, j, &p).is_ok(), want);
        }
    }

    #[test]
    fn sheafification_is_idempotent(which in any::<usize>(), t in any::<usize>(), seed in any::<u64>()) {
        let e = &entries()[which % entries().len()];
        let j = e.lattice.get(t % e.lattice.len());
        let p = presheaf(&e.cat, seed, 3);
        let a = sheafify(&e.cat, j, &p);
        prop_assert!(is_sheaf(&e.cat, j, &a.sheaf).is_ok());
        let again = sheafify(&e.cat, j, &a.sheaf);
        prop_assert!(again.unit.is_bijective(&again.sheaf));
        if is_sheaf(&e.cat, j, &p).is_ok() {
            prop_assert!(a.unit.is_bijective(&a.sheaf));
        }
    }

    #[test]
    fn yoneda_counts_elements(which in any::<usize>(), obj in any::<usize>(), seed in any::<u64>()) {
        let e = &entries()[which % entries().len()];
        let c = obj % e.cat.n_objects();
        let p = presheaf(&e.cat, seed, 3);
        prop_assert_eq!(hom_count(&e.cat, &yoneda(&e.cat, c).unwrap(), &p), p.size(c));
    }

    #[test]
    fn product_is_universal_on_counts(which in any::<usize>(), seeds in any::<[u64; 3]>()) {
        let e = &entries()[which % entries().len()];
        let [x, p, q] = seeds.map(|s| presheaf(&e.cat, s, 2));
        let pq = product(&e.cat, &p, &q).apex;
        prop_assert_eq!(
            hom_count(&e.cat, &x, &pq),
            hom_count(&e.cat, &x, &p) * hom_count(&e.cat, &x, &q)
        );
    }
}

#[test]
fn literal_plus_agrees_on_every_corpus_site() {
    let (mut checked, mut total) = (0, 0);
    for e in entries() {
        for (t, j) in e.lattice.elements().iter().enumerate() {
            total += 1;
            let p = presheaf(&e.cat, t as u64, 2);
            if let Some(oracle) = literal_plus(&e.cat, j, &p) {
                checked += 1;
                let got = plus(&e.cat, j, &p).sheaf;
                assert!(
                    find_isomorphism(&e.cat, &got, &oracle).is_some(),
                    "{} topology {t}",
                    e.name
                );
            }
        }
    }
    eprintln!("literal plus checked on {checked} of {total} sites");
    assert!(checked * 4 >= total * 3);
}
