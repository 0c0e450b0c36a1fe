//! Brute-force reference implementations, written straight from the
//! definitions and sharing no code with the engine beyond the category tables.

use finsite::{FiniteCategory, GrothendieckTopology, MorphSet, Presheaf, Subcategory};

pub fn arrows_into(cat: &FiniteCategory, c: usize) -> Vec<usize> {
    (0..cat.n_morphisms())
        .filter(|&f| cat.cod(f) == c)
        .collect()
}

/// `{ f∘g }` over `f ∈ arrows` and every composable `g`.
pub fn generate(cat: &FiniteCategory, arrows: u64) -> u64 {
    let mut out = 0u64;
    for f in (0..cat.n_morphisms()).filter(|&f| arrows >> f & 1 == 1) {
        for g in (0..cat.n_morphisms()).filter(|&g| cat.cod(g) == cat.dom(f)) {
            out |= 1 << cat.comp(f, g);
        }
    }
    out
}

/// Every subset of the arrows into `c` closed under precomposition.
pub fn sieves(cat: &FiniteCategory, c: usize) -> Vec<u64> {
    let into = arrows_into(cat, c);
    (0..1u64 << into.len())
        .map(|mask| {
            into.iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .fold(0u64, |s, (_, &f)| s | 1 << f)
        })
        .filter(|&s| generate(cat, s) == s)
        .collect()
}

pub fn maximal(cat: &FiniteCategory, c: usize) -> u64 {
    arrows_into(cat, c).iter().fold(0, |s, &f| s | 1 << f)
}

/// `h*(s) = { g : h∘g ∈ s }`.
pub fn pullback(cat: &FiniteCategory, s: u64, h: usize) -> u64 {
    arrows_into(cat, cat.dom(h))
        .into_iter()
        .filter(|&g| s >> cat.comp(h, g) & 1 == 1)
        .fold(0, |acc, g| acc | 1 << g)
}

/// The three axioms, checked literally on an assignment of sieve sets.
pub fn is_topology(cat: &FiniteCategory, covering: &[Vec<u64>]) -> bool {
    let covers = |c: usize, s: u64| covering[c].contains(&s);
    let n = cat.n_objects();
    let all: Vec<Vec<u64>> = (0..n).map(|c| sieves(cat, c)).collect();
    (0..n).all(|c| covers(c, maximal(cat, c)))
        && (0..n).all(|c| {
            covering[c].iter().all(|&s| {
                arrows_into(cat, c)
                    .into_iter()
                    .all(|h| covers(cat.dom(h), pullback(cat, s, h)))
            })
        })
        && (0..n).all(|c| {
            covering[c].iter().all(|&s| {
                all[c].iter().all(|&r| {
                    let locally = (0..cat.n_morphisms())
                        .filter(|&f| s >> f & 1 == 1)
                        .all(|f| covers(cat.dom(f), pullback(cat, r, f)));
                    !locally || covers(c, r)
                })
            })
        })
}

/// Every assignment containing the maximal sieves, as sorted sieve lists.
pub fn candidates(cat: &FiniteCategory) -> Vec<Vec<Vec<u64>>> {
    let n = cat.n_objects();
    let optional: Vec<Vec<u64>> = (0..n)
        .map(|c| {
            sieves(cat, c)
                .into_iter()
                .filter(|&s| s != maximal(cat, c))
                .collect()
        })
        .collect();
    let total: usize = optional.iter().map(Vec::len).sum();
    (0..1u64 << total)
        .map(|mask| {
            let mut bit = 0;
            (0..n)
                .map(|c| {
                    let mut chosen = vec![maximal(cat, c)];
                    for &s in &optional[c] {
                        if mask >> bit & 1 == 1 {
                            chosen.push(s);
                        }
                        bit += 1;
                    }
                    chosen.sort_unstable();
                    chosen
                })
                .collect()
        })
        .collect()
}

pub fn covering_bits(j: &GrothendieckTopology) -> Vec<Vec<u64>> {
    (0..j.n_objects())
        .map(|c| {
            let mut v: Vec<u64> = j.covering(c).iter().map(|s| s.0).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

pub fn to_topology(covering: &[Vec<u64>]) -> GrothendieckTopology {
    GrothendieckTopology::from_covering(
        covering
            .iter()
            .map(|v| v.iter().map(|&s| MorphSet(s)).collect())
            .collect(),
    )
}

/// Both density conditions, read off the definition.
pub fn is_dense(cat: &FiniteCategory, j: &GrothendieckTopology, sub: &Subcategory) -> bool {
    let covers = |c: usize, s: u64| j.covers(c, MorphSet(s));
    let condition_i = (0..cat.n_objects()).all(|c| {
        let from_sub = arrows_into(cat, c)
            .into_iter()
            .filter(|&g| sub.contains_object(cat.dom(g)))
            .fold(0, |s, g| s | 1 << g);
        covers(c, generate(cat, from_sub))
    });
    let condition_ii = (0..cat.n_morphisms())
        .filter(|&f| sub.contains_object(cat.cod(f)))
        .all(|f| {
            let c = cat.dom(f);
            let factoring = arrows_into(cat, c)
                .into_iter()
                .filter(|&g| sub.contains_morphism(cat.comp(f, g)))
                .fold(0, |s, g| s | 1 << g);
            covers(c, generate(cat, factoring))
        });
    condition_i && condition_ii
}

/// Every matching family on every covering sieve has exactly one
/// amalgamation. Families are built arrow by arrow, pruning on the matching
/// condition against already-chosen members.
pub fn is_sheaf(cat: &FiniteCategory, j: &GrothendieckTopology, p: &Presheaf) -> bool {
    (0..cat.n_objects()).all(|c| {
        j.covering(c).iter().all(|s| {
            let members: Vec<usize> = s.iter().collect();
            let mut family = vec![usize::MAX; cat.n_morphisms()];
            every_family_amalgamates_once(cat, p, c, &members, 0, &mut family)
        })
    })
}

fn every_family_amalgamates_once(
    cat: &FiniteCategory,
    p: &Presheaf,
    c: usize,
    members: &[usize],
    k: usize,
    family: &mut Vec<usize>,
) -> bool {
    if k == members.len() {
        let amalgamations = (0..p.size(c))
            .filter(|&x| members.iter().all(|&f| p.act(f, x) == family[f]))
            .count();
        return amalgamations == 1;
    }
    let f = members[k];
    for x in 0..p.size(cat.dom(f)) {
        family[f] = x;
        // x_f restricted along g must equal x_{f∘g}, for every pair already chosen
        let consistent = members[..=k].iter().all(|&a| {
            (0..cat.n_morphisms())
                .filter(|&g| cat.cod(g) == cat.dom(a))
                .all(|g| {
                    let b = cat.comp(a, g);
                    family[b] == usize::MAX || p.act(g, family[a]) == family[b]
                })
        });
        if consistent && !every_family_amalgamates_once(cat, p, c, members, k + 1, family) {
            family[f] = usize::MAX;
            return false;
        }
    }
    family[f] = usize::MAX;
    true
}
