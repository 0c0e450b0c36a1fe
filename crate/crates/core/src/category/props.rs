//! Completeness-style predicates decided by exhaustive search.
//!
//! Every search here is over all candidate cones or factorizations, which is
//! fine for the small tables this crate targets.

use serde::{Deserialize, Serialize};

use super::FiniteCategory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub left: usize,
    pub right: usize,
    pub apex: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equalizer {
    pub f: usize,
    pub g: usize,
    pub inclusion: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "missing", rename_all = "snake_case")]
pub enum LimitFailure {
    Terminal,
    Product { left: usize, right: usize },
    Equalizer { f: usize, g: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianVerdict {
    pub cartesian: bool,
    pub terminal: Option<usize>,
    pub products: Vec<Product>,
    pub equalizers: Vec<Equalizer>,
    /// First missing limit in search order.
    pub failure: Option<LimitFailure>,
}

fn is_terminal(cat: &FiniteCategory, t: usize) -> bool {
    (0..cat.n_objects()).all(|z| cat.hom(z, t).len() == 1)
}

fn is_product(cat: &FiniteCategory, x: usize, y: usize, p: usize, p1: usize, p2: usize) -> bool {
    (0..cat.n_objects()).all(|z| {
        cat.hom(z, x).iter().all(|u| {
            cat.hom(z, y).iter().all(|v| {
                cat.hom(z, p)
                    .iter()
                    .filter(|&w| cat.comp(p1, w) == u && cat.comp(p2, w) == v)
                    .count()
                    == 1
            })
        })
    })
}

fn find_product(cat: &FiniteCategory, x: usize, y: usize) -> Option<Product> {
    (0..cat.n_objects()).find_map(|p| {
        cat.hom(p, x).iter().find_map(|p1| {
            cat.hom(p, y)
                .iter()
                .find(|&p2| is_product(cat, x, y, p, p1, p2))
                .map(|p2| Product {
                    left: x,
                    right: y,
                    apex: p,
                    first: p1,
                    second: p2,
                })
        })
    })
}

fn find_equalizer(cat: &FiniteCategory, f: usize, g: usize) -> Option<Equalizer> {
    let x = cat.dom(f);
    let equalizes = |h: usize| cat.comp(f, h) == cat.comp(g, h);
    cat.arrows_into(x)
        .iter()
        .filter(|&e| equalizes(e))
        .find_map(|e| {
            let apex = cat.dom(e);
            let universal = cat
                .arrows_into(x)
                .iter()
                .filter(|&h| equalizes(h))
                .all(|h| {
                    cat.hom(cat.dom(h), apex)
                        .iter()
                        .filter(|&w| cat.comp(e, w) == h)
                        .count()
                        == 1
                });
            universal.then_some(Equalizer { f, g, inclusion: e })
        })
}

/// Terminal object, binary products and equalizers.
pub fn is_cartesian(cat: &FiniteCategory) -> CartesianVerdict {
    let terminal = (0..cat.n_objects()).find(|&t| is_terminal(cat, t));
    let mut failure = terminal.is_none().then_some(LimitFailure::Terminal);
    let mut products = Vec::new();
    for x in 0..cat.n_objects() {
        for y in x..cat.n_objects() {
            match find_product(cat, x, y) {
                Some(p) => products.push(p),
                None => {
                    failure.get_or_insert(LimitFailure::Product { left: x, right: y });
                }
            }
        }
    }
    let mut equalizers = Vec::new();
    for f in 0..cat.n_morphisms() {
        for g in f..cat.n_morphisms() {
            if cat.dom(f) != cat.dom(g) || cat.cod(f) != cat.cod(g) {
                continue;
            }
            match find_equalizer(cat, f, g) {
                Some(e) => equalizers.push(e),
                None => {
                    failure.get_or_insert(LimitFailure::Equalizer { f, g });
                }
            }
        }
    }
    CartesianVerdict {
        cartesian: failure.is_none(),
        terminal,
        products,
        equalizers,
        failure,
    }
}

/// A cospan `f: a → c ← b :g` with no commutative square over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OreCounterexample {
    pub f: usize,
    pub g: usize,
}

/// Right Ore condition: every cospan completes to a commutative square.
pub fn has_right_ore(cat: &FiniteCategory) -> Result<(), OreCounterexample> {
    for c in 0..cat.n_objects() {
        let into = cat.arrows_into(c);
        for f in into {
            for g in into {
                if g < f {
                    continue;
                }
                let (a, b) = (cat.dom(f), cat.dom(g));
                let completes = (0..cat.n_objects()).any(|d| {
                    cat.hom(d, a).iter().any(|u| {
                        cat.hom(d, b)
                            .iter()
                            .any(|v| cat.comp(f, u) == cat.comp(g, v))
                    })
                });
                if !completes {
                    return Err(OreCounterexample { f, g });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsplitIdempotent {
    pub idempotent: usize,
}

/// Every idempotent `e` factors as `s∘t` with `t∘s` an identity.
pub fn is_cauchy_complete(cat: &FiniteCategory) -> Result<(), UnsplitIdempotent> {
    for e in 0..cat.n_morphisms() {
        let c = cat.dom(e);
        if cat.cod(e) != c || cat.is_identity(e) || cat.comp(e, e) != e {
            continue;
        }
        let splits = (0..cat.n_objects()).any(|d| {
            cat.hom(d, c).iter().any(|s| {
                cat.hom(c, d)
                    .iter()
                    .any(|t| cat.comp(s, t) == e && cat.comp(t, s) == cat.identity(d))
            })
        });
        if !splits {
            return Err(UnsplitIdempotent { idempotent: e });
        }
    }
    Ok(())
}

/// Zig-zag components, each sorted, ordered by smallest member.
pub fn connected_components(cat: &FiniteCategory) -> Vec<Vec<usize>> {
    let n = cat.n_objects();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in cat.morphisms() {
        let (a, b) = (find(&mut parent, m.dom), find(&mut parent, m.cod));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(x);
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cartesian_examples() {
        assert!(is_cartesian(&catalog::term()).cartesian);
        let arrow = catalog::arrow();
        let v = is_cartesian(&arrow);
        assert!(v.cartesian);
        assert_eq!(v.terminal, arrow.object_index("b"));
        let pair = is_cartesian(&catalog::pair());
        assert!(!pair.cartesian);
        let p = catalog::pair();
        let (f, g) = (
            p.morphism_index("f").unwrap(),
            p.morphism_index("g").unwrap(),
        );
        assert!(!pair.equalizers.iter().any(|e| e.f == f && e.g == g));
        assert!(!is_cartesian(&FiniteCategory::empty()).cartesian);
        assert!(is_cartesian(&catalog::square()).cartesian);
        assert!(!is_cartesian(&catalog::v_poset()).cartesian);
    }

    #[test]
    fn right_ore_examples() {
        assert!(has_right_ore(&catalog::z2()).is_ok());
        assert!(has_right_ore(&catalog::arrow()).is_ok());
        let p = catalog::pair();
        let ce = has_right_ore(&p).unwrap_err();
        assert_eq!((p.morphism_name(ce.f), p.morphism_name(ce.g)), ("f", "g"));
        assert!(has_right_ore(&catalog::v_poset()).is_err());
    }

    #[test]
    fn cauchy_examples() {
        assert!(is_cauchy_complete(&catalog::arrow()).is_ok());
        assert!(is_cauchy_complete(&catalog::z2()).is_ok());
        let idem = catalog::idem();
        assert_eq!(
            is_cauchy_complete(&idem).unwrap_err().idempotent,
            idem.morphism_index("e").unwrap()
        );
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&catalog::arrow()), vec![vec![0, 1]]);
        assert_eq!(
            connected_components(&catalog::discrete2()),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn cartesian_implies_cauchy_complete_on_named() {
        for (name, c) in catalog::named() {
            if is_cartesian(&c).cartesian {
                assert!(is_cauchy_complete(&c).is_ok(), "{name}");
            }
        }
    }
}
