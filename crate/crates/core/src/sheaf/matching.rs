//! Matching families, amalgamation, and the sheaf condition.

use serde::{Deserialize, Serialize};

use super::Presheaf;
use crate::bits::MorphSet;
use crate::category::FiniteCategory;
use crate::sieve::principal;
use crate::topology::GrothendieckTopology;

/// Every matching family for `p` on the sieve `arrows`.
///
/// A family is listed as the elements chosen for the sieve's arrows in
/// ascending index order; families come out in lexicographic order.
pub fn matching_families(cat: &FiniteCategory, p: &Presheaf, arrows: MorphSet) -> Vec<Vec<usize>> {
    let list: Vec<usize> = arrows.iter().collect();
    // generators first, so most later choices are forced
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(principal(cat, list[k]).len()), k));
    let mut pos_of = vec![usize::MAX; cat.n_morphisms()];
    for (pos, &k) in order.iter().enumerate() {
        pos_of[list[k]] = pos;
    }
    // constraints x[f∘g] = P(g)(x[f]), filed under the later of f and f∘g
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); list.len()];
    for &f in &list {
        for g in cat.arrows_into(cat.dom(f)) {
            let fg = cat.comp(f, g);
            let at = pos_of[f].max(pos_of[fg]);
            checks[at].push((f, g, fg));
        }
    }
    let mut values = vec![usize::MAX; cat.n_morphisms()];
    let mut out = Vec::new();
    extend(cat, p, &list, &order, &checks, 0, &mut values, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    cat: &FiniteCategory,
    p: &Presheaf,
    list: &[usize],
    order: &[usize],
    checks: &[Vec<(usize, usize, usize)>],
    pos: usize,
    values: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == order.len() {
        out.push(list.iter().map(|&f| values[f]).collect());
        return;
    }
    let f = list[order[pos]];
    // a value forced by an earlier arrow, if any
    let forced = checks[pos]
        .iter()
        .find(|&&(h, _, hg)| hg == f && h != f)
        .map(|&(h, g, _)| p.act(g, values[h]));
    let candidates: Vec<usize> = match forced {
        Some(v) => vec![v],
        None => (0..p.size(cat.dom(f))).collect(),
    };
    for v in candidates {
        values[f] = v;
        if checks[pos]
            .iter()
            .all(|&(h, g, hg)| values[hg] == p.act(g, values[h]))
        {
            extend(cat, p, list, order, checks, pos + 1, values, out);
        }
    }
    values[f] = usize::MAX;
}

/// Elements of `P(c)` restricting to the given family on `arrows`.
pub fn amalgamations(p: &Presheaf, c: usize, arrows: MorphSet, family: &[usize]) -> Vec<usize> {
    (0..p.size(c))
        .filter(|&x| arrows.iter().zip(family).all(|(f, &y)| p.act(f, x) == y))
        .collect()
}

/// A covering sieve with a matching family lacking a unique amalgamation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafViolation {
    pub object: usize,
    pub sieve: MorphSet,
    pub family: Vec<usize>,
    pub amalgamations: usize,
}

pub fn is_sheaf(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    p: &Presheaf,
) -> Result<(), SheafViolation> {
    for c in 0..cat.n_objects() {
        for &s in j.covering(c) {
            if s == cat.arrows_into(c) {
                continue;
            }
            let families = matching_families(cat, p, s);
            for family in families {
                let n = amalgamations(p, c, s, &family).len();
                if n != 1 {
                    return Err(SheafViolation {
                        object: c,
                        sieve: s,
                        family,
                        amalgamations: n,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sheaf::yoneda;
    use crate::topology::{generated_topology, trivial_topology};

    fn brute_force_families(
        cat: &FiniteCategory,
        p: &Presheaf,
        arrows: MorphSet,
    ) -> Vec<Vec<usize>> {
        let list: Vec<usize> = arrows.iter().collect();
        let mut out = Vec::new();
        let mut cur = vec![0; list.len()];
        loop {
            let in_range = list
                .iter()
                .enumerate()
                .all(|(i, &f)| cur[i] < p.size(cat.dom(f)));
            let ok = in_range
                && list.iter().enumerate().all(|(i, &f)| {
                    cat.arrows_into(cat.dom(f)).iter().all(|g| {
                        let k = list.iter().position(|&h| h == cat.comp(f, g)).unwrap();
                        cur[k] == p.act(g, cur[i])
                    })
                });
            if ok {
                out.push(cur.clone());
            }
            // odometer
            let mut i = 0;
            loop {
                if i == list.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < p.size(cat.dom(list[i])).max(1) {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn families_match_brute_force() {
        for (name, cat) in catalog::named() {
            for c in 0..cat.n_objects() {
                for d in 0..cat.n_objects() {
                    let p = yoneda(&cat, d).unwrap();
                    for s in crate::sieve::sieves_on(&cat, c).unwrap() {
                        let mut brute = brute_force_families(&cat, &p, s.arrows);
                        brute.sort();
                        assert_eq!(matching_families(&cat, &p, s.arrows), brute, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn every_presheaf_is_a_trivial_sheaf() {
        let c = catalog::arrow();
        let j = trivial_topology(&c);
        for d in 0..2 {
            assert!(is_sheaf(&c, &j, &yoneda(&c, d).unwrap()).is_ok());
        }
    }

    #[test]
    fn yoneda_a_is_not_a_j2_sheaf() {
        let c = catalog::arrow();
        let f = c.morphism_index("f").unwrap();
        let j2 = generated_topology(&c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap();
        let v = is_sheaf(&c, &j2, &yoneda(&c, 0).unwrap()).unwrap_err();
        assert_eq!(v.object, 1);
        assert_eq!(v.amalgamations, 0);
        assert_eq!(
            matching_families(&c, &yoneda(&c, 0).unwrap(), MorphSet::singleton(f)).len(),
            1
        );

        // bijective restriction along f
        let p = Presheaf::new(&c, vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        assert!(is_sheaf(&c, &j2, &p).is_ok());
    }
}
