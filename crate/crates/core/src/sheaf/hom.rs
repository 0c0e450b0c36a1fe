//! Exhaustive enumeration of natural transformations between finite presheaves.

use serde::{Deserialize, Serialize};

use super::{NatTransformation, Presheaf};
use crate::bits::MorphSet;
use crate::category::FiniteCategory;
use crate::topology::GrothendieckTopology;

const UNSET: usize = usize::MAX;

struct Search<'a> {
    cat: &'a FiniteCategory,
    p: &'a Presheaf,
    q: &'a Presheaf,
    /// elements of `p` in decision order
    order: Vec<(usize, usize)>,
    values: Vec<Vec<usize>>,
    /// `used[c][y]`: how many elements of `p(c)` map to `y` (bijective mode only)
    used: Option<Vec<Vec<usize>>>,
}

impl Search<'_> {
    /// Sets `t_c(x) = v` and everything naturality forces from it, recording
    /// the assignments made. Returns false on a clash.
    fn assign(&mut self, c: usize, x: usize, v: usize, trail: &mut Vec<(usize, usize)>) -> bool {
        if !self.set(c, x, v, trail) {
            return false;
        }
        for f in self.cat.arrows_into(c) {
            let a = self.cat.dom(f);
            let (y, w) = (self.p.act(f, x), self.q.act(f, v));
            match self.values[a][y] {
                UNSET => {
                    if !self.set(a, y, w, trail) {
                        return false;
                    }
                }
                old if old != w => return false,
                _ => {}
            }
        }
        true
    }

    fn set(&mut self, c: usize, x: usize, v: usize, trail: &mut Vec<(usize, usize)>) -> bool {
        if let Some(used) = &mut self.used {
            if used[c][v] > 0 {
                return false;
            }
            used[c][v] += 1;
        }
        self.values[c][x] = v;
        trail.push((c, x));
        true
    }

    fn undo(&mut self, trail: &[(usize, usize)]) {
        for &(c, x) in trail.iter().rev() {
            if let Some(used) = &mut self.used {
                used[c][self.values[c][x]] -= 1;
            }
            self.values[c][x] = UNSET;
        }
    }

    /// Calls `visit` on every completed assignment; stops when it returns false.
    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        let Some(&(c, x)) = self.order.get(pos) else {
            return visit(&self.values);
        };
        if self.values[c][x] != UNSET {
            return self.run(pos + 1, visit);
        }
        for v in 0..self.q.size(c) {
            let mut trail = Vec::new();
            let ok = self.assign(c, x, v, &mut trail);
            let keep_going = !ok || self.run(pos + 1, visit);
            self.undo(&trail);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

fn search<'a>(
    cat: &'a FiniteCategory,
    p: &'a Presheaf,
    q: &'a Presheaf,
    bijective: bool,
) -> Search<'a> {
    // objects with many incoming arrows first: their choices force the most
    let mut objects: Vec<usize> = (0..cat.n_objects()).collect();
    objects.sort_by_key(|&c| (std::cmp::Reverse(cat.arrows_into(c).len()), c));
    let order = objects
        .iter()
        .flat_map(|&c| (0..p.size(c)).map(move |x| (c, x)))
        .collect();
    Search {
        cat,
        p,
        q,
        order,
        values: p.sizes().iter().map(|&n| vec![UNSET; n]).collect(),
        used: bijective.then(|| q.sizes().iter().map(|&n| vec![0; n]).collect()),
    }
}

/// Every natural transformation `p → q`, in lexicographic order of components.
pub fn nat_transformations(
    cat: &FiniteCategory,
    p: &Presheaf,
    q: &Presheaf,
) -> Vec<NatTransformation> {
    let mut out = Vec::new();
    search(cat, p, q, false).run(0, &mut |v| {
        out.push(NatTransformation {
            components: v.to_vec(),
        });
        true
    });
    out.sort();
    out
}

pub fn hom_count(cat: &FiniteCategory, p: &Presheaf, q: &Presheaf) -> usize {
    let mut n = 0;
    search(cat, p, q, false).run(0, &mut |_| {
        n += 1;
        true
    });
    n
}

/// Some natural isomorphism `p → q`, if one exists.
pub fn find_isomorphism(
    cat: &FiniteCategory,
    p: &Presheaf,
    q: &Presheaf,
) -> Option<NatTransformation> {
    if p.sizes() != q.sizes() {
        return None;
    }
    let mut found = None;
    search(cat, p, q, true).run(0, &mut |v| {
        found = Some(NatTransformation {
            components: v.to_vec(),
        });
        false
    });
    found
}

/// Mono/epi/iso status of a map between sheaves, computed in the sheaf category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapKind {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
}

/// Monos are componentwise injective; epis are the locally surjective maps:
/// for every `y ∈ q(c)` the sieve of arrows pulling `y` into the image covers.
pub fn classify_map(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    p: &Presheaf,
    q: &Presheaf,
    t: &NatTransformation,
) -> MapKind {
    let mono = t.components.iter().all(|comp| {
        let mut sorted = comp.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    });
    let image: Vec<Vec<bool>> = (0..cat.n_objects())
        .map(|c| {
            let mut hit = vec![false; q.size(c)];
            for x in 0..p.size(c) {
                hit[t.apply(c, x)] = true;
            }
            hit
        })
        .collect();
    let epi = (0..cat.n_objects()).all(|c| {
        (0..q.size(c)).all(|y| {
            let sieve: MorphSet = cat
                .arrows_into(c)
                .iter()
                .filter(|&f| image[cat.dom(f)][q.act(f, y)])
                .collect();
            j.covers(c, sieve)
        })
    });
    MapKind {
        mono,
        epi,
        iso: mono && epi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sheaf::yoneda;
    use crate::topology::{generated_topology, trivial_topology};

    fn brute_force_count(cat: &FiniteCategory, p: &Presheaf, q: &Presheaf) -> usize {
        // every family of component functions, filtered by naturality
        let slots: Vec<(usize, usize)> = (0..cat.n_objects())
            .flat_map(|c| (0..p.size(c)).map(move |x| (c, x)))
            .collect();
        if slots.iter().any(|&(c, _)| q.size(c) == 0) {
            return 0;
        }
        let mut digits = vec![0; slots.len()];
        let mut count = 0;
        loop {
            let mut comps: Vec<Vec<usize>> = p.sizes().iter().map(|&n| vec![0; n]).collect();
            for (&(c, x), &d) in slots.iter().zip(&digits) {
                comps[c][x] = d;
            }
            let t = NatTransformation { components: comps };
            if t.first_unnatural(cat, p, q).is_none() {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == slots.len() {
                    return count;
                }
                digits[i] += 1;
                if digits[i] < q.size(slots[i].0) {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn yoneda_lemma_counts() {
        for (name, cat) in catalog::named() {
            for c in 0..cat.n_objects() {
                let y = yoneda(&cat, c).unwrap();
                for d in 0..cat.n_objects() {
                    let p = yoneda(&cat, d).unwrap();
                    assert_eq!(hom_count(&cat, &y, &p), p.size(c), "{name}");
                    assert_eq!(
                        hom_count(&cat, &y, &p),
                        brute_force_count(&cat, &y, &p),
                        "{name}"
                    );
                }
            }
        }
    }

    #[test]
    fn small_hom_sets() {
        let term = catalog::term();
        let one = Presheaf::terminal(&term);
        assert_eq!(nat_transformations(&term, &one, &one).len(), 1);

        let z2 = catalog::z2();
        let reg = yoneda(&z2, 0).unwrap();
        let homs = nat_transformations(&z2, &reg, &reg);
        assert_eq!(homs.len(), 2);
        assert!(homs
            .iter()
            .all(|t| find_isomorphism(&z2, &reg, &reg).is_some() && t.is_bijective(&reg)));
        assert_eq!(hom_count(&z2, &Presheaf::constant(&z2, 2), &reg), 0);
        assert_eq!(
            find_isomorphism(&z2, &Presheaf::constant(&z2, 2), &reg),
            None
        );
    }

    #[test]
    fn maps_into_empty_and_from_empty() {
        let c = catalog::arrow();
        let e = Presheaf::empty(&c);
        let y = yoneda(&c, 1).unwrap();
        assert_eq!(hom_count(&c, &e, &y), 1);
        assert_eq!(hom_count(&c, &y, &e), 0);
    }

    #[test]
    fn epis_are_local() {
        let c = catalog::arrow();
        let f = c.morphism_index("f").unwrap();
        let j2 = generated_topology(&c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap();
        // P = (1, 0) → terminal: not surjective at b, but locally so under J2
        let p = Presheaf::new(&c, vec![1, 0], vec![vec![0], vec![], vec![]]).unwrap();
        let one = Presheaf::terminal(&c);
        let t = &nat_transformations(&c, &p, &one)[0];
        let kind = classify_map(&c, &j2, &p, &one, t);
        assert!(kind.mono && kind.epi && kind.iso);
        let kind = classify_map(&c, &trivial_topology(&c), &p, &one, t);
        assert!(kind.mono && !kind.epi);
    }
}
