use super::FiniteCategory;

/// An isomorphism of categories, as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryIso {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

/// Exhaustive search for an isomorphism of composition tables.
pub fn find_isomorphism(a: &FiniteCategory, b: &FiniteCategory) -> Option<CategoryIso> {
    if a.n_objects() != b.n_objects() || a.n_morphisms() != b.n_morphisms() {
        return None;
    }
    let mut objects = vec![usize::MAX; a.n_objects()];
    let mut used = vec![false; b.n_objects()];
    search_objects(a, b, 0, &mut objects, &mut used)
}

fn search_objects(
    a: &FiniteCategory,
    b: &FiniteCategory,
    i: usize,
    objects: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<CategoryIso> {
    if i == a.n_objects() {
        let mut morphisms = vec![usize::MAX; a.n_morphisms()];
        let mut taken = vec![false; b.n_morphisms()];
        return search_morphisms(a, b, 0, objects, &mut morphisms, &mut taken).then(|| {
            CategoryIso {
                objects: objects.clone(),
                morphisms,
            }
        });
    }
    for j in 0..b.n_objects() {
        if used[j] {
            continue;
        }
        objects[i] = j;
        // hom-set sizes must agree with every object already placed
        let ok = (0..=i).all(|k| {
            a.hom(i, k).len() == b.hom(j, objects[k]).len()
                && a.hom(k, i).len() == b.hom(objects[k], j).len()
        });
        if ok {
            used[j] = true;
            if let Some(iso) = search_objects(a, b, i + 1, objects, used) {
                return Some(iso);
            }
            used[j] = false;
        }
    }
    objects[i] = usize::MAX;
    None
}

fn search_morphisms(
    a: &FiniteCategory,
    b: &FiniteCategory,
    f: usize,
    objects: &[usize],
    map: &mut Vec<usize>,
    taken: &mut Vec<bool>,
) -> bool {
    if f == a.n_morphisms() {
        return true;
    }
    let (d, c) = (objects[a.dom(f)], objects[a.cod(f)]);
    for g in b.hom(d, c) {
        if taken[g] || (a.is_identity(f) != b.is_identity(g)) {
            continue;
        }
        map[f] = g;
        if consistent(a, b, f, map) {
            taken[g] = true;
            if search_morphisms(a, b, f + 1, objects, map, taken) {
                return true;
            }
            taken[g] = false;
        }
    }
    map[f] = usize::MAX;
    false
}

/// Checks every composition equation among morphisms `0..=f` already mapped.
fn consistent(a: &FiniteCategory, b: &FiniteCategory, f: usize, map: &[usize]) -> bool {
    for x in 0..=f {
        for y in 0..=f {
            if x != f && y != f {
                continue;
            }
            if let Some(xy) = a.compose(x, y) {
                if xy <= f && b.compose(map[x], map[y]) != Some(map[xy]) {
                    return false;
                }
            }
        }
    }
    // composites landing on f whose factors were mapped earlier
    for x in 0..f {
        for y in 0..f {
            if a.compose(x, y) == Some(f) && b.compose(map[x], map[y]) != Some(map[f]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn z2_is_isomorphic_to_its_opposite() {
        let z2 = catalog::z2();
        let iso = find_isomorphism(&z2, &z2.opposite()).expect("iso");
        // the map must respect composition exhaustively
        let op = z2.opposite();
        for g in 0..z2.n_morphisms() {
            for f in 0..z2.n_morphisms() {
                if let Some(h) = z2.compose(g, f) {
                    assert_eq!(
                        op.compose(iso.morphisms[g], iso.morphisms[f]),
                        Some(iso.morphisms[h])
                    );
                }
            }
        }
    }

    #[test]
    fn arrow_is_isomorphic_to_its_opposite_but_not_to_pair() {
        let arrow = catalog::arrow();
        assert!(find_isomorphism(&arrow, &arrow.opposite()).is_some());
        assert!(find_isomorphism(&arrow, &catalog::pair()).is_none());
        assert!(find_isomorphism(&catalog::z2(), &catalog::idem()).is_none());
    }
}
