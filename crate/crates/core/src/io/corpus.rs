use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{full_subcategory, Site, SiteFile};
use crate::catalog;
use crate::category::{
    find_isomorphism, validate_category, FiniteCategory, RawCategory, RawMorphism,
};
use crate::lattice::{candidate_exponent, enumerate_topologies};
use crate::sheaf::Presheaf;
use crate::topology::atomic_topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusBounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_value_size: usize,
    /// How many random categories to add to the fixed ones.
    pub random_members: usize,
    /// Random members must have at most `2^max_log2_assignments` candidate topologies.
    pub max_log2_assignments: usize,
    /// Sites per category; larger lattices are sampled.
    pub max_topologies: usize,
    pub presheaves_per_site: usize,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds {
            max_objects: 3,
            max_morphisms: 12,
            max_value_size: 3,
            random_members: 6,
            max_log2_assignments: 12,
            max_topologies: 8,
            presheaves_per_site: 2,
        }
    }
}

/// A random poset on `n` objects: a random relation, transitively closed.
fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> FiniteCategory {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.random_bool(0.5);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let objects: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let name = |i: usize, j: usize| {
        if i == j {
            format!("id_p{i}")
        } else {
            format!("p{i}p{j}")
        }
    };
    let mut raw = RawCategory {
        objects: objects.clone(),
        ..RawCategory::default()
    };
    for i in 0..n {
        raw.identities.insert(objects[i].clone(), name(i, i));
        for j in 0..n {
            if le[i][j] {
                raw.morphisms.push(RawMorphism {
                    name: name(i, j),
                    dom: objects[i].clone(),
                    cod: objects[j].clone(),
                });
            }
        }
    }
    for (i, row) in le.iter().enumerate() {
        for (j, next) in le.iter().enumerate() {
            for (k, &above) in next.iter().enumerate() {
                if row[j] && above && i != j && j != k {
                    raw.composites.push([name(j, k), name(i, j), name(i, k)]);
                }
            }
        }
    }
    validate_category(&raw).expect("posets are categories")
}

/// Random functions between small finite sets, closed under composition.
/// Returns `None` when the closure outgrows `max_morphisms`.
fn random_concrete(
    rng: &mut ChaCha8Rng,
    n_objects: usize,
    max_morphisms: usize,
) -> Option<FiniteCategory> {
    let sizes: Vec<usize> = (0..n_objects).map(|_| rng.random_range(1..=3)).collect();
    // (dom, cod, table)
    let mut arrows: Vec<(usize, usize, Vec<usize>)> = (0..n_objects)
        .map(|o| (o, o, (0..sizes[o]).collect()))
        .collect();
    let generators = rng.random_range(1..=n_objects + 1);
    for _ in 0..generators {
        let (d, c) = (
            rng.random_range(0..n_objects),
            rng.random_range(0..n_objects),
        );
        arrows.push((
            d,
            c,
            (0..sizes[d])
                .map(|_| rng.random_range(0..sizes[c]))
                .collect(),
        ));
    }
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    arrows.retain(|a| {
        let fresh = !index.contains_key(a);
        if fresh {
            index.insert(a.clone(), index.len());
        }
        fresh
    });
    let mut composites = Vec::new();
    let mut done = 0;
    // close under composition, recording every composite g∘f
    while done < arrows.len() {
        done = arrows.len();
        let mut pairs = Vec::new();
        for g in 0..arrows.len() {
            for f in 0..arrows.len() {
                if arrows[f].1 == arrows[g].0 {
                    pairs.push((g, f));
                }
            }
        }
        composites.clear();
        for (g, f) in pairs {
            let table: Vec<usize> = arrows[f].2.iter().map(|&x| arrows[g].2[x]).collect();
            let key = (arrows[f].0, arrows[g].1, table);
            let h = match index.get(&key) {
                Some(&h) => h,
                None => {
                    index.insert(key.clone(), arrows.len());
                    arrows.push(key);
                    if arrows.len() > max_morphisms {
                        return None;
                    }
                    arrows.len() - 1
                }
            };
            composites.push((g, f, h));
        }
    }
    let objects: Vec<String> = (0..n_objects).map(|o| format!("s{o}")).collect();
    let name = |k: usize| {
        if k < n_objects {
            format!("id_s{k}")
        } else {
            format!("m{}", k - n_objects)
        }
    };
    let mut raw = RawCategory {
        objects: objects.clone(),
        ..RawCategory::default()
    };
    for (k, (d, c, _)) in arrows.iter().enumerate() {
        raw.morphisms.push(RawMorphism {
            name: name(k),
            dom: objects[*d].clone(),
            cod: objects[*c].clone(),
        });
    }
    for (o, object) in objects.iter().enumerate().take(n_objects) {
        raw.identities.insert(object.clone(), name(o));
    }
    raw.composites = composites
        .into_iter()
        .filter(|&(g, f, _)| g >= n_objects && f >= n_objects)
        .map(|(g, f, h)| [name(g), name(f), name(h)])
        .collect();
    Some(validate_category(&raw).expect("function composition is a category"))
}

fn within_bounds(cat: &FiniteCategory, bounds: &CorpusBounds) -> bool {
    cat.n_objects() <= bounds.max_objects
        && cat.n_morphisms() <= bounds.max_morphisms
        && candidate_exponent(cat) <= bounds.max_log2_assignments
}

/// The fixed named categories followed by seeded random ones, up to
/// isomorphism.
pub fn corpus_categories(seed: u64, bounds: &CorpusBounds) -> Vec<(String, FiniteCategory)> {
    let mut out: Vec<(String, FiniteCategory)> = catalog::named()
        .into_iter()
        .map(|(n, c)| (n.to_string(), c))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    let mut attempts = 0;
    while added < bounds.random_members && attempts < 200 * bounds.random_members.max(1) {
        attempts += 1;
        let n = rng.random_range(1..=bounds.max_objects.max(1));
        let candidate = if rng.random_bool(0.5) {
            Some(random_poset(&mut rng, n))
        } else {
            random_concrete(&mut rng, n, bounds.max_morphisms)
        };
        let Some(cat) = candidate else { continue };
        if !within_bounds(&cat, bounds)
            || out.iter().any(|(_, c)| find_isomorphism(c, &cat).is_some())
        {
            continue;
        }
        out.push((format!("random-{seed}-{added}"), cat));
        added += 1;
    }
    out
}

/// A random presheaf with values of size at most `max_size`.
///
/// Sizes are drawn first; action tables are then chosen by randomized
/// backtracking over the non-identity morphisms, checking functoriality as
/// soon as a composite's three tables are known. Sizes admitting no
/// presheaf are redrawn; the terminal presheaf is the fallback.
pub fn random_presheaf(cat: &FiniteCategory, rng: &mut ChaCha8Rng, max_size: usize) -> Presheaf {
    let morphisms: Vec<usize> = (0..cat.n_morphisms())
        .filter(|&f| !cat.is_identity(f))
        .collect();
    // triples (g, f, g∘f) among non-identities, filed under the latest-decided member
    let position: HashMap<usize, usize> =
        morphisms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut checks = vec![Vec::new(); morphisms.len()];
    for &g in &morphisms {
        for &f in &morphisms {
            if let Some(h) = cat.compose(g, f) {
                let last = [g, f, h]
                    .iter()
                    .filter_map(|m| position.get(m))
                    .copied()
                    .max()
                    .unwrap();
                checks[last].push((g, f, h));
            }
        }
    }
    for _ in 0..32 {
        let sizes: Vec<usize> = (0..cat.n_objects())
            .map(|_| rng.random_range(0..=max_size))
            .collect();
        let mut actions: Vec<Vec<usize>> = (0..cat.n_morphisms())
            .map(|f| {
                if cat.is_identity(f) {
                    (0..sizes[cat.dom(f)]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let mut budget = 20_000usize;
        if fill(
            cat,
            rng,
            &morphisms,
            &checks,
            &sizes,
            0,
            &mut actions,
            &mut budget,
        ) {
            return Presheaf::new(cat, sizes, actions).expect("backtracking only builds functors");
        }
    }
    Presheaf::terminal(cat)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    cat: &FiniteCategory,
    rng: &mut ChaCha8Rng,
    morphisms: &[usize],
    checks: &[Vec<(usize, usize, usize)>],
    sizes: &[usize],
    pos: usize,
    actions: &mut Vec<Vec<usize>>,
    budget: &mut usize,
) -> bool {
    if pos == morphisms.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let m = morphisms[pos];
    let (from, to) = (sizes[cat.cod(m)], sizes[cat.dom(m)]);
    if from > 0 && to == 0 {
        return false;
    }
    // every function from..to, visited in random order
    let count = to.pow(from as u32);
    let mut codes: Vec<usize> = (0..count).collect();
    codes.shuffle(rng);
    for code in codes {
        let mut rest = code;
        actions[m] = (0..from)
            .map(|_| {
                let v = rest % to;
                rest /= to;
                v
            })
            .collect();
        let consistent = checks[pos].iter().all(|&(g, f, h)| {
            // P(g∘f) = P(f)∘P(g)
            (0..sizes[cat.cod(g)]).all(|x| actions[h][x] == actions[f][actions[g][x]])
        });
        if consistent && fill(cat, rng, morphisms, checks, sizes, pos + 1, actions, budget) {
            return true;
        }
        if *budget == 0 {
            break;
        }
    }
    actions[m].clear();
    false
}

/// Seeded site files: every corpus category with each of its topologies
/// (sampled when there are more than `max_topologies`), full subcategories on
/// single objects, and random presheaves.
pub fn corpus(seed: u64, bounds: &CorpusBounds) -> Vec<SiteFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::new();
    for (name, cat) in corpus_categories(seed, bounds) {
        let Ok(lattice) = enumerate_topologies(
            &cat,
            1 << bounds.max_log2_assignments.max(candidate_exponent(&cat)),
        ) else {
            continue;
        };
        let mut chosen: Vec<usize> = (0..lattice.len()).collect();
        if chosen.len() > bounds.max_topologies {
            let mut keep = vec![lattice.bottom(), lattice.top()];
            if let Some(a) = atomic_topology(&cat)
                .ok()
                .and_then(|a| lattice.index_of(&a))
            {
                keep.push(a);
            }
            let mut rest: Vec<usize> = chosen.into_iter().filter(|i| !keep.contains(i)).collect();
            rest.shuffle(&mut rng);
            keep.extend(
                rest.into_iter()
                    .take(bounds.max_topologies.saturating_sub(keep.len())),
            );
            keep.sort_unstable();
            keep.dedup();
            chosen = keep;
        }
        let subcategories: Vec<_> = (0..cat.n_objects())
            .map(|c| {
                (
                    format!("only-{}", cat.object_name(c)),
                    full_subcategory(&cat, &[c]),
                )
            })
            .collect();
        for i in chosen {
            let presheaves = (0..bounds.presheaves_per_site)
                .map(|k| {
                    (
                        format!("p{k}"),
                        random_presheaf(&cat, &mut rng, bounds.max_value_size),
                    )
                })
                .collect();
            let site = Site {
                name: format!("{name}-j{i}"),
                category: cat.clone(),
                topology: lattice.get(i).clone(),
                subcategories: subcategories.clone(),
                presheaves,
            };
            out.push(SiteFile::from_site(&site));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let b = CorpusBounds::default();
        let a = corpus(0, &b);
        assert_eq!(a, corpus(0, &b));
        assert!(a.iter().any(|s| s.name.starts_with("arrow-")));
        for file in &a {
            let site = file
                .build()
                .unwrap_or_else(|e| panic!("{}: {e}", file.name));
            assert!(site.category.n_morphisms() <= b.max_morphisms);
        }
        let cats = corpus_categories(0, &b);
        assert_eq!(cats.len(), catalog::named().len() + b.random_members);
    }

    #[test]
    fn seeds_differ() {
        let b = CorpusBounds::default();
        let names = |s| {
            corpus_categories(s, &b)
                .into_iter()
                .map(|(_, c)| c.to_raw())
                .collect::<Vec<_>>()
        };
        assert_ne!(names(1), names(2));
    }

    #[test]
    fn random_presheaves_are_bounded_functors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (_, cat) in catalog::named() {
            for _ in 0..20 {
                let p = random_presheaf(&cat, &mut rng, 3);
                assert!(p.sizes().iter().all(|&s| s <= 3));
                Presheaf::new(&cat, p.sizes().to_vec(), p.actions().to_vec()).unwrap();
            }
        }
    }
}
