use std::collections::BTreeMap;

use super::{validate_category, CategoryError, FiniteCategory, RawCategory, RawMorphism};

/// The slice category `C/c` with its projection back to `C`.
#[derive(Debug, Clone)]
pub struct Slice {
    pub category: FiniteCategory,
    /// Slice object `i` is the morphism `over[i]` of `C` into `c`.
    pub over: Vec<usize>,
    /// Slice morphism `k` is the triangle witnessed by `base[k]` in `C`.
    pub base: Vec<usize>,
}

impl Slice {
    /// Domain in `C` of a slice object.
    pub fn projection(&self, parent: &FiniteCategory, object: usize) -> usize {
        parent.dom(self.over[object])
    }
}

/// Builds `C/c`: objects are morphisms into `c`, morphisms `u: f → g` are
/// those `u` of `C` with `g∘u = f`.
pub fn slice(cat: &FiniteCategory, c: usize) -> Result<Slice, CategoryError> {
    if c >= cat.n_objects() {
        return Err(CategoryError::UnknownObject(format!("#{c}")));
    }
    let over: Vec<usize> = cat.arrows_into(c).iter().collect();
    let label = |f: usize| cat.morphism_name(f).to_string();
    let mut morphisms = Vec::new();
    let mut base = Vec::new();
    let mut key = BTreeMap::new();
    let mut identities = BTreeMap::new();
    for (i, &f) in over.iter().enumerate() {
        for (j, &g) in over.iter().enumerate() {
            for u in cat.hom(cat.dom(f), cat.dom(g)) {
                if cat.comp(g, u) == f {
                    let name = format!("{}:{}→{}", cat.morphism_name(u), label(f), label(g));
                    if cat.is_identity(u) && i == j {
                        identities.insert(label(f), name.clone());
                    }
                    key.insert((u, i, j), name.clone());
                    morphisms.push(RawMorphism {
                        name,
                        dom: label(f),
                        cod: label(g),
                    });
                    base.push(u);
                }
            }
        }
    }
    let mut composites = Vec::new();
    for (&(v, j, k), vname) in &key {
        for (&(u, i, j2), uname) in &key {
            if j2 != j {
                continue;
            }
            let vu = cat.comp(v, u);
            composites.push([vname.clone(), uname.clone(), key[&(vu, i, k)].clone()]);
        }
    }
    let raw = RawCategory {
        objects: over.iter().map(|&f| label(f)).collect(),
        morphisms,
        identities,
        composites,
    };
    Ok(Slice {
        category: validate_category(&raw)?,
        over,
        base,
    })
}
