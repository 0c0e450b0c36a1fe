use super::{validate_category, CategoryError, FiniteCategory, RawCategory, RawMorphism};
use crate::bits::{MorphSet, ObjSet};

/// A subcategory, stored as bitsets over the parent's indices.
///
/// Not required to be full. The parent is remembered by fingerprint only, so
/// operations taking a subcategory also take the parent explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subcategory {
    objects: ObjSet,
    morphisms: MorphSet,
    parent: u64,
}

impl Subcategory {
    /// Validates a pair of index sets: identities of every object present,
    /// endpoints inside the object set, closed under composition.
    pub fn new(
        cat: &FiniteCategory,
        objects: ObjSet,
        morphisms: MorphSet,
    ) -> Result<Self, CategoryError> {
        let invalid = |msg: String| Err(CategoryError::InvalidSubcategory(msg));
        if !objects.is_subset(ObjSet::full(cat.n_objects()))
            || !morphisms.is_subset(cat.all_morphisms())
        {
            return invalid("index out of range".into());
        }
        for c in objects {
            if !morphisms.contains(cat.identity(c)) {
                return invalid(format!("missing identity of `{}`", cat.object_name(c)));
            }
        }
        for f in morphisms {
            if !objects.contains(cat.dom(f)) || !objects.contains(cat.cod(f)) {
                return invalid(format!(
                    "`{}` has an endpoint outside the object set",
                    cat.morphism_name(f)
                ));
            }
        }
        for g in morphisms {
            for f in morphisms {
                if let Some(h) = cat.compose(g, f) {
                    if !morphisms.contains(h) {
                        return invalid(format!(
                            "not closed under composition: {}∘{} = {}",
                            cat.morphism_name(g),
                            cat.morphism_name(f),
                            cat.morphism_name(h)
                        ));
                    }
                }
            }
        }
        Ok(Subcategory {
            objects,
            morphisms,
            parent: cat.fingerprint(),
        })
    }

    /// Looks up names; identities of the listed objects are implied.
    pub fn from_names<S: AsRef<str>>(
        cat: &FiniteCategory,
        objects: &[S],
        morphisms: &[S],
    ) -> Result<Self, CategoryError> {
        let mut objs = ObjSet::EMPTY;
        let mut mors = MorphSet::EMPTY;
        for o in objects {
            let c = cat
                .object_index(o.as_ref())
                .ok_or_else(|| CategoryError::UnknownName(o.as_ref().to_string()))?;
            objs.insert(c);
            mors.insert(cat.identity(c));
        }
        for m in morphisms {
            mors.insert(
                cat.morphism_index(m.as_ref())
                    .ok_or_else(|| CategoryError::UnknownName(m.as_ref().to_string()))?,
            );
        }
        Self::new(cat, objs, mors)
    }

    /// The full subcategory on a set of objects.
    pub fn full(cat: &FiniteCategory, objects: ObjSet) -> Self {
        let morphisms = (0..cat.n_morphisms())
            .filter(|&f| objects.contains(cat.dom(f)) && objects.contains(cat.cod(f)))
            .collect();
        Subcategory {
            objects,
            morphisms,
            parent: cat.fingerprint(),
        }
    }

    pub fn whole(cat: &FiniteCategory) -> Self {
        Self::full(cat, ObjSet::full(cat.n_objects()))
    }

    pub fn empty(cat: &FiniteCategory) -> Self {
        Subcategory {
            objects: ObjSet::EMPTY,
            morphisms: MorphSet::EMPTY,
            parent: cat.fingerprint(),
        }
    }

    pub fn objects(&self) -> ObjSet {
        self.objects
    }

    pub fn morphisms(&self) -> MorphSet {
        self.morphisms
    }

    pub fn contains_object(&self, c: usize) -> bool {
        self.objects.contains(c)
    }

    pub fn contains_morphism(&self, f: usize) -> bool {
        self.morphisms.contains(f)
    }

    pub fn belongs_to(&self, cat: &FiniteCategory) -> bool {
        self.parent == cat.fingerprint()
    }

    pub fn is_subcategory_of(&self, other: &Subcategory) -> bool {
        self.parent == other.parent
            && self.objects.is_subset(other.objects)
            && self.morphisms.is_subset(other.morphisms)
    }

    pub fn is_full(&self, cat: &FiniteCategory) -> bool {
        *self == Self::full(cat, self.objects)
    }

    /// The subcategory as a category in its own right, with index maps back
    /// to the parent. Indices keep the parent's relative order.
    pub fn view(&self, cat: &FiniteCategory) -> SubcategoryView {
        let objects: Vec<usize> = self.objects.iter().collect();
        let morphisms: Vec<usize> = self.morphisms.iter().collect();
        let raw = RawCategory {
            objects: objects
                .iter()
                .map(|&c| cat.object_name(c).to_string())
                .collect(),
            morphisms: morphisms
                .iter()
                .map(|&f| RawMorphism {
                    name: cat.morphism_name(f).to_string(),
                    dom: cat.object_name(cat.dom(f)).to_string(),
                    cod: cat.object_name(cat.cod(f)).to_string(),
                })
                .collect(),
            identities: objects
                .iter()
                .map(|&c| {
                    (
                        cat.object_name(c).to_string(),
                        cat.morphism_name(cat.identity(c)).to_string(),
                    )
                })
                .collect(),
            composites: morphisms
                .iter()
                .flat_map(|&g| morphisms.iter().map(move |&f| (g, f)))
                .filter_map(|(g, f)| {
                    cat.compose(g, f).map(|h| {
                        [
                            cat.morphism_name(g).to_string(),
                            cat.morphism_name(f).to_string(),
                            cat.morphism_name(h).to_string(),
                        ]
                    })
                })
                .collect(),
        };
        let category = validate_category(&raw).expect("a validated subcategory is a category");
        SubcategoryView {
            category,
            objects,
            morphisms,
        }
    }
}

/// A subcategory re-indexed as a standalone category.
#[derive(Debug, Clone)]
pub struct SubcategoryView {
    pub category: FiniteCategory,
    /// Parent index of each object of `category`.
    pub objects: Vec<usize>,
    /// Parent index of each morphism of `category`.
    pub morphisms: Vec<usize>,
}

impl SubcategoryView {
    pub fn local_object(&self, parent_object: usize) -> Option<usize> {
        self.objects.iter().position(|&c| c == parent_object)
    }

    pub fn local_morphism(&self, parent_morphism: usize) -> Option<usize> {
        self.morphisms.iter().position(|&f| f == parent_morphism)
    }

    /// Parent-indexed set of local morphisms.
    pub fn lift_morphisms(&self, local: MorphSet) -> MorphSet {
        local.iter().map(|f| self.morphisms[f]).collect()
    }

    /// Re-expresses a smaller subcategory of the parent inside this view.
    pub fn restrict(&self, inner: &Subcategory) -> Result<Subcategory, CategoryError> {
        let objects = inner
            .objects()
            .iter()
            .map(|c| self.local_object(c))
            .collect::<Option<ObjSet>>();
        let morphisms = inner
            .morphisms()
            .iter()
            .map(|f| self.local_morphism(f))
            .collect::<Option<MorphSet>>();
        match (objects, morphisms) {
            (Some(o), Some(m)) => Subcategory::new(&self.category, o, m),
            _ => Err(CategoryError::InvalidSubcategory(
                "not contained in the enclosing subcategory".into(),
            )),
        }
    }
}

/// Objectwise and morphismwise intersection of subcategories of one parent.
pub fn intersect_subcategories(parts: &[Subcategory]) -> Result<Subcategory, CategoryError> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| CategoryError::InvalidSubcategory("empty intersection family".into()))?;
    let mut out = *first;
    for p in rest {
        if p.parent != out.parent {
            return Err(CategoryError::MixedParents);
        }
        out.objects = out.objects.intersection(p.objects);
        out.morphisms = out.morphisms.intersection(p.morphisms);
    }
    Ok(out)
}

/// Every subcategory of `cat`, or `None` if a search over more than `limit`
/// morphism subsets per object set would be needed.
pub fn enumerate_subcategories(cat: &FiniteCategory, limit: u64) -> Option<Vec<Subcategory>> {
    let n = cat.n_objects();
    let mut out = Vec::new();
    for objs in 0..(1u64 << n) {
        let objects = ObjSet(objs);
        let ids: MorphSet = objects.iter().map(|c| cat.identity(c)).collect();
        let candidates: Vec<usize> = (0..cat.n_morphisms())
            .filter(|&f| {
                !cat.is_identity(f) && objects.contains(cat.dom(f)) && objects.contains(cat.cod(f))
            })
            .collect();
        if candidates.len() >= 63 || (1u64 << candidates.len()) > limit {
            return None;
        }
        for mask in 0..(1u64 << candidates.len()) {
            let mut m = ids;
            for (k, &f) in candidates.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    m.insert(f);
                }
            }
            if let Ok(s) = Subcategory::new(cat, objects, m) {
                out.push(s);
            }
        }
    }
    Some(out)
}
