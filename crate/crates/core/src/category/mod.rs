//! Finite categories given by explicit composition tables.

mod iso;
mod props;
mod slice;
mod subcategory;

pub use iso::{find_isomorphism, CategoryIso};
pub use props::{
    connected_components, has_right_ore, is_cartesian, is_cauchy_complete, CartesianVerdict,
    Equalizer, LimitFailure, OreCounterexample, Product, UnsplitIdempotent,
};
pub use slice::{slice, Slice};
pub use subcategory::{
    enumerate_subcategories, intersect_subcategories, Subcategory, SubcategoryView,
};

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{MorphSet, MAX_INDEX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("too many {what}: {count} (at most 64 supported)")]
    TooLarge { what: &'static str, count: usize },
    #[error("object `{object}` has no identity morphism")]
    MissingIdentity { object: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("composite {g}∘{f} is not defined")]
    UndefinedComposite { g: String, f: String },
    #[error("composite {g}∘{f} is given twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("identity law fails: {lhs} = {got}, expected {expected}")]
    IdentityLaw {
        lhs: String,
        got: String,
        expected: String,
    },
    #[error("associativity fails: ({h}∘{g})∘{f} ≠ {h}∘({g}∘{f})")]
    NonAssociative { h: String, g: String, f: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("invalid subcategory: {0}")]
    InvalidSubcategory(String),
    #[error("subcategories of different parents")]
    MixedParents,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// An unvalidated composition-table description of a category.
///
/// `composites` holds triples `[g, f, h]` meaning `g∘f = h`. Composites with
/// an identity on either side may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    pub composites: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A validated finite category.
///
/// Objects and morphisms carry stable indices in declaration order. The
/// composition table is total on composable pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    /// `compose[g * n + f]` is `g∘f` when `cod f == dom g`.
    compose: Vec<Option<usize>>,
    into: Vec<MorphSet>,
    from: Vec<MorphSet>,
    fingerprint: u64,
}

impl std::fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self
                    .morphisms
                    .iter()
                    .map(|m| {
                        format!(
                            "{}: {}→{}",
                            m.name, self.objects[m.dom], self.objects[m.cod]
                        )
                    })
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Checks a raw table against the category laws.
///
/// Checks run in a fixed order (names, identities, composability, totality,
/// identity laws, result types, associativity) and the first failure is
/// reported with its witnesses.
pub fn validate_category(raw: &RawCategory) -> Result<FiniteCategory, CategoryError> {
    if raw.objects.len() > MAX_INDEX {
        return Err(CategoryError::TooLarge {
            what: "objects",
            count: raw.objects.len(),
        });
    }
    if raw.morphisms.len() > MAX_INDEX {
        return Err(CategoryError::TooLarge {
            what: "morphisms",
            count: raw.morphisms.len(),
        });
    }
    let mut obj_ix = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_ix.insert(o.as_str(), i).is_some() {
            return Err(CategoryError::DuplicateName(o.clone()));
        }
    }
    let mut mor_ix = HashMap::new();
    let mut morphisms = Vec::with_capacity(raw.morphisms.len());
    for (i, m) in raw.morphisms.iter().enumerate() {
        if mor_ix.insert(m.name.as_str(), i).is_some() {
            return Err(CategoryError::DuplicateName(m.name.clone()));
        }
        let dom = *obj_ix
            .get(m.dom.as_str())
            .ok_or_else(|| CategoryError::UnknownName(m.dom.clone()))?;
        let cod = *obj_ix
            .get(m.cod.as_str())
            .ok_or_else(|| CategoryError::UnknownName(m.cod.clone()))?;
        morphisms.push(Morphism {
            name: m.name.clone(),
            dom,
            cod,
        });
    }
    for o in raw.identities.keys() {
        if !obj_ix.contains_key(o.as_str()) {
            return Err(CategoryError::UnknownName(o.clone()));
        }
    }
    let mut identity = Vec::with_capacity(raw.objects.len());
    for (c, o) in raw.objects.iter().enumerate() {
        let name = raw
            .identities
            .get(o)
            .ok_or_else(|| CategoryError::MissingIdentity { object: o.clone() })?;
        let i = *mor_ix
            .get(name.as_str())
            .ok_or_else(|| CategoryError::UnknownName(name.clone()))?;
        if morphisms[i].dom != c || morphisms[i].cod != c {
            return Err(CategoryError::TypeMismatch(format!(
                "identity `{name}` of `{o}` is not an endomorphism of `{o}`"
            )));
        }
        identity.push(i);
    }

    let n = morphisms.len();
    let name = |i: usize| morphisms[i].name.clone();
    let mut compose: Vec<Option<usize>> = vec![None; n * n];
    for [g, f, h] in &raw.composites {
        let lookup = |s: &String| {
            mor_ix
                .get(s.as_str())
                .copied()
                .ok_or_else(|| CategoryError::UnknownName(s.clone()))
        };
        let (gi, fi, hi) = (lookup(g)?, lookup(f)?, lookup(h)?);
        if morphisms[fi].cod != morphisms[gi].dom {
            return Err(CategoryError::TypeMismatch(format!(
                "composite {g}∘{f} given but cod({f}) ≠ dom({g})"
            )));
        }
        match compose[gi * n + fi] {
            Some(prev) if prev != hi => {
                return Err(CategoryError::ConflictingComposite {
                    g: g.clone(),
                    f: f.clone(),
                })
            }
            _ => compose[gi * n + fi] = Some(hi),
        }
    }
    // identity composites may be elided
    for f in 0..n {
        let (d, c) = (morphisms[f].dom, morphisms[f].cod);
        compose[identity[c] * n + f].get_or_insert(f);
        compose[f * n + identity[d]].get_or_insert(f);
    }
    for g in 0..n {
        for f in 0..n {
            if morphisms[f].cod == morphisms[g].dom && compose[g * n + f].is_none() {
                return Err(CategoryError::UndefinedComposite {
                    g: name(g),
                    f: name(f),
                });
            }
        }
    }
    for f in 0..n {
        let (d, c) = (morphisms[f].dom, morphisms[f].cod);
        let checks = [
            (
                compose[identity[c] * n + f],
                format!("{}∘{}", name(identity[c]), name(f)),
            ),
            (
                compose[f * n + identity[d]],
                format!("{}∘{}", name(f), name(identity[d])),
            ),
        ];
        for (got, lhs) in checks {
            if got != Some(f) {
                return Err(CategoryError::IdentityLaw {
                    lhs,
                    got: name(got.expect("total")),
                    expected: name(f),
                });
            }
        }
    }
    for g in 0..n {
        for f in 0..n {
            if let Some(h) = compose[g * n + f] {
                if morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod {
                    return Err(CategoryError::TypeMismatch(format!(
                        "{}∘{} = {} has the wrong domain or codomain",
                        name(g),
                        name(f),
                        name(h)
                    )));
                }
            }
        }
    }
    for h in 0..n {
        for g in 0..n {
            let Some(hg) = compose[h * n + g] else {
                continue;
            };
            for f in 0..n {
                let Some(gf) = compose[g * n + f] else {
                    continue;
                };
                if compose[hg * n + f] != compose[h * n + gf] {
                    return Err(CategoryError::NonAssociative {
                        h: name(h),
                        g: name(g),
                        f: name(f),
                    });
                }
            }
        }
    }
    Ok(FiniteCategory::from_parts(
        raw.objects.clone(),
        morphisms,
        identity,
        compose,
    ))
}

impl FiniteCategory {
    fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Self {
        let mut into = vec![MorphSet::EMPTY; objects.len()];
        let mut from = vec![MorphSet::EMPTY; objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            into[m.cod].insert(i);
            from[m.dom].insert(i);
        }
        let mut hasher = DefaultHasher::new();
        objects.hash(&mut hasher);
        morphisms.hash(&mut hasher);
        compose.hash(&mut hasher);
        FiniteCategory {
            objects,
            morphisms,
            identity,
            compose,
            into,
            from,
            fingerprint: hasher.finish(),
        }
    }

    /// The category with no objects.
    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, c: usize) -> &str {
        &self.objects[c]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn object(&self, name: &str) -> Result<usize, CategoryError> {
        self.object_index(name)
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identity[c]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.dom(f)] == f
    }

    /// `g∘f`, or `None` when `cod f ≠ dom g`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// `g∘f` for a pair already known to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} and {} are not composable",
                self.morphism_name(g),
                self.morphism_name(f)
            )
        })
    }

    /// Morphisms with codomain `c`.
    pub fn arrows_into(&self, c: usize) -> MorphSet {
        self.into[c]
    }

    /// Morphisms with domain `c`.
    pub fn arrows_from(&self, c: usize) -> MorphSet {
        self.from[c]
    }

    pub fn hom(&self, a: usize, b: usize) -> MorphSet {
        self.from[a].intersection(self.into[b])
    }

    pub fn all_morphisms(&self) -> MorphSet {
        MorphSet::full(self.morphisms.len())
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Dual category: same indices, domain and codomain swapped.
    pub fn opposite(&self) -> FiniteCategory {
        let n = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                dom: m.cod,
                cod: m.dom,
            })
            .collect();
        let mut compose = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose[f * n + g];
            }
        }
        Self::from_parts(
            self.objects.clone(),
            morphisms,
            self.identity.clone(),
            compose,
        )
    }

    /// Serializable table; identity composites are elided.
    pub fn to_raw(&self) -> RawCategory {
        let n = self.morphisms.len();
        let mut composites = Vec::new();
        for g in 0..n {
            if self.is_identity(g) {
                continue;
            }
            for f in 0..n {
                if self.is_identity(f) {
                    continue;
                }
                if let Some(h) = self.compose(g, f) {
                    composites.push([
                        self.morphisms[g].name.clone(),
                        self.morphisms[f].name.clone(),
                        self.morphisms[h].name.clone(),
                    ]);
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| RawMorphism {
                    name: m.name.clone(),
                    dom: self.objects[m.dom].clone(),
                    cod: self.objects[m.cod].clone(),
                })
                .collect(),
            identities: self
                .identity
                .iter()
                .enumerate()
                .map(|(c, &i)| (self.objects[c].clone(), self.morphisms[i].name.clone()))
                .collect(),
            composites,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn arrow_raw() -> RawCategory {
        catalog::arrow().to_raw()
    }

    #[test]
    fn arrow_and_idem_validate() {
        let c = catalog::arrow();
        assert_eq!(c.n_objects(), 2);
        assert_eq!(c.n_morphisms(), 3);
        let m = catalog::idem();
        let e = m.morphism_index("e").unwrap();
        assert_eq!(m.comp(e, e), e);
    }

    #[test]
    fn identity_law_violation_is_reported() {
        let mut raw = arrow_raw();
        raw.composites
            .push(["f".into(), "id_a".into(), "id_b".into()]);
        let err = validate_category(&raw).unwrap_err();
        assert!(matches!(err, CategoryError::IdentityLaw { .. }), "{err:?}");
    }

    #[test]
    fn missing_identity_and_undefined_composite() {
        let mut raw = arrow_raw();
        raw.identities.remove("a");
        assert_eq!(
            validate_category(&raw).unwrap_err(),
            CategoryError::MissingIdentity { object: "a".into() }
        );

        let mut raw = catalog::idem().to_raw();
        raw.composites.clear();
        assert_eq!(
            validate_category(&raw).unwrap_err(),
            CategoryError::UndefinedComposite {
                g: "e".into(),
                f: "e".into()
            }
        );
    }

    #[test]
    fn composite_of_non_composable_pair_is_a_type_mismatch() {
        let mut raw = arrow_raw();
        raw.composites.push(["f".into(), "f".into(), "f".into()]);
        assert!(matches!(
            validate_category(&raw),
            Err(CategoryError::TypeMismatch(_))
        ));
    }

    #[test]
    fn non_associative_monoid_table_is_rejected() {
        // (x∘x)∘x = y∘x = y but x∘(x∘x) = x∘y = x
        let raw = RawCategory {
            objects: vec!["*".into()],
            morphisms: ["1", "x", "y"]
                .iter()
                .map(|n| RawMorphism {
                    name: n.to_string(),
                    dom: "*".into(),
                    cod: "*".into(),
                })
                .collect(),
            identities: [("*".to_string(), "1".to_string())].into(),
            composites: vec![
                ["x".into(), "x".into(), "y".into()],
                ["x".into(), "y".into(), "x".into()],
                ["y".into(), "x".into(), "y".into()],
                ["y".into(), "y".into(), "y".into()],
            ],
        };
        assert!(matches!(
            validate_category(&raw),
            Err(CategoryError::NonAssociative { .. })
        ));
    }

    #[test]
    fn opposite_is_an_involution() {
        for c in catalog::named() {
            assert_eq!(c.1.opposite().opposite(), c.1, "{}", c.0);
        }
        let op = catalog::arrow().opposite();
        let f = op.morphism_index("f").unwrap();
        assert_eq!(op.object_name(op.dom(f)), "b");
        assert_eq!(op.object_name(op.cod(f)), "a");
    }

    #[test]
    fn raw_round_trip() {
        for (name, c) in catalog::named() {
            assert_eq!(validate_category(&c.to_raw()).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn empty_category_is_valid() {
        let c = validate_category(&RawCategory::default()).unwrap();
        assert_eq!(c.n_objects(), 0);
    }
}
