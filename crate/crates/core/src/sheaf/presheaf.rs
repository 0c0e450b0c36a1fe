use serde::{Deserialize, Serialize};

use super::SheafError;
use crate::category::FiniteCategory;

/// A finite-set-valued presheaf.
///
/// `P(c)` is the index range `0..sizes[c]`; for `f: a → b`, `actions[f]` is
/// the table of `P(f): P(b) → P(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presheaf {
    sizes: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Checks table shapes and contravariant functoriality.
    pub fn new(
        cat: &FiniteCategory,
        sizes: Vec<usize>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self, SheafError> {
        if sizes.len() != cat.n_objects() || actions.len() != cat.n_morphisms() {
            return Err(SheafError::Shape(format!(
                "expected {} sizes and {} action tables, got {} and {}",
                cat.n_objects(),
                cat.n_morphisms(),
                sizes.len(),
                actions.len()
            )));
        }
        for (f, table) in actions.iter().enumerate() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            if table.len() != sizes[b] || table.iter().any(|&x| x >= sizes[a]) {
                return Err(SheafError::Shape(format!(
                    "action of `{}` is not a function {} → {}",
                    cat.morphism_name(f),
                    sizes[b],
                    sizes[a]
                )));
            }
        }
        let p = Presheaf { sizes, actions };
        p.check_functorial(cat)?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Self {
        Presheaf { sizes, actions }
    }

    fn check_functorial(&self, cat: &FiniteCategory) -> Result<(), SheafError> {
        for c in 0..cat.n_objects() {
            let id = cat.identity(c);
            if self.actions[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(SheafError::Functoriality(format!(
                    "identity `{}` acts non-trivially",
                    cat.morphism_name(id)
                )));
            }
        }
        for g in 0..cat.n_morphisms() {
            for f in cat.arrows_into(cat.dom(g)) {
                let gf = cat.comp(g, f);
                for x in 0..self.sizes[cat.cod(g)] {
                    if self.act(gf, x) != self.act(f, self.act(g, x)) {
                        return Err(SheafError::Functoriality(format!(
                            "P({}∘{}) ≠ P({})∘P({})",
                            cat.morphism_name(g),
                            cat.morphism_name(f),
                            cat.morphism_name(f),
                            cat.morphism_name(g)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant singleton presheaf.
    pub fn terminal(cat: &FiniteCategory) -> Self {
        Presheaf {
            sizes: vec![1; cat.n_objects()],
            actions: vec![vec![0]; cat.n_morphisms()],
        }
    }

    /// The presheaf with every value empty.
    pub fn empty(cat: &FiniteCategory) -> Self {
        Presheaf {
            sizes: vec![0; cat.n_objects()],
            actions: vec![Vec::new(); cat.n_morphisms()],
        }
    }

    /// The constant presheaf with value `0..n` and identity actions.
    pub fn constant(cat: &FiniteCategory, n: usize) -> Self {
        Presheaf {
            sizes: vec![n; cat.n_objects()],
            actions: vec![(0..n).collect(); cat.n_morphisms()],
        }
    }

    pub fn n_objects(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `P(f)(x)`.
    pub fn act(&self, f: usize, x: usize) -> usize {
        self.actions[f][x]
    }

    pub fn action(&self, f: usize) -> &[usize] {
        &self.actions[f]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    /// Offsets of each object's elements in the disjoint union of all values.
    pub(crate) fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let o = acc;
                acc += s;
                o
            })
            .collect()
    }
}

/// `Hom(-, c)`, with `Hom(d, c)` listed in morphism-index order and actions
/// by precomposition.
pub fn yoneda(cat: &FiniteCategory, c: usize) -> Result<Presheaf, SheafError> {
    if c >= cat.n_objects() {
        return Err(SheafError::UnknownObject(format!("#{c}")));
    }
    let homs: Vec<Vec<usize>> = (0..cat.n_objects())
        .map(|d| cat.hom(d, c).iter().collect())
        .collect();
    let actions = (0..cat.n_morphisms())
        .map(|h| {
            let (d, e) = (cat.dom(h), cat.cod(h));
            homs[e]
                .iter()
                .map(|&f| {
                    let fh = cat.comp(f, h);
                    homs[d]
                        .iter()
                        .position(|&k| k == fh)
                        .expect("f∘h ∈ Hom(d, c)")
                })
                .collect()
        })
        .collect();
    Ok(Presheaf {
        sizes: homs.iter().map(Vec::len).collect(),
        actions,
    })
}

/// A family of component functions `P(c) → Q(c)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NatTransformation {
    pub components: Vec<Vec<usize>>,
}

impl NatTransformation {
    /// Checks component shapes and every naturality square.
    pub fn new(
        cat: &FiniteCategory,
        source: &Presheaf,
        target: &Presheaf,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, SheafError> {
        if components.len() != cat.n_objects()
            || components
                .iter()
                .enumerate()
                .any(|(c, t)| t.len() != source.size(c) || t.iter().any(|&y| y >= target.size(c)))
        {
            return Err(SheafError::Shape(
                "component tables do not match the presheaves".into(),
            ));
        }
        let t = NatTransformation { components };
        if let Some(f) = t.first_unnatural(cat, source, target) {
            return Err(SheafError::Naturality(cat.morphism_name(f).to_string()));
        }
        Ok(t)
    }

    pub fn identity(p: &Presheaf) -> Self {
        NatTransformation {
            components: p.sizes().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn apply(&self, c: usize, x: usize) -> usize {
        self.components[c][x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTransformation) -> NatTransformation {
        NatTransformation {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    pub(crate) fn first_unnatural(
        &self,
        cat: &FiniteCategory,
        source: &Presheaf,
        target: &Presheaf,
    ) -> Option<usize> {
        (0..cat.n_morphisms()).find(|&f| {
            let (a, b) = (cat.dom(f), cat.cod(f));
            (0..source.size(b)).any(|x| {
                self.components[a][source.act(f, x)] != target.act(f, self.components[b][x])
            })
        })
    }

    pub fn is_bijective(&self, target: &Presheaf) -> bool {
        self.components.iter().enumerate().all(|(c, t)| {
            let mut seen = vec![false; target.size(c)];
            t.len() == target.size(c) && t.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Componentwise inverse of a bijective transformation.
    pub fn inverse(&self) -> NatTransformation {
        NatTransformation {
            components: self
                .components
                .iter()
                .map(|t| {
                    let mut inv = vec![0; t.len()];
                    for (x, &y) in t.iter().enumerate() {
                        inv[y] = x;
                    }
                    inv
                })
                .collect(),
        }
    }
}
