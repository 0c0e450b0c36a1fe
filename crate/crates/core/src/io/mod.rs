//! The `finsite-site/1` file format and the seeded test corpus.
//!
//! A site file is a JSON object:
//!
//! ```json
//! {
//!   "schema": "finsite-site/1",
//!   "name": "arrow-j2",
//!   "category": {
//!     "objects": ["a", "b"],
//!     "morphisms": [{"name": "f", "dom": "a", "cod": "b"}],
//!     "composites": []
//!   },
//!   "topology": {"coverage": {"b": [["f"]]}},
//!   "subcategories": [{"name": "A", "objects": ["a"], "morphisms": []}],
//!   "presheaves": [{"name": "two", "values": {"a": 2, "b": 2}, "actions": {"f": [1, 0]}}]
//! }
//! ```
//!
//! Identities may be omitted: an object `o` without an entry in
//! `category.identities` gets the morphism `id_o`, added ahead of the listed
//! morphisms if not already present.
//! Composites `[g, f, g∘f]` involving an identity are inferred, as are
//! identity actions of presheaves. The topology is one of
//! `{"named": "trivial" | "maximal" | "atomic"}`, `{"coverage": ...}` (the
//! topology generated by the listed families) or `{"covering": ...}` (an
//! explicit assignment of covering sieves, checked against the axioms).

mod corpus;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{MorphSet, ObjSet};
use crate::category::{
    validate_category, CategoryError, FiniteCategory, RawCategory, RawMorphism, Subcategory,
};
use crate::sheaf::{Presheaf, SheafError};
use crate::topology::{
    atomic_topology, generated_topology, is_topology, maximal_topology, trivial_topology,
    AxiomViolation, GrothendieckTopology, TopologyError,
};

pub use corpus::{corpus, corpus_categories, random_presheaf, CorpusBounds};

pub const SCHEMA: &str = "finsite-site/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub category: CategoryBlock,
    pub topology: TopologyBlock,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subcategories: Vec<SubcategoryBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presheaves: Vec<PresheafBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBlock {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composites: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedTopology {
    Trivial,
    Maximal,
    Atomic,
}

/// Families of arrow names per object name.
pub type Families = BTreeMap<String, Vec<Vec<String>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyBlock {
    Named(NamedTopology),
    Coverage(Families),
    Covering(Families),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubcategoryBlock {
    pub name: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafBlock {
    pub name: String,
    pub values: BTreeMap<String, usize>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum SiteError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema `{0}` (expected `{SCHEMA}`)")]
    Schema(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid category: {0}")]
    Category(#[from] CategoryError),
    #[error("invalid topology: {0}")]
    Axiom(AxiomViolation),
    #[error(
        "right Ore condition fails at the cospan ({f}, {g}); the atomic topology is undefined"
    )]
    RightOreFails { f: String, g: String },
    #[error(transparent)]
    Topology(TopologyError),
    #[error("presheaf `{name}`: {source}")]
    Presheaf { name: String, source: SheafError },
    #[error("duplicate block name `{0}`")]
    DuplicateBlock(String),
}

impl SiteError {
    /// I/O and syntax problems, as opposed to well-formed but invalid input.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            SiteError::Io { .. } | SiteError::Parse { .. } | SiteError::Schema(_)
        )
    }
}

/// A validated site with its named extras.
#[derive(Debug, Clone)]
pub struct Site {
    pub name: String,
    pub category: FiniteCategory,
    pub topology: GrothendieckTopology,
    pub subcategories: Vec<(String, Subcategory)>,
    pub presheaves: Vec<(String, Presheaf)>,
}

impl Site {
    pub fn subcategory(&self, name: &str) -> Result<&Subcategory, SiteError> {
        self.subcategories
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| SiteError::UnknownName(name.to_string()))
    }

    pub fn presheaf(&self, name: &str) -> Result<&Presheaf, SiteError> {
        self.presheaves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| SiteError::UnknownName(name.to_string()))
    }
}

pub fn parse_site(path: impl AsRef<Path>) -> Result<Site, SiteError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| SiteError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut site = parse_site_str(&text)?;
    if site.name.is_empty() {
        site.name = site_name_from_path(path);
    }
    Ok(site)
}

fn site_name_from_path(path: &Path) -> String {
    let file = path.file_name().and_then(|f| f.to_str()).unwrap_or("site");
    file.strip_suffix(".site.json")
        .or_else(|| file.strip_suffix(".json"))
        .unwrap_or(file)
        .to_string()
}

pub fn parse_site_str(text: &str) -> Result<Site, SiteError> {
    let file: SiteFile = serde_json::from_str(text).map_err(|e| SiteError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.build()
}

fn lookup_object(cat: &FiniteCategory, name: &str) -> Result<usize, SiteError> {
    cat.object_index(name)
        .ok_or_else(|| SiteError::UnknownName(name.to_string()))
}

fn lookup_morphism(cat: &FiniteCategory, name: &str) -> Result<usize, SiteError> {
    cat.morphism_index(name)
        .ok_or_else(|| SiteError::UnknownName(name.to_string()))
}

impl CategoryBlock {
    /// The raw table with inferred identities filled in.
    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            composites: self.composites.clone(),
        };
        // inferred identities go first, in object order
        let mut inferred = Vec::new();
        for o in &self.objects {
            if raw.identities.contains_key(o) {
                continue;
            }
            let id = format!("id_{o}");
            if !raw.morphisms.iter().any(|m| m.name == id) {
                inferred.push(RawMorphism {
                    name: id.clone(),
                    dom: o.clone(),
                    cod: o.clone(),
                });
            }
            raw.identities.insert(o.clone(), id);
        }
        inferred.append(&mut raw.morphisms);
        raw.morphisms = inferred;
        raw
    }

    /// The block for a category, leaving `id_<o>` identities implicit.
    pub fn from_category(cat: &FiniteCategory) -> Self {
        let raw = cat.to_raw();
        let implicit = |o: &str, id: &str| id == format!("id_{o}");
        let identities: BTreeMap<String, String> = raw
            .identities
            .iter()
            .filter(|(o, id)| !implicit(o, id))
            .map(|(o, id)| (o.clone(), id.clone()))
            .collect();
        let morphisms = raw
            .morphisms
            .into_iter()
            .filter(|m| !(raw.identities.get(&m.dom) == Some(&m.name) && implicit(&m.dom, &m.name)))
            .collect();
        CategoryBlock {
            objects: raw.objects,
            morphisms,
            identities,
            composites: raw.composites,
        }
    }
}

fn families(cat: &FiniteCategory, block: &Families) -> Result<Vec<Vec<MorphSet>>, SiteError> {
    let mut out = vec![Vec::new(); cat.n_objects()];
    for (object, lists) in block {
        let c = lookup_object(cat, object)?;
        for list in lists {
            let set = list
                .iter()
                .map(|m| lookup_morphism(cat, m))
                .collect::<Result<MorphSet, _>>()?;
            out[c].push(set);
        }
    }
    Ok(out)
}

fn families_block(cat: &FiniteCategory, j: &GrothendieckTopology) -> Families {
    (0..cat.n_objects())
        .map(|c| {
            let lists = j
                .covering(c)
                .iter()
                .map(|s| s.iter().map(|f| cat.morphism_name(f).to_string()).collect())
                .collect();
            (cat.object_name(c).to_string(), lists)
        })
        .collect()
}

impl TopologyBlock {
    pub fn build(&self, cat: &FiniteCategory) -> Result<GrothendieckTopology, SiteError> {
        match self {
            TopologyBlock::Named(NamedTopology::Trivial) => Ok(trivial_topology(cat)),
            TopologyBlock::Named(NamedTopology::Maximal) => Ok(maximal_topology(cat)),
            TopologyBlock::Named(NamedTopology::Atomic) => {
                atomic_topology(cat).map_err(|e| match e {
                    TopologyError::RightOreFails { f, g, .. } => SiteError::RightOreFails { f, g },
                    other => SiteError::Topology(other),
                })
            }
            TopologyBlock::Coverage(block) => {
                generated_topology(cat, &families(cat, block)?).map_err(SiteError::Topology)
            }
            TopologyBlock::Covering(block) => {
                let j = GrothendieckTopology::from_covering(families(cat, block)?);
                is_topology(cat, &j).map_err(SiteError::Axiom)?;
                Ok(j)
            }
        }
    }

    /// The explicit covering assignment of `j`.
    pub fn explicit(cat: &FiniteCategory, j: &GrothendieckTopology) -> Self {
        TopologyBlock::Covering(families_block(cat, j))
    }
}

impl PresheafBlock {
    pub fn build(&self, cat: &FiniteCategory) -> Result<Presheaf, SiteError> {
        let err = |source| SiteError::Presheaf {
            name: self.name.clone(),
            source,
        };
        for o in self.values.keys() {
            lookup_object(cat, o)?;
        }
        for m in self.actions.keys() {
            lookup_morphism(cat, m)?;
        }
        let sizes: Vec<usize> = cat
            .objects()
            .iter()
            .map(|o| {
                self.values
                    .get(o)
                    .copied()
                    .ok_or_else(|| err(SheafError::Shape(format!("no value at `{o}`"))))
            })
            .collect::<Result<_, _>>()?;
        let actions = (0..cat.n_morphisms())
            .map(|f| match self.actions.get(cat.morphism_name(f)) {
                Some(table) => Ok(table.clone()),
                None if cat.is_identity(f) => Ok((0..sizes[cat.dom(f)]).collect()),
                None => Err(err(SheafError::Shape(format!(
                    "no action for `{}`",
                    cat.morphism_name(f)
                )))),
            })
            .collect::<Result<_, _>>()?;
        Presheaf::new(cat, sizes, actions).map_err(err)
    }

    pub fn from_presheaf(cat: &FiniteCategory, name: &str, p: &Presheaf) -> Self {
        PresheafBlock {
            name: name.to_string(),
            values: (0..cat.n_objects())
                .map(|c| (cat.object_name(c).to_string(), p.size(c)))
                .collect(),
            actions: (0..cat.n_morphisms())
                .filter(|&f| !cat.is_identity(f))
                .map(|f| (cat.morphism_name(f).to_string(), p.action(f).to_vec()))
                .collect(),
        }
    }
}

impl SubcategoryBlock {
    pub fn build(&self, cat: &FiniteCategory) -> Result<Subcategory, SiteError> {
        for o in &self.objects {
            lookup_object(cat, o)?;
        }
        for m in &self.morphisms {
            lookup_morphism(cat, m)?;
        }
        Ok(Subcategory::from_names(
            cat,
            &self.objects,
            &self.morphisms,
        )?)
    }

    pub fn from_subcategory(cat: &FiniteCategory, name: &str, sub: &Subcategory) -> Self {
        SubcategoryBlock {
            name: name.to_string(),
            objects: sub
                .objects()
                .iter()
                .map(|c| cat.object_name(c).to_string())
                .collect(),
            morphisms: sub
                .morphisms()
                .iter()
                .filter(|&f| !cat.is_identity(f))
                .map(|f| cat.morphism_name(f).to_string())
                .collect(),
        }
    }
}

impl SiteFile {
    pub fn build(&self) -> Result<Site, SiteError> {
        if self.schema != SCHEMA {
            return Err(SiteError::Schema(self.schema.clone()));
        }
        let category = validate_category(&self.category.to_raw())?;
        let topology = self.topology.build(&category)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut fresh = |name: &str| {
            if seen.insert(name.to_string()) {
                Ok(())
            } else {
                Err(SiteError::DuplicateBlock(name.to_string()))
            }
        };
        let mut subcategories = Vec::new();
        for block in &self.subcategories {
            fresh(&block.name)?;
            subcategories.push((block.name.clone(), block.build(&category)?));
        }
        let mut presheaves = Vec::new();
        for block in &self.presheaves {
            fresh(&block.name)?;
            presheaves.push((block.name.clone(), block.build(&category)?));
        }
        Ok(Site {
            name: self.name.clone(),
            category,
            topology,
            subcategories,
            presheaves,
        })
    }

    /// A site file describing `site`, with the topology written out explicitly.
    pub fn from_site(site: &Site) -> Self {
        let cat = &site.category;
        SiteFile {
            schema: SCHEMA.to_string(),
            name: site.name.clone(),
            category: CategoryBlock::from_category(cat),
            topology: TopologyBlock::explicit(cat, &site.topology),
            subcategories: site
                .subcategories
                .iter()
                .map(|(n, s)| SubcategoryBlock::from_subcategory(cat, n, s))
                .collect(),
            presheaves: site
                .presheaves
                .iter()
                .map(|(n, p)| PresheafBlock::from_presheaf(cat, n, p))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("site files serialize") + "\n"
    }
}

/// Full subcategory on the named objects.
pub fn full_subcategory(cat: &FiniteCategory, objects: &[usize]) -> Subcategory {
    Subcategory::full(cat, objects.iter().copied().collect::<ObjSet>())
}
