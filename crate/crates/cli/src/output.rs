//! Serializable shapes of the command outputs. Maps are `BTreeMap`s and
//! lists follow index order, so JSON output is byte-stable.

use std::collections::BTreeMap;

use finsite::classify::{classify_report, comparison_functors, RoundTrip, SiteReport};
use finsite::density::{is_dense, DenseFamily, DensityFailure, DensityVerdict};
use finsite::io::{Families, PresheafBlock, Site, TopologyBlock};
use finsite::lattice::{enumerate_topologies, max_assignments};
use finsite::sheaf::{
    canonical_topology, is_sheaf, sheafify, Presheaf, SheafError, Sheafification,
};
use finsite::{FiniteCategory, GrothendieckTopology, TopologyLattice};
use serde::Serialize;

fn covering(cat: &FiniteCategory, j: &GrothendieckTopology) -> Families {
    match TopologyBlock::explicit(cat, j) {
        TopologyBlock::Covering(f) => f,
        _ => unreachable!("explicit blocks list covering sieves"),
    }
}

#[derive(Serialize)]
pub struct TopologyEntry {
    pub index: usize,
    pub covering: Families,
}

#[derive(Serialize)]
pub struct LatticeOutput {
    pub site: String,
    pub count: usize,
    /// Index of the site's own topology.
    pub site_topology: usize,
    pub canonical: usize,
    pub topologies: Vec<TopologyEntry>,
    /// Covering pairs `[lower, upper]` of the inclusion order.
    pub hasse: Vec<[usize; 2]>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
}

pub fn lattice_output(site: &Site, lattice: &TopologyLattice) -> LatticeOutput {
    let n = lattice.len();
    let strictly_below = |a: usize, b: usize| a != b && lattice.le(a, b);
    let hasse = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            strictly_below(a, b) && !(0..n).any(|k| strictly_below(a, k) && strictly_below(k, b))
        })
        .map(|(a, b)| [a, b])
        .collect();
    LatticeOutput {
        site: site.name.clone(),
        count: n,
        site_topology: lattice
            .index_of(&site.topology)
            .expect("the site's topology is enumerated"),
        canonical: canonical_topology(&site.category, lattice),
        topologies: lattice
            .elements()
            .iter()
            .enumerate()
            .map(|(index, j)| TopologyEntry {
                index,
                covering: covering(&site.category, j),
            })
            .collect(),
        hasse,
        meet: (0..n)
            .map(|a| (0..n).map(|b| lattice.meet(a, b)).collect())
            .collect(),
        join: (0..n)
            .map(|a| (0..n).map(|b| lattice.join(a, b)).collect())
            .collect(),
    }
}

#[derive(Serialize)]
#[serde(tag = "condition")]
pub enum NamedFailure {
    #[serde(rename = "i")]
    Covering { object: String },
    #[serde(rename = "ii")]
    Factorization { morphism: String },
}

fn named_failures(cat: &FiniteCategory, failures: &[DensityFailure]) -> Vec<NamedFailure> {
    failures
        .iter()
        .map(|f| match *f {
            DensityFailure::Covering { object } => NamedFailure::Covering {
                object: cat.object_name(object).into(),
            },
            DensityFailure::Factorization { morphism } => NamedFailure::Factorization {
                morphism: cat.morphism_name(morphism).into(),
            },
        })
        .collect()
}

#[derive(Serialize)]
pub struct FamilyOutput {
    pub members: Vec<usize>,
    pub minimum: usize,
    pub minimum_covering: Families,
    pub up_closed: bool,
    pub meet_closed: bool,
}

#[derive(Serialize)]
pub struct DensityOutput {
    pub site: String,
    pub subcategory: String,
    pub dense: bool,
    pub failures: Vec<NamedFailure>,
    /// Absent when the topology lattice is over the enumeration bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_family: Option<FamilyOutput>,
}

pub fn density_output(
    site: &Site,
    sub: &str,
    verdict: &DensityVerdict,
    family: Option<(&TopologyLattice, &DenseFamily)>,
) -> DensityOutput {
    DensityOutput {
        site: site.name.clone(),
        subcategory: sub.to_string(),
        dense: verdict.dense,
        failures: named_failures(&site.category, &verdict.failures),
        dense_family: family.map(|(l, f)| FamilyOutput {
            members: f.members.clone(),
            minimum: f.minimum,
            minimum_covering: covering(&site.category, l.get(f.minimum)),
            up_closed: f.up_closed,
            meet_closed: f.meet_closed,
        }),
    }
}

#[derive(Serialize)]
pub struct SheafifyOutput {
    pub site: String,
    pub presheaf: String,
    pub input_is_sheaf: bool,
    pub sheaf: PresheafBlock,
    /// Unit component at each object, as the image of each input element.
    pub unit: BTreeMap<String, Vec<usize>>,
    pub unit_is_iso: bool,
}

pub fn sheafify_output(
    site: &Site,
    name: &str,
    p: &Presheaf,
    a: &Sheafification,
) -> SheafifyOutput {
    let cat = &site.category;
    SheafifyOutput {
        site: site.name.clone(),
        presheaf: name.to_string(),
        input_is_sheaf: is_sheaf(cat, &site.topology, p).is_ok(),
        sheaf: PresheafBlock::from_presheaf(cat, name, &a.sheaf),
        unit: (0..cat.n_objects())
            .map(|c| (cat.object_name(c).to_string(), a.unit.components[c].clone()))
            .collect(),
        unit_is_iso: a.unit.is_bijective(&a.sheaf),
    }
}

#[derive(Serialize)]
pub struct LatticeSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site_topology: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_covering: Option<Families>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Serialize)]
pub struct SubcategorySummary {
    pub name: String,
    pub dense: bool,
    pub failures: Vec<NamedFailure>,
    /// Unit and counit checks on the sheafification of each named presheaf.
    pub comparison: BTreeMap<String, RoundTrip>,
}

#[derive(Serialize)]
pub struct PresheafSummary {
    pub name: String,
    pub sizes: Vec<usize>,
    pub is_sheaf: bool,
    pub sheafified_sizes: Vec<usize>,
}

#[derive(Serialize)]
pub struct ReportBundle {
    pub classification: SiteReport,
    pub lattice: LatticeSummary,
    pub subcategories: Vec<SubcategorySummary>,
    pub presheaves: Vec<PresheafSummary>,
}

pub fn report_bundle(site: &Site) -> Result<ReportBundle, SheafError> {
    let cat = &site.category;
    let j = &site.topology;
    let classification = classify_report(&site.name, cat, j)?;
    let lattice = match enumerate_topologies(cat, max_assignments()) {
        Ok(l) => LatticeSummary {
            count: Some(l.len()),
            site_topology: l.index_of(j),
            canonical_covering: Some(covering(cat, l.get(canonical_topology(cat, &l)))),
            skipped: None,
        },
        Err(e) => LatticeSummary {
            count: None,
            site_topology: None,
            canonical_covering: None,
            skipped: Some(e.to_string()),
        },
    };
    let sheaves: Vec<(&String, Presheaf)> = site
        .presheaves
        .iter()
        .map(|(name, p)| (name, sheafify(cat, j, p).sheaf))
        .collect();
    let mut subcategories = Vec::new();
    for (name, sub) in &site.subcategories {
        let verdict = is_dense(cat, j, sub);
        let mut comparison = BTreeMap::new();
        if let Ok(cmp) = comparison_functors(cat, j, sub) {
            for (pname, g) in &sheaves {
                let f = cmp.restrict(g);
                if let Ok(rt) = cmp.round_trip(cat, j, g, &f) {
                    comparison.insert((*pname).clone(), rt);
                }
            }
        }
        subcategories.push(SubcategorySummary {
            name: name.clone(),
            dense: verdict.dense,
            failures: named_failures(cat, &verdict.failures),
            comparison,
        });
    }
    let presheaves = site
        .presheaves
        .iter()
        .map(|(name, p)| PresheafSummary {
            name: name.clone(),
            sizes: p.sizes().to_vec(),
            is_sheaf: is_sheaf(cat, j, p).is_ok(),
            sheafified_sizes: sheafify(cat, j, p).sheaf.sizes().to_vec(),
        })
        .collect();
    Ok(ReportBundle {
        classification,
        lattice,
        subcategories,
        presheaves,
    })
}
