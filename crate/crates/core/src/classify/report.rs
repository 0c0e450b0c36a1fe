use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    comparison_functors, is_atomic_site, is_coherent_site, is_locally_connected_site,
    is_regular_site, is_rigid, j_irreducible_objects, separating_set_check,
    terminal_is_indecomposable, CoherentVerdict, RegularVerdict, SeparatingPredicate,
};
use crate::bits::ObjSet;
use crate::category::{has_right_ore, is_cauchy_complete, FiniteCategory, Subcategory};
use crate::objects::{
    is_atom, is_compact_object, is_indecomposable, is_supercompact_object, rep_is_coherent,
    rep_is_compact, rep_is_irreducible, rep_is_regular, rep_is_supercompact, CompactVerdict,
    ProbeVerdict,
};
use crate::sheaf::{is_subcanonical, representable_sheaf, SheafError};
use crate::topology::{trivial_topology, GrothendieckTopology};

/// A yes/no answer with an optional human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn no(witness: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness.into()),
        }
    }
}

/// Properties of one representable sheaf `l(c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectReport {
    pub object: String,
    pub sheaf_sizes: Vec<usize>,
    pub atom: bool,
    pub indecomposable: bool,
    pub supercompact: bool,
    pub compact: CompactVerdict,
    pub rep_irreducible: bool,
    pub rep_supercompact: bool,
    pub rep_compact: bool,
    pub coherent: ProbeVerdict,
    pub regular: ProbeVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafTypeVerdict {
    /// `None` when the computation licenses no answer.
    pub is_presheaf_topos: Option<bool>,
    pub via: String,
    pub rigid: bool,
    pub subcanonical: bool,
    pub cauchy_complete: bool,
    pub irreducibles: Vec<String>,
    /// Comparison with the irreducible subcategory succeeded and induces the
    /// trivial topology there.
    pub comparison_checked: bool,
}

/// A topos-level conclusion and what licenses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedProperty {
    pub property: String,
    pub license: String,
    pub direction: String,
}

/// A conclusion recomputed along a second route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub premise: String,
    pub conclusion: String,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteReport {
    pub site: String,
    pub objects: Vec<String>,
    pub morphisms: usize,
    pub covering: Vec<Vec<Vec<String>>>,
    pub subcanonical: Verdict,
    pub locally_connected: Verdict,
    pub atomic: Verdict,
    pub right_ore: bool,
    pub irreducibles: Vec<String>,
    pub rigid: Verdict,
    pub coherent: CoherentVerdict,
    pub regular: RegularVerdict,
    pub cauchy_complete: bool,
    pub separating_indecomposable: Verdict,
    pub separating_atoms: Verdict,
    pub terminal_indecomposable: bool,
    pub presheaf_type: PresheafTypeVerdict,
    pub representables: Vec<ObjectReport>,
    pub derived: Vec<DerivedProperty>,
    pub cross_checks: Vec<CrossCheck>,
    pub degeneracies: Vec<String>,
}

fn names(cat: &FiniteCategory, arrows: impl IntoIterator<Item = usize>) -> Vec<String> {
    arrows
        .into_iter()
        .map(|f| cat.morphism_name(f).to_string())
        .collect()
}

fn object_report(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    c: usize,
) -> Result<ObjectReport, SheafError> {
    let l = representable_sheaf(cat, j, c)?.sheaf;
    Ok(ObjectReport {
        object: cat.object_name(c).to_string(),
        sheaf_sizes: l.sizes().to_vec(),
        atom: is_atom(cat, j, &l)?,
        indecomposable: is_indecomposable(cat, j, &l)?,
        supercompact: is_supercompact_object(cat, j, &l)?,
        compact: is_compact_object(cat, j, &l)?,
        rep_irreducible: rep_is_irreducible(cat, j, c)?,
        rep_supercompact: rep_is_supercompact(cat, j, c)?,
        rep_compact: rep_is_compact(cat, j, c)?,
        coherent: rep_is_coherent(cat, j, c)?,
        regular: rep_is_regular(cat, j, c)?,
    })
}

/// Decides whether the sheaf topos is a presheaf topos, as far as rigidity
/// licenses an answer.
///
/// Rigidity always gives "yes", checked by comparison with the full
/// subcategory on the irreducible objects. A negative answer is only given
/// for subcanonical sites on Cauchy-complete categories, where rigidity is
/// also necessary.
pub fn presheaf_type_test(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
) -> Result<PresheafTypeVerdict, SheafError> {
    let rigid = is_rigid(cat, j).is_ok();
    let subcanonical = is_subcanonical(cat, j).is_ok();
    let cauchy_complete = is_cauchy_complete(cat).is_ok();
    let irreducible = j_irreducible_objects(cat, j);
    let comparison_checked = rigid && {
        let sub = Subcategory::full(cat, irreducible.iter().copied().collect::<ObjSet>());
        comparison_functors(cat, j, &sub)
            .is_ok_and(|cmp| *cmp.topology() == trivial_topology(cmp.subcategory()))
    };
    let (is_presheaf_topos, via) = if rigid {
        (
            Some(true),
            "rigid topology: equivalent to presheaves on the irreducible objects",
        )
    } else if subcanonical && cauchy_complete {
        (
            Some(false),
            "not rigid, on a subcanonical site over a Cauchy-complete category",
        )
    } else {
        (
            None,
            "inapplicable: not rigid, and the converse needs a subcanonical Cauchy-complete site",
        )
    };
    Ok(PresheafTypeVerdict {
        is_presheaf_topos,
        via: via.to_string(),
        rigid,
        subcanonical,
        cauchy_complete,
        irreducibles: irreducible
            .iter()
            .map(|&c| cat.object_name(c).to_string())
            .collect(),
        comparison_checked,
    })
}

fn derive(property: &str, license: &str) -> DerivedProperty {
    DerivedProperty {
        property: property.into(),
        license: license.into(),
        direction: "if".into(),
    }
}

/// Runs every site predicate and every representable object predicate.
pub fn classify_report(
    site: &str,
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
) -> Result<SiteReport, SheafError> {
    let representables = (0..cat.n_objects())
        .into_par_iter()
        .map(|c| object_report(cat, j, c))
        .collect::<Result<Vec<_>, _>>()?;

    let subcanonical = match is_subcanonical(cat, j) {
        Ok(()) => Verdict::yes(),
        Err(w) => Verdict::no(format!(
            "representable on `{}` is not a sheaf",
            cat.object_name(w.representable)
        )),
    };
    let locally_connected = match is_locally_connected_site(cat, j) {
        Ok(()) => Verdict::yes(),
        Err(s) => Verdict::no(format!(
            "covering sieve {{{}}} on `{}` is not connected",
            names(cat, s.arrows).join(", "),
            cat.object_name(s.base)
        )),
    };
    let right_ore = has_right_ore(cat);
    let atomic = if is_atomic_site(cat, j) {
        Verdict::yes()
    } else if let Err(w) = &right_ore {
        Verdict::no(format!(
            "right Ore condition fails at ({}, {})",
            cat.morphism_name(w.f),
            cat.morphism_name(w.g)
        ))
    } else {
        Verdict::no("topology differs from the atomic topology")
    };
    let rigid = match is_rigid(cat, j) {
        Ok(()) => Verdict::yes(),
        Err(c) => Verdict::no(format!(
            "`{}` is not covered by arrows from irreducible objects",
            cat.object_name(c)
        )),
    };
    let coherent = is_coherent_site(cat, j);
    let regular = is_regular_site(cat, j);
    let separating = |p| -> Result<Verdict, SheafError> {
        Ok(match separating_set_check(cat, j, p)? {
            None => Verdict::yes(),
            Some(c) => Verdict::no(format!("l({}) fails", cat.object_name(c))),
        })
    };
    let separating_indecomposable = separating(SeparatingPredicate::Indecomposable)?;
    let separating_atoms = separating(SeparatingPredicate::Atom)?;
    let terminal_indecomposable = terminal_is_indecomposable(cat, j)?;
    let presheaf_type = presheaf_type_test(cat, j)?;

    let mut derived = Vec::new();
    if separating_indecomposable.holds {
        derived.push(derive(
            "locally connected topos",
            "the l(c) form a separating set of indecomposable objects",
        ));
        if terminal_indecomposable {
            derived.push(derive(
                "connected and locally connected topos",
                "the separating set of indecomposables may be extended by the indecomposable terminal object",
            ));
        }
    }
    if separating_atoms.holds {
        derived.push(derive(
            "atomic topos",
            "the l(c) form a separating set of atoms",
        ));
    }
    if presheaf_type.is_presheaf_topos == Some(true) {
        derived.push(derive("presheaf topos", &presheaf_type.via));
    }
    if presheaf_type.is_presheaf_topos == Some(false) {
        derived.push(DerivedProperty {
            property: "not a presheaf topos".into(),
            license: presheaf_type.via.clone(),
            direction: "only if".into(),
        });
    }

    let all = |pred: fn(&ObjectReport) -> bool| representables.iter().all(pred);
    let mut cross_checks = Vec::new();
    if locally_connected.holds {
        cross_checks.push(CrossCheck {
            premise: "locally connected site".into(),
            conclusion: "every l(c) is indecomposable".into(),
            consistent: all(|r| r.indecomposable),
        });
    }
    if atomic.holds {
        cross_checks.push(CrossCheck {
            premise: "atomic site".into(),
            conclusion: "every l(c) is an atom".into(),
            consistent: all(|r| r.atom),
        });
    }
    if rigid.holds {
        cross_checks.push(CrossCheck {
            premise: "rigid site".into(),
            conclusion: "comparison with the irreducible objects induces the trivial topology"
                .into(),
            consistent: presheaf_type.comparison_checked,
        });
    }
    if coherent.coherent {
        cross_checks.push(CrossCheck {
            premise: "coherent site".into(),
            conclusion: "every l(c) is coherent (probe-restricted)".into(),
            consistent: all(|r| r.coherent.holds),
        });
    }
    if regular.regular() {
        cross_checks.push(CrossCheck {
            premise: "regular site".into(),
            conclusion: "every l(c) is regular (probe-restricted)".into(),
            consistent: all(|r| r.regular.holds),
        });
    }
    if subcanonical.holds {
        cross_checks.push(CrossCheck {
            premise: "subcanonical site".into(),
            conclusion: "sieve criterion for supercompactness agrees with the subobject lattice"
                .into(),
            consistent: all(|r| r.rep_supercompact == r.supercompact),
        });
    }
    cross_checks.push(CrossCheck {
        premise: "any site".into(),
        conclusion: "irreducible ⇒ supercompact ⇒ indecomposable for every l(c)".into(),
        consistent: all(|r| {
            (!r.rep_irreducible || r.rep_supercompact) && (!r.rep_supercompact || r.indecomposable)
        }),
    });

    let mut degeneracies = vec![
        "compactness holds for every finite sheaf".to_string(),
        "coherence of the site reduces to cartesianness: every finite sieve is finitely generated"
            .to_string(),
        "coherent and regular object verdicts only probe maps out of representables".to_string(),
    ];
    if regular.readings_disagree {
        degeneracies.push("the two readings of a regular site disagree".to_string());
    }

    Ok(SiteReport {
        site: site.to_string(),
        objects: cat.objects().to_vec(),
        morphisms: cat.n_morphisms(),
        covering: (0..cat.n_objects())
            .map(|c| j.covering(c).iter().map(|&s| names(cat, s)).collect())
            .collect(),
        subcanonical,
        locally_connected,
        atomic,
        right_ore: right_ore.is_ok(),
        irreducibles: presheaf_type.irreducibles.clone(),
        rigid,
        coherent,
        regular,
        cauchy_complete: presheaf_type.cauchy_complete,
        separating_indecomposable,
        separating_atoms,
        terminal_indecomposable,
        presheaf_type,
        representables,
        derived,
        cross_checks,
        degeneracies,
    })
}

fn mark(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl SiteReport {
    /// A plain-text table for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v = |v: &Verdict| match &v.witness {
            Some(w) => format!("{} ({w})", mark(v.holds)),
            None => mark(v.holds).to_string(),
        };
        let _ = writeln!(
            out,
            "site {} : {} objects, {} morphisms",
            self.site,
            self.objects.len(),
            self.morphisms
        );
        let rows = [
            ("subcanonical", v(&self.subcanonical)),
            ("locally connected", v(&self.locally_connected)),
            ("atomic", v(&self.atomic)),
            ("right Ore", mark(self.right_ore).to_string()),
            ("rigid", v(&self.rigid)),
            (
                "irreducibles",
                format!("{{{}}}", self.irreducibles.join(", ")),
            ),
            ("coherent", mark(self.coherent.coherent).to_string()),
            (
                "regular",
                format!(
                    "{} (single-generated: {}, contains covering generator: {})",
                    mark(self.regular.regular()),
                    mark(self.regular.single_generated),
                    mark(self.regular.contains_covering_generator)
                ),
            ),
            ("Cauchy complete", mark(self.cauchy_complete).to_string()),
            (
                "presheaf topos",
                match self.presheaf_type.is_presheaf_topos {
                    Some(b) => format!("{} ({})", mark(b), self.presheaf_type.via),
                    None => format!("undetermined ({})", self.presheaf_type.via),
                },
            ),
        ];
        for (k, val) in rows {
            let _ = writeln!(out, "  {k:<20} {val}");
        }
        let _ = writeln!(
            out,
            "\n  {:<8} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}",
            "l(c)", "atom", "indec", "scpt", "irred", "rscpt", "coh*", "reg*"
        );
        for r in &self.representables {
            let _ = writeln!(
                out,
                "  {:<8} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}",
                r.object,
                mark(r.atom),
                mark(r.indecomposable),
                mark(r.supercompact),
                mark(r.rep_irreducible),
                mark(r.rep_supercompact),
                mark(r.coherent.holds),
                mark(r.regular.holds)
            );
        }
        if !self.derived.is_empty() {
            let _ = writeln!(out, "\n  derived:");
            for d in &self.derived {
                let _ = writeln!(out, "    {} [{}; {}]", d.property, d.direction, d.license);
            }
        }
        let _ = writeln!(out, "\n  cross-checks:");
        for c in &self.cross_checks {
            let _ = writeln!(
                out,
                "    {}: {} ... {}",
                c.premise,
                c.conclusion,
                if c.consistent { "ok" } else { "FAILED" }
            );
        }
        let _ = writeln!(out, "\n  * probe-restricted");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::MorphSet;
    use crate::catalog;
    use crate::topology::generated_topology;

    #[test]
    fn z2_trivial_report() {
        let z2 = catalog::z2();
        let r = classify_report("z2", &z2, &trivial_topology(&z2)).unwrap();
        assert!(r.atomic.holds && r.representables.iter().all(|o| o.atom));
        assert!(r.cross_checks.iter().all(|c| c.consistent));
        assert_eq!(r.presheaf_type.is_presheaf_topos, Some(true));
        assert!(r.derived.iter().any(|d| d.property == "atomic topos"));
    }

    #[test]
    fn arrow_j2_report() {
        let c = catalog::arrow();
        let f = c.morphism_index("f").unwrap();
        let j2 = generated_topology(&c, &[vec![], vec![MorphSet::singleton(f)]]).unwrap();
        let r = classify_report("arrow-j2", &c, &j2).unwrap();
        assert!(r.locally_connected.holds && r.rigid.holds && !r.subcanonical.holds);
        assert!(r
            .representables
            .iter()
            .all(|o| o.indecomposable && o.sheaf_sizes == [1, 1]));
        assert_eq!(r.irreducibles, vec!["a"]);
        assert!(r.cross_checks.iter().all(|c| c.consistent));
        assert!(r.to_text().contains("locally connected"));
    }

    #[test]
    fn trivial_reports_are_presheaf_toposes() {
        for (name, c) in catalog::named() {
            let r = classify_report(name, &c, &trivial_topology(&c)).unwrap();
            assert!(r.rigid.holds, "{name}");
            assert_eq!(r.irreducibles, c.objects(), "{name}");
            assert!(r.presheaf_type.comparison_checked, "{name}");
            assert!(r.cross_checks.iter().all(|c| c.consistent), "{name}");
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let c = catalog::square();
        let r = classify_report("square", &c, &trivial_topology(&c)).unwrap();
        let back: SiteReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
