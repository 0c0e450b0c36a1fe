//! Small named categories used throughout the test corpus.

use crate::category::{validate_category, CategoryError, FiniteCategory, RawCategory, RawMorphism};

/// Builds a category whose identities are named `id_<object>` and need not
/// be listed. `composites` are `(g, f, g∘f)` for non-identity pairs.
pub fn table(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    composites: &[(&str, &str, &str)],
) -> Result<FiniteCategory, CategoryError> {
    let mut raw = RawCategory {
        objects: objects.iter().map(|o| o.to_string()).collect(),
        ..RawCategory::default()
    };
    for o in objects {
        let id = format!("id_{o}");
        raw.identities.insert(o.to_string(), id.clone());
        raw.morphisms.push(RawMorphism {
            name: id,
            dom: o.to_string(),
            cod: o.to_string(),
        });
    }
    for (name, dom, cod) in morphisms {
        raw.morphisms.push(RawMorphism {
            name: name.to_string(),
            dom: dom.to_string(),
            cod: cod.to_string(),
        });
    }
    raw.composites = composites
        .iter()
        .map(|(g, f, h)| [g.to_string(), f.to_string(), h.to_string()])
        .collect();
    validate_category(&raw)
}

/// A one-object category on `*` with identity `1`.
pub fn monoid(
    elements: &[&str],
    products: &[(&str, &str, &str)],
) -> Result<FiniteCategory, CategoryError> {
    let mut raw = RawCategory {
        objects: vec!["*".into()],
        ..RawCategory::default()
    };
    raw.identities.insert("*".into(), "1".into());
    for e in std::iter::once(&"1").chain(elements) {
        raw.morphisms.push(RawMorphism {
            name: e.to_string(),
            dom: "*".into(),
            cod: "*".into(),
        });
    }
    raw.composites = products
        .iter()
        .map(|(g, f, h)| [g.to_string(), f.to_string(), h.to_string()])
        .collect();
    validate_category(&raw)
}

/// One object, one morphism.
pub fn term() -> FiniteCategory {
    monoid(&[], &[]).unwrap()
}

/// `f: a → b`.
pub fn arrow() -> FiniteCategory {
    table(&["a", "b"], &[("f", "a", "b")], &[]).unwrap()
}

/// Parallel pair `f, g: a ⇉ b`.
pub fn pair() -> FiniteCategory {
    table(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")], &[]).unwrap()
}

/// The poset `x → z ← y` (arrows `u`, `v`).
pub fn v_poset() -> FiniteCategory {
    table(&["x", "y", "z"], &[("u", "x", "z"), ("v", "y", "z")], &[]).unwrap()
}

/// The commutative square poset `b ≤ x, y ≤ t`.
pub fn square() -> FiniteCategory {
    table(
        &["b", "x", "y", "t"],
        &[
            ("bx", "b", "x"),
            ("by", "b", "y"),
            ("xt", "x", "t"),
            ("yt", "y", "t"),
            ("bt", "b", "t"),
        ],
        &[("xt", "bx", "bt"), ("yt", "by", "bt")],
    )
    .unwrap()
}

/// The group of order two, `s∘s = 1`.
pub fn z2() -> FiniteCategory {
    monoid(&["s"], &[("s", "s", "1")]).unwrap()
}

/// The monoid `{1, e}` with `e∘e = e`.
pub fn idem() -> FiniteCategory {
    monoid(&["e"], &[("e", "e", "e")]).unwrap()
}

/// Two objects, identities only.
pub fn discrete2() -> FiniteCategory {
    table(&["x", "y"], &[], &[]).unwrap()
}

/// The fixed corpus members, in canonical order.
pub fn named() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("term", term()),
        ("arrow", arrow()),
        ("pair", pair()),
        ("v-poset", v_poset()),
        ("square", square()),
        ("z2", z2()),
        ("idem", idem()),
        ("discrete2", discrete2()),
    ]
}
