//! Finite limits (objectwise) and colimits (objectwise, then sheafified).

use serde::{Deserialize, Serialize};

use super::{sheafify, NatTransformation, Presheaf};
use crate::category::FiniteCategory;
use crate::topology::GrothendieckTopology;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub apex: Presheaf,
    pub legs: Vec<NatTransformation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocone {
    pub apex: Presheaf,
    pub legs: Vec<NatTransformation>,
}

/// A kernel pair: the pullback of a map along itself.
pub type KernelPair = Cone;

/// The subpresheaf of `p` on the marked elements, which must be closed under
/// the actions, with its inclusion.
pub(crate) fn subpresheaf(
    cat: &FiniteCategory,
    p: &Presheaf,
    keep: &[Vec<bool>],
) -> (Presheaf, NatTransformation) {
    let kept: Vec<Vec<usize>> = keep
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &k)| k)
                .map(|(x, _)| x)
                .collect()
        })
        .collect();
    let local = |c: usize, x: usize| {
        kept[c]
            .binary_search(&x)
            .expect("subpresheaf is closed under actions")
    };
    let actions = (0..cat.n_morphisms())
        .map(|f| {
            let (a, b) = (cat.dom(f), cat.cod(f));
            kept[b].iter().map(|&x| local(a, p.act(f, x))).collect()
        })
        .collect();
    let sub = Presheaf::new_unchecked(kept.iter().map(Vec::len).collect(), actions);
    (sub, NatTransformation { components: kept })
}

pub fn terminal(cat: &FiniteCategory) -> Presheaf {
    Presheaf::terminal(cat)
}

/// The initial sheaf: the sheafified empty presheaf.
pub fn initial(cat: &FiniteCategory, j: &GrothendieckTopology) -> Presheaf {
    sheafify(cat, j, &Presheaf::empty(cat)).sheaf
}

/// `p × q`; the pair `(x, y)` at `c` has index `x · |q(c)| + y`.
pub fn product(cat: &FiniteCategory, p: &Presheaf, q: &Presheaf) -> Cone {
    let pair = |c: usize, x: usize, y: usize| x * q.size(c) + y;
    let actions = (0..cat.n_morphisms())
        .map(|f| {
            let (a, b) = (cat.dom(f), cat.cod(f));
            (0..p.size(b))
                .flat_map(|x| (0..q.size(b)).map(move |y| pair(a, p.act(f, x), q.act(f, y))))
                .collect()
        })
        .collect();
    let sizes = (0..cat.n_objects())
        .map(|c| p.size(c) * q.size(c))
        .collect();
    let first = (0..cat.n_objects())
        .map(|c| (0..p.size(c) * q.size(c)).map(|i| i / q.size(c)).collect())
        .collect();
    let second = (0..cat.n_objects())
        .map(|c| (0..p.size(c) * q.size(c)).map(|i| i % q.size(c)).collect())
        .collect();
    Cone {
        apex: Presheaf::new_unchecked(sizes, actions),
        legs: vec![
            NatTransformation { components: first },
            NatTransformation { components: second },
        ],
    }
}

/// The equalizer of `s, t: p → q`, as a subpresheaf of `p`.
pub fn equalizer(
    cat: &FiniteCategory,
    p: &Presheaf,
    s: &NatTransformation,
    t: &NatTransformation,
) -> Cone {
    let keep: Vec<Vec<bool>> = (0..cat.n_objects())
        .map(|c| {
            (0..p.size(c))
                .map(|x| s.apply(c, x) == t.apply(c, x))
                .collect()
        })
        .collect();
    let (apex, inclusion) = subpresheaf(cat, p, &keep);
    Cone {
        apex,
        legs: vec![inclusion],
    }
}

/// The pullback of `s: p → r` and `t: q → r`.
pub fn pullback(
    cat: &FiniteCategory,
    p: &Presheaf,
    q: &Presheaf,
    s: &NatTransformation,
    t: &NatTransformation,
) -> Cone {
    let prod = product(cat, p, q);
    let keep: Vec<Vec<bool>> = (0..cat.n_objects())
        .map(|c| {
            (0..prod.apex.size(c))
                .map(|i| {
                    s.apply(c, prod.legs[0].apply(c, i)) == t.apply(c, prod.legs[1].apply(c, i))
                })
                .collect()
        })
        .collect();
    let (apex, inclusion) = subpresheaf(cat, &prod.apex, &keep);
    let legs = prod.legs.iter().map(|leg| inclusion.then(leg)).collect();
    Cone { apex, legs }
}

pub fn kernel_pair(cat: &FiniteCategory, p: &Presheaf, t: &NatTransformation) -> KernelPair {
    pullback(cat, p, p, t, t)
}

/// The coproduct of two sheaves: objectwise disjoint union, then sheafified.
pub fn coproduct(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    p: &Presheaf,
    q: &Presheaf,
) -> Cocone {
    let actions = (0..cat.n_morphisms())
        .map(|f| {
            let (a, b) = (cat.dom(f), cat.cod(f));
            let left = p.action(f).iter().copied();
            let right = q.action(f).iter().map(|&y| p.size(a) + y);
            debug_assert_eq!(p.action(f).len() + q.action(f).len(), p.size(b) + q.size(b));
            left.chain(right).collect()
        })
        .collect();
    let sizes = (0..cat.n_objects())
        .map(|c| p.size(c) + q.size(c))
        .collect();
    let sum = Presheaf::new_unchecked(sizes, actions);
    let inl = NatTransformation {
        components: (0..cat.n_objects())
            .map(|c| (0..p.size(c)).collect())
            .collect(),
    };
    let inr = NatTransformation {
        components: (0..cat.n_objects())
            .map(|c| (p.size(c)..p.size(c) + q.size(c)).collect())
            .collect(),
    };
    let a = sheafify(cat, j, &sum);
    Cocone {
        legs: vec![inl.then(&a.unit), inr.then(&a.unit)],
        apex: a.sheaf,
    }
}
