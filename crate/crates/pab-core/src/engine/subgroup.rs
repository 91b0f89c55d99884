//! Subgroups as explicit element sets, and breadth-first closure.

use std::collections::BTreeSet;

use super::{cap_exceeded, EngineError, FiniteGroup};

/// A subgroup given by its sorted member list, together with the generator
/// list that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup<E> {
    elements: Vec<E>,
    generators: Vec<E>,
}

impl<E: Clone + Eq + Ord> Subgroup<E> {
    pub(crate) fn from_sorted(elements: Vec<E>, generators: Vec<E>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup {
            elements,
            generators,
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup<E>) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }
}

/// Smallest subgroup containing the given generators: breadth-first closure
/// under right multiplication. Closure under the operation suffices in a
/// finite group, where every inverse is a positive power.
pub fn subgroup_closure<G: FiniteGroup>(
    group: &G,
    generators: &[G::Elem],
    cap: u64,
) -> Result<Subgroup<G::Elem>, EngineError> {
    let mut members: BTreeSet<G::Elem> = BTreeSet::new();
    members.insert(group.identity());
    let mut frontier: Vec<G::Elem> = vec![group.identity()];
    while let Some(h) = frontier.pop() {
        for gen in generators {
            let prod = group.op(&h, gen);
            if members.insert(prod.clone()) {
                if members.len() as u64 > cap {
                    return Err(cap_exceeded("subgroup closure", cap));
                }
                frontier.push(prod);
            }
        }
    }
    Ok(Subgroup {
        elements: members.into_iter().collect(),
        generators: generators.to_vec(),
    })
}

/// Elements commuting with everything: the brute-force center, quadratic in
/// the group order. [`crate::ConcreteGroup::center`] is the fast equivalent
/// for presented groups.
pub fn center<G: FiniteGroup>(group: &G) -> Result<Subgroup<G::Elem>, EngineError> {
    let elems = group.elements()?;
    let members: Vec<G::Elem> = elems
        .iter()
        .filter(|a| elems.iter().all(|b| group.op(a, b) == group.op(b, a)))
        .cloned()
        .collect();
    Ok(Subgroup {
        generators: members.clone(),
        elements: members,
    })
}

/// A subgroup viewed as a group in its own right, with the operation
/// inherited from the parent.
pub struct SubgroupView<'a, G: FiniteGroup> {
    parent: &'a G,
    subgroup: &'a Subgroup<G::Elem>,
}

impl<'a, G: FiniteGroup> SubgroupView<'a, G> {
    pub fn new(parent: &'a G, subgroup: &'a Subgroup<G::Elem>) -> Self {
        SubgroupView { parent, subgroup }
    }
}

impl<G: FiniteGroup> FiniteGroup for SubgroupView<'_, G> {
    type Elem = G::Elem;

    fn identity(&self) -> G::Elem {
        self.parent.identity()
    }

    fn op(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.parent.op(a, b)
    }

    fn inverse(&self, a: &G::Elem) -> G::Elem {
        self.parent.inverse(a)
    }

    fn elements(&self) -> Result<Vec<G::Elem>, EngineError> {
        Ok(self.subgroup.elements.clone())
    }
}
