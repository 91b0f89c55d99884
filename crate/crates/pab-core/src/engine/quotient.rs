//! Quotients by a central subgroup of order p, the only quotients the
//! pipeline takes (`G/G'` and `Phi(G)/G'`).

use std::collections::BTreeSet;

use super::{EngineError, FiniteGroup, Subgroup};

/// A quotient group whose elements are canonical coset representatives:
/// the lexicographically least member of each coset.
pub struct QuotientGroup<'a, G: FiniteGroup> {
    parent: &'a G,
    kernel: Vec<G::Elem>,
    representatives: Vec<G::Elem>,
}

impl<'a, G: FiniteGroup> QuotientGroup<'a, G> {
    pub fn order(&self) -> u64 {
        self.representatives.len() as u64
    }

    /// Canonical representative of the coset of `e`.
    pub fn canonicalize(&self, e: &G::Elem) -> G::Elem {
        self.kernel
            .iter()
            .map(|n| self.parent.op(e, n))
            .min()
            .expect("kernel is nonempty")
    }
}

/// Forms the quotient of `parent` by `kernel`, which must be central of
/// order exactly p. Centrality is verified against every element.
pub fn quotient_by_central<'a, G: FiniteGroup>(
    parent: &'a G,
    kernel: &Subgroup<G::Elem>,
    p: u64,
) -> Result<QuotientGroup<'a, G>, EngineError> {
    if kernel.order() != p {
        return Err(EngineError::NotOrderP {
            found: kernel.order(),
            prime: p,
        });
    }
    let elements = parent.elements()?;
    for n in kernel.elements() {
        for g in &elements {
            if parent.op(n, g) != parent.op(g, n) {
                return Err(EngineError::NotCentral);
            }
        }
    }
    let quotient = QuotientGroup {
        parent,
        kernel: kernel.elements().to_vec(),
        representatives: Vec::new(),
    };
    let reps: BTreeSet<G::Elem> = elements.iter().map(|e| quotient.canonicalize(e)).collect();
    Ok(QuotientGroup {
        representatives: reps.into_iter().collect(),
        ..quotient
    })
}

impl<G: FiniteGroup> FiniteGroup for QuotientGroup<'_, G> {
    type Elem = G::Elem;

    fn identity(&self) -> G::Elem {
        self.canonicalize(&self.parent.identity())
    }

    fn op(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.canonicalize(&self.parent.op(a, b))
    }

    fn inverse(&self, a: &G::Elem) -> G::Elem {
        self.canonicalize(&self.parent.inverse(a))
    }

    fn elements(&self) -> Result<Vec<G::Elem>, EngineError> {
        Ok(self.representatives.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_group, subgroup_closure, ConcreteGroup, DEFAULT_ENUM_CAP};
    use crate::pcpres::catalog_family;

    fn heis3() -> ConcreteGroup {
        build_group(&catalog_family("heisenberg", 3, 0).unwrap(), DEFAULT_ENUM_CAP).unwrap()
    }

    #[test]
    fn quotient_by_derived_is_abelian() {
        let g = heis3();
        let derived = g.derived_subgroup().unwrap();
        let q = quotient_by_central(&g, &derived, 3).unwrap();
        assert_eq!(q.order(), 9);
        let elems = q.elements().unwrap();
        for a in &elems {
            for b in &elems {
                assert_eq!(q.op(a, b), q.op(b, a));
            }
        }
    }

    #[test]
    fn modular_quotient_is_abelian_of_order_nine() {
        let g = build_group(&catalog_family("modular", 3, 3).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let derived = g.derived_subgroup().unwrap();
        let q = quotient_by_central(&g, &derived, 3).unwrap();
        assert_eq!(q.order(), 9);
        let x = q.canonicalize(&g.generator(0));
        let y = q.canonicalize(&g.generator(1));
        assert_eq!(q.op(&x, &y), q.op(&y, &x));
    }

    #[test]
    fn wrong_order_kernel_is_rejected() {
        let g = heis3();
        let trivial = subgroup_closure(&g, &[], DEFAULT_ENUM_CAP).unwrap();
        assert!(matches!(
            quotient_by_central(&g, &trivial, 3),
            Err(EngineError::NotOrderP { found: 1, prime: 3 })
        ));
    }

    #[test]
    fn non_central_kernel_is_rejected() {
        let g = heis3();
        // <x> has order 3 but x is not central.
        let sub = subgroup_closure(&g, &[g.generator(0)], DEFAULT_ENUM_CAP).unwrap();
        assert!(matches!(
            quotient_by_central(&g, &sub, 3),
            Err(EngineError::NotCentral)
        ));
    }

    #[test]
    fn quotient_multiplication_is_well_defined() {
        let g = heis3();
        let derived = g.derived_subgroup().unwrap();
        let q = quotient_by_central(&g, &derived, 3).unwrap();
        // Any representatives of the same cosets multiply to the same coset.
        for a in q.elements().unwrap() {
            for n in derived.elements() {
                let shifted = g.multiply(&a, n);
                assert_eq!(q.canonicalize(&shifted), a);
            }
        }
    }
}
