//! Property checks for the identities the whole method leans on: p-th
//! powers are central and multiplicative, and commutators have order p.
//!
//! For a pair (x, y) the checks are
//!
//! 1. `[x^p, y] = 1`
//! 2. `[x, y]^p = 1`
//! 3. `(xy)^p = x^p y^p`
//! 4. `(xy)^p = x^p y^p [y,x]^(p(p-1)/2)` (the collection identity that
//!    proves 3 for odd p)
//!
//! Small groups are checked on all ordered pairs; larger ones on seeded
//! uniform samples, so a report is reproducible from its seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{ConcreteGroup, EngineError, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaLaw {
    /// `[x^p, y] = 1`
    PthPowerCentral,
    /// `[x, y]^p = 1`
    CommutatorOrderP,
    /// `(xy)^p = x^p y^p`
    PthPowerMultiplicative,
    /// `(xy)^p = x^p y^p [y,x]^(p(p-1)/2)`
    CollectionExponent,
}

impl LemmaLaw {
    pub fn description(&self) -> &'static str {
        match self {
            LemmaLaw::PthPowerCentral => "[x^p, y] = 1",
            LemmaLaw::CommutatorOrderP => "[x, y]^p = 1",
            LemmaLaw::PthPowerMultiplicative => "(xy)^p = x^p y^p",
            LemmaLaw::CollectionExponent => "(xy)^p = x^p y^p [y,x]^(p(p-1)/2)",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LemmaViolation {
    pub law: LemmaLaw,
    pub x: GroupElement,
    pub y: GroupElement,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub seed: u64,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the lemma identities on all ordered pairs when `|G|^2 <= sample`,
/// otherwise on `sample` pairs drawn uniformly with the given seed.
pub fn check_lemmas(
    group: &ConcreteGroup,
    sample: u64,
    seed: u64,
) -> Result<LemmaReport, EngineError> {
    check_lemmas_with(
        group,
        &|a, b| group.multiply(a, b),
        &|a| group.inverse(a),
        sample,
        seed,
    )
}

/// The checker itself, parameterized over the multiplication so the test
/// suite can feed it a deliberately corrupted product as a negative
/// control.
pub(crate) fn check_lemmas_with(
    group: &ConcreteGroup,
    mult: &dyn Fn(&GroupElement, &GroupElement) -> GroupElement,
    inv: &dyn Fn(&GroupElement) -> GroupElement,
    sample: u64,
    seed: u64,
) -> Result<LemmaReport, EngineError> {
    let p = group.prime();
    let id = group.identity();
    let pow = |a: &GroupElement, mut e: u128| -> GroupElement {
        let mut acc = id.clone();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = mult(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mult(&base, &base);
            }
        }
        acc
    };
    let comm = |a: &GroupElement, b: &GroupElement| -> GroupElement {
        mult(&mult(&inv(a), &inv(b)), &mult(a, b))
    };
    // p(p-1)/2, exact since p is odd.
    let half_pp1 = p as u128 * ((p as u128 - 1) / 2);

    let mut violations = Vec::new();
    let mut check_pair = |x: &GroupElement, y: &GroupElement| {
        let xp = pow(x, p as u128);
        let yp = pow(y, p as u128);
        if comm(&xp, y) != id {
            violations.push(LemmaViolation {
                law: LemmaLaw::PthPowerCentral,
                x: x.clone(),
                y: y.clone(),
            });
        }
        if pow(&comm(x, y), p as u128) != id {
            violations.push(LemmaViolation {
                law: LemmaLaw::CommutatorOrderP,
                x: x.clone(),
                y: y.clone(),
            });
        }
        let xyp = pow(&mult(x, y), p as u128);
        let xpyp = mult(&xp, &yp);
        if xyp != xpyp {
            violations.push(LemmaViolation {
                law: LemmaLaw::PthPowerMultiplicative,
                x: x.clone(),
                y: y.clone(),
            });
        }
        if xyp != mult(&xpyp, &pow(&comm(y, x), half_pp1)) {
            violations.push(LemmaViolation {
                law: LemmaLaw::CollectionExponent,
                x: x.clone(),
                y: y.clone(),
            });
        }
    };

    let exhaustive = group
        .order_u64()
        .filter(|&n| n <= group.enumeration_cap())
        .and_then(|n| n.checked_mul(n))
        .is_some_and(|sq| sq <= sample);

    let pairs_checked = if exhaustive {
        let elements = super::FiniteGroup::elements(group)?;
        for x in &elements {
            for y in &elements {
                check_pair(x, y);
            }
        }
        (elements.len() * elements.len()) as u64
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample {
            let x = random_element(group, &mut rng);
            let y = random_element(group, &mut rng);
            check_pair(&x, &y);
        }
        sample
    };

    Ok(LemmaReport {
        pairs_checked,
        exhaustive,
        seed,
        violations,
    })
}

/// Uniform over the group: normal forms are unique, so independent uniform
/// coordinates give a uniform element.
fn random_element(group: &ConcreteGroup, rng: &mut ChaCha8Rng) -> GroupElement {
    use num_traits::ToPrimitive;
    let exponents: Vec<u64> = group
        .presentation()
        .generators()
        .iter()
        .map(|g| {
            let order = g.order.to_u64().expect("orders fit u64 after build");
            rng.gen_range(0..order)
        })
        .collect();
    let central = if group.presentation().derived() == crate::pcpres::DerivedSpec::FreeCentral {
        rng.gen_range(0..group.prime())
    } else {
        0
    };
    group
        .element(&exponents, central)
        .expect("sampled coordinates are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_group, DEFAULT_ENUM_CAP};
    use crate::pcpres::catalog_family;

    #[test]
    fn heisenberg_satisfies_all_laws_exhaustively() {
        let g = build_group(&catalog_family("heisenberg", 3, 0).unwrap(), DEFAULT_ENUM_CAP)
            .unwrap();
        let report = check_lemmas(&g, 1 << 16, 0).unwrap();
        assert!(report.exhaustive);
        assert_eq!(report.pairs_checked, 27 * 27);
        assert!(report.passed());
    }

    #[test]
    fn modular_group_satisfies_all_laws() {
        let g = build_group(&catalog_family("modular", 3, 4).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let report = check_lemmas(&g, 1 << 16, 0).unwrap();
        assert!(report.exhaustive);
        assert!(report.passed());
    }

    #[test]
    fn sampling_is_deterministic_for_a_seed() {
        let g = build_group(&catalog_family("modular", 3, 9).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let a = check_lemmas(&g, 500, 42).unwrap();
        let b = check_lemmas(&g, 500, 42).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a.pairs_checked, 500);
        assert!(a.passed() && b.passed());
    }

    #[test]
    fn corrupted_multiplication_is_detected() {
        let g = build_group(&catalog_family("heisenberg", 3, 0).unwrap(), DEFAULT_ENUM_CAP)
            .unwrap();
        // Corrupt the product whenever both x-coordinates are 1: smash the
        // central coordinate to zero.
        let corrupt = |a: &GroupElement, b: &GroupElement| -> GroupElement {
            let honest = g.multiply(a, b);
            if a.exponents()[0] == 1 && b.exponents()[0] == 1 {
                g.element(&[honest.exponents()[0], honest.exponents()[1]], 0)
                    .unwrap()
            } else {
                honest
            }
        };
        let report =
            check_lemmas_with(&g, &corrupt, &|a| g.inverse(a), 1 << 16, 0).unwrap();
        assert!(!report.passed());
    }
}
