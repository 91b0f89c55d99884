//! Concrete realization of a presented group: normal-form elements with
//! collection-based multiplication, plus the exhaustive subgroup machinery
//! (closures, center, subgroup lattice, central quotients, element-order
//! census) used as the independent oracle for the symbolic pipeline.
//!
//! Normal forms are exponent vectors `x_1^{a_1} ... x_k^{a_k}` with one
//! extra coordinate for a free central derived generator. Multiplying two
//! normal forms moves every generator power of the right factor past the
//! higher-indexed powers of the left factor; each swap deposits a central
//! `c` twist, and class 2 makes the total twist a closed form in the
//! exponents, so collection never recurses.

mod census;
mod lattice;
mod lemmas;
mod quotient;
mod subgroup;

pub use census::abelian_invariants_census;
pub use lattice::frattini_via_lattice;
pub use lemmas::{check_lemmas, LemmaLaw, LemmaReport, LemmaViolation};
pub use quotient::{quotient_by_central, QuotientGroup};
pub use subgroup::{center, subgroup_closure, Subgroup, SubgroupView};

use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::pcpres::{validate, DerivedSpec, PcPresentation, Violation};

/// Default cap on the number of elements any enumerating operation is
/// allowed to visit.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Default cap for the subgroup-lattice fixpoint, the most expensive
/// oracle (3^5).
pub const DEFAULT_LATTICE_CAP: u64 = 243;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("presentation is invalid: {0:?}")]
    InvalidPresentation(Vec<Violation>),
    #[error("enumeration cap exceeded: {what} needs more than {cap} elements")]
    EnumerationCapExceeded { what: String, cap: u64 },
    #[error("derived subgroup has order {found}, expected {expected}")]
    DerivedOrderMismatch { found: u64, expected: u64 },
    #[error("subgroup is not central")]
    NotCentral,
    #[error("subgroup has order {found}, expected the prime {prime}")]
    NotOrderP { found: u64, prime: u64 },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn cap_exceeded(what: impl Into<String>, cap: u64) -> EngineError {
    EngineError::EnumerationCapExceeded {
        what: what.into(),
        cap,
    }
}

/// An element in normal form: one exponent per main generator (within
/// `[0, order_i)`), plus the exponent of the free central generator when
/// the presentation has one. Elements are equal iff all coordinates are
/// equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    exponents: Vec<u64>,
    central: Option<u64>,
}

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn central(&self) -> Option<u64> {
        self.central
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0) && self.central.unwrap_or(0) == 0
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}", self.exponents)?;
        if let Some(t) = self.central {
            write!(f, "; c^{}", t)?;
        }
        write!(f, ")")
    }
}

/// Minimal interface the generic machinery (closures, lattice, quotients,
/// census) needs from an enumerable finite group.
pub trait FiniteGroup {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    /// All elements, ascending. Fails with `EnumerationCapExceeded` when
    /// the group is too large to enumerate.
    fn elements(&self) -> Result<Vec<Self::Elem>, EngineError>;

    fn power(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let (mut base, mut exp) = if e < 0 {
            (self.inverse(a), e.unsigned_abs())
        } else {
            (a.clone(), e as u64)
        };
        let mut acc = self.identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }
}

/// The presented group, realized. Multiplication works for any validated
/// presentation whose generator orders fit in a machine word; operations
/// that enumerate elements additionally require the group order to stay
/// within the enumeration cap.
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    pres: PcPresentation,
    orders: Vec<u64>,
    free_central: bool,
    /// For a `PowerOf(d)` presentation: `(d, p^lambda_d)`, the coordinate
    /// and stride the collected c-twist folds into.
    fold: Option<(usize, u64)>,
    order: BigUint,
    cap: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// Builds the concrete group for a validated presentation, verifying that
/// the derived subgroup (closure of all generator commutators) has order
/// exactly p and spot-checking associativity on generator triples.
pub fn build_group(pres: &PcPresentation, cap: u64) -> Result<ConcreteGroup, EngineError> {
    let violations = validate(pres);
    if !violations.is_empty() {
        return Err(EngineError::InvalidPresentation(violations));
    }
    let mut orders = Vec::with_capacity(pres.rank());
    for g in pres.generators() {
        let order = g.order.to_u64().ok_or_else(|| {
            cap_exceeded(
                format!("generator {} of order {}", g.name, g.order),
                cap,
            )
        })?;
        orders.push(order);
    }
    let free_central = pres.derived() == DerivedSpec::FreeCentral;
    let fold = match pres.derived() {
        DerivedSpec::PowerOf(d) => Some((d, orders[d] / pres.prime())),
        DerivedSpec::FreeCentral => None,
    };
    let group = ConcreteGroup {
        pres: pres.clone(),
        orders,
        free_central,
        fold,
        order: pres.group_order(),
        cap,
    };

    // |G'| = p, by closure of the nontrivial generator commutators.
    let comms: Vec<GroupElement> = pres
        .commutators()
        .keys()
        .map(|&(j, i)| group.commutator(&group.generator(j), &group.generator(i)))
        .collect();
    let derived = subgroup_closure(&group, &comms, cap)?;
    if derived.order() != pres.prime() {
        return Err(EngineError::DerivedOrderMismatch {
            found: derived.order(),
            expected: pres.prime(),
        });
    }

    // Associativity spot check on a handful of generator triples; the
    // exhaustive version lives in the test suite.
    let mut probes: Vec<GroupElement> = (0..pres.rank().min(4)).map(|i| group.generator(i)).collect();
    probes.push(group.derived_element());
    for a in &probes {
        for b in &probes {
            for c in &probes {
                let left = group.multiply(&group.multiply(a, b), c);
                let right = group.multiply(a, &group.multiply(b, c));
                if left != right {
                    return Err(EngineError::Internal(format!(
                        "associativity failed on {:?}, {:?}, {:?}",
                        a, b, c
                    )));
                }
            }
        }
    }

    Ok(group)
}

impl ConcreteGroup {
    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn prime(&self) -> u64 {
        self.pres.prime()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.cap
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exponents: vec![0; self.orders.len()],
            central: self.free_central.then_some(0),
        }
    }

    /// The i-th main generator as an element.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.identity();
        e.exponents[i] = 1 % self.orders[i];
        e
    }

    /// The designated derived element c: the independent central coordinate
    /// for a free central presentation, `x_d^(p^lambda_d)` otherwise.
    pub fn derived_element(&self) -> GroupElement {
        let mut e = self.identity();
        match self.fold {
            Some((d, stride)) => e.exponents[d] = stride,
            None => e.central = Some(1),
        }
        e
    }

    /// Builds an element from raw coordinates, checking ranges.
    pub fn element(&self, exponents: &[u64], central: u64) -> Result<GroupElement, EngineError> {
        if exponents.len() != self.orders.len() {
            return Err(EngineError::Internal(format!(
                "expected {} exponents, got {}",
                self.orders.len(),
                exponents.len()
            )));
        }
        for (i, (&a, &q)) in exponents.iter().zip(&self.orders).enumerate() {
            if a >= q {
                return Err(EngineError::Internal(format!(
                    "exponent {} out of range for generator {} of order {}",
                    a, i, q
                )));
            }
        }
        if !self.free_central && central != 0 {
            return Err(EngineError::Internal(
                "central exponent on a presentation without a free central generator".to_string(),
            ));
        }
        if central >= self.prime() && self.free_central {
            return Err(EngineError::Internal(format!(
                "central exponent {} out of range",
                central
            )));
        }
        Ok(GroupElement {
            exponents: exponents.to_vec(),
            central: self.free_central.then_some(central),
        })
    }

    /// Collected product of two normal forms.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let p = self.prime();
        // Moving x_j^{a_j} past x_i^{b_i} for j > i deposits
        // c^{a_j * b_i * m[j][i]}; c is central, so the twists just add.
        let mut twist = 0u64;
        for (&(j, i), &m) in self.pres.commutators() {
            let t = mul_mod(mul_mod(a.exponents[j] % p, b.exponents[i] % p, p), m, p);
            twist = add_mod(twist, t, p);
        }
        let mut exponents: Vec<u64> = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&self.orders)
            .map(|((&x, &y), &q)| add_mod(x, y, q))
            .collect();
        let central = match self.fold {
            Some((d, stride)) => {
                let q = self.orders[d];
                exponents[d] = add_mod(exponents[d], mul_mod(stride, twist, q), q);
                None
            }
            None => {
                let s = add_mod(a.central.unwrap_or(0), b.central.unwrap_or(0), p);
                Some(add_mod(s, twist, p))
            }
        };
        GroupElement { exponents, central }
    }

    /// Inverse by reversing the normal word:
    /// `(x_1^{a_1} ... x_k^{a_k} c^s)^-1 = c^{-s} x_k^{-a_k} ... x_1^{-a_1}`.
    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        let mut acc = self.identity();
        if let (Some(s), true) = (a.central, self.free_central) {
            if s != 0 {
                acc.central = Some(self.prime() - s);
            }
        }
        for i in (0..self.orders.len()).rev() {
            if a.exponents[i] == 0 {
                continue;
            }
            let mut single = self.identity();
            single.exponents[i] = self.orders[i] - a.exponents[i];
            acc = self.multiply(&acc, &single);
        }
        acc
    }

    /// `a^e` for any integer e, by square and multiply.
    pub fn power(&self, a: &GroupElement, e: i64) -> GroupElement {
        FiniteGroup::power(self, a, e)
    }

    /// `[a, b] = a^-1 b^-1 a b`, always an element of the derived subgroup.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let left = self.multiply(&self.inverse(a), &self.inverse(b));
        self.multiply(&left, &self.multiply(a, b))
    }

    /// Derived subgroup: closure of the nontrivial generator commutators.
    pub fn derived_subgroup(&self) -> Result<Subgroup<GroupElement>, EngineError> {
        let comms: Vec<GroupElement> = self
            .pres
            .commutators()
            .keys()
            .map(|&(j, i)| self.commutator(&self.generator(j), &self.generator(i)))
            .collect();
        subgroup_closure(self, &comms, self.cap)
    }

    /// p-power subgroup `G^p = <x_1^p, ..., x_k^p>`.
    pub fn p_power_subgroup(&self) -> Result<Subgroup<GroupElement>, EngineError> {
        let p = self.prime() as i64;
        let gens: Vec<GroupElement> = (0..self.pres.rank())
            .map(|i| self.power(&self.generator(i), p))
            .filter(|e| !e.is_identity())
            .collect();
        subgroup_closure(self, &gens, self.cap)
    }

    /// Center of the group. An element is central iff it commutes with
    /// every generator (the free central generator commutes with
    /// everything by construction), which agrees with the all-pairs
    /// definition; the test suite checks that agreement exhaustively.
    pub fn center(&self) -> Result<Subgroup<GroupElement>, EngineError> {
        let gens: Vec<GroupElement> = (0..self.pres.rank()).map(|i| self.generator(i)).collect();
        let members: Vec<GroupElement> = self
            .elements()?
            .into_iter()
            .filter(|g| {
                gens.iter()
                    .all(|x| self.multiply(g, x) == self.multiply(x, g))
            })
            .collect();
        Ok(Subgroup::from_sorted(members.clone(), members))
    }

    /// Renders an element as a word in the generator names.
    pub fn format_element(&self, e: &GroupElement) -> String {
        let mut parts = Vec::new();
        for (i, &a) in e.exponents.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let name = &self.pres.generators()[i].name;
            if a == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{}^{}", name, a));
            }
        }
        match e.central {
            Some(1) => parts.push("c".to_string()),
            Some(t) if t > 1 => parts.push(format!("c^{}", t)),
            _ => {}
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl FiniteGroup for ConcreteGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        ConcreteGroup::identity(self)
    }

    fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.multiply(a, b)
    }

    fn inverse(&self, a: &GroupElement) -> GroupElement {
        ConcreteGroup::inverse(self, a)
    }

    fn elements(&self) -> Result<Vec<GroupElement>, EngineError> {
        let n = self
            .order_u64()
            .filter(|&n| n <= self.cap)
            .ok_or_else(|| cap_exceeded(format!("group of order {}", self.order), self.cap))?;
        let mut radices = self.orders.clone();
        if self.free_central {
            radices.push(self.prime());
        }
        let mut out = Vec::with_capacity(n as usize);
        let mut counter = vec![0u64; radices.len()];
        loop {
            let (exponents, central) = if self.free_central {
                (
                    counter[..counter.len() - 1].to_vec(),
                    Some(counter[counter.len() - 1]),
                )
            } else {
                (counter.clone(), None)
            };
            out.push(GroupElement { exponents, central });
            // Rightmost coordinate fastest, so the output is ascending in
            // the derived Ord.
            let mut pos = radices.len();
            loop {
                if pos == 0 {
                    debug_assert_eq!(out.len() as u64, n);
                    return Ok(out);
                }
                pos -= 1;
                counter[pos] += 1;
                if counter[pos] < radices[pos] {
                    break;
                }
                counter[pos] = 0;
            }
        }
    }
}
