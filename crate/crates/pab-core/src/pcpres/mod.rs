//! Power-commutator presentations for p-groups of class 2 with `|G'| = p`.
//!
//! A presentation consists of an odd prime `p`, generators `x_1, ..., x_k`
//! with diagonal power relations `x_i^(p^(lambda_i + 1)) = 1`, a designated
//! derived element `c` of order `p` (either a power of one generator or an
//! extra central generator), and a commutator table `[x_j, x_i] = c^m[j][i]`
//! for `j > i` in declaration order. All remaining commutators are trivial
//! and `c` is central, so the group has nilpotency class 2 and `G' = <c>`.

mod parse;

pub use parse::{parse_presentation, render_presentation, ParseError};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Designation of the derived element `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivedSpec {
    /// `c = x_d^(p^lambda_d)`, the order-p element of `x_d`'s cyclic group.
    /// Requires `order(x_d) >= p^2`.
    PowerOf(usize),
    /// `c` is an extra central generator of order p, independent of the
    /// main generators.
    FreeCentral,
}

/// One main generator: a name and its order `p^(lambda + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub order: BigUint,
}

/// A power-commutator presentation of a class-2 p-group with `|G'| = p`.
///
/// Commutator exponents are stored reduced mod p with zero entries dropped,
/// so structural equality coincides with equality of presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u64,
    generators: Vec<Generator>,
    derived: DerivedSpec,
    /// `(j, i) -> m` with `j > i`, meaning `[x_j, x_i] = c^m`, `1 <= m < p`.
    commutators: BTreeMap<(usize, usize), u64>,
}

impl PcPresentation {
    /// Raw constructor; exponents are reduced mod p and zero entries dropped.
    /// Call [`validate`] on the result before handing it to the engine or
    /// the pipeline.
    pub fn new(
        prime: u64,
        generators: Vec<Generator>,
        derived: DerivedSpec,
        commutators: BTreeMap<(usize, usize), u64>,
    ) -> Self {
        let commutators = if prime > 0 {
            commutators
                .into_iter()
                .map(|(k, m)| (k, m % prime))
                .filter(|&(_, m)| m != 0)
                .collect()
        } else {
            commutators
        };
        PcPresentation {
            prime,
            generators,
            derived,
            commutators,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Number of main generators.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn derived(&self) -> DerivedSpec {
        self.derived
    }

    /// Commutator table entries `((j, i), m)` with `j > i` and `m` nonzero.
    pub fn commutators(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.commutators
    }

    /// Exponent of `[x_j, x_i]` on `c`, for any pair of generator indices.
    /// Antisymmetric: `comm(i, j) = p - comm(j, i)` for nonzero entries.
    pub fn commutator_exponent(&self, j: usize, i: usize) -> u64 {
        if j > i {
            self.commutators.get(&(j, i)).copied().unwrap_or(0)
        } else if i > j {
            let m = self.commutators.get(&(i, j)).copied().unwrap_or(0);
            if m == 0 {
                0
            } else {
                self.prime - m
            }
        } else {
            0
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// `lambda_i` such that `order(x_i) = p^(lambda_i + 1)`.
    /// Meaningful only on validated presentations.
    pub fn lambda(&self, i: usize) -> u32 {
        let mut order = self.generators[i].order.clone();
        let p = BigUint::from(self.prime);
        let mut count: u32 = 0;
        while order > BigUint::one() && (&order % &p).is_zero() {
            order /= &p;
            count += 1;
        }
        count.saturating_sub(1)
    }

    /// `|G|`: the product of generator orders, times p for a free central
    /// derived generator.
    pub fn group_order(&self) -> BigUint {
        let mut order: BigUint = BigUint::one();
        for g in &self.generators {
            order *= &g.order;
        }
        if self.derived == DerivedSpec::FreeCentral {
            order *= self.prime;
        }
        order
    }
}

/// Isomorphism type of a finite abelian p-group: invariant factors, each a
/// power of p, sorted non-increasing. The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianType {
    factors: Vec<BigUint>,
}

impl AbelianType {
    /// Sorts the given factors non-increasing. Factors must be p-powers > 1;
    /// that is enforced where types are produced, not here.
    pub fn new(mut factors: Vec<BigUint>) -> Self {
        factors.sort_unstable_by(|a, b| b.cmp(a));
        AbelianType { factors }
    }

    pub fn trivial() -> Self {
        AbelianType {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    /// Number of cyclic factors (= minimal number of generators).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    /// True iff every factor equals p (or the type is trivial).
    pub fn is_elementary(&self, p: u64) -> bool {
        let p = BigUint::from(p);
        self.factors.iter().all(|f| *f == p)
    }

    /// Type of the p-th power subgroup: divide every factor by p, drop the
    /// ones that become trivial. Inverse of the step-up reconstruction.
    pub fn step_down(&self, p: u64) -> AbelianType {
        let p = BigUint::from(p);
        AbelianType::new(
            self.factors
                .iter()
                .map(|f| f / &p)
                .filter(|f| *f > BigUint::one())
                .collect(),
        )
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|q| format!("Z_{}", q)).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A violated presentation invariant. Violations are data, not failures:
/// [`validate`] returns all of them at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The declared prime fails trial division.
    NotPrime(u64),
    /// p = 2 is rejected: the p-th power map is a homomorphism on class-2
    /// groups only for odd p.
    EvenPrime,
    NoGenerators,
    DuplicateGenerator(String),
    /// A generator order that is not a power of p, or is smaller than p.
    OrderNotPPower { generator: String },
    DerivedIndexOutOfRange(usize),
    /// `derived pow x` with `order(x) = p`: the designated element would be
    /// trivial.
    DerivedOrderTooSmall { generator: String },
    CommPairInvalid { later: usize, earlier: usize },
    CommExponentOutOfRange { later: usize, earlier: usize, m: u64 },
    /// Every commutator vanishes, so G' would be trivial instead of order p.
    DerivedTrivial,
}

impl Violation {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::NotPrime(_) => "NotPrime",
            Violation::EvenPrime => "EvenPrime",
            Violation::NoGenerators => "NoGenerators",
            Violation::DuplicateGenerator(_) => "DuplicateGenerator",
            Violation::OrderNotPPower { .. } => "OrderNotPPower",
            Violation::DerivedIndexOutOfRange(_) => "DerivedIndexOutOfRange",
            Violation::DerivedOrderTooSmall { .. } => "DerivedOrderTooSmall",
            Violation::CommPairInvalid { .. } => "CommPairInvalid",
            Violation::CommExponentOutOfRange { .. } => "CommExponentOutOfRange",
            Violation::DerivedTrivial => "DerivedTrivial",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPrime(p) => write!(f, "NotPrime: {} is not prime", p),
            Violation::EvenPrime => write!(f, "EvenPrime: p = 2 is not supported"),
            Violation::NoGenerators => write!(f, "NoGenerators: no generators declared"),
            Violation::DuplicateGenerator(name) => write!(f, "DuplicateGenerator: {}", name),
            Violation::OrderNotPPower { generator } => write!(
                f,
                "OrderNotPPower: order of {} is not a power of p at least p",
                generator
            ),
            Violation::DerivedIndexOutOfRange(d) => {
                write!(f, "DerivedIndexOutOfRange: index {}", d)
            }
            Violation::DerivedOrderTooSmall { generator } => write!(
                f,
                "DerivedOrderTooSmall: {} has order p, so its designated power is trivial",
                generator
            ),
            Violation::CommPairInvalid { later, earlier } => {
                write!(f, "CommPairInvalid: pair ({}, {})", later, earlier)
            }
            Violation::CommExponentOutOfRange { later, earlier, m } => {
                write!(f, "CommExponentOutOfRange: m[{}][{}] = {}", later, earlier, m)
            }
            Violation::DerivedTrivial => write!(
                f,
                "DerivedTrivial: all commutators vanish, so G' would be trivial"
            ),
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// True iff `order` is `p^e` for some `e >= 1`.
fn is_p_power_at_least_p(order: &BigUint, p: u64) -> bool {
    let p = BigUint::from(p);
    if *order < p {
        return false;
    }
    let mut rest = order.clone();
    while (&rest % &p).is_zero() {
        rest /= &p;
    }
    rest.is_one()
}

/// Checks every invariant of [`PcPresentation`] and returns one descriptor
/// per violated invariant; the empty list means the presentation is valid.
///
/// Checks that depend on a sound prime (order shapes, commutator ranges)
/// are skipped when the prime itself is rejected.
pub fn validate(pres: &PcPresentation) -> Vec<Violation> {
    let mut out = Vec::new();
    let p = pres.prime;

    let prime_ok = if p == 2 {
        out.push(Violation::EvenPrime);
        false
    } else if !is_prime_u64(p) {
        out.push(Violation::NotPrime(p));
        false
    } else {
        true
    };

    let k = pres.generators.len();
    if k == 0 {
        out.push(Violation::NoGenerators);
    }
    for (i, g) in pres.generators.iter().enumerate() {
        if pres.generators[..i].iter().any(|h| h.name == g.name) {
            out.push(Violation::DuplicateGenerator(g.name.clone()));
        }
    }

    if prime_ok {
        for g in &pres.generators {
            if !is_p_power_at_least_p(&g.order, p) {
                out.push(Violation::OrderNotPPower {
                    generator: g.name.clone(),
                });
            }
        }
    }

    match pres.derived {
        DerivedSpec::PowerOf(d) => {
            if d >= k {
                out.push(Violation::DerivedIndexOutOfRange(d));
            } else if prime_ok {
                let g = &pres.generators[d];
                let p_sq = BigUint::from(p) * p;
                if is_p_power_at_least_p(&g.order, p) && g.order < p_sq {
                    out.push(Violation::DerivedOrderTooSmall {
                        generator: g.name.clone(),
                    });
                }
            }
        }
        DerivedSpec::FreeCentral => {}
    }

    let mut any_nonzero = false;
    for (&(j, i), &m) in &pres.commutators {
        if j <= i || j >= k {
            out.push(Violation::CommPairInvalid {
                later: j,
                earlier: i,
            });
            continue;
        }
        if prime_ok {
            if m == 0 || m >= p {
                out.push(Violation::CommExponentOutOfRange {
                    later: j,
                    earlier: i,
                    m,
                });
            }
            if m % p != 0 {
                any_nonzero = true;
            }
        } else if m != 0 {
            any_nonzero = true;
        }
    }
    if !any_nonzero {
        out.push(Violation::DerivedTrivial);
    }

    out
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown family `{0}` (expected heisenberg, modular or extraspecial_exp_p)")]
    UnknownFamily(String),
    #[error("size {size} out of range for family `{family}`: {reason}")]
    SizeOutOfRange {
        family: String,
        size: u64,
        reason: String,
    },
    #[error("family parameters produce an invalid presentation: {0:?}")]
    Invalid(Vec<Violation>),
}

fn checked_p_power(p: u64, e: u64, family: &str, size: u64) -> Result<BigUint, CatalogError> {
    let e32 = u32::try_from(e).map_err(|_| CatalogError::SizeOutOfRange {
        family: family.to_string(),
        size,
        reason: "exponent too large".to_string(),
    })?;
    if e32 > 1 << 20 {
        return Err(CatalogError::SizeOutOfRange {
            family: family.to_string(),
            size,
            reason: "exponent too large".to_string(),
        });
    }
    Ok(BigUint::from(p).pow(e32))
}

/// Builds one of the named test families:
///
/// - `heisenberg`: x, y of order p, free central c, `[y, x] = c`; order p^3.
///   The `size` argument is ignored.
/// - `modular`: x of order p^(size-1), y of order p, `c = x^(p^(size-2))`,
///   `[y, x] = c`; order p^size, requires `size >= 3`.
/// - `extraspecial_exp_p`: 2·size generators of order p, free central c,
///   `[x_{2i}, x_{2i-1}] = c`; order p^(1+2·size), requires `size >= 1`.
pub fn catalog_family(name: &str, p: u64, size: u64) -> Result<PcPresentation, CatalogError> {
    let pres = match name {
        "heisenberg" => {
            let gens = vec![
                Generator {
                    name: "x".to_string(),
                    order: BigUint::from(p),
                },
                Generator {
                    name: "y".to_string(),
                    order: BigUint::from(p),
                },
            ];
            let mut comm = BTreeMap::new();
            comm.insert((1, 0), 1);
            PcPresentation::new(p, gens, DerivedSpec::FreeCentral, comm)
        }
        "modular" => {
            if size < 3 {
                return Err(CatalogError::SizeOutOfRange {
                    family: name.to_string(),
                    size,
                    reason: "modular group needs order at least p^3".to_string(),
                });
            }
            let gens = vec![
                Generator {
                    name: "x".to_string(),
                    order: checked_p_power(p, size - 1, name, size)?,
                },
                Generator {
                    name: "y".to_string(),
                    order: BigUint::from(p),
                },
            ];
            let mut comm = BTreeMap::new();
            comm.insert((1, 0), 1);
            PcPresentation::new(p, gens, DerivedSpec::PowerOf(0), comm)
        }
        "extraspecial_exp_p" => {
            if size < 1 {
                return Err(CatalogError::SizeOutOfRange {
                    family: name.to_string(),
                    size,
                    reason: "needs at least one commuting pair".to_string(),
                });
            }
            if size > 1 << 10 {
                return Err(CatalogError::SizeOutOfRange {
                    family: name.to_string(),
                    size,
                    reason: "too many generator pairs".to_string(),
                });
            }
            let n = size as usize;
            let gens = (1..=2 * n)
                .map(|i| Generator {
                    name: format!("x{}", i),
                    order: BigUint::from(p),
                })
                .collect();
            let mut comm = BTreeMap::new();
            for i in 0..n {
                comm.insert((2 * i + 1, 2 * i), 1);
            }
            PcPresentation::new(p, gens, DerivedSpec::FreeCentral, comm)
        }
        other => return Err(CatalogError::UnknownFamily(other.to_string())),
    };
    let violations = validate(&pres);
    if violations.is_empty() {
        Ok(pres)
    } else {
        Err(CatalogError::Invalid(violations))
    }
}

/// Appends one generator of order p^e with all-zero commutator entries,
/// realizing the direct product with a cyclic group of order p^e. The
/// derived designation is unchanged; the result is not revalidated.
pub fn extend_direct_cyclic(pres: &PcPresentation, e: u32) -> PcPresentation {
    let mut name = "z".to_string();
    let mut suffix = 1u32;
    while pres.generator_index(&name).is_some() {
        suffix += 1;
        name = format!("z{}", suffix);
    }
    let mut generators = pres.generators.clone();
    generators.push(Generator {
        name,
        order: BigUint::from(pres.prime).pow(e),
    });
    PcPresentation {
        prime: pres.prime,
        generators,
        derived: pres.derived,
        commutators: pres.commutators.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis3() -> PcPresentation {
        catalog_family("heisenberg", 3, 0).unwrap()
    }

    #[test]
    fn heisenberg_is_valid() {
        let pres = heis3();
        assert!(validate(&pres).is_empty());
        assert_eq!(pres.group_order(), BigUint::from(27u32));
        assert_eq!(pres.derived(), DerivedSpec::FreeCentral);
    }

    #[test]
    fn modular_family() {
        let pres = catalog_family("modular", 3, 4).unwrap();
        assert!(validate(&pres).is_empty());
        assert_eq!(pres.group_order(), BigUint::from(81u32));
        assert_eq!(pres.generators()[0].order, BigUint::from(27u32));
        assert_eq!(pres.derived(), DerivedSpec::PowerOf(0));
        assert_eq!(pres.lambda(0), 2);
        assert_eq!(pres.lambda(1), 0);
    }

    #[test]
    fn extraspecial_family() {
        let pres = catalog_family("extraspecial_exp_p", 3, 2).unwrap();
        assert!(validate(&pres).is_empty());
        assert_eq!(pres.group_order(), BigUint::from(243u32));
        assert_eq!(pres.rank(), 4);
        assert_eq!(pres.commutators().len(), 2);
    }

    #[test]
    fn catalog_rejects_bad_parameters() {
        assert!(matches!(
            catalog_family("modular", 3, 2),
            Err(CatalogError::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            catalog_family("extraspecial_exp_p", 3, 0),
            Err(CatalogError::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            catalog_family("dihedral", 3, 3),
            Err(CatalogError::UnknownFamily(_))
        ));
        match catalog_family("heisenberg", 2, 0) {
            Err(CatalogError::Invalid(v)) => {
                assert!(v.contains(&Violation::EvenPrime));
            }
            other => panic!("expected EvenPrime, got {:?}", other),
        }
    }

    #[test]
    fn derived_order_too_small() {
        let gens = vec![
            Generator {
                name: "x".to_string(),
                order: BigUint::from(3u32),
            },
            Generator {
                name: "y".to_string(),
                order: BigUint::from(3u32),
            },
        ];
        let mut comm = BTreeMap::new();
        comm.insert((1, 0), 1);
        let pres = PcPresentation::new(3, gens, DerivedSpec::PowerOf(0), comm);
        let v = validate(&pres);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code(), "DerivedOrderTooSmall");
    }

    #[test]
    fn trivial_commutators_rejected() {
        let gens = vec![
            Generator {
                name: "x".to_string(),
                order: BigUint::from(3u32),
            },
            Generator {
                name: "y".to_string(),
                order: BigUint::from(3u32),
            },
        ];
        let pres = PcPresentation::new(3, gens, DerivedSpec::FreeCentral, BTreeMap::new());
        assert_eq!(validate(&pres), vec![Violation::DerivedTrivial]);
    }

    #[test]
    fn extend_appends_cyclic_factor() {
        let pres = extend_direct_cyclic(&heis3(), 2);
        assert!(validate(&pres).is_empty());
        assert_eq!(pres.group_order(), BigUint::from(243u32));
        assert_eq!(pres.rank(), 3);
        assert_eq!(pres.generators()[2].name, "z");
        assert_eq!(pres.generators()[2].order, BigUint::from(9u32));
    }

    #[test]
    fn extend_keeps_trivial_commutators_invalid() {
        let gens = vec![Generator {
            name: "x".to_string(),
            order: BigUint::from(3u32),
        }];
        let pres = PcPresentation::new(3, gens, DerivedSpec::FreeCentral, BTreeMap::new());
        let extended = extend_direct_cyclic(&pres, 1);
        assert!(validate(&extended).contains(&Violation::DerivedTrivial));
    }

    #[test]
    fn group_order_is_p_power_above_p() {
        for (name, p, size) in [
            ("heisenberg", 3, 0),
            ("modular", 5, 4),
            ("extraspecial_exp_p", 7, 2),
        ] {
            let pres = catalog_family(name, p, size).unwrap();
            let mut order = pres.group_order();
            let bp = BigUint::from(p);
            let mut n = 0;
            while (&order % &bp).is_zero() {
                order /= &bp;
                n += 1;
            }
            assert!(order.is_one());
            assert!(n > 1);
        }
    }

    #[test]
    fn commutator_exponent_is_antisymmetric() {
        let pres = heis3();
        assert_eq!(pres.commutator_exponent(1, 0), 1);
        assert_eq!(pres.commutator_exponent(0, 1), 2);
        assert_eq!(pres.commutator_exponent(0, 0), 0);
    }

    #[test]
    fn abelian_type_display_and_order() {
        let t = AbelianType::new(vec![BigUint::from(3u32), BigUint::from(9u32)]);
        assert_eq!(t.to_string(), "Z_9 x Z_3");
        assert_eq!(t.order(), BigUint::from(27u32));
        assert_eq!(AbelianType::trivial().to_string(), "1");
        assert!(t.step_down(3).factors() == [BigUint::from(3u32)]);
    }
}
