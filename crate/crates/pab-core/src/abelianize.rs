//! The abelianization pipeline and its cross-checks.
//!
//! The route to `G^ab`: split on whether the designated derived element lies
//! in `G^p` (case I: it is a generator power; case II: it is an independent
//! central generator), present `Phi(G^ab) ~ G^p / (G^p n G')` by an integer
//! relation matrix on the additive generators `g_i = x_i^p`, read off its
//! type from the Smith Normal Form, and step the type up by one power of p
//! per factor to recover `G^ab` itself.
//!
//! [`abelianize_direct`] is the standard abelianization of the same
//! presentation and serves as an independent oracle, as does the engine
//! census of the concrete quotient `G/G'` wired up in [`analyze`].

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::engine::{
    abelian_invariants_census, build_group, frattini_via_lattice, quotient_by_central,
    subgroup_closure, EngineError, SubgroupView,
};
use crate::pcpres::{validate, AbelianType, DerivedSpec, PcPresentation, Violation};
use crate::snf::{abelian_type_from_relations, IntMatrix, SnfError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("presentation is invalid: {0:?}")]
    InvalidPresentation(Vec<Violation>),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Snf(#[from] SnfError),
    #[error("Frattini type has {found} factors but the group has rank {rank}")]
    RankDeficit { found: usize, rank: usize },
}

/// Which of the two intersection cases `G^p n G'` falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `G^p n G' = G'`: the derived element is `x_d^(p^lambda_d)`, hence a
    /// p-th power.
    CaseI { derived_index: usize },
    /// `G^p n G' = 1`: the derived element carries the independent central
    /// coordinate, which no p-th power reaches.
    CaseII,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::CaseI { .. } => write!(f, "I"),
            CaseTag::CaseII => write!(f, "II"),
        }
    }
}

/// Reads the case off the presentation shape. `PowerOf(d)` puts
/// `c = x_d^(p^lambda_d)` inside `G^p` by construction; a free central
/// generator is outside `G^p`, whose elements all have zero central
/// coordinate. [`verify_case_semantically`] checks this against exhaustive
/// membership.
pub fn detect_case(pres: &PcPresentation) -> CaseTag {
    match pres.derived() {
        DerivedSpec::PowerOf(d) => CaseTag::CaseI { derived_index: d },
        DerivedSpec::FreeCentral => CaseTag::CaseII,
    }
}

/// Exhaustive check that the syntactic case matches membership of the
/// derived element in `G^p`.
pub fn verify_case_semantically(pres: &PcPresentation, cap: u64) -> Result<bool, PipelineError> {
    let group = build_group(pres, cap)?;
    let p_power = group.p_power_subgroup()?;
    let member = p_power.contains(&group.derived_element());
    Ok(member == matches!(detect_case(pres), CaseTag::CaseI { .. }))
}

/// Relation matrix presenting `Phi(G^ab) ~ G^p / (G^p n G')` on the
/// additive generators `g_i = x_i^p`.
///
/// `G^p` is the direct sum of the cyclic groups `<x_i^p>` of order
/// `p^lambda_i`, so the base relations are the diagonal `p^lambda_i` (a
/// unit row when `lambda_i = 0`, killing that column). In case I the
/// quotient additionally kills `c = x_d^(p^lambda_d) = p^(lambda_d - 1) g_d`,
/// one extra row.
pub fn frattini_relation_matrix(pres: &PcPresentation, case: CaseTag) -> IntMatrix {
    let k = pres.rank();
    let p = pres.prime();
    let extra = matches!(case, CaseTag::CaseI { .. }) as usize;
    let mut m = IntMatrix::zero(k + extra, k);
    for i in 0..k {
        m[(i, i)] = BigInt::from(p).pow(pres.lambda(i));
    }
    if let CaseTag::CaseI { derived_index: d } = case {
        m[(k, d)] = BigInt::from(p).pow(pres.lambda(d) - 1);
    }
    m
}

/// Type of the Frattini subgroup of the abelianization, via the relation
/// matrix and SNF.
pub fn frattini_of_abelianization(pres: &PcPresentation) -> Result<AbelianType, PipelineError> {
    frattini_of_abelianization_with_case(pres, detect_case(pres))
}

/// Same, with the case imposed; lets tests drive the negative control of
/// [`hobby_check`] with a deliberately wrong case.
pub fn frattini_of_abelianization_with_case(
    pres: &PcPresentation,
    case: CaseTag,
) -> Result<AbelianType, PipelineError> {
    let violations = validate(pres);
    if !violations.is_empty() {
        return Err(PipelineError::InvalidPresentation(violations));
    }
    Ok(abelian_type_from_relations(
        &frattini_relation_matrix(pres, case),
        pres.prime(),
    )?)
}

/// Recovers a finite abelian p-group of rank `k` from the type of its
/// Frattini subgroup. For abelian p-groups `Phi(A) = A^p`, so each factor
/// `q` of `Phi(A)` lifts to a factor `p*q` of `A`, padded with `Z_p` up to
/// rank `k`.
pub fn reconstruct_abelianization(
    phi: &AbelianType,
    rank: usize,
    p: u64,
) -> Result<AbelianType, PipelineError> {
    if phi.rank() > rank {
        return Err(PipelineError::RankDeficit {
            found: phi.rank(),
            rank,
        });
    }
    let mut factors: Vec<BigUint> = phi.factors().iter().map(|q| q * p).collect();
    factors.resize(rank, BigUint::from(p));
    Ok(AbelianType::new(factors))
}

/// End-to-end method: case split, relation matrix, SNF, step-up.
pub fn abelianize_paper(pres: &PcPresentation) -> Result<AbelianType, PipelineError> {
    let phi = frattini_of_abelianization(pres)?;
    reconstruct_abelianization(&phi, pres.rank(), pres.prime())
}

/// Independent oracle: ordinary abelianization. Killing all commutators
/// leaves the relations `p^(lambda_i + 1) x_i = 0`, plus `p^lambda_d x_d = 0`
/// when the derived element is the power word `x_d^(p^lambda_d)` (it dies
/// with `G'`); a free central generator is killed outright and contributes
/// nothing.
pub fn abelianize_direct(pres: &PcPresentation) -> Result<AbelianType, PipelineError> {
    let violations = validate(pres);
    if !violations.is_empty() {
        return Err(PipelineError::InvalidPresentation(violations));
    }
    let k = pres.rank();
    let p = pres.prime();
    let extra = matches!(pres.derived(), DerivedSpec::PowerOf(_)) as usize;
    let mut m = IntMatrix::zero(k + extra, k);
    for i in 0..k {
        m[(i, i)] = BigInt::from(p).pow(pres.lambda(i) + 1);
    }
    if let DerivedSpec::PowerOf(d) = pres.derived() {
        m[(k, d)] = BigInt::from(p).pow(pres.lambda(d));
    }
    Ok(abelian_type_from_relations(&m, p)?)
}

/// True iff `Phi(G) = G'`, read off the presentation: `G^p` must lie inside
/// the order-p subgroup `G'`, which happens exactly when every generator
/// has order p (free central case) or when only the derived-bearing
/// generator has order p^2 and the rest have order p.
pub fn is_generalized_extraspecial(pres: &PcPresentation) -> bool {
    match pres.derived() {
        DerivedSpec::FreeCentral => (0..pres.rank()).all(|i| pres.lambda(i) == 0),
        DerivedSpec::PowerOf(d) => {
            pres.lambda(d) == 1 && (0..pres.rank()).all(|i| i == d || pres.lambda(i) == 0)
        }
    }
}

/// Outcome of the Frattini-quotient identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HobbyReport {
    /// Type of `Phi(G/G')`: lattice Frattini of the concrete quotient,
    /// then census.
    pub quotient_route: AbelianType,
    /// Type of `Phi(G)/G'`: lattice Frattini of G, quotient by G', census.
    pub subgroup_route: AbelianType,
    /// Type from the symbolic relation matrix.
    pub matrix_route: AbelianType,
    pub holds: bool,
}

/// Checks `Phi(G/G') ~ Phi(G)/G'` at the level of invariant-factor types,
/// computing both sides concretely and comparing them with the symbolic
/// matrix route.
pub fn hobby_check(
    pres: &PcPresentation,
    enum_cap: u64,
    lattice_cap: u64,
    seed: u64,
) -> Result<HobbyReport, PipelineError> {
    hobby_check_with_case(pres, detect_case(pres), enum_cap, lattice_cap, seed)
}

/// Negative-control variant: impose a case tag on the matrix route.
pub fn hobby_check_with_case(
    pres: &PcPresentation,
    case: CaseTag,
    enum_cap: u64,
    lattice_cap: u64,
    seed: u64,
) -> Result<HobbyReport, PipelineError> {
    let p = pres.prime();
    let group = build_group(pres, enum_cap)?;
    let derived = group.derived_subgroup()?;

    let quotient = quotient_by_central(&group, &derived, p)?;
    let phi_quotient = frattini_via_lattice(&quotient, lattice_cap)?;
    let phi_quotient_view = SubgroupView::new(&quotient, &phi_quotient);
    let quotient_route = abelian_invariants_census(&phi_quotient_view, p, seed)?;

    let phi_group = frattini_via_lattice(&group, lattice_cap)?;
    if !derived.is_subset_of(&phi_group) {
        return Err(PipelineError::Engine(EngineError::Internal(
            "derived subgroup not contained in the Frattini subgroup".to_string(),
        )));
    }
    let phi_view = SubgroupView::new(&group, &phi_group);
    let phi_mod_derived = quotient_by_central(&phi_view, &derived, p)?;
    let subgroup_route = abelian_invariants_census(&phi_mod_derived, p, seed)?;

    let matrix_route = frattini_of_abelianization_with_case(pres, case)?;

    let holds = quotient_route == subgroup_route && subgroup_route == matrix_route;
    Ok(HobbyReport {
        quotient_route,
        subgroup_route,
        matrix_route,
        holds,
    })
}

/// Census route to `G^ab`: realize `G/G'` and count element orders.
pub fn abelianize_census(
    pres: &PcPresentation,
    enum_cap: u64,
    seed: u64,
) -> Result<AbelianType, PipelineError> {
    let group = build_group(pres, enum_cap)?;
    let derived = group.derived_subgroup()?;
    let quotient = quotient_by_central(&group, &derived, pres.prime())?;
    Ok(abelian_invariants_census(&quotient, pres.prime(), seed)?)
}

/// Type of `Phi(G^ab)` computed concretely: in case I the quotient of
/// `G^p G'` by `G'`, in case II `G^p` itself.
pub fn frattini_of_abelianization_concrete(
    pres: &PcPresentation,
    enum_cap: u64,
    seed: u64,
) -> Result<AbelianType, PipelineError> {
    let p = pres.prime();
    let group = build_group(pres, enum_cap)?;
    let p_power = group.p_power_subgroup()?;
    match detect_case(pres) {
        CaseTag::CaseI { .. } => {
            let derived = group.derived_subgroup()?;
            let mut gens = p_power.generators().to_vec();
            gens.extend_from_slice(derived.generators());
            let product = subgroup_closure(&group, &gens, enum_cap)?;
            let view = SubgroupView::new(&group, &product);
            let quotient = quotient_by_central(&view, &derived, p)?;
            Ok(abelian_invariants_census(&quotient, p, seed)?)
        }
        CaseTag::CaseII => {
            let view = SubgroupView::new(&group, &p_power);
            Ok(abelian_invariants_census(&view, p, seed)?)
        }
    }
}

/// Which routes to `G^ab` a report should run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Paper,
    Direct,
    Census,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Paper, Method::Direct, Method::Census];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Paper => "paper",
            Method::Direct => "direct",
            Method::Census => "census",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs for [`analyze`]. Defaults match the engine caps.
#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub methods: Vec<Method>,
    pub enum_cap: u64,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            methods: Method::ALL.to_vec(),
            enum_cap: crate::engine::DEFAULT_ENUM_CAP,
            seed: 0,
        }
    }
}

/// Structured outcome of one pipeline run.
#[derive(Clone, Debug)]
pub struct Report {
    pub group_order: BigUint,
    pub prime: u64,
    pub case: CaseTag,
    pub frattini_ab: AbelianType,
    pub methods: BTreeMap<Method, AbelianType>,
    pub agreement: bool,
    pub generalized_extraspecial: bool,
    /// Diagnostics such as a skipped census; never part of agreement.
    pub notices: Vec<String>,
    pub elapsed: Duration,
}

/// Runs the requested methods and assembles the report. The census is
/// skipped with a notice (not an error) when the group order exceeds the
/// enumeration cap; agreement then covers the remaining methods.
pub fn analyze(pres: &PcPresentation, options: &AnalysisOptions) -> Result<Report, PipelineError> {
    let started = Instant::now();
    let violations = validate(pres);
    if !violations.is_empty() {
        return Err(PipelineError::InvalidPresentation(violations));
    }

    let case = detect_case(pres);
    let frattini_ab = frattini_of_abelianization_with_case(pres, case)?;
    let mut methods = BTreeMap::new();
    let mut notices = Vec::new();

    for method in &options.methods {
        match method {
            Method::Paper => {
                let t = reconstruct_abelianization(&frattini_ab, pres.rank(), pres.prime())?;
                methods.insert(Method::Paper, t);
            }
            Method::Direct => {
                methods.insert(Method::Direct, abelianize_direct(pres)?);
            }
            Method::Census => {
                if pres.group_order() > BigUint::from(options.enum_cap) {
                    notices.push(format!(
                        "census skipped: group order {} exceeds the enumeration cap {}",
                        pres.group_order(),
                        options.enum_cap
                    ));
                } else {
                    methods.insert(
                        Method::Census,
                        abelianize_census(pres, options.enum_cap, options.seed)?,
                    );
                }
            }
        }
    }

    let mut types = methods.values();
    let agreement = match types.next() {
        Some(first) => types.all(|t| t == first),
        None => true,
    };

    Ok(Report {
        group_order: pres.group_order(),
        prime: pres.prime(),
        case,
        frattini_ab,
        methods,
        agreement,
        generalized_extraspecial: is_generalized_extraspecial(pres),
        notices,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcpres::{catalog_family, extend_direct_cyclic};

    fn big(n: u32) -> BigUint {
        BigUint::from(n)
    }

    fn typ(factors: &[u32]) -> AbelianType {
        AbelianType::new(factors.iter().map(|&f| big(f)).collect())
    }

    #[test]
    fn case_detection() {
        assert!(matches!(
            detect_case(&catalog_family("modular", 3, 3).unwrap()),
            CaseTag::CaseI { derived_index: 0 }
        ));
        assert!(matches!(
            detect_case(&catalog_family("heisenberg", 3, 0).unwrap()),
            CaseTag::CaseII
        ));
        let extended = extend_direct_cyclic(&catalog_family("heisenberg", 3, 0).unwrap(), 2);
        assert!(matches!(detect_case(&extended), CaseTag::CaseII));
    }

    #[test]
    fn case_detection_is_semantically_sound() {
        for pres in [
            catalog_family("modular", 3, 3).unwrap(),
            catalog_family("heisenberg", 3, 0).unwrap(),
            extend_direct_cyclic(&catalog_family("heisenberg", 3, 0).unwrap(), 2),
        ] {
            assert!(verify_case_semantically(&pres, 1 << 20).unwrap());
        }
    }

    #[test]
    fn relation_matrices_match_construction_rule() {
        let m33 = catalog_family("modular", 3, 3).unwrap();
        let m = frattini_relation_matrix(&m33, detect_case(&m33));
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[3, 0], &[0, 1], &[1, 0]]));

        let m34 = catalog_family("modular", 3, 4).unwrap();
        let m = frattini_relation_matrix(&m34, detect_case(&m34));
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[9, 0], &[0, 1], &[3, 0]]));

        let heis = catalog_family("heisenberg", 3, 0).unwrap();
        let m = frattini_relation_matrix(&heis, detect_case(&heis));
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn frattini_types() {
        assert_eq!(
            frattini_of_abelianization(&catalog_family("modular", 3, 3).unwrap()).unwrap(),
            AbelianType::trivial()
        );
        assert_eq!(
            frattini_of_abelianization(&catalog_family("modular", 3, 4).unwrap()).unwrap(),
            typ(&[3])
        );
        let extended = extend_direct_cyclic(&catalog_family("heisenberg", 3, 0).unwrap(), 2);
        assert_eq!(frattini_of_abelianization(&extended).unwrap(), typ(&[3]));
    }

    #[test]
    fn reconstruction_steps_up() {
        assert_eq!(
            reconstruct_abelianization(&AbelianType::trivial(), 2, 3).unwrap(),
            typ(&[3, 3])
        );
        assert_eq!(
            reconstruct_abelianization(&typ(&[3]), 2, 3).unwrap(),
            typ(&[9, 3])
        );
        assert_eq!(
            reconstruct_abelianization(&typ(&[9, 3]), 3, 3).unwrap(),
            typ(&[27, 9, 3])
        );
        assert!(matches!(
            reconstruct_abelianization(&typ(&[3, 3, 3]), 2, 3),
            Err(PipelineError::RankDeficit { found: 3, rank: 2 })
        ));
    }

    #[test]
    fn paper_method_examples() {
        assert_eq!(
            abelianize_paper(&catalog_family("modular", 3, 3).unwrap()).unwrap(),
            typ(&[3, 3])
        );
        assert_eq!(
            abelianize_paper(&catalog_family("modular", 3, 4).unwrap()).unwrap(),
            typ(&[9, 3])
        );
        assert_eq!(
            abelianize_paper(&catalog_family("extraspecial_exp_p", 3, 2).unwrap()).unwrap(),
            typ(&[3, 3, 3, 3])
        );
    }

    #[test]
    fn direct_method_examples() {
        assert_eq!(
            abelianize_direct(&catalog_family("modular", 3, 4).unwrap()).unwrap(),
            typ(&[9, 3])
        );
        assert_eq!(
            abelianize_direct(&catalog_family("heisenberg", 3, 0).unwrap()).unwrap(),
            typ(&[3, 3])
        );
        let extended = extend_direct_cyclic(&catalog_family("heisenberg", 3, 0).unwrap(), 2);
        assert_eq!(abelianize_direct(&extended).unwrap(), typ(&[9, 3, 3]));
        let extended = extend_direct_cyclic(&catalog_family("modular", 3, 3).unwrap(), 1);
        assert_eq!(abelianize_direct(&extended).unwrap(), typ(&[3, 3, 3]));
        assert_eq!(abelianize_paper(&extended).unwrap(), typ(&[3, 3, 3]));
    }

    #[test]
    fn hobby_identity_holds_and_fails_under_wrong_case() {
        let m34 = catalog_family("modular", 3, 4).unwrap();
        let report = hobby_check(&m34, 1 << 20, 243, 0).unwrap();
        assert!(report.holds);
        assert_eq!(report.matrix_route, typ(&[3]));

        let heis = catalog_family("heisenberg", 3, 0).unwrap();
        let report = hobby_check(&heis, 1 << 20, 243, 0).unwrap();
        assert!(report.holds);
        assert_eq!(report.matrix_route, AbelianType::trivial());

        // Forcing case II on a case-I group inflates the matrix route.
        let corrupted = hobby_check_with_case(&m34, CaseTag::CaseII, 1 << 20, 243, 0).unwrap();
        assert!(!corrupted.holds);
    }

    #[test]
    fn generalized_extraspecial_classifier() {
        assert!(is_generalized_extraspecial(
            &catalog_family("heisenberg", 3, 0).unwrap()
        ));
        assert!(is_generalized_extraspecial(
            &catalog_family("modular", 3, 3).unwrap()
        ));
        assert!(!is_generalized_extraspecial(
            &catalog_family("modular", 3, 4).unwrap()
        ));
    }

    #[test]
    fn analyze_produces_agreeing_report() {
        let pres = catalog_family("modular", 3, 4).unwrap();
        let report = analyze(&pres, &AnalysisOptions::default()).unwrap();
        assert!(report.agreement);
        assert_eq!(report.methods.len(), 3);
        assert_eq!(report.methods[&Method::Paper], typ(&[9, 3]));
        assert_eq!(report.case.to_string(), "I");
        assert!(!report.generalized_extraspecial);
        assert!(report.notices.is_empty());
    }

    #[test]
    fn analyze_skips_census_beyond_cap() {
        let pres = catalog_family("modular", 3, 4).unwrap();
        let options = AnalysisOptions {
            enum_cap: 10,
            ..Default::default()
        };
        let report = analyze(&pres, &options).unwrap();
        assert!(report.agreement);
        assert_eq!(report.methods.len(), 2);
        assert!(!report.methods.contains_key(&Method::Census));
        assert_eq!(report.notices.len(), 1);
    }

    #[test]
    fn step_down_inverts_reconstruction() {
        for (name, p, size) in [
            ("modular", 3u64, 5u64),
            ("heisenberg", 5, 0),
            ("extraspecial_exp_p", 3, 2),
        ] {
            let pres = catalog_family(name, p, size).unwrap();
            let ab = abelianize_paper(&pres).unwrap();
            let phi = frattini_of_abelianization(&pres).unwrap();
            assert_eq!(ab.step_down(p), phi);
        }
    }

    #[test]
    fn frattini_concrete_routes_agree_with_matrix() {
        for pres in [
            catalog_family("modular", 3, 3).unwrap(),
            catalog_family("modular", 3, 4).unwrap(),
            catalog_family("heisenberg", 3, 0).unwrap(),
            extend_direct_cyclic(&catalog_family("heisenberg", 3, 0).unwrap(), 2),
        ] {
            let symbolic = frattini_of_abelianization(&pres).unwrap();
            let concrete = frattini_of_abelianization_concrete(&pres, 1 << 20, 0).unwrap();
            assert_eq!(symbolic, concrete, "mismatch for {:?}", pres);
        }
    }
}
