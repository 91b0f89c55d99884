//! Abelianization of finite p-groups of nilpotency class 2 whose derived
//! subgroup has prime order, computed from a power-commutator presentation.
//!
//! For such a group `G` (p odd), the Frattini subgroup of the abelianization
//! satisfies `Phi(G/G') ~ G^p / (G^p n G')`, and the intersection is either
//! all of `G'` (case I, the designated derived element is a generator power)
//! or trivial (case II, it is an independent central generator). Writing
//! `G^p` additively yields an integer relation matrix whose Smith Normal Form
//! gives the type of `Phi(G^ab)`, from which `G^ab` itself is reconstructed
//! by stepping every invariant factor up by one power of p.
//!
//! The crate ships three independent routes to `G^ab` so each can check the
//! others:
//!
//! - [`abelianize::abelianize_paper`] — the case split / relation matrix /
//!   SNF / step-up pipeline sketched above;
//! - [`abelianize::abelianize_direct`] — ordinary abelianization of the
//!   presentation (kill all commutators, SNF of the resulting relations);
//! - [`engine`] — a concrete realization of the group with collection-based
//!   multiplication, exhaustive subgroup machinery and an element-order
//!   census, used to abelianize by brute force and to verify the structural
//!   identities (`Phi(G) = G^p G'`, `Phi(G/N) ~ Phi(G)/N`) the symbolic
//!   pipeline relies on.

pub mod abelianize;
pub mod engine;
pub mod pcpres;
pub mod snf;

pub use abelianize::{
    abelianize_census, abelianize_direct, abelianize_paper, analyze, detect_case,
    frattini_of_abelianization, frattini_relation_matrix, hobby_check, is_generalized_extraspecial,
    reconstruct_abelianization, verify_case_semantically, AnalysisOptions, CaseTag, HobbyReport,
    Method, PipelineError, Report,
};
pub use engine::{
    abelian_invariants_census, build_group, check_lemmas, frattini_via_lattice,
    quotient_by_central, subgroup_closure, ConcreteGroup, EngineError, FiniteGroup, GroupElement,
    LemmaReport, QuotientGroup, Subgroup, SubgroupView, DEFAULT_ENUM_CAP, DEFAULT_LATTICE_CAP,
};
pub use pcpres::{
    catalog_family, extend_direct_cyclic, parse_presentation, render_presentation, validate,
    AbelianType, CatalogError, DerivedSpec, ParseError, PcPresentation, Violation,
};
pub use snf::{
    abelian_type_from_relations, minor_gcd_invariants, smith_normal_form, IntMatrix, SnfError,
    SnfResult,
};
