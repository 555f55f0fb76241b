//! Finite structural causal models with exact probabilities.
//!
//! The crate covers causal DAGs and d-separation ([`graph`], [`dsep`]),
//! finite structural equation models with two intervention operators
//! ([`sem`]), exact joint and counterfactual laws ([`dist`]) and executable
//! checks relating them ([`verify`]).
//!
//! Probabilities are generic over [`Probability`]; [`Exact`] (arbitrary
//! precision rationals) is the reference scalar and `f64`/`f32` are
//! supported with a comparison tolerance.
//!
//! ```
//! use cfsem::{toy, counterfactual_dist, Exact, Intervention, NodeSet};
//!
//! let m = toy::toy_sem::<Exact>();
//! let iv = Intervention::parse(&m, "A=1").unwrap();
//! let y = NodeSet::singleton(m.dag().node("Y").unwrap());
//! let law = counterfactual_dist(&m, &iv, &y).unwrap();
//! assert_eq!(law.get(&[1]).to_string(), "1/2");
//! ```

pub mod dist;
pub mod dsep;
pub mod error;
pub mod format;
pub mod graph;
pub mod scalar;
pub mod sem;
pub mod toy;
pub mod verify;

pub use dist::{
    adjustment_formula, check_ci, check_markov, check_positivity, counterfactual_dist, counterfactual_dist_pearl,
    exact_joint, exact_joint_with_cap, ProbTable, VarInfo, WorldPairs, WorldVar,
};
pub use dsep::{
    backdoor_criterion, backdoor_paths, enumerate_admissible_sets, enumerate_paths, is_blocked, is_d_separated,
    is_d_separated_oracle, AdmissibleSet, BackdoorPath, CriterionReport, Path, SeparationQuery, Step,
};
pub use error::{Error, Result};
pub use format::{from_json, to_json};
pub use graph::{Dag, NodeId, NodeSet};
pub use scalar::{format_rational, parse_rational, Probability};
pub use sem::{
    Assignment, DisturbanceLaw, DisturbanceModel, Intervention, ModelMode, SemModel, StructFn, Surgeries, Triple,
    Value, DEFAULT_ENUMERATION_CAP,
};
pub use verify::{
    check_backdoor_theorem, check_consistency_event, check_ffrcistg, check_ffrcistg_preserved,
    check_lemma_equalities, generate_random_sem, GeneratorProfile,
};

/// Reference scalar: arbitrary precision rationals.
pub type Exact = num_rational::BigRational;
/// Models with exact probabilities.
pub type ExactSem = SemModel<Exact>;
/// Exact probability tables.
pub type ExactTable = ProbTable<Exact>;
/// Models with double precision probabilities.
pub type FloatSem = SemModel<f64>;
pub type FloatTable = ProbTable<f64>;
