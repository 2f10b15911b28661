//! Critical numbers of finite abelian groups.
//!
//! The crate covers four layers:
//!
//! * [`group`], [`quotient`], [`subgroup`]: groups in invariant-factor form,
//!   quotients by coordinate-wise reduction, generated subgroups;
//! * [`subset`], [`sumset`], [`kernel`]: dense subsets and the h-fold,
//!   `[0,s]` and subset-sum expansions;
//! * [`formula`]: closed forms for `chi(G,h)`, `chi(G,[0,s])`, `chi^(G,h)`,
//!   `chi^(G,[0,s])` (where known), `cr(G)`, `cr*(G)` and the sum-free bound;
//! * [`witness`], [`oracle`]: extremal-set constructions that certify the
//!   formulas, and an exhaustive subset search that checks everything.

pub mod arith;
pub mod error;
pub mod formula;
pub mod group;
pub mod kernel;
pub mod oracle;
pub mod quotient;
pub mod subgroup;
pub mod subset;
pub mod sumset;
pub mod witness;

pub use error::{Error, Result};
pub use formula::{CriticalKind, CrPair, FormulaValue};
pub use group::{abelian_types, abelian_types_in, normalize_type, Element, Group, GroupType};
pub use oracle::{Oracle, OracleConfig, OracleOutcome, OracleQuery};
pub use quotient::QuotientSpec;
pub use subgroup::{is_generating, subgroup_generated};
pub use subset::GroupSubset;
pub use sumset::{hfold_sumset, interval_sumset, is_complete, subset_sums, sumset};
pub use witness::{BoundCertificate, WitnessCertificate, WitnessMode};

