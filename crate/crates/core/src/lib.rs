//! Eisenstein–Kronecker numbers, theta functions, elliptic units, Hecke
//! L-values and formal groups for CM elliptic curves over imaginary quadratic
//! fields of class number one.

pub mod eisenstein;
pub mod error;
pub mod field;
pub mod formalgroup;
pub mod heckel;
pub mod lattice;
pub mod numerics;
pub mod suites;
pub mod thetaunits;

pub use error::{Error, Result};
pub use field::{HeckeCharacter, IdealRep, ImagQuadField, OkElem, Preset, RayClassGroup, SplitType};
pub use formalgroup::{coleman_norm, fg_exp, fg_log, lubin_tate, weierstrass_fg, FormalGroupLaw, PadicInt, Series};
pub use heckel::{damerell, l_direct, l_via_eisenstein, tamagawa_rhs, LRoute, LSpec, LValue};
pub use lattice::{Lattice, TorsionPoint};
pub use numerics::{detect_algebraic, lattice_sum, APComplex, AlgebraicCandidate, FieldLabel, SumSpec, DEFAULT_PREC};
pub use suites::{run_suite, CheckRecord, SuiteReport, SUITES};
pub use thetaunits::{coleman_interpolation_check, elliptic_unit, norm_compat_check, theta_alpha, Residual};
