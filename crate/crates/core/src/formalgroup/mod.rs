//! Truncated power series over exact rings, formal groups of Weierstrass
//! models and Lubin–Tate formal groups.

mod law;
mod ring;
mod series;

#[cfg(test)]
mod tests;

pub use law::{
    canonical_isomorphism, coleman_norm, fg_exp, fg_log, lt_intertwiner, lubin_tate, multiplicative, weierstrass_fg,
    CanonicalIso, Endomorphism, FormalGroupLaw, Laurent, LawCheck, WeierstrassFg, DEFAULT_TRUNCATION,
};
pub use ring::{Coeff, LocalRing, Padic, PadicInt, QuadElem, RingTag, Torsion};
pub use series::{Series, Series2};
