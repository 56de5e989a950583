//! Exact arithmetic for Breuil-Kisin modules over `W_n(k)[[u]]` and the Hopf
//! orders in `KC_p` and `KC_{p²}` they classify.
//!
//! Coefficients live in Galois rings ([`GaloisRing`]); series carry an explicit
//! absolute precision ([`Series`]). The classification layers are
//! [`semilinear`], [`cyclic`], [`kcp2`] and [`laurent`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod arith;
pub mod cyclic;
pub mod eisenstein;
pub mod error;
pub mod galois;
pub mod kcp2;
pub mod laurent;
pub mod semilinear;
pub mod series;

pub use cyclic::{
    generic_relation_n1, BreuilLabel, BreuilResult, Containment, CyclicN, CyclicN1, CyclicN1Form, CyclicNForm,
    CyclicShape, GenericRelation, LarsonParam, OrderName, OrderVerdict,
};
pub use eisenstein::{cyclotomic_eisenstein, eisenstein_validate, EisensteinPoly};
pub use error::{EisensteinDefect, Error, Result};
pub use galois::{Elem, FieldDesc, GaloisRing};
pub use kcp2::{
    remark_shortcut, Conditions, Family, Kcp2Candidate, Kcp2Enumeration, Kcp2Module, Kcp2Params, Kcp2Setting,
    ModElem, RemarkVerdict,
};
pub use laurent::{
    check_n1_laurent, kcp_laurent_set, tuple_from_kcp2, verify_cyclotomic_iso, verify_general_tuple, GeneralTuple,
    KcpLaurentEntry, TupleVerdict,
};
pub use semilinear::{feasible_k, solve_k, solve_laurent, solve_w_unit, Feasibility, Solution, SolveOptions};
pub use series::{fmt_elem, Series, Valuation};
