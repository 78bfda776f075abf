//! Double derivations, the element `E`, the double bracket on generators, the
//! degree-3 pairing on the bimodule resolution of a Ginzburg algebra, and the
//! A∞-structure read off from its differential.

mod ainfty;
mod double_deriv;
mod pairing;
mod tensor;

pub use ainfty::{ext_ainfty, AinftyTable};
pub use double_deriv::{
    bracket_left, bracket_right, canonical_e, canonical_e_direct, casimir_commutator, double_sn_bracket, DoubleDeriv,
    SnArg,
};
pub use pairing::{
    case_of, check_nondegenerate, check_pairing_compat, CaseReport, CompatReport, Corruption, NondegeneracyReport,
    PElement, PGenerator, Resolution,
};
pub use tensor::{BiTensor, TriTensor};
