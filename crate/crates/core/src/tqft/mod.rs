//! Modular data of the pointed category on `(G_K, q_K)`, genus-`g` state
//! spaces, extended weights and the Maslov index.

mod maslov;
mod modular;
mod weights;

pub use maslov::{
    lagrangian_basis, maslov_cocycle_defect, maslov_index, standard_symplectic, toral_maslov_index,
    LagrangianTriple,
};
pub use modular::{
    central_charge_phase, charge_conjugation, cylinder_scalar, genus_g_dimension, hopf_pairing,
    modular_relations_check, s_matrix, t_matrix, ModularReport, OperatorMatrix, StateSpace,
};
pub use weights::{
    closure_weight_consistency, extended_correct, lens_space_consistency, ExtendedScalar,
    LensReport, WeightReport,
};
