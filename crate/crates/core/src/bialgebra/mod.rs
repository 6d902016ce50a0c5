//! Lie bialgebra structures on the Witt algebra `[e_n, e_m] = (n - m) e_{n+m}`
//! and their correspondence with the brackets on the jet groups.

mod cochain;
mod correspondence;
mod tensor;

pub use cochain::{
    alpha_family_13, alpha_family_13_table, alpha_family_d_lambda, alpha_family_d_lambda_table, coboundary,
    coboundary_table, cocycle_residual, cocycle_residuals, cojacobi_residual, cybe_residual, proportionality,
    r_from_lambda, r_from_phi, AlphaTable, IndexedValue3, Proportion,
};
pub use correspondence::{
    analyze_cocycle, derive_cocycle_from_omega, homogeneous_kernel, pde_system_residual, pde_system_residuals,
    solve_r_from_cocycle, KernelReport, SolveReport, WeightReport,
};
pub use tensor::{
    adjoint_on_tensor2, adjoint_on_tensor3, witt_bracket, Adjoint2, IndexedValue2, RMatrix, Tensor2, Tensor3,
    WittElement,
};
