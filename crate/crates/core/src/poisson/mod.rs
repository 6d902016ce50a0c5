//! Multiplicative Poisson brackets on the jet groups.

mod lambda;
mod omega;
mod verify;

pub use lambda::{lambda_from_mu, LambdaTable, MuSeq, RelationMode};
pub use omega::{g3_example, omega_from_lambda, omega_from_phi, omega_special, OmegaEntryJson, OmegaTable};
pub use verify::{
    functional_eq8_residual, inversion_residual, inversion_residual_with, jacobi_all, jacobi_residual, omega_series, random_jet,
    MultiplicativityChecker, SeriesResidual,
};
