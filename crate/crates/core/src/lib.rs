pub mod analytic;
pub mod capacity;
pub mod compensated;
pub mod error;
pub mod exact;
pub mod game;
pub mod layered;
pub mod monte_carlo;
pub mod probability;
pub mod racs;
pub mod reference_values;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod symmetric;
pub mod weights;
