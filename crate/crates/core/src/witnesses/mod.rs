//! Dense open counterexample sets with exact membership checkers, and the
//! constructions producing tuples from perfect sets that avoid them.

pub mod e0;
pub mod e1;
pub mod e2;
pub mod e3;

pub use e0::{
    avoiding_sources, d_e0_prefix_witness, d_e0_witness, density_extension_e0, e0_mycielski_check,
    e0_weak_mycielski_check, in_d_e0, in_d_e0_k,
};
pub use e1::{
    d_e1_prefix_witness, density_extension_e1, e1_witness, in_d_e1, oracle_by_name, E1Witness,
    IdentityOracle, InterleaveOracle, LeakyOracle,
};
pub use e2::{
    density_extension_e2, e2_mycielski_check, e2_weak_mycielski_check, heaviest_prefix_run, in_d_e2,
    in_d_e2_n, in_d_e2_threshold, Run,
};
pub use e3::{
    density_extension_e3, e3_witness, grid_system_check, identity_grid_instance, in_d_e3, E3Witness,
    GridSystem,
};
