//! Explicit maps on triples and sequences: `P`, `Q'`, `Q''`, `P'` and `K`
//! on E0-inequivalent triples, the tail-equivalence reductions, the
//! threshold map on E2-inequivalent triples, the branching-tree map `Ψ`,
//! discontinuity gadgets and the oracle interface for continuous maps.

pub mod e0;
pub mod e2;
pub mod gadget;
pub mod jonsson;
pub mod oracle;
pub mod tail;

pub use e0::{
    alternating_ternary, in_a, k_e0, p_e0, p_e0_preimage, p_e0_trace, p_prime_e0, preimage_words,
    q_double_prime, q_double_prime_fin, q_e0, q_prime, TripleState,
};
pub use e2::{n_sequence, p_e2, p_e2_run, p_e2_witness, Bits, E2Run, E2Witness, Theta, DEFAULT_BUDGET};
pub use gadget::{
    e0_gadget_check, e2_gadget_check, eventually_two_free, galvin_coloring, galvin_d,
    discontinuity_gadget, p_e0_gadget, Gadget,
};
pub use jonsson::{a_sigma, first_extending, jonsson_build, psi, t_hat, JonssonBuild};
pub use oracle::MapOracle;
pub use tail::{block_reduction, oplus_reduction};
