//! Danos-Regnier correctness, indexings, proof nets and linear logic by
//! levels (indexing and geometric routes).

mod deciders;
pub mod indexing;
pub mod switching;

pub use deciders::*;
pub use indexing::{
    balance, check_indexing, components, default_exponential_quasi_indexing, shift_indexing, solve_aligned,
    solve_indexing, AlignmentFailure, HasCuts, BalanceWitness, Flavor, Indexing, IndexingError, Walk,
};
pub use switching::{
    enumerate_switchings, is_dr_correct, is_dr_correct_brute, is_dr_correct_fast, BudgetExceeded, CyclicSwitching,
    DrVerdict, Switching, DEFAULT_SWITCHING_BUDGET,
};
