//! Small worked spaces used across tests, the CLI fixtures and the docs.

use crate::bitset::BitSet;
use crate::finite_space::{validate_topology, FiniteSpace};

/// Y = {a,b,c} with opens {∅, {a}, {b}, {a,b}, Y}. Canonical open order is
/// ∅, U1={a}, U2={b}, U3={a,b}, Y (indices 0..4).
pub fn example_a_y() -> FiniteSpace {
    validate_topology(
        &["a", "b", "c"],
        &[
            BitSet::empty(3),
            BitSet::singleton(3, 0),
            BitSet::singleton(3, 1),
            BitSet::from_indices(3, [0, 1]),
            BitSet::full(3),
        ],
    )
    .expect("example A axioms")
}

/// Y = {a,b} with opens {∅, {a}, Y} (indices 0..2 in canonical order).
pub fn example_b_y() -> FiniteSpace {
    validate_topology(
        &["a", "b"],
        &[BitSet::empty(2), BitSet::singleton(2, 0), BitSet::full(2)],
    )
    .expect("example B axioms")
}

/// A three-point chain space: opens ∅ ⊂ {p0} ⊂ {p0,p1} ⊂ all.
pub fn three_point_chain() -> FiniteSpace {
    validate_topology(
        &["p0", "p1", "p2"],
        &[
            BitSet::empty(3),
            BitSet::singleton(3, 0),
            BitSet::from_indices(3, [0, 1]),
            BitSet::full(3),
        ],
    )
    .expect("chain axioms")
}

/// The one-point space.
pub fn one_point() -> FiniteSpace {
    validate_topology(&["p"], &[BitSet::empty(1), BitSet::full(1)]).expect("one point axioms")
}
