//! Finite-information access to continuous maps on sequences of binary words.

use crate::word::Grid;

/// A continuous map `ω(ω2) → ω(ω2)` seen through finite grids.
///
/// Row `i` of a grid is a prefix of coordinate `i`. `query` returns what the
/// map determines about the output from the given input prefix; refining the
/// input only extends the output.
pub trait MapOracle {
    fn name(&self) -> &str;

    fn query(&self, input: &Grid) -> Grid;

    /// An input window `(rows, cols)` whose grid determines the output on
    /// the first `rows` coordinates to `cols` symbols each.
    fn modulus(&self, rows: usize, cols: usize) -> (usize, usize);

    /// True for maps shipped to show that a construction rejects them.
    fn negative_control(&self) -> bool {
        false
    }
}
