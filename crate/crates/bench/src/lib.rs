//! Benchmark fixtures shared by the criterion targets.

use fischer_core::Workspace;

/// The (m, k, degree) cells the benchmarks sweep, smallest first.
pub const CELLS: [(usize, usize, u32); 4] = [(3, 1, 4), (4, 1, 3), (4, 2, 2), (5, 2, 2)];

pub fn workspace(m: usize, k: usize) -> Workspace {
    Workspace::new(m, k).expect("valid dimensions")
}
