//! Exact integer and rational linear algebra.

mod matrix;
mod signature;
mod snf;
mod split;

pub use matrix::{is_even, kronecker, IntMatrix, RatMatrix, SymIntMatrix};
pub use signature::{signature, signature_rational, SignatureTriple};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use split::{block_split, BlockSplit};

/// Gram matrix of the `A2` root lattice.
pub fn a2_gram() -> SymIntMatrix {
    SymIntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap()
}

/// Gram matrix of the `E8` root lattice (Bourbaki labelling).
pub fn e8_gram() -> SymIntMatrix {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        rows[a][b] = -1;
        rows[b][a] = -1;
    }
    SymIntMatrix::from_rows(&rows).unwrap()
}
