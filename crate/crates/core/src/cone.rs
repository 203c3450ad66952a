//! Per-player ordering cones `C_i` on `(x, f_1(x), ..., f_N(x))`, their dual
//! generators `Z_i`, and the scalarized objectives `Z_iᵀ B`.
//!
//! `C_i` holds the vectors whose `x_{-i}` block is zero and whose `f_i` block
//! lies in `K_i`; player `i`'s own strategy and every other cost block are
//! unconstrained.

use num_traits::One;

use crate::error::Result;
use crate::game::LinearGame;
use crate::rational::{is_nonnegative, QMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGenerators {
    pub player: usize,
    /// `(n + Σ d_j) x m_i`; columns generate the dual cone of `C_i`.
    pub z: QMatrix,
}

impl DualGenerators {
    pub fn count(&self) -> usize {
        self.z.ncols()
    }
}

/// Columns: a `+e_k, -e_k` pair per opponent coordinate `k` (ascending),
/// then the dual generators of `K_i` placed in the `f_i` block.
pub fn dual_generators(game: &LinearGame, i: usize) -> Result<DualGenerators> {
    game.check_player(i)?;
    let n = game.total_dim();
    let rows = n + game.players.iter().map(|p| p.payoff_dim()).sum::<usize>();
    let others = game.other_coords(i);
    let w = &game.players[i].dual_generators;
    let f_start = n + game.players[..i]
        .iter()
        .map(|p| p.payoff_dim())
        .sum::<usize>();
    let mut z = QMatrix::zeros(rows, 2 * others.len() + w.ncols());
    for (t, &k) in others.iter().enumerate() {
        z[(k, 2 * t)] = Rational::one();
        z[(k, 2 * t + 1)] = -Rational::one();
    }
    let base = 2 * others.len();
    for c in 0..w.ncols() {
        for r in 0..w.nrows() {
            z[(f_start + r, base + c)] = w[(r, c)].clone();
        }
    }
    Ok(DualGenerators { player: i, z })
}

/// `G_i = Z_iᵀ B`, an `m_i x n` matrix minimized in the `R^{m_i}_+` order.
pub fn scalarized_objective(game: &LinearGame, i: usize) -> Result<QMatrix> {
    let z = dual_generators(game, i)?.z;
    z.transpose().mul(&game.stacked_objective())
}

/// `y ∈ C_i`, tested through the dual generators.
pub fn in_ordering_cone(gens: &DualGenerators, y: &[Rational]) -> bool {
    is_nonnegative(&gens.z.transpose().mul_vec(y))
}
