//! Finite pieces of the tiling space: paved patches, the diagonal property,
//! and transitivity certified by staircase witnesses.
//!
//! Lattice positions are `(i, j)` with `i` growing to the right and `j`
//! growing upwards, so a tile's top edge is the bottom edge of the tile at
//! `(i, j + 1)` and its right edge is the left edge of the tile at
//! `(i + 1, j)`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{is_irreducible, is_irreducible_by_powers};
use crate::matrix::NonnegMatrix;
use crate::textile::{TextileSystem, Tile};

/// Two tiles on a diagonal, `upper_left` at `(i, j)` and `lower_right` at
/// `(i + 1, j - 1)`, that admit more than one completion of the 2×2 square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalViolation {
    pub upper_left: usize,
    pub lower_right: usize,
    pub completions: usize,
}

/// Counts, for every ordered pair of tiles placed at `(i, j)` and
/// `(i + 1, j - 1)`, the pairs of tiles filling `(i, j - 1)` and `(i + 1, j)`.
/// Returns the first pair with more than one completion.
pub fn diagonal_violation(tiles: &[Tile]) -> Option<DiagonalViolation> {
    // tile at (i, j-1) is fixed by its (top, right); at (i+1, j) by (left, bottom)
    let mut below_left: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut above_right: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in tiles {
        *below_left.entry((t.top, t.right)).or_default() += 1;
        *above_right.entry((t.left, t.bottom)).or_default() += 1;
    }
    for (x, w1) in tiles.iter().enumerate() {
        for (y, w2) in tiles.iter().enumerate() {
            let lower = below_left.get(&(w1.bottom, w2.left)).copied().unwrap_or(0);
            let upper = above_right.get(&(w1.right, w2.top)).copied().unwrap_or(0);
            if lower * upper > 1 {
                return Some(DiagonalViolation { upper_left: x, lower_right: y, completions: lower * upper });
            }
        }
    }
    None
}

pub fn check_diagonal_property(sys: &TextileSystem) -> Result<(), DiagonalViolation> {
    diagonal_violation(sys.tiles()).map_or(Ok(()), Err)
}

/// Transitivity through irreducibility of `A_κ + B_κ`.
pub fn is_transitive_matrix(sys: &TextileSystem) -> bool {
    let verdict = is_irreducible(&sys.sum_matrix());
    debug_assert_eq!(verdict, is_irreducible(sys.h_kappa()));
    verdict
}

/// Whether for every pair `p, q` in `Ω_κ` some `n, m ≤ |Ω_κ|` give
/// `A_κ (A_κ + B_κ)^n (p, q) > 0` and `B_κ (A_κ + B_κ)^m (p, q) > 0`.
///
/// Boolean matrix powers; quartic in `|Ω_κ|`, meant for small systems.
pub fn mixed_power_positivity(sys: &TextileSystem) -> bool {
    let n = sys.omega().len();
    let step = sys.sum_matrix().support();
    let bool_mul = |x: &NonnegMatrix, y: &NonnegMatrix| {
        NonnegMatrix::from_fn(n, |i, j| u64::from((0..n).any(|k| x[(i, k)] != 0 && y[(k, j)] != 0)))
    };
    let reach = |start: &NonnegMatrix| {
        let mut power = start.support();
        let mut acc = power.clone();
        for _ in 0..n {
            power = bool_mul(&power, &step);
            acc = NonnegMatrix::from_fn(n, |i, j| acc[(i, j)] | power[(i, j)]);
        }
        acc
    };
    let via_a = reach(sys.a_kappa());
    let via_b = reach(sys.b_kappa());
    (0..n).all(|i| (0..n).all(|j| via_a[(i, j)] != 0 && via_b[(i, j)] != 0))
}

/// Cross-check of irreducibility of `H_κ` by boolean powers.
pub fn h_kappa_irreducible_by_powers(sys: &TextileSystem) -> bool {
    is_irreducible_by_powers(sys.h_kappa())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Right,
    Down,
}

/// A staircase from `start` at the origin: each move places the next tile
/// one step right or one step down, matching the shared edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseWitness {
    pub start: Tile,
    pub moves: Vec<Move>,
    pub tiles: Vec<Tile>,
    pub end_position: (i64, i64),
}

impl StaircaseWitness {
    pub fn positions(&self) -> Vec<(i64, i64)> {
        let mut pos = (0i64, 0i64);
        let mut out = vec![pos];
        for m in &self.moves {
            match m {
                Move::Right => pos.0 += 1,
                Move::Down => pos.1 -= 1,
            }
            out.push(pos);
        }
        out
    }

    pub fn end_tile(&self) -> Tile {
        self.tiles.last().copied().unwrap_or(self.start)
    }

    /// Re-checks every link against the system, and that the end position
    /// lies strictly right of and below the origin.
    pub fn verify(&self, sys: &TextileSystem) -> bool {
        if self.moves.len() != self.tiles.len() || sys.tile_index(&self.start).is_none() {
            return false;
        }
        let mut prev = self.start;
        for (m, t) in self.moves.iter().zip(&self.tiles) {
            if sys.tile_index(t).is_none() {
                return false;
            }
            let linked = match m {
                Move::Right => t.left == prev.right,
                Move::Down => t.top == prev.bottom,
            };
            if !linked {
                return false;
            }
            prev = *t;
        }
        let end = *self.positions().last().expect("nonempty");
        end == self.end_position && end.1 < 0 && 0 < end.0
    }

    pub fn to_patch(&self) -> PavedPatch {
        let mut patch = PavedPatch::new();
        let tiles = core::iter::once(&self.start).chain(&self.tiles);
        for (pos, t) in self.positions().into_iter().zip(tiles) {
            patch.cells.insert(pos, *t);
        }
        patch
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(StaircaseWitness),
    NotFound { max_steps: usize },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&StaircaseWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            WitnessSearch::NotFound { .. } => None,
        }
    }
}

/// Default search depth, `2 |Ω_κ|`.
pub fn default_max_steps(sys: &TextileSystem) -> usize {
    2 * sys.omega().len()
}

/// Breadth-first search over staircases of tiles.
struct StaircaseSearch<'a> {
    sys: &'a TextileSystem,
    by_left: Vec<Vec<usize>>,
    by_top: Vec<Vec<usize>>,
}

// state = tile index * 4 + (seen right) + 2 * (seen down)
const SEEN_BOTH: usize = 3;

impl<'a> StaircaseSearch<'a> {
    fn new(sys: &'a TextileSystem) -> Self {
        let mut by_left = vec![Vec::new(); sys.graph_b().edge_count()];
        let mut by_top = vec![Vec::new(); sys.graph_a().edge_count()];
        for (k, t) in sys.tiles().iter().enumerate() {
            by_left[t.left].push(k);
            by_top[t.top].push(k);
        }
        Self { sys, by_left, by_top }
    }

    /// Shortest-path parents from `start`, bounded by `max_steps`.
    fn explore(&self, start: usize, max_steps: usize) -> Vec<Option<(usize, Move)>> {
        let tiles = self.sys.tiles();
        let mut parent: Vec<Option<(usize, Move)>> = vec![None; tiles.len() * 4];
        let mut depth = vec![usize::MAX; tiles.len() * 4];
        let origin = start * 4;
        depth[origin] = 0;
        let mut queue = VecDeque::from([origin]);
        while let Some(state) = queue.pop_front() {
            if depth[state] == max_steps {
                continue;
            }
            let (tile, flags) = (state / 4, state % 4);
            let t = tiles[tile];
            for (mv, bit, next) in [(Move::Right, 1, &self.by_left[t.right]), (Move::Down, 2, &self.by_top[t.bottom])] {
                for &k in next {
                    let s = k * 4 + (flags | bit);
                    if depth[s] == usize::MAX {
                        depth[s] = depth[state] + 1;
                        parent[s] = Some((state, mv));
                        queue.push_back(s);
                    }
                }
            }
        }
        parent
    }

    fn witness(&self, start: usize, target: usize, parent: &[Option<(usize, Move)>]) -> Option<StaircaseWitness> {
        let tiles = self.sys.tiles();
        let mut state = target * 4 + SEEN_BOTH;
        parent[state]?;
        let mut moves = Vec::new();
        let mut path = Vec::new();
        while let Some((prev, mv)) = parent[state] {
            moves.push(mv);
            path.push(tiles[state / 4]);
            state = prev;
        }
        debug_assert_eq!(state, start * 4);
        moves.reverse();
        path.reverse();
        let right = moves.iter().filter(|m| **m == Move::Right).count() as i64;
        let down = moves.len() as i64 - right;
        Some(StaircaseWitness { start: tiles[start], moves, tiles: path, end_position: (right, -down) })
    }
}

/// Searches for a staircase from `from` to `to` with at least one move of
/// each kind and at most `max_steps` moves.
///
/// Panics if either tile is not in `E_κ`.
pub fn find_transitivity_witness(sys: &TextileSystem, from: &Tile, to: &Tile, max_steps: usize) -> WitnessSearch {
    let start = sys.tile_index(from).expect("start tile not in the system");
    let target = sys.tile_index(to).expect("target tile not in the system");
    let search = StaircaseSearch::new(sys);
    let parent = search.explore(start, max_steps);
    match search.witness(start, target, &parent) {
        Some(w) => WitnessSearch::Found(w),
        None => WitnessSearch::NotFound { max_steps },
    }
}

/// First ordered pair of tile indices with no staircase of length at most
/// `max_steps`.
pub fn transitivity_counterexample(sys: &TextileSystem, max_steps: usize) -> Option<(usize, usize)> {
    let search = StaircaseSearch::new(sys);
    for start in 0..sys.tiles().len() {
        let parent = search.explore(start, max_steps);
        if let Some(target) = (0..sys.tiles().len()).find(|&t| parent[t * 4 + SEEN_BOTH].is_none()) {
            return Some((start, target));
        }
    }
    None
}

pub fn is_transitive_search(sys: &TextileSystem, max_steps: usize) -> bool {
    transitivity_counterexample(sys, max_steps).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatchError {
    #[error("position ({0},{1}) is already occupied")]
    Occupied(i64, i64),
    #[error("position ({0},{1}) is not adjacent to the patch")]
    NotAdjacent(i64, i64),
}

/// Tiles placed on finitely many lattice positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PavedPatch {
    pub cells: BTreeMap<(i64, i64), Tile>,
}

impl PavedPatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pos: (i64, i64), tile: Tile) -> Option<Tile> {
        self.cells.insert(pos, tile)
    }

    /// Whether all horizontally and vertically adjacent cells agree.
    pub fn is_paved(&self) -> bool {
        self.cells.iter().all(|(&(i, j), t)| {
            let east = self.cells.get(&(i + 1, j)).is_none_or(|e| e.left == t.right);
            let north = self.cells.get(&(i, j + 1)).is_none_or(|n| n.bottom == t.top);
            east && north
        })
    }
}

/// Tiles of `E_κ` that fit at `pos` next to every placed neighbour.
pub fn extend_patch(sys: &TextileSystem, patch: &PavedPatch, pos: (i64, i64)) -> Result<Vec<Tile>, PatchError> {
    let (i, j) = pos;
    if patch.cells.contains_key(&pos) {
        return Err(PatchError::Occupied(i, j));
    }
    let north = patch.cells.get(&(i, j + 1));
    let south = patch.cells.get(&(i, j - 1));
    let east = patch.cells.get(&(i + 1, j));
    let west = patch.cells.get(&(i - 1, j));
    if !patch.cells.is_empty() && north.is_none() && south.is_none() && east.is_none() && west.is_none() {
        return Err(PatchError::NotAdjacent(i, j));
    }
    Ok(sys
        .tiles()
        .iter()
        .filter(|t| {
            north.is_none_or(|n| n.bottom == t.top)
                && south.is_none_or(|s| s.top == t.bottom)
                && east.is_none_or(|e| e.left == t.right)
                && west.is_none_or(|w| w.right == t.left)
        })
        .copied()
        .collect())
}
