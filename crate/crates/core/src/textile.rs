//! Textile systems: a specification glues two-step paths `αb` of `G_A G_B`
//! to paths `aβ` of `G_B G_A`, and each glued pair is a square tile
//!
//! ```text
//!   ∘ --α--> ∘
//!   |        |
//!   a        b
//!   v        v
//!   ∘ --β--> ∘
//! ```
//!
//! From the tile set we read off the (top, left) pairs `Ω_κ`, the 0/1
//! matrices `A_κ`, `B_κ` recording horizontal and vertical concatenation,
//! and the Cuntz-Krieger matrix `H_κ = [[A_κ, A_κ], [B_κ, B_κ]]`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::graph::{DirectedMultigraph, EdgeId, GraphTag};
use crate::matrix::NonnegMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextileError {
    #[error("graphs have {a} and {b} vertices")]
    VertexMismatch { a: usize, b: usize },
    #[error("AB != BA at ({},{}): AB = {ab}, BA = {ba}", .row + 1, .col + 1)]
    NotCommuting { row: usize, col: usize, ab: u64, ba: u64 },
    #[error("invalid specification: {0}")]
    InvalidSpecification(#[from] SpecViolation),
    #[error("exchange specification needs N, M > 1, got N = {n}, M = {m}")]
    ExchangeTooSmall { n: u64, m: u64 },
}

/// An entry `κ(α, b) = (a, β)`, by edge index (`α, β` in `E_A`, `a, b` in `E_B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KappaEntry {
    pub alpha: usize,
    pub b: usize,
    pub a: usize,
    pub beta: usize,
}

/// A map `κ : Σ^{AB} → Σ^{BA}`, stored as entries sorted by `(α, b)`.
///
/// Construction does not validate; see [`validate_specification`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specification {
    entries: Vec<KappaEntry>,
}

impl Specification {
    pub fn from_entries(mut entries: Vec<KappaEntry>) -> Self {
        entries.sort();
        Self { entries }
    }

    pub fn entries(&self) -> &[KappaEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `κ(α, b)`, if defined.
    pub fn apply(&self, alpha: usize, b: usize) -> Option<(usize, usize)> {
        self.entries
            .binary_search_by(|e| (e.alpha, e.b).cmp(&(alpha, b)))
            .ok()
            .map(|i| (self.entries[i].a, self.entries[i].beta))
    }
}

/// A pair of edges named by identifier, used in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgePair {
    pub first: EdgeId,
    pub second: EdgeId,
}

impl fmt::Display for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.first, self.second)
    }
}

/// Two domain pairs sent to the same image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision {
    pub first: EdgePair,
    pub second: EdgePair,
    pub image: EdgePair,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} and {} both map to {}", self.first, self.second, self.image)
    }
}

/// First violated constraint of a candidate specification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecViolation {
    #[error("{tag}-edge index {index} does not exist")]
    UnknownEdge { tag: GraphTag, index: usize },
    #[error("domain pair {0} is not composable: r(alpha) != s(b)")]
    DomainNotComposable(EdgePair),
    #[error("image pair {0} is not composable: r(a) != s(beta)")]
    ImageNotComposable(EdgePair),
    #[error("domain pair {0} is mapped twice")]
    DuplicateDomain(EdgePair),
    #[error("not injective: {}", .0)]
    NotInjective(Box<Collision>),
    #[error("domain pair {0} of Sigma^AB is not mapped")]
    MissingDomain(EdgePair),
    #[error("not surjective: {0} of Sigma^BA is not hit")]
    NotSurjective(EdgePair),
    #[error("s(alpha) != s(a) for {domain} -> {image}")]
    SourceMismatch { domain: EdgePair, image: EdgePair },
    #[error("r(b) != r(beta) for {domain} -> {image}")]
    RangeMismatch { domain: EdgePair, image: EdgePair },
}

fn check_vertices(ga: &DirectedMultigraph, gb: &DirectedMultigraph) -> Result<(), TextileError> {
    if ga.vertex_count() != gb.vertex_count() {
        return Err(TextileError::VertexMismatch { a: ga.vertex_count(), b: gb.vertex_count() });
    }
    Ok(())
}

/// Pairs `(e, f)` of edge indices with `r(e) = s(f)`, lexicographic.
pub fn composable_pairs(first: &DirectedMultigraph, second: &DirectedMultigraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (e, edge) in first.edges().iter().enumerate() {
        for (f, next) in second.edges().iter().enumerate() {
            if edge.range() == next.source() {
                out.push((e, f));
            }
        }
    }
    out
}

/// `Σ^{AB}`: pairs `(α, b)` with `r(α) = s(b)`.
pub fn sigma_ab(ga: &DirectedMultigraph, gb: &DirectedMultigraph) -> Result<Vec<(usize, usize)>, TextileError> {
    check_vertices(ga, gb)?;
    Ok(composable_pairs(ga, gb))
}

/// `Σ^{BA}`: pairs `(a, β)` with `r(a) = s(β)`.
pub fn sigma_ba(ga: &DirectedMultigraph, gb: &DirectedMultigraph) -> Result<Vec<(usize, usize)>, TextileError> {
    check_vertices(ga, gb)?;
    Ok(composable_pairs(gb, ga))
}

/// Checks `AB = BA`, naming the first differing entry.
pub fn check_matrices_commute(a: &NonnegMatrix, b: &NonnegMatrix) -> Result<(), TextileError> {
    if a.dim() != b.dim() {
        return Err(TextileError::VertexMismatch { a: a.dim(), b: b.dim() });
    }
    let ab = a.mul(b);
    let ba = b.mul(a);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if ab[(i, j)] != ba[(i, j)] {
                return Err(TextileError::NotCommuting { row: i, col: j, ab: ab[(i, j)], ba: ba[(i, j)] });
            }
        }
    }
    Ok(())
}

/// For each ordered vertex pair, match the sorted two-step paths `αb` with
/// the sorted paths `aβ` position by position.
pub fn canonical_specification(
    ga: &DirectedMultigraph,
    gb: &DirectedMultigraph,
) -> Result<Specification, TextileError> {
    check_vertices(ga, gb)?;
    check_matrices_commute(ga.matrix(), gb.matrix())?;
    let n = ga.vertex_count();
    let mut ab_blocks = vec![Vec::new(); n * n];
    for (alpha, b) in composable_pairs(ga, gb) {
        ab_blocks[ga.source(alpha) * n + gb.range(b)].push((alpha, b));
    }
    let mut ba_blocks = vec![Vec::new(); n * n];
    for (a, beta) in composable_pairs(gb, ga) {
        ba_blocks[gb.source(a) * n + ga.range(beta)].push((a, beta));
    }
    let mut entries = Vec::new();
    for (dom, img) in ab_blocks.iter().zip(&ba_blocks) {
        debug_assert_eq!(dom.len(), img.len());
        for (&(alpha, b), &(a, beta)) in dom.iter().zip(img) {
            entries.push(KappaEntry { alpha, b, a, beta });
        }
    }
    Ok(Specification::from_entries(entries))
}

/// The exchange rule `κ(α, a) = (a, α)` on one vertex with `N` loops in
/// `G_A` and `M` loops in `G_B`.
pub fn exchange_specification(n: u64, m: u64) -> Result<Specification, TextileError> {
    if n <= 1 || m <= 1 {
        return Err(TextileError::ExchangeTooSmall { n, m });
    }
    let mut entries = Vec::with_capacity((n * m) as usize);
    for alpha in 0..n as usize {
        for a in 0..m as usize {
            entries.push(KappaEntry { alpha, b: a, a, beta: alpha });
        }
    }
    Ok(Specification::from_entries(entries))
}

/// Graphs `[N]`, `[M]` with the exchange specification.
pub fn exchange_system(n: u64, m: u64) -> Result<TextileSystem, TextileError> {
    let kappa = exchange_specification(n, m)?;
    let ga = DirectedMultigraph::from_matrix(&NonnegMatrix::from_fn(1, |_, _| n), GraphTag::A);
    let gb = DirectedMultigraph::from_matrix(&NonnegMatrix::from_fn(1, |_, _| m), GraphTag::B);
    TextileSystem::build(ga, gb, kappa)
}

/// Checks bijectivity `Σ^{AB} → Σ^{BA}` and the endpoint constraints
/// `s(α) = s(a)`, `r(b) = r(β)`; reports the first violation.
pub fn validate_specification(
    kappa: &Specification,
    ga: &DirectedMultigraph,
    gb: &DirectedMultigraph,
) -> Result<(), SpecViolation> {
    let ab = |alpha: usize, b: usize| EdgePair { first: ga.edge(alpha).id, second: gb.edge(b).id };
    let ba = |a: usize, beta: usize| EdgePair { first: gb.edge(a).id, second: ga.edge(beta).id };

    for e in kappa.entries() {
        for (tag, index, count) in [
            (GraphTag::A, e.alpha, ga.edge_count()),
            (GraphTag::B, e.b, gb.edge_count()),
            (GraphTag::B, e.a, gb.edge_count()),
            (GraphTag::A, e.beta, ga.edge_count()),
        ] {
            if index >= count {
                return Err(SpecViolation::UnknownEdge { tag, index });
            }
        }
    }

    // entries are sorted by domain, so duplicates are adjacent
    for w in kappa.entries().windows(2) {
        if (w[0].alpha, w[0].b) == (w[1].alpha, w[1].b) {
            return Err(SpecViolation::DuplicateDomain(ab(w[0].alpha, w[0].b)));
        }
    }
    let mut images: Vec<(usize, usize, usize)> =
        kappa.entries().iter().enumerate().map(|(i, e)| (e.a, e.beta, i)).collect();
    images.sort();
    for w in images.windows(2) {
        if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
            let (x, y) = (kappa.entries()[w[0].2], kappa.entries()[w[1].2]);
            return Err(SpecViolation::NotInjective(Box::new(Collision {
                first: ab(x.alpha, x.b),
                second: ab(y.alpha, y.b),
                image: ba(x.a, x.beta),
            })));
        }
    }

    for e in kappa.entries() {
        if ga.range(e.alpha) != gb.source(e.b) {
            return Err(SpecViolation::DomainNotComposable(ab(e.alpha, e.b)));
        }
        if gb.range(e.a) != ga.source(e.beta) {
            return Err(SpecViolation::ImageNotComposable(ba(e.a, e.beta)));
        }
        if ga.source(e.alpha) != gb.source(e.a) {
            return Err(SpecViolation::SourceMismatch { domain: ab(e.alpha, e.b), image: ba(e.a, e.beta) });
        }
        if gb.range(e.b) != ga.range(e.beta) {
            return Err(SpecViolation::RangeMismatch { domain: ab(e.alpha, e.b), image: ba(e.a, e.beta) });
        }
    }

    // injective and inside Σ^{AB} / Σ^{BA}: bijective iff nothing is missed
    for (alpha, b) in composable_pairs(ga, gb) {
        if kappa.apply(alpha, b).is_none() {
            return Err(SpecViolation::MissingDomain(ab(alpha, b)));
        }
    }
    for (a, beta) in composable_pairs(gb, ga) {
        if images.binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, beta))).is_err() {
            return Err(SpecViolation::NotSurjective(ba(a, beta)));
        }
    }
    Ok(())
}

/// A tile `(α, b, a, β)` with `κ(α, b) = (a, β)`: top `α`, right `b`,
/// left `a`, bottom `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub top: usize,
    pub right: usize,
    pub left: usize,
    pub bottom: usize,
}

impl From<KappaEntry> for Tile {
    fn from(e: KappaEntry) -> Self {
        Tile { top: e.alpha, right: e.b, left: e.a, bottom: e.beta }
    }
}

/// An assembled textile system. Immutable once built.
#[derive(Debug, Clone)]
pub struct TextileSystem {
    graph_a: DirectedMultigraph,
    graph_b: DirectedMultigraph,
    kappa: Specification,
    tiles: Vec<Tile>,
    omega: Vec<(usize, usize)>,
    a_kappa: NonnegMatrix,
    b_kappa: NonnegMatrix,
    h_kappa: NonnegMatrix,
}

impl TextileSystem {
    pub fn build(
        graph_a: DirectedMultigraph,
        graph_b: DirectedMultigraph,
        kappa: Specification,
    ) -> Result<Self, TextileError> {
        check_vertices(&graph_a, &graph_b)?;
        validate_specification(&kappa, &graph_a, &graph_b)?;

        let tiles: Vec<Tile> = kappa.entries().iter().copied().map(Tile::from).collect();
        let mut omega: Vec<(usize, usize)> = tiles.iter().map(|t| (t.top, t.left)).collect();
        omega.sort_unstable();
        omega.dedup();

        // Ω-indices grouped by left edge and by top edge
        let mut by_left = vec![Vec::new(); graph_b.edge_count()];
        let mut by_top = vec![Vec::new(); graph_a.edge_count()];
        for (k, &(alpha, a)) in omega.iter().enumerate() {
            by_top[alpha].push(k);
            by_left[a].push(k);
        }

        let n = omega.len();
        let mut a_kappa = NonnegMatrix::zeros(n);
        let mut b_kappa = NonnegMatrix::zeros(n);
        for t in &tiles {
            let row = omega.binary_search(&(t.top, t.left)).expect("tile pair in omega");
            for &col in &by_left[t.right] {
                a_kappa[(row, col)] = 1;
            }
            for &col in &by_top[t.bottom] {
                b_kappa[(row, col)] = 1;
            }
        }
        let h_kappa = NonnegMatrix::block2(&a_kappa, &a_kappa, &b_kappa, &b_kappa);

        Ok(Self { graph_a, graph_b, kappa, tiles, omega, a_kappa, b_kappa, h_kappa })
    }

    /// Builds from the two matrices with the canonical specification.
    pub fn canonical(a: &NonnegMatrix, b: &NonnegMatrix) -> Result<Self, TextileError> {
        let ga = DirectedMultigraph::from_matrix(a, GraphTag::A);
        let gb = DirectedMultigraph::from_matrix(b, GraphTag::B);
        let kappa = canonical_specification(&ga, &gb)?;
        Self::build(ga, gb, kappa)
    }

    pub fn graph_a(&self) -> &DirectedMultigraph {
        &self.graph_a
    }

    pub fn graph_b(&self) -> &DirectedMultigraph {
        &self.graph_b
    }

    pub fn kappa(&self) -> &Specification {
        &self.kappa
    }

    /// `E_κ`, in the order of the specification's domain.
    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// `Ω_κ`, lexicographic in `(α, a)`.
    pub fn omega(&self) -> &[(usize, usize)] {
        &self.omega
    }

    pub fn omega_index(&self, alpha: usize, a: usize) -> Option<usize> {
        self.omega.binary_search(&(alpha, a)).ok()
    }

    pub fn a_kappa(&self) -> &NonnegMatrix {
        &self.a_kappa
    }

    pub fn b_kappa(&self) -> &NonnegMatrix {
        &self.b_kappa
    }

    pub fn h_kappa(&self) -> &NonnegMatrix {
        &self.h_kappa
    }

    /// `A_κ + B_κ`
    pub fn sum_matrix(&self) -> NonnegMatrix {
        self.a_kappa.add(&self.b_kappa)
    }

    /// Position of a tile in [`tiles`](Self::tiles).
    pub fn tile_index(&self, tile: &Tile) -> Option<usize> {
        self.tiles.binary_search_by(|t| (t.top, t.right).cmp(&(tile.top, tile.right))).ok().filter(|&i| self.tiles[i] == *tile)
    }

    /// Edge identifiers of a tile in the order top, right, left, bottom.
    pub fn tile_ids(&self, t: &Tile) -> [EdgeId; 4] {
        [
            self.graph_a.edge(t.top).id,
            self.graph_b.edge(t.right).id,
            self.graph_b.edge(t.left).id,
            self.graph_a.edge(t.bottom).id,
        ]
    }
}

/// Whether `A_κ B_κ = B_κ A_κ` exactly.
pub fn check_commutation(sys: &TextileSystem) -> bool {
    sys.a_kappa().mul(sys.b_kappa()) == sys.b_kappa().mul(sys.a_kappa())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_matrix;
    use alloc::vec;

    fn mat(rows: &[&[u64]]) -> NonnegMatrix {
        NonnegMatrix::from_rows(rows).unwrap()
    }

    fn graphs(a: &[&[u64]], b: &[&[u64]]) -> (DirectedMultigraph, DirectedMultigraph) {
        (graph_from_matrix(&mat(a), GraphTag::A), graph_from_matrix(&mat(b), GraphTag::B))
    }

    #[test]
    fn sigma_sizes() {
        let (ga, gb) = graphs(&[&[2]], &[&[3]]);
        assert_eq!(sigma_ab(&ga, &gb).unwrap().len(), 6);

        // brute force: α ∈ {1→2, 2→1}, b ∈ {1→1, 2→2}; r(α) = s(b) holds for
        // (1→2, 2→2) and (2→1, 1→1) only
        let (ga, gb) = graphs(&[&[0, 1], &[1, 0]], &[&[1, 0], &[0, 1]]);
        assert_eq!(sigma_ab(&ga, &gb).unwrap(), vec![(0, 1), (1, 0)]);
        assert_eq!(sigma_ba(&ga, &gb).unwrap().len(), 2);

        let (ga, _) = graphs(&[&[1]], &[&[1]]);
        let (_, gb) = graphs(&[&[1]], &[&[1, 0], &[0, 1]]);
        assert_eq!(sigma_ab(&ga, &gb), Err(TextileError::VertexMismatch { a: 1, b: 2 }));
    }

    #[test]
    fn canonical_on_single_vertex_is_lexicographic() {
        let (ga, gb) = graphs(&[&[2]], &[&[3]]);
        let k = canonical_specification(&ga, &gb).unwrap();
        let dom = composable_pairs(&ga, &gb);
        let img = composable_pairs(&gb, &ga);
        for (e, (d, i)) in k.entries().iter().zip(dom.iter().zip(&img)) {
            assert_eq!(((e.alpha, e.b), (e.a, e.beta)), (*d, *i));
        }
        assert!(validate_specification(&k, &ga, &gb).is_ok());
    }

    #[test]
    fn canonical_with_identity_is_forced() {
        // blocks are singletons: the only endpoint-preserving bijection
        let (ga, gb) = graphs(&[&[1, 1], &[0, 1]], &[&[1, 0], &[0, 1]]);
        let k = canonical_specification(&ga, &gb).unwrap();
        for e in k.entries() {
            // κ(α, id_{r(α)}) = (id_{s(α)}, α)
            assert_eq!(e.beta, e.alpha);
            assert_eq!(gb.source(e.a), ga.source(e.alpha));
            assert_eq!(gb.source(e.b), ga.range(e.alpha));
        }
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn canonical_requires_commuting() {
        let (ga, gb) = graphs(&[&[1, 1], &[0, 1]], &[&[1, 0], &[1, 1]]);
        assert!(matches!(canonical_specification(&ga, &gb), Err(TextileError::NotCommuting { .. })));
    }

    #[test]
    fn exchange_rule() {
        let k = exchange_specification(2, 3).unwrap();
        assert_eq!(k.len(), 6);
        assert!(k.entries().iter().all(|e| e.alpha == e.beta && e.a == e.b));
        assert_eq!(exchange_specification(1, 3), Err(TextileError::ExchangeTooSmall { n: 1, m: 3 }));
        assert_eq!(exchange_specification(3, 0), Err(TextileError::ExchangeTooSmall { n: 3, m: 0 }));
    }

    #[test]
    fn exchange_2_2_tiles_and_matrices() {
        let sys = exchange_system(2, 2).unwrap();
        let tiles: Vec<_> = sys.tiles().iter().map(|t| (t.top, t.right, t.left, t.bottom)).collect();
        assert_eq!(tiles, vec![(0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 1, 1)]);
        assert_eq!(sys.omega(), &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(
            sys.a_kappa().to_rows(),
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1]]
        );
        assert_eq!(
            sys.b_kappa().to_rows(),
            vec![vec![1, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 1]]
        );
        assert_eq!(sys.h_kappa().dim(), 8);
        assert!(check_commutation(&sys));
    }

    #[test]
    fn validation_failures() {
        let (ga, gb) = graphs(&[&[2]], &[&[2]]);
        let good = canonical_specification(&ga, &gb).unwrap();
        let mut entries = good.entries().to_vec();
        entries[1].a = entries[0].a;
        entries[1].beta = entries[0].beta;
        let err = validate_specification(&Specification::from_entries(entries), &ga, &gb).unwrap_err();
        assert!(matches!(err, SpecViolation::NotInjective(_)), "{err}");

        // two vertices, B = I: swap the sources of two images
        let (ga, gb) = graphs(&[&[1, 1], &[1, 1]], &[&[1, 0], &[0, 1]]);
        let good = canonical_specification(&ga, &gb).unwrap();
        let mut entries = good.entries().to_vec();
        // entry 0 is α = (1,1,1); give it the image of α = (2,1,1), whose
        // left edge starts at vertex 2
        let other = entries.iter().position(|e| ga.source(e.alpha) == 1).unwrap();
        let (a, beta) = (entries[other].a, entries[other].beta);
        entries[other].a = entries[0].a;
        entries[other].beta = entries[0].beta;
        entries[0].a = a;
        entries[0].beta = beta;
        let err = validate_specification(&Specification::from_entries(entries), &ga, &gb).unwrap_err();
        match err {
            SpecViolation::SourceMismatch { domain, .. } => {
                assert_eq!(domain.first, ga.edge(0).id);
            }
            other => panic!("unexpected {other}"),
        }

        let mut entries = good.entries().to_vec();
        entries.pop();
        assert!(matches!(
            validate_specification(&Specification::from_entries(entries), &ga, &gb),
            Err(SpecViolation::MissingDomain(_))
        ));

        let mut entries = good.entries().to_vec();
        entries[0].beta = 99;
        assert_eq!(
            validate_specification(&Specification::from_entries(entries), &ga, &gb),
            Err(SpecViolation::UnknownEdge { tag: GraphTag::A, index: 99 })
        );
    }

    #[test]
    fn a_equals_b_always_admits_canonical() {
        let m = mat(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let sys = TextileSystem::canonical(&m, &m).unwrap();
        assert_eq!(sys.tiles().len() as u64, m.mul(&m).total());
        assert!(check_commutation(&sys));
    }

    #[test]
    fn tile_lookup() {
        let sys = exchange_system(3, 2).unwrap();
        for (i, t) in sys.tiles().iter().enumerate() {
            assert_eq!(sys.tile_index(t), Some(i));
        }
        let fake = Tile { top: 0, right: 0, left: 1, bottom: 0 };
        assert_eq!(sys.tile_index(&fake), None);
    }
}
