//! Directed multigraphs of nonnegative integer matrices, and the structural
//! tests used on them: essentiality, irreducibility and condition (I).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::matrix::NonnegMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("condition (I) needs a 0/1 matrix, found {value} at ({row},{col})")]
    NotZeroOne { row: usize, col: usize, value: u64 },
    #[error("condition (I) needs an essential matrix: {0}")]
    NotEssential(EssentialDefect),
    #[error("malformed edge identifier {0:?}, expected \"(i,j,k)\"")]
    BadEdgeId(alloc::string::String),
}

/// Which of the two commuting matrices a graph realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphTag {
    A,
    B,
}

impl fmt::Display for GraphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphTag::A => "A",
            GraphTag::B => "B",
        })
    }
}

/// Edge identity `(source, range, k)`: the `k`-th of the `M(source, range)`
/// parallel edges. All three components are zero-based; the textual form
/// `(i,j,k)` is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub source: usize,
    pub range: usize,
    pub index: usize,
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.source + 1, self.range + 1, self.index + 1)
    }
}

impl FromStr for EdgeId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadEdgeId(s.into());
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let mut parts = inner.split(',').map(|p| p.trim().parse::<usize>());
        let mut next = || match parts.next() {
            Some(Ok(v)) if v >= 1 => Ok(v - 1),
            _ => Err(bad()),
        };
        let id = EdgeId { source: next()?, range: next()?, index: next()? };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tag: GraphTag,
}

impl Edge {
    pub fn source(&self) -> usize {
        self.id.source
    }

    pub fn range(&self) -> usize {
        self.id.range
    }
}

/// Finite directed multigraph with `M(i,j)` edges from `i` to `j`.
///
/// Edges are stored in lexicographic `(source, range, k)` order; their
/// position in [`edges`](Self::edges) is the edge index used throughout the
/// crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    tag: GraphTag,
    matrix: NonnegMatrix,
    edges: Vec<Edge>,
}

impl DirectedMultigraph {
    pub fn from_matrix(matrix: &NonnegMatrix, tag: GraphTag) -> Self {
        let n = matrix.dim();
        let mut edges = Vec::with_capacity(matrix.total() as usize);
        for source in 0..n {
            for range in 0..n {
                for index in 0..matrix[(source, range)] as usize {
                    edges.push(Edge { id: EdgeId { source, range, index }, tag });
                }
            }
        }
        Self { tag, matrix: matrix.clone(), edges }
    }

    pub fn tag(&self) -> GraphTag {
        self.tag
    }

    pub fn vertex_count(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &NonnegMatrix {
        &self.matrix
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, ix: usize) -> &Edge {
        &self.edges[ix]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self, ix: usize) -> usize {
        self.edges[ix].source()
    }

    pub fn range(&self, ix: usize) -> usize {
        self.edges[ix].range()
    }

    /// Position of an edge identifier, if the graph has that edge.
    pub fn position(&self, id: &EdgeId) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.cmp(id)).ok()
    }

    /// Recount parallel edges into a matrix.
    pub fn multiplicity_matrix(&self) -> NonnegMatrix {
        let mut m = NonnegMatrix::zeros(self.vertex_count());
        for e in &self.edges {
            m[(e.source(), e.range())] += 1;
        }
        m
    }
}

/// Shorthand for [`DirectedMultigraph::from_matrix`].
pub fn graph_from_matrix(matrix: &NonnegMatrix, tag: GraphTag) -> DirectedMultigraph {
    DirectedMultigraph::from_matrix(matrix, tag)
}

/// First zero row or zero column of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EssentialDefect {
    ZeroRow(usize),
    ZeroColumn(usize),
}

impl fmt::Display for EssentialDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EssentialDefect::ZeroRow(i) => write!(f, "row {} is zero", i + 1),
            EssentialDefect::ZeroColumn(j) => write!(f, "column {} is zero", j + 1),
        }
    }
}

pub fn essential_defect(m: &NonnegMatrix) -> Option<EssentialDefect> {
    let n = m.dim();
    if let Some(i) = (0..n).find(|&i| m.row_sum(i) == 0) {
        return Some(EssentialDefect::ZeroRow(i));
    }
    (0..n).find(|&j| m.col_sum(j) == 0).map(EssentialDefect::ZeroColumn)
}

pub fn is_essential(m: &NonnegMatrix) -> bool {
    essential_defect(m).is_none()
}

fn successors(m: &NonnegMatrix) -> Vec<Vec<usize>> {
    (0..m.dim()).map(|i| (0..m.dim()).filter(|&j| m[(i, j)] > 0).collect()).collect()
}

/// Strongly connected components of the support digraph (iterative Tarjan).
/// Components come out in reverse topological order.
pub fn strongly_connected_components(m: &NonnegMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let succ = successors(m);
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next successor position)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Irreducibility as a single strongly connected component. A 1×1 matrix
/// additionally needs a self-loop.
pub fn is_irreducible(m: &NonnegMatrix) -> bool {
    let n = m.dim();
    if n == 1 {
        return m[(0, 0)] > 0;
    }
    strongly_connected_components(m).len() == 1
}

/// Irreducibility from the definition: `OR_{k=1..n} M^k` has full support.
pub fn is_irreducible_by_powers(m: &NonnegMatrix) -> bool {
    let n = m.dim();
    let step = m.support();
    let mut power = step.clone();
    let mut reach = step.clone();
    for _ in 1..n {
        power = NonnegMatrix::from_fn(n, |i, j| {
            u64::from((0..n).any(|k| power[(i, k)] != 0 && step[(k, j)] != 0))
        });
        reach = NonnegMatrix::from_fn(n, |i, j| reach[(i, j)] | power[(i, j)]);
    }
    let full = reach.rows().all(|r| r.iter().all(|&x| x != 0));
    full
}

/// A pair `(i, j)` such that no path of positive length leads from `i` to `j`.
pub fn unreachable_pair(m: &NonnegMatrix) -> Option<(usize, usize)> {
    let n = m.dim();
    let succ = successors(m);
    for i in 0..n {
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = succ[i].iter().copied().collect();
        for &j in &succ[i] {
            seen[j] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(j) = seen.iter().position(|&s| !s) {
            return Some((i, j));
        }
    }
    None
}

/// A cycle all of whose vertices have out-degree exactly one, i.e. a loop
/// without an exit. `Ok(None)` means the matrix satisfies condition (I).
pub fn exit_free_cycle(m: &NonnegMatrix) -> Result<Option<Vec<usize>>, GraphError> {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] > 1 {
                return Err(GraphError::NotZeroOne { row: i, col: j, value: m[(i, j)] });
            }
        }
    }
    if let Some(defect) = essential_defect(m) {
        return Err(GraphError::NotEssential(defect));
    }

    // The out-degree-one vertices form a functional graph; walk it.
    let next: Vec<Option<usize>> = (0..n)
        .map(|i| if m.row_sum(i) == 1 { m.row(i).iter().position(|&x| x == 1) } else { None })
        .collect();
    // 0 = unvisited, 1 = on current walk, 2 = finished
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 || next[start].is_none() {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            state[v] = 1;
            walk.push(v);
            match next[v] {
                Some(w) if state[w] == 1 => {
                    let from = walk.iter().position(|&x| x == w).expect("on walk");
                    return Ok(Some(walk[from..].to_vec()));
                }
                Some(w) if state[w] == 0 => v = w,
                _ => break,
            }
        }
        for v in walk {
            state[v] = 2;
        }
    }
    Ok(None)
}

pub fn satisfies_condition_i(m: &NonnegMatrix) -> Result<bool, GraphError> {
    exit_free_cycle(m).map(|c| c.is_none())
}
