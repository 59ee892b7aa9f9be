//! The overlap graph on the uncovered words `V_t = Ω^{n₀} \ W_t^{n₀}`.
//!
//! There is an edge `i → j` when the last `n₀-1` digits of `i` equal the first
//! `n₀-1` digits of `j`. For `n₀ = 1` the overlap is empty, so every ordered
//! pair of vertices (self-pairs included) is an edge.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::words::{level_size, DigitWord, WordSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("the overlap graph has a cycle")]
    HasCycle,
}

#[derive(Clone, Debug)]
pub struct OverlapGraph {
    n0: usize,
    base: u32,
    /// Word slots of the vertices, increasing.
    vertices: Vec<usize>,
    /// Out-neighbours as positions into `vertices`, increasing.
    adjacency: Vec<Vec<usize>>,
}

pub fn build_graph(v: &WordSet) -> OverlapGraph {
    let n0 = v.level();
    assert!(n0 >= 1, "overlap graph needs words of length at least 1");
    let base = v.base();
    let vertices: Vec<usize> = v.iter().collect();
    let suffix_mod = level_size(base, n0 - 1).expect("level size fits");
    let mut by_prefix: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pos, &idx) in vertices.iter().enumerate() {
        by_prefix.entry(idx / base as usize).or_default().push(pos);
    }
    let adjacency = vertices
        .iter()
        .map(|&idx| by_prefix.get(&(idx % suffix_mod)).cloned().unwrap_or_default())
        .collect();
    OverlapGraph {
        n0,
        base,
        vertices,
        adjacency,
    }
}

impl OverlapGraph {
    pub fn level(&self) -> usize {
        self.n0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_words(&self) -> Vec<DigitWord> {
        self.vertices.iter().map(|&i| self.word(i)).collect()
    }

    pub fn word(&self, index: usize) -> DigitWord {
        DigitWord::from_index(index, self.n0, self.base)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Edges as pairs of word slots.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(u, out)| {
            out.iter().map(move |&v| (self.vertices[u], self.vertices[v]))
        })
    }

    /// A directed cycle as word slots, or `None` when the graph is acyclic.
    ///
    /// Iterative three-colour depth-first search from the vertices in
    /// increasing order, so the reported cycle is deterministic.
    pub fn has_cycle(&self) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.vertices.len()];
        for root in 0..self.vertices.len() {
            if color[root] != WHITE {
                continue;
            }
            // (vertex, next neighbour to look at)
            let mut stack = vec![(root, 0usize)];
            color[root] = GRAY;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if let Some(&v) = self.adjacency[u].get(*next) {
                    *next += 1;
                    match color[v] {
                        WHITE => {
                            color[v] = GRAY;
                            stack.push((v, 0));
                        }
                        GRAY => {
                            let start = stack.iter().position(|&(w, _)| w == v).unwrap();
                            return Some(
                                stack[start..]
                                    .iter()
                                    .map(|&(w, _)| self.vertices[w])
                                    .collect(),
                            );
                        }
                        _ => {}
                    }
                } else {
                    color[u] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Number of edges on a longest directed path.
    pub fn longest_path_length(&self) -> Result<usize, GraphError> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for out in &self.adjacency {
            for &v in out {
                indegree[v] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut longest = vec![0usize; n];
        let mut seen = 0;
        while let Some(u) = queue.pop() {
            seen += 1;
            for &v in &self.adjacency[u] {
                longest[v] = longest[v].max(longest[u] + 1);
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push(v);
                }
            }
        }
        if seen < n {
            return Err(GraphError::HasCycle);
        }
        Ok(longest.into_iter().max().unwrap_or(0))
    }

    /// Whether `i → j` satisfies the overlap rule, checked digit by digit.
    pub fn overlaps(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.word(i), self.word(j));
        a.digits()[1..] == b.digits()[..self.n0 - 1]
    }

    /// Re-check a reported cycle: consecutive overlaps, closing edge included,
    /// and every entry a vertex.
    pub fn verify_cycle(&self, cycle: &[usize]) -> bool {
        !cycle.is_empty()
            && cycle
                .iter()
                .all(|v| self.vertices.binary_search(v).is_ok())
            && (0..cycle.len()).all(|k| self.overlaps(cycle[k], cycle[(k + 1) % cycle.len()]))
    }
}

/// Close a cycle by repeating its first vertex.
pub fn closed_walk(cycle: &[usize]) -> Vec<usize> {
    let mut walk = cycle.to_vec();
    if let Some(&first) = cycle.first() {
        walk.push(first);
    }
    walk
}
