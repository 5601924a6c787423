//! Stallings folding: the core graph of a finitely generated subgroup
//! of a free group, and with it the subgroup's rank.
//!
//! Loops at a basepoint spelling the generator words are folded until
//! no vertex carries two same-label edges in the same direction, then
//! dangling trees are trimmed. For the resulting core graph,
//! `rank = edges − vertices + 1`.

use std::collections::{BTreeMap, BTreeSet};

use super::FreeWord;

/// An edge-labelled graph; edges `(tail, label, head)` are traversed
/// forwards for a positive letter and backwards for a negative one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    edges: BTreeSet<(usize, u16, usize)>,
    vertices: BTreeSet<usize>,
    basepoint: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Merge, keeping the smaller index as representative.
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[drop] = keep;
        }
    }
}

/// Fold the bouquet of the given words. Identity words contribute
/// nothing. Generator indices are not bounded by any ambient rank
/// here; callers validate against one where it matters.
pub fn fold(words: &[FreeWord]) -> StallingsGraph {
    // Build the bouquet: one fresh path per word, closing at vertex 0.
    let mut edges: Vec<(usize, u16, usize)> = Vec::new();
    let mut next_vertex = 1usize;
    for word in words {
        let letters = word.letters();
        if letters.is_empty() {
            continue;
        }
        let mut cur = 0usize;
        for (i, &(gen, sign)) in letters.iter().enumerate() {
            let target = if i + 1 == letters.len() {
                0
            } else {
                let v = next_vertex;
                next_vertex += 1;
                v
            };
            if sign > 0 {
                edges.push((cur, gen, target));
            } else {
                edges.push((target, gen, cur));
            }
            cur = target;
        }
    }

    let mut uf = UnionFind::new(next_vertex);

    // Fold to a fixed point: identify the heads of same-label edges
    // leaving one vertex, and the tails of same-label edges entering
    // one vertex.
    loop {
        let current: BTreeSet<(usize, u16, usize)> = edges
            .iter()
            .map(|&(t, l, h)| (uf.find(t), l, uf.find(h)))
            .collect();

        let mut merged = false;
        let mut out_seen: BTreeMap<(usize, u16), usize> = BTreeMap::new();
        let mut in_seen: BTreeMap<(usize, u16), usize> = BTreeMap::new();
        for &(tail, label, head) in &current {
            if let Some(&other) = out_seen.get(&(tail, label)) {
                if other != head {
                    uf.union(other, head);
                    merged = true;
                    break;
                }
            } else {
                out_seen.insert((tail, label), head);
            }
            if let Some(&other) = in_seen.get(&(head, label)) {
                if other != tail {
                    uf.union(other, tail);
                    merged = true;
                    break;
                }
            } else {
                in_seen.insert((head, label), tail);
            }
        }

        if !merged {
            edges = current.into_iter().collect();
            break;
        }
    }

    let basepoint = uf.find(0);
    let mut edge_set: BTreeSet<(usize, u16, usize)> = edges.into_iter().collect();
    let mut vertices: BTreeSet<usize> = edge_set
        .iter()
        .flat_map(|&(t, _, h)| [t, h])
        .collect();
    vertices.insert(basepoint);

    // Trim: drop non-basepoint vertices of degree ≤ 1 until none
    // remain. (Loops at a vertex count twice, but a vertex with a loop
    // never qualifies anyway.)
    loop {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(t, _, h) in &edge_set {
            *degree.entry(t).or_insert(0) += 1;
            *degree.entry(h).or_insert(0) += 1;
        }
        let dangling: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|&v| v != basepoint && degree.get(&v).copied().unwrap_or(0) <= 1)
            .collect();
        if dangling.is_empty() {
            break;
        }
        for v in dangling {
            vertices.remove(&v);
            edge_set.retain(|&(t, _, h)| t != v && h != v);
        }
    }

    StallingsGraph {
        edges: edge_set,
        vertices,
        basepoint,
    }
}

impl StallingsGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, u16, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Rank of the subgroup the graph carries: first Betti number
    /// `E − V + 1` of the connected core graph.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Whether the graph is a single vertex with `rank` loops covering
    /// the distinct labels `0..rank` — i.e. carries all of `F_rank`.
    pub fn is_full_rose(&self, rank: usize) -> bool {
        if self.vertices.len() != 1 || self.edges.len() != rank {
            return false;
        }
        let labels: BTreeSet<u16> = self.edges.iter().map(|&(_, l, _)| l).collect();
        self.edges
            .iter()
            .all(|&(t, _, h)| t == self.basepoint && h == self.basepoint)
            && labels.len() == rank
            && labels.iter().all(|&l| (l as usize) < rank)
    }

    /// No vertex has two outgoing or two incoming edges with one label.
    pub fn is_folded(&self) -> bool {
        let mut out = BTreeSet::new();
        let mut inc = BTreeSet::new();
        for &(t, l, h) in &self.edges {
            if !out.insert((t, l)) || !inc.insert((h, l)) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<FreeWord> {
        ws.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn single_generator_folds_to_one_loop() {
        let g = fold(&words(&["a"]));
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.rank(), 1);
        assert!(g.is_folded());
    }

    #[test]
    fn basis_folds_to_full_rose() {
        let g = fold(&words(&["a", "b"]));
        assert_eq!(g.rank(), 2);
        assert!(g.is_full_rose(2));
        assert!(!g.is_full_rose(3));
    }

    #[test]
    fn index_two_subgroup_has_rank_three() {
        // ⟨a², ab, b²⟩ is the kernel of F₂ → ℤ/2; by the index formula
        // its rank is 1 + 2·(2−1) = 3.
        let g = fold(&words(&["a a", "a b", "b b"]));
        assert!(g.is_folded());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.rank(), 3);
    }

    #[test]
    fn redundant_generator_does_not_raise_the_rank() {
        let g = fold(&words(&["a", "b", "a b"]));
        assert_eq!(g.rank(), 2);
        assert!(g.is_full_rose(2));
    }

    #[test]
    fn proper_power_collapses() {
        // ⟨a³⟩ has rank 1: a cycle of length 3.
        let g = fold(&words(&["a a a"]));
        assert_eq!(g.rank(), 1);
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn conjugates_keep_their_tail_after_trimming() {
        // b a b⁻¹ folds to a loop hanging off a path; the path would
        // dangle but the basepoint stays.
        let g = fold(&words(&["b a B"]));
        assert_eq!(g.rank(), 1);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn identity_words_contribute_nothing() {
        let g = fold(&words(&["1", "a A"]));
        assert_eq!(g.rank(), 0);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dependent_pair_folds_below_count() {
        // a and a·b·a⁻¹·b⁻¹... pick {a², a³}: ⟨a²,a³⟩ = ⟨a⟩.
        let g = fold(&words(&["a a", "a a a"]));
        assert_eq!(g.rank(), 1);
    }
}
