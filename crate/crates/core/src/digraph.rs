use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Finite digraph on vertices `0..n`.
///
/// The in-neighbourhood of a vertex set `I` is `D(I) = {u : ∃v ∈ I, (u, v) ∈ E}`:
/// an arc `(u, v)` records that `u` influences `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Digraph> {
        let arcs: BTreeSet<_> = arcs.into_iter().collect();
        if let Some(&(u, v)) = arcs.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidInput(format!("arc ({u}, {v}) outside 0..{n}")));
        }
        Ok(Digraph { n, arcs })
    }

    pub fn empty(n: usize) -> Digraph {
        Digraph { n, arcs: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Digraph {
        Digraph { n, arcs: (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.arcs.insert((u, v));
    }

    /// `D({v})`.
    pub fn in_nbrs(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_arc(u, v)).collect()
    }

    pub fn out_nbrs(&self, u: usize) -> Vec<usize> {
        self.arcs.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v).collect()
    }

    /// In-neighbourhood of a vertex bitmask.
    pub fn image_mask(&self, mask: usize) -> usize {
        self.arcs
            .iter()
            .filter(|&&(_, v)| mask >> v & 1 == 1)
            .fold(0, |acc, &(u, _)| acc | 1 << u)
    }

    pub fn reverse(&self) -> Digraph {
        Digraph { n: self.n, arcs: self.arcs.iter().map(|&(u, v)| (v, u)).collect() }
    }

    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.n == other.n && self.arcs.is_subset(&other.arcs)
    }

    /// Subgraph induced by `keep`, vertices renumbered in ascending order.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut idx = vec![usize::MAX; self.n];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            idx[v] = i;
        }
        Digraph {
            n: sorted.len(),
            arcs: self
                .arcs
                .iter()
                .filter(|&&(u, v)| idx[u] != usize::MAX && idx[v] != usize::MAX)
                .map(|&(u, v)| (idx[u], idx[v]))
                .collect(),
        }
    }

    /// Some directed cycle as a vertex list, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, self.out_nbrs(root), 0usize)];
            state[root] = 1;
            while let Some((v, nbrs, i)) = stack.last_mut() {
                if *i < nbrs.len() {
                    let w = nbrs[*i];
                    *i += 1;
                    let v = *v;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            let out = self.out_nbrs(w);
                            stack.push((w, out, 0));
                        }
                        1 => {
                            let mut cyc = vec![v];
                            let mut x = v;
                            while x != w {
                                x = parent[x];
                                cyc.push(x);
                            }
                            cyc.reverse();
                            return Some(cyc);
                        }
                        _ => {}
                    }
                } else {
                    state[*v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Kahn order, smallest available vertex first; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for &(_, v) in &self.arcs {
            indeg[v] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut out = Vec::with_capacity(self.n);
        while let Some(u) = ready.pop_first() {
            out.push(u);
            for v in self.out_nbrs(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        (out.len() == self.n).then_some(out)
    }

    /// Number of arcs on a longest walk, `None` if walks are unbounded.
    pub fn longest_walk(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut len = vec![0usize; self.n];
        for &u in order.iter().rev() {
            len[u] = self.out_nbrs(u).iter().map(|&v| len[v] + 1).max().unwrap_or(0);
        }
        Some(len.into_iter().max().unwrap_or(0))
    }
}

/// Arcs `(i, i-1)` on `{0..n}`.
pub fn backwards_ray(n: usize) -> Digraph {
    Digraph { n: n + 1, arcs: (1..=n).map(|i| (i, i - 1)).collect() }
}

/// Arcs `(i, i+1)` on `{0..n}`.
pub fn ray(n: usize) -> Digraph {
    Digraph { n: n + 1, arcs: (0..n).map(|i| (i, i + 1)).collect() }
}

/// Vertex `a = 0` and `v_i^j` for `0 ≤ j ≤ i < depth`.
fn stairway_vertices(depth: usize) -> (usize, Vec<Vec<usize>>) {
    let mut next = 1;
    let mut rows = Vec::new();
    for i in 0..depth {
        rows.push((0..=i).map(|_| {
            next += 1;
            next - 1
        }).collect());
    }
    (next, rows)
}

/// Truncated stairway with arcs `v_i^0 → a` and `v_i^j → v_i^{j-1}`.
pub fn stairway_heaven(depth: usize) -> Digraph {
    let (n, rows) = stairway_vertices(depth);
    let mut arcs = BTreeSet::new();
    for row in &rows {
        arcs.insert((row[0], 0));
        for j in 1..row.len() {
            arcs.insert((row[j], row[j - 1]));
        }
    }
    Digraph { n, arcs }
}

/// Truncated stairway with arcs `a → v_i^0` and `v_i^{j-1} → v_i^j`.
pub fn stairway_hell(depth: usize) -> Digraph {
    stairway_heaven(depth).reverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn in_neighbourhood_convention() {
        let d = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(d.in_nbrs(2), vec![1]);
        assert_eq!(d.image_mask(0b100), 0b010);
        assert_eq!(d.image_mask(0b111), 0b011);
    }

    #[test]
    fn cycles_and_walks() {
        assert!(backwards_ray(4).is_acyclic());
        assert_eq!(backwards_ray(4).longest_walk(), Some(4));
        let c = Digraph::new(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        let cyc = c.find_cycle().unwrap();
        assert_eq!(cyc.len(), 2);
        assert!(c.topological_order().is_none());
    }

    #[test]
    fn stairways() {
        let h = stairway_heaven(3);
        assert_eq!(h.n(), 7);
        assert!(h.is_acyclic());
        assert_eq!(h.longest_walk(), Some(3));
        assert_eq!(stairway_hell(3).reverse(), h);
    }
}
