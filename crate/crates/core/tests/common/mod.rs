//! Brute-force oracles shared by the integration tests. Each one recomputes a
//! library verdict from the definitions, without calling the routine it
//! checks.
#![allow(dead_code, clippy::needless_range_loop)]

use std::sync::Arc;

use latfix::dependency::DepKind;
use latfix::{Digraph, LatMap, Lattice};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;

/// Sweeps every triple `(x, y, s)` of the defining implication.
pub fn naive_depends(kind: DepKind, phi: &LatMap, rho: &LatMap) -> bool {
    let l = phi.lattice();
    let n = l.size();
    let (f, r) = (phi.table(), rho.table());
    for s in 0..n {
        for x in 0..n {
            for y in 0..n {
                let (hyp, concl) = match kind {
                    DepKind::PreMeet => (
                        l.meet(x, r[s]) == l.meet(y, r[s]),
                        l.meet(f[x], s) == l.meet(f[y], s),
                    ),
                    DepKind::PreJoin => (
                        l.join(x, r[s]) == l.join(y, r[s]),
                        l.join(f[x], s) == l.join(f[y], s),
                    ),
                    DepKind::PostMeet => (
                        l.meet(x, s) == l.meet(y, s),
                        l.meet(f[x], r[s]) == l.meet(f[y], r[s]),
                    ),
                    DepKind::PostJoin => (
                        l.join(x, s) == l.join(y, s),
                        l.join(f[x], r[s]) == l.join(f[y], r[s]),
                    ),
                };
                if hyp && !concl {
                    return false;
                }
            }
        }
    }
    true
}

/// Join-preservation checked over every subset of a small lattice.
pub fn naive_is_graph(f: &LatMap) -> bool {
    let l = f.lattice();
    let n = l.size();
    if n > 16 {
        return f.apply(l.bottom()) == l.bottom()
            && (0..n).all(|x| (0..n).all(|y| f.apply(l.join(x, y)) == l.join(f.apply(x), f.apply(y))));
    }
    (0u32..1 << n).all(|mask| {
        let members = (0..n).filter(|&i| mask >> i & 1 == 1);
        let j = members.clone().fold(l.bottom(), |a, b| l.join(a, b));
        let fj = members.fold(l.bottom(), |a, b| l.join(a, f.apply(b)));
        f.apply(j) == fj
    })
}

pub fn naive_is_cograph(f: &LatMap) -> bool {
    let l = f.lattice();
    let n = l.size();
    f.apply(l.top()) == l.top()
        && (0..n).all(|x| (0..n).all(|y| f.apply(l.meet(x, y)) == l.meet(f.apply(x), f.apply(y))))
}

/// `⋁_{1 ≤ i ≤ |L|} f^i` by explicit powers.
pub fn naive_transitive(f: &LatMap) -> Vec<usize> {
    let l = f.lattice();
    l.elems()
        .map(|x| {
            let mut acc = l.bottom();
            let mut cur = x;
            for _ in 0..l.size() {
                cur = f.apply(cur);
                acc = l.join(acc, cur);
            }
            acc
        })
        .collect()
}

pub fn has_cycle(d: &Digraph) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..d.n()).map(|_| g.add_node(())).collect();
    for &(u, v) in d.arcs() {
        g.add_edge(nodes[u], nodes[v], ());
    }
    is_cyclic_directed(&g)
}

/// Vertex-induced subgraph on the bits of `mask` has a cycle.
pub fn has_cycle_within(d: &Digraph, mask: usize) -> bool {
    let keep: Vec<usize> = (0..d.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let arcs = d
        .arcs()
        .iter()
        .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
        .map(|&(u, v)| (keep.iter().position(|&k| k == u).unwrap(), keep.iter().position(|&k| k == v).unwrap()));
    has_cycle(&Digraph::new(keep.len(), arcs).unwrap())
}

/// `d_A(s, t) · 2^63` on the meet or join side, exact for `stable_from < 63`.
pub fn scaled_distance(l: &Lattice, seq: &[usize], meet: bool, s: usize, t: usize) -> u128 {
    let n = seq.len() - 1;
    assert!(n < 63, "sequence too long for the fixed-point oracle");
    let comb = |x: usize, a: usize| if meet { l.meet(x, a) } else { l.join(x, a) };
    let mut total: u128 = 0;
    for (i, &a) in seq.iter().enumerate() {
        if comb(s, a) != comb(t, a) {
            // index n stands for the whole tail, worth 2^{1-n}
            total += if i < n { 1u128 << (63 - i) } else { 1u128 << (64 - n) };
        }
    }
    total
}

/// Periodic points by brute force: `φ^k(x) = x` for some `1 ≤ k ≤ |L|`.
pub fn periodic_points(phi: &LatMap) -> Vec<usize> {
    let n = phi.lattice().size();
    (0..n)
        .filter(|&x| {
            let mut cur = x;
            (0..n).any(|_| {
                cur = phi.apply(cur);
                cur == x
            })
        })
        .collect()
}

/// Common limit of all trajectories after `|L|` steps, if there is one and
/// it is fixed.
pub fn simulated_limit(phi: &LatMap) -> Option<usize> {
    let n = phi.lattice().size();
    let e = phi.apply_n(0, n);
    ((0..n).all(|x| phi.apply_n(x, n) == e) && phi.apply(e) == e).then_some(e)
}

pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    (0usize..1 << (n * n)).map(move |m| {
        Digraph::new(n, (0..n * n).filter(|b| m >> b & 1 == 1).map(|b| (b / n, b % n))).unwrap()
    })
}

pub fn arc(l: Lattice) -> Arc<Lattice> {
    Arc::new(l)
}
