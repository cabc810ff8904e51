//! Seeded instance generators. All of them draw from a caller-supplied RNG so
//! that a seed reproduces a whole suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::autonet::Network;
use crate::config::Config;
use crate::digraph::Digraph;
use crate::error::Result;
use crate::latmap::LatMap;
use crate::lattice::{Elem, Lattice};

/// `e_{a,b}(x) = 0` if `x ≤ a`, else `b`.
pub fn elementary_graph(lat: &Arc<Lattice>, a: Elem, b: Elem) -> LatMap {
    LatMap::from_fn(lat, |x| if lat.leq(x, a) { lat.bottom() } else { b })
}

/// Join of up to `size` random elementary graphs. Every graph on a finite
/// lattice is such a join.
pub fn random_graph<R: Rng>(lat: &Arc<Lattice>, rng: &mut R) -> LatMap {
    let n = lat.size();
    let k = rng.gen_range(0..=n.min(4));
    let mut f = LatMap::empty_graph(lat);
    for _ in 0..k {
        let e = elementary_graph(lat, rng.gen_range(0..n), rng.gen_range(0..n));
        f = f.join(&e).expect("same lattice");
    }
    f
}

pub fn random_map<R: Rng>(lat: &Arc<Lattice>, rng: &mut R) -> LatMap {
    let n = lat.size();
    LatMap::new(lat, (0..n).map(|_| rng.gen_range(0..n)).collect()).expect("in range")
}

/// `x ↦ ⋁_{y ≤ x} r(y)` for a uniform `r`.
pub fn random_monotone<R: Rng>(lat: &Arc<Lattice>, rng: &mut R) -> LatMap {
    let r = random_map(lat, rng);
    LatMap::from_fn(lat, |x| lat.join_all(lat.down(x).iter().map(|y| r.apply(y))))
}

pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                d.add_arc(u, v);
            }
        }
    }
    d
}

/// Arcs only go forward in a random vertex permutation.
pub fn random_dag<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut d = Digraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                d.add_arc(perm[i], perm[j]);
            }
        }
    }
    d
}

/// A random digraph with a planted cycle (possibly a loop).
pub fn random_cyclic_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    assert!(n > 0, "a cycle needs a vertex");
    let mut d = random_digraph(n, p, rng);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let len = rng.gen_range(1..=n);
    for i in 0..len {
        d.add_arc(perm[i], perm[(i + 1) % len]);
    }
    d
}

/// Network whose coordinate `v` reads only the in-neighbours `D(v)`.
pub fn random_network_on<R: Rng>(
    d: &Digraph,
    alphabets: &[usize],
    cfg: &Config,
    rng: &mut R,
) -> Result<Network> {
    let n = d.n();
    let inn: Vec<Vec<usize>> = (0..n).map(|v| d.in_nbrs(v)).collect();
    let tables: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let patterns: usize = inn[v].iter().map(|&u| alphabets[u]).product();
            (0..patterns).map(|_| rng.gen_range(0..alphabets[v])).collect()
        })
        .collect();
    Network::from_fn(alphabets, cfg, |x| {
        (0..n)
            .map(|v| {
                let idx = inn[v].iter().fold(0, |acc, &u| acc * alphabets[u] + x[u]);
                tables[v][idx]
            })
            .collect()
    })
}

/// Network on a random DAG with `1..=max_n` coordinates over alphabets of
/// size `2..=max_q`.
pub fn random_acyclic_network<R: Rng>(
    max_n: usize,
    max_q: usize,
    cfg: &Config,
    rng: &mut R,
) -> Result<Network> {
    let n = rng.gen_range(1..=max_n);
    let alphabets: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_q)).collect();
    let d = random_dag(n, 0.5, rng);
    random_network_on(&d, &alphabets, cfg, rng)
}

/// Self-map of a power set whose bit `v` is a random function of the bits in
/// `D(v)`; it pre-meet depends on the in-neighbourhood graph of `D`.
pub fn random_boolean_map_on<R: Rng>(d: &Digraph, rng: &mut R) -> Result<LatMap> {
    let n = d.n();
    let lat = Arc::new(Lattice::powerset(n)?);
    let inn: Vec<Vec<usize>> = (0..n).map(|v| d.in_nbrs(v)).collect();
    let tables: Vec<Vec<bool>> =
        inn.iter().map(|s| (0..1usize << s.len()).map(|_| rng.gen_bool(0.5)).collect()).collect();
    Ok(LatMap::from_fn(&lat, |x| {
        (0..n)
            .filter(|&v| {
                let idx = inn[v].iter().enumerate().fold(0, |acc, (i, &u)| acc | (x >> u & 1) << i);
                tables[v][idx]
            })
            .map(|v| 1usize << v)
            .sum()
    }))
}

/// Nilpotent map on `{0, .., n-1}` from a random recursive tree: a random
/// root is fixed and every other vertex points to an earlier one.
pub fn random_nilpotent_table<R: Rng>(n: usize, rng: &mut R) -> Vec<Elem> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut table = vec![0; n];
    for (i, &x) in perm.iter().enumerate() {
        table[x] = if i == 0 { x } else { perm[rng.gen_range(0..i)] };
    }
    table
}

/// Uniform lattice from a small pool: power sets, chains, products, M3, N5.
pub fn random_small_lattice<R: Rng>(rng: &mut R) -> Arc<Lattice> {
    let l = match rng.gen_range(0..6) {
        0 => Lattice::powerset(rng.gen_range(0..=3)),
        1 => Lattice::chain(rng.gen_range(1..=6)),
        2 => {
            let a = Lattice::chain(rng.gen_range(2..=4)).expect("chain");
            let b = Lattice::chain(rng.gen_range(2..=4)).expect("chain");
            Lattice::product(&[a, b])
        }
        3 => Lattice::product(&[crate::lattice::m3(), Lattice::chain(2).expect("chain")]),
        4 => Ok(crate::lattice::m3()),
        _ => Ok(crate::lattice::n5()),
    };
    Arc::new(l.expect("small lattice"))
}
