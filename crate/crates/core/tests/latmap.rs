mod common;

use std::sync::Arc;

use common::*;
use latfix::digraph::{backwards_ray, ray};
use latfix::latmap::{bitopology_graph, digraph_to_graph, graph_to_digraph, ClosureKind};
use latfix::random::{random_digraph, random_graph, random_map, random_small_lattice};
use latfix::{Digraph, ElementSet, Error, LatMap, Lattice};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(n: usize) -> Arc<Lattice> {
    Arc::new(Lattice::powerset(n).unwrap())
}

proptest! {
    #[test]
    fn graph_verdict_matches_oracle(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let l = random_small_lattice(&mut r);
        let g = random_graph(&l, &mut r);
        prop_assert!(g.is_graph() && naive_is_graph(&g));
        let m = random_map(&l, &mut r);
        prop_assert_eq!(m.is_graph(), naive_is_graph(&m));
    }

    #[test]
    fn residual_adjunction(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let l = random_small_lattice(&mut r);
        let f = random_graph(&l, &mut r);
        let fm = f.residual();
        for x in l.elems() {
            for y in l.elems() {
                prop_assert_eq!(l.leq(f.apply(x), y), l.leq(x, fm.apply(y)));
            }
        }
        prop_assert!(naive_is_cograph(&fm));
        prop_assert_eq!(fm.residuated(), f);
    }

    #[test]
    fn closures_are_least_and_ordered(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let l = random_small_lattice(&mut r);
        let f = random_graph(&l, &mut r);
        let t = f.closure(ClosureKind::Transitive).unwrap();
        prop_assert_eq!(t.table().to_vec(), naive_transitive(&f));
        let rt = f.closure(ClosureKind::ReflexiveTransitive).unwrap();
        let rr = t.closure(ClosureKind::Reflexive).unwrap();
        prop_assert_eq!(&rt, &rr);
        let tr = f.closure(ClosureKind::Reflexive).unwrap().closure(ClosureKind::Transitive).unwrap();
        prop_assert_eq!(&rt, &tr);
        for x in l.elems() {
            prop_assert!(l.leq(x, rt.apply(x)));
            prop_assert_eq!(rt.apply(rt.apply(x)), rt.apply(x));
        }
    }

    #[test]
    fn digraph_round_trip(seed in any::<u64>(), n in 0usize..=5) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_digraph(n, 0.35, &mut r);
        let f = digraph_to_graph(&d).unwrap();
        prop_assert_eq!(graph_to_digraph(&f).unwrap(), d.clone());
        for x in 0..1usize << n {
            let expect = (0..n).filter(|&u| (0..n).any(|v| x >> v & 1 == 1 && d.has_arc(u, v)))
                .fold(0, |m, u| m | 1 << u);
            prop_assert_eq!(f.apply(x), expect);
        }
    }
}

#[test]
fn graph_examples() {
    let l = p(3);
    assert!(LatMap::identity(&l).is_graph());
    assert!(!LatMap::constant(&l, l.top()).is_graph());
    assert!(digraph_to_graph(&Digraph::complete(3)).unwrap().is_graph());
}

#[test]
fn residual_examples() {
    let l = p(3);
    assert_eq!(LatMap::identity(&l).residual(), LatMap::identity(&l));
    assert!(LatMap::empty_graph(&l).residual().table().iter().all(|&y| y == l.top()));
    let d = Digraph::new(3, [(0, 1), (1, 2), (2, 2)]).unwrap();
    let r = digraph_to_graph(&d).unwrap().residual();
    for x in 0..8usize {
        let expect = (0..3).filter(|&v| d.in_nbrs(v).iter().all(|&u| x >> u & 1 == 1)).fold(0, |m, v| m | 1 << v);
        assert_eq!(r.apply(x), expect);
    }
}

#[test]
fn digraph_examples() {
    assert!(digraph_to_graph(&Digraph::empty(3)).unwrap().table().iter().all(|&y| y == 0));
    let f = digraph_to_graph(&Digraph::new(2, [(0, 1), (1, 0)]).unwrap()).unwrap();
    assert_eq!(f.table(), &[0, 0b10, 0b01, 0b11]);
    let chain = Arc::new(Lattice::chain(3).unwrap());
    assert!(matches!(graph_to_digraph(&LatMap::identity(&chain)), Err(Error::NotAPowerSet)));
    let bad = LatMap::constant(&p(2), 3);
    assert!(matches!(graph_to_digraph(&bad), Err(Error::NotAGraph(_))));
}

#[test]
fn closure_examples() {
    let l = p(3);
    let id = LatMap::identity(&l);
    assert_eq!(id.closure(ClosureKind::Transitive).unwrap(), id);
    // path 0 → 1 → 2
    let path = digraph_to_graph(&Digraph::new(3, [(0, 1), (1, 2)]).unwrap()).unwrap();
    let t = graph_to_digraph(&path.closure(ClosureKind::Transitive).unwrap()).unwrap();
    assert!(t.has_arc(0, 2));
    assert_eq!(t.arcs().len(), 3);
}

#[test]
fn non_degeneracy_examples() {
    let l = p(2);
    assert!(LatMap::identity(&l).is_non_degenerate().unwrap());
    assert!(!LatMap::empty_graph(&l).is_non_degenerate().unwrap());
    let cyc = Digraph::new(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
    assert!(digraph_to_graph(&cyc).unwrap().is_non_degenerate().unwrap());
    let tail = Digraph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
    assert!(!digraph_to_graph(&tail).unwrap().is_non_degenerate().unwrap());
}

#[test]
fn fixed_point_free_examples() {
    let l = p(2);
    assert!(LatMap::empty_graph(&l).is_fixed_point_free().unwrap());
    assert!(!LatMap::identity(&l).is_fixed_point_free().unwrap());
    for d in all_digraphs(3) {
        assert_eq!(digraph_to_graph(&d).unwrap().is_fixed_point_free().unwrap(), !has_cycle(&d));
    }
}

#[test]
fn topological_sort_examples() {
    let l = p(3);
    let order = LatMap::empty_graph(&l).topological_sort().unwrap();
    assert_eq!(order.seq(), &[0, 1, 2, 3, 4, 5, 6, 7]);

    let f = digraph_to_graph(&backwards_ray(3)).unwrap();
    let order = f.topological_sort().unwrap();
    let min = |x: usize| x.trailing_zeros();
    for x in 1..16usize {
        for y in 1..16usize {
            if min(y) > min(x) {
                assert!(order.precedes(x, y), "{x:#b} should precede {y:#b}");
            }
        }
    }

    let mut d = ray(3);
    d.add_arc(3, 3);
    match digraph_to_graph(&d).unwrap().topological_sort() {
        Err(Error::NotFixedPointFree { witness }) => {
            assert_ne!(witness, 0);
            let t = digraph_to_graph(&d).unwrap().closure(ClosureKind::Transitive).unwrap();
            assert_eq!(t.apply(witness), witness | t.apply(witness));
        }
        other => panic!("expected NotFixedPointFree, got {other:?}"),
    }
}

#[test]
fn bitopology_examples() {
    let l = p(2);
    let ends = ElementSet::from_elems(4, [0, 3]);
    assert_eq!(bitopology_graph(&l, &ends).unwrap().table(), &[0, 3, 3, 3]);
    assert_eq!(bitopology_graph(&l, &ElementSet::full(4)).unwrap(), LatMap::identity(&l));
    let t = ElementSet::from_elems(4, [0, 0b01, 0b11]);
    let h = bitopology_graph(&l, &t).unwrap();
    assert!(naive_is_graph(&h));
    assert!(l.elems().all(|x| l.leq(x, h.apply(x)) && h.apply(h.apply(x)) == h.apply(x)));
    assert_eq!(h.fixed_points(), t);
    let no_join = ElementSet::from_elems(4, [0, 0b01, 0b10]);
    assert!(matches!(bitopology_graph(&l, &no_join), Err(Error::NotABitopology(_))));
}

#[test]
fn induced_subgraph_examples() {
    let l = p(3);
    let d = Digraph::new(3, [(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
    let f = digraph_to_graph(&d).unwrap();
    let top = f.induced_subgraph(l.top()).unwrap();
    assert_eq!(top.map.table(), f.table());
    let bottom = f.induced_subgraph(l.bottom()).unwrap();
    assert_eq!(bottom.map.lattice().size(), 1);
    let sub = f.induced_subgraph(0b011).unwrap();
    let sd = d.induced(&[0, 1]);
    for (i, &x) in sub.ids.iter().enumerate() {
        let image = sub.ids[sub.map.apply(i)];
        assert_eq!(image, sd.image_mask(x), "sub-element {x:#b}");
    }
}
