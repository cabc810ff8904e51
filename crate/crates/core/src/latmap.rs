//! Self-maps on a finite lattice.
//!
//! A graph is a map preserving all joins. On a finite lattice it suffices to
//! check `f(0) = 0` and binary joins, since every join is a finite fold.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::digraph::Digraph;
use crate::elemset::ElementSet;
use crate::error::{Error, GraphViolation, Result};
use crate::lattice::{Elem, Lattice};

#[derive(Clone, PartialEq, Eq)]
pub struct LatMap {
    lat: Arc<Lattice>,
    table: Vec<Elem>,
}

impl std::fmt::Debug for LatMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatMap{:?}", self.table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureKind {
    Reflexive,
    Transitive,
    ReflexiveTransitive,
}

/// A linear order listed from least to greatest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearOrder {
    seq: Vec<Elem>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl LinearOrder {
    pub fn new(seq: Vec<Elem>) -> Result<LinearOrder> {
        let mut pos = vec![usize::MAX; seq.len()];
        for (i, &x) in seq.iter().enumerate() {
            if x >= seq.len() || pos[x] != usize::MAX {
                return Err(Error::InvalidInput("linear order is not a permutation".into()));
            }
            pos[x] = i;
        }
        Ok(LinearOrder { seq, pos })
    }

    pub fn seq(&self) -> &[Elem] {
        &self.seq
    }

    pub fn position(&self, x: Elem) -> usize {
        self.pos[x]
    }

    pub fn precedes(&self, x: Elem, y: Elem) -> bool {
        self.pos[x] < self.pos[y]
    }
}

/// `f[a]` on the ideal `a↓`; `ids[i]` is the original id of sub-element `i`.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub map: LatMap,
    pub ids: Vec<Elem>,
}

impl LatMap {
    pub fn new(lat: &Arc<Lattice>, table: Vec<Elem>) -> Result<LatMap> {
        let n = lat.size();
        if table.len() != n {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, lattice has {n} elements",
                table.len()
            )));
        }
        if let Some(i) = table.iter().position(|&v| v >= n) {
            return Err(Error::InvalidInput(format!("table[{i}] = {} is not an element", table[i])));
        }
        Ok(LatMap { lat: lat.clone(), table })
    }

    pub fn from_fn(lat: &Arc<Lattice>, f: impl Fn(Elem) -> Elem) -> LatMap {
        let table = lat.elems().map(f).collect();
        LatMap::new(lat, table).expect("closure stays inside the lattice")
    }

    pub fn identity(lat: &Arc<Lattice>) -> LatMap {
        Self::from_fn(lat, |x| x)
    }

    pub fn constant(lat: &Arc<Lattice>, c: Elem) -> LatMap {
        Self::from_fn(lat, |_| c)
    }

    /// The constant-bottom map.
    pub fn empty_graph(lat: &Arc<Lattice>) -> LatMap {
        Self::constant(lat, lat.bottom())
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lat
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    pub fn apply_n(&self, mut x: Elem, k: usize) -> Elem {
        for _ in 0..k {
            x = self.table[x];
        }
        x
    }

    pub fn same_lattice(&self, other: &LatMap) -> Result<()> {
        if Arc::ptr_eq(&self.lat, &other.lat) || *self.lat == *other.lat {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn map_with(&self, f: impl Fn(Elem) -> Elem) -> LatMap {
        LatMap { lat: self.lat.clone(), table: self.lat.elems().map(f).collect() }
    }

    /// `self ∘ g`, i.e. `x ↦ self(g(x))`.
    pub fn compose(&self, g: &LatMap) -> Result<LatMap> {
        self.same_lattice(g)?;
        Ok(self.map_with(|x| self.table[g.table[x]]))
    }

    pub fn pow(&self, k: usize) -> LatMap {
        self.map_with(|x| self.apply_n(x, k))
    }

    /// Pointwise join.
    pub fn join(&self, g: &LatMap) -> Result<LatMap> {
        self.same_lattice(g)?;
        Ok(self.map_with(|x| self.lat.join(self.table[x], g.table[x])))
    }

    /// Pointwise meet.
    pub fn meet(&self, g: &LatMap) -> Result<LatMap> {
        self.same_lattice(g)?;
        Ok(self.map_with(|x| self.lat.meet(self.table[x], g.table[x])))
    }

    /// Pointwise order `self ≤ g`.
    pub fn le(&self, g: &LatMap) -> Result<bool> {
        self.same_lattice(g)?;
        Ok(self.lat.elems().all(|x| self.lat.leq(self.table[x], g.table[x])))
    }

    pub fn constant_value(&self) -> Option<Elem> {
        let v = self.table[0];
        self.table.iter().all(|&y| y == v).then_some(v)
    }

    pub fn image(&self) -> ElementSet {
        ElementSet::from_elems(self.lat.size(), self.table.iter().copied())
    }

    pub fn fixed_points(&self) -> ElementSet {
        ElementSet::from_elems(self.lat.size(), self.lat.elems().filter(|&x| self.table[x] == x))
    }

    // ----- classes ------------------------------------------------------

    pub fn is_monotone(&self) -> bool {
        let l = &self.lat;
        l.elems().all(|x| l.up(x).iter().all(|y| l.leq(self.table[x], self.table[y])))
    }

    /// First failure of join preservation, scanning pairs in id order.
    pub fn graph_violation(&self) -> Option<GraphViolation> {
        let l = &self.lat;
        if self.table[l.bottom()] != l.bottom() {
            return Some(GraphViolation::Bottom(self.table[l.bottom()]));
        }
        for x in l.elems() {
            for y in x + 1..l.size() {
                if self.table[l.join(x, y)] != l.join(self.table[x], self.table[y]) {
                    return Some(GraphViolation::Pair(x, y));
                }
            }
        }
        None
    }

    pub fn is_graph(&self) -> bool {
        self.graph_violation().is_none()
    }

    pub fn is_cograph(&self) -> bool {
        let l = &self.lat;
        self.table[l.top()] == l.top()
            && l.elems().all(|x| {
                (x + 1..l.size())
                    .all(|y| self.table[l.meet(x, y)] == l.meet(self.table[x], self.table[y]))
            })
    }

    pub fn require_graph(&self) -> Result<()> {
        match self.graph_violation() {
            None => Ok(()),
            Some(v) => Err(Error::NotAGraph(v)),
        }
    }

    // ----- residuation --------------------------------------------------

    /// `ψ⁻(a) = ⋁{x : ψ(x) ≤ a}`.
    pub fn residual(&self) -> LatMap {
        let l = &self.lat;
        self.map_with(|a| l.join_all(l.elems().filter(|&x| l.leq(self.table[x], a))))
    }

    /// `ψ⁺(b) = ⋀{y : ψ(y) ≥ b}`.
    pub fn residuated(&self) -> LatMap {
        let l = &self.lat;
        self.map_with(|b| l.meet_all(l.elems().filter(|&y| l.leq(b, self.table[y]))))
    }

    // ----- closures -----------------------------------------------------

    pub fn closure(&self, kind: ClosureKind) -> Result<LatMap> {
        self.require_graph()?;
        Ok(match kind {
            ClosureKind::Reflexive => self.reflexive(),
            ClosureKind::Transitive => self.transitive()?,
            ClosureKind::ReflexiveTransitive => self.reflexive().transitive()?,
        })
    }

    fn reflexive(&self) -> LatMap {
        self.map_with(|x| self.lat.join(x, self.table[x]))
    }

    /// `⋁_{i≥1} f^i` by iterating `g ← f ∨ g∘f` until the table is unchanged.
    /// The orbit of any point repeats within `|L|` steps, so `|L| + 1` rounds
    /// always suffice.
    fn transitive(&self) -> Result<LatMap> {
        let mut g = self.clone();
        for _ in 0..=self.lat.size() {
            let next = self.map_with(|x| self.lat.join(self.table[x], g.table[self.table[x]]));
            if next == g {
                return Ok(g);
            }
            g = next;
        }
        Err(Error::internal("transitive closure did not stabilize", format!("{:?}", self.table)))
    }

    /// `f^t ≥ id`.
    pub fn is_non_degenerate(&self) -> Result<bool> {
        let t = self.closure(ClosureKind::Transitive)?;
        Ok(self.lat.elems().all(|x| self.lat.leq(x, t.table[x])))
    }

    // ----- fixed-point-free graphs --------------------------------------

    fn nonbottom_fixed_point(&self) -> Option<Elem> {
        self.lat.elems().find(|&x| x != self.lat.bottom() && self.table[x] == x)
    }

    pub fn is_fixed_point_free(&self) -> Result<bool> {
        self.require_graph()?;
        Ok(self.nonbottom_fixed_point().is_none())
    }

    /// Linear extension of `{(x, y) : y ≤ f^t(x), x, y ≠ 0}` with bottom
    /// first and ties broken by ascending id.
    pub fn topological_sort(&self) -> Result<LinearOrder> {
        self.require_graph()?;
        if let Some(w) = self.nonbottom_fixed_point() {
            return Err(Error::NotFixedPointFree { witness: w });
        }
        let l = &self.lat;
        let bot = l.bottom();
        let t = self.transitive()?;
        let n = l.size();
        let mut succ: Vec<Vec<Elem>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for x in l.elems().filter(|&x| x != bot) {
            for y in l.down(t.table[x]).iter().filter(|&y| y != bot) {
                if y == x {
                    return Err(Error::internal(
                        "fixed-point-free graph with x ≤ f^t(x)",
                        format!("{:?}", self.table),
                    ));
                }
                succ[x].push(y);
                indeg[y] += 1;
            }
        }
        let mut seq = vec![bot];
        let mut ready: BTreeSet<Elem> =
            l.elems().filter(|&x| x != bot && indeg[x] == 0).collect();
        while let Some(x) = ready.pop_first() {
            seq.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if seq.len() != n {
            return Err(Error::internal("cyclic reachability in a fixed-point-free graph", format!(
                "{:?}",
                self.table
            )));
        }
        LinearOrder::new(seq)
    }

    /// The subgraph induced by `a`: `x ↦ f(x) ∧ a` on `a↓`.
    pub fn induced_subgraph(&self, a: Elem) -> Result<InducedSubgraph> {
        let l = &self.lat;
        if !l.flags().frame {
            return Err(Error::NotAFrame);
        }
        self.require_graph()?;
        let ids = l.down(a).to_vec();
        let mut idx = vec![usize::MAX; l.size()];
        for (i, &x) in ids.iter().enumerate() {
            idx[x] = i;
        }
        let covers: Vec<(usize, usize)> = l
            .covers()
            .into_iter()
            .filter(|&(u, v)| idx[u] != usize::MAX && idx[v] != usize::MAX)
            .map(|(u, v)| (idx[u], idx[v]))
            .collect();
        let sub = Arc::new(Lattice::explicit_capped(ids.len(), &covers, usize::MAX)?);
        let table = ids.iter().map(|&x| idx[l.meet(self.table[x], a)]).collect();
        Ok(InducedSubgraph { map: LatMap::new(&sub, table)?, ids })
    }
}

// ----- digraphs and power sets ------------------------------------------

/// The in-neighbourhood map of `d` on the power set of its vertices.
pub fn digraph_to_graph(d: &Digraph) -> Result<LatMap> {
    let lat = Arc::new(Lattice::powerset(d.n())?);
    digraph_to_graph_on(&lat, d)
}

pub fn digraph_to_graph_on(lat: &Arc<Lattice>, d: &Digraph) -> Result<LatMap> {
    if lat.powerset_ground() != Some(d.n()) {
        return Err(Error::NotAPowerSet);
    }
    Ok(LatMap::from_fn(lat, |x| d.image_mask(x)))
}

/// Arcs `(u, v)` with `u ∈ f({v})`.
pub fn graph_to_digraph(f: &LatMap) -> Result<Digraph> {
    let ground = f.lattice().powerset_ground().ok_or(Error::NotAPowerSet)?;
    f.require_graph()?;
    let mut arcs = Vec::new();
    for v in 0..ground {
        let img = f.apply(1 << v);
        for u in 0..ground {
            if img >> u & 1 == 1 {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(ground, arcs)
}

// ----- bi-topologies ------------------------------------------------------

/// `None` if `t` is closed under all joins and meets, else a description of
/// an escaping subset.
pub fn bitopology_violation(lat: &Lattice, t: &ElementSet) -> Option<String> {
    if !t.contains(lat.bottom()) {
        return Some("empty join (bottom) is missing".into());
    }
    if !t.contains(lat.top()) {
        return Some("empty meet (top) is missing".into());
    }
    let members = t.to_vec();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            if !t.contains(lat.join(x, y)) {
                return Some(format!("join of {{{x}, {y}}} escapes"));
            }
            if !t.contains(lat.meet(x, y)) {
                return Some(format!("meet of {{{x}, {y}}} escapes"));
            }
        }
    }
    None
}

pub fn is_bitopology(lat: &Lattice, t: &ElementSet) -> bool {
    bitopology_violation(lat, t).is_none()
}

/// `h(x) = ⋀(T ∩ x↑)`.
pub fn bitopology_graph(lat: &Arc<Lattice>, t: &ElementSet) -> Result<LatMap> {
    if let Some(w) = bitopology_violation(lat, t) {
        return Err(Error::NotABitopology(w));
    }
    Ok(LatMap::from_fn(lat, |x| lat.meet_set(&lat.up(x).intersection(t))))
}
