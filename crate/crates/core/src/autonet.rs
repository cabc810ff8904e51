//! Automata networks over product lattices.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::config::Config;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::latmap::{LatMap, LinearOrder};
use crate::lattice::{decode, encode, Elem, Lattice};
use crate::robert::{sequence_certificate, CertKind, Certificate, FeedbackReport};

/// `φ = (φ_v)` with `rules[v][x]` the value of coordinate `v` at state `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    coords: Vec<Arc<Lattice>>,
    product: Arc<Lattice>,
    rules: Vec<Vec<Elem>>,
}

impl Network {
    pub fn new(coords: Vec<Lattice>, rules: Vec<Vec<Elem>>, cfg: &Config) -> Result<Network> {
        let product = Arc::new(Lattice::product_capped(&coords, cfg.max_lattice_size)?);
        let coords: Vec<Arc<Lattice>> = product.factors().expect("product").to_vec();
        if rules.len() != coords.len() {
            return Err(Error::InvalidInput(format!(
                "{} rules for {} coordinates",
                rules.len(),
                coords.len()
            )));
        }
        for (v, r) in rules.iter().enumerate() {
            if r.len() != product.size() {
                return Err(Error::InvalidInput(format!(
                    "rules[{v}] has {} entries, expected {}",
                    r.len(),
                    product.size()
                )));
            }
            if let Some(x) = r.iter().position(|&c| c >= coords[v].size()) {
                return Err(Error::InvalidInput(format!(
                    "rules[{v}][{x}] = {} is outside alphabet of size {}",
                    r[x],
                    coords[v].size()
                )));
            }
        }
        Ok(Network { coords, product, rules })
    }

    /// Classic network over chain alphabets `0 < 1 < .. < q-1`.
    pub fn from_alphabets(alphabets: &[usize], rules: Vec<Vec<Elem>>, cfg: &Config) -> Result<Network> {
        let coords = alphabets.iter().map(|&q| Lattice::chain(q)).collect::<Result<Vec<_>>>()?;
        Network::new(coords, rules, cfg)
    }

    /// Builds the rule tables from a function on coordinate vectors.
    pub fn from_fn(
        alphabets: &[usize],
        cfg: &Config,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Network> {
        let coords = alphabets.iter().map(|&q| Lattice::chain(q)).collect::<Result<Vec<_>>>()?;
        let product = Lattice::product_capped(&coords, cfg.max_lattice_size)?;
        let mut rules = vec![Vec::with_capacity(product.size()); alphabets.len()];
        for x in product.elems() {
            let y = f(&decode(alphabets, x));
            if y.len() != alphabets.len() {
                return Err(Error::InvalidInput("rule function returned a wrong-length state".into()));
            }
            for (r, c) in rules.iter_mut().zip(y) {
                r.push(c);
            }
        }
        Network::new(coords, rules, cfg)
    }

    /// Reads a self-map of an unflipped product lattice as a network.
    pub fn from_map(phi: &LatMap) -> Result<Network> {
        let l = phi.lattice();
        let coords = l
            .factors()
            .ok_or_else(|| Error::InvalidInput("map does not live on a product lattice".into()))?
            .to_vec();
        let radices: Vec<usize> = coords.iter().map(|c| c.size()).collect();
        let mut rules = vec![Vec::with_capacity(l.size()); coords.len()];
        for x in l.elems() {
            for (r, c) in rules.iter_mut().zip(decode(&radices, phi.apply(x))) {
                r.push(c);
            }
        }
        Ok(Network { coords, product: l.clone(), rules })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Arc<Lattice>] {
        &self.coords
    }

    pub fn alphabet_sizes(&self) -> Vec<usize> {
        self.coords.iter().map(|c| c.size()).collect()
    }

    pub fn product(&self) -> &Arc<Lattice> {
        &self.product
    }

    pub fn rules(&self) -> &[Vec<Elem>] {
        &self.rules
    }

    /// Whether every coordinate is a chain `0 < .. < q-1` with identity ids.
    pub fn has_chain_alphabets(&self) -> bool {
        self.coords.iter().all(|c| **c == Lattice::chain(c.size()).expect("small chain"))
    }

    pub fn state(&self, x: Elem) -> Vec<usize> {
        decode(&self.alphabet_sizes(), x)
    }

    pub fn encode(&self, coords: &[usize]) -> Elem {
        encode(&self.alphabet_sizes(), coords)
    }

    pub fn apply(&self, x: Elem) -> Elem {
        let y: Vec<usize> = self.rules.iter().map(|r| r[x]).collect();
        self.encode(&y)
    }

    pub fn to_map(&self) -> LatMap {
        LatMap::from_fn(&self.product, |x| self.apply(x))
    }
}

/// Arc `(i, j)` iff `φ_j` depends essentially on `x_i`.
pub fn interaction_graph(net: &Network, cfg: &Config) -> Result<Digraph> {
    let radices = net.alphabet_sizes();
    let n = net.n();
    let states = net.product.size();
    let flips: u128 = radices.iter().map(|&q| q as u128).sum();
    let requested = states as u128 * flips * n as u128;
    if requested > cfg.max_triple_checks as u128 {
        return Err(Error::SweepCapExceeded { requested, cap: cfg.max_triple_checks });
    }
    let mut d = Digraph::empty(n);
    for x in 0..states {
        let cx = decode(&radices, x);
        for i in 0..n {
            let mut cy = cx.clone();
            for b in 0..radices[i] {
                if b == cx[i] {
                    continue;
                }
                cy[i] = b;
                let y = encode(&radices, &cy);
                for j in 0..n {
                    if net.rules[j][x] != net.rules[j][y] {
                        d.add_arc(i, j);
                    }
                }
            }
        }
    }
    Ok(d)
}

fn require_vertices(net: &Network, d: &Digraph) -> Result<()> {
    if d.n() != net.n() {
        return Err(Error::InvalidInput(format!(
            "digraph has {} vertices, network has {} coordinates",
            d.n(),
            net.n()
        )));
    }
    Ok(())
}

/// `G^φ ⊆ D`.
pub fn depends_on_digraph(net: &Network, d: &Digraph, cfg: &Config) -> Result<bool> {
    require_vertices(net, d)?;
    Ok(interaction_graph(net, cfg)?.is_subgraph_of(d))
}

/// The defining sweep: `x_{D(S)} = y_{D(S)} ⇒ φ_S(x) = φ_S(y)` for all
/// `x, y` and all vertex sets `S`. Exponential in every parameter.
pub fn depends_on_digraph_sweep(net: &Network, d: &Digraph) -> Result<bool> {
    require_vertices(net, d)?;
    let n = net.n();
    if n >= usize::BITS as usize {
        return Err(Error::InvalidInput("too many coordinates for a subset sweep".into()));
    }
    let radices = net.alphabet_sizes();
    let states = net.product.size();
    for s in 0..1usize << n {
        let ds = d.image_mask(s);
        let mut seen: BTreeMap<Vec<usize>, Vec<Elem>> = BTreeMap::new();
        for x in 0..states {
            let cx = decode(&radices, x);
            let key: Vec<usize> = (0..n).filter(|v| ds >> v & 1 == 1).map(|v| cx[v]).collect();
            let val: Vec<Elem> = (0..n).filter(|v| s >> v & 1 == 1).map(|v| net.rules[v][x]).collect();
            if *seen.entry(key).or_insert_with(|| val.clone()) != val {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coordinate access on a power set (coordinate `v` is bit `v`) or an
/// unflipped product.
struct CoordView {
    radices: Vec<usize>,
    bottoms: Vec<usize>,
    tops: Vec<usize>,
    bitmask: bool,
}

impl CoordView {
    fn of(lat: &Lattice) -> Result<CoordView> {
        if let Some(g) = lat.powerset_ground() {
            return Ok(CoordView { radices: vec![2; g], bottoms: vec![0; g], tops: vec![1; g], bitmask: true });
        }
        let fs = lat.factors().ok_or_else(|| {
            Error::InvalidInput("lift needs a power set or a product lattice".into())
        })?;
        Ok(CoordView {
            radices: fs.iter().map(|f| f.size()).collect(),
            bottoms: fs.iter().map(|f| f.bottom()).collect(),
            tops: fs.iter().map(|f| f.top()).collect(),
            bitmask: false,
        })
    }

    fn get(&self, x: Elem) -> Vec<usize> {
        if self.bitmask {
            (0..self.radices.len()).map(|v| x >> v & 1).collect()
        } else {
            decode(&self.radices, x)
        }
    }

    fn put(&self, c: &[usize]) -> Elem {
        if self.bitmask {
            c.iter().enumerate().map(|(v, &b)| b << v).sum()
        } else {
            encode(&self.radices, c)
        }
    }

    /// `τ(A)`: top on `A`, bottom elsewhere.
    fn tau(&self, mask: usize) -> Elem {
        let c: Vec<usize> = (0..self.radices.len())
            .map(|v| if mask >> v & 1 == 1 { self.tops[v] } else { self.bottoms[v] })
            .collect();
        self.put(&c)
    }

    fn support(&self, x: Elem) -> usize {
        self.get(x)
            .iter()
            .enumerate()
            .filter(|&(v, &c)| c != self.bottoms[v])
            .map(|(v, _)| 1usize << v)
            .sum()
    }
}

/// `f = g ∘ h` with `h` collapsing each coordinate to bottom or top and `g`
/// the in-neighbourhood map of `D` carried over by `τ`.
pub fn lift_digraph(d: &Digraph, lat: &Arc<Lattice>) -> Result<LatMap> {
    let view = CoordView::of(lat)?;
    if view.radices.len() != d.n() {
        return Err(Error::InvalidInput(format!(
            "digraph has {} vertices, lattice has {} coordinates",
            d.n(),
            view.radices.len()
        )));
    }
    Ok(LatMap::from_fn(lat, |x| view.tau(d.image_mask(view.support(x)))))
}

/// Lifted step sequence `τ(S_0) ≤ .. ≤ τ(S_n)` for a vertex order.
fn lifted_steps(lat: &Lattice, order: &[usize]) -> Result<Vec<Elem>> {
    let view = CoordView::of(lat)?;
    let mut mask = 0usize;
    let mut steps = vec![view.tau(0)];
    for &v in order {
        mask |= 1 << v;
        steps.push(view.tau(mask));
    }
    Ok(steps)
}

/// Nilpotence certificate for a network with acyclic interaction graph.
pub fn robert_original(net: &Network, cfg: &Config) -> Result<Certificate> {
    let ig = interaction_graph(net, cfg)?;
    if let Some(cycle) = ig.find_cycle() {
        return Err(Error::NotAcyclic { cycle });
    }
    let order = ig.topological_order().ok_or_else(|| {
        Error::internal("acyclic graph without topological order", format!("{:?}", ig.arcs()))
    })?;
    let phi = net.to_map();
    let steps = lifted_steps(&net.product, &order)?;
    let mut cert = sequence_certificate(&phi, &steps, cfg)?;
    cert.kind = CertKind::Original;
    Ok(cert)
}

/// Whether `I` (bitmask) is a feedback vertex set: iterating
/// `S ↦ S ∪ {v : D(v) ⊆ S}` from `I` reaches all vertices.
pub fn fvs_check(d: &Digraph, i: usize) -> bool {
    let n = d.n();
    let full = if n >= usize::BITS as usize { usize::MAX } else { (1usize << n) - 1 };
    let mut s = i & full;
    for _ in 0..n {
        let add: usize = (0..n)
            .filter(|&v| d.image_mask(1 << v) & !s == 0)
            .map(|v| 1usize << v)
            .sum();
        s |= add;
    }
    s == full
}

/// A cycle avoiding `I`, in original vertex ids.
fn cycle_avoiding(d: &Digraph, i: usize) -> Option<Vec<usize>> {
    let keep: Vec<usize> = (0..d.n()).filter(|&v| i >> v & 1 == 0).collect();
    d.induced(&keep).find_cycle().map(|c| c.into_iter().map(|v| keep[v]).collect())
}

/// `|Fix φ| ≤ Π_{v ∈ I} |X_v|` for a feedback vertex set `I` of the
/// interaction graph.
pub fn feedback_original(net: &Network, i: usize, cfg: &Config) -> Result<FeedbackReport> {
    let n = net.n();
    if n < usize::BITS as usize && i >> n != 0 {
        return Err(Error::InvalidInput(format!("vertex set {i:#b} exceeds {n} coordinates")));
    }
    let ig = interaction_graph(net, cfg)?;
    if !fvs_check(&ig, i) {
        let cycle = cycle_avoiding(&ig, i).ok_or_else(|| {
            Error::internal("no feedback vertex set yet no cycle", format!("{:?} I={i}", ig.arcs()))
        })?;
        return Err(Error::NotAnFvs { cycle });
    }
    let sizes = net.alphabet_sizes();
    let bound: usize = (0..n).filter(|v| i >> v & 1 == 1).map(|v| sizes[v]).product();
    let phi = net.to_map();
    let fixed = phi.fixed_points().to_vec();
    let mut seen = HashSet::new();
    for &x in &fixed {
        let c = decode(&sizes, x);
        let key: Vec<usize> = (0..n).filter(|v| i >> v & 1 == 1).map(|v| c[v]).collect();
        if !seen.insert(key) {
            return Err(Error::internal(
                "restriction to the feedback set is not injective on Fix",
                format!("rules={:?} I={i}", net.rules),
            ));
        }
    }
    if fixed.len() > bound {
        return Err(Error::internal("feedback bound exceeded", format!("rules={:?}", net.rules)));
    }
    Ok(FeedbackReport { bound, fixed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Block order `S_0 > T_1 > U_1 > ..`.
    Blocks,
    /// Levels by depth, each sorted by the position of its image.
    Levels,
}

/// A chain on `X` on which a nilpotent map becomes a top-fixing co-graph.
#[derive(Debug, Clone)]
pub struct Converse {
    /// Least to greatest.
    pub order: LinearOrder,
    pub k: usize,
    pub e: Elem,
    pub lattice: Arc<Lattice>,
    pub phi: LatMap,
    pub f: LatMap,
    pub construction: Construction,
}

/// `d(x) = min{k : φ^k(x) = e}`, or `NotNilpotent`.
fn depths(table: &[Elem]) -> Result<(Elem, Vec<usize>)> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty state set".into()));
    }
    if let Some(x) = table.iter().position(|&y| y >= n) {
        return Err(Error::InvalidInput(format!("table[{x}] = {} is out of range", table[x])));
    }
    let mut e = 0;
    for _ in 0..n {
        e = table[e];
    }
    if table[e] != e {
        return Err(Error::NotNilpotent(format!("orbit of 0 ends in a cycle through {e}")));
    }
    let mut d = vec![0usize; n];
    for (x, dx) in d.iter_mut().enumerate() {
        let (mut cur, mut k) = (x, 0);
        while cur != e {
            if k >= n {
                return Err(Error::NotNilpotent(format!("{x} never reaches {e}")));
            }
            cur = table[cur];
            k += 1;
        }
        *dx = k;
    }
    Ok((e, d))
}

/// Ascending block order, built from the deepest level up. Within each level
/// `U_i` keeps the order its pre-images have in `S_{i+1}`; `T_i` sits above,
/// starting with the rest of the fiber `U_i` ends on, then the remaining
/// fibers by image id. `None` when the inherited order splits a fiber.
fn block_order(table: &[Elem], depth: &[usize], k: usize) -> Option<Vec<Elem>> {
    let n = table.len();
    let mut below: Vec<Elem> = Vec::new(); // U_i ascending, from the level below
    let mut levels: Vec<Vec<Elem>> = vec![Vec::new(); k + 1];
    for i in (1..=k).rev() {
        let u = std::mem::take(&mut below);
        let in_u: HashSet<Elem> = u.iter().copied().collect();
        // fibers of U_i must be contiguous
        let mut done: HashSet<Elem> = HashSet::new();
        for w in u.windows(2) {
            if table[w[0]] != table[w[1]] && !done.insert(table[w[0]]) {
                return None;
            }
        }
        if let Some(&last) = u.last() {
            if done.contains(&table[last]) {
                return None;
            }
            done.insert(table[last]);
        }
        let mut t: Vec<Elem> = (0..n).filter(|&x| depth[x] == i && !in_u.contains(&x)).collect();
        let boundary = u.last().map(|&x| table[x]);
        // T elements whose image already has a fiber in U_i other than the boundary one
        if t.iter().any(|&x| done.contains(&table[x]) && Some(table[x]) != boundary) {
            return None;
        }
        t.sort_by_key(|&x| (Some(table[x]) != boundary, table[x], x));
        let mut level = u;
        level.extend(t);
        let mut imgs: Vec<Elem> = Vec::new();
        for &x in &level {
            if imgs.last() != Some(&table[x]) {
                imgs.push(table[x]);
            }
        }
        below = imgs;
        levels[i] = level;
    }
    // U_0 = {e} = S_0
    if below.len() != 1 {
        return None;
    }
    levels[0] = below;
    Some(levels.into_iter().rev().flatten().collect())
}

/// Ascending order by depth (deepest lowest), each level sorted by the
/// position of the image in the level above, then by id.
fn levels_order(table: &[Elem], depth: &[usize], k: usize, e: Elem) -> Vec<Elem> {
    let n = table.len();
    let mut desc: Vec<Vec<Elem>> = vec![vec![e]];
    let mut pos = vec![0usize; n];
    for i in 1..=k {
        let mut level: Vec<Elem> = (0..n).filter(|&x| depth[x] == i).collect();
        level.sort_by_key(|&x| (pos[table[x]], x));
        for (p, &x) in level.iter().enumerate() {
            pos[x] = p;
        }
        desc.push(level);
    }
    // each level was listed from greatest image downwards; flip to ascending
    desc.into_iter().rev().flat_map(|l| l.into_iter().rev()).collect()
}

fn is_monotone_on(order: &[Elem], table: &[Elem]) -> bool {
    let mut pos = vec![0usize; order.len()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    order.windows(2).all(|w| pos[table[w[0]]] <= pos[table[w[1]]])
}

/// Chain on `X` under which a nilpotent `φ` is a top-fixing co-graph and
/// `f = φ⁺` is a `K`-meet-nilpotent graph with `φ` pre-meet dependent on `f`.
pub fn converse_construction(table: &[Elem], cfg: &Config) -> Result<Converse> {
    let n = table.len();
    if n > cfg.max_lattice_size {
        return Err(Error::SizeCapExceeded { requested: n as u128, cap: cfg.max_lattice_size });
    }
    let (e, depth) = depths(table)?;
    let k = depth.iter().copied().max().unwrap_or(0);
    let (seq, construction) = match block_order(table, &depth, k) {
        Some(o) if is_monotone_on(&o, table) => (o, Construction::Blocks),
        _ => (levels_order(table, &depth, k, e), Construction::Levels),
    };
    let covers: Vec<(usize, usize)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
    let lattice = Arc::new(Lattice::explicit_capped(n, &covers, cfg.max_lattice_size)?);
    let order = LinearOrder::new(seq)?;
    let phi = LatMap::new(&lattice, table.to_vec())?;
    let dump = || format!("table={table:?} order={:?}", order.seq());
    if !lattice.flags().chain || lattice.top() != e {
        return Err(Error::internal("constructed order is not a chain topped by e", dump()));
    }
    if !phi.is_monotone() || phi.apply(lattice.top()) != lattice.top() || !phi.is_cograph() {
        return Err(Error::internal("φ is not a top-fixing co-graph on the chain", dump()));
    }
    let f = phi.residuated();
    if !f.is_graph() {
        return Err(Error::internal("φ⁺ is not a graph", dump()));
    }
    let kk = k.max(1);
    if f.apply_n(lattice.top(), kk) != lattice.bottom() {
        return Err(Error::internal(format!("φ⁺ is not {kk}-meet-nilpotent"), dump()));
    }
    if !crate::dependency::depends(crate::dependency::DepKind::PreMeet, &phi, &f, cfg)? {
        return Err(Error::internal("φ does not depend on φ⁺", dump()));
    }
    Ok(Converse { order, k, e, lattice, phi, f, construction })
}
