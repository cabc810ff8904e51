//! Orbits, eventually constant sequences, the `d_A` metric and nilpotence.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dependency::DepKind;
use crate::dyadic::Dyadic;
use crate::elemset::ElementSet;
use crate::error::{Error, Result};
use crate::latmap::LatMap;
use crate::lattice::{Elem, Lattice};

/// Meet side: sequences are combined by `x ∧ a_i` and aggregated by joins.
/// Join side is the order dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Meet,
    Join,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Meet => "meet",
            Side::Join => "join",
        }
    }

    /// `x ∧ a` or `x ∨ a`.
    pub fn combine(self, l: &Lattice, x: Elem, a: Elem) -> Elem {
        match self {
            Side::Meet => l.meet(x, a),
            Side::Join => l.join(x, a),
        }
    }

    /// `⋁` on the meet side, `⋀` on the join side.
    pub fn aggregate<I: IntoIterator<Item = Elem>>(self, l: &Lattice, it: I) -> Elem {
        match self {
            Side::Meet => l.join_all(it),
            Side::Join => l.meet_all(it),
        }
    }

    /// Bottom on the meet side, top on the join side.
    pub fn origin(self, l: &Lattice) -> Elem {
        match self {
            Side::Meet => l.bottom(),
            Side::Join => l.top(),
        }
    }

    pub fn far(self, l: &Lattice) -> Elem {
        match self {
            Side::Meet => l.top(),
            Side::Join => l.bottom(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub transient: Vec<Elem>,
    pub cycle: Vec<Elem>,
}

impl Orbit {
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.transient.iter().chain(self.cycle.iter()).copied()
    }
}

/// Trajectory of `x`, split at the first repeated state.
pub fn iterate(phi: &LatMap, x: Elem) -> Orbit {
    let mut seen: HashMap<Elem, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut cur = x;
    while !seen.contains_key(&cur) {
        seen.insert(cur, path.len());
        path.push(cur);
        cur = phi.apply(cur);
    }
    let cycle = path.split_off(seen[&cur]);
    Orbit { transient: path, cycle }
}

pub fn fix_set(phi: &LatMap) -> ElementSet {
    phi.fixed_points()
}

/// Periodic points: the states lying on cycles of the functional graph.
/// That set is closed under `φ`, so it is its own forward orbit.
pub fn par_set(phi: &LatMap) -> ElementSet {
    let n = phi.lattice().size();
    // 0 new, 1 on current walk, 2 finished
    let mut state = vec![0u8; n];
    let mut out = ElementSet::empty(n);
    for start in 0..n {
        let mut walk = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            x = phi.apply(x);
        }
        if state[x] == 1 {
            let mut y = x;
            loop {
                out.insert(y);
                y = phi.apply(y);
                if y == x {
                    break;
                }
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    out
}

/// `⋂ φ^i(L)`, by iterating images until they stop shrinking.
pub fn pyr_set(phi: &LatMap) -> ElementSet {
    let n = phi.lattice().size();
    let mut s = ElementSet::full(n);
    loop {
        let next = ElementSet::from_elems(n, s.iter().map(|x| phi.apply(x)));
        if next == s {
            return s;
        }
        s = next;
    }
}

/// `Some(e)` iff every trajectory ends in the fixed point `e`.
pub fn converges(phi: &LatMap) -> Option<Elem> {
    let par = par_set(phi);
    match par.to_vec().as_slice() {
        [e] if phi.apply(*e) == *e => Some(*e),
        _ => None,
    }
}

/// `converges` plus `Pyr(φ) = {e}`.
pub fn strongly_converges(phi: &LatMap) -> Option<Elem> {
    let e = converges(phi)?;
    let pyr = pyr_set(phi);
    (pyr.len() == 1 && pyr.contains(e)).then_some(e)
}

// ----- eventually constant sequences ---------------------------------------

/// `a_i = prefix[min(i, N)]` with `N = stable_from`.
#[derive(Clone, PartialEq, Eq)]
pub struct ESeq {
    lat: Arc<Lattice>,
    prefix: Vec<Elem>,
}

impl std::fmt::Debug for ESeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ESeq{:?}..", self.prefix)
    }
}

impl ESeq {
    pub fn new(lat: &Arc<Lattice>, prefix: Vec<Elem>, stable_from: usize) -> Result<ESeq> {
        if prefix.len() != stable_from + 1 {
            return Err(Error::InvalidInput(format!(
                "prefix has length {}, stable_from {stable_from} needs {}",
                prefix.len(),
                stable_from + 1
            )));
        }
        if let Some(&x) = prefix.iter().find(|&&x| x >= lat.size()) {
            return Err(Error::InvalidInput(format!("sequence entry {x} is not an element")));
        }
        Ok(ESeq { lat: lat.clone(), prefix })
    }

    /// Sequence whose last listed entry repeats forever.
    pub fn from_prefix(lat: &Arc<Lattice>, prefix: Vec<Elem>) -> Result<ESeq> {
        let n = prefix.len().checked_sub(1).ok_or_else(|| {
            Error::InvalidInput("a sequence needs at least one entry".into())
        })?;
        Self::new(lat, prefix, n)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lat
    }

    pub fn get(&self, i: usize) -> Elem {
        self.prefix[i.min(self.prefix.len() - 1)]
    }

    pub fn stable_from(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn prefix(&self) -> &[Elem] {
        &self.prefix
    }

    /// Same sequence with the smallest possible `stable_from`.
    pub fn minimized(&self) -> ESeq {
        let mut p = self.prefix.clone();
        while p.len() > 1 && p[p.len() - 2] == p[p.len() - 1] {
            p.pop();
        }
        ESeq { lat: self.lat.clone(), prefix: p }
    }
}

fn orbit_seq(psi: &LatMap, start: Elem) -> Result<ESeq> {
    let orbit = iterate(psi, start);
    if orbit.cycle.len() > 1 {
        return Err(Error::PeriodicTail { cycle: orbit.cycle });
    }
    let mut prefix = orbit.transient;
    prefix.extend(orbit.cycle);
    ESeq::from_prefix(psi.lattice(), prefix)
}

/// `M(ψ) = (ψ^i(0))`.
pub fn m_seq(psi: &LatMap) -> Result<ESeq> {
    orbit_seq(psi, psi.lattice().bottom())
}

/// `J(ψ) = (ψ^i(1))`.
pub fn j_seq(psi: &LatMap) -> Result<ESeq> {
    orbit_seq(psi, psi.lattice().top())
}

// ----- d_A -------------------------------------------------------------------

/// Disagreement indices below `stable_from`, plus the constant membership of
/// every index from `stable_from` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Delta {
    pub indices: Vec<usize>,
    pub tail: bool,
}

pub fn delta(a: &ESeq, side: Side, s: Elem, t: Elem) -> Delta {
    let l = &a.lat;
    let n = a.stable_from();
    let differs = |i: usize| side.combine(l, s, a.get(i)) != side.combine(l, t, a.get(i));
    Delta { indices: (0..n).filter(|&i| differs(i)).collect(), tail: differs(n) }
}

/// `d_A(s, t) = Σ_{i ∈ Δ} 2^{-i}`, with the tail summed in closed form.
pub fn d_a(a: &ESeq, side: Side, s: Elem, t: Elem) -> Dyadic {
    let d = delta(a, side, s, t);
    let mut total: Dyadic = d.indices.iter().map(|&i| Dyadic::pow2(-(i as i64))).sum();
    if d.tail {
        total = total.add(&Dyadic::pow2(1 - a.stable_from() as i64));
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqFlags {
    pub covering: bool,
    pub metric: bool,
    pub complete: bool,
}

/// Covering, metric and complete flags. On a finite lattice a Cauchy
/// sequence for the bounded metric `d_A` is eventually constant, so complete
/// coincides with metric.
pub fn classify_seq(a: &ESeq, side: Side) -> SeqFlags {
    let l = &a.lat;
    let covering = side.aggregate(l, a.prefix.iter().copied()) == side.far(l);
    let metric = l.elems().all(|x| {
        side.aggregate(l, a.prefix.iter().map(|&ai| side.combine(l, x, ai))) == x
    });
    SeqFlags { covering, metric, complete: metric }
}

/// `Err((i, j))` at the first `i ≥ j` with `z_i · a_j ≠ z_j · a_j`.
pub fn strongly_cauchy(a: &ESeq, z: &ESeq, side: Side) -> std::result::Result<(), (usize, usize)> {
    let l = &a.lat;
    let h = a.stable_from().max(z.stable_from());
    for j in 0..=h {
        for i in j..=h {
            if side.combine(l, z.get(i), a.get(j)) != side.combine(l, z.get(j), a.get(j)) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// Limit `z = ⋁ z_i ∧ a_i` (dually on the join side), and whether
/// `z ∧ a_i = z_i ∧ a_i` for all `i`.
pub fn limit_identity(a: &ESeq, z: &ESeq, side: Side) -> (Elem, bool) {
    let l = &a.lat;
    let h = a.stable_from().max(z.stable_from());
    let lim = side.aggregate(l, (0..=h).map(|i| side.combine(l, z.get(i), a.get(i))));
    let ok = (0..=h).all(|i| side.combine(l, lim, a.get(i)) == side.combine(l, z.get(i), a.get(i)));
    (lim, ok)
}

// ----- nilpotence --------------------------------------------------------------

/// Least `K` with `ψ^K(1) = 0` (meet side) or `ψ^K(0) = 1` (join side).
pub fn nilpotency_index(psi: &LatMap, side: Side) -> Option<usize> {
    let l = psi.lattice();
    let orbit = iterate(psi, side.far(l));
    let k = orbit.elements().position(|x| x == side.origin(l));
    k
}

/// `⋀_i ψ^i(1) = 0` (meet side) or `⋁_i ψ^i(0) = 1` (join side).
pub fn is_asymptotically_nilpotent(psi: &LatMap, side: Side) -> bool {
    let l = psi.lattice();
    let orbit = iterate(psi, side.far(l));
    let agg = match side {
        Side::Meet => l.meet_all(orbit.elements()),
        Side::Join => l.join_all(orbit.elements()),
    };
    agg == side.origin(l)
}

/// `B(φ) = ⋂_i φ^i(L)↓`.
pub fn b_set(phi: &LatMap) -> ElementSet {
    let l = phi.lattice();
    let mut s = ElementSet::full(l.size());
    let mut b = l.downset(&s);
    loop {
        let next = ElementSet::from_elems(l.size(), s.iter().map(|x| phi.apply(x)));
        b.intersect_with(&l.downset(&next));
        if next == s {
            return b;
        }
        s = next;
    }
}

/// `C(φ) = (⋀_i φ^i(1))↓`, the meet taken over the whole orbit of top.
pub fn c_set(phi: &LatMap) -> ElementSet {
    let l = phi.lattice();
    let c = l.meet_all(iterate(phi, l.top()).elements());
    l.down(c).clone()
}

// ----- witness sequences --------------------------------------------------------

/// The chaining inequality of `kind` for every index, ignoring `a_0`.
pub fn chain_check(kind: DepKind, rho: &LatMap, a: &ESeq) -> Result<()> {
    let l = rho.lattice();
    if **l != *a.lat && !Arc::ptr_eq(l, &a.lat) {
        return Err(Error::LatticeMismatch);
    }
    for i in 1..=a.stable_from() + 1 {
        let (cur, prev) = (a.get(i), a.get(i - 1));
        let ok = match kind {
            DepKind::PreMeet => l.leq(rho.apply(cur), prev),
            DepKind::PreJoin => l.leq(prev, rho.apply(cur)),
            DepKind::PostMeet => l.leq(cur, rho.apply(prev)),
            DepKind::PostJoin => l.leq(rho.apply(prev), cur),
        };
        if !ok {
            return Err(Error::ChainViolation { index: i });
        }
    }
    Ok(())
}

/// Validates `A` as a witness sequence for `kind` and classifies it.
pub fn check_witness(kind: DepKind, rho: &LatMap, a: &ESeq) -> Result<SeqFlags> {
    let side = kind.side();
    let expected = side.origin(rho.lattice());
    if a.get(0) != expected {
        return Err(Error::BoundaryViolation { found: a.get(0), expected });
    }
    chain_check(kind, rho, a)?;
    Ok(classify_seq(a, side))
}

/// Canonical candidate: `M(α⁻)`, `J(β⁺)`, `M(γ)` or `J(δ)`.
pub fn canonical_witness(kind: DepKind, rho: &LatMap) -> Result<ESeq> {
    match kind {
        DepKind::PreMeet => m_seq(&rho.residual()),
        DepKind::PreJoin => j_seq(&rho.residuated()),
        DepKind::PostMeet => m_seq(rho),
        DepKind::PostJoin => j_seq(rho),
    }
}
