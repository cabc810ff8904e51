//! Finite complete lattices.
//!
//! A [`Lattice`] is an immutable record over dense element ids `0..n`. The
//! order, both binary operation tables, the bounds and (when it exists) a
//! complement table are computed once at construction and shared read-only
//! afterwards.
//!
//! Element ids follow a canonical numbering per constructor:
//!
//! * power sets use bitmasks, so element `x` contains vertex `v` iff bit `v`
//!   of `x` is set;
//! * chains number their elements `0 < 1 < ... < k-1`;
//! * products use mixed-radix row-major ids with the first factor most
//!   significant.
//!
//! Every finite lattice is complete: an arbitrary join is a fold of binary
//! joins starting from bottom, which is the join of the empty set.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_MAX_LATTICE_SIZE;
use crate::elemset::ElementSet;
use crate::error::{BoundOp, Error, Result};

/// Dense element id.
pub type Elem = usize;

/// Cached classification record.
///
/// On a finite lattice the frame law only involves finite joins, so `frame`
/// coincides with `distributive`. `trivial` holds when the lattice has at most
/// two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub distributive: bool,
    pub complemented: bool,
    pub boolean: bool,
    pub chain: bool,
    pub frame: bool,
    pub trivial: bool,
}

/// Serializable description of how a lattice was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Descriptor {
    /// `covers` lists pairs `[u, v]` with `u` covered by `v`.
    Explicit { n: usize, covers: Vec<(usize, usize)> },
    Powerset { ground: usize },
    Chain { size: usize },
    Product { factors: Vec<Descriptor> },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    up: Vec<ElementSet>,
    down: Vec<ElementSet>,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: Elem,
    top: Elem,
    complement: Option<Vec<u32>>,
    flags: Flags,
    origin: Descriptor,
    flipped: bool,
    factors: Vec<Arc<Lattice>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice")
            .field("size", &self.n)
            .field("origin", &self.origin)
            .field("flipped", &self.flipped)
            .field("flags", &self.flags)
            .finish()
    }
}

fn check_size(requested: u128, cap: usize) -> Result<usize> {
    if requested > cap as u128 {
        return Err(Error::SizeCapExceeded { requested, cap });
    }
    Ok(requested as usize)
}

impl Lattice {
    // ----- construction -------------------------------------------------

    /// Builds a lattice from its cover relation with the default size cap.
    pub fn explicit(n: usize, covers: &[(usize, usize)]) -> Result<Lattice> {
        Self::explicit_capped(n, covers, DEFAULT_MAX_LATTICE_SIZE)
    }

    /// Builds a lattice from a cover relation. Pairs `(u, v)` read "u is
    /// below v"; the full order is the reflexive-transitive closure.
    pub fn explicit_capped(n: usize, covers: &[(usize, usize)], cap: usize) -> Result<Lattice> {
        check_size(n as u128, cap)?;
        if n == 0 {
            return Err(Error::InvalidInput("a lattice needs at least one element".into()));
        }
        let mut up: Vec<ElementSet> = (0..n)
            .map(|x| ElementSet::from_elems(n, [x]))
            .collect();
        for &(u, v) in covers {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "cover pair ({u}, {v}) references an id outside 0..{n}"
                )));
            }
            up[u].insert(v);
        }
        // Warshall closure over bitset rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(Error::NotAPoset { u: a, v: b });
                }
            }
        }
        let down = transpose_rows(&up);
        let up_count: Vec<usize> = up.iter().map(|s| s.len()).collect();
        let down_count: Vec<usize> = down.iter().map(|s| s.len()).collect();
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let ub = up[a].intersection(&up[b]);
                let lub = ub
                    .iter()
                    .find(|&u| up_count[u] == ub.len())
                    .ok_or(Error::NotALattice { a, b, op: BoundOp::Join })?;
                let lb = down[a].intersection(&down[b]);
                let glb = lb
                    .iter()
                    .find(|&u| down_count[u] == lb.len())
                    .ok_or(Error::NotALattice { a, b, op: BoundOp::Meet })?;
                join[a * n + b] = lub as u32;
                join[b * n + a] = lub as u32;
                meet[a * n + b] = glb as u32;
                meet[b * n + a] = glb as u32;
            }
        }
        let mut covers_sorted: Vec<(usize, usize)> = covers.to_vec();
        covers_sorted.sort_unstable();
        covers_sorted.dedup();
        Ok(Self::assemble(
            n,
            up,
            down,
            join,
            meet,
            Descriptor::Explicit { n, covers: covers_sorted },
            Vec::new(),
            None,
            None,
        ))
    }

    pub fn powerset(ground: usize) -> Result<Lattice> {
        Self::powerset_capped(ground, DEFAULT_MAX_LATTICE_SIZE)
    }

    /// The power set of `{0, .., ground-1}` with bitmask ids.
    pub fn powerset_capped(ground: usize, cap: usize) -> Result<Lattice> {
        if ground >= 64 {
            return Err(Error::SizeCapExceeded { requested: 1u128 << ground.min(127), cap });
        }
        let n = check_size(1u128 << ground, cap)?;
        let mask = n - 1;
        let up: Vec<ElementSet> = (0..n)
            .map(|x| ElementSet::from_elems(n, (0..n).filter(|y| x & !y == 0)))
            .collect();
        let down = transpose_rows(&up);
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = (a | b) as u32;
                meet[a * n + b] = (a & b) as u32;
            }
        }
        let flags = Flags {
            distributive: true,
            complemented: true,
            boolean: true,
            chain: ground <= 1,
            frame: true,
            trivial: n <= 2,
        };
        let complement = (0..n).map(|x| (!x & mask) as u32).collect();
        Ok(Self::assemble(
            n,
            up,
            down,
            join,
            meet,
            Descriptor::Powerset { ground },
            Vec::new(),
            Some(flags),
            Some(complement),
        ))
    }

    pub fn chain(k: usize) -> Result<Lattice> {
        Self::chain_capped(k, DEFAULT_MAX_LATTICE_SIZE)
    }

    /// The chain `0 < 1 < ... < k-1`.
    pub fn chain_capped(k: usize, cap: usize) -> Result<Lattice> {
        if k == 0 {
            return Err(Error::InvalidInput("a chain needs at least one element".into()));
        }
        let n = check_size(k as u128, cap)?;
        let up: Vec<ElementSet> = (0..n).map(|x| ElementSet::from_elems(n, x..n)).collect();
        let down = transpose_rows(&up);
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = a.max(b) as u32;
                meet[a * n + b] = a.min(b) as u32;
            }
        }
        let small = n <= 2;
        let flags = Flags {
            distributive: true,
            complemented: small,
            boolean: small,
            chain: true,
            frame: true,
            trivial: small,
        };
        let complement = small.then(|| (0..n).map(|x| (n - 1 - x) as u32).collect());
        Ok(Self::assemble(
            n,
            up,
            down,
            join,
            meet,
            Descriptor::Chain { size: k },
            Vec::new(),
            Some(flags),
            complement,
        ))
    }

    pub fn product(factors: &[Lattice]) -> Result<Lattice> {
        Self::product_capped(factors, DEFAULT_MAX_LATTICE_SIZE)
    }

    /// Direct product with componentwise order and row-major ids.
    pub fn product_capped(factors: &[Lattice], cap: usize) -> Result<Lattice> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a product needs at least one factor".into()));
        }
        let requested = factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.n as u128))
            .unwrap_or(u128::MAX);
        let n = check_size(requested, cap)?;
        let radices: Vec<usize> = factors.iter().map(|f| f.n).collect();
        let coords: Vec<Vec<usize>> = (0..n).map(|x| decode(&radices, x)).collect();
        let up: Vec<ElementSet> = (0..n)
            .map(|x| {
                ElementSet::from_elems(
                    n,
                    (0..n).filter(|&y| {
                        factors.iter().enumerate().all(|(i, f)| f.leq(coords[x][i], coords[y][i]))
                    }),
                )
            })
            .collect();
        let down = transpose_rows(&up);
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        let mut buf_j = vec![0usize; factors.len()];
        let mut buf_m = vec![0usize; factors.len()];
        for a in 0..n {
            for b in 0..n {
                for (i, f) in factors.iter().enumerate() {
                    buf_j[i] = f.join(coords[a][i], coords[b][i]);
                    buf_m[i] = f.meet(coords[a][i], coords[b][i]);
                }
                join[a * n + b] = encode(&radices, &buf_j) as u32;
                meet[a * n + b] = encode(&radices, &buf_m) as u32;
            }
        }
        let all = |p: fn(&Flags) -> bool| factors.iter().all(|f| p(&f.flags));
        let nontrivial: Vec<&Lattice> = factors.iter().filter(|f| f.n > 1).collect();
        let distributive = all(|f| f.distributive);
        let complemented = all(|f| f.complemented);
        let flags = Flags {
            distributive,
            complemented,
            boolean: distributive && complemented,
            chain: nontrivial.len() <= 1 && nontrivial.iter().all(|f| f.flags.chain),
            frame: distributive,
            trivial: n <= 2,
        };
        let complement = complemented.then(|| {
            (0..n)
                .map(|x| {
                    let c: Vec<usize> = factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| f.complement(coords[x][i]).expect("complemented factor"))
                        .collect();
                    encode(&radices, &c) as u32
                })
                .collect()
        });
        Ok(Self::assemble(
            n,
            up,
            down,
            join,
            meet,
            Descriptor::Product { factors: factors.iter().map(|f| f.descriptor()).collect() },
            factors.iter().cloned().map(Arc::new).collect(),
            Some(flags),
            complement,
        ))
    }

    pub fn from_descriptor(d: &Descriptor, cap: usize) -> Result<Lattice> {
        match d {
            Descriptor::Explicit { n, covers } => Self::explicit_capped(*n, covers, cap),
            Descriptor::Powerset { ground } => Self::powerset_capped(*ground, cap),
            Descriptor::Chain { size } => Self::chain_capped(*size, cap),
            Descriptor::Product { factors } => {
                let fs = factors
                    .iter()
                    .map(|f| Self::from_descriptor(f, cap))
                    .collect::<Result<Vec<_>>>()?;
                Self::product_capped(&fs, cap)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        n: usize,
        up: Vec<ElementSet>,
        down: Vec<ElementSet>,
        join: Vec<u32>,
        meet: Vec<u32>,
        origin: Descriptor,
        factors: Vec<Arc<Lattice>>,
        flags: Option<Flags>,
        complement: Option<Vec<u32>>,
    ) -> Lattice {
        let bottom = (0..n).find(|&x| up[x].len() == n).expect("finite lattice has a bottom");
        let top = (0..n).find(|&x| down[x].len() == n).expect("finite lattice has a top");
        let mut lat = Lattice {
            n,
            up,
            down,
            join,
            meet,
            bottom,
            top,
            complement: None,
            flags: Flags {
                distributive: false,
                complemented: false,
                boolean: false,
                chain: false,
                frame: false,
                trivial: n <= 2,
            },
            origin,
            flipped: false,
            factors,
        };
        lat.flags = flags.unwrap_or_else(|| lat.classify_exhaustive());
        lat.complement = complement.or_else(|| lat.search_complements());
        lat
    }

    fn search_complements(&self) -> Option<Vec<u32>> {
        (0..self.n)
            .map(|x| {
                (0..self.n)
                    .find(|&y| self.join(x, y) == self.top && self.meet(x, y) == self.bottom)
                    .map(|y| y as u32)
            })
            .collect()
    }

    /// The opposite lattice: same ids, reversed order.
    pub fn opposite(&self) -> Lattice {
        Lattice {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
            complement: self.complement.clone(),
            flags: self.flags,
            origin: self.origin.clone(),
            flipped: !self.flipped,
            factors: self.factors.clone(),
        }
    }

    // ----- primitives ---------------------------------------------------

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elems(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.n + b] as Elem
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.n + b] as Elem
    }

    /// Join of any collection; the empty join is bottom.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of any collection; the empty meet is top.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_set(&self, s: &ElementSet) -> Elem {
        self.join_all(s.iter())
    }

    pub fn meet_set(&self, s: &ElementSet) -> Elem {
        self.meet_all(s.iter())
    }

    /// Principal filter `{y : x ≤ y}`.
    pub fn up(&self, x: Elem) -> &ElementSet {
        &self.up[x]
    }

    /// Principal ideal `{y : y ≤ x}`.
    pub fn down(&self, x: Elem) -> &ElementSet {
        &self.down[x]
    }

    pub fn upset(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn downset(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for x in s.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    /// A complement of `x`, if the lattice is complemented. Unique on
    /// Boolean algebras.
    pub fn complement(&self, x: Elem) -> Option<Elem> {
        self.complement.as_ref().map(|c| c[x] as Elem)
    }

    /// Complement on a Boolean algebra.
    pub fn neg(&self, x: Elem) -> Result<Elem> {
        if !self.flags.boolean {
            return Err(Error::NotBoolean);
        }
        Ok(self.complement(x).expect("boolean lattices carry complements"))
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn classify(&self) -> Flags {
        self.flags
    }

    pub fn is_opposite(&self) -> bool {
        self.flipped
    }

    /// Ground set size when this is an unflipped power set.
    pub fn powerset_ground(&self) -> Option<usize> {
        match (&self.origin, self.flipped) {
            (Descriptor::Powerset { ground }, false) => Some(*ground),
            _ => None,
        }
    }

    /// Factors of an unflipped product.
    pub fn factors(&self) -> Option<&[Arc<Lattice>]> {
        (!self.flipped && !self.factors.is_empty()).then_some(self.factors.as_slice())
    }

    /// Descriptor that rebuilds an identical lattice. Opposites are emitted
    /// through their cover relation.
    pub fn descriptor(&self) -> Descriptor {
        if self.flipped {
            Descriptor::Explicit { n: self.n, covers: self.covers() }
        } else {
            self.origin.clone()
        }
    }

    /// Cover pairs `(a, b)` with `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.up[a].iter() {
                if b != a && self.up[a].intersection(&self.down[b]).len() == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Coordinates of `x` in an unflipped product.
    pub fn coords(&self, x: Elem) -> Option<Vec<usize>> {
        self.factors().map(|fs| decode(&fs.iter().map(|f| f.n).collect::<Vec<_>>(), x))
    }

    /// Id of the product element with the given coordinates.
    pub fn encode(&self, coords: &[usize]) -> Option<Elem> {
        let fs = self.factors()?;
        if coords.len() != fs.len() || coords.iter().zip(fs).any(|(&c, f)| c >= f.n) {
            return None;
        }
        Some(encode(&fs.iter().map(|f| f.n).collect::<Vec<_>>(), coords))
    }

    // ----- classification -----------------------------------------------

    /// Recomputes the classification from the tables.
    ///
    /// Distributivity is decided by join-primality of join-irreducibles:
    /// a finite lattice is distributive iff `x ↦ {j ∈ J(L) : j ≤ x}` turns
    /// binary joins into unions.
    pub fn classify_exhaustive(&self) -> Flags {
        let n = self.n;
        let chain = (0..n).all(|a| (0..n).all(|b| self.leq(a, b) || self.leq(b, a)));
        let irreducible: Vec<Elem> = (0..n)
            .filter(|&j| {
                j != self.bottom && self.join_all(self.down[j].iter().filter(|&x| x != j)) != j
            })
            .collect();
        let jset = ElementSet::from_elems(n, irreducible.iter().copied());
        let below: Vec<ElementSet> = (0..n).map(|x| self.down[x].intersection(&jset)).collect();
        let distributive = (0..n).all(|a| {
            (a..n).all(|b| {
                let mut u = below[a].clone();
                u.union_with(&below[b]);
                u == below[self.join(a, b)]
            })
        });
        let complemented = (0..n).all(|x| {
            (0..n).any(|y| self.join(x, y) == self.top && self.meet(x, y) == self.bottom)
        });
        Flags {
            distributive,
            complemented,
            boolean: distributive && complemented,
            chain,
            frame: distributive,
            trivial: n <= 2,
        }
    }

    /// An order isomorphism `self → other` as an id table, if one exists.
    pub fn find_isomorphism(&self, other: &Lattice) -> Option<Vec<Elem>> {
        if self.n != other.n {
            return None;
        }
        let n = self.n;
        let sig = |l: &Lattice, x: Elem| (l.down[x].len(), l.up[x].len());
        let mut order: Vec<Elem> = (0..n).collect();
        order.sort_by_key(|&x| sig(self, x));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            order: &[Elem],
            a: &Lattice,
            b: &Lattice,
            map: &mut [Elem],
            used: &mut [bool],
        ) -> bool {
            if i == order.len() {
                return true;
            }
            let x = order[i];
            let want = (a.down[x].len(), a.up[x].len());
            for y in 0..b.n {
                if used[y] || (b.down[y].len(), b.up[y].len()) != want {
                    continue;
                }
                let ok = order[..i].iter().all(|&p| {
                    a.leq(p, x) == b.leq(map[p], y) && a.leq(x, p) == b.leq(y, map[p])
                });
                if ok {
                    map[x] = y;
                    used[y] = true;
                    if go(i + 1, order, a, b, map, used) {
                        return true;
                    }
                    used[y] = false;
                    map[x] = usize::MAX;
                }
            }
            false
        }
        go(0, &order, self, other, &mut map, &mut used).then_some(map)
    }
}

fn transpose_rows(up: &[ElementSet]) -> Vec<ElementSet> {
    let n = up.len();
    let mut down: Vec<ElementSet> = (0..n).map(|_| ElementSet::empty(n)).collect();
    for (a, row) in up.iter().enumerate() {
        for b in row.iter() {
            down[b].insert(a);
        }
    }
    down
}

pub(crate) fn decode(radices: &[usize], mut x: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (i, &r) in radices.iter().enumerate().rev() {
        out[i] = x % r;
        x /= r;
    }
    out
}

pub(crate) fn encode(radices: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(radices).fold(0, |acc, (&c, &r)| acc * r + c)
}

/// The diamond M3: bottom 0, atoms 1, 2, 3, top 4.
pub fn m3() -> Lattice {
    Lattice::explicit(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        .expect("M3 is a lattice")
}

/// The pentagon N5: 0 < 1 < 2 < 4 and 0 < 3 < 4.
pub fn n5() -> Lattice {
    Lattice::explicit(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5 is a lattice")
}
