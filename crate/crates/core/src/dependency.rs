use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dynamics::Side;
use crate::error::{Error, Result};
use crate::latmap::LatMap;
use crate::lattice::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepKind {
    PreMeet,
    PreJoin,
    PostMeet,
    PostJoin,
}

impl DepKind {
    pub const ALL: [DepKind; 4] =
        [DepKind::PreMeet, DepKind::PreJoin, DepKind::PostMeet, DepKind::PostJoin];

    pub fn side(self) -> Side {
        match self {
            DepKind::PreMeet | DepKind::PostMeet => Side::Meet,
            DepKind::PreJoin | DepKind::PostJoin => Side::Join,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DepKind::PreMeet => "pre-meet",
            DepKind::PreJoin => "pre-join",
            DepKind::PostMeet => "post-meet",
            DepKind::PostJoin => "post-join",
        }
    }
}

impl std::str::FromStr for DepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<DepKind> {
        DepKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown dependency kind `{s}`")))
    }
}

impl std::fmt::Display for DepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Hypothesis key and conclusion value of the defining implication at `s`:
/// the implication reads `key(x) = key(y) ⇒ val(x) = val(y)`.
fn key_val(kind: DepKind, phi: &LatMap, rho: &LatMap, s: Elem, x: Elem) -> (Elem, Elem) {
    let l = phi.lattice();
    match kind {
        DepKind::PreMeet => (l.meet(x, rho.apply(s)), l.meet(phi.apply(x), s)),
        DepKind::PreJoin => (l.join(x, rho.apply(s)), l.join(phi.apply(x), s)),
        DepKind::PostMeet => (l.meet(x, s), l.meet(phi.apply(x), rho.apply(s))),
        DepKind::PostJoin => (l.join(x, s), l.join(phi.apply(x), rho.apply(s))),
    }
}

/// Least violating pair `(x, y)` for a fixed `s`.
fn violation_at(kind: DepKind, phi: &LatMap, rho: &LatMap, s: Elem) -> Option<(Elem, Elem)> {
    let n = phi.lattice().size();
    // per key: (first member, its value, first member with another value)
    let mut classes: Vec<Option<(Elem, Elem, Option<Elem>)>> = vec![None; n];
    for x in 0..n {
        let (k, v) = key_val(kind, phi, rho, s, x);
        match &mut classes[k] {
            slot @ None => *slot = Some((x, v, None)),
            Some((_, v1, second @ None)) if *v1 != v => *second = Some(x),
            _ => {}
        }
    }
    classes
        .into_iter()
        .flatten()
        .filter_map(|(m1, _, m2)| m2.map(|y| (m1, y)))
        .min()
}

/// First violating triple `(x, y, s)` in lexicographic id order.
///
/// Equivalent to sweeping all `|L|³` triples: for each `s` the elements are
/// grouped by hypothesis key and each group must have a single value.
pub fn violation_witness(
    kind: DepKind,
    phi: &LatMap,
    rho: &LatMap,
    cfg: &Config,
) -> Result<Option<(Elem, Elem, Elem)>> {
    phi.same_lattice(rho)?;
    let n = phi.lattice().size();
    cfg.check_sweep(n, 3)?;
    Ok((0..n)
        .into_par_iter()
        .filter_map(|s| violation_at(kind, phi, rho, s).map(|(x, y)| (x, y, s)))
        .min())
}

pub fn depends(kind: DepKind, phi: &LatMap, rho: &LatMap, cfg: &Config) -> Result<bool> {
    Ok(violation_witness(kind, phi, rho, cfg)?.is_none())
}

/// `Ok(())` or `DependencyFails` with the canonical witness.
pub fn require_depends(kind: DepKind, phi: &LatMap, rho: &LatMap, cfg: &Config) -> Result<()> {
    match violation_witness(kind, phi, rho, cfg)? {
        None => Ok(()),
        Some(w) => Err(Error::DependencyFails { witness: w }),
    }
}

/// Random-triple search. A `None` result is evidence, not proof; certificates
/// never call this.
pub fn depends_sampled(
    kind: DepKind,
    phi: &LatMap,
    rho: &LatMap,
    samples: usize,
    seed: u64,
) -> Result<Option<(Elem, Elem, Elem)>> {
    phi.same_lattice(rho)?;
    let n = phi.lattice().size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (x, y, s) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let (kx, vx) = key_val(kind, phi, rho, s, x);
        let (ky, vy) = key_val(kind, phi, rho, s, y);
        if kx == ky && vx != vy {
            return Ok(Some((x, y, s)));
        }
    }
    Ok(None)
}

/// `Γ(a) = ⋁_{b ≤ a} γ(b)`, the least monotone map above `γ`.
pub fn canonical_gamma(gamma: &LatMap) -> Result<LatMap> {
    let l = gamma.lattice();
    if !l.flags().frame {
        return Err(Error::NotAFrame);
    }
    Ok(LatMap::from_fn(l, |a| l.join_all(l.down(a).iter().map(|b| gamma.apply(b)))))
}
