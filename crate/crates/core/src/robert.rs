//! Fixed-point certificates.
//!
//! Every certificate is issued only after the hypotheses are checked
//! exhaustively and the conclusion is confirmed by simulation. A mismatch
//! between the two is reported as an internal-consistency failure.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boolalg::{difference_floor, is_fpf_set, transpose};
use crate::config::{Config, EXHAUSTIVE_START_CAP, SAMPLED_STARTS};
use crate::dependency::{require_depends, DepKind};
use crate::dynamics::{
    chain_check, check_witness, classify_seq, d_a, is_asymptotically_nilpotent, iterate, j_seq,
    nilpotency_index, pyr_set, strongly_converges, ESeq, SeqFlags, Side,
};
use crate::error::{Error, Result};
use crate::latmap::LatMap;
use crate::lattice::{Elem, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    PreMeet,
    PreJoin,
    PostMeet,
    PostJoin,
    Cba,
    Sequence,
    Original,
}

impl From<DepKind> for CertKind {
    fn from(k: DepKind) -> CertKind {
        match k {
            DepKind::PreMeet => CertKind::PreMeet,
            DepKind::PreJoin => CertKind::PreJoin,
            DepKind::PostMeet => CertKind::PostMeet,
            DepKind::PostJoin => CertKind::PostJoin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Metric,
    Complete,
    Nilpotent(usize),
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Metric => "metric",
            Level::Complete => "complete",
            Level::Nilpotent(_) => "nilpotent",
        }
    }

    pub fn k(self) -> Option<usize> {
        match self {
            Level::Nilpotent(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verified {
    pub starts: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Evidence {
    pub sequence: Option<ESeq>,
    pub steps: Option<Vec<Elem>>,
    pub flags: Option<SeqFlags>,
    pub dependency: Option<bool>,
    pub sweep_digest: Option<String>,
    pub contraction: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertKind,
    pub level: Level,
    pub e: Elem,
    pub verified: Verified,
    pub evidence: Evidence,
}

impl Certificate {
    pub fn k(&self) -> Option<usize> {
        self.level.k()
    }

    /// Re-checks the conclusion against `phi` by simulation.
    pub fn recheck(&self, phi: &LatMap) -> bool {
        if phi.apply(self.e) != self.e {
            return false;
        }
        let converges = strongly_converges(phi) == Some(self.e);
        match self.level {
            Level::Nilpotent(k) => converges && phi.pow(k).constant_value() == Some(self.e),
            Level::Complete => converges,
            Level::Metric => pyr_set(phi).iter().all(|x| x == self.e),
        }
    }
}

/// Start states: all of them up to the exhaustive cap, else bottom, top and
/// a seeded sample.
pub fn start_states(l: &Lattice, cfg: &Config) -> (Vec<Elem>, bool) {
    let n = l.size();
    if n <= EXHAUSTIVE_START_CAP {
        return ((0..n).collect(), true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut v = vec![l.bottom(), l.top()];
    v.extend((0..SAMPLED_STARTS).map(|_| rng.gen_range(0..n)));
    v.sort_unstable();
    v.dedup();
    (v, false)
}

/// `⋁_i φ^i(x) ∧ a_i` (meet side) or `⋀_i φ^i(x) ∨ a_i` (join side), exactly:
/// past `max(transient, stable_from)` the terms repeat with the orbit period.
pub fn e_formula(phi: &LatMap, a: &ESeq, side: Side, x: Elem) -> Elem {
    let l = phi.lattice();
    let orbit = iterate(phi, x);
    let horizon = orbit.transient.len().max(a.stable_from()) + orbit.cycle.len();
    let mut cur = x;
    let mut terms = Vec::with_capacity(horizon);
    for i in 0..horizon {
        terms.push(side.combine(l, cur, a.get(i)));
        cur = phi.apply(cur);
    }
    side.aggregate(l, terms)
}

fn formula_everywhere(phi: &LatMap, a: &ESeq, side: Side, cfg: &Config) -> Result<(Elem, Verified)> {
    let (starts, exhaustive) = start_states(phi.lattice(), cfg);
    let e = e_formula(phi, a, side, starts[0]);
    if let Some(&x) = starts.iter().find(|&&x| e_formula(phi, a, side, x) != e) {
        return Err(Error::internal(
            format!("limit formula depends on the start state ({} vs {x})", starts[0]),
            dump(phi, Some(a)),
        ));
    }
    Ok((e, Verified { starts: starts.len(), exhaustive }))
}

fn dump(phi: &LatMap, a: Option<&ESeq>) -> String {
    format!(
        "lattice={:?} phi={:?} seq={:?}",
        phi.lattice().descriptor(),
        phi.table(),
        a.map(|s| (s.prefix().to_vec(), s.stable_from()))
    )
}

fn digest(kind: &str, phi: &LatMap, rho: &LatMap, verdict: bool) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    for t in [phi.table(), rho.table()] {
        h.update(b"|");
        for &x in t {
            h.update((x as u64).to_le_bytes());
        }
    }
    h.update([verdict as u8]);
    hex::encode(h.finalize())
}

/// First pair with `d_A(φx, φy) > ½ d_A(x, y)`.
pub fn contraction_witness(
    phi: &LatMap,
    a: &ESeq,
    side: Side,
    cfg: &Config,
) -> Result<Option<(Elem, Elem)>> {
    let n = phi.lattice().size();
    cfg.check_sweep(n, 2)?;
    for x in 0..n {
        for y in x + 1..n {
            let before = d_a(a, side, x, y);
            let after = d_a(a, side, phi.apply(x), phi.apply(y));
            if after > before.half() {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

pub fn contraction_check(phi: &LatMap, a: &ESeq, side: Side, cfg: &Config) -> Result<bool> {
    Ok(contraction_witness(phi, a, side, cfg)?.is_none())
}

fn nilpotent_side(kind: DepKind) -> Side {
    match kind {
        DepKind::PreMeet | DepKind::PostJoin => Side::Meet,
        DepKind::PreJoin | DepKind::PostMeet => Side::Join,
    }
}

/// Conclusion checks shared by the certifying routes.
fn settle_level(phi: &LatMap, e: Elem, nil: Option<usize>, a: Option<&ESeq>) -> Result<Level> {
    if strongly_converges(phi) != Some(e) {
        return Err(Error::internal(
            format!("formula value {e} is not the strong limit"),
            dump(phi, a),
        ));
    }
    match nil {
        Some(k) => {
            if phi.pow(k).constant_value() != Some(e) {
                return Err(Error::internal(
                    format!("φ^{k} is not constant {e}"),
                    dump(phi, a),
                ));
            }
            Ok(Level::Nilpotent(k))
        }
        None => Ok(Level::Complete),
    }
}

/// Certificate for `φ` depending on `ρ` through the witness sequence `A`.
pub fn robert_certify(
    phi: &LatMap,
    kind: DepKind,
    rho: &LatMap,
    a: &ESeq,
    cfg: &Config,
) -> Result<Certificate> {
    phi.same_lattice(rho)?;
    let flags = check_witness(kind, rho, a).map_err(|e| Error::WitnessRejected(e.to_string()))?;
    if !flags.metric {
        return Err(Error::WitnessRejected(format!(
            "sequence is not {}-metric",
            kind.side().as_str()
        )));
    }
    require_depends(kind, phi, rho, cfg)?;
    let side = kind.side();
    let (e, verified) = formula_everywhere(phi, a, side, cfg)?;
    let nil = nilpotency_index(rho, nilpotent_side(kind));
    let level = if flags.complete {
        settle_level(phi, e, nil, Some(a))?
    } else {
        let pyr = pyr_set(phi);
        if !pyr.iter().all(|x| x == e) || phi.fixed_points().len() > 1 {
            return Err(Error::internal("metric-level conclusion fails", dump(phi, Some(a))));
        }
        Level::Metric
    };
    let contraction = if phi.lattice().size() <= EXHAUSTIVE_START_CAP {
        if !contraction_check(phi, a, side, cfg)? {
            return Err(Error::internal("certified map is not ½-contractive", dump(phi, Some(a))));
        }
        Some(true)
    } else {
        None
    };
    Ok(Certificate {
        kind: kind.into(),
        level,
        e,
        verified,
        evidence: Evidence {
            sequence: Some(a.clone()),
            steps: None,
            flags: Some(flags),
            dependency: Some(true),
            sweep_digest: Some(digest(kind.as_str(), phi, rho, true)),
            contraction,
        },
    })
}

/// Certificate on a Boolean algebra from pre-meet dependency on a graph `f`
/// whose transpose is asymptotically meet-nilpotent.
pub fn robert_cba(phi: &LatMap, f: &LatMap, cfg: &Config) -> Result<Certificate> {
    phi.same_lattice(f)?;
    let ft = transpose(f)?;
    if !is_asymptotically_nilpotent(&ft, Side::Meet) {
        return Err(Error::TransposeNotNilpotent {
            hypodox: ft.table().to_vec(),
            fixed: ft.fixed_points().to_vec(),
        });
    }
    require_depends(DepKind::PreMeet, phi, f, cfg)?;
    let b = j_seq(&ft)?;
    let (e, verified) = formula_everywhere(phi, &b, Side::Join, cfg)?;
    let level = settle_level(phi, e, nilpotency_index(f, Side::Meet), Some(&b))?;
    let contraction = if phi.lattice().size() <= EXHAUSTIVE_START_CAP {
        if !contraction_check(phi, &b, Side::Join, cfg)? {
            return Err(Error::internal("certified map is not ½-contractive", dump(phi, Some(&b))));
        }
        Some(true)
    } else {
        None
    };
    Ok(Certificate {
        kind: CertKind::Cba,
        level,
        e,
        verified,
        evidence: Evidence {
            sequence: Some(b.clone()),
            steps: None,
            flags: Some(classify_seq(&b, Side::Join)),
            dependency: Some(true),
            sweep_digest: Some(digest("cba", phi, f, true)),
            contraction,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub bound: usize,
    pub fixed: Vec<Elem>,
}

/// `|Fix φ| ≤ |a_0↓|` (meet kinds) or `|a_0↑|` (join kinds).
pub fn feedback_bound(
    phi: &LatMap,
    kind: DepKind,
    rho: &LatMap,
    a: &ESeq,
    cfg: &Config,
) -> Result<FeedbackReport> {
    phi.same_lattice(rho)?;
    let side = kind.side();
    chain_check(kind, rho, a).map_err(|e| Error::WitnessRejected(e.to_string()))?;
    if !classify_seq(a, side).metric {
        return Err(Error::WitnessRejected(format!("sequence is not {}-metric", side.as_str())));
    }
    require_depends(kind, phi, rho, cfg)?;
    let l = phi.lattice();
    let a0 = a.get(0);
    let bound = match side {
        Side::Meet => l.down(a0).len(),
        Side::Join => l.up(a0).len(),
    };
    let fixed = phi.fixed_points().to_vec();
    let mut seen = HashSet::new();
    for &x in &fixed {
        if !seen.insert(side.combine(l, x, a0)) {
            return Err(Error::internal(
                "projection to the feedback seed is not injective on Fix",
                dump(phi, Some(a)),
            ));
        }
    }
    if fixed.len() > bound {
        return Err(Error::internal("feedback bound exceeded", dump(phi, Some(a))));
    }
    Ok(FeedbackReport { bound, fixed })
}

/// `|Fix φ| ≤ |t↑|` for a fixed-point-free set `t` of `f`.
pub fn feedback_bound_cba(phi: &LatMap, f: &LatMap, t: Elem, cfg: &Config) -> Result<FeedbackReport> {
    phi.same_lattice(f)?;
    if !is_fpf_set(f, t)? {
        return Err(Error::NotFpfSet { t });
    }
    require_depends(DepKind::PreMeet, phi, f, cfg)?;
    let l = phi.lattice();
    let fixed = phi.fixed_points().to_vec();
    for (i, &x) in fixed.iter().enumerate() {
        for &y in &fixed[i + 1..] {
            // x ∨ t = y ∨ t would put t above the difference floor of x and y
            let a = difference_floor(l, x, y)?;
            if l.leq(a, t) || l.join(x, t) == l.join(y, t) {
                return Err(Error::internal(
                    format!("fixed points {x} and {y} agree above t"),
                    dump(phi, None),
                ));
            }
        }
    }
    let bound = l.up(t).len();
    if fixed.len() > bound {
        return Err(Error::internal("feedback bound exceeded", dump(phi, None)));
    }
    Ok(FeedbackReport { bound, fixed })
}

/// Certificate from `0 = a_0, ..., a_K = 1` with
/// `x ∧ a_i = y ∧ a_i ⇒ φ(x) ∧ a_{i+1} = φ(y) ∧ a_{i+1}`.
pub fn sequence_certificate(phi: &LatMap, steps: &[Elem], cfg: &Config) -> Result<Certificate> {
    let l = phi.lattice();
    let n = l.size();
    let k = steps.len().checked_sub(1).ok_or_else(|| {
        Error::InvalidInput("step sequence must contain at least bottom".into())
    })?;
    if let Some(&x) = steps.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidInput(format!("step entry {x} is not an element")));
    }
    if steps[0] != l.bottom() {
        return Err(Error::BoundaryViolation { found: steps[0], expected: l.bottom() });
    }
    if steps[k] != l.top() {
        return Err(Error::BoundaryViolation { found: steps[k], expected: l.top() });
    }
    cfg.check_sweep(n, 2)?;
    for i in 0..k {
        let (ai, next) = (steps[i], steps[i + 1]);
        let mut classes: Vec<Option<(Elem, Elem)>> = vec![None; n];
        let mut worst: Option<(Elem, Elem)> = None;
        for x in 0..n {
            let key = l.meet(x, ai);
            let val = l.meet(phi.apply(x), next);
            match classes[key] {
                None => classes[key] = Some((x, val)),
                Some((m, v)) if v != val => {
                    let cand = (m, x);
                    if worst.is_none_or(|w| cand < w) {
                        worst = Some(cand);
                    }
                }
                _ => {}
            }
        }
        if let Some((x, y)) = worst {
            return Err(Error::StepViolation { step: i, x, y });
        }
    }
    let (starts, exhaustive) = start_states(l, cfg);
    let e = phi.apply_n(starts[0], k);
    let level = settle_level(phi, e, Some(k), None)?;
    Ok(Certificate {
        kind: CertKind::Sequence,
        level,
        e,
        verified: Verified { starts: starts.len(), exhaustive },
        evidence: Evidence {
            sequence: None,
            steps: Some(steps.to_vec()),
            flags: None,
            dependency: None,
            sweep_digest: None,
            contraction: None,
        },
    })
}
