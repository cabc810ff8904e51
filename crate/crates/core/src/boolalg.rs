//! Boolean-algebra specializations: duals, transposes, symmetric graphs and
//! the precarious-graph analysis.

use serde::Serialize;

use crate::config::Config;
use crate::dependency::{depends, DepKind};
use crate::error::{Error, Result};
use crate::latmap::LatMap;
use crate::lattice::{Elem, Lattice};

fn require_boolean(l: &Lattice) -> Result<()> {
    if l.flags().boolean {
        Ok(())
    } else {
        Err(Error::NotBoolean)
    }
}

fn neg(l: &Lattice, x: Elem) -> Elem {
    l.complement(x).expect("boolean lattice")
}

/// `ψ*(x) = ¬ψ(¬x)`.
pub fn dual_map(psi: &LatMap) -> Result<LatMap> {
    let l = psi.lattice();
    require_boolean(l)?;
    Ok(LatMap::from_fn(l, |x| neg(l, psi.apply(neg(l, x)))))
}

/// `f^⊤ = (f⁻)*`.
pub fn transpose(f: &LatMap) -> Result<LatMap> {
    require_boolean(f.lattice())?;
    f.require_graph()?;
    dual_map(&f.residual())
}

/// `ψ^⊥ = (ψ⁺)*`.
pub fn cotranspose(psi: &LatMap) -> Result<LatMap> {
    dual_map(&psi.residuated())
}

pub fn is_symmetric(f: &LatMap) -> Result<bool> {
    Ok(transpose(f)? == *f)
}

/// `Σf = f f^⊤`.
pub fn sigma(f: &LatMap) -> Result<LatMap> {
    f.compose(&transpose(f)?)
}

/// `a = ⋀{s : x ∨ s = y ∨ s}`, checked to generate that set as `a↑`.
pub fn difference_floor(l: &Lattice, x: Elem, y: Elem) -> Result<Elem> {
    require_boolean(l)?;
    let agree: Vec<Elem> = l.elems().filter(|&s| l.join(x, s) == l.join(y, s)).collect();
    let a = l.meet_all(agree.iter().copied());
    if l.up(a).to_vec() != agree {
        return Err(Error::internal(
            "agreement set is not a principal filter",
            format!("x={x} y={y} lattice={:?}", l.descriptor()),
        ));
    }
    Ok(a)
}

/// Whether `f^⊤` restricted to `t↓` is fixed-point-free. Computed through the
/// induced subgraph and through `u ≤ t, f^⊤(u) ≥ u ⇒ u = 0`; the routes must
/// agree.
pub fn is_fpf_set(f: &LatMap, t: Elem) -> Result<bool> {
    let ft = transpose(f)?;
    let l = f.lattice();
    let via_subgraph = ft.induced_subgraph(t)?.map.is_fixed_point_free()?;
    let via_lemma = l
        .down(t)
        .iter()
        .all(|u| u == l.bottom() || !l.leq(u, ft.apply(u)));
    if via_subgraph != via_lemma {
        return Err(Error::internal(
            "fixed-point-free set routes disagree",
            format!("f={:?} t={t}", f.table()),
        ));
    }
    Ok(via_subgraph)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourWay {
    pub pre_meet: bool,
    pub pre_join: bool,
    pub post_meet: bool,
    pub post_join: bool,
}

/// Pre-meet on `f`, pre-join on `f*`, post-meet on `f⁻`, post-join on `f^⊤`.
pub fn four_way_equivalence(f: &LatMap, phi: &LatMap, cfg: &Config) -> Result<FourWay> {
    let ft = transpose(f)?;
    let r = FourWay {
        pre_meet: depends(DepKind::PreMeet, phi, f, cfg)?,
        pre_join: depends(DepKind::PreJoin, phi, &dual_map(f)?, cfg)?,
        post_meet: depends(DepKind::PostMeet, phi, &f.residual(), cfg)?,
        post_join: depends(DepKind::PostJoin, phi, &ft, cfg)?,
    };
    if !(r.pre_meet == r.pre_join && r.pre_join == r.post_meet && r.post_meet == r.post_join) {
        return Err(Error::internal(
            format!("four dependency verdicts disagree: {r:?}"),
            format!("f={:?} phi={:?} lattice={:?}", f.table(), phi.table(), f.lattice().descriptor()),
        ));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precarious {
    /// `f^⊤` is fixed-point-free.
    pub fpf: bool,
    /// `f^⊤` itself when it is not, a dependent map with several fixed points.
    pub hypodox: Option<LatMap>,
}

pub fn precarious_analysis(f: &LatMap, cfg: &Config) -> Result<Precarious> {
    let ft = transpose(f)?;
    if ft.is_fixed_point_free()? {
        return Ok(Precarious { fpf: true, hypodox: None });
    }
    let fixed = ft.fixed_points().len();
    if fixed < 2 || !depends(DepKind::PreMeet, &ft, f, cfg)? {
        return Err(Error::internal(
            "transpose is not a verified hypodox",
            format!("f={:?} fixed={fixed}", f.table()),
        ));
    }
    Ok(Precarious { fpf: false, hypodox: Some(ft) })
}
