//! JSON documents. Every emitted object carries `"version": 1`; on input the
//! field may be omitted but any other value is rejected.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::autonet::Network;
use crate::config::{Config, FORMAT_VERSION};
use crate::digraph::Digraph;
use crate::dynamics::{ESeq, SeqFlags};
use crate::error::{Error, Result};
use crate::latmap::LatMap;
use crate::lattice::{Descriptor, Elem, Lattice};
use crate::robert::{CertKind, Certificate, Verified};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub lattice: Descriptor,
    pub table: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqDoc {
    pub lattice: Descriptor,
    pub prefix: Vec<Elem>,
    /// Defaults to the last prefix index.
    #[serde(default)]
    pub stable_from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphDoc {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub alphabets: Vec<usize>,
    pub rules: Vec<Vec<Elem>>,
    /// Coordinate lattices when they are not the chains `0 < .. < q-1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattices: Option<Vec<Descriptor>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_from: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<SeqFlags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependency: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub kind: CertKind,
    pub level: String,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub e: Elem,
    /// Coordinates of `e` on a product lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_coords: Option<Vec<usize>>,
    pub verified: Verified,
    pub witness: WitnessDoc,
}

/// Parses a document, checking and removing the version field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    from_value(serde_json::from_str(text)?)
}

pub fn from_value<T: DeserializeOwned>(mut v: Value) -> Result<T> {
    if let Value::Object(m) = &mut v {
        if let Some(ver) = m.remove("version") {
            if ver.as_u64() != Some(FORMAT_VERSION as u64) {
                return Err(Error::InvalidInput(format!(
                    "field `version`: expected {FORMAT_VERSION}, found {ver}"
                )));
            }
        }
    }
    Ok(serde_json::from_value(v)?)
}

/// Serializes with the version field added to top-level objects.
pub fn to_value<T: Serialize>(doc: &T) -> Result<Value> {
    let mut v = serde_json::to_value(doc)?;
    if let Value::Object(m) = &mut v {
        m.insert("version".into(), Value::from(FORMAT_VERSION));
    }
    Ok(v)
}

pub fn emit<T: Serialize>(doc: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_value(doc)?)?)
}

// ----- conversions -----------------------------------------------------------

pub fn lattice_from_doc(d: &Descriptor, cfg: &Config) -> Result<Arc<Lattice>> {
    Ok(Arc::new(Lattice::from_descriptor(d, cfg.max_lattice_size)?))
}

pub fn map_to_doc(f: &LatMap) -> MapDoc {
    MapDoc { lattice: f.lattice().descriptor(), table: f.table().to_vec() }
}

pub fn map_from_doc(doc: &MapDoc, cfg: &Config) -> Result<LatMap> {
    LatMap::new(&lattice_from_doc(&doc.lattice, cfg)?, doc.table.clone())
}

/// Same-lattice map, reusing `lat` when the descriptor matches.
pub fn map_on(doc: &MapDoc, lat: &Arc<Lattice>, cfg: &Config) -> Result<LatMap> {
    if doc.lattice == lat.descriptor() {
        LatMap::new(lat, doc.table.clone())
    } else {
        let f = map_from_doc(doc, cfg)?;
        if f.lattice() != lat {
            return Err(Error::LatticeMismatch);
        }
        LatMap::new(lat, doc.table.clone())
    }
}

pub fn seq_to_doc(a: &ESeq) -> SeqDoc {
    SeqDoc {
        lattice: a.lattice().descriptor(),
        prefix: a.prefix().to_vec(),
        stable_from: Some(a.stable_from()),
    }
}

pub fn seq_on(doc: &SeqDoc, lat: &Arc<Lattice>, cfg: &Config) -> Result<ESeq> {
    if doc.lattice != lat.descriptor() && *lattice_from_doc(&doc.lattice, cfg)? != **lat {
        return Err(Error::LatticeMismatch);
    }
    match doc.stable_from {
        Some(k) => ESeq::new(lat, doc.prefix.clone(), k),
        None => ESeq::from_prefix(lat, doc.prefix.clone()),
    }
}

pub fn digraph_to_doc(d: &Digraph) -> DigraphDoc {
    DigraphDoc { n: d.n(), arcs: d.arcs().iter().copied().collect() }
}

pub fn digraph_from_doc(doc: &DigraphDoc) -> Result<Digraph> {
    Digraph::new(doc.n, doc.arcs.iter().copied())
}

pub fn network_to_doc(net: &Network) -> NetworkDoc {
    NetworkDoc {
        alphabets: net.alphabet_sizes(),
        rules: net.rules().to_vec(),
        lattices: (!net.has_chain_alphabets())
            .then(|| net.coords().iter().map(|c| c.descriptor()).collect()),
    }
}

pub fn network_from_doc(doc: &NetworkDoc, cfg: &Config) -> Result<Network> {
    match &doc.lattices {
        None => Network::from_alphabets(&doc.alphabets, doc.rules.clone(), cfg),
        Some(ds) => {
            let coords = ds
                .iter()
                .map(|d| Lattice::from_descriptor(d, cfg.max_lattice_size))
                .collect::<Result<Vec<_>>>()?;
            if coords.iter().map(|c| c.size()).ne(doc.alphabets.iter().copied()) {
                return Err(Error::InvalidInput(
                    "field `alphabets` disagrees with the sizes in `lattices`".into(),
                ));
            }
            Network::new(coords, doc.rules.clone(), cfg)
        }
    }
}

pub fn certificate_to_doc(c: &Certificate, lat: &Lattice) -> CertificateDoc {
    let ev = &c.evidence;
    CertificateDoc {
        kind: c.kind,
        level: c.level.name().to_string(),
        k: c.k(),
        e: c.e,
        e_coords: lat.coords(c.e),
        verified: c.verified,
        witness: WitnessDoc {
            sequence: ev.sequence.as_ref().map(|a| a.prefix().to_vec()),
            stable_from: ev.sequence.as_ref().map(|a| a.stable_from()),
            steps: ev.steps.clone(),
            flags: ev.flags,
            dependency: ev.dependency,
            sweep_digest: ev.sweep_digest.clone(),
            contraction: ev.contraction,
        },
    }
}

/// A self-map given either as a map document or as a network document.
pub fn any_map(v: Value, cfg: &Config) -> Result<LatMap> {
    let is_network = v.as_object().is_some_and(|m| m.contains_key("alphabets"));
    if is_network {
        Ok(network_from_doc(&from_value(v)?, cfg)?.to_map())
    } else {
        map_from_doc(&from_value(v)?, cfg)
    }
}
