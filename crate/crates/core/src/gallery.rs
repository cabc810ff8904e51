//! Named instances.

use crate::autonet::Network;
use crate::config::Config;
use crate::digraph::{self, Digraph};
use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};

#[derive(Debug, Clone)]
pub enum Item {
    Lattice(Lattice),
    Digraph(Digraph),
    Network(Network),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Params {
    pub n: Option<usize>,
    pub q: Option<usize>,
    pub depth: Option<usize>,
}

pub const NAMES: &[&str] = &[
    "liar",
    "hypodox",
    "plus_network",
    "two_cycle",
    "backwards_ray",
    "ray",
    "stairway_heaven",
    "stairway_hell",
    "m3",
    "n5",
];

/// `φ = (x_2, ¬x_1)`: no fixed point.
pub fn liar(cfg: &Config) -> Network {
    Network::from_fn(&[2, 2], cfg, |x| vec![x[1], 1 - x[0]]).expect("two bits")
}

/// `φ = (x_2, x_1)`: fixed points 00 and 11.
pub fn hypodox(cfg: &Config) -> Network {
    Network::from_fn(&[2, 2], cfg, |x| vec![x[1], x[0]]).expect("two bits")
}

/// `φ(x_1, x_2) = (x_1⁺, x_2⁺)` on the `q × q` grid, with `x⁺ = min(x+1, q-1)`.
pub fn plus_network(q: usize, cfg: &Config) -> Result<Network> {
    if q < 2 {
        return Err(Error::InvalidInput("plus_network needs q ≥ 2".into()));
    }
    Network::from_fn(&[q, q], cfg, |x| x.iter().map(|&c| (c + 1).min(q - 1)).collect())
}

pub fn two_cycle() -> Digraph {
    Digraph::new(2, [(0, 1), (1, 0)]).expect("two vertices")
}

pub fn gallery(name: &str, p: Params, cfg: &Config) -> Result<Item> {
    Ok(match name {
        "liar" => Item::Network(liar(cfg)),
        "hypodox" => Item::Network(hypodox(cfg)),
        "plus_network" => Item::Network(plus_network(p.q.unwrap_or(4), cfg)?),
        "two_cycle" => Item::Digraph(two_cycle()),
        "backwards_ray" => Item::Digraph(digraph::backwards_ray(p.n.unwrap_or(4))),
        "ray" => Item::Digraph(digraph::ray(p.n.unwrap_or(4))),
        "stairway_heaven" => Item::Digraph(digraph::stairway_heaven(p.depth.unwrap_or(3))),
        "stairway_hell" => Item::Digraph(digraph::stairway_hell(p.depth.unwrap_or(3))),
        "m3" => Item::Lattice(lattice::m3()),
        "n5" => Item::Lattice(lattice::n5()),
        _ => return Err(Error::UnknownName(name.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            gallery(name, Params::default(), &Config::default()).unwrap();
        }
        assert!(matches!(
            gallery("yablo", Params::default(), &Config::default()),
            Err(Error::UnknownName(_))
        ));
    }
}
