//! On-disk JSON shapes and their conversion to and from core types.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use stackelberg_core::game::BimatrixGame;
use stackelberg_core::incentive::{Element, IncentiveInstance, PathGraph, SetFamily};
use stackelberg_core::matching::{
    EdgePermutation, Matching, MatchingMix, Multigraph, PermMatchInstance, ReductionMap, ThreeDmInstance,
};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimatrixJson {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "uL")]
    pub u_l: Vec<Vec<f64>>,
    #[serde(rename = "uF")]
    pub u_f: Vec<Vec<f64>>,
}

impl BimatrixJson {
    pub fn to_game(&self) -> Result<BimatrixGame, CliError> {
        for (name, matrix) in [("uL", &self.u_l), ("uF", &self.u_f)] {
            if matrix.len() != self.n || matrix.iter().any(|row| row.len() != self.m) {
                return Err(CliError::input(format!("{name} must be {} x {}", self.n, self.m)));
            }
        }
        Ok(BimatrixGame::from_rows(&self.u_l, &self.u_f)?)
    }

    pub fn from_game(game: &BimatrixGame) -> Self {
        let rows = |flat: &[f64]| flat.chunks(game.cols()).map(<[f64]>::to_vec).collect();
        Self {
            n: game.rows(),
            m: game.cols(),
            u_l: rows(game.leader_matrix()),
            u_f: rows(game.follower_matrix()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub id: String,
    pub c: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEdgeJson {
    pub id: String,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyJson {
    Explicit {
        sets: Vec<Vec<String>>,
    },
    Path {
        vertices: usize,
        edges: Vec<PathEdgeJson>,
        source: usize,
        sink: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncentiveJson {
    pub elements: Vec<ElementJson>,
    pub family: FamilyJson,
}

impl IncentiveJson {
    pub fn to_instance(&self) -> Result<IncentiveInstance, CliError> {
        let mut index = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.id.as_str(), i).is_some() {
                return Err(CliError::input(format!("element id {:?} appears twice", e.id)));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| CliError::input(format!("unknown element id {id:?}")))
        };
        let elements = self
            .elements
            .iter()
            .map(|e| Element::new(e.id.clone(), e.c, e.big_c))
            .collect();
        let family = match &self.family {
            FamilyJson::Explicit { sets } => SetFamily::Explicit(
                sets.iter()
                    .map(|set| set.iter().map(|id| lookup(id)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<_, _>>()?,
            ),
            FamilyJson::Path {
                vertices,
                edges,
                source,
                sink,
            } => {
                if edges.len() != self.elements.len() {
                    return Err(CliError::input("a path family needs exactly one edge per element"));
                }
                let mut slots: Vec<Option<(usize, usize)>> = vec![None; edges.len()];
                for edge in edges {
                    let slot = &mut slots[lookup(&edge.id)?];
                    if slot.is_some() {
                        return Err(CliError::input(format!("edge id {:?} appears twice", edge.id)));
                    }
                    *slot = Some((edge.u, edge.v));
                }
                SetFamily::Path(PathGraph {
                    num_vertices: *vertices,
                    edges: slots.into_iter().map(|s| s.expect("every slot filled")).collect(),
                    source: *source,
                    sink: *sink,
                })
            }
        };
        Ok(IncentiveInstance::new(elements, family)?)
    }

    pub fn from_instance(inst: &IncentiveInstance) -> Self {
        let ids: Vec<String> = inst.elements().iter().map(|e| e.id.clone()).collect();
        let elements = inst
            .elements()
            .iter()
            .map(|e| ElementJson {
                id: e.id.clone(),
                c: e.follower_reward,
                big_c: e.leader_reward,
            })
            .collect();
        let family = match inst.family() {
            SetFamily::Explicit(sets) => FamilyJson::Explicit {
                sets: sets
                    .iter()
                    .map(|s| s.iter().map(|&i| ids[i].clone()).collect())
                    .collect(),
            },
            SetFamily::Path(g) => FamilyJson::Path {
                vertices: g.num_vertices,
                edges: g
                    .edges
                    .iter()
                    .zip(&ids)
                    .map(|(&(u, v), id)| PathEdgeJson { id: id.clone(), u, v })
                    .collect(),
                source: g.source,
                sink: g.sink,
            },
        };
        Self { elements, family }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmEdgeJson {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermMatchJson {
    pub vertices: usize,
    pub edges: Vec<PmEdgeJson>,
    pub pi: Vec<usize>,
}

impl PermMatchJson {
    /// Edge ids must be exactly `0..edges.len()`, in any order.
    pub fn to_instance(&self) -> Result<PermMatchInstance, CliError> {
        let n = self.edges.len();
        let mut slots: Vec<Option<(usize, usize)>> = vec![None; n];
        for e in &self.edges {
            match slots.get_mut(e.id) {
                Some(slot @ None) => *slot = Some((e.u, e.v)),
                Some(Some(_)) => return Err(CliError::input(format!("edge id {} appears twice", e.id))),
                None => return Err(CliError::input(format!("edge id {} is not in 0..{n}", e.id))),
            }
        }
        if self.pi.len() != n {
            return Err(CliError::input(format!(
                "pi has {} entries, expected {n}",
                self.pi.len()
            )));
        }
        let edges = slots.into_iter().map(|s| s.expect("ids cover 0..n")).collect();
        let graph = Multigraph::new(self.vertices, edges)?;
        Ok(PermMatchInstance::new(graph, EdgePermutation::new(self.pi.clone())?)?)
    }

    pub fn from_instance(inst: &PermMatchInstance) -> Self {
        Self {
            vertices: inst.graph().num_vertices(),
            edges: inst
                .graph()
                .edges()
                .iter()
                .enumerate()
                .map(|(id, &(u, v))| PmEdgeJson { id, u, v })
                .collect(),
            pi: inst.pi().image().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeDmJson {
    #[serde(rename = "nA")]
    pub n_a: usize,
    #[serde(rename = "nB")]
    pub n_b: usize,
    #[serde(rename = "nC")]
    pub n_c: usize,
    pub triples: Vec<[usize; 3]>,
}

impl ThreeDmJson {
    pub fn to_instance(&self) -> Result<ThreeDmInstance, CliError> {
        Ok(ThreeDmInstance::new(
            self.n_a,
            self.n_b,
            self.n_c,
            self.triples.clone(),
        )?)
    }

    pub fn from_instance(tdm: &ThreeDmInstance) -> Self {
        Self {
            n_a: tdm.n_a,
            n_b: tdm.n_b,
            n_c: tdm.n_c,
            triples: tdm.triples.clone(),
        }
    }
}

/// Sidecar written next to a reduced instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ReductionMapJson {
    pub source: ThreeDmJson,
    /// First vertex of each block: A', A'', B', C'.
    pub a_prime: usize,
    pub a_second: usize,
    pub b_prime: usize,
    pub c_prime: usize,
    /// Reduced edge ids `[(a', b'), (a'', c')]` of each triple.
    pub edges_per_triple: Vec<[usize; 2]>,
}

impl ReductionMapJson {
    pub fn from_map(map: &ReductionMap) -> Self {
        Self {
            source: ThreeDmJson::from_instance(map.source()),
            a_prime: map.a_prime,
            a_second: map.a_second,
            b_prime: map.b_prime,
            c_prime: map.c_prime,
            edges_per_triple: map.per_triple.iter().map(|&(p, q)| [p, q]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedMatchingJson {
    pub edges: Vec<usize>,
    pub p: f64,
}

/// Leader mixed strategy over matchings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingMixJson {
    pub support: Vec<WeightedMatchingJson>,
}

impl MatchingMixJson {
    pub fn to_mix(&self, inst: &PermMatchInstance) -> Result<MatchingMix, CliError> {
        let support = self
            .support
            .iter()
            .map(|w| Ok((Matching::new(inst.graph(), w.edges.clone())?, w.p)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(MatchingMix::new(support)?)
    }

    pub fn from_mix(mix: &MatchingMix) -> Self {
        Self {
            support: mix
                .support()
                .iter()
                .map(|(m, p)| WeightedMatchingJson {
                    edges: m.edges().to_vec(),
                    p: *p,
                })
                .collect(),
        }
    }
}
