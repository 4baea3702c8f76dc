//! Weighted dual graphs of boundary divisors and their blow-up calculus.
//!
//! Vertices are boundary curves with their self-intersection as weight;
//! edges are transversal intersection points. Only simple graphs occur.
//! Paths (zigzags) get their own view [`PathGraph`], which remembers an
//! orientation so that position-based composite moves are well defined.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("no vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge {0}-{1}")]
    NoSuchEdge(VertexId, VertexId),
    #[error("blow-down of {vertex}: weight is {weight}, not -1")]
    NotMinusOne { vertex: VertexId, weight: i64 },
    #[error("blow-down of {vertex}: degree {degree} exceeds 2")]
    DegreeTooHigh { vertex: VertexId, degree: usize },
    #[error("blow-down would join {0} and {1} twice")]
    MultiEdge(VertexId, VertexId),
    #[error("graph is not a path")]
    NotAPath,
    #[error("position {position} out of range for a zigzag of length {len}")]
    Position { position: usize, len: usize },
    #[error("position {position} has weight {weight}, expected 0")]
    NotZero { position: usize, weight: i64 },
    #[error("position {position} is not an interior vertex")]
    NotInterior { position: usize },
    #[error("position {position} is not an end of a path with at least two vertices")]
    NotEnd { position: usize },
    #[error("{0}")]
    Input(String),
}

/// A simple graph with integer vertex weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    weights: BTreeMap<VertexId, i64>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, weight: i64) {
        self.weights.insert(id, weight);
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), MoveError> {
        for v in [a, b] {
            if !self.weights.contains_key(&v) {
                return Err(MoveError::UnknownVertex(v));
            }
        }
        if a == b {
            return Err(MoveError::Input(format!("loop at {a}")));
        }
        if !self.edges.insert(key(a, b)) {
            return Err(MoveError::MultiEdge(a, b));
        }
        Ok(())
    }

    pub fn weight(&self, v: VertexId) -> Option<i64> {
        self.weights.get(&v).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, i64)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.contains(&key(a, b))
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    fn fresh(&self) -> VertexId {
        self.weights.keys().next_back().map_or(0, |v| v + 1)
    }

    fn bump(&mut self, v: VertexId, delta: i64) {
        *self.weights.get_mut(&v).expect("vertex present") += delta;
    }

    fn require(&self, v: VertexId) -> Result<i64, MoveError> {
        self.weight(v).ok_or(MoveError::UnknownVertex(v))
    }

    /// Blow-up of a general point of `v`: `v` drops by one and gains a new
    /// `(-1)`-leaf. Returns the new vertex.
    pub fn outer_blow_up(&self, v: VertexId) -> Result<(Self, VertexId), MoveError> {
        self.require(v)?;
        let mut g = self.clone();
        let e = g.fresh();
        g.bump(v, -1);
        g.add_vertex(e, -1);
        g.edges.insert(key(v, e));
        Ok((g, e))
    }

    /// Blow-up of the intersection point of `a` and `b`.
    pub fn inner_blow_up(&self, a: VertexId, b: VertexId) -> Result<(Self, VertexId), MoveError> {
        if !self.has_edge(a, b) {
            return Err(MoveError::NoSuchEdge(a, b));
        }
        let mut g = self.clone();
        let e = g.fresh();
        g.edges.remove(&key(a, b));
        g.bump(a, -1);
        g.bump(b, -1);
        g.add_vertex(e, -1);
        g.edges.insert(key(a, e));
        g.edges.insert(key(e, b));
        Ok((g, e))
    }

    /// Contracts the `(-1)`-curve `v` of degree at most 2.
    pub fn blow_down(&self, v: VertexId) -> Result<Self, MoveError> {
        let w = self.require(v)?;
        if w != -1 {
            return Err(MoveError::NotMinusOne { vertex: v, weight: w });
        }
        let nbrs = self.neighbors(v);
        if nbrs.len() > 2 {
            return Err(MoveError::DegreeTooHigh {
                vertex: v,
                degree: nbrs.len(),
            });
        }
        if let [a, b] = nbrs[..] {
            if self.has_edge(a, b) {
                return Err(MoveError::MultiEdge(a, b));
            }
        }
        let mut g = self.clone();
        g.weights.remove(&v);
        g.edges.retain(|&(a, b)| a != v && b != v);
        for &n in &nbrs {
            g.bump(n, 1);
        }
        if let [a, b] = nbrs[..] {
            g.edges.insert(key(a, b));
        }
        Ok(g)
    }

    /// Applies an elementary step; composites go through the path view,
    /// oriented from the end with the lower id.
    pub fn apply(&self, step: &ModStep) -> Result<Self, MoveError> {
        match *step {
            ModStep::OuterBlowUp { vertex } => Ok(self.outer_blow_up(vertex)?.0),
            ModStep::InnerBlowUp { edge: (a, b) } => Ok(self.inner_blow_up(a, b)?.0),
            ModStep::BlowDown { vertex } => self.blow_down(vertex),
            _ => Ok(PathGraph::from_graph(self)?.apply(step)?.graph),
        }
    }

    /// Vertex ids along the path, starting at the end with the lower id.
    pub fn path_order(&self) -> Option<Vec<VertexId>> {
        let ends: Vec<VertexId> = self
            .weights
            .keys()
            .copied()
            .filter(|&v| self.degree(v) <= 1)
            .collect();
        if self.is_empty() {
            return Some(Vec::new());
        }
        if self.edges.len() + 1 != self.len() || ends.is_empty() {
            return None;
        }
        let order = self.walk_from(ends[0]);
        (order.len() == self.len()).then_some(order)
    }

    fn walk_from(&self, start: VertexId) -> Vec<VertexId> {
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = self
                .neighbors(cur)
                .into_iter()
                .find(|&n| Some(n) != prev && !order.contains(&n));
            match next {
                Some(n) if self.degree(n) <= 2 => {
                    order.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                _ => return order,
            }
        }
    }

    pub fn is_path(&self) -> bool {
        self.path_order().is_some()
    }

    /// No `(-1)`-vertex of degree at most 2.
    pub fn is_minimal(&self) -> bool {
        !self
            .vertices()
            .any(|(v, w)| w == -1 && self.degree(v) <= 2)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self
                .vertices()
                .map(|(id, weight)| VertexJson { id, weight })
                .collect(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, MoveError> {
        let mut g = WeightedGraph::new();
        for v in &json.vertices {
            if g.weights.insert(v.id, v.weight).is_some() {
                return Err(MoveError::Input(format!("duplicate vertex {}", v.id)));
            }
        }
        for &[a, b] in &json.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub weight: i64,
}

/// `{vertices: [{id, weight}], edges: [[id, id]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[VertexId; 2]>,
}

/// The weight sequence of a linear graph, written `[[w0,...,wk]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zigzag(pub Vec<i64>);

impl Zigzag {
    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Zigzag {
        Zigzag(self.0.iter().rev().copied().collect())
    }

    /// `[[0,0]]`, `[[0,0,0]]` or `[[0,0,w2,...,wk]]` with every `wi <= -2`.
    pub fn is_standard(&self) -> bool {
        matches!(self.semistandard_weight(), Some(0))
    }

    /// `Some(w1)` for `[[0,w1]]`, `[[0,w1,0]]` or `[[0,w1,w2,...,wk]]` with
    /// every `wi <= -2` for `i >= 2`.
    pub fn semistandard_weight(&self) -> Option<i64> {
        match self.0[..] {
            [0, w1] | [0, w1, 0] => Some(w1),
            [0, w1, ref rest @ ..] if !rest.is_empty() && rest.iter().all(|&w| w <= -2) => Some(w1),
            _ => None,
        }
    }
}

impl fmt::Display for Zigzag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[[{}]]", body.join(","))
    }
}

impl FromStr for Zigzag {
    type Err = MoveError;

    /// Accepts `[[0,0,-3]]`, with optional spaces and Unicode minus signs.
    fn from_str(text: &str) -> Result<Self, MoveError> {
        let bad = || MoveError::Input(format!("expected a zigzag like [[0,0,-3]], got `{text}`"));
        let t = text.trim().replace('\u{2212}', "-");
        let inner = t
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Zigzag(Vec::new()));
        }
        inner
            .split(',')
            .map(|w| w.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()
            .map(Zigzag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `(a, 0, b) -> (a+1, 0, b-1)`
    Left,
    /// `(a, 0, b) -> (a-1, 0, b+1)`
    Right,
}

/// A modification of a boundary graph. Elementary steps refer to vertex
/// ids; composites refer to positions along an oriented path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModStep {
    OuterBlowUp {
        vertex: VertexId,
    },
    InnerBlowUp {
        edge: (VertexId, VertexId),
    },
    BlowDown {
        vertex: VertexId,
    },
    /// At the end `position` (weight 0): `[[0,w1,...]] -> [[0,w1+1,...]]`,
    /// or `w1-1` when `inverse`.
    MakeZero {
        position: usize,
        #[serde(default)]
        inverse: bool,
    },
    MoveZero {
        position: usize,
        direction: Direction,
    },
    Reversion,
}

impl ModStep {
    pub fn is_elementary(&self) -> bool {
        matches!(
            self,
            ModStep::OuterBlowUp { .. } | ModStep::InnerBlowUp { .. } | ModStep::BlowDown { .. }
        )
    }

    /// Change in the number of vertices.
    pub fn vertex_delta(&self) -> i64 {
        match self {
            ModStep::OuterBlowUp { .. } | ModStep::InnerBlowUp { .. } => 1,
            ModStep::BlowDown { .. } => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for ModStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModStep::OuterBlowUp { vertex } => write!(f, "outer@{vertex}"),
            ModStep::InnerBlowUp { edge: (a, b) } => write!(f, "inner@{a}-{b}"),
            ModStep::BlowDown { vertex } => write!(f, "blowdown@{vertex}"),
            ModStep::MakeZero { position, inverse } => {
                write!(f, "makezero@{position}{}", if *inverse { ":inv" } else { "" })
            }
            ModStep::MoveZero {
                position,
                direction,
            } => write!(
                f,
                "movezero@{position}:{}",
                match direction {
                    Direction::Left => "left",
                    Direction::Right => "right",
                }
            ),
            ModStep::Reversion => write!(f, "revert"),
        }
    }
}

impl FromStr for ModStep {
    type Err = MoveError;

    /// Parses the compact forms `outer@3`, `inner@1-2`, `blowdown@4`,
    /// `makezero@0`, `makezero@0:inv`, `movezero@1:left` and `revert`.
    fn from_str(text: &str) -> Result<Self, MoveError> {
        let bad = || MoveError::Input(format!("cannot parse step `{text}`"));
        let t = text.trim();
        if t == "revert" || t == "reversion" {
            return Ok(ModStep::Reversion);
        }
        let (name, arg) = t.split_once('@').ok_or_else(bad)?;
        let (arg, modifier) = match arg.split_once(':') {
            Some((a, m)) => (a, Some(m)),
            None => (arg, None),
        };
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
        let step = match (name.trim(), modifier) {
            ("outer", None) => ModStep::OuterBlowUp { vertex: num(arg)? },
            ("blowdown", None) => ModStep::BlowDown { vertex: num(arg)? },
            ("inner", None) => {
                let (a, b) = arg.split_once('-').ok_or_else(bad)?;
                ModStep::InnerBlowUp {
                    edge: (num(a)?, num(b)?),
                }
            }
            ("makezero", m @ (None | Some("inv"))) => ModStep::MakeZero {
                position: num(arg)? as usize,
                inverse: m.is_some(),
            },
            ("movezero", Some(d)) => ModStep::MoveZero {
                position: num(arg)? as usize,
                direction: match d {
                    "left" => Direction::Left,
                    "right" => Direction::Right,
                    _ => return Err(bad()),
                },
            },
            _ => return Err(bad()),
        };
        Ok(step)
    }
}

/// Parses a comma-separated list of compact steps.
pub fn parse_steps(text: &str) -> Result<Vec<ModStep>, MoveError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// A linear graph with a chosen orientation (`order[0]` is the left end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathGraph {
    pub graph: WeightedGraph,
    pub order: Vec<VertexId>,
}

impl PathGraph {
    /// Vertices get ids `0..k` left to right.
    pub fn from_zigzag(z: &Zigzag) -> Self {
        let mut graph = WeightedGraph::new();
        for (i, &w) in z.0.iter().enumerate() {
            graph.add_vertex(i as VertexId, w);
            if i > 0 {
                graph.edges.insert((i as VertexId - 1, i as VertexId));
            }
        }
        PathGraph {
            order: (0..z.len() as VertexId).collect(),
            graph,
        }
    }

    pub fn from_graph(g: &WeightedGraph) -> Result<Self, MoveError> {
        let order = g.path_order().ok_or(MoveError::NotAPath)?;
        Ok(PathGraph {
            graph: g.clone(),
            order,
        })
    }

    pub fn zigzag(&self) -> Zigzag {
        Zigzag(
            self.order
                .iter()
                .map(|v| self.graph.weight(*v).expect("vertex present"))
                .collect(),
        )
    }

    fn id_at(&self, position: usize) -> Result<VertexId, MoveError> {
        self.order.get(position).copied().ok_or(MoveError::Position {
            position,
            len: self.order.len(),
        })
    }

    /// Orientation of `g` that keeps the surviving vertices of `self` in
    /// their old order; a lone survivor stays left of new vertices.
    fn reorient(&self, g: WeightedGraph) -> Result<PathGraph, MoveError> {
        let order = g.path_order().ok_or(MoveError::NotAPath)?;
        let survivors = |o: &[VertexId]| -> Vec<VertexId> {
            o.iter().copied().filter(|v| self.order.contains(v)).collect()
        };
        let old: Vec<VertexId> = self
            .order
            .iter()
            .copied()
            .filter(|v| g.weights.contains_key(v))
            .collect();
        let forward = survivors(&order);
        let order = if forward == old && (old.len() != 1 || order.first() == old.first()) {
            order
        } else {
            order.into_iter().rev().collect()
        };
        Ok(PathGraph { graph: g, order })
    }

    /// Elementary realization of a composite step on this path.
    pub fn expand(&self, step: &ModStep) -> Result<Vec<ModStep>, MoveError> {
        let z = self.zigzag();
        let n = z.len();
        match *step {
            ModStep::OuterBlowUp { .. } | ModStep::InnerBlowUp { .. } | ModStep::BlowDown { .. } => {
                Ok(vec![step.clone()])
            }
            ModStep::MakeZero { position, inverse } => {
                let c0 = self.id_at(position)?;
                if n < 2 || (position != 0 && position != n - 1) {
                    return Err(MoveError::NotEnd { position });
                }
                if z.0[position] != 0 {
                    return Err(MoveError::NotZero {
                        position,
                        weight: z.0[position],
                    });
                }
                let c1 = self.order[if position == 0 { 1 } else { n - 2 }];
                let first = if inverse {
                    ModStep::InnerBlowUp { edge: (c0, c1) }
                } else {
                    ModStep::OuterBlowUp { vertex: c0 }
                };
                Ok(vec![first, ModStep::BlowDown { vertex: c0 }])
            }
            ModStep::MoveZero {
                position,
                direction,
            } => {
                let ci = self.id_at(position)?;
                if position == 0 || position + 1 >= n {
                    return Err(MoveError::NotInterior { position });
                }
                if z.0[position] != 0 {
                    return Err(MoveError::NotZero {
                        position,
                        weight: z.0[position],
                    });
                }
                let other = match direction {
                    Direction::Left => self.order[position + 1],
                    Direction::Right => self.order[position - 1],
                };
                Ok(vec![
                    ModStep::InnerBlowUp { edge: (ci, other) },
                    ModStep::BlowDown { vertex: ci },
                ])
            }
            ModStep::Reversion => {
                let (_, moves) = reversion(&z)?;
                let mut cur = self.clone();
                let mut out = Vec::new();
                for m in &moves {
                    for e in cur.expand(m)? {
                        cur = cur.apply_elementary(&e)?;
                        out.push(e);
                    }
                }
                Ok(out)
            }
        }
    }

    fn apply_elementary(&self, step: &ModStep) -> Result<PathGraph, MoveError> {
        self.reorient(self.graph.apply(step)?)
    }

    /// Applies any step; composites run through their elementary expansion.
    pub fn apply(&self, step: &ModStep) -> Result<PathGraph, MoveError> {
        let mut cur = self.clone();
        for e in self.expand(step)? {
            cur = cur.apply_elementary(&e)?;
        }
        Ok(cur)
    }

    /// Applies steps one by one, recording each transition.
    pub fn replay(&self, steps: &[ModStep]) -> Result<(PathGraph, Vec<TranscriptEntry>), MoveError> {
        let mut cur = self.clone();
        let mut log = Vec::new();
        for s in steps {
            let next = cur.apply(s)?;
            log.push(TranscriptEntry {
                step: s.clone(),
                before: Snapshot::Zigzag(cur.zigzag().to_string()),
                after: Snapshot::Zigzag(next.zigzag().to_string()),
            });
            cur = next;
        }
        Ok((cur, log))
    }
}

/// Closed-form effect of a composite step on weights alone.
pub fn apply_to_weights(z: &Zigzag, step: &ModStep) -> Result<Zigzag, MoveError> {
    let mut w = z.0.clone();
    let n = w.len();
    match *step {
        ModStep::MakeZero { position, inverse } => {
            if n < 2 || (position != 0 && position != n - 1) {
                return Err(MoveError::NotEnd { position });
            }
            if w[position] != 0 {
                return Err(MoveError::NotZero {
                    position,
                    weight: w[position],
                });
            }
            let nb = if position == 0 { 1 } else { n - 2 };
            w[nb] += if inverse { -1 } else { 1 };
        }
        ModStep::MoveZero {
            position,
            direction,
        } => {
            if position == 0 || position + 1 >= n {
                return Err(MoveError::NotInterior { position });
            }
            if w[position] != 0 {
                return Err(MoveError::NotZero {
                    position,
                    weight: w[position],
                });
            }
            let d = if direction == Direction::Left { 1 } else { -1 };
            w[position - 1] += d;
            w[position + 1] -= d;
        }
        ModStep::Reversion => return Ok(reversion(z)?.0),
        _ => {
            return Ok(PathGraph::from_zigzag(z).apply(step)?.zigzag());
        }
    }
    Ok(Zigzag(w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Snapshot {
    Zigzag(String),
    Graph(GraphJson),
}

/// One line of a JSON transcript: `{step, before, after}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub step: ModStep,
    pub before: Snapshot,
    pub after: Snapshot,
}

/// Turns an `w1`-semistandard zigzag into the standard one with `|w1|`
/// `MakeZero` steps at the left end.
pub fn make_standard_from_semistandard(z: &Zigzag) -> Result<(Zigzag, Vec<ModStep>), MoveError> {
    let w1 = z
        .semistandard_weight()
        .ok_or_else(|| MoveError::Input(format!("{z} is not semistandard")))?;
    let step = ModStep::MakeZero {
        position: 0,
        inverse: w1 > 0,
    };
    let steps = vec![step; w1.unsigned_abs() as usize];
    let mut out = z.clone();
    for s in &steps {
        out = apply_to_weights(&out, s)?;
    }
    Ok((out, steps))
}

/// `[[0,0,w2,...,wk]] -> [[w2,...,wk,0,0]]` through `MoveZero` steps: the
/// pair of zeros passes each `wj` in `|wj|` moves to the right.
pub fn reversion(z: &Zigzag) -> Result<(Zigzag, Vec<ModStep>), MoveError> {
    if !z.is_standard() {
        return Err(MoveError::Input(format!("{z} is not standard")));
    }
    let mut steps = Vec::new();
    let mut cur = z.clone();
    for j in 2..z.len() {
        for _ in 0..z.0[j].unsigned_abs() {
            let s = ModStep::MoveZero {
                position: j - 1,
                direction: Direction::Right,
            };
            cur = apply_to_weights(&cur, &s)?;
            steps.push(s);
        }
    }
    Ok((cur, steps))
}

/// Blows down `(-1)`-vertices of degree at most 2, lowest id first, until
/// the graph is minimal.
pub fn contract_to_minimal(g: &WeightedGraph) -> (WeightedGraph, Vec<TranscriptEntry>) {
    let mut cur = g.clone();
    let mut log = Vec::new();
    loop {
        let next = cur
            .vertices()
            .filter(|&(_, w)| w == -1)
            .find_map(|(v, _)| cur.blow_down(v).ok().map(|g| (v, g)));
        match next {
            Some((v, g)) => {
                log.push(TranscriptEntry {
                    step: ModStep::BlowDown { vertex: v },
                    before: Snapshot::Graph(cur.to_json()),
                    after: Snapshot::Graph(g.to_json()),
                });
                cur = g;
            }
            None => return (cur, log),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "weight", rename_all = "snake_case")]
pub enum ZigzagClass {
    DanielewskiBoundary(i64),
    Standard,
    Semistandard(i64),
    Other,
}

impl fmt::Display for ZigzagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZigzagClass::DanielewskiBoundary(k) => write!(f, "Danielewski boundary (k = {k})"),
            ZigzagClass::Standard => write!(f, "standard"),
            ZigzagClass::Semistandard(w) => write!(f, "{w}-semistandard"),
            ZigzagClass::Other => write!(f, "other"),
        }
    }
}

/// Reads `z` in both directions. Danielewski boundaries `[[0,0,-k]]`
/// (k >= 2) win over the standard and semistandard labels they also carry.
pub fn classify_zigzag(z: &Zigzag) -> ZigzagClass {
    let both = [z.clone(), z.reversed()];
    for r in &both {
        if let [0, 0, w] = r.0[..] {
            if w <= -2 {
                return ZigzagClass::DanielewskiBoundary(-w);
            }
        }
    }
    if both.iter().any(Zigzag::is_standard) {
        return ZigzagClass::Standard;
    }
    both.iter()
        .find_map(Zigzag::semistandard_weight)
        .map_or(ZigzagClass::Other, ZigzagClass::Semistandard)
}

/// Reaches a standard zigzag from `[[w0,0,w1,...]]` by pushing weight past
/// the zero, then from a semistandard one by `MakeZero` steps. The mirrored
/// situation at the right end is handled the same way. Steps refer to `z`
/// as given; the returned zigzag is the result read in that orientation.
pub fn normalize_via_zero_moves(z: &Zigzag) -> Result<(Zigzag, Vec<ModStep>), MoveError> {
    let n = z.len();
    if z.is_standard() || z.reversed().is_standard() {
        return Ok((z.clone(), Vec::new()));
    }
    let fail = || MoveError::Input(format!("no zero-move normalization of {z}"));
    for mirrored in [false, true] {
        let view = if mirrored { z.reversed() } else { z.clone() };
        let pos = |i: usize| if mirrored { n - 1 - i } else { i };
        let flip = |d: Direction| match (mirrored, d) {
            (false, d) => d,
            (true, Direction::Left) => Direction::Right,
            (true, Direction::Right) => Direction::Left,
        };
        let mut steps = Vec::new();
        let mut cur = view.clone();
        if n >= 3 && cur.0[1] == 0 && cur.0[0] != 0 {
            let d = if cur.0[0] < 0 { Direction::Left } else { Direction::Right };
            for _ in 0..cur.0[0].unsigned_abs() {
                let s = ModStep::MoveZero {
                    position: 1,
                    direction: d,
                };
                cur = apply_to_weights(&cur, &s)?;
                steps.push(ModStep::MoveZero {
                    position: pos(1),
                    direction: flip(d),
                });
            }
        }
        if cur.semistandard_weight().is_some() {
            let (std, more) = make_standard_from_semistandard(&cur)?;
            if std.is_standard() {
                steps.extend(more.into_iter().map(|s| match s {
                    ModStep::MakeZero { inverse, .. } => ModStep::MakeZero {
                        position: pos(0),
                        inverse,
                    },
                    other => other,
                }));
                let out = if mirrored { std.reversed() } else { std };
                return Ok((out, steps));
            }
        }
    }
    Err(fail())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zz(s: &str) -> Zigzag {
        s.parse().unwrap()
    }

    fn on_path(z: &str, step: ModStep) -> Zigzag {
        PathGraph::from_zigzag(&zz(z)).apply(&step).unwrap().zigzag()
    }

    #[test]
    fn zigzag_text() {
        assert_eq!(zz("[[0, 0, −3]]"), Zigzag(vec![0, 0, -3]));
        assert_eq!(zz("[[0,0,-3]]").to_string(), "[[0,0,-3]]");
        assert!("[0,0]".parse::<Zigzag>().is_err());
        assert!("[[0,x]]".parse::<Zigzag>().is_err());
    }

    #[test]
    fn step_text_round_trip() {
        let text = "movezero@1:left,blowdown@1,outer@3,inner@0-2,makezero@0,makezero@2:inv,revert";
        let steps = parse_steps(text).unwrap();
        let back: Vec<String> = steps.iter().map(ToString::to_string).collect();
        assert_eq!(back.join(","), text);
        assert!(parse_steps("movezero@1").is_err());
        assert!(parse_steps("bogus@1").is_err());
    }

    #[test]
    fn elementary_moves() {
        assert_eq!(on_path("[[0,0]]", ModStep::InnerBlowUp { edge: (0, 1) }), zz("[[-1,-1,-1]]"));
        assert_eq!(on_path("[[0,0,-3]]", ModStep::OuterBlowUp { vertex: 2 }), zz("[[0,0,-4,-1]]"));
        assert_eq!(on_path("[[0,-1,-3]]", ModStep::BlowDown { vertex: 1 }), zz("[[1,-2]]"));
        assert_eq!(
            on_path("[[-2,0,-2]]", ModStep::MoveZero { position: 1, direction: Direction::Left }),
            zz("[[-1,0,-3]]")
        );
    }

    #[test]
    fn move_errors() {
        let p = PathGraph::from_zigzag(&zz("[[0,-2,-3]]"));
        assert_eq!(
            p.apply(&ModStep::BlowDown { vertex: 1 }),
            Err(MoveError::NotMinusOne { vertex: 1, weight: -2 })
        );
        assert_eq!(
            p.apply(&ModStep::InnerBlowUp { edge: (0, 2) }),
            Err(MoveError::NoSuchEdge(0, 2))
        );
        assert_eq!(
            p.apply(&ModStep::MoveZero { position: 1, direction: Direction::Left }),
            Err(MoveError::NotZero { position: 1, weight: -2 })
        );
        assert_eq!(
            p.apply(&ModStep::MoveZero { position: 0, direction: Direction::Left }),
            Err(MoveError::NotInterior { position: 0 })
        );
        assert_eq!(
            p.apply(&ModStep::MakeZero { position: 1, inverse: false }),
            Err(MoveError::NotEnd { position: 1 })
        );
        // A (-1)-vertex whose neighbours already meet cannot be blown down.
        let mut tri = WeightedGraph::new();
        for v in 0..3 {
            tri.add_vertex(v, -1);
        }
        tri.add_edge(0, 1).unwrap();
        tri.add_edge(1, 2).unwrap();
        tri.add_edge(0, 2).unwrap();
        assert_eq!(tri.blow_down(0), Err(MoveError::MultiEdge(1, 2)));
        let mut star = WeightedGraph::new();
        for v in 0..4 {
            star.add_vertex(v, -1);
        }
        for v in 1..4 {
            star.add_edge(0, v).unwrap();
        }
        assert_eq!(star.blow_down(0), Err(MoveError::DegreeTooHigh { vertex: 0, degree: 3 }));
        assert!(PathGraph::from_graph(&star).is_err());
    }

    #[test]
    fn semistandard_to_standard() {
        let (z, steps) = make_standard_from_semistandard(&zz("[[0,-2,-3]]")).unwrap();
        assert_eq!(z, zz("[[0,0,-3]]"));
        assert_eq!(steps, vec![ModStep::MakeZero { position: 0, inverse: false }; 2]);
        let (z, steps) = make_standard_from_semistandard(&zz("[[0,0,-3]]")).unwrap();
        assert_eq!(z, zz("[[0,0,-3]]"));
        assert!(steps.is_empty());
        assert_eq!(make_standard_from_semistandard(&zz("[[0,-1,-4]]")).unwrap().0, zz("[[0,0,-4]]"));
        let (z, steps) = make_standard_from_semistandard(&zz("[[0,2]]")).unwrap();
        assert_eq!(z, zz("[[0,0]]"));
        assert_eq!(steps.len(), 2);
        assert!(make_standard_from_semistandard(&zz("[[0,-2,-1]]")).is_err());
    }

    #[test]
    fn reversion_examples() {
        assert_eq!(reversion(&zz("[[0,0,-4]]")).unwrap().0, zz("[[-4,0,0]]"));
        let (z, steps) = reversion(&zz("[[0,0,-2,-3]]")).unwrap();
        assert_eq!(z, zz("[[-2,-3,0,0]]"));
        assert_eq!(z.reversed(), zz("[[0,0,-3,-2]]"));
        assert_eq!(steps.len(), 5);
        assert_eq!(reversion(&zz("[[0,0]]")).unwrap(), (zz("[[0,0]]"), vec![]));
        assert!(reversion(&zz("[[0,-1,-3]]")).is_err());
    }

    #[test]
    fn composite_replay_matches_closed_form() {
        let start = PathGraph::from_zigzag(&zz("[[0,0,-2,-3]]"));
        let (_, moves) = reversion(&start.zigzag()).unwrap();
        let (end, log) = start.replay(&moves).unwrap();
        assert_eq!(end.zigzag(), zz("[[-2,-3,0,0]]"));
        assert_eq!(log.len(), moves.len());
        let elementary = start.expand(&ModStep::Reversion).unwrap();
        assert!(elementary.iter().all(ModStep::is_elementary));
        let (again, _) = start.replay(&elementary).unwrap();
        assert_eq!(again, start.apply(&ModStep::Reversion).unwrap());
        assert_eq!(again.zigzag(), zz("[[-2,-3,0,0]]"));
    }

    #[test]
    fn minimal_contraction() {
        let mut g = WeightedGraph::new();
        for (v, w) in [(0, 0), (1, -1), (2, -3)] {
            g.add_vertex(v, w);
        }
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        let (m, log) = contract_to_minimal(&g);
        assert_eq!(PathGraph::from_graph(&m).unwrap().zigzag(), zz("[[1,-2]]"));
        assert_eq!(log.len(), 1);
        let std = PathGraph::from_zigzag(&zz("[[0,0,-3]]")).graph;
        assert_eq!(contract_to_minimal(&std), (std.clone(), vec![]));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_zigzag(&zz("[[0,0,-3]]")), ZigzagClass::DanielewskiBoundary(3));
        assert_eq!(classify_zigzag(&zz("[[-3,0,0]]")), ZigzagClass::DanielewskiBoundary(3));
        assert_eq!(classify_zigzag(&zz("[[0,-2,-3]]")), ZigzagClass::Semistandard(-2));
        assert_eq!(classify_zigzag(&zz("[[-2,0,-2]]")), ZigzagClass::Other);
        assert_eq!(classify_zigzag(&zz("[[0,0,-2,-3]]")), ZigzagClass::Standard);
        assert_eq!(classify_zigzag(&zz("[[0,0,-1]]")), ZigzagClass::Other);
        assert_eq!(classify_zigzag(&zz("[[-2,3,0]]")), ZigzagClass::Semistandard(3));
        assert_eq!(classify_zigzag(&zz("[[0,0]]")), ZigzagClass::Standard);
    }

    #[test]
    fn zero_move_normalization() {
        let (z, steps) = normalize_via_zero_moves(&zz("[[-2,0,-2]]")).unwrap();
        assert_eq!(z, zz("[[0,0,-4]]"));
        let (_, log) = PathGraph::from_zigzag(&zz("[[-2,0,-2]]")).replay(&steps).unwrap();
        let trail: Vec<String> = log
            .iter()
            .map(|e| match &e.after {
                Snapshot::Zigzag(s) => s.clone(),
                Snapshot::Graph(_) => unreachable!(),
            })
            .collect();
        assert_eq!(trail, ["[[-1,0,-3]]", "[[0,0,-4]]"]);
        let (z, steps) = normalize_via_zero_moves(&zz("[[-3,-1,0]]")).unwrap();
        assert_eq!(z, zz("[[-3,0,0]]"));
        assert_eq!(steps, vec![ModStep::MakeZero { position: 2, inverse: false }]);
        assert!(normalize_via_zero_moves(&zz("[[-2,-2,-2]]")).is_err());
    }

    #[test]
    fn graph_json_round_trip() {
        let g = PathGraph::from_zigzag(&zz("[[0,0,-3]]")).graph;
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"vertices":[{"id":0,"weight":0},{"id":1,"weight":0},{"id":2,"weight":-3}],"edges":[[0,1],[1,2]]}"#
        );
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(WeightedGraph::from_json(&back).unwrap(), g);
        let dup: GraphJson =
            serde_json::from_str(r#"{"vertices":[{"id":0,"weight":0}],"edges":[[0,0]]}"#).unwrap();
        assert!(WeightedGraph::from_json(&dup).is_err());
    }

    fn zigzag_strategy() -> impl Strategy<Value = Zigzag> {
        prop::collection::vec(-4i64..=2, 1..7).prop_map(Zigzag)
    }

    fn standard_strategy() -> impl Strategy<Value = Zigzag> {
        prop::collection::vec(-5i64..=-2, 0..5).prop_map(|tail| {
            let mut w = vec![0, 0];
            w.extend(tail);
            Zigzag(w)
        })
    }

    proptest! {
        #[test]
        fn blow_up_then_down_is_identity(z in zigzag_strategy(), pick in 0usize..16) {
            let p = PathGraph::from_zigzag(&z);
            let g = &p.graph;
            let v = (pick % z.len()) as VertexId;
            let (up, e) = g.outer_blow_up(v).unwrap();
            prop_assert_eq!(&up.blow_down(e).unwrap(), g);
            if z.len() >= 2 {
                let a = (pick % (z.len() - 1)) as VertexId;
                let (up, e) = g.inner_blow_up(a, a + 1).unwrap();
                prop_assert_eq!(&up.blow_down(e).unwrap(), g);
            }
        }

        #[test]
        fn move_zero_left_right_cancel(mut z in zigzag_strategy(), pick in 0usize..16) {
            prop_assume!(z.len() >= 3);
            let i = 1 + pick % (z.len() - 2);
            z.0[i] = 0;
            let left = ModStep::MoveZero { position: i, direction: Direction::Left };
            let right = ModStep::MoveZero { position: i, direction: Direction::Right };
            let p = PathGraph::from_zigzag(&z);
            let there = p.apply(&left).unwrap();
            prop_assert_eq!(there.zigzag(), apply_to_weights(&z, &left).unwrap());
            prop_assert_eq!(there.apply(&right).unwrap().zigzag(), z);
        }

        #[test]
        fn reversion_twice_is_identity(z in standard_strategy()) {
            let (r, moves) = reversion(&z).unwrap();
            let (rr, _) = reversion(&r.reversed()).unwrap();
            prop_assert_eq!(rr.reversed(), z.clone());
            let (end, _) = PathGraph::from_zigzag(&z).replay(&moves).unwrap();
            prop_assert_eq!(end.zigzag(), r);
        }

        #[test]
        fn make_zero_replays(w1 in -4i64..=4, tail in prop::collection::vec(-5i64..=-2, 1..4)) {
            let mut w = vec![0, w1];
            w.extend(tail);
            let z = Zigzag(w);
            let (s, steps) = make_standard_from_semistandard(&z).unwrap();
            prop_assert!(s.is_standard());
            let (end, _) = PathGraph::from_zigzag(&z).replay(&steps).unwrap();
            prop_assert_eq!(end.zigzag(), s);
        }

        #[test]
        fn contraction_reaches_minimal(z in zigzag_strategy(), extra in prop::collection::vec((0usize..8, any::<bool>()), 0..6)) {
            let mut g = PathGraph::from_zigzag(&z).graph;
            for (pick, outer) in extra {
                let ids: Vec<VertexId> = g.vertices().map(|(v, _)| v).collect();
                let v = ids[pick % ids.len()];
                g = if outer {
                    g.outer_blow_up(v).unwrap().0
                } else {
                    match g.neighbors(v).first() {
                        Some(&n) => g.inner_blow_up(v, n).unwrap().0,
                        None => g.outer_blow_up(v).unwrap().0,
                    }
                };
            }
            let (m, log) = contract_to_minimal(&g);
            prop_assert!(m.is_minimal());
            prop_assert_eq!(m.len() + log.len(), g.len());
        }

        #[test]
        fn vertex_count_tracks_steps(z in zigzag_strategy(), picks in prop::collection::vec((0usize..3, 0usize..16), 0..10)) {
            let mut g = PathGraph::from_zigzag(&z).graph;
            for (kind, pick) in picks {
                let ids: Vec<VertexId> = g.vertices().map(|(v, _)| v).collect();
                if ids.is_empty() {
                    break;
                }
                let v = ids[pick % ids.len()];
                let step = match kind {
                    0 => ModStep::OuterBlowUp { vertex: v },
                    1 => match g.neighbors(v).first() {
                        Some(&n) => ModStep::InnerBlowUp { edge: (v, n) },
                        None => continue,
                    },
                    _ => ModStep::BlowDown { vertex: v },
                };
                if let Ok(next) = g.apply(&step) {
                    prop_assert_eq!(next.len() as i64, g.len() as i64 + step.vertex_delta());
                    g = next;
                }
            }
        }
    }
}
