//! Morse event words for front projections of Legendrian graphs.
//!
//! A diagram is a left-to-right word of events acting on a stack of
//! horizontal strands (slot 1 = top). Left cusps create a pair of strands of
//! one edge, right cusps merge a pair, crossings swap adjacent strands, and
//! vertex events consume incoming edge-ends and emit outgoing ones.
//!
//! Invariant conventions used throughout:
//! - At a crossing the descending strand is in front; no over/under datum is
//!   stored. A crossing counts +1 toward a cycle's self-writhe iff both
//!   strands are traversed in the same horizontal direction.
//! - A cycle reverses horizontal direction at cusps and at vertices where it
//!   enters and exits on the same side. Both kinds of reversal are counted
//!   in the cusp totals: upper-branch-to-lower is a down cusp, lower-to-upper
//!   is an up cusp. With that convention `tb = -(cusps)/2 + writhe` and
//!   `rot = (down - up)/2` reproduce the classical values on all cycles,
//!   including those through vertices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::halfint::HalfInt;

/// One event of the word. `pos` is the 1-based slot from the top of the
/// strand stack at the moment the event happens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Event {
    #[serde(rename = "lcusp")]
    LeftCusp { pos: usize, edge: String },
    #[serde(rename = "rcusp")]
    RightCusp { pos: usize },
    #[serde(rename = "cross")]
    Crossing { pos: usize },
    #[serde(rename = "vertex")]
    Vertex {
        pos: usize,
        id: String,
        left: Vec<String>,
        right: Vec<String>,
    },
}

impl Event {
    pub fn pos(&self) -> usize {
        match self {
            Event::LeftCusp { pos, .. }
            | Event::RightCusp { pos }
            | Event::Crossing { pos }
            | Event::Vertex { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDecl {
    pub id: String,
    pub valence: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontDiagram {
    pub edges: Vec<String>,
    pub vertices: Vec<VertexDecl>,
    pub events: Vec<Event>,
    pub trusted_trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("illegal diagram: {0:?}")]
    Illegal(Vec<Violation>),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("cycle is not a closed edge-walk: {0}")]
    BadCycle(String),
    #[error("diagram is not a labeled theta graph: {0}")]
    NotTheta(String),
    #[error("vertex {0} is not trivalent with distinct edges")]
    NotTrivalent(String),
}

/// A violated structural invariant, with the index of the offending event
/// (`None` for global violations such as a nonempty final stack).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub event: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.event {
            Some(i) => write!(f, "event {}: {}", i, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

/// Horizontal direction of a single strand segment while traversing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HDir {
    Rightward,
    Leftward,
}

impl HDir {
    fn flip(self) -> HDir {
        match self {
            HDir::Rightward => HDir::Leftward,
            HDir::Leftward => HDir::Rightward,
        }
    }
}

/// Where a segment begins or ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    LCusp { event: usize, upper: bool },
    RCusp { event: usize, upper: bool },
    VertexEnd(EndRef),
}

/// One edge-end at a vertex event. `slot` indexes the event's `left` or
/// `right` label list top-to-bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EndRef {
    pub event: usize,
    pub vertex: usize,
    pub left_side: bool,
    pub slot: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct CrossingRec {
    pub event: usize,
    /// Strand entering at the upper slot; it descends and is in front.
    pub upper_in: usize,
    pub lower_in: usize,
}

/// An edge's strand segments in traversal order from end 0 to end 1 (or
/// around the loop for a closed edge).
#[derive(Clone, Debug)]
pub struct Arc {
    pub steps: Vec<(usize, HDir)>,
    /// `None` for a closed (vertex-free) edge.
    pub ends: Option<(EndRef, EndRef)>,
}

/// Full structural analysis of a legal diagram.
pub struct Analysis {
    pub seg_edge: Vec<usize>,
    pub seg_birth: Vec<Endpoint>,
    pub seg_death: Vec<Endpoint>,
    pub crossings: Vec<CrossingRec>,
    /// Stack of segment ids before each event; index `n_events` holds the
    /// final stack.
    pub stacks: Vec<Vec<usize>>,
    pub arcs: Vec<Arc>,
    /// Event index of each vertex's event.
    pub vertex_event: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub edge: usize,
    pub dir: Dir,
}

/// Accumulated counts of one cycle traversal. Cusp counts include the
/// same-side vertex reversals (see module docs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleTraversal {
    pub steps: Vec<CycleStep>,
    pub up_cusps: i64,
    pub down_cusps: i64,
    pub writhe: i64,
}

impl CycleTraversal {
    pub fn tb(&self) -> i64 {
        debug_assert!((self.up_cusps + self.down_cusps) % 2 == 0);
        -(self.up_cusps + self.down_cusps) / 2 + self.writhe
    }

    pub fn rot(&self) -> i64 {
        debug_assert!((self.down_cusps - self.up_cusps) % 2 == 0);
        (self.down_cusps - self.up_cusps) / 2
    }
}

/// The classical invariants of a labeled theta diagram: cycle vectors over
/// γ1 = e1∪e2, γ2 = e2∪e3, γ3 = e3∪e1, each oriented so that e_i runs from
/// v1 to v2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaInvariants {
    pub tb: [i64; 3],
    pub rot: [i64; 3],
    pub sigma_v1: i64,
    pub sigma_v2: i64,
}

impl ThetaInvariants {
    pub fn total_rot(&self) -> i64 {
        self.rot.iter().sum()
    }

    pub fn tw(&self) -> [HalfInt; 3] {
        let tb = self.tb;
        let mut tw = [HalfInt::ZERO; 3];
        for i in 0..3 {
            // tw(e_i) = (tb(γ_{i-1}) + tb(γ_i) - tb(γ_{i+1})) / 2
            let prev = tb[(i + 2) % 3];
            let here = tb[i];
            let next = tb[(i + 1) % 3];
            tw[i] = HalfInt::half_of(prev + here - next);
        }
        tw
    }
}

impl FrontDiagram {
    pub fn edge_index(&self, name: &str) -> Result<usize, DiagramError> {
        self.edges
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| DiagramError::UnknownEdge(name.to_string()))
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, DiagramError> {
        self.vertices
            .iter()
            .position(|v| v.id == name)
            .ok_or_else(|| DiagramError::UnknownVertex(name.to_string()))
    }

    /// Checks every structural invariant, returning all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let (_, violations) = self.simulate();
        violations
    }

    /// Structural analysis; errors with the violation list if illegal.
    pub fn analyze(&self) -> Result<Analysis, DiagramError> {
        let (analysis, violations) = self.simulate();
        if violations.is_empty() {
            Ok(analysis.expect("legal diagram must analyze"))
        } else {
            Err(DiagramError::Illegal(violations))
        }
    }

    fn simulate(&self) -> (Option<Analysis>, Vec<Violation>) {
        let mut violations = Vec::new();
        let mut edge_of = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if edge_of.insert(e.clone(), i).is_some() {
                violations.push(Violation {
                    event: None,
                    message: format!("duplicate edge id {e}"),
                });
            }
        }
        let mut vert_of = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vert_of.insert(v.id.clone(), i).is_some() {
                violations.push(Violation {
                    event: None,
                    message: format!("duplicate vertex id {}", v.id),
                });
            }
        }

        let mut seg_edge: Vec<usize> = Vec::new();
        let mut seg_birth: Vec<Endpoint> = Vec::new();
        let mut seg_death: Vec<Option<Endpoint>> = Vec::new();
        let mut crossings: Vec<CrossingRec> = Vec::new();
        let mut stacks: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut vertex_event: Vec<Option<usize>> = vec![None; self.vertices.len()];

        let mut new_seg = |edge: usize,
                           birth: Endpoint,
                           seg_edge: &mut Vec<usize>,
                           seg_birth: &mut Vec<Endpoint>,
                           seg_death: &mut Vec<Option<Endpoint>>| {
            seg_edge.push(edge);
            seg_birth.push(birth);
            seg_death.push(None);
            seg_edge.len() - 1
        };

        for (i, ev) in self.events.iter().enumerate() {
            stacks.push(stack.clone());
            let w = stack.len();
            match ev {
                Event::LeftCusp { pos, edge } => {
                    let Some(&e) = edge_of.get(edge) else {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("undeclared edge {edge}"),
                        });
                        continue;
                    };
                    if *pos < 1 || *pos > w + 1 {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("left cusp pos {pos} out of range 1..={}", w + 1),
                        });
                        continue;
                    }
                    let q = pos - 1;
                    let a = new_seg(
                        e,
                        Endpoint::LCusp { event: i, upper: true },
                        &mut seg_edge,
                        &mut seg_birth,
                        &mut seg_death,
                    );
                    let b = new_seg(
                        e,
                        Endpoint::LCusp { event: i, upper: false },
                        &mut seg_edge,
                        &mut seg_birth,
                        &mut seg_death,
                    );
                    stack.insert(q, b);
                    stack.insert(q, a);
                }
                Event::RightCusp { pos } => {
                    if *pos < 1 || pos + 1 > w {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("right cusp pos {pos} needs two strands"),
                        });
                        continue;
                    }
                    let q = pos - 1;
                    let a = stack.remove(q);
                    let b = stack.remove(q);
                    if seg_edge[a] != seg_edge[b] {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!(
                                "right cusp merges strands of different edges {} and {}",
                                self.edges[seg_edge[a]], self.edges[seg_edge[b]]
                            ),
                        });
                    }
                    seg_death[a] = Some(Endpoint::RCusp { event: i, upper: true });
                    seg_death[b] = Some(Endpoint::RCusp { event: i, upper: false });
                }
                Event::Crossing { pos } => {
                    if *pos < 1 || pos + 1 > w {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("crossing pos {pos} needs two strands"),
                        });
                        continue;
                    }
                    let q = pos - 1;
                    let upper = stack[q];
                    let lower = stack[q + 1];
                    crossings.push(CrossingRec {
                        event: i,
                        upper_in: upper,
                        lower_in: lower,
                    });
                    stack.swap(q, q + 1);
                }
                Event::Vertex {
                    pos,
                    id,
                    left,
                    right,
                } => {
                    let Some(&v) = vert_of.get(id) else {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("undeclared vertex {id}"),
                        });
                        continue;
                    };
                    if vertex_event[v].is_some() {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("vertex {id} appears in more than one event"),
                        });
                        continue;
                    }
                    vertex_event[v] = Some(i);
                    if left.len() + right.len() != self.vertices[v].valence {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!(
                                "vertex {id} has {} edge-ends, declared valence {}",
                                left.len() + right.len(),
                                self.vertices[v].valence
                            ),
                        });
                    }
                    let c = left.len();
                    if *pos < 1 || pos - 1 + c > w {
                        violations.push(Violation {
                            event: Some(i),
                            message: format!("vertex pos {pos} consuming {c} strands out of range"),
                        });
                        continue;
                    }
                    let q = pos - 1;
                    let mut ok = true;
                    for (slot, label) in left.iter().enumerate() {
                        let s = stack[q + slot];
                        match edge_of.get(label) {
                            Some(&e) if e == seg_edge[s] => {}
                            Some(_) => {
                                violations.push(Violation {
                                    event: Some(i),
                                    message: format!(
                                        "vertex {id} consumes strand of edge {} where {} was declared",
                                        self.edges[seg_edge[s]], label
                                    ),
                                });
                                ok = false;
                            }
                            None => {
                                violations.push(Violation {
                                    event: Some(i),
                                    message: format!("undeclared edge {label}"),
                                });
                                ok = false;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    for (slot, _) in left.iter().enumerate() {
                        let s = stack.remove(q);
                        seg_death[s] = Some(Endpoint::VertexEnd(EndRef {
                            event: i,
                            vertex: v,
                            left_side: true,
                            slot,
                        }));
                    }
                    for (slot, label) in right.iter().enumerate().rev() {
                        let Some(&e) = edge_of.get(label) else {
                            violations.push(Violation {
                                event: Some(i),
                                message: format!("undeclared edge {label}"),
                            });
                            continue;
                        };
                        let s = new_seg(
                            e,
                            Endpoint::VertexEnd(EndRef {
                                event: i,
                                vertex: v,
                                left_side: false,
                                slot,
                            }),
                            &mut seg_edge,
                            &mut seg_birth,
                            &mut seg_death,
                        );
                        stack.insert(q, s);
                    }
                }
            }
        }
        stacks.push(stack.clone());
        if !stack.is_empty() {
            violations.push(Violation {
                event: None,
                message: format!("non-empty strand list at end ({} strands)", stack.len()),
            });
        }
        for (v, evi) in vertex_event.iter().enumerate() {
            if evi.is_none() {
                violations.push(Violation {
                    event: None,
                    message: format!("vertex {} has no event", self.vertices[v].id),
                });
            }
        }
        if !violations.is_empty() {
            return (None, violations);
        }

        // Edge-end counts: every edge has 0 or 2 ends at vertices.
        let mut end_count = vec![0usize; self.edges.len()];
        for (s, b) in seg_birth.iter().enumerate() {
            if let Endpoint::VertexEnd(_) = b {
                end_count[seg_edge[s]] += 1;
            }
            if let Some(Endpoint::VertexEnd(_)) = seg_death[s] {
                end_count[seg_edge[s]] += 1;
            }
        }
        for (e, &c) in end_count.iter().enumerate() {
            if c != 0 && c != 2 {
                violations.push(Violation {
                    event: None,
                    message: format!("edge {} has {} vertex-ends (expected 0 or 2)", self.edges[e], c),
                });
            }
        }

        let seg_death: Vec<Endpoint> = seg_death.into_iter().map(|d| d.unwrap()).collect();

        // Assemble each edge's arc.
        let mut arcs = Vec::with_capacity(self.edges.len());
        for e in 0..self.edges.len() {
            match assemble_arc(e, &seg_edge, &seg_birth, &seg_death) {
                Ok(arc) => arcs.push(arc),
                Err(msg) => {
                    violations.push(Violation {
                        event: None,
                        message: format!("edge {}: {}", self.edges[e], msg),
                    });
                    arcs.push(Arc {
                        steps: Vec::new(),
                        ends: None,
                    });
                }
            }
        }
        if !violations.is_empty() {
            return (None, violations);
        }

        (
            Some(Analysis {
                seg_edge,
                seg_birth,
                seg_death,
                crossings,
                stacks,
                arcs,
                vertex_event: vertex_event.into_iter().map(|x| x.unwrap()).collect(),
            }),
            violations,
        )
    }

    /// Traverses a closed edge-walk and accumulates cusp and writhe counts.
    pub fn traverse_cycle(&self, cycle: &[(String, Dir)]) -> Result<CycleTraversal, DiagramError> {
        let analysis = self.analyze()?;
        let steps: Vec<CycleStep> = cycle
            .iter()
            .map(|(name, dir)| {
                Ok(CycleStep {
                    edge: self.edge_index(name)?,
                    dir: *dir,
                })
            })
            .collect::<Result<_, DiagramError>>()?;
        traverse(&analysis, &steps).map_err(DiagramError::BadCycle)
    }

    /// The coorientation sign of a trivalent vertex: +1 iff the three edge
    /// labels, in diagram edge order, are an even cyclic permutation of the
    /// counterclockwise end enumeration in the contact plane (right-going
    /// ends bottom-to-top, then left-going ends bottom-to-top).
    pub fn vertex_sign(&self, vertex: &str) -> Result<i64, DiagramError> {
        let v = self.vertex_index(vertex)?;
        let analysis = self.analyze()?;
        vertex_sign_ix(self, &analysis, v)
    }

    /// Mirrors across the x-axis: slot indices are reversed within each
    /// event, event order is preserved.
    pub fn mirror(&self) -> FrontDiagram {
        let mut width = 0usize;
        let events = self
            .events
            .iter()
            .map(|ev| {
                let w = width;
                match ev {
                    Event::LeftCusp { pos, edge } => {
                        width += 2;
                        Event::LeftCusp {
                            pos: w + 2 - pos,
                            edge: edge.clone(),
                        }
                    }
                    Event::RightCusp { pos } => {
                        width -= 2;
                        Event::RightCusp { pos: w - pos }
                    }
                    Event::Crossing { pos } => Event::Crossing { pos: w - pos },
                    Event::Vertex {
                        pos,
                        id,
                        left,
                        right,
                    } => {
                        let c = left.len();
                        width = width - c + right.len();
                        Event::Vertex {
                            pos: w + 2 - c - pos,
                            id: id.clone(),
                            left: left.iter().rev().cloned().collect(),
                            right: right.iter().rev().cloned().collect(),
                        }
                    }
                }
            })
            .collect();
        FrontDiagram {
            edges: self.edges.clone(),
            vertices: self.vertices.clone(),
            events,
            trusted_trivial: self.trusted_trivial,
        }
    }

    /// Renames edges by a bijection on the declared names. The `edges` list
    /// keeps its order with names substituted, so relabeling permutes the
    /// roles e1, e2, e3 seen by `theta_invariants`.
    pub fn rename_edges(&self, map: &BTreeMap<String, String>) -> FrontDiagram {
        let sub = |name: &String| map.get(name).cloned().unwrap_or_else(|| name.clone());
        let mut edges: Vec<String> = self.edges.iter().map(sub).collect();
        edges.sort();
        let events = self
            .events
            .iter()
            .map(|ev| match ev {
                Event::LeftCusp { pos, edge } => Event::LeftCusp {
                    pos: *pos,
                    edge: sub(edge),
                },
                Event::Vertex {
                    pos,
                    id,
                    left,
                    right,
                } => Event::Vertex {
                    pos: *pos,
                    id: id.clone(),
                    left: left.iter().map(sub).collect(),
                    right: right.iter().map(sub).collect(),
                },
                other => other.clone(),
            })
            .collect();
        FrontDiagram {
            edges,
            vertices: self.vertices.clone(),
            events,
            trusted_trivial: self.trusted_trivial,
        }
    }

    /// Swaps the two vertex labels of a theta diagram.
    pub fn swap_vertices(&self) -> FrontDiagram {
        let mut d = self.clone();
        if d.vertices.len() == 2 {
            let (a, b) = (d.vertices[0].id.clone(), d.vertices[1].id.clone());
            for ev in &mut d.events {
                if let Event::Vertex { id, .. } = ev {
                    if *id == a {
                        *id = b.clone();
                    } else if *id == b {
                        *id = a.clone();
                    }
                }
            }
        }
        d
    }

    /// Classical invariants of a labeled theta diagram. Vertex order in
    /// `vertices` names v1 and v2; edge order names e1, e2, e3.
    pub fn theta_invariants(&self) -> Result<ThetaInvariants, DiagramError> {
        let analysis = self.analyze()?;
        if self.vertices.len() != 2 || self.edges.len() != 3 {
            return Err(DiagramError::NotTheta(format!(
                "{} vertices, {} edges",
                self.vertices.len(),
                self.edges.len()
            )));
        }
        // Every edge must join v1 to v2.
        for (e, arc) in analysis.arcs.iter().enumerate() {
            match arc.ends {
                Some((a, b)) if a.vertex != b.vertex => {}
                _ => {
                    return Err(DiagramError::NotTheta(format!(
                        "edge {} does not join the two vertices",
                        self.edges[e]
                    )))
                }
            }
        }
        let mut tb = [0i64; 3];
        let mut rot = [0i64; 3];
        for i in 0..3 {
            let e_i = i;
            let e_next = (i + 1) % 3;
            let steps = vec![
                CycleStep {
                    edge: e_i,
                    dir: dir_from_vertex(&analysis, e_i, 0),
                },
                CycleStep {
                    edge: e_next,
                    dir: dir_from_vertex(&analysis, e_next, 1),
                },
            ];
            let t = traverse(&analysis, &steps).map_err(DiagramError::BadCycle)?;
            tb[i] = t.tb();
            rot[i] = t.rot();
        }
        let sigma_v1 = vertex_sign_ix(self, &analysis, 0)?;
        let sigma_v2 = vertex_sign_ix(self, &analysis, 1)?;
        Ok(ThetaInvariants {
            tb,
            rot,
            sigma_v1,
            sigma_v2,
        })
    }
}

/// Direction so the edge is traversed away from the given vertex index.
fn dir_from_vertex(analysis: &Analysis, edge: usize, vertex: usize) -> Dir {
    match analysis.arcs[edge].ends {
        Some((a, _)) if a.vertex == vertex => Dir::Forward,
        _ => Dir::Backward,
    }
}

fn assemble_arc(
    edge: usize,
    seg_edge: &[usize],
    seg_birth: &[Endpoint],
    seg_death: &[Endpoint],
) -> Result<Arc, String> {
    let segs: Vec<usize> = (0..seg_edge.len()).filter(|&s| seg_edge[s] == edge).collect();
    if segs.is_empty() {
        return Err("declared edge never appears".to_string());
    }
    // Partner lookup: cusp event -> the two (seg, at_birth) endpoints there.
    let mut cusp_members: BTreeMap<(usize, bool), Vec<usize>> = BTreeMap::new();
    let mut terminals: Vec<(usize, EndRef, bool)> = Vec::new(); // (seg, end, at_birth)
    for &s in &segs {
        match seg_birth[s] {
            Endpoint::LCusp { event, .. } => cusp_members.entry((event, true)).or_default().push(s),
            Endpoint::VertexEnd(r) => terminals.push((s, r, true)),
            Endpoint::RCusp { .. } => unreachable!("segments are born at left cusps or vertices"),
        }
        match seg_death[s] {
            Endpoint::RCusp { event, .. } => {
                cusp_members.entry((event, false)).or_default().push(s)
            }
            Endpoint::VertexEnd(r) => terminals.push((s, r, false)),
            Endpoint::LCusp { .. } => unreachable!("segments die at right cusps or vertices"),
        }
    }
    for members in cusp_members.values() {
        if members.len() != 2 {
            return Err("cusp does not join two strands of the edge".to_string());
        }
    }

    let partner = |s: usize, at_birth: bool| -> Option<(usize, bool)> {
        let key = match (at_birth, &seg_birth[s], &seg_death[s]) {
            (true, Endpoint::LCusp { event, .. }, _) => (*event, true),
            (false, _, Endpoint::RCusp { event, .. }) => (*event, false),
            _ => return None,
        };
        let members = &cusp_members[&key];
        let other = if members[0] == s { members[1] } else { members[0] };
        // Partner connects at its own birth for a left cusp, death for right.
        Some((other, key.1))
    };

    let walk = |start_seg: usize, start_dir: HDir| -> (Vec<(usize, HDir)>, Option<(usize, bool)>) {
        let mut steps = vec![(start_seg, start_dir)];
        loop {
            let (s, d) = *steps.last().unwrap();
            // Far endpoint of this step: death if rightward, birth if leftward.
            let at_birth = d == HDir::Leftward;
            match partner(s, at_birth) {
                Some((next, next_at_birth)) => {
                    if next == start_seg
                        && ((next_at_birth && start_dir == HDir::Rightward)
                            || (!next_at_birth && start_dir == HDir::Leftward))
                    {
                        return (steps, None); // closed loop
                    }
                    // Traverse away from the shared cusp.
                    let next_dir = if next_at_birth { HDir::Rightward } else { HDir::Leftward };
                    steps.push((next, next_dir));
                }
                None => return (steps, Some((s, at_birth))),
            }
        }
    };

    if terminals.is_empty() {
        let (steps, closed) = walk(segs[0], HDir::Rightward);
        if closed.is_some() || steps.len() != segs.len() {
            return Err("closed edge does not form a single loop".to_string());
        }
        Ok(Arc { steps, ends: None })
    } else {
        if terminals.len() != 2 {
            return Err(format!("edge has {} vertex-ends (expected 2)", terminals.len()));
        }
        terminals.sort_by_key(|(_, r, _)| (r.event, r.left_side, r.slot));
        let (s0, end0, at_birth0) = terminals[0];
        let start_dir = if at_birth0 { HDir::Rightward } else { HDir::Leftward };
        let (steps, stopped) = walk(s0, start_dir);
        let Some((s_last, _)) = stopped else {
            return Err("edge arc closes up without reaching its second end".to_string());
        };
        if steps.len() != segs.len() {
            return Err("edge strands do not form a single connected arc".to_string());
        }
        let (_, end1, _) = terminals
            .iter()
            .find(|(s, r, _)| *s == s_last && *r != end0)
            .ok_or("edge arc does not terminate at its second end")?;
        Ok(Arc {
            steps,
            ends: Some((end0, *end1)),
        })
    }
}

fn vertex_sign_ix(
    diagram: &FrontDiagram,
    analysis: &Analysis,
    v: usize,
) -> Result<i64, DiagramError> {
    let evi = analysis.vertex_event[v];
    let Event::Vertex { left, right, .. } = &diagram.events[evi] else {
        unreachable!()
    };
    if left.len() + right.len() != 3 {
        return Err(DiagramError::NotTrivalent(diagram.vertices[v].id.clone()));
    }
    // Counterclockwise enumeration in the contact plane: right-going ends
    // bottom-to-top, then left-going ends bottom-to-top.
    let mut enumeration: Vec<usize> = Vec::with_capacity(3);
    for label in right.iter().rev().chain(left.iter().rev()) {
        enumeration.push(diagram.edge_index(label)?);
    }
    let mut distinct = enumeration.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != 3 {
        return Err(DiagramError::NotTrivalent(diagram.vertices[v].id.clone()));
    }
    // Rank each end among the incident edges in diagram edge order.
    let rank: Vec<usize> = enumeration
        .iter()
        .map(|e| distinct.iter().position(|d| d == e).unwrap())
        .collect();
    let even = matches!(rank.as_slice(), [0, 1, 2] | [1, 2, 0] | [2, 0, 1]);
    Ok(if even { 1 } else { -1 })
}

fn traverse(analysis: &Analysis, steps: &[CycleStep]) -> Result<CycleTraversal, String> {
    if steps.is_empty() {
        return Err("empty cycle".to_string());
    }
    let mut seen = std::collections::BTreeSet::new();
    for s in steps {
        if !seen.insert(s.edge) {
            return Err("cycle repeats an edge".to_string());
        }
    }

    // Closed single-loop edges stand alone.
    if steps.len() == 1 && analysis.arcs[steps[0].edge].ends.is_none() {
        let arc = &analysis.arcs[steps[0].edge];
        let mut seg_dir = BTreeMap::new();
        let flip = steps[0].dir == Dir::Backward;
        for &(s, d) in &arc.steps {
            seg_dir.insert(s, if flip { d.flip() } else { d });
        }
        let mut up = 0;
        let mut down = 0;
        // Connectors between consecutive steps, wrapping around.
        let n = arc.steps.len();
        for k in 0..n {
            let (a, da) = arc.steps[k];
            let (b, _) = arc.steps[(k + 1) % n];
            let (d, u) = cusp_direction(analysis, a, da, b, flip);
            down += d;
            up += u;
        }
        let writhe = writhe_of(analysis, &seg_dir);
        return Ok(CycleTraversal {
            steps: steps.to_vec(),
            up_cusps: up,
            down_cusps: down,
            writhe,
        });
    }

    // General closed edge-walk through vertices.
    let mut seg_dir: BTreeMap<usize, HDir> = BTreeMap::new();
    let mut up = 0i64;
    let mut down = 0i64;
    let mut junction_ends: Vec<(EndRef, EndRef)> = Vec::new(); // (arrive, depart) per junction

    let n = steps.len();
    let mut heads: Vec<EndRef> = Vec::with_capacity(n);
    let mut tails: Vec<EndRef> = Vec::with_capacity(n);
    for st in steps {
        let arc = &analysis.arcs[st.edge];
        let Some((e0, e1)) = arc.ends else {
            return Err("closed-loop edge may only appear as a one-edge cycle".to_string());
        };
        let (tail, head) = match st.dir {
            Dir::Forward => (e0, e1),
            Dir::Backward => (e1, e0),
        };
        tails.push(tail);
        heads.push(head);
        let flip = st.dir == Dir::Backward;
        for &(s, d) in &arc.steps {
            seg_dir.insert(s, if flip { d.flip() } else { d });
        }
        // Interior cusps of this edge.
        for k in 0..arc.steps.len().saturating_sub(1) {
            let (a, da) = arc.steps[k];
            let (b, _) = arc.steps[k + 1];
            let (d, u) = cusp_direction(analysis, a, da, b, flip);
            down += d;
            up += u;
        }
    }
    for i in 0..n {
        let arrive = heads[i];
        let depart = tails[(i + 1) % n];
        if arrive.vertex != depart.vertex {
            return Err(format!(
                "walk is not closed: edge step {} ends at a different vertex than the next begins",
                i
            ));
        }
        if arrive == depart {
            return Err("walk backtracks through the same edge-end".to_string());
        }
        junction_ends.push((arrive, depart));
    }
    for (arrive, depart) in junction_ends {
        if arrive.left_side == depart.left_side {
            // Same-side passage: the front reverses direction at the vertex.
            // Smaller slot = higher strand.
            if arrive.slot < depart.slot {
                down += 1;
            } else {
                up += 1;
            }
        }
    }
    let writhe = writhe_of(analysis, &seg_dir);
    Ok(CycleTraversal {
        steps: steps.to_vec(),
        up_cusps: up,
        down_cusps: down,
        writhe,
    })
}

/// Direction of the cusp between consecutive arc steps `a -> b`, as (down, up)
/// increments. `flip` reverses the traversal direction of the stored arc.
fn cusp_direction(
    analysis: &Analysis,
    a: usize,
    da: HDir,
    _b: usize,
    flip: bool,
) -> (i64, i64) {
    // The shared cusp sits at a's far endpoint in the stored direction.
    let at_birth = da == HDir::Leftward;
    let upper = match (at_birth, &analysis.seg_birth[a], &analysis.seg_death[a]) {
        (true, Endpoint::LCusp { upper, .. }, _) => *upper,
        (false, _, Endpoint::RCusp { upper, .. }) => *upper,
        _ => unreachable!("arc connector must be a cusp"),
    };
    // Arriving along the upper branch means exiting the lower: a down cusp.
    let arriving_upper = if flip { !upper } else { upper };
    if arriving_upper {
        (1, 0)
    } else {
        (0, 1)
    }
}

fn writhe_of(analysis: &Analysis, seg_dir: &BTreeMap<usize, HDir>) -> i64 {
    let mut w = 0i64;
    for c in &analysis.crossings {
        match (seg_dir.get(&c.upper_in), seg_dir.get(&c.lower_in)) {
            (Some(du), Some(dl)) => w += if du == dl { 1 } else { -1 },
            _ => {}
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn unknot() -> FrontDiagram {
        FrontDiagram {
            edges: vec!["e1".into()],
            vertices: vec![],
            events: vec![
                Event::LeftCusp { pos: 1, edge: "e1".into() },
                Event::RightCusp { pos: 1 },
            ],
            trusted_trivial: true,
        }
    }

    fn stabilized_unknot() -> FrontDiagram {
        FrontDiagram {
            edges: vec!["e1".into()],
            vertices: vec![],
            events: vec![
                Event::LeftCusp { pos: 1, edge: "e1".into() },
                Event::LeftCusp { pos: 2, edge: "e1".into() },
                Event::RightCusp { pos: 1 },
                Event::RightCusp { pos: 1 },
            ],
            trusted_trivial: true,
        }
    }

    #[test]
    fn unknot_is_legal() {
        assert!(unknot().validate().is_empty());
    }

    #[test]
    fn unclosed_diagram_is_illegal() {
        let d = FrontDiagram {
            edges: vec!["e1".into()],
            vertices: vec![],
            events: vec![Event::LeftCusp { pos: 1, edge: "e1".into() }],
            trusted_trivial: false,
        };
        let violations = d.validate();
        assert!(violations.iter().any(|v| v.message.contains("non-empty strand list")));
    }

    #[test]
    fn unknot_invariants() {
        let d = unknot();
        for dir in [Dir::Forward, Dir::Backward] {
            let t = d.traverse_cycle(&[("e1".into(), dir)]).unwrap();
            assert_eq!(t.up_cusps, 1);
            assert_eq!(t.down_cusps, 1);
            assert_eq!(t.writhe, 0);
            assert_eq!(t.tb(), -1);
            assert_eq!(t.rot(), 0);
        }
    }

    #[test]
    fn stabilized_unknot_invariants() {
        let d = stabilized_unknot();
        let t = d.traverse_cycle(&[("e1".into(), Dir::Forward)]).unwrap();
        assert_eq!((t.up_cusps, t.down_cusps, t.writhe), (1, 3, 0));
        assert_eq!((t.tb(), t.rot()), (-2, 1));
        let t = d.traverse_cycle(&[("e1".into(), Dir::Backward)]).unwrap();
        assert_eq!((t.tb(), t.rot()), (-2, -1));
    }

    #[test]
    fn mirror_involution_on_words() {
        for d in [unknot(), stabilized_unknot()] {
            assert_eq!(d.mirror().mirror(), d);
            assert!(d.mirror().validate().is_empty());
        }
    }

    #[test]
    fn mirror_negates_rot_up_to_orientation() {
        // A vertex-free loop carries no preferred orientation, so the mirror
        // law on rot is only defined up to sign here; tb is exact. The
        // orientation-pinned mirror law is checked on theta diagrams in the
        // realize tests.
        let d = stabilized_unknot().mirror();
        let t = d.traverse_cycle(&[("e1".into(), Dir::Forward)]).unwrap();
        assert_eq!(t.tb(), -2);
        assert_eq!(t.rot().abs(), 1);
    }

    #[test]
    fn right_cusp_label_mismatch_is_violation() {
        let d = FrontDiagram {
            edges: vec!["a".into(), "b".into()],
            vertices: vec![],
            events: vec![
                Event::LeftCusp { pos: 1, edge: "a".into() },
                Event::LeftCusp { pos: 3, edge: "b".into() },
                Event::RightCusp { pos: 2 },
                Event::RightCusp { pos: 1 },
            ],
            trusted_trivial: false,
        };
        let violations = d.validate();
        assert!(violations.iter().any(|v| v.message.contains("different edges")));
    }
}
