//! Property-N Legendrian realization of abstract planar graphs via dual
//! spanning trees, subdivision detection, and the infinite-family
//! generator.
//!
//! A planar map is a graph with a rotation system; faces come from face
//! tracing and must satisfy V - E + F = 2. The Legendrian content is
//! carried combinatorially: a dividing-set crossing count assigns
//! tb(γ) = -(number of edges of γ dual to spanning-tree edges), and the
//! Property-N certificate exhibits, for every non-cut edge, a witness cycle
//! with tb = -1.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::frontdiagram::{Event, FrontDiagram, VertexDecl};
use crate::halfint::HalfInt;
use crate::moves::{self, StabSign};
use crate::realize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanarError {
    #[error("invalid rotation system: {0}")]
    BadRotation(String),
    #[error("map is not a sphere embedding: V - E + F = {0}, expected 2")]
    NotSpherical(i64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("no theta or wedge subdivision in the graph")]
    NoWitness,
    #[error("cycle not in graph: {0}")]
    BadCycle(String),
    #[error("{0}")]
    Internal(String),
}

/// An edge-end: edge index plus which end (0 or 1). Loops use both ends at
/// the same vertex.
pub type EdgeEnd = (usize, u8);

/// A combinatorial map: multigraph with a cyclic order of edge-ends at each
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarMap {
    pub num_vertices: usize,
    /// Endpoints of each edge (loops allowed).
    pub edges: Vec<(usize, usize)>,
    /// Per-vertex cyclic order of incident edge-ends.
    pub rotation: Vec<Vec<EdgeEnd>>,
}

impl PlanarMap {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn end_vertex(&self, (e, w): EdgeEnd) -> usize {
        if w == 0 {
            self.edges[e].0
        } else {
            self.edges[e].1
        }
    }

    pub fn validate(&self) -> Result<(), PlanarError> {
        if self.rotation.len() != self.num_vertices {
            return Err(PlanarError::BadRotation(format!(
                "{} rotation rings for {} vertices",
                self.rotation.len(),
                self.num_vertices
            )));
        }
        let mut seen = BTreeSet::new();
        for (v, ring) in self.rotation.iter().enumerate() {
            for &end in ring {
                let (e, w) = end;
                if e >= self.edges.len() || w > 1 {
                    return Err(PlanarError::BadRotation(format!(
                        "vertex {v} lists unknown end {end:?}"
                    )));
                }
                if self.end_vertex(end) != v {
                    return Err(PlanarError::BadRotation(format!(
                        "end {end:?} listed at vertex {v} but belongs to {}",
                        self.end_vertex(end)
                    )));
                }
                if !seen.insert(end) {
                    return Err(PlanarError::BadRotation(format!("end {end:?} listed twice")));
                }
            }
        }
        if seen.len() != 2 * self.edges.len() {
            return Err(PlanarError::BadRotation(format!(
                "{} ends listed, expected {}",
                seen.len(),
                2 * self.edges.len()
            )));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }
}

/// A facial walk: the darts (edge traversals) along one face boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub darts: Vec<EdgeEnd>,
}

impl Face {
    pub fn edges(&self) -> Vec<usize> {
        self.darts.iter().map(|&(e, _)| e).collect()
    }
}

/// Traces the faces of the embedding; checks the Euler identity.
pub fn trace_faces(map: &PlanarMap) -> Result<Vec<Face>, PlanarError> {
    map.validate()?;
    // Dart (e, w) = edge e traversed away from end w. Next dart: arrive at
    // the far end, take the rotation successor there.
    let mut ring_pos: BTreeMap<EdgeEnd, (usize, usize)> = BTreeMap::new();
    for (v, ring) in map.rotation.iter().enumerate() {
        for (i, &end) in ring.iter().enumerate() {
            ring_pos.insert(end, (v, i));
        }
    }
    let next_dart = |d: EdgeEnd| -> EdgeEnd {
        let (e, w) = d;
        let arrive: EdgeEnd = (e, 1 - w);
        let (v, i) = ring_pos[&arrive];
        let ring = &map.rotation[v];
        ring[(i + 1) % ring.len()]
    };
    let mut used: BTreeSet<EdgeEnd> = BTreeSet::new();
    let mut faces = Vec::new();
    for ring in map.rotation.iter() {
        for &start in ring {
            if used.contains(&start) {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            loop {
                darts.push(d);
                used.insert(d);
                d = next_dart(d);
                if d == start {
                    break;
                }
            }
            faces.push(Face { darts });
        }
    }
    let euler = map.num_vertices as i64 - map.num_edges() as i64 + faces.len() as i64;
    if map.is_connected() && euler != 2 {
        return Err(PlanarError::NotSpherical(euler));
    }
    Ok(faces)
}

/// The dual multigraph: one vertex per face, one edge per primal edge
/// joining the faces on its two sides (a loop exactly when the primal edge
/// is a bridge).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub faces: Vec<Face>,
    /// For each primal edge, the two face indices on its sides.
    pub edge_faces: Vec<(usize, usize)>,
}

pub fn dual(map: &PlanarMap) -> Result<DualGraph, PlanarError> {
    let faces = trace_faces(map)?;
    let mut side: BTreeMap<EdgeEnd, usize> = BTreeMap::new();
    for (f, face) in faces.iter().enumerate() {
        for &d in &face.darts {
            side.insert(d, f);
        }
    }
    let edge_faces = (0..map.num_edges())
        .map(|e| (side[&(e, 0)], side[&(e, 1)]))
        .collect();
    Ok(DualGraph { faces, edge_faces })
}

/// A BFS spanning tree of the dual graph rooted at a face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualTree {
    pub root: usize,
    /// Per primal edge: is its dual a tree edge.
    pub in_tree: Vec<bool>,
    /// Per face: parent face and the primal edge crossing to it.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
}

/// BFS from the root; neighbors explored in primal edge-index order, with
/// an optional seed set of dual edges forced into the tree first.
pub fn dual_spanning_tree(
    map: &PlanarMap,
    dual_graph: &DualGraph,
    root: usize,
    seed_edges: &[usize],
) -> Result<DualTree, PlanarError> {
    let nf = dual_graph.faces.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf]; // (edge, other face)
    for (e, &(f1, f2)) in dual_graph.edge_faces.iter().enumerate() {
        if f1 != f2 {
            adj[f1].push((e, f2));
            adj[f2].push((e, f1));
        }
    }
    let mut in_tree = vec![false; map.num_edges()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nf];
    let mut depth = vec![usize::MAX; nf];
    let mut visited = vec![false; nf];
    visited[root] = true;
    depth[root] = 0;

    let mut frontier = VecDeque::from([root]);
    let seed: BTreeSet<usize> = seed_edges.iter().copied().collect();
    // Seed edges are absorbed eagerly: the moment one endpoint face is
    // visited, the seed edge claims the other, so a non-seed route can
    // never steal it. Sound for acyclic seed sets.
    macro_rules! absorb_seeds {
        () => {
            loop {
                let mut progress = false;
                for &e in &seed {
                    let (f1, f2) = dual_graph.edge_faces[e];
                    if f1 == f2 {
                        continue;
                    }
                    if visited[f1] != visited[f2] {
                        let (from, to) = if visited[f1] { (f1, f2) } else { (f2, f1) };
                        visited[to] = true;
                        in_tree[e] = true;
                        parent[to] = Some((from, e));
                        depth[to] = depth[from] + 1;
                        frontier.push_back(to);
                        progress = true;
                    }
                }
                if !progress {
                    break;
                }
            }
        };
    }
    absorb_seeds!();
    while let Some(f) = frontier.pop_front() {
        for &(e, g) in &adj[f] {
            if !visited[g] {
                visited[g] = true;
                in_tree[e] = true;
                parent[g] = Some((f, e));
                depth[g] = depth[f] + 1;
                frontier.push_back(g);
                absorb_seeds!();
            }
        }
    }
    if visited.iter().any(|&b| !b) {
        return Err(PlanarError::Internal("dual graph disconnected".into()));
    }
    for &e in seed_edges {
        if !in_tree[e] {
            return Err(PlanarError::Internal(format!(
                "seed dual edge {e} could not be included in the tree"
            )));
        }
    }
    Ok(DualTree { root, in_tree, parent, depth })
}

/// tb of a closed walk under the dividing-set count: minus the number of
/// its edges whose dual lies in the spanning tree.
pub fn lerp_tb(tree: &DualTree, cycle_edges: &[usize]) -> i64 {
    -(cycle_edges.iter().filter(|&&e| tree.in_tree[e]).count() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeStatus {
    CutEdge,
    /// Witness cycle (edge list of a closed walk) with tb = -1.
    Witness(Vec<usize>),
}

/// The realization certificate: map, dual tree, per-facial-cycle tb values,
/// and a Property-N status for every edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationCertificate {
    pub map: PlanarMap,
    pub dual: DualGraph,
    pub tree: DualTree,
    pub facial_tb: Vec<i64>,
    pub edge_status: Vec<EdgeStatus>,
}

impl RealizationCertificate {
    /// Re-validates Property N from scratch: every non-cut edge has a
    /// witness closed walk through it with tb exactly -1.
    pub fn revalidate(&self) -> Result<(), PlanarError> {
        for (e, status) in self.edge_status.iter().enumerate() {
            match status {
                EdgeStatus::CutEdge => {
                    let (f1, f2) = self.dual.edge_faces[e];
                    if f1 != f2 {
                        return Err(PlanarError::Internal(format!(
                            "edge {e} marked cut but has two distinct faces"
                        )));
                    }
                }
                EdgeStatus::Witness(cycle) => {
                    if !cycle.contains(&e) {
                        return Err(PlanarError::Internal(format!(
                            "witness for edge {e} does not contain it"
                        )));
                    }
                    if !is_closed_walk(&self.map, cycle) {
                        return Err(PlanarError::Internal(format!(
                            "witness for edge {e} is not a closed walk"
                        )));
                    }
                    let tb = lerp_tb(&self.tree, cycle);
                    if tb != -1 {
                        return Err(PlanarError::Internal(format!(
                            "witness for edge {e} has tb {tb}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Multigraph-aware closed-walk check: an edge set traces a closed walk iff
/// every vertex meets an even number of its ends and the set is connected.
fn is_closed_walk(map: &PlanarMap, edges: &[usize]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for &e in edges {
        let (u, v) = map.edges[e];
        *deg.entry(u).or_default() += 1;
        *deg.entry(v).or_default() += 1;
    }
    if deg.values().any(|&d| d % 2 != 0) {
        return false;
    }
    let verts: Vec<usize> = deg.keys().copied().collect();
    let mut reach = BTreeSet::from([verts[0]]);
    let mut grew = true;
    while grew {
        grew = false;
        for &e in edges {
            let (u, v) = map.edges[e];
            if reach.contains(&u) != reach.contains(&v) {
                reach.insert(u);
                reach.insert(v);
                grew = true;
            }
        }
    }
    verts.iter().all(|v| reach.contains(v))
}

/// Builds the Property-N certificate: dual BFS tree from face 0, facial tb
/// assignment, and per-edge witnesses from subtree boundaries.
pub fn realize_property_n(map: &PlanarMap) -> Result<RealizationCertificate, PlanarError> {
    realize_property_n_seeded(map, &[])
}

fn realize_property_n_seeded(
    map: &PlanarMap,
    seed_edges: &[usize],
) -> Result<RealizationCertificate, PlanarError> {
    map.validate()?;
    if !map.is_connected() {
        return Err(PlanarError::Disconnected);
    }
    let dual_graph = dual(map)?;
    let tree = dual_spanning_tree(map, &dual_graph, 0, seed_edges)?;
    let facial_tb = dual_graph
        .faces
        .iter()
        .map(|f| lerp_tb(&tree, &f.edges()))
        .collect();

    // subtree(f) = faces of f's rooted subtree; the boundary of their union
    // crosses the tree exactly once (at f's parent edge), so it is the
    // witness for every edge on it.
    let nf = dual_graph.faces.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for f in 0..nf {
        if let Some((p, _)) = tree.parent[f] {
            children[p].push(f);
        }
    }
    let mut in_subtree: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nf];
    let mut order: Vec<usize> = (0..nf).collect();
    order.sort_by_key(|&f| std::cmp::Reverse(tree.depth[f]));
    for &f in &order {
        let mut s = BTreeSet::from([f]);
        for &c in &children[f] {
            let child_set = in_subtree[c].clone();
            s.extend(child_set);
        }
        in_subtree[f] = s;
    }
    let boundary_of = |f: usize| -> Vec<usize> {
        let s = &in_subtree[f];
        (0..map.num_edges())
            .filter(|&e| {
                let (f1, f2) = dual_graph.edge_faces[e];
                s.contains(&f1) != s.contains(&f2)
            })
            .collect()
    };

    let mut edge_status = Vec::with_capacity(map.num_edges());
    for e in 0..map.num_edges() {
        let (f1, f2) = dual_graph.edge_faces[e];
        if f1 == f2 {
            edge_status.push(EdgeStatus::CutEdge);
            continue;
        }
        // Use whichever side's subtree excludes the other face.
        let f = if in_subtree[f1].contains(&f2) { f2 } else { f1 };
        let cycle = boundary_of(f);
        debug_assert!(cycle.contains(&e));
        edge_status.push(EdgeStatus::Witness(cycle));
    }

    let cert = RealizationCertificate {
        map: map.clone(),
        dual: dual_graph,
        tree,
        facial_tb,
        edge_status,
    };
    cert.revalidate()?;
    Ok(cert)
}

/// A theta-subdivision witness: two branch vertices with three internally
/// vertex-disjoint paths between them (paths as edge lists).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaWitness {
    pub v1: usize,
    pub v2: usize,
    pub paths: [Vec<usize>; 3],
}

/// A wedge witness: two cycles meeting only at the hub vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeWitness {
    pub hub: usize,
    pub cycles: [Vec<usize>; 2],
}

/// Searches for three internally vertex-disjoint paths between some vertex
/// pair, by unit-vertex-capacity max-flow on the split graph. Parallel
/// edges count as independent paths.
pub fn has_theta_subdivision(map: &PlanarMap) -> Option<ThetaWitness> {
    let n = map.num_vertices;
    for v1 in 0..n {
        for v2 in (v1 + 1)..n {
            if let Some(paths) = disjoint_paths(map, v1, v2, 3) {
                let [a, b, c] = <[Vec<usize>; 3]>::try_from(paths).ok()?;
                return Some(ThetaWitness { v1, v2, paths: [a, b, c] });
            }
        }
    }
    None
}

/// Searches for two cycles sharing exactly one vertex. Loops count as
/// cycles.
pub fn has_wedge_subdivision(map: &PlanarMap) -> Option<WedgeWitness> {
    let n = map.num_vertices;
    for hub in 0..n {
        let mut cycles: Vec<(Vec<usize>, BTreeSet<usize>)> = Vec::new();
        for (e, &(u, v)) in map.edges.iter().enumerate() {
            if u == hub && v == hub {
                cycles.push((vec![e], BTreeSet::new()));
            }
        }
        // Non-loop cycles through the hub: two distinct incident edges plus
        // a path between their far endpoints avoiding the hub.
        let incident: Vec<(usize, usize)> = map
            .edges
            .iter()
            .enumerate()
            .filter_map(|(e, &(u, v))| {
                if u == hub && v != hub {
                    Some((e, v))
                } else if v == hub && u != hub {
                    Some((e, u))
                } else {
                    None
                }
            })
            .collect();
        for i in 0..incident.len() {
            for j in (i + 1)..incident.len() {
                let (e1, a) = incident[i];
                let (e2, b) = incident[j];
                if let Some((path, mut interior)) = path_avoiding(map, a, b, hub, &[e1, e2]) {
                    let mut cycle = vec![e1];
                    cycle.extend(path.iter());
                    cycle.push(e2);
                    interior.insert(a);
                    interior.insert(b);
                    cycles.push((cycle, interior));
                }
            }
        }
        for i in 0..cycles.len() {
            for j in (i + 1)..cycles.len() {
                let (c1, s1) = &cycles[i];
                let (c2, s2) = &cycles[j];
                if s1.is_disjoint(s2) && c1.iter().all(|e| !c2.contains(e)) {
                    return Some(WedgeWitness {
                        hub,
                        cycles: [c1.clone(), c2.clone()],
                    });
                }
            }
        }
    }
    None
}

/// Simple path from `a` to `b` avoiding a vertex and a set of edges;
/// returns the edge list and the interior vertex set.
fn path_avoiding(
    map: &PlanarMap,
    a: usize,
    b: usize,
    forbidden: usize,
    banned_edges: &[usize],
) -> Option<(Vec<usize>, BTreeSet<usize>)> {
    if a == b {
        return Some((vec![], BTreeSet::new()));
    }
    if a == forbidden || b == forbidden {
        return None;
    }
    let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a, forbidden]);
    while let Some(u) = queue.pop_front() {
        for (e, &(x, y)) in map.edges.iter().enumerate() {
            if banned_edges.contains(&e) {
                continue;
            }
            let other = if x == u {
                y
            } else if y == u {
                x
            } else {
                continue;
            };
            if seen.contains(&other) {
                continue;
            }
            seen.insert(other);
            prev.insert(other, (u, e));
            if other == b {
                let mut path = Vec::new();
                let mut interior = BTreeSet::new();
                let mut cur = b;
                while cur != a {
                    let (p, e) = prev[&cur];
                    path.push(e);
                    if cur != b {
                        interior.insert(cur);
                    }
                    cur = p;
                }
                path.reverse();
                return Some((path, interior));
            }
            queue.push_back(other);
        }
    }
    None
}

/// Up to `want` internally vertex-disjoint paths from s to t: unit vertex
/// capacities via vertex splitting, BFS augmentation, then flow
/// decomposition into explicit edge paths.
fn disjoint_paths(map: &PlanarMap, s: usize, t: usize, want: usize) -> Option<Vec<Vec<usize>>> {
    let n = map.num_vertices;
    #[derive(Clone)]
    struct ArcRec {
        to: usize,
        cap: i32,
        rev: usize,
        edge: Option<usize>,
    }
    fn add(g: &mut [Vec<ArcRec>], u: usize, v: usize, cap: i32, edge: Option<usize>) {
        let ru = g[v].len();
        let rv = g[u].len();
        g[u].push(ArcRec { to: v, cap, rev: ru, edge });
        g[v].push(ArcRec { to: u, cap: 0, rev: rv, edge });
    }
    let mut g: Vec<Vec<ArcRec>> = vec![Vec::new(); 2 * n];
    for v in 0..n {
        let cap = if v == s || v == t { i32::MAX / 2 } else { 1 };
        add(&mut g, 2 * v, 2 * v + 1, cap, None);
    }
    for (e, &(u, v)) in map.edges.iter().enumerate() {
        if u == v {
            continue;
        }
        add(&mut g, 2 * u + 1, 2 * v, 1, Some(e));
        add(&mut g, 2 * v + 1, 2 * u, 1, Some(e));
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < want {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; 2 * n];
        let mut queue = VecDeque::from([src]);
        let mut seen = vec![false; 2 * n];
        seen[src] = true;
        'bfs: while let Some(u) = queue.pop_front() {
            for (i, arc) in g[u].iter().enumerate() {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    pred[arc.to] = Some((u, i));
                    if arc.to == dst {
                        break 'bfs;
                    }
                    queue.push_back(arc.to);
                }
            }
        }
        if !seen[dst] {
            break;
        }
        let mut v = dst;
        while v != src {
            let (u, i) = pred[v].unwrap();
            let rev = g[u][i].rev;
            g[u][i].cap -= 1;
            g[v][rev].cap += 1;
            v = u;
        }
        flow += 1;
    }
    if flow < want {
        return None;
    }
    // Decompose the integral flow into edge paths.
    let mut used: Vec<Vec<bool>> = g.iter().map(|arcs| vec![false; arcs.len()]).collect();
    let mut paths = Vec::new();
    for _ in 0..want {
        let mut path = Vec::new();
        let mut u = src;
        let mut guard = 0;
        while u != dst {
            guard += 1;
            if guard > 10 * (n + map.num_edges() + 2) {
                return None;
            }
            let mut advanced = false;
            for i in 0..g[u].len() {
                let arc = &g[u][i];
                let carries_flow = arc.cap == 0 && g[arc.to][arc.rev].cap > 0;
                let is_forward = arc.edge.is_some() || (u % 2 == 0 && arc.to == 2 * (u / 2) + 1);
                if is_forward && carries_flow && !used[u][i] {
                    used[u][i] = true;
                    if let Some(e) = arc.edge {
                        path.push(e);
                    }
                    u = arc.to;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return None;
            }
        }
        paths.push(path);
    }
    Some(paths)
}

/// One member of an infinite family of pairwise-distinct nondestabilizeable
/// realizations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub k: usize,
    /// Twist site: hub vertex and the pair of twisted edges.
    pub vertex: usize,
    pub twisted_edges: (usize, usize),
    /// Theta case: tb of the distinguished cycle after k positive twists.
    pub distinguished_tb: Option<i64>,
    /// Wedge case: linking number of the two pushoff components after 2k
    /// positive twists.
    pub pushoff_linking: Option<i64>,
    /// The distinguished cycle (theta case).
    pub distinguished_cycle: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteFamily {
    pub base: RealizationCertificate,
    pub members: Vec<FamilyDescriptor>,
}

/// Builds the family of pairwise-distinct realizations: in the theta case
/// the dual tree is re-chosen to contain the duals of two rotation-adjacent
/// witness edges, so every cycle through both has tb <= -2; k positive
/// twists then drop the distinguished cycle's tb by k while all Property-N
/// witnesses persist. In the wedge case 2k positive twists fix all cycle
/// invariants and the pushoff linking number k distinguishes the members.
pub fn infinite_family(map: &PlanarMap, k_max: usize) -> Result<InfiniteFamily, PlanarError> {
    map.validate()?;
    if !map.is_connected() {
        return Err(PlanarError::Disconnected);
    }
    if let Some(theta) = has_theta_subdivision(map) {
        let duals = dual(map)?;
        for hub in [theta.v1, theta.v2] {
            let first_edges: Vec<usize> = theta
                .paths
                .iter()
                .map(|p| {
                    *p.iter()
                        .find(|&&e| {
                            let (u, v) = map.edges[e];
                            u == hub || v == hub
                        })
                        .expect("path touches the branch vertex")
                })
                .collect();
            let ring = &map.rotation[hub];
            for i in 0..ring.len() {
                let (ea, _) = ring[i];
                let (eb, _) = ring[(i + 1) % ring.len()];
                if ea == eb || !first_edges.contains(&ea) || !first_edges.contains(&eb) {
                    continue;
                }
                // Both duals must be tree-seedable: not bridges, and not a
                // parallel pair bounding the same two faces.
                let (fa1, fa2) = duals.edge_faces[ea];
                let (fb1, fb2) = duals.edge_faces[eb];
                let mut sa = [fa1, fa2];
                let mut sb = [fb1, fb2];
                sa.sort_unstable();
                sb.sort_unstable();
                if sa == sb || fa1 == fa2 || fb1 == fb2 {
                    continue;
                }
                let cert = realize_property_n_seeded(map, &[ea, eb])?;
                let pa = theta.paths.iter().find(|p| p.contains(&ea)).unwrap();
                let pb = theta.paths.iter().find(|p| p.contains(&eb)).unwrap();
                let mut cycle: Vec<usize> = pa.clone();
                cycle.extend(pb.iter().copied());
                let base_tb = lerp_tb(&cert.tree, &cycle);
                if base_tb > -2 {
                    return Err(PlanarError::Internal(format!(
                        "seeded tree gives distinguished tb {base_tb} > -2"
                    )));
                }
                let members = (0..=k_max)
                    .map(|k| FamilyDescriptor {
                        k,
                        vertex: hub,
                        twisted_edges: (ea, eb),
                        distinguished_tb: Some(base_tb - k as i64),
                        pushoff_linking: None,
                        distinguished_cycle: cycle.clone(),
                    })
                    .collect();
                return Ok(InfiniteFamily { base: cert, members });
            }
        }
        return Err(PlanarError::Internal(
            "no rotation-adjacent pair of theta path edges at a branch vertex".into(),
        ));
    }
    if let Some(wedge) = has_wedge_subdivision(map) {
        let ring = &map.rotation[wedge.hub];
        for i in 0..ring.len() {
            let (ea, _) = ring[i];
            let (eb, _) = ring[(i + 1) % ring.len()];
            let in_c1 = |e: usize| wedge.cycles[0].contains(&e);
            let in_c2 = |e: usize| wedge.cycles[1].contains(&e);
            let split = (in_c1(ea) && in_c2(eb)) || (in_c2(ea) && in_c1(eb));
            if !split || ea == eb {
                continue;
            }
            let cert = realize_property_n(map)?;
            let members = (0..=k_max)
                .map(|k| FamilyDescriptor {
                    k,
                    vertex: wedge.hub,
                    twisted_edges: (ea, eb),
                    distinguished_tb: None,
                    // One positive crossing pair between the two pushoff
                    // components per two twists.
                    pushoff_linking: Some(k as i64),
                    distinguished_cycle: vec![],
                })
                .collect();
            return Ok(InfiniteFamily { base: cert, members });
        }
        return Err(PlanarError::Internal(
            "no rotation-adjacent pair splitting the wedge cycles".into(),
        ));
    }
    Err(PlanarError::NoWitness)
}

/// Exports a theta map's certificate as an explicit front whose tb vector
/// matches the certificate's facial assignment.
pub fn theta_certificate_front(cert: &RealizationCertificate) -> Result<FrontDiagram, PlanarError> {
    let map = &cert.map;
    if map.num_vertices != 2 || map.num_edges() != 3 {
        return Err(PlanarError::Internal("not a theta map".into()));
    }
    let mut tb = [0i64; 3];
    for i in 0..3 {
        tb[i] = lerp_tb(&cert.tree, &[i, (i + 1) % 3]);
    }
    let rot = pick_admissible_rot(tb)
        .ok_or_else(|| PlanarError::Internal(format!("no admissible rot for tb {tb:?}")))?;
    let pair = crate::classify::InvariantPair::new(tb, rot);
    let recipe = realize::stab_recipe(&pair).map_err(|e| PlanarError::Internal(e.to_string()))?;
    realize::apply_recipe(&recipe).map_err(|e| PlanarError::Internal(e.to_string()))
}

fn pick_admissible_rot(tb: [i64; 3]) -> Option<[i64; 3]> {
    let range = |t: i64| (t + 1)..=(-1 - t);
    for r1 in range(tb[0]) {
        for r2 in range(tb[1]) {
            for r3 in range(tb[2]) {
                let pair = crate::classify::InvariantPair::new(tb, [r1, r2, r3]);
                if crate::classify::is_admissible(&pair).0 {
                    return Some([r1, r2, r3]);
                }
            }
        }
    }
    None
}

/// The wedge front: one 4-valent vertex, two loop edges, both maximal
/// unknots, with the given number of positive vertex twists applied to the
/// adjacent inter-loop pair.
pub fn wedge_front(twists: usize) -> Result<FrontDiagram, PlanarError> {
    let d = FrontDiagram {
        edges: vec!["a".into(), "b".into()],
        vertices: vec![VertexDecl { id: "w".into(), valence: 4 }],
        events: vec![
            Event::Vertex {
                pos: 1,
                id: "w".into(),
                left: vec![],
                right: vec!["a".into(), "b".into(), "b".into(), "a".into()],
            },
            Event::RightCusp { pos: 2 },
            Event::RightCusp { pos: 1 },
        ],
        trusted_trivial: true,
    };
    let mut out = d;
    for _ in 0..twists {
        out = moves::vertex_twist(&out, "w", "a", "b", StabSign::Positive)
            .map_err(|e| PlanarError::Internal(e.to_string()))?;
    }
    Ok(out)
}

/// Pushoff linking number of the two wedge components after the given
/// number of positive twists: half the signed crossing count, one crossing
/// pair per two twists.
pub fn wedge_pushoff_linking(twists: usize) -> HalfInt {
    HalfInt::half_of(twists as i64)
}

/// Standard test maps.
pub mod maps {
    use super::PlanarMap;

    /// Two vertices joined by three parallel edges.
    pub fn theta() -> PlanarMap {
        PlanarMap {
            num_vertices: 2,
            edges: vec![(0, 1), (0, 1), (0, 1)],
            rotation: vec![
                vec![(0, 0), (1, 0), (2, 0)],
                vec![(2, 1), (1, 1), (0, 1)],
            ],
        }
    }

    /// Two loops at one vertex.
    pub fn wedge() -> PlanarMap {
        PlanarMap {
            num_vertices: 1,
            edges: vec![(0, 0), (0, 0)],
            rotation: vec![vec![(0, 0), (0, 1), (1, 0), (1, 1)]],
        }
    }

    /// Complete graph on 4 vertices with a planar rotation.
    pub fn k4() -> PlanarMap {
        PlanarMap {
            num_vertices: 4,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            rotation: vec![
                vec![(0, 0), (2, 0), (1, 0)],
                vec![(0, 1), (3, 0), (4, 0)],
                vec![(1, 1), (5, 0), (3, 1)],
                vec![(2, 1), (4, 1), (5, 1)],
            ],
        }
    }

    /// The 3-cube with its planar embedding.
    pub fn cube() -> PlanarMap {
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ];
        let rotation = vec![
            vec![(0, 0), (8, 0), (3, 1)],
            vec![(1, 0), (9, 0), (0, 1)],
            vec![(2, 0), (10, 0), (1, 1)],
            vec![(3, 0), (11, 0), (2, 1)],
            vec![(8, 1), (4, 0), (7, 1)],
            vec![(9, 1), (5, 0), (4, 1)],
            vec![(10, 1), (6, 0), (5, 1)],
            vec![(11, 1), (7, 0), (6, 1)],
        ];
        PlanarMap { num_vertices: 8, edges, rotation }
    }

    /// Wheel W4: a 4-cycle plus a hub joined to every rim vertex.
    pub fn wheel4() -> PlanarMap {
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (0, 4),
            (1, 4),
            (2, 4),
            (3, 4),
        ];
        let rotation = vec![
            vec![(0, 0), (4, 0), (3, 1)],
            vec![(1, 0), (5, 0), (0, 1)],
            vec![(2, 0), (6, 0), (1, 1)],
            vec![(3, 0), (7, 0), (2, 1)],
            vec![(4, 1), (5, 1), (6, 1), (7, 1)],
        ];
        PlanarMap { num_vertices: 5, edges, rotation }
    }

    /// The triangular prism.
    pub fn prism() -> PlanarMap {
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ];
        let rotation = vec![
            vec![(0, 0), (6, 0), (2, 1)],
            vec![(1, 0), (7, 0), (0, 1)],
            vec![(2, 0), (8, 0), (1, 1)],
            vec![(6, 1), (3, 0), (5, 1)],
            vec![(7, 1), (4, 0), (3, 1)],
            vec![(8, 1), (5, 0), (4, 1)],
        ];
        PlanarMap { num_vertices: 6, edges, rotation }
    }

    /// A path on three vertices: every edge is a bridge.
    pub fn path3() -> PlanarMap {
        PlanarMap {
            num_vertices: 3,
            edges: vec![(0, 1), (1, 2)],
            rotation: vec![vec![(0, 0)], vec![(0, 1), (1, 0)], vec![(1, 1)]],
        }
    }

    /// Two triangles sharing one vertex.
    pub fn bowtie() -> PlanarMap {
        let edges = vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let rotation = vec![
            vec![(0, 0), (2, 1), (3, 0), (5, 1)],
            vec![(1, 0), (0, 1)],
            vec![(2, 0), (1, 1)],
            vec![(4, 0), (3, 1)],
            vec![(5, 0), (4, 1)],
        ];
        PlanarMap { num_vertices: 5, edges, rotation }
    }

    /// Two triangles joined by a bridge.
    pub fn dumbbell() -> PlanarMap {
        let edges = vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 3)];
        let rotation = vec![
            vec![(0, 0), (2, 1), (3, 0)],
            vec![(1, 0), (0, 1)],
            vec![(2, 0), (1, 1)],
            vec![(3, 1), (4, 0), (6, 1)],
            vec![(5, 0), (4, 1)],
            vec![(6, 0), (5, 1)],
        ];
        PlanarMap { num_vertices: 6, edges, rotation }
    }
}

/// Deterministic random connected planar maps, grown by face subdivision
/// from a triangle so planarity holds by construction.
pub fn random_planar_map(seed: u64, max_vertices: usize) -> PlanarMap {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut map = PlanarMap {
        num_vertices: 3,
        edges: vec![(0, 1), (1, 2), (2, 0)],
        rotation: vec![
            vec![(0, 0), (2, 1)],
            vec![(1, 0), (0, 1)],
            vec![(2, 0), (1, 1)],
        ],
    };
    let steps = rng.gen_range(3..=14);
    for _ in 0..steps {
        if map.num_vertices >= max_vertices {
            break;
        }
        let faces = trace_faces(&map).expect("grown maps stay valid");
        let f = faces[rng.gen_range(0..faces.len())].clone();
        if f.darts.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..f.darts.len());
        let j = rng.gen_range(0..f.darts.len());
        if i == j {
            continue;
        }
        let da = f.darts[i];
        let db = f.darts[j];
        let va = map.end_vertex(da);
        let vb = map.end_vertex(db);
        let fresh = rng.gen_bool(0.5) || va == vb;
        // Inserting right before each chosen dart keeps the new edge inside
        // the chosen face.
        if fresh {
            let w = map.num_vertices;
            map.num_vertices += 1;
            let e1 = map.edges.len();
            map.edges.push((va, w));
            let e2 = map.edges.len();
            map.edges.push((w, vb));
            insert_before(&mut map.rotation[va], da, (e1, 0));
            map.rotation.push(vec![(e1, 1), (e2, 0)]);
            insert_before(&mut map.rotation[vb], db, (e2, 1));
        } else {
            let e = map.edges.len();
            map.edges.push((va, vb));
            insert_before(&mut map.rotation[va], da, (e, 0));
            insert_before(&mut map.rotation[vb], db, (e, 1));
        }
        debug_assert!(map.validate().is_ok());
    }
    map
}

fn insert_before(ring: &mut Vec<EdgeEnd>, before: EdgeEnd, end: EdgeEnd) {
    let i = ring.iter().position(|&d| d == before).expect("dart in ring");
    ring.insert(i, end);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_map_has_three_faces() {
        let faces = trace_faces(&maps::theta()).unwrap();
        assert_eq!(faces.len(), 3);
    }

    #[test]
    fn k4_has_four_triangles() {
        let faces = trace_faces(&maps::k4()).unwrap();
        assert_eq!(faces.len(), 4);
        for f in &faces {
            assert_eq!(f.darts.len(), 3);
        }
    }

    #[test]
    fn single_loop_has_two_faces() {
        let map = PlanarMap {
            num_vertices: 1,
            edges: vec![(0, 0)],
            rotation: vec![vec![(0, 0), (0, 1)]],
        };
        assert_eq!(trace_faces(&map).unwrap().len(), 2);
    }

    #[test]
    fn dual_of_theta_is_a_three_cycle() {
        let d = dual(&maps::theta()).unwrap();
        assert_eq!(d.faces.len(), 3);
        let mut pairs: Vec<(usize, usize)> = d
            .edge_faces
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 3, "each face pair shares one edge");
    }

    #[test]
    fn dual_of_tree_is_loops_only() {
        let d = dual(&maps::path3()).unwrap();
        assert_eq!(d.faces.len(), 1);
        assert!(d.edge_faces.iter().all(|&(a, b)| a == b));
        let t = dual_spanning_tree(&maps::path3(), &d, 0, &[]).unwrap();
        assert!(t.in_tree.iter().all(|&b| !b));
    }

    #[test]
    fn dual_of_k4_is_k4() {
        let d = dual(&maps::k4()).unwrap();
        assert_eq!(d.faces.len(), 4);
        let mut pairs: Vec<(usize, usize)> = d
            .edge_faces
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn tree_has_faces_minus_one_edges() {
        for map in [maps::theta(), maps::k4(), maps::cube(), maps::wheel4(), maps::prism()] {
            let d = dual(&map).unwrap();
            let t = dual_spanning_tree(&map, &d, 0, &[]).unwrap();
            let tree_edges = t.in_tree.iter().filter(|&&b| b).count();
            assert_eq!(tree_edges, d.faces.len() - 1);
        }
    }

    #[test]
    fn theta_certificate_matches_hand_count() {
        let cert = realize_property_n(&maps::theta()).unwrap();
        let mut tbs: Vec<i64> = (0..3)
            .map(|i| lerp_tb(&cert.tree, &[i, (i + 1) % 3]))
            .collect();
        tbs.sort();
        assert_eq!(tbs, vec![-2, -1, -1]);
        for status in &cert.edge_status {
            assert!(matches!(status, EdgeStatus::Witness(_)));
        }
        cert.revalidate().unwrap();
    }

    #[test]
    fn k4_all_edges_witnessed() {
        let cert = realize_property_n(&maps::k4()).unwrap();
        for status in &cert.edge_status {
            let EdgeStatus::Witness(w) = status else { panic!("cut edge in K4") };
            assert_eq!(lerp_tb(&cert.tree, w), -1);
        }
    }

    #[test]
    fn path_graph_all_cut_edges() {
        let cert = realize_property_n(&maps::path3()).unwrap();
        assert!(cert.edge_status.iter().all(|s| matches!(s, EdgeStatus::CutEdge)));
    }

    #[test]
    fn leaf_faces_have_tb_minus_one() {
        let cert = realize_property_n(&maps::k4()).unwrap();
        let nf = cert.dual.faces.len();
        let mut child_count = vec![0usize; nf];
        for f in 0..nf {
            if let Some((p, _)) = cert.tree.parent[f] {
                child_count[p] += 1;
            }
        }
        for f in 0..nf {
            if child_count[f] == 0 && f != cert.tree.root {
                assert_eq!(cert.facial_tb[f], -1, "leaf face {f}");
            }
        }
    }

    #[test]
    fn subdivision_witnesses() {
        assert!(has_theta_subdivision(&maps::k4()).is_some());
        assert!(has_theta_subdivision(&maps::bowtie()).is_none());
        assert!(has_wedge_subdivision(&maps::bowtie()).is_some());
        assert!(has_theta_subdivision(&maps::dumbbell()).is_none());
        assert!(has_wedge_subdivision(&maps::dumbbell()).is_none());
        assert!(has_wedge_subdivision(&maps::wedge()).is_some());
        assert!(has_theta_subdivision(&maps::theta()).is_some());
    }

    #[test]
    fn theta_witness_paths_are_disjoint() {
        let map = maps::cube();
        let w = has_theta_subdivision(&map).unwrap();
        let mut interiors: Vec<BTreeSet<usize>> = Vec::new();
        for p in &w.paths {
            assert!(!p.is_empty());
            let mut verts = BTreeSet::new();
            let mut cur = w.v1;
            for &e in p {
                let (a, b) = map.edges[e];
                assert!(a == cur || b == cur, "path is connected");
                cur = if a == cur { b } else { a };
                if cur != w.v2 {
                    verts.insert(cur);
                }
            }
            assert_eq!(cur, w.v2, "path ends at v2");
            interiors.push(verts);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(interiors[i].is_disjoint(&interiors[j]));
            }
        }
    }

    #[test]
    fn infinite_family_theta_case() {
        let fam = infinite_family(&maps::theta(), 3).unwrap();
        let tbs: Vec<i64> = fam
            .members
            .iter()
            .map(|m| m.distinguished_tb.unwrap())
            .collect();
        assert_eq!(tbs, vec![-2, -3, -4, -5]);
        fam.base.revalidate().unwrap();
    }

    #[test]
    fn infinite_family_wedge_case() {
        let fam = infinite_family(&maps::wedge(), 5).unwrap();
        let lks: Vec<i64> = fam
            .members
            .iter()
            .map(|m| m.pushoff_linking.unwrap())
            .collect();
        assert_eq!(lks, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn family_requires_witness() {
        assert!(matches!(
            infinite_family(&maps::dumbbell(), 2),
            Err(PlanarError::NoWitness)
        ));
    }

    #[test]
    fn theta_front_export_matches_certificate() {
        let cert = realize_property_n(&maps::theta()).unwrap();
        let front = theta_certificate_front(&cert).unwrap();
        let inv = front.theta_invariants().unwrap();
        let mut got = inv.tb.to_vec();
        got.sort();
        let mut want: Vec<i64> = (0..3)
            .map(|i| lerp_tb(&cert.tree, &[i, (i + 1) % 3]))
            .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn wedge_front_loops_are_maximal_unknots() {
        let d = wedge_front(0).unwrap();
        assert!(d.validate().is_empty());
        for edge in ["a", "b"] {
            let t = d
                .traverse_cycle(&[(edge.into(), crate::frontdiagram::Dir::Forward)])
                .unwrap();
            assert_eq!(t.tb(), -1, "loop {edge}");
            assert_eq!(t.rot(), 0, "loop {edge}");
        }
    }

    #[test]
    fn wedge_twists_fix_loop_invariants() {
        for twists in [2, 4, 6] {
            let d = wedge_front(twists).unwrap();
            assert!(d.validate().is_empty());
            for edge in ["a", "b"] {
                let t = d
                    .traverse_cycle(&[(edge.into(), crate::frontdiagram::Dir::Forward)])
                    .unwrap();
                assert_eq!(t.tb(), -1);
            }
            assert_eq!(
                wedge_pushoff_linking(twists),
                HalfInt::from_int(twists as i64 / 2)
            );
        }
    }

    #[test]
    fn random_maps_validate_and_certify() {
        for seed in 0..20 {
            let map = random_planar_map(seed, 12);
            map.validate().unwrap();
            assert!(map.is_connected());
            let cert = realize_property_n(&map).unwrap();
            cert.revalidate().unwrap();
        }
    }
}
