//! Collapsing a connected subgraph to a composite vertex and refining it back.
//!
//! The composite vertex carries the restricted graph of groups verbatim, so
//! collapse followed by refinement is the identity up to graph isomorphism.

use crate::error::GogError;
use crate::gog::{Attachment, EdgeData, GraphOfGroups, GroupDesc, VertexData};
use std::collections::BTreeSet;
use std::sync::Arc;

/// A connected subgraph: vertex and edge index sets. Every listed edge must
/// have both endpoints listed.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
}

impl Subgraph {
    pub fn from_names(
        g: &GraphOfGroups,
        vertex_names: &[&str],
        edge_names: &[&str],
    ) -> Result<Subgraph, GogError> {
        let mut vertices = BTreeSet::new();
        for n in vertex_names {
            vertices.insert(g.vertex_index(n)?);
        }
        let mut edges = BTreeSet::new();
        for n in edge_names {
            edges.insert(g.edge_index(n)?);
        }
        Ok(Subgraph { vertices, edges })
    }

    fn check_connected(&self, g: &GraphOfGroups) -> Result<(), GogError> {
        if self.vertices.is_empty() {
            return Err(GogError::NotConnected);
        }
        for &e in &self.edges {
            let e = &g.edges[e];
            if !self.vertices.contains(&e.d0) || !self.vertices.contains(&e.d1) {
                return Err(GogError::NotConnected);
            }
        }
        let start = *self.vertices.iter().next().unwrap();
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &ei in &self.edges {
                let e = &g.edges[ei];
                for (a, b) in [(e.d0, e.d1), (e.d1, e.d0)] {
                    if a == v && self.vertices.contains(&b) && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        if seen.len() == self.vertices.len() {
            Ok(())
        } else {
            Err(GogError::NotConnected)
        }
    }
}

/// The restriction of g to a subgraph, reindexed.
pub fn restricted_graph(g: &GraphOfGroups, sub: &Subgraph) -> GraphOfGroups {
    let vlist: Vec<usize> = sub.vertices.iter().copied().collect();
    let vpos = |v: usize| vlist.iter().position(|&x| x == v).unwrap();
    GraphOfGroups {
        prime: g.prime,
        vertices: vlist.iter().map(|&v| g.vertices[v].clone()).collect(),
        edges: sub
            .edges
            .iter()
            .map(|&e| {
                let e = &g.edges[e];
                EdgeData {
                    name: e.name.clone(),
                    d0: vpos(e.d0),
                    d1: vpos(e.d1),
                    group: e.group.clone(),
                    attach: e.attach.clone(),
                }
            })
            .collect(),
    }
}

/// Collapses a connected subgraph to one composite vertex. Boundary edge ends
/// are re-targeted through the inclusion of their old endpoint group into the
/// nested graph. Collapsing a single edgeless vertex is the identity.
pub fn collapse_subgraph(g: &GraphOfGroups, sub: &Subgraph) -> Result<GraphOfGroups, GogError> {
    sub.check_connected(g)?;
    if sub.vertices.len() == 1 && sub.edges.is_empty() {
        return Ok(g.clone());
    }
    let nested = restricted_graph(g, sub);
    let vlist: Vec<usize> = sub.vertices.iter().copied().collect();
    let nested_pos = |v: usize| vlist.iter().position(|&x| x == v).unwrap();
    let new_name = {
        let names: Vec<&str> = vlist.iter().map(|&v| g.vertices[v].name.as_str()).collect();
        names.join("+")
    };
    let mut vertices = vec![VertexData {
        name: new_name,
        group: GroupDesc::Composite(Arc::new(nested)),
    }];
    let mut vmap = vec![usize::MAX; g.vertices.len()];
    for (vi, v) in g.vertices.iter().enumerate() {
        if sub.vertices.contains(&vi) {
            vmap[vi] = 0;
        } else {
            vmap[vi] = vertices.len();
            vertices.push(v.clone());
        }
    }
    let mut edges = Vec::new();
    for (ei, e) in g.edges.iter().enumerate() {
        if sub.edges.contains(&ei) {
            continue;
        }
        let mut ne = e.clone();
        for end in 0..2 {
            let v = e.endpoint(end);
            if sub.vertices.contains(&v) {
                ne.attach[end] = Attachment::IntoComposite {
                    nested_vertex: nested_pos(v),
                    inner: Box::new(e.attach[end].clone()),
                };
            }
        }
        ne.d0 = vmap[e.d0];
        ne.d1 = vmap[e.d1];
        edges.push(ne);
    }
    Ok(GraphOfGroups { prime: g.prime, vertices, edges })
}

/// Caller-supplied re-routing of one boundary edge end inside the refinement.
#[derive(Debug, Clone)]
pub struct RefineAttach {
    pub edge: String,
    pub end: usize,
    pub nested_vertex: usize,
    pub inner: Attachment,
}

/// Refines a vertex: replaces v by the inner graph of groups.
///
/// Supported exactly when the vertex group is the composite descriptor of
/// `inner` (the collapse round trip) or when `inner` is the identity
/// single-vertex graph on the same group. Incident edge attachments follow
/// their recorded nested targets unless overridden; overrides are validated.
pub fn refine_at_vertex(
    g: &GraphOfGroups,
    vertex: &str,
    inner: &GraphOfGroups,
    overrides: &[RefineAttach],
) -> Result<GraphOfGroups, GogError> {
    let vi = g.vertex_index(vertex)?;
    let vgroup = &g.vertices[vi].group;

    // identity refinement
    if inner.vertices.len() == 1 && inner.edges.is_empty() {
        if inner.vertices[0].group == *vgroup {
            return Ok(g.clone());
        }
    }

    let composite_matches = matches!(&vgroup, GroupDesc::Composite(c) if c.as_ref() == inner);
    if !composite_matches {
        // order obstruction first: an incident edge group larger than every
        // inner vertex group cannot be elliptic in the refinement
        for (ei, _end, _img) in g.incident_edge_groups(vi) {
            if let Some(edge_order) = g.edges[ei].group.finite_order() {
                let fits = inner.vertices.iter().any(|w| match w.group.finite_order() {
                    Some(o) => edge_order <= o && o % edge_order == 0,
                    None => true,
                });
                if !fits {
                    return Err(GogError::EdgeGroupNotElliptic {
                        edge: g.edges[ei].name.clone(),
                        reason: format!(
                            "edge group of order {} exceeds every inner vertex group",
                            edge_order
                        ),
                    });
                }
            }
        }
        return Err(GogError::BadRefinement(
            "vertex group is not the composite of the supplied inner graph; \
             only recorded composites and identity refinements are certified"
                .into(),
        ));
    }

    // splice: inner vertices (renamed on clash), inner edges, boundary re-targeting
    let existing: BTreeSet<&str> = g
        .vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != vi)
        .map(|(_, v)| v.name.as_str())
        .collect();
    let inner_names: Vec<String> = inner
        .vertices
        .iter()
        .map(|w| {
            if existing.contains(w.name.as_str()) {
                format!("{}.{}", vertex, w.name)
            } else {
                w.name.clone()
            }
        })
        .collect();

    let mut vertices = Vec::new();
    let mut vmap = vec![usize::MAX; g.vertices.len()];
    let mut inner_offset = vec![usize::MAX; inner.vertices.len()];
    for (i, v) in g.vertices.iter().enumerate() {
        if i == vi {
            for (wi, w) in inner.vertices.iter().enumerate() {
                inner_offset[wi] = vertices.len();
                vertices.push(VertexData { name: inner_names[wi].clone(), group: w.group.clone() });
            }
        } else {
            vmap[i] = vertices.len();
            vertices.push(v.clone());
        }
    }

    let mut edges = Vec::new();
    for w in &inner.edges {
        let mut ne = w.clone();
        ne.d0 = inner_offset[w.d0];
        ne.d1 = inner_offset[w.d1];
        edges.push(ne);
    }
    for e in &g.edges {
        let mut ne = e.clone();
        for end in 0..2 {
            if e.endpoint(end) != vi {
                continue;
            }
            let ov = overrides
                .iter()
                .find(|o| o.edge == e.name && o.end == end);
            let (nested_vertex, inner_att) = match ov {
                Some(o) => (o.nested_vertex, o.inner.clone()),
                None => match &e.attach[end] {
                    Attachment::IntoComposite { nested_vertex, inner } => {
                        (*nested_vertex, (**inner).clone())
                    }
                    _ => {
                        return Err(GogError::EdgeGroupNotElliptic {
                            edge: e.name.clone(),
                            reason: "attachment does not name an inner vertex and no override given"
                                .into(),
                        })
                    }
                },
            };
            if nested_vertex >= inner.vertices.len() {
                return Err(GogError::BadRefinement(format!(
                    "override for edge '{}' names nested vertex {} out of range",
                    e.name, nested_vertex
                )));
            }
            if end == 0 {
                ne.d0 = inner_offset[nested_vertex];
            } else {
                ne.d1 = inner_offset[nested_vertex];
            }
            ne.attach[end] = inner_att;
        }
        for end in 0..2 {
            if e.endpoint(end) != vi {
                if end == 0 {
                    ne.d0 = vmap[e.d0];
                } else {
                    ne.d1 = vmap[e.d1];
                }
            }
        }
        edges.push(ne);
    }
    let out = GraphOfGroups { prime: g.prime, vertices, edges };
    out.validate()?;
    Ok(out)
}
