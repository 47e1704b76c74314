//! Finite-radius portions of the standard Bass-Serre tree: cells are coset
//! normal forms, incidence follows the coset formulas
//! d0(gG(e)) = gG(d0(e)) and d1(gG(e)) = g t_e G(d1(e)) verbatim.

use crate::error::BallError;
use crate::gog::{GraphOfGroups, GroupDesc};
use crate::groups::finite::Elt;
use crate::bass_serre::nf::{NfContext, PathWord, VElt};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const DEFAULT_CELL_CAP: usize = 50_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallVertex {
    /// Vertex of the quotient graph this cell lies over.
    pub gamma_vertex: usize,
    /// Canonical coset representative (normal form with trivial last
    /// syllable).
    pub rep: PathWord,
    pub dist: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallEdge {
    pub gamma_edge: usize,
    pub rep: PathWord,
    /// Indices into the ball's vertex list.
    pub d0: usize,
    pub d1: usize,
}

pub struct TreeBall {
    pub ctx: NfContext,
    pub radius: usize,
    pub base: usize,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<BallEdge>,
    /// Set when free-vertex branching was truncated by word length.
    pub truncated: bool,
}

impl TreeBall {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.d0 == v || e.d1 == v).count()
    }

    /// Neighbors with the connecting edge.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            adj[e.d0].push((e.d1, ei));
            adj[e.d1].push((e.d0, ei));
        }
        adj
    }

    /// Unique reduced path between two ball vertices: (vertex list, edge list).
    pub fn geodesic(&self, v: usize, w: usize) -> Result<(Vec<usize>, Vec<usize>), BallError> {
        if v >= self.vertices.len() || w >= self.vertices.len() {
            return Err(BallError::NotInBall(format!("vertex index {}", v.max(w))));
        }
        let adj = self.adjacency();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[v] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            if x == w {
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen[w] {
            return Err(BallError::NotInBall("no path in ball".into()));
        }
        let mut vs = vec![w];
        let mut es = Vec::new();
        let mut cur = w;
        while let Some((p, e)) = prev[cur] {
            es.push(e);
            vs.push(p);
            cur = p;
        }
        vs.reverse();
        es.reverse();
        Ok((vs, es))
    }

    pub fn distance(&self, v: usize, w: usize) -> Result<usize, BallError> {
        Ok(self.geodesic(v, w)?.1.len())
    }
}

/// Builds the radius-r ball around the coset 1·G(base_vertex).
pub fn tree_ball(
    g: &GraphOfGroups,
    base_vertex: usize,
    radius: usize,
    cell_cap: usize,
) -> Result<TreeBall, BallError> {
    let ctx = NfContext::new(g)?;
    let base_rep = ctx.vertex_coset_key(&PathWord::identity(&ctx, base_vertex))?;
    let mut vertices = vec![BallVertex { gamma_vertex: base_vertex, rep: base_rep.clone(), dist: 0 }];
    let mut vkey: HashMap<PathWord, usize> = HashMap::new();
    vkey.insert(base_rep, 0);
    let mut edges: Vec<BallEdge> = Vec::new();
    let mut ekey: HashMap<PathWord, usize> = HashMap::new();
    let mut truncated = false;

    let mut frontier = vec![0usize];
    for layer in 0..radius {
        let mut next = Vec::new();
        for &bv in &frontier {
            let gamma_v = vertices[bv].gamma_vertex;
            let g_rep = vertices[bv].rep.clone();
            for (ei, end) in ctx.graph.incident_ends(gamma_v) {
                // transversal of the image at this end enumerates the edge
                // cells incident to the cell through this end
                let (reps, trunc) = ctx.end_transversal(ei, end, radius)?;
                truncated |= trunc;
                for s in reps {
                    // path word of the edge cell: g · s (then a step if end 1)
                    let s_pw = PathWord {
                        base: gamma_v,
                        syllables: vec![s.clone()],
                        steps: vec![],
                    };
                    let mut at_d0 = ctx.multiply(&g_rep, &s_pw);
                    if end == 1 {
                        // arrived cells g·s·t_e^{ -1 }·G(e): step backward to d0
                        let e = &ctx.graph.edges[ei];
                        let back = PathWord {
                            base: e.d1,
                            syllables: vec![ctx.identity_elt(e.d1), ctx.identity_elt(e.d0)],
                            steps: vec![(ei, 1)],
                        };
                        at_d0 = ctx.multiply(&at_d0, &back);
                    }
                    let cell_key = ctx.edge_coset_key(&at_d0, ei)?;
                    if ekey.contains_key(&cell_key) {
                        continue;
                    }
                    // endpoints per the coset formulas
                    let d0_key = ctx.vertex_coset_key(&cell_key)?;
                    let e = &ctx.graph.edges[ei];
                    let step = PathWord {
                        base: e.d0,
                        syllables: vec![ctx.identity_elt(e.d0), ctx.identity_elt(e.d1)],
                        steps: vec![(ei, 0)],
                    };
                    let d1_key = ctx.vertex_coset_key(&ctx.multiply(&cell_key, &step))?;
                    let mut resolve = |key: PathWord, gamma: usize| -> Result<usize, BallError> {
                        if let Some(&i) = vkey.get(&key) {
                            return Ok(i);
                        }
                        if vertices.len() + edges.len() >= cell_cap {
                            return Err(BallError::BudgetExceeded { cap: cell_cap });
                        }
                        let i = vertices.len();
                        vertices.push(BallVertex { gamma_vertex: gamma, rep: key.clone(), dist: layer + 1 });
                        vkey.insert(key, i);
                        next.push(i);
                        Ok(i)
                    };
                    let i0 = resolve(d0_key, e.d0)?;
                    let i1 = resolve(d1_key, e.d1)?;
                    if vertices.len() + edges.len() >= cell_cap {
                        return Err(BallError::BudgetExceeded { cap: cell_cap });
                    }
                    ekey.insert(cell_key.clone(), edges.len());
                    edges.push(BallEdge { gamma_edge: ei, rep: cell_key, d0: i0, d1: i1 });
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(TreeBall { ctx, radius, base: base_vertex, vertices, edges, truncated })
}

/// Exact incidence re-check: for every edge cell, d0(gG(e)) = gG(d0(e)) and
/// d1(gG(e)) = g t_e G(d1(e)).
pub fn check_incidence_formulas(ball: &TreeBall) -> Result<bool, BallError> {
    for e in &ball.edges {
        let ctx = &ball.ctx;
        let edge = &ctx.graph.edges[e.gamma_edge];
        let d0_key = ctx.vertex_coset_key(&e.rep)?;
        if d0_key != ball.vertices[e.d0].rep {
            return Ok(false);
        }
        let step = PathWord {
            base: edge.d0,
            syllables: vec![ctx.identity_elt(edge.d0), ctx.identity_elt(edge.d1)],
            steps: vec![(e.gamma_edge, 0)],
        };
        let d1_key = ctx.vertex_coset_key(&ctx.multiply(&e.rep, &step))?;
        if d1_key != ball.vertices[e.d1].rep {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Expected degree of a ball vertex over a finite vertex group: the sum of
/// indices [G(v) : image] over incident ends.
pub fn expected_degree(g: &GraphOfGroups, gamma_v: usize) -> Option<usize> {
    let GroupDesc::Finite(vg) = &g.vertices[gamma_v].group else {
        return None;
    };
    let mut total = 0usize;
    for (ei, end) in g.incident_ends(gamma_v) {
        let img = g.edge_image(ei, end);
        let size = match img {
            crate::gog::EdgeImage::Trivial => 1,
            crate::gog::EdgeImage::FiniteSub(s) => s.order(),
            _ => return None,
        };
        total += vg.order() / size;
    }
    Some(total)
}

/// Does the group element fix the given ball vertex cell? Exact: membership
/// of rep^{-1} g rep in the vertex group image.
pub fn fixes_vertex(ball: &TreeBall, elt: &PathWord, v: usize) -> Result<bool, BallError> {
    let ctx = &ball.ctx;
    let rep = &ball.vertices[v].rep;
    let moved = ctx.multiply(&ctx.multiply(&ctx.invert(rep), elt), rep);
    let nf = ctx.normal_form(&moved)?;
    Ok(nf.steps.is_empty())
}

/// Does the group element fix the given ball edge cell? Exact: membership of
/// rep^{-1} g rep in the attached d0 image of the edge group.
pub fn fixes_edge(ball: &TreeBall, elt: &PathWord, e: usize) -> Result<bool, BallError> {
    let ctx = &ball.ctx;
    let cell = &ball.edges[e];
    let rep = &cell.rep;
    let moved = ctx.multiply(&ctx.multiply(&ctx.invert(rep), elt), rep);
    let nf = ctx.normal_form(&moved)?;
    if !nf.steps.is_empty() {
        return Ok(false);
    }
    let gamma_e = cell.gamma_edge;
    let d0 = ctx.graph.edges[gamma_e].d0;
    in_edge_image(ctx, gamma_e, 0, d0, &nf.syllables[0])
}

pub(crate) fn in_edge_image(
    ctx: &NfContext,
    edge: usize,
    end: usize,
    vertex: usize,
    s: &VElt,
) -> Result<bool, BallError> {
    // public-ish wrapper over the context's membership test
    ctx.in_image_public(edge, end, vertex, s)
}

/// Stabilizer elements of a ball vertex cell as path words, for finite
/// vertex groups: all g·x·g^{-1} with x in the vertex group.
pub fn vertex_stabilizer_elements(ball: &TreeBall, v: usize) -> Option<Vec<(Elt, PathWord)>> {
    let ctx = &ball.ctx;
    let cell = &ball.vertices[v];
    let GroupDesc::Finite(vg) = &ctx.graph.vertices[cell.gamma_vertex].group else {
        return None;
    };
    let mut out = Vec::new();
    for x in 0..vg.order() as Elt {
        let mid = PathWord {
            base: cell.gamma_vertex,
            syllables: vec![VElt::Finite(x)],
            steps: vec![],
        };
        let w = ctx.multiply(&ctx.multiply(&cell.rep, &mid), &ctx.invert(&cell.rep));
        out.push((x, w));
    }
    Some(out)
}
