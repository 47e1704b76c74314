//! Graphs of groups: representation, validation, incidence data.
//!
//! The central object of every operation. Vertex groups are finite p-groups,
//! finitely generated free groups, or composite descriptors (nested graphs of
//! groups produced by collapse and the tree of cylinders). Edge groups are
//! finite or free, attached injectively at both ends.

pub mod collapse;
pub mod grushko;
pub mod h1;
pub mod iso;
pub mod presentation;
pub mod reduce;

use crate::error::GogError;
use crate::groups::automaton::SubgroupAutomaton;
use crate::groups::finite::{Elt, FiniteGroup, GroupHom, Subgroup};
use crate::groups::free::{FreeGroupContext, Word};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum GroupDesc {
    Finite(Arc<FiniteGroup>),
    Free(Arc<FreeGroupContext>),
    /// A nested graph of groups standing for its fundamental group.
    Composite(Arc<GraphOfGroups>),
}

impl PartialEq for GroupDesc {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupDesc::Finite(a), GroupDesc::Finite(b)) => a == b,
            (GroupDesc::Free(a), GroupDesc::Free(b)) => a == b,
            (GroupDesc::Composite(a), GroupDesc::Composite(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for GroupDesc {}

impl GroupDesc {
    pub fn prime(&self) -> u32 {
        match self {
            GroupDesc::Finite(g) => g.prime,
            GroupDesc::Free(f) => f.prime,
            GroupDesc::Composite(g) => g.prime,
        }
    }

    pub fn is_trivial_group(&self) -> bool {
        match self {
            GroupDesc::Finite(g) => g.is_trivial(),
            GroupDesc::Free(_) => false,
            GroupDesc::Composite(g) => {
                g.edges.is_empty() && g.vertices.len() == 1 && g.vertices[0].group.is_trivial_group()
            }
        }
    }

    pub fn finite_order(&self) -> Option<usize> {
        match self {
            GroupDesc::Finite(g) => Some(g.order()),
            GroupDesc::Free(_) => None,
            GroupDesc::Composite(g) => {
                if g.edges.is_empty() && g.vertices.len() == 1 {
                    g.vertices[0].group.finite_order()
                } else {
                    None
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupDesc::Finite(g) => {
                if g.name.is_empty() {
                    format!("|{}|", g.order())
                } else {
                    g.name.clone()
                }
            }
            GroupDesc::Free(f) => format!("F_{}", f.rank),
            GroupDesc::Composite(g) => format!("Pi1[{}v,{}e]", g.vertices.len(), g.edges.len()),
        }
    }
}

/// Injective attachment of an edge group into an endpoint vertex group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Attachment {
    /// Edge group trivial; embeds anywhere.
    Trivial,
    /// Finite edge group into a finite vertex group.
    Finite(GroupHom),
    /// Free edge group into a free vertex group: images of the edge-group
    /// generators.
    Free(Vec<Word>),
    /// Into a composite vertex group, through one of its nested vertices.
    IntoComposite { nested_vertex: usize, inner: Box<Attachment> },
}

impl Attachment {
    pub fn nested_target(&self) -> Option<usize> {
        match self {
            Attachment::IntoComposite { nested_vertex, .. } => Some(*nested_vertex),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexData {
    pub name: String,
    pub group: GroupDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeData {
    pub name: String,
    pub d0: usize,
    pub d1: usize,
    pub group: GroupDesc,
    /// attach[0] at d0, attach[1] at d1.
    pub attach: [Attachment; 2],
}

impl EdgeData {
    pub fn is_loop(&self) -> bool {
        self.d0 == self.d1
    }

    pub fn endpoint(&self, end: usize) -> usize {
        if end == 0 {
            self.d0
        } else {
            self.d1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphOfGroups {
    pub prime: u32,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
}

/// The image of an edge group at one end, in whatever form the vertex group
/// admits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EdgeImage {
    Trivial,
    FiniteSub(Subgroup),
    FreeWords(Vec<Word>),
    IntoComposite { nested_vertex: usize, inner: Box<EdgeImage> },
}

impl GraphOfGroups {
    pub fn vertex_index(&self, name: &str) -> Result<usize, GogError> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| GogError::NoSuchVertex(name.to_string()))
    }

    pub fn edge_index(&self, name: &str) -> Result<usize, GogError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| GogError::NoSuchEdge(name.to_string()))
    }

    /// Edge ends incident to v: (edge index, end).
    /// Loops contribute both ends.
    pub fn incident_ends(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.d0 == v {
                out.push((i, 0));
            }
            if e.d1 == v {
                out.push((i, 1));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.d0, e.d1), (e.d1, e.d0)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Full validation: type invariants plus injectivity certification of
    /// every attachment.
    pub fn validate(&self) -> Result<(), GogError> {
        if !self.is_connected() {
            return Err(GogError::Disconnected);
        }
        for v in &self.vertices {
            if v.group.prime() != self.prime {
                return Err(GogError::PrimeMismatch(format!(
                    "vertex '{}' has prime {}",
                    v.name,
                    v.group.prime()
                )));
            }
            if let GroupDesc::Composite(inner) = &v.group {
                inner.validate()?;
            }
            if let GroupDesc::Finite(g) = &v.group {
                g.validate_p_group()?;
            }
        }
        let mut names: Vec<&str> = self.vertices.iter().map(|v| v.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.vertices.len() {
            return Err(GogError::PrimeMismatch("duplicate vertex names".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.d0 >= self.vertices.len() || e.d1 >= self.vertices.len() {
                return Err(GogError::NoSuchVertex(format!("edge '{}' endpoint", e.name)));
            }
            if e.group.prime() != self.prime {
                return Err(GogError::PrimeMismatch(format!("edge '{}'", e.name)));
            }
            if let GroupDesc::Composite(_) = e.group {
                return Err(GogError::BadAttachment {
                    edge: e.name.clone(),
                    end: 0,
                    reason: "edge groups must be finite or free".into(),
                });
            }
            if let GroupDesc::Finite(g) = &e.group {
                g.validate_p_group()?;
            }
            for end in 0..2 {
                let vtx = &self.vertices[e.endpoint(end)].group;
                self.check_attachment(i, end, &e.group, &e.attach[end], vtx)?;
            }
        }
        Ok(())
    }

    fn check_attachment(
        &self,
        edge: usize,
        end: usize,
        egroup: &GroupDesc,
        att: &Attachment,
        vgroup: &GroupDesc,
    ) -> Result<(), GogError> {
        let ename = self.edges[edge].name.clone();
        match (att, vgroup) {
            (Attachment::Trivial, _) => {
                if !egroup.is_trivial_group() {
                    return Err(GogError::BadAttachment {
                        edge: ename,
                        end,
                        reason: "trivial attachment with nontrivial edge group".into(),
                    });
                }
                Ok(())
            }
            (Attachment::Finite(hom), GroupDesc::Finite(target)) => {
                let GroupDesc::Finite(source) = egroup else {
                    return Err(GogError::BadAttachment {
                        edge: ename,
                        end,
                        reason: "finite attachment on non-finite edge group".into(),
                    });
                };
                hom.check(source, target).map_err(|e| GogError::BadAttachment {
                    edge: ename.clone(),
                    end,
                    reason: e.to_string(),
                })?;
                if !hom.is_injective() {
                    return Err(GogError::NonInjectiveAttachment {
                        edge: ename,
                        end,
                        reason: format!(
                            "|edge group| = {} exceeds image size",
                            source.order()
                        ),
                    });
                }
                Ok(())
            }
            (Attachment::Free(images), GroupDesc::Free(target)) => {
                let GroupDesc::Free(source) = egroup else {
                    return Err(GogError::BadAttachment {
                        edge: ename,
                        end,
                        reason: "free attachment on non-free edge group".into(),
                    });
                };
                if images.len() != source.rank {
                    return Err(GogError::BadAttachment {
                        edge: ename,
                        end,
                        reason: format!(
                            "expected {} generator images, got {}",
                            source.rank,
                            images.len()
                        ),
                    });
                }
                for w in images {
                    if !w.is_reduced() || w.max_generator() > target.rank {
                        return Err(GogError::BadAttachment {
                            edge: ename.clone(),
                            end,
                            reason: "image word not reduced or out of range".into(),
                        });
                    }
                }
                // injective iff the image subgroup has full rank
                let aut = SubgroupAutomaton::new(target, images).map_err(GogError::Word)?;
                if aut.subgroup_rank() != source.rank {
                    return Err(GogError::NonInjectiveAttachment {
                        edge: ename,
                        end,
                        reason: format!(
                            "image rank {} < edge rank {}",
                            aut.subgroup_rank(),
                            source.rank
                        ),
                    });
                }
                Ok(())
            }
            (Attachment::IntoComposite { nested_vertex, inner }, GroupDesc::Composite(g)) => {
                if *nested_vertex >= g.vertices.len() {
                    return Err(GogError::BadAttachment {
                        edge: ename,
                        end,
                        reason: "nested vertex out of range".into(),
                    });
                }
                self.check_attachment(edge, end, egroup, inner, &g.vertices[*nested_vertex].group)
            }
            _ => Err(GogError::BadAttachment {
                edge: ename,
                end,
                reason: "attachment kind incompatible with vertex group kind".into(),
            }),
        }
    }

    /// The image subgroup of the attachment of edge e at the given end.
    pub fn edge_image(&self, e: usize, end: usize) -> EdgeImage {
        let edge = &self.edges[e];
        Self::attachment_image(&edge.group, &edge.attach[end])
    }

    fn attachment_image(egroup: &GroupDesc, att: &Attachment) -> EdgeImage {
        match att {
            Attachment::Trivial => EdgeImage::Trivial,
            Attachment::Finite(hom) => EdgeImage::FiniteSub(hom.image_subgroup()),
            Attachment::Free(images) => EdgeImage::FreeWords(images.clone()),
            Attachment::IntoComposite { nested_vertex, inner } => EdgeImage::IntoComposite {
                nested_vertex: *nested_vertex,
                inner: Box::new(Self::attachment_image(egroup, inner)),
            },
        }
    }

    /// Per-spec incidence data: for each edge end at v, the image subgroup of
    /// its attachment. Loops contribute both ends.
    pub fn incident_edge_groups(&self, v: usize) -> Vec<(usize, usize, EdgeImage)> {
        self.incident_ends(v)
            .into_iter()
            .map(|(e, end)| (e, end, self.edge_image(e, end)))
            .collect()
    }

    /// Is the attachment at this end a bijection onto the vertex group?
    /// (The fictitious-edge test. Recognized exactly for finite targets; for
    /// free targets when the images visibly generate.)
    pub fn attachment_bijective(&self, e: usize, end: usize) -> bool {
        let edge = &self.edges[e];
        let vgroup = &self.vertices[edge.endpoint(end)].group;
        Self::attachment_bijective_inner(&edge.group, &edge.attach[end], vgroup)
    }

    fn attachment_bijective_inner(egroup: &GroupDesc, att: &Attachment, vgroup: &GroupDesc) -> bool {
        match (att, vgroup) {
            (Attachment::Trivial, g) => g.is_trivial_group(),
            (Attachment::Finite(hom), GroupDesc::Finite(target)) => {
                let Some(order) = egroup.finite_order() else { return false };
                order == target.order() && hom.is_injective()
            }
            (Attachment::Free(images), GroupDesc::Free(target)) => {
                let GroupDesc::Free(source) = egroup else { return false };
                if source.rank != target.rank {
                    return false;
                }
                match SubgroupAutomaton::new(target, images) {
                    Ok(aut) => aut.is_whole_group(),
                    Err(_) => false,
                }
            }
            (Attachment::IntoComposite { nested_vertex, inner }, GroupDesc::Composite(g)) => {
                // bijective onto the composite only if the composite is a bare
                // single vertex and the inner attachment is onto it
                g.edges.is_empty()
                    && g.vertices.len() == 1
                    && *nested_vertex == 0
                    && Self::attachment_bijective_inner(egroup, inner, &g.vertices[0].group)
            }
            _ => false,
        }
    }

    /// Edges of a BFS spanning tree, deterministic in vertex/edge order.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut in_tree = Vec::new();
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(0usize);
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if e.is_loop() {
                    continue;
                }
                for (a, b) in [(e.d0, e.d1), (e.d1, e.d0)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        in_tree.push(i);
                        queue.push_back(b);
                    }
                }
            }
        }
        in_tree.sort_unstable();
        in_tree
    }

    pub fn is_tree_shaped(&self) -> bool {
        self.edges.iter().all(|e| !e.is_loop())
            && self.edges.len() + 1 == self.vertices.len()
            && self.is_connected()
    }

    /// Checks that the provided edge set is a spanning tree.
    pub fn check_spanning_tree(&self, tree: &[usize]) -> Result<(), GogError> {
        if tree.len() + 1 != self.vertices.len() {
            return Err(GogError::NotSpanningTree);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &i in tree {
                let e = &self.edges[i];
                if e.is_loop() {
                    return Err(GogError::NotSpanningTree);
                }
                for (a, b) in [(e.d0, e.d1), (e.d1, e.d0)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if seen.into_iter().all(|s| s) {
            Ok(())
        } else {
            Err(GogError::NotSpanningTree)
        }
    }
}

/// Helpers for building graphs in code and tests.
pub mod build {
    use super::*;

    pub fn finite(g: FiniteGroup) -> GroupDesc {
        GroupDesc::Finite(Arc::new(g))
    }

    pub fn free(f: FreeGroupContext) -> GroupDesc {
        GroupDesc::Free(Arc::new(f))
    }

    pub fn vertex(name: &str, group: GroupDesc) -> VertexData {
        VertexData { name: name.to_string(), group }
    }

    pub fn finite_edge(
        name: &str,
        d0: usize,
        d1: usize,
        group: FiniteGroup,
        images0: &[Elt],
        images1: &[Elt],
        v0: &FiniteGroup,
        v1: &FiniteGroup,
    ) -> Result<EdgeData, GogError> {
        let a0 = GroupHom::from_gen_images(&group, v0, images0)?;
        let a1 = GroupHom::from_gen_images(&group, v1, images1)?;
        Ok(EdgeData {
            name: name.to_string(),
            d0,
            d1,
            group: GroupDesc::Finite(Arc::new(group)),
            attach: [Attachment::Finite(a0), Attachment::Finite(a1)],
        })
    }

    /// One-edge amalgam of two finite groups over a common finite edge group.
    pub fn amalgam_finite(
        prime: u32,
        g1: FiniteGroup,
        g2: FiniteGroup,
        edge: FiniteGroup,
        images1: &[Elt],
        images2: &[Elt],
    ) -> Result<GraphOfGroups, GogError> {
        let e = finite_edge("e", 0, 1, edge, images1, images2, &g1, &g2)?;
        Ok(GraphOfGroups {
            prime,
            vertices: vec![vertex("v1", finite(g1)), vertex("v2", finite(g2))],
            edges: vec![e],
        })
    }

    /// One-loop HNN over a finite vertex group.
    pub fn hnn_finite(
        prime: u32,
        g1: FiniteGroup,
        edge: FiniteGroup,
        images0: &[Elt],
        images1: &[Elt],
    ) -> Result<GraphOfGroups, GogError> {
        let e = finite_edge("t", 0, 0, edge, images0, images1, &g1, &g1)?;
        Ok(GraphOfGroups {
            prime,
            vertices: vec![vertex("v", finite(g1))],
            edges: vec![e],
        })
    }

    /// One-edge amalgam of two free groups over a cyclic edge group
    /// ⟨c⟩ with images c1, c2.
    pub fn amalgam_free_cyclic(
        f1: FreeGroupContext,
        f2: FreeGroupContext,
        c1: Word,
        c2: Word,
    ) -> GraphOfGroups {
        let prime = f1.prime;
        let edge = FreeGroupContext::new(prime, &["c"]);
        GraphOfGroups {
            prime,
            vertices: vec![vertex("v1", free(f1)), vertex("v2", free(f2))],
            edges: vec![EdgeData {
                name: "e".into(),
                d0: 0,
                d1: 1,
                group: GroupDesc::Free(Arc::new(edge)),
                attach: [Attachment::Free(vec![c1]), Attachment::Free(vec![c2])],
            }],
        }
    }

    /// One-loop HNN over a free vertex group with cyclic edge group.
    pub fn hnn_free_cyclic(f: FreeGroupContext, c: Word, c_t: Word) -> GraphOfGroups {
        let prime = f.prime;
        let edge = FreeGroupContext::new(prime, &["c"]);
        GraphOfGroups {
            prime,
            vertices: vec![vertex("v", free(f))],
            edges: vec![EdgeData {
                name: "t".into(),
                d0: 0,
                d1: 0,
                group: GroupDesc::Free(Arc::new(edge)),
                attach: [Attachment::Free(vec![c]), Attachment::Free(vec![c_t])],
            }],
        }
    }

    /// Bouquet of n loops with trivial groups on a trivial vertex.
    pub fn bouquet(prime: u32, n: usize) -> GraphOfGroups {
        let triv = FiniteGroup::trivial(prime);
        GraphOfGroups {
            prime,
            vertices: vec![vertex("v", finite(triv.clone()))],
            edges: (0..n)
                .map(|i| EdgeData {
                    name: format!("t{}", i),
                    d0: 0,
                    d1: 0,
                    group: GroupDesc::Finite(Arc::new(triv.clone())),
                    attach: [Attachment::Trivial, Attachment::Trivial],
                })
                .collect(),
        }
    }

    pub fn single_vertex(prime: u32, name: &str, group: GroupDesc) -> GraphOfGroups {
        GraphOfGroups { prime, vertices: vec![vertex(name, group)], edges: vec![] }
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;
    use crate::groups::finite::FiniteGroup;

    pub fn c4_c2_c4() -> GraphOfGroups {
        let c4a = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c4b = FiniteGroup::cyclic(2, 4, "b", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        amalgam_finite(2, c4a, c4b, c2, &[2], &[2]).unwrap()
    }

    #[test]
    fn validate_single_vertex() {
        let g = single_vertex(2, "v", finite(FiniteGroup::cyclic(2, 4, "a", "C4")));
        g.validate().unwrap();
    }

    #[test]
    fn validate_c4_amalgam() {
        let g = c4_c2_c4();
        g.validate().unwrap();
        assert_eq!(g.incident_edge_groups(0).len(), 1);
        match g.edge_image(0, 0) {
            EdgeImage::FiniteSub(s) => assert_eq!(s.members, vec![0, 2]),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn order_drop_is_non_injective() {
        let c4 = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        // edge group C4 into vertex C2: the quotient map is a hom but not injective
        let g = amalgam_finite(2, c2.clone(), c4.clone(), c4.clone(), &[1], &[1]).unwrap();
        assert!(matches!(
            g.validate(),
            Err(GogError::NonInjectiveAttachment { .. })
        ));
    }

    #[test]
    fn disconnected_rejected() {
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let g = GraphOfGroups {
            prime: 2,
            vertices: vec![vertex("v1", finite(c2.clone())), vertex("v2", finite(c2))],
            edges: vec![],
        };
        assert!(matches!(g.validate(), Err(GogError::Disconnected)));
    }

    #[test]
    fn prime_mismatch_rejected() {
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let c3 = FiniteGroup::cyclic(3, 3, "d", "C3");
        let g = GraphOfGroups {
            prime: 2,
            vertices: vec![vertex("v1", finite(c2)), vertex("v2", finite(c3))],
            edges: vec![EdgeData {
                name: "e".into(),
                d0: 0,
                d1: 1,
                group: GroupDesc::Finite(Arc::new(FiniteGroup::trivial(2))),
                attach: [Attachment::Trivial, Attachment::Trivial],
            }],
        };
        assert!(matches!(g.validate(), Err(GogError::PrimeMismatch(_))));
    }

    #[test]
    fn loop_contributes_two_ends() {
        let f = FreeGroupContext::new(2, &["a"]);
        let a = f.gen(0);
        let g = hnn_free_cyclic(f, a.clone(), a.clone());
        g.validate().unwrap();
        assert_eq!(g.incident_edge_groups(0).len(), 2);
        // isolated vertex: empty list
        let s = single_vertex(2, "v", finite(FiniteGroup::cyclic(2, 2, "x", "C2")));
        assert!(s.incident_edge_groups(0).is_empty());
    }

    #[test]
    fn free_attachment_injectivity() {
        let f2 = FreeGroupContext::new(2, &["a", "b"]);
        let fx = FreeGroupContext::new(2, &["x", "y"]);
        let g = amalgam_free_cyclic(f2.clone(), fx.clone(), f2.gen(0), fx.gen(0));
        g.validate().unwrap();
        // rank-2 edge group with dependent images: not injective
        let edge = FreeGroupContext::new(2, &["c", "d"]);
        let bad = GraphOfGroups {
            prime: 2,
            vertices: vec![vertex("v1", free(f2.clone())), vertex("v2", free(fx))],
            edges: vec![EdgeData {
                name: "e".into(),
                d0: 0,
                d1: 1,
                group: GroupDesc::Free(Arc::new(edge)),
                attach: [
                    Attachment::Free(vec![f2.gen(0), f2.gen(0).pow(2)]),
                    Attachment::Free(vec![Word(vec![1]), Word(vec![2])]),
                ],
            }],
        };
        assert!(matches!(
            bad.validate(),
            Err(GogError::NonInjectiveAttachment { .. })
        ));
    }

    #[test]
    fn spanning_tree_and_bijectivity() {
        let g = c4_c2_c4();
        assert_eq!(g.spanning_tree(), vec![0]);
        assert!(!g.attachment_bijective(0, 0));
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let c4 = FiniteGroup::cyclic(2, 4, "a", "C4");
        // C2 -> C2 identity on one side: bijective there
        let fict = amalgam_finite(2, c2.clone(), c4, c2.clone(), &[1], &[2]).unwrap();
        assert!(fict.attachment_bijective(0, 0));
        assert!(!fict.attachment_bijective(0, 1));
    }
}
