//! Reduction: collapsing fictitious edges (non-loop edges with a bijective
//! attachment on one side) until none remain. The fundamental group is
//! unchanged; the trace records every collapse so it can be replayed.

use crate::error::GogError;
use crate::gog::{Attachment, GraphOfGroups, GroupDesc};
use crate::groups::finite::GroupHom;
use crate::groups::free::{
    apply_nielsen, nielsen_search_to_standard, FreeGroupContext, Word, DEFAULT_NIELSEN_DEPTH,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapseStep {
    pub edge: String,
    /// Which end carried the isomorphism (that endpoint is absorbed).
    pub iso_end: usize,
    pub removed_vertex: String,
    pub kept_vertex: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReductionTrace(pub Vec<CollapseStep>);

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Finds a fictitious edge: non-loop with a recognized bijective attachment.
/// Returns (edge index, iso end).
pub fn find_fictitious(g: &GraphOfGroups) -> Option<(usize, usize)> {
    for (i, e) in g.edges.iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        for end in 0..2 {
            if g.attachment_bijective(i, end) {
                return Some((i, end));
            }
        }
    }
    None
}

pub fn is_reduced(g: &GraphOfGroups) -> bool {
    find_fictitious(g).is_none()
}

/// Collapses one fictitious edge. The endpoint with the bijective attachment
/// is removed; every edge end formerly attached there is re-targeted through
/// partial-inverse-then-other-side.
pub fn collapse_fictitious_edge(
    g: &GraphOfGroups,
    edge_idx: usize,
) -> Result<(GraphOfGroups, CollapseStep), GogError> {
    let e = &g.edges[edge_idx];
    if e.is_loop() {
        return Err(GogError::NotFictitious(e.name.clone()));
    }
    let iso_end = if g.attachment_bijective(edge_idx, 0) {
        0
    } else if g.attachment_bijective(edge_idx, 1) {
        1
    } else {
        return Err(GogError::NotFictitious(e.name.clone()));
    };
    let removed = e.endpoint(iso_end);
    let kept = e.endpoint(1 - iso_end);
    let retarget = build_retarget(g, edge_idx, iso_end)?;

    let mut vertices = Vec::new();
    let mut vmap = vec![usize::MAX; g.vertices.len()];
    for (vi, v) in g.vertices.iter().enumerate() {
        if vi == removed {
            continue;
        }
        vmap[vi] = vertices.len();
        vertices.push(v.clone());
    }
    vmap[removed] = vmap[kept];

    let mut edges = Vec::new();
    for (fi, f) in g.edges.iter().enumerate() {
        if fi == edge_idx {
            continue;
        }
        let mut nf = f.clone();
        for end in 0..2 {
            if f.endpoint(end) == removed {
                nf.attach[end] = retarget(&f.attach[end])?;
            }
        }
        nf.d0 = vmap[f.d0];
        nf.d1 = vmap[f.d1];
        edges.push(nf);
    }
    let out = GraphOfGroups { prime: g.prime, vertices, edges };
    let step = CollapseStep {
        edge: e.name.clone(),
        iso_end,
        removed_vertex: g.vertices[removed].name.clone(),
        kept_vertex: g.vertices[kept].name.clone(),
    };
    Ok((out, step))
}

type Retarget<'a> = Box<dyn Fn(&Attachment) -> Result<Attachment, GogError> + 'a>;

/// Builds the map carrying attachments into the removed vertex group over to
/// the kept one: compose with ∂_kept ∘ ∂_iso^{-1}.
fn build_retarget<'a>(
    g: &'a GraphOfGroups,
    edge_idx: usize,
    iso_end: usize,
) -> Result<Retarget<'a>, GogError> {
    let e = &g.edges[edge_idx];
    let ename = e.name.clone();
    match (&e.attach[iso_end], &e.attach[1 - iso_end]) {
        (Attachment::Trivial, Attachment::Trivial) => {
            // removed vertex group is trivial: anything attached there is too
            Ok(Box::new(|att: &Attachment| match att {
                Attachment::Trivial | Attachment::Finite(_) => Ok(Attachment::Trivial),
                _ => Err(GogError::BadAttachment {
                    edge: "<retarget>".into(),
                    end: 0,
                    reason: "nontrivial attachment into a trivial vertex group".into(),
                }),
            }))
        }
        (Attachment::Finite(iso), other) => {
            let inv = iso
                .inverse_bijective()
                .ok_or_else(|| GogError::NotFictitious(ename.clone()))?;
            let phi: Box<dyn Fn(&GroupHom) -> GroupHom> = match other {
                Attachment::Finite(h) => {
                    let h = h.clone();
                    Box::new(move |att: &GroupHom| att.compose(&inv).compose(&h))
                }
                _ => return Err(GogError::NotFictitious(ename)),
            };
            Ok(Box::new(move |att: &Attachment| match att {
                Attachment::Trivial => Ok(Attachment::Trivial),
                Attachment::Finite(h) => Ok(Attachment::Finite(phi(h))),
                _ => Err(GogError::BadAttachment {
                    edge: "<retarget>".into(),
                    end: 0,
                    reason: "mixed attachment kinds at a fictitious collapse".into(),
                }),
            }))
        }
        (Attachment::Free(images), Attachment::Free(other_images)) => {
            let GroupDesc::Free(ectx) = &e.group else {
                return Err(GogError::NotFictitious(ename));
            };
            // expressions of the removed group's standard generators as words
            // in the edge-group letters, via the inverse Nielsen transcript
            let exprs = invert_free_basis(ectx, images, DEFAULT_NIELSEN_DEPTH)
                .ok_or_else(|| GogError::NotFictitious(ename.clone()))?;
            let other_images = other_images.clone();
            let substitute = move |w: &Word| -> Word {
                // w in removed-group letters -> edge letters -> kept letters
                let in_edge = substitute_word(w, &exprs);
                substitute_word(&in_edge, &other_images)
            };
            Ok(Box::new(move |att: &Attachment| match att {
                Attachment::Trivial => Ok(Attachment::Trivial),
                Attachment::Free(ws) => {
                    Ok(Attachment::Free(ws.iter().map(&substitute).collect()))
                }
                _ => Err(GogError::BadAttachment {
                    edge: "<retarget>".into(),
                    end: 0,
                    reason: "mixed attachment kinds at a fictitious collapse".into(),
                }),
            }))
        }
        _ => Err(GogError::NotFictitious(ename)),
    }
}

/// Substitutes letter i of w by exprs[i-1].
pub fn substitute_word(w: &Word, exprs: &[Word]) -> Word {
    let mut letters = Vec::new();
    for &l in &w.0 {
        let repl = &exprs[(l.unsigned_abs() as usize) - 1];
        if l > 0 {
            letters.extend(&repl.0);
        } else {
            letters.extend(repl.inverse().0.iter());
        }
    }
    Word::reduced(&letters)
}

/// Given a word-level basis (images of the edge generators forming a basis of
/// the target), returns words expressing the target's standard generators in
/// the edge-group letters. None when the bounded Nielsen search fails.
pub fn invert_free_basis(
    edge_ctx: &FreeGroupContext,
    images: &[Word],
    depth: usize,
) -> Option<Vec<Word>> {
    let target_rank = images.iter().map(|w| w.max_generator()).max().unwrap_or(0);
    let ctx = FreeGroupContext {
        rank: target_rank.max(images.len()),
        names: (0..target_rank.max(images.len())).map(|i| format!("x{}", i)).collect(),
        prime: edge_ctx.prime,
    };
    let transcript = nielsen_search_to_standard(&ctx, images, depth)?;
    // replay the transcript on the formal edge-generator tuple: the result
    // expresses each standard generator as a word in edge letters
    let mut formal: Vec<Word> = (0..images.len()).map(|i| Word(vec![(i as i32) + 1])).collect();
    for mv in &transcript {
        apply_nielsen(&mut formal, mv);
    }
    Some(formal)
}

/// Collapses fictitious edges until none remain.
pub fn reduce(g: &GraphOfGroups) -> Result<(GraphOfGroups, ReductionTrace), GogError> {
    let mut cur = g.clone();
    let mut steps = Vec::new();
    while let Some((idx, _)) = find_fictitious(&cur) {
        let (next, step) = collapse_fictitious_edge(&cur, idx)?;
        steps.push(step);
        cur = next;
    }
    Ok((cur, ReductionTrace(steps)))
}

/// Replays a trace on the input: collapses exactly the recorded edges in
/// order. Used to check that the trace reproduces the output.
pub fn replay_trace(g: &GraphOfGroups, trace: &ReductionTrace) -> Result<GraphOfGroups, GogError> {
    let mut cur = g.clone();
    for step in &trace.0 {
        let idx = cur.edge_index(&step.edge)?;
        let (next, got) = collapse_fictitious_edge(&cur, idx)?;
        if got.iso_end != step.iso_end || got.removed_vertex != step.removed_vertex {
            return Err(GogError::NotFictitious(format!(
                "trace mismatch at edge '{}'",
                step.edge
            )));
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::build::*;
    use crate::gog::h1::rank_mod_p;
    use crate::groups::finite::FiniteGroup;

    #[test]
    fn identity_on_reduced() {
        let c4a = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c4b = FiniteGroup::cyclic(2, 4, "b", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let g = amalgam_finite(2, c4a, c4b, c2, &[2], &[2]).unwrap();
        let (r, trace) = reduce(&g).unwrap();
        assert!(trace.is_empty());
        assert_eq!(r, g);
        assert!(is_reduced(&g));
    }

    #[test]
    fn fictitious_c2_edge_collapses_to_d4() {
        // C2 --(id | s)--> D4: fictitious on the C2 side
        let d4 = FiniteGroup::dihedral(4, ("r", "s"), "D4").unwrap();
        let s = d4.gens[1];
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let g = amalgam_finite(2, c2.clone(), d4.clone(), c2.clone(), &[1], &[s]).unwrap();
        assert!(!is_reduced(&g));
        let (r, trace) = reduce(&g).unwrap();
        assert_eq!(trace.0.len(), 1);
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(r.edges.len(), 0);
        match &r.vertices[0].group {
            GroupDesc::Finite(g) => assert_eq!(g.order(), 8),
            other => panic!("{:?}", other),
        }
        // rank preserved
        assert_eq!(rank_mod_p(&g), rank_mod_p(&r));
        // replay reproduces the output
        let replayed = replay_trace(&g, &trace).unwrap();
        assert_eq!(replayed, r);
    }

    #[test]
    fn chain_of_two_fictitious_edges() {
        // C2 --id--> C2 --id--> C4 (gen images: squares)
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let c4 = FiniteGroup::cyclic(2, 4, "a", "C4");
        let e1 = finite_edge("e1", 0, 1, c2.clone(), &[1], &[1], &c2, &c2).unwrap();
        let e2 = finite_edge("e2", 1, 2, c2.clone(), &[1], &[2], &c2, &c4).unwrap();
        let g = GraphOfGroups {
            prime: 2,
            vertices: vec![
                vertex("u", finite(c2.clone())),
                vertex("v", finite(c2.clone())),
                vertex("w", finite(c4)),
            ],
            edges: vec![e1, e2],
        };
        g.validate().unwrap();
        let (r, trace) = reduce(&g).unwrap();
        assert_eq!(trace.0.len(), 2);
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(rank_mod_p(&r), rank_mod_p(&g));
        assert_eq!(replay_trace(&g, &trace).unwrap(), r);
    }

    #[test]
    fn loops_are_exempt() {
        // HNN over the whole group: bijective both sides but a loop
        let c4 = FiniteGroup::cyclic(2, 4, "a", "C4");
        let g = hnn_finite(2, c4.clone(), c4.clone(), &[1], &[1]).unwrap();
        g.validate().unwrap();
        assert!(is_reduced(&g));
    }

    #[test]
    fn retargeting_carries_attachments() {
        // path: D4 --<s>-- C2x? ... use: A --H iso--> B with another edge at the
        // removed vertex; the carried attachment must compose correctly.
        let d4 = FiniteGroup::dihedral(4, ("r", "s"), "D4").unwrap();
        let s = d4.gens[1];
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        // u(C2) --e1: C2 id|s--> v(D4); u also carries loop e2 with trivial group
        let triv = FiniteGroup::trivial(2);
        let e1 = finite_edge("e1", 0, 1, c2.clone(), &[1], &[s], &c2, &d4).unwrap();
        let e2 = crate::gog::EdgeData {
            name: "e2".into(),
            d0: 0,
            d1: 0,
            group: GroupDesc::Finite(std::sync::Arc::new(triv)),
            attach: [Attachment::Trivial, Attachment::Trivial],
        };
        let g = GraphOfGroups {
            prime: 2,
            vertices: vec![vertex("u", finite(c2)), vertex("v", finite(d4))],
            edges: vec![e1, e2],
        };
        g.validate().unwrap();
        let (r, _) = reduce(&g).unwrap();
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(r.edges.len(), 1); // the loop survives at D4
        r.validate().unwrap();
    }

    #[test]
    fn free_fictitious_edge() {
        use crate::groups::free::FreeGroupContext;
        // <c> --c->a iso--> F(a), other side c -> x^2 into F(x): collapse keeps F(x)
        let f1 = FreeGroupContext::new(2, &["a"]);
        let f2 = FreeGroupContext::new(2, &["x"]);
        let g = amalgam_free_cyclic(f1.clone(), f2.clone(), f1.gen(0), f2.gen(0).pow(2));
        g.validate().unwrap();
        assert!(!is_reduced(&g));
        let (r, trace) = reduce(&g).unwrap();
        assert_eq!(trace.0.len(), 1);
        assert_eq!(r.vertices.len(), 1);
        match &r.vertices[0].group {
            GroupDesc::Free(f) => assert_eq!(f.rank, 1),
            other => panic!("{:?}", other),
        }
        assert_eq!(rank_mod_p(&r), 1);
    }
}
