//! Normal forms in fundamental groups of graphs of groups.
//!
//! Elements are closed edge-paths in the underlying graph with a vertex-group
//! syllable at every stop. The canonical form fixes, per edge end, a left
//! transversal of the attached edge-group image (lexicographically least for
//! finite groups, geodesic Schreier representatives for free groups) and
//! repeatedly pushes syllables through stable letters and eliminates pinches.
//!
//! Exact for finite vertex groups, and for free vertex groups whose incident
//! edge groups are trivial or cyclic; anything else is outside the declared
//! coset-test scope and reported as such.

use crate::error::BallError;
use crate::gog::presentation::{Presentation, PresGenKind};
use crate::gog::{Attachment, GraphOfGroups, GroupDesc};
use crate::groups::automaton::SubgroupAutomaton;
use crate::groups::finite::{Elt, FiniteGroup, GroupHom, Subgroup};
use crate::groups::free::Word;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// An element of a vertex group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VElt {
    Finite(Elt),
    Free(Word),
}

impl VElt {
    pub fn is_identity(&self, group: &GroupDesc) -> bool {
        match (self, group) {
            (VElt::Finite(x), GroupDesc::Finite(g)) => *x == g.id,
            (VElt::Free(w), _) => w.is_trivial(),
            _ => false,
        }
    }
}

/// An element of an edge group: finite index, or a power of the cyclic
/// generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EElt {
    Finite(Elt),
    CyclicPower(i64),
}

/// A (not necessarily normal) path word: syllables s_0 .. s_k interleaved
/// with oriented edge steps. dir 0 traverses d0 -> d1 (letter t_e), dir 1
/// traverses d1 -> d0 (letter t_e^{-1}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathWord {
    pub base: usize,
    pub syllables: Vec<VElt>,
    pub steps: Vec<(usize, usize)>,
}

impl PathWord {
    pub fn identity(ctx: &NfContext, base: usize) -> PathWord {
        PathWord {
            base,
            syllables: vec![ctx.identity_elt(base)],
            steps: vec![],
        }
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn is_vertex_element(&self) -> bool {
        self.steps.is_empty()
    }
}

/// How an edge end is handled in coset computations.
enum EndData {
    /// Trivial edge group: every element is its own coset representative.
    Trivial,
    /// Finite edge group into a finite vertex group.
    Finite {
        hom: GroupHom,
        image: Subgroup,
        edge_group: Arc<FiniteGroup>,
        transversal: Vec<Elt>,
    },
    /// Cyclic free edge group into a free vertex group.
    FreeCyclic {
        image_word: Word,
        aut: SubgroupAutomaton,
        geos: Vec<Word>,
    },
    /// Out of the declared scope (free edge group of rank >= 2, composite
    /// vertex groups).
    Unsupported(String),
}

/// Precomputed per-graph normal-form machinery.
pub struct NfContext {
    pub graph: GraphOfGroups,
    ends: Vec<[EndData; 2]>,
}

impl NfContext {
    pub fn new(g: &GraphOfGroups) -> Result<NfContext, BallError> {
        let mut ends = Vec::with_capacity(g.edges.len());
        for e in &g.edges {
            let mut pair = Vec::with_capacity(2);
            for end in 0..2 {
                let vgroup = &g.vertices[e.endpoint(end)].group;
                pair.push(Self::end_data(&e.group, &e.attach[end], vgroup));
            }
            let b: [EndData; 2] = pair.try_into().map_err(|_| {
                BallError::UnsupportedCosetTest("internal end pairing".into())
            })?;
            ends.push(b);
        }
        Ok(NfContext { graph: g.clone(), ends })
    }

    fn end_data(egroup: &GroupDesc, att: &Attachment, vgroup: &GroupDesc) -> EndData {
        match (att, vgroup) {
            (Attachment::Trivial, GroupDesc::Finite(_)) | (Attachment::Trivial, GroupDesc::Free(_)) => {
                EndData::Trivial
            }
            (Attachment::Finite(hom), GroupDesc::Finite(target)) => {
                let GroupDesc::Finite(src) = egroup else {
                    return EndData::Unsupported("finite attachment without finite edge group".into());
                };
                if src.is_trivial() {
                    return EndData::Trivial;
                }
                let image = hom.image_subgroup();
                let transversal = target.left_transversal(&image);
                EndData::Finite { hom: hom.clone(), image, edge_group: src.clone(), transversal }
            }
            (Attachment::Free(images), GroupDesc::Free(target)) => {
                if images.len() != 1 {
                    return EndData::Unsupported(
                        "free edge groups of rank >= 2 are outside the coset-test scope".into(),
                    );
                }
                match SubgroupAutomaton::new(target, images) {
                    Ok(aut) => {
                        let geos = aut.geodesics();
                        EndData::FreeCyclic { image_word: images[0].clone(), aut, geos }
                    }
                    Err(e) => EndData::Unsupported(e.to_string()),
                }
            }
            _ => EndData::Unsupported(
                "composite or mixed vertex groups are outside the coset-test scope".into(),
            ),
        }
    }

    pub fn identity_elt(&self, vertex: usize) -> VElt {
        match &self.graph.vertices[vertex].group {
            GroupDesc::Finite(g) => VElt::Finite(g.id),
            GroupDesc::Free(_) => VElt::Free(Word::identity()),
            GroupDesc::Composite(_) => VElt::Free(Word::identity()),
        }
    }

    pub fn vertex_op(&self, vertex: usize, a: &VElt, b: &VElt) -> VElt {
        match (&self.graph.vertices[vertex].group, a, b) {
            (GroupDesc::Finite(g), VElt::Finite(x), VElt::Finite(y)) => VElt::Finite(g.op(*x, *y)),
            (GroupDesc::Free(_), VElt::Free(x), VElt::Free(y)) => VElt::Free(x.concat(y)),
            _ => panic!("vertex element kind mismatch"),
        }
    }

    pub fn vertex_inv(&self, vertex: usize, a: &VElt) -> VElt {
        match (&self.graph.vertices[vertex].group, a) {
            (GroupDesc::Finite(g), VElt::Finite(x)) => VElt::Finite(g.inverse(*x)),
            (GroupDesc::Free(_), VElt::Free(x)) => VElt::Free(x.inverse()),
            _ => panic!("vertex element kind mismatch"),
        }
    }

    fn end(&self, edge: usize, end: usize) -> &EndData {
        &self.ends[edge][end]
    }

    /// Left-coset decomposition at an edge end: s = rep · ∂(x).
    /// Returns (rep, x).
    fn decompose(
        &self,
        edge: usize,
        end: usize,
        vertex: usize,
        s: &VElt,
    ) -> Result<(VElt, EElt), BallError> {
        match (self.end(edge, end), s) {
            (EndData::Trivial, _) => Ok((s.clone(), EElt::CyclicPower(0))),
            (EndData::Finite { hom, image, edge_group, .. }, VElt::Finite(x)) => {
                let GroupDesc::Finite(vg) = &self.graph.vertices[vertex].group else {
                    return Err(BallError::UnsupportedCosetTest("end kind mismatch".into()));
                };
                let rep = vg.coset_rep(*x, image);
                let inside = vg.op(vg.inverse(rep), *x);
                // brute-force preimage in the edge group
                let pre = (0..edge_group.order() as Elt)
                    .find(|&y| hom.map(y) == inside)
                    .ok_or_else(|| BallError::UnsupportedCosetTest("preimage missing".into()))?;
                Ok((VElt::Finite(rep), EElt::Finite(pre)))
            }
            (EndData::FreeCyclic { image_word, aut, geos }, VElt::Free(w)) => {
                let rep = aut.left_coset_rep(w, geos);
                let inside = rep.inverse().concat(w);
                let k = cyclic_power_of(&inside, image_word).ok_or_else(|| {
                    BallError::UnsupportedCosetTest("coset remainder not a power of the image".into())
                })?;
                Ok((VElt::Free(rep), EElt::CyclicPower(k)))
            }
            (EndData::Unsupported(reason), _) => {
                Err(BallError::UnsupportedCosetTest(reason.clone()))
            }
            _ => Err(BallError::UnsupportedCosetTest("end kind mismatch".into())),
        }
    }

    /// Membership of a vertex element in the attached image at an edge end.
    fn in_image(&self, edge: usize, end: usize, vertex: usize, s: &VElt) -> Result<bool, BallError> {
        match (self.end(edge, end), s) {
            (EndData::Trivial, s) => {
                Ok(s.is_identity(&self.graph.vertices[vertex].group))
            }
            (EndData::Finite { image, .. }, VElt::Finite(x)) => Ok(image.contains(*x)),
            (EndData::FreeCyclic { aut, .. }, VElt::Free(w)) => Ok(aut.membership(w)),
            (EndData::Unsupported(reason), _) => {
                Err(BallError::UnsupportedCosetTest(reason.clone()))
            }
            _ => Err(BallError::UnsupportedCosetTest("end kind mismatch".into())),
        }
    }

    /// Carries an edge-group element to its image at the given end.
    fn to_image(&self, edge: usize, end: usize, x: &EElt) -> Result<VElt, BallError> {
        match (self.end(edge, end), x) {
            (EndData::Trivial, _) => {
                let v = self.graph.edges[edge].endpoint(end);
                Ok(self.identity_elt(v))
            }
            (EndData::Finite { hom, .. }, EElt::Finite(y)) => Ok(VElt::Finite(hom.map(*y))),
            (EndData::FreeCyclic { image_word, .. }, EElt::CyclicPower(k)) => {
                Ok(VElt::Free(image_word.pow(*k as i32)))
            }
            (EndData::Unsupported(reason), _) => {
                Err(BallError::UnsupportedCosetTest(reason.clone()))
            }
            _ => Err(BallError::UnsupportedCosetTest("edge element kind mismatch".into())),
        }
    }

    /// Expresses an image element back in the edge group
    /// (partial inverse of `to_image`; caller guarantees membership).
    fn from_image(&self, edge: usize, end: usize, s: &VElt) -> Result<EElt, BallError> {
        match (self.end(edge, end), s) {
            (EndData::Trivial, _) => Ok(EElt::CyclicPower(0)),
            (EndData::Finite { hom, edge_group, .. }, VElt::Finite(x)) => {
                let pre = (0..edge_group.order() as Elt)
                    .find(|&y| hom.map(y) == *x)
                    .ok_or_else(|| BallError::UnsupportedCosetTest("not in image".into()))?;
                Ok(EElt::Finite(pre))
            }
            (EndData::FreeCyclic { image_word, .. }, VElt::Free(w)) => {
                let k = cyclic_power_of(w, image_word)
                    .ok_or_else(|| BallError::UnsupportedCosetTest("not in image".into()))?;
                Ok(EElt::CyclicPower(k))
            }
            (EndData::Unsupported(reason), _) => {
                Err(BallError::UnsupportedCosetTest(reason.clone()))
            }
            _ => Err(BallError::UnsupportedCosetTest("end kind mismatch".into())),
        }
    }

    /// Vertex sequence visited by a path word.
    pub fn vertex_at(&self, pw: &PathWord, i: usize) -> usize {
        let mut v = pw.base;
        for &(e, dir) in pw.steps.iter().take(i) {
            let edge = &self.graph.edges[e];
            v = if dir == 0 { edge.d1 } else { edge.d0 };
        }
        v
    }

    fn check_path(&self, pw: &PathWord) -> Result<(), BallError> {
        if pw.syllables.len() != pw.steps.len() + 1 {
            return Err(BallError::UnsupportedCosetTest("malformed path word".into()));
        }
        let mut v = pw.base;
        for &(e, dir) in &pw.steps {
            let edge = &self.graph.edges[e];
            let (from, to) = if dir == 0 { (edge.d0, edge.d1) } else { (edge.d1, edge.d0) };
            if from != v {
                return Err(BallError::UnsupportedCosetTest("path not incident".into()));
            }
            v = to;
        }
        Ok(())
    }

    /// Canonical normal form. Two path words with the same base are equal in
    /// the fundamental group iff their normal forms are identical.
    pub fn normal_form(&self, pw: &PathWord) -> Result<PathWord, BallError> {
        self.check_path(pw)?;
        let mut cur = pw.clone();
        loop {
            // left-to-right coset normalization: for each step, replace the
            // preceding syllable by its transversal representative and push
            // the remainder through the stable letter
            for i in 0..cur.steps.len() {
                let (e, dir) = cur.steps[i];
                // entering end: the end at the source vertex of the step
                let (src_end, dst_end) = if dir == 0 { (0, 1) } else { (1, 0) };
                let v = self.vertex_at(&cur, i);
                let (rep, x) = self.decompose(e, src_end, v, &cur.syllables[i])?;
                cur.syllables[i] = rep;
                let img = self.to_image(e, dst_end, &x)?;
                let w = self.vertex_at(&cur, i + 1);
                cur.syllables[i + 1] = self.vertex_op(w, &img, &cur.syllables[i + 1]);
            }
            // leftmost pinch: steps i, i+1 traverse the same edge in opposite
            // directions with the middle syllable inside the attached image
            let mut pinched = false;
            for i in 0..cur.steps.len().saturating_sub(1) {
                let (e1, d1) = cur.steps[i];
                let (e2, d2) = cur.steps[i + 1];
                if e1 != e2 || d1 == d2 {
                    continue;
                }
                // arrived at the end dst of step i
                let arrived_end = if d1 == 0 { 1 } else { 0 };
                let mid_vertex = self.vertex_at(&cur, i + 1);
                if !self.in_image(e1, arrived_end, mid_vertex, &cur.syllables[i + 1])? {
                    continue;
                }
                // t^eps · s · t^{-eps} = image of s on the other side
                let x = self.from_image(e1, arrived_end, &cur.syllables[i + 1])?;
                let back = self.to_image(e1, 1 - arrived_end, &x)?;
                let v = self.vertex_at(&cur, i);
                let merged = self.vertex_op(
                    v,
                    &self.vertex_op(v, &cur.syllables[i], &back),
                    &cur.syllables[i + 2],
                );
                cur.syllables.splice(i..=i + 2, [merged]);
                cur.steps.drain(i..=i + 1);
                pinched = true;
                break;
            }
            if !pinched {
                return Ok(cur);
            }
        }
    }

    /// Concatenation of path words; the second must start where the first
    /// one ends.
    pub fn multiply(&self, a: &PathWord, b: &PathWord) -> PathWord {
        let end = self.vertex_at(a, a.steps.len());
        assert_eq!(end, b.base, "path concatenation mismatch");
        let k = a.syllables.len() - 1;
        let mut syllables = a.syllables[..k].to_vec();
        let joined = self.vertex_op(end, &a.syllables[k], &b.syllables[0]);
        syllables.push(joined);
        syllables.extend_from_slice(&b.syllables[1..]);
        let mut steps = a.steps.clone();
        steps.extend_from_slice(&b.steps);
        PathWord { base: a.base, syllables, steps }
    }

    /// Reversed path: starts where `a` ends.
    pub fn invert(&self, a: &PathWord) -> PathWord {
        let mut syllables: Vec<VElt> = Vec::with_capacity(a.syllables.len());
        let mut vs = Vec::with_capacity(a.syllables.len());
        for i in 0..a.syllables.len() {
            vs.push(self.vertex_at(a, i));
        }
        for i in (0..a.syllables.len()).rev() {
            syllables.push(self.vertex_inv(vs[i], &a.syllables[i]));
        }
        let steps = a.steps.iter().rev().map(|&(e, d)| (e, 1 - d)).collect();
        PathWord { base: vs[a.steps.len()], syllables, steps }
    }

    /// Membership of a vertex element in the attached image at an edge end.
    pub fn in_image_public(
        &self,
        edge: usize,
        end: usize,
        vertex: usize,
        s: &VElt,
    ) -> Result<bool, BallError> {
        self.in_image(edge, end, vertex, s)
    }

    pub fn is_identity(&self, a: &PathWord) -> Result<bool, BallError> {
        let nf = self.normal_form(a)?;
        Ok(nf.steps.is_empty()
            && nf.syllables[0].is_identity(&self.graph.vertices[nf.base].group))
    }

    /// Tree path (as a path word with identity syllables) between two
    /// vertices along a spanning tree of the graph.
    pub fn tree_path(&self, tree: &[usize], from: usize, to: usize) -> PathWord {
        // BFS in the tree
        let n = self.graph.vertices.len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n]; // (edge, dir into this vertex)
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &ei in tree {
                let e = &self.graph.edges[ei];
                if e.d0 == v && !seen[e.d1] {
                    seen[e.d1] = true;
                    prev[e.d1] = Some((ei, 0));
                    queue.push_back(e.d1);
                }
                if e.d1 == v && !seen[e.d0] {
                    seen[e.d0] = true;
                    prev[e.d0] = Some((ei, 1));
                    queue.push_back(e.d0);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = to;
        while cur != from {
            let (e, dir) = prev[cur].expect("spanning tree connects");
            steps.push((e, dir));
            cur = if dir == 0 { self.graph.edges[e].d0 } else { self.graph.edges[e].d1 };
        }
        steps.reverse();
        let mut syllables = Vec::with_capacity(steps.len() + 1);
        let mut v = from;
        syllables.push(self.identity_elt(v));
        for &(e, dir) in &steps {
            v = if dir == 0 { self.graph.edges[e].d1 } else { self.graph.edges[e].d0 };
            syllables.push(self.identity_elt(v));
        }
        PathWord { base: from, syllables, steps }
    }

    /// Converts a word over the presentation's generators into a closed path
    /// word at `base`.
    pub fn path_of_presentation_word(
        &self,
        pres: &Presentation,
        base: usize,
        letters: &[i32],
    ) -> Result<PathWord, BallError> {
        let mut acc = PathWord::identity(self, base);
        for &l in letters {
            let gen = &pres.gens[(l.unsigned_abs() as usize) - 1];
            let pw = match &gen.kind {
                PresGenKind::VertexGen { vertex, k } => {
                    let elt = match &self.graph.vertices[*vertex].group {
                        GroupDesc::Finite(g) => VElt::Finite(g.gens[*k]),
                        GroupDesc::Free(_) => VElt::Free(Word(vec![(*k as i32) + 1])),
                        GroupDesc::Composite(_) => {
                            return Err(BallError::UnsupportedCosetTest(
                                "composite vertex groups are outside the coset-test scope".into(),
                            ))
                        }
                    };
                    let go = self.tree_path(&pres.tree_edges, base, *vertex);
                    let back = self.invert(&go);
                    let mid = PathWord {
                        base: *vertex,
                        syllables: vec![elt],
                        steps: vec![],
                    };
                    self.multiply(&self.multiply(&go, &mid), &back)
                }
                PresGenKind::StableLetter { edge } => {
                    let e = &self.graph.edges[*edge];
                    let go = self.tree_path(&pres.tree_edges, base, e.d0);
                    let step = PathWord {
                        base: e.d0,
                        syllables: vec![self.identity_elt(e.d0), self.identity_elt(e.d1)],
                        steps: vec![(*edge, 0)],
                    };
                    let back = self.invert(&self.tree_path(&pres.tree_edges, base, e.d1));
                    self.multiply(&self.multiply(&go, &step), &back)
                }
            };
            let pw = if l > 0 { pw } else { self.invert(&pw) };
            acc = self.multiply(&acc, &pw);
        }
        Ok(acc)
    }

    /// Transversal of the attached image at an edge end, for ball expansion.
    /// Finite ends enumerate exactly; free ends enumerate representatives of
    /// word length at most `len_cap` (truncated branching).
    pub fn end_transversal(
        &self,
        edge: usize,
        end: usize,
        len_cap: usize,
    ) -> Result<(Vec<VElt>, bool), BallError> {
        let v = self.graph.edges[edge].endpoint(end);
        match self.end(edge, end) {
            EndData::Trivial => match &self.graph.vertices[v].group {
                GroupDesc::Finite(g) => {
                    Ok(((0..g.order() as Elt).map(VElt::Finite).collect(), false))
                }
                GroupDesc::Free(f) => {
                    // all reduced words of length <= cap: truncated
                    let mut reps = vec![Word::identity()];
                    let mut frontier = vec![Word::identity()];
                    for _ in 0..len_cap {
                        let mut next = Vec::new();
                        for w in &frontier {
                            for g in 1..=(f.rank as i32) {
                                for l in [g, -g] {
                                    if w.0.last() == Some(&-l) {
                                        continue;
                                    }
                                    let mut v2 = w.0.clone();
                                    v2.push(l);
                                    next.push(Word(v2));
                                }
                            }
                        }
                        reps.extend(next.iter().cloned());
                        frontier = next;
                    }
                    Ok((reps.into_iter().map(VElt::Free).collect(), true))
                }
                GroupDesc::Composite(_) => Err(BallError::UnsupportedCosetTest(
                    "composite vertex groups are outside the coset-test scope".into(),
                )),
            },
            EndData::Finite { transversal, .. } => {
                Ok((transversal.iter().map(|&x| VElt::Finite(x)).collect(), false))
            }
            EndData::FreeCyclic { aut, geos, .. } => {
                // canonical left-coset representatives of word length <= cap
                let GroupDesc::Free(f) = &self.graph.vertices[v].group else {
                    return Err(BallError::UnsupportedCosetTest("end kind mismatch".into()));
                };
                let mut reps = std::collections::BTreeSet::new();
                let mut words = vec![Word::identity()];
                reps.insert(aut.left_coset_rep(&Word::identity(), geos));
                for _ in 0..len_cap {
                    let mut next = Vec::new();
                    for w in &words {
                        for g in 1..=(f.rank as i32) {
                            for l in [g, -g] {
                                if w.0.last() == Some(&-l) {
                                    continue;
                                }
                                let mut v2 = w.0.clone();
                                v2.push(l);
                                let w2 = Word(v2);
                                reps.insert(aut.left_coset_rep(&w2, geos));
                                next.push(w2);
                            }
                        }
                    }
                    words = next;
                }
                Ok((reps.into_iter().map(VElt::Free).collect(), true))
            }
            EndData::Unsupported(reason) => Err(BallError::UnsupportedCosetTest(reason.clone())),
        }
    }

    /// Canonical key of the coset g·G(v): the normal form with the final
    /// syllable dropped.
    pub fn vertex_coset_key(&self, pw: &PathWord) -> Result<PathWord, BallError> {
        let mut nf = self.normal_form(pw)?;
        let k = nf.syllables.len() - 1;
        let v = self.vertex_at(&nf, k);
        nf.syllables[k] = self.identity_elt(v);
        Ok(nf)
    }

    /// Canonical key of the edge coset g·G(e) (G(e) sitting at the d0 end):
    /// the normal form with the final syllable replaced by its transversal
    /// representative modulo the d0 image.
    pub fn edge_coset_key(&self, pw: &PathWord, edge: usize) -> Result<PathWord, BallError> {
        let mut nf = self.normal_form(pw)?;
        let k = nf.syllables.len() - 1;
        let v = self.vertex_at(&nf, k);
        debug_assert_eq!(v, self.graph.edges[edge].d0);
        let (rep, _) = self.decompose(edge, 0, v, &nf.syllables[k])?;
        nf.syllables[k] = rep;
        Ok(nf)
    }
}

/// If w = z^k for the given z, returns k (z nontrivial reduced); 0 for the
/// identity.
fn cyclic_power_of(w: &Word, z: &Word) -> Option<i64> {
    if w.is_trivial() {
        return Some(0);
    }
    if z.is_trivial() {
        return None;
    }
    for sign in [1i64, -1] {
        let base = if sign > 0 { z.clone() } else { z.inverse() };
        if w.len() % base.len() == 0 {
            let k = (w.len() / base.len()) as i64;
            if *w == base.pow(k as i32) {
                return Some(sign * k);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::build::*;
    use crate::gog::presentation::fundamental_presentation;
    use crate::groups::finite::FiniteGroup;
    use crate::groups::free::FreeGroupContext;

    fn c4_c2_c4() -> GraphOfGroups {
        let c4a = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c4b = FiniteGroup::cyclic(2, 4, "b", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        amalgam_finite(2, c4a, c4b, c2, &[2], &[2]).unwrap()
    }

    fn nf_of(g: &GraphOfGroups, word: &str) -> (NfContext, PathWord) {
        let ctx = NfContext::new(g).unwrap();
        let pres = fundamental_presentation(g, None).unwrap();
        let names: Vec<String> = pres.gens.iter().map(|x| x.name.clone()).collect();
        let w = crate::groups::free::parse_word(word, &names).unwrap();
        let pw = ctx.path_of_presentation_word(&pres, 0, &w.0).unwrap();
        (ctx, pw)
    }

    #[test]
    fn defining_relation_is_identity() {
        let g = c4_c2_c4();
        let (ctx, pw) = nf_of(&g, "a a b^-1 b^-1");
        assert!(ctx.is_identity(&pw).unwrap());
    }

    #[test]
    fn ab_is_a_two_syllable_form() {
        let g = c4_c2_c4();
        let (ctx, pw) = nf_of(&g, "a b");
        let nf = ctx.normal_form(&pw).unwrap();
        assert!(!ctx.is_identity(&pw).unwrap());
        // crossing to the other vertex and back: two steps
        assert_eq!(nf.steps.len(), 2);
    }

    #[test]
    fn britton_pinch_in_hnn() {
        // HNN(C4, <a^2> -> <a^2>): t^-1 a^2 t = a^2
        let c4 = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let g = hnn_finite(2, c4, c2, &[2], &[2]).unwrap();
        let (ctx, pw) = nf_of(&g, "t_t^-1 a a t_t");
        let nf = ctx.normal_form(&pw).unwrap();
        assert!(nf.steps.is_empty());
        assert_eq!(nf.syllables[0], VElt::Finite(2));
        // and t^-1 a t is NOT in the vertex group (a outside the edge image)
        let (ctx2, pw2) = nf_of(&g, "t_t^-1 a t_t");
        let nf2 = ctx2.normal_form(&pw2).unwrap();
        assert_eq!(nf2.steps.len(), 2);
    }

    #[test]
    fn soundness_products_match() {
        // normal_form(w1 w2) == multiply(nf(w1), nf(w2)) normalized
        let g = c4_c2_c4();
        let ctx = NfContext::new(&g).unwrap();
        let pres = fundamental_presentation(&g, None).unwrap();
        let names: Vec<String> = pres.gens.iter().map(|x| x.name.clone()).collect();
        let words = ["a", "b", "a b", "b a a", "a b^-1 a"];
        for w1 in &words {
            for w2 in &words {
                let p1 = ctx
                    .path_of_presentation_word(
                        &pres,
                        0,
                        &crate::groups::free::parse_word(w1, &names).unwrap().0,
                    )
                    .unwrap();
                let p2 = ctx
                    .path_of_presentation_word(
                        &pres,
                        0,
                        &crate::groups::free::parse_word(w2, &names).unwrap().0,
                    )
                    .unwrap();
                let joint = ctx
                    .path_of_presentation_word(
                        &pres,
                        0,
                        &crate::groups::free::parse_word(&format!("{} {}", w1, w2), &names)
                            .unwrap()
                            .0,
                    )
                    .unwrap();
                let lhs = ctx.normal_form(&joint).unwrap();
                let rhs = ctx.normal_form(&ctx.multiply(&p1, &p2)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn free_hnn_britton() {
        // HNN(F(a,b), <b> -> <a^2[a,b]>), p = 2
        let f = FreeGroupContext::new(2, &["a", "b"]);
        let a = f.gen(0);
        let b = f.gen(1);
        let c_t = a.pow(2).concat(&Word::commutator(&a, &b));
        let g = hnn_free_cyclic(f, b.clone(), c_t.clone());
        g.validate().unwrap();
        let ctx = NfContext::new(&g).unwrap();
        // t^-1 b t should pinch to the image word
        let pw = PathWord {
            base: 0,
            syllables: vec![
                VElt::Free(Word::identity()),
                VElt::Free(b.clone()),
                VElt::Free(Word::identity()),
            ],
            steps: vec![(0, 1), (0, 0)],
        };
        let nf = ctx.normal_form(&pw).unwrap();
        assert!(nf.steps.is_empty());
        assert_eq!(nf.syllables[0], VElt::Free(c_t));
    }

    #[test]
    fn coset_keys_distinguish() {
        let g = c4_c2_c4();
        let ctx = NfContext::new(&g).unwrap();
        // a G(v1) vs G(v1): same coset? a in G(v1): yes
        let one = PathWord::identity(&ctx, 0);
        let a = PathWord { base: 0, syllables: vec![VElt::Finite(1)], steps: vec![] };
        assert_eq!(ctx.vertex_coset_key(&one).unwrap(), ctx.vertex_coset_key(&a).unwrap());
        // edge cosets: a^2 G(e) == G(e) (a^2 in the image), a G(e) differs
        let a2 = PathWord { base: 0, syllables: vec![VElt::Finite(2)], steps: vec![] };
        assert_eq!(ctx.edge_coset_key(&one, 0).unwrap(), ctx.edge_coset_key(&a2, 0).unwrap());
        assert_ne!(ctx.edge_coset_key(&one, 0).unwrap(), ctx.edge_coset_key(&a, 0).unwrap());
    }
}
