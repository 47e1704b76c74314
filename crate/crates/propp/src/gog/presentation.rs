//! Fundamental-group presentations: vertex-group generators plus stable
//! letters, vertex relators, edge identifications, and killed spanning-tree
//! letters.
//!
//! Finite vertex groups are presented on their designated generators with
//! Reidemeister-Schreier relators read off the Cayley graph, so the emitted
//! presentation is exact, not approximate.

use crate::error::GogError;
use crate::fp::FpMatrix;
use crate::gog::{Attachment, GraphOfGroups, GroupDesc};
use crate::groups::finite::FiniteGroup;
use crate::groups::free::Word;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PresGenKind {
    /// k-th generator of the (flattened) vertex group at `vertex`.
    VertexGen { vertex: usize, k: usize },
    StableLetter { edge: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresGen {
    pub name: String,
    pub kind: PresGenKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Presentation {
    pub prime: u32,
    pub gens: Vec<PresGen>,
    /// Relators as signed 1-based indices into `gens`.
    pub relators: Vec<Vec<i32>>,
    /// Edge indices of the designated spanning tree (their letters are 1).
    pub tree_edges: Vec<usize>,
}

impl Presentation {
    pub fn render(&self) -> String {
        let names: Vec<String> = self.gens.iter().map(|g| g.name.clone()).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| crate::groups::free::render_word(&Word(r.clone()), &names))
            .collect();
        format!("< {} | {} >", names.join(", "), rels.join(", "))
    }

    /// Rank of the abelianization mod p straight from the presentation:
    /// an independent route to rank_mod_p.
    pub fn abelianized_rank_mod_p(&self) -> usize {
        let n = self.gens.len();
        let mut cols = Vec::new();
        for r in &self.relators {
            let mut sums = vec![0i64; n];
            for &l in r {
                sums[(l.unsigned_abs() as usize) - 1] += if l > 0 { 1 } else { -1 };
            }
            cols.push(crate::fp::FpVector::from_ints(self.prime, &sums));
        }
        let m = FpMatrix::from_columns(self.prime, n, &cols);
        n - m.rank()
    }
}

/// Number of generators contributed by a vertex-group descriptor.
pub fn desc_gen_count(desc: &GroupDesc) -> usize {
    match desc {
        GroupDesc::Finite(g) => g.gens.len(),
        GroupDesc::Free(f) => f.rank,
        GroupDesc::Composite(g) => {
            let p = fundamental_presentation(g, None).expect("nested presentation");
            p.gens.len()
        }
    }
}

fn desc_gen_names(desc: &GroupDesc, prefix: &str) -> Vec<String> {
    match desc {
        GroupDesc::Finite(g) => g
            .gen_names
            .iter()
            .map(|n| format!("{}{}", prefix, n))
            .collect(),
        GroupDesc::Free(f) => f.names.iter().map(|n| format!("{}{}", prefix, n)).collect(),
        GroupDesc::Composite(g) => {
            let p = fundamental_presentation(g, None).expect("nested presentation");
            p.gens
                .iter()
                .map(|g| format!("{}{}", prefix, g.name))
                .collect()
        }
    }
}

/// Relators of a vertex-group descriptor, in local 1-based indices.
fn desc_relators(desc: &GroupDesc) -> Vec<Vec<i32>> {
    match desc {
        GroupDesc::Finite(g) => reidemeister_schreier_relators(g),
        GroupDesc::Free(_) => vec![],
        GroupDesc::Composite(g) => {
            let p = fundamental_presentation(g, None).expect("nested presentation");
            p.relators
        }
    }
}

/// Expresses the image of the edge-group generator `k` under the attachment
/// as a word in the local generators of the vertex-group descriptor.
pub fn attachment_word(egroup: &GroupDesc, att: &Attachment, vgroup: &GroupDesc, k: usize) -> Vec<i32> {
    match (att, vgroup) {
        (Attachment::Trivial, _) => vec![],
        (Attachment::Finite(hom), GroupDesc::Finite(target)) => {
            let GroupDesc::Finite(src) = egroup else { panic!("type checked at validation") };
            let words = target.element_words();
            words[hom.map(src.gens[k]) as usize].clone()
        }
        (Attachment::Free(images), GroupDesc::Free(_)) => images[k].0.clone(),
        (Attachment::IntoComposite { nested_vertex, inner }, GroupDesc::Composite(g)) => {
            let nested = &g.vertices[*nested_vertex].group;
            let local = attachment_word(egroup, inner, nested, k);
            // shift into the composite's flattened generator indices
            let p = fundamental_presentation(g, None).expect("nested presentation");
            let mut offset = 0usize;
            for (vi, v) in g.vertices.iter().enumerate() {
                if vi == *nested_vertex {
                    break;
                }
                offset += desc_gen_count(&v.group);
            }
            let _ = p;
            local
                .into_iter()
                .map(|l| {
                    let s = if l > 0 { 1 } else { -1 };
                    s * (l.abs() + offset as i32)
                })
                .collect()
        }
        _ => panic!("attachment kind checked at validation"),
    }
}

/// Designated generator count of an edge-group descriptor.
pub fn edge_gen_count(desc: &GroupDesc) -> usize {
    match desc {
        GroupDesc::Finite(g) => g.gens.len(),
        GroupDesc::Free(f) => f.rank,
        GroupDesc::Composite(_) => 0,
    }
}

/// Reidemeister-Schreier relators for a finite group on its designated
/// generators: one relator per positive non-tree edge of the Cayley graph.
pub fn reidemeister_schreier_relators(g: &FiniteGroup) -> Vec<Vec<i32>> {
    let words = g.element_words();
    // tree edges: (x, letter) pairs used when words were assigned
    let mut relators = Vec::new();
    for x in 0..g.order() as u16 {
        for (k, &gen) in g.gens.iter().enumerate() {
            let y = g.op(x, gen);
            // positive edge x --k--> y; it is a tree edge iff word(y) extends
            // word(x) by +k or word(x) extends word(y) by -k
            let wx = &words[x as usize];
            let wy = &words[y as usize];
            let letter = (k as i32) + 1;
            let is_tree = (wy.len() == wx.len() + 1
                && wy[..wx.len()] == wx[..]
                && wy[wx.len()] == letter)
                || (wx.len() == wy.len() + 1
                    && wx[..wy.len()] == wy[..]
                    && wx[wy.len()] == -letter);
            if is_tree {
                continue;
            }
            let mut r = wx.clone();
            r.push(letter);
            r.extend(wy.iter().rev().map(|&l| -l));
            let r = Word::reduced(&r).0;
            if !r.is_empty() {
                relators.push(r);
            }
        }
    }
    relators
}

/// The Eq.-(1)-style presentation of the fundamental group with respect to a
/// spanning tree (BFS tree when not supplied).
pub fn fundamental_presentation(
    g: &GraphOfGroups,
    tree: Option<&[usize]>,
) -> Result<Presentation, GogError> {
    let tree_edges: Vec<usize> = match tree {
        Some(t) => {
            g.check_spanning_tree(t)?;
            t.to_vec()
        }
        None => g.spanning_tree(),
    };
    // generator layout: all vertex blocks, then stable letters of non-tree edges
    let mut gens: Vec<PresGen> = Vec::new();
    let mut vertex_offset = Vec::new();
    // disambiguate names only when they collide
    let raw_names: Vec<Vec<String>> = g
        .vertices
        .iter()
        .map(|v| desc_gen_names(&v.group, ""))
        .collect();
    let mut all: Vec<&String> = raw_names.iter().flatten().collect();
    all.sort();
    let has_dup = all.windows(2).any(|w| w[0] == w[1]);
    for (vi, v) in g.vertices.iter().enumerate() {
        vertex_offset.push(gens.len());
        let names = if has_dup {
            desc_gen_names(&v.group, &format!("{}.", v.name))
        } else {
            raw_names[vi].clone()
        };
        for (k, name) in names.into_iter().enumerate() {
            gens.push(PresGen { name, kind: PresGenKind::VertexGen { vertex: vi, k } });
        }
    }
    let mut letter_of_edge = vec![None; g.edges.len()];
    for (ei, e) in g.edges.iter().enumerate() {
        if !tree_edges.contains(&ei) {
            letter_of_edge[ei] = Some(gens.len());
            gens.push(PresGen {
                name: format!("t_{}", e.name),
                kind: PresGenKind::StableLetter { edge: ei },
            });
        }
    }
    let mut relators: Vec<Vec<i32>> = Vec::new();
    // vertex relators
    for (vi, v) in g.vertices.iter().enumerate() {
        for r in desc_relators(&v.group) {
            relators.push(shift_word(&r, vertex_offset[vi]));
        }
    }
    // edge identifications: for each edge-group generator x,
    // ∂1(x) = ∂0(x)^{t_e}, i.e. relator w1^{-1} t^{-1} w0 t
    for (ei, e) in g.edges.iter().enumerate() {
        for k in 0..edge_gen_count(&e.group) {
            let w0 = shift_word(
                &attachment_word(&e.group, &e.attach[0], &g.vertices[e.d0].group, k),
                vertex_offset[e.d0],
            );
            let w1 = shift_word(
                &attachment_word(&e.group, &e.attach[1], &g.vertices[e.d1].group, k),
                vertex_offset[e.d1],
            );
            let mut r: Vec<i32> = w1.iter().rev().map(|&l| -l).collect();
            if let Some(t) = letter_of_edge[ei] {
                let t = (t as i32) + 1;
                r.push(-t);
                r.extend(&w0);
                r.push(t);
            } else {
                r.extend(&w0);
            }
            let r = Word::reduced(&r).0;
            if !r.is_empty() {
                relators.push(r);
            }
        }
    }
    Ok(Presentation { prime: g.prime, gens, relators, tree_edges })
}

fn shift_word(w: &[i32], offset: usize) -> Vec<i32> {
    w.iter()
        .map(|&l| {
            let s = if l > 0 { 1 } else { -1 };
            s * (l.abs() + offset as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::build::*;
    use crate::gog::h1::rank_mod_p;
    use crate::groups::finite::FiniteGroup;

    fn c4_c2_c4() -> GraphOfGroups {
        let c4a = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c4b = FiniteGroup::cyclic(2, 4, "b", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        amalgam_finite(2, c4a, c4b, c2, &[2], &[2]).unwrap()
    }

    #[test]
    fn single_vertex_d4_presents_d4() {
        let d4 = FiniteGroup::dihedral(4, ("r", "s"), "D4").unwrap();
        let g = single_vertex(2, "v", finite(d4));
        let p = fundamental_presentation(&g, None).unwrap();
        assert_eq!(p.gens.len(), 2);
        // n*d - n + 1 = 8*2 - 7 = 9 relators
        assert_eq!(p.relators.len(), 9);
        // abelianization of D4 mod 2 has rank 2
        assert_eq!(p.abelianized_rank_mod_p(), 2);
    }

    #[test]
    fn amalgam_presentation_matches_eq1() {
        let g = c4_c2_c4();
        let p = fundamental_presentation(&g, None).unwrap();
        // generators a, b; relators a^4, b^4, b^-2 a^2
        assert_eq!(p.gens.len(), 2);
        assert_eq!(p.relators.len(), 3);
        let rendered = p.render();
        assert!(rendered.contains("a^4") || rendered.contains("a^-4"), "{}", rendered);
        assert_eq!(p.abelianized_rank_mod_p(), 2);
        assert_eq!(rank_mod_p(&g), 2);
    }

    #[test]
    fn trivial_loop_presents_free_rank_1() {
        let g = bouquet(2, 1);
        let p = fundamental_presentation(&g, None).unwrap();
        assert_eq!(p.gens.len(), 1);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn bad_tree_rejected() {
        let g = c4_c2_c4();
        assert!(matches!(
            fundamental_presentation(&g, Some(&[])),
            Err(GogError::NotSpanningTree)
        ));
        let loopy = bouquet(2, 1);
        assert!(matches!(
            fundamental_presentation(&loopy, Some(&[0])),
            Err(GogError::NotSpanningTree)
        ));
    }

    #[test]
    fn presentation_rank_agrees_with_structural_rank() {
        let graphs = vec![c4_c2_c4(), bouquet(2, 3), {
            let d4 = FiniteGroup::dihedral(4, ("r", "s"), "D4").unwrap();
            let s = d4.gens[1];
            let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
            amalgam_finite(2, d4.clone(), d4.clone(), c2, &[s], &[s]).unwrap()
        }];
        for g in graphs {
            let p = fundamental_presentation(&g, None).unwrap();
            assert_eq!(p.abelianized_rank_mod_p(), rank_mod_p(&g), "graph {:?}", g.vertices.len());
        }
    }

    #[test]
    fn generator_count_formula() {
        // gens = sum of vertex gens + |E \ T|
        let g = c4_c2_c4();
        let p = fundamental_presentation(&g, None).unwrap();
        let vertex_gens: usize = g.vertices.iter().map(|v| desc_gen_count(&v.group)).sum();
        assert_eq!(p.gens.len(), vertex_gens + g.edges.len() - p.tree_edges.len());
    }
}
