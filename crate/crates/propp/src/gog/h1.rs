//! First homology with F_p coefficients for group descriptors and graphs of
//! groups: Frattini-quotient dimensions, corestriction matrices of edge
//! attachments, the Mayer-Vietoris edge map, and the mod-p presentation rank.
//!
//! For a graph of groups with spanning tree T, abelianizing the fundamental
//! presentation mod p kills the stable-letter conjugations, leaving
//! H1 = (⊕_v H1(G(v)) / ⟨cor_1(x) - cor_0(x)⟩) ⊕ F_p^{E∖T}.

use crate::fp::{FpMatrix, FpSpan, FpVector};
use crate::gog::{Attachment, GraphOfGroups, GroupDesc};
use crate::groups::free::exponent_vector_mod_p;

pub fn h1_dim(desc: &GroupDesc) -> usize {
    match desc {
        GroupDesc::Finite(g) => g.frattini_quotient().0,
        GroupDesc::Free(f) => f.rank,
        GroupDesc::Composite(g) => GraphH1::new(g).dim,
    }
}

/// H1 dimension of an edge group descriptor.
pub fn edge_h1_dim(desc: &GroupDesc) -> usize {
    if desc.is_trivial_group() {
        0
    } else {
        h1_dim(desc)
    }
}

/// Corestriction matrix of an attachment: H1(edge group) -> H1(vertex group),
/// on the chosen Frattini bases.
pub fn cor_matrix(egroup: &GroupDesc, att: &Attachment, vgroup: &GroupDesc) -> FpMatrix {
    let prime = vgroup.prime();
    let rows = h1_dim(vgroup);
    let cols = edge_h1_dim(egroup);
    match att {
        Attachment::Trivial => FpMatrix::zero(prime, rows, cols),
        Attachment::Finite(hom) => {
            let GroupDesc::Finite(src) = egroup else {
                panic!("finite attachment on non-finite edge group")
            };
            let GroupDesc::Finite(dst) = vgroup else {
                panic!("finite attachment into non-finite vertex group")
            };
            let src_data = src.frattini_data();
            let dst_data = dst.frattini_data();
            let columns: Vec<FpVector> = src_data
                .basis
                .iter()
                .map(|&b| dst_data.proj[hom.map(b) as usize].clone())
                .collect();
            FpMatrix::from_columns(prime, dst_data.dim, &columns)
        }
        Attachment::Free(images) => {
            let GroupDesc::Free(dst) = vgroup else {
                panic!("free attachment into non-free vertex group")
            };
            let columns: Vec<FpVector> = images
                .iter()
                .map(|w| exponent_vector_mod_p(dst, w).expect("validated attachment"))
                .collect();
            FpMatrix::from_columns(prime, dst.rank, &columns)
        }
        Attachment::IntoComposite { nested_vertex, inner } => {
            let GroupDesc::Composite(g) = vgroup else {
                panic!("composite attachment into non-composite vertex group")
            };
            let nested = &g.vertices[*nested_vertex].group;
            let inner_m = cor_matrix(egroup, inner, nested);
            let h1 = GraphH1::new(g);
            // compose with block injection + quotient projection
            let columns: Vec<FpVector> = (0..inner_m.cols)
                .map(|j| h1.project_vertex(*nested_vertex, &inner_m.column(j)))
                .collect();
            FpMatrix::from_columns(prime, h1.dim, &columns)
        }
    }
}

/// H1 data for the fundamental group of a graph of groups.
pub struct GraphH1 {
    pub prime: u32,
    pub vertex_offset: Vec<usize>,
    pub vertex_dim: Vec<usize>,
    /// D = total vertex H1 dimension.
    pub total_vertex_dim: usize,
    /// Span of the edge relations cor_1 - cor_0 inside F_p^D.
    span: FpSpan,
    /// Coordinates of F_p^D surviving into the quotient.
    pub quotient_coords: Vec<usize>,
    /// Number of stable letters surviving: |E| - (|V| - 1).
    pub n_extra_letters: usize,
    pub dim: usize,
}

impl GraphH1 {
    pub fn new(g: &GraphOfGroups) -> GraphH1 {
        let prime = g.prime;
        let mut vertex_offset = Vec::with_capacity(g.vertices.len());
        let mut vertex_dim = Vec::with_capacity(g.vertices.len());
        let mut off = 0usize;
        for v in &g.vertices {
            vertex_offset.push(off);
            let d = h1_dim(&v.group);
            vertex_dim.push(d);
            off += d;
        }
        let total = off;
        let mut span = FpSpan::new(prime, total);
        for e in &g.edges {
            let cols = edge_h1_dim(&e.group);
            if cols == 0 {
                continue;
            }
            let m0 = cor_matrix(&e.group, &e.attach[0], &g.vertices[e.d0].group);
            let m1 = cor_matrix(&e.group, &e.attach[1], &g.vertices[e.d1].group);
            for j in 0..cols {
                let mut rel = FpVector::zero(prime, total);
                let c1 = m1.column(j);
                for (i, &x) in c1.entries.iter().enumerate() {
                    rel.entries[vertex_offset[e.d1] + i] = x;
                }
                let c0 = m0.column(j).neg();
                for (i, &x) in c0.entries.iter().enumerate() {
                    let slot = &mut rel.entries[vertex_offset[e.d0] + i];
                    *slot = (*slot + x) % prime;
                }
                span.insert(&rel);
            }
        }
        let pivots: Vec<usize> = span.pivots();
        let quotient_coords: Vec<usize> =
            (0..total).filter(|c| !pivots.contains(c)).collect();
        let n_extra_letters = g.edges.len() + 1 - g.vertices.len();
        let dim = quotient_coords.len() + n_extra_letters;
        GraphH1 {
            prime,
            vertex_offset,
            vertex_dim,
            total_vertex_dim: total,
            span,
            quotient_coords,
            n_extra_letters,
            dim,
        }
    }

    /// Image in H1(Pi1) of a vector in H1(G(v)).
    pub fn project_vertex(&self, v: usize, vec: &FpVector) -> FpVector {
        assert_eq!(vec.len(), self.vertex_dim[v]);
        let mut lifted = FpVector::zero(self.prime, self.total_vertex_dim);
        for (i, &x) in vec.entries.iter().enumerate() {
            lifted.entries[self.vertex_offset[v] + i] = x;
        }
        let reduced = self.span.reduce_vector(&lifted);
        let mut out = FpVector::zero(self.prime, self.dim);
        for (k, &c) in self.quotient_coords.iter().enumerate() {
            out.entries[k] = reduced.entries[c];
        }
        out
    }
}

/// Mod-p presentation rank of the fundamental group: dimension over F_p of
/// the abelianization mod p. Independent of the spanning tree.
pub fn rank_mod_p(g: &GraphOfGroups) -> usize {
    GraphH1::new(g).dim
}

/// The Mayer-Vietoris edge map f = cor_1 - cor_0 as one block matrix with
/// rows ⊕_v H1(G(v)) and columns ⊕_e H1(G(e)), plus its injectivity.
pub struct MvMap {
    pub matrix: FpMatrix,
    pub vertex_offset: Vec<usize>,
    pub edge_offset: Vec<usize>,
    pub injective: bool,
}

pub fn mayer_vietoris_edge_map(g: &GraphOfGroups) -> MvMap {
    let prime = g.prime;
    let mut vertex_offset = Vec::new();
    let mut off = 0usize;
    for v in &g.vertices {
        vertex_offset.push(off);
        off += h1_dim(&v.group);
    }
    let rows = off;
    let mut edge_offset = Vec::new();
    let mut coff = 0usize;
    for e in &g.edges {
        edge_offset.push(coff);
        coff += edge_h1_dim(&e.group);
    }
    let cols = coff;
    let mut m = FpMatrix::zero(prime, rows, cols);
    for (ei, e) in g.edges.iter().enumerate() {
        let k = edge_h1_dim(&e.group);
        if k == 0 {
            continue;
        }
        let m0 = cor_matrix(&e.group, &e.attach[0], &g.vertices[e.d0].group);
        let m1 = cor_matrix(&e.group, &e.attach[1], &g.vertices[e.d1].group);
        for j in 0..k {
            for (i, &x) in m1.column(j).entries.iter().enumerate() {
                let r = vertex_offset[e.d1] + i;
                let cur = m.get(r, edge_offset[ei] + j);
                m.set(r, edge_offset[ei] + j, (cur + x) % prime);
            }
            for (i, &x) in m0.column(j).neg().entries.iter().enumerate() {
                let r = vertex_offset[e.d0] + i;
                let cur = m.get(r, edge_offset[ei] + j);
                m.set(r, edge_offset[ei] + j, (cur + x) % prime);
            }
        }
    }
    let injective = m.rank() == cols;
    MvMap { matrix: m, vertex_offset, edge_offset, injective }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::build::*;
    use crate::groups::finite::FiniteGroup;
    use crate::groups::free::FreeGroupContext;

    fn c4_c2_c4() -> GraphOfGroups {
        let c4a = FiniteGroup::cyclic(2, 4, "a", "C4");
        let c4b = FiniteGroup::cyclic(2, 4, "b", "C4");
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        amalgam_finite(2, c4a, c4b, c2, &[2], &[2]).unwrap()
    }

    #[test]
    fn rank_of_single_cp() {
        let g = single_vertex(3, "v", finite(FiniteGroup::cyclic(3, 3, "a", "C3")));
        assert_eq!(rank_mod_p(&g), 1);
    }

    #[test]
    fn rank_of_bouquet() {
        for n in 0..4 {
            let g = bouquet(2, n);
            assert_eq!(rank_mod_p(&g), n);
        }
    }

    #[test]
    fn rank_of_c4_amalgam_is_2() {
        // the edge C2 lands in the Frattini subgroup of both sides, so the
        // relation contributes nothing mod 2
        assert_eq!(rank_mod_p(&c4_c2_c4()), 2);
    }

    #[test]
    fn mv_map_shapes() {
        let g = c4_c2_c4();
        let mv = mayer_vietoris_edge_map(&g);
        assert_eq!(mv.matrix.rows, 2);
        assert_eq!(mv.matrix.cols, 1);
        // both corestrictions vanish: kernel is everything
        assert!(!mv.injective);

        // free amalgam identifying a = x is injective
        let f1 = FreeGroupContext::new(2, &["a", "b"]);
        let f2 = FreeGroupContext::new(2, &["x", "y"]);
        let g = amalgam_free_cyclic(f1.clone(), f2.clone(), f1.gen(0), f2.gen(0));
        let mv = mayer_vietoris_edge_map(&g);
        assert!(mv.injective);

        // trivial edge groups: no columns, vacuously injective
        let mv = mayer_vietoris_edge_map(&bouquet(2, 3));
        assert_eq!(mv.matrix.cols, 0);
        assert!(mv.injective);
    }

    #[test]
    fn mayer_vietoris_rank_bounds_hold() {
        // dim H1(G1) + dim H1(G2) - dim H1(C) <= rank <= dim H1(G1) + dim H1(G2)
        let g = c4_c2_c4();
        let r = rank_mod_p(&g);
        assert!((1 + 1 - 1..=2).contains(&r));
        let d4 = FiniteGroup::dihedral(4, ("r", "s"), "D4").unwrap();
        let s = d4.gens[1];
        let c2 = FiniteGroup::cyclic(2, 2, "c", "C2");
        let g2 = amalgam_finite(2, d4.clone(), d4.clone(), c2, &[s], &[s]).unwrap();
        let r2 = rank_mod_p(&g2);
        assert!(r2 <= 4 && r2 + 1 >= 4);
    }

    #[test]
    fn composite_h1_matches_flat_rank() {
        let g = c4_c2_c4();
        let desc = GroupDesc::Composite(std::sync::Arc::new(g.clone()));
        assert_eq!(h1_dim(&desc), rank_mod_p(&g));
    }
}
