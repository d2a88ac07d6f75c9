//! Cube-shaped integer chain complexes: the annular Khovanov complex
//! CKh_A(D) and the mapping cone of an sl2 generator.
//!
//! Vertices are bitmasks with crossing i at bit i; in a cone the J
//! direction is the last coordinate. The sign assignment is the standard
//! s(u, i) = sum of u_j for j < i (mod 2), extended verbatim to the
//! (n+1)-cube.

use crate::algebra::{apply_saddle, gradings, saddle_data, GenIdx, SaddleData, TriDegree};
use crate::diagram::{AnnularDiagram, Resolution};
use crate::sl2::{apply_j, Sl2Op};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub type VertexMask = u32;

/// One cube edge: per source generator, the signed targets of the edge map
/// before the global sign assignment is applied.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub terms: Vec<Vec<(GenIdx, i32)>>,
    /// (-1)^(s_{u,v}) from the sign assignment.
    pub assign_sign: i8,
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub diagram: AnnularDiagram,
    /// Cube dimension: n for CKh_A, n+1 for a cone.
    pub ambient_dim: usize,
    pub j_op: Option<Sl2Op>,
    resolutions: Vec<Resolution>,
    degrees: Vec<Vec<TriDegree>>,
    edges: Vec<Vec<Option<EdgeData>>>,
    saddles: Vec<Vec<Option<SaddleData>>>,
}

impl CubeComplex {
    pub fn n_crossings(&self) -> usize {
        self.diagram.n_crossings()
    }

    pub fn n_vertices(&self) -> usize {
        1 << self.ambient_dim
    }

    /// The J direction, when this cube is a cone.
    pub fn j_dir(&self) -> Option<usize> {
        self.j_op.map(|_| self.ambient_dim - 1)
    }

    pub fn involves_j(&self, mask: VertexMask, dim: usize, dirs: &[usize]) -> bool {
        let _ = (mask, dim);
        match self.j_dir() {
            Some(jd) => dirs.contains(&jd),
            None => false,
        }
    }

    pub fn resolution_at(&self, mask: VertexMask) -> &Resolution {
        let n = self.n_crossings();
        &self.resolutions[(mask & ((1u32 << n) - 1)) as usize]
    }

    pub fn basis_size(&self, mask: VertexMask) -> usize {
        1 << self.resolution_at(mask).n_circles()
    }

    pub fn degree(&self, mask: VertexMask, gen: GenIdx) -> TriDegree {
        self.degrees[mask as usize][gen as usize]
    }

    pub fn edge(&self, mask: VertexMask, dir: usize) -> &EdgeData {
        self.edges[mask as usize][dir]
            .as_ref()
            .expect("edge exists when bit `dir` of `mask` is unset")
    }

    /// Unsigned terms of the edge map on one generator (the map's own
    /// E/F signs included, the sign assignment not).
    pub fn edge_terms(&self, mask: VertexMask, dir: usize, x: GenIdx) -> &[(GenIdx, i32)] {
        &self.edge(mask, dir).terms[x as usize]
    }

    /// Saddle combinatorics of a non-J edge.
    pub fn saddle(&self, mask: VertexMask, dir: usize) -> &SaddleData {
        let n = self.n_crossings();
        debug_assert!(dir < n);
        self.saddles[(mask & ((1u32 << n) - 1)) as usize][dir]
            .as_ref()
            .expect("saddle exists when bit `dir` is unset")
    }

    /// Signed differential entry sets: target accumulated over one edge.
    pub fn apply_signed_edge(&self, mask: VertexMask, dir: usize, x: GenIdx) -> Vec<(GenIdx, i64)> {
        let e = self.edge(mask, dir);
        e.terms[x as usize]
            .iter()
            .map(|&(y, c)| (y, c as i64 * e.assign_sign as i64))
            .collect()
    }

    /// Exact check that every square face anticommutes; returns the first
    /// counterexample description if d^2 != 0.
    pub fn d_squared_counterexample(&self) -> Option<String> {
        let dim = self.ambient_dim;
        let faces: Vec<(VertexMask, usize, usize)> = (0..self.n_vertices() as VertexMask)
            .flat_map(|mask| {
                (0..dim)
                    .filter(move |i| mask & (1 << i) == 0)
                    .flat_map(move |i| {
                        (i + 1..dim)
                            .filter(move |j| mask & (1 << j) == 0)
                            .map(move |j| (mask, i, j))
                    })
            })
            .collect();
        faces
            .par_iter()
            .filter_map(|&(mask, i, j)| {
                let via_i = mask | (1 << i);
                let via_j = mask | (1 << j);
                for x in 0..self.basis_size(mask) as GenIdx {
                    let mut acc: BTreeMap<GenIdx, i64> = BTreeMap::new();
                    for &(y, c1) in self.apply_signed_edge(mask, i, x).iter() {
                        for &(z, c2) in self.apply_signed_edge(via_i, j, y).iter() {
                            *acc.entry(z).or_insert(0) += c1 * c2;
                        }
                    }
                    for &(y, c1) in self.apply_signed_edge(mask, j, x).iter() {
                        for &(z, c2) in self.apply_signed_edge(via_j, i, y).iter() {
                            *acc.entry(z).or_insert(0) += c1 * c2;
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return Some(format!(
                            "face {mask:b}+{{{i},{j}}} fails on generator {x}"
                        ));
                    }
                }
                None
            })
            .min() // deterministic: lexicographically least message
    }

    pub fn verify_d_squared(&self) -> bool {
        self.d_squared_counterexample().is_none()
    }

    /// Graded Euler characteristic: (q, a) -> sum over h of (-1)^h rank.
    pub fn graded_euler(&self) -> BTreeMap<(i64, i64), i64> {
        let mut table: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        for mask in 0..self.n_vertices() as VertexMask {
            for x in 0..self.basis_size(mask) as GenIdx {
                let d = self.degree(mask, x);
                let sign = if d.h.rem_euclid(2) == 0 { 1 } else { -1 };
                *table.entry((d.q, d.a)).or_insert(0) += sign;
            }
        }
        table.retain(|_, v| *v != 0);
        table
    }

    /// Flip the sign of one edge (test helper for the mutation check).
    pub fn flip_edge_sign(&mut self, mask: VertexMask, dir: usize) {
        if let Some(e) = self.edges[mask as usize][dir].as_mut() {
            e.assign_sign = -e.assign_sign;
        }
    }
}

fn assign_sign(mask: VertexMask, dir: usize) -> i8 {
    let below = mask & ((1u32 << dir) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cone bidegree offset applied to copy-1 generators so that every edge of
/// the cone is tri-degree homogeneous.
fn cone_offset(j: Sl2Op) -> (i64, i64) {
    let (dq, da) = j.bidegree();
    (-dq, -da)
}

fn build(d: &AnnularDiagram, j_op: Option<Sl2Op>) -> CubeComplex {
    let n = d.n_crossings();
    let ambient_dim = n + usize::from(j_op.is_some());

    let resolutions: Vec<Resolution> = (0..(1u32 << n))
        .into_par_iter()
        .map(|m| d.resolve_mask(m))
        .collect();

    let saddles: Vec<Vec<Option<SaddleData>>> = (0..(1u32 << n))
        .into_par_iter()
        .map(|mask| {
            (0..n)
                .map(|c| {
                    if mask & (1 << c) != 0 {
                        return None;
                    }
                    let ru = &resolutions[mask as usize];
                    let rv = &resolutions[(mask | (1 << c)) as usize];
                    Some(saddle_data(d, ru, rv, c))
                })
                .collect()
        })
        .collect();

    let degrees: Vec<Vec<TriDegree>> = (0..(1u32 << ambient_dim))
        .into_par_iter()
        .map(|mask| {
            let res = &resolutions[(mask & ((1u32 << n) - 1)) as usize];
            let copy1 = j_op.is_some() && mask & (1 << n) != 0;
            (0..(1u32 << res.n_circles()))
                .map(|x| {
                    let mut t = gradings(d, res, x);
                    if copy1 {
                        let (dq, da) = cone_offset(j_op.unwrap());
                        t.h += 1;
                        t.q += dq;
                        t.a += da;
                    }
                    t
                })
                .collect()
        })
        .collect();

    let edges: Vec<Vec<Option<EdgeData>>> = (0..(1u32 << ambient_dim))
        .into_par_iter()
        .map(|mask| {
            (0..ambient_dim)
                .map(|dir| {
                    if mask & (1 << dir) != 0 {
                        return None;
                    }
                    let res = &resolutions[(mask & ((1u32 << n) - 1)) as usize];
                    let terms: Vec<Vec<(GenIdx, i32)>> = if dir == n {
                        // J edge.
                        let op = j_op.expect("bit n only exists for cones");
                        (0..(1u32 << res.n_circles()))
                            .map(|x| {
                                apply_j(op, res, x)
                                    .iter()
                                    .map(|(y, c)| {
                                        (y, c.to_i32().expect("small coefficient"))
                                    })
                                    .collect()
                            })
                            .collect()
                    } else {
                        let sd = saddles[(mask & ((1u32 << n) - 1)) as usize][dir]
                            .as_ref()
                            .unwrap();
                        let rv = &resolutions
                            [((mask | (1 << dir)) & ((1u32 << n) - 1)) as usize];
                        (0..(1u32 << res.n_circles()))
                            .map(|x| {
                                apply_saddle(res, rv, sd, x)
                                    .into_iter()
                                    .map(|y| (y, 1))
                                    .collect()
                            })
                            .collect()
                    };
                    Some(EdgeData {
                        terms,
                        assign_sign: assign_sign(mask, dir),
                    })
                })
                .collect()
        })
        .collect();

    CubeComplex {
        diagram: d.clone(),
        ambient_dim,
        j_op,
        resolutions,
        degrees,
        edges,
        saddles,
    }
}

/// The annular Khovanov complex of a diagram.
pub fn build_ckh(d: &AnnularDiagram) -> CubeComplex {
    let c = build(d, None);
    debug_assert!(c.verify_d_squared());
    c
}

/// The mapping cone of the chain map J, an (n+1)-dimensional cube with the
/// J coordinate last. d^2 = 0 is checked at build time.
pub fn build_cone(d: &AnnularDiagram, j: Sl2Op) -> CubeComplex {
    let c = build(d, Some(j));
    if let Some(cex) = c.d_squared_counterexample() {
        panic!("cone differential does not square to zero: {cex}");
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::diagram::parse_morse_word;

    fn knot2x() -> AnnularDiagram {
        parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap()
    }

    #[test]
    fn essential_unknot_complex() {
        let d = parse_morse_word("strands 1").unwrap();
        let c = build_ckh(&d);
        assert_eq!(c.n_vertices(), 1);
        assert_eq!(c.basis_size(0), 2);
    }

    #[test]
    fn trivial_unknot_complex() {
        let d = parse_morse_word("strands 0\ncup 1\ncap 1").unwrap();
        let c = build_ckh(&d);
        assert_eq!(c.basis_size(0), 2);
        let euler = c.graded_euler();
        assert_eq!(euler.get(&(1, 0)), Some(&1));
        assert_eq!(euler.get(&(-1, 0)), Some(&1));
        assert_eq!(euler.len(), 2);
    }

    #[test]
    fn two_crossing_cube_matches_worked_example() {
        let d = knot2x();
        let c = build_ckh(&d);
        assert!(c.verify_d_squared());
        // Edge maps of the square: (00) --1--> (10) is the trivial+essential
        // merge; (00) --2--> (01) splits the trivial circle into the two
        // innermost essentials.
        let r00 = c.resolution_at(0b00);
        let r01 = c.resolution_at(0b10);
        let x = Generator::parse("1,v-", r00).unwrap().index(r00);
        let img = c.edge_terms(0b00, 1, x);
        let want: Vec<GenIdx> = ["v+,v-,v-", "v-,v+,v-"]
            .iter()
            .map(|s| Generator::parse(s, r01).unwrap().index(r01))
            .collect();
        let got: Vec<GenIdx> = img.iter().map(|&(y, _)| y).collect();
        assert_eq!(got, want);
        // (01) --1--> (11) merges essentials 2 and 3: v- v+ v- survives to
        // X (x) v- while v+ v- v- dies (m(v-, v-) = 0), so the image of the
        // sum is a single X (x) v-.
        let r11 = c.resolution_at(0b11);
        let y = Generator::parse("X,v-", r11).unwrap().index(r11);
        let hits = |s: &str| {
            let g = Generator::parse(s, r01).unwrap().index(r01);
            c.edge_terms(0b10, 0, g)
                .iter()
                .filter(|&&(z, _)| z == y)
                .count()
        };
        assert_eq!(hits("v-,v+,v-"), 1);
        assert_eq!(hits("v+,v-,v-"), 0);
    }

    #[test]
    fn cone_of_essential_unknot() {
        let d = parse_morse_word("strands 1").unwrap();
        let c = build_cone(&d, Sl2Op::E);
        assert_eq!(c.n_vertices(), 2);
        let e = c.edge(0, 0);
        // E: v- -> v+, rank one.
        let nonzero: usize = e.terms.iter().map(|t| t.len()).sum();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn cone_edges_are_homogeneous() {
        let d = knot2x();
        for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
            let c = build_cone(&d, op);
            for mask in 0..c.n_vertices() as VertexMask {
                for dir in 0..c.ambient_dim {
                    if mask & (1 << dir) != 0 {
                        continue;
                    }
                    let to = mask | (1 << dir);
                    for x in 0..c.basis_size(mask) as GenIdx {
                        let dx = c.degree(mask, x);
                        for &(y, _) in c.edge_terms(mask, dir, x) {
                            let dy = c.degree(to, y);
                            assert_eq!(dy.h, dx.h + 1);
                            assert_eq!(dy.q, dx.q);
                            assert_eq!(dy.a, dx.a);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cone_h_jedges_are_diagonal_and_euler_vanishes() {
        let d = knot2x();
        let c = build_cone(&d, Sl2Op::H);
        let n = d.n_crossings();
        for mask in 0..(1u32 << n) {
            let e = c.edge(mask, n);
            for (x, terms) in e.terms.iter().enumerate() {
                for &(y, coeff) in terms {
                    assert_eq!(y, x as GenIdx);
                    let res = c.resolution_at(mask);
                    assert_eq!(coeff as i64, crate::algebra::adeg(res, x as GenIdx));
                }
            }
        }
        assert!(c.graded_euler().is_empty());
    }

    #[test]
    fn mutated_sign_breaks_d_squared() {
        let d = knot2x();
        let mut c = build_ckh(&d);
        assert!(c.verify_d_squared());
        c.flip_edge_sign(0b00, 0);
        assert!(!c.verify_d_squared());
    }

    #[test]
    fn khovanov_edge_entries_are_zero_or_one() {
        let d = knot2x();
        let c = build_ckh(&d);
        for mask in 0..c.n_vertices() as VertexMask {
            for dir in 0..c.ambient_dim {
                if mask & (1 << dir) != 0 {
                    continue;
                }
                for t in &c.edge(mask, dir).terms {
                    for &(_, coeff) in t {
                        assert_eq!(coeff, 1);
                    }
                }
            }
        }
    }
}
