//! Moduli-space data of the framed flow category refining Cone(J):
//! 0-dimensional edge and path moduli with exact positions and framings,
//! 1-dimensional square-face matchings, the thinness propositions, and the
//! boundary-closure check for 3-dimensional subcubes.

mod closure;
mod ladybug;
mod squares;
mod thin;

pub use closure::{verify_closure_3d, ClosureReport};
pub use ladybug::{ladybug_pairing, LadybugChoice};
pub use squares::{square_moduli, verify_squares, Chord, ChordKind, SquareMatching, SquaresReport};
pub use thin::{check_thin_props, ThinReport};

use crate::algebra::GenIdx;
use crate::complex::{CubeComplex, VertexMask};
use crate::sl2::{j_terms, Sl2Op};
use num_rational::Ratio;
use std::collections::BTreeMap;

/// Exact position in (0,1) of a framed point.
pub type Position = Ratio<i64>;

/// A point of an edge moduli space. `acted` is present exactly on J edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgePoint {
    pub target: GenIdx,
    /// Coefficient contributed to the differential (+1 on saddle edges).
    pub coeff: i8,
    /// `(1-based essential index, essential count, framing)` on a J edge.
    pub acted: Option<(usize, usize, i8)>,
}

impl EdgePoint {
    pub fn position(&self) -> Option<Position> {
        self.acted
            .map(|(i, s, _)| Ratio::new(i as i64, s as i64 + 1))
    }
}

/// The 0-dimensional moduli space of a single cube edge.
pub fn edge_moduli(cube: &CubeComplex, mask: VertexMask, dir: usize, x: GenIdx) -> Vec<EdgePoint> {
    debug_assert_eq!(mask & (1 << dir), 0);
    if Some(dir) == cube.j_dir() {
        let op = cube.j_op.unwrap();
        let res = cube.resolution_at(mask);
        let s = res.essential_count();
        j_terms(op, res, x)
            .into_iter()
            .map(|t| EdgePoint {
                target: t.target,
                coeff: t.coeff,
                acted: Some((t.acted, s, framing_of(op, t.coeff))),
            })
            .collect()
    } else {
        cube.edge_terms(mask, dir, x)
            .iter()
            .map(|&(y, c)| EdgePoint {
                target: y,
                coeff: c as i8,
                acted: None,
            })
            .collect()
    }
}

fn framing_of(op: Sl2Op, coeff: i8) -> i8 {
    // For E/F the framing is the sign (-1)^(i+1), which is the coefficient;
    // for H it is the label sign, which is also the coefficient.
    let _ = op;
    coeff.signum()
}

/// A point of a path moduli space: the full generator witness plus the
/// J-edge data when the path involves J.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathPoint {
    /// Generators along the path, from x to y (length = edges + 1).
    pub gens: Vec<GenIdx>,
    /// `(step, 1-based essential index, essential count, framing)`.
    pub acted: Option<(usize, usize, usize, i8)>,
    /// Product of the edge coefficients.
    pub sign: i8,
}

impl PathPoint {
    pub fn position(&self) -> Option<Position> {
        self.acted
            .map(|(_, i, s, _)| Ratio::new(i as i64, s as i64 + 1))
    }

    pub fn framing(&self) -> Option<i8> {
        self.acted.map(|(_, _, _, f)| f)
    }

    pub fn x(&self) -> GenIdx {
        *self.gens.first().unwrap()
    }

    pub fn y(&self) -> GenIdx {
        *self.gens.last().unwrap()
    }
}

/// All path moduli points along `dirs` (temporal order) out of vertex `u`,
/// grouped by (source, target) generator pair.
pub fn path_points_all(
    cube: &CubeComplex,
    u: VertexMask,
    dirs: &[usize],
) -> BTreeMap<(GenIdx, GenIdx), Vec<PathPoint>> {
    let mut out: BTreeMap<(GenIdx, GenIdx), Vec<PathPoint>> = BTreeMap::new();
    for x in 0..cube.basis_size(u) as GenIdx {
        let mut frontier: Vec<PathPoint> = vec![PathPoint {
            gens: vec![x],
            acted: None,
            sign: 1,
        }];
        let mut mask = u;
        for (step, &dir) in dirs.iter().enumerate() {
            let mut next: Vec<PathPoint> = Vec::new();
            for pt in &frontier {
                let cur = *pt.gens.last().unwrap();
                for ep in edge_moduli(cube, mask, dir, cur) {
                    let mut np = pt.clone();
                    np.gens.push(ep.target);
                    np.sign *= ep.coeff.signum();
                    if let Some((i, s, f)) = ep.acted {
                        debug_assert!(np.acted.is_none(), "one J edge per path");
                        np.acted = Some((step, i, s, f));
                    }
                    next.push(np);
                }
            }
            frontier = next;
            mask |= 1 << dir;
        }
        for pt in frontier {
            out.entry((x, pt.y())).or_default().push(pt);
        }
    }
    out
}

/// Path moduli space for a fixed generator pair.
#[derive(Clone, Debug)]
pub struct PathModuli {
    pub u: VertexMask,
    pub dirs: Vec<usize>,
    pub x: GenIdx,
    pub y: GenIdx,
    pub points: Vec<PathPoint>,
    /// Vertex before the J edge, when the path involves J.
    pub e0: Option<VertexMask>,
}

pub fn path_moduli(
    cube: &CubeComplex,
    u: VertexMask,
    dirs: &[usize],
    x: GenIdx,
    y: GenIdx,
) -> PathModuli {
    let all = path_points_all(cube, u, dirs);
    let points = all.get(&(x, y)).cloned().unwrap_or_default();
    let e0 = cube.j_dir().and_then(|jd| {
        dirs.iter().position(|&d| d == jd).map(|step| {
            let mut m = u;
            for &d in &dirs[..step] {
                m |= 1 << d;
            }
            m
        })
    });
    PathModuli {
        u,
        dirs: dirs.to_vec(),
        x,
        y,
        points,
        e0,
    }
}

/// Human-readable path name in composition order (rightmost edge first),
/// matching the usual "1E2" style labels.
pub fn path_name(cube: &CubeComplex, dirs: &[usize]) -> String {
    dirs.iter()
        .rev()
        .map(|&d| {
            if Some(d) == cube.j_dir() {
                cube.j_op.unwrap().as_str().to_string()
            } else {
                (d + 1).to_string()
            }
        })
        .collect()
}

/// Iterate the m-dimensional subcubes of the ambient cube as
/// `(base vertex, sorted direction set)`.
pub fn subcubes(ambient_dim: usize, m: usize) -> Vec<(VertexMask, Vec<usize>)> {
    let mut out = Vec::new();
    let dirsets = choose(ambient_dim, m);
    for dirs in &dirsets {
        let dirmask: VertexMask = dirs.iter().map(|&d| 1u32 << d).sum();
        for mask in 0..(1u32 << ambient_dim) {
            if mask & dirmask == 0 {
                out.push((mask, dirs.clone()));
            }
        }
    }
    out.sort();
    out
}

fn choose(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

/// All permutations of a direction set (the paths through its subcube).
pub fn permutations(dirs: &[usize]) -> Vec<Vec<usize>> {
    if dirs.len() <= 1 {
        return vec![dirs.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &d) in dirs.iter().enumerate() {
        let mut rest = dirs.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut p = vec![d];
            p.append(&mut tail);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::complex::{build_cone, build_ckh};
    use crate::diagram::parse_morse_word;
    use crate::sl2::Sl2Op;

    #[test]
    fn edge_moduli_e_on_two_essentials() {
        let d = parse_morse_word("strands 2").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let r = cube.resolution_at(0);
        let g = |s: &str| Generator::parse(s, r).unwrap().index(r);
        // x = v- (x) v-, y = v+ (x) v-: one point at 1/3 with framing +1.
        let pts = edge_moduli(&cube, 0, 0, g("v-,v-"));
        let p1: Vec<_> = pts.iter().filter(|p| p.target == g("v+,v-")).collect();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].acted, Some((1, 2, 1)));
        assert_eq!(p1[0].position(), Some(Ratio::new(1, 3)));
        // y = v- (x) v+: one point at 2/3 with framing -1.
        let p2: Vec<_> = pts.iter().filter(|p| p.target == g("v-,v+")).collect();
        assert_eq!(p2[0].acted, Some((2, 2, -1)));
        assert_eq!(p2[0].position(), Some(Ratio::new(2, 3)));
    }

    #[test]
    fn edge_moduli_h_points() {
        let d = parse_morse_word("strands 2").unwrap();
        let cube = build_cone(&d, Sl2Op::H);
        let r = cube.resolution_at(0);
        let g = |s: &str| Generator::parse(s, r).unwrap().index(r);
        let x = g("v+,v-");
        let pts = edge_moduli(&cube, 0, 0, x);
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.target == x));
        assert_eq!(pts[0].acted, Some((1, 2, 1)));
        assert_eq!(pts[1].acted, Some((2, 2, -1)));
    }

    #[test]
    fn edge_moduli_h_empty_without_essentials() {
        let d = parse_morse_word("strands 0\ncup 1\ncap 1").unwrap();
        let cube = build_cone(&d, Sl2Op::H);
        for x in 0..cube.basis_size(0) as GenIdx {
            assert!(edge_moduli(&cube, 0, 0, x).is_empty());
        }
    }

    #[test]
    fn worked_example_path_counts() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let r0 = cube.resolution_at(0);
        let r7 = cube.resolution_at(0b011);
        let x = Generator::parse("1,v-", r0).unwrap().index(r0);
        let y = Generator::parse("X,v+", r7).unwrap().index(r7);
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for p in permutations(&[0, 1, 2]) {
            let m = path_moduli(&cube, 0, &p, x, y);
            counts.insert(path_name(&cube, &p), m.points.len());
        }
        assert_eq!(counts["1E2"], 3, "three flow lines above 1E2");
        for (name, c) in &counts {
            if name != "1E2" {
                assert_eq!(*c, 1, "path {name} should have a single flow line");
            }
        }
    }

    #[test]
    fn zero_composite_pairs_give_empty_paths() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let cube = build_ckh(&d);
        // In CKh there is no J direction; check a vanishing composite.
        let all = path_points_all(&cube, 0, &[0, 1]);
        let r0 = cube.resolution_at(0);
        let x = Generator::parse("X,v-", r0).unwrap().index(r0);
        assert!(all.keys().all(|&(sx, _)| sx != x), "X (x) v- dies along edge 1");
    }

    #[test]
    fn signed_point_count_matches_composite_coefficient() {
        // Sum of framed signs over a path's points equals the coefficient of
        // y in the unsigned composite of the edge maps.
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
            let cube = build_cone(&d, op);
            for perm in permutations(&[0, 1, 2]) {
                for ((_, _), pts) in path_points_all(&cube, 0, &perm) {
                    let signed: i64 = pts.iter().map(|p| p.sign as i64).sum();
                    // Recompute by matrix composition.
                    let mut acc: BTreeMap<GenIdx, i64> =
                        [(pts[0].x(), 1i64)].into_iter().collect();
                    let mut mask = 0u32;
                    for &dir in &perm {
                        let mut next: BTreeMap<GenIdx, i64> = BTreeMap::new();
                        for (&g, &c) in &acc {
                            for ep in edge_moduli(&cube, mask, dir, g) {
                                *next.entry(ep.target).or_insert(0) += c * ep.coeff as i64;
                            }
                        }
                        acc = next;
                        mask |= 1 << dir;
                    }
                    assert_eq!(acc.get(&pts[0].y()).copied().unwrap_or(0), signed);
                }
            }
        }
    }
}
