//! 1-dimensional moduli spaces for square faces: interval matchings of the
//! two composition moduli spaces, with exact positions and framings.

use super::ladybug::{ladybug_pairing, LadybugChoice};
use super::{path_points_all, PathPoint, Position};
use crate::algebra::{bit_of, GenIdx, SaddleKind};
use crate::complex::{CubeComplex, VertexMask};
use crate::error::{AkhError, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChordKind {
    ThroughStrand,
    Turnback,
}

/// A chord of the matching; endpoints are (side, point index) with side 0
/// the composition through u + e_i (lower direction first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub kind: ChordKind,
}

#[derive(Clone, Debug)]
pub struct SquareMatching {
    pub u: VertexMask,
    pub dirs: (usize, usize),
    pub x: GenIdx,
    pub y: GenIdx,
    pub sides: [Vec<PathPoint>; 2],
    pub chords: Vec<Chord>,
}

impl SquareMatching {
    pub fn side_through(&self, w: VertexMask) -> Option<usize> {
        if w == self.u | (1 << self.dirs.0) {
            Some(0)
        } else if w == self.u | (1 << self.dirs.1) {
            Some(1)
        } else {
            None
        }
    }

    pub fn point(&self, end: (usize, usize)) -> &PathPoint {
        &self.sides[end.0][end.1]
    }

    /// Planarity: no two chords interleave on the boundary cycle of the
    /// strip (left side ascending, right side descending). Points without
    /// positions (non-J faces) are trivially planar.
    pub fn is_planar(&self) -> bool {
        let coord = |end: (usize, usize)| -> Option<Position> {
            let p = self.point(end).position()?;
            Some(if end.0 == 0 { p } else { Position::from(2) - p })
        };
        let spans: Vec<(Position, Position)> = match self
            .chords
            .iter()
            .map(|c| {
                let (a, b) = (coord(c.a)?, coord(c.b)?);
                Some((a.min(b), a.max(b)))
            })
            .collect::<Option<Vec<_>>>()
        {
            Some(s) => s,
            None => return true,
        };
        for i in 0..spans.len() {
            for j in i + 1..spans.len() {
                let (a1, b1) = spans[i];
                let (a2, b2) = spans[j];
                let inside1 = a1 < a2 && a2 < b1;
                let inside2 = a1 < b2 && b2 < b1;
                if inside1 != inside2 {
                    return false;
                }
            }
        }
        true
    }
}

/// Construct the interval matching of a square face for one generator pair.
pub fn square_moduli(
    cube: &CubeComplex,
    u: VertexMask,
    dirs: (usize, usize),
    x: GenIdx,
    y: GenIdx,
    choice: LadybugChoice,
) -> Result<SquareMatching> {
    let (i, j) = dirs;
    assert!(i < j, "directions must be ordered");
    let side0 = path_points_for(cube, u, &[i, j], x, y);
    let side1 = path_points_for(cube, u, &[j, i], x, y);
    build_matching(cube, u, dirs, x, y, side0, side1, choice)
}

fn path_points_for(
    cube: &CubeComplex,
    u: VertexMask,
    dirs: &[usize],
    x: GenIdx,
    y: GenIdx,
) -> Vec<PathPoint> {
    path_points_all(cube, u, dirs)
        .remove(&(x, y))
        .unwrap_or_default()
}

pub(crate) fn build_matching(
    cube: &CubeComplex,
    u: VertexMask,
    dirs: (usize, usize),
    x: GenIdx,
    y: GenIdx,
    side0: Vec<PathPoint>,
    side1: Vec<PathPoint>,
    choice: LadybugChoice,
) -> Result<SquareMatching> {
    let (i, j) = dirs;
    let j_face = Some(j) == cube.j_dir();
    let fail = |msg: String| {
        Err(AkhError::Moduli(format!(
            "face {u:b}+{{{i},{j}}}, x={x}, y={y}: {msg}"
        )))
    };

    let chords: Vec<Chord> = if !j_face {
        // Pure annular Khovanov face: a bijection of equal-size sides.
        if side0.len() != side1.len() {
            return fail(format!(
                "compositions have sizes {} and {}",
                side0.len(),
                side1.len()
            ));
        }
        match side0.len() {
            0 => Vec::new(),
            1 => vec![Chord {
                a: (0, 0),
                b: (1, 0),
                kind: ChordKind::ThroughStrand,
            }],
            2 => {
                // Ladybug: match the split circles by the fixed pairing.
                let d = &cube.diagram;
                let ru = cube.resolution_at(u);
                let ra = cube.resolution_at(u | (1 << i));
                let rb = cube.resolution_at(u | (1 << j));
                let pairs = ladybug_pairing(d, ru, ra, rb, i, j, choice)?;
                let piece_of = |res: &crate::diagram::Resolution,
                                pt: &PathPoint,
                                split: &[usize; 2]|
                 -> Result<usize> {
                    let z = pt.gens[1];
                    let c = res.n_circles();
                    let ones: Vec<usize> = split
                        .iter()
                        .copied()
                        .filter(|&ci| bit_of(z, ci, c) == 0)
                        .collect();
                    if ones.len() != 1 {
                        return Err(AkhError::Moduli(
                            "ladybug intermediate generator must mark one piece".into(),
                        ));
                    }
                    Ok(ones[0])
                };
                let split_a = split_pair(cube, u, i)?;
                let split_b = split_pair(cube, u, j)?;
                let mut chords = Vec::new();
                for &(pa, pb) in &pairs {
                    let a_idx = side0
                        .iter()
                        .position(|p| piece_of(ra, p, &split_a).ok() == Some(pa))
                        .ok_or_else(|| AkhError::Moduli("ladybug point not found".into()))?;
                    let b_idx = side1
                        .iter()
                        .position(|p| piece_of(rb, p, &split_b).ok() == Some(pb))
                        .ok_or_else(|| AkhError::Moduli("ladybug point not found".into()))?;
                    chords.push(Chord {
                        a: (0, a_idx),
                        b: (1, b_idx),
                        kind: ChordKind::ThroughStrand,
                    });
                }
                chords
            }
            n => return fail(format!("composition of size {n} on a Khovanov face")),
        }
    } else {
        // J face: i is the saddle direction, j the J direction.
        let sd = cube.saddle(u, i);
        let ru = cube.resolution_at(u);
        let rv = cube.resolution_at(u | (1 << i));
        // Essential index correspondence across the saddle (1-based).
        let ess_map: BTreeMap<usize, usize> = sd.essential_correspondence(ru, rv);
        // side0 = saddle first (J acts at rv); side1 = J first (acts at ru).
        let acted_of = |p: &PathPoint| p.acted.expect("J-face points carry J data").1;
        let mut used0 = vec![false; side0.len()];
        let mut used1 = vec![false; side1.len()];
        let mut chords = Vec::new();
        for (i1, p1) in side1.iter().enumerate() {
            let a = acted_of(p1);
            if let Some(&b) = ess_map.get(&a) {
                if let Some(i0) = side0
                    .iter()
                    .enumerate()
                    .position(|(k, p0)| !used0[k] && acted_of(p0) == b)
                {
                    if p1.framing() != side0[i0].framing() {
                        return fail("through-strand endpoints differ in framing".into());
                    }
                    used0[i0] = true;
                    used1[i1] = true;
                    chords.push(Chord {
                        a: (0, i0),
                        b: (1, i1),
                        kind: ChordKind::ThroughStrand,
                    });
                }
            }
        }
        for side in 0..2 {
            let (pts, used): (&Vec<PathPoint>, &mut Vec<bool>) = if side == 0 {
                (&side0, &mut used0)
            } else {
                (&side1, &mut used1)
            };
            let leftovers: Vec<usize> = (0..pts.len()).filter(|&k| !used[k]).collect();
            if leftovers.is_empty() {
                continue;
            }
            if leftovers.len() != 2 {
                return fail(format!(
                    "{} unmatched boundary points on side {side}",
                    leftovers.len()
                ));
            }
            let (k0, k1) = (leftovers[0], leftovers[1]);
            // The leftover points must act on the circles created or
            // destroyed by the saddle, which are nesting-adjacent.
            let (a0, a1) = (acted_of(&pts[k0]), acted_of(&pts[k1]));
            if a0.abs_diff(a1) != 1 {
                return fail("turnback points must act on adjacent circles".into());
            }
            let participants: Vec<usize> = match sd.kind {
                SaddleKind::Merge { a, b, .. } => [a, b]
                    .iter()
                    .filter_map(|&c| ru.essential_index(c))
                    .collect(),
                SaddleKind::Split { a, b, .. } => [a, b]
                    .iter()
                    .filter_map(|&c| rv.essential_index(c))
                    .collect(),
            };
            let mut acted: Vec<usize> = vec![a0, a1];
            acted.sort_unstable();
            let mut parts = participants;
            parts.sort_unstable();
            if acted != parts {
                return fail("turnback points must act on the saddle participants".into());
            }
            if pts[k0].framing() == pts[k1].framing() {
                return fail("turnback endpoints must be oppositely framed".into());
            }
            used[k0] = true;
            used[k1] = true;
            chords.push(Chord {
                a: (side, k0),
                b: (side, k1),
                kind: ChordKind::Turnback,
            });
        }
        if used0.iter().any(|u| !u) || used1.iter().any(|u| !u) {
            return fail("unmatched boundary point".into());
        }
        chords
    };

    let m = SquareMatching {
        u,
        dirs,
        x,
        y,
        sides: [side0, side1],
        chords,
    };
    if !m.is_planar() {
        return Err(AkhError::Moduli(format!(
            "face {u:b}+{{{i},{j}}}: matching is not planar"
        )));
    }
    Ok(m)
}

/// The two circles created by the split of direction `dir` out of `u`.
fn split_pair(cube: &CubeComplex, u: VertexMask, dir: usize) -> Result<[usize; 2]> {
    match cube.saddle(u, dir).kind {
        SaddleKind::Split { a, b, .. } => Ok([a, b]),
        SaddleKind::Merge { .. } => Err(AkhError::Moduli(
            "ladybug face must split at both directions".into(),
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SquaresReport {
    pub pass: bool,
    pub faces: usize,
    pub pairs: usize,
    pub turnbacks: usize,
    pub ladybugs: usize,
    pub counterexample: Option<String>,
}

/// Verify the interval matchings of every square face: construction
/// succeeds, boundaries are exact, framing rules hold, matchings are
/// planar, and the framed signed counts of the two sides agree.
pub fn verify_squares(cube: &CubeComplex, choice: LadybugChoice) -> SquaresReport {
    let faces = super::subcubes(cube.ambient_dim, 2);
    let results: Vec<std::result::Result<(usize, usize, usize), String>> = faces
        .par_iter()
        .map(|&(u, ref dirs)| {
            let (i, j) = (dirs[0], dirs[1]);
            let side0_all = path_points_all(cube, u, &[i, j]);
            let side1_all = path_points_all(cube, u, &[j, i]);
            let mut keys: std::collections::BTreeSet<(GenIdx, GenIdx)> =
                side0_all.keys().copied().collect();
            keys.extend(side1_all.keys().copied());
            let mut pairs = 0;
            let mut turnbacks = 0;
            let mut ladybugs = 0;
            for (x, y) in keys {
                let s0 = side0_all.get(&(x, y)).cloned().unwrap_or_default();
                let s1 = side1_all.get(&(x, y)).cloned().unwrap_or_default();
                let signed0: i64 = s0.iter().map(|p| p.sign as i64).sum();
                let signed1: i64 = s1.iter().map(|p| p.sign as i64).sum();
                if signed0 != signed1 {
                    return Err(format!(
                        "face {u:b}+{{{i},{j}}}: signed counts differ ({signed0} vs {signed1})"
                    ));
                }
                if s0.len() == 2 && s1.len() == 2 && Some(j) != cube.j_dir() {
                    ladybugs += 1;
                }
                match build_matching(cube, u, (i, j), x, y, s0, s1, choice) {
                    Ok(m) => {
                        turnbacks += m
                            .chords
                            .iter()
                            .filter(|c| c.kind == ChordKind::Turnback)
                            .count();
                        pairs += 1;
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok((pairs, turnbacks, ladybugs))
        })
        .collect();

    let mut pairs = 0;
    let mut turnbacks = 0;
    let mut ladybugs = 0;
    for r in results {
        match r {
            Ok((p, t, l)) => {
                pairs += p;
                turnbacks += t;
                ladybugs += l;
            }
            Err(e) => {
                return SquaresReport {
                    pass: false,
                    faces: faces.len(),
                    pairs,
                    turnbacks,
                    ladybugs,
                    counterexample: Some(e),
                }
            }
        }
    }
    SquaresReport {
        pass: true,
        faces: faces.len(),
        pairs,
        turnbacks,
        ladybugs,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::complex::{build_ckh, build_cone};
    use crate::diagram::parse_morse_word;
    use crate::sl2::Sl2Op;
    use num_rational::Ratio;

    #[test]
    fn e_face_through_strand() {
        // Merge of a trivial into an essential circle, E on both sides.
        let d = parse_morse_word("strands 1\ncup 2\nx- 1\ncap 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let r0 = cube.resolution_at(0);
        let r1 = cube.resolution_at(1);
        let x = Generator::parse("1,v-", r0).unwrap().index(r0);
        let y = Generator::parse("v+", r1).unwrap().index(r1);
        let m = square_moduli(&cube, 0, (0, 1), x, y, LadybugChoice::Right).unwrap();
        assert_eq!(m.chords.len(), 1);
        assert_eq!(m.chords[0].kind, ChordKind::ThroughStrand);
        assert_eq!(m.sides[0].len(), 1);
        assert_eq!(m.sides[1].len(), 1);
        assert_eq!(m.sides[0][0].position(), Some(Ratio::new(1, 2)));
        assert_eq!(m.sides[1][0].position(), Some(Ratio::new(1, 2)));
    }

    #[test]
    fn e_face_turnback() {
        // Split of a trivial circle into two essentials; x = 1, y = v+ v+.
        let d = parse_morse_word("strands 2\nx- 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let r0 = cube.resolution_at(0);
        let r1 = cube.resolution_at(1);
        let x = Generator::parse("1", r0).unwrap().index(r0);
        let y = Generator::parse("v+,v+", r1).unwrap().index(r1);
        let m = square_moduli(&cube, 0, (0, 1), x, y, LadybugChoice::Right).unwrap();
        assert_eq!(m.sides[0].len(), 2, "two points through the saddle");
        assert!(m.sides[1].is_empty(), "E kills the trivial label first");
        assert_eq!(m.chords.len(), 1);
        assert_eq!(m.chords[0].kind, ChordKind::Turnback);
        let mut pts: Vec<_> = m.sides[0]
            .iter()
            .map(|p| (p.position().unwrap(), p.framing().unwrap()))
            .collect();
        pts.sort();
        assert_eq!(
            pts,
            vec![(Ratio::new(1, 3), 1), (Ratio::new(2, 3), -1)],
            "framed turnback joining (1/3,+) and (2/3,-)"
        );
    }

    #[test]
    fn h_face_merge_through_and_turnback() {
        let d = parse_morse_word("strands 4\nx+ 2").unwrap();
        let cube = build_cone(&d, Sl2Op::H);
        let r0 = cube.resolution_at(0);
        let r1 = cube.resolution_at(1);
        let x = Generator::parse("v+,v+,v-,v-", r0).unwrap().index(r0);
        let y = Generator::parse("X,v+,v-", r1).unwrap().index(r1);
        let m = square_moduli(&cube, 0, (0, 1), x, y, LadybugChoice::Right).unwrap();
        let throughs = m
            .chords
            .iter()
            .filter(|c| c.kind == ChordKind::ThroughStrand)
            .count();
        let turnbacks = m
            .chords
            .iter()
            .filter(|c| c.kind == ChordKind::Turnback)
            .count();
        assert_eq!((throughs, turnbacks), (2, 1));
        assert!(m.is_planar());
    }

    #[test]
    fn worked_example_cancellation_face() {
        // The face whose compositions are empty vs two canceling points.
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let u: VertexMask = 0b010; // crossing 2 already done
        let r_u = cube.resolution_at(u);
        let r_v = cube.resolution_at(0b011);
        let x = Generator::parse("v+,v-,v-", r_u).unwrap().index(r_u);
        let y = Generator::parse("X,v+", r_v).unwrap().index(r_v);
        let m = square_moduli(&cube, u, (0, 2), x, y, LadybugChoice::Right).unwrap();
        assert!(m.sides[0].is_empty(), "saddle-first composition is empty");
        assert_eq!(m.sides[1].len(), 2, "two canceling flow lines");
        assert_eq!(m.chords.len(), 1);
        assert_eq!(m.chords[0].kind, ChordKind::Turnback);
        let mut pts: Vec<_> = m.sides[1]
            .iter()
            .map(|p| (p.position().unwrap(), p.framing().unwrap()))
            .collect();
        pts.sort();
        assert_eq!(pts, vec![(Ratio::new(2, 4), -1), (Ratio::new(3, 4), 1)]);
    }

    #[test]
    fn ladybug_face_matches_consistently() {
        let d = parse_morse_word("strands 2\nx+ 1\nx- 1").unwrap();
        let cube = build_ckh(&d);
        let r0 = cube.resolution_at(0);
        let r3 = cube.resolution_at(0b11);
        let x = Generator::parse("1", r0).unwrap().index(r0);
        let y = Generator::parse("X", r3).unwrap().index(r3);
        let m = square_moduli(&cube, 0, (0, 1), x, y, LadybugChoice::Right).unwrap();
        assert_eq!(m.sides[0].len(), 2);
        assert_eq!(m.sides[1].len(), 2);
        assert_eq!(m.chords.len(), 2);
        let left = square_moduli(&cube, 0, (0, 1), x, y, LadybugChoice::Left).unwrap();
        assert_ne!(m.chords, left.chords, "the two conventions differ");
    }

    #[test]
    fn verify_squares_on_the_two_crossing_knot() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
            let cube = build_cone(&d, op);
            let rep = verify_squares(&cube, LadybugChoice::Right);
            assert!(rep.pass, "{op:?}: {:?}", rep.counterexample);
        }
    }
}
