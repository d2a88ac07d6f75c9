//! Boundary closure of 3-dimensional subcubes: the square-face intervals,
//! multiplied by the remaining edge moduli, must assemble into a closed
//! framed 1-manifold over the hexagon boundary; over subcubes without the
//! J edge the assembled cover must in addition be trivial (the hexagon
//! relation).

use super::ladybug::LadybugChoice;
use super::squares::{build_matching, ChordKind};
use super::{edge_moduli, path_points_all, PathPoint};
use crate::algebra::GenIdx;
use crate::complex::{CubeComplex, VertexMask};
use crate::error::{AkhError, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub pass: bool,
    pub subcubes: usize,
    pub pairs: usize,
    /// Hexagons with at least one turnback chord.
    pub with_turnbacks: usize,
    pub counterexample: Option<String>,
}

/// One assembled chord over a hexagon edge: endpoints are
/// `(corner index on the hexagon cycle, full path point)`.
#[derive(Clone, Debug)]
struct HexChord {
    /// Hexagon edge index k (connecting corners k and k+1 mod 6).
    edge: usize,
    a: (usize, PathPoint),
    b: (usize, PathPoint),
    kind: ChordKind,
}

/// The six paths of a 3-subcube in hexagon cycle order: consecutive paths
/// differ by one square face (adjacent transposition).
fn hexagon_cycle(dirs: &[usize]) -> Vec<Vec<usize>> {
    let (a, b, c) = (dirs[0], dirs[1], dirs[2]);
    vec![
        vec![a, b, c],
        vec![b, a, c],
        vec![b, c, a],
        vec![c, b, a],
        vec![c, a, b],
        vec![a, c, b],
    ]
}

/// Assemble the chords of every hexagon edge of one 3-subcube, for all
/// generator pairs at once, grouped by (x, y).
fn assemble_all(
    cube: &CubeComplex,
    u: VertexMask,
    cycle: &[Vec<usize>],
    choice: LadybugChoice,
) -> Result<BTreeMap<(GenIdx, GenIdx), Vec<HexChord>>> {
    let mut out: BTreeMap<(GenIdx, GenIdx), Vec<HexChord>> = BTreeMap::new();
    for k in 0..6 {
        let p_cur = &cycle[k];
        let p_next = &cycle[(k + 1) % 6];
        let spos = k % 2; // swap position alternates 0, 1, 0, 1, ...
        debug_assert_eq!(p_cur[spos], p_next[spos + 1]);
        debug_assert_eq!(p_cur[spos + 1], p_next[spos]);
        if spos == 0 {
            // Square on the first two edges, fixed edge afterwards.
            let (d0, d1, dfix) = (p_cur[0], p_cur[1], p_cur[2]);
            let w2 = u | (1 << d0) | (1 << d1);
            let lo = d0.min(d1);
            let hi = d0.max(d1);
            let mut s_lo = path_points_all(cube, u, &[lo, hi]);
            let mut s_hi = path_points_all(cube, u, &[hi, lo]);
            let mut keys: std::collections::BTreeSet<(GenIdx, GenIdx)> =
                s_lo.keys().copied().collect();
            keys.extend(s_hi.keys().copied());
            for (x, z) in keys {
                let side0 = s_lo.remove(&(x, z)).unwrap_or_default();
                let side1 = s_hi.remove(&(x, z)).unwrap_or_default();
                let m = build_matching(cube, u, (lo, hi), x, z, side0, side1, choice)?;
                for ep in edge_moduli(cube, w2, dfix, z) {
                    let y = ep.target;
                    for ch in &m.chords {
                        let assemble = |end: (usize, usize)| -> (usize, PathPoint) {
                            let sq_pt = m.point(end);
                            let through_first = if end.0 == 0 { lo } else { hi };
                            let owner = if p_cur[0] == through_first {
                                k
                            } else {
                                (k + 1) % 6
                            };
                            let mut gens = sq_pt.gens.clone();
                            gens.push(y);
                            let acted = sq_pt
                                .acted
                                .or_else(|| ep.acted.map(|(i, s, f)| (2usize, i, s, f)));
                            (
                                owner,
                                PathPoint {
                                    gens,
                                    acted,
                                    sign: sq_pt.sign * ep.coeff.signum(),
                                },
                            )
                        };
                        out.entry((x, y)).or_default().push(HexChord {
                            edge: k,
                            a: assemble(ch.a),
                            b: assemble(ch.b),
                            kind: ch.kind,
                        });
                    }
                }
            }
        } else {
            // Fixed first edge, square on the last two.
            let (dfix, d1, d2) = (p_cur[0], p_cur[1], p_cur[2]);
            let w1 = u | (1 << dfix);
            let lo = d1.min(d2);
            let hi = d1.max(d2);
            let mut s_lo = path_points_all(cube, w1, &[lo, hi]);
            let mut s_hi = path_points_all(cube, w1, &[hi, lo]);
            let mut keys: std::collections::BTreeSet<(GenIdx, GenIdx)> =
                s_lo.keys().copied().collect();
            keys.extend(s_hi.keys().copied());
            // Edge points grouped by target generator z.
            let mut edge_pts: BTreeMap<GenIdx, Vec<(GenIdx, super::EdgePoint)>> = BTreeMap::new();
            for x in 0..cube.basis_size(u) as GenIdx {
                for ep in edge_moduli(cube, u, dfix, x) {
                    edge_pts.entry(ep.target).or_default().push((x, ep));
                }
            }
            for (z, y) in keys {
                let side0 = s_lo.remove(&(z, y)).unwrap_or_default();
                let side1 = s_hi.remove(&(z, y)).unwrap_or_default();
                let m = build_matching(cube, w1, (lo, hi), z, y, side0, side1, choice)?;
                let Some(into_z) = edge_pts.get(&z) else { continue };
                for &(x, ep) in into_z {
                    for ch in &m.chords {
                        let assemble = |end: (usize, usize)| -> (usize, PathPoint) {
                            let sq_pt = m.point(end);
                            let through_first = if end.0 == 0 { lo } else { hi };
                            let owner = if p_cur[1] == through_first {
                                k
                            } else {
                                (k + 1) % 6
                            };
                            let mut gens = vec![x];
                            gens.extend_from_slice(&sq_pt.gens);
                            let acted = ep
                                .acted
                                .map(|(i, s, f)| (0usize, i, s, f))
                                .or_else(|| sq_pt.acted.map(|(st, i, s, f)| (st + 1, i, s, f)));
                            (
                                owner,
                                PathPoint {
                                    gens,
                                    acted,
                                    sign: sq_pt.sign * ep.coeff.signum(),
                                },
                            )
                        };
                        out.entry((x, y)).or_default().push(HexChord {
                            edge: k,
                            a: assemble(ch.a),
                            b: assemble(ch.b),
                            kind: ch.kind,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Closure of the assembled boundary for one generator pair: every corner
/// point is hit exactly once from each of its two adjacent hexagon edges,
/// with matching position and framing (enforced by full point identity).
fn check_closed(
    u: VertexMask,
    corner_pts: &[Vec<PathPoint>],
    chords: &[HexChord],
) -> Result<()> {
    let mut incidence: BTreeMap<(usize, &PathPoint, usize), usize> = BTreeMap::new();
    for ch in chords {
        for end in [&ch.a, &ch.b] {
            *incidence.entry((end.0, &end.1, ch.edge)).or_insert(0) += 1;
        }
    }
    for (k, pts) in corner_pts.iter().enumerate() {
        for pt in pts {
            let before = incidence.get(&(k, pt, (k + 5) % 6)).copied().unwrap_or(0);
            let after = incidence.get(&(k, pt, k)).copied().unwrap_or(0);
            if before != 1 || after != 1 {
                return Err(AkhError::Moduli(format!(
                    "subcube {u:b}: corner point at path {k} ({:?}) has chord ends \
                     ({before}, {after}) from its adjacent edges, expected (1, 1)",
                    pt.gens,
                )));
            }
        }
    }
    let total_corner: usize = corner_pts.iter().map(|p| p.len()).sum();
    let total_ends: usize = chords.len() * 2;
    if total_ends != 2 * total_corner {
        return Err(AkhError::Moduli(format!(
            "subcube {u:b}: {total_ends} chord ends for {total_corner} corner points"
        )));
    }
    Ok(())
}

/// Walk the assembled 1-manifold of a non-J hexagon and check that it is a
/// trivial cover: following the matchings once around the hexagon must be
/// the identity on every fiber.
fn trivial_cover_check(
    u: VertexMask,
    cycle_len: usize,
    corner_pts: &[Vec<PathPoint>],
    chords: &[HexChord],
) -> Result<()> {
    let n = corner_pts[0].len();
    if corner_pts.iter().any(|p| p.len() != n) {
        return Err(AkhError::Moduli(format!(
            "subcube {u:b}: fibers of a non-J hexagon differ in size"
        )));
    }
    for start in 0..n {
        let mut k = 0usize;
        let mut pt = corner_pts[0][start].clone();
        for _ in 0..cycle_len {
            let next = (k + 1) % cycle_len;
            let ch = chords
                .iter()
                .find(|c| {
                    c.edge == k && ((c.a.0 == k && c.a.1 == pt) || (c.b.0 == k && c.b.1 == pt))
                })
                .ok_or_else(|| {
                    AkhError::Moduli(format!("subcube {u:b}: missing through chord at path {k}"))
                })?;
            pt = if ch.a.0 == k && ch.a.1 == pt {
                ch.b.1.clone()
            } else {
                ch.a.1.clone()
            };
            k = next;
        }
        if pt != corner_pts[0][start] {
            return Err(AkhError::Moduli(format!(
                "subcube {u:b}: hexagon cover is nontrivial (monodromy moves a point)"
            )));
        }
    }
    Ok(())
}

/// Verify boundary closure over every 3-dimensional subcube, including the
/// trivial-cover (hexagon relation) check on subcubes without the J edge.
pub fn verify_closure_3d(cube: &CubeComplex, choice: LadybugChoice) -> ClosureReport {
    let subcubes = super::subcubes(cube.ambient_dim, 3);
    let results: Vec<std::result::Result<(usize, usize), String>> = subcubes
        .par_iter()
        .map(|&(u, ref dirs)| {
            let cycle = hexagon_cycle(dirs);
            let involves_j = cube.involves_j(u, 3, dirs);
            let per_path: Vec<BTreeMap<(GenIdx, GenIdx), Vec<PathPoint>>> = cycle
                .iter()
                .map(|p| path_points_all(cube, u, p))
                .collect();
            let mut keys: std::collections::BTreeSet<(GenIdx, GenIdx)> = Default::default();
            for m in &per_path {
                keys.extend(m.keys().copied());
            }
            let all_chords = assemble_all(cube, u, &cycle, choice).map_err(|e| e.to_string())?;
            let mut pairs = 0usize;
            let mut with_turnbacks = 0usize;
            for (x, y) in keys {
                let corner_pts: Vec<Vec<PathPoint>> = per_path
                    .iter()
                    .map(|m| m.get(&(x, y)).cloned().unwrap_or_default())
                    .collect();
                let empty = Vec::new();
                let chords = all_chords.get(&(x, y)).unwrap_or(&empty);
                check_closed(u, &corner_pts, chords).map_err(|e| e.to_string())?;
                if chords.iter().any(|c| c.kind == ChordKind::Turnback) {
                    with_turnbacks += 1;
                }
                if !involves_j {
                    trivial_cover_check(u, 6, &corner_pts, chords).map_err(|e| e.to_string())?;
                }
                pairs += 1;
            }
            // Chords for pairs without corner points would be dangling.
            for (key, chords) in &all_chords {
                if !chords.is_empty() && !per_path.iter().any(|m| m.contains_key(key)) {
                    return Err(format!(
                        "subcube {u:b}: chords for pair {key:?} without corner points"
                    ));
                }
            }
            Ok((pairs, with_turnbacks))
        })
        .collect();

    let mut pairs = 0;
    let mut with_turnbacks = 0;
    for r in results {
        match r {
            Ok((p, t)) => {
                pairs += p;
                with_turnbacks += t;
            }
            Err(e) => {
                return ClosureReport {
                    pass: false,
                    subcubes: subcubes.len(),
                    pairs,
                    with_turnbacks,
                    counterexample: Some(e),
                }
            }
        }
    }
    ClosureReport {
        pass: true,
        subcubes: subcubes.len(),
        pairs,
        with_turnbacks,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_ckh, build_cone};
    use crate::diagram::parse_morse_word;
    use crate::sl2::Sl2Op;

    #[test]
    fn worked_example_closure() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let rep = verify_closure_3d(&cube, LadybugChoice::Right);
        assert!(rep.pass, "{:?}", rep.counterexample);
        assert!(rep.with_turnbacks > 0, "the worked example has turnbacks");
    }

    /// The assembled boundary for the worked generator pair is one closed
    /// curve through all eight corner points.
    #[test]
    fn worked_example_assembled_curve() {
        use crate::algebra::Generator;
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let cube = build_cone(&d, Sl2Op::E);
        let cycle = hexagon_cycle(&[0, 1, 2]);
        let r0 = cube.resolution_at(0);
        let r7 = cube.resolution_at(0b011);
        let x = Generator::parse("1,v-", r0).unwrap().index(r0);
        let y = Generator::parse("X,v+", r7).unwrap().index(r7);
        let chords = assemble_all(&cube, 0, &cycle, LadybugChoice::Right)
            .unwrap()
            .remove(&(x, y))
            .unwrap();
        let corner_count: usize = cycle
            .iter()
            .map(|p| {
                path_points_all(&cube, 0, p)
                    .get(&(x, y))
                    .map_or(0, |v| v.len())
            })
            .sum();
        assert_eq!(corner_count, 8, "3 + 1 + 1 + 1 + 1 + 1 corner points");
        assert_eq!(chords.len(), 8);
        // Walk the 1-manifold: a single closed component of length 8.
        let mut visited = vec![false; chords.len()];
        let mut component = 0;
        for s in 0..chords.len() {
            if visited[s] {
                continue;
            }
            component += 1;
            let mut cur = s;
            let mut at = chords[s].a.clone();
            loop {
                visited[cur] = true;
                let ch = &chords[cur];
                let other = if ch.a == at { ch.b.clone() } else { ch.a.clone() };
                // Find the unique other chord containing `other`.
                let next = chords
                    .iter()
                    .position(|c2| {
                        !std::ptr::eq(c2, ch) && (c2.a == other || c2.b == other)
                    })
                    .expect("closed 1-manifold");
                if visited[next] {
                    // Either back at the start or an error; the closure
                    // check already passed, so this closes the loop.
                    break;
                }
                at = other;
                cur = next;
            }
        }
        assert_eq!(component, 1, "one closed curve through the strip");
    }

    #[test]
    fn hexagon_relation_on_a_three_crossing_knot() {
        // Non-J 3-subcubes of CKh: the annular hexagon relation.
        let d = parse_morse_word("strands 2\nx+ 1\nx+ 1\nx+ 1").unwrap();
        let cube = build_ckh(&d);
        let rep = verify_closure_3d(&cube, LadybugChoice::Right);
        assert!(rep.pass, "{:?}", rep.counterexample);
    }

    #[test]
    fn closure_with_ladybug_component() {
        let d = parse_morse_word("strands 1\ncup 2\ncup 4\nx+ 3\nx+ 4\ncap 3\ncap 2").unwrap();
        for op in [Sl2Op::E, Sl2Op::H] {
            let cube = build_cone(&d, op);
            let rep = verify_closure_3d(&cube, LadybugChoice::Right);
            assert!(rep.pass, "{op:?}: {:?}", rep.counterexample);
        }
    }

    #[test]
    fn empty_subcubes_are_vacuously_closed() {
        let d = parse_morse_word("strands 1\ncup 2\nx+ 1\ncap 1").unwrap();
        // With one crossing the cone is 2-dimensional: no 3-subcubes exist
        // and the report passes vacuously.
        let cube = build_cone(&d, Sl2Op::E);
        let rep = verify_closure_3d(&cube, LadybugChoice::Right);
        assert!(rep.pass);
        assert_eq!(rep.subcubes, 0);
    }
}
