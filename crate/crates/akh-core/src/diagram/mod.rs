//! Annular link diagrams as Morse words in the cut-open annulus.
//!
//! A diagram lives in a rectangle whose left and right edges are identified;
//! the inner boundary of the annulus (the puncture side) is the bottom edge.
//! Strand positions are 1-based and count from the bottom. The word is read
//! left to right, so every strand is monotone in the annular direction.
//!
//! Resolutions, circles and surgery arcs are all derived from a single
//! `Skeleton`: the diagram is pre-split into segments at every crossing
//! slice, so the segment set does not depend on the chosen smoothings and
//! circles at different cube vertices can be compared segment by segment.

mod arcs;
mod parse;

pub use arcs::{
    arc_inside_circle, feet_walk_order, lifted_polygon, signed_area2, Arc, ArcDiagram, ArcType,
    ComponentPartition,
};
pub use parse::parse_morse_word;

use crate::error::{AkhError, Result};
use serde::Serialize;

pub type SegId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EventKind {
    CrossingPositive,
    CrossingNegative,
    Cup,
    Cap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorseEvent {
    pub kind: EventKind,
    /// 1-based position from the bottom (innermost side).
    pub position: usize,
}

/// One strand piece. Segments are split at every crossing slice regardless
/// of the smoothing, so they are shared by all resolutions of the diagram.
#[derive(Clone, Debug)]
pub struct Segment {
    /// `(x, height)` breakpoints; the segment has `height` from `x` on.
    pub breakpoints: Vec<(usize, usize)>,
    pub birth_x: usize,
    pub death_x: usize,
    /// Cut strand index (1-based) if the segment starts at the left edge.
    pub cut_start: Option<usize>,
    /// Cut strand index if the segment ends at the right edge.
    pub cut_end: Option<usize>,
}

impl Segment {
    pub fn height_at(&self, x: usize) -> usize {
        let mut h = self.breakpoints[0].1;
        for &(bx, bh) in &self.breakpoints {
            if bx <= x {
                h = bh;
            }
        }
        h
    }
}

/// Endpoint of a segment: west (left) or east (right) end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    W(SegId),
    E(SegId),
}

impl End {
    pub fn seg(self) -> SegId {
        match self {
            End::W(s) | End::E(s) => s,
        }
    }
}

/// Identity of a joint between two segment ends. Junction names are stable
/// across cube vertices, which is what makes surgery arcs and the ladybug
/// matching comparable between resolutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Junction {
    Cup(usize),
    Cap(usize),
    /// Straight-through joint at height p of an identity-smoothed crossing.
    IdLo(usize),
    IdHi(usize),
    /// Cap elbow / cup elbow of a capcup-smoothed crossing.
    XCap(usize),
    XCup(usize),
    /// Identification of cut strand i across the left/right edges.
    Cut(usize),
}

#[derive(Clone, Debug)]
pub struct Join {
    pub a: End,
    pub b: End,
    pub junction: Junction,
}

/// The four segment ports of one crossing.
#[derive(Clone, Copy, Debug)]
pub struct CrossingPorts {
    pub event: usize,
    pub position: usize,
    pub slice_x: usize,
    pub in_lo: SegId,
    pub in_hi: SegId,
    pub out_lo: SegId,
    pub out_hi: SegId,
}

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub segments: Vec<Segment>,
    pub fixed_joins: Vec<Join>,
    pub crossings: Vec<CrossingPorts>,
    /// Lifted x-period of the cut-open rectangle.
    pub period: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingInfo {
    pub event: usize,
    pub kind: EventKind,
    pub sign: i8,
}

/// An oriented annular link diagram in validated Morse form.
#[derive(Clone, Debug)]
pub struct AnnularDiagram {
    pub strands: usize,
    pub events: Vec<MorseEvent>,
    /// Direction (+1/-1) of each cut strand, index 0..strands.
    pub orientations: Vec<i8>,
    pub crossings: Vec<CrossingInfo>,
    pub n_plus: usize,
    pub n_minus: usize,
    pub skeleton: Skeleton,
    /// Direction of every segment under the link orientation.
    seg_dirs: Vec<i8>,
}

/// Which local tangle a smoothing uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    Identity,
    CapCup,
}

impl AnnularDiagram {
    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Geometric smoothing of crossing `c` at coordinate value `bit`.
    ///
    /// Convention: a positive crossing event resolves to the identity tangle
    /// at its 0-smoothing and to cap-then-cup at its 1-smoothing; negative
    /// crossing events are the reverse.
    pub fn smoothing(&self, c: usize, bit: u8) -> Smoothing {
        let zero_is_identity = self.crossings[c].kind == EventKind::CrossingPositive;
        match (zero_is_identity, bit) {
            (true, 0) | (false, 1) => Smoothing::Identity,
            _ => Smoothing::CapCup,
        }
    }

    pub fn seg_dir(&self, s: SegId) -> i8 {
        self.seg_dirs[s]
    }

    /// Build a diagram from parsed events, deriving or checking orientations.
    pub fn new(
        strands: usize,
        events: Vec<MorseEvent>,
        orient: Option<Vec<i8>>,
    ) -> Result<Self> {
        let skeleton = sweep(strands, &events)?;
        let (seg_dirs, orientations) = orient_segments(strands, &events, &skeleton, orient)?;
        let mut crossings = Vec::new();
        let mut n_plus = 0;
        let mut n_minus = 0;
        for (ci, ports) in skeleton.crossings.iter().enumerate() {
            let kind = events[ports.event].kind;
            let base: i8 = match kind {
                EventKind::CrossingPositive => 1,
                EventKind::CrossingNegative => -1,
                _ => unreachable!(),
            };
            let sign = base * seg_dirs[ports.in_lo] * seg_dirs[ports.in_hi];
            if sign > 0 {
                n_plus += 1;
            } else {
                n_minus += 1;
            }
            crossings.push(CrossingInfo {
                event: ports.event,
                kind,
                sign,
            });
            debug_assert_eq!(ci + 1, crossings.len());
        }
        Ok(AnnularDiagram {
            strands,
            events,
            orientations,
            crossings,
            n_plus,
            n_minus,
            skeleton,
            seg_dirs,
        })
    }

    /// Resolve at a cube vertex, tracing and classifying all circles.
    pub fn resolve(&self, vertex: &[u8]) -> Resolution {
        assert_eq!(
            vertex.len(),
            self.n_crossings(),
            "vertex length must equal the crossing count"
        );
        trace_resolution(self, vertex)
    }

    pub fn resolve_mask(&self, mask: u32) -> Resolution {
        let n = self.n_crossings();
        let v: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
        self.resolve(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CircleKind {
    Trivial,
    Essential,
}

/// A circle of a resolution: a closed walk through segments.
#[derive(Clone, Debug)]
pub struct Circle {
    /// `(segment, forward?)` steps in traversal order.
    pub steps: Vec<(SegId, bool)>,
    /// Junction crossed after each step.
    pub walk_junctions: Vec<Junction>,
    pub kind: CircleKind,
    pub winding: i32,
    /// Cut strand indices the circle passes through (sorted).
    pub cut_heights: Vec<usize>,
}

impl Circle {
    pub fn min_seg(&self) -> SegId {
        self.steps.iter().map(|&(s, _)| s).min().unwrap()
    }

    pub fn contains_junction(&self, j: Junction) -> bool {
        self.walk_junctions.contains(&j)
    }
}

/// A total smoothing of the diagram with classified, canonically ordered
/// circles: trivial circles first (by least segment id), then essential
/// circles from innermost to outermost.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub vertex: Vec<u8>,
    pub circles: Vec<Circle>,
    pub n_trivial: usize,
    circle_of_seg: Vec<usize>,
}

impl Resolution {
    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }

    pub fn essential_count(&self) -> usize {
        self.circles.len() - self.n_trivial
    }

    pub fn circle_of_seg(&self, s: SegId) -> usize {
        self.circle_of_seg[s]
    }

    /// Index of the circle containing a junction, if the junction is active
    /// at this vertex.
    pub fn circle_of_junction(&self, j: Junction) -> Option<usize> {
        self.circles.iter().position(|c| c.contains_junction(j))
    }

    pub fn is_essential(&self, circle: usize) -> bool {
        self.circles[circle].kind == CircleKind::Essential
    }

    /// 1-based nesting index among essentials (innermost = 1).
    pub fn essential_index(&self, circle: usize) -> Option<usize> {
        if circle >= self.n_trivial {
            Some(circle - self.n_trivial + 1)
        } else {
            None
        }
    }

    /// Circle index of the essential with 1-based nesting index `i`.
    pub fn essential_circle(&self, i: usize) -> usize {
        self.n_trivial + i - 1
    }
}

fn sweep(strands: usize, events: &[MorseEvent]) -> Result<Skeleton> {
    let mut segments: Vec<Segment> = Vec::new();
    let mut fixed_joins: Vec<Join> = Vec::new();
    let mut crossings: Vec<CrossingPorts> = Vec::new();
    let mut cur: Vec<SegId> = Vec::new();

    let new_seg = |segments: &mut Vec<Segment>, x: usize, h: usize| -> SegId {
        segments.push(Segment {
            breakpoints: vec![(x, h)],
            birth_x: x,
            death_x: usize::MAX,
            cut_start: None,
            cut_end: None,
        });
        segments.len() - 1
    };

    for i in 1..=strands {
        let s = new_seg(&mut segments, 0, i);
        segments[s].cut_start = Some(i);
        cur.push(s);
    }

    for (ev_idx, ev) in events.iter().enumerate() {
        let x = ev_idx + 1;
        let p = ev.position;
        let count = cur.len();
        let bad = |msg: String| AkhError::Diagram(format!("event {}: {msg}", ev_idx + 1));
        match ev.kind {
            EventKind::Cup => {
                if p == 0 || p > count + 1 {
                    return Err(bad(format!(
                        "cup position {p} out of range 1..={}",
                        count + 1
                    )));
                }
                // Strands at and above p shift up by two.
                for &s in &cur[p - 1..] {
                    let h = segments[s].height_at(x);
                    segments[s].breakpoints.push((x, h + 2));
                }
                let a = new_seg(&mut segments, x, p);
                let b = new_seg(&mut segments, x, p + 1);
                fixed_joins.push(Join {
                    a: End::W(a),
                    b: End::W(b),
                    junction: Junction::Cup(ev_idx),
                });
                cur.insert(p - 1, b);
                cur.insert(p - 1, a);
            }
            EventKind::Cap => {
                if count < 2 || p == 0 || p > count - 1 {
                    return Err(bad(format!(
                        "cap position {p} out of range (strand count {count})"
                    )));
                }
                let a = cur.remove(p - 1);
                let b = cur.remove(p - 1);
                segments[a].death_x = x;
                segments[b].death_x = x;
                fixed_joins.push(Join {
                    a: End::E(a),
                    b: End::E(b),
                    junction: Junction::Cap(ev_idx),
                });
                for &s in &cur[p - 1..] {
                    let h = segments[s].height_at(x);
                    segments[s].breakpoints.push((x, h - 2));
                }
            }
            EventKind::CrossingPositive | EventKind::CrossingNegative => {
                if count < 2 || p == 0 || p > count - 1 {
                    return Err(bad(format!(
                        "crossing position {p} out of range (strand count {count})"
                    )));
                }
                let in_lo = cur[p - 1];
                let in_hi = cur[p];
                segments[in_lo].death_x = x;
                segments[in_hi].death_x = x;
                let out_lo = new_seg(&mut segments, x, p);
                let out_hi = new_seg(&mut segments, x, p + 1);
                cur[p - 1] = out_lo;
                cur[p] = out_hi;
                crossings.push(CrossingPorts {
                    event: ev_idx,
                    position: p,
                    slice_x: x,
                    in_lo,
                    in_hi,
                    out_lo,
                    out_hi,
                });
            }
        }
    }

    if cur.len() != strands {
        return Err(AkhError::Diagram(format!(
            "unbalanced strand count: word ends with {} strands, expected {}",
            cur.len(),
            strands
        )));
    }
    let end_x = events.len() + 1;
    for (i, &s) in cur.iter().enumerate() {
        segments[s].death_x = end_x;
        segments[s].cut_end = Some(i + 1);
        fixed_joins.push(Join {
            a: End::E(s),
            b: End::W(i), // initial segments are 0..strands in order
            junction: Junction::Cut(i + 1),
        });
        debug_assert_eq!(segments[s].height_at(end_x - 1), i + 1);
    }

    Ok(Skeleton {
        segments,
        fixed_joins,
        crossings,
        period: end_x,
    })
}

/// Assign a direction to every segment so that each link component is
/// coherently oriented; check user-supplied cut-strand orientations.
fn orient_segments(
    strands: usize,
    events: &[MorseEvent],
    sk: &Skeleton,
    orient: Option<Vec<i8>>,
) -> Result<(Vec<i8>, Vec<i8>)> {
    let n = sk.segments.len();
    // Union-find with parity: rel = 0 means same direction as parent.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut rel: Vec<i8> = vec![1; n];

    fn find(parent: &mut Vec<usize>, rel: &mut Vec<i8>, x: usize) -> (usize, i8) {
        if parent[x] == x {
            return (x, 1);
        }
        let px = parent[x];
        let (r, pr) = find(parent, rel, px);
        parent[x] = r;
        rel[x] *= pr;
        (r, rel[x])
    }
    let union = |parent: &mut Vec<usize>, rel: &mut Vec<i8>, a: usize, b: usize, s: i8| {
        let (ra, pa) = find(parent, rel, a);
        let (rb, pb) = find(parent, rel, b);
        if ra != rb {
            parent[ra] = rb;
            rel[ra] = pa * pb * s;
        }
    };

    for j in &sk.fixed_joins {
        let (sa, sb) = (j.a.seg(), j.b.seg());
        let s = match j.junction {
            Junction::Cup(_) | Junction::Cap(_) => -1,
            Junction::Cut(_) => 1,
            _ => unreachable!("crossing joins are not fixed"),
        };
        union(&mut parent, &mut rel, sa, sb, s);
    }
    // Real crossings: strands pass through and keep their direction.
    for c in &sk.crossings {
        union(&mut parent, &mut rel, c.in_lo, c.out_hi, 1);
        union(&mut parent, &mut rel, c.in_hi, c.out_lo, 1);
    }

    let mut dirs: Vec<i8> = vec![0; n];
    // User constraints act on the initial segments 0..strands.
    if let Some(ref o) = orient {
        if o.len() != strands {
            return Err(AkhError::Diagram(format!(
                "orient expects {} tokens, got {}",
                strands,
                o.len()
            )));
        }
        for (i, &d) in o.iter().enumerate() {
            let (r, p) = find(&mut parent, &mut rel, i);
            if dirs[r] == 0 {
                dirs[r] = d * p;
            } else if dirs[r] != d * p {
                return Err(AkhError::Diagram(format!(
                    "inconsistent orientation: cut strand {} conflicts with an earlier strand \
                     of the same component",
                    i + 1
                )));
            }
        }
    }
    // Defaults: least cut strand of each component points forward; closed
    // components take +1 on their least segment.
    for i in 0..strands {
        let (r, p) = find(&mut parent, &mut rel, i);
        if dirs[r] == 0 {
            dirs[r] = p; // dir(i) = +1
        }
    }
    for s in 0..n {
        let (r, p) = find(&mut parent, &mut rel, s);
        if dirs[r] == 0 {
            dirs[r] = p; // dir(s) = +1
        }
    }
    let seg_dirs: Vec<i8> = (0..n)
        .map(|s| {
            let (r, p) = find(&mut parent, &mut rel, s);
            dirs[r] * p
        })
        .collect();
    let orientations: Vec<i8> = (0..strands).map(|i| seg_dirs[i]).collect();
    if let Some(o) = orient {
        debug_assert_eq!(orientations, o);
    }
    let _ = events;
    Ok((seg_dirs, orientations))
}

/// End index encoding for the walk tables.
fn end_code(e: End) -> usize {
    match e {
        End::W(s) => 2 * s,
        End::E(s) => 2 * s + 1,
    }
}

fn trace_resolution(d: &AnnularDiagram, vertex: &[u8]) -> Resolution {
    let sk = &d.skeleton;
    let n_ends = 2 * sk.segments.len();
    let mut mate: Vec<usize> = vec![usize::MAX; n_ends];
    let mut mate_junction: Vec<Junction> = vec![Junction::Cut(0); n_ends];

    let add = |a: End, b: End, j: Junction, mate: &mut Vec<usize>, mj: &mut Vec<Junction>| {
        let (ca, cb) = (end_code(a), end_code(b));
        debug_assert_eq!(mate[ca], usize::MAX);
        debug_assert_eq!(mate[cb], usize::MAX);
        mate[ca] = cb;
        mate[cb] = ca;
        mj[ca] = j;
        mj[cb] = j;
    };

    for j in &sk.fixed_joins {
        add(j.a, j.b, j.junction, &mut mate, &mut mate_junction);
    }
    for (c, ports) in sk.crossings.iter().enumerate() {
        match d.smoothing(c, vertex[c]) {
            Smoothing::Identity => {
                add(
                    End::E(ports.in_lo),
                    End::W(ports.out_lo),
                    Junction::IdLo(c),
                    &mut mate,
                    &mut mate_junction,
                );
                add(
                    End::E(ports.in_hi),
                    End::W(ports.out_hi),
                    Junction::IdHi(c),
                    &mut mate,
                    &mut mate_junction,
                );
            }
            Smoothing::CapCup => {
                add(
                    End::E(ports.in_lo),
                    End::E(ports.in_hi),
                    Junction::XCap(c),
                    &mut mate,
                    &mut mate_junction,
                );
                add(
                    End::W(ports.out_lo),
                    End::W(ports.out_hi),
                    Junction::XCup(c),
                    &mut mate,
                    &mut mate_junction,
                );
            }
        }
    }

    let n_segs = sk.segments.len();
    let mut visited = vec![false; n_segs];
    let mut raw_circles: Vec<Circle> = Vec::new();
    for start in 0..n_segs {
        if visited[start] {
            continue;
        }
        let mut steps: Vec<(SegId, bool)> = Vec::new();
        let mut junctions: Vec<Junction> = Vec::new();
        let mut winding = 0i32;
        let mut cut_heights: Vec<usize> = Vec::new();
        let mut seg = start;
        let mut fwd = true;
        loop {
            visited[seg] = true;
            steps.push((seg, fwd));
            let exit = if fwd { End::E(seg) } else { End::W(seg) };
            let code = end_code(exit);
            let mcode = mate[code];
            debug_assert_ne!(mcode, usize::MAX, "every end must be joined");
            let j = mate_junction[code];
            junctions.push(j);
            if let Junction::Cut(i) = j {
                cut_heights.push(i);
                // Traversing E(end segment) -> W(start segment) wraps forward.
                winding += if code % 2 == 1 { 1 } else { -1 };
            }
            let next_seg = mcode / 2;
            let next_fwd = mcode % 2 == 0; // entered at W => move forward
            if next_seg == start && next_fwd {
                break;
            }
            seg = next_seg;
            fwd = next_fwd;
        }
        cut_heights.sort_unstable();
        cut_heights.dedup();
        let kind = match winding.abs() {
            0 => CircleKind::Trivial,
            1 => CircleKind::Essential,
            w => unreachable!("embedded circle with winding {w}"),
        };
        raw_circles.push(Circle {
            steps,
            walk_junctions: junctions,
            kind,
            winding,
            cut_heights,
        });
    }

    // Canonical order: trivial circles by least segment, then essentials
    // innermost -> outermost (by least cut height; see `separation_precedes`).
    let mut trivial: Vec<Circle> = Vec::new();
    let mut essential: Vec<Circle> = Vec::new();
    for c in raw_circles {
        match c.kind {
            CircleKind::Trivial => trivial.push(c),
            CircleKind::Essential => essential.push(c),
        }
    }
    trivial.sort_by_key(|c| c.min_seg());
    essential.sort_by_key(|c| *c.cut_heights.first().expect("essential circle crosses the cut"));
    if cfg!(debug_assertions) {
        for i in 0..essential.len() {
            for j in i + 1..essential.len() {
                debug_assert!(
                    separation_precedes(&essential[i], &essential[j])
                        && !separation_precedes(&essential[j], &essential[i]),
                    "nesting order inconsistent with the separation test"
                );
            }
        }
    }
    let n_trivial = trivial.len();
    let mut circles = trivial;
    circles.append(&mut essential);

    let mut circle_of_seg = vec![usize::MAX; n_segs];
    for (ci, c) in circles.iter().enumerate() {
        for &(s, _) in &c.steps {
            circle_of_seg[s] = ci;
        }
    }

    Resolution {
        vertex: vertex.to_vec(),
        circles,
        n_trivial,
        circle_of_seg,
    }
}

/// Separation test at the cut slice: `a` precedes `b` (is closer to the
/// puncture) iff a ray from the inner boundary to the lowest cut strand of
/// `a` crosses `b` an even number of times.
pub fn separation_precedes(a: &Circle, b: &Circle) -> bool {
    let ma = *a.cut_heights.first().expect("essential circle");
    let crossings = b.cut_heights.iter().filter(|&&h| h < ma).count();
    crossings % 2 == 0
}

/// Cut-traversal parity of a circle; used by the classification invariant.
pub fn cut_parity(c: &Circle) -> usize {
    // Count traversals with multiplicity (a height can only be hit once).
    c.cut_heights.len() % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(src: &str) -> AnnularDiagram {
        parse_morse_word(src).expect("valid word")
    }

    #[test]
    fn empty_word_is_essential_unknot() {
        let d = word("strands 1");
        assert_eq!(d.n_crossings(), 0);
        let r = d.resolve(&[]);
        assert_eq!(r.n_circles(), 1);
        assert_eq!(r.circles[0].kind, CircleKind::Essential);
    }

    #[test]
    fn trivial_unknot() {
        let d = word("strands 0\ncup 1\ncap 1");
        let r = d.resolve(&[]);
        assert_eq!(r.n_circles(), 1);
        assert_eq!(r.circles[0].kind, CircleKind::Trivial);
    }

    #[test]
    fn unbalanced_word_rejected() {
        assert!(parse_morse_word("strands 2\ncap 1").is_err());
    }

    #[test]
    fn two_crossing_example_cube() {
        // The 2-crossing annular knot: resolutions match the worked cube.
        let d = word("strands 3\nx+ 2\nx- 1");
        assert_eq!(d.n_crossings(), 2);
        assert_eq!((d.n_plus, d.n_minus), (1, 1));
        let counts = |v: &[u8]| {
            let r = d.resolve(v);
            (r.n_trivial, r.essential_count())
        };
        assert_eq!(counts(&[0, 0]), (1, 1));
        assert_eq!(counts(&[1, 0]), (0, 1));
        assert_eq!(counts(&[0, 1]), (0, 3));
        assert_eq!(counts(&[1, 1]), (1, 1));
    }

    #[test]
    fn kink_resolutions() {
        let d = word("strands 1\ncup 2\nx+ 1\ncap 1");
        assert_eq!(d.n_crossings(), 1);
        assert_eq!((d.n_plus, d.n_minus), (0, 1));
        let r0 = d.resolve(&[0]);
        assert_eq!((r0.n_trivial, r0.essential_count()), (0, 1));
        let r1 = d.resolve(&[1]);
        assert_eq!((r1.n_trivial, r1.essential_count()), (1, 1));
    }

    #[test]
    fn winding_classification_matches_parity() {
        let d = word("strands 2\nx+ 1\nx- 1");
        for mask in 0..4u32 {
            let r = d.resolve_mask(mask);
            for c in &r.circles {
                let odd = cut_parity(c) == 1;
                assert_eq!(odd, c.kind == CircleKind::Essential);
            }
        }
    }

    #[test]
    fn orientation_conflict_detected() {
        // Both cut strands belong to one knot component; opposite tokens on
        // an even permutation are inconsistent.
        let res = AnnularDiagram::new(
            2,
            vec![
                MorseEvent {
                    kind: EventKind::CrossingPositive,
                    position: 1,
                },
            ],
            Some(vec![1, -1]),
        );
        assert!(res.is_err());
    }
}
