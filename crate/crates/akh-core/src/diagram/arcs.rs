//! Arc diagrams: resolutions decorated with past/future surgery arcs,
//! surgery, connected components, and the planar data used by the ladybug
//! matching.

use super::{AnnularDiagram, Circle, Junction, Resolution, SegId, Smoothing};
use crate::error::{AkhError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcType {
    Past,
    Future,
}

#[derive(Clone, Copy, Debug)]
pub struct Arc {
    pub crossing: usize,
    pub arc_type: ArcType,
    pub feet: [Junction; 2],
    /// `(slice x, strand position)` of the crossing site.
    pub site: (usize, usize),
}

/// A resolution together with the surgery arcs of a chosen coordinate set.
#[derive(Clone, Debug)]
pub struct ArcDiagram<'a> {
    pub diagram: &'a AnnularDiagram,
    pub resolution: Resolution,
    pub arcs: Vec<Arc>,
}

impl AnnularDiagram {
    /// Arc diagram at `vertex`. With `subcube = Some((u, v))` only the
    /// subcube's coordinates contribute arcs; `vertex` must lie inside.
    pub fn arc_diagram(
        &self,
        vertex: &[u8],
        subcube: Option<(&[u8], &[u8])>,
    ) -> Result<ArcDiagram<'_>> {
        let n = self.n_crossings();
        if vertex.len() != n {
            return Err(AkhError::Argument(format!(
                "vertex length {} does not match crossing count {n}",
                vertex.len()
            )));
        }
        let coords: Vec<usize> = match subcube {
            None => (0..n).collect(),
            Some((u, v)) => {
                if u.len() != n || v.len() != n {
                    return Err(AkhError::Argument("subcube vertex length mismatch".into()));
                }
                for i in 0..n {
                    if u[i] > v[i] {
                        return Err(AkhError::Argument("subcube requires u <= v".into()));
                    }
                    if vertex[i] < u[i] || vertex[i] > v[i] {
                        return Err(AkhError::Argument("vertex outside subcube".into()));
                    }
                }
                (0..n).filter(|&i| u[i] < v[i]).collect()
            }
        };
        let resolution = self.resolve(vertex);
        let arcs = coords
            .into_iter()
            .map(|c| self.arc_at(c, vertex[c]))
            .collect();
        Ok(ArcDiagram {
            diagram: self,
            resolution,
            arcs,
        })
    }

    /// The surgery arc of crossing `c` when its coordinate is `bit`.
    pub fn arc_at(&self, c: usize, bit: u8) -> Arc {
        let ports = self.skeleton.crossings[c];
        let arc_type = if bit == 0 {
            ArcType::Future
        } else {
            ArcType::Past
        };
        let feet = match self.smoothing(c, bit) {
            Smoothing::Identity => [Junction::IdLo(c), Junction::IdHi(c)],
            Smoothing::CapCup => [Junction::XCap(c), Junction::XCup(c)],
        };
        Arc {
            crossing: c,
            arc_type,
            feet,
            site: (ports.slice_x, ports.position),
        }
    }
}

impl<'a> ArcDiagram<'a> {
    /// Perform surgery along one arc: the crossing's coordinate flips, the
    /// dual arc of opposite type replaces it, circles are re-traced.
    pub fn surger(&self, arc_id: usize) -> Result<ArcDiagram<'a>> {
        let arc = self
            .arcs
            .get(arc_id)
            .ok_or_else(|| AkhError::Argument(format!("no arc {arc_id}")))?;
        let mut vertex = self.resolution.vertex.clone();
        vertex[arc.crossing] ^= 1;
        let resolution = self.diagram.resolve(&vertex);
        let arcs = self
            .arcs
            .iter()
            .map(|a| self.diagram.arc_at(a.crossing, vertex[a.crossing]))
            .collect();
        Ok(ArcDiagram {
            diagram: self.diagram,
            resolution,
            arcs,
        })
    }

    /// Circles incident to an arc (one circle if both feet meet it).
    pub fn arc_circles(&self, arc_id: usize) -> (usize, usize) {
        let arc = &self.arcs[arc_id];
        let c0 = self
            .resolution
            .circle_of_junction(arc.feet[0])
            .expect("arc foot on an active junction");
        let c1 = self
            .resolution
            .circle_of_junction(arc.feet[1])
            .expect("arc foot on an active junction");
        (c0, c1)
    }

    /// Connected components of circles joined by the arcs.
    pub fn components(&self) -> ComponentPartition {
        let nc = self.resolution.n_circles();
        let mut parent: Vec<usize> = (0..nc).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let px = p[x];
                let r = find(p, px);
                p[x] = r;
                r
            }
        }
        for i in 0..self.arcs.len() {
            let (a, b) = self.arc_circles(i);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        // Canonical component keys: least segment id in the component. The
        // segment set of a component is unchanged by surgery, so keys give
        // the cross-vertex correspondence.
        let mut key_of_root: std::collections::BTreeMap<usize, SegId> = Default::default();
        for ci in 0..nc {
            let r = find(&mut parent, ci);
            let k = self.resolution.circles[ci].min_seg();
            key_of_root
                .entry(r)
                .and_modify(|v| *v = (*v).min(k))
                .or_insert(k);
        }
        let mut keys: Vec<SegId> = key_of_root.values().copied().collect();
        keys.sort_unstable();
        let mut component_of_circle = vec![0usize; nc];
        for ci in 0..nc {
            let r = find(&mut parent, ci);
            let k = key_of_root[&r];
            component_of_circle[ci] = keys.binary_search(&k).unwrap();
        }
        ComponentPartition {
            component_of_circle,
            keys,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components().keys.len() <= 1
    }
}

impl<'a> ArcDiagram<'a> {
    /// Semantic forbidden-configuration test: whether the composite of the
    /// two consecutive edge maps named by the arcs (with the J map
    /// interposed at the middle diagram when given) is the zero map on the
    /// full generator basis.
    ///
    /// Temporal convention: past arcs are edges performed before reaching
    /// this diagram, future arcs immediately after; between two arcs of the
    /// same type, `first` precedes `second`.
    pub fn is_zero_pair(
        &self,
        first: usize,
        second: usize,
        j_between: Option<crate::sl2::Sl2Op>,
    ) -> Result<bool> {
        use crate::algebra::{apply_saddle, saddle_data, GenIdx};
        let (a1, a2) = (
            *self
                .arcs
                .get(first)
                .ok_or_else(|| AkhError::Argument(format!("no arc {first}")))?,
            *self
                .arcs
                .get(second)
                .ok_or_else(|| AkhError::Argument(format!("no arc {second}")))?,
        );
        if a1.crossing == a2.crossing {
            return Err(AkhError::Argument(
                "the two arcs must sit at different sites".into(),
            ));
        }
        // Order the edges in time: past arcs precede this diagram.
        let (e1, e2) = match (a1.arc_type, a2.arc_type) {
            (ArcType::Future, ArcType::Past) => (a2, a1),
            _ => (a1, a2),
        };
        let here = &self.resolution.vertex;
        // Vertices along the two-edge path start -> mid -> end.
        let flip = |v: &Vec<u8>, c: usize| {
            let mut w = v.clone();
            w[c] ^= 1;
            w
        };
        let (start, mid, end) = match (e1.arc_type, e2.arc_type) {
            (ArcType::Past, ArcType::Future) => {
                (flip(here, e1.crossing), here.clone(), flip(here, e2.crossing))
            }
            (ArcType::Future, ArcType::Future) => {
                let mid = flip(here, e1.crossing);
                let end = flip(&mid, e2.crossing);
                (here.clone(), mid, end)
            }
            (ArcType::Past, ArcType::Past) => {
                let mid = flip(here, e2.crossing);
                let start = flip(&mid, e1.crossing);
                (start, mid, here.clone())
            }
            (ArcType::Future, ArcType::Past) => unreachable!("reordered above"),
        };
        let d = self.diagram;
        let r0 = d.resolve(&start);
        let r1 = d.resolve(&mid);
        let r2 = d.resolve(&end);
        let sd1 = saddle_data(d, &r0, &r1, e1.crossing);
        let sd2 = saddle_data(d, &r1, &r2, e2.crossing);
        for x in 0..(1u32 << r0.n_circles()) as GenIdx {
            let mut total = crate::algebra::FormalSum::zero();
            for y in apply_saddle(&r0, &r1, &sd1, x) {
                let mids: Vec<(GenIdx, num_bigint::BigInt)> = match j_between {
                    None => vec![(y, 1.into())],
                    Some(op) => crate::sl2::apply_j(op, &r1, y)
                        .iter()
                        .map(|(g, c)| (g, c.clone()))
                        .collect(),
                };
                for (z, c) in mids {
                    for w in apply_saddle(&r1, &r2, &sd2, z) {
                        total.add(w, c.clone());
                    }
                }
            }
            if !total.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Partition of circles into arc-connected components with stable keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub component_of_circle: Vec<usize>,
    /// Per component, the least segment id it contains (cross-vertex key).
    pub keys: Vec<SegId>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Planar geometry (used by the ladybug matching).
// ---------------------------------------------------------------------------
//
// The annulus is drawn in the plane by rolling the cut-open rectangle
// around the puncture. Circles are traced in the universal cover as
// rectilinear polygons with x in units of a quarter slice: a crossing
// smoothed to cap-then-cup puts its elbows at 4*slice -+ 1, everything
// else sits at 4*slice. This keeps every ray-cast used below away from
// polygon vertices.

fn x_of_end(d: &AnnularDiagram, seg: SegId, west: bool, junction: Junction) -> i64 {
    let s = &d.skeleton.segments[seg];
    let base = 4 * if west { s.birth_x } else { s.death_x } as i64;
    match junction {
        Junction::XCap(_) => base - 1,
        Junction::XCup(_) => base + 1,
        _ => base,
    }
}

/// Rectilinear polygon of a winding-zero circle lifted to the universal
/// cover, in quarter-slice x units and quadrupled heights.
pub fn lifted_polygon(d: &AnnularDiagram, circle: &Circle) -> Vec<(i64, i64)> {
    assert_eq!(
        circle.winding, 0,
        "only winding-zero circles lift to closed polygons"
    );
    let period = 4 * d.skeleton.period as i64;
    let n = circle.steps.len();
    let mut sheet: i64 = 0;
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let push = |pts: &mut Vec<(i64, i64)>, p: (i64, i64)| {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    };
    for (step_idx, &(seg, fwd)) in circle.steps.iter().enumerate() {
        let s = &d.skeleton.segments[seg];
        let off = sheet * period;
        // Junctions at the two ends of this traversal.
        let exit_j = circle.walk_junctions[step_idx];
        let enter_j = circle.walk_junctions[(step_idx + n - 1) % n];
        let (west_j, east_j) = if fwd { (enter_j, exit_j) } else { (exit_j, enter_j) };
        let x_west = x_of_end(d, seg, true, west_j) + off;
        let x_east = x_of_end(d, seg, false, east_j) + off;
        let bps = &s.breakpoints;
        let mut poly: Vec<(i64, i64)> = Vec::new();
        for (i, &(bx, bh)) in bps.iter().enumerate() {
            let x0 = if i == 0 { x_west } else { 4 * bx as i64 + off };
            let x1 = if i + 1 < bps.len() {
                4 * bps[i + 1].0 as i64 + off
            } else {
                x_east
            };
            poly.push((x0, 4 * bh as i64));
            poly.push((x1, 4 * bh as i64));
        }
        if !fwd {
            poly.reverse();
        }
        for p in poly {
            push(&mut pts, p);
        }
        if let Junction::Cut(_) = exit_j {
            sheet += if fwd { 1 } else { -1 };
        }
    }
    if pts.last() == pts.first() {
        pts.pop();
    }
    pts
}

/// Twice the signed area (shoelace); positive means counterclockwise, both
/// in the cover and in the rolled-up plane picture.
pub fn signed_area2(poly: &[(i64, i64)]) -> i64 {
    let mut acc = 0i64;
    for i in 0..poly.len() {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % poly.len()];
        acc += x1 * y2 - x2 * y1;
    }
    acc
}

/// Reference point of an arc in quarter-slice coordinates: on the arc and
/// off the circle, chosen so that rays toward the puncture avoid polygon
/// vertices.
fn arc_test_point(d: &AnnularDiagram, arc: &Arc) -> (i64, i64) {
    let (slice, pos) = arc.site;
    let x = match d.smoothing(arc.crossing, if arc.arc_type == ArcType::Future { 0 } else { 1 }) {
        Smoothing::CapCup => 4 * slice as i64,
        Smoothing::Identity => 4 * slice as i64 + 1,
    };
    (x, 4 * pos as i64 + 2)
}

/// Whether the arc lies inside the disk bounded by `circle` in the plane
/// picture of the annulus: a ray from the arc toward the puncture must
/// cross the circle an odd number of times. Crossings are counted against
/// every lift of the circle.
pub fn arc_inside_circle(d: &AnnularDiagram, circle: &Circle, arc: &Arc) -> bool {
    let poly = lifted_polygon(d, circle);
    let period = 4 * d.skeleton.period as i64;
    let (px, py) = arc_test_point(d, arc);
    let min_x = poly.iter().map(|p| p.0).min().unwrap();
    let max_x = poly.iter().map(|p| p.0).max().unwrap();
    let mut parity = false;
    let mut j = (min_x - px).div_euclid(period);
    while px + j * period <= max_x {
        let x = px + j * period;
        for i in 0..poly.len() {
            let (x1, y1) = poly[i];
            let (x2, y2) = poly[(i + 1) % poly.len()];
            if y1 == y2 && y1 < py && x1.min(x2) < x && x < x1.max(x2) {
                parity = !parity;
            }
        }
        j += 1;
    }
    parity
}

/// Feet of the given arcs in traversal order around `circle`, as indices
/// into `arcs`. Each arc contributes one entry per foot on this circle.
pub fn feet_walk_order(circle: &Circle, arcs: &[&Arc]) -> Vec<usize> {
    let mut order = Vec::new();
    for &j in &circle.walk_junctions {
        for (ai, arc) in arcs.iter().enumerate() {
            if arc.feet.contains(&j) {
                order.push(ai);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_morse_word;

    #[test]
    fn arc_types_follow_coordinates() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let a = d.arc_diagram(&[0, 1], None).unwrap();
        assert_eq!(a.arcs[0].arc_type, ArcType::Future);
        assert_eq!(a.arcs[1].arc_type, ArcType::Past);
    }

    #[test]
    fn all_ones_vertex_all_past() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let a = d.arc_diagram(&[1, 1], None).unwrap();
        assert!(a.arcs.iter().all(|x| x.arc_type == ArcType::Past));
    }

    #[test]
    fn zero_dim_subcube_has_no_arcs() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let a = d
            .arc_diagram(&[0, 1], Some((&[0, 1], &[0, 1])))
            .unwrap();
        assert!(a.arcs.is_empty());
    }

    #[test]
    fn surger_is_involutive_on_circles() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let a = d.arc_diagram(&[0, 0], None).unwrap();
        let b = a.surger(0).unwrap();
        let c = b.surger(0).unwrap();
        assert_eq!(a.resolution.vertex, c.resolution.vertex);
        assert_eq!(a.resolution.n_circles(), c.resolution.n_circles());
        for (x, y) in a.resolution.circles.iter().zip(&c.resolution.circles) {
            assert_eq!(x.steps, y.steps);
        }
    }

    #[test]
    fn components_invariant_under_surgery() {
        let d = parse_morse_word("strands 1\ncup 2\ncup 4\nx+ 3\nx+ 4\ncap 3\ncap 2").unwrap();
        let a = d.arc_diagram(&[0, 0], None).unwrap();
        let parts = a.components();
        assert_eq!(parts.len(), 2); // essential strand + ladybug component
        for arc_id in 0..a.arcs.len() {
            let b = a.surger(arc_id).unwrap();
            assert_eq!(b.components().keys, parts.keys);
        }
    }

    #[test]
    fn split_merge_roundtrip_counts() {
        // Splitting a cut-crossing trivial circle yields two essentials.
        let d = parse_morse_word("strands 2\nx- 1").unwrap();
        let a = d.arc_diagram(&[0], None).unwrap();
        assert_eq!(a.resolution.n_circles(), 1);
        assert_eq!(a.resolution.n_trivial, 1);
        let b = a.surger(0).unwrap();
        assert_eq!(b.resolution.essential_count(), 2);
        assert_eq!(b.arcs[0].arc_type, ArcType::Past);
    }
}
