//! The ladybug matching for square faces whose two compositions both have
//! two points.
//!
//! The configuration is a single circle carrying both surgery arcs with
//! interleaved feet. In the plane one arc lies inside the circle and the
//! other outside; walking counterclockwise the feet alternate
//! in1, out1, in2, out2. Surgery along the inside arc cuts at the in-feet,
//! so its two pieces are identified by which out-foot they contain, and
//! conversely. The matching fixed here ("right pair") couples the pieces
//! that share a boundary quarter running counterclockwise from an in-foot
//! to an out-foot; the "left pair" uses the complementary quarters.

use crate::diagram::{
    arc_inside_circle, feet_walk_order, lifted_polygon, signed_area2, AnnularDiagram, Junction,
    Resolution,
};
use crate::error::{AkhError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LadybugChoice {
    #[default]
    Right,
    Left,
}

/// Pairing of the split circles of the two surgeries of a ladybug face.
///
/// `crossing_a` and `crossing_b` are the two surgery coordinates at the
/// vertex `ru`; `ra`/`rb` are the resolutions after performing one of them.
/// Returns pairs `(circle index in ra, circle index in rb)`.
pub fn ladybug_pairing(
    d: &AnnularDiagram,
    ru: &Resolution,
    ra: &Resolution,
    rb: &Resolution,
    crossing_a: usize,
    crossing_b: usize,
    choice: LadybugChoice,
) -> Result<[(usize, usize); 2]> {
    let arc_a = d.arc_at(crossing_a, ru.vertex[crossing_a]);
    let arc_b = d.arc_at(crossing_b, ru.vertex[crossing_b]);
    let za = ru
        .circle_of_junction(arc_a.feet[0])
        .ok_or_else(|| AkhError::Moduli("ladybug arc foot not on a circle".into()))?;
    let zb = ru
        .circle_of_junction(arc_b.feet[0])
        .ok_or_else(|| AkhError::Moduli("ladybug arc foot not on a circle".into()))?;
    if za != zb
        || ru.circle_of_junction(arc_a.feet[1]) != Some(za)
        || ru.circle_of_junction(arc_b.feet[1]) != Some(za)
    {
        return Err(AkhError::Moduli(
            "ladybug configuration requires both arcs on one circle".into(),
        ));
    }
    let z = &ru.circles[za];
    if z.winding != 0 {
        return Err(AkhError::Moduli(
            "ladybug circle must be trivial (split compositions of size two)".into(),
        ));
    }

    // Feet in traversal order; must alternate a, b, a, b.
    let order = feet_walk_order(z, &[&arc_a, &arc_b]);
    if order.len() != 4 || order[0] == order[1] || order[1] == order[2] {
        return Err(AkhError::Moduli(format!(
            "ladybug feet are not interleaved (walk order {order:?})"
        )));
    }

    // Normalize the walk to counterclockwise and name the feet junctions in
    // ccw order starting from an inside-arc foot.
    let a_inside = arc_inside_circle(d, z, &arc_a);
    let b_inside = arc_inside_circle(d, z, &arc_b);
    if a_inside == b_inside {
        return Err(AkhError::Moduli(
            "interleaved arcs must lie on opposite sides of the circle".into(),
        ));
    }
    let ccw = signed_area2(&lifted_polygon(d, z)) > 0;
    let mut feet: Vec<(usize, Junction)> = Vec::new(); // (arc id 0/1, junction)
    for (step, &j) in z.walk_junctions.iter().enumerate() {
        let _ = step;
        if arc_a.feet.contains(&j) {
            feet.push((0, j));
        }
        if arc_b.feet.contains(&j) {
            feet.push((1, j));
        }
    }
    debug_assert_eq!(feet.len(), 4);
    if !ccw {
        feet.reverse();
    }
    let inside_id = if a_inside { 0 } else { 1 };
    while feet[0].0 != inside_id {
        feet.rotate_left(1);
    }
    // feet = [g1 (in), g2 (out), g3 (in), g4 (out)] counterclockwise.
    let (g1, g2, g3, g4) = (feet[0].1, feet[1].1, feet[2].1, feet[3].1);

    // Pieces of the inside surgery contain one out-foot each; pieces of the
    // outside surgery contain one in-foot each.
    let (r_in, r_out) = if a_inside { (ra, rb) } else { (rb, ra) };
    let piece_with = |r: &Resolution, j: Junction| -> Result<usize> {
        r.circle_of_junction(j)
            .ok_or_else(|| AkhError::Moduli("ladybug piece lookup failed".into()))
    };
    let in_g2 = piece_with(r_in, g2)?;
    let in_g4 = piece_with(r_in, g4)?;
    let out_g1 = piece_with(r_out, g1)?;
    let out_g3 = piece_with(r_out, g3)?;
    if in_g2 == in_g4 || out_g1 == out_g3 {
        return Err(AkhError::Moduli(
            "ladybug surgeries must separate the opposite feet".into(),
        ));
    }

    // Right pair: the in-piece containing g2 goes with the out-piece
    // containing g1 (they share the ccw quarter g1 -> g2), and likewise
    // (g4-piece, g3-piece). Left pair swaps the out-pieces.
    let pairs_in_out = match choice {
        LadybugChoice::Right => [(in_g2, out_g1), (in_g4, out_g3)],
        LadybugChoice::Left => [(in_g2, out_g3), (in_g4, out_g1)],
    };
    // Convert back to (piece in ra, piece in rb).
    let out = if a_inside {
        [
            (pairs_in_out[0].0, pairs_in_out[0].1),
            (pairs_in_out[1].0, pairs_in_out[1].1),
        ]
    } else {
        [
            (pairs_in_out[0].1, pairs_in_out[0].0),
            (pairs_in_out[1].1, pairs_in_out[1].0),
        ]
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_morse_word;

    /// The split ladybug component: one circle with two interleaved future
    /// arcs at the all-zeros vertex.
    #[test]
    fn ladybug_pairing_is_a_bijection() {
        let d =
            parse_morse_word("strands 1\ncup 2\ncup 4\nx+ 3\nx+ 4\ncap 3\ncap 2").unwrap();
        let ru = d.resolve(&[0, 0]);
        let ra = d.resolve(&[1, 0]);
        let rb = d.resolve(&[0, 1]);
        let pairs = ladybug_pairing(&d, &ru, &ra, &rb, 0, 1, LadybugChoice::Right).unwrap();
        assert_ne!(pairs[0].0, pairs[1].0);
        assert_ne!(pairs[0].1, pairs[1].1);
        let left = ladybug_pairing(&d, &ru, &ra, &rb, 0, 1, LadybugChoice::Left).unwrap();
        // The two choices are the two different bijections: each ra-piece
        // gets the opposite rb-partner.
        let partner = |ps: [(usize, usize); 2], a: usize| {
            ps.iter().find(|p| p.0 == a).map(|p| p.1).unwrap()
        };
        for &(a, _) in &pairs {
            assert_ne!(partner(pairs, a), partner(left, a));
        }
    }

    #[test]
    fn parallel_arcs_are_not_a_ladybug() {
        // Two parallel (nested) future arcs on one trivial circle.
        let d = parse_morse_word("strands 1\ncup 2\nx+ 2\nx+ 2\ncap 2").unwrap();
        let ru = d.resolve(&[0, 0]);
        let ra = d.resolve(&[1, 0]);
        let rb = d.resolve(&[0, 1]);
        let res = ladybug_pairing(&d, &ru, &ra, &rb, 0, 1, LadybugChoice::Right);
        assert!(res.is_err());
    }
}
