//! Chain-level sl2 generators E, F, H on annular chain groups, the label
//! swap involution, and the exhaustive relation checks.

use crate::algebra::{adeg, bit_of, set_bit, FormalSum, GenIdx};
use crate::complex::build_ckh;
use crate::diagram::{AnnularDiagram, Resolution};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sl2Op {
    E,
    F,
    H,
}

impl Sl2Op {
    pub fn parse(s: &str) -> crate::error::Result<Sl2Op> {
        match s {
            "E" | "e" => Ok(Sl2Op::E),
            "F" | "f" => Ok(Sl2Op::F),
            "H" | "h" => Ok(Sl2Op::H),
            other => Err(crate::error::AkhError::Argument(format!(
                "unknown sl2 generator '{other}' (expected E, F or H)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sl2Op::E => "E",
            Sl2Op::F => "F",
            Sl2Op::H => "H",
        }
    }

    /// Bidegree shift on (q, a).
    pub fn bidegree(self) -> (i64, i64) {
        match self {
            Sl2Op::E => (2, 2),
            Sl2Op::F => (-2, -2),
            Sl2Op::H => (0, 0),
        }
    }
}

/// One term of the refined J action: `J x = sum coeff * y`, where `acted`
/// is the 1-based nesting index of the essential circle acted on. For H the
/// refined form keeps one term per essential circle even though `y = x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JTerm {
    pub target: GenIdx,
    pub coeff: i8,
    pub acted: usize,
}

/// Refined terms of the J action on a single generator.
pub fn j_terms(op: Sl2Op, res: &Resolution, x: GenIdx) -> Vec<JTerm> {
    let c = res.n_circles();
    let s = res.essential_count();
    let mut out = Vec::new();
    for i in 1..=s {
        let circle = res.essential_circle(i);
        let bit = bit_of(x, circle, c);
        match op {
            Sl2Op::E => {
                // E relabels v- to v+ with sign (-1)^(i+1).
                if bit == 1 {
                    out.push(JTerm {
                        target: set_bit(x, circle, c, 0),
                        coeff: if i % 2 == 1 { 1 } else { -1 },
                        acted: i,
                    });
                }
            }
            Sl2Op::F => {
                if bit == 0 {
                    out.push(JTerm {
                        target: set_bit(x, circle, c, 1),
                        coeff: if i % 2 == 1 { 1 } else { -1 },
                        acted: i,
                    });
                }
            }
            Sl2Op::H => {
                out.push(JTerm {
                    target: x,
                    coeff: if bit == 0 { 1 } else { -1 },
                    acted: i,
                });
            }
        }
    }
    out
}

/// The J action as a formal sum (H terms collapse to adeg(x) * x).
pub fn apply_j(op: Sl2Op, res: &Resolution, x: GenIdx) -> FormalSum {
    let mut sum = FormalSum::zero();
    for t in j_terms(op, res, x) {
        sum.add(t.target, BigInt::from(t.coeff));
    }
    sum
}

/// The involution swapping v+ and v- on every essential circle.
pub fn theta (res: &Resolution, x: GenIdx) -> GenIdx {
    let c = res.n_circles();
    let mut y = x;
    for circle in res.n_trivial..c {
        y = set_bit(y, circle, c, 1 - bit_of(x, circle, c));
    }
    y
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Report {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

impl Sl2Report {
    fn push(&mut self, name: &str, counterexample: Option<String>) {
        self.pass &= counterexample.is_none();
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            pass: counterexample.is_none(),
            counterexample,
        });
    }
}

/// Chain-level verification of the sl2 action on CKh_A(D):
/// commutation with every edge map, the sl2 relations, Theta-duality,
/// the weight property, and the bidegree of each generator's image.
pub fn verify_sl2(d: &AnnularDiagram) -> Sl2Report {
    let cube = build_ckh(d);
    let n = d.n_crossings();
    let mut report = Sl2Report {
        pass: true,
        checks: Vec::new(),
    };

    // (i) dJ = Jd for every unsigned edge map.
    let mut chainmap_cex: Option<String> = None;
    'outer: for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
        for mask in 0..(1u32 << n) {
            for dir in 0..n {
                if mask & (1 << dir) != 0 {
                    continue;
                }
                let to = mask | (1 << dir);
                let ru = cube.resolution_at(mask);
                let rv = cube.resolution_at(to);
                for x in 0..cube.basis_size(mask) as GenIdx {
                    let mut lhs = FormalSum::zero();
                    for &(y, c) in cube.edge_terms(mask, dir, x) {
                        let mut jy = apply_j(op, rv, y);
                        jy.scale(c as i64);
                        lhs.add_sum(&jy);
                    }
                    let mut rhs = FormalSum::zero();
                    for (y, c) in apply_j(op, ru, x).iter() {
                        for &(z, cc) in cube.edge_terms(mask, dir, y) {
                            rhs.add(z, c * cc);
                        }
                    }
                    if lhs != rhs {
                        chainmap_cex = Some(format!(
                            "{} does not commute with edge {mask:b} dir {dir} on generator {x}",
                            op.as_str()
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.push("chainmap", chainmap_cex);

    // (ii) [E,F] = H, [H,E] = 2E, [H,F] = -2F on every vertex basis.
    let compose = |res: &Resolution, first: Sl2Op, second: Sl2Op, x: GenIdx| -> FormalSum {
        let mut out = FormalSum::zero();
        for (y, c) in apply_j(first, res, x).iter() {
            for (z, cz) in apply_j(second, res, y).iter() {
                out.add(z, c * cz);
            }
        }
        out
    };
    let mut rel_cex: Option<String> = None;
    'rel: for mask in 0..(1u32 << n) {
        let res = cube.resolution_at(mask);
        for x in 0..cube.basis_size(mask) as GenIdx {
            // EF - FE = H
            let mut lhs = compose(res, Sl2Op::F, Sl2Op::E, x);
            let mut fe = compose(res, Sl2Op::E, Sl2Op::F, x);
            fe.scale(-1);
            lhs.add_sum(&fe);
            if lhs != apply_j(Sl2Op::H, res, x) {
                rel_cex = Some(format!("[E,F] != H at vertex {mask:b}, generator {x}"));
                break 'rel;
            }
            // HE - EH = 2E
            let mut lhs = compose(res, Sl2Op::E, Sl2Op::H, x);
            let mut eh = compose(res, Sl2Op::H, Sl2Op::E, x);
            eh.scale(-1);
            lhs.add_sum(&eh);
            let mut two_e = apply_j(Sl2Op::E, res, x);
            two_e.scale(2);
            if lhs != two_e {
                rel_cex = Some(format!("[H,E] != 2E at vertex {mask:b}, generator {x}"));
                break 'rel;
            }
            // HF - FH = -2F
            let mut lhs = compose(res, Sl2Op::F, Sl2Op::H, x);
            let mut fh = compose(res, Sl2Op::H, Sl2Op::F, x);
            fh.scale(-1);
            lhs.add_sum(&fh);
            let mut m2f = apply_j(Sl2Op::F, res, x);
            m2f.scale(-2);
            if lhs != m2f {
                rel_cex = Some(format!("[H,F] != -2F at vertex {mask:b}, generator {x}"));
                break 'rel;
            }
        }
    }
    report.push("relations", rel_cex);

    // (iii) F = Theta E Theta.
    let mut theta_cex: Option<String> = None;
    'theta: for mask in 0..(1u32 << n) {
        let res = cube.resolution_at(mask);
        for x in 0..cube.basis_size(mask) as GenIdx {
            let mut conj = FormalSum::zero();
            for (y, c) in apply_j(Sl2Op::E, res, theta(res, x)).iter() {
                conj.add(theta(res, y), c.clone());
            }
            if conj != apply_j(Sl2Op::F, res, x) {
                theta_cex = Some(format!(
                    "Theta E Theta != F at vertex {mask:b}, generator {x}"
                ));
                break 'theta;
            }
        }
    }
    report.push("theta", theta_cex);

    // (iv) Hx = adeg(x) x.
    let mut weight_cex: Option<String> = None;
    'weight: for mask in 0..(1u32 << n) {
        let res = cube.resolution_at(mask);
        for x in 0..cube.basis_size(mask) as GenIdx {
            let mut want = FormalSum::zero();
            want.add(x, BigInt::from(adeg(res, x)));
            if apply_j(Sl2Op::H, res, x) != want {
                weight_cex = Some(format!("Hx != adeg(x) x at vertex {mask:b}, generator {x}"));
                break 'weight;
            }
        }
    }
    report.push("weight", weight_cex);

    // (v) every term of Ex has adeg(x) + 2, of Fx adeg(x) - 2.
    let mut deg_cex: Option<String> = None;
    'deg: for mask in 0..(1u32 << n) {
        let res = cube.resolution_at(mask);
        for x in 0..cube.basis_size(mask) as GenIdx {
            let a = adeg(res, x);
            for (op, shift) in [(Sl2Op::E, 2), (Sl2Op::F, -2)] {
                for (y, _) in apply_j(op, res, x).iter() {
                    if adeg(res, y) != a + shift {
                        deg_cex = Some(format!(
                            "{}x has a term of wrong annular degree at vertex {mask:b}",
                            op.as_str()
                        ));
                        break 'deg;
                    }
                }
            }
        }
    }
    report.push("adeg-shift", deg_cex);

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::diagram::parse_morse_word;

    fn two_essentials() -> (AnnularDiagram, Resolution) {
        let d = parse_morse_word("strands 2").unwrap();
        let r = d.resolve(&[]);
        (d, r)
    }

    fn gen(res: &Resolution, s: &str) -> GenIdx {
        Generator::parse(s, res).unwrap().index(res)
    }

    fn sum(res: &Resolution, terms: &[(&str, i64)]) -> FormalSum {
        let mut s = FormalSum::zero();
        for (g, c) in terms {
            s.add(gen(res, g), BigInt::from(*c));
        }
        s
    }

    #[test]
    fn e_table_on_two_essentials() {
        let (_d, r) = two_essentials();
        let e = |x: &str| apply_j(Sl2Op::E, &r, gen(&r, x));
        assert_eq!(e("v-,v-"), sum(&r, &[("v+,v-", 1), ("v-,v+", -1)]));
        assert_eq!(e("v+,v-"), sum(&r, &[("v+,v+", -1)]));
        assert_eq!(e("v-,v+"), sum(&r, &[("v+,v+", 1)]));
        assert_eq!(e("v+,v+"), FormalSum::zero());
    }

    #[test]
    fn f_table_on_two_essentials() {
        let (_d, r) = two_essentials();
        let f = |x: &str| apply_j(Sl2Op::F, &r, gen(&r, x));
        assert_eq!(f("v-,v-"), FormalSum::zero());
        assert_eq!(f("v+,v-"), sum(&r, &[("v-,v-", 1)]));
        assert_eq!(f("v-,v+"), sum(&r, &[("v-,v-", -1)]));
        assert_eq!(f("v+,v+"), sum(&r, &[("v-,v+", 1), ("v+,v-", -1)]));
    }

    #[test]
    fn h_is_weight() {
        let (_d, r) = two_essentials();
        assert_eq!(
            apply_j(Sl2Op::H, &r, gen(&r, "v+,v+")),
            sum(&r, &[("v+,v+", 2)])
        );
        assert_eq!(apply_j(Sl2Op::H, &r, gen(&r, "v+,v-")), FormalSum::zero());
    }

    #[test]
    fn theta_swaps_and_is_involutive() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let r = d.resolve(&[0, 0]);
        let x = gen(&r, "1,v-");
        assert_eq!(theta(&r, x), gen(&r, "1,v+"));
        assert_eq!(theta(&r, theta(&r, x)), x);
    }

    #[test]
    fn f_is_zero_without_essentials() {
        let d = parse_morse_word("strands 0\ncup 1\ncup 1\ncap 1\ncap 1").unwrap();
        let r = d.resolve(&[]);
        for x in 0..4 {
            assert!(apply_j(Sl2Op::F, &r, x).is_zero());
        }
    }

    #[test]
    fn verify_sl2_on_the_two_crossing_knot() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        let report = verify_sl2(&d);
        assert!(report.pass, "{:?}", report.checks);
    }

    #[test]
    fn ef_commutator_on_nested_circles() {
        let (_d, r) = two_essentials();
        let x = gen(&r, "v+,v-");
        // (EF - FE)(v+ (x) v-) = 0 = H(v+ (x) v-)
        let mut acc = FormalSum::zero();
        for (y, c) in apply_j(Sl2Op::F, &r, x).iter() {
            for (z, cz) in apply_j(Sl2Op::E, &r, y).iter() {
                acc.add(z, c * cz);
            }
        }
        for (y, c) in apply_j(Sl2Op::E, &r, x).iter() {
            for (z, cz) in apply_j(Sl2Op::F, &r, y).iter() {
                acc.add(z, -(c * cz));
            }
        }
        assert!(acc.is_zero());
    }
}
