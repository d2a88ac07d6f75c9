//! The Frobenius algebra Z[X]/(X^2), circle labels, gradings, and the
//! annular TQFT saddle maps.
//!
//! Generators over a resolution are encoded as bit patterns: bit 0 stands
//! for the label 1 (trivial circle) or v+ (essential circle), bit 1 for X
//! or v-. Circle 0 occupies the most significant bit so that the numeric
//! order of indices is the lexicographic order on label tuples with
//! 1 < X and v+ < v-.

use crate::diagram::{AnnularDiagram, CircleKind, Resolution, Smoothing};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

pub type GenIdx = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Label {
    One,
    X,
    VPlus,
    VMinus,
}

impl Label {
    pub fn from_bit(kind: CircleKind, bit: u8) -> Label {
        match (kind, bit) {
            (CircleKind::Trivial, 0) => Label::One,
            (CircleKind::Trivial, _) => Label::X,
            (CircleKind::Essential, 0) => Label::VPlus,
            (CircleKind::Essential, _) => Label::VMinus,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::One | Label::VPlus => 0,
            Label::X | Label::VMinus => 1,
        }
    }

    pub fn matches(self, kind: CircleKind) -> bool {
        match self {
            Label::One | Label::X => kind == CircleKind::Trivial,
            Label::VPlus | Label::VMinus => kind == CircleKind::Essential,
        }
    }

    /// qdeg(1) = qdeg(v+) = +1, qdeg(X) = qdeg(v-) = -1.
    pub fn qdeg(self) -> i64 {
        1 - 2 * self.bit() as i64
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::One => "1",
            Label::X => "X",
            Label::VPlus => "v+",
            Label::VMinus => "v-",
        }
    }
}

/// A Khovanov generator: one label per circle, in the canonical circle
/// order of its resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub labels: Vec<Label>,
}

impl Generator {
    pub fn from_index(res: &Resolution, idx: GenIdx) -> Generator {
        let c = res.n_circles();
        let labels = (0..c)
            .map(|i| Label::from_bit(res.circles[i].kind, bit_of(idx, i, c)))
            .collect();
        Generator { labels }
    }

    pub fn index(&self, res: &Resolution) -> GenIdx {
        let c = res.n_circles();
        assert_eq!(self.labels.len(), c);
        let mut idx = 0;
        for (i, l) in self.labels.iter().enumerate() {
            assert!(l.matches(res.circles[i].kind), "label kind mismatch");
            idx |= (l.bit() as GenIdx) << (c - 1 - i);
        }
        idx
    }

    pub fn to_string(&self) -> String {
        self.labels
            .iter()
            .map(|l| l.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse a comma-separated label list such as `1,v-`.
    pub fn parse(s: &str, res: &Resolution) -> crate::error::Result<Generator> {
        let labels: Vec<Label> = s
            .split(',')
            .map(|t| match t.trim() {
                "1" => Ok(Label::One),
                "X" | "x" => Ok(Label::X),
                "v+" => Ok(Label::VPlus),
                "v-" => Ok(Label::VMinus),
                other => Err(crate::error::AkhError::Argument(format!(
                    "invalid label '{other}'"
                ))),
            })
            .collect::<crate::error::Result<_>>()?;
        if labels.len() != res.n_circles() {
            return Err(crate::error::AkhError::Argument(format!(
                "generator has {} labels but the resolution has {} circles",
                labels.len(),
                res.n_circles()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if !l.matches(res.circles[i].kind) {
                return Err(crate::error::AkhError::Argument(format!(
                    "label {} does not match circle {i} ({:?})",
                    l.as_str(),
                    res.circles[i].kind
                )));
            }
        }
        Ok(Generator { labels })
    }
}

#[inline]
pub fn bit_of(idx: GenIdx, circle: usize, n_circles: usize) -> u8 {
    ((idx >> (n_circles - 1 - circle)) & 1) as u8
}

#[inline]
pub fn set_bit(idx: GenIdx, circle: usize, n_circles: usize, bit: u8) -> GenIdx {
    let shift = n_circles - 1 - circle;
    (idx & !(1 << shift)) | ((bit as GenIdx) << shift)
}

/// Annular degree: sum of +1/-1 over essential circles.
pub fn adeg(res: &Resolution, idx: GenIdx) -> i64 {
    let c = res.n_circles();
    (res.n_trivial..c)
        .map(|i| 1 - 2 * bit_of(idx, i, c) as i64)
        .sum()
}

/// Sum of circle quantum degrees (unshifted).
pub fn qdeg_circles(res: &Resolution, idx: GenIdx) -> i64 {
    let c = res.n_circles();
    (0..c).map(|i| 1 - 2 * bit_of(idx, i, c) as i64).sum()
}

/// Homological, quantum and annular degree of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TriDegree {
    pub h: i64,
    pub q: i64,
    pub a: i64,
}

/// Gradings of a generator over a vertex of the cube of resolutions:
/// h = |u| - n_-, q = (sum of circle qdeg) + |u| + n_+ - 2n_-, a = adeg.
pub fn gradings(d: &AnnularDiagram, res: &Resolution, idx: GenIdx) -> TriDegree {
    let weight: i64 = res.vertex.iter().map(|&b| b as i64).sum();
    let (np, nm) = (d.n_plus as i64, d.n_minus as i64);
    TriDegree {
        h: weight - nm,
        q: qdeg_circles(res, idx) + weight + np - 2 * nm,
        a: adeg(res, idx),
    }
}

/// An integer linear combination of generators over one resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<GenIdx, BigInt>,
}

impl FormalSum {
    pub fn zero() -> FormalSum {
        FormalSum::default()
    }

    pub fn singleton(idx: GenIdx) -> FormalSum {
        let mut s = FormalSum::zero();
        s.add(idx, BigInt::from(1));
        s
    }

    pub fn add(&mut self, idx: GenIdx, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(idx).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add_sum(&mut self, other: &FormalSum) {
        for (&g, c) in &other.terms {
            self.add(g, c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: GenIdx) -> BigInt {
        self.terms.get(&idx).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenIdx, &BigInt)> {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&mut self, k: i64) {
        if k == 0 {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= k;
        }
    }
}

/// What a saddle does to the circles of the source resolution.
#[derive(Clone, Debug)]
pub enum SaddleKind {
    /// Circles `a < b` of the source merge into `into` of the target.
    Merge { a: usize, b: usize, into: usize },
    /// Circle `from` of the source splits into `a < b` of the target.
    Split { from: usize, a: usize, b: usize },
}

/// Saddle combinatorics for one cube edge, including the bystander
/// circle correspondence (source circle index -> target circle index).
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub crossing: usize,
    pub kind: SaddleKind,
    /// `corr[i] = Some(j)` for every non-participating circle.
    pub corr: Vec<Option<usize>>,
}

/// Analyze the saddle of `crossing` from `ru` (coordinate 0) to `rv`
/// (coordinate 1).
pub fn saddle_data(
    d: &AnnularDiagram,
    ru: &Resolution,
    rv: &Resolution,
    crossing: usize,
) -> SaddleData {
    let feet_u = match d.smoothing(crossing, 0) {
        Smoothing::Identity => [
            crate::diagram::Junction::IdLo(crossing),
            crate::diagram::Junction::IdHi(crossing),
        ],
        Smoothing::CapCup => [
            crate::diagram::Junction::XCap(crossing),
            crate::diagram::Junction::XCup(crossing),
        ],
    };
    let feet_v = match d.smoothing(crossing, 1) {
        Smoothing::Identity => [
            crate::diagram::Junction::IdLo(crossing),
            crate::diagram::Junction::IdHi(crossing),
        ],
        Smoothing::CapCup => [
            crate::diagram::Junction::XCap(crossing),
            crate::diagram::Junction::XCup(crossing),
        ],
    };
    let u0 = ru.circle_of_junction(feet_u[0]).expect("active junction");
    let u1 = ru.circle_of_junction(feet_u[1]).expect("active junction");
    let v0 = rv.circle_of_junction(feet_v[0]).expect("active junction");
    let v1 = rv.circle_of_junction(feet_v[1]).expect("active junction");

    let kind = if u0 != u1 {
        debug_assert_eq!(v0, v1, "merge must produce one circle");
        SaddleKind::Merge {
            a: u0.min(u1),
            b: u0.max(u1),
            into: v0,
        }
    } else {
        debug_assert_ne!(v0, v1, "split must produce two circles");
        SaddleKind::Split {
            from: u0,
            a: v0.min(v1),
            b: v0.max(v1),
        }
    };

    // Two essential circles only merge (or appear from a split) if they are
    // nesting-adjacent; the square-face turnback construction relies on it.
    match kind {
        SaddleKind::Merge { a, b, .. } => {
            if ru.is_essential(a) && ru.is_essential(b) {
                debug_assert_eq!(b - a, 1, "merged essential circles must be adjacent");
            }
        }
        SaddleKind::Split { a, b, .. } => {
            if rv.is_essential(a) && rv.is_essential(b) {
                debug_assert_eq!(b - a, 1, "split essential circles must be adjacent");
            }
        }
    }

    let participants_u: Vec<usize> = match kind {
        SaddleKind::Merge { a, b, .. } => vec![a, b],
        SaddleKind::Split { from, .. } => vec![from],
    };
    let mut corr: Vec<Option<usize>> = vec![None; ru.n_circles()];
    for (ci, c) in ru.circles.iter().enumerate() {
        if participants_u.contains(&ci) {
            continue;
        }
        let cj = rv.circle_of_seg(c.steps[0].0);
        debug_assert_eq!(
            {
                let mut a: Vec<_> = c.steps.iter().map(|s| s.0).collect();
                a.sort_unstable();
                a
            },
            {
                let mut b: Vec<_> = rv.circles[cj].steps.iter().map(|s| s.0).collect();
                b.sort_unstable();
                b
            },
            "bystander circles must coincide"
        );
        corr[ci] = Some(cj);
    }
    SaddleData {
        crossing,
        kind,
        corr,
    }
}

impl SaddleData {
    /// Correspondence of essential circles across the saddle, as 1-based
    /// nesting indices. Bystanders always correspond; a participant
    /// survives when the saddle merges it with a trivial circle or splits a
    /// trivial circle off it. Essentials killed by a merge of two
    /// essentials, or created by the split of a trivial circle, are absent.
    pub fn essential_correspondence(
        &self,
        ru: &Resolution,
        rv: &Resolution,
    ) -> BTreeMap<usize, usize> {
        let mut map = BTreeMap::new();
        for (ci, corr) in self.corr.iter().enumerate() {
            if let (Some(a), Some(cj)) = (ru.essential_index(ci), *corr) {
                if let Some(b) = rv.essential_index(cj) {
                    map.insert(a, b);
                }
            }
        }
        match self.kind {
            SaddleKind::Merge { a, b, into } => {
                let (ea, eb) = (ru.essential_index(a), ru.essential_index(b));
                if let Some(bi) = rv.essential_index(into) {
                    match (ea, eb) {
                        (Some(i), None) | (None, Some(i)) => {
                            map.insert(i, bi);
                        }
                        _ => {}
                    }
                }
            }
            SaddleKind::Split { from, a, b } => {
                if let Some(i) = ru.essential_index(from) {
                    let (ea, eb) = (rv.essential_index(a), rv.essential_index(b));
                    match (ea, eb) {
                        (Some(j), None) | (None, Some(j)) => {
                            map.insert(i, j);
                        }
                        _ => {}
                    }
                }
            }
        }
        map
    }
}

/// Multiplication in Z[X]/(X^2) on F_Kh labels (bit 0 = 1, bit 1 = X).
fn mul_bits(a: u8, b: u8) -> Option<u8> {
    match a + b {
        0 => Some(0),
        1 => Some(1),
        _ => None, // X * X = 0
    }
}

/// Comultiplication: Delta(1) = 1 (x) X + X (x) 1, Delta(X) = X (x) X.
fn delta_bits(a: u8) -> Vec<(u8, u8)> {
    if a == 0 {
        vec![(0, 1), (1, 0)]
    } else {
        vec![(1, 1)]
    }
}

/// The annular saddle map F_A = adeg-preserving part of F_Kh, applied to a
/// single generator. All output coefficients are +1.
pub fn apply_saddle(
    ru: &Resolution,
    rv: &Resolution,
    sd: &SaddleData,
    x: GenIdx,
) -> Vec<GenIdx> {
    let cu = ru.n_circles();
    let cv = rv.n_circles();
    let adeg_x = adeg(ru, x);
    let mut base: GenIdx = 0;
    for (ci, corr) in sd.corr.iter().enumerate() {
        if let Some(cj) = corr {
            base = set_bit(base, *cj, cv, bit_of(x, ci, cu));
        }
    }
    let mut out = Vec::new();
    match sd.kind {
        SaddleKind::Merge { a, b, into } => {
            if let Some(m) = mul_bits(bit_of(x, a, cu), bit_of(x, b, cu)) {
                let y = set_bit(base, into, cv, m);
                if adeg(rv, y) == adeg_x {
                    out.push(y);
                }
            }
        }
        SaddleKind::Split { from, a, b } => {
            for (la, lb) in delta_bits(bit_of(x, from, cu)) {
                let y = set_bit(set_bit(base, a, cv, la), b, cv, lb);
                if adeg(rv, y) == adeg_x {
                    out.push(y);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_morse_word;

    fn gen(res: &Resolution, s: &str) -> GenIdx {
        Generator::parse(s, res).unwrap().index(res)
    }

    /// Type (I) merge of an essential and a trivial circle.
    #[test]
    fn saddle_type_one() {
        let d = parse_morse_word("strands 1\ncup 2\nx- 1\ncap 1").unwrap();
        let ru = d.resolve(&[0]);
        let rv = d.resolve(&[1]);
        assert_eq!((ru.n_trivial, ru.essential_count()), (1, 1));
        assert_eq!((rv.n_trivial, rv.essential_count()), (0, 1));
        let sd = saddle_data(&d, &ru, &rv, 0);
        let check = |x: &str, ys: &[&str]| {
            let img = apply_saddle(&ru, &rv, &sd, gen(&ru, x));
            let want: Vec<GenIdx> = ys.iter().map(|y| gen(&rv, y)).collect();
            assert_eq!(img, want, "saddle on {x}");
        };
        check("1,v-", &["v-"]);
        check("1,v+", &["v+"]);
        check("X,v-", &[]);
        check("X,v+", &[]);
    }

    /// Type (II) merge of two essential circles.
    #[test]
    fn saddle_type_two() {
        let d = parse_morse_word("strands 2\nx+ 1\nx- 1").unwrap();
        // Edge in coordinate 0 from (0,0): merges the two essentials of... no:
        // (0,0) has one trivial circle. Use the edge (0,1) -> (1,1).
        let ru = d.resolve(&[0, 1]);
        let rv = d.resolve(&[1, 1]);
        assert_eq!(ru.essential_count(), 2);
        assert_eq!((rv.n_trivial, rv.essential_count()), (1, 0));
        let sd = saddle_data(&d, &ru, &rv, 0);
        let check = |x: &str, ys: &[&str]| {
            let img = apply_saddle(&ru, &rv, &sd, gen(&ru, x));
            let want: Vec<GenIdx> = ys.iter().map(|y| gen(&rv, y)).collect();
            assert_eq!(img, want, "saddle on {x}");
        };
        check("v-,v-", &[]);
        check("v+,v-", &["X"]);
        check("v-,v+", &["X"]);
        check("v+,v+", &[]);
    }

    /// Type (III) split of an essential circle into essential + trivial.
    #[test]
    fn saddle_type_three() {
        let d = parse_morse_word("strands 1\ncup 2\nx+ 1\ncap 1").unwrap();
        let ru = d.resolve(&[0]);
        let rv = d.resolve(&[1]);
        assert_eq!(ru.essential_count(), 1);
        assert_eq!((rv.n_trivial, rv.essential_count()), (1, 1));
        let sd = saddle_data(&d, &ru, &rv, 0);
        let img = apply_saddle(&ru, &rv, &sd, gen(&ru, "v-"));
        assert_eq!(img, vec![gen(&rv, "X,v-")]);
        let img = apply_saddle(&ru, &rv, &sd, gen(&ru, "v+"));
        assert_eq!(img, vec![gen(&rv, "X,v+")]);
    }

    /// Type (IV) split of a trivial circle into two essentials.
    #[test]
    fn saddle_type_four() {
        let d = parse_morse_word("strands 2\nx- 1").unwrap();
        let ru = d.resolve(&[0]);
        let rv = d.resolve(&[1]);
        assert_eq!((ru.n_trivial, ru.essential_count()), (1, 0));
        assert_eq!(rv.essential_count(), 2);
        let sd = saddle_data(&d, &ru, &rv, 0);
        let img = apply_saddle(&ru, &rv, &sd, gen(&ru, "1"));
        let mut want = vec![gen(&rv, "v+,v-"), gen(&rv, "v-,v+")];
        want.sort_unstable();
        assert_eq!(img, want);
        assert!(apply_saddle(&ru, &rv, &sd, gen(&ru, "X")).is_empty());
    }

    /// Pure trivial circles: F_A agrees with the Frobenius maps unfiltered.
    #[test]
    fn trivial_circles_match_frobenius() {
        let d = parse_morse_word("strands 0\ncup 1\ncup 1\nx+ 2\ncap 2\ncap 1").unwrap();
        let ru = d.resolve(&[0]);
        let rv = d.resolve(&[1]);
        let sd = saddle_data(&d, &ru, &rv, 0);
        match sd.kind {
            SaddleKind::Merge { .. } => {
                assert_eq!(ru.n_circles(), rv.n_circles() + 1);
                // m(1,1)=1, m(1,X)=X, m(X,X)=0
                let mut hits = 0;
                for x in 0..(1 << ru.n_circles()) as GenIdx {
                    hits += apply_saddle(&ru, &rv, &sd, x).len();
                }
                assert_eq!(hits, 3);
            }
            SaddleKind::Split { .. } => {
                assert_eq!(ru.n_circles() + 1, rv.n_circles());
                let mut hits = 0;
                for x in 0..(1 << ru.n_circles()) as GenIdx {
                    hits += apply_saddle(&ru, &rv, &sd, x).len();
                }
                assert_eq!(hits, 3); // Delta(1) has two terms, Delta(X) one
            }
        }
    }

    #[test]
    fn gradings_examples() {
        // Trivial unknot labeled 1 -> (0, 1, 0).
        let d = parse_morse_word("strands 0\ncup 1\ncap 1").unwrap();
        let r = d.resolve(&[]);
        let g = gradings(&d, &r, gen(&r, "1"));
        assert_eq!(g, TriDegree { h: 0, q: 1, a: 0 });
        // Essential unknot labeled v- -> (0, -1, -1).
        let d = parse_morse_word("strands 1").unwrap();
        let r = d.resolve(&[]);
        let g = gradings(&d, &r, gen(&r, "v-"));
        assert_eq!(g, TriDegree { h: 0, q: -1, a: -1 });
        // Two-crossing knot, generator 1 (x) v- at the all-zeros vertex:
        // (n+, n-) = (1, 1), so (h, q, a) = (-1, -1, -1).
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        assert_eq!((d.n_plus, d.n_minus), (1, 1));
        let r = d.resolve(&[0, 0]);
        let g = gradings(&d, &r, gen(&r, "1,v-"));
        assert_eq!(
            g,
            TriDegree {
                h: -1,
                q: -1,
                a: -1
            }
        );
    }
}
