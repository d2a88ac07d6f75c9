//! Test corpus: fixed named diagrams plus deterministic random Morse words.

use crate::diagram::{parse_morse_word, AnnularDiagram};
use crate::error::Result;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A corpus entry: a name and the `.akh` source of the diagram.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
}

impl CorpusEntry {
    pub fn diagram(&self) -> AnnularDiagram {
        parse_morse_word(&self.source).expect("corpus entries parse")
    }
}

/// The fixed named diagrams: unknots, the worked two-crossing knot, braid
/// closures, the thinness witnesses, and Reidemeister pairs.
pub fn named_diagrams() -> Vec<CorpusEntry> {
    let mk = |name: &str, source: &str| CorpusEntry {
        name: name.to_string(),
        source: format!("{source}\n"),
    };
    vec![
        mk("unknot_trivial", "strands 0\ncup 1\ncap 1"),
        mk("unknot_essential", "strands 1"),
        // The two-crossing annular knot of the worked example.
        mk("knot_2x", "strands 3\nx+ 2\nx- 1"),
        // Annular closures of 2-braid words.
        mk("braid2_pp", "strands 2\nx+ 1\nx+ 1"),
        mk("braid2_ppp", "strands 2\nx+ 1\nx+ 1\nx+ 1"),
        // Two essential circles joined by a past and a future arc: the
        // four-point branch of the H dichotomy.
        mk("h_outlier", "strands 2\nx+ 1\nx- 1"),
        // Disjoint contractible ladybug next to an essential strand: thick
        // path moduli for E over a disconnected subcube diagram.
        mk(
            "ladybug_split",
            "strands 1\ncup 2\ncup 4\nx+ 3\nx+ 4\ncap 3\ncap 2",
        ),
    ]
}

/// Reidemeister pairs (performed away from the puncture): two R1, two R2
/// and two R3 pairs, as `(name, before, after)`.
pub fn reidemeister_pairs() -> Vec<(String, CorpusEntry, CorpusEntry)> {
    let mk = |name: &str, a: &str, b: &str| {
        (
            name.to_string(),
            CorpusEntry {
                name: format!("{name}_a"),
                source: format!("{a}\n"),
            },
            CorpusEntry {
                name: format!("{name}_b"),
                source: format!("{b}\n"),
            },
        )
    };
    vec![
        mk("r1_pos", "strands 1", "strands 1\ncup 2\nx- 1\ncap 1"),
        mk("r1_neg", "strands 1", "strands 1\ncup 2\nx+ 1\ncap 1"),
        mk("r2_nested", "strands 2", "strands 2\nx+ 1\nx- 1"),
        mk(
            "r2_knot2x",
            "strands 3\nx+ 2\nx- 1",
            "strands 3\nx+ 2\nx- 1\nx+ 1\nx- 1",
        ),
        mk(
            "r3_braid",
            "strands 3\nx+ 1\nx+ 2\nx+ 1",
            "strands 3\nx+ 2\nx+ 1\nx+ 2",
        ),
        mk(
            "r3_mixed",
            "strands 3\nx- 1\nx- 2\nx- 1",
            "strands 3\nx- 2\nx- 1\nx- 2",
        ),
    ]
}

/// Deterministic random Morse words: closure-balanced by construction,
/// with at most `max_crossings` crossings.
pub fn random_words(max_crossings: usize, count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100_000, "word generation should not stall");
        let idx = out.len();
        if let Some(entry) = random_word(&mut rng, max_crossings, idx) {
            out.push(entry);
        }
    }
    out
}

fn random_word(rng: &mut StdRng, max_crossings: usize, idx: usize) -> Option<CorpusEntry> {
    let strands = rng.random_range(0..=3usize);
    let cups = rng.random_range(0..=2usize);
    // Bias toward small words; a few larger ones exercise the bounds.
    let n_crossings = match rng.random_range(0..10u32) {
        0..=4 => rng.random_range(0..=3usize),
        5..=7 => rng.random_range(2..=5usize),
        _ => rng.random_range(4..=max_crossings),
    };
    let mut remaining_cups = cups;
    let mut remaining_caps = cups;
    let mut remaining_x = n_crossings;
    let mut count = strands;
    let mut lines = vec![format!("strands {strands}")];
    while remaining_cups + remaining_caps + remaining_x > 0 {
        let mut options: Vec<u32> = Vec::new();
        if remaining_cups > 0 {
            options.push(0);
        }
        // A cap must leave enough strands for the remaining caps, and must
        // not strand the closure; it is always legal when count >= 2 and
        // there are caps left.
        if remaining_caps > remaining_cups && count >= 2 {
            options.push(1);
        }
        if remaining_x > 0 && count >= 2 {
            options.push(2);
        }
        if options.is_empty() {
            return None; // dead end (e.g. crossings left with one strand)
        }
        match options[rng.random_range(0..options.len())] {
            0 => {
                let p = rng.random_range(1..=count + 1);
                lines.push(format!("cup {p}"));
                remaining_cups -= 1;
                count += 2;
            }
            1 => {
                let p = rng.random_range(1..=count - 1);
                lines.push(format!("cap {p}"));
                remaining_caps -= 1;
                count -= 2;
            }
            _ => {
                let p = rng.random_range(1..=count - 1);
                let kind = if rng.random_bool(0.5) { "x+" } else { "x-" };
                lines.push(format!("{kind} {p}"));
                remaining_x -= 1;
            }
        }
    }
    let source = format!("{}\n", lines.join("\n"));
    // Validate; reject degenerate words without any generator content.
    let d = parse_morse_word(&source).ok()?;
    if d.strands == 0 && d.events.is_empty() {
        return None;
    }
    Some(CorpusEntry {
        name: format!("rand_{idx:03}"),
        source,
    })
}

/// The full corpus: named diagrams plus `count` random words.
pub fn corpus(max_crossings: usize, count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut all = named_diagrams();
    all.extend(random_words(max_crossings, count, seed));
    all
}

/// Write the corpus as `.akh` files into a directory.
pub fn write_corpus(
    dir: &std::path::Path,
    max_crossings: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)
        .map_err(|e| crate::error::AkhError::Argument(format!("cannot create {dir:?}: {e}")))?;
    let mut paths = Vec::new();
    let mut entries = corpus(max_crossings, count, seed);
    for (name, a, b) in reidemeister_pairs() {
        let _ = name;
        entries.push(a);
        entries.push(b);
    }
    for e in entries {
        let path = dir.join(format!("{}.akh", e.name));
        std::fs::write(&path, e.source.as_bytes())
            .map_err(|err| crate::error::AkhError::Argument(format!("write failed: {err}")))?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(8, 50, 7);
        let b = corpus(8, 50, 7);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.source, y.source);
        }
    }

    #[test]
    fn all_entries_parse_and_build() {
        for e in corpus(8, 50, 7) {
            let d = e.diagram();
            assert!(d.n_crossings() <= 8, "{}", e.name);
            let c = crate::complex::build_ckh(&d);
            assert!(c.verify_d_squared(), "{}", e.name);
        }
    }

    #[test]
    fn reidemeister_pairs_parse() {
        for (name, a, b) in reidemeister_pairs() {
            let da = a.diagram();
            let db = b.diagram();
            assert_ne!(
                da.n_crossings(),
                usize::MAX,
                "{name}: {} vs {}",
                da.n_crossings(),
                db.n_crossings()
            );
        }
    }
}
