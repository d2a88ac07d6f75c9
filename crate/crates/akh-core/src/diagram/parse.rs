//! Parser for the `.akh` Morse-word grammar.
//!
//! ```text
//! # comment
//! strands <k>
//! orient <+|-> ... (k tokens, optional)
//! x+ <i> | x- <i> | cup <i> | cap <i>
//! ```
//!
//! Statements are separated by newlines or `;`. Whitespace is free-form.

use super::{AnnularDiagram, EventKind, MorseEvent};
use crate::error::{AkhError, Result};

pub fn parse_morse_word(src: &str) -> Result<AnnularDiagram> {
    let mut strands: Option<usize> = None;
    let mut orient: Option<Vec<i8>> = None;
    let mut orient_line = 0usize;
    let mut events: Vec<MorseEvent> = Vec::new();
    let mut count = 0usize; // running strand count
    let mut last_line = 0usize;

    for (line_no, raw_line) in src.lines().enumerate() {
        let line = line_no + 1;
        last_line = line;
        let no_comment = raw_line.split('#').next().unwrap_or("");
        for stmt in no_comment.split(';') {
            let mut it = stmt.split_whitespace();
            let Some(head) = it.next() else { continue };
            let err = |msg: String| AkhError::Parse { line, msg };
            match head {
                "strands" => {
                    if strands.is_some() {
                        return Err(err("duplicate 'strands' line".into()));
                    }
                    let k = it
                        .next()
                        .ok_or_else(|| err("'strands' needs a count".into()))?
                        .parse::<usize>()
                        .map_err(|_| err("invalid strand count".into()))?;
                    strands = Some(k);
                    count = k;
                }
                "orient" => {
                    let k = strands
                        .ok_or_else(|| err("'orient' must come after 'strands'".into()))?;
                    let mut dirs = Vec::with_capacity(k);
                    for tok in it.by_ref() {
                        match tok {
                            "+" => dirs.push(1),
                            "-" => dirs.push(-1),
                            t => return Err(err(format!("invalid orientation token '{t}'"))),
                        }
                    }
                    if dirs.len() != k {
                        return Err(err(format!(
                            "'orient' expects {k} tokens, got {}",
                            dirs.len()
                        )));
                    }
                    orient = Some(dirs);
                    orient_line = line;
                    continue;
                }
                "x+" | "x-" | "cup" | "cap" => {
                    if strands.is_none() {
                        return Err(err("word must start with 'strands <k>'".into()));
                    }
                    let pos = it
                        .next()
                        .ok_or_else(|| err(format!("'{head}' needs a position")))?
                        .parse::<usize>()
                        .map_err(|_| err(format!("invalid position for '{head}'")))?;
                    let kind = match head {
                        "x+" => EventKind::CrossingPositive,
                        "x-" => EventKind::CrossingNegative,
                        "cup" => EventKind::Cup,
                        _ => EventKind::Cap,
                    };
                    match kind {
                        EventKind::Cup => {
                            if pos == 0 || pos > count + 1 {
                                return Err(err(format!(
                                    "cup position {pos} out of range 1..={}",
                                    count + 1
                                )));
                            }
                            count += 2;
                        }
                        EventKind::Cap | EventKind::CrossingPositive
                        | EventKind::CrossingNegative => {
                            if count < 2 || pos == 0 || pos > count - 1 {
                                return Err(err(format!(
                                    "'{head}' position {pos} out of range (current strand \
                                     count {count})"
                                )));
                            }
                            if kind == EventKind::Cap {
                                count -= 2;
                            }
                        }
                    }
                    events.push(MorseEvent {
                        kind,
                        position: pos,
                    });
                }
                other => return Err(err(format!("unknown statement '{other}'"))),
            }
            if let Some(extra) = it.next() {
                return Err(AkhError::Parse {
                    line,
                    msg: format!("unexpected token '{extra}'"),
                });
            }
        }
    }

    let strands = strands.ok_or_else(|| AkhError::Parse {
        line: 1,
        msg: "missing 'strands <k>' line".into(),
    })?;
    if count != strands {
        return Err(AkhError::Parse {
            line: last_line,
            msg: format!(
                "unbalanced strand count: word ends with {count} strands, expected {strands}"
            ),
        });
    }
    AnnularDiagram::new(strands, events, orient).map_err(|e| match e {
        AkhError::Diagram(msg) => AkhError::Parse {
            line: if msg.contains("orientation") { orient_line } else { last_line },
            msg,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicolon_separated() {
        let d = parse_morse_word("strands 1; cup 2; x+ 1; cap 1").unwrap();
        assert_eq!(d.events.len(), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = parse_morse_word("# a knot\nstrands 3 # three strands\n\nx+ 2\nx- 1\n").unwrap();
        assert_eq!(d.n_crossings(), 2);
    }

    #[test]
    fn position_out_of_range() {
        let e = parse_morse_word("strands 1\ncup 4").unwrap_err();
        match e {
            AkhError::Parse { msg, .. } => assert!(msg.contains("out of range"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn orient_roundtrip() {
        let d = parse_morse_word("strands 2\norient + +\nx+ 1\nx- 1").unwrap();
        assert_eq!(d.orientations, vec![1, 1]);
    }
}
