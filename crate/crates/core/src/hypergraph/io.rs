//! The line-oriented `.hg` format.
//!
//! ```text
//! c optional comments
//! p hg <n> <k>
//! e 1 2 3 4
//! ```
//!
//! Labels are 1-based. LF and CRLF line endings are both accepted.

use std::fmt::Write as _;

use super::{Hypergraph, HypergraphError};

/// Parses `.hg` text into a validated, canonical hypergraph.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, HypergraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(HypergraphError::MalformedHeader {
                        line: line_no,
                        reason: "second header line".into(),
                    });
                }
                if tokens.next() != Some("hg") {
                    return Err(HypergraphError::MalformedHeader {
                        line: line_no,
                        reason: "expected `p hg <n> <k>`".into(),
                    });
                }
                let fields: Vec<&str> = tokens.collect();
                let [n, k] = fields[..] else {
                    return Err(HypergraphError::MalformedHeader {
                        line: line_no,
                        reason: "expected `p hg <n> <k>`".into(),
                    });
                };
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| HypergraphError::MalformedHeader {
                            line: line_no,
                            reason: format!("`{s}` is not a non-negative integer"),
                        })
                };
                header = Some((parse(n)?, parse(k)?));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(HypergraphError::MalformedHeader {
                        line: line_no,
                        reason: "edge before header".into(),
                    });
                };
                let mut edge = Vec::new();
                for tok in tokens {
                    let v: usize = tok.parse().map_err(|_| HypergraphError::Malformed {
                        line: line_no,
                        reason: format!("`{tok}` is not a vertex label"),
                    })?;
                    if v == 0 || v > n {
                        return Err(HypergraphError::Malformed {
                            line: line_no,
                            reason: format!("vertex {v} out of range 1..={n}"),
                        });
                    }
                    edge.push(v - 1);
                }
                edges.push(edge);
                edge_lines.push(line_no);
            }
            Some(other) => {
                return Err(HypergraphError::Malformed {
                    line: line_no,
                    reason: format!("unknown line type `{other}`"),
                })
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    let Some((n, k)) = header else {
        return Err(HypergraphError::MalformedHeader {
            line: 0,
            reason: "missing `p hg <n> <k>` header".into(),
        });
    };
    // Re-label edge errors with the line they came from.
    Hypergraph::new(n, k, edges).map_err(|err| match err {
        HypergraphError::WrongArity {
            edge,
            got,
            expected,
        } => HypergraphError::Malformed {
            line: edge_lines[edge],
            reason: format!("edge has {got} vertices, expected {expected}"),
        },
        HypergraphError::RepeatedVertex { edge, vertex } => HypergraphError::Malformed {
            line: edge_lines[edge],
            reason: format!("vertex {vertex} repeated within edge"),
        },
        HypergraphError::DuplicateEdge { edge } => HypergraphError::Malformed {
            line: edge_lines[edge],
            reason: "duplicate edge".into(),
        },
        other => other,
    })
}

impl Hypergraph {
    /// Canonical `.hg` serialization: sorted edges, ascending 1-based labels.
    pub fn to_hg(&self) -> String {
        let mut out = format!("p hg {} {}\n", self.n, self.k);
        for edge in &self.edges {
            out.push('e');
            for &v in edge {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        out
    }
}

impl std::str::FromStr for Hypergraph {
    type Err = HypergraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hypergraph(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let g = parse_hypergraph("p hg 4 4\ne 1 2 3 4").unwrap();
        assert_eq!((g.n(), g.k()), (4, 4));
        assert_eq!(g.edges(), &[vec![0, 1, 2, 3]]);

        let g = parse_hypergraph("p hg 6 4\ne 1 2 3 4\ne 3 4 5 6\ne 1 2 5 6").unwrap();
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.edges()[1], vec![0, 1, 4, 5]);

        let g = parse_hypergraph("p hg 3 2\ne 1 2\ne 2 3\ne 1 3").unwrap();
        assert_eq!(g.edges(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let text = "c triangle\r\n\r\np hg 3 2\r\nc mid\r\ne 2 1\r\ne 3 2\r\n";
        let g = parse_hypergraph(text).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("", "missing"),
            ("p hg 3", "expected"),
            ("p graph 3 2", "expected"),
            ("p hg x 2", "not a non-negative"),
            ("e 1 2\np hg 3 2", "before header"),
            ("p hg 3 2\np hg 3 2", "second header"),
            ("p hg 3 2\ne 1 2 3", "expected 2"),
            ("p hg 3 2\ne 1 4", "out of range"),
            ("p hg 3 2\ne 0 1", "out of range"),
            ("p hg 3 2\ne 2 2", "repeated"),
            ("p hg 3 2\ne 1 2\ne 2 1", "duplicate"),
            ("p hg 3 2\nx 1 2", "unknown line"),
            ("p hg 3 2\ne 1 b", "not a vertex"),
        ];
        for (text, needle) in cases {
            let err = parse_hypergraph(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn duplicate_edge_reports_its_line() {
        let err = parse_hypergraph("p hg 3 2\ne 1 2\ne 2 3\ne 2 1").unwrap_err();
        assert_eq!(
            err,
            HypergraphError::Malformed {
                line: 4,
                reason: "duplicate edge".into()
            }
        );
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (2usize..5, 0usize..4).prop_flat_map(|(k, extra)| {
            let n = k + extra;
            proptest::collection::btree_set(
                proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k),
                0..8,
            )
            .prop_map(move |edges| Hypergraph::new(n, k, edges.into_iter().collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_roundtrip(g in arb_hypergraph()) {
            let text = g.to_hg();
            prop_assert_eq!(parse_hypergraph(&text).unwrap(), g.clone());
            prop_assert_eq!(g.to_string(), text);
        }
    }
}
