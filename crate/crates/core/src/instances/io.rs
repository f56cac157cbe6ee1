//! Plain-text instance and ground-truth formats.
//!
//! ```text
//! kcc 3          mfast 3
//! 0 1 1          0 1
//! 0 2 0          2 0
//! 1 2 1          1 2
//! ```
//!
//! A k-CC file lists unordered pairs with `1` for an edge and `0` for a
//! non-edge; unlisted pairs are non-edges. A tournament file lists one arc
//! `u v` (meaning `u -> v`) for every pair. Blank lines and lines starting
//! with `#` are ignored. Vertices are 0-based.

use std::fmt::Write as _;
use std::path::Path;

use super::{num_pairs, pair_index, set_bit, Clustering, LabeledGraph, Permutation, Tournament};
use crate::error::{ParseError, Result};

#[derive(Debug, PartialEq)]
pub enum Instance {
    Kcc(LabeledGraph),
    Mfast(Tournament),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Kcc(g) => g.n(),
            Instance::Mfast(t) => t.n(),
        }
    }

    pub fn problem(&self) -> &'static str {
        match self {
            Instance::Kcc(_) => "kcc",
            Instance::Mfast(_) => "mfast",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Instance::Kcc(g) => {
                writeln!(out, "kcc {}", g.n()).unwrap();
                for u in 0..g.n() {
                    for v in u + 1..g.n() {
                        writeln!(out, "{u} {v} {}", g.peek_edge(u, v) as u8).unwrap();
                    }
                }
            }
            Instance::Mfast(t) => {
                writeln!(out, "mfast {}", t.n()).unwrap();
                for u in 0..t.n() {
                    for v in u + 1..t.n() {
                        if t.peek_arc(u, v) {
                            writeln!(out, "{u} {v}").unwrap();
                        } else {
                            writeln!(out, "{v} {u}").unwrap();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn into_graph(self) -> Result<LabeledGraph, ParseError> {
        match self {
            Instance::Kcc(g) => Ok(g),
            Instance::Mfast(_) => Err(ParseError::WrongProblem {
                expected: "kcc",
                found: "mfast",
            }),
        }
    }

    pub fn into_tournament(self) -> Result<Tournament, ParseError> {
        match self {
            Instance::Mfast(t) => Ok(t),
            Instance::Kcc(_) => Err(ParseError::WrongProblem {
                expected: "mfast",
                found: "kcc",
            }),
        }
    }
}

fn parse_vertex(tok: &str, line: usize, raw: &str, n: usize) -> Result<usize, ParseError> {
    let v: usize = tok.parse().map_err(|_| ParseError::Malformed {
        line,
        found: raw.to_string(),
    })?;
    if v >= n {
        return Err(ParseError::OutOfRange { line, vertex: v, n });
    }
    Ok(v)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::Header {
        line: 1,
        found: String::new(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || ParseError::Header {
        line: hline,
        found: header.to_string(),
    };
    if toks.len() != 2 {
        return Err(bad_header());
    }
    let n: usize = toks[1].parse().map_err(|_| bad_header())?;
    let is_kcc = match toks[0] {
        "kcc" => true,
        "mfast" => false,
        _ => return Err(bad_header()),
    };

    let mut seen = vec![0u64; num_pairs(n).div_ceil(64)];
    let mut bits = vec![0u64; num_pairs(n).div_ceil(64)];
    for (line, raw) in lines {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let expected = if is_kcc { 3 } else { 2 };
        if toks.len() != expected {
            return Err(ParseError::Malformed {
                line,
                found: raw.to_string(),
            });
        }
        let u = parse_vertex(toks[0], line, raw, n)?;
        let v = parse_vertex(toks[1], line, raw, n)?;
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        let idx = pair_index(u, v);
        if super::get_bit(&seen, idx) {
            return Err(ParseError::DuplicatePair { line, u, v });
        }
        set_bit(&mut seen, idx, true);
        let value = if is_kcc {
            match toks[2] {
                "1" => true,
                "0" => false,
                _ => {
                    return Err(ParseError::Malformed {
                        line,
                        found: raw.to_string(),
                    })
                }
            }
        } else {
            // stored bit means min -> max
            u < v
        };
        set_bit(&mut bits, idx, value);
    }

    if is_kcc {
        let mut g = LabeledGraph::empty(n);
        g.bits = bits;
        Ok(Instance::Kcc(g))
    } else {
        for v in 1..n {
            for u in 0..v {
                if !super::get_bit(&seen, pair_index(u, v)) {
                    return Err(ParseError::MissingPair { u, v });
                }
            }
        }
        let mut t = Tournament::transitive(n);
        t.bits = bits;
        Ok(Instance::Mfast(t))
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_instance(&text)?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, instance.to_text())?;
    Ok(())
}

/// One line per vertex: its cluster id or its rank.
pub fn sidecar_text(values: &[usize]) -> String {
    let mut out = String::with_capacity(values.len() * 4);
    for v in values {
        writeln!(out, "{v}").unwrap();
    }
    out
}

fn parse_sidecar_values(text: &str) -> Result<Vec<usize>, ParseError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse()
                .map_err(|_| ParseError::GroundTruth(format!("bad value `{l}`")))
        })
        .collect()
}

pub fn parse_clustering_sidecar(text: &str, k: Option<usize>) -> Result<Clustering, ParseError> {
    let assign = parse_sidecar_values(text)?;
    let k = k.unwrap_or_else(|| assign.iter().max().map_or(1, |m| m + 1));
    Clustering::new(k, assign).map_err(|e| ParseError::GroundTruth(e.to_string()))
}

pub fn parse_permutation_sidecar(text: &str) -> Result<Permutation, ParseError> {
    Permutation::from_ranks(parse_sidecar_values(text)?)
        .map_err(|e| ParseError::GroundTruth(e.to_string()))
}
