//! Text formats for graphs and matrices.
//!
//! Digraph format: first non-comment line `n m`, then `m` lines
//! `tail head weight` with the weight optional (default 1.0). Lines starting
//! with `#` are comments. The undirected format is identical except each
//! line is an unordered pair. Matrix format: first line `n`, then `n` rows
//! of `n` decimal entries where 0 means "no edge".

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::graph::{GraphError, UndirectedGraph, WeightedDigraph};
use crate::matrix::{LogMatrix, MatrixError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("{0}")]
    Matrix(#[from] MatrixError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Parse {
        line,
        msg: msg.into(),
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_edge_lines(text: &str) -> Result<(u32, Vec<(u32, u32, f64, usize)>), FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = match lines.next() {
        Some(x) => x,
        None => return parse_err(1, "empty file: expected header `n m`"),
    };
    let mut parts = header.split_whitespace();
    let n: u32 = match parts.next().map(str::parse) {
        Some(Ok(v)) => v,
        _ => return parse_err(ln, format!("expected header `n m`, got `{header}`")),
    };
    let m: usize = match parts.next().map(str::parse) {
        Some(Ok(v)) => v,
        _ => return parse_err(ln, format!("expected header `n m`, got `{header}`")),
    };
    if parts.next().is_some() {
        return parse_err(ln, format!("trailing tokens in header `{header}`"));
    }

    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut tok = line.split_whitespace();
        let tail: u32 = match tok.next().map(str::parse) {
            Some(Ok(v)) => v,
            _ => return parse_err(ln, format!("expected `tail head [weight]`, got `{line}`")),
        };
        let head: u32 = match tok.next().map(str::parse) {
            Some(Ok(v)) => v,
            _ => return parse_err(ln, format!("expected `tail head [weight]`, got `{line}`")),
        };
        let weight: f64 = match tok.next() {
            None => 1.0,
            Some(w) => match w.parse() {
                Ok(v) => v,
                Err(_) => return parse_err(ln, format!("bad weight `{w}`")),
            },
        };
        if tok.next().is_some() {
            return parse_err(ln, format!("trailing tokens in edge line `{line}`"));
        }
        edges.push((tail, head, weight, ln));
    }
    if edges.len() != m {
        return parse_err(
            0,
            format!("header declared {m} edges but file contains {}", edges.len()),
        );
    }
    Ok((n, edges))
}

/// Validate one edge line cheaply so duplicate detection is the only check
/// left to the graph constructor.
fn check_endpoints(n: u32, tail: u32, head: u32, ln: usize) -> Result<(), FormatError> {
    if tail < 1 || tail > n {
        return Err(FormatError::Graph {
            line: ln,
            source: GraphError::VertexOutOfRange(tail, n),
        });
    }
    if head < 1 || head > n {
        return Err(FormatError::Graph {
            line: ln,
            source: GraphError::VertexOutOfRange(head, n),
        });
    }
    if tail == head {
        return Err(FormatError::Graph {
            line: ln,
            source: GraphError::SelfLoop(tail),
        });
    }
    Ok(())
}

fn find_duplicate_line(keys: &mut Vec<(u32, u32, usize)>) -> Option<(u32, u32, usize)> {
    keys.sort_unstable();
    keys.windows(2)
        .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        .map(|w| (w[1].0, w[1].1, w[1].2))
}

pub fn parse_digraph(text: &str) -> Result<WeightedDigraph, FormatError> {
    let (n, edges) = parse_edge_lines(text)?;
    let mut acc: Vec<(u32, u32, f64)> = Vec::with_capacity(edges.len());
    let mut keys: Vec<(u32, u32, usize)> = Vec::with_capacity(edges.len());
    for (tail, head, weight, ln) in edges {
        check_endpoints(n, tail, head, ln)?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(FormatError::Graph {
                line: ln,
                source: GraphError::BadWeight(tail, head, weight),
            });
        }
        keys.push((tail, head, ln));
        acc.push((tail, head, weight));
    }
    if let Some((t, h, ln)) = find_duplicate_line(&mut keys) {
        return Err(FormatError::Graph {
            line: ln,
            source: GraphError::DuplicateEdge(t, h),
        });
    }
    WeightedDigraph::new(n, acc).map_err(|source| FormatError::Graph { line: 0, source })
}

pub fn parse_undirected(text: &str) -> Result<UndirectedGraph, FormatError> {
    let (n, edges) = parse_edge_lines(text)?;
    let mut acc: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
    let mut keys: Vec<(u32, u32, usize)> = Vec::with_capacity(edges.len());
    for (a, b, w, ln) in edges {
        if w != 1.0 {
            return parse_err(ln, "undirected input does not take weights");
        }
        check_endpoints(n, a, b, ln)?;
        keys.push((a.min(b), a.max(b), ln));
        acc.push((a, b));
    }
    if let Some((a, b, ln)) = find_duplicate_line(&mut keys) {
        return Err(FormatError::Graph {
            line: ln,
            source: GraphError::DuplicateEdge(a, b),
        });
    }
    UndirectedGraph::new(n, acc).map_err(|source| FormatError::Graph { line: 0, source })
}

pub fn write_digraph(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.order(), g.edge_count());
    for e in g.edges() {
        if e.weight == 1.0 {
            let _ = writeln!(out, "{} {}", e.tail, e.head);
        } else {
            let _ = writeln!(out, "{} {} {}", e.tail, e.head, e.weight);
        }
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<LogMatrix, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = match lines.next() {
        Some(x) => x,
        None => return parse_err(1, "empty file: expected matrix order"),
    };
    let n: usize = match header.trim().parse() {
        Ok(v) => v,
        Err(_) => return parse_err(ln, format!("expected matrix order, got `{header}`")),
    };
    let mut values = Vec::with_capacity(n * n);
    let mut rows = 0usize;
    for (ln, line) in lines {
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        let row = match row {
            Ok(r) => r,
            Err(_) => return parse_err(ln, format!("bad matrix row `{line}`")),
        };
        if row.len() != n {
            return parse_err(ln, format!("expected {n} entries, got {}", row.len()));
        }
        values.extend(row);
        rows += 1;
        if rows == n {
            break;
        }
    }
    if rows != n {
        return parse_err(0, format!("expected {n} rows, got {rows}"));
    }
    Ok(LogMatrix::from_values(n, &values)?)
}

pub fn write_matrix(m: &LogMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", m.order());
    for i in 0..m.order() {
        let row: Vec<String> = (0..m.order())
            .map(|j| {
                if m.is_zero(i, j) {
                    "0".to_string()
                } else {
                    format!("{}", m.value(i, j))
                }
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_digraph(path: &Path) -> Result<WeightedDigraph, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_digraph(&text)
}

pub fn read_undirected(path: &Path) -> Result<UndirectedGraph, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_undirected(&text)
}

pub fn read_matrix(path: &Path) -> Result<LogMatrix, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_round_trip() {
        let text = "# demo\n3 3\n1 2\n2 3 0.5\n3 1 2\n";
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.edge_count(), 3);
        let again = parse_digraph(&write_digraph(&g)).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_digraph("3 2\n1 2\nbroken line\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 3, .. }), "{err}");
        let err = parse_digraph("3 2\n1 2\n1 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Graph { line: 3, .. }), "{err}");
        let err = parse_digraph("3 2\n1 2\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { .. }), "{err}");
    }

    #[test]
    fn matrix_round_trip() {
        let text = "3\n0 1 0.5\n2 0 0\n0 3 0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.order(), 3);
        assert!(m.is_zero(0, 0));
        assert!((m.value(0, 2) - 0.5).abs() < 1e-15);
        let again = parse_matrix(&write_matrix(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn undirected_rejects_weights() {
        let err = parse_undirected("3 1\n1 2 0.5\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }));
        let g = parse_undirected("3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2), (2, 3)]);
    }
}
