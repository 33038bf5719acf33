//! Text formats.
//!
//! Snapshot file: first line `n=<count>`, then one `<u> <v>` edge per line.
//! Delta file: `+ <u> <v>` and `- <u> <v>` lines. Series directory:
//! `base.edges` plus `step_0001.delta`, `step_0002.delta`, ... read in
//! lexicographic order. `#` starts a comment line in every format.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{check_edge, Edge, EdgeDelta, EvolvingGraph, GraphError, Snapshot, Vertex};

const BASE_FILE: &str = "base.edges";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_vertex(tok: &str, line: usize) -> Result<Vertex, GraphError> {
    tok.parse::<Vertex>()
        .map_err(|_| parse_err(line, format!("invalid vertex id {tok:?}")))
}

fn parse_pair(body: &str, line: usize) -> Result<Edge, GraphError> {
    let mut parts = body.split(' ');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(parse_err(line, format!("expected `<u> <v>`, got {body:?}")));
    };
    Ok(Edge::new(parse_vertex(a, line)?, parse_vertex(b, line)?))
}

fn checked(e: Edge, n: usize, line: usize) -> Result<Edge, GraphError> {
    check_edge(e, n, Some(line))?;
    Ok(e)
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot, GraphError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n=<count>` header"))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(hline, format!("expected `n=<count>`, got {header:?}")))?;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, body) in lines {
        let e = checked(parse_pair(body, line)?, n, line)?;
        if !seen.insert(e) {
            return Err(GraphError::DuplicateEdge {
                edge: e,
                line: Some(line),
            });
        }
        edges.push(e);
    }
    Snapshot::from_edges(n, edges)
}

pub fn parse_delta(text: &str, n: usize) -> Result<EdgeDelta, GraphError> {
    let mut inserts = Vec::new();
    let mut deletes = Vec::new();
    let mut ins_seen = HashSet::new();
    let mut del_seen = HashSet::new();
    for (line, body) in content_lines(text) {
        let (sign, rest) = body.split_at(1.min(body.len()));
        let rest = rest
            .strip_prefix(' ')
            .ok_or_else(|| parse_err(line, format!("expected `+ <u> <v>` or `- <u> <v>`, got {body:?}")))?;
        let e = checked(parse_pair(rest, line)?, n, line)?;
        let (list, seen, other) = match sign {
            "+" => (&mut inserts, &mut ins_seen, &del_seen),
            "-" => (&mut deletes, &mut del_seen, &ins_seen),
            _ => return Err(parse_err(line, format!("unknown delta sign {sign:?}"))),
        };
        if !seen.insert(e) {
            return Err(GraphError::DuplicateEdge {
                edge: e,
                line: Some(line),
            });
        }
        if other.contains(&e) {
            return Err(GraphError::InsertDeleteOverlap(e));
        }
        list.push(e);
    }
    Ok(EdgeDelta { inserts, deletes })
}

fn read(path: &Path) -> Result<String, GraphError> {
    fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn in_file(path: &Path) -> impl FnOnce(GraphError) -> GraphError + '_ {
    move |e| GraphError::File {
        path: path.display().to_string(),
        source: Box::new(e),
    }
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Snapshot, GraphError> {
    let path = path.as_ref();
    parse_snapshot(&read(path)?).map_err(in_file(path))
}

pub fn load_delta(path: impl AsRef<Path>, n: usize) -> Result<EdgeDelta, GraphError> {
    let path = path.as_ref();
    parse_delta(&read(path)?, n).map_err(in_file(path))
}

pub fn write_snapshot(s: &Snapshot) -> String {
    let mut out = format!("n={}\n", s.n());
    for e in s.edges() {
        let _ = writeln!(out, "{} {}", e.lo(), e.hi());
    }
    out
}

pub fn write_delta(d: &EdgeDelta) -> String {
    let mut out = String::new();
    for e in &d.inserts {
        let _ = writeln!(out, "+ {} {}", e.lo(), e.hi());
    }
    for e in &d.deletes {
        let _ = writeln!(out, "- {} {}", e.lo(), e.hi());
    }
    out
}

/// Reads a series directory.
pub fn load_series(dir: impl AsRef<Path>) -> Result<EvolvingGraph, GraphError> {
    let dir = dir.as_ref();
    let base = load_snapshot(dir.join(BASE_FILE))?;
    let io_err = |source| GraphError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let name = entry.map_err(io_err)?.file_name().to_string_lossy().into_owned();
        if name.starts_with("step_") && name.ends_with(".delta") {
            names.push(name);
        }
    }
    names.sort();
    let deltas = names
        .iter()
        .map(|name| load_delta(dir.join(name), base.n()))
        .collect::<Result<Vec<_>, _>>()?;
    EvolvingGraph::new(base, deltas)
}

/// Writes a series directory, creating it when missing.
pub fn save_series(dir: impl AsRef<Path>, g: &EvolvingGraph) -> Result<(), GraphError> {
    let dir = dir.as_ref();
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| GraphError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let base = dir.join(BASE_FILE);
    fs::write(&base, write_snapshot(g.base())).map_err(io_err(&base))?;
    for (i, d) in g.deltas().iter().enumerate() {
        let path = dir.join(format!("step_{:04}.delta", i + 1));
        fs::write(&path, write_delta(d)).map_err(io_err(&path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let s = parse_snapshot("n=3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(s.m(), 3);
        assert_eq!(s.degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn five_vertex_degrees() {
        let s = parse_snapshot("n=5\n0 1\n1 2\n0 2\n0 3\n3 4").unwrap();
        assert_eq!(s.degrees(), vec![3, 2, 2, 2, 1]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_snapshot("# header comment\nn=2\n\n# edge\n0 1\n").unwrap();
        assert_eq!(s.m(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_snapshot("n=3\n0 1\n2 2") {
            Err(GraphError::SelfLoop { vertex: 2, line: Some(3) }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_snapshot("n=3\n0 1\n1 0") {
            Err(GraphError::DuplicateEdge { line: Some(3), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_snapshot("n=3\n0 5") {
            Err(GraphError::VertexOutOfRange { vertex: 5, line: Some(2), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_snapshot("n=3\n0  1") {
            Err(GraphError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_snapshot("0 1"), Err(GraphError::Parse { line: 1, .. })));
    }

    #[test]
    fn delta_sides() {
        let d = parse_delta("- 0 1\n+ 1 2\n# c\n+ 0 2\n", 3).unwrap();
        assert_eq!(d.inserts, vec![Edge::new(1, 2), Edge::new(0, 2)]);
        assert_eq!(d.deletes, vec![Edge::new(0, 1)]);
        assert!(matches!(parse_delta("* 0 1", 3), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_delta("+ 0 1\n- 1 0", 3),
            Err(GraphError::InsertDeleteOverlap(_))
        ));
    }
}
