//! Plain-text graph exports.
//!
//! Edge list: header `# n=<n> edges=<E>`, then one `u v` line per edge with
//! `u < v`, sorted. Memberships: one line per group with space-separated
//! member indices (empty line for an empty group).

use std::io::{BufRead, Write};

use super::{BipartiteGraph, IntersectionGraph};
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(g: &IntersectionGraph, mut out: W) -> Result<()> {
    writeln!(out, "# n={} edges={}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<IntersectionGraph> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))??;
    let (n, declared) = parse_header(&header)?;
    let mut edges = Vec::with_capacity(declared);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: expected `u v`", lineno + 2)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 2)));
        }
        edges.push((u, v));
    }
    let g = IntersectionGraph::from_edges(n, edges)?;
    if g.edge_count() != declared {
        return Err(Error::Parse(format!(
            "header declares {declared} edges, found {}",
            g.edge_count()
        )));
    }
    Ok(g)
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad edge-list header `{header}`"));
    let rest = header.strip_prefix('#').ok_or_else(bad)?;
    let mut n = None;
    let mut edges = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("edges=") {
            edges = v.parse().ok();
        }
    }
    Ok((n.ok_or_else(bad)?, edges.ok_or_else(bad)?))
}

pub fn write_memberships<W: Write>(b: &BipartiteGraph, mut out: W) -> Result<()> {
    for group in b.memberships() {
        let line: Vec<String> = group.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_memberships<R: BufRead>(n: usize, input: R) -> Result<BipartiteGraph> {
    let mut groups = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let members = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad index `{t}`", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(members);
    }
    BipartiteGraph::from_memberships(n, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{project, sample_bipartite, GraphParams};

    #[test]
    fn edge_list_format() {
        let g = IntersectionGraph::from_edges(4, [(2, 1), (0, 3), (0, 1)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# n=4 edges=3\n0 1\n0 3\n1 2\n");
    }

    #[test]
    fn roundtrip_sampled_graph() {
        let params = GraphParams::new(300, 0.5, 3.0).unwrap();
        let b = sample_bipartite(&params, 4).unwrap();
        let g = project(&b);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(read_edge_list(buf.as_slice()).unwrap(), g);

        let mut buf = Vec::new();
        write_memberships(&b, &mut buf).unwrap();
        let back = read_memberships(300, buf.as_slice()).unwrap();
        assert_eq!(back.memberships(), b.memberships());
    }

    #[test]
    fn rejects_malformed_edge_lists() {
        assert!(read_edge_list("".as_bytes()).is_err());
        assert!(read_edge_list("n=3 edges=0\n".as_bytes()).is_err());
        assert!(read_edge_list("# n=3 edges=1\n0 x\n".as_bytes()).is_err());
        assert!(read_edge_list("# n=3 edges=2\n0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("# n=3 edges=1\n0 5\n".as_bytes()).is_err());
    }
}
