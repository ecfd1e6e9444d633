use std::path::Path;

use crate::{Graph, GraphError, NodeId};

/// Parses `u v` pairs, one per line. Blank lines and lines starting with `#`
/// are skipped.
pub fn parse_edge_list(text: &str) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next = || -> Result<NodeId, GraphError> {
            let tok = fields.next().ok_or(GraphError::Parse { line: i + 1, msg: "expected two node ids".into() })?;
            tok.parse().map_err(|_| GraphError::Parse { line: i + 1, msg: format!("bad node id {tok:?}") })
        };
        let u = next()?;
        let v = next()?;
        if fields.next().is_some() {
            return Err(GraphError::Parse { line: i + 1, msg: "trailing fields".into() });
        }
        edges.push((u, v));
    }
    Ok(edges)
}

pub fn read_edge_list(path: &Path, delta: usize) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    Graph::from_edges(&parse_edge_list(&text)?, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let edges = parse_edge_list("# square\n0 1\n1 2\n\n2 3\n3 0\n").unwrap();
        assert_eq!(edges, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("0\n").is_err());
    }
}
