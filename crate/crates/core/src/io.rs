//! Tab-separated file formats: edge lists, vertex weights, layouts, and
//! clusterings. Lines starting with `#` and blank lines are ignored; LF and
//! CRLF both work. Numbers are written in scientific notation with nine
//! fractional digits so files diff reproducibly and round-trip well within
//! 1e-9 relative.

use std::path::Path;

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::layout::Layout;

/// Fixed-precision scientific formatting used by all numeric columns.
pub fn format_number(x: f64) -> String {
    format!("{x:.9e}")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim().is_empty() && !line.starts_with('#'))
}

fn parse_field_f64(line: usize, field: &str, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} `{field}`"),
    })
}

/// Parse `source<TAB>target[<TAB>weight]` lines; the weight defaults to 1.
pub fn parse_edge_list(text: &str) -> Result<Vec<(String, String, f64)>> {
    let mut edges = Vec::new();
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected `source<TAB>target[<TAB>weight]`, found {} field(s)",
                    fields.len()
                ),
            });
        }
        let weight = match fields.get(2) {
            Some(field) => parse_field_f64(line_no, field, "edge weight")?,
            None => 1.0,
        };
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("edge weight {weight} must be a finite nonnegative number"),
            });
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty vertex label".to_string(),
            });
        }
        edges.push((fields[0].to_string(), fields[1].to_string(), weight));
    }
    Ok(edges)
}

/// Parse `label<TAB>weight` lines.
pub fn parse_vertex_weights(text: &str) -> Result<Vec<(String, f64)>> {
    let mut weights = Vec::new();
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `label<TAB>weight`, found {} field(s)", fields.len()),
            });
        }
        let weight = parse_field_f64(line_no, fields[1], "vertex weight")?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("vertex weight {weight} must be a finite nonnegative number"),
            });
        }
        if fields[0].is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty vertex label".to_string(),
            });
        }
        weights.push((fields[0].to_string(), weight));
    }
    Ok(weights)
}

/// Parse `label<TAB>x<TAB>y[<TAB>z...]` lines; every row must have the same
/// dimension.
pub fn parse_layout(text: &str) -> Result<Vec<(String, Vec<f64>)>> {
    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    let mut dimension = None;
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `label<TAB>x[<TAB>y...]`".to_string(),
            });
        }
        let coords = fields[1..]
            .iter()
            .map(|f| parse_field_f64(line_no, f, "coordinate"))
            .collect::<Result<Vec<f64>>>()?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                message: "non-finite coordinate".to_string(),
            });
        }
        match dimension {
            None => dimension = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("row has {} coordinates, earlier rows {d}", coords.len()),
                })
            }
            _ => {}
        }
        rows.push((fields[0].to_string(), coords));
    }
    Ok(rows)
}

/// Parse `label<TAB>cluster_id` lines.
pub fn parse_clustering(text: &str) -> Result<Vec<(String, usize)>> {
    let mut rows = Vec::new();
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected `label<TAB>cluster_id`, found {} field(s)",
                    fields.len()
                ),
            });
        }
        let id = fields[1].trim().parse::<usize>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("cannot parse cluster id `{}`", fields[1]),
        })?;
        rows.push((fields[0].to_string(), id));
    }
    Ok(rows)
}

/// Match labeled rows against a network's vertex set, reporting missing and
/// unexpected labels together.
fn align_labels<T: Clone>(net: &Network, rows: &[(String, T)]) -> Result<Vec<T>> {
    let mut values: Vec<Option<T>> = vec![None; net.vertex_count()];
    let mut extra = Vec::new();
    for (label, value) in rows {
        match net.index_of(label) {
            Some(v) => {
                if values[v].is_some() {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("label `{label}` listed twice"),
                    });
                }
                values[v] = Some(value.clone());
            }
            None => extra.push(label.clone()),
        }
    }
    let missing: Vec<String> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| net.label(i).to_string())
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::LabelMismatch { missing, extra });
    }
    Ok(values.into_iter().map(|v| v.unwrap()).collect())
}

/// Align parsed layout rows to a network's vertex order.
pub fn layout_for_network(net: &Network, rows: &[(String, Vec<f64>)]) -> Result<Layout> {
    let positions = align_labels(net, rows)?;
    Layout::from_rows(positions)
}

/// Align parsed clustering rows to a network's vertex order, compacting ids.
pub fn clustering_for_network(net: &Network, rows: &[(String, usize)]) -> Result<Clustering> {
    let ids = align_labels(net, rows)?;
    Ok(Clustering::from_labels(&ids))
}

pub fn format_edge_list(net: &Network) -> String {
    let mut out = String::new();
    for e in net.edges() {
        out.push_str(net.label(e.u));
        out.push('\t');
        out.push_str(net.label(e.v));
        out.push('\t');
        out.push_str(&format_number(e.weight));
        out.push('\n');
    }
    out
}

pub fn format_vertex_weights(net: &Network) -> String {
    let mut out = String::new();
    for v in 0..net.vertex_count() {
        out.push_str(net.label(v));
        out.push('\t');
        out.push_str(&format_number(net.vertex_weight(v)));
        out.push('\n');
    }
    out
}

pub fn format_layout(net: &Network, layout: &Layout) -> String {
    let mut out = String::new();
    for v in 0..net.vertex_count() {
        out.push_str(net.label(v));
        for c in layout.position(v) {
            out.push('\t');
            out.push_str(&format_number(*c));
        }
        out.push('\n');
    }
    out
}

pub fn format_clustering(net: &Network, clustering: &Clustering) -> String {
    let mut out = String::new();
    for v in 0..net.vertex_count() {
        out.push_str(net.label(v));
        out.push('\t');
        out.push_str(&clustering.cluster_of(v).to_string());
        out.push('\n');
    }
    out
}

pub fn read_to_string(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_string(path: &Path, content: &str) -> Result<()> {
    Ok(std::fs::write(path, content)?)
}
