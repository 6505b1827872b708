//! SVG rendering: one glyph per vertex with area proportional to the vertex
//! weight, glyph shape cycling by cluster id, and edges drawn with opacity
//! proportional to their weight. Output bytes are deterministic for fixed
//! inputs.

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::layout::Layout;

const CANVAS: f64 = 1000.0;
const SHAPE_COUNT: usize = 6;
const COLORS: [&str; 8] = [
    "#4878cf", "#d65f5f", "#59a14f", "#b07aa1", "#e49444", "#5d9ca6", "#8a8a3c", "#6d6d6d",
];

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

/// Area of vertex v in model units; weight-0 vertices get a floor so they
/// stay visible.
fn glyph_areas(net: &Network) -> Vec<f64> {
    let positive: Vec<f64> = net
        .vertex_weights()
        .iter()
        .copied()
        .filter(|&w| w > 0.0)
        .collect();
    let mean = if positive.is_empty() {
        1.0
    } else {
        positive.iter().sum::<f64>() / positive.len() as f64
    };
    let floor = 0.05 * mean;
    net.vertex_weights()
        .iter()
        .map(|&w| if w > 0.0 { w } else { floor })
        .collect()
}

fn polygon_points(cx: f64, cy: f64, area: f64, sides: usize, rotate: f64) -> String {
    let circumradius =
        (2.0 * area / (sides as f64 * (2.0 * std::f64::consts::PI / sides as f64).sin())).sqrt();
    (0..sides)
        .map(|i| {
            let angle = rotate + 2.0 * std::f64::consts::PI * i as f64 / sides as f64;
            format!(
                "{},{}",
                fmt(cx + circumradius * angle.sin()),
                fmt(cy - circumradius * angle.cos())
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn glyph(cx: f64, cy: f64, area: f64, shape: usize, color: &str) -> String {
    match shape {
        0 => {
            let side = area.sqrt();
            format!(
                r#"<rect x="{}" y="{}" width="{s}" height="{s}" fill="{color}"/>"#,
                fmt(cx - side / 2.0),
                fmt(cy - side / 2.0),
                s = fmt(side),
            )
        }
        1 => {
            let radius = (area / std::f64::consts::PI).sqrt();
            format!(
                r#"<circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
                fmt(cx),
                fmt(cy),
                fmt(radius),
            )
        }
        2 => format!(
            r#"<polygon points="{}" fill="{color}"/>"#,
            polygon_points(cx, cy, area, 3, 0.0)
        ),
        3 => format!(
            r#"<polygon points="{}" fill="{color}"/>"#,
            polygon_points(cx, cy, area, 4, 0.0)
        ),
        4 => format!(
            r#"<polygon points="{}" fill="{color}"/>"#,
            polygon_points(cx, cy, area, 5, 0.0)
        ),
        _ => format!(
            r#"<polygon points="{}" fill="{color}"/>"#,
            polygon_points(cx, cy, area, 6, std::f64::consts::PI / 6.0)
        ),
    }
}

/// Render a network layout, optionally styled by a clustering (shape is the
/// primary channel, color the redundant secondary one).
pub fn render_svg(net: &Network, layout: &Layout, clustering: Option<&Clustering>) -> Result<String> {
    if layout.vertex_count() != net.vertex_count() {
        return Err(Error::invalid_parameter(
            "layout and network have different vertex counts",
        ));
    }
    if let Some(c) = clustering {
        if c.vertex_count() != net.vertex_count() {
            return Err(Error::InvalidClustering {
                reason: "clustering and network sizes differ".to_string(),
            });
        }
    }
    let n = net.vertex_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }

    let planar: Vec<(f64, f64)> = (0..n)
        .map(|v| {
            let p = layout.position(v);
            (p[0], if layout.dimension() > 1 { p[1] } else { 0.0 })
        })
        .collect();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &planar {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let extent = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let scale = CANVAS / extent;

    // Model-unit glyph areas sized against the layout extent.
    let unit = extent / (4.0 * (n as f64).sqrt());
    let raw_areas = glyph_areas(net);
    let mean_area = raw_areas.iter().sum::<f64>() / n as f64;
    let areas: Vec<f64> = raw_areas
        .iter()
        .map(|a| a / mean_area * unit * unit * scale * scale)
        .collect();

    let to_canvas = |x: f64, y: f64| ((x - min_x) * scale, (max_y - y) * scale);

    // Canvas-space bounds including glyph radii, then a 5% margin.
    let mut lo_x = f64::INFINITY;
    let mut hi_x = f64::NEG_INFINITY;
    let mut lo_y = f64::INFINITY;
    let mut hi_y = f64::NEG_INFINITY;
    for (v, &(x, y)) in planar.iter().enumerate() {
        let (cx, cy) = to_canvas(x, y);
        let radius = areas[v].sqrt();
        lo_x = lo_x.min(cx - radius);
        hi_x = hi_x.max(cx + radius);
        lo_y = lo_y.min(cy - radius);
        hi_y = hi_y.max(cy + radius);
    }
    let margin = 0.05 * (hi_x - lo_x).max(hi_y - lo_y).max(1.0);
    let view = format!(
        "{} {} {} {}",
        fmt(lo_x - margin),
        fmt(lo_y - margin),
        fmt(hi_x - lo_x + 2.0 * margin),
        fmt(hi_y - lo_y + 2.0 * margin),
    );

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view}\">\n"
    ));

    let max_edge = net
        .edges()
        .iter()
        .map(|e| e.weight)
        .fold(0.0f64, f64::max);
    if max_edge > 0.0 {
        let stroke = fmt(unit * scale * 0.2);
        for e in net.edges() {
            if e.u == e.v {
                continue;
            }
            let (x1, y1) = to_canvas(planar[e.u].0, planar[e.u].1);
            let (x2, y2) = to_canvas(planar[e.v].0, planar[e.v].1);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\" stroke-width=\"{stroke}\" stroke-opacity=\"{}\"/>\n",
                fmt(x1),
                fmt(y1),
                fmt(x2),
                fmt(y2),
                fmt(e.weight / max_edge),
            ));
        }
    }

    for (v, &(x, y)) in planar.iter().enumerate() {
        let (cx, cy) = to_canvas(x, y);
        let cluster = clustering.map_or(0, |c| c.cluster_of(v));
        out.push_str(&glyph(
            cx,
            cy,
            areas[v],
            cluster % SHAPE_COUNT,
            COLORS[cluster % COLORS.len()],
        ));
        out.push('\n');
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexWeightMode;

    fn simple_net() -> (Network, Layout) {
        let net = Network::from_labeled_edges(
            &[("a", "b", 1.0), ("b", "c", 2.0), ("a", "c", 0.5)],
            VertexWeightMode::Degree,
        )
        .unwrap();
        let layout =
            Layout::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.8]]).unwrap();
        (net, layout)
    }

    #[test]
    fn single_vertex_renders_one_glyph() {
        let net = Network::from_parts(vec!["a".into()], vec![1.0], vec![]).unwrap();
        let layout = Layout::from_rows(vec![vec![0.0, 0.0]]).unwrap();
        let svg = render_svg(&net, &layout, None).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains("viewBox"));
    }

    #[test]
    fn glyph_area_tracks_vertex_weight() {
        let net = Network::from_labeled_edges(
            &[("a", "b", 1.0)],
            VertexWeightMode::Explicit(vec![("a".into(), 4.0), ("b".into(), 1.0)]),
        )
        .unwrap();
        let areas = glyph_areas(&net);
        let ratio = areas[0] / areas[1];
        assert!((ratio - 4.0).abs() < 0.04, "ratio {ratio}");
        // Weight 0 gets the visibility floor, not zero area.
        let with_zero = Network::from_labeled_edges(
            &[("a", "b", 1.0)],
            VertexWeightMode::Explicit(vec![("a".into(), 0.0), ("b".into(), 1.0)]),
        )
        .unwrap();
        assert!(glyph_areas(&with_zero)[0] > 0.0);
    }

    #[test]
    fn clusters_get_distinct_shapes() {
        let (net, layout) = simple_net();
        let clustering = Clustering::new(vec![0, 1, 2]).unwrap();
        let svg = render_svg(&net, &layout, Some(&clustering)).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn output_is_deterministic() {
        let (net, layout) = simple_net();
        let a = render_svg(&net, &layout, None).unwrap();
        let b = render_svg(&net, &layout, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn edges_scale_opacity_by_weight() {
        let (net, layout) = simple_net();
        let svg = render_svg(&net, &layout, None).unwrap();
        assert!(svg.contains("stroke-opacity=\"1.000\""));
        assert!(svg.contains("stroke-opacity=\"0.250\""));
    }
}
