//! Ball-mapper graphs over point clouds of coefficient vectors.
//!
//! Greedy ε-ball cover in input order: a point farther than ε (Euclidean)
//! from every existing anchor becomes a new anchor.  Vertices are anchors
//! sized by how many points their ball covers; edges join anchors whose
//! covered sets intersect.  The anchor order is the input order, so the graph
//! is deterministic and reproducible bit-for-bit for a fixed point order.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// ε must be strictly positive.
    NonPositiveEpsilon,
    /// All points must share one dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// `color_by` values must align one-to-one with the points.
    LengthMismatch { points: usize, values: usize },
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::NonPositiveEpsilon => write!(f, "epsilon must be positive"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "point dimension {got}, expected {expected}")
            }
            Error::LengthMismatch { points, values } => {
                write!(f, "{values} color values for {points} points")
            }
        }
    }
}

impl std::error::Error for Error {}

/// Per-vertex color statistics over the covered points' scalar values.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// A ball-mapper graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MapperGraph {
    /// point index of each anchor, in creation (= input) order
    pub anchors: Vec<usize>,
    /// per-anchor sorted list of covered point indices
    pub covered: Vec<Vec<usize>>,
    /// anchor-id pairs (u < v) with intersecting covered sets
    pub edges: Vec<(usize, usize)>,
    /// optional per-vertex color statistics (see [`MapperGraph::color_by`])
    pub colors: Option<Vec<ColorStats>>,
    epsilon: f64,
    num_points: usize,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Build the greedy ε-ball cover of `points` in input order.
pub fn build(points: &[Vec<f64>], epsilon: f64) -> Result<MapperGraph, Error> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon);
    }
    let dim = points.first().map_or(0, |p| p.len());
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.len(),
        });
    }
    let mut anchors: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !anchors.iter().any(|&a| dist(p, &points[a]) <= epsilon) {
            anchors.push(i);
        }
    }
    let covered: Vec<Vec<usize>> = anchors
        .iter()
        .map(|&a| {
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| dist(p, &points[a]) <= epsilon)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    // Edge iff the two ε-balls intersect, i.e. the anchors are within 2ε.
    // Any point covered by both anchors witnesses this, so covered-set
    // intersection always implies an edge; the geometric test additionally
    // connects touching balls whose overlap holds no sample point (needed for
    // sparse clouds such as points spread along a circle).
    let mut edges = Vec::new();
    for u in 0..anchors.len() {
        for v in u + 1..anchors.len() {
            if dist(&points[anchors[u]], &points[anchors[v]]) <= 2.0 * epsilon {
                edges.push((u, v));
            }
        }
    }
    Ok(MapperGraph {
        anchors,
        covered,
        edges,
        colors: None,
        epsilon,
        num_points: points.len(),
    })
}

impl MapperGraph {
    pub fn num_vertices(&self) -> usize {
        self.anchors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn vertex_size(&self, v: usize) -> usize {
        self.covered[v].len()
    }

    /// Attach per-vertex mean/min/max statistics of a per-point scalar.
    pub fn color_by(&mut self, values: &[f64]) -> Result<(), Error> {
        if values.len() != self.num_points {
            return Err(Error::LengthMismatch {
                points: self.num_points,
                values: values.len(),
            });
        }
        self.colors = Some(
            self.covered
                .iter()
                .map(|c| {
                    let vals: Vec<f64> = c.iter().map(|&i| values[i]).collect();
                    ColorStats {
                        mean: vals.iter().sum::<f64>() / vals.len() as f64,
                        min: vals.iter().copied().fold(f64::INFINITY, f64::min),
                        max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    }
                })
                .collect(),
        );
        Ok(())
    }

    /// Record file: `vertex <id> size=<n> color=<mean|-> members=<i,j,…>`
    /// lines followed by `edge <u> <v>` lines.
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        for v in 0..self.num_vertices() {
            let color = match &self.colors {
                Some(c) => format!("{:.6}", c[v].mean),
                None => "-".to_string(),
            };
            let members: Vec<String> = self.covered[v].iter().map(|i| i.to_string()).collect();
            let _ = writeln!(
                s,
                "vertex {v} size={} color={color} members={}",
                self.covered[v].len(),
                members.join(",")
            );
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "edge {u} {v}");
        }
        s
    }

    /// Deterministic force-free SVG layout: vertices sorted by size
    /// descending, the largest at the center, the rest on concentric shells.
    pub fn to_svg(&self) -> String {
        let n = self.num_vertices();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.covered[v].len()), v));
        let width = 800.0;
        let center = width / 2.0;
        let mut pos = vec![(center, center); n];
        let mut placed = 0usize;
        let mut shell = 0usize;
        while placed < n {
            let cap = if shell == 0 { 1 } else { 8 * shell };
            let radius = shell as f64 * 80.0;
            let count = cap.min(n - placed);
            for k in 0..count {
                let v = order[placed + k];
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                pos[v] = (center + radius * theta.cos(), center + radius * theta.sin());
            }
            placed += count;
            shell += 1;
        }
        let (cmin, cmax) = match &self.colors {
            Some(c) => c
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    (lo.min(s.mean), hi.max(s.mean))
                }),
            None => (0.0, 0.0),
        };
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{width}\" viewBox=\"0 0 {width} {width}\">\n"
        );
        for &(u, v) in &self.edges {
            let _ = writeln!(
                s,
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-width=\"1\"/>",
                pos[u].0, pos[u].1, pos[v].0, pos[v].1
            );
        }
        for v in 0..n {
            let r = 4.0 + 3.0 * (self.covered[v].len() as f64).sqrt();
            let fill = match &self.colors {
                Some(c) if cmax > cmin => {
                    let t = (c[v].mean - cmin) / (cmax - cmin);
                    let red = (255.0 * t).round() as u8;
                    let blue = (255.0 * (1.0 - t)).round() as u8;
                    format!("rgb({red},80,{blue})")
                }
                _ => "rgb(80,80,200)".to_string(),
            };
            let _ = writeln!(
                s,
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r:.2}\" fill=\"{fill}\" stroke=\"#333\"/>",
                pos[v].0, pos[v].1
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// ε-sweep: `(ε, vertex count, edge count)` per requested radius.
pub fn sweep(points: &[Vec<f64>], epsilons: &[f64]) -> Result<Vec<(f64, usize, usize)>, Error> {
    epsilons
        .iter()
        .map(|&e| build(points, e).map(|g| (e, g.num_vertices(), g.num_edges())))
        .collect()
}
