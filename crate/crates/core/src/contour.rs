//! Iso-value curve extraction on rectangular grids (marching squares).
//!
//! Crossings are linearly interpolated on grid edges. Saddle squares are
//! resolved with the mean of the four corner values. Squares touching a
//! missing value produce nothing.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::Point2;

/// Scalar samples on the nodes of a rectilinear grid, row-major with rows
/// along `ys`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl ScalarGrid {
    pub fn from_fn(xs: Vec<f64>, ys: Vec<f64>, mut f: impl FnMut(f64, f64) -> Option<f64>) -> Self {
        let values = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).map(|(x, y)| f(x, y)).collect();
        ScalarGrid { xs, ys, values }
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.xs.len() + ix].filter(|v| v.is_finite())
    }

    #[inline]
    fn node(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(self.xs[ix], self.ys[iy])
    }
}

/// One connected iso-value curve. Closed curves repeat their first vertex
/// at the end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub level: f64,
    pub points: Vec<Point2>,
    pub closed: bool,
}

/// Grid edge carrying a crossing: horizontal edges join `(ix, iy)` to
/// `(ix + 1, iy)`, vertical edges join `(ix, iy)` to `(ix, iy + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

fn crossing(grid: &ScalarGrid, edge: EdgeKey, level: f64) -> Point2 {
    let ((x0, y0), (x1, y1)) = match edge {
        EdgeKey::H(ix, iy) => ((ix, iy), (ix + 1, iy)),
        EdgeKey::V(ix, iy) => ((ix, iy), (ix, iy + 1)),
    };
    let (v0, v1) = (grid.get(x0, y0).unwrap(), grid.get(x1, y1).unwrap());
    let t = (level - v0) / (v1 - v0);
    let (p0, p1) = (grid.node(x0, y0), grid.node(x1, y1));
    p0 + (p1 - p0) * t
}

/// Segments of one square as pairs of edges.
fn square_segments(grid: &ScalarGrid, ix: usize, iy: usize, level: f64) -> Option<[Option<(EdgeKey, EdgeKey)>; 2]> {
    // corners counter-clockwise from bottom-left
    let v = [grid.get(ix, iy)?, grid.get(ix + 1, iy)?, grid.get(ix + 1, iy + 1)?, grid.get(ix, iy + 1)?];
    let bottom = EdgeKey::H(ix, iy);
    let right = EdgeKey::V(ix + 1, iy);
    let top = EdgeKey::H(ix, iy + 1);
    let left = EdgeKey::V(ix, iy);

    let case = v.iter().enumerate().fold(0u8, |acc, (k, &val)| acc | (u8::from(val >= level) << k));
    let one = |a, b| [Some((a, b)), None];
    Some(match case {
        0 | 15 => [None, None],
        1 | 14 => one(left, bottom),
        2 | 13 => one(bottom, right),
        3 | 12 => one(left, right),
        4 | 11 => one(right, top),
        6 | 9 => one(bottom, top),
        7 | 8 => one(left, top),
        5 | 10 => {
            let centre_above = v.iter().sum::<f64>() / 4.0 >= level;
            // case 5: bottom-left and top-right above
            let diagonal_joined = (case == 5) == centre_above;
            if diagonal_joined {
                [Some((left, top)), Some((bottom, right))]
            } else {
                [Some((left, bottom)), Some((right, top))]
            }
        }
        _ => unreachable!(),
    })
}

/// Extracts every iso-curve of `grid` at `level`.
pub fn contour_lines(grid: &ScalarGrid, level: f64) -> Vec<Polyline> {
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    if nx < 2 || ny < 2 || !level.is_finite() {
        return Vec::new();
    }

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            if let Some(segs) = square_segments(grid, ix, iy, level) {
                segments.extend(segs.into_iter().flatten());
            }
        }
    }

    let mut incident: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }

    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<EdgeKey>, bool)> = Vec::new();

    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Option<(Vec<EdgeKey>, bool)> {
        let mut chain = vec![start];
        let mut current = start;
        loop {
            let next_seg = incident[&current].iter().copied().find(|&s| !used[s])?;
            used[next_seg] = true;
            let (a, b) = segments[next_seg];
            current = if a == current { b } else { a };
            chain.push(current);
            if current == start {
                return Some((chain, true));
            }
            if incident[&current].iter().all(|&s| used[s]) {
                return Some((chain, false));
            }
        }
    };

    // open chains start at edges used by a single segment
    let ends: Vec<EdgeKey> = incident.iter().filter(|(_, segs)| segs.len() == 1).map(|(&e, _)| e).collect();
    for e in ends {
        if incident[&e].iter().all(|&s| used[s]) {
            continue;
        }
        if let Some(c) = walk(e, &mut used) {
            chains.push(c);
        }
    }
    let keys: Vec<EdgeKey> = incident.keys().copied().collect();
    for e in keys {
        while incident[&e].iter().any(|&s| !used[s]) {
            if let Some(c) = walk(e, &mut used) {
                chains.push(c);
            }
        }
    }

    chains
        .into_iter()
        .map(|(edges, closed)| Polyline {
            level,
            points: edges.iter().map(|&e| crossing(grid, e, level)).collect(),
            closed,
        })
        .collect()
}

/// Curves for several levels, in the order given.
pub fn contour_levels(grid: &ScalarGrid, levels: &[f64]) -> Vec<Polyline> {
    levels.iter().flat_map(|&l| contour_lines(grid, l)).collect()
}
