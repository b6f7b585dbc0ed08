//! Radio-unit layout and user placement.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: &Point2D) -> f64 {
        distance(self, other)
    }
}

/// Euclidean distance in meters.
pub fn distance(p: &Point2D, q: &Point2D) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Positions of the radio units (O-RUs) and which one is the desired cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellLayout {
    oru_positions: Vec<Point2D>,
    isd_m: f64,
    center_index: usize,
}

impl CellLayout {
    /// Arbitrary layout. Positions must be finite and distinct.
    pub fn new(oru_positions: Vec<Point2D>, isd_m: f64, center_index: usize) -> Result<Self> {
        if oru_positions.is_empty() {
            return Err(Error::invalid(
                "oru_positions",
                "layout needs at least one O-RU",
            ));
        }
        if !(isd_m > 0.0 && isd_m.is_finite()) {
            return Err(Error::invalid("isd_m", format!("must be > 0, got {isd_m}")));
        }
        if center_index >= oru_positions.len() {
            return Err(Error::invalid(
                "center_index",
                format!(
                    "{center_index} out of range for {} O-RUs",
                    oru_positions.len()
                ),
            ));
        }
        if oru_positions
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::invalid(
                "oru_positions",
                "coordinates must be finite",
            ));
        }
        for (i, p) in oru_positions.iter().enumerate() {
            if oru_positions[..i].iter().any(|q| q == p) {
                return Err(Error::invalid(
                    "oru_positions",
                    format!("duplicate position ({}, {})", p.x, p.y),
                ));
            }
        }
        Ok(Self {
            oru_positions,
            isd_m,
            center_index,
        })
    }

    pub fn positions(&self) -> &[Point2D] {
        &self.oru_positions
    }

    pub fn isd_m(&self) -> f64 {
        self.isd_m
    }

    pub fn center_index(&self) -> usize {
        self.center_index
    }

    pub fn center(&self) -> Point2D {
        self.oru_positions[self.center_index]
    }

    /// Number of cells, L.
    pub fn len(&self) -> usize {
        self.oru_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oru_positions.is_empty()
    }
}

/// `rows × cols` lattice with spacing `isd_m`, centered on the origin.
///
/// Positions are listed column by column (x outer, y inner). For even
/// dimensions no site sits on the origin; the first site of minimal norm
/// becomes the center.
pub fn build_grid_layout(rows: usize, cols: usize, isd_m: f64) -> Result<CellLayout> {
    if rows == 0 {
        return Err(Error::invalid("rows", "must be >= 1"));
    }
    if cols == 0 {
        return Err(Error::invalid("cols", "must be >= 1"));
    }
    if !(isd_m > 0.0 && isd_m.is_finite()) {
        return Err(Error::invalid("isd_m", format!("must be > 0, got {isd_m}")));
    }
    let offset = |i: usize, n: usize| (i as f64 - (n as f64 - 1.0) / 2.0) * isd_m;

    let mut positions = Vec::with_capacity(rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            positions.push(Point2D::new(offset(c, cols), offset(r, rows)));
        }
    }
    let center_index = positions
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(best, best_d), (i, p)| {
            let d = p.x.hypot(p.y);
            if d < best_d {
                (i, d)
            } else {
                (best, best_d)
            }
        })
        .0;
    CellLayout::new(positions, isd_m, center_index)
}

/// Axis-aligned square where users are dropped, minus a keep-out disc
/// around every O-RU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserRegion {
    center: Point2D,
    side_m: f64,
    exclusion_radius_m: f64,
}

impl UserRegion {
    pub fn new(center: Point2D, side_m: f64, exclusion_radius_m: f64) -> Result<Self> {
        if !(exclusion_radius_m >= 0.0 && exclusion_radius_m.is_finite()) {
            return Err(Error::invalid(
                "exclusion_radius_m",
                format!("must be >= 0, got {exclusion_radius_m}"),
            ));
        }
        if !(side_m > 2.0 * exclusion_radius_m && side_m.is_finite()) {
            return Err(Error::invalid(
                "side_m",
                format!("{side_m} must exceed twice the exclusion radius {exclusion_radius_m}"),
            ));
        }
        Ok(Self {
            center,
            side_m,
            exclusion_radius_m,
        })
    }

    /// The square Voronoi cell of the layout's center O-RU.
    pub fn center_cell(layout: &CellLayout, exclusion_radius_m: f64) -> Result<Self> {
        Self::new(layout.center(), layout.isd_m(), exclusion_radius_m)
    }

    pub fn center(&self) -> Point2D {
        self.center
    }

    pub fn side_m(&self) -> f64 {
        self.side_m
    }

    pub fn exclusion_radius_m(&self) -> f64 {
        self.exclusion_radius_m
    }

    fn contains_excluded(&self, p: &Point2D, layout: &CellLayout) -> bool {
        self.exclusion_radius_m > 0.0
            && layout
                .positions()
                .iter()
                .any(|oru| distance(p, oru) < self.exclusion_radius_m)
    }
}

/// Uniform draw over the region, redrawn while it falls inside any O-RU's
/// exclusion disc.
pub fn sample_user_position<R: Rng + ?Sized>(
    region: &UserRegion,
    layout: &CellLayout,
    rng: &mut R,
) -> Point2D {
    let half = region.side_m / 2.0;
    loop {
        let p = Point2D::new(
            region.center.x + rng.random_range(-half..half),
            region.center.y + rng.random_range(-half..half),
        );
        if !region.contains_excluded(&p, layout) {
            return p;
        }
    }
}
