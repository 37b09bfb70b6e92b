//! Radio maps: rectangular grids of base-station-to-pixel path loss.
//!
//! Pixel `(col, row)` covers `[origin.x + col * s, origin.x + (col + 1) * s)`
//! horizontally and likewise vertically, with row 0 the southernmost row.
//! A position on a shared pixel edge belongs to the pixel with the larger
//! column (then row) index. The outer east and north map edges belong to the
//! last column and row, so lookups are total over the closed map rectangle.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Position, Rect};

#[derive(Debug, Clone, PartialEq)]
pub struct RadioMap {
    origin: Position,
    pixel_size: f64,
    n_cols: usize,
    n_rows: usize,
    pathloss: Vec<f64>,
    bs_position: Position,
}

impl RadioMap {
    /// Builds a map from row-major path-loss values, row 0 first.
    pub fn new(
        origin: Position,
        pixel_size: f64,
        n_cols: usize,
        n_rows: usize,
        pathloss: Vec<f64>,
        bs_position: Position,
    ) -> Result<Self> {
        if !origin.is_finite() || !bs_position.is_finite() {
            return Err(Error::InvalidMap(format!(
                "non-finite origin {origin} or base station {bs_position}"
            )));
        }
        if !(pixel_size.is_finite() && pixel_size > 0.0) {
            return Err(Error::InvalidMap(format!(
                "pixel size must be positive, got {pixel_size}"
            )));
        }
        if n_cols == 0 || n_rows == 0 {
            return Err(Error::InvalidMap(format!(
                "grid must be non-empty, got {n_cols} x {n_rows}"
            )));
        }
        if pathloss.len() != n_cols * n_rows {
            return Err(Error::InvalidMap(format!(
                "expected {} values for a {n_cols} x {n_rows} grid, got {}",
                n_cols * n_rows,
                pathloss.len()
            )));
        }
        if let Some(idx) = pathloss.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidMap(format!(
                "pixel (col {}, row {}) has invalid path loss {}",
                idx % n_cols,
                idx / n_cols,
                pathloss[idx]
            )));
        }
        Ok(Self {
            origin,
            pixel_size,
            n_cols,
            n_rows,
            pathloss,
            bs_position,
        })
    }

    pub fn origin(&self) -> Position {
        self.origin
    }

    pub fn pixel_size(&self) -> f64 {
        self.pixel_size
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn bs_position(&self) -> Position {
        self.bs_position
    }

    /// Row-major values, row 0 (south) first.
    pub fn values(&self) -> &[f64] {
        &self.pathloss
    }

    pub fn width_m(&self) -> f64 {
        self.n_cols as f64 * self.pixel_size
    }

    pub fn height_m(&self) -> f64 {
        self.n_rows as f64 * self.pixel_size
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(
            self.origin.x,
            self.origin.x + self.width_m(),
            self.origin.y,
            self.origin.y + self.height_m(),
        )
    }

    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        (col < self.n_cols && row < self.n_rows).then(|| self.pathloss[row * self.n_cols + col])
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> Position {
        Position::new(
            self.origin.x + (col as f64 + 0.5) * self.pixel_size,
            self.origin.y + (row as f64 + 0.5) * self.pixel_size,
        )
    }

    pub fn pixel_rect(&self, col: usize, row: usize) -> Rect {
        let x0 = self.origin.x + col as f64 * self.pixel_size;
        let y0 = self.origin.y + row as f64 * self.pixel_size;
        Rect::new(x0, x0 + self.pixel_size, y0, y0 + self.pixel_size)
    }

    /// Pixel containing `pos` under the edge tie rule, or `None` outside the map.
    pub fn pixel_of(&self, pos: Position) -> Option<(usize, usize)> {
        if !pos.is_finite() || !self.bounds().contains(pos) {
            return None;
        }
        let col = libm::floor((pos.x - self.origin.x) / self.pixel_size) as usize;
        let row = libm::floor((pos.y - self.origin.y) / self.pixel_size) as usize;
        Some((col.min(self.n_cols - 1), row.min(self.n_rows - 1)))
    }

    /// Path loss of the pixel containing `pos`. No interpolation.
    pub fn pathloss_at(&self, pos: Position) -> Result<f64> {
        let (col, row) = self.pixel_of(pos).ok_or(Error::OutOfBounds { x: pos.x, y: pos.y })?;
        Ok(self.pathloss[row * self.n_cols + col])
    }
}

/// A rectangular obstruction planted into a synthetic map.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PlantedObstruction {
    pub footprint: Rect,
    pub penetration_db: f64,
}

/// Recipe for a synthetic radio map.
///
/// The baseline loss at a pixel center `d` km from the base station is
/// `32.45 + 10 * n * log10(d) + 20 * log10(f)` with `n = path_loss_exponent`
/// and `f` in MHz; `n = 2` is the free-space form. Every planted
/// obstruction whose footprint covers the pixel center adds its penetration
/// increment. Optional per-pixel log-normal shadowing is drawn from the seed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SyntheticMapSpec {
    pub origin: Position,
    pub width_m: f64,
    pub height_m: f64,
    pub pixel_size_m: f64,
    pub bs_position: Position,
    pub carrier_mhz: f64,
    pub path_loss_exponent: f64,
    /// Distances below this are clamped before taking the logarithm.
    pub min_distance_m: f64,
    pub shadowing_sigma_db: f64,
    pub obstructions: Vec<PlantedObstruction>,
}

impl Default for SyntheticMapSpec {
    fn default() -> Self {
        Self {
            origin: Position::new(0.0, 0.0),
            width_m: 1050.0,
            height_m: 1100.0,
            pixel_size_m: 50.0,
            bs_position: Position::new(525.0, 550.0),
            carrier_mhz: 2140.0,
            path_loss_exponent: 2.0,
            min_distance_m: 1.0,
            shadowing_sigma_db: 0.0,
            obstructions: Vec::new(),
        }
    }
}

impl SyntheticMapSpec {
    pub fn area(&self) -> Rect {
        Rect::new(
            self.origin.x,
            self.origin.x + self.width_m,
            self.origin.y,
            self.origin.y + self.height_m,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidSpec(msg));
        if !self.origin.is_finite() || !self.bs_position.is_finite() {
            return bad("non-finite origin or base station position".into());
        }
        if !(self.width_m > 0.0 && self.height_m > 0.0) || !self.area().is_finite() {
            return bad(format!(
                "map area must be positive, got {} x {} m",
                self.width_m, self.height_m
            ));
        }
        if !(self.pixel_size_m.is_finite() && self.pixel_size_m > 0.0) {
            return bad(format!("pixel size must be positive, got {}", self.pixel_size_m));
        }
        for (name, extent) in [("width", self.width_m), ("height", self.height_m)] {
            let cells = extent / self.pixel_size_m;
            if libm::fabs(cells - libm::round(cells)) > 1e-9 || libm::round(cells) < 1.0 {
                return bad(format!(
                    "{name} {extent} m is not a positive multiple of the {} m pixel",
                    self.pixel_size_m
                ));
            }
        }
        if !(self.carrier_mhz.is_finite() && self.carrier_mhz > 0.0) {
            return bad(format!("carrier must be positive, got {} MHz", self.carrier_mhz));
        }
        if !(self.path_loss_exponent.is_finite() && self.path_loss_exponent > 0.0) {
            return bad(format!(
                "path-loss exponent must be positive, got {}",
                self.path_loss_exponent
            ));
        }
        if !(self.min_distance_m.is_finite() && self.min_distance_m > 0.0) {
            return bad(format!(
                "minimum distance must be positive, got {}",
                self.min_distance_m
            ));
        }
        if !(self.shadowing_sigma_db.is_finite() && self.shadowing_sigma_db >= 0.0) {
            return bad(format!(
                "shadowing sigma must be non-negative, got {}",
                self.shadowing_sigma_db
            ));
        }
        let area = self.area();
        for (i, ob) in self.obstructions.iter().enumerate() {
            if !ob.footprint.has_positive_area() || !area.contains_rect(&ob.footprint) {
                return bad(format!(
                    "obstruction {i} footprint {} must have positive area inside {area}",
                    ob.footprint
                ));
            }
            if !(ob.penetration_db.is_finite() && ob.penetration_db > 0.0) {
                return bad(format!(
                    "obstruction {i} penetration must be positive, got {}",
                    ob.penetration_db
                ));
            }
        }
        Ok(())
    }

    /// Unobstructed, unshadowed loss at `distance_m` from the base station.
    pub fn baseline_db(&self, distance_m: f64) -> f64 {
        let d_km = distance_m.max(self.min_distance_m) / 1000.0;
        32.45
            + 10.0 * self.path_loss_exponent * libm::log10(d_km)
            + 20.0 * libm::log10(self.carrier_mhz)
    }
}

/// Rounds to the 0.01 dB grid used by the map file format.
pub fn quantize_db(value: f64) -> f64 {
    libm::round(value * 100.0) / 100.0
}

pub fn generate_synthetic_map(spec: &SyntheticMapSpec, seed: u64) -> Result<RadioMap> {
    spec.validate()?;
    let n_cols = libm::round(spec.width_m / spec.pixel_size_m) as usize;
    let n_rows = libm::round(spec.height_m / spec.pixel_size_m) as usize;
    let shadowing = if spec.shadowing_sigma_db > 0.0 {
        Some(
            Normal::new(0.0, spec.shadowing_sigma_db)
                .map_err(|e| Error::InvalidSpec(format!("shadowing: {e}")))?,
        )
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut values = Vec::with_capacity(n_cols * n_rows);
    for row in 0..n_rows {
        for col in 0..n_cols {
            let center = Position::new(
                spec.origin.x + (col as f64 + 0.5) * spec.pixel_size_m,
                spec.origin.y + (row as f64 + 0.5) * spec.pixel_size_m,
            );
            let mut loss = spec.baseline_db(center.distance_m(&spec.bs_position));
            if let Some(normal) = &shadowing {
                loss += normal.sample(&mut rng);
            }
            loss += spec
                .obstructions
                .iter()
                .filter(|ob| ob.footprint.contains(center))
                .map(|ob| ob.penetration_db)
                .sum::<f64>();
            values.push(quantize_db(loss.max(0.0)));
        }
    }
    RadioMap::new(
        spec.origin,
        spec.pixel_size_m,
        n_cols,
        n_rows,
        values,
        spec.bs_position,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_by_two() -> RadioMap {
        RadioMap::new(
            Position::new(0.0, 0.0),
            50.0,
            2,
            2,
            vec![100.0, 110.0, 120.0, 130.0],
            Position::new(10.0, 10.0),
        )
        .unwrap()
    }

    #[test]
    fn pixel_center_lookup_is_identity() {
        let map = two_by_two();
        for row in 0..2 {
            for col in 0..2 {
                let c = map.pixel_center(col, row);
                assert_eq!(map.pathloss_at(c).unwrap(), map.get(col, row).unwrap());
            }
        }
    }

    #[test]
    fn origin_corner_is_pixel_zero() {
        assert_eq!(two_by_two().pathloss_at(Position::new(0.0, 0.0)).unwrap(), 100.0);
    }

    #[test]
    fn shared_edge_goes_to_larger_index() {
        let map = two_by_two();
        // on the vertical edge x = 50: column 1
        assert_eq!(map.pathloss_at(Position::new(50.0, 10.0)).unwrap(), 110.0);
        // 1 mm west of it: column 0
        assert_eq!(map.pathloss_at(Position::new(49.999, 10.0)).unwrap(), 100.0);
        // on the horizontal edge y = 50: row 1
        assert_eq!(map.pathloss_at(Position::new(10.0, 50.0)).unwrap(), 120.0);
        // on the shared corner: column 1, row 1
        assert_eq!(map.pathloss_at(Position::new(50.0, 50.0)).unwrap(), 130.0);
        // outer edges stay in the last pixel
        assert_eq!(map.pathloss_at(Position::new(100.0, 100.0)).unwrap(), 130.0);
    }

    #[test]
    fn out_of_bounds_is_reported() {
        let err = two_by_two().pathloss_at(Position::new(-0.5, 3.0)).unwrap_err();
        assert_eq!(err, Error::OutOfBounds { x: -0.5, y: 3.0 });
        assert!(two_by_two().pathloss_at(Position::new(100.001, 3.0)).is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        let origin = Position::new(0.0, 0.0);
        assert!(RadioMap::new(origin, 50.0, 3, 1, vec![1.0, 2.0], origin).is_err());
        assert!(RadioMap::new(origin, 50.0, 1, 1, vec![-1.0], origin).is_err());
        assert!(RadioMap::new(origin, 50.0, 1, 1, vec![f64::NAN], origin).is_err());
        assert!(RadioMap::new(origin, 0.0, 1, 1, vec![1.0], origin).is_err());
    }

    #[test]
    fn full_scale_grid_dimensions() {
        let map = generate_synthetic_map(&SyntheticMapSpec::default(), 0).unwrap();
        assert_eq!((map.n_cols(), map.n_rows()), (21, 22));
        assert_eq!((map.width_m(), map.height_m()), (1050.0, 1100.0));
    }

    #[test]
    fn zero_area_spec_is_rejected() {
        let spec = SyntheticMapSpec {
            width_m: 0.0,
            ..SyntheticMapSpec::default()
        };
        assert!(matches!(
            generate_synthetic_map(&spec, 1),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn baseline_is_monotone_along_rays() {
        let spec = SyntheticMapSpec::default();
        let map = generate_synthetic_map(&spec, 3).unwrap();
        let bs_col = 10;
        // eastward ray through the base-station row
        let row = 10;
        let along: Vec<f64> = (bs_col..map.n_cols()).map(|c| map.get(c, row).unwrap()).collect();
        assert!(along.windows(2).all(|w| w[0] <= w[1]), "{along:?}");
        // every pair of pixels: farther never lower
        let bs = spec.bs_position;
        let mut cells: Vec<(f64, f64)> = (0..map.n_rows())
            .flat_map(|r| (0..map.n_cols()).map(move |c| (r, c)))
            .map(|(r, c)| (map.pixel_center(c, r).distance_m(&bs), map.get(c, r).unwrap()))
            .collect();
        cells.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(cells.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn planted_obstruction_adds_exact_increment() {
        let footprint = Rect::new(600.0, 800.0, 600.0, 800.0);
        let spec = SyntheticMapSpec {
            obstructions: vec![PlantedObstruction {
                footprint,
                penetration_db: 40.0,
            }],
            ..SyntheticMapSpec::default()
        };
        let with = generate_synthetic_map(&spec, 0).unwrap();
        let without = generate_synthetic_map(
            &SyntheticMapSpec {
                obstructions: Vec::new(),
                ..spec.clone()
            },
            0,
        )
        .unwrap();
        let mut covered = 0;
        for row in 0..with.n_rows() {
            for col in 0..with.n_cols() {
                let diff = with.get(col, row).unwrap() - without.get(col, row).unwrap();
                if footprint.contains(with.pixel_center(col, row)) {
                    covered += 1;
                    assert!((diff - 40.0).abs() < 1e-9, "diff {diff}");
                } else {
                    assert_eq!(diff, 0.0);
                }
            }
        }
        assert_eq!(covered, 16);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SyntheticMapSpec {
            shadowing_sigma_db: 4.0,
            ..SyntheticMapSpec::default()
        };
        let a = generate_synthetic_map(&spec, 42).unwrap();
        let b = generate_synthetic_map(&spec, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_map(&spec, 43).unwrap();
        assert_ne!(a, c);
    }
}
