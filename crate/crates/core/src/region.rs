//! Obstruction detection, isolated-region construction and the isolation
//! database.
//!
//! High-loss pixels are grouped into 4-connected obstructions. Around each
//! obstruction's bounding box, bands of width `d` are laid flush against the
//! four sides and paired across it (north/south, east/west). Each pair gets a
//! mitigation factor: the minimum attenuation over a sampling lattice of
//! cross-region position pairs. Pairs whose factor meets the admission
//! threshold form the database. Failing pairs are dropped, never resized.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Position, Rect};
use crate::propagation::ue_ue_pathloss;
use crate::radio_map::RadioMap;

/// A 4-connected group of pixels at or above the detection threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    /// `(col, row)` indices in ascending row-major order.
    pub pixels: Vec<(usize, usize)>,
    /// Union of the member pixels' extents, in meters.
    pub bounds: Rect,
}

/// Labels the maximal 4-connected components of pixels with path loss at or
/// above `threshold_db`, in row-major order of their first pixel.
pub fn detect_obstructions(map: &RadioMap, threshold_db: f64) -> Vec<Obstruction> {
    let (nc, nr) = (map.n_cols(), map.n_rows());
    let values = map.values();
    let hot = |c: usize, r: usize| values[r * nc + c] >= threshold_db;
    let mut seen = vec![false; nc * nr];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();

    for r0 in 0..nr {
        for c0 in 0..nc {
            if seen[r0 * nc + c0] || !hot(c0, r0) {
                continue;
            }
            seen[r0 * nc + c0] = true;
            queue.push_back((c0, r0));
            let mut pixels = Vec::new();
            while let Some((c, r)) = queue.pop_front() {
                pixels.push((c, r));
                let mut visit = |c: usize, r: usize| {
                    if !seen[r * nc + c] && hot(c, r) {
                        seen[r * nc + c] = true;
                        queue.push_back((c, r));
                    }
                };
                if c > 0 {
                    visit(c - 1, r);
                }
                if c + 1 < nc {
                    visit(c + 1, r);
                }
                if r > 0 {
                    visit(c, r - 1);
                }
                if r + 1 < nr {
                    visit(c, r + 1);
                }
            }
            pixels.sort_by_key(|&(c, r)| (r, c));
            let (mut cmin, mut cmax, mut rmin, mut rmax) = (usize::MAX, 0, usize::MAX, 0);
            for &(c, r) in &pixels {
                cmin = cmin.min(c);
                cmax = cmax.max(c);
                rmin = rmin.min(r);
                rmax = rmax.max(r);
            }
            let lo = map.pixel_rect(cmin, rmin);
            let hi = map.pixel_rect(cmax, rmax);
            out.push(Obstruction {
                pixels,
                bounds: Rect::new(lo.x_min, hi.x_max, lo.y_min, hi.y_max),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ExtractionParams {
    pub detection_threshold_db: f64,
    pub band_width_m: f64,
    pub admission_threshold_db: f64,
    pub sampling_step_m: f64,
    /// Pieces each band is cut into along its long axis: 1 or 2.
    pub split: u8,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        Self {
            detection_threshold_db: 120.0,
            band_width_m: 100.0,
            admission_threshold_db: 100.0,
            sampling_step_m: 25.0,
            split: 2,
        }
    }
}

impl ExtractionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        for (name, v) in [
            ("detection threshold", self.detection_threshold_db),
            ("band width", self.band_width_m),
            ("admission threshold", self.admission_threshold_db),
            ("sampling step", self.sampling_step_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.sampling_step_m > self.band_width_m {
            return bad(format!(
                "sampling step {} m exceeds band width {} m",
                self.sampling_step_m, self.band_width_m
            ));
        }
        if !matches!(self.split, 1 | 2) {
            return bad(format!("split must be 1 or 2, got {}", self.split));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairAxis {
    /// Region A north of the obstruction, B south.
    NorthSouth,
    /// Region A east of the obstruction, B west.
    EastWest,
}

/// A region pair before its mitigation factor is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidatePair {
    pub axis: PairAxis,
    /// 0 for an unsplit band; otherwise 0 = west/south half, 1 = east/north half.
    pub part: u8,
    pub region_a: Rect,
    pub region_b: Rect,
}

/// Constructs the banded region pairs around one obstruction.
///
/// Order: north/south before east/west, and lower half before upper half.
/// A pair is dropped when either band clips to zero area.
pub fn build_region_pairs(
    obstruction: &Obstruction,
    params: &ExtractionParams,
    map: &RadioMap,
) -> Result<Vec<CandidatePair>> {
    params.validate()?;
    let ob = obstruction.bounds;
    let area = map.bounds();
    if !ob.has_positive_area() || !area.contains_rect(&ob) {
        return Err(Error::ObstructionOutsideMap(ob.to_string()));
    }
    let d = params.band_width_m;
    let north = Rect::new(ob.x_min, ob.x_max, ob.y_max, ob.y_max + d).clip_to(&area);
    let south = Rect::new(ob.x_min, ob.x_max, ob.y_min - d, ob.y_min).clip_to(&area);
    let east = Rect::new(ob.x_max, ob.x_max + d, ob.y_min, ob.y_max).clip_to(&area);
    let west = Rect::new(ob.x_min - d, ob.x_min, ob.y_min, ob.y_max).clip_to(&area);

    let mut out = Vec::new();
    for (axis, a, b) in [
        (PairAxis::NorthSouth, north, south),
        (PairAxis::EastWest, east, west),
    ] {
        if !(a.has_positive_area() && b.has_positive_area()) {
            continue;
        }
        if params.split == 1 {
            out.push(CandidatePair {
                axis,
                part: 0,
                region_a: a,
                region_b: b,
            });
            continue;
        }
        let halves = |r: Rect| -> [Rect; 2] {
            match axis {
                PairAxis::NorthSouth => {
                    let m = 0.5 * (ob.x_min + ob.x_max);
                    [
                        Rect::new(r.x_min, m, r.y_min, r.y_max),
                        Rect::new(m, r.x_max, r.y_min, r.y_max),
                    ]
                }
                PairAxis::EastWest => {
                    let m = 0.5 * (ob.y_min + ob.y_max);
                    [
                        Rect::new(r.x_min, r.x_max, r.y_min, m),
                        Rect::new(r.x_min, r.x_max, m, r.y_max),
                    ]
                }
            }
        };
        let (ha, hb) = (halves(a), halves(b));
        for part in 0..2 {
            out.push(CandidatePair {
                axis,
                part: part as u8,
                region_a: ha[part],
                region_b: hb[part],
            });
        }
    }
    Ok(out)
}

/// Attenuation in dB between two positions, used to estimate mitigation
/// factors. Implementations must be total over the sampled positions.
pub trait Attenuation {
    fn attenuation_db(&self, a: Position, b: Position) -> f64;
}

impl<F: Fn(Position, Position) -> f64> Attenuation for F {
    fn attenuation_db(&self, a: Position, b: Position) -> f64 {
        self(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantAttenuation(pub f64);

impl Attenuation for ConstantAttenuation {
    fn attenuation_db(&self, _: Position, _: Position) -> f64 {
        self.0
    }
}

/// UE-to-UE path loss plus a penetration increment for every footprint the
/// straight segment between the two positions touches.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructedPathloss {
    pub carrier_mhz: f64,
    pub penetration_db: f64,
    pub footprints: Vec<Rect>,
}

impl ObstructedPathloss {
    /// Separations below this are evaluated at this distance.
    pub const MIN_DISTANCE_M: f64 = 1.0;

    pub fn from_obstructions(obstructions: &[Obstruction], carrier_mhz: f64, penetration_db: f64) -> Self {
        Self {
            carrier_mhz,
            penetration_db,
            footprints: obstructions.iter().map(|o| o.bounds).collect(),
        }
    }
}

impl Attenuation for ObstructedPathloss {
    fn attenuation_db(&self, a: Position, b: Position) -> f64 {
        let d_km = a.distance_m(&b).max(Self::MIN_DISTANCE_M) / 1e3;
        // a non-positive carrier has no defined loss; report none
        let base = ue_ue_pathloss(d_km, self.carrier_mhz).unwrap_or(0.0);
        let crossings = self
            .footprints
            .iter()
            .filter(|f| f.intersects_segment(a, b))
            .count();
        base + crossings as f64 * self.penetration_db
    }
}

/// Caps an inner model at `ceiling_db`, e.g. to stand in for diffraction
/// paths that bound the benefit of an obstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct Capped<A> {
    pub inner: A,
    pub ceiling_db: f64,
}

impl<A: Attenuation> Attenuation for Capped<A> {
    fn attenuation_db(&self, a: Position, b: Position) -> f64 {
        self.inner.attenuation_db(a, b).min(self.ceiling_db)
    }
}

fn axis_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let x = lo + i as f64 * step;
        if x >= hi {
            break;
        }
        out.push(x);
        i += 1;
    }
    out.push(hi);
    out
}

/// Lattice of spacing `step` anchored at the region's south-west corner,
/// extended by the east and north edges so all four corners are present.
///
/// Halving the step yields a superset of the points.
pub fn sampling_lattice(region: &Rect, step: f64) -> Result<Vec<Position>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParams(format!(
            "sampling step must be positive, got {step}"
        )));
    }
    if !region.has_positive_area() || region.width() < step || region.height() < step {
        return Err(Error::RegionTooSmall {
            width: region.width(),
            height: region.height(),
            step,
        });
    }
    let xs = axis_points(region.x_min, region.x_max, step);
    let ys = axis_points(region.y_min, region.y_max, step);
    Ok(ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| Position::new(x, y)))
        .collect())
}

/// Minimum attenuation over every pair of lattice samples across `a` and `b`.
pub fn compute_mitigation_factor<A: Attenuation + ?Sized>(
    a: &Rect,
    b: &Rect,
    attenuation: &A,
    step: f64,
) -> Result<f64> {
    let pa = sampling_lattice(a, step)?;
    let pb = sampling_lattice(b, step)?;
    let mut alpha = f64::INFINITY;
    for &p in &pa {
        for &q in &pb {
            alpha = alpha.min(attenuation.attenuation_db(p, q));
        }
    }
    Ok(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RegionPair {
    /// 1-based index.
    pub k: usize,
    pub region_a: Rect,
    pub region_b: Rect,
    pub alpha_db: f64,
}

impl RegionPair {
    /// Whether `u` and `v` sit on opposite sides of this pair.
    pub fn separates(&self, u: Position, v: Position) -> bool {
        (self.region_a.contains(u) && self.region_b.contains(v))
            || (self.region_b.contains(u) && self.region_a.contains(v))
    }
}

/// Where a database came from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Provenance {
    pub map_id: String,
    pub attenuation_model: String,
    pub params: ExtractionParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsolationDatabase {
    pairs: Vec<RegionPair>,
    provenance: Provenance,
}

impl IsolationDatabase {
    pub fn new(pairs: Vec<RegionPair>, provenance: Provenance) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDatabase(m));
        for (i, p) in pairs.iter().enumerate() {
            if p.k != i + 1 {
                return bad(format!("entry {} has index k={}, expected {}", i + 1, p.k, i + 1));
            }
            for (side, r) in [("A", p.region_a), ("B", p.region_b)] {
                if !r.has_positive_area() {
                    return bad(format!("entry {}: region {side} {r} has no area", p.k));
                }
            }
            if p.region_a.intersects(&p.region_b) {
                return bad(format!(
                    "entry {}: regions A {} and B {} intersect",
                    p.k, p.region_a, p.region_b
                ));
            }
            if !p.alpha_db.is_finite() {
                return bad(format!("entry {}: alpha is not finite", p.k));
            }
            if p.alpha_db < provenance.params.admission_threshold_db {
                return bad(format!(
                    "entry {}: alpha {} dB is below the admission threshold {} dB",
                    p.k, p.alpha_db, provenance.params.admission_threshold_db
                ));
            }
        }
        Ok(Self { pairs, provenance })
    }

    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            provenance: Provenance {
                map_id: String::new(),
                attenuation_model: String::new(),
                params: ExtractionParams::default(),
            },
        }
    }

    pub fn pairs(&self) -> &[RegionPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest mitigation factor over pairs that separate `u` and `v`.
    pub fn isolation_between(&self, u: Position, v: Position) -> Option<f64> {
        self.pairs
            .iter()
            .filter(|p| p.separates(u, v))
            .map(|p| p.alpha_db)
            .reduce(f64::max)
    }
}

impl fmt::Display for IsolationDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            writeln!(f, "k={} alpha={} dB A={} B={}", p.k, p.alpha_db, p.region_a, p.region_b)?;
        }
        Ok(())
    }
}

/// Scores every candidate pair around `obstructions` and keeps those meeting
/// the admission threshold, indexed in the given obstruction order.
pub fn admit_pairs<A: Attenuation + ?Sized>(
    obstructions: &[Obstruction],
    map: &RadioMap,
    params: &ExtractionParams,
    attenuation: &A,
) -> Result<Vec<RegionPair>> {
    let mut pairs = Vec::new();
    for ob in obstructions {
        for cand in build_region_pairs(ob, params, map)? {
            let alpha = compute_mitigation_factor(
                &cand.region_a,
                &cand.region_b,
                attenuation,
                params.sampling_step_m,
            )?;
            if alpha >= params.admission_threshold_db {
                pairs.push(RegionPair {
                    k: pairs.len() + 1,
                    region_a: cand.region_a,
                    region_b: cand.region_b,
                    alpha_db: alpha,
                });
            }
        }
    }
    Ok(pairs)
}

/// Detection, region construction, scoring and admission in one pass.
pub fn build_database<A: Attenuation + ?Sized>(
    map: &RadioMap,
    params: &ExtractionParams,
    attenuation: &A,
    provenance: Provenance,
) -> Result<IsolationDatabase> {
    params.validate()?;
    let obstructions = detect_obstructions(map, params.detection_threshold_db);
    let pairs = admit_pairs(&obstructions, map, params, attenuation)?;
    IsolationDatabase::new(pairs, Provenance { params: params.clone(), ..provenance })
}
