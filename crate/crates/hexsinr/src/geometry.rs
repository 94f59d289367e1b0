//! Hexagonal tri-sector network layout and coordinate transforms.
//!
//! Sites sit on a triangular lattice with nearest-neighbour spacing equal to
//! the inter-site distance (ISD). Every site carries three co-located sector
//! transmitters whose boresights are 120 degrees apart. All angles are in
//! degrees; positions are in metres.

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Planar position in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance to another point.
    pub fn distance_to(&self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One of the three co-located sector transmitters of a site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    /// Index of the parent site in [`NetworkLayout::sites`].
    pub site_index: usize,
    /// Position within the site, in `{0, 1, 2}`.
    pub sector_index: usize,
    /// Transmitter position (shared by the three sectors of a site).
    pub position: Point2D,
    /// Boresight azimuth in `[0, 360)`.
    pub boresight_deg: f64,
}

/// Distance/angle pair of a terminal relative to a sector.
///
/// `theta_deg` is the signed angle between the sector boresight and the
/// direction from the sector to the terminal, normalized to `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarOffset {
    pub r: f64,
    pub theta_deg: f64,
}

/// Region in which terminals are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropRegion {
    /// Disk of radius `isd / sqrt(3)` around the central site. The disk
    /// circumscribes the central site's hexagonal cell, so a fraction of the
    /// drops attaches to neighbouring sites.
    CentralSiteDisk,
    /// Disk covering the whole lattice plus one cell radius of margin.
    WholeNetwork,
}

/// Hexagonal lattice of tri-sector sites.
#[derive(Debug, Clone)]
pub struct NetworkLayout {
    isd: f64,
    rings: u32,
    boresight_offset_deg: f64,
    sites: Vec<Point2D>,
    sectors: Vec<Sector>,
}

/// Default boresight azimuth of sector 0; sectors 1 and 2 add 120 and 240.
pub const DEFAULT_BORESIGHT_OFFSET_DEG: f64 = 30.0;

/// Normalize an angle to `(-180, 180]`.
pub fn normalize_signed_deg(angle_deg: f64) -> f64 {
    let r = angle_deg % 360.0;
    if r > 180.0 {
        r - 360.0
    } else if r <= -180.0 {
        r + 360.0
    } else {
        r
    }
}

/// Fold an angle to `[0, 180]`, the symmetric distance from 0.
///
/// Taking `abs()` first makes the result bit-identical for `a` and `-a`,
/// which keeps even functions of the angle exactly even.
pub fn fold_angle_deg(angle_deg: f64) -> f64 {
    let r = angle_deg.abs() % 360.0;
    if r > 180.0 {
        360.0 - r
    } else {
        r
    }
}

/// Number of sites in a hexagonal layout with the given ring count.
pub fn site_count(rings: u32) -> usize {
    1 + 3 * rings as usize * (rings as usize + 1)
}

/// Build a hexagonal tri-sector layout with the default boresight offset.
pub fn build_layout(isd: f64, rings: u32) -> Result<NetworkLayout> {
    build_layout_with_offset(isd, rings, DEFAULT_BORESIGHT_OFFSET_DEG)
}

/// Build a hexagonal tri-sector layout.
///
/// Sites are sorted by distance from the origin and then by azimuth, so the
/// central site is first and `sectors[0..3]` belong to it.
pub fn build_layout_with_offset(
    isd: f64,
    rings: u32,
    boresight_offset_deg: f64,
) -> Result<NetworkLayout> {
    if !isd.is_finite() || isd <= 0.0 {
        return Err(Error::invalid("isd", format!("must be positive, got {isd}")));
    }
    if !boresight_offset_deg.is_finite() {
        return Err(Error::invalid("boresight_offset_deg", "must be finite"));
    }

    let n = rings as i64;
    let mut sites = Vec::with_capacity(site_count(rings));
    for q in -n..=n {
        for r in -n..=n {
            // axial hex distance from the origin
            if q.abs() + r.abs() + (q + r).abs() <= 2 * n {
                sites.push(Point2D::new(
                    isd * (q as f64 + 0.5 * r as f64),
                    isd * (3f64.sqrt() / 2.0 * r as f64),
                ));
            }
        }
    }
    sites.sort_by(|a, b| {
        let da = a.x * a.x + a.y * a.y;
        let db = b.x * b.x + b.y * b.y;
        da.total_cmp(&db)
            .then_with(|| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)))
    });
    debug_assert_eq!(sites.len(), site_count(rings));

    let mut sectors = Vec::with_capacity(3 * sites.len());
    for (site_index, &position) in sites.iter().enumerate() {
        for sector_index in 0..3 {
            let raw = boresight_offset_deg + 120.0 * sector_index as f64;
            let boresight_deg = raw.rem_euclid(360.0);
            sectors.push(Sector {
                site_index,
                sector_index,
                position,
                boresight_deg,
            });
        }
    }

    Ok(NetworkLayout {
        isd,
        rings,
        boresight_offset_deg,
        sites,
        sectors,
    })
}

impl NetworkLayout {
    pub fn isd(&self) -> f64 {
        self.isd
    }

    pub fn rings(&self) -> u32 {
        self.rings
    }

    pub fn boresight_offset_deg(&self) -> f64 {
        self.boresight_offset_deg
    }

    pub fn sites(&self) -> &[Point2D] {
        &self.sites
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Radius of the drop disk for a region.
    pub fn drop_radius(&self, region: DropRegion) -> f64 {
        match region {
            DropRegion::CentralSiteDisk => self.isd / 3f64.sqrt(),
            DropRegion::WholeNetwork => self.isd * (self.rings as f64 + 1.0 / 3f64.sqrt()),
        }
    }
}

/// Distance and signed boresight-relative angle of a point seen from a sector.
pub fn relative_polar(sector: &Sector, p: Point2D) -> Result<PolarOffset> {
    let dx = p.x - sector.position.x;
    let dy = p.y - sector.position.y;
    let r = dx.hypot(dy);
    if r == 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "point coincides with sector position ({}, {})",
            sector.position.x, sector.position.y
        )));
    }
    let bearing = dy.atan2(dx).to_degrees();
    Ok(PolarOffset {
        r,
        theta_deg: normalize_signed_deg(bearing - sector.boresight_deg),
    })
}

/// Bearing of the direction `ue -> target` in `[0, 360)`.
pub fn ue_bearing(ue: Point2D, target: Point2D) -> Result<f64> {
    let dx = target.x - ue.x;
    let dy = target.y - ue.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::DegenerateGeometry(
            "bearing between coincident points".to_string(),
        ));
    }
    let b = dy.atan2(dx).to_degrees();
    Ok(if b < 0.0 { b + 360.0 } else { b })
}

/// Drop terminals uniformly in the chosen region, deterministically per seed.
///
/// Positions come from stream 0 of the seeded generator; the Monte-Carlo
/// engine reserves the remaining streams for per-terminal fading draws.
pub fn drop_ues(
    layout: &NetworkLayout,
    count: usize,
    region: DropRegion,
    seed: u64,
) -> Result<Vec<Point2D>> {
    if count == 0 {
        return Err(Error::invalid("count", "must be positive"));
    }
    let radius = layout.drop_radius(region);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        let r = radius * u.sqrt();
        let ang = std::f64::consts::TAU * v;
        points.push(Point2D::new(r * ang.cos(), r * ang.sin()));
    }
    Ok(points)
}
