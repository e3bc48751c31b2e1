//! Piecewise-constant potentials on a hard-wall interval or a ring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Infinite walls outside `[x_min, x_max]`.
    HardWall { x_min: f64, x_max: f64 },
    /// Ring `[0, length)`.
    Periodic { length: f64 },
}

impl Domain {
    pub fn start(&self) -> f64 {
        match *self {
            Domain::HardWall { x_min, .. } => x_min,
            Domain::Periodic { .. } => 0.0,
        }
    }

    pub fn end(&self) -> f64 {
        match *self {
            Domain::HardWall { x_max, .. } => x_max,
            Domain::Periodic { length } => length,
        }
    }

    pub fn length(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Domain::Periodic { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x_lo: f64,
    pub x_hi: f64,
    pub v: f64,
}

/// Square-well parameters a potential was built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellGeometry {
    /// Width of one well, `l`.
    pub well_width: f64,
    /// Width of one barrier, `a`.
    pub barrier_width: f64,
    /// Barrier height `V0`.
    pub barrier_height: f64,
    pub wells: usize,
    /// Floor of the left well in a tilted double well.
    #[serde(default)]
    pub tilt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePotential {
    pub domain: Domain,
    pub segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<WellGeometry>,
}

impl PiecewisePotential {
    /// Checks that `segments` tile the domain in order.
    pub fn new(domain: Domain, segments: Vec<Segment>) -> Result<Self> {
        let (start, end) = (domain.start(), domain.end());
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidSpec(format!("empty domain [{start}, {end}]")));
        }
        if segments.is_empty() {
            return Err(Error::InvalidSpec("potential needs at least one segment".into()));
        }
        let tol = 1e-12 * (start.abs().max(end.abs()).max(1.0));
        let mut cursor = start;
        for s in &segments {
            if !(s.v.is_finite() && s.x_lo.is_finite() && s.x_hi.is_finite()) {
                return Err(Error::NonFinite);
            }
            if (s.x_lo - cursor).abs() > tol {
                return Err(Error::InvalidSpec(format!(
                    "segments must tile the domain: gap or overlap at x = {cursor}"
                )));
            }
            if !(s.x_hi > s.x_lo) {
                return Err(Error::InvalidSpec(format!("segment [{}, {}] is empty", s.x_lo, s.x_hi)));
            }
            cursor = s.x_hi;
        }
        if (cursor - end).abs() > tol {
            return Err(Error::InvalidSpec(format!("segments end at {cursor}, domain at {end}")));
        }
        Ok(Self {
            domain,
            segments,
            geometry: None,
        })
    }

    fn with_geometry(mut self, g: WellGeometry) -> Self {
        self.geometry = Some(g);
        self
    }

    /// `V(x)`; infinite outside a hard-wall domain, wrapped on a ring.
    pub fn value(&self, x: f64) -> f64 {
        let x = match self.domain {
            Domain::HardWall { x_min, x_max } => {
                if x < x_min || x > x_max {
                    return f64::INFINITY;
                }
                x
            }
            Domain::Periodic { length } => x.rem_euclid(length),
        };
        self.segments
            .iter()
            .find(|s| x >= s.x_lo && x < s.x_hi)
            .or(self.segments.last())
            .map_or(0.0, |s| s.v)
    }

    /// `int V dx` over `[lo, hi]` within one period (no wrapping).
    fn integral_unwrapped(&self, lo: f64, hi: f64) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let w = hi.min(s.x_hi) - lo.max(s.x_lo);
                if w > 0.0 {
                    s.v * w
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Average of `V` over `[x - h/2, x + h/2]`, wrapping on a ring.
    pub fn cell_average(&self, x: f64, h: f64) -> f64 {
        let (lo, hi) = (x - h / 2.0, x + h / 2.0);
        let total = match self.domain {
            Domain::HardWall { .. } => self.integral_unwrapped(lo, hi),
            Domain::Periodic { length } => (-1..=1)
                .map(|k| {
                    let shift = k as f64 * length;
                    self.integral_unwrapped(lo + shift, hi + shift)
                })
                .sum(),
        };
        total / h
    }

    pub fn max_value(&self) -> f64 {
        self.segments.iter().map(|s| s.v).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the unique highest segment, if it is interior.
    pub(crate) fn central_barrier(&self) -> Result<usize> {
        let top = self.max_value();
        let tops: Vec<usize> = (0..self.segments.len()).filter(|&i| self.segments[i].v == top).collect();
        match tops.as_slice() {
            [i] if *i > 0 && *i + 1 < self.segments.len() => Ok(*i),
            _ => Err(Error::InvalidSpec(
                "expected a double well with a single interior barrier".into(),
            )),
        }
    }

    /// Hard-wall potential on `[lo, hi]` taken from this one.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .filter(|s| s.x_hi > lo && s.x_lo < hi)
            .map(|s| Segment {
                x_lo: s.x_lo.max(lo),
                x_hi: s.x_hi.min(hi),
                v: s.v,
            })
            .collect();
        Self::new(Domain::HardWall { x_min: lo, x_max: hi }, segments)
    }

    /// Symmetric hard-wall potential made of the part left (or right) of `c` and its mirror image.
    pub fn reflect(&self, c: f64, keep_left: bool) -> Result<Self> {
        let (start, end) = (self.domain.start(), self.domain.end());
        let half = if keep_left {
            self.restrict(start, c)?
        } else {
            self.restrict(c, end)?
        };
        let mirrored: Vec<Segment> = half
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                x_lo: 2.0 * c - s.x_hi,
                x_hi: 2.0 * c - s.x_lo,
                v: s.v,
            })
            .collect();
        let (segments, lo, hi) = if keep_left {
            let mut s = half.segments.clone();
            s.extend(mirrored);
            (s, start, 2.0 * c - start)
        } else {
            let mut s = mirrored;
            s.extend(half.segments.iter().copied());
            (s, 2.0 * c - end, end)
        };
        Self::new(Domain::HardWall { x_min: lo, x_max: hi }, merge(segments))
    }
}

/// Joins neighbouring segments of equal height.
fn merge(segments: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for s in segments {
        match out.last_mut() {
            Some(last) if last.v == s.v => last.x_hi = s.x_hi,
            _ => out.push(s),
        }
    }
    out
}

fn check_geometry(v0: f64, l: f64, a: f64) -> Result<()> {
    if !(v0 > 0.0 && l > 0.0 && a > 0.0) || !(v0.is_finite() && l.is_finite() && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need V0, l, a > 0, got V0 = {v0}, l = {l}, a = {a}"
        )));
    }
    Ok(())
}

/// Two wells of width `l` on `[-(l + a/2), l + a/2]` split by a barrier `V0` on `[-a/2, a/2]`.
pub fn square_double_well(v0: f64, l: f64, a: f64) -> Result<PiecewisePotential> {
    tilted_double_well(v0, l, a, 0.0)
}

/// [`square_double_well`] with the left well floor raised to `tilt`.
pub fn tilted_double_well(v0: f64, l: f64, a: f64, tilt: f64) -> Result<PiecewisePotential> {
    check_geometry(v0, l, a)?;
    if !(tilt.is_finite() && tilt < v0) {
        return Err(Error::InvalidParameter(format!("tilt {tilt} must stay below V0 = {v0}")));
    }
    let edge = l + a / 2.0;
    let p = PiecewisePotential::new(
        Domain::HardWall {
            x_min: -edge,
            x_max: edge,
        },
        merge(vec![
            Segment {
                x_lo: -edge,
                x_hi: -a / 2.0,
                v: tilt,
            },
            Segment {
                x_lo: -a / 2.0,
                x_hi: a / 2.0,
                v: v0,
            },
            Segment {
                x_lo: a / 2.0,
                x_hi: edge,
                v: 0.0,
            },
        ]),
    )?;
    Ok(p.with_geometry(WellGeometry {
        well_width: l,
        barrier_width: a,
        barrier_height: v0,
        wells: 2,
        tilt,
    }))
}

/// Ring of `d` cells of length `l + a`, each holding one barrier centred at `l/2 + a/2`.
///
/// Every cell reads: half well `l/2`, barrier `a`, half well `l/2`, so the
/// potential vanishes at both ends of the ring.
pub fn periodic_d_well(d: usize, v0: f64, l: f64, a: f64) -> Result<PiecewisePotential> {
    check_geometry(v0, l, a)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    let cell = l + a;
    let mut segments = Vec::with_capacity(3 * d);
    for c in 0..d {
        let x0 = c as f64 * cell;
        segments.push(Segment {
            x_lo: x0,
            x_hi: x0 + l / 2.0,
            v: 0.0,
        });
        segments.push(Segment {
            x_lo: x0 + l / 2.0,
            x_hi: x0 + l / 2.0 + a,
            v: v0,
        });
        segments.push(Segment {
            x_lo: x0 + l / 2.0 + a,
            x_hi: x0 + cell,
            v: 0.0,
        });
    }
    let p = PiecewisePotential::new(
        Domain::Periodic {
            length: d as f64 * cell,
        },
        merge(segments),
    )?;
    Ok(p.with_geometry(WellGeometry {
        well_width: l,
        barrier_width: a,
        barrier_height: v0,
        wells: d,
        tilt: 0.0,
    }))
}

/// Flat box `[0, width]`.
pub fn square_box(width: f64) -> Result<PiecewisePotential> {
    if !(width > 0.0) {
        return Err(Error::InvalidParameter(format!("box width must be positive, got {width}")));
    }
    PiecewisePotential::new(
        Domain::HardWall {
            x_min: 0.0,
            x_max: width,
        },
        vec![Segment {
            x_lo: 0.0,
            x_hi: width,
            v: 0.0,
        }],
    )
}
