use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knots needed for a non-trivial natural cubic spline.
pub const MIN_KNOTS: usize = 4;

/// Sedimentary microfacies. The lateral succession is cyclic:
/// channel → sand → mud → sand → channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Facies {
    /// Distributary channel.
    Channel = 0,
    /// Inter-distributary sand.
    Sand = 1,
    /// Inter-distributary mud.
    Mud = 2,
}

impl Facies {
    pub const ALL: [Facies; 3] = [Facies::Channel, Facies::Sand, Facies::Mud];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: i64) -> Result<Self> {
        match code {
            0 => Ok(Facies::Channel),
            1 => Ok(Facies::Sand),
            2 => Ok(Facies::Mud),
            other => Err(Error::Validation(format!(
                "facies code {other} is not one of 0 (channel), 1 (sand), 2 (mud)"
            ))),
        }
    }

    /// Steps between two facies along the succession: 0 same, 1 adjacent,
    /// 2 between channel and mud.
    pub fn sequence_distance(self, other: Facies) -> usize {
        (self.code() as i32 - other.code() as i32).unsigned_abs() as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Facies::Channel => "distributary channel",
            Facies::Sand => "inter-distributary sand",
            Facies::Mud => "inter-distributary mud",
        }
    }
}

impl From<Facies> for u8 {
    fn from(f: Facies) -> u8 {
        f.code()
    }
}

impl TryFrom<u8> for Facies {
    type Error = Error;

    fn try_from(code: u8) -> Result<Self> {
        Facies::from_code(code as i64)
    }
}

impl fmt::Display for Facies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub depth: f64,
    /// Millidarcies.
    pub permeability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Well {
    pub well_id: String,
    pub x: f64,
    pub y: f64,
    pub facies: Facies,
    /// Ordered by strictly increasing depth.
    pub samples: Vec<Sample>,
}

impl Well {
    /// Checks ordering and value rules; does not check the knot count.
    pub fn validate(&self) -> Result<()> {
        let id = &self.well_id;
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::Validation(format!("well {id}: non-finite coordinates")));
        }
        for (k, s) in self.samples.iter().enumerate() {
            if !s.depth.is_finite() {
                return Err(Error::Validation(format!("well {id}: non-finite depth at sample {k}")));
            }
            if !s.permeability.is_finite() {
                return Err(Error::Validation(format!(
                    "well {id}: non-finite permeability at depth {}",
                    s.depth
                )));
            }
            if s.permeability < 0.0 {
                return Err(Error::Validation(format!(
                    "well {id}: negative permeability {} at depth {}",
                    s.permeability, s.depth
                )));
            }
        }
        for w in self.samples.windows(2) {
            if w[1].depth <= w[0].depth {
                return Err(Error::Validation(format!(
                    "well {id}: depths must be strictly increasing ({} then {})",
                    w[0].depth, w[1].depth
                )));
            }
        }
        Ok(())
    }

    pub fn depth_range(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.depth, self.samples.last()?.depth))
    }

    pub fn planar_distance(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }
}
