use serde::{Deserialize, Serialize};

use crate::ring::BiDegree;

/// Inclusive rectangle of bidegrees scanned by the degreewise checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, t_min: i64, t_max: i64) -> Self {
        Window { x_min, x_max, t_min, t_max }
    }

    pub fn bidegrees(&self) -> Vec<BiDegree> {
        let mut out = Vec::new();
        for t in self.t_min..=self.t_max {
            for x in self.x_min..=self.x_max {
                out.push(BiDegree::new(x, t));
            }
        }
        out
    }

    pub fn t_range(&self) -> std::ops::RangeInclusive<i64> {
        self.t_min..=self.t_max
    }

    pub fn x_range(&self) -> std::ops::RangeInclusive<i64> {
        self.x_min..=self.x_max
    }

    pub fn widen_t(&self, lo: i64, hi: i64) -> Window {
        Window { t_min: self.t_min - lo, t_max: self.t_max + hi, ..*self }
    }

    pub fn widen_x(&self, lo: i64, hi: i64) -> Window {
        Window { x_min: self.x_min - lo, x_max: self.x_max + hi, ..*self }
    }

    pub fn t_extent(&self) -> i64 {
        (self.t_max - self.t_min).abs()
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x {}..{}, t {}..{}", self.x_min, self.x_max, self.t_min, self.t_max)
    }
}
