//! Shared fixtures for the criterion benches.

use trigap::geometry::t0_enclosure;
use trigap::interval::Interval;
use trigap::ritz::RitzConfig;

pub fn t0() -> Interval {
    t0_enclosure()
}

/// A narrow s-piece near the hard end of the sweep.
pub fn hard_piece() -> Interval {
    Interval::new(0.98, 0.99).expect("ordered")
}

/// Smaller basis so a single bench iteration stays well under a second.
pub fn small_ritz() -> RitzConfig {
    RitzConfig { n_basis: 9, max_refine_depth: 0, ..RitzConfig::default() }
}
