//! Exact-arithmetic checks for tilt-stability walls, Brill-Noether bounds and
//! BMT-type inequalities on Calabi-Yau threefolds.

pub mod exact;
pub mod invariants;
pub mod tiltplane;
pub mod bnbounds;
pub mod bmtchain;
pub mod catalog;
pub mod cli;
