//! Link-level PHY simulation of IEEE 802.11p and C-V2X sidelink over
//! vehicular tapped-delay-line channels.
//!
//! LLR convention used everywhere: a positive value means bit 0 is more likely.

pub mod channel;
pub mod cv2x;
pub mod dot11p;
pub mod dsp;
pub mod fec;
pub mod harness;

mod error;

pub use error::{Error, Result};
