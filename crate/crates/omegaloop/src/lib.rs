//! Analytical toolkit for planar omega-loop microstrip resonators.
//!
//! The crate models a half-wave microstrip resonator terminated by a small
//! shorted loop, the kind used to drive spin transitions in color centers a
//! few tens of micrometers from the board. It covers the chain from board
//! geometry to spin drive:
//!
//! * [`txline`]: quasi-static microstrip formulas (impedance, effective
//!   permittivity, half-wave resonance, skin effect)
//! * [`resnet`]: coupled-resonator lineshapes, bandwidths, field factors
//! * [`fields`]: power to magnetic-field conversion and the axial decay model
//! * [`nvphys`]: NV-center spin physics (Rabi rates, pi pulses, transitions)
//! * [`optics`]: collection efficiency through an optical access hole
//! * [`sparams`]: Touchstone and CSV trace I/O
//! * [`fit`]: resonator parameter extraction from measured traces
//! * [`designer`]: end-to-end design reports and trade-off sweeps
//! * [`cli`]: the `omegaloop` command-line front end
//!
//! Frequencies are Hz, lengths m, powers W, fields A/m, impedances Ohm
//! throughout. See the examples directory for runnable walkthroughs of each
//! capability.

pub mod constants;
pub mod error;
pub mod designer;
pub mod fields;
pub mod fit;
mod jacobi;
mod lm;
pub mod nvphys;
pub mod optics;
pub mod report;
pub mod resnet;
pub mod sparams;
pub mod txline;

pub use error::{Error, Result};

pub mod cli;
