//! Semi-device-independent self-testing for prepare-and-measure scenarios with qubits and qutrits:
//! witness bounds, fidelity certificates, seesaw optimisation and moment-matrix SDP bounds.

pub mod bounds;
pub mod error;
pub mod exec;
pub mod fidelity;
pub mod linalg;
pub mod quantum;
pub mod scenario;
pub mod sdp;
pub mod seesaw;

pub use error::{Error, Result};
pub use exec::Exec;
