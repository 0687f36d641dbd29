//! Connectedness of friends-and-strangers graphs `FS(Lollipop_{n-k,k}, Y)`.
//!
//! * [`graph`]: small bitset graphs, family constructors, graph6.
//! * [`fs`]: the explicit friends-and-strangers graph and its components.
//! * [`theory`]: the induced-subgraph decision procedure and disconnection
//!   certificates.
//! * [`lab`]: enumeration, sampling, and verification campaigns.
//! * [`cli`]: command implementations behind the `fs-lollipop` binary.

pub mod cli;
pub mod fs;
pub mod graph;
pub mod lab;
pub mod theory;
