pub mod approx;
pub mod assignment;
pub mod domains;
pub mod error;
pub mod exact;
pub mod fpt;
pub mod io;
pub mod isomorphism;
pub mod limits;
pub mod map;
pub mod metrics;
pub mod model;
mod pairing;
