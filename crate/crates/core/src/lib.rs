pub mod charverify;
pub mod clustercat;
pub mod error;
pub mod exactalg;
pub mod frobeniusfk;
pub mod grasseuler;
pub mod quiverrep;
pub mod textio;

pub use error::{Error, Result};
