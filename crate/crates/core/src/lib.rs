pub mod poly;
pub mod groebner;
pub mod exterior;
pub mod foliation;
pub mod schemes;
pub mod cli;
