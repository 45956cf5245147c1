pub mod burnside;
pub mod linkio;
pub mod fixtures;
pub mod semisimp;
pub mod f2algebra;
pub mod moransq;
pub mod lssq;
pub mod harness;
