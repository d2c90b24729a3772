//! Support code for the `nearfact` command: catalog and checkpoint files,
//! campaigns, the known index-2 table and the solver benchmark.

pub mod bench;
pub mod campaign;
pub mod catalog;
pub mod checkpoint;
pub mod table3;
