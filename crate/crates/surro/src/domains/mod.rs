//! Benchmark domains: the two abstract trap spaces, grounded travel tasks,
//! the task text format, and a seeded random-task generator.

pub mod btree;
pub mod cycle;
pub mod random;
pub mod strips;
pub mod taskfile;
pub mod travel;
