pub mod boffa;
pub mod cli;
pub mod formula;
pub mod hfset;
pub mod search;
pub mod stratification;
pub mod structure;
