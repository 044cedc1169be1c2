pub mod bundle;
pub mod chow;
pub mod classify;
pub mod cli;
pub mod cohomology;
pub mod les;
pub mod monad;
pub mod parse;
