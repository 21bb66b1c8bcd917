pub mod homology;
pub mod mechanics;
pub mod complexes;
pub mod sequences;
pub mod obstructions;
pub mod dynamics;
pub mod io;
pub mod cli;
