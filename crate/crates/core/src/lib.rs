pub mod action;
pub mod automaton;
pub mod cli;
pub mod continuum;
pub mod dynamics;
pub mod error;
pub mod hermitian;
pub mod io;
pub mod observables;
pub mod polynomial;
pub mod spectra;
