pub mod cli;
pub mod decomp;
pub mod error;
pub mod geninv;
pub mod genrand;
pub mod matcore;
pub mod verify;
