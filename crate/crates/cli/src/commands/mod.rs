pub mod pir;
pub mod reduce;
pub mod report;
pub mod sweep;
pub mod verify;
