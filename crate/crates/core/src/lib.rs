pub mod engine;
pub mod ffield;
pub mod poly;
pub mod postproc;
pub mod reduce;
pub mod sig;
pub mod systems;
