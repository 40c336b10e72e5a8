pub mod dynamics;
pub mod fitkit;
pub mod models;
pub mod qcore;
mod quadrature;
pub mod specfun;
