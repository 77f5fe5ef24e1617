//! Hecke trees and Hecke spheres on the modular surface `X(1)`, truncated
//! p-adic arithmetic, the p-adic solenoid, and the Bruhat-Tits tree of
//! `PGL(2, Q_p)`, with tools for measuring how Hecke spheres equidistribute.

pub mod bttree;
pub mod cli;
pub mod equidist;
pub mod hecke;
pub mod modsurface;
pub mod padic;
pub mod rational;
pub mod solenoid;
