//! Desk-scale unsupervised domain adaptation for joint 3D hand-object
//! reconstruction.
//!
//! The crate builds everything needed to run the full pipeline on procedural
//! domains: geometric kernels and metrics, differentiable parametric hand and
//! object models, a seeded renderer producing labeled source frames and
//! unlabeled target video, cycle-consistent image translation with a
//! task-loss constraint, temporal-consistency self-training on target
//! sequences, and the evaluation/baseline suite that reports hand EPE,
//! Chamfer error, penetration depth and intersection volume.

pub mod autodiff;
pub mod config;
pub mod evalsuite;
pub mod flow;
pub mod geometry;
pub mod handobj;
pub mod imgio;
pub mod losses;
pub mod networks;
pub mod plot;
pub mod synth;
pub mod training;
