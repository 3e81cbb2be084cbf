//! Gait synthesis and dynamics embedding for planar bipeds.
//!
//! The crate plans 3D humanoid walking by composing planar reduced-order
//! models — a spring-loaded inverted pendulum with leg-length actuation in
//! the sagittal plane and a hybrid linear inverted pendulum in the lateral
//! plane — and embeds the resulting center-of-mass and ground-reaction-force
//! references onto a planar multi-link biped through a CLF-QP controller.
//!
//! Module map:
//! - [`solver`]: dense active-set QP and an SQP layer for the collocation NLPs
//! - [`rom`]: reduced-order model dynamics, spring law, impact maps
//! - [`hybridsim`]: event-driven hybrid-system integration
//! - [`planner`]: periodic gaits, P2 orbits, transition optimization, 3D composition
//! - [`biped`]: planar 7-link floating-base robot model
//! - [`clfqp`]: control Lyapunov function QP with contact-force matching
//! - [`embed`]: closed-loop walking simulation wiring planner output to the controller
//! - [`batch`]: data-parallel helpers (rayon behind the `parallel` feature)

pub mod batch;
pub mod biped;
pub mod clfqp;
pub mod embed;
pub mod hybridsim;
pub mod io;
pub mod planner;
pub mod rom;
pub mod solver;
