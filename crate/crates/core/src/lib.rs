//! Headless simulation of vision-based tactile sensors.
//!
//! A [`scene::Scene`] mirrors bodies and contact reports coming from a
//! physics source. Each frame the scene is turned into a
//! [`scene::DeformedScene`] where contacted bodies are pushed into the gel
//! according to the sensor's force mapping, and a [`render::Renderer`]
//! rasterizes it into per-camera RGB and depth images.

pub mod config;
pub mod geometry;
pub mod harness;
pub mod imaging;
pub mod render;
pub mod scene;
