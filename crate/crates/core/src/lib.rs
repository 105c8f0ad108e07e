//! Rich Representation Language toolkit: typed networks, scene descriptions,
//! and a pipeline from dialogue acts to a multimodal timeline.

pub mod affect;
pub mod config;
pub mod document;
pub mod fixtures;
pub mod gesture;
pub mod io;
pub mod network;
pub mod pipeline;
pub mod prosody;
pub mod realizer;
pub mod scene;
pub mod tbox;
pub mod temporal;
pub mod timeline;

pub use network::{Node, NodeId, NodeKind, TypedNetwork};
