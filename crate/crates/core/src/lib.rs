//! Reverse engineering of headless CMS schemas into a platform-independent
//! model, plus the runtime drivers and code generator for typed clients.

pub mod codegen;
pub mod diagram;
pub mod discovery;
pub mod drivers;
pub mod http;
pub mod metamodel;
pub mod mock;
pub mod model_io;

pub use serde_json;
