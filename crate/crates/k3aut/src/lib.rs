pub mod cache;
pub mod certify;
pub mod fixtures;
pub mod json;
pub mod pipeline;
pub mod report;
pub mod verify;
