pub mod certifier;
pub mod corpus;
pub mod graph;
pub mod orientations;
pub mod poly;
pub mod report;
pub mod tree_genfun;
pub mod verify;
pub mod whitney;
