pub mod bench;
pub mod corpus;
pub mod steg;
