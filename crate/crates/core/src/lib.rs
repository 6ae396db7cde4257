pub mod cli;
pub mod mgt;
pub mod oracle;
pub mod random;
pub mod strata;
pub mod symmetric;
pub mod trees;
pub mod verify;
