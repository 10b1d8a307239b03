pub mod construct;
pub mod group;
pub mod ring;
pub mod search;
pub mod selftest;
pub mod structure;
pub mod zmod;
