pub mod arcs;
pub mod buchstab;
pub mod expsum;
pub mod identities;
pub mod primes;
pub mod scaling;
pub mod singular;
pub mod verify;
