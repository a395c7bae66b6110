pub mod bits;
pub mod commitments;
pub mod digest;
pub mod prg;
pub mod structures;
pub mod we;
pub mod induced;
pub mod compiler;
pub mod scheme;
pub mod harness;
