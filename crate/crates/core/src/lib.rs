//! Exact invariant theory of finite complex reflection groups and reflection
//! cosets: twisted degrees and codegrees, regular eigenvalues, and the
//! identities relating them.

pub mod cyclo;
pub mod linalg;
pub mod groups;
pub mod catalog;
pub mod molien;
pub mod regularity;
pub mod harmonics;
pub mod coinv;
pub mod cli;
