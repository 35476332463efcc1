//! Exact arithmetic in the braid-group quotients `B_n/Γ₂(P_n)` and
//! `B_n/Γ₃(P_n)`, and machine-checked embeddings of finite groups in them.

pub mod braid;
pub mod cert;
pub mod constructions;
pub mod error;
pub mod groups;
pub mod nilpotent;
pub mod perm;
pub mod quotient;
pub mod snf;
pub mod splitting;

pub use braid::{AWord, BraidWord, FreeWord};
pub use cert::{check_cert, EmbeddingCert};
pub use error::{Error, Obstruction, Result};
pub use groups::{FinGroup, OrbitBasis, PermRep};
pub use nilpotent::{PairVec, PureNf, TripleVec};
pub use perm::{PairIdx, Perm, SignedTriple, TripleIdx};
pub use quotient::{Order, QElem};
