//! Computing with finite graphs of groups over finite p-groups and finitely
//! generated free groups: reduction, collapse and refinement, Bass-Serre tree
//! balls, trees of cylinders, accessibility audits, deformation-space checks,
//! JSJ certification over finite edge groups, and constructive free-splitting
//! criteria via F_p homology.

pub mod bass_serre;
pub mod error;
pub mod fp;
pub mod gog;
pub mod groups;
pub mod verdict;

pub use error::Error;
pub use verdict::Verdict;
