//! Matrix algebra over [`LocalElement`](crate::localring::LocalElement)s.

mod eigen;
mod iwasawa;
mod mat;
mod matrix;
pub mod roots;
mod smith;



pub use eigen::{eigenvalue_multiplicities, generalized_eigenspace, Filtration};
pub use iwasawa::iwasawa_decompose;
pub use mat::{Mat, MatRepr};
pub use matrix::{Matrix, RingElem};
pub use smith::{kernel_basis, rank_at_threshold, rank_strict, smith, solve, RankInfo, SmithForm};

