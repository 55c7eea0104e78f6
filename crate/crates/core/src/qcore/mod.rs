//! Spin-s operator algebra and magnetization sectors.
//!
//! Basis convention: site 1 is the leftmost (slowest varying) tensor factor and
//! each site lists its `S^z` eigenstates as `m = +s, s-1, ..., -s`. A local
//! *level* index `l` therefore stands for `m = s - l`, and a product state is a
//! sequence of levels, one per site.

mod basis;
mod operator;
pub(crate) mod spin;

pub use basis::{sector_basis, sector_basis_for_quanta, Basis, SectorBasis};
pub use operator::{embed_site, project_to_sector, CsrMatrix, Operator, Storage, DENSE_LIMIT};
pub use spin::{spin_matrices, Spin, SpinMatrices};
