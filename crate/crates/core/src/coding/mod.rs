//! Linear index codes over binary extension fields.
//!
//! Every color gets a generator column; the transmission is `X = G w`, where
//! `w_c` is the sum of the distinct packets colored `c`. With an MDS
//! generator of `nu` rows, every user recovers each of its packets from the
//! `nu` transmitted rows and its cache.

mod codec;
pub mod field;
mod frame;
mod linalg;
mod mds;

pub use codec::{decode, encode, verify_round_trip, Codeword, PacketStore};
pub use field::{Field, Gf256, Gf65536};
pub use frame::{parse_frame, write_frame};
pub use mds::{mds_generator, CodingMatrix};

/// The field used unless a caller asks otherwise.
pub type DefaultField = Gf65536;
