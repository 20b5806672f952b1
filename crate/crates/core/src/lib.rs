//! The repaired Faure–Loidreau rank-metric public-key cryptosystem.
//!
//! Layers, bottom up:
//!
//! * [`tower`]: the field tower `F_q ⊂ F_{q^m} ⊂ F_{q^{mu}}`, traces and dual bases.
//! * [`linalg`], [`rank`]: exact linear algebra, Moore matrices, rank weight.
//! * [`linpoly`]: linearized polynomials.
//! * [`gabidulin`], [`interleaved`]: codes and their decoders.
//! * [`system`]: parameters, key generation, encryption, decryption.
//! * [`attacks`]: key recovery, linearization and close-error attacks.
//! * [`estimator`]: work factors, key sizes, the comparison table.
//!
//! ```
//! use faure_loidreau::{ChaCha20Rng, FlSystem, Plaintext, SeedableRng, SystemParams};
//!
//! let sys = FlSystem::new(SystemParams::new(2, 16, 3, 16, 7, 5)).unwrap();
//! let mut rng = ChaCha20Rng::seed_from_u64(1);
//! let (sk, pk) = sys.keygen_repaired(&mut rng).unwrap();
//! let msg = Plaintext::from_free(vec![sys.tower().mid().generator(); 4], 3);
//! let c = sys.encrypt(&pk, &msg, &mut rng).unwrap();
//! assert_eq!(sys.decrypt(&sk, &pk, &c).unwrap(), msg);
//! ```

pub mod attacks;
pub mod error;
pub mod estimator;
pub mod field;
pub mod gabidulin;
pub mod interleaved;
pub mod linalg;
pub mod linpoly;
mod poly;
pub mod rank;
pub mod system;
pub mod tower;

pub use error::{AttackError, CodeError, DecodingFailure, FailureDetected, FieldError, FlError, InfeasibleRank};
pub use field::{Field, PrimeField};
pub use gabidulin::GabidulinCode;
pub use interleaved::{InterleavedCode, InterleavedDecodeResult};
pub use linalg::Matrix;
pub use linpoly::LinPoly;
pub use system::{Ciphertext, FlSystem, ParamViolation, Plaintext, PrivateKey, PublicKey, SystemParams, Tier};
pub use tower::{FieldTower, MidElem, MidField, TopElem, TopField};

/// The seedable generator used for every deterministic run (ChaCha20).
pub use rand_chacha::ChaCha20Rng;
pub use rand::SeedableRng;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/rank_metric.md")]
    mod rank_metric {}
    #[doc = include_str!("../../../book/src/gabidulin.md")]
    mod gabidulin {}
    #[doc = include_str!("../../../book/src/interleaved.md")]
    mod interleaved {}
    #[doc = include_str!("../../../book/src/cryptosystem.md")]
    mod cryptosystem {}
    #[doc = include_str!("../../../book/src/attacks.md")]
    mod attacks {}
    #[doc = include_str!("../../../book/src/security.md")]
    mod security {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
