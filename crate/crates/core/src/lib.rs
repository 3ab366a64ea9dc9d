//! Shards of root hyperplanes and stability domains of bricks for
//! symmetrizable Cartan data.
//!
//! The crate works with exact arithmetic throughout: integer roots, rational
//! cones in weight space, and species modules over finite field towers. See
//! the guide in `book/` for a walk through the main computations.
//!
//! ```
//! use shard_forge::cartan::bundled;
//! use shard_forge::shards::shards_direct;
//!
//! let d4 = bundled::load("d4").unwrap();
//! let shards = shards_direct(&d4, &"2,1,1,1".parse().unwrap()).unwrap();
//! assert_eq!(shards.len(), 14);
//! ```

#![allow(clippy::mutable_key_type, clippy::needless_range_loop, clippy::wrong_self_convention)]

pub mod cartan;
pub mod cone;
pub mod demos;
pub mod error;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod rank_two;
pub mod reflection;
pub mod roots;
pub mod shards;
pub mod species;
pub mod stability;

pub use cartan::{CartanData, Root, Weight};
pub use cone::{Cone, Sign};
pub use error::{Error, Result};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub struct $name;
        )*
    };
}

book_chapters! {
    BookIntro => "intro.md",
    BookCartan => "cartan.md",
    BookShards => "shards.md",
    BookSpecies => "species.md",
    BookBricks => "bricks.md",
    BookStability => "stability.md",
    BookDependence => "dependence.md",
    BookCli => "cli.md",
}
