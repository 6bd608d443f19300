//! Brute-force counts over F_{q^r}, independent of the closed forms.
//!
//! Partition mode materializes every affine or projective orbit inside S and
//! lets Frobenius act on the orbit keys. Stream mode stores nothing and only
//! counts fixed sets for one subgroup at a time.

mod partition;
mod roots;
mod stream;

pub use partition::{partition_census, KeyStats, PartitionCensus, DEFAULT_PARTITION_CAP};
pub use roots::{
    oracle_root_count, quad_divisibility_check, root_tally, roots_per_projective_set, RootTally,
};
pub use stream::{
    stream_fixed_count, stream_fixed_count_with, ClassTally, Scope, StreamOptions, StreamStats,
    DEFAULT_CHUNK,
};
