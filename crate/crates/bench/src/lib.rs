//! Fixed inputs shared by the benchmarks.

use credpool::theoremlab::random_profile;
use credpool::Profile;

/// `count` seeded profiles of incoherent agents on `m` cells.
pub fn profiles(count: u64, m: usize, agents: usize) -> Vec<Profile> {
    (0..count).map(|s| random_profile(s, m, agents, false)).collect()
}
