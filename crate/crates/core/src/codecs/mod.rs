//! Bit strings, self-delimiting codes and arrangement ranking.

mod bits;
mod combin;
mod selfdelim;

pub use bits::{BitReader, BitString};
pub use combin::{
    baseline_length, binomial, ceil_log2, ceil_log2_u64, counting_bound_violation,
    rank_arrangement, rank_subset, unrank_arrangement, unrank_subset, ArrangementIndex,
};
pub use selfdelim::{
    decode_nat, encode_nat, encoded_nat_len, nat_len, nat_to_string, pair, sd_bar, sd_prime,
    sd_prime_decode, sd_prime_len, sd_unbar, string_to_nat, unpair,
};
