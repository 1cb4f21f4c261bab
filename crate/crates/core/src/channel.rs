//! Binary erasure channel and the agreement relation between observations.

use rand::Rng;
use thiserror::Error;

use crate::model::Read;
use crate::word::{BitWord, NoisyWord};

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("erasure probability {0} is outside [0, 1]")]
    BadErasureProb(f64),
    #[error("draw count must be at least 1")]
    NoDraws,
}

/// Channel configuration: erasure probability and the number of independent
/// draws (noisy copies) made per source word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub erasure_prob: f64,
    pub draws: usize,
}

impl ChannelParams {
    pub fn new(erasure_prob: f64, draws: usize) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&erasure_prob) || erasure_prob.is_nan() {
            return Err(ChannelError::BadErasureProb(erasure_prob));
        }
        if draws == 0 {
            return Err(ChannelError::NoDraws);
        }
        Ok(ChannelParams { erasure_prob, draws })
    }
}

/// Sends `word` through the erasure channel: each position is independently
/// erased with probability `p`. The boundary values `p = 0` (identity) and
/// `p = 1` (everything erased) are accepted.
pub fn transmit(word: &BitWord, p: f64, rng: &mut impl Rng) -> NoisyWord {
    assert!((0.0..=1.0).contains(&p), "erasure probability {p} outside [0, 1]");
    let mut out = NoisyWord::from_clean(word);
    for pos in 0..word.len() {
        // gen::<f64>() is uniform on [0, 1), so p = 1 always erases.
        if rng.gen::<f64>() < p {
            out.erase(pos);
        }
    }
    out
}

/// Agreement relation: two observations of equal length agree when every
/// position erased in neither carries the same bit.
///
/// Reflexive and symmetric but *not* transitive (`0*` agrees with both `00`
/// and `01`, which disagree with each other).
pub fn compatible(a: &NoisyWord, b: &NoisyWord) -> bool {
    assert_eq!(a.len(), b.len(), "agreement is only defined for equal lengths");
    let (av, bv) = (a.value_limbs(), b.value_limbs());
    for i in 0..a.limbs_len() {
        if (av[i] ^ bv[i]) & a.known_limb(i) & b.known_limb(i) != 0 {
            return false;
        }
    }
    true
}

/// True when the observation could have been produced by sending `codeword`
/// through the channel, i.e. every non-erased position matches it.
pub fn consistent_with_codeword(obs: &NoisyWord, codeword: &BitWord) -> bool {
    assert_eq!(obs.len(), codeword.len(), "length mismatch");
    let (ov, cv) = (obs.value_limbs(), codeword.limbs());
    for i in 0..obs.limbs_len() {
        if (ov[i] ^ cv[i]) & obs.known_limb(i) != 0 {
            return false;
        }
    }
    true
}

/// Full-read agreement: both the address parts and the payload parts agree.
///
/// When used to test candidate group membership, the payload evaluation is
/// what the pruning statistics count as one data comparison; the address part
/// acts as a free prefilter.
pub fn reads_compatible(a: &Read, b: &Read) -> bool {
    compatible(&a.noisy_address, &b.noisy_address) && compatible(&a.noisy_payload, &b.noisy_payload)
}
