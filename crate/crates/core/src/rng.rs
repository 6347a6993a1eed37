//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from ChaCha8 keyed by a 64-bit
//! seed, with the 64-bit ChaCha stream id selecting an independent
//! substream. Work is cut into fixed-size chunks and chunk `i` always uses
//! stream `tag | i`, so results do not depend on the number of worker
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_130_801;

/// Number of draws handled by one stream in the chunked helpers.
pub const CHUNK_LEN: usize = 1 << 12;

pub type StreamRng = ChaCha8Rng;

/// Stream namespaces. The high 16 bits of a stream id carry the tag.
pub mod tags {
    pub const QUICKSELECT: u64 = 1 << 48;
    pub const CFTP: u64 = 2 << 48;
    pub const KERNEL_DIRECT: u64 = 3 << 48;
    pub const KERNEL_MULTIGAMMA: u64 = 4 << 48;
    pub const VARIANCE: u64 = 5 << 48;
    pub const CONVERGENCE: u64 = 6 << 48;
    pub const MOVES: u64 = 7 << 48;
    pub const INVERSE_TRANSFORM: u64 = 8 << 48;
}

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on `[0, 1)` with 53 significant bits.
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

/// Produces `count` items, `CHUNK_LEN` per stream, in stream order.
///
/// `draw` is called once per item with the chunk's generator.
pub fn chunked<T, F>(seed: u64, tag: u64, count: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng) -> T + Sync,
{
    let chunks = count.div_ceil(CHUNK_LEN);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, tag | chunk as u64);
            let len = CHUNK_LEN.min(count - chunk * CHUNK_LEN);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Fallible variant of [`chunked`]; the first error in stream order wins.
pub fn try_chunked<T, E, F>(seed: u64, tag: u64, count: usize, draw: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut StreamRng) -> Result<T, E> + Sync,
{
    let chunks = count.div_ceil(CHUNK_LEN);
    let parts: Vec<Result<Vec<T>, E>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, tag | chunk as u64);
            let len = CHUNK_LEN.min(count - chunk * CHUNK_LEN);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}
