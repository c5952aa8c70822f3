//! Sieve-backed primality and prime-counting table.
//!
//! Only odd numbers are stored: bit `i` of the bitmap stands for `2i + 1`, and
//! 2 is answered without touching the bitmap. Alongside the bitmap we keep the
//! number of odd primes below every block boundary, so `pi(x)` costs one table
//! read plus a popcount over at most one block.
//!
//! The bitmap is filled by a segmented sieve: the base primes up to `sqrt(limit)`
//! are found first, then each segment of the range is crossed off in turn so the
//! working set stays in cache.

use crate::error::{Error, Result};

/// Integers per sieve segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 18;
/// Integers per cumulative-count block.
pub const DEFAULT_BLOCK_SIZE: u64 = 4096;
/// Upper bound on the bytes a table may allocate (bitmap plus block index).
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Each bitmap word holds 64 odd numbers, i.e. 128 integers.
const INTEGERS_PER_WORD: u64 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_size: u64,
    /// Must be a positive multiple of 128.
    pub block_size: u64,
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            block_size: DEFAULT_BLOCK_SIZE,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl SieveConfig {
    /// Bytes a table over `[0, limit]` would hold under this configuration.
    pub fn footprint(&self, limit: u64) -> u64 {
        let words = limit / INTEGERS_PER_WORD + 1;
        let blocks = limit / self.block_size + 1;
        (words + blocks) * 8
    }
}

/// Immutable primality oracle over `[0, limit]`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    block_size: u64,
    bits: Vec<u64>,
    /// `block_counts[k]` = number of odd primes `< k * block_size`.
    block_counts: Vec<u64>,
}

impl PrimeTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, SieveConfig::default())
    }

    pub fn build_with(limit: u64, config: SieveConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be at least 2, got {limit}")));
        }
        if config.segment_size < 2 {
            return Err(Error::invalid("segment size must be at least 2"));
        }
        if config.block_size == 0 || config.block_size % INTEGERS_PER_WORD != 0 {
            return Err(Error::invalid(format!(
                "block size must be a positive multiple of {INTEGERS_PER_WORD}, got {}",
                config.block_size
            )));
        }
        let needed = config.footprint(limit);
        if needed > config.memory_budget {
            return Err(Error::Resource(format!(
                "a table up to {limit} needs {needed} bytes, budget is {}",
                config.memory_budget
            )));
        }

        let bits = sieve_odd_bitmap(limit, config.segment_size);
        let block_counts = cumulative_counts(&bits, limit, config.block_size);
        Ok(PrimeTable {
            limit,
            block_size: config.block_size,
            bits,
            block_counts,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    /// Errors with [`Error::OutOfCoverage`] unless `n <= limit`.
    #[inline]
    pub fn check_covered(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::OutOfCoverage { n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_covered(n)?;
        Ok(self.is_prime_unchecked(n))
    }

    /// Primality without the coverage check. Callers must have validated `n <= limit`.
    #[inline]
    pub(crate) fn is_prime_unchecked(&self, n: u64) -> bool {
        debug_assert!(n <= self.limit);
        if n & 1 == 0 {
            return n == 2;
        }
        let i = n >> 1;
        (self.bits[(i >> 6) as usize] >> (i & 63)) & 1 == 1
    }

    /// Number of primes `<= x`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.check_covered(x)?;
        Ok(self.odd_primes_upto(x) + u64::from(x >= 2))
    }

    /// Number of odd primes `p` with `lo <= p <= hi`. Both endpoints are included.
    pub fn odd_prime_count(&self, lo: u64, hi: u64) -> Result<u64> {
        if lo > hi {
            return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
        }
        self.check_covered(hi)?;
        let below = if lo == 0 { 0 } else { self.odd_primes_upto(lo - 1) };
        Ok(self.odd_primes_upto(hi) - below)
    }

    /// Iterator over all primes in the table, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2).chain(
            (3..=self.limit)
                .step_by(2)
                .filter(move |&n| self.is_prime_unchecked(n)),
        )
    }

    fn odd_primes_upto(&self, x: u64) -> u64 {
        let block = x / self.block_size;
        let start = block * self.block_size / 2;
        // Odd numbers <= x have indices 0..(x + 1) / 2.
        let end = (x + 1) / 2;
        self.block_counts[block as usize] + count_bits(&self.bits, start, end)
    }
}

/// Popcount of bits in `[start, end)`. `start` must be word-aligned.
fn count_bits(bits: &[u64], start: u64, end: u64) -> u64 {
    debug_assert_eq!(start % 64, 0);
    if end <= start {
        return 0;
    }
    let first = (start / 64) as usize;
    let last = (end / 64) as usize;
    let mut total: u64 = bits[first..last].iter().map(|w| u64::from(w.count_ones())).sum();
    let tail = end % 64;
    if tail != 0 {
        total += u64::from((bits[last] & ((1u64 << tail) - 1)).count_ones());
    }
    total
}

fn sieve_odd_bitmap(limit: u64, segment_size: u64) -> Vec<u64> {
    let odd_count = (limit + 1) / 2;
    let words = (limit / INTEGERS_PER_WORD + 1) as usize;
    let mut bits = vec![u64::MAX; words];
    // Clear the padding past the last odd number, then 1.
    let full = (odd_count / 64) as usize;
    let rem = odd_count % 64;
    if full < words {
        bits[full] = if rem == 0 { 0 } else { (1u64 << rem) - 1 };
        for w in &mut bits[full + 1..] {
            *w = 0;
        }
    }
    bits[0] &= !1;

    let root = isqrt(limit);
    let base: Vec<u64> = small_odd_primes(root);
    // Next index to cross off for each base prime; index i <-> 2i + 1.
    let mut next: Vec<u64> = base.iter().map(|&p| (p * p) / 2).collect();

    let seg_indices = (segment_size / 2).max(1);
    let mut seg_start = 0;
    while seg_start < odd_count {
        let seg_end = (seg_start + seg_indices).min(odd_count);
        for (p, cursor) in base.iter().zip(next.iter_mut()) {
            let mut i = *cursor;
            while i < seg_end {
                bits[(i >> 6) as usize] &= !(1u64 << (i & 63));
                i += p;
            }
            *cursor = i;
        }
        seg_start = seg_end;
    }
    bits
}

/// Odd primes `<= n` by a plain sieve; used for the base primes only.
fn small_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in (3..=n).step_by(2) {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        for m in (p * p..=n).step_by(2 * p) {
            composite[m] = true;
        }
    }
    out
}

fn cumulative_counts(bits: &[u64], limit: u64, block_size: u64) -> Vec<u64> {
    let words_per_block = (block_size / INTEGERS_PER_WORD) as usize;
    let blocks = (limit / block_size + 1) as usize;
    let mut counts = Vec::with_capacity(blocks);
    let mut running = 0u64;
    for k in 0..blocks {
        counts.push(running);
        let lo = (k * words_per_block).min(bits.len());
        let hi = ((k + 1) * words_per_block).min(bits.len());
        running += bits[lo..hi].iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
    }
    counts
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
