//! Seeded random streams.
//!
//! Every stochastic decision in a run is drawn from one [`RngStream`]. The
//! generator is ChaCha8, whose output is specified independently of platform and
//! pointer width, and integer draws go through `u64` so that index sampling is
//! identical on 32- and 64-bit targets.
//!
//! A stream can optionally keep a tape of every draw it hands out. Tests use the
//! tape to replay a computation through an independent transcription.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One recorded draw.
#[derive(Debug, Clone, PartialEq)]
pub enum Draw {
    /// Uniform real in `[0, 1)`.
    Uniform(f64),
    /// Uniform index in `0..n`.
    Index(usize),
    /// Fair coin; `true` means the `+` branch.
    Coin(bool),
    /// `k` distinct indices out of `0..n`, in draw order.
    Subset(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
    tape: Option<Vec<Draw>>,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tape: None,
        }
    }

    /// A stream that records every draw; see [`RngStream::take_tape`].
    pub fn recording(seed: u64) -> Self {
        Self {
            tape: Some(Vec::new()),
            ..Self::new(seed)
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Returns the draws recorded so far and clears the tape.
    pub fn take_tape(&mut self) -> Vec<Draw> {
        self.tape.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn record(&mut self, draw: Draw) {
        if let Some(tape) = self.tape.as_mut() {
            tape.push(draw);
        }
    }

    /// Uniform real in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        let u: f64 = self.rng.random();
        self.record(Draw::Uniform(u));
        u
    }

    /// A vector of `len` independent uniforms.
    pub fn uniform_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.uniform()).collect()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index draw from an empty range");
        let i = self.rng.random_range(0..n as u64) as usize;
        self.record(Draw::Index(i));
        i
    }

    pub fn coin(&mut self) -> bool {
        let heads = self.rng.random_range(0..2u64) == 1;
        self.record(Draw::Coin(heads));
        heads
    }

    /// `k` distinct indices out of `0..n` chosen uniformly (partial Fisher-Yates).
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot pick {k} distinct items out of {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for slot in 0..k {
            let pick = slot + self.rng.random_range(0..(n - slot) as u64) as usize;
            pool.swap(slot, pick);
        }
        pool.truncate(k);
        if let Some(tape) = self.tape.as_mut() {
            tape.push(Draw::Subset(pool.clone()));
        }
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::new(7);
        let mut b = RngStream::new(7);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
            assert_eq!(a.index(13), b.index(13));
            assert_eq!(a.subset(10, 4), b.subset(10, 4));
        }
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = RngStream::new(1);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn subset_is_distinct() {
        let mut r = RngStream::new(3);
        for k in 0..=20 {
            let mut s = r.subset(20, k);
            assert_eq!(s.len(), k);
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), k);
            assert!(s.iter().all(|&i| i < 20));
        }
    }

    #[test]
    fn tape_records_in_order() {
        let mut r = RngStream::recording(11);
        let u = r.uniform();
        let i = r.index(5);
        let c = r.coin();
        let s = r.subset(4, 2);
        let tape = r.take_tape();
        assert_eq!(
            tape,
            vec![Draw::Uniform(u), Draw::Index(i), Draw::Coin(c), Draw::Subset(s)]
        );
        assert!(r.take_tape().is_empty());
    }

    #[test]
    fn plain_stream_keeps_no_tape() {
        let mut r = RngStream::new(11);
        r.uniform();
        assert!(r.take_tape().is_empty());
    }
}
