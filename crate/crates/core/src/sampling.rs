//! Seeded low-discrepancy sample points.

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `i` in the given base.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points in an axis-aligned box. The seed selects the starting
/// index, so distinct seeds give disjoint stretches of the same sequence.
#[derive(Clone, Debug)]
pub struct Halton<const D: usize> {
    lo: [f64; D],
    hi: [f64; D],
    next: u64,
}

impl<const D: usize> Halton<D> {
    pub fn new(lo: [f64; D], hi: [f64; D], seed: u64) -> Self {
        assert!(D <= PRIMES.len());
        Halton {
            lo,
            hi,
            next: 1 + seed.wrapping_mul(7919) % (1 << 20),
        }
    }

    pub fn take_points(&mut self, n: usize) -> Vec<[f64; D]> {
        self.by_ref().take(n).collect()
    }
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = [f64; D];

    fn next(&mut self) -> Option<[f64; D]> {
        let i = self.next;
        self.next += 1;
        Some(std::array::from_fn(|k| {
            self.lo[k] + (self.hi[k] - self.lo[k]) * radical_inverse(i, PRIMES[k])
        }))
    }
}

/// Points in `[lo, hi]³`, the default region for field sampling.
pub fn cube(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<[f64; 3]> {
    Halton::new([lo; 3], [hi; 3], seed).take_points(n)
}
