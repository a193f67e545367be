//! Seeded random elements for the verification suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::category::{Morphism, ObjectWord, PathElement, Session, Slot};
use crate::perm::{self, Perm};
use crate::poly::{Mono, PolyAlg, PolyElement, Variant};
use crate::rational::{q, qf, Q};
use crate::wreath::{WreathAlg, WreathElement};

/// Name of the generator recorded in reports.
pub const GENERATOR: &str = "ChaCha8";

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream for a named suite, so suites do not perturb each other.
    pub fn fork(&mut self, salt: &str) -> Sampler {
        let digest = Sha256::digest(salt.as_bytes());
        let h = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
        Sampler::new(self.rng.gen::<u64>() ^ h)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    /// Nonzero coefficient from a small set of rationals.
    pub fn coeff(&mut self) -> Q {
        let num = *[-3i64, -2, -1, 1, 2, 3].choose(&mut self.rng).unwrap();
        if self.rng.gen_range(0..4) == 0 {
            qf(num, 2)
        } else {
            q(num)
        }
    }

    pub fn perm(&mut self, n: usize) -> Perm {
        let mut w = perm::id(n);
        w.shuffle(&mut self.rng);
        w
    }

    pub fn exps(&mut self, n: usize, variant: Variant, max_deg: i32) -> Vec<i32> {
        let mut e = vec![0; n];
        let total = self.rng.gen_range(0..=max_deg);
        for _ in 0..total {
            let j = self.below(n.max(1));
            if n > 0 {
                e[j] += if variant == Variant::Quantum && self.coin() { -1 } else { 1 };
            }
        }
        e
    }

    pub fn mono(&mut self, poly: &PolyAlg, max_deg: i32) -> Mono {
        let m = poly.alg.dim();
        let word: Vec<u8> = (0..poly.n).map(|_| self.below(m) as u8).collect();
        Mono::new(word, self.exps(poly.n, poly.variant, max_deg))
    }

    pub fn poly(&mut self, poly: &PolyAlg, terms: usize, max_deg: i32) -> PolyElement {
        let mut f = poly.zero();
        for _ in 0..terms {
            let m = self.mono(poly, max_deg);
            let c = self.coeff();
            f.add_term(m, c);
        }
        f
    }

    pub fn wreath(&mut self, wa: &WreathAlg, terms: usize, max_deg: i32) -> WreathElement {
        let mut u = wa.zero();
        for _ in 0..terms {
            let m = self.mono(&wa.poly, max_deg);
            let w = self.perm(wa.n());
            let c = self.coeff();
            u.add_term(m, w, c);
        }
        u
    }

    pub fn object(&mut self, s: &Session) -> ObjectWord {
        let objs = s.shuffles();
        objs[self.below(objs.len())].clone()
    }

    pub fn morphism(&mut self, s: &Session, src: &[Slot], tgt: &[Slot], terms: usize, max_deg: i32) -> Morphism {
        Morphism { src: src.to_vec(), tgt: tgt.to_vec(), body: self.wreath(&s.wa, terms, max_deg) }
    }

    pub fn path(&mut self, s: &Session, blocks: usize, terms: usize, max_deg: i32) -> PathElement {
        let mut p = PathElement::default();
        for _ in 0..blocks {
            let (a, b) = (self.object(s), self.object(s));
            p = p.add(&PathElement::from_morphism(self.morphism(s, &a, &b, terms, max_deg)));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use std::sync::Arc;

    #[test]
    fn same_seed_same_stream() {
        let wa = WreathAlg::degenerate(Arc::new(builtin::clifford_even()), 2);
        let a = Sampler::new(7).wreath(&wa, 4, 3);
        let b = Sampler::new(7).wreath(&wa, 4, 3);
        assert_eq!(a, b);
        assert_ne!(a, Sampler::new(8).wreath(&wa, 4, 3));
    }
}
