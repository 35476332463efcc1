#![allow(dead_code)]

use braidq::braid::{perm_of, section_word, BraidWord};
use braidq::perm::Perm;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> BraidWord {
    let letters = (0..len).map(|_| (rng.gen_range(1..n), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    BraidWord::new(n, letters).unwrap()
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Perm::from_images(images).unwrap()
}

/// A random word made pure by appending the inverse section of its permutation.
pub fn random_pure_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> BraidWord {
    let w = random_word(rng, n, len);
    let back = section_word(&perm_of(&w)).inverse();
    w.concat(&back).unwrap()
}

/// Applies `moves` random braid-relation rewrites, each preserving the braid.
pub fn rewrite<R: Rng>(rng: &mut R, w: &BraidWord, moves: usize) -> BraidWord {
    let n = w.n();
    let mut letters: Vec<(usize, i8)> = w.letters().collect();
    for _ in 0..moves {
        match rng.gen_range(0..4) {
            0 => {
                let pos = rng.gen_range(0..=letters.len());
                let i = rng.gen_range(1..n);
                let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                letters.splice(pos..pos, [(i, e), (i, -e)]);
            }
            1 => {
                if let Some(pos) = (0..letters.len().saturating_sub(1))
                    .find(|&p| letters[p].0 == letters[p + 1].0 && letters[p].1 == -letters[p + 1].1)
                {
                    letters.drain(pos..pos + 2);
                }
            }
            2 => {
                let candidates: Vec<usize> = (0..letters.len().saturating_sub(1))
                    .filter(|&p| letters[p].0.abs_diff(letters[p + 1].0) >= 2)
                    .collect();
                if let Some(&p) = candidates.choose(rng) {
                    letters.swap(p, p + 1);
                }
            }
            _ => {
                // σ_i σ_j σ_i ↔ σ_j σ_i σ_j with |i−j| = 1 and equal signs
                let candidates: Vec<usize> = (0..letters.len().saturating_sub(2))
                    .filter(|&p| {
                        let (a, b, c) = (letters[p], letters[p + 1], letters[p + 2]);
                        a == c && a.0.abs_diff(b.0) == 1 && a.1 == b.1
                    })
                    .collect();
                if let Some(&p) = candidates.choose(rng) {
                    let (a, b) = (letters[p], letters[p + 1]);
                    letters[p] = b;
                    letters[p + 1] = a;
                    letters[p + 2] = b;
                } else if letters.len() >= 2 || n >= 3 {
                    let pos = rng.gen_range(0..=letters.len());
                    let i = rng.gen_range(1..n);
                    let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                    letters.splice(pos..pos, [(i, e), (i, -e)]);
                }
            }
        }
    }
    BraidWord::new(n, letters).unwrap()
}
