//! Words in the Artin generators `σ_i^{±1}` and the pure-braid generators
//! `A_{i,j}^{±1}`.
//!
//! Words are read left to right and the strand at position `i` crosses the
//! strand at position `i+1` for each letter `σ_i^{±1}`. The permutation of
//! a word sends the starting position of every strand to its final position.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::nilpotent::{Basis, PairVec};
use crate::perm::{PairIdx, Perm};

/// A word in `σ_1,…,σ_{n−1}` and their inverses.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BraidWord {
    n: usize,
    letters: Vec<(u16, i8)>,
}

impl BraidWord {
    pub fn empty(n: usize) -> Self {
        BraidWord { n, letters: Vec::new() }
    }

    pub fn new(n: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        let mut w = BraidWord::empty(n);
        for (i, e) in letters {
            w.push(i, e)?;
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = (usize, i8)> + '_ {
        self.letters.iter().map(|&(i, e)| (i as usize, e))
    }

    /// Appends `σ_i^{e}`, `e = ±1`.
    pub fn push(&mut self, i: usize, e: i8) -> Result<()> {
        if i == 0 || i >= self.n {
            return Err(Error::OutOfRange(format!("σ_{i} in B_{}", self.n)));
        }
        if e != 1 && e != -1 {
            return Err(Error::OutOfRange(format!("exponent {e} on σ_{i}")));
        }
        self.letters.push((i as u16, e));
        Ok(())
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { n: self.n, letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect() }
    }

    pub fn pow(&self, e: i64) -> BraidWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord { n: self.n, letters }
    }

    /// Parses whitespace-separated tokens `s<i>`, `s<i>^-1`, `A<i>,<j>`,
    /// `A<i>,<j>^-1`. Any nonzero integer exponent is accepted and expanded;
    /// `A` tokens are expanded with [`a_word_expand`].
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut w = BraidWord::empty(n);
        for token in text.split_whitespace() {
            let (base, exp) = split_exponent(token)?;
            if let Some(idx) = base.strip_prefix('s') {
                let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad generator {token:?}")))?;
                let e = if exp < 0 { -1 } else { 1 };
                for _ in 0..exp.unsigned_abs() {
                    w.push(i, e)?;
                }
            } else if base.starts_with('A') {
                let pair: PairIdx = base.parse()?;
                let aw = AWord::new(n, vec![(pair, if exp < 0 { -1 } else { 1 })])?;
                let piece = a_word_expand(&aw).pow(exp.abs());
                w.letters.extend(piece.letters);
            } else {
                return Err(Error::Parse(format!("unknown token {token:?}")));
            }
        }
        Ok(w)
    }
}

fn split_exponent(token: &str) -> Result<(&str, i64)> {
    match token.split_once('^') {
        None => Ok((token, 1)),
        Some((base, e)) => {
            let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            if e == 0 {
                return Err(Error::Parse(format!("zero exponent in {token:?}")));
            }
            Ok((base, e))
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, e)| if e < 0 { format!("s{i}^-1") } else { format!("s{i}") })
            .collect();
        write!(f, "{}", tokens.join(" "))
    }
}

/// A word in the generators `A_{i,j}^{±1}` of the pure braid group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AWord {
    n: usize,
    letters: Vec<(PairIdx, i8)>,
}

impl AWord {
    pub fn new(n: usize, letters: Vec<(PairIdx, i8)>) -> Result<Self> {
        for &(e, x) in &letters {
            if !e.fits(n) {
                return Err(Error::OutOfRange(format!("{e} in P_{n}")));
            }
            if x != 1 && x != -1 {
                return Err(Error::OutOfRange(format!("exponent {x} on {e}")));
            }
        }
        Ok(AWord { n, letters })
    }

    pub(crate) fn from_letters_unchecked(n: usize, letters: Vec<(PairIdx, i8)>) -> Self {
        AWord { n, letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[(PairIdx, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &AWord) -> AWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        AWord { n: self.n, letters }
    }

    pub fn inverse(&self) -> AWord {
        AWord { n: self.n, letters: self.letters.iter().rev().map(|&(e, x)| (e, -x)).collect() }
    }

    /// Parses tokens `A<i>,<j>` / `A<i>,<j>^-1`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (base, exp) = split_exponent(token)?;
            let e: PairIdx = base.parse()?;
            for _ in 0..exp.unsigned_abs() {
                letters.push((e, if exp < 0 { -1 } else { 1 }));
            }
        }
        AWord::new(n, letters)
    }
}

impl fmt::Display for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> =
            self.letters.iter().map(|&(e, x)| if x < 0 { format!("{e}^-1") } else { e.to_string() }).collect();
        write!(f, "{}", tokens.join(" "))
    }
}

/// A freely reduced word in `x_1,…,x_n`; a letter is `±i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn generator(i: usize) -> Self {
        FreeWord(vec![i as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&x| -x).collect())
    }

    /// Product of several words, freely reduced.
    pub fn product(parts: &[&FreeWord]) -> FreeWord {
        let mut out: Vec<i32> = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for part in parts {
            for &x in &part.0 {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
        }
        FreeWord(out)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let tokens: Vec<String> =
            self.0.iter().map(|&x| if x < 0 { format!("x{}^-1", -x) } else { format!("x{x}") }).collect();
        write!(f, "{}", tokens.join(" "))
    }
}

/// The permutation of a braid word: start position of each strand ↦ end position.
pub fn perm_of(w: &BraidWord) -> Perm {
    let n = w.n;
    // arrangement[p] = strand label currently at position p+1
    let mut arrangement: Vec<usize> = (1..=n).collect();
    for &(i, _) in &w.letters {
        arrangement.swap(i as usize - 1, i as usize);
    }
    let mut images = vec![0; n];
    for (pos, &strand) in arrangement.iter().enumerate() {
        images[strand - 1] = pos + 1;
    }
    Perm::from_images(images).expect("positions form a bijection")
}

/// Half the signed number of crossings between each pair of strands, indexed
/// by the strands' starting labels: the image of a pure braid in `P_n/Γ₂(P_n)`.
pub fn crossing_numbers(w: &BraidWord) -> Result<PairVec> {
    let perm = perm_of(w);
    if !perm.is_identity() {
        return Err(Error::NonPureWord(perm.to_string()));
    }
    let basis = Basis::of(w.n);
    let mut counts = vec![0i64; basis.pairs().len()];
    let mut arrangement: Vec<usize> = (1..=w.n).collect();
    for &(i, e) in &w.letters {
        let (p, q) = (i as usize - 1, i as usize);
        let e_idx = basis.pair_index(PairIdx::unordered(arrangement[p], arrangement[q]));
        counts[e_idx] += e as i64;
        arrangement.swap(p, q);
    }
    for (idx, c) in counts.iter_mut().enumerate() {
        if *c % 2 != 0 {
            let e = basis.pairs()[idx];
            return Err(Error::OddCrossingCount(e.i as usize, e.j as usize));
        }
        *c /= 2;
    }
    Ok(PairVec::from_dense(w.n, counts))
}

/// Images of `x_1,…,x_n` under the automorphism of the free group induced by
/// `w`, with `σ_i: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i`. The assignment is
/// a homomorphism `φ_{uv} = φ_u ∘ φ_v`; two words are equal in `B_n` iff their
/// image lists coincide.
pub fn artin_images(w: &BraidWord) -> Vec<FreeWord> {
    let mut images: Vec<FreeWord> = (1..=w.n).map(FreeWord::generator).collect();
    for &(i, e) in &w.letters {
        let (p, q) = (i as usize - 1, i as usize);
        let (xi, xj) = (images[p].clone(), images[q].clone());
        if e > 0 {
            images[p] = FreeWord::product(&[&xi, &xj, &xi.inverse()]);
            images[q] = xi;
        } else {
            images[q] = FreeWord::product(&[&xj.inverse(), &xi, &xj]);
            images[p] = xj;
        }
    }
    images
}

/// Equality in `B_n`, decided by the Artin action.
pub fn artin_equal(u: &BraidWord, v: &BraidWord) -> bool {
    u.n == v.n && artin_images(u) == artin_images(v)
}

type SectionCache = RwLock<HashMap<Perm, BraidWord>>;

fn section_cache() -> &'static SectionCache {
    static CACHE: OnceLock<SectionCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The positive permutation braid of `p`, spelled by insertion sort: for
/// each target position `y = 1,…,n` in turn, the strand that must end at `y`
/// is slid left from its current position. Every letter creates a new
/// inversion, so the length is the inversion number of `p`.
pub fn section_word(p: &Perm) -> BraidWord {
    if let Some(w) = section_cache().read().expect("section cache poisoned").get(p) {
        return w.clone();
    }
    let w = insertion_sort_word(p);
    section_cache().write().expect("section cache poisoned").entry(p.clone()).or_insert_with(|| w.clone());
    w
}

fn insertion_sort_word(p: &Perm) -> BraidWord {
    let n = p.n();
    let inv = p.inverse();
    let mut arrangement: Vec<usize> = (1..=n).collect();
    let mut letters = Vec::with_capacity(p.inversions());
    for y in 1..=n {
        let strand = inv.apply(y);
        let mut q = arrangement.iter().position(|&s| s == strand).expect("strand present") + 1;
        while q > y {
            letters.push(((q - 1) as u16, 1i8));
            arrangement.swap(q - 2, q - 1);
            q -= 1;
        }
    }
    BraidWord { n, letters }
}

/// `A_{i,j} = (σ_{j−1}⋯σ_{i+1}) σ_i² (σ_{i+1}⁻¹⋯σ_{j−1}⁻¹)`, extended to words.
pub fn a_word_expand(aw: &AWord) -> BraidWord {
    let mut letters = Vec::new();
    for &(e, x) in &aw.letters {
        let (i, j) = (e.i, e.j);
        let inner: Vec<(u16, i8)> = if x > 0 { vec![(i, 1), (i, 1)] } else { vec![(i, -1), (i, -1)] };
        for m in (i + 1..j).rev() {
            letters.push((m, 1));
        }
        letters.extend(inner);
        for m in i + 1..j {
            letters.push((m, -1));
        }
    }
    BraidWord { n: aw.n, letters }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, s: &str) -> BraidWord {
        BraidWord::parse(n, s).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let word = w(9, "s3 s2 s4 s6 s5 s4 s3 s7 s6");
        assert_eq!(w(9, &word.to_string()), word);
        assert_eq!(perm_of(&w(9, &word.to_string())), perm_of(&word));
        assert_eq!(w(4, "s1^-1 s3").to_string(), "s1^-1 s3");
        assert_eq!(w(3, "A1,3"), w(3, "s2 s1 s1 s2^-1"));
        assert_eq!(w(3, "A1,3^-1"), w(3, "s2 s1^-1 s1^-1 s2^-1"));
        assert_eq!(w(3, "s1^2"), w(3, "s1 s1"));
        assert!(BraidWord::parse(3, "s3").is_err());
        assert!(BraidWord::parse(3, "t1").is_err());
        assert!(BraidWord::parse(3, "s1^0").is_err());
    }

    #[test]
    fn permutations_of_words() {
        assert_eq!(perm_of(&w(2, "s1")), Perm::parse(2, "(1,2)").unwrap());
        assert!(perm_of(&w(2, "s1 s1^-1")).is_identity());
        // α̂ = σ₂σ₁⁻¹σ₅σ₄⁻¹ lies over α = (1,2,3)(4,5,6)
        assert_eq!(perm_of(&w(9, "s2 s1^-1 s5 s4^-1")), Perm::parse(9, "(1,2,3)(4,5,6)").unwrap());
        assert_eq!(perm_of(&w(9, "s5 s4^-1 s7 s8^-1")), Perm::parse(9, "(4,5,6)(7,9,8)").unwrap());
    }

    #[test]
    fn perm_of_concatenation_is_left_to_right_product() {
        let u = w(4, "s1 s2");
        let v = w(4, "s3 s1^-1");
        let uv = u.concat(&v).unwrap();
        assert_eq!(perm_of(&uv), perm_of(&u).compose(&perm_of(&v)).unwrap());
        // per-letter transpositions multiplied in reading order
        let mut acc = Perm::identity(4);
        for (i, _) in uv.letters() {
            acc = acc.compose(&Perm::adjacent(4, i)).unwrap();
        }
        assert_eq!(acc, perm_of(&uv));
    }

    #[test]
    fn crossing_numbers_examples() {
        let basis = Basis::of(3);
        let c = crossing_numbers(&w(3, "s1 s1")).unwrap();
        assert_eq!(c.get(PairIdx::new(1, 2).unwrap()), 1);
        assert_eq!(c.get(PairIdx::new(1, 3).unwrap()), 0);
        let twist = crossing_numbers(&w(3, "s1 s2 s1 s2 s1 s2")).unwrap();
        for &e in basis.pairs() {
            assert_eq!(twist.get(e), 1);
        }
        let a13 = crossing_numbers(&w(3, "A1,3")).unwrap();
        assert_eq!(a13.dense(), &[0, 1, 0]);
        assert!(matches!(crossing_numbers(&w(3, "s1")), Err(Error::NonPureWord(_))));
    }

    #[test]
    fn artin_action_examples() {
        let imgs = artin_images(&w(2, "s1"));
        assert_eq!(imgs[0].letters(), &[1, 2, -1]);
        assert_eq!(imgs[1].letters(), &[1]);
        let id = artin_images(&BraidWord::empty(4));
        assert_eq!(id, (1..=4).map(FreeWord::generator).collect::<Vec<_>>());
        assert!(artin_equal(&w(3, "s1 s2 s1"), &w(3, "s2 s1 s2")));
        assert!(!artin_equal(&w(3, "s1 s2"), &w(3, "s2 s1")));
        assert!(artin_equal(&w(4, "s1 s3"), &w(4, "s3 s1")));
        assert!(artin_equal(&w(3, "s1 s1^-1"), &BraidWord::empty(3)));
        assert!(artin_equal(&w(3, "A1,2 A1,2^-1"), &BraidWord::empty(3)));
    }

    #[test]
    fn section_words() {
        assert!(section_word(&Perm::identity(5)).is_empty());
        assert_eq!(section_word(&Perm::parse(3, "(1,2)").unwrap()), w(3, "s1"));
        let s13 = section_word(&Perm::parse(3, "(1,3)").unwrap());
        assert_eq!(s13, w(3, "s2 s1 s2"));
        assert_eq!(perm_of(&s13), Perm::parse(3, "(1,3)").unwrap());
        assert!(s13.letters().all(|(_, e)| e == 1));
    }

    #[test]
    fn a_word_expansions() {
        let a12 = AWord::parse(4, "A1,2").unwrap();
        assert_eq!(a_word_expand(&a12), w(4, "s1 s1"));
        let a13 = AWord::parse(3, "A1,3").unwrap();
        assert_eq!(a_word_expand(&a13), w(3, "s2 s1 s1 s2^-1"));
        let a14 = AWord::parse(5, "A1,4^-1").unwrap();
        assert_eq!(a_word_expand(&a14), w(5, "s3 s2 s1^-1 s1^-1 s2^-1 s3^-1"));
        assert_eq!(crossing_numbers(&a_word_expand(&a14)).unwrap().get(PairIdx::new(1, 4).unwrap()), -1);
    }
}
