//! Inputs shared by the benchmarks.

use braidq::BraidWord;

/// A deterministic word of the given length cycling through all generators
/// with alternating signs.
pub fn sweep_word(n: usize, len: usize) -> BraidWord {
    let letters = (0..len).map(|i| (1 + (i * 7) % (n - 1), if (i / 3) % 2 == 0 { 1 } else { -1 })).collect();
    BraidWord::new(n, letters).expect("generators in range")
}
