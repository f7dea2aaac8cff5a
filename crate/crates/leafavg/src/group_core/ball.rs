use crate::error::{Error, Result};
use crate::group_core::word::{Gen, Word};

/// Number of reduced non-empty words of length at most `n` over `k`
/// generators.
pub fn ball_size(k: usize, n: usize) -> u128 {
    if k == 0 || n == 0 {
        return 0;
    }
    if k == 1 {
        return 2 * n as u128;
    }
    let q = (2 * k - 1) as u128;
    let mut total = 0u128;
    let mut sphere = 2 * k as u128;
    for _ in 0..n {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(q);
    }
    total
}

/// Number of reduced words of length exactly `m >= 1`.
pub fn sphere_size(k: usize, m: usize) -> u128 {
    if m == 0 || k == 0 {
        return 0;
    }
    ball_size(k, m) - ball_size(k, m - 1)
}

/// All reduced non-empty words of length at most `n`, in shortlex order.
///
/// Letters are stored flat; words of length `m` occupy one contiguous block.
#[derive(Debug, Clone)]
pub struct BallEnumeration {
    k: usize,
    n: usize,
    letters: Vec<Gen>,
    sphere_offsets: Vec<usize>,
    letter_offsets: Vec<usize>,
}

impl BallEnumeration {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        *self.sphere_offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `offsets[m]` is the number of words of length at most `m`.
    pub fn sphere_offsets(&self) -> &[usize] {
        &self.sphere_offsets
    }

    pub fn word_letters(&self, i: usize) -> &[Gen] {
        let m = self.sphere_offsets.partition_point(|&o| o <= i);
        let start = self.letter_offsets[m] + (i - self.sphere_offsets[m - 1]) * m;
        &self.letters[start..start + m]
    }

    pub fn word(&self, i: usize) -> Word {
        Word::from_letters(self.word_letters(i).to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Gen]> + '_ {
        (1..=self.n).flat_map(move |m| {
            let base = self.letter_offsets[m];
            let count = self.sphere_offsets[m] - self.sphere_offsets[m - 1];
            (0..count).map(move |j| &self.letters[base + j * m..base + (j + 1) * m])
        })
    }
}

/// Enumerates the ball `G_n` of the free group on `k` generators.
pub fn enumerate_ball(k: usize, n: usize, cap: usize) -> Result<BallEnumeration> {
    if k == 0 || n == 0 {
        return Err(Error::Invalid("enumerate_ball needs k >= 1 and n >= 1".into()));
    }
    let needed = ball_size(k, n);
    if needed > cap as u128 {
        return Err(Error::ResourceCap {
            what: "ball words",
            needed,
            cap: cap as u128,
        });
    }
    let mut letters = Vec::new();
    let mut sphere_offsets = vec![0usize];
    let mut letter_offsets = vec![0usize, 0];
    letters.extend(Gen::all(k));
    sphere_offsets.push(2 * k);
    // Prepending a letter to a shortlex-sorted sphere, letter by letter,
    // keeps the next sphere sorted.
    for m in 2..=n {
        let prev_start = letter_offsets[m - 1];
        let prev_count = sphere_offsets[m - 1] - sphere_offsets[m - 2];
        letter_offsets.push(letters.len());
        let mut count = 0;
        for g in Gen::all(k) {
            for j in 0..prev_count {
                let s = prev_start + j * (m - 1);
                if letters[s] == g.inverse() {
                    continue;
                }
                letters.push(g);
                letters.extend_from_within(s..s + m - 1);
                count += 1;
            }
        }
        sphere_offsets.push(sphere_offsets[m - 1] + count);
    }
    Ok(BallEnumeration {
        k,
        n,
        letters,
        sphere_offsets,
        letter_offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    // Oracle: all words of length <= n, reduced, deduplicated.
    fn brute(k: usize, n: usize) -> HashSet<Vec<Gen>> {
        let mut out = HashSet::new();
        let mut layer: Vec<Vec<Gen>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for g in Gen::all(k) {
                    let mut v = w.clone();
                    v.push(g);
                    let r = Word::from_letters(v.clone()).reduce();
                    if !r.is_empty() {
                        out.insert(r.letters().to_vec());
                    }
                    next.push(v);
                }
            }
            layer = next;
        }
        out
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_ball(2, 1, 100).unwrap().len(), 4);
        assert_eq!(enumerate_ball(2, 3, 100).unwrap().len(), 52);
        assert_eq!(enumerate_ball(1, 3, 100).unwrap().len(), 6);
    }

    #[test]
    fn matches_brute_force() {
        for (k, n) in [(1, 4), (2, 4), (3, 3)] {
            let b = enumerate_ball(k, n, 1 << 20).unwrap();
            let got: HashSet<Vec<Gen>> = b.iter().map(|w| w.to_vec()).collect();
            assert_eq!(got.len(), b.len());
            assert_eq!(got, brute(k, n));
        }
    }

    #[test]
    fn shortlex_sorted() {
        let b = enumerate_ball(2, 4, 1000).unwrap();
        let words: Vec<Word> = (0..b.len()).map(|i| b.word(i)).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.word(0).to_string(), "a1");
        assert_eq!(b.word(4).to_string(), "a1a1");
    }

    #[test]
    fn cap_enforced() {
        let err = enumerate_ball(2, 20, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }
}
