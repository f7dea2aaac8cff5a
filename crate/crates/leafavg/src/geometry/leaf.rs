use serde::{Deserialize, Serialize};

use crate::actions1d::{Arc1, PingPongTriple};
use crate::error::{Error, Result};
use crate::group_core::{Gen, Word};

/// Sign attached to level `k`: `+1` on odd positive and even negative
/// levels, `-1` otherwise. Consecutive levels alternate between the two
/// halves of the genus-three surface.
pub fn level_sign(k: i32) -> i32 {
    let odd = k.rem_euclid(2) == 1;
    if (k > 0) == odd {
        1
    } else {
        -1
    }
}

/// One pants copy of the leaf: the map `f_{k,ℓ}` as a word in `A, B, C`, the
/// arc `I_ρ` containing `f_{k,ℓ}(J)`, and that image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafEntry {
    pub k: i32,
    pub l: u32,
    pub word: Word,
    pub rho: usize,
    pub image: Arc1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafBook {
    pub entries: Vec<LeafEntry>,
    /// Every child image lies in the arc predicted by the recursion.
    pub consistent: bool,
    /// The images `f_{k,ℓ}(J)` are pairwise disjoint.
    pub disjoint: bool,
    /// The points `f_{k,ℓ}(y0)` for the midpoint `y0` of `J` are pairwise
    /// distinct, so the leaf through `y0` meets each copy once.
    pub points_distinct: bool,
}

fn apply(t: &PingPongTriple, w: &Word, x: f64) -> f64 {
    w.letters().iter().rev().fold(x, |y, g| {
        let m = &t.maps[g.index() - 1];
        if g.is_inverse() {
            m.inverse(y)
        } else {
            m.forward(y)
        }
    })
}

fn image(t: &PingPongTriple, w: &Word) -> Result<Arc1> {
    let s = apply(t, w, t.j.start);
    let e = apply(t, w, t.j.end);
    Arc1::new(s, s + (e - s).rem_euclid(1.0))
}

fn home(t: &PingPongTriple, a: &Arc1) -> Option<usize> {
    (0..3).find(|&r| a.inside(&t.arcs[r], 0.0))
}

fn overlap(a: &Arc1, b: &Arc1) -> bool {
    let inside = |x: f64, arc: &Arc1| {
        let s = (x - arc.start).rem_euclid(1.0);
        s < arc.len()
    };
    inside(a.start, b) || inside(b.start, a)
}

/// Maps `f_{k,ℓ}` for `1 ≤ |k| ≤ kmax`: `f_{1,0} = id`, `f_{-1,0} = f_A⁻¹`,
/// and `f_{k±1, 2ℓ+s} = f_{ρ+s+1}^{±1} ∘ f_{k,ℓ}` with the level sign.
pub fn leaf_recursion(t: &PingPongTriple, kmax: u32) -> Result<LeafBook> {
    if kmax == 0 || kmax > 16 {
        return Err(Error::Invalid(format!("kmax must be in 1..=16, got {kmax}")));
    }
    let mut entries = Vec::new();
    let mut consistent = true;
    for start in [Word::empty(), Word::from_letters(vec![Gen::new(1, true)])] {
        let k0: i32 = if start.is_empty() { 1 } else { -1 };
        let img = image(t, &start)?;
        let rho = home(t, &img).ok_or_else(|| Error::Layout(format!("f_{{{k0},0}}(J) is not inside any arc")))?;
        let mut level = vec![LeafEntry {
            k: k0,
            l: 0,
            word: start,
            rho,
            image: img,
        }];
        for _ in 1..kmax {
            let mut next = Vec::with_capacity(2 * level.len());
            for e in &level {
                let sg = level_sign(e.k);
                for s in 0..2 {
                    let target = (e.rho + s + 1) % 3;
                    let mut letters = vec![Gen::new(target + 1, sg < 0)];
                    letters.extend_from_slice(e.word.letters());
                    let word = Word::from_letters(letters);
                    let img = image(t, &word)?;
                    let found = home(t, &img);
                    consistent &= found == Some(target);
                    next.push(LeafEntry {
                        k: e.k + e.k.signum(),
                        l: 2 * e.l + s as u32,
                        word,
                        rho: found.unwrap_or(target),
                        image: img,
                    });
                }
            }
            entries.append(&mut level);
            level = next;
        }
        entries.append(&mut level);
    }
    let disjoint = (0..entries.len()).all(|i| (i + 1..entries.len()).all(|j| !overlap(&entries[i].image, &entries[j].image)));
    let y0 = t.base_point();
    let mut points: Vec<f64> = entries.iter().map(|e| apply(t, &e.word, y0).rem_euclid(1.0)).collect();
    points.sort_by(f64::total_cmp);
    let points_distinct = points.windows(2).all(|w| w[1] - w[0] > 1e-12) && points[0] + 1.0 - points[points.len() - 1] > 1e-12;
    Ok(LeafBook {
        entries,
        consistent,
        disjoint,
        points_distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions1d::{make_ping_pong, PingPongLayout};

    #[test]
    fn signs_alternate() {
        assert_eq!(level_sign(1), 1);
        assert_eq!(level_sign(2), -1);
        assert_eq!(level_sign(3), 1);
        assert_eq!(level_sign(-1), -1);
        assert_eq!(level_sign(-2), 1);
    }

    #[test]
    fn first_levels_match_the_recursion() {
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        let book = leaf_recursion(&t, 4).unwrap();
        assert!(book.consistent);
        assert!(book.points_distinct);
        assert_eq!(book.entries.len(), 30);
        let find = |k: i32, l: u32| book.entries.iter().find(|e| e.k == k && e.l == l).unwrap();
        assert_eq!(find(2, 0).word.to_string(), "a2");
        assert_eq!(find(2, 1).word.to_string(), "a3");
        assert_eq!(find(-2, 0).word.to_string(), "A2A1");
        assert_eq!(find(-2, 1).word.to_string(), "A3A1");
    }
}
