use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::averages::series::AverageSeries;
use crate::error::{Error, Result};
use crate::group_core::index::{ExactIndex, PointIndex};
use crate::group_core::word::{Gen, Word};

/// A point of a phase space, with real coordinates for observables and dumps.
pub trait PhasePoint: Clone + fmt::Debug {
    fn coords(&self) -> Vec<f64>;
}

impl PhasePoint for f64 {
    fn coords(&self) -> Vec<f64> {
        vec![*self]
    }
}

impl PhasePoint for Rational64 {
    fn coords(&self) -> Vec<f64> {
        vec![self.to_f64().unwrap_or(f64::NAN)]
    }
}

impl PhasePoint for Vec<f64> {
    fn coords(&self) -> Vec<f64> {
        self.clone()
    }
}

impl PhasePoint for Word {
    fn coords(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A finitely generated group acting through its generators.
///
/// Words act right to left: `f_{g u} = f_g ∘ f_u`.
pub trait GroupAction {
    type Point: PhasePoint;

    fn rank(&self) -> usize;

    fn act(&self, g: Gen, p: &Self::Point) -> Self::Point;

    fn check_point(&self, _p: &Self::Point) -> Result<()> {
        Ok(())
    }

    fn new_index(&self, tol: f64) -> Box<dyn PointIndex<Self::Point>>;

    /// Orbit sizes `|G_m(y)|`, `m = 0..=n`, when known without enumeration.
    fn known_orbit_sizes(&self, _y: &Self::Point, _n: usize) -> Option<Vec<usize>> {
        None
    }

    fn act_word(&self, w: &Word, p: &Self::Point) -> Self::Point {
        w.letters()
            .iter()
            .rev()
            .fold(p.clone(), |q, &g| self.act(g, &q))
    }
}

/// Left multiplication on the free group itself. Every orbit is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeAction {
    pub k: usize,
}

impl FreeAction {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("free group needs k >= 1".into()));
        }
        Ok(FreeAction { k })
    }
}

impl GroupAction for FreeAction {
    type Point = Word;

    fn rank(&self) -> usize {
        self.k
    }

    fn act(&self, g: Gen, p: &Word) -> Word {
        let mut letters = Vec::with_capacity(p.len() + 1);
        match p.letters().first() {
            Some(&h) if h == g.inverse() => letters.extend_from_slice(&p.letters()[1..]),
            _ => {
                letters.push(g);
                letters.extend_from_slice(p.letters());
            }
        }
        Word::from_letters(letters)
    }

    fn check_point(&self, p: &Word) -> Result<()> {
        if p.max_index() > self.k || !p.is_reduced() {
            return Err(Error::Domain(format!("{p} is not a reduced word on {} letters", self.k)));
        }
        Ok(())
    }

    fn new_index(&self, _tol: f64) -> Box<dyn PointIndex<Word>> {
        Box::new(ExactIndex::new())
    }

    fn known_orbit_sizes(&self, _y: &Word, n: usize) -> Option<Vec<usize>> {
        (0..=n)
            .map(|m| usize::try_from(crate::group_core::ball::ball_size(self.k, m)).ok())
            .collect()
    }
}

/// One orbit class of `G_n(y)`.
#[derive(Debug, Clone)]
pub struct OrbitClass<P> {
    pub word: Word,
    pub point: P,
    /// Shortest word length reaching the class.
    pub level: usize,
}

const NONE: u32 = u32::MAX;

/// The orbit ball `G_n(y)` together with the reduced-word automaton that
/// produced it.
///
/// States are pairs (class, first letter). A word `g u` is reduced exactly
/// when `u` does not start with `g^-1`, so prepending along states walks
/// reduced words only.
pub struct OrbitBall<P> {
    base: P,
    radius: usize,
    tol: f64,
    k: usize,
    classes: Vec<OrbitClass<P>>,
    index: Box<dyn PointIndex<P>>,
    state_class: Vec<u32>,
    state_first: Vec<Gen>,
    state_offsets: Vec<usize>,
    trans: Vec<u32>,
}

impl<P: fmt::Debug> fmt::Debug for OrbitBall<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrbitBall")
            .field("base", &self.base)
            .field("radius", &self.radius)
            .field("tol", &self.tol)
            .field("classes", &self.classes.len())
            .field("states", &self.state_class.len())
            .finish()
    }
}

/// Enumerates `G_n(y)` with shortlex-least representatives.
///
/// `cap` bounds the number of automaton states, which equals the number of
/// words for a free orbit.
pub fn orbit_ball<A: GroupAction>(
    action: &A,
    y: &A::Point,
    n: usize,
    tol: f64,
    cap: usize,
) -> Result<OrbitBall<A::Point>> {
    if !(tol >= 0.0) {
        return Err(Error::Invalid(format!("tolerance must be non-negative, got {tol}")));
    }
    if n == 0 {
        return Err(Error::Invalid("orbit radius must be >= 1".into()));
    }
    action.check_point(y)?;
    let k = action.rank();
    let k2 = 2 * k;
    let mut ball = OrbitBall {
        base: y.clone(),
        radius: n,
        tol,
        k,
        classes: Vec::new(),
        index: action.new_index(tol),
        state_class: Vec::new(),
        state_first: Vec::new(),
        state_offsets: vec![0],
        trans: Vec::new(),
    };
    let mut state_of: HashMap<(u32, Gen), u32> = HashMap::new();

    let mut add = |ball: &mut OrbitBall<A::Point>,
                   p: A::Point,
                   g: Gen,
                   word: &dyn Fn() -> Word,
                   level: usize|
     -> Result<u32> {
        let cls = match ball.index.find(&p) {
            Some(c) => c as u32,
            None => {
                let c = ball.classes.len();
                ball.index.insert(&p, c);
                ball.classes.push(OrbitClass {
                    word: word(),
                    point: p,
                    level,
                });
                c as u32
            }
        };
        if let Some(&s) = state_of.get(&(cls, g)) {
            return Ok(s);
        }
        let s = ball.state_class.len();
        if s >= cap {
            return Err(Error::ResourceCap {
                what: "orbit states",
                needed: s as u128 + 1,
                cap: cap as u128,
            });
        }
        state_of.insert((cls, g), s as u32);
        ball.state_class.push(cls);
        ball.state_first.push(g);
        ball.trans.extend(std::iter::repeat_n(NONE, k2));
        Ok(s as u32)
    };

    for g in Gen::all(k) {
        let p = action.act(g, y);
        add(&mut ball, p, g, &|| Word::from_letters(vec![g]), 1)?;
    }
    ball.state_offsets.push(ball.state_class.len());

    for m in 1..n {
        let (lo, hi) = (ball.state_offsets[m - 1], ball.state_offsets[m]);
        for g in Gen::all(k) {
            for s in lo..hi {
                if ball.state_first[s] == g.inverse() {
                    continue;
                }
                let cls = ball.state_class[s] as usize;
                let p = action.act(g, &ball.classes[cls].point);
                let src = ball.classes[cls].word.clone();
                let t = add(
                    &mut ball,
                    p,
                    g,
                    &|| {
                        let mut l = Vec::with_capacity(src.len() + 1);
                        l.push(g);
                        l.extend_from_slice(src.letters());
                        Word::from_letters(l)
                    },
                    m + 1,
                )?;
                ball.trans[s * k2 + g.code()] = t;
            }
        }
        ball.state_offsets.push(ball.state_class.len());
    }
    Ok(ball)
}

impl<P: PhasePoint> OrbitBall<P> {
    pub fn base(&self) -> &P {
        &self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    /// Representatives in shortlex order of their words.
    pub fn classes(&self) -> &[OrbitClass<P>] {
        &self.classes
    }

    /// `|G_m(y)|` for `m <= n`.
    pub fn size_at(&self, m: usize) -> usize {
        self.classes.partition_point(|c| c.level <= m)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `|G_m(y)|` for `m = 0..=n`.
    pub fn sizes(&self) -> Vec<usize> {
        (0..=self.radius).map(|m| self.size_at(m)).collect()
    }

    /// Class of a point, if it lies in `G_n(y)` up to tolerance.
    pub fn find(&self, p: &P) -> Option<usize> {
        self.index.find(p)
    }

    /// Per-level word sums `(Σ w·value, Σ w)` for levels `1..=n`, where `w`
    /// counts the reduced words of exactly that length landing in a class.
    pub fn level_word_sums(&self, values: &[f64]) -> Vec<(f64, f64)> {
        let k2 = 2 * self.k;
        let nstates = self.state_class.len();
        let mut out = Vec::with_capacity(self.radius);
        let mut cur = vec![0.0f64; nstates];
        for c in cur.iter_mut().take(self.state_offsets[1]) {
            *c = 1.0;
        }
        for level in 1..=self.radius {
            let mut num = 0.0;
            let mut den = 0.0;
            for (s, &c) in cur.iter().enumerate() {
                if c != 0.0 {
                    num += c * values[self.state_class[s] as usize];
                    den += c;
                }
            }
            out.push((num, den));
            if level == self.radius {
                break;
            }
            let mut next = vec![0.0f64; nstates];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for &t in &self.trans[s * k2..(s + 1) * k2] {
                    if t != NONE {
                        next[t as usize] += c;
                    }
                }
            }
            cur = next;
        }
        out
    }

    /// Number of reduced words of length at most `m` landing in each class.
    ///
    /// Entries are exact integers as long as they stay below `2^53`.
    pub fn word_counts(&self, m: usize) -> Result<Vec<f64>> {
        if m > self.radius || m == 0 {
            return Err(Error::Invalid(format!(
                "word counts need 1 <= m <= {}, got {m}",
                self.radius
            )));
        }
        let k2 = 2 * self.k;
        let nstates = self.state_class.len();
        let mut per_class = vec![0.0; self.classes.len()];
        let mut cur = vec![0.0f64; nstates];
        cur[..self.state_offsets[1]].fill(1.0);
        for level in 1..=m {
            for (s, &c) in cur.iter().enumerate() {
                if c != 0.0 {
                    per_class[self.state_class[s] as usize] += c;
                }
            }
            if level == m {
                break;
            }
            let mut next = vec![0.0f64; nstates];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for &t in &self.trans[s * k2..(s + 1) * k2] {
                    if t != NONE {
                        next[t as usize] += c;
                    }
                }
            }
            cur = next;
        }
        Ok(per_class)
    }
}

/// `|G_m(y)|` for `m = 0..=n`, from a closed form when the action knows one.
pub fn orbit_sizes<A: GroupAction>(
    action: &A,
    y: &A::Point,
    n: usize,
    tol: f64,
    cap: usize,
) -> Result<Vec<usize>> {
    action.check_point(y)?;
    if let Some(sizes) = action.known_orbit_sizes(y, n) {
        return Ok(sizes);
    }
    Ok(orbit_ball(action, y, n, tol, cap)?.sizes())
}

/// Sphere-to-ball ratios `|G_n(y) \ G_{n-1}(y)| / |G_n(y)|` for `n = 2..=N`.
pub fn lambda_series<A: GroupAction>(
    action: &A,
    y: &A::Point,
    big_n: usize,
    tol: f64,
    cap: usize,
) -> Result<AverageSeries> {
    if big_n < 2 {
        return Err(Error::Invalid("lambda series needs N >= 2".into()));
    }
    lambda_from_sizes(&orbit_sizes(action, y, big_n, tol, cap)?)
}

/// Ratio series from cumulative orbit sizes `sizes[m] = |G_m(y)|`.
pub fn lambda_from_sizes(sizes: &[usize]) -> Result<AverageSeries> {
    let big_n = sizes.len() - 1;
    let samples = (2..=big_n)
        .map(|n| {
            let ratio = (sizes[n] - sizes[n - 1]) as f64 / sizes[n] as f64;
            (n as f64, ratio, 0.0)
        })
        .collect::<Vec<_>>();
    AverageSeries::new(samples, big_n.div_ceil(4))
}

/// Følner defect `|a G_n(y) △ G_n(y)| / |G_n(y)|`.
pub fn folner_defect<A: GroupAction>(
    action: &A,
    y: &A::Point,
    a: &Word,
    n: usize,
    tol: f64,
    cap: usize,
) -> Result<f64> {
    if a.max_index() > action.rank() {
        return Err(Error::Invalid(format!("word {a} uses a letter beyond rank {}", action.rank())));
    }
    let a = a.reduce();
    let ball = orbit_ball(action, y, n, tol, cap)?;
    let size = ball.size_at(n);
    // f_a is injective, so |a G_n \ G_n| = |G_n \ a G_n|.
    let outside = ball.classes()[..size]
        .iter()
        .filter(|c| {
            let img = action.act_word(&a, &c.point);
            !matches!(ball.find(&img), Some(j) if ball.classes()[j].level <= n)
        })
        .count();
    Ok(2.0 * outside as f64 / size as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::ball::ball_size;

    #[test]
    fn free_orbit_matches_ball() {
        for (k, n) in [(1, 6), (2, 5), (3, 4)] {
            let act = FreeAction::new(k).unwrap();
            let ball = orbit_ball(&act, &Word::empty(), n, 0.0, 1 << 20).unwrap();
            for m in 1..=n {
                assert_eq!(ball.size_at(m) as u128, ball_size(k, m));
            }
            let counts = ball.word_counts(n).unwrap();
            assert!(counts.iter().all(|&c| c == 1.0));
        }
    }

    #[test]
    fn representatives_are_shortlex() {
        let act = FreeAction::new(2).unwrap();
        let ball = orbit_ball(&act, &Word::empty(), 3, 0.0, 1000).unwrap();
        let words: Vec<&Word> = ball.classes().iter().map(|c| &c.word).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        for c in ball.classes() {
            assert_eq!(act.act_word(&c.word, &Word::empty()), c.point);
        }
    }

    #[test]
    fn z_folner() {
        let act = FreeAction::new(1).unwrap();
        let a: Word = "a1".parse().unwrap();
        for n in 1..10 {
            let d = folner_defect(&act, &Word::empty(), &a, n, 0.0, 1000).unwrap();
            assert_eq!(d, 2.0 / n as f64);
        }
    }
}
