use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// An output value. Alphabets are `{1, …, |O|}`; `Option<Label>` with `None`
/// standing for ⊥ is the content of an output register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub u16);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        Label(i as u16 + 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Multiplicity vector over an alphabet of fixed size.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset {
    counts: SmallVec<[u16; 16]>,
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (l, m) in self.iter() {
            for _ in 0..m {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

impl Multiset {
    pub fn empty(alphabet: usize) -> Self {
        Multiset { counts: SmallVec::from_elem(0, alphabet) }
    }

    pub fn from_counts(counts: &[u16]) -> Self {
        Multiset { counts: SmallVec::from_slice(counts) }
    }

    pub fn from_labels(alphabet: usize, labels: impl IntoIterator<Item = Label>) -> Self {
        let mut m = Self::empty(alphabet);
        for l in labels {
            m.insert(l);
        }
        m
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    pub fn count(&self, l: Label) -> usize {
        self.counts.get(l.index()).copied().unwrap_or(0) as usize
    }

    pub fn contains(&self, l: Label) -> bool {
        self.count(l) > 0
    }

    pub fn size(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn insert(&mut self, l: Label) {
        self.counts[l.index()] += 1;
    }

    /// Removes one copy; returns whether one was present.
    pub fn remove(&mut self, l: Label) -> bool {
        let c = &mut self.counts[l.index()];
        if *c == 0 {
            return false;
        }
        *c -= 1;
        true
    }

    /// Total multiplicity of labels `1..=upto`.
    pub fn count_upto(&self, upto: usize) -> usize {
        self.counts.iter().take(upto).map(|&c| c as usize).sum()
    }

    pub fn is_subset(&self, other: &Multiset) -> bool {
        self.counts.len() == other.counts.len() && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Pointwise maximum.
    pub fn union(&self, other: &Multiset) -> Multiset {
        Multiset { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| *a.max(b)).collect() }
    }

    /// Pointwise minimum.
    pub fn intersection(&self, other: &Multiset) -> Multiset {
        Multiset { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| *a.min(b)).collect() }
    }

    /// Pointwise sum.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        Multiset { counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect() }
    }

    /// Labels with positive multiplicity, paired with it.
    pub fn iter(&self) -> impl Iterator<Item = (Label, usize)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (Label::from_index(i), c as usize))
    }

    pub fn support(&self) -> impl Iterator<Item = Label> + '_ {
        self.iter().map(|(l, _)| l)
    }
}

/// All multisets of size at most `bound` over an alphabet, with a bijective
/// ranking onto `0..len()` that follows lexicographic order of the count
/// vectors.
#[derive(Debug, Clone)]
pub struct MultisetSpace {
    alphabet: usize,
    bound: usize,
    // within[k][r] = number of count vectors over k letters with sum ≤ r
    within: Vec<Vec<u64>>,
}

impl MultisetSpace {
    pub fn new(alphabet: usize, bound: usize) -> Self {
        let mut within = vec![vec![1u64; bound + 1]; alphabet + 1];
        for k in 1..=alphabet {
            for r in 0..=bound {
                within[k][r] = (0..=r).map(|x| within[k - 1][r - x]).sum();
            }
        }
        MultisetSpace { alphabet, bound, within }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.within[self.alphabet][self.bound] as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self, m: &Multiset) -> usize {
        debug_assert!(m.size() <= self.bound);
        let mut rank = 0u64;
        let mut budget = self.bound;
        for (j, &c) in m.counts().iter().enumerate() {
            let rest = self.alphabet - j - 1;
            for x in 0..c as usize {
                rank += self.within[rest][budget - x];
            }
            budget -= c as usize;
        }
        rank as usize
    }

    /// Every multiset of the space in rank order.
    pub fn all(&self) -> Vec<Multiset> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = vec![0u16; self.alphabet];
        fn go(j: usize, budget: usize, cur: &mut Vec<u16>, out: &mut Vec<Multiset>) {
            if j == cur.len() {
                out.push(Multiset::from_counts(cur));
                return;
            }
            for x in 0..=budget {
                cur[j] = x as u16;
                go(j + 1, budget - x, cur, out);
            }
            cur[j] = 0;
        }
        go(0, self.bound, &mut cur, &mut out);
        out
    }
}
