//! Consecution/inversion sequences that index Fiedler pencils.
//!
//! A bijection `σ : {0, …, d−1} → {1, …, d}` has a consecution at `i` when
//! `σ(i) < σ(i+1)` and an inversion otherwise. Only these `d − 1` decisions
//! affect the pencil, so they are what [`SigmaSeq`] stores.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Consecution,
    Inversion,
}

impl Decision {
    pub fn letter(self) -> char {
        match self {
            Decision::Consecution => 'C',
            Decision::Inversion => 'I',
        }
    }
}

/// The decisions of a bijection for degree `d = len + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaSeq {
    decisions: Vec<Decision>,
}

impl SigmaSeq {
    pub fn from_decisions(decisions: Vec<Decision>) -> Self {
        Self { decisions }
    }

    /// All consecutions: the first companion form.
    pub fn all_consecutions(d: usize) -> Self {
        Self {
            decisions: vec![Decision::Consecution; d.saturating_sub(1)],
        }
    }

    /// All inversions: the second companion form.
    pub fn all_inversions(d: usize) -> Self {
        Self {
            decisions: vec![Decision::Inversion; d.saturating_sub(1)],
        }
    }

    /// Reads the decisions of a bijection given by its values `σ(0), …, σ(d−1)`,
    /// which must be a permutation of `1..=d`.
    pub fn from_bijection(values: &[usize]) -> Result<Self> {
        let d = values.len();
        let mut seen = vec![false; d];
        for &v in values {
            if v == 0 || v > d || seen[v - 1] {
                return Err(Error::NotPermutation(v));
            }
            seen[v - 1] = true;
        }
        let decisions = values
            .windows(2)
            .map(|w| {
                if w[0] < w[1] {
                    Decision::Consecution
                } else {
                    Decision::Inversion
                }
            })
            .collect();
        Ok(Self { decisions })
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    /// Degree `d` of the polynomial this sequence belongs to.
    pub fn degree(&self) -> usize {
        self.decisions.len() + 1
    }

    pub fn decision(&self, i: usize) -> Result<Decision> {
        self.decisions.get(i).copied().ok_or(Error::OutOfRange {
            index: i,
            limit: self.decisions.len(),
        })
    }

    fn count(&self, which: Decision, lo: usize, hi: usize) -> usize {
        if self.decisions.is_empty() || lo > hi {
            return 0;
        }
        let hi = hi.min(self.decisions.len() - 1);
        self.decisions
            .get(lo..=hi)
            .map_or(0, |s| s.iter().filter(|&&x| x == which).count())
    }

    /// Number of consecutions among decisions `lo..=hi`.
    pub fn c_count(&self, lo: usize, hi: usize) -> usize {
        self.count(Decision::Consecution, lo, hi)
    }

    /// Number of inversions among decisions `lo..=hi`.
    pub fn i_count(&self, lo: usize, hi: usize) -> usize {
        self.count(Decision::Inversion, lo, hi)
    }

    /// Run lengths `(c₁, i₁, c₂, i₂, …)` starting with the leading consecutions
    /// (possibly zero).
    pub fn ciss(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = Decision::Consecution;
        let mut len = 0;
        for &x in &self.decisions {
            if x == current {
                len += 1;
            } else {
                runs.push(len);
                current = x;
                len = 1;
            }
        }
        if len > 0 || runs.is_empty() {
            runs.push(len);
        }
        runs
    }

    /// A bijection with these decisions: index `i` is placed to the right of
    /// all earlier indices on a consecution and to the left on an inversion.
    pub fn canonical_bijection(&self) -> Vec<usize> {
        let d = self.degree();
        let mut order: Vec<usize> = vec![0];
        for (i, &x) in self.decisions.iter().enumerate() {
            match x {
                Decision::Consecution => order.push(i + 1),
                Decision::Inversion => order.insert(0, i + 1),
            }
        }
        let mut sigma = vec![0; d];
        for (pos, &idx) in order.iter().enumerate() {
            sigma[idx] = pos + 1;
        }
        sigma
    }

    /// Every sequence for degree `d`, in binary counting order with `C` as 0.
    pub fn all(d: usize) -> impl Iterator<Item = SigmaSeq> {
        let len = d.saturating_sub(1);
        (0..1usize << len).map(move |bits| SigmaSeq {
            decisions: (0..len)
                .map(|i| {
                    if bits >> (len - 1 - i) & 1 == 0 {
                        Decision::Consecution
                    } else {
                        Decision::Inversion
                    }
                })
                .collect(),
        })
    }

    pub fn to_letters(&self) -> String {
        self.decisions.iter().map(|x| x.letter()).collect()
    }
}

impl fmt::Display for SigmaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.decisions {
            write!(f, "{}", x.letter())?;
        }
        Ok(())
    }
}

/// Accepts either a letter string such as `CCICI` or a comma-separated
/// bijection such as `1,2,4,3,6,5`. The empty string is the degree-one sequence.
impl FromStr for SigmaSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') || (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit())) {
            let mut values = Vec::new();
            for part in s.split(',') {
                let v = part
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::SigmaSyntax("bad integer in bijection"))?;
                values.push(v);
            }
            return Self::from_bijection(&values);
        }
        let decisions = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'C' => Ok(Decision::Consecution),
                'I' => Ok(Decision::Inversion),
                _ => Err(Error::SigmaSyntax("expected only C and I")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { decisions })
    }
}
