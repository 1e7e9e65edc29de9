use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// A finite sequence of letters. Positions are 0-based in code and 1-based in text.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// The subsequence at the given (increasing) positions.
    pub fn restrict(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&i| self.0[i]).collect())
    }

    /// The word with position `i` removed.
    pub fn without(&self, i: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(i);
        Word(v)
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    /// Single digits are written back to back; any letter above 9 switches to a comma list.
    /// The empty word prints as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        write_letters(f, &self.0)
    }
}

pub(crate) fn write_letters(f: &mut impl fmt::Write, letters: &[u32]) -> fmt::Result {
    if letters.iter().all(|&l| l <= 9) {
        for l in letters {
            write!(f, "{l}")?;
        }
    } else {
        let parts: Vec<_> = letters.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))?;
    }
    Ok(())
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `123`, `1,2,3`, and `ε`, `e` or the empty string for the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Word::empty());
        }
        let letters = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Input(format!("bad letter {p:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Input(format!("bad letter {c:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }
}

/// Reduced form: the letter of rank `k` among the distinct letters becomes `k`.
pub fn reduce(letters: &[u32]) -> Result<Vec<u32>> {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return input(format!("letters of {} are not distinct", Word(letters.to_vec())));
    }
    Ok(letters
        .iter()
        .map(|l| sorted.binary_search(l).expect("present") as u32 + 1)
        .collect())
}

/// Reduced form of letters already known to be distinct.
pub(crate) fn reduce_distinct(letters: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; letters.len()];
    for (i, &l) in letters.iter().enumerate() {
        out[i] = 1 + letters.iter().filter(|&&m| m < l).count() as u32;
    }
    out
}

pub fn is_reduced_permutation(letters: &[u32]) -> bool {
    let n = letters.len();
    let mut seen = vec![false; n + 1];
    letters.iter().all(|&l| {
        let ok = l >= 1 && (l as usize) <= n && !seen[l as usize];
        if ok {
            seen[l as usize] = true;
        }
        ok
    })
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Word> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![Word(cur.clone())];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Word(cur.clone()));
    }
    out
}

/// All words of length `n` over `alphabet`, lexicographic in the alphabet's order.
pub fn words(alphabet: &[u32], n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for &a in alphabet {
                let mut v = w.0.clone();
                v.push(a);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

/// True for balanced words over `{0, 1}` whose prefixes never have more 1s than 0s.
pub fn is_dyck(letters: &[u32]) -> bool {
    let mut height = 0i64;
    for &l in letters {
        match l {
            0 => height += 1,
            1 => height -= 1,
            _ => return false,
        }
        if height < 0 {
            return false;
        }
    }
    height == 0
}

/// All Dyck words of length `n` (empty unless `n` is even).
pub fn dyck_words(n: usize) -> Vec<Word> {
    if n % 2 == 1 {
        return Vec::new();
    }
    words(&[0, 1], n).into_iter().filter(|w| is_dyck(&w.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[2, 6, 4]).unwrap(), vec![1, 3, 2]);
        assert_eq!(reduce(&[1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert_eq!(reduce(&[5, 6, 3]).unwrap(), vec![2, 3, 1]);
        assert!(reduce(&[2, 2]).is_err());
    }

    #[test]
    fn reduce_distinct_matches() {
        assert_eq!(reduce_distinct(&[7, 1, 4]), reduce(&[7, 1, 4]).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let w: Word = "231645".parse().unwrap();
        assert_eq!(w.0, vec![2, 3, 1, 6, 4, 5]);
        assert_eq!(w.to_string(), "231645");
        let long: Word = "10,2,1".parse().unwrap();
        assert_eq!(long.to_string(), "10,2,1");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert_eq!(Word::empty().to_string(), "ε");
        assert!("12a".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(words(&[1, 2], 3).len(), 8);
        assert_eq!(dyck_words(6).len(), 5);
        assert!(is_dyck(&[0, 0, 1, 1]));
        assert!(!is_dyck(&[1, 0]));
    }

    #[test]
    fn permutation_check() {
        assert!(is_reduced_permutation(&[2, 1, 3]));
        assert!(!is_reduced_permutation(&[2, 4, 3]));
    }
}
