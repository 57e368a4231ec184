//! Strings over a finite alphabet, addressed by mixed-radix index.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{cap_check, Result};

/// A string `x_1 x_2 ... x_n` of letter indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// The set `X^n` for an alphabet of `base` letters. Words are numbered in
/// lexicographic order, first letter most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordSpace {
    pub base: usize,
    pub len: usize,
}

impl WordSpace {
    pub fn new(base: usize, len: usize) -> Self {
        WordSpace { base, len }
    }

    /// `base^len`, or `None` on overflow.
    pub fn count_u128(&self) -> Option<u128> {
        (self.base as u128).checked_pow(self.len as u32)
    }

    /// `base^len` after checking it against `cap`.
    pub fn checked_count(&self, what: &'static str, cap: u128) -> Result<usize> {
        let size = self.count_u128().unwrap_or(u128::MAX);
        cap_check(what, size, cap)?;
        Ok(size as usize)
    }

    pub fn index(&self, letters: &[usize]) -> usize {
        debug_assert_eq!(letters.len(), self.len);
        letters.iter().fold(0, |acc, &l| acc * self.base + l)
    }

    pub fn letters(&self, mut index: usize) -> Vec<usize> {
        let mut out = alloc::vec![0; self.len];
        for slot in out.iter_mut().rev() {
            *slot = index % self.base;
            index /= self.base;
        }
        out
    }

    pub fn word(&self, index: usize) -> Word {
        Word(self.letters(index))
    }
}

/// Label of a word given the letter labels: concatenation when every letter
/// label is a single character, otherwise dot-separated.
pub fn word_label<S: AsRef<str>>(letters: &[S]) -> String {
    let single = letters.iter().all(|s| s.as_ref().chars().count() == 1);
    let mut out = String::new();
    for (i, s) in letters.iter().enumerate() {
        if i > 0 && !single {
            out.push('.');
        }
        out.push_str(s.as_ref());
    }
    out
}

/// Inverse of [`word_label`].
pub fn split_word_label(label: &str) -> Vec<String> {
    if label.contains('.') {
        label.split('.').map(String::from).collect()
    } else {
        label.chars().map(String::from).collect()
    }
}
