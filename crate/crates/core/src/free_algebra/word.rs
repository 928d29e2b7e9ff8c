use std::fmt;

/// Longest word that fits in one packed integer.
pub const MAX_WORD_LEN: usize = 15;
/// Letters are 4-bit ids.
pub const MAX_GENERATORS: usize = 16;

/// A noncommutative monomial packed into a `u64`.
///
/// Letter `i` occupies bits `60 - 4i .. 64 - 4i`, the length sits in the low
/// nibble. Unused letter nibbles are zero, so integer comparison coincides
/// with lexicographic order (a proper prefix sorts first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(u64);

impl Word {
    pub const EMPTY: Word = Word(0);

    pub fn letter_word(id: usize) -> Word {
        assert!(id < MAX_GENERATORS, "generator id {id} out of range");
        Word(((id as u64) << 60) | 1)
    }

    pub fn from_letters(letters: &[usize]) -> Option<Word> {
        if letters.len() > MAX_WORD_LEN {
            return None;
        }
        let mut bits = letters.len() as u64;
        for (i, &l) in letters.iter().enumerate() {
            if l >= MAX_GENERATORS {
                return None;
            }
            bits |= (l as u64) << (60 - 4 * i);
        }
        Some(Word(bits))
    }

    #[inline]
    pub fn len(self) -> usize {
        (self.0 & 0xF) as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn letter(self, i: usize) -> usize {
        debug_assert!(i < self.len());
        ((self.0 >> (60 - 4 * i)) & 0xF) as usize
    }

    pub fn letters(self) -> impl Iterator<Item = usize> {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// Concatenation, or `None` if the result would not fit.
    #[inline]
    pub fn concat(self, other: Word) -> Option<Word> {
        let (la, lb) = (self.len(), other.len());
        if la + lb > MAX_WORD_LEN {
            return None;
        }
        if lb == 0 {
            return Some(self);
        }
        let body = (self.0 & !0xF) | ((other.0 & !0xF) >> (4 * la));
        Some(Word(body | (la + lb) as u64))
    }

    pub fn reversed(self) -> Word {
        let letters: Vec<usize> = self.letters().collect();
        let rev: Vec<usize> = letters.into_iter().rev().collect();
        Word::from_letters(&rev).expect("same length")
    }

    /// Index of the word in base `n`, first letter most significant.
    pub fn dense_index(self, n: usize) -> usize {
        self.letters().fold(0, |acc, l| acc * n + l)
    }

    pub fn from_dense_index(mut index: usize, n: usize, len: usize) -> Word {
        let mut letters = vec![0usize; len];
        for slot in letters.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        Word::from_letters(&letters).expect("length checked by caller")
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in self.letters() {
            if l < 26 {
                write!(f, "{}", (b'A' + l as u8) as char)?;
            } else {
                write!(f, "g{l}")?;
            }
        }
        Ok(())
    }
}
