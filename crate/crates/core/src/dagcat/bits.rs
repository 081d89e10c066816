use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A word over `{+, -}` of length at most 64, i.e. an element of `Z₂^m`
/// with `+` the identity. Bit `i` of `minus` is set when coordinate `i` is `-`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: u8,
    minus: u64,
}

impl Bits {
    pub const MAX_LEN: usize = 64;

    /// The empty word (the only element of `Z₂^0`).
    pub const EMPTY: Bits = Bits { len: 0, minus: 0 };

    fn mask(len: usize) -> u64 {
        if len == 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        }
    }

    /// `+^m`.
    pub fn plus(m: usize) -> Bits {
        assert!(m <= Self::MAX_LEN, "at most 64 bit coordinates");
        Bits { len: m as u8, minus: 0 }
    }

    /// `-^m`.
    pub fn minus(m: usize) -> Bits {
        Bits::plus(m).conj()
    }

    pub fn from_signs(minus: &[bool]) -> Bits {
        let mut b = Bits::plus(minus.len());
        for (i, &s) in minus.iter().enumerate() {
            b = b.with(i, s);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_minus(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.minus >> i & 1 == 1
    }

    /// The same word with coordinate `i` set to `-` (`true`) or `+`.
    pub fn with(self, i: usize, minus: bool) -> Bits {
        assert!(i < self.len());
        let minus = if minus {
            self.minus | 1 << i
        } else {
            self.minus & !(1 << i)
        };
        Bits { minus, ..self }
    }

    pub fn flip(self, i: usize) -> Bits {
        self.with(i, !self.is_minus(i))
    }

    /// `|λ|`, the number of `-` entries.
    pub fn weight(&self) -> i64 {
        self.minus.count_ones() as i64
    }

    /// `λ̄ = -^m ∗ λ`.
    pub fn conj(self) -> Bits {
        Bits {
            minus: !self.minus & Self::mask(self.len()),
            ..self
        }
    }

    /// The group product `λ ∗ μ`.
    pub fn mul(self, other: Bits) -> Result<Bits> {
        if self.len != other.len {
            return Err(Error::BitLength(self.len(), other.len()));
        }
        Ok(Bits {
            len: self.len,
            minus: self.minus ^ other.minus,
        })
    }

    /// Concatenation `λμ`.
    pub fn concat(self, other: Bits) -> Bits {
        let len = self.len() + other.len();
        assert!(len <= Self::MAX_LEN, "at most 64 bit coordinates");
        Bits {
            len: len as u8,
            minus: self.minus | other.minus << self.len,
        }
    }

    /// Coordinates `start..end`.
    pub fn slice(self, start: usize, end: usize) -> Bits {
        assert!(start <= end && end <= self.len());
        Bits {
            len: (end - start) as u8,
            minus: (self.minus >> start) & Self::mask(end - start),
        }
    }

    /// `λ ≤ μ` iff every `+` of `λ` is a `+` of `μ`.
    pub fn le(self, other: Bits) -> bool {
        self.len == other.len && other.minus & !self.minus == 0
    }

    /// `|μ - λ|`: coordinates where `λ` is `-` and `μ` is `+`.
    pub fn gap(mu: Bits, lambda: Bits) -> i64 {
        (lambda.minus & !mu.minus & Self::mask(lambda.len())).count_ones() as i64
    }

    /// Coordinate `i` of the result is coordinate `perm[i]` of `self`.
    pub fn permute(self, perm: &[usize]) -> Bits {
        assert_eq!(perm.len(), self.len());
        let mut out = Bits::plus(self.len());
        for (i, &p) in perm.iter().enumerate() {
            out = out.with(i, self.is_minus(p));
        }
        out
    }

    /// All `2^m` words of length `m`, in increasing order.
    pub fn all(m: usize) -> impl Iterator<Item = Bits> {
        assert!(m < Self::MAX_LEN, "cannot enumerate 2^64 words");
        (0..1u64 << m).map(move |minus| Bits { len: m as u8, minus })
    }

    /// Expands a pattern over `{+, -, ±}` (also accepting `*` for `±`)
    /// into the subset of `Z₂^m` it denotes.
    pub fn pattern(p: &str) -> Result<Vec<Bits>> {
        let mut words = vec![Bits::EMPTY];
        for ch in p.chars() {
            let options: &[bool] = match ch {
                '+' => &[false],
                '-' | '−' => &[true],
                '±' | '*' => &[false, true],
                _ => return Err(Error::Shape(format!("bad bit character {ch:?} in {p:?}"))),
            };
            words = words
                .into_iter()
                .flat_map(|w| options.iter().map(move |&s| w.concat(Bits::from_signs(&[s]))))
                .collect();
        }
        words.sort();
        Ok(words)
    }
}

impl Ord for Bits {
    /// Shorter words first; among equal lengths, lexicographic with `+ < -`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            self.minus.reverse_bits().cmp(&other.minus.reverse_bits())
        })
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.is_minus(i) { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Bits> {
        let words = Bits::pattern(s)?;
        match words.as_slice() {
            [w] => Ok(*w),
            _ => Err(Error::Shape(format!("{s:?} is a pattern, not a single word"))),
        }
    }
}

/// A `C_m`-color: bits in `Z₂^m` and a depth. Depths may be negative
/// transiently while shifting.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Color {
    pub bits: Bits,
    pub depth: i64,
}

impl Color {
    pub fn new(bits: Bits, depth: i64) -> Color {
        Color { bits, depth }
    }
}

impl Ord for Color {
    /// By depth, then bits.
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth.cmp(&other.depth).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Color {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.bits, self.depth)
    }
}
