//! Fixed-width bit strings, read left to right with the leftmost bit most
//! significant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Widest string we can hold in a single word.
pub const MAX_WIDTH: usize = 64;

/// A bit string of fixed width. Ordering is lexicographic on the printed
/// form, which for equal widths coincides with numeric order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bits {
    value: u64,
    width: usize,
}

impl Bits {
    pub fn new(value: u64, width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "bit string wider than {MAX_WIDTH}");
        assert!(
            width == MAX_WIDTH || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        Self { value, width }
    }

    pub fn zeros(width: usize) -> Self {
        Self::new(0, width)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn index(self) -> usize {
        self.value as usize
    }

    pub fn width(self) -> usize {
        self.width
    }

    /// Bit at position `i`, counted from the left.
    pub fn bit(self, i: usize) -> bool {
        assert!(i < self.width);
        (self.value >> (self.width - 1 - i)) & 1 == 1
    }

    pub fn count_ones(self) -> u32 {
        self.value.count_ones()
    }

    pub fn parity(self) -> bool {
        self.count_ones() % 2 == 1
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Mod-2 inner product.
    pub fn dot(self, other: Bits) -> bool {
        (self.value & other.value).count_ones() % 2 == 1
    }

    pub fn xor(self, other: Bits) -> Bits {
        debug_assert_eq!(self.width, other.width);
        Bits::new(self.value ^ other.value, self.width)
    }

    /// Concatenation, `self` on the left.
    pub fn concat(self, right: Bits) -> Bits {
        let width = self.width + right.width;
        let hi = if right.width == MAX_WIDTH { 0 } else { self.value << right.width };
        Bits::new(hi | right.value, width)
    }

    /// Splits into consecutive chunks of `chunk` bits, leftmost first.
    pub fn chunks(self, chunk: usize) -> Vec<Bits> {
        assert!(chunk > 0 && self.width % chunk == 0);
        let mask = if chunk == MAX_WIDTH { u64::MAX } else { (1u64 << chunk) - 1 };
        (0..self.width / chunk)
            .map(|i| {
                let shift = self.width - (i + 1) * chunk;
                Bits::new((self.value >> shift) & mask, chunk)
            })
            .collect()
    }

    /// All strings of the given width in increasing order.
    pub fn all(width: usize) -> impl Iterator<Item = Bits> {
        assert!(width < MAX_WIDTH);
        (0..1u64 << width).map(move |v| Bits::new(v, width))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.width.min(other.width);
        let prefix = |b: &Bits| if common == 0 { 0 } else { b.value >> (b.width - common) };
        prefix(self)
            .cmp(&prefix(other))
            .then(self.width.cmp(&other.width))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
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

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_WIDTH {
            return Err(Error::InvalidBits(s.to_string()));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidBits(s.to_string())),
                };
        }
        Ok(Bits::new(value, s.len()))
    }
}

/// Shorthand for literal bit strings in tests and tables.
pub fn bits(s: &str) -> Bits {
    s.parse().unwrap_or_else(|_| panic!("not a bit string: {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_msb_first() {
        assert_eq!(Bits::new(0b0011, 4).to_string(), "0011");
        assert_eq!(Bits::new(0, 0).to_string(), "");
        assert!(bits("10").bit(0));
        assert!(!bits("10").bit(1));
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![bits("1"), bits("01"), bits("00"), bits("0")];
        v.sort();
        let s: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(s, ["0", "00", "01", "1"]);
    }

    #[test]
    fn concat_and_chunks() {
        let k = bits("00").concat(bits("01")).concat(bits("10")).concat(bits("11"));
        assert_eq!(k, bits("00011011"));
        assert_eq!(k.chunks(2), vec![bits("00"), bits("01"), bits("10"), bits("11")]);
    }

    #[test]
    fn dot_product() {
        assert!(!bits("110").dot(bits("111")));
        assert!(bits("100").dot(bits("111")));
    }

    #[test]
    fn rejects_non_binary() {
        assert!("0120".parse::<Bits>().is_err());
    }
}
