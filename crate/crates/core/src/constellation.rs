//! Gray-mapped QPSK and 16QAM constellations.
//!
//! Both constellations are normalized so that the energy per bit is one:
//! the mean symbol energy equals `log2(M)`. QPSK is therefore the
//! unnormalized `{±1 ± j}` set and 16QAM is the `{±1, ±3}²` grid scaled by
//! `1/sqrt(2.5)`.
//!
//! Point `i` carries the bit label whose binary value is `i`, so labels and
//! indices coincide. Bits are read most significant first: for QPSK the label
//! is `(b0 b1)` with `b0` driving the real part; for 16QAM it is
//! `(b0 b1 | b2 b3)` with `b0 b1` on the real axis and `b2 b3` on the
//! imaginary axis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationKind {
    Qpsk,
    Qam16,
}

impl ConstellationKind {
    pub fn size(self) -> usize {
        match self {
            ConstellationKind::Qpsk => 4,
            ConstellationKind::Qam16 => 16,
        }
    }

    pub fn bits_per_symbol(self) -> u32 {
        self.size().trailing_zeros()
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstellationKind::Qpsk => "qpsk",
            ConstellationKind::Qam16 => "16qam",
        }
    }
}

impl fmt::Display for ConstellationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstellationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" | "4qam" => Ok(ConstellationKind::Qpsk),
            "16qam" | "qam16" => Ok(ConstellationKind::Qam16),
            other => Err(Error::UnsupportedConstellation(other.to_string())),
        }
    }
}

/// Per-axis Gray code for the 4-level PAM components of 16QAM, indexed by the
/// two-bit axis label: `00 -> -3`, `01 -> -1`, `10 -> +3`, `11 -> +1`.
const PAM4_GRAY: [i32; 4] = [-3, -1, 3, 1];

/// A finite symbol alphabet with Gray bit labels.
///
/// Symbols are kept as integer grid coordinates together with a common
/// amplitude scale, so symbol differences can be compared exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ConstellationKind,
    grid: Vec<(i32, i32)>,
    scale: f64,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(kind: ConstellationKind) -> Self {
        let (grid, scale): (Vec<(i32, i32)>, f64) = match kind {
            ConstellationKind::Qpsk => {
                let grid = (0..4u32)
                    .map(|label| {
                        let b0 = ((label >> 1) & 1) as i32;
                        let b1 = (label & 1) as i32;
                        (1 - 2 * b0, 1 - 2 * b1)
                    })
                    .collect();
                (grid, 1.0)
            }
            ConstellationKind::Qam16 => {
                let grid = (0..16u32)
                    .map(|label| {
                        let re = PAM4_GRAY[((label >> 2) & 3) as usize];
                        let im = PAM4_GRAY[(label & 3) as usize];
                        (re, im)
                    })
                    .collect();
                (grid, 1.0 / 2.5f64.sqrt())
            }
        };
        let points = grid
            .iter()
            .map(|&(re, im)| Complex64::new(re as f64 * scale, im as f64 * scale))
            .collect();
        Constellation {
            kind,
            grid,
            scale,
            points,
        }
    }

    /// Builds a constellation from its textual name (`qpsk`, `16qam`).
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    /// Number of points `M`.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.kind.bits_per_symbol()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Result<Complex64> {
        self.check_index(index)?;
        Ok(self.points[index])
    }

    /// Integer grid coordinates of point `index`; the symbol is `scale() * grid`.
    pub fn grid(&self, index: usize) -> (i32, i32) {
        self.grid[index]
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Bit label of point `index` as an integer (equal to the index).
    pub fn label(&self, index: usize) -> u32 {
        index as u32
    }

    /// Bit label rendered as a `bits_per_symbol`-character string.
    pub fn label_string(&self, index: usize) -> String {
        format!(
            "{:0width$b}",
            self.label(index),
            width = self.bits_per_symbol() as usize
        )
    }

    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.size() as f64
    }

    /// Hamming distance between the labels of points `a` and `b`.
    pub fn bit_distance(&self, a: usize, b: usize) -> Result<u32> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok((self.label(a) ^ self.label(b)).count_ones())
    }

    pub fn codeword(&self, index1: usize, index2: usize) -> Result<Codeword> {
        self.check_index(index1)?;
        self.check_index(index2)?;
        Ok(self.codeword_unchecked(index1, index2))
    }

    pub(crate) fn codeword_unchecked(&self, index1: usize, index2: usize) -> Codeword {
        let bits = self.bits_per_symbol();
        Codeword {
            kind: self.kind,
            index1,
            index2,
            x1: self.points[index1],
            x2: self.points[index2],
            label_bits: (self.label(index1) << bits) | self.label(index2),
        }
    }

    /// Number of label bits in which two codewords differ.
    pub fn codeword_bit_distance(&self, w: &Codeword, w_hat: &Codeword) -> Result<u32> {
        if w.kind != self.kind || w_hat.kind != self.kind {
            return Err(Error::MixedConstellations);
        }
        Ok(self.bit_distance(w.index1, w_hat.index1)?
            + self.bit_distance(w.index2, w_hat.index2)?)
    }

    /// All `M^2` codewords in row-major order of `(index1, index2)`.
    pub fn codewords(&self) -> Vec<Codeword> {
        let m = self.size();
        (0..m * m)
            .map(|k| self.codeword_unchecked(k / m, k % m))
            .collect()
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                size: self.size(),
            })
        }
    }
}

/// The symbol pair `(x1, x2)` sent by the two users in one channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Codeword {
    pub kind: ConstellationKind,
    pub index1: usize,
    pub index2: usize,
    pub x1: Complex64,
    pub x2: Complex64,
    /// User-1 label bits followed by user-2 label bits.
    pub label_bits: u32,
}

impl Codeword {
    /// Position of this codeword in [`Constellation::codewords`] order.
    pub fn enumeration_index(&self) -> usize {
        self.index1 * self.kind.size() + self.index2
    }

    pub fn bit_count(&self) -> u32 {
        2 * self.kind.bits_per_symbol()
    }
}
