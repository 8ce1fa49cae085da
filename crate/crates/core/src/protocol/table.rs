use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported input length per party; tables hold up to `2^28` entries.
pub const MAX_N: u32 = 14;

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::SizeGuard(format!(
            "input length n = {n} outside 1..={MAX_N}"
        )));
    }
    Ok(())
}

/// Bit-packed truth table of `f: {0,1}^n x {0,1}^n -> {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(n: u32) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << (2 * n);
        Ok(TruthTable {
            n,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn from_fn<F: FnMut(u32, u32) -> bool>(n: u32, mut f: F) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        let side = 1u32 << n;
        for x in 0..side {
            for y in 0..side {
                if f(x, y) {
                    t.set_index(t.index(x, y), true);
                }
            }
        }
        Ok(t)
    }

    /// Table from raw bits in index order; bits past `4^n` must be zero.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        if words.len() != t.words.len() {
            return Err(Error::DimensionMismatch {
                expected: t.words.len(),
                found: words.len(),
            });
        }
        t.words = words;
        let len = t.len();
        if len % 64 != 0 && t.words[len / 64] >> (len % 64) != 0 {
            return Err(Error::InvalidInput("bits set beyond table length".into()));
        }
        Ok(t)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of entries, `2^{2n}`.
    pub fn len(&self) -> usize {
        1usize << (2 * self.n)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, x: u32, y: u32) -> usize {
        ((x as usize) << self.n) | y as usize
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.get_index(self.index(x, y))
    }

    pub fn get_index(&self, index: usize) -> bool {
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn set_index(&mut self, index: usize, value: bool) {
        let mask = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hex dump, little-endian bit order within each byte.
    pub fn bits_hex(&self) -> String {
        let bytes = self.len().div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(bytes)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn from_bits_hex(n: u32, hex: &str) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        let bytes = t.len().div_ceil(8);
        if hex.len() != 2 * bytes || !hex.is_ascii() {
            return Err(Error::InvalidInput(format!(
                "expected {} hex digits for n = {n}, got {}",
                2 * bytes,
                hex.len()
            )));
        }
        let mut words = vec![0u64; t.words.len()];
        for (i, pair) in hex.as_bytes().chunks(2).enumerate() {
            let s = std::str::from_utf8(pair).expect("ascii");
            let b = u8::from_str_radix(s, 16)
                .map_err(|_| Error::InvalidInput(format!("bad hex byte {s:?}")))?;
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        t = Self::from_words(n, words)?;
        Ok(t)
    }

    pub fn to_file(&self) -> TruthTableFile {
        TruthTableFile {
            n: self.n,
            bits_hex: self.bits_hex(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTableFile {
    pub n: u32,
    pub bits_hex: String,
}

impl TryFrom<TruthTableFile> for TruthTable {
    type Error = Error;

    fn try_from(file: TruthTableFile) -> Result<Self> {
        TruthTable::from_bits_hex(file.n, &file.bits_hex)
    }
}

/// Acceptance probabilities of a randomized protocol, one per input pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    n: u32,
    values: Vec<f64>,
}

impl ProbabilityTable {
    /// Entries must lie in `[0, 1]` up to 1e-12; they are clamped into the interval.
    pub fn new(n: u32, mut values: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << (2 * n);
        if values.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(-1e-12..=1.0 + 1e-12).contains(*v)) {
            return Err(Error::InvalidInput(format!(
                "probability {v} outside [0, 1]"
            )));
        }
        values.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        Ok(ProbabilityTable { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[((x as usize) << self.n) | y as usize]
    }

    pub fn to_file(&self) -> ProbabilityTableFile {
        ProbabilityTableFile {
            n: self.n,
            values: self.values.clone(),
        }
    }
}

impl From<&TruthTable> for ProbabilityTable {
    fn from(t: &TruthTable) -> Self {
        ProbabilityTable {
            n: t.n,
            values: (0..t.len())
                .map(|i| if t.get_index(i) { 1.0 } else { 0.0 })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTableFile {
    pub n: u32,
    pub values: Vec<f64>,
}

impl TryFrom<ProbabilityTableFile> for ProbabilityTable {
    type Error = Error;

    fn try_from(file: ProbabilityTableFile) -> Result<Self> {
        ProbabilityTable::new(file.n, file.values)
    }
}
