//! Residue and structure alphabets and their fixed-width binary codes.
//!
//! Codes are assigned as `(index + 1) mod 2^w`, where `w` is the minimal
//! width for the alphabet (5 bits for residues, 3 for structures). This
//! gives `A -> 00001` and `H -> 001`, leaves `00000` unused for residues,
//! and maps the blank structure class `U` to `000`.
//!
//! | residue | code  | | structure | code |
//! |---------|-------| |-----------|------|
//! | A       | 00001 | | H         | 001  |
//! | C       | 00010 | | G         | 010  |
//! | D       | 00011 | | I         | 011  |
//! | ...     | ...   | | ...       | ...  |
//! | Y       | 10100 | | U         | 000  |
//!
//! `seqhmm --dump-encoding` prints the full table.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphabetKind {
    Residue,
    Structure,
}

/// An ordered symbol set with a bijective index map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    kind: AlphabetKind,
    symbols: &'static [u8],
    lookup: [u8; 256],
}

const NONE: u8 = u8::MAX;

const fn build_lookup(symbols: &[u8]) -> [u8; 256] {
    let mut table = [NONE; 256];
    let mut i = 0;
    while i < symbols.len() {
        table[symbols[i] as usize] = i as u8;
        i += 1;
    }
    table
}

const RESIDUE_SYMBOLS: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";
const STRUCTURE_SYMBOLS: &[u8] = b"HGIEBTSU";

/// The 20 amino acids, alphabetical by one-letter code.
pub const RESIDUES: Alphabet = Alphabet {
    kind: AlphabetKind::Residue,
    symbols: RESIDUE_SYMBOLS,
    lookup: build_lookup(RESIDUE_SYMBOLS),
};

/// The eight DSSP classes; `U` stands for the blank (unassigned) class.
pub const STRUCTURES: Alphabet = Alphabet {
    kind: AlphabetKind::Structure,
    symbols: STRUCTURE_SYMBOLS,
    lookup: build_lookup(STRUCTURE_SYMBOLS),
};

impl Alphabet {
    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AlphabetKind::Residue => "residue",
            AlphabetKind::Structure => "structure",
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &'static [u8] {
        self.symbols
    }

    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        match self.lookup[symbol as usize] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index_of(symbol).is_some()
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index] as char
    }

    /// Smallest number of bits that can hold every code.
    pub fn min_code_width(&self) -> usize {
        let n = self.len();
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }

    /// Integer code of the symbol at `index`.
    pub fn code(&self, index: usize) -> u32 {
        let modulus = 1u32 << self.min_code_width();
        (index as u32 + 1) % modulus
    }

    /// Position-wise index mapping of a string.
    pub fn indices(&self, s: &str) -> Result<Vec<usize>> {
        s.bytes()
            .enumerate()
            .map(|(i, b)| {
                self.index_of(b).ok_or(Error::SymbolNotInAlphabet {
                    ch: char_at(s, i),
                    position: i + 1,
                    alphabet: self.name(),
                })
            })
            .collect()
    }

    pub fn string_from_indices(&self, indices: &[usize]) -> String {
        indices.iter().map(|&i| self.symbol(i)).collect()
    }

    /// Big-endian bits of the symbol's code, left-padded to `width`.
    pub fn encode(&self, symbol: char, width: usize) -> Result<Vec<u8>> {
        let needed = self.min_code_width();
        if width < needed {
            return Err(Error::EncodingWidth {
                width,
                needed,
                alphabet: self.name(),
            });
        }
        let index = u8::try_from(symbol)
            .ok()
            .and_then(|b| self.index_of(b))
            .ok_or(Error::SymbolNotInAlphabet {
                ch: symbol,
                position: 1,
                alphabet: self.name(),
            })?;
        Ok(code_bits(self.code(index), width))
    }

    pub fn decode(&self, bits: &[u8]) -> Result<char> {
        let invalid = Error::InvalidCode {
            alphabet: self.name(),
        };
        if bits.len() < self.min_code_width() || bits.iter().any(|&b| b > 1) {
            return Err(invalid);
        }
        let value = bits
            .iter()
            .try_fold(0u32, |acc, &b| acc.checked_mul(2).map(|v| v | b as u32))
            .ok_or(invalid.clone())?;
        (0..self.len())
            .find(|&i| self.code(i) == value)
            .map(|i| self.symbol(i))
            .ok_or(invalid)
    }
}

fn char_at(s: &str, byte_pos: usize) -> char {
    s[byte_pos..].chars().next().unwrap_or('?')
}

pub(crate) fn code_bits(code: u32, width: usize) -> Vec<u8> {
    (0..width)
        .rev()
        .map(|shift| if shift < 32 { ((code >> shift) & 1) as u8 } else { 0 })
        .collect()
}

/// Human-readable code table for both alphabets.
pub fn encoding_table() -> String {
    let mut out = String::new();
    for alphabet in [RESIDUES, STRUCTURES] {
        let width = alphabet.min_code_width();
        out.push_str(&format!("# {} ({} bits)\n", alphabet.name(), width));
        for i in 0..alphabet.len() {
            let bits: String = code_bits(alphabet.code(i), width)
                .iter()
                .map(|b| char::from(b'0' + b))
                .collect();
            out.push_str(&format!("{}\t{}\n", alphabet.symbol(i), bits));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_sizes_and_bijection() {
        assert_eq!(RESIDUES.len(), 20);
        assert_eq!(STRUCTURES.len(), 8);
        for a in [RESIDUES, STRUCTURES] {
            for (i, &s) in a.symbols().iter().enumerate() {
                assert_eq!(a.index_of(s), Some(i));
            }
        }
        assert_eq!(RESIDUES.index_of(b'X'), None);
        assert_eq!(STRUCTURES.index_of(b' '), None);
    }

    #[test]
    fn anchor_codes() {
        assert_eq!(RESIDUES.encode('A', 5).unwrap(), vec![0, 0, 0, 0, 1]);
        assert_eq!(STRUCTURES.encode('H', 3).unwrap(), vec![0, 0, 1]);
        assert_eq!(STRUCTURES.encode('U', 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(RESIDUES.min_code_width(), 5);
        assert_eq!(STRUCTURES.min_code_width(), 3);
    }

    #[test]
    fn wider_codes_are_left_padded() {
        assert_eq!(STRUCTURES.encode('H', 5).unwrap(), vec![0, 0, 0, 0, 1]);
        assert_eq!(STRUCTURES.decode(&[0, 0, 0, 0, 1]).unwrap(), 'H');
    }

    #[test]
    fn decode_inverts_encode() {
        for a in [RESIDUES, STRUCTURES] {
            for &s in a.symbols() {
                let bits = a.encode(s as char, a.min_code_width()).unwrap();
                assert_eq!(a.decode(&bits).unwrap(), s as char);
            }
        }
    }

    #[test]
    fn encode_errors() {
        assert!(matches!(
            RESIDUES.encode('X', 5),
            Err(Error::SymbolNotInAlphabet { .. })
        ));
        assert!(matches!(
            RESIDUES.encode('A', 4),
            Err(Error::EncodingWidth { needed: 5, .. })
        ));
        // 00000 is not a residue code
        assert!(RESIDUES.decode(&[0, 0, 0, 0, 0]).is_err());
        assert!(RESIDUES.decode(&[1, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn index_vectors() {
        assert_eq!(RESIDUES.indices("AA").unwrap(), vec![0, 0]);
        assert_eq!(STRUCTURES.indices("HU").unwrap(), vec![0, 7]);
        assert_eq!(RESIDUES.indices("").unwrap(), Vec::<usize>::new());
        match RESIDUES.indices("ACZ") {
            Err(Error::SymbolNotInAlphabet { ch, position, .. }) => {
                assert_eq!((ch, position), ('Z', 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn table_lists_every_symbol() {
        let t = encoding_table();
        assert!(t.contains("A\t00001"));
        assert!(t.contains("H\t001"));
        assert_eq!(t.lines().count(), 20 + 8 + 2);
    }
}
