//! Labeled sequence/structure corpus: parsing, serialization and fold splits.
//!
//! Two input layouts are accepted.
//!
//! The assignment layout, one `seq{i}` and one `str{i}` entry per protein.
//! Quoted payloads may wrap across lines; all whitespace inside them is
//! dropped and letters are upper-cased. Text outside assignments is ignored.
//!
//! ```text
//! seq{1}='MFKVYGYDSN
//! IHKCVYCDNA'
//! str{1}='UEEEEEUUTT
//! TSUHHHHHHH'
//! ```
//!
//! The record layout, three lines per protein:
//!
//! ```text
//! >1
//! MFKVYGYDSNIHKCVYCDNA
//! UEEEEEUUTTTSUHHHHHHH
//! ```

use crate::alphabet::{Alphabet, RESIDUES, STRUCTURES};
use crate::error::{Error, Field, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub id: u32,
    pub seq: String,
    #[serde(rename = "str")]
    pub structure: String,
}

impl LabeledPair {
    /// Validates alphabets and alignment.
    pub fn new(id: u32, seq: impl Into<String>, structure: impl Into<String>) -> Result<Self> {
        let pair = LabeledPair {
            id,
            seq: seq.into(),
            structure: structure.into(),
        };
        pair.validate()?;
        Ok(pair)
    }

    fn validate(&self) -> Result<()> {
        if self.seq.is_empty() && self.structure.is_empty() {
            return Err(Error::EmptyPair { id: self.id });
        }
        check_symbols(self.id, Field::Seq, &self.seq, &RESIDUES)?;
        check_symbols(self.id, Field::Str, &self.structure, &STRUCTURES)?;
        if self.seq.len() != self.structure.len() {
            return Err(Error::LengthMismatch {
                id: self.id,
                seq_len: self.seq.len(),
                str_len: self.structure.len(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

fn check_symbols(id: u32, field: Field, s: &str, alphabet: &Alphabet) -> Result<()> {
    match s.char_indices().enumerate().find(|(_, (_, c))| {
        !(c.is_ascii() && alphabet.contains(*c as u8))
    }) {
        Some((position, (_, ch))) => Err(Error::IllegalSymbol {
            id,
            field,
            ch,
            position: position + 1,
        }),
        None => Ok(()),
    }
}

/// Ordered collection of labeled pairs with unique, increasing ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pairs: Vec<LabeledPair>,
}

impl Corpus {
    pub fn new(pairs: Vec<LabeledPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        for w in pairs.windows(2) {
            if w[1].id <= w[0].id {
                return Err(Error::InvalidArgument(format!(
                    "pair ids must be strictly increasing ({} then {})",
                    w[0].id, w[1].id
                )));
            }
        }
        for p in &pairs {
            p.validate()?;
        }
        Ok(Corpus { pairs })
    }

    pub fn pairs(&self) -> &[LabeledPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.id).collect()
    }

    pub fn get(&self, id: u32) -> Option<&LabeledPair> {
        self.pairs
            .binary_search_by_key(&id, |p| p.id)
            .ok()
            .map(|i| &self.pairs[i])
    }

    pub fn select(&self, ids: &[u32]) -> Result<Vec<&LabeledPair>> {
        ids.iter()
            .map(|&id| self.get(id).ok_or(Error::UnknownId(id)))
            .collect()
    }

    /// Contiguous-block folds over the corpus order, expressed in pair ids.
    pub fn folds(&self, n_folds: usize) -> Result<Vec<FoldSpec>> {
        let ids = self.ids();
        let by_position = |positions: &[u32]| -> Vec<u32> {
            positions.iter().map(|&p| ids[p as usize - 1]).collect()
        };
        Ok(make_folds(self.len(), n_folds)?
            .into_iter()
            .map(|f| FoldSpec {
                index: f.index,
                train_ids: by_position(&f.train_ids),
                test_ids: by_position(&f.test_ids),
            })
            .collect())
    }

    /// Serializes in the assignment layout; `parse_corpus` reads it back unchanged.
    pub fn to_assignment_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!("seq{{{}}}='{}'\n", p.id, p.seq));
            out.push_str(&format!("str{{{}}}='{}'\n", p.id, p.structure));
        }
        out
    }

    pub fn to_record_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!(">{}\n{}\n{}\n", p.id, p.seq, p.structure));
        }
        out
    }

    pub fn summary(&self) -> Vec<PairSummary> {
        self.pairs.iter().map(PairSummary::of).collect()
    }
}

/// Per-class counts of a structure string, in canonical class order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct StructureCounts {
    pub H: usize,
    pub G: usize,
    pub I: usize,
    pub E: usize,
    pub B: usize,
    pub T: usize,
    pub S: usize,
    pub U: usize,
}

impl StructureCounts {
    pub fn of(structure: &str) -> Self {
        let mut c = StructureCounts::default();
        for b in structure.bytes() {
            let slot = match b {
                b'H' => &mut c.H,
                b'G' => &mut c.G,
                b'I' => &mut c.I,
                b'E' => &mut c.E,
                b'B' => &mut c.B,
                b'T' => &mut c.T,
                b'S' => &mut c.S,
                b'U' => &mut c.U,
                _ => continue,
            };
            *slot += 1;
        }
        c
    }

    pub fn total(&self) -> usize {
        self.H + self.G + self.I + self.E + self.B + self.T + self.S + self.U
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub id: u32,
    pub length: usize,
    pub structure_counts: StructureCounts,
}

impl PairSummary {
    fn of(p: &LabeledPair) -> Self {
        PairSummary {
            id: p.id,
            length: p.len(),
            structure_counts: StructureCounts::of(&p.structure),
        }
    }
}

/// How `parse_corpus` treats pairs that fail validation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    /// First problem aborts the parse.
    #[default]
    Strict,
    /// Invalid pairs are dropped with a warning.
    Lenient,
    /// Illegal symbols are deleted and misaligned pairs truncated to the
    /// shorter string, each with a warning. Pairs that cannot be repaired
    /// (missing partner, empty) are dropped as in lenient mode.
    Repair,
}

impl std::str::FromStr for ParseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(ParseMode::Strict),
            "lenient" => Ok(ParseMode::Lenient),
            "repair" => Ok(ParseMode::Repair),
            other => Err(Error::InvalidArgument(format!("unknown parse mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseWarning {
    pub id: Option<u32>,
    pub message: String,
    pub dropped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Default)]
struct RawEntry {
    seq: Option<String>,
    structure: Option<String>,
}

/// Parses either corpus layout; see the module docs.
pub fn parse_corpus(text: &str, mode: ParseMode) -> Result<ParsedCorpus> {
    let mut warnings = Vec::new();
    let raw = if text.trim_start().starts_with('>') {
        scan_records(text, mode, &mut warnings)?
    } else {
        scan_assignments(text, mode, &mut warnings)?
    };

    let mut pairs = Vec::with_capacity(raw.len());
    for (id, entry) in raw {
        let (seq, structure) = match (entry.seq, entry.structure) {
            (Some(s), Some(t)) => (s, t),
            (seq, _) => {
                let field = if seq.is_some() { Field::Seq } else { Field::Str };
                soft_fail(mode, &mut warnings, Error::MissingPartner { id, field })?;
                continue;
            }
        };
        match build_pair(id, seq, structure, mode, &mut warnings) {
            Ok(Some(p)) => pairs.push(p),
            Ok(None) => {}
            Err(e) => soft_fail(mode, &mut warnings, e)?,
        }
    }
    let corpus = Corpus::new(pairs)?;
    Ok(ParsedCorpus { corpus, warnings })
}

fn soft_fail(mode: ParseMode, warnings: &mut Vec<ParseWarning>, err: Error) -> Result<()> {
    if mode == ParseMode::Strict {
        return Err(err);
    }
    let id = match &err {
        Error::MissingPartner { id, .. }
        | Error::DuplicateEntry { id, .. }
        | Error::LengthMismatch { id, .. }
        | Error::IllegalSymbol { id, .. }
        | Error::EmptyPair { id } => Some(*id),
        _ => None,
    };
    warnings.push(ParseWarning {
        id,
        message: err.to_string(),
        dropped: true,
    });
    Ok(())
}

fn build_pair(
    id: u32,
    mut seq: String,
    mut structure: String,
    mode: ParseMode,
    warnings: &mut Vec<ParseWarning>,
) -> Result<Option<LabeledPair>> {
    if mode == ParseMode::Repair {
        for (field, s, alphabet) in [
            (Field::Seq, &mut seq, &RESIDUES),
            (Field::Str, &mut structure, &STRUCTURES),
        ] {
            let mut position = 0;
            s.retain(|c| {
                position += 1;
                let keep = c.is_ascii() && alphabet.contains(c as u8);
                if !keep {
                    warnings.push(ParseWarning {
                        id: Some(id),
                        message: format!("removed illegal symbol {c:?} at {field} position {position}"),
                        dropped: false,
                    });
                }
                keep
            });
        }
        if seq.is_empty() || structure.is_empty() {
            return Err(Error::EmptyPair { id });
        }
        if seq.len() != structure.len() {
            let n = seq.len().min(structure.len());
            warnings.push(ParseWarning {
                id: Some(id),
                message: format!(
                    "truncated to {n} positions (sequence {}, structure {})",
                    seq.len(),
                    structure.len()
                ),
                dropped: false,
            });
            seq.truncate(n);
            structure.truncate(n);
        }
    }
    if seq.is_empty() || structure.is_empty() {
        return Err(Error::EmptyPair { id });
    }
    LabeledPair::new(id, seq, structure).map(Some)
}

fn normalize_payload(payload: &str) -> String {
    payload
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

fn insert_entry(
    raw: &mut BTreeMap<u32, RawEntry>,
    id: u32,
    field: Field,
    payload: String,
    mode: ParseMode,
    warnings: &mut Vec<ParseWarning>,
) -> Result<()> {
    let entry = raw.entry(id).or_default();
    let slot = match field {
        Field::Seq => &mut entry.seq,
        Field::Str => &mut entry.structure,
    };
    if slot.is_some() {
        // keep the first definition
        return soft_fail(mode, warnings, Error::DuplicateEntry { id, field });
    }
    *slot = Some(payload);
    Ok(())
}

fn scan_assignments(
    text: &str,
    mode: ParseMode,
    warnings: &mut Vec<ParseWarning>,
) -> Result<BTreeMap<u32, RawEntry>> {
    let bytes = text.as_bytes();
    let line_of = |pos: usize| text[..pos].bytes().filter(|&b| b == b'\n').count() + 1;
    let mut raw = BTreeMap::new();
    let mut pos = 0;

    while let Some(start) = find_keyword(text, pos) {
        let field = if bytes[start + 2] == b'q' {
            Field::Seq
        } else {
            Field::Str
        };
        let mut p = start + 4;
        let digits_end = p + bytes[p..].iter().take_while(|b| b.is_ascii_digit()).count();
        let id = text[p..digits_end].parse::<u32>().ok().filter(|&i| i >= 1);
        p = digits_end;
        let syntax = |message: &str| Error::Syntax {
            line: line_of(start),
            message: format!("{field}{{..}}: {message}"),
        };
        let Some(id) = id else {
            soft_fail(mode, warnings, syntax("expected a positive integer index"))?;
            pos = start + 4;
            continue;
        };
        if bytes.get(p) != Some(&b'}') {
            soft_fail(mode, warnings, syntax("expected '}'"))?;
            pos = p;
            continue;
        }
        p = skip_ws(bytes, p + 1);
        if bytes.get(p) != Some(&b'=') {
            soft_fail(mode, warnings, syntax("expected '='"))?;
            pos = p;
            continue;
        }
        p = skip_ws(bytes, p + 1);
        let quote = match bytes.get(p) {
            Some(&q @ (b'\'' | b'"')) => q,
            _ => {
                soft_fail(mode, warnings, syntax("expected a quoted payload"))?;
                pos = p;
                continue;
            }
        };
        let body_start = p + 1;
        let Some(len) = bytes[body_start..].iter().position(|&b| b == quote) else {
            // nothing after an unterminated quote can be trusted
            return Err(syntax("unterminated quoted payload"));
        };
        let payload = normalize_payload(&text[body_start..body_start + len]);
        insert_entry(&mut raw, id, field, payload, mode, warnings)?;
        pos = body_start + len + 1;
    }
    Ok(raw)
}

fn find_keyword(text: &str, from: usize) -> Option<usize> {
    let rest = &text[from..];
    let a = rest.find("seq{");
    let b = rest.find("str{");
    match (a, b) {
        (Some(x), Some(y)) => Some(from + x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(from + x),
        (None, None) => None,
    }
}

fn skip_ws(bytes: &[u8], mut p: usize) -> usize {
    while p < bytes.len() && bytes[p].is_ascii_whitespace() {
        p += 1;
    }
    p
}

fn scan_records(
    text: &str,
    mode: ParseMode,
    warnings: &mut Vec<ParseWarning>,
) -> Result<BTreeMap<u32, RawEntry>> {
    let mut raw = BTreeMap::new();
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();
    let mut ordinal = 0u32;
    while let Some((line_no, header)) = lines.next() {
        let header = header.trim();
        let Some(name) = header.strip_prefix('>') else {
            soft_fail(
                mode,
                warnings,
                Error::Syntax {
                    line: line_no + 1,
                    message: "expected a '>' record header".into(),
                },
            )?;
            continue;
        };
        ordinal += 1;
        let id = name.trim().parse::<u32>().ok().filter(|&i| i >= 1).unwrap_or(ordinal);
        let mut body = Vec::new();
        while body.len() < 2 {
            match lines.peek() {
                Some((_, l)) if !l.trim_start().starts_with('>') => {
                    body.push(normalize_payload(l));
                    lines.next();
                }
                _ => break,
            }
        }
        let mut body = body.into_iter();
        if let Some(seq) = body.next() {
            insert_entry(&mut raw, id, Field::Seq, seq, mode, warnings)?;
        }
        if let Some(structure) = body.next() {
            insert_entry(&mut raw, id, Field::Str, structure, mode, warnings)?;
        } else {
            raw.entry(id).or_default();
        }
    }
    Ok(raw)
}

/// One train/test partition, in pair ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSpec {
    pub index: usize,
    pub train_ids: Vec<u32>,
    pub test_ids: Vec<u32>,
}

impl FoldSpec {
    pub fn train_span(&self) -> String {
        format_span(&self.train_ids)
    }

    pub fn test_span(&self) -> String {
        format_span(&self.test_ids)
    }
}

/// Contiguous test blocks over ids `1..=corpus_size`.
///
/// When the corpus holds at least 100 pairs per fold, fold `f` tests ids
/// `100f+1 ..= 100(f+1)` and trains on everything else, so with 507 pairs
/// ids 501..507 are always in training. Otherwise each block spans
/// `corpus_size / n_folds` ids and the last block takes the remainder.
pub fn make_folds(corpus_size: usize, n_folds: usize) -> Result<Vec<FoldSpec>> {
    let invalid = Error::InvalidFoldCount {
        corpus_size,
        n_folds,
    };
    if n_folds < 1 || n_folds > corpus_size || corpus_size > u32::MAX as usize {
        return Err(invalid);
    }
    let block = if corpus_size >= 100 * n_folds {
        100
    } else {
        corpus_size / n_folds
    };
    let mut folds = Vec::with_capacity(n_folds);
    for f in 0..n_folds {
        let lo = f * block + 1;
        let hi = if block != 100 && f + 1 == n_folds {
            corpus_size
        } else {
            (f + 1) * block
        };
        let (test_ids, train_ids): (Vec<u32>, Vec<u32>) =
            (1..=corpus_size as u32).partition(|&id| (lo..=hi).contains(&(id as usize)));
        if train_ids.is_empty() || test_ids.is_empty() {
            return Err(invalid);
        }
        folds.push(FoldSpec {
            index: f,
            train_ids,
            test_ids,
        });
    }
    Ok(folds)
}

/// Compresses sorted ids into ranges, e.g. `1-100+201-507`.
pub fn format_span(ids: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut iter = ids.iter().copied().peekable();
    while let Some(lo) = iter.next() {
        let mut hi = lo;
        while iter.peek() == Some(&(hi + 1)) {
            hi += 1;
            iter.next();
        }
        parts.push(if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}-{hi}")
        });
    }
    parts.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strict(text: &str) -> Result<Corpus> {
        parse_corpus(text, ParseMode::Strict).map(|p| p.corpus)
    }

    #[test]
    fn minimal_pair() {
        let c = strict("seq{1}='AA'\nstr{1}='HH'\n").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.pairs()[0].seq, "AA");
        assert_eq!(c.pairs()[0].structure, "HH");
    }

    #[test]
    fn illegal_symbol_position() {
        let err = strict("seq{1}='AXA'\nstr{1}='HHH'").unwrap_err();
        assert_eq!(
            err,
            Error::IllegalSymbol {
                id: 1,
                field: Field::Seq,
                ch: 'X',
                position: 2
            }
        );
    }

    #[test]
    fn wrapped_payloads_lowercase_and_junk() {
        let text = "header text\n```\nseq{2}='ac\n  de'\n```\nstr{2}='HH\nEE ';\n";
        let c = strict(text).unwrap();
        assert_eq!(c.pairs()[0].id, 2);
        assert_eq!(c.pairs()[0].seq, "ACDE");
        assert_eq!(c.pairs()[0].structure, "HHEE");
    }

    #[test]
    fn missing_partner() {
        assert_eq!(
            strict("seq{1}='AA'\nstr{1}='HH'\nseq{2}='AC'").unwrap_err(),
            Error::MissingPartner {
                id: 2,
                field: Field::Seq
            }
        );
        let lenient = parse_corpus("seq{1}='AA'\nstr{1}='HH'\nstr{2}='HH'", ParseMode::Lenient)
            .unwrap();
        assert_eq!(lenient.corpus.len(), 1);
        assert_eq!(lenient.warnings.len(), 1);
        assert_eq!(lenient.warnings[0].id, Some(2));
    }

    #[test]
    fn length_mismatch_modes() {
        let text = "seq{1}='ACD'\nstr{1}='HH'\nseq{2}='A'\nstr{2}='E'";
        assert_eq!(
            strict(text).unwrap_err(),
            Error::LengthMismatch {
                id: 1,
                seq_len: 3,
                str_len: 2
            }
        );
        let lenient = parse_corpus(text, ParseMode::Lenient).unwrap();
        assert_eq!(lenient.corpus.ids(), vec![2]);
        let repaired = parse_corpus(text, ParseMode::Repair).unwrap();
        assert_eq!(repaired.corpus.ids(), vec![1, 2]);
        assert_eq!(repaired.corpus.pairs()[0].seq, "AC");
        assert!(!repaired.warnings[0].dropped);
    }

    #[test]
    fn repair_removes_illegal_symbols() {
        let p = parse_corpus("seq{1}='AOC'\nstr{1}='HH'", ParseMode::Repair).unwrap();
        assert_eq!(p.corpus.pairs()[0].seq, "AC");
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(strict("seq{1}='AA"), Err(Error::Syntax { .. })));
        assert!(matches!(strict("seq{x}='AA'"), Err(Error::Syntax { .. })));
        assert!(matches!(strict("seq{0}='AA'"), Err(Error::Syntax { .. })));
        assert!(matches!(strict("seq{1} 'AA'"), Err(Error::Syntax { .. })));
        assert_eq!(strict("nothing here"), Err(Error::EmptyCorpus));
        assert!(matches!(
            strict("seq{1}='A'\nseq{1}='C'\nstr{1}='H'"),
            Err(Error::DuplicateEntry { id: 1, .. })
        ));
        assert!(matches!(
            strict("seq{1}=''\nstr{1}=''"),
            Err(Error::EmptyPair { id: 1 })
        ));
    }

    #[test]
    fn record_layout() {
        let c = strict(">7\nACD\nHHE\n\n>9\nW\nU\n").unwrap();
        assert_eq!(c.ids(), vec![7, 9]);
        assert_eq!(c.get(9).unwrap().structure, "U");
        let named = strict(">first\nA\nH\n>second\nC\nE\n").unwrap();
        assert_eq!(named.ids(), vec![1, 2]);
        assert!(matches!(
            strict(">1\nACD\n>2\nA\nH\n"),
            Err(Error::MissingPartner { id: 1, .. })
        ));
    }

    #[test]
    fn text_round_trips() {
        let c = strict("seq{1}='ACDE'\nstr{1}='HGIU'\nseq{3}='W'\nstr{3}='B'\n").unwrap();
        assert_eq!(strict(&c.to_assignment_text()).unwrap(), c);
        assert_eq!(strict(&c.to_record_text()).unwrap(), c);
    }

    #[test]
    fn summary_counts() {
        let c = strict("seq{1}='ACDE'\nstr{1}='HHEU'").unwrap();
        let s = &c.summary()[0];
        assert_eq!(s.length, 4);
        assert_eq!((s.structure_counts.H, s.structure_counts.E, s.structure_counts.U), (2, 1, 1));
        let json = serde_json::to_string(s).unwrap();
        assert!(json.contains("\"structure_counts\":{\"H\":2,\"G\":0"));
    }

    #[test]
    fn hundred_pair_blocks() {
        let folds = make_folds(507, 5).unwrap();
        assert_eq!(folds[0].test_ids, (1..=100).collect::<Vec<_>>());
        assert_eq!(folds[0].train_ids, (101..=507).collect::<Vec<_>>());
        assert_eq!(folds[0].train_span(), "101-507");
        assert_eq!(folds[1].train_span(), "1-100+201-507");
        assert_eq!(folds[4].test_span(), "401-500");
        assert_eq!(folds[4].train_span(), "1-400+501-507");
    }

    #[test]
    fn small_folds() {
        let folds = make_folds(20, 5).unwrap();
        assert_eq!(folds[0].test_ids, vec![1, 2, 3, 4]);
        assert_eq!(folds[0].train_ids, (5..=20).collect::<Vec<_>>());
        let uneven = make_folds(22, 5).unwrap();
        assert_eq!(uneven[4].test_ids, (17..=22).collect::<Vec<_>>());
    }

    #[test]
    fn invalid_fold_counts() {
        assert!(matches!(make_folds(20, 1), Err(Error::InvalidFoldCount { .. })));
        assert!(matches!(make_folds(20, 0), Err(Error::InvalidFoldCount { .. })));
        assert!(matches!(make_folds(3, 4), Err(Error::InvalidFoldCount { .. })));
        // 100-blocks leave training data even for a single fold
        assert_eq!(make_folds(150, 1).unwrap()[0].train_span(), "101-150");
    }

    #[test]
    fn corpus_folds_use_pair_ids() {
        let c = strict(">10\nA\nH\n>20\nC\nE\n>30\nD\nU\n").unwrap();
        let f = c.folds(3).unwrap();
        assert_eq!(f[1].test_ids, vec![20]);
        assert_eq!(f[1].train_ids, vec![10, 30]);
        assert_eq!(c.select(&[30, 10]).unwrap()[0].seq, "D");
        assert_eq!(c.select(&[11]).unwrap_err(), Error::UnknownId(11));
    }
}
