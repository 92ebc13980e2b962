//! Division of a document into blocks.
//!
//! A [`BlockView`] is a list of contiguous `(offset, length)` ranges covering
//! the whole document in order. Views come from fixed-size splitting,
//! delimiter splitting, or an explicit manifest. The signer and the verifier
//! must use the same division.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("document is empty")]
    EmptyDocument,
    #[error("block size must be at least 1")]
    ZeroBlockSize,
    #[error("delimiter must not be empty")]
    EmptyDelimiter,
    #[error("view has no blocks")]
    NoBlocks,
    #[error("manifest line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("manifest line {line}: offset {offset} precedes previous offset {previous}")]
    NonMonotone { line: usize, offset: u64, previous: u64 },
    #[error("manifest line {line}: block at {offset} overlaps previous block ending at {expected}")]
    Overlap { line: usize, offset: u64, expected: u64 },
    #[error("manifest line {line}: gap, block starts at {offset} but previous block ends at {expected}")]
    Gap { line: usize, offset: u64, expected: u64 },
    #[error("blocks cover {covered} bytes but declared length is {declared}")]
    LengthMismatch { declared: u64, covered: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub offset: u64,
    pub len: u64,
}

impl Block {
    pub fn end(&self) -> u64 {
        self.offset + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockView {
    blocks: Vec<Block>,
    total: u64,
}

impl BlockView {
    /// Builds a view from consecutive block lengths.
    pub fn from_lengths<I: IntoIterator<Item = u64>>(lengths: I) -> Result<Self, BlockError> {
        let mut offset = 0;
        let blocks: Vec<Block> = lengths
            .into_iter()
            .map(|len| {
                let b = Block { offset, len };
                offset += len;
                b
            })
            .collect();
        if blocks.is_empty() {
            return Err(BlockError::NoBlocks);
        }
        Ok(BlockView {
            blocks,
            total: offset,
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of blocks `n`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Document length `b` the view covers.
    pub fn total_len(&self) -> u64 {
        self.total
    }

    /// Block contents of `document`. The document must be exactly
    /// [`total_len`](Self::total_len) bytes long.
    pub fn slices<'a>(&'a self, document: &'a [u8]) -> impl Iterator<Item = &'a [u8]> + 'a {
        assert_eq!(document.len() as u64, self.total, "document length differs from block view");
        self.blocks
            .iter()
            .map(move |b| &document[b.offset as usize..b.end() as usize])
    }
}

/// `ceil(b / s)` blocks of `s` bytes, the last possibly shorter.
pub fn split_fixed(doc_len: u64, block_size: u64) -> Result<BlockView, BlockError> {
    if block_size == 0 {
        return Err(BlockError::ZeroBlockSize);
    }
    if doc_len == 0 {
        return Err(BlockError::EmptyDocument);
    }
    let full = doc_len / block_size;
    let rest = doc_len % block_size;
    let lengths = std::iter::repeat_n(block_size, full as usize)
        .chain((rest > 0).then_some(rest));
    BlockView::from_lengths(lengths)
}

/// Splits after every occurrence of `delimiter`. Each delimiter stays at
/// the end of the block it closes, so every byte belongs to exactly one
/// block. Trailing content after the last delimiter forms a final block; an
/// empty remainder does not.
pub fn split_delimiter(document: &[u8], delimiter: &[u8]) -> Result<BlockView, BlockError> {
    if delimiter.is_empty() {
        return Err(BlockError::EmptyDelimiter);
    }
    let mut lengths = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i + delimiter.len() <= document.len() {
        if &document[i..i + delimiter.len()] == delimiter {
            i += delimiter.len();
            lengths.push((i - start) as u64);
            start = i;
        } else {
            i += 1;
        }
    }
    if start < document.len() || lengths.is_empty() {
        lengths.push((document.len() - start) as u64);
    }
    BlockView::from_lengths(lengths)
}

/// Parses a manifest: the first line is the total document length, then one
/// `offset length` line per block, in order.
pub fn parse_manifest(text: &str) -> Result<BlockView, BlockError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, first) = lines.next().ok_or(BlockError::Malformed {
        line: 1,
        reason: "missing total length".into(),
    })?;
    let declared = parse_u64(first.trim(), 1)?;

    let mut blocks: Vec<Block> = Vec::new();
    for (line, content) in lines {
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let (Some(off), Some(len), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(BlockError::Malformed {
                line,
                reason: "expected \"offset length\"".into(),
            });
        };
        let block = Block {
            offset: parse_u64(off, line)?,
            len: parse_u64(len, line)?,
        };
        block.offset.checked_add(block.len).ok_or(BlockError::Malformed {
            line,
            reason: "block end overflows".into(),
        })?;
        let expected = blocks.last().map_or(0, Block::end);
        if let Some(prev) = blocks.last() {
            if block.offset < prev.offset {
                return Err(BlockError::NonMonotone {
                    line,
                    offset: block.offset,
                    previous: prev.offset,
                });
            }
        }
        if block.offset < expected {
            return Err(BlockError::Overlap {
                line,
                offset: block.offset,
                expected,
            });
        }
        if block.offset > expected {
            return Err(BlockError::Gap {
                line,
                offset: block.offset,
                expected,
            });
        }
        blocks.push(block);
    }
    if blocks.is_empty() {
        return Err(BlockError::NoBlocks);
    }
    let covered = blocks.last().map_or(0, Block::end);
    if covered != declared {
        return Err(BlockError::LengthMismatch { declared, covered });
    }
    Ok(BlockView {
        blocks,
        total: declared,
    })
}

fn parse_u64(s: &str, line: usize) -> Result<u64, BlockError> {
    s.parse().map_err(|_| BlockError::Malformed {
        line,
        reason: format!("not an unsigned integer: {s:?}"),
    })
}

/// Canonical manifest text: newline-separated, no trailing newline.
pub fn serialize_manifest(view: &BlockView) -> String {
    let mut out = view.total.to_string();
    for b in &view.blocks {
        write!(out, "\n{} {}", b.offset, b.len).expect("write to String");
    }
    out
}
