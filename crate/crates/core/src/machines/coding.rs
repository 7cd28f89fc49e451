use crate::bits::{check_prefix_free, Bits, NotPrefixFree};

/// A prefix-free code `e ↦ code(e)` indexing a machine family.
pub trait UniversalCoding: Send + Sync {
    fn code(&self, e: usize) -> Bits;
}

/// `e ↦ 0^e 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnaryCoding;

impl UniversalCoding for UnaryCoding {
    fn code(&self, e: usize) -> Bits {
        Bits::zeros(e).child(true)
    }
}

/// An explicit finite code table, validated prefix-free.
#[derive(Debug, Clone)]
pub struct TableCoding {
    codes: Vec<Bits>,
}

impl TableCoding {
    pub fn new(codes: Vec<Bits>) -> Result<Self, NotPrefixFree> {
        check_prefix_free(&codes)?;
        Ok(TableCoding { codes })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

impl UniversalCoding for TableCoding {
    /// Panics when `e` is outside the table.
    fn code(&self, e: usize) -> Bits {
        self.codes[e].clone()
    }
}
