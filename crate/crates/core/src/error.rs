use crate::word_model::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("virtual word width {width} outside 4..=64")]
    InvalidWidth { width: u32 },

    #[error("record {record} does not fit in {width}-bit word")]
    RecordOverflow { record: Word, width: u32 },

    #[error("word {word} at index {index} is tagged under {width}-bit words")]
    WordOutOfUniverse { index: usize, word: Word, width: u32 },

    #[error("array of {len} words exceeds 2^(w-1) for w = {width}")]
    TooLong { len: usize, width: u32 },

    #[error("empty array")]
    Empty,

    #[error("duplicate key {key} passed to a distinct-key sorter")]
    DuplicateKey { key: Word },

    #[error("no idle word left to accompany node at index {index}")]
    CompanionUnavailable { index: usize },

    #[error("corrupt array state: {0}")]
    Corrupt(&'static str),

    #[error("unknown algorithm id `{0}`")]
    UnknownAlgorithm(String),
}
