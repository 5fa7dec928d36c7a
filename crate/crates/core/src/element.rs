//! Sortable slots: bare words and key/payload elements.

use crate::word_model::Word;

/// A slot whose key word can be read and rewritten in place.
///
/// Slots move as a unit (`slice::swap`), so whatever rides along with the
/// key is transported but never inspected.
pub trait KeySlot {
    fn key(&self) -> Word;
    fn set_key(&mut self, key: Word);
}

impl KeySlot for Word {
    #[inline]
    fn key(&self) -> Word {
        *self
    }

    #[inline]
    fn set_key(&mut self, key: Word) {
        *self = key;
    }
}

/// A key word plus an opaque fixed-size payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Element<P> {
    pub key: Word,
    pub payload: P,
}

impl<P> Element<P> {
    pub fn new(key: Word, payload: P) -> Self {
        Self { key, payload }
    }
}

impl<P> KeySlot for Element<P> {
    #[inline]
    fn key(&self) -> Word {
        self.key
    }

    #[inline]
    fn set_key(&mut self, key: Word) {
        self.key = key;
    }
}

pub(crate) fn keys_of<T: KeySlot>(slots: &[T]) -> Vec<Word> {
    slots.iter().map(KeySlot::key).collect()
}
