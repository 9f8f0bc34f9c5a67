//! proptest strategies shared by unit tests.

use alloc::vec::Vec;

use num_bigint::BigInt;
use proptest::prelude::*;

use crate::foxcalc::RingElem;
use crate::freegroup::{Endomorphism, Word};

pub fn arb_letter(rank: usize) -> impl Strategy<Value = i32> {
    (1..=rank as i32, any::<bool>()).prop_map(|(g, inv)| if inv { -g } else { g })
}

/// Reduced words of length at most `max_len` (reduction can shorten them).
pub fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(arb_letter(rank), 0..=max_len).prop_map(move |ls| Word::reduce(&ls, rank).unwrap())
}

pub fn arb_endo(rank: usize, max_len: usize) -> impl Strategy<Value = Endomorphism> {
    proptest::collection::vec(arb_word(rank, max_len), rank)
        .prop_map(move |imgs| Endomorphism::new(rank, imgs).unwrap())
}

pub fn arb_ring_elem(rank: usize, max_terms: usize, max_len: usize) -> impl Strategy<Value = RingElem> {
    proptest::collection::vec((arb_word(rank, max_len), -5i64..=5), 0..=max_terms)
        .prop_map(|ts: Vec<(Word, i64)>| RingElem::from_terms(ts.into_iter().map(|(w, c)| (w, BigInt::from(c)))))
}
