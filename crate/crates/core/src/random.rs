//! Random group elements for sampling-based checks.

use rand::Rng;

use crate::free::FreeWord;
use crate::presentation::{Element, Letter, Presentation, VertexKind, Word};
use crate::word::letter;

/// Reduced word of length at most `max_len` in the free group of rank `rank`.
pub fn random_free_word<R: Rng + ?Sized>(rng: &mut R, rank: u32, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let mut out: Vec<i32> = Vec::with_capacity(len);
    while out.len() < len {
        let g = rng.gen_range(1..=rank as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if out.last() != Some(&-g) {
            out.push(g);
        }
    }
    FreeWord::new(out)
}

/// A nontrivial element of the vertex group at `v`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, pres: &Presentation, v: usize) -> Element {
    match pres.kind(v) {
        VertexKind::InfiniteCyclic => {
            let k = rng.gen_range(1..=3);
            Element::Power(if rng.gen_bool(0.5) { k } else { -k })
        }
        VertexKind::FiniteCyclic(n) => Element::Power(rng.gen_range(1..n as i64)),
        VertexKind::Free(rank) => loop {
            let w = random_free_word(rng, rank, 4);
            if !w.is_identity() {
                break Element::Free(w);
            }
        },
    }
}

pub fn random_letter<R: Rng + ?Sized>(rng: &mut R, pres: &Presentation) -> Letter {
    let v = rng.gen_range(0..pres.graph().vertex_count());
    letter(v, random_element(rng, pres, v))
}

/// Product of `syllables` random letters (not necessarily reduced).
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, pres: &Presentation, syllables: usize) -> Word {
    Word::from_letters((0..syllables).map(|_| random_letter(rng, pres)).collect())
}
