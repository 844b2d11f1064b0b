//! Minimal double coset representatives for special subgroups and the
//! iterated CM normal form.

use crate::graph::VertexSet;
use crate::presentation::{Letter, Presentation, Word, WordError};

/// `g = left · rep · right` with `left, right ∈ G(Λ)` and `rep` of minimal
/// length in `G(Λ) g G(Λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmRepresentative {
    pub left: Word,
    pub rep: Word,
    pub right: Word,
    /// Vertices of Λ adjacent to every vertex of `supp(rep)`; the centralizer
    /// of `rep` in `G(Λ)` is the special subgroup on this set.
    pub centralizer: VertexSet,
}

/// `conjugator · g · conjugator⁻¹ = h_0 ⋯ h_n · tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmNormalForm {
    pub conjugator: Word,
    pub cm_sequence: Vec<Word>,
    pub tail: Word,
    /// Λ_1 = Λ, Λ_2, …, Λ_{n+2}; `tail` is supported on the last one.
    pub subgraph_chain: Vec<VertexSet>,
}

impl Presentation {
    fn in_special_subgroup(&self, w: &Word, lambda: &VertexSet) -> bool {
        self.support(w).is_subset(lambda)
    }

    pub fn cm_representative(&self, lambda: &VertexSet, g: &Word) -> Result<CmRepresentative, WordError> {
        let g = self.normalize(g);
        if self.in_special_subgroup(&g, lambda) {
            return Err(WordError::InSubgroup);
        }
        let mut rest: Vec<Letter> = g.letters().to_vec();
        let mut left = Vec::new();
        while let Some(i) = (0..rest.len()).find(|&i| lambda.contains(rest[i].vertex()) && self.front_available(&rest, i)) {
            left.push(rest.remove(i));
        }
        let mut right = Vec::new();
        while let Some(i) = (0..rest.len()).rev().find(|&i| lambda.contains(rest[i].vertex()) && self.end_available(&rest, i)) {
            right.push(rest.remove(i));
        }
        right.reverse();
        let rep = self.normalize(&Word::from_letters(rest));
        let supp = self.support(&rep);
        let graph = self.graph();
        let mut centralizer = graph.empty_set();
        for v in lambda.ones() {
            if supp.ones().all(|u| graph.adjacent(u, v)) {
                centralizer.insert(v);
            }
        }
        Ok(CmRepresentative {
            left: self.normalize(&Word::from_letters(left)),
            rep,
            right: self.normalize(&Word::from_letters(right)),
            centralizer,
        })
    }

    /// Peels CM representatives level by level, descending to the centralizer
    /// subgraph each time, until the residue lies in the current subgroup.
    pub fn cm_normal_form(&self, lambda: &VertexSet, g: &Word) -> Result<CmNormalForm, WordError> {
        let first = self.cm_representative(lambda, g)?;
        let mut conjugator = self.inverse(&first.left);
        let mut residue = self.mul(&first.right, &first.left);
        let mut cm_sequence = vec![first.rep];
        let mut subgraph_chain = vec![lambda.clone(), first.centralizer];
        loop {
            let level = subgraph_chain.last().expect("chain is nonempty").clone();
            if self.in_special_subgroup(&residue, &level) {
                break;
            }
            let step = self.cm_representative(&level, &residue)?;
            conjugator = self.mul(&self.inverse(&step.left), &conjugator);
            residue = self.mul(&step.right, &step.left);
            cm_sequence.push(step.rep);
            subgraph_chain.push(step.centralizer);
        }
        Ok(CmNormalForm {
            conjugator,
            cm_sequence,
            tail: residue,
            subgraph_chain,
        })
    }

    /// `h_0 ⋯ h_n · tail`.
    pub fn cm_reassemble(&self, nf: &CmNormalForm) -> Word {
        self.mul(&self.mul_all(&nf.cm_sequence), &nf.tail)
    }
}
