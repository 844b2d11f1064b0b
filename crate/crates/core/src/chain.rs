//! Chains: equivalence moves, pure factor chains, σ_γ and the RACG zero test.

use std::collections::BTreeMap;

use crate::presentation::{Chain, Presentation, Word, WordError};
use crate::word::ConjugacyKey;

/// A generator of the equivalence relation on chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `g^n ↔ n·g`.
    Power { g: Word, n: i64 },
    /// `g ↔ h g h⁻¹`.
    Conjugate { g: Word, h: Word },
    /// `g h ↔ g + h` for commuting `g, h`.
    SplitCommuting { g: Word, h: Word },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Presentation {
    /// Normalizes every word, merges equal words, drops zero coefficients and
    /// identity terms, and sorts.
    pub fn canonical_chain(&self, c: &Chain) -> Chain {
        let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
        for (coeff, w) in c.terms() {
            let w = self.normalize(w);
            if !w.is_empty() {
                *acc.entry(w).or_insert(0) += coeff;
            }
        }
        Chain::from_terms(acc.into_iter().map(|(w, c)| (c, w)).collect())
    }

    fn move_sides(&self, mv: &Move) -> Result<(Chain, Chain), WordError> {
        Ok(match mv {
            Move::Power { g, n } => (
                Chain::from_terms(vec![(1, self.pow(g, *n))]),
                Chain::from_terms(vec![(*n, g.clone())]),
            ),
            Move::Conjugate { g, h } => (
                Chain::from_terms(vec![(1, g.clone())]),
                Chain::from_terms(vec![(1, self.conjugate_by(g, h))]),
            ),
            Move::SplitCommuting { g, h } => {
                if !self.commutes(g, h) {
                    return Err(WordError::NotCommuting);
                }
                (
                    Chain::from_terms(vec![(1, self.mul(g, h))]),
                    Chain::from_terms(vec![(1, g.clone()), (1, h.clone())]),
                )
            }
        })
    }

    /// `c − lhs + rhs` (or the reverse), which is equivalent to `c`.
    pub fn apply_equivalence_move(&self, c: &Chain, mv: &Move, dir: Direction) -> Result<Chain, WordError> {
        let (lhs, rhs) = self.move_sides(mv)?;
        let (from, to) = match dir {
            Direction::Forward => (lhs, rhs),
            Direction::Backward => (rhs, lhs),
        };
        let mut terms = c.terms().to_vec();
        terms.extend(from.terms().iter().map(|(k, w)| (-k, w.clone())));
        terms.extend(to.terms().iter().cloned());
        Ok(self.canonical_chain(&Chain::from_terms(terms)))
    }

    /// Pure factor chain: every term replaced by its pure factors, factors
    /// conjugate to their own inverse removed, and conjugates of inverse
    /// factors cancelled. Each surviving term is the least representative of
    /// its conjugacy class (oriented by the larger of the keys of `γ`, `γ⁻¹`, so
    /// positive powers win).
    pub fn pure_factor_chain(&self, c: &Chain) -> Chain {
        let mut acc: BTreeMap<ConjugacyKey, i64> = BTreeMap::new();
        for (coeff, w) in c.terms() {
            let Ok(f) = self.pure_factor_decomposition(w) else { continue };
            let factors = f
                .singleton_factors
                .into_iter()
                .map(|l| (Word::from(l), 1i64))
                .chain(f.pure_factors.into_iter().map(|(r, e)| (r, e as i64)));
            for (factor, mult) in factors {
                let key = self.conjugacy_key(&factor);
                let inv_key = self.conjugacy_key(&self.inverse(&factor));
                if key == inv_key {
                    continue;
                }
                let (k, sign) = if key > inv_key { (key, 1) } else { (inv_key, -1) };
                *acc.entry(k).or_insert(0) += sign * coeff * mult;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, n)| *n != 0)
            .map(|(k, n)| (n, self.normalize(&k.representative())))
            .collect();
        Chain::from_terms(terms)
    }

    pub fn is_vertex_chain(&self, c: &Chain) -> bool {
        c.terms().iter().all(|(_, w)| self.support(w).count_ones(..) <= 1)
    }

    /// The pure factor chain when it is a vertex chain.
    pub fn is_vertex_chain_equivalent(&self, c: &Chain) -> Option<Chain> {
        let pf = self.pure_factor_chain(c);
        self.is_vertex_chain(&pf).then_some(pf)
    }

    /// Checks that `gamma` is a primitive pure factor not conjugate to its inverse.
    fn primitive_keys(&self, gamma: &Word) -> Result<(ConjugacyKey, ConjugacyKey), WordError> {
        let f = self.pure_factor_decomposition(gamma)?;
        let primitive = f.conjugator.is_empty()
            && f.singleton_factors.is_empty()
            && f.pure_factors.len() == 1
            && f.pure_factors[0].1 == 1;
        if !primitive {
            return Err(WordError::Invalid("not a primitive pure factor".into()));
        }
        let key = self.conjugacy_key(gamma);
        let inv = self.conjugacy_key(&self.inverse(gamma));
        if key == inv {
            return Err(WordError::Invalid("factor is conjugate to its inverse".into()));
        }
        Ok((key, inv))
    }

    /// Signed multiplicity σ_γ of a primitive pure factor γ in a chain.
    pub fn sigma_gamma(&self, gamma: &Word, c: &Chain) -> Result<i64, WordError> {
        let (key, inv) = self.primitive_keys(gamma)?;
        let mut total = 0;
        for (coeff, w) in c.terms() {
            let Ok(f) = self.pure_factor_decomposition(w) else { continue };
            for (root, e) in &f.pure_factors {
                let k = self.conjugacy_key(root);
                if k == key {
                    total += coeff * *e as i64;
                } else if k == inv {
                    total -= coeff * *e as i64;
                }
            }
        }
        Ok(total)
    }

    /// In a right-angled Coxeter group: whether `g` is equivalent to the zero
    /// chain, i.e. every pure factor is conjugate to its inverse.
    pub fn racg_zero_scl(&self, g: &Word) -> Result<bool, WordError> {
        if !self.is_racg() {
            return Err(WordError::NotCoxeter);
        }
        let Ok(f) = self.pure_factor_decomposition(g) else { return Ok(true) };
        Ok(f.pure_factors.iter().all(|(root, _)| self.conjugate_to_inverse(root)))
    }
}
