//! Counting quasimorphisms and Bavard lower bounds.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::free::FreeWord;
use crate::presentation::{Element, Presentation, Word};
use crate::random::random_element;
use crate::scalar::int;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QmError {
    #[error("the counted word must be nonempty")]
    EmptyWord,
    #[error("power must be positive")]
    NonPositivePower,
    #[error("defect bound must be positive")]
    NonPositiveDefect,
    #[error("handle for vertex {vertex} is not antisymmetric")]
    NotAntisymmetric { vertex: String },
    #[error("expected {expected} vertex handles, got {got}")]
    HandleCount { expected: usize, got: usize },
}

/// The group operations the generic constructions need.
pub trait Group {
    type Element: Clone;
    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;

    fn pow(&self, a: &Self::Element, n: u64) -> Self::Element {
        let mut out = self.identity();
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }
}

/// Free group; the rank only matters for sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    pub rank: u32,
}

impl Group for FreeGroup {
    type Element = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }

    fn inverse(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }

    fn pow(&self, a: &FreeWord, n: u64) -> FreeWord {
        a.pow(n as i64)
    }
}

impl Group for Presentation {
    type Element = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        Presentation::mul(self, a, b)
    }

    fn inverse(&self, a: &Word) -> Word {
        Presentation::inverse(self, a)
    }

    fn pow(&self, a: &Word, n: u64) -> Word {
        Presentation::pow(self, a, n as i64)
    }
}

/// A rational-valued map with a declared bound on its defect.
pub struct QuasimorphismHandle<E> {
    eval: Arc<dyn Fn(&E) -> Rational + Send + Sync>,
    pub defect_bound: Rational,
}

impl<E> Clone for QuasimorphismHandle<E> {
    fn clone(&self) -> Self {
        Self {
            eval: Arc::clone(&self.eval),
            defect_bound: self.defect_bound.clone(),
        }
    }
}

impl<E> QuasimorphismHandle<E> {
    pub fn new(defect_bound: Rational, eval: impl Fn(&E) -> Rational + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            defect_bound,
        }
    }

    pub fn eval(&self, g: &E) -> Rational {
        (self.eval)(g)
    }
}

/// Maximal number of disjoint copies of `w` inside the reduced word `x`.
pub fn nu_count(w: &FreeWord, x: &FreeWord) -> Result<u64, QmError> {
    if w.is_identity() {
        return Err(QmError::EmptyWord);
    }
    let (w, x) = (w.letters(), x.letters());
    let mut count = 0;
    let mut i = 0;
    // Leftmost greedy is optimal for disjoint occurrences of one pattern.
    while i + w.len() <= x.len() {
        if x[i..i + w.len()] == *w {
            count += 1;
            i += w.len();
        } else {
            i += 1;
        }
    }
    Ok(count)
}

/// `φ_w = ν_w − ν_{w⁻¹}`, defect at most 3.
pub fn brooks_qm(w: &FreeWord) -> Result<QuasimorphismHandle<FreeWord>, QmError> {
    if w.is_identity() {
        return Err(QmError::EmptyWord);
    }
    let w = w.clone();
    let winv = w.inverse();
    Ok(QuasimorphismHandle::new(int(3), move |x: &FreeWord| {
        let a = nu_count(&w, x).expect("nonempty") as i64;
        let b = nu_count(&winv, x).expect("nonempty") as i64;
        int(a - b)
    }))
}

/// `φ(g) = (ψ(g) − ψ(g⁻¹))/2`.
pub fn antisymmetrize<G>(group: Arc<G>, psi: &QuasimorphismHandle<G::Element>) -> QuasimorphismHandle<G::Element>
where
    G: Group + Send + Sync + 'static,
{
    let inner = psi.clone();
    QuasimorphismHandle::new(psi.defect_bound.clone(), move |g: &G::Element| {
        (inner.eval(g) - inner.eval(&group.inverse(g))) / int(2)
    })
}

/// `(φ(g^N)/N, D/N)`: the homogenization at `g` lies in this bracket.
pub fn homogenize_bracket<G: Group>(
    group: &G,
    phi: &QuasimorphismHandle<G::Element>,
    g: &G::Element,
    n: u64,
) -> Result<(Rational, Rational), QmError> {
    if n == 0 {
        return Err(QmError::NonPositivePower);
    }
    let den = int(n as i64);
    let estimate = phi.eval(&group.pow(g, n)) / den.clone();
    Ok((estimate, phi.defect_bound.clone() / den))
}

/// Largest `|φ(gh) − φ(g) − φ(h)|` over the given pairs.
pub fn empirical_defect<G: Group>(
    group: &G,
    phi: &QuasimorphismHandle<G::Element>,
    pairs: impl IntoIterator<Item = (G::Element, G::Element)>,
) -> Rational {
    pairs
        .into_iter()
        .map(|(g, h)| (phi.eval(&group.mul(&g, &h)) - phi.eval(&g) - phi.eval(&h)).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `f(g) = Σ_i f_{v(i)}(g_i)` over the syllables of the reduced form.
#[derive(Clone)]
pub struct CombinedVertexQm {
    pres: Arc<Presentation>,
    handles: Vec<Option<QuasimorphismHandle<Element>>>,
    pub defect_bound: Rational,
}

impl CombinedVertexQm {
    /// `handles[v]` acts on the vertex group at `v` (`None` means zero).
    /// Antisymmetry of every handle is checked on `samples` random elements.
    pub fn new<R: Rng + ?Sized>(
        pres: Arc<Presentation>,
        handles: Vec<Option<QuasimorphismHandle<Element>>>,
        rng: &mut R,
        samples: usize,
    ) -> Result<Self, QmError> {
        let g = pres.graph();
        if handles.len() != g.vertex_count() {
            return Err(QmError::HandleCount {
                expected: g.vertex_count(),
                got: handles.len(),
            });
        }
        for (v, h) in handles.iter().enumerate() {
            let Some(h) = h else { continue };
            for _ in 0..samples {
                let e = random_element(rng, &pres, v);
                if h.eval(&pres.inverse_element(v, &e)) != -h.eval(&e) {
                    return Err(QmError::NotAntisymmetric {
                        vertex: g.name(v).to_string(),
                    });
                }
            }
        }
        let defect_bound = g
            .maximal_cliques()
            .iter()
            .map(|q| {
                q.0.iter()
                    .filter_map(|&v| handles[v].as_ref().map(|h| h.defect_bound.clone()))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(Self {
            pres,
            handles,
            defect_bound,
        })
    }

    pub fn evaluate(&self, g: &Word) -> Rational {
        self.pres
            .normalize(g)
            .letters()
            .iter()
            .filter_map(|l| self.handles[l.vertex()].as_ref().map(|h| h.eval(l.element())))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn handle(&self) -> QuasimorphismHandle<Word> {
        let this = self.clone();
        QuasimorphismHandle::new(self.defect_bound.clone(), move |g: &Word| this.evaluate(g))
    }
}

/// Homomorphism `Z → Q`, `k ↦ scale·k`, on a cyclic vertex group.
pub fn power_homomorphism(scale: Rational) -> QuasimorphismHandle<Element> {
    QuasimorphismHandle::new(Rational::zero(), move |e: &Element| match e {
        Element::Power(k) => scale.clone() * int(*k),
        Element::Free(_) => Rational::zero(),
    })
}

/// Brooks map on a free vertex group.
pub fn free_vertex_brooks(w: &FreeWord) -> Result<QuasimorphismHandle<Element>, QmError> {
    let phi = brooks_qm(w)?;
    Ok(QuasimorphismHandle::new(phi.defect_bound.clone(), move |e: &Element| match e {
        Element::Free(x) => phi.eval(x),
        Element::Power(_) => Rational::zero(),
    }))
}

/// `max(0, Σ n_i (φ_i − sign(n_i)·h_i) / (2 D̄))` from per-term brackets
/// `(n_i, (φ_i, h_i))`.
pub fn bavard_lower_bound(terms: &[(i64, (Rational, Rational))], defect: &Rational) -> Result<Rational, QmError> {
    if !defect.is_positive() {
        return Err(QmError::NonPositiveDefect);
    }
    let total = terms.iter().fold(Rational::zero(), |acc, (n, (est, hw))| {
        let pessimistic = if *n >= 0 { est - hw } else { est + hw };
        acc + int(*n) * pessimistic
    });
    let bound = total / (int(2) * defect.clone());
    Ok(if bound.is_positive() { bound } else { Rational::zero() })
}

/// Bavard bound for a free-group chain from one Brooks map, homogenized at
/// power `n`; the homogenization has defect at most twice the declared bound.
pub fn brooks_chain_bound(w: &FreeWord, chain: &[(i64, FreeWord)], n: u64) -> Result<Rational, QmError> {
    let phi = brooks_qm(w)?;
    let group = FreeGroup { rank: 0 };
    let brackets = chain
        .iter()
        .map(|(k, g)| Ok((*k, homogenize_bracket(&group, &phi, g, n)?)))
        .collect::<Result<Vec<_>, QmError>>()?;
    bavard_lower_bound(&brackets, &(int(2) * phi.defect_bound.clone()))
}
