//! Reduced forms, cyclic reduction, conjugacy, pure factors and centralizers.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;

use crate::graph::VertexSet;
use crate::presentation::{Element, Letter, Presentation, Word, WordError};

/// The five pieces of a product `g·h = g0 · q_gh · h0`, with
/// `g = g0 · q_g · x` and `h = x⁻¹ · q_h · h0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interface {
    pub g0: Word,
    pub q_g: Word,
    pub x: Word,
    pub q_h: Word,
    pub h0: Word,
    pub clique: Vec<usize>,
    pub q_gh: Word,
}

/// `g = p · γ*_1 ⋯ γ*_l* · γ_1^e_1 ⋯ γ_l^e_l · p⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureFactorization {
    pub conjugator: Word,
    pub singleton_factors: Vec<Letter>,
    pub pure_factors: Vec<(Word, u64)>,
}

/// Centralizer of a single-vertex factor inside its vertex group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingletonCentralizer {
    /// Cyclic vertex groups are abelian: the whole vertex group.
    WholeVertexGroup { vertex: usize },
    /// In a free vertex group: the cyclic group generated by the maximal root.
    Cyclic { generator: Letter },
}

/// `h` commutes with `g` iff
/// `h = p · ζ*_1 ⋯ ζ*_l* · γ_1^f_1 ⋯ γ_l^f_l · z · p⁻¹` with `ζ*_i` in the
/// singleton centralizers and `z` supported on `link`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerDescription {
    pub conjugator: Word,
    pub singleton_centralizers: Vec<SingletonCentralizer>,
    pub roots: Vec<Word>,
    /// Θ(g): support of a cyclically reduced conjugate.
    pub theta: VertexSet,
    /// D(g): vertices outside Θ(g) adjacent to all of Θ(g).
    pub link: VertexSet,
}

/// Complete conjugacy invariant: sorted keys of the commuting components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjugacyKey(pub Vec<Vec<Letter>>);

impl ConjugacyKey {
    /// A representative of the class built from the key itself.
    pub fn representative(&self) -> Word {
        Word(self.0.iter().flatten().cloned().collect())
    }
}

impl Presentation {
    /// Reduced form in the canonical (lexicographically least) shuffle.
    pub fn normalize(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for x in &w.0 {
            let element = self.canonical_element(x.vertex(), x.element().clone());
            if let Some(element) = element {
                self.push_reduced(&mut out, x.vertex(), element);
            }
        }
        Word(self.canonical_order(out))
    }

    /// Appends a letter to a reduced sequence, merging with the nearest letter
    /// of the same vertex reachable through commuting letters.
    fn push_reduced(&self, out: &mut Vec<Letter>, v: usize, element: Element) {
        let g = self.graph();
        let mut j = out.len();
        while j > 0 {
            let y = &out[j - 1];
            if y.vertex() == v {
                match self.mul_elements(v, y.element(), &element) {
                    Some(e) => out[j - 1] = letter(v, e),
                    None => {
                        out.remove(j - 1);
                    }
                }
                return;
            }
            if !g.adjacent(y.vertex(), v) {
                break;
            }
            j -= 1;
        }
        out.push(letter(v, element));
    }

    /// Greedy least linearization of a reduced sequence.
    pub(crate) fn canonical_order(&self, mut rest: Vec<Letter>) -> Vec<Letter> {
        let g = self.graph();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let v = rest[i].vertex();
                if best.is_some_and(|b| rest[b].vertex() <= v) {
                    continue;
                }
                if rest[..i].iter().all(|y| g.adjacent(y.vertex(), v)) {
                    best = Some(i);
                }
            }
            out.push(rest.remove(best.expect("the first letter is always available")));
        }
        out
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        self.normalize(&a.concat(b))
    }

    pub fn mul_all<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for w in words {
            letters.extend(w.0.iter().cloned());
        }
        self.normalize(&Word(letters))
    }

    pub fn inverse(&self, w: &Word) -> Word {
        let inv = Word(w.0.iter().rev().map(|l| self.inverse_letter(l)).collect());
        self.normalize(&inv)
    }

    pub fn pow(&self, w: &Word, n: i64) -> Word {
        let base = if n < 0 { self.inverse(w) } else { self.normalize(w) };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend(base.0.iter().cloned());
        }
        self.normalize(&Word(letters))
    }

    /// `h · g · h⁻¹`.
    pub fn conjugate_by(&self, g: &Word, h: &Word) -> Word {
        self.mul_all([h, g, &self.inverse(h)])
    }

    pub fn commutator(&self, g: &Word, h: &Word) -> Word {
        self.mul_all([g, h, &self.inverse(g), &self.inverse(h)])
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.normalize(w).is_empty()
    }

    pub fn equal(&self, a: &Word, b: &Word) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    pub fn syllable_length(&self, w: &Word) -> usize {
        self.normalize(w).len()
    }

    pub fn support(&self, w: &Word) -> VertexSet {
        self.letters_support(&self.normalize(w).0)
    }

    pub(crate) fn letters_support(&self, letters: &[Letter]) -> VertexSet {
        let mut s = self.graph().empty_set();
        for l in letters {
            s.insert(l.vertex());
        }
        s
    }

    /// No two letters of one vertex separated only by letters adjacent to it,
    /// and no trivial letters.
    pub fn is_reduced(&self, w: &Word) -> bool {
        let g = self.graph();
        let letters = &w.0;
        for (i, a) in letters.iter().enumerate() {
            if self.canonical_element(a.vertex(), a.element().clone()).is_none() {
                return false;
            }
            for j in i + 1..letters.len() {
                let b = &letters[j];
                if b.vertex() == a.vertex() {
                    return false;
                }
                if !g.adjacent(b.vertex(), a.vertex()) {
                    break;
                }
            }
        }
        true
    }

    /// Every cyclic permutation of the (reduced) word is reduced.
    pub fn is_cyclically_reduced(&self, w: &Word) -> bool {
        let n = w.len();
        (0..n.max(1)).all(|r| {
            let mut v = w.0[r.min(n)..].to_vec();
            v.extend_from_slice(&w.0[..r.min(n)]);
            self.is_reduced(&Word(v))
        })
    }

    pub(crate) fn front_available(&self, letters: &[Letter], i: usize) -> bool {
        let v = letters[i].vertex();
        letters[..i].iter().all(|y| self.graph().adjacent(y.vertex(), v))
    }

    pub(crate) fn end_available(&self, letters: &[Letter], i: usize) -> bool {
        let v = letters[i].vertex();
        letters[i + 1..].iter().all(|y| self.graph().adjacent(y.vertex(), v))
    }

    /// Returns `(p, core)` with `core` cyclically reduced and `p·core·p⁻¹ = w`.
    ///
    /// Free vertex letters that commute with the rest are also cyclically
    /// reduced inside their vertex group, so `core` has minimal length in its
    /// conjugacy class.
    pub fn cyclically_reduce(&self, w: &Word) -> (Word, Word) {
        let mut core = self.normalize(w).0;
        let mut p: Vec<Letter> = Vec::new();
        loop {
            let n = core.len();
            let found = (0..n).filter(|&i| self.front_available(&core, i)).find(|&i| {
                (i + 1..n).any(|j| core[j].vertex() == core[i].vertex() && self.end_available(&core, j))
            });
            let Some(i) = found else { break };
            let a = core[i].clone();
            let mut next = Vec::with_capacity(n + 1);
            next.push(self.inverse_letter(&a));
            next.extend(core);
            next.push(a.clone());
            core = self.normalize(&Word(next)).0;
            p.push(a);
        }
        for i in 0..core.len() {
            if let Element::Free(fw) = core[i].element() {
                if self.front_available(&core, i) && self.end_available(&core, i) {
                    let (c, r) = fw.cyclic_reduction();
                    if !c.is_identity() {
                        let v = core[i].vertex();
                        core[i] = letter(v, Element::Free(r));
                        p.push(letter(v, Element::Free(c)));
                    }
                }
            }
        }
        (self.normalize(&Word(p)), Word(self.canonical_order(core)))
    }

    /// Θ(w): the support of a cyclically reduced conjugate.
    pub fn theta(&self, w: &Word) -> VertexSet {
        let (_, core) = self.cyclically_reduce(w);
        self.letters_support(&core.0)
    }

    /// Connected components of the opposite graph on `set`, each sorted; the
    /// list is ordered by least vertex.
    pub fn opposite_components(&self, set: &VertexSet) -> Vec<Vec<usize>> {
        let g = self.graph();
        let mut seen = g.empty_set();
        let mut out = Vec::new();
        for s in set.ones() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in set.ones() {
                    if v != u && !seen.contains(v) && !g.adjacent(u, v) {
                        seen.insert(v);
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Splits a cyclically reduced core into its commuting component words.
    fn component_words(&self, core: &Word) -> Vec<(Vec<usize>, Vec<Letter>)> {
        let supp = self.letters_support(&core.0);
        self.opposite_components(&supp)
            .into_iter()
            .map(|comp| {
                let letters = core.0.iter().filter(|l| comp.contains(&l.vertex())).cloned().collect();
                (comp, letters)
            })
            .collect()
    }

    /// Least canonical form over all cyclic shuffle-rotations of a cyclically
    /// reduced word.
    fn least_rotation(&self, letters: &[Letter]) -> Vec<Letter> {
        let start = self.canonical_order(letters.to_vec());
        let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        let mut best = start;
        while let Some(w) = queue.pop_front() {
            for i in (0..w.len()).filter(|&i| self.front_available(&w, i)) {
                let mut rotated = w.clone();
                let x = rotated.remove(i);
                rotated.push(x);
                let rotated = self.canonical_order(rotated);
                if seen.insert(rotated.clone()) {
                    if rotated < best {
                        best = rotated.clone();
                    }
                    queue.push_back(rotated);
                }
            }
        }
        best
    }

    pub fn conjugacy_key(&self, w: &Word) -> ConjugacyKey {
        let (_, core) = self.cyclically_reduce(w);
        let mut keys: Vec<Vec<Letter>> = self
            .component_words(&core)
            .into_iter()
            .map(|(comp, letters)| {
                if comp.len() == 1 {
                    debug_assert_eq!(letters.len(), 1);
                    letters.iter().map(|l| self.letter_conjugacy_class(l)).collect()
                } else {
                    self.least_rotation(&letters)
                }
            })
            .collect();
        keys.sort();
        ConjugacyKey(keys)
    }

    fn letter_conjugacy_class(&self, l: &Letter) -> Letter {
        match l.element() {
            Element::Free(w) => letter(l.vertex(), Element::Free(w.conjugacy_key())),
            Element::Power(_) => l.clone(),
        }
    }

    /// Whether `w1` and `w2` are conjugate.
    pub fn conjugate_cyclic(&self, w1: &Word, w2: &Word) -> bool {
        self.conjugacy_key(w1) == self.conjugacy_key(w2)
    }

    pub fn conjugate_to_inverse(&self, w: &Word) -> bool {
        self.conjugate_cyclic(w, &self.inverse(w))
    }

    pub fn commutes(&self, g: &Word, h: &Word) -> bool {
        self.commutator(g, h).is_empty()
    }

    /// The decomposition `g·h = g0 · q_gh · h0`: `x` is the maximal cancelling
    /// part. The clique `q` is every interface vertex (last letters of `g`,
    /// first letters of `h`) when those form a clique, otherwise only the
    /// vertices present on both sides.
    pub fn interface_decomposition(&self, g: &Word, h: &Word) -> Interface {
        let graph = self.graph();
        let mut gp = self.normalize(g).0;
        let mut hp = self.normalize(h).0;
        let mut x: Vec<Letter> = Vec::new();
        loop {
            let mut hit = None;
            'search: for i in (0..gp.len()).filter(|&i| self.end_available(&gp, i)) {
                for j in (0..hp.len()).filter(|&j| self.front_available(&hp, j)) {
                    if hp[j] == self.inverse_letter(&gp[i]) {
                        hit = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((i, j)) = hit else { break };
            hp.remove(j);
            x.insert(0, gp.remove(i));
        }
        let ends: BTreeSet<usize> =
            (0..gp.len()).filter(|&i| self.end_available(&gp, i)).map(|i| gp[i].vertex()).collect();
        let fronts: BTreeSet<usize> =
            (0..hp.len()).filter(|&j| self.front_available(&hp, j)).map(|j| hp[j].vertex()).collect();
        let common: Vec<usize> = ends.intersection(&fronts).copied().collect();
        let all: Vec<usize> = ends.union(&fronts).copied().collect();
        let whole_is_clique =
            all.iter().enumerate().all(|(a, &u)| all[a + 1..].iter().all(|&v| graph.adjacent(u, v)));
        let clique = if whole_is_clique { all } else { common };
        let take = |letters: &mut Vec<Letter>, from_end: bool| -> Vec<Option<Letter>> {
            clique
                .iter()
                .map(|&v| {
                    let pos = letters.iter().position(|l| l.vertex() == v)?;
                    let ok = if from_end {
                        self.end_available(letters, pos)
                    } else {
                        self.front_available(letters, pos)
                    };
                    ok.then(|| letters.remove(pos))
                })
                .collect()
        };
        let from_g = take(&mut gp, true);
        let from_h = take(&mut hp, false);
        let mut q_gh = Vec::new();
        for (k, &v) in clique.iter().enumerate() {
            let e = match (&from_g[k], &from_h[k]) {
                (Some(a), Some(b)) => self.mul_elements(v, a.element(), b.element()),
                (Some(a), None) => Some(a.element().clone()),
                (None, Some(b)) => Some(b.element().clone()),
                (None, None) => None,
            };
            q_gh.extend(e.map(|e| letter(v, e)));
        }
        let collect = |ls: Vec<Option<Letter>>| Word(ls.into_iter().flatten().collect());
        Interface {
            g0: Word(self.canonical_order(gp)),
            q_g: collect(from_g),
            x: Word(self.canonical_order(x)),
            q_h: collect(from_h),
            h0: Word(self.canonical_order(hp)),
            clique,
            q_gh: Word(q_gh),
        }
    }

    /// Root of a cyclically reduced component word with connected opposite
    /// support: `(root, e)` with `e` maximal.
    fn component_root(&self, letters: &[Letter]) -> (Word, u64) {
        let target = Word(self.canonical_order(letters.to_vec()));
        let n = self.graph().vertex_count();
        let mut counts = vec![0usize; n];
        for l in letters {
            counts[l.vertex()] += 1;
        }
        let g = counts.iter().filter(|&&c| c > 0).fold(0usize, |acc, &c| acc.gcd(&c));
        for e in (2..=g).rev().filter(|e| g % e == 0) {
            let mut taken = vec![0usize; n];
            let root: Vec<Letter> = letters
                .iter()
                .filter(|l| {
                    let v = l.vertex();
                    taken[v] += 1;
                    taken[v] <= counts[v] / e
                })
                .cloned()
                .collect();
            let root = Word(root);
            if self.pow(&root, e as i64) == target {
                return (self.normalize(&root), e as u64);
            }
        }
        (target, 1)
    }

    pub fn pure_factor_decomposition(&self, g: &Word) -> Result<PureFactorization, WordError> {
        let (p, core) = self.cyclically_reduce(g);
        if core.is_empty() {
            return Err(WordError::Identity);
        }
        let mut singleton_factors = Vec::new();
        let mut pure_factors = Vec::new();
        for (comp, letters) in self.component_words(&core) {
            if comp.len() == 1 {
                singleton_factors.extend(letters);
            } else {
                pure_factors.push(self.component_root(&letters));
            }
        }
        Ok(PureFactorization { conjugator: p, singleton_factors, pure_factors })
    }

    /// Multiplies a factorization back together.
    pub fn reassemble(&self, f: &PureFactorization) -> Word {
        let mut parts: Vec<Word> = vec![f.conjugator.clone()];
        parts.extend(f.singleton_factors.iter().cloned().map(Word::from));
        for (root, e) in &f.pure_factors {
            parts.push(self.pow(root, *e as i64));
        }
        parts.push(self.inverse(&f.conjugator));
        self.mul_all(parts.iter())
    }

    pub fn centralizer_description(&self, g: &Word) -> Result<CentralizerDescription, WordError> {
        let f = self.pure_factor_decomposition(g)?;
        let graph = self.graph();
        let mut theta = graph.empty_set();
        let mut singleton_centralizers = Vec::new();
        for l in &f.singleton_factors {
            theta.insert(l.vertex());
            singleton_centralizers.push(match l.element() {
                Element::Power(_) => SingletonCentralizer::WholeVertexGroup { vertex: l.vertex() },
                Element::Free(w) => SingletonCentralizer::Cyclic {
                    generator: letter(l.vertex(), Element::Free(w.root().0)),
                },
            });
        }
        let mut roots = Vec::new();
        for (root, _) in &f.pure_factors {
            theta.union_with(&self.letters_support(&root.0));
            roots.push(root.clone());
        }
        let mut link = graph.empty_set();
        for v in 0..graph.vertex_count() {
            if !theta.contains(v) && theta.ones().all(|t| graph.adjacent(t, v)) {
                link.insert(v);
            }
        }
        Ok(CentralizerDescription {
            conjugator: f.conjugator,
            singleton_centralizers,
            roots,
            theta,
            link,
        })
    }

    /// Membership of `h` in the parametrized centralizer.
    pub fn centralizer_contains(&self, desc: &CentralizerDescription, h: &Word) -> bool {
        let p = &desc.conjugator;
        let h = self.mul_all([&self.inverse(p), h, p]);
        let mut allowed = desc.theta.clone();
        allowed.union_with(&desc.link);
        if h.0.iter().any(|l| !allowed.contains(l.vertex())) {
            return false;
        }
        for s in &desc.singleton_centralizers {
            if let SingletonCentralizer::Cyclic { generator } = s {
                let Element::Free(root) = generator.element() else { unreachable!() };
                for l in h.0.iter().filter(|l| l.vertex() == generator.vertex()) {
                    let Element::Free(w) = l.element() else { unreachable!() };
                    if !w.commutes_with(root) {
                        return false;
                    }
                }
            }
        }
        for root in &desc.roots {
            let comp = self.letters_support(&root.0);
            let proj: Vec<Letter> = h.0.iter().filter(|l| comp.contains(l.vertex())).cloned().collect();
            if proj.is_empty() {
                continue;
            }
            if !proj.len().is_multiple_of(root.len()) {
                return false;
            }
            let f = (proj.len() / root.len()) as i64;
            let proj = Word(self.canonical_order(proj));
            if self.pow(root, f) != proj && self.pow(root, -f) != proj {
                return false;
            }
        }
        true
    }
}

pub(crate) fn letter(vertex: usize, element: Element) -> Letter {
    Letter::new_unchecked(vertex, element)
}
