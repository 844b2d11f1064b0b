//! Graph products of cyclic and free vertex groups: presentations, letters,
//! words, chains and their text forms.

use std::fmt;

use crate::free::FreeWord;
use crate::graph::{GraphError, SimplicialGraph};
use crate::io::{content_lines, parse_graph_lines, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    InfiniteCyclic,
    FiniteCyclic(u32),
    Free(u32),
}

impl VertexKind {
    pub fn is_cyclic(self) -> bool {
        !matches!(self, VertexKind::Free(_))
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::InfiniteCyclic => write!(f, "Z"),
            VertexKind::FiniteCyclic(n) => write!(f, "Z/{n}"),
            VertexKind::Free(k) => write!(f, "F {k}"),
        }
    }
}

/// A nontrivial element of a vertex group in canonical form.
///
/// Cyclic kinds use `Power(k)` (for `Z/n`, `1 <= k < n`); free kinds use a
/// nonempty freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Power(i64),
    Free(FreeWord),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    vertex: usize,
    element: Element,
}

impl Letter {
    /// Caller guarantees `element` is canonical and nontrivial for `vertex`.
    pub(crate) fn new_unchecked(vertex: usize, element: Element) -> Self {
        Self { vertex, element }
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn element(&self) -> &Element {
        &self.element
    }
}

/// A finite sequence of letters; not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub(crate) Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word(vec![l])
    }
}

/// An integral chain: a formal sum of words with nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    pub(crate) terms: Vec<(i64, Word)>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a chain without normalizing; see [`Presentation::canonical_chain`].
    pub fn from_terms(terms: Vec<(i64, Word)>) -> Self {
        Self { terms: terms.into_iter().filter(|(c, _)| *c != 0).collect() }
    }

    pub fn terms(&self) -> &[(i64, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid letter `{token}`: {reason}")]
    InvalidLetter { token: String, reason: String },
    #[error("invalid vertex kind: {0}")]
    InvalidKind(String),
    #[error("the element is the identity")]
    Identity,
    #[error("the elements do not commute")]
    NotCommuting,
    #[error("the element lies in the subgroup")]
    InSubgroup,
    #[error("presentation is not right-angled Coxeter")]
    NotCoxeter,
    #[error("{0}")]
    Invalid(String),
}

/// A graph product: a simplicial graph with a vertex group kind per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    graph: SimplicialGraph,
    kinds: Vec<VertexKind>,
}

impl Presentation {
    pub fn new(graph: SimplicialGraph, kinds: Vec<VertexKind>) -> Result<Self, WordError> {
        if kinds.len() != graph.vertex_count() {
            return Err(WordError::InvalidKind(format!(
                "{} kinds for {} vertices",
                kinds.len(),
                graph.vertex_count()
            )));
        }
        for k in &kinds {
            match *k {
                VertexKind::FiniteCyclic(n) if n < 2 => {
                    return Err(WordError::InvalidKind(format!("cyclic order {n} < 2")))
                }
                VertexKind::Free(0) => return Err(WordError::InvalidKind("free rank 0".into())),
                _ => {}
            }
        }
        Ok(Self { graph, kinds })
    }

    pub fn uniform(graph: SimplicialGraph, kind: VertexKind) -> Result<Self, WordError> {
        let kinds = vec![kind; graph.vertex_count()];
        Self::new(graph, kinds)
    }

    /// Right-angled Artin group A(Γ).
    pub fn raag(graph: SimplicialGraph) -> Self {
        Self::uniform(graph, VertexKind::InfiniteCyclic).expect("valid kind")
    }

    /// Right-angled Coxeter group C(Γ).
    pub fn racg(graph: SimplicialGraph) -> Self {
        Self::uniform(graph, VertexKind::FiniteCyclic(2)).expect("valid kind")
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn is_raag(&self) -> bool {
        self.kinds.iter().all(|k| *k == VertexKind::InfiniteCyclic)
    }

    pub fn is_racg(&self) -> bool {
        self.kinds.iter().all(|k| *k == VertexKind::FiniteCyclic(2))
    }

    /// Canonical form of a vertex-group element, `None` for the identity.
    pub(crate) fn canonical_element(&self, v: usize, e: Element) -> Option<Element> {
        match (self.kinds[v], e) {
            (VertexKind::InfiniteCyclic, Element::Power(k)) => (k != 0).then_some(Element::Power(k)),
            (VertexKind::FiniteCyclic(n), Element::Power(k)) => {
                let r = k.rem_euclid(n as i64);
                (r != 0).then_some(Element::Power(r))
            }
            (VertexKind::Free(_), Element::Free(w)) => (!w.is_identity()).then_some(Element::Free(w)),
            (kind, e) => panic!("element {e:?} does not belong to a vertex of kind {kind}"),
        }
    }

    pub(crate) fn mul_elements(&self, v: usize, a: &Element, b: &Element) -> Option<Element> {
        let e = match (a, b) {
            (Element::Power(x), Element::Power(y)) => Element::Power(x + y),
            (Element::Free(x), Element::Free(y)) => Element::Free(x.mul(y)),
            _ => panic!("mixed element kinds at one vertex"),
        };
        self.canonical_element(v, e)
    }

    pub(crate) fn inverse_element(&self, v: usize, a: &Element) -> Element {
        let e = match a {
            Element::Power(k) => Element::Power(-k),
            Element::Free(w) => Element::Free(w.inverse()),
        };
        self.canonical_element(v, e).expect("inverse of a nontrivial element")
    }

    /// The letter `v^k` for a cyclic vertex; `Ok(None)` when it is trivial.
    pub fn power_letter(&self, v: usize, k: i64) -> Result<Option<Letter>, WordError> {
        if !self.kinds[v].is_cyclic() {
            return Err(WordError::InvalidLetter {
                token: self.graph.name(v).to_string(),
                reason: "free vertex groups need `v:word`".into(),
            });
        }
        Ok(self.canonical_element(v, Element::Power(k)).map(|element| Letter { vertex: v, element }))
    }

    /// The letter carrying a free-group word at a free vertex.
    pub fn free_letter(&self, v: usize, w: FreeWord) -> Result<Option<Letter>, WordError> {
        match self.kinds[v] {
            VertexKind::Free(rank) if w.max_generator() as u32 <= rank => {
                Ok(self.canonical_element(v, Element::Free(w)).map(|element| Letter { vertex: v, element }))
            }
            VertexKind::Free(rank) => Err(WordError::InvalidLetter {
                token: format!("{}:{w}", self.graph.name(v)),
                reason: format!("generator beyond rank {rank}"),
            }),
            _ => Err(WordError::InvalidLetter {
                token: format!("{}:{w}", self.graph.name(v)),
                reason: "cyclic vertex groups use `v^k`".into(),
            }),
        }
    }

    /// The standard generator of vertex `v` (`v^1`, or `x1` for free kinds).
    pub fn generator(&self, v: usize) -> Letter {
        let element = match self.kinds[v] {
            VertexKind::Free(_) => Element::Free(FreeWord::generator(1)),
            _ => Element::Power(1),
        };
        Letter { vertex: v, element }
    }

    pub fn generator_named(&self, name: &str) -> Result<Letter, WordError> {
        Ok(self.generator(self.vertex(name)?))
    }

    pub fn vertex(&self, name: &str) -> Result<usize, WordError> {
        self.graph.index_of(name).ok_or_else(|| WordError::UnknownVertex(name.to_string()))
    }

    pub fn inverse_letter(&self, l: &Letter) -> Letter {
        Letter { vertex: l.vertex, element: self.inverse_element(l.vertex, &l.element) }
    }

    pub fn parse_letter(&self, token: &str) -> Result<Option<Letter>, WordError> {
        let bad = |reason: &str| WordError::InvalidLetter { token: token.to_string(), reason: reason.into() };
        if let Some(v) = self.graph.index_of(token) {
            return self.power_letter(v, 1);
        }
        if let Some((name, exp)) = token.rsplit_once('^') {
            let v = self.vertex(name)?;
            let k: i64 = exp.parse().map_err(|_| bad("exponent is not an integer"))?;
            return self.power_letter(v, k);
        }
        if let Some((name, w)) = token.rsplit_once(':') {
            let v = self.vertex(name)?;
            let rank = match self.kinds[v] {
                VertexKind::Free(rank) => rank,
                _ => return Err(bad("cyclic vertex groups use `v^k`")),
            };
            let w = FreeWord::parse(w, rank).map_err(|e| bad(&e.to_string()))?;
            return self.free_letter(v, w);
        }
        Err(WordError::UnknownVertex(token.to_string()))
    }

    /// Parses whitespace-separated letters; `1` or an empty string is the identity.
    pub fn parse_word(&self, s: &str) -> Result<Word, WordError> {
        let s = s.trim();
        if s.is_empty() || (s == "1" && self.graph.index_of("1").is_none()) {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if let Some(l) = self.parse_letter(token)? {
                letters.push(l);
            }
        }
        Ok(Word(letters))
    }

    pub fn format_letter(&self, l: &Letter) -> String {
        let name = self.graph.name(l.vertex);
        match &l.element {
            Element::Power(1) => name.to_string(),
            Element::Power(k) => format!("{name}^{k}"),
            Element::Free(w) => format!("{name}:{w}"),
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|l| self.format_letter(l)).collect::<Vec<_>>().join(" ")
    }

    /// Chain file: one `coeff<TAB>word` term per line.
    pub fn parse_chain(&self, text: &str) -> Result<Chain, ParseError> {
        let mut terms = Vec::new();
        for (line, content) in content_lines(text) {
            let (coeff, word) = match content.split_once(|c: char| c.is_whitespace()) {
                Some((c, w)) => (c, w),
                None => (content, ""),
            };
            let coeff: i64 = coeff
                .parse()
                .map_err(|_| ParseError::new(line, format!("invalid coefficient `{coeff}`")))?;
            let word = self.parse_word(word).map_err(|e| ParseError::new(line, e.to_string()))?;
            terms.push((coeff, word));
        }
        Ok(Chain::from_terms(terms))
    }

    pub fn format_chain(&self, c: &Chain) -> String {
        let mut out = String::new();
        for (coeff, w) in &c.terms {
            out.push_str(&format!("{coeff}\t{}\n", self.format_word(w)));
        }
        out
    }

    /// Presentation file: a graph section followed by one kind line per
    /// vertex, `v Z`, `v Z/n` or `v F k`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let last = text.lines().count();
        let mut lines = content_lines(text);
        let graph = parse_graph_lines(&mut lines, last)?;
        let mut kinds: Vec<Option<VertexKind>> = vec![None; graph.vertex_count()];
        for (line, content) in lines {
            let fields: Vec<&str> = content.split_whitespace().collect();
            let v = graph
                .index_of(fields[0])
                .ok_or_else(|| ParseError::new(line, format!("unknown vertex `{}`", fields[0])))?;
            let kind = match &fields[1..] {
                ["Z"] => VertexKind::InfiniteCyclic,
                [z] if z.starts_with("Z/") => {
                    let n: u32 = z[2..]
                        .parse()
                        .map_err(|_| ParseError::new(line, format!("invalid cyclic order in `{z}`")))?;
                    if n < 2 {
                        return Err(ParseError::new(line, "cyclic order must be at least 2"));
                    }
                    VertexKind::FiniteCyclic(n)
                }
                ["F", k] => {
                    let k: u32 = k
                        .parse()
                        .map_err(|_| ParseError::new(line, format!("invalid free rank `{k}`")))?;
                    if k < 1 {
                        return Err(ParseError::new(line, "free rank must be at least 1"));
                    }
                    VertexKind::Free(k)
                }
                _ => return Err(ParseError::new(line, format!("invalid kind line `{content}`"))),
            };
            if kinds[v].replace(kind).is_some() {
                return Err(ParseError::new(line, format!("second kind for `{}`", fields[0])));
            }
        }
        if let Some(v) = kinds.iter().position(Option::is_none) {
            return Err(ParseError::new(last.max(1), format!("no kind given for `{}`", graph.name(v))));
        }
        let kinds = kinds.into_iter().map(|k| k.expect("checked")).collect();
        Presentation::new(graph, kinds).map_err(|e| ParseError::new(last.max(1), e.to_string()))
    }

    pub fn write(&self) -> String {
        let mut out = crate::io::write_graph(&self.graph);
        for (v, kind) in self.kinds.iter().enumerate() {
            out.push_str(&format!("{} {kind}\n", self.graph.name(v)));
        }
        out
    }
}
