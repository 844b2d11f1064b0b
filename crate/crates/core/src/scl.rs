//! Exact scl of vertex chains, fractional stability numbers, the double chain,
//! the δ_m family and gap certificates.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::free::FreeWord;
use crate::graph::{opposite_path, Clique, GraphError, SimplicialGraph};
use crate::lp::{LinearProgram, LpSolution, LpStatus};
use crate::presentation::{Chain, Element, Letter, Presentation, VertexKind, Word, WordError};
use crate::scalar::{format_rational, int, rat};
use crate::word::letter;
use crate::{Rational, RationalLp};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SclError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("negative weight on vertex {0}")]
    NegativeWeight(String),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("chain is not a vertex chain")]
    NotVertexChain,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("linear program ended with status {0:?}")]
    Solver(LpStatus),
}

/// Per-vertex weights `μ_v ≥ 0` summing to at most 1 on every clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableMeasure(pub Vec<Rational>);

/// Weights `y_q ≥ 0` on maximal cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover(pub Vec<(Clique, Rational)>);

/// Solution of `max Σ μ_v w_v` over stable measures, with its dual cover.
#[derive(Debug, Clone)]
pub struct WeightedStability {
    pub value: Rational,
    pub measure: StableMeasure,
    pub cover: CliqueCover,
    pub program: RationalLp,
    pub solution: LpSolution<Rational>,
}

impl WeightedStability {
    pub fn measure_json(&self, g: &SimplicialGraph) -> Value {
        let map: serde_json::Map<String, Value> = self
            .measure
            .0
            .iter()
            .enumerate()
            .map(|(v, x)| (g.name(v).to_string(), Value::String(format_rational(x))))
            .collect();
        Value::Object(map)
    }

    /// Cliques with positive weight only.
    pub fn cover_json(&self, g: &SimplicialGraph) -> Value {
        let items: Vec<Value> = self
            .cover
            .0
            .iter()
            .filter(|(_, y)| y.is_positive())
            .map(|(q, y)| {
                let names: Vec<&str> = q.0.iter().map(|&v| g.name(v)).collect();
                json!({ "clique": names, "weight": format_rational(y) })
            })
            .collect();
        Value::Array(items)
    }
}

/// The stable-measure program: one variable per vertex, one row per maximal clique.
pub fn stable_measure_lp(g: &SimplicialGraph, weights: &[Rational]) -> (RationalLp, Vec<Clique>) {
    let cliques = g.maximal_cliques();
    let n = g.vertex_count();
    let matrix = cliques
        .iter()
        .map(|q| {
            let mut row = vec![Rational::zero(); n];
            for &v in &q.0 {
                row[v] = int(1);
            }
            row
        })
        .collect();
    let rhs = vec![int(1); cliques.len()];
    let lp = LinearProgram::new(weights.to_vec(), matrix, rhs).expect("rows match the vertex count");
    (lp, cliques)
}

pub fn fractional_weighted_stability(g: &SimplicialGraph, weights: &[Rational]) -> Result<WeightedStability, SclError> {
    if weights.len() != g.vertex_count() {
        return Err(SclError::WeightCount {
            expected: g.vertex_count(),
            got: weights.len(),
        });
    }
    if let Some(v) = weights.iter().position(|w| w.is_negative()) {
        return Err(SclError::NegativeWeight(g.name(v).to_string()));
    }
    let (program, cliques) = stable_measure_lp(g, weights);
    let solution = program.solve();
    if solution.status != LpStatus::Optimal {
        return Err(SclError::Solver(solution.status));
    }
    Ok(WeightedStability {
        value: solution.value.clone(),
        measure: StableMeasure(solution.primal.clone()),
        cover: CliqueCover(cliques.into_iter().zip(solution.dual.iter().cloned()).collect()),
        program,
        solution,
    })
}

pub fn fsn_with_certificates(g: &SimplicialGraph) -> Result<WeightedStability, SclError> {
    if g.is_empty() {
        return Err(GraphError::Empty.into());
    }
    fractional_weighted_stability(g, &vec![int(1); g.vertex_count()])
}

/// Fractional stability number.
pub fn fsn(g: &SimplicialGraph) -> Result<Rational, SclError> {
    Ok(fsn_with_certificates(g)?.value)
}

/// Exact scl of a vertex chain from per-vertex scl values of its pieces.
/// Weights on vertices the chain does not touch are ignored.
pub fn vertex_chain_scl(pres: &Presentation, c: &Chain, vertex_scl: &[Rational]) -> Result<WeightedStability, SclError> {
    let c = pres.canonical_chain(c);
    if !pres.is_vertex_chain(&c) {
        return Err(SclError::NotVertexChain);
    }
    let g = pres.graph();
    if vertex_scl.len() != g.vertex_count() {
        return Err(SclError::WeightCount {
            expected: g.vertex_count(),
            got: vertex_scl.len(),
        });
    }
    let touched = chain_support(&c);
    let weights: Vec<Rational> = (0..g.vertex_count())
        .map(|v| if touched.contains(&v) { vertex_scl[v].clone() } else { Rational::zero() })
        .collect();
    fractional_weighted_stability(g, &weights)
}

fn chain_support(c: &Chain) -> Vec<usize> {
    let mut vs: Vec<usize> = c.terms().iter().flat_map(|(_, w)| w.letters().iter().map(Letter::vertex)).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// `d_Γ = Σ_v [a_v, b_v]` with `scl = fsn(Γ)/2`.
#[derive(Debug, Clone)]
pub struct DoubleChain {
    pub value: Rational,
    /// Γ with a rank-two free vertex group `⟨a_v, b_v⟩` at every vertex.
    pub presentation: Presentation,
    /// `Σ_v v:x1x2X1X2`, a vertex chain over `presentation`.
    pub chain: Chain,
    /// The right-angled Artin group on the double graph.
    pub double_presentation: Presentation,
    /// `Σ_v [a:v, b:v]` over `double_presentation`.
    pub double_chain: Chain,
    pub stability: WeightedStability,
}

pub fn double_chain_scl(g: &SimplicialGraph) -> Result<DoubleChain, SclError> {
    if g.is_empty() {
        return Err(GraphError::Empty.into());
    }
    let presentation = Presentation::uniform(g.clone(), VertexKind::Free(2))?;
    let comm = FreeWord::commutator(&FreeWord::generator(1), &FreeWord::generator(2));
    let chain = Chain::from_terms(
        (0..g.vertex_count())
            .map(|v| (1, Word::from(letter(v, Element::Free(comm.clone())))))
            .collect(),
    );
    let weights: Vec<Rational> = (0..g.vertex_count())
        .map(|v| builtin_vertex_scl(&presentation, v, &chain).expect("commutators have a built-in value"))
        .collect();
    let stability = vertex_chain_scl(&presentation, &chain, &weights)?;
    let double_presentation = Presentation::raag(g.double_graph());
    let double_chain = Chain::from_terms(
        g.names()
            .iter()
            .map(|name| {
                let text = format!("a:{name} b:{name} a:{name}^-1 b:{name}^-1");
                Ok((1, double_presentation.parse_word(&text)?))
            })
            .collect::<Result<_, WordError>>()?,
    );
    Ok(DoubleChain {
        value: stability.value.clone(),
        presentation,
        chain,
        double_presentation,
        double_chain,
        stability,
    })
}

/// `δ_m = g_{0,m} − g_{0,m−1} − g_{1,m} + g_{1,m−1}` over the opposite path.
#[derive(Debug, Clone)]
pub struct DeltaChain {
    pub m: usize,
    pub presentation: Presentation,
    pub generators: Vec<Word>,
    pub chain: Chain,
    pub lower: Rational,
    pub upper: Rational,
}

impl DeltaChain {
    /// Standard generators of the right-angled Artin group on Δ_m.
    pub fn new(m: usize) -> Result<Self, SclError> {
        if m < 2 {
            return Err(SclError::InvalidParameter(format!("δ_m needs m >= 2, got {m}")));
        }
        let presentation = Presentation::raag(opposite_path(m)?);
        let generators = (0..=m)
            .map(|i| presentation.parse_word(&format!("v{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_generators(presentation, generators)
    }

    /// `generators[i]` must be a nontrivial element of the vertex group at `v_i`.
    pub fn with_generators(presentation: Presentation, generators: Vec<Word>) -> Result<Self, SclError> {
        let m = generators.len().saturating_sub(1);
        if m < 2 {
            return Err(SclError::InvalidParameter("need at least three generators".into()));
        }
        if presentation.graph() != &opposite_path(m)? {
            return Err(SclError::InvalidParameter(format!("graph is not Δ_{m}")));
        }
        for (i, g) in generators.iter().enumerate() {
            let g = presentation.normalize(g);
            let ok = g.len() == 1 && presentation.graph().name(g.letters()[0].vertex()) == format!("v{i}");
            if !ok {
                return Err(SclError::InvalidParameter(format!("generator {i} is not a letter at v{i}")));
            }
        }
        let mut this = Self {
            m,
            presentation,
            generators,
            chain: Chain::zero(),
            lower: rat(1, 12 * (m as i64 + 2)),
            upper: rat(1, m as i64),
        };
        let terms = vec![
            (1, this.g(0, m)),
            (-1, this.g(0, m - 1)),
            (-1, this.g(1, m)),
            (1, this.g(1, m - 1)),
        ];
        this.chain = this.presentation.canonical_chain(&Chain::from_terms(terms));
        Ok(this)
    }

    /// `g_{i,j} = g_i ⋯ g_j`.
    pub fn g(&self, i: usize, j: usize) -> Word {
        self.presentation.mul_all(&self.generators[i..=j])
    }

    /// `c_1 = g_m`, `c_{j+1} = g_{m−j,m−1}⁻¹ c_j g_{m−j,m}`.
    pub fn c(&self, j: usize) -> Word {
        let p = &self.presentation;
        let m = self.m;
        let mut c = self.generators[m].clone();
        for k in 1..j {
            c = p.mul_all([&p.inverse(&self.g(m - k, m - 1)), &c, &self.g(m - k, m)]);
        }
        c
    }

    /// `g_{i,m}^j = g_{i,m−1}^j · c_j`.
    pub fn verify_power_identity(&self, i: usize, j: usize) -> bool {
        let p = &self.presentation;
        let lhs = p.pow(&self.g(i, self.m), j as i64);
        let rhs = p.mul(&p.pow(&self.g(i, self.m - 1), j as i64), &self.c(j));
        lhs == rhs
    }
}

/// Outcome of the gap dichotomy for an integral chain.
#[derive(Debug, Clone)]
pub enum GapCertificate {
    /// The pure factor chain is a vertex chain with known vertex values.
    Exact { value: Rational, stability: WeightedStability, witness: Chain },
    /// Some pure factor has support on several vertices: `scl ≥ bound`.
    LowerBound { bound: Rational, opposite_path_length: usize, witness: Chain },
    /// A vertex chain whose free-vertex pieces need caller-supplied scl values.
    WeightsRequired { witness: Chain },
    /// Not null-homologous over the rationals.
    Infinite { witness: Chain },
}

impl GapCertificate {
    pub fn status(&self) -> &'static str {
        match self {
            Self::Exact { .. } => "exact",
            Self::LowerBound { .. } => "lower_bound",
            Self::WeightsRequired { .. } => "weights_required",
            Self::Infinite { .. } => "infinite",
        }
    }

    pub fn to_json(&self, pres: &Presentation) -> Value {
        let g = pres.graph();
        match self {
            Self::Exact { value, stability, witness } => json!({
                "status": self.status(),
                "value": format_rational(value),
                "stable_measure": stability.measure_json(g),
                "clique_cover": stability.cover_json(g),
                "witness": pres.format_chain(witness),
            }),
            Self::LowerBound {
                bound,
                opposite_path_length,
                witness,
            } => json!({
                "status": self.status(),
                "bound": format_rational(bound),
                "lower_bound": format_rational(bound),
                "opposite_path_length": opposite_path_length,
                "witness": pres.format_chain(witness),
            }),
            Self::WeightsRequired { witness } | Self::Infinite { witness } => json!({
                "status": self.status(),
                "witness": pres.format_chain(witness),
            }),
        }
    }
}

/// `1/(12(Δ(Γ)+2))`.
pub fn gap_bound(g: &SimplicialGraph) -> Result<(Rational, usize), SclError> {
    let d = g.opposite_path_length()?;
    Ok((rat(1, 12 * (d as i64 + 2)), d))
}

/// Whether the chain vanishes in rational homology. Finite cyclic vertex
/// groups contribute nothing; free vertex groups contribute one coordinate per
/// generator.
pub fn rationally_null_homologous(pres: &Presentation, c: &Chain) -> bool {
    let mut sums: BTreeMap<(usize, i32), i64> = BTreeMap::new();
    for (coeff, w) in c.terms() {
        for l in w.letters() {
            match (pres.kind(l.vertex()), l.element()) {
                (VertexKind::InfiniteCyclic, Element::Power(k)) => *sums.entry((l.vertex(), 0)).or_insert(0) += coeff * k,
                (VertexKind::Free(rank), Element::Free(fw)) => {
                    for x in 1..=rank as i32 {
                        *sums.entry((l.vertex(), x)).or_insert(0) += coeff * fw.exponent_sum(x);
                    }
                }
                _ => {}
            }
        }
    }
    sums.values().all(|s| *s == 0)
}

/// Known scl of the part of a pure factor vertex chain at `v`, or `None`.
fn builtin_vertex_scl(pres: &Presentation, v: usize, c: &Chain) -> Option<Rational> {
    let terms: Vec<(i64, &Letter)> = c
        .terms()
        .iter()
        .filter(|(_, w)| w.letters().first().is_some_and(|l| l.vertex() == v))
        .map(|(k, w)| (*k, &w.letters()[0]))
        .collect();
    match pres.kind(v) {
        VertexKind::InfiniteCyclic | VertexKind::FiniteCyclic(_) => Some(Rational::zero()),
        VertexKind::Free(rank) => {
            // g^e contributes e·g; classes are oriented like pure factors.
            let mut classes: BTreeMap<FreeWord, i64> = BTreeMap::new();
            for (k, l) in terms {
                let Element::Free(fw) = l.element() else { return None };
                let (root, e) = fw.root();
                let (key, inv) = (root.conjugacy_key(), root.inverse().conjugacy_key());
                let (key, sign) = if key >= inv { (key, 1) } else { (inv, -1) };
                *classes.entry(key).or_insert(0) += k * e * sign;
            }
            classes.retain(|_, n| *n != 0);
            let mut it = classes.into_iter();
            let Some((key, n)) = it.next() else { return Some(Rational::zero()) };
            if it.next().is_some() {
                return None;
            }
            // n·[x_a, x_b]^{±1} up to conjugacy has scl |n|/2.
            let is_commutator = (1..=rank as i32).any(|a| {
                (a + 1..=rank as i32).any(|b| {
                    let comm = FreeWord::commutator(&FreeWord::generator(a), &FreeWord::generator(b));
                    comm.conjugacy_key() == key || comm.inverse().conjugacy_key() == key
                })
            });
            is_commutator.then(|| rat(n.abs(), 2))
        }
    }
}

/// The gap dichotomy: an exact value for chains equivalent to vertex chains,
/// the uniform lower bound otherwise. `vertex_scl` overrides the built-in
/// per-vertex values.
pub fn gap_certificate(pres: &Presentation, c: &Chain, vertex_scl: Option<&[Rational]>) -> Result<GapCertificate, SclError> {
    let c = pres.canonical_chain(c);
    let witness = pres.pure_factor_chain(&c);
    if !rationally_null_homologous(pres, &c) {
        return Ok(GapCertificate::Infinite { witness });
    }
    if !pres.is_vertex_chain(&witness) {
        let (bound, d) = gap_bound(pres.graph())?;
        return Ok(GapCertificate::LowerBound {
            bound,
            opposite_path_length: d,
            witness,
        });
    }
    let n = pres.graph().vertex_count();
    let weights = match vertex_scl {
        Some(w) => {
            if w.len() != n {
                return Err(SclError::WeightCount { expected: n, got: w.len() });
            }
            w.to_vec()
        }
        None => {
            let mut weights = Vec::with_capacity(n);
            for v in 0..n {
                match builtin_vertex_scl(pres, v, &witness) {
                    Some(x) => weights.push(x),
                    None => return Ok(GapCertificate::WeightsRequired { witness }),
                }
            }
            weights
        }
    };
    let stability = vertex_chain_scl(pres, &witness, &weights)?;
    Ok(GapCertificate::Exact {
        value: stability.value.clone(),
        stability,
        witness,
    })
}
