//! Brute-force oracles, independent of the library algorithms they check.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scl_core::free::FreeWord;
use scl_core::{Letter, Presentation, SimplicialGraph, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> SimplicialGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let e: Vec<(String, String)> = edges.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
    SimplicialGraph::new(names, e).unwrap()
}

/// Random graph whose vertex indices match the construction order.
pub fn random_small_graph(rng: &mut impl Rng, max_n: usize) -> SimplicialGraph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.9);
    scl_core::graph::random_graph_with(n, p, rng).unwrap()
}

pub fn disjoint_union(a: &SimplicialGraph, b: &SimplicialGraph) -> SimplicialGraph {
    let mut names: Vec<String> = a.names().iter().map(|s| format!("a{s}")).collect();
    names.extend(b.names().iter().map(|s| format!("b{s}")));
    let mut edges: Vec<(String, String)> = a
        .edges()
        .into_iter()
        .map(|(u, v)| (format!("a{}", a.name(u)), format!("a{}", a.name(v))))
        .collect();
    edges.extend(
        b.edges()
            .into_iter()
            .map(|(u, v)| (format!("b{}", b.name(u)), format!("b{}", b.name(v)))),
    );
    SimplicialGraph::new(names, edges).unwrap()
}

fn is_clique_mask(g: &SimplicialGraph, mask: u32) -> bool {
    let vs: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask >> v & 1 == 1).collect();
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.adjacent(u, v)))
}

/// All nonempty cliques by subset enumeration.
pub fn all_cliques(g: &SimplicialGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    (1u32..1 << n)
        .filter(|&m| is_clique_mask(g, m))
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}

pub fn brute_maximal_cliques(g: &SimplicialGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&m| is_clique_mask(g, m)).collect();
    let mut out: Vec<Vec<usize>> = cliques
        .iter()
        .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Largest m such that some sequence of m+1 distinct vertices induces Δ_m.
pub fn brute_opposite_path_length(g: &SimplicialGraph) -> usize {
    fn extend(g: &SimplicialGraph, seq: &mut Vec<usize>, best: &mut usize) {
        if !seq.is_empty() {
            *best = (*best).max(seq.len() - 1);
        }
        for v in 0..g.vertex_count() {
            if seq.contains(&v) {
                continue;
            }
            let k = seq.len();
            let ok = seq.iter().enumerate().all(|(i, &u)| g.adjacent(u, v) == (k - i >= 2));
            if ok {
                seq.push(v);
                extend(g, seq, best);
                seq.pop();
            }
        }
    }
    let mut best = 0;
    extend(g, &mut Vec::new(), &mut best);
    best
}

pub type Q = Ratio<i128>;

/// Exact Gaussian elimination; `None` unless the square system has a unique solution.
fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                for k in col..n {
                    let t = a[col][k];
                    a[r][k] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Maximum of `c·x` over the basic feasible solutions of `Ax ≤ b, x ≥ 0`,
/// or `None` when there are none (the region is then empty).
pub fn best_vertex(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<Q> {
    let n = c.len();
    let m = a.len();
    // Constraint i < m is a row of A, constraint m + j is -x_j <= 0.
    let row = |i: usize| -> (Vec<Q>, Q) {
        if i < m {
            (a[i].clone(), b[i])
        } else {
            let mut r = vec![Q::zero(); n];
            r[i - m] = -Q::from_integer(1);
            (r, Q::zero())
        }
    };
    let mut best: Option<Q> = None;
    for tight in combinations(m + n, n) {
        let (rows, rhs): (Vec<_>, Vec<_>) = tight.iter().map(|&i| row(i)).unzip();
        let Some(x) = solve_square(rows, rhs) else { continue };
        let feasible = (0..m + n).all(|i| {
            let (r, bi) = row(i);
            r.iter().zip(&x).fold(Q::zero(), |s, (p, q)| s + p * q) <= bi
        });
        if feasible {
            let v = c.iter().zip(&x).fold(Q::zero(), |s, (p, q)| s + p * q);
            best = Some(best.map_or(v, |b| b.max(v)));
        }
    }
    best
}

/// Whether `Ax ≤ b, x ≥ 0` has a recession direction improving `c`,
/// decided on the bounded slice `Ar ≤ 0, r ≥ 0, Σr ≤ 1`.
pub fn has_improving_ray(c: &[Q], a: &[Vec<Q>]) -> bool {
    let n = c.len();
    let mut rows: Vec<Vec<Q>> = a.to_vec();
    let mut rhs = vec![Q::zero(); a.len()];
    rows.push(vec![Q::from_integer(1); n]);
    rhs.push(Q::from_integer(1));
    best_vertex(c, &rows, &rhs).is_some_and(|v| v.is_positive())
}

/// Shortest length reachable by swapping adjacent commuting letters and
/// merging adjacent letters of one vertex; also returns every reachable word.
pub fn rewriting_closure(pres: &Presentation, w: &Word) -> (usize, HashSet<Vec<Letter>>) {
    let start: Vec<Letter> = w.letters().to_vec();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut best = usize::MAX;
    while let Some(s) = queue.pop_front() {
        best = best.min(s.len());
        for i in 0..s.len().saturating_sub(1) {
            let (x, y) = (&s[i], &s[i + 1]);
            let mut next = Vec::new();
            if x.vertex() == y.vertex() {
                let merged = pres.normalize(&Word::from_letters(vec![x.clone(), y.clone()]));
                let mut t = s[..i].to_vec();
                t.extend(merged.letters().iter().cloned());
                t.extend_from_slice(&s[i + 2..]);
                next.push(t);
            } else if pres.graph().adjacent(x.vertex(), y.vertex()) {
                let mut t = s.clone();
                t.swap(i, i + 1);
                next.push(t);
            }
            for t in next {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    (best, seen)
}

/// Reduced words of length at most `max_len` over `rank` generators.
pub fn free_words_up_to(rank: u32, max_len: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::identity()];
    let mut frontier = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=rank as i32 {
                for x in [g, -g] {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        out.push(FreeWord::new(v.clone()));
                        next.push(v);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Searches for `h` with `h a h⁻¹ = b` among reduced words of bounded length.
pub fn free_conjugator_exists(a: &FreeWord, b: &FreeWord, max_len: usize) -> bool {
    free_words_up_to(2, max_len)
        .iter()
        .any(|h| h.mul(a).mul(&h.inverse()) == *b)
}

/// Maximal number of disjoint occurrences of `w` in `x`, by trying every
/// subset of start positions.
pub fn brute_nu(w: &[i32], x: &[i32]) -> u64 {
    let starts: Vec<usize> = (0..(x.len() + 1).saturating_sub(w.len()))
        .filter(|&i| x[i..i + w.len()] == *w)
        .collect();
    let mut best = 0;
    for mask in 0u32..1 << starts.len() {
        let chosen: Vec<usize> = (0..starts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| starts[i]).collect();
        if chosen.windows(2).all(|p| p[1] >= p[0] + w.len()) {
            best = best.max(chosen.len() as u64);
        }
    }
    best
}

/// Random graph product on at most `max_n` vertices with mixed vertex kinds.
pub fn random_presentation(rng: &mut impl Rng, max_n: usize) -> Presentation {
    use scl_core::VertexKind;
    let g = random_small_graph(rng, max_n);
    let kinds = (0..g.vertex_count())
        .map(|_| match rng.gen_range(0..5) {
            0 | 1 => VertexKind::InfiniteCyclic,
            2 => VertexKind::FiniteCyclic(2),
            3 => VertexKind::FiniteCyclic(3),
            _ => VertexKind::Free(2),
        })
        .collect();
    Presentation::new(g, kinds).unwrap()
}

/// Free-group word as a word in the right-angled Artin group on two
/// non-adjacent vertices.
pub fn free_to_raag(pres: &Presentation, w: &FreeWord) -> Word {
    let letters = w
        .letters()
        .iter()
        .map(|&x| pres.power_letter((x.unsigned_abs() - 1) as usize, x.signum() as i64).unwrap().unwrap())
        .collect();
    Word::from_letters(letters)
}

pub fn q_to_big(x: &Q) -> num_rational::BigRational {
    num_rational::BigRational::new((*x.numer()).into(), (*x.denom()).into())
}

/// Small integer LP `max c·x, Ax ≤ b, x ≥ 0` with at most 6 variables and 8 rows.
pub fn random_lp(r: &mut impl Rng) -> (Vec<Q>, Vec<Vec<Q>>, Vec<Q>) {
    let n = r.gen_range(1..=6);
    let m = r.gen_range(1..=8);
    let mut q = |lo: i128, hi: i128| Q::from_integer(r.gen_range(lo..=hi));
    let c = (0..n).map(|_| q(-3, 5)).collect();
    let a = (0..m).map(|_| (0..n).map(|_| q(-2, 4)).collect()).collect();
    let b = (0..m).map(|_| q(-3, 8)).collect();
    (c, a, b)
}

pub fn to_lp(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> scl_core::RationalLp {
    scl_core::LinearProgram::new(
        c.iter().map(q_to_big).collect(),
        a.iter().map(|r| r.iter().map(q_to_big).collect()).collect(),
        b.iter().map(q_to_big).collect(),
    )
    .unwrap()
}

/// Whether the simplex result agrees with vertex and ray enumeration.
pub fn lp_matches_enumeration(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<(), String> {
    use scl_core::LpStatus;
    let lp = to_lp(c, a, b);
    let sol = lp.solve();
    lp.check_certificates(&sol)?;
    let expected = match best_vertex(c, a, b) {
        None => (LpStatus::Infeasible, None),
        Some(_) if has_improving_ray(c, a) => (LpStatus::Unbounded, None),
        Some(v) => (LpStatus::Optimal, Some(q_to_big(&v))),
    };
    if sol.status != expected.0 {
        return Err(format!("status {:?}, enumeration says {:?}", sol.status, expected.0));
    }
    match expected.1 {
        Some(v) if v != sol.value => Err(format!("value {} vs enumeration {}", sol.value, v)),
        _ => Ok(()),
    }
}
