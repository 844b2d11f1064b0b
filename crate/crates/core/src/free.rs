//! Words in a free group of finite rank.
//!
//! Generators are `1..=rank`; a letter `-i` is the inverse of generator `i`.
//! Text form is `x1X2` (capital `X` marks an inverse).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord(Vec<i32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeWordError {
    #[error("invalid free-group word `{0}`")]
    Syntax(String),
    #[error("generator {generator} exceeds rank {rank}")]
    Rank { generator: i32, rank: u32 },
}

impl FreeWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces the given letters.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for x in letters {
            assert!(x != 0, "zero is not a free-group letter");
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Self(out)
    }

    pub fn generator(i: i32) -> Self {
        Self::new([i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> i32 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Returns `(c, core)` with `core` cyclically reduced and `c·core·c⁻¹ = self`.
    pub fn cyclic_reduction(&self) -> (Self, Self) {
        let w = &self.0;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == -w[w.len() - 1 - k] {
            k += 1;
        }
        (Self(w[..k].to_vec()), Self(w[k..w.len() - k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// Least rotation of the cyclically reduced core: a conjugacy invariant.
    pub fn conjugacy_key(&self) -> Self {
        let (_, core) = self.cyclic_reduction();
        let n = core.0.len();
        (0..n.max(1))
            .map(|r| {
                let mut v = core.0[r.min(n)..].to_vec();
                v.extend_from_slice(&core.0[..r.min(n)]);
                Self(v)
            })
            .min()
            .unwrap_or_default()
    }

    /// `(root, e)` with `self = root^e` and `e` maximal; for a cyclically
    /// reduced word this is the shortest period.
    pub fn root(&self) -> (Self, i64) {
        let (c, core) = self.cyclic_reduction();
        let n = core.0.len();
        for period in 1..=n {
            if n % period == 0 && (period..n).all(|i| core.0[i] == core.0[i - period]) {
                let r = Self(core.0[..period].to_vec());
                let root = c.mul(&r).mul(&c.inverse());
                return (root, (n / period) as i64);
            }
        }
        (self.clone(), 1)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Commutator `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn exponent_sum(&self, generator: i32) -> i64 {
        self.0
            .iter()
            .map(|&x| match x {
                x if x == generator => 1,
                x if x == -generator => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn parse(s: &str, rank: u32) -> Result<Self, FreeWordError> {
        let err = || FreeWordError::Syntax(s.to_string());
        let bytes = s.as_bytes();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let sign = match bytes[i] {
                b'x' => 1,
                b'X' => -1,
                _ => return Err(err()),
            };
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let g: i32 = s[start..end].parse().map_err(|_| err())?;
            if g == 0 {
                return Err(err());
            }
            if g as u32 > rank {
                return Err(FreeWordError::Rank { generator: g, rank });
            }
            letters.push(sign * g);
            i = end;
        }
        Ok(Self::new(letters))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            if x > 0 {
                write!(f, "x{x}")?;
            } else {
                write!(f, "X{}", -x)?;
            }
        }
        Ok(())
    }
}
