use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{fmt_q, Q};

/// An affine form `lin · (s_1, .., s_d) + c` with rational coefficients.
///
/// Dimension 1 is the line `a·s + b`; higher dimensions are the general coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Affine {
    pub lin: Vec<Q>,
    pub c: Q,
}

impl Affine {
    pub fn constant(dim: usize, c: Q) -> Self {
        Affine { lin: vec![Q::zero(); dim], c }
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut a = Self::constant(dim, Q::zero());
        a.lin[i] = Q::one();
        a
    }

    /// `a·s + b` on the line.
    pub fn line(a: Q, b: Q) -> Self {
        Affine { lin: vec![a], c: b }
    }

    pub fn dim(&self) -> usize {
        self.lin.len()
    }

    pub fn is_constant(&self) -> bool {
        self.lin.iter().all(|x| x.is_zero())
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.dim(), "evaluation point has wrong dimension");
        self.lin.iter().zip(point).fold(self.c, |acc, (a, x)| acc + a * x)
    }

    pub fn add(&self, other: &Affine) -> Affine {
        assert_eq!(self.dim(), other.dim());
        Affine {
            lin: self.lin.iter().zip(&other.lin).map(|(a, b)| a + b).collect(),
            c: self.c + other.c,
        }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(-Q::one()))
    }

    pub fn scale(&self, k: Q) -> Affine {
        Affine { lin: self.lin.iter().map(|a| a * k).collect(), c: self.c * k }
    }

    pub fn shift(&self, k: Q) -> Affine {
        Affine { lin: self.lin.clone(), c: self.c + k }
    }

    /// Replaces variable `i` by `subs[i]`; all substitutes share one target dimension.
    pub fn substitute(&self, subs: &[Affine]) -> Affine {
        assert_eq!(subs.len(), self.dim());
        let dim = subs.first().map_or(0, |a| a.dim());
        let mut out = Affine::constant(dim, self.c);
        for (a, sub) in self.lin.iter().zip(subs) {
            out = out.add(&sub.scale(*a));
        }
        out
    }

    /// Slope and intercept of a line form.
    pub fn as_line(&self) -> Option<(Q, Q)> {
        (self.dim() == 1).then(|| (self.lin[0], self.c))
    }

    fn var_name(dim: usize, i: usize) -> String {
        if dim == 1 {
            "s".to_string()
        } else {
            format!("s{}", i + 1)
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, a) in self.lin.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let name = Self::var_name(self.dim(), i);
            let mag = a.abs();
            let sign = if a.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            out.push_str(sign);
            if !mag.is_one() {
                out.push_str(&fmt_q(&mag));
            }
            out.push_str(&name);
        }
        if !self.c.is_zero() || out.is_empty() {
            if self.c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&fmt_q(&self.c.abs()));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_table_arguments() {
        assert_eq!(Affine::line(Q::one(), Q::new(3, 2)).to_string(), "s+3/2");
        assert_eq!(Affine::line(Q::from_integer(2), Q::zero()).to_string(), "2s");
        assert_eq!(Affine::line(-Q::one(), Q::new(-1, 2)).to_string(), "-s-1/2");
        let mut g = Affine::var(3, 1);
        g.lin[2] = Q::from_integer(2);
        assert_eq!(g.shift(Q::one()).to_string(), "s2+2s3+1");
        assert_eq!(Affine::constant(1, Q::zero()).to_string(), "0");
    }

    #[test]
    fn substitution_composes() {
        let mut g = Affine::var(2, 0);
        g.lin[1] = Q::one();
        let subs = [Affine::line(Q::zero(), -Q::one()), Affine::line(Q::one(), Q::new(3, 2))];
        assert_eq!(g.substitute(&subs), Affine::line(Q::one(), Q::new(1, 2)));
    }
}
