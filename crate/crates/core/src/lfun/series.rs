use std::fmt;

use num_traits::Zero;

use super::poly::SymPoly;
use crate::scalar::fmt_q;
use crate::{Error, Result, Scalar, Q};

/// Truncated Laurent series in u = s - anchor with polynomial coefficients.
///
/// `coeffs[i]` is the coefficient of u^(low + i); everything from degree `prec()` on is
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries<T: Scalar> {
    pub anchor: Q,
    pub low: i32,
    pub coeffs: Vec<SymPoly<T>>,
}

impl<T: Scalar> LaurentSeries<T> {
    /// The exact constant 1, known to `prec` terms.
    pub fn one(anchor: Q, prec: usize) -> Self {
        let mut coeffs = vec![SymPoly::zero(); prec.max(1)];
        coeffs[0] = SymPoly::one();
        LaurentSeries { anchor, low: 0, coeffs }
    }

    pub fn zero(anchor: Q, low: i32, prec: usize) -> Self {
        LaurentSeries { anchor, low, coeffs: vec![SymPoly::zero(); prec] }
    }

    /// First degree that is not known.
    pub fn prec(&self) -> i32 {
        self.low + self.coeffs.len() as i32
    }

    pub fn coeff(&self, deg: i32) -> Option<SymPoly<T>> {
        if deg >= self.prec() {
            None
        } else if deg < self.low {
            Some(SymPoly::zero())
        } else {
            Some(self.coeffs[(deg - self.low) as usize].clone())
        }
    }

    /// Lowest degree with a nonzero coefficient among the known ones.
    pub fn leading(&self) -> Option<(i32, &SymPoly<T>)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i32, c))
    }

    /// Pole order (negative of the leading degree), if determined.
    pub fn order(&self) -> Option<i32> {
        self.leading().map(|(d, _)| -d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let low = self.low.min(other.low);
        let prec = self.prec().min(other.prec());
        let coeffs = (low..prec)
            .map(|d| self.coeff(d).expect("known").add(&other.coeff(d).expect("known")))
            .collect();
        LaurentSeries { anchor: self.anchor, low, coeffs }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, k: &T) -> Self {
        LaurentSeries {
            anchor: self.anchor,
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let low = self.low + other.low;
        let prec = (self.low + other.prec()).min(other.low + self.prec());
        let n = (prec - low).max(0) as usize;
        let mut coeffs = vec![SymPoly::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        LaurentSeries { anchor: self.anchor, low, coeffs }
    }

    /// Multiplicative inverse; the lowest stored coefficient must be a nonzero monomial.
    pub fn inv(&self) -> Result<Self> {
        let (m, c) = self
            .coeffs
            .first()
            .and_then(|c0| c0.as_monomial())
            .ok_or_else(|| Error::Internal("series leading coefficient is not a unit".into()))?;
        let lead_inv = SymPoly::term(m.inv(), T::one() / c.clone());
        let b: Vec<SymPoly<T>> = self.coeffs.iter().map(|x| x.mul(&lead_inv)).collect();
        let n = b.len();
        let mut d: Vec<SymPoly<T>> = Vec::with_capacity(n);
        d.push(SymPoly::one());
        for k in 1..n {
            let mut acc = SymPoly::zero();
            for j in 1..=k {
                if !b[j].is_zero() {
                    acc = acc.add(&b[j].mul(&d[k - j]));
                }
            }
            d.push(acc.neg());
        }
        Ok(LaurentSeries {
            anchor: self.anchor,
            low: -self.low,
            coeffs: d.into_iter().map(|x| x.mul(&lead_inv)).collect(),
        })
    }

    /// Multiplies by u^n.
    pub fn shift(&self, n: i32) -> Self {
        LaurentSeries { low: self.low + n, ..self.clone() }
    }

    /// Drops every known coefficient from degree `prec` on.
    pub fn truncate(&self, prec: i32) -> Self {
        let keep = (prec - self.low).clamp(0, self.coeffs.len() as i32) as usize;
        LaurentSeries { coeffs: self.coeffs[..keep].to_vec(), ..self.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((self.low + i as i32).to_string(), c.to_json()))
            .collect();
        serde_json::json!({ "anchor": fmt_q(&self.anchor), "prec": self.prec(), "coeffs": coeffs })
    }
}

impl<T: Scalar> fmt::Display for LaurentSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = if self.anchor.is_zero() { "s".to_string() } else { format!("(s-{})", fmt_q(&self.anchor)) };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let d = self.low + i as i32;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{u}")?,
                _ => write!(f, "({c})*{u}^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({u}^{})", self.prec())
    }
}
