//! Univariate polynomials over [`Rational`] with Sturm-sequence root
//! counting and bisection refinement of real roots.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{to_f64, Rational};

/// Coefficients in ascending order of degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

/// A closed rational interval known to contain a real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.midpoint())
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// From coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().rev().cloned().collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if rem.len() < divisor.coeffs.len() {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let f = &rem[k + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &f * c;
            }
            quot[k] = f;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    fn monic(&self) -> Self {
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// The product of the distinct irreducible factors (same roots, all simple).
    pub fn squarefree(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Standard Sturm chain p, p', -rem(p, p'), ...
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone()];
        if self.degree() == 0 {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Self::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    /// Upper bound on the absolute value of every root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// All distinct real roots, ascending, each enclosed in an interval of
    /// width at most `width`. Rational roots hit during bisection come back
    /// as degenerate intervals.
    pub fn real_roots(&self, width: &Rational) -> Vec<Enclosure> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let sq = self.squarefree();
        let chain = sq.sturm_chain();
        let bound = sq.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        // (lo, hi] intervals; process so that output ends up ascending.
        while let Some((lo, hi)) = stack.pop() {
            let n = count_in(&chain, &lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(refine(&sq, &chain, lo, hi, width));
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct roots in `(lo, hi]`.
pub fn count_in(chain: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    sign_changes(chain, lo).saturating_sub(sign_changes(chain, hi))
}

/// Shrinks `(lo, hi]` holding exactly one root of the squarefree `p`.
fn refine(p: &Poly, chain: &[Poly], mut lo: Rational, mut hi: Rational, width: &Rational) -> Enclosure {
    if p.eval(&hi).is_zero() {
        return Enclosure::exact(hi);
    }
    let two = Rational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if p.eval(&mid).is_zero() {
            return Enclosure::exact(mid);
        }
        if count_in(chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Enclosure { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(desc: &[i64]) -> Poly {
        Poly::from_descending(&desc.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn division_and_gcd() {
        let (q, r) = p(&[1, 0, -1]).div_rem(&p(&[1, -1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1, -3, 2]).gcd(&p(&[1, -1])), p(&[1, -1]));
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        assert_eq!(p(&[1, 0, -3, 2]).squarefree().monic(), p(&[1, 1, -2]));
    }

    #[test]
    fn rational_roots_are_exact() {
        let roots = p(&[1, -3, 2]).real_roots(&ratio(1, 1 << 30));
        assert_eq!(roots, vec![Enclosure::exact(int(1)), Enclosure::exact(int(2))]);
    }

    #[test]
    fn golden_ratio_enclosures() {
        let w = ratio(1, 1 << 30);
        let roots = p(&[1, -1, -1]).real_roots(&w);
        assert_eq!(roots.len(), 2);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((roots[1].approx() - phi).abs() < 1e-8);
        assert!((roots[0].approx() - (1.0 - phi)).abs() < 1e-8);
        assert!(roots.iter().all(|e| e.width() <= w));
    }

    #[test]
    fn no_real_roots() {
        assert!(p(&[1, -1, 1]).real_roots(&ratio(1, 1024)).is_empty());
        assert!(p(&[5]).real_roots(&ratio(1, 1024)).is_empty());
    }

    #[test]
    fn repeated_root_counted_once() {
        let roots = p(&[1, 0, 0]).real_roots(&ratio(1, 1024));
        assert_eq!(roots, vec![Enclosure::exact(int(0))]);
    }
}
