//! Recurrence instances, companion matrices and exact term generation.
//!
//! Index convention: the recurrence produces `a_{n+1}` from
//! `v_n = (a_n, ..., a_{n-d+1})` for `n >= d-1`, so `v_{d-1}` (the reversed
//! initial data) is the first complete state vector. Matrix products are
//! anchored there: `prefix_product(n)` maps `v_{d-1}` to `v_{d-1+n}`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{parse_rational, Rational};

pub const MAX_ORDER: usize = 10;
pub const MAX_GENERATE: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    order: usize,
    #[serde(with = "crate::rational::serde_str::vec")]
    p: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    q: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    initial: Vec<Rational>,
}

impl RecurrenceSpec {
    pub fn new(p: Vec<Rational>, q: Vec<Rational>, initial: Vec<Rational>) -> Result<Self> {
        let order = p.len();
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidSpec(format!("order {order} outside [1, {MAX_ORDER}]")));
        }
        if q.len() != order || initial.len() != order {
            return Err(Error::InvalidSpec(format!(
                "length mismatch: p has {}, q has {}, initial has {}",
                p.len(),
                q.len(),
                initial.len()
            )));
        }
        Ok(Self { order, p, q, initial })
    }

    /// Constant-coefficient second-order recurrence `a_{n+1} = α a_n + β a_{n-1}`.
    pub fn constant_second_order(alpha: Rational, beta: Rational, a0: Rational, a1: Rational) -> Self {
        Self {
            order: 2,
            p: vec![Rational::zero(), Rational::zero()],
            q: vec![alpha, beta],
            initial: vec![a0, a1],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.p.iter().all(Zero::is_zero)
    }

    /// The coefficient `p_k n + q_k`.
    pub fn coefficient(&self, k: usize, n: usize) -> Rational {
        &self.p[k] * Rational::from_integer(n.into()) + &self.q[k]
    }

    /// `(A, B)` with `M_n = nA + B`. `A` carries `p` in its first row and is
    /// zero elsewhere; `B` carries `q` in its first row and ones on the
    /// subdiagonal.
    pub fn companion_pair(&self) -> (Matrix, Matrix) {
        let d = self.order;
        let mut a = Matrix::zeros(d, d);
        let mut b = Matrix::zeros(d, d);
        for k in 0..d {
            a[(0, k)] = self.p[k].clone();
            b[(0, k)] = self.q[k].clone();
        }
        for i in 1..d {
            b[(i, i - 1)] = Rational::one();
        }
        (a, b)
    }

    pub fn companion_at(&self, n: usize) -> Matrix {
        let (a, b) = self.companion_pair();
        a.scale(&Rational::from_integer(n.into())).add(&b)
    }

    /// `a_0 ..= a_{up_to}`.
    pub fn generate(&self, up_to: usize) -> Result<SequenceWindow> {
        let d = self.order;
        if up_to + 1 < d {
            return Err(Error::InvalidArgument(format!("upTo {up_to} is below d-1 = {}", d - 1)));
        }
        if up_to > MAX_GENERATE {
            return Err(Error::InvalidArgument(format!("upTo {up_to} exceeds {MAX_GENERATE}")));
        }
        let mut terms = Vec::with_capacity(up_to + 1);
        terms.extend(self.initial.iter().cloned());
        for n in d - 1..up_to {
            let next = (0..d).map(|k| self.coefficient(k, n) * &terms[n - k]).sum();
            terms.push(next);
        }
        Ok(SequenceWindow { start: 0, terms })
    }

    /// `Π_n = M_{d-2+n} ⋯ M_{d-1}`, the map `v_{d-1} ↦ v_{d-1+n}`.
    pub fn prefix_product(&self, n: usize) -> Matrix {
        let base = self.order - 1;
        (0..n).fold(Matrix::identity(self.order), |acc, j| self.companion_at(base + j).mul(&acc))
    }

    /// Parses the plain-text spec format:
    ///
    /// ```text
    /// # comment
    /// order = 2; p = [0, -1]; q = [2, -1]; initial = [2, 3]
    /// ```
    ///
    /// Assignments may share a line (separated by `;`) or sit one per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut order: Option<(usize, usize)> = None;
        let mut lists: [Option<(usize, Vec<Rational>)>; 3] = [None, None, None];
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let body = raw.split_once('#').map_or(raw, |(b, _)| b);
            for assignment in body.split(';') {
                if assignment.trim().is_empty() {
                    continue;
                }
                let err = |message: String| Error::Parse { line, message };
                let (key, value) = assignment
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected `key = value`, found {:?}", assignment.trim())))?;
                let key = key.trim();
                let value = value.trim();
                let slot = match key {
                    "order" => {
                        if order.is_some() {
                            return Err(err("duplicate `order`".into()));
                        }
                        let d: usize = value
                            .parse()
                            .map_err(|_| err(format!("order must be a positive integer, found {value:?}")))?;
                        if !(1..=MAX_ORDER).contains(&d) {
                            return Err(err(format!("order {d} outside [1, {MAX_ORDER}]")));
                        }
                        order = Some((line, d));
                        continue;
                    }
                    "p" => 0,
                    "q" => 1,
                    "initial" => 2,
                    other => return Err(err(format!("unknown key {other:?}"))),
                };
                if lists[slot].is_some() {
                    return Err(err(format!("duplicate `{key}`")));
                }
                lists[slot] = Some((line, parse_list(value).map_err(err)?));
            }
        }
        let (_, d) = order.ok_or(Error::Parse { line: last_line, message: "missing `order`".into() })?;
        let names = ["p", "q", "initial"];
        let mut out = Vec::with_capacity(3);
        for (slot, name) in lists.into_iter().zip(names) {
            let (line, list) =
                slot.ok_or(Error::Parse { line: last_line, message: format!("missing `{name}`") })?;
            if list.len() != d {
                return Err(Error::Parse {
                    line,
                    message: format!("`{name}` has {} entries but order is {d}", list.len()),
                });
            }
            out.push(list);
        }
        let initial = out.pop().unwrap();
        let q = out.pop().unwrap();
        let p = out.pop().unwrap();
        Ok(Self { order: d, p, q, initial })
    }
}

fn parse_list(value: &str) -> std::result::Result<Vec<Rational>, String> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| format!("expected `[r, r, ...]`, found {value:?}"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|item| match parse_rational(item) {
            Some(Ok(r)) => Ok(r),
            Some(Err(e)) => Err(format!("{e} in {:?}", item.trim())),
            None => Err(format!("not a rational: {:?}", item.trim())),
        })
        .collect()
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "order = {}; p = [{}]; q = [{}]; initial = [{}]",
            self.order,
            list(&self.p),
            list(&self.q),
            list(&self.initial)
        )
    }
}

/// A contiguous run of exact terms; `terms[j]` is the term at `start + j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceWindow {
    start: usize,
    #[serde(with = "crate::rational::serde_str::vec")]
    terms: Vec<Rational>,
}

impl SequenceWindow {
    pub fn new(start: usize, terms: Vec<Rational>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::WindowTooShort { need: 1, have: 0 });
        }
        Ok(Self { start, terms })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Index of the last stored term.
    pub fn end(&self) -> usize {
        self.start + self.terms.len() - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end()
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        index.checked_sub(self.start).and_then(|j| self.terms.get(j))
    }

    pub fn at(&self, index: usize) -> Result<&Rational> {
        self.get(index)
            .ok_or(Error::OutOfWindow { index, start: self.start, end: self.end() })
    }

    /// `v_n = (a_n, a_{n-1}, ..., a_{n-d+1})`.
    pub fn state_vector(&self, n: usize, d: usize) -> Result<Vec<Rational>> {
        if d == 0 || n + 1 < d {
            return Err(Error::OutOfWindow { index: (n + 1).saturating_sub(d), start: self.start, end: self.end() });
        }
        (0..d).map(|k| self.at(n - k).cloned()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().enumerate().map(move |(j, t)| (self.start + j, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn matrix_criterion() -> RecurrenceSpec {
        RecurrenceSpec::parse("order=2; p=[0,-1]; q=[2,-1]; initial=[2,3]").unwrap()
    }

    #[test]
    fn parses_examples() {
        let s = matrix_criterion();
        assert_eq!(s.p(), ints(&[0, -1]));
        assert_eq!(s.q(), ints(&[2, -1]));
        assert_eq!(s.initial(), ints(&[2, 3]));

        let c = RecurrenceSpec::parse("order=1; p=[0]; q=[1]; initial=[1]").unwrap();
        assert_eq!(c.order(), 1);

        let f = RecurrenceSpec::parse("order=2; p=[1/2,0]; q=[0,1]; initial=[1,1]").unwrap();
        assert_eq!(f.p()[0], ratio(1, 2));
    }

    #[test]
    fn parses_multiline_with_comments() {
        let text = "# header\norder = 2\np = [ 0 , -1 ]  # trailing\nq=[2,-1]\n\ninitial=[4/2, 3]\n";
        let s = RecurrenceSpec::parse(text).unwrap();
        assert_eq!(s, matrix_criterion());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = RecurrenceSpec::parse("order=2\np=[0,1,2]\nq=[1,1]\ninitial=[0,1]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = RecurrenceSpec::parse("order=11; p=[]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = RecurrenceSpec::parse("order=1\np=[1/0]\nq=[1]\ninitial=[1]").unwrap_err();
        assert!(e.to_string().contains("zero denominator"), "{e}");
        let e = RecurrenceSpec::parse("order=1\np=[x]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = RecurrenceSpec::parse("order=1\np=[1]\nq=[1]").unwrap_err();
        assert!(e.to_string().contains("missing `initial`"));
        let e = RecurrenceSpec::parse("order=0; p=[]; q=[]; initial=[]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn display_round_trips() {
        let s = RecurrenceSpec::parse("order=2; p=[1/2,0]; q=[0,-3]; initial=[1,1]").unwrap();
        assert_eq!(RecurrenceSpec::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn companion_matrices() {
        let (a, b) = matrix_criterion().companion_pair();
        assert_eq!(a, Matrix::from_rows(vec![ints(&[0, -1]), ints(&[0, 0])]));
        assert_eq!(b, Matrix::from_rows(vec![ints(&[2, -1]), ints(&[1, 0])]));
        assert_eq!(matrix_criterion().companion_at(3), Matrix::from_rows(vec![ints(&[2, -4]), ints(&[1, 0])]));
        assert_eq!(matrix_criterion().companion_at(0), b);

        let id = RecurrenceSpec::parse("order=1; p=[0]; q=[1]; initial=[1]").unwrap();
        let (a, b) = id.companion_pair();
        assert_eq!(a, Matrix::zeros(1, 1));
        assert_eq!(b, Matrix::identity(1));

        let cc = RecurrenceSpec::constant_second_order(int(3), int(-2), int(1), int(4));
        assert!(cc.companion_pair().0.is_zero());
        assert_eq!(cc.companion_at(17), cc.companion_pair().1);
    }

    #[test]
    fn generates_example_terms() {
        assert_eq!(matrix_criterion().generate(3).unwrap().terms(), ints(&[2, 3, 2, -5]));
        let tc = RecurrenceSpec::constant_second_order(int(3), int(-2), int(1), int(4));
        assert_eq!(tc.generate(5).unwrap().terms(), ints(&[1, 4, 10, 22, 46, 94]));
        let fail = RecurrenceSpec::parse("order=2; p=[1,-1]; q=[0,0]; initial=[1,2]").unwrap();
        assert_eq!(fail.generate(5).unwrap().terms(), ints(&[1, 2, 1, -2, -9, -28]));
        // upTo = d-1 echoes the initial data
        assert_eq!(tc.generate(1).unwrap().terms(), ints(&[1, 4]));
        assert!(tc.generate(0).is_err());
        assert!(tc.generate(MAX_GENERATE + 1).is_err());
    }

    #[test]
    fn state_vectors() {
        let w = matrix_criterion().generate(3).unwrap();
        assert_eq!(w.state_vector(2, 2).unwrap(), ints(&[2, 3]));
        assert_eq!(w.state_vector(1, 2).unwrap(), ints(&[3, 2]));
        assert_eq!(w.state_vector(3, 1).unwrap(), ints(&[-5]));
        assert!(w.state_vector(4, 2).is_err());
        assert!(w.state_vector(0, 2).is_err());
    }

    #[test]
    fn prefix_products() {
        let s = matrix_criterion();
        assert_eq!(s.prefix_product(0), Matrix::identity(2));
        let p = s.prefix_product(2);
        assert_eq!(p.mul_vec(&ints(&[3, 2])).unwrap(), ints(&[-5, 2]));
        let pow = RecurrenceSpec::parse("order=1; p=[0]; q=[2]; initial=[1]").unwrap();
        assert_eq!(pow.prefix_product(5), Matrix::from_rows(vec![ints(&[32])]));
    }
}
