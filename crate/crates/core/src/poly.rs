//! Sparse multivariate polynomials over the rationals.
//!
//! Exponent vectors all have the polynomial's variable count as length, and
//! zero coefficients are never stored, so structural equality is polynomial
//! equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as a rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Binomial coefficient as a rational (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `(-1)^k` as a rational.
pub fn sign_q(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

/// Formats a rational as `num/den` (or `num` when integral).
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num`, `num/den` or a plain integer string.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Lossy conversion used only by floating-point oracles.
pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range {nvars}");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    pub fn monomial(nvars: usize, exp: Vec<u32>, c: Q) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Poly::zero(nvars);
        p.add_term(exp, c);
        p
    }

    /// `1 - Σ x_i` over the given variables.
    pub fn one_minus_sum(nvars: usize, vars: &[usize]) -> Self {
        let mut p = Poly::one(nvars);
        for &v in vars {
            let mut e = vec![0; nvars];
            e[v] = 1;
            p.add_term(e, -Q::one());
        }
        p
    }

    /// `Σ x_i` over the given variables.
    pub fn sum_of(nvars: usize, vars: &[usize]) -> Self {
        let mut p = Poly::zero(nvars);
        for &v in vars {
            let mut e = vec![0; nvars];
            e[v] = 1;
            p.add_term(e, Q::one());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, exp: &[u32]) -> Q {
        self.terms.get(exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Q) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, s: &Q) {
        assert_eq!(self.nvars, other.nvars);
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Largest total degree in the listed variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|&v| e[v]).sum())
            .max()
            .unwrap_or(0)
    }

    /// Whether any stored monomial involves variable `i`.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                let k = e2[i];
                e2[i] -= 1;
                out.add_term(e2, c * q(k as i64));
            }
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn zero_vars(&self, vars: &[usize]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Moves variable `i` to `map[i]` in a ring with `nvars_out` variables.
    /// Monomials touching an unmapped variable make the call fail.
    pub fn reindex(&self, nvars_out: usize, map: &[Option<usize>]) -> Option<Poly> {
        let mut out = Poly::zero(nvars_out);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars_out];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]?] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Substitutes `x_i -> images[i]`; every image lives in one common ring.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let nout = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(nout);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(nout, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                term = &term * &pw;
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Replaces a single variable by a polynomial in the same ring.
    pub fn substitute(&self, i: usize, image: &Poly) -> Poly {
        if !self.involves(i) {
            return self.clone();
        }
        let images: Vec<Poly> = (0..self.nvars)
            .map(|k| {
                if k == i {
                    image.clone()
                } else {
                    Poly::var(self.nvars, k)
                }
            })
            .collect();
        self.compose(&images)
    }

    /// Multiplies every monomial by `f(d)`, where `d` is its degree in `vars`.
    pub fn map_by_degree(&self, vars: &[usize], f: impl Fn(u32) -> Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let d: u32 = vars.iter().map(|&v| e[v]).sum();
            out.add_term(e.clone(), c * f(d));
        }
        out
    }

    /// Homogeneous components in the listed variables, keyed by degree.
    pub fn components_in(&self, vars: &[usize]) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d: u32 = vars.iter().map(|&v| e[v]).sum();
            out.entry(d)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = q_to_f64(c);
            for (i, &k) in e.iter().enumerate() {
                t *= point[i].powi(k as i32);
            }
            acc += t;
        }
        acc
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (lead_e, lead_c) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let step = Poly::monomial(self.nvars, qe, qc);
            rem = &rem - &(&step * d);
            quo.add_assign_ref(&step);
        }
        Some(quo)
    }

    /// Largest absolute coefficient, used for compact diagnostics.
    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    /// Renders with the supplied variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mon = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mon.push(names[i].clone()),
                    _ => mon.push(format!("{}^{}", names[i], k)),
                }
            }
            if mon.is_empty() {
                parts.push(format_q(c));
            } else if c.is_one() {
                parts.push(mon.join("*"));
            } else {
                parts.push(format!("{}*{}", format_q(c), mon.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &q(-1));
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&q(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.coeff(&[1, 1]), q(2));
        assert_eq!((&sq - &sq), Poly::zero(2));
        assert_eq!(sq.derivative(0).coeff(&[0, 1]), q(2));
    }

    #[test]
    fn exact_division_by_linear_form() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let l = &x + &y;
        let p = &(&l * &z) * &l;
        assert_eq!(p.div_exact(&l).unwrap(), &l * &z);
        assert!(z.div_exact(&l).is_none());
    }

    #[test]
    fn rational_round_trip() {
        let v = qr(-3, 6);
        assert_eq!(format_q(&v), "-1/2");
        assert_eq!(parse_q("-1/2").unwrap(), v);
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn compose_and_substitute_agree() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) + &y;
        let img = Poly::one_minus_sum(2, &[1]);
        let a = p.substitute(0, &img);
        let b = p.compose(&[img.clone(), y.clone()]);
        assert_eq!(a, b);
        assert_eq!(a.eval(&[q(5), q(3)]), q(4 + 3));
    }
}
