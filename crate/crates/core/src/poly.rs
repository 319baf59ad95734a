//! Multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{format_rational, parse_rational, rat, Rational};

/// Polynomial in `nvars` variables `x0, x1, ...`; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// Monomial `c * x^exponents`.
    pub fn monomial(exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Poly::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exponents.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * rat(e[i] as i64));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.to_f64().unwrap_or(f64::NAN), |acc, (&k, x)| acc * x.powi(k as i32)))
            .sum()
    }

    /// Substitute `x_i := images[i]`; the result lives in the images' variable space.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let m = images.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Parse a sum of monomials such as `3/2*x0^2*x1 - x2 + 4`.
    pub fn parse(nvars: usize, text: &str) -> Result<Poly, String> {
        let mut out = Poly::zero(nvars);
        let t = text.trim();
        if t.is_empty() || t == "0" {
            return Ok(out);
        }
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for ch in t.chars() {
            if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('^') {
                terms.push((negative, cur.trim().to_string()));
                cur.clear();
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                cur.push(ch);
            }
        }
        if cur.trim().is_empty() {
            return Err(format!("dangling sign in polynomial {text:?}"));
        }
        terms.push((negative, cur.trim().to_string()));
        for (neg, term) in terms {
            let mut coef = Rational::one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*').map(str::trim) {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.trim().parse::<u32>().map_err(|_| format!("bad exponent in {factor:?}"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.trim().parse().map_err(|_| format!("bad variable {factor:?}"))?;
                    if idx >= nvars {
                        return Err(format!("variable x{idx} out of range for {nvars} variables"));
                    }
                    exps[idx] += pow;
                } else {
                    let c = parse_rational(factor).ok_or_else(|| format!("bad coefficient {factor:?}"))?;
                    coef *= c;
                }
            }
            out.add_term(exps, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first, then lexicographic.
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.iter().sum::<u32>().cmp(&a.iter().sum::<u32>()).then_with(|| b.cmp(a)));
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if vars.is_empty() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials in different variable spaces");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different variable spaces");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn arithmetic_and_derivative() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) + &y; // x^2 + y
        assert_eq!(p.derivative(0), x.scale(&rat(2)));
        assert_eq!(p.derivative(1), Poly::one(2));
        assert_eq!(p.evaluate(&[rat(3), rat(1)]), rat(10));
    }

    #[test]
    fn text_round_trip() {
        let p = Poly::parse(3, "3/2*x0^2 - x1*x2 + 4").unwrap();
        assert_eq!(p.to_string(), "3/2*x0^2 - x1*x2 + 4");
        assert_eq!(Poly::parse(3, &p.to_string()).unwrap(), p);
        assert_eq!(Poly::parse(1, "-x0").unwrap(), Poly::var(1, 0).scale(&rat(-1)));
        assert!(Poly::parse(1, "x3").is_err());
        assert_eq!(Poly::parse(2, "0.5*x1").unwrap(), Poly::var(2, 1).scale(&ratio(1, 2)));
    }

    #[test]
    fn composition() {
        // (x0 * x1) with x0 := t^2, x1 := 2t gives 2 t^3
        let p = &Poly::var(2, 0) * &Poly::var(2, 1);
        let t = Poly::var(1, 0);
        let q = p.compose(&[t.pow(2), t.scale(&rat(2))]);
        assert_eq!(q, Poly::monomial(vec![3], rat(2)));
    }
}
