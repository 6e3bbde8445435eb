use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::varset::VarSet;
use crate::error::{Error, Result};

/// Exponent vector over a [`VarSet`], ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars].into())
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials over the same
/// variable set are mathematically equal iff they are structurally equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &VarSet) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self> {
        let idx = vars.require(name)?;
        Ok(Poly::var_at(vars, idx))
    }

    pub(crate) fn var_at(vars: &VarSet, idx: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(Monomial::new(exps), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponent vectors are summed.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Poly::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Dimension {
                    expected: vars.len(),
                    actual: exps.len(),
                });
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn var_set(&self) -> &VarSet {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self.vars.index_of(name) {
            Some(i) => self.terms.keys().any(|m| m.0[i] > 0),
            None => false,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.vars.check_same(&other.vars)?;
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `name`.
    pub fn diff(&self, name: &str) -> Result<Poly> {
        let idx = self.vars.require(name)?;
        Ok(self.diff_at(idx))
    }

    pub(crate) fn diff_at(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Simultaneous substitution of variables by polynomials over the same set.
    pub fn substitute(&self, bindings: &[(&str, Poly)]) -> Result<Poly> {
        for (_, p) in bindings {
            self.vars.check_same(&p.vars)?;
        }
        self.compose(&self.vars, bindings)
    }

    /// Change of variables into `target`: each bound variable is replaced by its
    /// image, every other variable maps to the same-named variable of `target`.
    pub fn compose(&self, target: &VarSet, bindings: &[(&str, Poly)]) -> Result<Poly> {
        let mut images: Vec<Option<Poly>> = vec![None; self.vars.len()];
        for (name, p) in bindings {
            let idx = self.vars.require(name)?;
            target.check_same(&p.vars)?;
            images[idx] = Some(p.clone());
        }
        // Unbound variables only need a target slot if they actually occur.
        let mut rename: Vec<Option<usize>> = vec![None; self.vars.len()];
        for (i, name) in self.vars.names().iter().enumerate() {
            if images[i].is_none() && self.terms.keys().any(|m| m.0[i] > 0) {
                rename[i] = Some(target.require(name)?);
            }
        }

        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut shift = vec![0u32; target.len()];
            let mut factor = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &images[i] {
                    Some(img) => {
                        let pw = powers
                            .entry((i, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        factor = &factor * &pw;
                    }
                    None => shift[rename[i].expect("occurring variable was resolved")] += e,
                }
            }
            let shift = Monomial::new(shift);
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&shift), fc);
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger (or reordered) variable set.
    pub fn embed(&self, target: &VarSet) -> Result<Poly> {
        if self.vars == *target {
            return Ok(self.clone());
        }
        self.compose(target, &[])
    }

    pub fn eval_exact(&self, point: &HashMap<&str, Rational>) -> Result<Rational> {
        let values = self.bind(point)?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[i].clone().unwrap(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &HashMap<&str, f64>) -> Result<f64> {
        let values = self.bind(point)?;
        let dense: Vec<f64> = values.into_iter().map(|v| v.unwrap_or(0.0)).collect();
        Ok(self.compile().eval(&dense))
    }

    fn bind<T: Clone>(&self, point: &HashMap<&str, T>) -> Result<Vec<Option<T>>> {
        let mut out = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let v = point.get(name.as_str()).cloned();
            if v.is_none() && self.terms.keys().any(|m| m.0[i] > 0) {
                return Err(Error::UnboundVariable(name.clone()));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Lowers to a float evaluator over the dense variable order of the set.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let factors = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect();
                    (c.to_f64().unwrap_or(f64::NAN), factors)
                })
                .collect(),
        }
    }
}

/// Float evaluator produced by [`Poly::compile`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, factors)| {
                factors
                    .iter()
                    .fold(*c, |acc, &(i, e)| acc * x[i].powi(e))
            })
            .sum()
    }
}

impl fmt::Display for Poly {
    /// Descending graded-lex order, e.g. `-x1*y1 - x2*y2` or `1/2*x1^2 + z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.vars.names()[i];
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics when the operands live over different variable sets.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, checked_add);
impl_binop!(Sub, sub, checked_sub);
impl_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
