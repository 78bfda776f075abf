use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::path::Path;
use super::quiver::{GradedQuiver, VertexId};
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// A finite rational combination of paths. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Path, Rational>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        Self::term(p, Rational::one())
    }

    pub fn term(p: Path, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(p, c);
        f
    }

    pub fn idempotent(v: VertexId) -> Self {
        Self::from_path(Path::trivial(v))
    }

    /// `Σ_x e_x`, the unit of the path algebra.
    pub fn unit(q: &GradedQuiver) -> Self {
        q.vertex_ids().map(NcPoly::idempotent).sum()
    }

    pub fn add_term(&mut self, p: Path, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Path, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, p: &Path) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Path) -> bool) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut it = self.terms.keys().map(Path::degree);
        let Some(first) = it.next() else {
            return Ok(None);
        };
        for d in it {
            if d != first {
                return Err(Error::MixedDegree(first, d));
            }
        }
        Ok(Some(first))
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.terms.keys().map(Path::len).min().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, q: &'a GradedQuiver) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, quiver: q }
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{}*{:?}", format_rational(c), p))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a NcPoly,
    quiver: &'a GradedQuiver,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.poly.terms.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{} ", format_rational(&mag))?;
            }
            write!(f, "{}", p.display(self.quiver))?;
        }
        Ok(())
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (p, c) in &rhs.terms {
            self.add_term(p.clone(), c.clone());
        }
    }
}

impl AddAssign for NcPoly {
    fn add_assign(&mut self, rhs: NcPoly) {
        for (p, c) in rhs.terms {
            self.add_term(p, c);
        }
    }
}

impl SubAssign<&NcPoly> for NcPoly {
    fn sub_assign(&mut self, rhs: &NcPoly) {
        for (p, c) in &rhs.terms {
            self.add_term(p.clone(), -c.clone());
        }
    }
}

impl Add for NcPoly {
    type Output = NcPoly;
    fn add(mut self, rhs: NcPoly) -> NcPoly {
        self += rhs;
        self
    }
}

impl Add<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for NcPoly {
    type Output = NcPoly;
    fn sub(mut self, rhs: NcPoly) -> NcPoly {
        self -= &rhs;
        self
    }
}

impl Sub<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.clone().neg()
    }
}

impl Mul<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    /// Bilinear extension of path composition; incomposable pairs vanish.
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, a * b);
                }
            }
        }
        out
    }
}

impl Mul for NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: NcPoly) -> NcPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for NcPoly {
    fn sum<I: Iterator<Item = NcPoly>>(iter: I) -> NcPoly {
        let mut out = NcPoly::zero();
        for f in iter {
            out += f;
        }
        out
    }
}

impl FromIterator<(Path, Rational)> for NcPoly {
    fn from_iter<I: IntoIterator<Item = (Path, Rational)>>(iter: I) -> Self {
        let mut out = NcPoly::zero();
        for (p, c) in iter {
            out.add_term(p, c);
        }
        out
    }
}
