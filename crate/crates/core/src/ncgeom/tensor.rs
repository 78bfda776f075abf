use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;

use num_traits::Zero;

use crate::algebra::{format_rational, koszul_odd, GradedQuiver, NcPoly, Path, Rational};

fn add_entry<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Element of `B ⊗ B` for a path algebra `B`: `Σ c·(x ⊗ y)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BiTensor {
    terms: BTreeMap<(Path, Path), Rational>,
}

impl BiTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(x: Path, y: Path, c: Rational) -> Self {
        let mut t = Self::zero();
        t.add_term(x, y, c);
        t
    }

    pub fn add_term(&mut self, x: Path, y: Path, c: Rational) {
        add_entry(&mut self.terms, (x, y), c);
    }

    pub fn add_scaled(&mut self, other: &BiTensor, s: &Rational) {
        for ((x, y), c) in &other.terms {
            self.add_term(x.clone(), y.clone(), c * s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Path, Path), &Rational)> {
        self.terms.iter()
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

    pub fn scale(&self, s: &Rational) -> BiTensor {
        let mut out = BiTensor::zero();
        out.add_scaled(self, s);
        out
    }

    /// `x ⊗ y ↦ (−1)^{|x||y|} y ⊗ x`.
    pub fn sigma(&self) -> BiTensor {
        let mut out = BiTensor::zero();
        for ((x, y), c) in &self.terms {
            let c = if koszul_odd(x.degree(), y.degree()) { -c.clone() } else { c.clone() };
            out.add_term(y.clone(), x.clone(), c);
        }
        out
    }

    /// Outer action `f·(x ⊗ y)·g = fx ⊗ yg`; incomposable terms vanish.
    pub fn outer(left: &NcPoly, t: &BiTensor, right: &NcPoly) -> BiTensor {
        let mut out = BiTensor::zero();
        for ((x, y), c) in &t.terms {
            for (f, a) in left.terms() {
                let Some(fx) = f.compose(x) else { continue };
                for (g, b) in right.terms() {
                    if let Some(yg) = y.compose(g) {
                        out.add_term(fx.clone(), yg, c * a * b);
                    }
                }
            }
        }
        out
    }

    /// The product `Σ c·xy` inside the algebra.
    pub fn multiply_out(&self) -> NcPoly {
        let mut out = NcPoly::zero();
        for ((x, y), c) in &self.terms {
            if let Some(xy) = x.compose(y) {
                out.add_term(xy, c.clone());
            }
        }
        out
    }

    pub fn display(&self, q: &GradedQuiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|((x, y), c)| format!("{}·({} ⊗ {})", format_rational(c), x.display(q), y.display(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for BiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((x, y), c)| format!("{}*({:?}⊗{:?})", format_rational(c), x, y))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::ops::Sub<&BiTensor> for &BiTensor {
    type Output = BiTensor;
    fn sub(self, rhs: &BiTensor) -> BiTensor {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::from_integer(1.into()));
        out
    }
}

impl std::ops::Add<&BiTensor> for &BiTensor {
    type Output = BiTensor;
    fn add(self, rhs: &BiTensor) -> BiTensor {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer(1.into()));
        out
    }
}

/// Element of `B ⊗ B ⊗ B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriTensor {
    terms: BTreeMap<(Path, Path, Path), Rational>,
}

impl TriTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, x: Path, y: Path, z: Path, c: Rational) {
        add_entry(&mut self.terms, (x, y, z), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Path, Path, Path), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Swaps the second and third factors (ungraded).
    pub fn sigma23(&self) -> TriTensor {
        let mut out = TriTensor::zero();
        for ((x, y, z), c) in &self.terms {
            out.add_term(x.clone(), z.clone(), y.clone(), c.clone());
        }
        out
    }

    /// Swaps the first and second factors (ungraded).
    pub fn sigma12(&self) -> TriTensor {
        let mut out = TriTensor::zero();
        for ((x, y, z), c) in &self.terms {
            out.add_term(y.clone(), x.clone(), z.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &TriTensor) -> TriTensor {
        let mut out = self.clone();
        for ((x, y, z), c) in &other.terms {
            out.add_term(x.clone(), y.clone(), z.clone(), -c.clone());
        }
        out
    }
}

pub(crate) fn add_map_entry<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    add_entry(map, key, c);
}
