//! Tensor algebras of graded quivers with a differential on generators,
//! extended by the graded Leibniz rule `d(ab) = d(a)b + (−1)^{|a|} a d(b)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{odd, ArrowId, GradedQuiver, NcPoly, Path};
use crate::error::{Error, Result};

/// Images of the arrows under the differential; unlisted arrows map to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Differential {
    images: BTreeMap<ArrowId, NcPoly>,
}

impl Differential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, a: ArrowId, image: NcPoly) {
        if image.is_zero() {
            self.images.remove(&a);
        } else {
            self.images.insert(a, image);
        }
    }

    pub fn with(mut self, a: ArrowId, image: NcPoly) -> Self {
        self.set(a, image);
        self
    }

    pub fn get(&self, a: ArrowId) -> Option<&NcPoly> {
        self.images.get(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArrowId, &NcPoly)> {
        self.images.iter()
    }

    /// Checks that each image has degree `|a| + 1` and the endpoints of `a`.
    pub fn validate(&self, q: &GradedQuiver) -> Result<()> {
        for (&a, image) in &self.images {
            if a.index() >= q.arrow_count() {
                return Err(Error::UnknownArrow(format!("#{}", a.0)));
            }
            let arrow = q.arrow(a);
            for (p, _) in image.terms() {
                let reason = if p.degree() != arrow.degree + 1 {
                    Some(format!("term of degree {} (expected {})", p.degree(), arrow.degree + 1))
                } else if p.source() != arrow.source || p.target() != arrow.target {
                    Some("term not parallel to the arrow".to_string())
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(Error::BadDifferential {
                        arrow: arrow.name.clone(),
                        reason,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of evaluating `d²` on every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Report {
    pub generators_checked: usize,
    /// First generator (in arrow order) whose `d²` is nonzero, with the residual.
    pub failure: Option<(ArrowId, NcPoly)>,
}

impl D2Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `(T(Q), d)` for a graded quiver `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgTensorAlgebra {
    quiver: Arc<GradedQuiver>,
    d: Differential,
}

impl DgTensorAlgebra {
    /// Builds the algebra and verifies `d² = 0`.
    pub fn new(quiver: Arc<GradedQuiver>, d: Differential) -> Result<Self> {
        let alg = Self::new_unchecked(quiver, d)?;
        let report = alg.check_d_squared();
        if let Some((a, residual)) = report.failure {
            return Err(Error::D2Failure {
                generator: alg.quiver.arrow_name(a).to_string(),
                residual: residual.display(&alg.quiver).to_string(),
            });
        }
        Ok(alg)
    }

    /// Builds the algebra checking only degrees and endpoints; `d²` is left to
    /// [`DgTensorAlgebra::check_d_squared`].
    pub fn new_unchecked(quiver: Arc<GradedQuiver>, d: Differential) -> Result<Self> {
        d.validate(&quiver)?;
        Ok(DgTensorAlgebra { quiver, d })
    }

    pub fn with_zero_differential(quiver: Arc<GradedQuiver>) -> Self {
        DgTensorAlgebra {
            quiver,
            d: Differential::zero(),
        }
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn differential(&self) -> &Differential {
        &self.d
    }

    /// `d(a)` for a generator.
    pub fn d_of(&self, a: ArrowId) -> NcPoly {
        self.d.get(a).cloned().unwrap_or_default()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.images.is_empty()
    }

    /// Extends `d` to arbitrary polynomials:
    /// `d(v_1…v_n) = Σ_i (−1)^{|v_1…v_{i−1}|} v_1…d(v_i)…v_n`.
    pub fn leibniz_extend(&self, f: &NcPoly) -> NcPoly {
        let q = &*self.quiver;
        let mut out = NcPoly::zero();
        for (path, coef) in f.terms() {
            let arrows = path.arrows();
            let mut prefix_deg = 0i64;
            for (i, &a) in arrows.iter().enumerate() {
                if let Some(image) = self.d.get(a) {
                    let c = if odd(prefix_deg) { -coef.clone() } else { coef.clone() };
                    for (mid, m) in image.terms() {
                        out.add_term(splice(q, path, i, mid), &c * m);
                    }
                }
                prefix_deg += q.degree(a);
            }
        }
        out
    }

    /// Evaluates `d(d(a))` for every arrow `a`.
    pub fn check_d_squared(&self) -> D2Report {
        let mut checked = 0;
        for a in self.quiver.arrow_ids() {
            checked += 1;
            let dd = self.leibniz_extend(&self.d_of(a));
            if !dd.is_zero() {
                return D2Report {
                    generators_checked: checked,
                    failure: Some((a, dd)),
                };
            }
        }
        D2Report {
            generators_checked: checked,
            failure: None,
        }
    }

    /// Greedy stratification: `F_0` holds the closed arrows, and `F_p` adds the
    /// arrows whose differential only involves arrows of `F_{p−1}`. Returns the
    /// cumulative layers, or `None` when some arrows can never be placed.
    pub fn check_filtration_triangular(&self) -> Option<Vec<Vec<ArrowId>>> {
        let q = &*self.quiver;
        let support: BTreeMap<ArrowId, BTreeSet<ArrowId>> = q
            .arrow_ids()
            .map(|a| {
                let used = self
                    .d_of(a)
                    .terms()
                    .flat_map(|(p, _)| p.arrows().to_vec())
                    .collect();
                (a, used)
            })
            .collect();
        let mut placed: BTreeSet<ArrowId> = BTreeSet::new();
        let mut layers: Vec<Vec<ArrowId>> = Vec::new();
        loop {
            let mut layer: Vec<ArrowId> = placed.iter().copied().collect();
            let new: Vec<ArrowId> = q
                .arrow_ids()
                .filter(|a| !placed.contains(a))
                .filter(|a| support[a].iter().all(|b| placed.contains(b)))
                .collect();
            if new.is_empty() {
                return if placed.len() == q.arrow_count() {
                    if layers.is_empty() {
                        layers.push(Vec::new());
                    }
                    Some(layers)
                } else {
                    None
                };
            }
            placed.extend(new.iter().copied());
            layer.extend(new);
            layer.sort();
            layers.push(layer);
        }
    }
}

/// Replaces the arrow at storage position `i` of `path` by the path `mid`.
pub(crate) fn splice(q: &GradedQuiver, path: &Path, i: usize, mid: &Path) -> Path {
    let arrows = path.arrows();
    if mid.is_trivial() {
        let mut rest = Vec::with_capacity(arrows.len() - 1);
        rest.extend_from_slice(&arrows[..i]);
        rest.extend_from_slice(&arrows[i + 1..]);
        return Path::from_arrows_or_trivial(q, &rest, mid.source()).expect("splice composes");
    }
    let mut out = Vec::with_capacity(arrows.len() + mid.len());
    out.extend_from_slice(&arrows[..i]);
    out.extend_from_slice(mid.arrows());
    out.extend_from_slice(&arrows[i + 1..]);
    Path::from_arrows(q, &out).expect("splice composes")
}
