use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use super::dd::{self, BitSet, Generators};
use super::linalg::{self, Vector};
use crate::kernel::Scalar;
use crate::{Error, Result};

/// Irredundant inequality description: `e·x = 0` for each equation and
/// `f·x >= 0` for each facet normal. Facet normals lie in the linear span of
/// the cone, so the description is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facets {
    pub equations: Vec<Vector>,
    pub facets: Vec<Vector>,
}

/// Polyhedral cone `{x ∈ ℝ^d : a·x >= 0}` over the session field.
///
/// Generators and facets are computed on first use and cached.
#[derive(Clone)]
pub struct Cone {
    dim: usize,
    ineqs: Vec<Vector>,
    gens: OnceLock<Generators>,
    facets: OnceLock<Facets>,
}

pub type HCone = Cone;

impl Cone {
    pub fn new(dim: usize, ineqs: Vec<Vector>) -> Result<Self> {
        for a in &ineqs {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
        }
        Ok(Self::from_ineqs_unchecked(dim, ineqs))
    }

    pub(crate) fn from_ineqs_unchecked(dim: usize, ineqs: Vec<Vector>) -> Self {
        let ineqs = ineqs.into_iter().filter(|a| !linalg::is_zero(a)).collect();
        Cone {
            dim,
            ineqs,
            gens: OnceLock::new(),
            facets: OnceLock::new(),
        }
    }

    /// `cone(rays) + span(lines)`.
    pub fn from_generators(dim: usize, rays: Vec<Vector>, lines: Vec<Vector>) -> Result<Self> {
        for v in rays.iter().chain(&lines) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let facets = facets_of(dim, &rays, &lines);
        let mut ineqs = facets.facets.clone();
        for e in &facets.equations {
            ineqs.push(e.clone());
            ineqs.push(linalg::neg(e));
        }
        let cone = Cone::from_ineqs_unchecked(dim, ineqs);
        let _ = cone.facets.set(facets);
        Ok(cone)
    }

    pub fn whole_space(dim: usize) -> Self {
        Cone::from_ineqs_unchecked(dim, Vec::new())
    }

    pub fn origin(dim: usize) -> Self {
        let mut ineqs = Vec::new();
        for i in 0..dim {
            ineqs.push(linalg::unit(dim, i));
            ineqs.push(linalg::neg(&linalg::unit(dim, i)));
        }
        Cone::from_ineqs_unchecked(dim, ineqs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// The inequalities the cone was built from (possibly redundant).
    pub fn inequalities(&self) -> &[Vector] {
        &self.ineqs
    }

    pub fn generators(&self) -> &Generators {
        self.gens
            .get_or_init(|| dd::extreme_rays(&self.ineqs, self.dim))
    }

    pub fn rays(&self) -> &[Vector] {
        &self.generators().rays
    }

    pub fn lineality(&self) -> &[Vector] {
        &self.generators().lines
    }

    pub fn facet_description(&self) -> &Facets {
        self.facets.get_or_init(|| {
            let g = self.generators();
            facets_of(self.dim, &g.rays, &g.lines)
        })
    }

    pub fn facet_normals(&self) -> &[Vector] {
        &self.facet_description().facets
    }

    pub fn equations(&self) -> &[Vector] {
        &self.facet_description().equations
    }

    pub fn dim(&self) -> usize {
        self.dim - self.equations().len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality().is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations().is_empty()
    }

    pub fn is_origin(&self) -> bool {
        self.rays().is_empty() && self.lineality().is_empty()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.ineqs.iter().all(|a| !linalg::dot(a, x).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        let g = other.generators();
        g.rays.iter().all(|r| self.contains(r))
            && g
                .lines
                .iter()
                .all(|l| self.contains(l) && self.contains(&linalg::neg(l)))
    }

    /// Interior of the cone relative to its span.
    pub fn contains_relint(&self, x: &[Scalar]) -> bool {
        let f = self.facet_description();
        f.equations.iter().all(|e| linalg::dot(e, x).is_zero())
            && f.facets.iter().all(|a| linalg::dot(a, x).is_positive())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        Cone::from_ineqs_unchecked(self.dim, ineqs)
    }

    /// The cone cut by extra inequalities.
    pub fn with_inequalities(&self, extra: impl IntoIterator<Item = Vector>) -> Cone {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(extra);
        Cone::from_ineqs_unchecked(self.dim, ineqs)
    }

    pub fn dual(&self) -> Cone {
        let g = self.generators();
        let mut ineqs = g.rays.clone();
        for l in &g.lines {
            ineqs.push(l.clone());
            ineqs.push(linalg::neg(l));
        }
        Cone::from_ineqs_unchecked(self.dim, ineqs)
    }

    /// Sum of the extreme rays, a point in the relative interior.
    pub fn relint_point(&self) -> Vector {
        self.rays()
            .iter()
            .fold(linalg::zeros(self.dim), |acc, r| linalg::add(&acc, r))
    }

    fn ray_set(&self, pred: impl Fn(&Vector) -> bool) -> BitSet {
        let rays = self.rays();
        let mut b = BitSet::new(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if pred(r) {
                b.insert(i);
            }
        }
        b
    }

    fn face_from_rays(&self, rays: &BitSet, tight: &[&Vector]) -> Cone {
        let g = self.generators();
        let face_rays: Vec<Vector> = rays.iter().filter(|&i| i < g.rays.len()).map(|i| g.rays[i].clone()).collect();
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(tight.iter().map(|f| linalg::neg(f)));
        let face = Cone::from_ineqs_unchecked(self.dim, ineqs);
        // extreme rays of a face are the tight extreme rays of the cone
        let _ = face.gens.set(Generators {
            rays: face_rays,
            lines: g.lines.clone(),
        });
        face
    }

    /// Smallest face containing `x`.
    pub fn face_generated_by(&self, x: &[Scalar]) -> Result<Cone> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if !self.contains(x) {
            return Err(Error::OutsideCone);
        }
        let tight: Vec<&Vector> = self
            .facet_normals()
            .iter()
            .filter(|f| linalg::dot(f, x).is_zero())
            .collect();
        let rays = self.ray_set(|r| tight.iter().all(|f| linalg::dot(f, r).is_zero()));
        Ok(self.face_from_rays(&rays, &tight))
    }

    pub fn is_face_of(&self, cone: &Cone) -> bool {
        if self.dim != cone.dim || !cone.contains_cone(self) {
            return false;
        }
        match cone.face_generated_by(&self.relint_point()) {
            Ok(f) => f == *self,
            Err(_) => false,
        }
    }

    /// All faces, from the cone itself down to the lineality space, ordered by
    /// decreasing dimension and then canonically.
    pub fn faces(&self) -> Vec<Cone> {
        let normals = self.facet_normals();
        let nrays = self.rays().len();
        let facet_sets: Vec<BitSet> = normals
            .iter()
            .map(|f| self.ray_set(|r| linalg::dot(f, r).is_zero()))
            .collect();
        let mut seen: Vec<BitSet> = vec![BitSet::full(nrays)];
        let mut i = 0;
        while i < seen.len() {
            let cur = seen[i].clone();
            for fs in &facet_sets {
                let next = cur.and(fs);
                if next != cur && !seen.contains(&next) {
                    seen.push(next);
                }
            }
            i += 1;
        }
        let mut faces: Vec<Cone> = seen
            .iter()
            .map(|s| {
                let tight: Vec<&Vector> = normals
                    .iter()
                    .zip(&facet_sets)
                    .filter(|(_, fs)| s.is_subset(fs))
                    .map(|(f, _)| f)
                    .collect();
                self.face_from_rays(s, &tight)
            })
            .collect();
        faces.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.canonical_key().cmp(&b.canonical_key())));
        faces
    }

    /// Facets as cones, in canonical order.
    pub fn facet_cones(&self) -> Vec<(Vector, Cone)> {
        self.facet_normals()
            .iter()
            .map(|f| {
                let rays = self.ray_set(|r| linalg::dot(f, r).is_zero());
                (f.clone(), self.face_from_rays(&rays, &[f]))
            })
            .collect()
    }

    pub fn canonical_key(&self) -> (&[Vector], &[Vector]) {
        let g = self.generators();
        (&g.lines, &g.rays)
    }
}

/// Irredundant H-description of `cone(rays) + span(lines)` via the dual.
fn facets_of(dim: usize, rays: &[Vector], lines: &[Vector]) -> Facets {
    let mut cons: Vec<Vector> = rays.to_vec();
    for l in lines {
        cons.push(l.clone());
        cons.push(linalg::neg(l));
    }
    let g = dd::extreme_rays(&cons, dim);
    Facets {
        equations: g.lines,
        facets: g.rays,
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.canonical_key().hash(state);
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |vs: &[Vector]| {
            vs.iter()
                .map(|v| {
                    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let g = self.generators();
        write!(f, "Cone[rays: {}", show(&g.rays))?;
        if !g.lines.is_empty() {
            write!(f, "; lines: {}", show(&g.lines))?;
        }
        write!(f, "]")
    }
}
