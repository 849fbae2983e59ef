use std::fmt;

use super::cone::Cone;
use super::linalg::{self, Vector};
use crate::kernel::Scalar;
use crate::{Error, Result};

/// Affine inequality `normal·x + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub normal: Vector,
    pub offset: Scalar,
}

impl LinearForm {
    pub fn new(normal: Vector, offset: Scalar) -> Self {
        LinearForm { normal, offset }
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        &linalg::dot(&self.normal, x) + &self.offset
    }
}

/// Polyhedron `{x ∈ ℝ^d : normal·x + offset >= 0}`, handled through its
/// homogenization `{(x, s) : normal·x + offset·s >= 0, s >= 0}`.
#[derive(Clone)]
pub struct Polyhedron {
    dim: usize,
    forms: Vec<LinearForm>,
    hom: Cone,
}

pub type HPolyhedron = Polyhedron;

impl Polyhedron {
    pub fn new(dim: usize, forms: Vec<LinearForm>) -> Result<Self> {
        let mut ineqs = Vec::with_capacity(forms.len() + 1);
        for f in &forms {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.normal.len(),
                });
            }
            let mut row = f.normal.clone();
            row.push(f.offset.clone());
            ineqs.push(row);
        }
        ineqs.push(linalg::unit(dim + 1, dim));
        Ok(Polyhedron {
            dim,
            forms,
            hom: Cone::from_ineqs_unchecked(dim + 1, ineqs),
        })
    }

    /// `conv(points) + cone(rays)`.
    pub fn from_points(dim: usize, points: &[Vector], rays: &[Vector]) -> Result<Self> {
        let mut gens: Vec<Vector> = Vec::new();
        for p in points {
            let mut v = p.clone();
            v.push(Scalar::one());
            gens.push(v);
        }
        for r in rays {
            let mut v = r.clone();
            v.push(Scalar::zero());
            gens.push(v);
        }
        let hom = Cone::from_generators(dim + 1, gens, vec![])?;
        Self::from_homogenization(dim, &hom)
    }

    /// Dehomogenize a cone in `ℝ^{d+1}` contained in `s >= 0`.
    pub fn from_homogenization(dim: usize, hom: &Cone) -> Result<Self> {
        let f = hom.facet_description();
        let mut forms = Vec::new();
        let mut push = |row: &Vector| {
            let normal = row[..dim].to_vec();
            if !linalg::is_zero(&normal) || !row[dim].is_zero() {
                forms.push(LinearForm::new(normal, row[dim].clone()));
            }
        };
        for row in &f.facets {
            push(row);
        }
        for e in &f.equations {
            push(e);
            push(&linalg::neg(e));
        }
        // drop the trivial `1 >= 0` that comes from s >= 0
        forms.retain(|l| !(linalg::is_zero(&l.normal) && l.offset.is_positive()));
        Polyhedron::new(dim, forms)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn homogenization(&self) -> &Cone {
        &self.hom
    }

    pub fn is_empty(&self) -> bool {
        !self.hom.rays().iter().any(|r| r[self.dim].is_positive())
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.forms.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Points of the minimal faces; the vertices when the polyhedron is pointed.
    pub fn vertices(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .hom
            .rays()
            .iter()
            .filter(|r| r[self.dim].is_positive())
            .map(|r| {
                let s = r[self.dim].recip();
                linalg::scale(&r[..self.dim], &s)
            })
            .collect();
        out.sort();
        out
    }

    /// Extreme rays of the recession cone.
    pub fn rays(&self) -> Vec<Vector> {
        self.hom
            .rays()
            .iter()
            .filter(|r| r[self.dim].is_zero())
            .map(|r| r[..self.dim].to_vec())
            .collect()
    }

    pub fn lineality(&self) -> Vec<Vector> {
        self.hom
            .lineality()
            .iter()
            .map(|l| l[..self.dim].to_vec())
            .collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays().is_empty() && self.lineality().is_empty()
    }

    pub fn recession_cone(&self) -> Cone {
        Cone::from_ineqs_unchecked(
            self.dim,
            self.forms.iter().map(|f| f.normal.clone()).collect(),
        )
    }

    /// Dimension of the polyhedron; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.hom.dim() - 1)
        }
    }

    pub fn is_vertex(&self, w: &[Scalar]) -> bool {
        self.lineality().is_empty() && self.vertices().iter().any(|v| v.as_slice() == w)
    }

    /// `cone(P − w)` for a vertex `w`.
    pub fn local_cone(&self, w: &[Scalar]) -> Result<Cone> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        if !self.is_vertex(w) {
            return Err(Error::NotAVertex);
        }
        let tight: Vec<Vector> = self
            .forms
            .iter()
            .filter(|f| f.eval(w).is_zero())
            .map(|f| f.normal.clone())
            .collect();
        Ok(Cone::from_ineqs_unchecked(self.dim, tight))
    }

    /// Faces not at infinity, as homogenized cones.
    pub fn faces(&self) -> Vec<Cone> {
        self.hom
            .faces()
            .into_iter()
            .filter(|f| f.rays().iter().any(|r| r[self.dim].is_positive()))
            .collect()
    }

    /// Bounded faces as vertex lists.
    pub fn bounded_faces(&self) -> Vec<Vec<Vector>> {
        if !self.lineality().is_empty() {
            return Vec::new();
        }
        self.faces()
            .into_iter()
            .filter(|f| f.rays().iter().all(|r| r[self.dim].is_positive()))
            .map(|f| {
                let mut vs: Vec<Vector> = f
                    .rays()
                    .iter()
                    .map(|r| linalg::scale(&r[..self.dim], &r[self.dim].recip()))
                    .collect();
                vs.sort();
                vs
            })
            .collect()
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && (self.is_empty() && other.is_empty() || self.hom == other.hom)
    }
}

impl Eq for Polyhedron {}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Polyhedron[empty]");
        }
        let show = |vs: &[Vector]| {
            vs.iter()
                .map(|v| {
                    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "Polyhedron[vertices: {}; rays: {}; lines: {}]",
            show(&self.vertices()),
            show(&self.rays()),
            show(&self.lineality())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::linalg::from_ints;

    fn form(n: &[i64], c: i64) -> LinearForm {
        LinearForm::new(from_ints(n), Scalar::from_int(c))
    }

    #[test]
    fn triangle_vertices() {
        let p = Polyhedron::new(2, vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[-1, -1], 5)]).unwrap();
        assert_eq!(
            p.vertices(),
            vec![from_ints(&[0, 0]), from_ints(&[0, 5]), from_ints(&[5, 0])]
        );
        assert!(p.is_bounded());
        assert_eq!(p.dim(), Some(2));
        assert_eq!(p.bounded_faces().len(), 7);
    }

    #[test]
    fn local_cones_of_triangle() {
        let p = Polyhedron::new(2, vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[-1, -1], 5)]).unwrap();
        let lc = p.local_cone(&from_ints(&[5, 0])).unwrap();
        let expect = Cone::from_generators(2, vec![from_ints(&[-1, 0]), from_ints(&[-1, 1])], vec![]).unwrap();
        assert_eq!(lc, expect);
        assert_eq!(p.local_cone(&from_ints(&[1, 1])), Err(Error::NotAVertex));
    }

    #[test]
    fn empty_and_unbounded() {
        let e = Polyhedron::new(1, vec![form(&[1], -1), form(&[-1], 0)]).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.dim(), None);
        let h = Polyhedron::new(1, vec![form(&[1], -1)]).unwrap();
        assert_eq!(h.vertices(), vec![from_ints(&[1])]);
        assert_eq!(h.rays(), vec![from_ints(&[1])]);
        assert_eq!(h.recession_cone(), Cone::from_generators(1, vec![from_ints(&[1])], vec![]).unwrap());
    }

    #[test]
    fn from_points_round_trip() {
        let p = Polyhedron::from_points(2, &[from_ints(&[0, 0]), from_ints(&[2, 0]), from_ints(&[0, 2]), from_ints(&[1, 1])], &[]).unwrap();
        assert_eq!(p.vertices().len(), 3);
        let q = Polyhedron::new(2, p.forms().to_vec()).unwrap();
        assert_eq!(p, q);
    }
}
