//! Weighted point configurations: weight polytopes, regular subdivisions,
//! the min-plus dual complex and the fans built from it.

use std::fmt;

use crate::exec::Exec;
use crate::fan::GammaFan;
use crate::gamma_cone::{fmt_vector, GammaCone, GammaIneq, ValuationMode};
use crate::kernel::{Scalar, ValueGroup};
use crate::polyhedral::{linalg, Cone, LinearForm, Polyhedron, Vector};
use crate::{Error, Result};

/// Points `m_0, …, m_N` of `M` with heights `a(i)`; `None` is the height `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedConfig {
    gamma: ValueGroup,
    mode: ValuationMode,
    n: usize,
    points: Vec<Vec<i64>>,
    heights: Vec<Option<Scalar>>,
}

impl WeightedConfig {
    pub fn new(
        gamma: ValueGroup,
        mode: ValuationMode,
        n: usize,
        points: Vec<Vec<i64>>,
        heights: Vec<Option<Scalar>>,
    ) -> Result<Self> {
        if points.len() != heights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: heights.len(),
            });
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        if heights.iter().all(Option::is_none) {
            return Err(Error::domain("every height is infinite"));
        }
        for a in heights.iter().flatten() {
            if !gamma.contains(a)? {
                return Err(Error::GammaViolation { value: Box::new(a.clone()) });
            }
        }
        Ok(WeightedConfig {
            gamma,
            mode,
            n,
            points,
            heights,
        })
    }

    pub fn gamma(&self) -> &ValueGroup {
        &self.gamma
    }

    pub fn mode(&self) -> ValuationMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn heights(&self) -> &[Option<Scalar>] {
        &self.heights
    }

    /// Indices taking part in the construction: finite height, and for a
    /// repeated point only the first index of minimal height.
    pub fn effective_indices(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| match &self.heights[i] {
                None => false,
                Some(a) => !(0..self.points.len()).any(|j| {
                    j != i
                        && self.points[j] == self.points[i]
                        && self.heights[j]
                            .as_ref()
                            .is_some_and(|b| b < a || (b == a && j < i))
                }),
            })
            .collect()
    }

    /// Finite-height indices shadowed by a repeated point of lower height.
    pub fn shadowed_indices(&self) -> Vec<usize> {
        let eff = self.effective_indices();
        (0..self.points.len())
            .filter(|i| self.heights[*i].is_some() && !eff.contains(i))
            .collect()
    }

    fn point(&self, i: usize) -> Vector {
        linalg::from_ints(&self.points[i])
    }

    fn height(&self, i: usize) -> &Scalar {
        self.heights[i].as_ref().expect("finite height")
    }

    /// `a(i) + ⟨m_i, w⟩`.
    pub fn affine_form(&self, i: usize, w: &[Scalar]) -> Scalar {
        &linalg::dot(&self.point(i), w) + self.height(i)
    }

    /// `g(w) = min_i a(i) + ⟨m_i, w⟩` and the indices attaining it.
    pub fn min_plus(&self, w: &[Scalar]) -> (Scalar, Vec<usize>) {
        let eff = self.effective_indices();
        let values: Vec<Scalar> = eff.iter().map(|&i| self.affine_form(i, w)).collect();
        let g = values.iter().min().expect("a finite height").clone();
        let active = eff.iter().zip(&values).filter(|(_, v)| **v == g).map(|(i, _)| *i).collect();
        (g, active)
    }

    /// Inequality `⟨m_j − m_i, w⟩ + (a(j) − a(i))·t >= 0`.
    fn difference(&self, i: usize, j: usize) -> GammaIneq {
        let m = self.points[j].iter().zip(&self.points[i]).map(|(a, b)| a - b).collect();
        GammaIneq::new(m, self.height(j) - self.height(i))
    }
}

impl fmt::Display for WeightedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, a) in self.points.iter().zip(&self.heights) {
            let ps: Vec<String> = p.iter().map(i64::to_string).collect();
            match a {
                Some(a) => writeln!(f, "{} | {}", ps.join(" "), a)?,
                None => writeln!(f, "{} | inf", ps.join(" "))?,
            }
        }
        Ok(())
    }
}

/// Convex hull of the points with finite height.
pub fn weight_polytope(cfg: &WeightedConfig) -> Polyhedron {
    let pts: Vec<Vector> = cfg.effective_indices().iter().map(|&i| cfg.point(i)).collect();
    Polyhedron::from_points(cfg.n, &pts, &[]).expect("consistent dimensions")
}

/// A face of a polytope or of a subdivision: its vertices, dimension, and the
/// configuration indices lying on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolytopeFace {
    pub dim: usize,
    pub vertices: Vec<Vector>,
    pub indices: Vec<usize>,
}

impl fmt::Display for PolytopeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| fmt_vector(v)).collect();
        write!(f, "dim {}: {}", self.dim, vs.join(" "))
    }
}

fn affine_dim(vs: &[Vector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let diffs: Vec<Vector> = vs[1..].iter().map(|v| linalg::sub(v, &vs[0])).collect();
    linalg::rank(&diffs, vs[0].len())
}

/// Indices whose points lie on the face of `poly` spanned by `vertices`.
fn indices_on_face(poly: &Polyhedron, vertices: &[Vector], candidates: &[(usize, Vector)]) -> Vec<usize> {
    let tight: Vec<&LinearForm> = poly
        .forms()
        .iter()
        .filter(|f| vertices.iter().all(|v| f.eval(v).is_zero()))
        .collect();
    candidates
        .iter()
        .filter(|(_, p)| tight.iter().all(|f| f.eval(p).is_zero()))
        .map(|(i, _)| *i)
        .collect()
}

fn sort_faces(faces: &mut [PolytopeFace]) {
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.vertices.cmp(&b.vertices)));
}

/// Nonempty faces of the weight polytope.
pub fn weight_polytope_faces(cfg: &WeightedConfig) -> Vec<PolytopeFace> {
    let poly = weight_polytope(cfg);
    let cands: Vec<(usize, Vector)> = cfg.effective_indices().iter().map(|&i| (i, cfg.point(i))).collect();
    let mut out: Vec<PolytopeFace> = poly
        .bounded_faces()
        .into_iter()
        .map(|vs| PolytopeFace {
            dim: affine_dim(&vs),
            indices: indices_on_face(&poly, &vs, &cands),
            vertices: vs,
        })
        .collect();
    sort_faces(&mut out);
    out
}

/// The regular subdivision of the weight polytope induced by the heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSubdivision {
    n: usize,
    faces: Vec<PolytopeFace>,
}

impl RegularSubdivision {
    /// All faces, by decreasing dimension.
    pub fn faces(&self) -> &[PolytopeFace] {
        &self.faces
    }

    /// Cells of top dimension.
    pub fn maximal_cells(&self) -> Vec<&PolytopeFace> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        self.faces.iter().filter(|f| f.dim == top).collect()
    }

    /// Indices of the vertices of the subdivision.
    pub fn vertex_indices(&self) -> Vec<usize> {
        self.faces.iter().filter(|f| f.dim == 0).map(|f| f.indices[0]).collect()
    }

    pub fn find(&self, q: &PolytopeFace) -> Option<&PolytopeFace> {
        self.faces.iter().find(|f| f.vertices == q.vertices)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Projection of the lower faces of `conv{(m_i, a(i))} + ℝ₊·e_λ`.
pub fn regular_subdivision(cfg: &WeightedConfig) -> RegularSubdivision {
    let n = cfg.n;
    let lift = |i: usize| {
        let mut v = cfg.point(i);
        v.push(cfg.height(i).clone());
        v
    };
    let eff = cfg.effective_indices();
    let lifted: Vec<(usize, Vector)> = eff.iter().map(|&i| (i, lift(i))).collect();
    let pts: Vec<Vector> = lifted.iter().map(|(_, v)| v.clone()).collect();
    let upper = Polyhedron::from_points(n + 1, &pts, &[linalg::unit(n + 1, n)]).expect("consistent dimensions");
    let mut faces: Vec<PolytopeFace> = upper
        .bounded_faces()
        .into_iter()
        .map(|vs| {
            let indices = indices_on_face(&upper, &vs, &lifted);
            let mut vertices: Vec<Vector> = vs.iter().map(|v| v[..n].to_vec()).collect();
            vertices.sort();
            PolytopeFace {
                dim: affine_dim(&vs),
                vertices,
                indices,
            }
        })
        .collect();
    sort_faces(&mut faces);
    RegularSubdivision { n, faces }
}

/// A linearity domain of `g` with the indices attaining the minimum on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCell {
    pub region: Polyhedron,
    pub active: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    pub cells: Vec<DualCell>,
}

fn cell_of(cfg: &WeightedConfig, active: &[usize]) -> Polyhedron {
    let i0 = active[0];
    let mut forms = Vec::new();
    for j in cfg.effective_indices() {
        let d = cfg.difference(i0, j);
        let form = LinearForm::new(linalg::from_ints(&d.m), d.c.clone());
        if active.contains(&j) {
            forms.push(LinearForm::new(linalg::neg(&form.normal), -&form.offset));
        }
        forms.push(form);
    }
    Polyhedron::new(cfg.n, forms).expect("consistent dimensions")
}

/// The linearity domains of `g`, one per face of the regular subdivision and
/// in the same order.
pub fn dual_complex(cfg: &WeightedConfig) -> DualComplex {
    dual_complex_with(cfg, Exec::default())
}

pub fn dual_complex_with(cfg: &WeightedConfig, exec: Exec) -> DualComplex {
    let sub = regular_subdivision(cfg);
    let cells = exec.map(sub.faces(), |q| DualCell {
        region: cell_of(cfg, &q.indices),
        active: q.indices.clone(),
    });
    DualComplex { cells }
}

/// The cell `σ_Q` where exactly the points of `Q` attain `g`.
pub fn face_to_cone(cfg: &WeightedConfig, q: &PolytopeFace) -> Result<Polyhedron> {
    let sub = regular_subdivision(cfg);
    let face = sub
        .find(q)
        .ok_or_else(|| Error::NotAFace(format!("not a face of the subdivision: {q}")))?;
    Ok(cell_of(cfg, &face.indices))
}

/// The face `Q_σ` spanned by the points attaining `g` on all of `σ`.
pub fn cone_to_face(cfg: &WeightedConfig, cell: &Polyhedron) -> Result<PolytopeFace> {
    if cell.is_empty() {
        return Err(Error::NotAFace("empty cell".into()));
    }
    let hom = cell.homogenization().relint_point();
    let s = hom[cfg.n].recip();
    let w = linalg::scale(&hom[..cfg.n], &s);
    let (_, active) = cfg.min_plus(&w);
    let sub = regular_subdivision(cfg);
    let face = sub
        .faces()
        .iter()
        .find(|f| f.indices == active)
        .ok_or_else(|| Error::NotAFace("no face of the subdivision is active here".into()))?;
    if cell_of(cfg, &face.indices) != *cell {
        return Err(Error::NotAFace("not a cell of the dual complex".into()));
    }
    Ok(face.clone())
}

fn all_differences(cfg: &WeightedConfig) -> Vec<GammaIneq> {
    let eff = cfg.effective_indices();
    let mut out = Vec::new();
    for &i in &eff {
        for &j in &eff {
            if i != j {
                out.push(cfg.difference(i, j));
            }
        }
    }
    out
}

/// The fan of closed cones over `c × {1}` for the cells `c` of the dual
/// complex, computed from their vertices and recession rays.
pub fn generated_fan(cfg: &WeightedConfig) -> Result<GammaFan> {
    generated_fan_with(cfg, Exec::default())
}

pub fn generated_fan_with(cfg: &WeightedConfig, exec: Exec) -> Result<GammaFan> {
    let n = cfg.n;
    let complex = dual_complex_with(cfg, exec);
    let candidates = all_differences(cfg);
    let cones = exec.map(&complex.cells, |cell| -> Result<GammaCone> {
        let lines = cell.region.lineality();
        if !lines.is_empty() {
            return Err(Error::NotPointed(format!(
                "cell with active set {:?} contains the line {}; the weight polytope is not full-dimensional",
                cell.active,
                fmt_vector(&lines[0])
            )));
        }
        let mut rays: Vec<Vector> = Vec::new();
        for v in cell.region.vertices() {
            let mut r = v;
            r.push(Scalar::one());
            rays.push(r);
        }
        for v in cell.region.rays() {
            let mut r = v;
            r.push(Scalar::zero());
            rays.push(r);
        }
        let cone = Cone::from_generators(n + 1, rays, vec![])?;
        GammaCone::from_cone(&cone, &cfg.gamma, &candidates)
    });
    let cones: Vec<GammaCone> = cones.into_iter().collect::<Result<_>>()?;
    GammaFan::new(cfg.gamma.clone(), cfg.mode, n, cones)
}

/// The fan of the cones `σ_i = {⟨m_j − m_i, w⟩ + (a(j) − a(i))·t >= 0}` over
/// the vertices `m_i` of the regular subdivision.
pub fn normalization_fan(cfg: &WeightedConfig) -> Result<GammaFan> {
    normalization_fan_with(cfg, Exec::default())
}

pub fn normalization_fan_with(cfg: &WeightedConfig, exec: Exec) -> Result<GammaFan> {
    let eff = cfg.effective_indices();
    let verts = regular_subdivision(cfg).vertex_indices();
    let cones = exec.map(&verts, |&i| {
        let ineqs = eff.iter().filter(|&&j| j != i).map(|&j| cfg.difference(i, j)).collect();
        GammaCone::admissible(&cfg.gamma, cfg.n, ineqs).map_err(|e| match e {
            Error::NotAdmissible { certificate, .. } => Error::NotPointed(format!(
                "cone at vertex m_{i} contains the line {certificate}; the weight polytope is not full-dimensional"
            )),
            e => e,
        })
    });
    let cones: Vec<GammaCone> = cones.into_iter().collect::<Result<_>>()?;
    GammaFan::new(cfg.gamma.clone(), cfg.mode, cfg.n, cones)
}

/// Orbits of the generic fiber (faces of the weight polytope), of the special
/// fiber (faces of the subdivision), and irreducible components of the
/// special fiber (maximal cells).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub generic: Vec<PolytopeFace>,
    pub special: Vec<PolytopeFace>,
    pub components: Vec<PolytopeFace>,
    pub shadowed: Vec<usize>,
}

impl fmt::Display for OrbitCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generic orbits: {}", self.generic.len())?;
        for q in &self.generic {
            writeln!(f, "  {q}")?;
        }
        writeln!(f, "special orbits: {}", self.special.len())?;
        for q in &self.special {
            writeln!(f, "  {q}")?;
        }
        writeln!(f, "components: {}", self.components.len())?;
        for q in &self.components {
            writeln!(f, "  {q}")?;
        }
        if !self.shadowed.is_empty() {
            let s: Vec<String> = self.shadowed.iter().map(usize::to_string).collect();
            writeln!(f, "ignored repeated points (higher height): {}", s.join(", "))?;
        }
        Ok(())
    }
}

pub fn orbit_census(cfg: &WeightedConfig) -> OrbitCensus {
    let sub = regular_subdivision(cfg);
    let components = sub.maximal_cells().into_iter().cloned().collect();
    OrbitCensus {
        generic: weight_polytope_faces(cfg),
        special: sub.faces,
        components,
        shadowed: cfg.shadowed_indices(),
    }
}
