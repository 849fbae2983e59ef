//! Γ-admissible cones in `N_ℝ × ℝ₊`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::kernel::{Scalar, ValueGroup};
use crate::polyhedral::{linalg, Cone, LinearForm, Polyhedron, Vector};
use crate::{Error, Result};

/// Whether the valuation is discrete; relaxes the finite-type condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ValuationMode {
    #[default]
    Dense,
    Discrete,
}

impl fmt::Display for ValuationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValuationMode::Dense => "dense",
            ValuationMode::Discrete => "discrete",
        })
    }
}

impl FromStr for ValuationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(ValuationMode::Dense),
            "discrete" => Ok(ValuationMode::Discrete),
            _ => Err(Error::domain(format!("unknown valuation mode `{s}`"))),
        }
    }
}

/// `⟨m, w⟩ + c·t >= 0` with `m ∈ M` and `c ∈ Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaIneq {
    pub m: Vec<i64>,
    pub c: Scalar,
}

impl GammaIneq {
    pub fn new(m: Vec<i64>, c: Scalar) -> Self {
        GammaIneq { m, c }
    }

    /// The normal `(m, c)` in `ℝ^{n+1}`.
    pub fn vector(&self) -> Vector {
        let mut v: Vector = self.m.iter().map(|&x| Scalar::from_int(x)).collect();
        v.push(self.c.clone());
        v
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        linalg::dot(&self.vector(), x)
    }

    pub fn negate(&self) -> GammaIneq {
        GammaIneq {
            m: self.m.iter().map(|x| -x).collect(),
            c: -&self.c,
        }
    }

    fn is_trivial(&self) -> bool {
        self.m.iter().all(|&x| x == 0) && !self.c.is_negative()
    }
}

impl fmt::Display for GammaIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.m.iter().map(i64::to_string).collect();
        write!(f, "{} | {}", ms.join(" "), self.c)
    }
}

/// A cone `{(w, t) : t >= 0, ⟨m_i, w⟩ + c_i·t >= 0}` with `c_i ∈ Γ`.
#[derive(Clone)]
pub struct GammaCone {
    n: usize,
    ineqs: Vec<GammaIneq>,
    cone: Cone,
    /// A positive element of Γ, used to state `t <= 0` on boundary faces.
    unit: Scalar,
}

/// One irreducible component of the special fiber: a vertex of the level-1
/// slice and the character sublattice `{m : ⟨m, w⟩ ∈ Γ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub vertex: Vector,
    pub lattice_basis: Vec<Vec<BigInt>>,
    /// Index in `M`; `None` when the sublattice has smaller rank.
    pub index: Option<BigInt>,
}

pub(crate) fn t_axis(n: usize) -> Vector {
    linalg::unit(n + 1, n)
}

impl GammaCone {
    /// Builds the cone, checking that every offset lies in Γ. Pointedness is
    /// not required here; see [`GammaCone::is_admissible`].
    pub fn new(gamma: &ValueGroup, n: usize, ineqs: Vec<GammaIneq>) -> Result<Self> {
        for q in &ineqs {
            if q.m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: q.m.len(),
                });
            }
            if !gamma.contains(&q.c)? {
                return Err(Error::GammaViolation { value: Box::new(q.c.clone()) });
            }
        }
        Ok(Self::from_trusted(n, ineqs, gamma.positive_element()))
    }

    /// Like [`GammaCone::new`] but also rejects cones containing a line.
    pub fn admissible(gamma: &ValueGroup, n: usize, ineqs: Vec<GammaIneq>) -> Result<Self> {
        let c = Self::new(gamma, n, ineqs)?;
        match c.lineality_certificate() {
            None => Ok(c),
            Some(v) => Err(Error::NotAdmissible {
                index: 0,
                certificate: fmt_vector(&v),
            }),
        }
    }

    /// The half-space `t >= 0` itself.
    pub fn upper_half_space(gamma: &ValueGroup, n: usize) -> Self {
        Self::from_trusted(n, Vec::new(), gamma.positive_element())
    }

    pub(crate) fn from_trusted(n: usize, ineqs: Vec<GammaIneq>, unit: Scalar) -> Self {
        let mut ineqs: Vec<GammaIneq> = ineqs.into_iter().filter(|q| !q.is_trivial()).collect();
        ineqs.sort();
        ineqs.dedup();
        let mut rows: Vec<Vector> = ineqs.iter().map(GammaIneq::vector).collect();
        rows.push(t_axis(n));
        GammaCone {
            n,
            cone: Cone::from_ineqs_unchecked(n + 1, rows),
            ineqs,
            unit,
        }
    }

    /// Rebuild with a new inequality list, keeping the Γ unit.
    pub(crate) fn derive(&self, ineqs: Vec<GammaIneq>) -> GammaCone {
        Self::from_trusted(self.n, ineqs, self.unit.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The stored inequalities, without the implicit `t >= 0`.
    pub fn inequalities(&self) -> &[GammaIneq] {
        &self.ineqs
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn unit(&self) -> &Scalar {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.cone.contains(x)
    }

    /// A nonzero vector of the lineality space, if there is one.
    pub fn lineality_certificate(&self) -> Option<Vector> {
        self.cone.lineality().first().cloned()
    }

    pub fn is_admissible(&self) -> bool {
        self.cone.is_pointed()
    }

    /// Whether the cone lies in `t = 0`.
    pub fn in_boundary(&self) -> bool {
        self.cone.rays().iter().all(|r| r[self.n].is_zero())
            && self.cone.lineality().iter().all(|l| l[self.n].is_zero())
    }

    /// `σ_r = {w : (w, r) ∈ σ}`.
    pub fn slice(&self, r: &Scalar) -> Result<Polyhedron> {
        if r.is_negative() {
            return Err(Error::domain(format!("slice level {r} is negative")));
        }
        let forms = self
            .ineqs
            .iter()
            .map(|q| {
                LinearForm::new(
                    q.m.iter().map(|&x| Scalar::from_int(x)).collect(),
                    &q.c * r,
                )
            })
            .collect();
        Polyhedron::new(self.n, forms)
    }

    pub fn level_one(&self) -> Polyhedron {
        self.slice(&Scalar::one()).expect("level 1 is nonnegative")
    }

    /// Vertices of `σ_1` having a coordinate outside Γ.
    pub fn vertices_outside_n_gamma(&self, gamma: &ValueGroup) -> Result<Vec<Vector>> {
        let mut out = Vec::new();
        for v in self.level_one().vertices() {
            let mut inside = true;
            for x in &v {
                inside &= gamma.contains(x)?;
            }
            if !inside {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Finite-type condition: every vertex of `σ_1` lies in `N_Γ`. Always
    /// satisfied for a discrete valuation.
    pub fn finite_type_check(&self, gamma: &ValueGroup, mode: ValuationMode) -> Result<(bool, Vec<Vector>)> {
        if mode == ValuationMode::Discrete {
            return Ok((true, Vec::new()));
        }
        let bad = self.vertices_outside_n_gamma(gamma)?;
        Ok((bad.is_empty(), bad))
    }

    /// Whether the special fiber is reduced.
    pub fn reducedness_flag(&self, gamma: &ValueGroup, mode: ValuationMode) -> Result<bool> {
        Ok(mode == ValuationMode::Dense || self.vertices_outside_n_gamma(gamma)?.is_empty())
    }

    pub fn special_fiber_census(&self, gamma: &ValueGroup) -> Result<Vec<FiberComponent>> {
        let p = self.level_one();
        if !p.lineality().is_empty() {
            return Err(Error::NotPointed(
                "the level-1 slice contains a line".into(),
            ));
        }
        p.vertices()
            .into_iter()
            .map(|v| {
                let (lattice_basis, index) = gamma.character_sublattice(&v)?;
                Ok(FiberComponent {
                    vertex: v,
                    lattice_basis,
                    index,
                })
            })
            .collect()
    }

    /// The face cut out by the stored inequalities tight at `x`.
    pub fn face_generated_by(&self, x: &[Scalar]) -> Result<GammaCone> {
        if x.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: x.len(),
            });
        }
        if !self.contains(x) {
            return Err(Error::OutsideCone);
        }
        let mut ineqs = self.ineqs.clone();
        for q in &self.ineqs {
            if q.eval(x).is_zero() {
                ineqs.push(q.negate());
            }
        }
        if x[self.n].is_zero() {
            ineqs.push(GammaIneq::new(vec![0; self.n], -&self.unit));
        }
        Ok(self.derive(ineqs))
    }

    /// All faces, largest first, in canonical order.
    pub fn faces(&self) -> Vec<GammaCone> {
        self.cone
            .faces()
            .iter()
            .map(|f| {
                self.face_generated_by(&f.relint_point())
                    .expect("relative interior point of a face")
            })
            .collect()
    }

    pub fn facets(&self) -> Vec<GammaCone> {
        let d = self.dim();
        self.faces().into_iter().filter(|f| f.dim() + 1 == d).collect()
    }

    pub fn is_face_of(&self, other: &GammaCone) -> bool {
        self.cone.is_face_of(&other.cone)
    }

    pub fn intersect(&self, other: &GammaCone) -> GammaCone {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        self.derive(ineqs)
    }

    /// Irredundant description: one stored inequality per facet, plus the
    /// stored inequalities that vanish on the whole cone.
    pub fn normalized(&self) -> GammaCone {
        let f = self.cone.facet_description();
        let gens = self.cone.generators();
        let vanishes = |q: &GammaIneq| {
            let v = q.vector();
            gens.rays.iter().all(|r| linalg::dot(&v, r).is_zero())
                && gens.lines.iter().all(|l| linalg::dot(&v, l).is_zero())
        };
        let mut keep: Vec<GammaIneq> = Vec::new();
        for normal in &f.facets {
            let best = self
                .ineqs
                .iter()
                .filter(|q| !vanishes(q))
                .filter(|q| {
                    let v = linalg::project_out(&q.vector(), &f.equations);
                    linalg::positively_parallel(&v, normal)
                })
                .min_by(|a, b| ineq_size(a).cmp(&ineq_size(b)).then_with(|| a.cmp(b)));
            if let Some(q) = best {
                keep.push(q.clone());
            }
            // a facet with no stored inequality is t >= 0, which stays implicit
        }
        let mut tight: Vec<GammaIneq> = Vec::new();
        for q in self.ineqs.iter().filter(|q| vanishes(q)) {
            let v = q.vector();
            if !tight.iter().any(|p| linalg::positively_parallel(&p.vector(), &v)) {
                tight.push(q.clone());
            }
        }
        if self.in_boundary() {
            let v = linalg::neg(&t_axis(self.n));
            if !tight.iter().any(|p| linalg::positively_parallel(&p.vector(), &v)) {
                tight.push(GammaIneq::new(vec![0; self.n], -&self.unit));
            }
        }
        keep.extend(tight);
        self.derive(keep)
    }

    /// Γ-cone equal to `cone` (which must lie in `t >= 0`), with normals
    /// taken from `candidates` where possible and rescaled into Γ otherwise.
    pub fn from_cone(cone: &Cone, gamma: &ValueGroup, candidates: &[GammaIneq]) -> Result<GammaCone> {
        let n = cone.ambient_dim() - 1;
        let f = cone.facet_description();
        let mut ineqs = Vec::new();
        for normal in &f.facets {
            let projected_match = candidates.iter().find(|q| {
                linalg::positively_parallel(&linalg::project_out(&q.vector(), &f.equations), normal)
                    && !vanishes_on_span(&q.vector(), cone)
                    && cuts_same_facet(q, normal, cone)
            });
            match projected_match {
                Some(q) => ineqs.push(q.clone()),
                None => {
                    if linalg::positively_parallel(normal, &t_axis(n)) {
                        continue;
                    }
                    ineqs.push(normalize_into_gamma(normal, gamma)?);
                }
            }
        }
        // equations: prefer candidates vanishing on the cone
        let eq_rank = f.equations.len();
        let mut chosen: Vec<Vector> = Vec::new();
        for q in candidates {
            if chosen.len() == eq_rank {
                break;
            }
            let v = q.vector();
            if vanishes_on_span(&v, cone) {
                let mut trial = chosen.clone();
                trial.push(v.clone());
                if linalg::rank(&trial, n + 1) > chosen.len() {
                    chosen = trial;
                    ineqs.push(q.clone());
                    ineqs.push(q.negate());
                }
            }
        }
        if chosen.len() < eq_rank {
            let mut trial = chosen.clone();
            for e in &f.equations {
                trial.push(e.clone());
                if linalg::rank(&trial, n + 1) > chosen.len() {
                    chosen = trial.clone();
                    if linalg::positively_parallel(e, &t_axis(n))
                        || linalg::positively_parallel(&linalg::neg(e), &t_axis(n))
                    {
                        ineqs.push(GammaIneq::new(vec![0; n], -gamma.positive_element()));
                    } else {
                        let q = normalize_into_gamma(e, gamma)?;
                        ineqs.push(q.negate());
                        ineqs.push(q);
                    }
                } else {
                    trial.pop();
                }
            }
        }
        let out = GammaCone::from_trusted(n, ineqs, gamma.positive_element());
        if out.cone != *cone {
            return Err(Error::Internal(
                "rebuilt Γ-cone differs from its polyhedral cone".into(),
            ));
        }
        Ok(out)
    }

    /// Canonical generators of the underlying cone, used for ordering.
    pub fn canonical_key(&self) -> (&[Vector], &[Vector]) {
        self.cone.canonical_key()
    }
}

fn ineq_size(q: &GammaIneq) -> i128 {
    q.m.iter().map(|&x| (x as i128).abs()).sum()
}

fn vanishes_on_span(v: &[Scalar], cone: &Cone) -> bool {
    let g = cone.generators();
    g.rays.iter().all(|r| linalg::dot(v, r).is_zero())
        && g.lines.iter().all(|l| linalg::dot(v, l).is_zero())
}

/// The candidate cuts out the same facet: it is valid on the cone and tight
/// exactly on the rays where `normal` is tight.
fn cuts_same_facet(q: &GammaIneq, normal: &[Scalar], cone: &Cone) -> bool {
    let v = q.vector();
    cone.rays().iter().all(|r| {
        let a = linalg::dot(&v, r);
        let b = linalg::dot(normal, r);
        !a.is_negative() && (a.is_zero() == b.is_zero())
    })
}

/// Rescale a normal `(m, c)` with rational direction `m` so that `m` is
/// integral and `c ∈ Γ`.
pub(crate) fn normalize_into_gamma(normal: &[Scalar], gamma: &ValueGroup) -> Result<GammaIneq> {
    let n = normal.len() - 1;
    let m = &normal[..n];
    let Some(lead) = m.iter().find(|x| !x.is_zero()) else {
        return Err(Error::domain("normal has no lattice part"));
    };
    let lead = lead.abs();
    let scaled = linalg::scale(normal, &lead.recip());
    if !scaled[..n].iter().all(Scalar::is_rational) {
        return Err(Error::domain(format!(
            "normal {} has no rational direction",
            fmt_vector(normal)
        )));
    }
    // scaled[..n] is rational; make it primitive integral
    let prim = linalg::canonical_direction(&scaled[..n]);
    let i = prim.iter().position(|x| !x.is_zero()).expect("nonzero");
    let k = &prim[i] / &scaled[i];
    let mut c = &scaled[n] * &k;
    let mult = gamma
        .multiplier_into(&c)?
        .ok_or_else(|| Error::GammaViolation { value: Box::new(c.clone()) })?;
    let mult_s = Scalar::from_bigint(mult);
    c = &c * &mult_s;
    let m = prim
        .iter()
        .map(|x| {
            (x * &mult_s)
                .to_i64()
                .ok_or_else(|| Error::Overflow(x.to_string()))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(GammaIneq::new(m, c))
}

pub fn fmt_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl PartialEq for GammaCone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cone == other.cone
    }
}

impl Eq for GammaCone {}

impl fmt::Debug for GammaCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaCone(n={}, {:?})", self.n, self.cone)
    }
}

/// `σ_1` local cone at a vertex.
pub fn local_cone(slice: &Polyhedron, w: &[Scalar]) -> Result<Cone> {
    slice.local_cone(w)
}
