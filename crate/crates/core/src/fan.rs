//! Γ-admissible fans: validation, completeness, refinement and completion.

use std::collections::HashMap;
use std::fmt;

use crate::exec::{index_pairs, Exec};
use crate::gamma_cone::{fmt_vector, normalize_into_gamma, t_axis, GammaCone, GammaIneq, ValuationMode};
use crate::kernel::{Scalar, ValueGroup};
use crate::polyhedral::{linalg, Cone, Vector};
use crate::{Error, Result};

/// A fan stored by its maximal cones, in canonical order.
#[derive(Clone)]
pub struct GammaFan {
    n: usize,
    gamma: ValueGroup,
    mode: ValuationMode,
    cones: Vec<GammaCone>,
}

impl GammaFan {
    /// Builds a fan from cones, which must be Γ-admissible. Cones that are
    /// faces of other listed cones are absorbed. The fan axiom is not checked
    /// here; see [`GammaFan::validate`].
    pub fn new(gamma: ValueGroup, mode: ValuationMode, n: usize, cones: Vec<GammaCone>) -> Result<Self> {
        if cones.is_empty() {
            return Err(Error::domain("no cones"));
        }
        for (i, c) in cones.iter().enumerate() {
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.n(),
                });
            }
            if let Some(v) = c.lineality_certificate() {
                return Err(Error::NotAdmissible {
                    index: i,
                    certificate: fmt_vector(&v),
                });
            }
        }
        Ok(Self::from_trusted(gamma, mode, n, cones))
    }

    pub(crate) fn from_trusted(gamma: ValueGroup, mode: ValuationMode, n: usize, cones: Vec<GammaCone>) -> Self {
        let mut keep: Vec<GammaCone> = Vec::new();
        for (i, c) in cones.iter().enumerate() {
            let absorbed = cones.iter().enumerate().any(|(j, d)| {
                j != i && (c.cone() != d.cone() || j < i) && c.is_face_of(d)
            });
            if !absorbed {
                keep.push(c.normalized());
            }
        }
        keep.sort_by(|a, b| a.inequalities().cmp(b.inequalities()).then_with(|| a.canonical_key().cmp(&b.canonical_key())));
        GammaFan {
            n,
            gamma,
            mode,
            cones: keep,
        }
    }

    /// The face fan of one cone.
    pub fn from_cone(gamma: ValueGroup, mode: ValuationMode, cone: GammaCone) -> Result<Self> {
        let n = cone.n();
        Self::new(gamma, mode, n, vec![cone])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &ValueGroup {
        &self.gamma
    }

    pub fn mode(&self) -> ValuationMode {
        self.mode
    }

    /// Maximal cones.
    pub fn cones(&self) -> &[GammaCone] {
        &self.cones
    }

    /// Every cone of the fan, largest dimension first, without repetitions.
    pub fn all_cones(&self) -> Vec<GammaCone> {
        let mut out: Vec<GammaCone> = Vec::new();
        for c in &self.cones {
            for f in c.faces() {
                if !out.iter().any(|g| g == &f) {
                    out.push(f);
                }
            }
        }
        out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.canonical_key().cmp(&b.canonical_key())));
        out
    }

    pub fn has_cone(&self, cone: &GammaCone) -> bool {
        self.cones.iter().any(|c| c == cone || cone.is_face_of(c))
    }

    /// Whether every cone of `other` is a cone of this fan.
    pub fn contains_subfan(&self, other: &GammaFan) -> bool {
        other.cones.iter().all(|c| self.has_cone(c))
    }

    pub fn support_contains(&self, x: &[Scalar]) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    /// First pair of maximal cones whose intersection is not a face of both.
    pub fn validate(&self) -> Option<(usize, usize)> {
        self.validate_with(Exec::default())
    }

    pub fn validate_with(&self, exec: Exec) -> Option<(usize, usize)> {
        let pairs = index_pairs(self.cones.len());
        exec.find_map_first(&pairs, |&(i, j)| {
            (!meet_in_face(&self.cones[i], &self.cones[j])).then_some((i, j))
        })
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_none()
    }

    /// Whether the support is all of `N_ℝ × ℝ₊`. Errors on an invalid fan.
    pub fn is_complete(&self) -> Result<bool> {
        self.is_complete_with(Exec::default())
    }

    pub fn is_complete_with(&self, exec: Exec) -> Result<bool> {
        if let Some((i, j)) = self.validate_with(exec) {
            return Err(Error::InvalidFan(i, j));
        }
        Ok(self.is_complete_unchecked(exec))
    }

    /// Completeness for a fan already known to be valid.
    fn is_complete_unchecked(&self, exec: Exec) -> bool {
        let full = self.n + 1;
        if self.cones.is_empty() || self.cones.iter().any(|c| c.dim() != full) {
            return false;
        }
        let incidence = facet_incidence(&self.cones, exec);
        if incidence.values().any(|owners| owners.len() != 2) {
            return false;
        }
        // connectivity of the dual graph
        let mut parent: Vec<usize> = (0..self.cones.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for owners in incidence.values() {
            let (a, b) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.cones.len()).all(|i| find(&mut parent, i) == root)
    }

    /// The fan cut out by every hyperplane carrying an inequality of `F`:
    /// complete, and each cone of `F` is a union of its cones.
    pub fn refine_to_complete(&self) -> GammaFan {
        self.refine_to_complete_with(Exec::default())
    }

    pub fn refine_to_complete_with(&self, exec: Exec) -> GammaFan {
        let cells = arrangement_cells(&self.gamma, self.n, &self.hyperplanes(), exec);
        GammaFan::from_trusted(self.gamma.clone(), self.mode, self.n, cells)
    }

    /// Hyperplanes of all stored inequalities, one representative per line.
    fn hyperplanes(&self) -> Vec<GammaIneq> {
        let mut seen: Vec<Vector> = Vec::new();
        let mut out = Vec::new();
        for c in &self.cones {
            for q in c.inequalities() {
                let key = linalg::canonical_line(&q.vector());
                if linalg::positively_parallel(&key, &t_axis(self.n))
                    || linalg::positively_parallel(&linalg::neg(&key), &t_axis(self.n))
                {
                    continue;
                }
                if !seen.contains(&key) {
                    seen.push(key);
                    out.push(q.clone());
                }
            }
        }
        // pad with coordinate hyperplanes until the normals span, so cells are pointed
        let mut span: Vec<Vector> = out.iter().map(GammaIneq::vector).collect();
        span.push(t_axis(self.n));
        for i in 0..self.n {
            let r = linalg::rank(&span, self.n + 1);
            if r == self.n + 1 {
                break;
            }
            let mut m = vec![0; self.n];
            m[i] = 1;
            let q = GammaIneq::new(m, Scalar::zero());
            span.push(q.vector());
            if linalg::rank(&span, self.n + 1) > r {
                out.push(q);
            } else {
                span.pop();
            }
        }
        out
    }

    /// A complete fan containing this one as a subfan.
    pub fn complete_extension(&self) -> Result<GammaFan> {
        self.complete_extension_with(Exec::default())
    }

    pub fn complete_extension_with(&self, exec: Exec) -> Result<GammaFan> {
        if let Some((i, j)) = self.validate_with(exec) {
            return Err(Error::InvalidFan(i, j));
        }
        if self.is_complete_unchecked(exec) {
            return Ok(self.clone());
        }
        if let Some(star) = self.star_completion(exec) {
            if self.certify(&star, exec).is_ok() {
                return Ok(star);
            }
        }
        let merged = self.merge_completion(exec);
        self.certify(&merged, exec)?;
        Ok(merged)
    }

    fn certify(&self, out: &GammaFan, exec: Exec) -> Result<()> {
        if let Some(pair) = out.validate_with(exec) {
            let mut conflicts = out.conflicts(exec);
            if conflicts.is_empty() {
                conflicts.push(pair);
            }
            conflicts.truncate(64);
            return Err(Error::ExtensionFailure { conflicts });
        }
        if !out.is_complete_unchecked(exec) || !out.contains_subfan(self) {
            return Err(Error::ExtensionFailure { conflicts: Vec::new() });
        }
        Ok(())
    }

    /// Every violating pair.
    pub fn conflicts(&self, exec: Exec) -> Vec<(usize, usize)> {
        let pairs = index_pairs(self.cones.len());
        let ok = exec.map(&pairs, |&(i, j)| meet_in_face(&self.cones[i], &self.cones[j]));
        pairs.into_iter().zip(ok).filter(|(_, ok)| !ok).map(|(p, _)| p).collect()
    }

    /// Rays of all cones, deduplicated.
    fn all_rays(&self) -> Vec<Vector> {
        let mut rays: Vec<Vector> = self.cones.iter().flat_map(|c| c.cone().rays().to_vec()).collect();
        rays.sort();
        rays.dedup();
        rays
    }

    /// Star construction from `q = −p`, `p` interior to a convex,
    /// full-dimensional support. `None` when the support is not of that kind
    /// or a new cone cannot be described over Γ.
    fn star_completion(&self, exec: Exec) -> Option<GammaFan> {
        let full = self.n + 1;
        if self.cones.iter().any(|c| c.dim() != full) {
            return None;
        }
        let rays = self.all_rays();
        let hull = Cone::from_generators(full, rays.clone(), vec![]).ok()?;
        let incidence = facet_incidence(&self.cones, exec);
        let mut boundary: Vec<(Vector, Cone)> = Vec::new();
        for (facet, owners) in &incidence {
            if owners.len() != 1 {
                continue;
            }
            let owner = &self.cones[owners[0]];
            let normal = owner
                .cone()
                .facet_normals()
                .iter()
                .find(|f| facet.rays().iter().all(|r| linalg::dot(f, r).is_zero()))?
                .clone();
            if rays.iter().any(|r| linalg::dot(&normal, r).is_negative()) {
                return None; // a boundary facet inside the hull: support not convex
            }
            boundary.push((normal, facet.clone()));
        }
        boundary.sort_by(|a, b| a.1.canonical_key().cmp(&b.1.canonical_key()));
        // p interior to the hull with rational coordinates when possible
        let p = rational_interior_point(&hull);
        let q = linalg::neg(&p);
        let mut candidates: Vec<GammaIneq> = Vec::new();
        for c in &self.cones {
            for ineq in c.inequalities() {
                candidates.push(ineq.clone());
                candidates.push(ineq.negate());
            }
        }
        let tv = t_axis(self.n);
        let made: Vec<Option<GammaCone>> = exec.map(&boundary, |(_, facet)| {
            if facet.rays().iter().all(|r| r[self.n].is_zero()) {
                return Some(None);
            }
            let mut gens = facet.rays().to_vec();
            gens.push(q.clone());
            let raw = Cone::from_generators(full, gens, vec![]).ok()?;
            // cut by t >= 0 and describe with Γ offsets
            let mut ineqs: Vec<GammaIneq> = Vec::new();
            for f in raw.facet_normals() {
                if linalg::positively_parallel(f, &tv) {
                    continue;
                }
                let found = candidates
                    .iter()
                    .find(|c| linalg::positively_parallel(&c.vector(), f))
                    .cloned();
                match found {
                    Some(c) => ineqs.push(c),
                    None => ineqs.push(normalize_into_gamma(f, &self.gamma).ok()?),
                }
            }
            let cell = GammaCone::from_trusted(self.n, ineqs, self.gamma.positive_element());
            if !cell.is_admissible() || cell.dim() != full {
                return None;
            }
            Some(Some(cell))
        })
        .into_iter()
        .collect::<Option<Vec<_>>>()?;
        let mut cones = self.cones.clone();
        cones.extend(made.into_iter().flatten());
        Some(GammaFan::from_trusted(self.gamma.clone(), self.mode, self.n, cones))
    }

    /// General path: arrangement cells outside the support, greedily merged.
    fn merge_completion(&self, exec: Exec) -> GammaFan {
        let cells = arrangement_cells(&self.gamma, self.n, &self.hyperplanes(), exec);
        let exterior: Vec<GammaCone> = exec
            .map(&cells, |c| (!self.support_contains(&c.cone().relint_point())).then(|| c.clone()))
            .into_iter()
            .flatten()
            .collect();
        let mut ext = exterior;
        loop {
            let mut merged_any = false;
            'search: for i in 0..ext.len() {
                for j in i + 1..ext.len() {
                    let Some(m) = try_merge(&ext[i], &ext[j]) else {
                        continue;
                    };
                    let before: Vec<bool> = self
                        .cones
                        .iter()
                        .chain(ext.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, c)| c))
                        .map(|c| meet_in_face(c, &ext[i]) && meet_in_face(c, &ext[j]))
                        .collect();
                    let others: Vec<&GammaCone> = self
                        .cones
                        .iter()
                        .chain(ext.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, c)| c))
                        .collect();
                    let after = exec.map(&others, |c| meet_in_face(c, &m));
                    if after.iter().zip(&before).any(|(a, b)| *b && !*a) {
                        continue;
                    }
                    ext.remove(j);
                    ext[i] = m;
                    merged_any = true;
                    break 'search;
                }
            }
            if !merged_any {
                break;
            }
        }
        let mut cones = self.cones.clone();
        cones.extend(ext);
        GammaFan::from_trusted(self.gamma.clone(), self.mode, self.n, cones)
    }
}

/// Whether `a ∩ b` is a face of both.
fn meet_in_face(a: &GammaCone, b: &GammaCone) -> bool {
    let i = a.cone().intersect(b.cone());
    i.is_face_of(a.cone()) && i.is_face_of(b.cone())
}

/// Non-boundary facets of the given cones and the cones owning them.
fn facet_incidence(cones: &[GammaCone], exec: Exec) -> HashMap<Cone, Vec<usize>> {
    let n = cones.first().map_or(0, GammaCone::n);
    let per_cone: Vec<Vec<Cone>> = exec.map(cones, |c| {
        c.cone()
            .facet_cones()
            .into_iter()
            .map(|(_, f)| f)
            .filter(|f| !f.rays().iter().all(|r| r[n].is_zero()))
            .collect()
    });
    let mut map: HashMap<Cone, Vec<usize>> = HashMap::new();
    for (i, facets) in per_cone.into_iter().enumerate() {
        for f in facets {
            map.entry(f).or_default().push(i);
        }
    }
    map
}

/// Cells of `t >= 0` cut by the hyperplanes of `planes`.
fn arrangement_cells(gamma: &ValueGroup, n: usize, planes: &[GammaIneq], exec: Exec) -> Vec<GammaCone> {
    let mut cells = vec![GammaCone::upper_half_space(gamma, n)];
    for q in planes {
        let v = q.vector();
        cells = exec.flat_map(&cells, |cell| {
            if splits(cell.cone(), &v) {
                let mut pos = cell.inequalities().to_vec();
                pos.push(q.clone());
                let mut neg = cell.inequalities().to_vec();
                neg.push(q.negate());
                vec![cell.derive(pos), cell.derive(neg)]
            } else {
                vec![cell.clone()]
            }
        });
    }
    cells
}

/// Whether the hyperplane `v·x = 0` meets the interior of the cone.
fn splits(cone: &Cone, v: &[Scalar]) -> bool {
    if cone.lineality().iter().any(|l| !linalg::dot(v, l).is_zero()) {
        return true;
    }
    let vals: Vec<Scalar> = cone.rays().iter().map(|r| linalg::dot(v, r)).collect();
    vals.iter().any(Scalar::is_positive) && vals.iter().any(Scalar::is_negative)
}

/// Merge two full-dimensional cones sharing a facet when their union is a
/// pointed convex cone.
fn try_merge(a: &GammaCone, b: &GammaCone) -> Option<GammaCone> {
    let fa = a.cone().facet_cones();
    let fb = b.cone().facet_cones();
    let (normal, _) = fa.iter().find(|(_, f)| fb.iter().any(|(_, g)| g == f))?;
    let mut rays = a.cone().rays().to_vec();
    rays.extend(b.cone().rays().iter().cloned());
    let hull = Cone::from_generators(a.cone().ambient_dim(), rays, vec![]).ok()?;
    if !hull.is_pointed() {
        return None;
    }
    let upper = hull.with_inequalities([normal.clone()]);
    let lower = hull.with_inequalities([linalg::neg(normal)]);
    if upper != *a.cone() || lower != *b.cone() {
        return None;
    }
    let valid: Vec<GammaIneq> = a
        .inequalities()
        .iter()
        .chain(b.inequalities())
        .filter(|q| hull.rays().iter().all(|r| !q.eval(r).is_negative()))
        .cloned()
        .collect();
    let merged = a.derive(valid);
    (merged.cone() == &hull).then_some(merged)
}

/// An interior point of a full-dimensional cone, rational when the rays are.
fn rational_interior_point(hull: &Cone) -> Vector {
    let mut p = linalg::zeros(hull.ambient_dim());
    for r in hull.rays() {
        p = linalg::add(&p, r);
    }
    p
}

impl PartialEq for GammaFan {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n || self.cones.len() != other.cones.len() {
            return false;
        }
        let mut a: Vec<_> = self.cones.iter().map(GammaCone::canonical_key).collect();
        let mut b: Vec<_> = other.cones.iter().map(GammaCone::canonical_key).collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for GammaFan {}

impl fmt::Debug for GammaFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaFan")
            .field("n", &self.n)
            .field("cones", &self.cones)
            .finish()
    }
}

/// Free-function forms of the fan operations.
pub fn validate_fan(fan: &GammaFan) -> Option<(usize, usize)> {
    fan.validate()
}

pub fn is_complete(fan: &GammaFan) -> Result<bool> {
    fan.is_complete()
}

pub fn refine_to_complete(fan: &GammaFan) -> GammaFan {
    fan.refine_to_complete()
}

pub fn complete_extension(fan: &GammaFan) -> Result<GammaFan> {
    fan.complete_extension()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gz() -> ValueGroup {
        ValueGroup::integers()
    }

    fn q(m: &[i64], c: i64) -> GammaIneq {
        GammaIneq::new(m.to_vec(), Scalar::from_int(c))
    }

    fn cone(ineqs: &[GammaIneq], n: usize) -> GammaCone {
        GammaCone::new(&gz(), n, ineqs.to_vec()).unwrap()
    }

    fn fan(cones: Vec<GammaCone>) -> GammaFan {
        let n = cones[0].n();
        GammaFan::new(gz(), ValuationMode::Dense, n, cones).unwrap()
    }

    #[test]
    fn complete_fixture() {
        let f = fan(vec![
            cone(&[q(&[1], -1)], 1),
            cone(&[q(&[1], 0), q(&[-1], 1)], 1),
            cone(&[q(&[-1], 0), q(&[1], 1)], 1),
            cone(&[q(&[-1], -1)], 1),
        ]);
        assert_eq!(f.validate(), None);
        assert!(f.is_complete().unwrap());
        let mut cones = f.cones().to_vec();
        cones.remove(1);
        let g = fan(cones);
        assert!(!g.is_complete().unwrap());
        assert_eq!(g.complete_extension().unwrap().cones().len(), 4);
    }

    #[test]
    fn overlapping_wedges_are_invalid() {
        // cone{(1,0),(1,2)} and cone{(1,1),(0,1)} in the w-plane, times t >= 0
        let a = cone(&[q(&[0, 1], 0), q(&[2, -1], 0)], 2);
        let b = cone(&[q(&[1, 0], 0), q(&[-1, 1], 0)], 2);
        let f = fan(vec![a, b]);
        assert_eq!(f.validate(), Some((0, 1)));
        assert!(matches!(f.is_complete(), Err(Error::InvalidFan(0, 1))));
    }

    #[test]
    fn single_cone_is_incomplete_and_extends() {
        let s = cone(&[q(&[1, 0], 0), q(&[0, 1], 0), q(&[-1, -1], 2)], 2);
        let f = GammaFan::from_cone(gz(), ValuationMode::Dense, s.clone()).unwrap();
        assert!(f.is_valid());
        assert!(!f.is_complete().unwrap());
        let r = f.refine_to_complete();
        assert!(r.is_complete().unwrap());
        let e = f.complete_extension().unwrap();
        assert!(e.is_complete().unwrap());
        assert!(e.has_cone(&s));
    }

    #[test]
    fn quadrant_slab_refinement() {
        let f = fan(vec![cone(&[q(&[1], 0)], 1)]);
        let r = f.refine_to_complete();
        assert_eq!(r.cones().len(), 2);
        assert!(r.is_complete().unwrap());
    }

    #[test]
    fn ray_extension_n1() {
        // faces of cone{(1,0),(1,1)}: w >= t
        let f = fan(vec![cone(&[q(&[1], -1)], 1)]);
        let e = f.complete_extension().unwrap();
        assert!(e.is_complete().unwrap());
        assert!(e.contains_subfan(&f));
    }

    #[test]
    fn policies_agree() {
        let s = cone(&[q(&[1, 0], 0), q(&[0, 1], 0), q(&[-1, -1], 2)], 2);
        let f = GammaFan::from_cone(gz(), ValuationMode::Dense, s).unwrap();
        let a = f.refine_to_complete_with(Exec::Sequential);
        let b = f.refine_to_complete_with(Exec::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.is_complete_with(Exec::Sequential), a.is_complete_with(Exec::Parallel));
    }
}
