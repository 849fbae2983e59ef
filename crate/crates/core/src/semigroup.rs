//! Hilbert bases, algebra generators of `K[M]^σ`, and saturation in `M × Γ`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exec::Exec;
use crate::gamma_cone::{fmt_vector, GammaCone, ValuationMode};
use crate::kernel::{intmat, IntMatrix, Scalar, ValueGroup};
use crate::polyhedral::{linalg, Cone, Vector};
use crate::{Error, Result};

/// `(u, γ)` standing for a monomial `a·χ^u` with `v(a) = γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialDatum {
    pub u: Vec<i64>,
    pub gamma: Scalar,
}

impl MonomialDatum {
    pub fn new(u: Vec<i64>, gamma: Scalar) -> Self {
        MonomialDatum { u, gamma }
    }

    pub fn vector(&self) -> Vector {
        let mut v: Vector = self.u.iter().map(|&x| Scalar::from_int(x)).collect();
        v.push(self.gamma.clone());
        v
    }

    pub fn add(&self, other: &MonomialDatum) -> MonomialDatum {
        MonomialDatum {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            gamma: &self.gamma + &other.gamma,
        }
    }
}

impl fmt::Display for MonomialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let us: Vec<String> = self.u.iter().map(i64::to_string).collect();
        write!(f, "{} | {}", us.join(" "), self.gamma)
    }
}

/// A finite set of monomial data, kept sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemigroupGens {
    n: usize,
    elements: Vec<MonomialDatum>,
}

impl SemigroupGens {
    pub fn new(gamma: &ValueGroup, n: usize, elements: Vec<MonomialDatum>) -> Result<Self> {
        for d in &elements {
            if d.u.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d.u.len(),
                });
            }
            if !gamma.contains(&d.gamma)? {
                return Err(Error::GammaViolation {
                    value: Box::new(d.gamma.clone()),
                });
            }
        }
        Ok(Self::from_trusted(n, elements))
    }

    pub(crate) fn from_trusted(n: usize, mut elements: Vec<MonomialDatum>) -> Self {
        elements.sort();
        elements.dedup();
        SemigroupGens { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[MonomialDatum] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `cone(S) + ℝ₊·(0, 1)`: the coefficient ring K° is always available.
    pub fn cone(&self) -> Cone {
        let mut rays: Vec<Vector> = self.elements.iter().map(MonomialDatum::vector).collect();
        rays.push(linalg::unit(self.n + 1, self.n));
        Cone::from_generators(self.n + 1, rays, vec![]).expect("consistent dimensions")
    }
}

fn to_i64_vec(v: &[Scalar]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::Overflow(format!("{x} is not a machine integer")))
        })
        .collect()
}

fn integral_rays(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    cone.rays()
        .iter()
        .map(|r| {
            if r.iter().all(Scalar::is_rational) {
                to_i64_vec(r)
            } else {
                Err(Error::domain(format!("cone is not rational: ray {}", fmt_vector(r))))
            }
        })
        .collect()
}

/// Triangulation of a pointed cone into simplicial cones on its rays.
fn triangulate(cone: &Cone) -> Vec<Vec<Vector>> {
    let rays = cone.rays();
    if rays.len() == cone.dim() {
        return vec![rays.to_vec()];
    }
    let apex = &rays[0];
    let mut out = Vec::new();
    for (normal, facet) in cone.facet_cones() {
        if linalg::dot(&normal, apex).is_zero() {
            continue;
        }
        for mut simplex in triangulate(&facet) {
            simplex.push(apex.clone());
            out.push(simplex);
        }
    }
    out
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Lattice points of the half-open parallelepiped spanned by linearly
/// independent integer vectors `gens`, relative to `span(gens) ∩ ℤ^k`.
fn parallelepiped_points(gens: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    let d = gens.len();
    if d == 0 {
        return Vec::new();
    }
    // basis of the saturated lattice span ∩ ℤ^k
    let basis: Vec<Vec<BigInt>> = if d == k {
        (0..k)
            .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect()
    } else {
        let orth = intmat::kernel_basis(&IntMatrix::from_rows(gens));
        intmat::kernel_basis(&IntMatrix::from_rows(&orth))
    };
    // T: coordinates of each generator in that basis (columns)
    let bt = IntMatrix::from_rows(&basis).transpose();
    let tcols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| intmat::solve_integer(&bt, g).expect("generator lies in its saturated span"))
        .collect();
    // λ = T⁻¹ e_i for each basis vector, over ℚ
    let tmat: Vec<Vector> = (0..d)
        .map(|r| (0..d).map(|c| Scalar::from_bigint(tcols[c][r].clone())).collect())
        .collect();
    let steps: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut aug: Vec<Vector> = tmat.clone();
            for (r, row) in aug.iter_mut().enumerate() {
                row.push(Scalar::from_int(i64::from(r == i)));
            }
            let (red, _) = linalg::rref(&aug, d);
            red.iter().map(|row| frac(row[d].rational_part())).collect()
        })
        .collect();
    let zero = vec![BigRational::zero(); d];
    let mut seen: HashSet<Vec<BigRational>> = HashSet::from([zero.clone()]);
    let mut queue: VecDeque<Vec<BigRational>> = VecDeque::from([zero]);
    while let Some(cur) = queue.pop_front() {
        for s in &steps {
            let next: Vec<BigRational> = cur.iter().zip(s).map(|(a, b)| frac(&(a + b))).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out = Vec::new();
    for lam in seen {
        if lam.iter().all(Zero::is_zero) {
            continue;
        }
        let mut p = vec![BigRational::zero(); k];
        for (l, g) in lam.iter().zip(gens) {
            for (pi, gi) in p.iter_mut().zip(g) {
                *pi += l * BigRational::from_integer(gi.clone());
            }
        }
        out.push(p.into_iter().map(|x| x.to_integer()).collect());
    }
    out
}

/// Minimal generating set of `C ∩ ℤ^k` for a pointed rational cone `C`.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed(
            "the Hilbert basis of a cone with lineality is not unique".into(),
        ));
    }
    let k = cone.ambient_dim();
    let rays = integral_rays(cone)?;
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let mut cands: HashSet<Vec<i64>> = rays.into_iter().collect();
    for simplex in triangulate(cone) {
        let gens: Vec<Vec<BigInt>> = simplex
            .iter()
            .map(|v| v.iter().map(|x| x.to_bigint().expect("integral ray")).collect())
            .collect();
        for p in parallelepiped_points(&gens, k) {
            let p: Vec<i64> = p
                .iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
                .collect::<Result<_>>()?;
            cands.insert(p);
        }
    }
    let cands: Vec<Vec<i64>> = cands.into_iter().collect();
    let as_vec = |v: &[i64]| -> Vector { v.iter().map(|&x| Scalar::from_int(x)).collect() };
    let mut basis: Vec<Vec<i64>> = cands
        .iter()
        .filter(|x| {
            !cands.iter().any(|y| {
                y != *x && {
                    let diff: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                    diff.iter().any(|&v| v != 0) && cone.contains(&as_vec(&diff))
                }
            })
        })
        .cloned()
        .collect();
    basis.sort();
    Ok(basis)
}

/// Generators of `C ∩ ℤ^k` for any rational cone: ± a basis of the lineality
/// lattice and lifts of the Hilbert basis of the pointed quotient.
pub fn semigroup_generators(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    if cone.is_pointed() {
        return hilbert_basis(cone);
    }
    let k = cone.ambient_dim();
    let lines: Vec<Vec<BigInt>> = cone
        .lineality()
        .iter()
        .map(|l| {
            if l.iter().all(Scalar::is_rational) {
                Ok(l.iter().map(|x| x.to_bigint().expect("canonical rational line")).collect())
            } else {
                Err(Error::domain(format!("cone is not rational: line {}", fmt_vector(l))))
            }
        })
        .collect::<Result<_>>()?;
    // x = V y; the lineality lattice is {y_1 = … = y_r = 0}
    let orth = intmat::kernel_basis(&IntMatrix::from_rows(&lines));
    let r = orth.len();
    let v = if r == 0 {
        IntMatrix::identity(k)
    } else {
        intmat::snf(&IntMatrix::from_rows(&orth)).2
    };
    let vinv_rows: Vec<Vec<BigInt>> = {
        let cols: Vec<Vec<BigInt>> = (0..k)
            .map(|j| {
                let e: Vec<BigInt> = (0..k).map(|i| BigInt::from(u8::from(i == j))).collect();
                intmat::solve_integer(&v, &e).expect("unimodular")
            })
            .collect();
        (0..k).map(|i| (0..k).map(|j| cols[j][i].clone()).collect()).collect()
    };
    let project = |x: &[Scalar]| -> Vector {
        (0..r)
            .map(|i| {
                vinv_rows[i]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| &Scalar::from_bigint(a.clone()) * b)
                    .sum()
            })
            .collect()
    };
    let qrays: Vec<Vector> = cone.rays().iter().map(|x| project(x)).collect();
    let quotient = Cone::from_generators(r, qrays, vec![])?;
    let mut out: Vec<Vec<i64>> = Vec::new();
    for j in r..k {
        let col: Vec<i64> = (0..k)
            .map(|i| v[(i, j)].to_i64().ok_or_else(|| Error::Overflow(v[(i, j)].to_string())))
            .collect::<Result<_>>()?;
        out.push(col.iter().map(|x| -x).collect());
        out.push(col);
    }
    for z in hilbert_basis(&quotient)? {
        let lift: Vec<i64> = (0..k)
            .map(|i| {
                let s: BigInt = (0..r).map(|j| &v[(i, j)] * BigInt::from(z[j])).sum();
                s.to_i64().ok_or_else(|| Error::Overflow(s.to_string()))
            })
            .collect::<Result<_>>()?;
        out.push(lift);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Generators of `K[M]^σ`: for each vertex `w_i` of `σ_1`, the generators `u`
/// of `dual(LC_{w_i}(σ_1)) ∩ M` paired with `γ = −⟨u, w_i⟩`.
pub fn algebra_generators(sigma: &GammaCone, gamma: &ValueGroup, mode: ValuationMode) -> Result<SemigroupGens> {
    algebra_generators_with(sigma, gamma, mode, Exec::default())
}

pub fn algebra_generators_with(
    sigma: &GammaCone,
    gamma: &ValueGroup,
    mode: ValuationMode,
    exec: Exec,
) -> Result<SemigroupGens> {
    let (ok, bad) = sigma.finite_type_check(gamma, mode)?;
    if !ok {
        return Err(Error::NotFiniteType {
            vertex: fmt_vector(&bad[0]),
        });
    }
    let p = sigma.level_one();
    let vertices = p.vertices();
    if vertices.is_empty() {
        return Err(Error::domain("the level-1 slice is empty"));
    }
    let per_vertex = exec.map(&vertices, |w| -> Result<Vec<MonomialDatum>> {
        let lc = p.local_cone(w)?;
        let mut out = Vec::new();
        for u in semigroup_generators(&lc.dual())? {
            let uv: Vector = u.iter().map(|&x| Scalar::from_int(x)).collect();
            let g = -linalg::dot(&uv, w);
            if !gamma.contains(&g)? {
                return Err(Error::NotFiniteType {
                    vertex: fmt_vector(w),
                });
            }
            out.push(MonomialDatum::new(u, g));
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for r in per_vertex {
        all.extend(r?);
    }
    Ok(SemigroupGens::from_trusted(sigma.n(), all))
}

/// Drop generators that are sums of others up to a nonnegative Γ shift.
pub fn minimize_generators(gens: &SemigroupGens) -> SemigroupGens {
    let els = gens.elements();
    let dominated = |x: &MonomialDatum, y: &MonomialDatum| x.u == y.u && x.gamma >= y.gamma;
    let mut keep = Vec::new();
    for (i, x) in els.iter().enumerate() {
        let others = || els.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, y)| y);
        let redundant = others().any(|y| dominated(x, y) && (x != y))
            || others().any(|a| others().any(|b| dominated(x, &a.add(b))));
        if !redundant {
            keep.push(x.clone());
        }
    }
    SemigroupGens::from_trusted(gens.n(), keep)
}

/// `(u, γ) ∈ σ^∨`: `⟨u, w⟩ + γ·t >= 0` on all of σ.
pub fn in_weight_algebra(sigma: &GammaCone, d: &MonomialDatum) -> bool {
    let v = d.vector();
    let g = sigma.cone().generators();
    g.rays.iter().all(|r| !linalg::dot(&v, r).is_negative())
        && g.lines.iter().all(|l| linalg::dot(&v, l).is_zero())
}

/// Membership in the saturation `cone(S) ∩ (M × Γ)`.
pub fn saturation_membership(gens: &SemigroupGens, d: &MonomialDatum, gamma: &ValueGroup) -> Result<bool> {
    if d.u.len() != gens.n() {
        return Err(Error::DimensionMismatch {
            expected: gens.n(),
            found: d.u.len(),
        });
    }
    Ok(gamma.contains(&d.gamma)? && gens.cone().contains(&d.vector()))
}

/// Bounded saturation check. For every `u` in the box `[−B, B]^n` over which
/// the saturation has elements, compares the least reachable `γ` of the
/// semigroup `ℕS + {0} × Γ₊` (searched over `u` in `[−3B, 3B]^n`) against
/// the least `γ ∈ Γ` admitted by the cone. Returns a witness in the
/// saturation but outside the semigroup when one is found.
pub fn is_saturated_bounded(
    gens: &SemigroupGens,
    bound: u32,
    gamma: &ValueGroup,
) -> Result<(bool, Option<MonomialDatum>)> {
    let n = gens.n();
    let b = i64::from(bound);
    let cone = gens.cone();
    let facets = cone.facet_description();
    let reach = min_costs(gens, 3 * b)?;
    let mut u = vec![-b; n];
    loop {
        let uv: Vector = u.iter().map(|&x| Scalar::from_int(x)).collect();
        if let Some(lower) = gamma_floor(facets, &uv) {
            let best = reach.get(&u);
            match lower {
                // the saturation contains (u, γ) for all γ ∈ Γ
                None => {
                    if !matches!(best, Some(Cost::Unbounded)) {
                        let witness = best_gamma_below(gamma, best);
                        return Ok((false, Some(MonomialDatum::new(u, witness))));
                    }
                }
                Some(gstar) => {
                    let threshold = least_gamma_at_least(gamma, &gstar);
                    let witness = match (best, threshold) {
                        (Some(Cost::Unbounded), _) => None,
                        (None, Some(t)) => Some(t),
                        (None, None) => gamma.element_between(&gstar, None),
                        (Some(Cost::Finite(mu)), Some(t)) => (*mu > t).then_some(t),
                        (Some(Cost::Finite(mu)), None) => {
                            if *mu > gstar {
                                gamma.element_between(&gstar, Some(mu))
                            } else {
                                None
                            }
                        }
                    };
                    if let Some(g) = witness {
                        return Ok((false, Some(MonomialDatum::new(u, g))));
                    }
                }
            }
        }
        // next u in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok((true, None));
            }
            i -= 1;
            if u[i] < b {
                u[i] += 1;
                for x in u.iter_mut().skip(i + 1) {
                    *x = -b;
                }
                break;
            }
        }
    }
}

fn best_gamma_below(gamma: &ValueGroup, best: Option<&Cost>) -> Scalar {
    let top = match best {
        Some(Cost::Finite(mu)) => mu.clone(),
        _ => Scalar::zero(),
    };
    &top - &gamma.positive_element()
}

/// For `u`, the infimum of `γ` with `(u, γ)` in the cone: `None` outside the
/// projection, `Some(None)` when unbounded below.
fn gamma_floor(f: &crate::polyhedral::Facets, u: &[Scalar]) -> Option<Option<Scalar>> {
    let n = u.len();
    let part = |a: &Vector| linalg::dot(&a[..n], u);
    if f.equations.iter().any(|e| !part(e).is_zero()) {
        return None;
    }
    let mut lower: Option<Scalar> = None;
    for a in &f.facets {
        let au = part(a);
        if a[n].is_zero() {
            if au.is_negative() {
                return None;
            }
        } else {
            let g = -(&au / &a[n]);
            if lower.as_ref().is_none_or(|l| g > *l) {
                lower = Some(g);
            }
        }
    }
    Some(lower)
}

/// Least element of Γ that is `>= x`, when it exists.
fn least_gamma_at_least(gamma: &ValueGroup, x: &Scalar) -> Option<Scalar> {
    if gamma.contains(x).unwrap_or(false) {
        return Some(x.clone());
    }
    let g = gamma.discrete_generator()?;
    Some(Scalar::from_bigint((x / &g).ceil()) * &g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cost {
    Finite(Scalar),
    Unbounded,
}

/// Least `γ` of `ℕS`-combinations reaching each `u` in `[−R, R]^n`.
fn min_costs(gens: &SemigroupGens, r: i64) -> Result<HashMap<Vec<i64>, Cost>> {
    let n = gens.n();
    let in_box = |u: &[i64]| u.iter().all(|x| x.abs() <= r);
    let steps = gens.elements();
    // potential y with γ_s + ⟨y, u_s⟩ >= 0 from an interior point of the dual
    let dual = gens.cone().dual();
    let p = dual.relint_point();
    let mut out: HashMap<Vec<i64>, Cost> = HashMap::new();
    if p[n].is_zero() {
        // (0, −1) is in the cone, so ℕS reaches (0, γ) for some γ < 0 and
        // every reachable u carries all of Γ
        let start = vec![0; n];
        let mut queue = VecDeque::from([start.clone()]);
        out.insert(start, Cost::Unbounded);
        while let Some(cur) = queue.pop_front() {
            for s in steps {
                let next: Vec<i64> = cur.iter().zip(&s.u).map(|(a, b)| a + b).collect();
                if in_box(&next) && !out.contains_key(&next) {
                    out.insert(next.clone(), Cost::Unbounded);
                    queue.push_back(next);
                }
            }
        }
        return Ok(out);
    }
    let y: Vector = linalg::scale(&p[..n], &p[n].recip());
    let pot = |u: &[i64]| -> Scalar {
        let uv: Vector = u.iter().map(|&x| Scalar::from_int(x)).collect();
        linalg::dot(&y, &uv)
    };
    let reduced: Vec<Scalar> = steps.iter().map(|s| &s.gamma + &pot(&s.u)).collect();
    let mut dist: HashMap<Vec<i64>, Scalar> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let start = vec![0; n];
    dist.insert(start.clone(), Scalar::zero());
    heap.push(Reverse((Scalar::zero(), start)));
    while let Some(Reverse((d, cur))) = heap.pop() {
        if dist.get(&cur).is_some_and(|best| *best < d) {
            continue;
        }
        for (s, c) in steps.iter().zip(&reduced) {
            let next: Vec<i64> = cur.iter().zip(&s.u).map(|(a, b)| a + b).collect();
            if !in_box(&next) {
                continue;
            }
            let nd = &d + c;
            if dist.get(&next).is_none_or(|old| nd < *old) {
                dist.insert(next.clone(), nd.clone());
                heap.push(Reverse((nd, next)));
            }
        }
    }
    for (u, d) in dist {
        let real = &d - &pot(&u);
        out.insert(u, Cost::Finite(real));
    }
    Ok(out)
}
