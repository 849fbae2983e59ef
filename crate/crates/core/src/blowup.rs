//! Invariant monomial ideals on an affine chart and the subdivisions they
//! induce: the normalized blow-up is modeled by the linearity domains of the
//! order function `(w, t) ↦ min_k ⟨u_k, w⟩ + γ_k·t` on the chart.

use crate::exec::Exec;
use crate::fan::GammaFan;
use crate::gamma_cone::{GammaCone, GammaIneq, ValuationMode};
use crate::kernel::{Scalar, ValueGroup};
use crate::polyhedral::linalg;
use crate::semigroup::{in_weight_algebra, MonomialDatum, SemigroupGens};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantIdeal {
    chart: GammaCone,
    generators: SemigroupGens,
}

impl InvariantIdeal {
    pub fn new(chart: GammaCone, generators: SemigroupGens) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::domain("an ideal needs at least one generator"));
        }
        if generators.n() != chart.n() {
            return Err(Error::DimensionMismatch {
                expected: chart.n(),
                found: generators.n(),
            });
        }
        if let Some(bad) = generators.elements().iter().find(|d| !in_weight_algebra(&chart, d)) {
            return Err(Error::domain(format!("generator {bad} is not a section over the chart")));
        }
        Ok(InvariantIdeal { chart, generators })
    }

    pub fn chart(&self) -> &GammaCone {
        &self.chart
    }

    pub fn generators(&self) -> &SemigroupGens {
        &self.generators
    }
}

/// The affine forms whose minimum is the order function.
pub fn order_function(ideal: &InvariantIdeal) -> Vec<MonomialDatum> {
    ideal.generators.elements().to_vec()
}

/// Value of the order function at `(w, t)`.
pub fn order_value(ideal: &InvariantIdeal, x: &[Scalar]) -> Scalar {
    ideal
        .generators
        .elements()
        .iter()
        .map(|d| linalg::dot(&d.vector(), x))
        .min()
        .expect("nonempty ideal")
}

/// Domain in the chart where generator `k` attains the order function.
fn domain_of(ideal: &InvariantIdeal, k: usize) -> GammaCone {
    let els = ideal.generators.elements();
    let mut ineqs: Vec<GammaIneq> = ideal.chart.inequalities().to_vec();
    for (j, d) in els.iter().enumerate() {
        if j != k {
            let m = d.u.iter().zip(&els[k].u).map(|(a, b)| a - b).collect();
            ineqs.push(GammaIneq::new(m, &d.gamma - &els[k].gamma));
        }
    }
    ideal.chart.derive(ineqs)
}

/// Linearity domains of the order function on the chart, each with the
/// generator indices attaining it.
pub fn blowup_cells(ideal: &InvariantIdeal) -> Vec<(Vec<usize>, GammaCone)> {
    blowup_cells_with(ideal, Exec::default())
}

pub fn blowup_cells_with(ideal: &InvariantIdeal, exec: Exec) -> Vec<(Vec<usize>, GammaCone)> {
    let top = ideal.chart.dim();
    let ks: Vec<usize> = (0..ideal.generators.len()).collect();
    let domains = exec.map(&ks, |&k| domain_of(ideal, k));
    let mut out: Vec<(Vec<usize>, GammaCone)> = Vec::new();
    for (k, dom) in domains.into_iter().enumerate() {
        if dom.dim() != top {
            continue;
        }
        match out.iter_mut().find(|(_, c)| c.cone() == dom.cone()) {
            Some((active, _)) => active.push(k),
            None => out.push((vec![k], dom)),
        }
    }
    out
}

/// The subdivision of the chart into linearity domains of the order function.
pub fn blowup_subdivision(ideal: &InvariantIdeal, gamma: &ValueGroup, mode: ValuationMode) -> Result<GammaFan> {
    let cones = blowup_cells(ideal).into_iter().map(|(_, c)| c).collect();
    GammaFan::new(gamma.clone(), mode, ideal.chart.n(), cones)
}

/// Whether the subdivision leaves every cone of `delta` intact, i.e. the order
/// function is linear on each of them. Cones of `delta` must be faces of the
/// chart.
pub fn is_u_admissible(ideal: &InvariantIdeal, delta: &[GammaCone]) -> Result<bool> {
    for (i, tau) in delta.iter().enumerate() {
        if !tau.is_face_of(&ideal.chart) {
            return Err(Error::NotAFace(format!("cone {i} of the subfan is not a face of the chart")));
        }
    }
    let els = ideal.generators.elements();
    Ok(delta.iter().all(|tau| {
        let g = tau.cone().generators();
        els.iter().any(|dk| {
            els.iter().all(|dj| {
                let diff = linalg::sub(&dj.vector(), &dk.vector());
                g.rays.iter().all(|r| !linalg::dot(&diff, r).is_negative())
                    && g.lines.iter().all(|l| linalg::dot(&diff, l).is_zero())
            })
        })
    }))
}

/// Generated by all pairwise sums of generators.
pub fn product_ideal(a: &InvariantIdeal, b: &InvariantIdeal) -> Result<InvariantIdeal> {
    if a.chart.cone() != b.chart.cone() {
        return Err(Error::domain("ideals live on different charts"));
    }
    let mut gens = Vec::new();
    for x in a.generators.elements() {
        for y in b.generators.elements() {
            gens.push(x.add(y));
        }
    }
    Ok(InvariantIdeal {
        chart: a.chart.clone(),
        generators: SemigroupGens::from_trusted(a.chart.n(), gens),
    })
}

/// Pairwise intersections of the cones of two fans.
pub fn common_refinement(a: &GammaFan, b: &GammaFan) -> Result<GammaFan> {
    common_refinement_with(a, b, Exec::default())
}

pub fn common_refinement_with(a: &GammaFan, b: &GammaFan, exec: Exec) -> Result<GammaFan> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    if a.gamma() != b.gamma() {
        return Err(Error::domain("fans over different value groups"));
    }
    let pairs: Vec<(usize, usize)> = (0..a.cones().len())
        .flat_map(|i| (0..b.cones().len()).map(move |j| (i, j)))
        .collect();
    let cones = exec.map(&pairs, |&(i, j)| a.cones()[i].intersect(&b.cones()[j]));
    GammaFan::new(a.gamma().clone(), a.mode(), a.n(), cones)
}

/// Whether every cone of `fine` lies in some cone of `coarse`.
pub fn refines(fine: &GammaFan, coarse: &GammaFan) -> bool {
    fine.cones()
        .iter()
        .all(|c| coarse.cones().iter().any(|d| d.cone().contains_cone(c.cone())))
}

/// Finite prefix of the inverse system of blow-ups of one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub base: GammaFan,
    pub levels: Vec<(SemigroupGens, GammaFan)>,
}

impl Tower {
    pub fn top(&self) -> &GammaFan {
        self.levels.last().map_or(&self.base, |(_, f)| f)
    }
}

/// Refines the chart successively by the first `depth` ideals.
pub fn build_tower(
    chart: &GammaCone,
    ideals: &[SemigroupGens],
    depth: usize,
    gamma: &ValueGroup,
    mode: ValuationMode,
) -> Result<Tower> {
    let base = GammaFan::from_cone(gamma.clone(), mode, chart.clone())?;
    let mut levels: Vec<(SemigroupGens, GammaFan)> = Vec::new();
    for gens in ideals.iter().take(depth) {
        let ideal = InvariantIdeal::new(chart.clone(), gens.clone())?;
        let sub = blowup_subdivision(&ideal, gamma, mode)?;
        let prev = levels.last().map_or(&base, |(_, f)| f);
        let next = common_refinement(prev, &sub)?;
        if !refines(&next, prev) {
            return Err(Error::Internal("tower level does not refine its predecessor".into()));
        }
        levels.push((gens.clone(), next));
    }
    Ok(Tower { base, levels })
}
