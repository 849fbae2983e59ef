//! Finitely generated subgroups Γ of the session field, with exact membership.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intmat::{self, IntMatrix};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueGroup {
    /// The subgroup generated by a finite list of scalars.
    Generated { field: Field, generators: Vec<Scalar> },
    /// Γ equals the whole session field (for ℚ: the divisible group ℚ).
    WholeField(Field),
}

/// ℚ-coordinates of a scalar in the basis {1} or {1, √D}.
fn coords(x: &Scalar, field: Field) -> Vec<BigRational> {
    match field {
        Field::Rational => vec![x.rational_part().clone()],
        Field::Quadratic(_) => vec![x.rational_part().clone(), x.radical_part().clone()],
    }
}

fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

impl ValueGroup {
    pub fn generated(field: Field, generators: Vec<Scalar>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::domain("value group needs at least one generator"));
        }
        if let Some(g) = generators.iter().find(|g| !g.fits(field)) {
            return Err(Error::ModeMismatch(format!("generator {g} is not in {field}")));
        }
        if generators.iter().all(Scalar::is_zero) {
            return Err(Error::domain("the trivial value group is not supported"));
        }
        Ok(ValueGroup::Generated { field, generators })
    }

    /// Γ = ℤ in ℚ mode.
    pub fn integers() -> Self {
        ValueGroup::Generated {
            field: Field::Rational,
            generators: vec![Scalar::one()],
        }
    }

    /// Γ = ℚ.
    pub fn rationals() -> Self {
        ValueGroup::WholeField(Field::Rational)
    }

    pub fn field(&self) -> Field {
        match self {
            ValueGroup::Generated { field, .. } | ValueGroup::WholeField(field) => *field,
        }
    }

    pub fn generators(&self) -> Option<&[Scalar]> {
        match self {
            ValueGroup::Generated { generators, .. } => Some(generators),
            ValueGroup::WholeField(_) => None,
        }
    }

    fn check_mode(&self, x: &Scalar) -> Result<()> {
        if x.fits(self.field()) {
            Ok(())
        } else {
            Err(Error::ModeMismatch(format!("{x} is not in {}", self.field())))
        }
    }

    /// Integer coordinate matrix (one column per generator) after clearing
    /// denominators by `scale` together with `extra`.
    fn integer_system(&self, extra: &[&Scalar]) -> (IntMatrix, Vec<Vec<BigInt>>) {
        let field = self.field();
        let gens = self.generators().unwrap_or(&[]);
        let gc: Vec<Vec<BigRational>> = gens.iter().map(|g| coords(g, field)).collect();
        let ec: Vec<Vec<BigRational>> = extra.iter().map(|x| coords(x, field)).collect();
        let scale = lcm_denominators(gc.iter().chain(&ec).flatten());
        let to_int = |q: &BigRational| (q * BigRational::from_integer(scale.clone())).to_integer();
        let k = match field {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        };
        let rows: Vec<Vec<BigInt>> = (0..k)
            .map(|r| gc.iter().map(|c| to_int(&c[r])).collect())
            .collect();
        let extra_cols = ec
            .iter()
            .map(|c| c.iter().map(to_int).collect())
            .collect();
        (IntMatrix::from_rows(&rows), extra_cols)
    }

    /// Whether `x` lies in Γ.
    pub fn contains(&self, x: &Scalar) -> Result<bool> {
        self.check_mode(x)?;
        match self {
            ValueGroup::WholeField(_) => Ok(true),
            ValueGroup::Generated { .. } => {
                let (a, b) = self.integer_system(&[x]);
                Ok(intmat::solve_integer(&a, &b[0]).is_some())
            }
        }
    }

    /// Dimension of the ℚ-span of Γ inside the field.
    pub fn rational_rank(&self) -> usize {
        match self {
            ValueGroup::WholeField(f) => match f {
                Field::Rational => 1,
                Field::Quadratic(_) => 2,
            },
            ValueGroup::Generated { .. } => self.integer_system(&[]).0.rank(),
        }
    }

    /// The positive generator when Γ is cyclic (a discrete value group).
    pub fn discrete_generator(&self) -> Option<Scalar> {
        let ValueGroup::Generated { generators, .. } = self else {
            return None;
        };
        if self.rational_rank() != 1 {
            return None;
        }
        // all generators are rational multiples of a fixed nonzero g0
        let g0 = generators.iter().find(|g| !g.is_zero())?;
        let ratios: Vec<BigRational> = generators
            .iter()
            .map(|g| {
                let r = g / g0;
                r.as_rational().cloned().expect("rank-one group has rational ratios")
            })
            .collect();
        let den = lcm_denominators(&ratios);
        let num = ratios
            .iter()
            .map(|q| (q * BigRational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        let step = Scalar::from_rational(BigRational::new(num, den));
        Some((g0 * &step).abs())
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete_generator().is_some()
    }

    /// Some positive element of Γ.
    pub fn positive_element(&self) -> Scalar {
        match self {
            ValueGroup::WholeField(_) => Scalar::one(),
            ValueGroup::Generated { generators, .. } => generators
                .iter()
                .find(|g| !g.is_zero())
                .expect("nontrivial group")
                .abs(),
        }
    }

    /// A positive integer `k` with `k·x ∈ Γ`, if `x` lies in the ℚ-span of Γ.
    pub fn multiplier_into(&self, x: &Scalar) -> Result<Option<BigInt>> {
        self.check_mode(x)?;
        if self.contains(x)? {
            return Ok(Some(BigInt::one()));
        }
        let ValueGroup::Generated { .. } = self else {
            return Ok(Some(BigInt::one()));
        };
        let (a, b) = self.integer_system(&[x]);
        // solve over ℚ by row reduction of the augmented system
        let rows = a.rows();
        let cols = a.cols();
        let mut m: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                let mut r: Vec<BigRational> = a
                    .row(i)
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect();
                r.push(BigRational::from_integer(b[0][i].clone()));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for v in m[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot = m[r].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot) {
                        *x -= &(&f * p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if (r..rows).any(|i| !m[i][cols].is_zero()) {
            return Ok(None);
        }
        let k = lcm_denominators((0..r).map(|i| &m[i][cols]));
        Ok(Some(k))
    }

    /// Some element of Γ in the open interval `(lo, hi)` (`hi = None` means +∞).
    pub fn element_between(&self, lo: &Scalar, hi: Option<&Scalar>) -> Option<Scalar> {
        let below = |x: &Scalar| hi.is_none_or(|h| x < h);
        match self {
            ValueGroup::WholeField(_) => {
                let x = match hi {
                    Some(h) => (lo + h) / Scalar::from_int(2),
                    None => lo + &Scalar::one(),
                };
                (x > *lo && below(&x)).then_some(x)
            }
            ValueGroup::Generated { field, .. } => {
                if let Some(g) = self.discrete_generator() {
                    let n = (lo / &g).floor() + 1;
                    let x = Scalar::from_bigint(n) * &g;
                    return below(&x).then_some(x);
                }
                // rank two inside ℚ(√D): basis {e_rat, e_mixed}
                let (rat, mixed) = self.rank_two_basis(*field)?;
                for k in 0..2000i64 {
                    for s in [k, -k] {
                        let shift = Scalar::from_int(s) * &mixed;
                        let n = ((lo - &shift) / &rat).floor() + 1;
                        let x = Scalar::from_bigint(n) * &rat + &shift;
                        if x > *lo && below(&x) {
                            return Some(x);
                        }
                    }
                }
                None
            }
        }
    }

    /// For a rank-two group in ℚ(√D): a positive rational basis element and a second one.
    fn rank_two_basis(&self, field: Field) -> Option<(Scalar, Scalar)> {
        let Field::Quadratic(d) = field else { return None };
        let gens = self.generators()?;
        let cs: Vec<Vec<BigRational>> = gens.iter().map(|g| coords(g, field)).collect();
        let scale = lcm_denominators(cs.iter().flatten());
        let sc = BigRational::from_integer(scale.clone());
        // rows (radical, rational) so the HNF leaves a purely rational second row
        let rows: Vec<Vec<BigInt>> = cs
            .iter()
            .map(|c| vec![(&c[1] * &sc).to_integer(), (&c[0] * &sc).to_integer()])
            .collect();
        let basis = intmat::lattice_basis(&rows, 2);
        if basis.len() != 2 {
            return None;
        }
        let mk = |rad: &BigInt, rat: &BigInt| {
            Scalar::quadratic(
                BigRational::new(rat.clone(), scale.clone()),
                BigRational::new(rad.clone(), scale.clone()),
                d,
            )
        };
        let mixed = mk(&basis[0][0], &basis[0][1]);
        let rat = mk(&basis[1][0], &basis[1][1]).abs();
        debug_assert!(rat.is_rational());
        Some((rat, mixed))
    }

    /// Basis of `{m ∈ ℤⁿ : ⟨m, w⟩ ∈ Γ}` together with its index in ℤⁿ
    /// (`None` when the sublattice has lower rank).
    pub fn character_sublattice(&self, w: &[Scalar]) -> Result<(Vec<Vec<BigInt>>, Option<BigInt>)> {
        let n = w.len();
        for x in w {
            self.check_mode(x)?;
        }
        let identity = || {
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect::<Vec<Vec<BigInt>>>()
        };
        if let ValueGroup::WholeField(_) = self {
            return Ok((identity(), Some(BigInt::one())));
        }
        let all_in = w.iter().map(|x| self.contains(x)).collect::<Result<Vec<_>>>()?;
        if all_in.iter().all(|&b| b) {
            return Ok((identity(), Some(BigInt::one())));
        }
        // kernel of [W | -G] over ℤ, projected onto the m-coordinates
        let field = self.field();
        let gens = self.generators().unwrap_or(&[]);
        let wc: Vec<Vec<BigRational>> = w.iter().map(|x| coords(x, field)).collect();
        let gc: Vec<Vec<BigRational>> = gens.iter().map(|g| coords(g, field)).collect();
        let scale = BigRational::from_integer(lcm_denominators(wc.iter().chain(&gc).flatten()));
        let k = wc.first().map_or(1, Vec::len);
        let rows: Vec<Vec<BigInt>> = (0..k)
            .map(|r| {
                wc.iter()
                    .map(|c| (&c[r] * &scale).to_integer())
                    .chain(gc.iter().map(|c| -(&c[r] * &scale).to_integer()))
                    .collect()
            })
            .collect();
        let ker = intmat::kernel_basis(&IntMatrix::from_rows(&rows));
        let projected: Vec<Vec<BigInt>> = ker.into_iter().map(|v| v[..n].to_vec()).collect();
        let basis = intmat::lattice_basis(&projected, n);
        let index = (basis.len() == n).then(|| IntMatrix::from_rows(&basis).determinant().abs());
        Ok((basis, index))
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGroup::WholeField(_) => write!(f, "all"),
            ValueGroup::Generated { generators, .. } => {
                let parts: Vec<String> = generators.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}
