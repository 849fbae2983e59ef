//! Linear algebra over the session field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::kernel::Scalar;

pub type Vector = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += &(x * y);
    }
    acc
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], k: &Scalar) -> Vector {
    a.iter().map(|x| x * k).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn zeros(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Scalar::one();
    v
}

pub fn from_ints(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::from_int(x)).collect()
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vector], cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = scale(&m[r], &inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let sub_row = scale(&m[r], &f);
                m[i] = sub(&m[i], &sub_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of `{x : row·x = 0 for all rows}`.
pub fn nullspace(rows: &[Vector], cols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = Scalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Orthogonal projection of `x` onto the complement of span(`basis`).
pub fn project_out(x: &[Scalar], basis: &[Vector]) -> Vector {
    if basis.is_empty() {
        return x.to_vec();
    }
    // solve the Gram system G c = B x, then x - Bᵀc
    let k = basis.len();
    let mut aug: Vec<Vector> = (0..k)
        .map(|i| {
            let mut row: Vector = (0..k).map(|j| dot(&basis[i], &basis[j])).collect();
            row.push(dot(&basis[i], x));
            row
        })
        .collect();
    let (red, pivots) = rref(&aug, k);
    aug = red;
    let mut c = zeros(k);
    for (row, &p) in aug.iter().zip(&pivots) {
        c[p] = row[k].clone();
    }
    let mut out = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        if !ci.is_zero() {
            out = sub(&out, &scale(b, ci));
        }
    }
    out
}

/// Positive rescaling to a canonical representative: integer-primitive when
/// every entry is rational, otherwise first nonzero entry of absolute value 1.
pub fn canonical_direction(v: &[Scalar]) -> Vector {
    if is_zero(v) {
        return v.to_vec();
    }
    if v.iter().all(Scalar::is_rational) {
        let den = v
            .iter()
            .map(|x| x.rational_part().denom().clone())
            .fold(BigInt::one(), |a, d| a.lcm(&d));
        let nums: Vec<BigInt> = v
            .iter()
            .map(|x| {
                (x.rational_part() * num_rational::BigRational::from_integer(den.clone())).to_integer()
            })
            .collect();
        let g = nums.iter().fold(BigInt::zero(), |a, n| a.gcd(n));
        return nums.into_iter().map(|n| Scalar::from_bigint(n / &g)).collect();
    }
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero").abs();
    let inv = lead.recip();
    scale(v, &inv)
}

/// Canonical scaling up to sign as well: first nonzero entry made positive.
pub fn canonical_line(v: &[Scalar]) -> Vector {
    let c = canonical_direction(v);
    match c.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&c),
        _ => c,
    }
}

/// Integer vector if all entries are integers.
pub fn to_integers(v: &[Scalar]) -> Option<Vec<BigInt>> {
    v.iter().map(Scalar::to_bigint).collect()
}

/// Whether `a` is a positive multiple of `b`.
pub fn positively_parallel(a: &[Scalar], b: &[Scalar]) -> bool {
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return is_zero(a);
    };
    let k = &a[i] / &b[i];
    if !k.is_positive() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| *x == y * &k)
}

pub fn abs_max(v: &[Scalar]) -> Scalar {
    v.iter().map(Scalar::abs).max().unwrap_or_else(Scalar::zero)
}
