//! Dense integer matrices with Hermite and Smith normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// A matrix with `cols` columns and no rows, for callers that build row by row.
    pub fn empty(cols: usize) -> Self {
        IntMatrix::zeros(0, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    /// Replace rows (a, b) by (x·a + y·b, −(b/g)·a + (a/g)·b) where the
    /// coefficients come from the pivot column; this is a unimodular 2×2 step.
    fn combine_rows(&mut self, a: usize, b: usize, col: usize) {
        let pa = self[(a, col)].clone();
        let pb = self[(b, col)].clone();
        let eg = pa.extended_gcd(&pb);
        let (g, x, y) = (eg.gcd, eg.x, eg.y);
        let ua = &pa / &g;
        let ub = &pb / &g;
        for j in 0..self.cols {
            let va = self[(a, j)].clone();
            let vb = self[(b, j)].clone();
            self[(a, j)] = &x * &va + &y * &vb;
            self[(b, j)] = -&ub * &va + &ua * &vb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, row: usize) {
        let pa = self[(row, a)].clone();
        let pb = self[(row, b)].clone();
        let eg = pa.extended_gcd(&pb);
        let (g, x, y) = (eg.gcd, eg.x, eg.y);
        let ua = &pa / &g;
        let ub = &pb / &g;
        for i in 0..self.rows {
            let va = self[(i, a)].clone();
            let vb = self[(i, b)].clone();
            self[(i, a)] = &x * &va + &y * &vb;
            self[(i, b)] = -&ub * &va + &ua * &vb;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows).filter(|&i| !h.row(i).iter().all(Zero::is_zero)).count()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).to_vec()))
            .finish()
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·A`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        // gcd-combine every lower row into pivot_row
        for r in pivot_row + 1..h.rows {
            if h[(r, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_zero() {
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
                continue;
            }
            let pa = h[(pivot_row, col)].clone();
            let pb = h[(r, col)].clone();
            h.combine_rows(pivot_row, r, col);
            // replay the same unimodular step on U
            let eg = pa.extended_gcd(&pb);
            let ua = &pa / &eg.gcd;
            let ub = &pb / &eg.gcd;
            for j in 0..u.cols {
                let va = u[(pivot_row, j)].clone();
                let vb = u[(r, j)].clone();
                u[(pivot_row, j)] = &eg.x * &va + &eg.y * &vb;
                u[(r, j)] = -&ub * &va + &ua * &vb;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&p);
            if !q.is_zero() {
                let k = -q;
                h.add_row(r, pivot_row, &k);
                u.add_row(r, pivot_row, &k);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `S = U·A·V` diagonal,
/// nonnegative, each diagonal entry dividing the next.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut t = 0;
    while t < n {
        // choose the nonzero entry of least magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..s.rows {
            for j in t..s.cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                if (&s[(i, t)] % &s[(t, t)]).is_zero() {
                    let k = -(&s[(i, t)] / &s[(t, t)]);
                    s.add_row(i, t, &k);
                    u.add_row(i, t, &k);
                } else {
                    let pa = s[(t, t)].clone();
                    let pb = s[(i, t)].clone();
                    s.combine_rows(t, i, t);
                    let eg = pa.extended_gcd(&pb);
                    let ua = &pa / &eg.gcd;
                    let ub = &pb / &eg.gcd;
                    for j in 0..u.cols {
                        let va = u[(t, j)].clone();
                        let vb = u[(i, j)].clone();
                        u[(t, j)] = &eg.x * &va + &eg.y * &vb;
                        u[(i, j)] = -&ub * &va + &ua * &vb;
                    }
                    changed = true;
                }
            }
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                if (&s[(t, j)] % &s[(t, t)]).is_zero() {
                    let k = -(&s[(t, j)] / &s[(t, t)]);
                    s.add_col(j, t, &k);
                    v.add_col(j, t, &k);
                } else {
                    let pa = s[(t, t)].clone();
                    let pb = s[(t, j)].clone();
                    s.combine_cols(t, j, t);
                    let eg = pa.extended_gcd(&pb);
                    let ua = &pa / &eg.gcd;
                    let ub = &pb / &eg.gcd;
                    for i in 0..v.rows {
                        let va = v[(i, t)].clone();
                        let vb = v[(i, j)].clone();
                        v[(i, t)] = &eg.x * &va + &eg.y * &vb;
                        v[(i, j)] = -&ub * &va + &ua * &vb;
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: if some trailing entry is not divisible by the pivot, fold its row in
            let bad = (t + 1..s.rows)
                .flat_map(|i| (t + 1..s.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&s[(i, j)] % &s[(t, t)]).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// Some integer solution of `A·x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    let (s, u, v) = snf(a);
    let ub = u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < a.cols { s[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(v.mul_vec(&y))
}

/// Basis (as rows) of the integer kernel `{x ∈ ℤ^cols : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (s, _, v) = snf(a);
    let rank = (0..a.rows.min(a.cols))
        .filter(|&i| !s[(i, i)].is_zero())
        .count();
    (rank..a.cols).map(|j| v.column(j)).collect()
}

/// HNF basis (nonzero rows) of the lattice spanned by `gens`.
pub fn lattice_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let (h, _) = hnf(&IntMatrix::from_rows(gens));
    h.row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .inspect(|r| debug_assert_eq!(r.len(), dim))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn is_diagonal_chain(s: &IntMatrix) -> bool {
        let n = s.rows().min(s.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j && !s[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        (0..n.saturating_sub(1)).all(|i| {
            let a = &s[(i, i)];
            let b = &s[(i + 1, i + 1)];
            !a.is_negative() && (b.is_zero() || (!a.is_zero() && (b % a).is_zero()))
        })
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = hnf(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_2_3() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let (s, u, v) = snf(&a);
        assert_eq!(s, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&a).mul(&v), s);
    }

    #[test]
    fn solve_parity() {
        assert_eq!(solve_integer(&m(&[&[2]]), &[3.into()]), None);
        assert_eq!(solve_integer(&m(&[&[2]]), &[4.into()]), Some(vec![2.into()]));
    }

    #[test]
    fn empty_matrices() {
        let a = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_basis(&a).len(), 3);
        assert_eq!(solve_integer(&a, &[]).map(|x| x.len()), Some(3));
        let (s, u, v) = snf(&IntMatrix::zeros(2, 0));
        assert_eq!((s.rows(), u.rows(), v.rows()), (2, 2, 0));
    }

    #[test]
    fn kernel_of_row() {
        let a = m(&[&[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..4, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-9i64..10, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn snf_factorization(a in arb_matrix()) {
            let (s, u, v) = snf(&a);
            prop_assert!(u.is_unimodular());
            prop_assert!(v.is_unimodular());
            prop_assert_eq!(u.mul(&a).mul(&v), s.clone());
            prop_assert!(is_diagonal_chain(&s));
        }

        #[test]
        fn hnf_factorization(a in arb_matrix()) {
            let (h, u) = hnf(&a);
            prop_assert!(u.is_unimodular());
            prop_assert_eq!(u.mul(&a), h.clone());
            // echelon with positive pivots and reduced entries above
            let mut last = None;
            for i in 0..h.rows() {
                let lead = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
                match (last, lead) {
                    (Some(None), Some(_)) => prop_assert!(false, "nonzero row after zero row"),
                    (Some(Some(p)), Some(q)) => prop_assert!(q > p),
                    _ => {}
                }
                if let Some(j) = lead {
                    prop_assert!(h[(i, j)].is_positive());
                    for r in 0..i {
                        prop_assert!(!h[(r, j)].is_negative() && h[(r, j)] < h[(i, j)]);
                    }
                }
                last = Some(lead);
            }
        }

        #[test]
        fn solve_roundtrip(a in arb_matrix(), x in prop::collection::vec(-5i64..6, 4)) {
            let x: Vec<BigInt> = x[..a.cols()].iter().map(|&v| v.into()).collect();
            let b = a.mul_vec(&x);
            let sol = solve_integer(&a, &b).expect("b is in the image");
            prop_assert_eq!(a.mul_vec(&sol), b);
        }
    }
}
