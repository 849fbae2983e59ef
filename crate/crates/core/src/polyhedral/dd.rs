//! Double description: extreme rays and lineality of `{x : a·x >= 0}`.

use super::linalg::{self, Vector};
use crate::kernel::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(bits: usize) -> Self {
        BitSet {
            words: vec![0; bits.div_ceil(64).max(1)],
        }
    }

    pub fn full(bits: usize) -> Self {
        let mut b = Self::new(bits);
        for i in 0..bits {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.words.len() * 64).filter(move |&i| self.contains(i))
    }
}

/// Generators of a cone: extreme rays of the pointed part and a lineality basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generators {
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

/// Canonical lineality basis: reduced echelon rows, scaled.
pub(crate) fn canonical_lines(lines: &[Vector], d: usize) -> Vec<Vector> {
    let (r, _) = linalg::rref(lines, d);
    r.iter().map(|v| linalg::canonical_direction(v)).collect()
}

/// Rays projected off the lineality, canonically scaled, sorted and deduplicated.
pub(crate) fn canonical_rays(rays: &[Vector], lines: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = rays
        .iter()
        .map(|r| linalg::project_out(r, lines))
        .filter(|r| !linalg::is_zero(r))
        .map(|r| linalg::canonical_direction(&r))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Extreme rays and lineality of `{x ∈ ℝ^d : a·x >= 0 for a in constraints}`.
pub fn extreme_rays(constraints: &[Vector], d: usize) -> Generators {
    let mut cons: Vec<Vector> = constraints
        .iter()
        .filter(|a| !linalg::is_zero(a))
        .map(|a| linalg::canonical_direction(a))
        .collect();
    cons.sort();
    cons.dedup();
    let m = cons.len();

    let mut lines: Vec<Vector> = (0..d).map(|i| linalg::unit(d, i)).collect();
    let mut rays: Vec<(Vector, BitSet)> = Vec::new();

    for (k, a) in cons.iter().enumerate() {
        if let Some(pi) = lines.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut pivot = lines.remove(pi);
            let mut ap = linalg::dot(a, &pivot);
            if ap.is_negative() {
                pivot = linalg::neg(&pivot);
                ap = -ap;
            }
            for l in lines.iter_mut() {
                let al = linalg::dot(a, l);
                if !al.is_zero() {
                    *l = linalg::sub(l, &linalg::scale(&pivot, &(&al / &ap)));
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = linalg::dot(a, r);
                if !ar.is_zero() {
                    *r = linalg::sub(r, &linalg::scale(&pivot, &(&ar / &ap)));
                }
                z.insert(k);
            }
            let mut z = BitSet::new(m);
            for j in 0..k {
                z.insert(j);
            }
            rays.push((pivot, z));
            continue;
        }

        let vals: Vec<Scalar> = rays.iter().map(|(r, _)| linalg::dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    z.insert(k);
                }
            }
            continue;
        }
        let mut next: Vec<(Vector, BitSet)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                let adjacent = (0..rays.len())
                    .filter(|&r| r != p && r != q)
                    .all(|r| !common.is_subset(&rays[r].1));
                if !adjacent {
                    continue;
                }
                let v = linalg::sub(
                    &linalg::scale(&rays[q].0, &vals[p]),
                    &linalg::scale(&rays[p].0, &vals[q]),
                );
                let v = linalg::canonical_direction(&v);
                let mut z = common;
                z.insert(k);
                next.push((v, z));
            }
        }
        for (i, (r, z)) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                next.push((r, z));
            } else if vals[i].is_zero() {
                let mut z = z;
                z.insert(k);
                next.push((r, z));
            }
        }
        rays = next;
    }

    let lines = canonical_lines(&lines, d);
    let rays: Vec<Vector> = rays.into_iter().map(|(r, _)| r).collect();
    Generators {
        rays: canonical_rays(&rays, &lines),
        lines,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::linalg::from_ints;

    #[test]
    fn quadrant() {
        let g = extreme_rays(&[from_ints(&[1, 0]), from_ints(&[0, 1])], 2);
        assert_eq!(g.rays, vec![from_ints(&[0, 1]), from_ints(&[1, 0])]);
        assert!(g.lines.is_empty());
    }

    #[test]
    fn half_plane_wedge() {
        let g = extreme_rays(&[from_ints(&[1, 1]), from_ints(&[0, 1])], 2);
        assert_eq!(g.rays, vec![from_ints(&[-1, 1]), from_ints(&[1, 0])]);
    }

    #[test]
    fn whole_plane_and_origin() {
        let g = extreme_rays(&[], 2);
        assert!(g.rays.is_empty());
        assert_eq!(g.lines.len(), 2);
        let g = extreme_rays(
            &[from_ints(&[1, 0]), from_ints(&[-1, 0]), from_ints(&[0, 1]), from_ints(&[0, -1])],
            2,
        );
        assert!(g.rays.is_empty() && g.lines.is_empty());
    }

    #[test]
    fn square_pyramid() {
        // x >= |y|, x >= |z| style cone with four facets
        let cons = [
            from_ints(&[1, 1, 0]),
            from_ints(&[1, -1, 0]),
            from_ints(&[1, 0, 1]),
            from_ints(&[1, 0, -1]),
        ];
        let g = extreme_rays(&cons, 3);
        assert_eq!(g.rays.len(), 4);
        assert!(g.lines.is_empty());
    }

    #[test]
    fn half_space_has_lines() {
        let g = extreme_rays(&[from_ints(&[0, 0, 1])], 3);
        assert_eq!(g.rays, vec![from_ints(&[0, 0, 1])]);
        assert_eq!(g.lines.len(), 2);
    }
}
