//! Coordinate-bounded truncations of the complex `B_n(Z)` of partial bases
//! of `Z^n`, and of the links `B_n^k(Z)` of `{e_1, ..., e_k}`.
//!
//! A set of primitive vectors is a simplex when it spans a direct summand
//! of the same rank. Since subsets of such sets again qualify, the simplices
//! are found by extending cliques of the edge graph one vertex at a time and
//! pruning as soon as the summand test fails.

use rayon::prelude::*;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::lattice::{is_primitive, spans_direct_summand};
use crate::LatticeVector;

/// Primitive vectors in `Z^n` with all coordinates in `[-bound, bound]`, in
/// lexicographic order.
pub fn primitive_vectors(n: usize, bound: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        if is_primitive(&v) {
            out.push(v.clone());
        }
        // odometer increment, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = -bound;
        }
    }
}

fn standard_vector(n: usize, i: usize) -> LatticeVector {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// The truncation of `B_n(Z)` (for `k = 0`) or of the link of `{e_1..e_k}`
/// to vectors of max-norm at most `bound`.
pub fn truncated_bn(n: usize, bound: i64, k: usize) -> Result<SimplicialComplex<LatticeVector>> {
    if n == 0 || bound < 1 {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 1 and bound ≥ 1, got n = {n}, bound = {bound}"
        )));
    }
    if k >= n {
        return Err(Error::PrefixOutOfRange { k, rank: n });
    }
    let base: Vec<LatticeVector> = (0..k).map(|i| standard_vector(n, i)).collect();
    let summand = |vs: &[&LatticeVector]| -> bool {
        let mut all = base.clone();
        all.extend(vs.iter().map(|v| (*v).clone()));
        all.len() <= n && spans_direct_summand(&all, n).expect("dimensions checked")
    };
    let vertices: Vec<LatticeVector> = primitive_vectors(n, bound)
        .into_iter()
        .filter(|v| !base.contains(v) && summand(&[v]))
        .collect();
    let m = vertices.len();
    let adjacent: Vec<Vec<bool>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| i != j && summand(&[&vertices[i], &vertices[j]]))
                .collect()
        })
        .collect();
    let max_size = n - k;
    let simplices: Vec<Vec<Vec<usize>>> = (0..m)
        .into_par_iter()
        .map(|root| {
            let mut found = Vec::new();
            let mut current = vec![root];
            let candidates: Vec<usize> = (root + 1..m).filter(|&j| adjacent[root][j]).collect();
            extend(
                &vertices,
                &adjacent,
                &summand,
                max_size,
                &mut current,
                &candidates,
                &mut found,
            );
            found
        })
        .collect();
    let all: Vec<Vec<usize>> = simplices.into_iter().flatten().collect();
    SimplicialComplex::from_closed(vertices, all)
}

fn extend(
    vertices: &[LatticeVector],
    adjacent: &[Vec<bool>],
    summand: &(dyn Fn(&[&LatticeVector]) -> bool + Sync),
    max_size: usize,
    current: &mut Vec<usize>,
    candidates: &[usize],
    found: &mut Vec<Vec<usize>>,
) {
    found.push(current.clone());
    if current.len() == max_size {
        return;
    }
    for (pos, &c) in candidates.iter().enumerate() {
        current.push(c);
        let vs: Vec<&LatticeVector> = current.iter().map(|&i| &vertices[i]).collect();
        if current.len() <= 2 || summand(&vs) {
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| adjacent[c][j])
                .collect();
            extend(vertices, adjacent, summand, max_size, current, &next, found);
        }
        current.pop();
    }
}

/// One maximal simplex per line, vertices as `(x,y,z)`, lines sorted.
pub fn serialize(c: &SimplicialComplex<LatticeVector>) -> String {
    let fmt_v = |v: &LatticeVector| {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    };
    let mut lines: Vec<String> = c
        .maximal_simplices()
        .iter()
        .map(|s| s.iter().map(fmt_v).collect::<Vec<_>>().join(" "))
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one() {
        let c = truncated_bn(1, 3, 0).unwrap();
        assert_eq!(c.vertices(), &[vec![-1], vec![1]]);
        assert_eq!(c.count(1), 0);
    }

    #[test]
    fn rank_two_bound_one() {
        let c = truncated_bn(2, 1, 0).unwrap();
        assert_eq!(c.count(0), 8);
        let v = c.vertices();
        let det_edges = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
            .filter(|&(i, j)| (v[i][0] * v[j][1] - v[i][1] * v[j][0]).abs() == 1)
            .count();
        assert_eq!(c.count(1), det_edges);
        assert_eq!(det_edges, 20);
        assert_eq!(c.dim(), Some(1));
        assert!(!c.contains(&crate::complex::Simplex::new([vec![1, 0], vec![-1, 0]]).unwrap()));
    }

    #[test]
    fn not_a_flag_complex() {
        let c = truncated_bn(3, 2, 0).unwrap();
        let s =
            |vs: &[[i64; 3]]| crate::complex::Simplex::new(vs.iter().map(|v| v.to_vec())).unwrap();
        assert!(c.contains(&s(&[[1, 0, 0], [0, 1, 0]])));
        assert!(c.contains(&s(&[[1, 0, 0], [1, 1, 2]])));
        assert!(c.contains(&s(&[[0, 1, 0], [1, 1, 2]])));
        assert!(!c.contains(&s(&[[1, 0, 0], [0, 1, 0], [1, 1, 2]])));
    }

    #[test]
    fn serialization_format() {
        let c = truncated_bn(1, 1, 0).unwrap();
        assert_eq!(serialize(&c), "(-1)\n(1)\n");
    }
}
