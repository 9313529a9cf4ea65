//! Finite abstract simplicial complexes and their integral homology.
//!
//! Vertices are kept in sorted order and simplices are stored as sorted
//! lists of vertex indices, grouped by dimension. Boundary matrices use the
//! usual alternating signs with respect to that order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::snf::SparseMatrix;
use crate::Int;

/// A nonempty set of vertices, sorted and without repeats.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex<V>(Vec<V>);

impl<V: Ord + Clone> Simplex<V> {
    pub fn new(vertices: impl IntoIterator<Item = V>) -> Result<Self> {
        let mut v: Vec<V> = vertices.into_iter().collect();
        let len = v.len();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::InvalidParameter("a simplex is nonempty".into()));
        }
        if v.len() != len {
            return Err(Error::InvalidParameter("repeated vertex".into()));
        }
        Ok(Simplex(v))
    }

    pub fn vertices(&self) -> &[V] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex<V> {
    vertices: Vec<V>,
    /// `faces[d]`: the `d`-simplices as sorted vertex-index lists, sorted.
    faces: Vec<Vec<Vec<usize>>>,
}

/// Homology in one degree: `Z^betti ⊕ ⊕ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_ints")]
    pub torsion: Vec<Int>,
}

fn serialize_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H{} = {}", self.degree, parts.join(" + "))
    }
}

impl<V: Ord + Clone + Send + Sync> SimplicialComplex<V> {
    /// The smallest complex containing the given simplices (all faces added).
    pub fn from_simplices(simplices: impl IntoIterator<Item = Vec<V>>) -> Result<Self> {
        let simplices: Vec<Simplex<V>> = simplices
            .into_iter()
            .map(Simplex::new)
            .collect::<Result<_>>()?;
        let vset: BTreeSet<V> = simplices.iter().flat_map(|s| s.0.iter().cloned()).collect();
        let vertices: Vec<V> = vset.into_iter().collect();
        let mut sets: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for s in &simplices {
            let idx: Vec<usize> =
                s.0.iter()
                    .map(|v| vertices.binary_search(v).unwrap())
                    .collect();
            let m = idx.len();
            if m > 24 {
                return Err(Error::InvalidParameter("simplex too large to close".into()));
            }
            for mask in 1u32..(1 << m) {
                let sub: Vec<usize> = (0..m)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| idx[b])
                    .collect();
                let d = sub.len() - 1;
                if sets.len() <= d {
                    sets.resize_with(d + 1, BTreeSet::new);
                }
                sets[d].insert(sub);
            }
        }
        Ok(SimplicialComplex {
            vertices,
            faces: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// A complex from an explicit, already downward-closed list of simplices
    /// over a sorted vertex list; closure is checked.
    pub fn from_closed(vertices: Vec<V>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for s in simplices {
            if s.is_empty()
                || s.windows(2).any(|w| w[0] >= w[1])
                || *s.last().unwrap() >= vertices.len()
            {
                return Err(Error::InvalidParameter("malformed simplex".into()));
            }
            let d = s.len() - 1;
            if sets.len() <= d {
                sets.resize_with(d + 1, BTreeSet::new);
            }
            sets[d].insert(s);
        }
        let c = SimplicialComplex {
            vertices,
            faces: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        };
        if !c.is_downward_closed() {
            return Err(Error::InvalidParameter("not closed under faces".into()));
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.iter().rposition(|f| !f.is_empty())
    }

    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, |f| f.len())
    }

    /// The `d`-simplices as sorted vertex-index lists.
    pub fn faces(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map_or(&[], |f| f.as_slice())
    }

    pub fn simplex_vertices(&self, s: &[usize]) -> Vec<V> {
        s.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    fn index_of(&self, s: &Simplex<V>) -> Option<Vec<usize>> {
        s.0.iter()
            .map(|v| self.vertices.binary_search(v).ok())
            .collect()
    }

    pub fn contains(&self, s: &Simplex<V>) -> bool {
        match self.index_of(s) {
            Some(idx) => self.faces(s.dim()).binary_search(&idx).is_ok(),
            None => false,
        }
    }

    /// Every codimension-one face of every simplex is present, and every vertex
    /// appears as a 0-simplex.
    pub fn is_downward_closed(&self) -> bool {
        if self.count(0) != self.vertices.len() {
            return false;
        }
        (1..self.faces.len()).all(|d| {
            self.faces[d].iter().all(|s| {
                (0..s.len()).all(|skip| {
                    let f: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    self.faces[d - 1].binary_search(&f).is_ok()
                })
            })
        })
    }

    /// Simplices not properly contained in another simplex.
    pub fn maximal_simplices(&self) -> Vec<Vec<V>> {
        let mut out = Vec::new();
        for d in 0..self.faces.len() {
            let mut is_face = vec![false; self.faces[d].len()];
            if d + 1 < self.faces.len() {
                for s in &self.faces[d + 1] {
                    for skip in 0..s.len() {
                        let f: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        if let Ok(p) = self.faces[d].binary_search(&f) {
                            is_face[p] = true;
                        }
                    }
                }
            }
            for (s, covered) in self.faces[d].iter().zip(is_face) {
                if !covered {
                    out.push(self.simplex_vertices(s));
                }
            }
        }
        out
    }

    fn filtered(&self, keep: impl Fn(&[usize]) -> bool) -> SimplicialComplex<V> {
        let kept: Vec<Vec<usize>> = self
            .faces
            .iter()
            .flatten()
            .filter(|s| keep(s))
            .cloned()
            .collect();
        let used: BTreeSet<usize> = kept.iter().flatten().copied().collect();
        let map: HashMap<usize, usize> = used
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let vertices = used.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in kept {
            let t: Vec<usize> = s.iter().map(|i| map[i]).collect();
            let d = t.len() - 1;
            if faces.len() <= d {
                faces.resize_with(d + 1, Vec::new);
            }
            faces[d].push(t);
        }
        for f in &mut faces {
            f.sort();
        }
        SimplicialComplex { vertices, faces }
    }

    /// Star and link of a simplex. The star consists of all simplices that
    /// together with `delta` form a simplex, and their faces; the link is the
    /// part of the star disjoint from `delta`. `None` stands for the empty
    /// simplex, whose star and link are the whole complex.
    pub fn star_link(
        &self,
        delta: Option<&Simplex<V>>,
    ) -> Result<(SimplicialComplex<V>, SimplicialComplex<V>)> {
        let Some(delta) = delta else {
            return Ok((self.clone(), self.clone()));
        };
        if !self.contains(delta) {
            return Err(Error::SimplexNotInComplex);
        }
        let d_idx = self.index_of(delta).unwrap();
        let in_star = |s: &[usize]| {
            let mut u: Vec<usize> = s.iter().chain(&d_idx).copied().collect();
            u.sort_unstable();
            u.dedup();
            self.faces(u.len() - 1).binary_search(&u).is_ok()
        };
        let star = self.filtered(in_star);
        let link = self.filtered(|s| in_star(s) && s.iter().all(|v| !d_idx.contains(v)));
        Ok((star, link))
    }

    /// Whether every simplex of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex<V>) -> bool {
        self.faces
            .iter()
            .flatten()
            .all(|s| Simplex::new(self.simplex_vertices(s)).is_ok_and(|s| other.contains(&s)))
    }

    /// Boundary map from `d`-chains to `(d-1)`-chains, one line per `d`-simplex.
    /// With `augmented`, degree 0 maps onto a single copy of `Z`.
    fn boundary(&self, d: usize, augmented: bool) -> SparseMatrix<Int> {
        if d == 0 {
            let mut m = SparseMatrix::new(1);
            if augmented {
                for _ in self.faces(0) {
                    m.push_line([(0, Int::from(1))]);
                }
            }
            return m;
        }
        let lower = self.faces(d - 1);
        let index: HashMap<&[usize], usize> = lower
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut m = SparseMatrix::new(lower.len().max(1));
        for s in self.faces(d) {
            let mut line = Vec::with_capacity(s.len());
            for skip in 0..s.len() {
                let f: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                line.push((index[f.as_slice()], Int::from(sign)));
            }
            m.push_line(line);
        }
        m
    }

    /// Integral homology in degrees `0..=max_degree`, reduced or not.
    ///
    /// `H_d` has rank `c_d - rank ∂_d - rank ∂_{d+1}` and torsion the
    /// non-unit invariant factors of `∂_{d+1}`. Degrees above the dimension
    /// give zero groups.
    pub fn homology(&self, max_degree: usize, reduced: bool) -> Vec<HomologyGroup> {
        let factors: Vec<Vec<Int>> = (0..=max_degree + 1)
            .into_par_iter()
            .map(|d| {
                if d > 0 && self.count(d) == 0 {
                    Vec::new()
                } else {
                    self.boundary(d, reduced).invariant_factors()
                }
            })
            .collect();
        (0..=max_degree)
            .map(|d| {
                let rank_d = factors[d].len();
                let rank_up = factors[d + 1].len();
                let betti = self.count(d) - rank_d - rank_up;
                let torsion = factors[d + 1]
                    .iter()
                    .filter(|x| *x > &Int::from(1))
                    .cloned()
                    .collect();
                HomologyGroup {
                    degree: d,
                    betti,
                    torsion,
                }
            })
            .collect()
    }
}

impl<V: Ord + Clone + Send + Sync + fmt::Display> SimplicialComplex<V> {
    /// One maximal simplex per line, vertices space-separated, lines sorted.
    pub fn serialize(&self) -> String {
        let mut lines: Vec<String> = self
            .maximal_simplices()
            .into_iter()
            .map(|s| {
                s.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(s: &[&[u32]]) -> SimplicialComplex<u32> {
        SimplicialComplex::from_simplices(s.iter().map(|x| x.to_vec())).unwrap()
    }

    fn betti(h: &[HomologyGroup]) -> Vec<usize> {
        h.iter().map(|g| g.betti).collect()
    }

    #[test]
    fn triangles() {
        let hollow = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(betti(&hollow.homology(2, false)), vec![1, 1, 0]);
        assert_eq!(betti(&hollow.homology(1, true)), vec![0, 1]);
        let filled = cx(&[&[0, 1, 2]]);
        assert_eq!(betti(&filled.homology(3, false)), vec![1, 0, 0, 0]);
        assert!(filled.is_downward_closed());
        assert_eq!(filled.count(1), 3);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // 6-vertex triangulation of RP^2
        let rp2 = cx(&[
            &[1, 2, 4],
            &[2, 3, 4],
            &[1, 3, 5],
            &[2, 3, 5],
            &[1, 4, 5],
            &[1, 2, 6],
            &[1, 3, 6],
            &[3, 4, 6],
            &[4, 5, 6],
            &[2, 5, 6],
        ]);
        let h = rp2.homology(2, false);
        assert_eq!(betti(&h), vec![1, 0, 0]);
        assert_eq!(h[1].torsion, vec![Int::from(2)]);
        assert_eq!(h[1].to_string(), "H1 = Z/2");
    }

    #[test]
    fn star_and_link() {
        let t = cx(&[&[0, 1, 2]]);
        let v = Simplex::new([0]).unwrap();
        let (star, link) = t.star_link(Some(&v)).unwrap();
        assert_eq!(star, t);
        assert_eq!(link.maximal_simplices(), vec![vec![1, 2]]);
        assert!(link.is_subcomplex_of(&star));
        let (s, l) = t.star_link(None).unwrap();
        assert_eq!((s, l), (t.clone(), t.clone()));
        assert!(t.star_link(Some(&Simplex::new([7]).unwrap())).is_err());
    }

    #[test]
    fn serialization_lists_maximal_simplices() {
        let c = cx(&[&[0, 1, 2], &[2, 3], &[4]]);
        assert_eq!(c.serialize(), "0 1 2\n2 3\n4\n");
        assert!(SimplicialComplex::from_closed(vec![0u32, 1], vec![vec![0, 1]]).is_err());
    }
}
