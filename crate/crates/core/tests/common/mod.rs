//! Independent oracles and random generators shared by the integration tests.
//! Nothing here calls into the library's reduction, SNF or lattice code.

#![allow(dead_code)]

use freeaut::automorphism::gersten_generators;
use freeaut::birman::magnus_generators;
use freeaut::{FreeAutomorphism, IntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Free reduction by repeatedly deleting the leftmost cancelling pair.
pub fn naive_reduce(signed: &[i32]) -> Vec<i32> {
    let mut w = signed.to_vec();
    loop {
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] == -w[i + 1]) {
            Some(i) => {
                w.drain(i..i + 2);
            }
            None => return w,
        }
    }
}

/// Exponent sums by counting letters.
pub fn exponent_sums(signed: &[i32], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for &x in signed {
        out[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    out
}

pub fn random_signed_word(r: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<i32> {
    let len = r.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let i = r.gen_range(1..=n as i32);
            if r.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect()
}

/// Product of `len` random Gersten generators and their inverses.
pub fn random_automorphism(r: &mut ChaCha8Rng, n: usize, len: usize) -> FreeAutomorphism {
    random_product(
        r,
        &gersten_generators(n)
            .into_iter()
            .map(|x| x.1)
            .collect::<Vec<_>>(),
        n,
        len,
    )
}

/// Product of `len` random Magnus generators and their inverses.
pub fn random_magnus_word(r: &mut ChaCha8Rng, n: usize, len: usize) -> FreeAutomorphism {
    random_product(
        r,
        &magnus_generators(n)
            .into_iter()
            .map(|x| x.1)
            .collect::<Vec<_>>(),
        n,
        len,
    )
}

fn random_product(
    r: &mut ChaCha8Rng,
    gens: &[FreeAutomorphism],
    n: usize,
    len: usize,
) -> FreeAutomorphism {
    let mut phi = FreeAutomorphism::identity(n);
    for _ in 0..len {
        let g = &gens[r.gen_range(0..gens.len())];
        let g = if r.gen_bool(0.5) {
            g.clone()
        } else {
            g.inverse()
        };
        phi = phi.compose(&g).unwrap();
    }
    phi
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut c in choose(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `k` vectors in `Z^n` span a rank-`k` summand iff the gcd of their
/// maximal minors is 1.
pub fn summand_by_minors(vs: &[Vec<i64>]) -> bool {
    let k = vs.len();
    if k == 0 {
        return true;
    }
    let n = vs[0].len();
    let g = choose(n, k).into_iter().fold(0, |g, cols| {
        let sub: Vec<Vec<i64>> = vs
            .iter()
            .map(|v| cols.iter().map(|&c| v[c]).collect())
            .collect();
        gcd(g, det(&sub))
    });
    g == 1
}

/// Connected components by union-find.
pub fn components(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut count = vertices;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Random matrix in `GL_n(Z)` from elementary and sign column operations that
/// leave the first `k` columns equal to `e_1..e_k`.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize, k: usize, ops: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    if k == n {
        return m;
    }
    for _ in 0..ops {
        let i = r.gen_range(k..n);
        if r.gen_bool(0.15) {
            for row in m.iter_mut() {
                row[i] = -row[i];
            }
            continue;
        }
        let j = r.gen_range(0..n);
        if j == i {
            continue;
        }
        let c = r.gen_range(-2..=2);
        for row in m.iter_mut() {
            row[i] += c * row[j];
        }
    }
    m
}

pub fn to_int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(
        m.iter()
            .map(|r| r.iter().map(|&x| x.into()).collect())
            .collect(),
    )
    .unwrap()
}

pub fn from_int_matrix(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}
