//! Integer linear algebra modulo `m`: Hermite forms of lattices containing
//! `diag(d)·ℤ^k`, and diagonalization over `ℤ/m` with tracked column
//! operations.  All entries stay below `m ≤ 2^31`, so `i128` never
//! overflows.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Mat = Vec<Vec<i128>>;

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Unimodular `2 × 2` step sending `(a, b)` to `(gcd, 0)`: rows are
/// `(s, u)` and `(−b/g, a/g)`.  When `a | b` it is the elementary
/// subtraction, so a pivot that already divides is never disturbed.
fn combo(a: i128, b: i128) -> (i128, i128, i128, i128) {
    if a != 0 && b % a == 0 {
        return (1, 0, -(b / a), 1);
    }
    let (g, s, u) = ext_gcd(a, b);
    (s, u, -(b / g), a / g)
}

/// Upper-triangular basis of the lattice spanned by `gens` and `diag(d)`,
/// with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`.  Unique for the lattice.
pub(crate) fn hnf(gens: &[Vec<i128>], d: &[u64]) -> Mat {
    let k = d.len();
    let mut rows: Mat = (0..k)
        .map(|i| {
            let mut r = vec![0i128; k];
            r[i] = d[i] as i128;
            r
        })
        .collect();
    for g in gens {
        let mut v: Vec<i128> = g.iter().zip(d).map(|(&x, &m)| x.rem_euclid(m as i128)).collect();
        for i in 0..k {
            if v[i] == 0 {
                continue;
            }
            let (a, b) = (rows[i][i], v[i]);
            let (g, s, t) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            for j in i..k {
                let m = d[j] as i128;
                let (r, x) = (rows[i][j], v[j]);
                let nr = s * r + t * x;
                let nv = ag * x - bg * r;
                // pivot column keeps its exact value; later columns reduce
                rows[i][j] = if j == i { nr } else { nr.rem_euclid(m) };
                v[j] = if j == i { nv } else { nv.rem_euclid(m) };
            }
            debug_assert_eq!(v[i], 0);
        }
    }
    for i in 0..k {
        for r in 0..i {
            let q = rows[r][i].div_euclid(rows[i][i]);
            if q != 0 {
                for j in i..k {
                    rows[r][j] -= q * rows[i][j];
                }
            }
        }
    }
    rows
}

/// Diagonalizes the `r × k` matrix `c` over `ℤ/m` by unimodular row and
/// column operations.  Returns the diagonal (length `min(r, k)`) and the
/// accumulated column transform `W` (`k × k`), so that `R·c·W = diag`.
pub(crate) fn diagonalize_mod(mut c: Mat, k: usize, m: i128) -> (Vec<i128>, Mat) {
    let r = c.len();
    let mut w: Mat = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    for row in c.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(m);
        }
    }
    let mut diag = Vec::new();
    for t in 0..r.min(k) {
        let Some((pi, pj)) = (t..r).flat_map(|i| (t..k).map(move |j| (i, j))).find(|&(i, j)| c[i][j] != 0) else {
            diag.resize(r.min(k), 0);
            break;
        };
        c.swap(t, pi);
        if pj != t {
            for row in c.iter_mut() {
                row.swap(t, pj);
            }
            for row in w.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if c[i][t] == 0 {
                    continue;
                }
                let (s, u, p, q) = combo(c[t][t], c[i][t]);
                for j in t..k {
                    let (x, y) = (c[t][j], c[i][j]);
                    c[t][j] = (s * x + u * y).rem_euclid(m);
                    c[i][j] = (p * x + q * y).rem_euclid(m);
                }
            }
            for j in t + 1..k {
                if c[t][j] == 0 {
                    continue;
                }
                dirty = true;
                let (s, u, p, q) = combo(c[t][t], c[t][j]);
                for row in c.iter_mut().chain(w.iter_mut()) {
                    let (x, y) = (row[t], row[j]);
                    row[t] = (s * x + u * y).rem_euclid(m);
                    row[j] = (p * x + q * y).rem_euclid(m);
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(c[t][t]);
    }
    (diag, w)
}

/// Generators of `{y ∈ (ℤ/m)^k : c·y ≡ 0}`.
pub(crate) fn kernel_mod(c: Mat, k: usize, m: i128) -> Mat {
    let (diag, w) = diagonalize_mod(c, k, m);
    (0..k)
        .map(|t| {
            let f = match diag.get(t) {
                Some(&s) => m / gcd(s, m),
                None => 1,
            };
            (0..k).map(|i| (w[i][t] * f).rem_euclid(m)).collect()
        })
        .collect()
}

/// Row-span membership data for a full-rank lattice basis `h` containing
/// `m·ℤ^k`: `v ∈ span ⇔ (v·W)_t ≡ 0 (mod g_t)` for every `t`.
pub(crate) fn congruences(h: &Mat, m: i128) -> (Mat, Vec<i128>) {
    let k = h.len();
    let (diag, w) = diagonalize_mod(h.clone(), k, m);
    let g = (0..k).map(|t| gcd(diag.get(t).copied().unwrap_or(0), m)).collect();
    (w, g)
}
