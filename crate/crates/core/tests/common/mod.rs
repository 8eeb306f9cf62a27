//! Independent oracles used by the integration tests. Nothing here calls into
//! the eigensolver or the determinant path of the library.

#![allow(dead_code)]

/// Characteristic polynomial coefficients `c[0] + c[1] x + ... + c[n] x^n`
/// of `det(x I - A)` by Faddeev-LeVerrier.
pub fn char_poly(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * m[l][j]).sum::<f64>();
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let am_trace: f64 = (0..n)
            .map(|i| (0..n).map(|l| a[i][l] * m[l][i]).sum::<f64>())
            .sum();
        c[n - k] = -am_trace / k as f64;
    }
    c
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &v)| v * i as f64)
        .collect()
}

/// All roots of a polynomial known to have only real roots, ascending, inside
/// `[-bound, bound]`. Roots of the derivative split the line into intervals
/// holding at most one root each, which are then bisected.
pub fn real_roots(c: &[f64], bound: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return vec![];
    }
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    let crit = real_roots(&derivative(c), bound);
    let mut edges = vec![-bound];
    edges.extend(crit.iter().copied());
    edges.push(bound);
    let mut roots = Vec::new();
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if poly_eval(c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    // a root of even multiplicity touches zero at a critical point
    for &x in &crit {
        if roots.len() < deg && poly_eval(c, x).abs() < 1e-13 {
            roots.push(x);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    let mut det = 0.0;
    for col in 0..n {
        if a[0][col] == 0.0 {
            continue;
        }
        let minor: Vec<Vec<f64>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * a[0][col] * cofactor_det(&minor);
    }
    det
}

/// Information matrix assembled entry by entry from the model terms, without
/// the library's basis or rank-one accumulation.
pub fn brute_information_matrix(
    points: &[Vec<f64>],
    weights: &[f64],
    second_order: bool,
) -> Vec<Vec<f64>> {
    let q = points[0].len();
    let terms: Vec<Vec<usize>> = {
        let mut t: Vec<Vec<usize>> = (0..q).map(|i| vec![i]).collect();
        if second_order {
            for i in 0..q {
                for j in (i + 1)..q {
                    t.push(vec![i, j]);
                }
            }
        }
        t
    };
    let term = |x: &[f64], t: &[usize]| t.iter().map(|&i| x[i]).product::<f64>();
    let p = terms.len();
    let mut m = vec![vec![0.0; p]; p];
    for (x, w) in points.iter().zip(weights) {
        for a in 0..p {
            for b in 0..p {
                m[a][b] += w * term(x, &terms[a]) * term(x, &terms[b]);
            }
        }
    }
    m
}
