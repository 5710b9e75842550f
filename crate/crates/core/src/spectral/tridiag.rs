//! Symmetric tridiagonal eigen-helpers.

/// Number of eigenvalues of the symmetric tridiagonal matrix `(d, e)`
/// strictly below `x` (Sturm sequence via the LDL^T pivots).
pub(crate) fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    let tiny = f64::MIN_POSITIVE.sqrt();
    for i in 0..d.len() {
        if i > 0 {
            q = d[i] - x - e[i - 1] * e[i - 1] / q;
        }
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `index`-th smallest eigenvalue (0-based) by bisection on the Sturm
/// count.
pub(crate) fn kth_eigenvalue(d: &[f64], e: &[f64], index: usize) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `(T - shift I) x = b` for symmetric tridiagonal `T = (d, e)`
/// by Gaussian elimination with partial pivoting.
pub(crate) fn solve_shifted(d: &[f64], e: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    // Row i holds (diag, super, super2) after elimination.
    let mut a0: Vec<f64> = d.iter().map(|v| v - shift).collect();
    let mut a1: Vec<f64> = (0..n).map(|i| if i + 1 < n { e[i] } else { 0.0 }).collect();
    let mut a2 = vec![0.0; n];
    let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { e[i - 1] } else { 0.0 }).collect();
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * d.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n - 1 {
        let l = sub[i + 1];
        if l.abs() > a0[i].abs() {
            // Swap rows i and i+1.
            let (r0, r1, r2) = (a0[i], a1[i], a2[i]);
            a0[i] = l;
            a1[i] = a0[i + 1];
            a2[i] = a1[i + 1];
            sub[i + 1] = r0;
            a0[i + 1] = r1;
            a1[i + 1] = r2;
            rhs.swap(i, i + 1);
            let f = sub[i + 1] / a0[i];
            a0[i + 1] -= f * a1[i];
            a1[i + 1] -= f * a2[i];
            rhs[i + 1] -= f * rhs[i];
        } else {
            if a0[i] == 0.0 {
                a0[i] = tiny;
            }
            let f = l / a0[i];
            a0[i + 1] -= f * a1[i];
            a1[i + 1] -= f * a2[i];
            rhs[i + 1] -= f * rhs[i];
        }
        sub[i + 1] = 0.0;
    }
    if a0[n - 1] == 0.0 {
        a0[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= a1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= a2[i] * x[i + 2];
        }
        x[i] = s / a0[i];
    }
    x
}

pub(crate) fn tridiag_apply(d: &[f64], e: &[f64], v: &[f64]) -> Vec<f64> {
    let n = d.len();
    (0..n)
        .map(|i| {
            let mut s = d[i] * v[i];
            if i > 0 {
                s += e[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += e[i] * v[i + 1];
            }
            s
        })
        .collect()
}
