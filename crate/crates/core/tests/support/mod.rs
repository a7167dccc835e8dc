//! Test-only oracles for the p-local cokernel, independent of the Smith
//! normal form implementation they check.

use std::collections::HashSet;

/// p-adic valuation of a nonzero i128.
pub fn nu(mut k: i128, p: u64) -> u32 {
    assert!(k != 0);
    k = k.abs();
    let p = p as i128;
    let mut e = 0;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    e
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut acc: i128 = 0;
            for (j, &top) in m[0].iter().enumerate() {
                if top == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += sign * top * det_i128(&minor);
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Brute-force cokernel oracle via determinantal divisors: the gcd `g_k` of
/// all `k x k` minors satisfies `nu_p(d_k) = nu_p(g_k) - nu_p(g_{k-1})` for
/// the elementary divisors `d_k`. Exhaustive minor enumeration, exact i128
/// arithmetic, no elimination.
pub fn oracle_determinantal(m: &[Vec<i64>], p: u64) -> (usize, Vec<u32>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let rmax = rows.min(cols);
    let mut rank = 0;
    let mut torsion = Vec::new();
    let mut prev_nu = 0u32;
    for k in 1..=rmax {
        let mut g: i128 = 0;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                    .collect();
                let d = det_i128(&minor);
                g = gcd(g, d);
            }
        }
        if g == 0 {
            break;
        }
        rank = k;
        let nu_g = nu(g, p);
        if nu_g > prev_nu {
            torsion.push(nu_g - prev_nu);
        }
        prev_nu = nu_g;
    }
    torsion.sort_unstable();
    (rows - rank, torsion)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Literal finite-quotient enumeration for a square nonsingular matrix:
/// `det * Z^n` lies in the column lattice, so the quotient is enumerated on
/// representatives mod `|det|`. Counting solutions of `p^j x = 0` in the
/// quotient recovers the p-part exponents. Returns None when `|det|^n` is
/// too large to enumerate.
pub fn oracle_enumeration(m: &[Vec<i64>], p: u64, cap: u64) -> Option<(usize, Vec<u32>)> {
    let n = m.len();
    if n == 0 || m[0].len() != n {
        return None;
    }
    let mi: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let d = det_i128(&mi).unsigned_abs();
    if d == 0 {
        return None;
    }
    let total = d.checked_pow(n as u32)?;
    if total > cap as u128 {
        return None;
    }
    let d = d as i128;
    // subgroup generated by the columns mod d, by closure
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| mi[i][j].rem_euclid(d)).collect())
        .collect();
    let mut subgroup: HashSet<Vec<i128>> = HashSet::new();
    let mut frontier = vec![vec![0i128; n]];
    subgroup.insert(frontier[0].clone());
    while let Some(v) = frontier.pop() {
        for c in &cols {
            let w: Vec<i128> = v
                .iter()
                .zip(c)
                .map(|(a, b)| (a + b).rem_euclid(d))
                .collect();
            if subgroup.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    // count p^j-torsion classes: each quotient class has |subgroup|
    // representatives among the d^n vectors
    let mut exponents = Vec::new();
    let mut prev_t = 0u32;
    let mut j = 1u32;
    loop {
        let pj = (p as i128).pow(j);
        let mut count: u128 = 0;
        let mut idx = vec![0i128; n];
        loop {
            let scaled: Vec<i128> = idx.iter().map(|&x| (x * pj).rem_euclid(d)).collect();
            if subgroup.contains(&scaled) {
                count += 1;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < d {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        let classes = count / subgroup.len() as u128;
        // classes = p^{t_j} with t_j = sum_i min(e_i, j)
        let mut t = 0u32;
        let mut c = classes;
        while c % p as u128 == 0 {
            c /= p as u128;
            t += 1;
        }
        assert_eq!(c, 1, "torsion count is not a p-power");
        if t == prev_t {
            break;
        }
        // #{i : e_i >= j} = t_j - t_{j-1}
        let ge_j = t - prev_t;
        exponents.push(ge_j);
        prev_t = t;
        j += 1;
    }
    // exponents[j-1] = #{i : e_i >= j}; convert to the multiset
    let mut out = Vec::new();
    for (j, &count) in exponents.iter().enumerate() {
        let next = exponents.get(j + 1).copied().unwrap_or(0);
        for _ in 0..(count - next) {
            out.push(j as u32 + 1);
        }
    }
    out.sort_unstable();
    Some((0, out))
}
