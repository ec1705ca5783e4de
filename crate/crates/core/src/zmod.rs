//! Linear algebra over `Z_m`.
//!
//! Row spans are put in Howell normal form, which is canonical over any
//! `Z_m` (two matrices have the same row span iff their Howell forms agree)
//! and, unlike a plain echelon form, lets one read off the sub-span of rows
//! that vanish on a leading block of columns. Kernels and solutions of
//! linear systems are computed from it. Quotients of subgroups of `Z_m^k`
//! are decomposed with a Smith reduction over `Z_m`.

use num_integer::Integer;

use crate::error::{Error, Result};

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    addmod(a, m - b % m, m)
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
fn xgcd(a: u64, b: u64) -> (u64, i128, i128) {
    if a != 0 && b.is_multiple_of(a) {
        return (a, 1, 0);
    }
    let e = (a as i128).extended_gcd(&(b as i128));
    (e.gcd as u64, e.x, e.y)
}

fn to_mod(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// A unit `u` of `Z_m` with `u·a ≡ gcd(a, m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let (g, s, _) = xgcd(a, m);
    if g == 0 {
        return 1;
    }
    let step = m / g;
    let mut u = to_mod(s, step.max(1));
    loop {
        if u.gcd(&m) == 1 {
            return u % m;
        }
        u += step;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZmMatrix {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl ZmMatrix {
    pub fn new(modulus: u64, cols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ModulusMismatch(0, 0));
        }
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % modulus).collect())
            .collect();
        Ok(ZmMatrix {
            modulus,
            cols,
            rows,
        })
    }

    pub fn from_signed(modulus: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| to_mod(x as i128, modulus)).collect())
            .collect();
        Self::new(modulus, cols, rows)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.cols);
        self.rows
            .push(row.into_iter().map(|x| x % self.modulus).collect());
    }

    pub fn howell_form(&self) -> ZmMatrix {
        ZmMatrix {
            modulus: self.modulus,
            cols: self.cols,
            rows: howell_rows(self.rows.clone(), self.cols, self.modulus),
        }
    }

    /// `{x : A x = 0}` as Howell-form generators.
    pub fn kernel(&self) -> ZmMatrix {
        let m = self.modulus;
        let h = self.compact_howell();
        let k = h.len();
        let n = self.cols;
        // [Hᵀ | I]: rows vanishing on the first k columns span the kernel
        let mut aug: Vec<Vec<u64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(k + n);
            row.extend(h.iter().map(|r| r[j]));
            row.extend((0..n).map(|i| u64::from(i == j) % m));
            aug.push(row);
        }
        let red = howell_rows(aug, k + n, m);
        let rows = red
            .into_iter()
            .filter(|r| r[..k].iter().all(|&x| x == 0))
            .map(|r| r[k..].to_vec())
            .collect();
        ZmMatrix {
            modulus: m,
            cols: n,
            rows: howell_rows(rows, n, m),
        }
    }

    /// Howell form built in chunks, keeping memory bounded for tall systems.
    fn compact_howell(&self) -> Vec<Vec<u64>> {
        let chunk = (2 * self.cols).max(64);
        let mut acc: Vec<Vec<u64>> = Vec::new();
        for block in self.rows.chunks(chunk) {
            acc.extend(block.iter().cloned());
            acc = howell_rows(acc, self.cols, self.modulus);
        }
        acc
    }

    /// Solves `A x = b`. Returns a particular solution and generators of the
    /// solution module of the homogeneous system, or `None` if infeasible.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Solution>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows.len()
            )));
        }
        let m = self.modulus;
        // unknowns (t, x) with −b·t + A·x = 0; feasible iff t = 1 is attainable
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, &bi)| {
                let mut row = Vec::with_capacity(self.cols + 1);
                row.push((m - bi % m) % m);
                row.extend_from_slice(r);
                row
            })
            .collect();
        let aug = ZmMatrix {
            modulus: m,
            cols: self.cols + 1,
            rows,
        };
        let ker = aug.kernel();
        let mut particular = None;
        let mut nullspace = Vec::new();
        for r in ker.rows {
            if r[0] != 0 {
                if r[0] == 1 % m {
                    particular = Some(r[1..].to_vec());
                }
            } else {
                nullspace.push(r[1..].to_vec());
            }
        }
        if m == 1 {
            particular = Some(vec![0; self.cols]);
        }
        Ok(particular.map(|particular| Solution {
            particular,
            nullspace,
        }))
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| {
                r.iter().zip(x).fold(0, |acc, (&a, &b)| {
                    addmod(acc, mulmod(a, b, self.modulus), self.modulus)
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u64>,
    pub nullspace: Vec<Vec<u64>>,
}

/// Howell normal form of the row span (zero rows dropped).
pub fn howell_rows(mut rows: Vec<Vec<u64>>, cols: usize, m: u64) -> Vec<Vec<u64>> {
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x %= m;
        }
    }
    let mut r = 0usize;
    for j in 0..cols {
        // gather the gcd of column j (rows r..) into row r
        let mut i = r;
        while i < rows.len() {
            if rows[i][j] == 0 {
                i += 1;
                continue;
            }
            if i == r || rows[r][j] == 0 {
                rows.swap(r, i);
                i += 1;
                continue;
            }
            let a = rows[r][j];
            let b = rows[i][j];
            let (g, s, t) = xgcd(a, b);
            let (s, t) = (to_mod(s, m), to_mod(t, m));
            let (bg, ag) = (b / g, a / g);
            let (top, rest) = rows.split_at_mut(i);
            let ri = &mut rest[0];
            let rr = &mut top[r];
            for c in j..cols {
                let x = rr[c];
                let y = ri[c];
                rr[c] = addmod(mulmod(s, x, m), mulmod(t, y, m), m);
                ri[c] = submod(mulmod(bg, x, m), mulmod(ag, y, m), m);
            }
            i += 1;
        }
        if r >= rows.len() || rows[r][j] == 0 {
            continue;
        }
        let u = normalizing_unit(rows[r][j], m);
        if u != 1 {
            for c in j..cols {
                rows[r][c] = mulmod(rows[r][c], u, m);
            }
        }
        let pivot = rows[r][j];
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[j] / pivot;
            if q != 0 {
                for c in j..cols {
                    row[c] = submod(row[c], mulmod(q, pivot_row[c], m), m);
                }
            }
        }
        let ann = m / pivot;
        if ann != m && ann != 0 {
            let extra: Vec<u64> = pivot_row.iter().map(|&x| mulmod(x, ann, m)).collect();
            if extra.iter().any(|&x| x != 0) {
                rows.push(extra);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Invariant factors (largest first, each dividing the previous) of
/// `span(sub) / span(rel)` inside `Z_m^k`, with one representative vector
/// per factor. `rel` must lie inside `span(sub)` for the result to be the
/// quotient; rows of `rel` outside it are projected away.
pub fn quotient_structure(
    sub: &[Vec<u64>],
    rel: &[Vec<u64>],
    k: usize,
    m: u64,
) -> Result<Vec<(u64, Vec<u64>)>> {
    let gens = howell_rows(sub.to_vec(), k, m);
    let rel = howell_rows(rel.to_vec(), k, m);
    let ng = gens.len();
    if ng == 0 {
        return Ok(vec![]);
    }
    // relations among the generators: a with Σ aᵢ gᵢ ∈ span(rel)
    let unknowns = ng + rel.len();
    let mut eqs: Vec<Vec<u64>> = vec![vec![0; unknowns]; k];
    for (c, eq) in eqs.iter_mut().enumerate() {
        for (i, g) in gens.iter().enumerate() {
            eq[i] = g[c];
        }
        for (j, w) in rel.iter().enumerate() {
            eq[ng + j] = (m - w[c]) % m;
        }
    }
    let ker = ZmMatrix::new(m, unknowns, eqs)?.kernel();
    let relations: Vec<Vec<u64>> = ker.rows.iter().map(|r| r[..ng].to_vec()).collect();
    let cyclic = smith_quotient(relations, ng, m);
    let mut parts: Vec<(u64, Vec<u64>)> = Vec::new();
    for (order, combo) in cyclic {
        if order <= 1 {
            continue;
        }
        let mut v = vec![0u64; k];
        for (i, &a) in combo.iter().enumerate() {
            if a != 0 {
                for c in 0..k {
                    v[c] = addmod(v[c], mulmod(a, gens[i][c], m), m);
                }
            }
        }
        parts.push((order, v));
    }
    Ok(to_invariant_factors(parts, m))
}

/// Smith reduction of `Z_m^k / rowspan(rel)`. Returns, for each new
/// generator, its order and its expression in the old generators.
pub fn smith_quotient(mut rel: Vec<Vec<u64>>, k: usize, m: u64) -> Vec<(u64, Vec<u64>)> {
    let mut qinv: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j) % m).collect())
        .collect();
    rel.retain(|r| r.iter().any(|&x| x % m != 0));
    let mut t = 0usize;
    let mut diag: Vec<u64> = Vec::new();
    while t < k && t < rel.len() {
        // pivot: smallest nonzero entry of the remaining block
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in rel.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        rel.swap(t, pi);
        if pj != t {
            for row in rel.iter_mut() {
                row.swap(t, pj);
            }
            qinv.swap(t, pj);
        }
        loop {
            let mut changed = false;
            // clear column t below the pivot with row operations
            for i in t + 1..rel.len() {
                let b = rel[i][t];
                if b == 0 {
                    continue;
                }
                let a = rel[t][t];
                let (g, s, tt) = xgcd(a, b);
                let (s, tt) = (to_mod(s, m), to_mod(tt, m));
                let (ag, bg) = (a / g, b / g);
                for c in 0..k {
                    let x = rel[t][c];
                    let y = rel[i][c];
                    rel[t][c] = addmod(mulmod(s, x, m), mulmod(tt, y, m), m);
                    rel[i][c] = submod(mulmod(bg, x, m), mulmod(ag, y, m), m);
                }
                changed = true;
            }
            // clear row t right of the pivot with column operations
            for j in t + 1..k {
                let b = rel[t][j];
                if b == 0 {
                    continue;
                }
                let a = rel[t][t];
                let (g, s, tt) = xgcd(a, b);
                let (s, tt) = (to_mod(s, m), to_mod(tt, m));
                let (ag, bg) = (a / g, b / g);
                for row in rel.iter_mut() {
                    let x = row[t];
                    let y = row[j];
                    row[t] = addmod(mulmod(s, x, m), mulmod(tt, y, m), m);
                    row[j] = submod(mulmod(ag, y, m), mulmod(bg, x, m), m);
                }
                // generators transform by the inverse column operation
                for c in 0..k {
                    let x = qinv[t][c];
                    let y = qinv[j][c];
                    qinv[t][c] = addmod(mulmod(ag, x, m), mulmod(bg, y, m), m);
                    qinv[j][c] = submod(mulmod(s, y, m), mulmod(tt, x, m), m);
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(rel[t][t]);
        t += 1;
    }
    (0..k)
        .map(|i| {
            let order = match diag.get(i) {
                Some(&d) if d != 0 => d.gcd(&m),
                _ => m,
            };
            (order, qinv[i].clone())
        })
        .collect()
}

/// Regroups cyclic pieces `(order, generator)` into invariant-factor form.
fn to_invariant_factors(parts: Vec<(u64, Vec<u64>)>, m: u64) -> Vec<(u64, Vec<u64>)> {
    if parts.is_empty() {
        return vec![];
    }
    let k = parts[0].1.len();
    let mut by_prime: Vec<(u64, Vec<(u64, Vec<u64>)>)> = Vec::new();
    for (order, v) in parts {
        for p in crate::grp::prime_factors(order) {
            let mut pe = 1;
            let mut rest = order;
            while rest % p == 0 {
                pe *= p;
                rest /= p;
            }
            let w: Vec<u64> = v.iter().map(|&x| mulmod(x, rest, m)).collect();
            match by_prime.iter_mut().find(|(q, _)| *q == p) {
                Some((_, list)) => list.push((pe, w)),
                None => by_prime.push((p, vec![(pe, w)])),
            }
        }
    }
    for (_, list) in by_prime.iter_mut() {
        list.sort_by(|a, b| b.0.cmp(&a.0));
    }
    let rank = by_prime.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    (0..rank)
        .map(|i| {
            let mut d = 1u64;
            let mut v = vec![0u64; k];
            for (_, list) in &by_prime {
                if let Some((pe, w)) = list.get(i) {
                    d *= pe;
                    for c in 0..k {
                        v[c] = addmod(v[c], w[c], m);
                    }
                }
            }
            (d, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(rows: &[Vec<u64>], cols: usize, m: u64) -> std::collections::BTreeSet<Vec<u64>> {
        // brute-force enumeration of all Z_m-combinations
        let mut out = std::collections::BTreeSet::from([vec![0u64; cols]]);
        loop {
            let mut next = out.clone();
            for v in &out {
                for r in rows {
                    let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % m).collect();
                    next.insert(w);
                }
            }
            if next.len() == out.len() {
                return out;
            }
            out = next;
        }
    }

    #[test]
    fn scalar_congruences() {
        let a = ZmMatrix::new(4, 1, vec![vec![2]]).unwrap();
        assert!(a.solve(&[1]).unwrap().is_none());
        let sol = a.solve(&[2]).unwrap().unwrap();
        let all: std::collections::BTreeSet<u64> =
            (0..4).filter(|&x| a.mul_vec(&[x]) == vec![2]).collect();
        assert_eq!(all, [1, 3].into());
        assert!(all.contains(&sol.particular[0]));
        assert_eq!(sol.nullspace, vec![vec![2]]);
    }

    #[test]
    fn identity_system() {
        let a = ZmMatrix::new(6, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let sol = a.solve(&[5, 2, 3]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![5, 2, 3]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn howell_is_canonical_on_equal_spans() {
        let m = 12;
        let a = ZmMatrix::new(m, 3, vec![vec![4, 6, 1], vec![2, 0, 3]]).unwrap();
        let b = ZmMatrix::new(m, 3, vec![vec![2, 0, 3], vec![6, 6, 4], vec![8, 0, 0]]).unwrap();
        assert_eq!(span(a.rows(), 3, m), span(b.rows(), 3, m));
        assert_eq!(a.howell_form(), b.howell_form());
        assert_eq!(span(a.howell_form().rows(), 3, m), span(a.rows(), 3, m));
    }

    #[test]
    fn kernel_matches_brute_force() {
        let m = 8;
        let a = ZmMatrix::new(m, 3, vec![vec![2, 4, 0], vec![0, 2, 6]]).unwrap();
        let ker = a.kernel();
        let brute: std::collections::BTreeSet<Vec<u64>> = (0..m)
            .flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| vec![x, y, z])))
            .filter(|v| a.mul_vec(v).iter().all(|&c| c == 0))
            .collect();
        assert_eq!(span(ker.rows(), 3, m), brute);
    }

    #[test]
    fn quotient_invariants() {
        // Z_12^2 / <(2,0),(0,3)> = Z_2 × Z_3 = Z_6
        let q = quotient_structure(&[vec![1, 0], vec![0, 1]], &[vec![2, 0], vec![0, 3]], 2, 12)
            .unwrap();
        assert_eq!(q.iter().map(|x| x.0).collect::<Vec<_>>(), vec![6]);
        // Z_8^3 / <(4,0,0),(0,2,0)> = Z_4 × Z_2 × Z_8
        let q = quotient_structure(
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            &[vec![4, 0, 0], vec![0, 2, 0]],
            3,
            8,
        )
        .unwrap();
        assert_eq!(q.iter().map(|x| x.0).collect::<Vec<_>>(), vec![8, 4, 2]);
        // a subgroup quotient: <(2,2)> / <(4,4)> in Z_8^2 = Z_2
        let q = quotient_structure(&[vec![2, 2]], &[vec![4, 4]], 2, 8).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].0, 2);
        assert_eq!(q[0].1.iter().filter(|&&x| x != 0).count(), 2);
    }
}
