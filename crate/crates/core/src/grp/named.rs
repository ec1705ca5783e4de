//! Small named groups used by tests, examples and the CLI.

use super::{closure, FiniteGroup, DEFAULT_CLOSURE_BOUND};

/// `Z_{d₁} × … × Z_{d_k}` with mixed-radix indexing, first factor least
/// significant. Labels are coordinate tuples such as `(1,0)`.
pub fn abelian(factors: &[u64]) -> FiniteGroup {
    let dims: Vec<usize> = factors.iter().map(|&d| d as usize).collect();
    let n: usize = dims.iter().product();
    let coords = |mut x: usize| {
        let mut c = Vec::with_capacity(dims.len());
        for &d in &dims {
            c.push(x % d);
            x /= d;
        }
        c
    };
    let index = |c: &[usize]| {
        let mut x = 0;
        for (i, &d) in dims.iter().enumerate().rev() {
            x = x * d + c[i];
        }
        x
    };
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        let ca = coords(a);
        for b in 0..n {
            let cb = coords(b);
            let s: Vec<usize> = ca
                .iter()
                .zip(&cb)
                .zip(&dims)
                .map(|((x, y), d)| (x + y) % d)
                .collect();
            mul[a * n + b] = index(&s) as u32;
        }
    }
    let mut generators = Vec::new();
    let mut stride = 1usize;
    for &d in &dims {
        if d > 1 {
            generators.push(stride);
        }
        stride *= d;
    }
    let labels = (0..n)
        .map(|x| {
            let c: Vec<String> = coords(x).iter().map(|v| v.to_string()).collect();
            format!("({})", c.join(","))
        })
        .collect();
    FiniteGroup::from_trusted_table(n, mul, generators, Some(labels))
}

pub fn cyclic(n: u64) -> FiniteGroup {
    abelian(&[n])
}

fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    let id: Vec<usize> = (0..degree).collect();
    // product a·b acts as "apply b, then a"
    let c = closure(
        id,
        gens,
        |a: &Vec<usize>, b: &Vec<usize>| b.iter().map(|&i| a[i]).collect(),
        |a: &Vec<usize>| a.clone(),
        DEFAULT_CLOSURE_BOUND,
    )
    .expect("small permutation group");
    c.group
}

/// Symmetric group on `k` points, generated by a transposition and a `k`-cycle.
pub fn symmetric(k: usize) -> FiniteGroup {
    assert!(k >= 2);
    let mut t: Vec<usize> = (0..k).collect();
    t.swap(0, 1);
    let cyc: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    permutation_group(k, &[t, cyc])
}

/// Dihedral group of order `2k`.
pub fn dihedral(k: usize) -> FiniteGroup {
    let rot: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let refl: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
    permutation_group(k, &[rot, refl])
}

/// Quaternion group `Q8`, realised as a permutation group on its own
/// elements `±1, ±i, ±j, ±k`.
pub fn quaternion() -> FiniteGroup {
    // elements encoded as (sign, unit) with unit 0=1,1=i,2=j,3=k
    let mulq = |a: (i8, usize), b: (i8, usize)| -> (i8, usize) {
        const T: [[(i8, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let (s, u) = T[a.1][b.1];
        (a.0 * b.0 * s, u)
    };
    let enc = |q: (i8, usize)| q.1 * 2 + usize::from(q.0 < 0);
    let dec = |x: usize| (if x % 2 == 1 { -1i8 } else { 1 }, x / 2);
    let left = |q: (i8, usize)| -> Vec<usize> { (0..8).map(|x| enc(mulq(q, dec(x)))).collect() };
    permutation_group(8, &[left((1, 1)), left((1, 2))])
}
