//! Small dense interval linear algebra.

use crate::interval::Interval;

pub type IntervalMatrix = Vec<Vec<Interval>>;

/// Determinant by the Leibniz expansion (fine for the `s <= 6` seen here),
/// falling back to elimination for larger sizes.
pub fn det(a: &IntervalMatrix, wp: u32) -> Option<Interval> {
    let n = a.len();
    if n == 0 {
        return Some(Interval::one());
    }
    if n > 6 {
        return eliminate(a, &vec![Vec::new(); n], wp).map(|(_, d)| d);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Interval::zero();
    permutations(&mut perm, 0, &mut |p, sign| {
        let mut term = Interval::from_int(sign);
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&a[i][j]).round(wp);
        }
        acc = acc.add(&term).round(wp);
    });
    Some(acc)
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], i64)) {
    fn sign(p: &[usize]) -> i64 {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
    if k == p.len() {
        let s = sign(p);
        f(p, s);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Solves `A X = B` by Gaussian elimination with the pivot of largest
/// mignitude. Returns `None` when every candidate pivot contains zero.
pub fn solve(a: &IntervalMatrix, b: &IntervalMatrix, wp: u32) -> Option<IntervalMatrix> {
    eliminate(a, b, wp).map(|(x, _)| x)
}

fn eliminate(
    a: &IntervalMatrix,
    b: &IntervalMatrix,
    wp: u32,
) -> Option<(IntervalMatrix, Interval)> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Interval>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let mut det = Interval::one();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !aug[r][col].contains_zero())
            .max_by(|&x, &y| aug[x][col].mig().cmp(&aug[y][col].mig()).then(y.cmp(&x)))?;
        if piv != col {
            aug.swap(piv, col);
            det = det.neg();
        }
        let p = aug[col][col].clone();
        det = det.mul(&p).round(wp);
        for r in col + 1..n {
            let factor = aug[r][col].div(&p, wp)?;
            for c in col..n + m {
                let v = aug[r][c].sub(&factor.mul(&aug[col][c])).round(wp);
                aug[r][c] = v;
            }
        }
    }
    let mut x = vec![vec![Interval::zero(); m]; n];
    for c in 0..m {
        for r in (0..n).rev() {
            let mut acc = aug[r][n + c].clone();
            for k in r + 1..n {
                acc = acc.sub(&aug[r][k].mul(&x[k][c])).round(wp);
            }
            x[r][c] = acc.div(&aug[r][r], wp)?;
        }
    }
    Some((x, det))
}
