use crate::coding::field::Field;

/// Rank by Gaussian elimination; destroys `m`.
pub(crate) fn rank<F: Field>(m: &mut [Vec<F>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for i in r + 1..m.len() {
            let f = m[i][c] * inv;
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let x = m[r][j];
                m[i][j] -= f * x;
            }
        }
        r += 1;
    }
    r
}

/// Solves `A x = b` where `A` is `rows x k` and each unknown and right-hand
/// side entry is a symbol vector. Returns `None` if `A` lacks full column
/// rank or the system is inconsistent.
pub(crate) fn solve<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<Vec<F>>) -> Option<Vec<Vec<F>>> {
    let rows = a.len();
    let k = a.first().map_or(0, Vec::len);
    for c in 0..k {
        let p = (c..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for j in c..k {
            a[c][j] *= inv;
        }
        for x in &mut b[c] {
            *x *= inv;
        }
        for i in 0..rows {
            let f = a[i][c];
            if i == c || f.is_zero() {
                continue;
            }
            for j in c..k {
                let x = a[c][j];
                a[i][j] -= f * x;
            }
            let (pivot, row) = if i < c {
                let (lo, hi) = b.split_at_mut(c);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = b.split_at_mut(i);
                (&lo[c], &mut hi[0])
            };
            for (y, &x) in row.iter_mut().zip(pivot.iter()) {
                *y -= f * x;
            }
        }
    }
    if b[k..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return None;
    }
    b.truncate(k);
    Some(b)
}
