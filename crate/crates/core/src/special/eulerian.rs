//! Eulerian numbers by the standard triangle recurrence, with a cached table.

use rug::Integer;
use std::sync::Mutex;

static ROWS: Mutex<Vec<Vec<Integer>>> = Mutex::new(Vec::new());

/// Eulerian number <n, k>: permutations of n elements with exactly k descents.
///
/// Zero outside 0 <= k <= n-1, except <0, 0> = 1.
pub fn eulerian(n: usize, k: i64) -> Integer {
    if n == 0 {
        return if k == 0 { Integer::from(1) } else { Integer::new() };
    }
    if k < 0 || k as usize >= n {
        return Integer::new();
    }
    let mut rows = ROWS.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![Integer::from(1)]); // row 0
        rows.push(vec![Integer::from(1)]); // row 1: <1,0>
    }
    while rows.len() <= n {
        let m = rows.len();
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            // <m, j> = (j+1) <m-1, j> + (m-j) <m-1, j-1>
            let mut v = Integer::new();
            if j < prev.len() {
                v += Integer::from(&prev[j] * Integer::from(j + 1));
            }
            if j >= 1 && j - 1 < prev.len() {
                v += Integer::from(&prev[j - 1] * Integer::from(m - j));
            }
            row.push(v);
        }
        rows.push(row);
    }
    rows[n].get(k as usize).cloned().unwrap_or_default()
}
