use num_traits::Zero;

use super::rational::Rational;

/// Solves `rows * unknowns = rhs` exactly. Returns one solution (free
/// unknowns set to zero) or `None` if the system is inconsistent.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], unknowns: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.resize(unknowns, Rational::zero());
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = Rational::from_integer(1.into()) / &m[r][col];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = m[i][unknowns].clone();
    }
    Some(sol)
}
