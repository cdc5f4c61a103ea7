//! Gauss-Jordan elimination over GF(2) with row-combination tracking.

/// Packed bit vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

struct Row {
    coeffs: BitRow,
    rhs: bool,
    /// Which original equations were XOR-ed into this row.
    history: BitRow,
}

/// Outcome of solving `M s = b` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Gf2Solution {
    /// A solution with every free variable set to 0.
    Solution(Vec<bool>),
    /// Indices of original equations whose coefficient rows sum to zero
    /// while their right-hand sides sum to one.
    Inconsistent(Vec<usize>),
}

/// Solves `M s = b` where each equation lists the columns with a 1.
///
/// Pivots are chosen column by column from lowest index; within a column,
/// the lowest-positioned remaining row is taken. Free variables are set to 0,
/// so the output is a deterministic function of the input.
pub(crate) fn solve(columns: usize, equations: &[(Vec<usize>, bool)]) -> Gf2Solution {
    let rows_n = equations.len();
    let mut rows: Vec<Row> = equations
        .iter()
        .enumerate()
        .map(|(r, (cols, rhs))| {
            let mut coeffs = BitRow::zeros(columns);
            for &c in cols {
                coeffs.flip(c);
            }
            let mut history = BitRow::zeros(rows_n);
            history.set(r);
            Row {
                coeffs,
                rhs: *rhs,
                history,
            }
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for col in 0..columns {
        if next == rows_n {
            break;
        }
        let Some(found) = (next..rows_n).find(|&r| rows[r].coeffs.get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let (head, tail) = rows.split_at_mut(next);
        let (pivot, tail) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row.coeffs.get(col) {
                row.coeffs.xor_assign(&pivot.coeffs);
                row.rhs ^= pivot.rhs;
                row.history.xor_assign(&pivot.history);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }

    if let Some(bad) = rows[next..].iter().find(|r| r.rhs) {
        debug_assert!(bad.coeffs.is_zero());
        return Gf2Solution::Inconsistent(bad.history.ones().collect());
    }

    let mut solution = vec![false; columns];
    for (row, &col) in rows.iter().zip(&pivot_cols) {
        solution[col] = row.rhs;
    }
    Gf2Solution::Solution(solution)
}
