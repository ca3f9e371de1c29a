//! Dense linear algebra over GF(2).

use std::fmt;

/// Row-major bit matrix, packed 64 columns per word.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form of a matrix with the transform that produced it.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced row echelon form `R`.
    pub form: F2Matrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Invertible `T` with `T * M = R`.
    pub transform: F2Matrix,
}

/// Solution set of `M x = b`: `particular + span(null_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<bool>,
    pub null_basis: Vec<Vec<bool>>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / 64];
        if b {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> Vec<bool> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| x[j] && self.get(i, j)).count() % 2 == 1)
            .collect()
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (dst, src) = (i * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        out
    }

    /// Row reduction to reduced echelon form, restricted to the first
    /// `limit` columns when choosing pivots.
    fn reduce(&mut self, limit: usize, mut track: Option<&mut F2Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, p);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                    if let Some(t) = track.as_deref_mut() {
                        t.xor_row(i, r);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn gauss(&self) -> Echelon {
        let mut form = self.clone();
        let mut transform = F2Matrix::identity(self.rows);
        let pivots = form.reduce(self.cols, Some(&mut transform));
        Echelon { rank: pivots.len(), form, pivots, transform }
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(self.cols, None).len()
    }

    /// Solve `M x = b`. Free variables are 0 in the particular solution and
    /// each null-space vector sets exactly one free variable.
    pub fn solve(&self, b: &[bool]) -> Option<Solution> {
        assert_eq!(b.len(), self.rows);
        let mut aug = F2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            let src = self.row_words(i);
            let dst = i * aug.stride;
            aug.data[dst..dst + src.len()].copy_from_slice(src);
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.reduce(self.cols, None);
        if (pivots.len()..self.rows).any(|i| aug.get(i, self.cols)) {
            return None;
        }
        let mut particular = vec![false; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = aug.get(r, self.cols);
        }
        Some(Solution { particular, null_basis: null_basis_from(&aug, &pivots, self.cols) })
    }

    /// Particular solutions (free variables 0) for several right-hand sides
    /// sharing one reduction.
    pub fn solve_many(&self, bs: &[Vec<bool>]) -> Vec<Option<Vec<bool>>> {
        let extra = bs.len();
        let mut aug = F2Matrix::zeros(self.rows, self.cols + extra);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            for (k, b) in bs.iter().enumerate() {
                assert_eq!(b.len(), self.rows);
                aug.set(i, self.cols + k, b[i]);
            }
        }
        let pivots = aug.reduce(self.cols, None);
        (0..extra)
            .map(|k| {
                let c = self.cols + k;
                if (pivots.len()..self.rows).any(|i| aug.get(i, c)) {
                    return None;
                }
                let mut x = vec![false; self.cols];
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = aug.get(r, c);
                }
                Some(x)
            })
            .collect()
    }

    pub fn null_space(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.reduce(self.cols, None);
        null_basis_from(&m, &pivots, self.cols)
    }
}

fn null_basis_from(reduced: &F2Matrix, pivots: &[usize], cols: usize) -> Vec<Vec<bool>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![false; cols];
            v[f] = true;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = reduced.get(r, f);
            }
            v
        })
        .collect()
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
