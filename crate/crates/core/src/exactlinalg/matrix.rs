use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;

use super::field::{Field, Integers, Ring};
use super::LinalgError;

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_vec(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { ring, rows, cols, data })
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let data = vec![ring.zero(); rows * cols];
        Self { ring, rows, cols, data }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = m.ring.one();
        }
        m
    }

    /// Builds a matrix from rows of small integers. Panics on ragged input.
    pub fn from_i64_rows(ring: R, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&v| ring.from_i64(v)).collect();
        Self { ring, rows: rows.len(), cols, data }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [R::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { ring: self.ring.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self { ring: self.ring.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(cols.len() * self.rows);
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Self { ring: self.ring.clone(), rows: self.rows, cols: cols.len(), data }
    }

    /// Vertical concatenation.
    pub fn vstack(mats: &[&Matrix<R>]) -> Result<Self, LinalgError> {
        let first = mats.first().ok_or(LinalgError::EmptyStack)?;
        let cols = first.cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in mats {
            if m.cols != cols {
                return Err(LinalgError::Shape(format!("stacking {} columns onto {cols}", m.cols)));
            }
            if m.ring != first.ring {
                return Err(LinalgError::RingMismatch(m.ring.tag(), first.ring.tag()));
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(Self { ring: first.ring.clone(), rows, cols, data })
    }

    pub fn mul_vec(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(self.ring.zero(), |acc, (a, b)| {
                    if self.ring.is_zero(a) || self.ring.is_zero(b) {
                        acc
                    } else {
                        self.ring.add(&acc, &self.ring.mul(a, b))
                    }
                })
            })
            .collect()
    }

    /// `vᵀ M`.
    pub fn left_mul_vec(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![self.ring.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if self.ring.is_zero(vi) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !self.ring.is_zero(a) {
                    *o = self.ring.add(o, &self.ring.mul(vi, a));
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix<R>) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = &self[(i, t)];
                if self.ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(t, j)];
                    if !self.ring.is_zero(b) {
                        let prod = self.ring.mul(a, b);
                        out[(i, j)] = self.ring.add(&out[(i, j)], &prod);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.ring.is_zero(a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self.ring.is_zero(&self[(i, i)]))
    }

    /// Converts entries into another ring.
    pub fn map_into<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Tab-separated dump with a `field=<tag>` header line.
    pub fn to_dump(&self) -> String {
        let mut out = format!("field={}\n", self.ring.tag());
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            let _ = writeln!(out, "{}", line.join("\t"));
        }
        out
    }

    /// Parses the output of [`Matrix::to_dump`]. The header tag must match
    /// `ring`. A dump with no data lines is a `0x0` matrix.
    pub fn from_dump(ring: R, text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| LinalgError::Parse("empty dump".into()))?;
        let tag = header
            .strip_prefix("field=")
            .ok_or_else(|| LinalgError::Parse(format!("bad header {header:?}")))?;
        if tag != ring.tag() {
            return Err(LinalgError::RingMismatch(tag.to_string(), ring.tag()));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for line in lines.filter(|l| !l.is_empty()) {
            let row: Vec<R::Elem> = line
                .split('\t')
                .map(|s| ring.parse_elem(s).ok_or_else(|| LinalgError::Parse(format!("bad entry {s:?}"))))
                .collect::<Result<_, _>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(LinalgError::Parse(format!("row {rows} has {} entries, expected {c}", row.len())))
                }
                _ => {}
            }
            data.extend(row);
            rows += 1;
        }
        Self::from_vec(ring, rows, cols.unwrap_or(0), data)
    }
}

impl Matrix<Integers> {
    /// Reduces an integer matrix into any ring (e.g. `GF(q)` or `Q`).
    pub fn reduce<S: Ring>(&self, target: &S) -> Matrix<S> {
        self.map_into(target, |v: &BigInt| target.from_integer(v))
    }
}

impl<R: Ring> Index<(usize, usize)> for Matrix<R> {
    type Output = R::Elem;

    fn index(&self, (i, j): (usize, usize)) -> &R::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Ring> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form and its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// Which kernel of a matrix `M`: `M v = 0` (right) or `vᵀ M = 0` (left).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSide {
    Left,
    Right,
}

/// A basis of a kernel, over the matrix's own field.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis<F: Field> {
    pub side: KernelSide,
    pub vectors: Vec<Vec<F::Elem>>,
}

impl<F: Field> KernelBasis<F> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl<F: Field> Matrix<F> {
    /// Gauss–Jordan elimination.
    pub fn echelon(&self) -> Echelon<F> {
        let f = self.ring.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(&m[(r, c)]).expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if !f.is_zero(&m[(r, j)]) {
                        let t = f.mul(&factor, &m[(r, j)]);
                        m[(i, j)] = f.sub(&m[(i, j)], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { rref: m, pivots }
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        self.ring.rank_of(self)
    }

    /// Basis of the right kernel (`M v = 0`) or left kernel (`vᵀ M = 0`).
    /// The left kernel is computed as the right kernel of an explicit
    /// transpose.
    pub fn kernel_basis(&self, side: KernelSide) -> KernelBasis<F> {
        let vectors = match side {
            KernelSide::Right => self.right_kernel_vectors(),
            KernelSide::Left => self.transpose().right_kernel_vectors(),
        };
        KernelBasis { side, vectors }
    }

    fn right_kernel_vectors(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.ring;
        let Echelon { rref, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(&rref[(r, free)]);
                }
                v
            })
            .collect()
    }
}

/// Incrementally maintained row space, used for matroid rank and closure
/// queries where rows arrive one at a time.
#[derive(Clone, Debug)]
pub struct RowSpan<F: Field> {
    field: F,
    width: usize,
    basis: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> RowSpan<F> {
    pub fn new(field: F, width: usize) -> Self {
        Self { field, width, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, row: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(row.len(), self.width, "row width");
        let f = &self.field;
        let mut v = row.to_vec();
        for (pc, b) in &self.basis {
            if f.is_zero(&v[*pc]) {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, row: &[F::Elem]) -> bool {
        self.reduce(row).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `row`; returns whether it increased the rank.
    pub fn insert(&mut self, row: &[F::Elem]) -> bool {
        let f = self.field.clone();
        let mut v = self.reduce(row);
        let Some(pc) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pc]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.basis.push((pc, v));
        true
    }
}

/// Rank of the vertical stack of `mats`; `dim ⋂ ker mats[i] = cols - rank`.
pub fn stack_rank<F: Field>(mats: &[Matrix<F>]) -> Result<usize, LinalgError> {
    let refs: Vec<&Matrix<F>> = mats.iter().collect();
    Ok(Matrix::vstack(&refs)?.rank())
}
