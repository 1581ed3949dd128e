//! Dense exact linear algebra over Q(ζ_N).
//!
//! Vectors are columns; a [`CycMatrix`] acts by `m · v`. Subspaces store a
//! reduced row-echelon basis, which makes equal subspaces bit-identical.

use std::fmt;

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};

pub type Vector = Vec<CycNumber>;

pub fn zero_vector(conductor: u32, n: usize) -> Vector {
    vec![CycNumber::zero(conductor); n]
}

/// Parses comma-separated entries into Q(ζ_N). An entry without a
/// conductor suffix is read in Q(ζ_N) itself, so `z` means ζ_N.
pub fn parse_vector(spec: &str, conductor: u32) -> Result<Vector> {
    spec.split(',')
        .map(|e| {
            let e = e.trim();
            let x: CycNumber = if e.contains("(N=") {
                e.parse()?
            } else {
                format!("{e} (N={conductor})").parse()?
            };
            if conductor % x.conductor() != 0 {
                return Err(Error::Parse(format!("'{e}' does not lie in Q(ζ_{conductor})")));
            }
            Ok(x.lift(conductor))
        })
        .collect()
}

pub fn is_zero_vector(v: &[CycNumber]) -> bool {
    v.iter().all(CycNumber::is_zero)
}

pub fn scale_vector(c: &CycNumber, v: &[CycNumber]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn add_vectors(a: &[CycNumber], b: &[CycNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a − c·b`, skipping zero entries of `b`.
fn axpy_neg(a: &mut [CycNumber], c: &CycNumber, b: &[CycNumber]) {
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x -= &(c * y);
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    data: Vec<CycNumber>,
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix {}x{} (N={})", self.rows, self.cols, self.conductor)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CycMatrix {
    pub fn zeros(conductor: u32, rows: usize, cols: usize) -> Self {
        CycMatrix {
            rows,
            cols,
            conductor,
            data: vec![CycNumber::zero(conductor); rows * cols],
        }
    }

    pub fn identity(conductor: u32, n: usize) -> Self {
        let mut m = Self::zeros(conductor, n, n);
        for i in 0..n {
            m.data[i * n + i] = CycNumber::one(conductor);
        }
        m
    }

    /// Builds a matrix from rows, lifting all entries to a common conductor
    /// (at least `conductor`).
    pub fn from_rows(conductor: u32, cols: usize, rows: &[Vector]) -> Self {
        let n = rows
            .iter()
            .flatten()
            .fold(conductor, |acc, x| num_integer::lcm(acc, x.conductor()));
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|x| x.lift(n)));
        }
        CycMatrix {
            rows: rows.len(),
            cols,
            conductor: n,
            data,
        }
    }

    pub fn from_fn(
        conductor: u32,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycNumber,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c).lift(conductor));
            }
        }
        CycMatrix {
            rows,
            cols,
            conductor,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNumber {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNumber) {
        assert!(
            self.conductor % v.conductor() == 0,
            "entry conductor {} does not divide matrix conductor {}",
            v.conductor(),
            self.conductor
        );
        self.data[r * self.cols + c] = v.lift(self.conductor);
    }

    pub fn row(&self, r: usize) -> &[CycNumber] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Re-expresses all entries in Q(ζ_m), m a multiple of the conductor.
    pub fn lift(&self, m: u32) -> CycMatrix {
        if m == self.conductor {
            return self.clone();
        }
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: m,
            data: self.data.iter().map(|x| x.lift(m)).collect(),
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.conductor, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> CycNumber {
        let mut t = CycNumber::zero(self.conductor);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn mul_vec(&self, v: &[CycNumber]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let n = v
            .iter()
            .fold(self.conductor, |acc, x| num_integer::lcm(acc, x.conductor()));
        (0..self.rows)
            .map(|r| {
                let mut acc = CycNumber::zero(n);
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let n = num_integer::lcm(self.conductor, other.conductor);
        let mut out = CycMatrix::zeros(n, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * other.cols + c;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNumber) -> CycMatrix {
        let n = num_integer::lcm(self.conductor, c.conductor());
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let n = num_integer::lcm(self.conductor, other.conductor);
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CycMatrix) -> CycMatrix {
        let n = num_integer::lcm(self.conductor, other.conductor);
        let (r2, c2) = (other.rows, other.cols);
        CycMatrix::from_fn(n, self.rows * r2, self.cols * c2, |r, c| {
            self.get(r / r2, c / c2) * other.get(r % r2, c % c2)
        })
    }

    /// Block-diagonal matrix with the given blocks in order.
    pub fn block_diagonal(conductor: u32, blocks: &[&CycMatrix]) -> CycMatrix {
        let n = blocks
            .iter()
            .fold(conductor, |acc, b| num_integer::lcm(acc, b.conductor));
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = CycMatrix::zeros(n, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    let x = b.get(r, c);
                    if !x.is_zero() {
                        out.data[(r0 + r) * cols + c0 + c] = x.lift(n);
                    }
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row-echelon form and rank.
    pub fn rref(&self) -> (CycMatrix, usize) {
        let (rows, pivots) = rref_rows(self.conductor, self.cols, self.row_vectors());
        let rank = pivots.len();
        let mut out = CycMatrix::from_rows(self.conductor, self.cols, &rows);
        out.rows = rows.len();
        let pad = self.rows - rank;
        if pad > 0 {
            out.data
                .extend(std::iter::repeat(CycNumber::zero(self.conductor)).take(pad * self.cols));
            out.rows = self.rows;
        }
        (out, rank)
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.conductor, self.cols, self.row_vectors()).1.len()
    }

    /// Basis of the right kernel {x : self · x = 0}.
    pub fn null_space(&self) -> Vec<Vector> {
        let (rows, pivots) = rref_rows(self.conductor, self.cols, self.row_vectors());
        null_space_of_rref(self.conductor, self.cols, &rows, &pivots)
    }

    /// Eigenspace {x : self · x = λx}, or None when it is zero.
    pub fn eigenspace(&self, lambda: &CycNumber) -> Option<Subspace> {
        let shifted = self.add(&CycMatrix::identity(self.conductor, self.rows).scale(&-lambda.clone()));
        let kernel = shifted.null_space();
        if kernel.is_empty() {
            None
        } else {
            Some(Subspace::span(self.conductor, self.cols, &kernel))
        }
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<CycMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let aug: Vec<Vector> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| {
                    if c == r {
                        CycNumber::one(self.conductor)
                    } else {
                        CycNumber::zero(self.conductor)
                    }
                }));
                row
            })
            .collect();
        let (rows, pivots) = rref_rows(self.conductor, 2 * n, aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let inv: Vec<Vector> = rows.iter().map(|r| r[n..].to_vec()).collect();
        Ok(CycMatrix::from_rows(self.conductor, n, &inv))
    }
}

/// Gauss–Jordan elimination on a list of rows. Returns the nonzero rows of
/// the reduced echelon form together with their pivot columns.
pub fn rref_rows(conductor: u32, cols: usize, mut rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = rows[top][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[top].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != top && !row[col].is_zero() {
                let c = row[col].clone();
                axpy_neg(row, &c, &pivot_row);
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.conductor() != conductor && conductor % x.conductor() == 0 {
                *x = x.lift(conductor);
            }
        }
    }
    (rows, pivots)
}

fn null_space_of_rref(conductor: u32, cols: usize, rows: &[Vector], pivots: &[usize]) -> Vec<Vector> {
    let mut is_pivot = vec![None; cols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = zero_vector(conductor, cols);
        v[free] = CycNumber::one(conductor);
        for (i, &p) in pivots.iter().enumerate() {
            let x = &rows[i][free];
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        basis.push(v);
    }
    basis
}

/// A subspace of K^n with a canonical reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    conductor: u32,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(conductor: u32, ambient: usize) -> Self {
        Subspace {
            ambient,
            conductor,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(conductor: u32, ambient: usize) -> Self {
        let id = CycMatrix::identity(conductor, ambient);
        Subspace {
            ambient,
            conductor,
            basis: id.row_vectors(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(conductor: u32, ambient: usize, vectors: &[Vector]) -> Self {
        let n = vectors
            .iter()
            .flatten()
            .fold(conductor, |acc, x| num_integer::lcm(acc, x.conductor()));
        let rows: Vec<Vector> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient, "vector outside ambient space");
                v.iter().map(|x| x.lift(n)).collect()
            })
            .collect();
        let (basis, pivots) = rref_rows(n, ambient, rows);
        Subspace {
            ambient,
            conductor: n,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> CycMatrix {
        CycMatrix::from_rows(self.conductor, self.ambient, &self.basis)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        let n = num_integer::lcm(self.conductor, other.conductor);
        Ok(Subspace::span(n, self.ambient, &vs))
    }

    /// Annihilator under the standard bilinear pairing: {x : ⟨b, x⟩ = 0 ∀ b}.
    pub fn annihilator(&self) -> Subspace {
        let ns = null_space_of_rref(self.conductor, self.ambient, &self.basis, &self.pivots);
        Subspace::span(self.conductor, self.ambient, &ns)
    }

    /// Intersection, computed as ann(ann(a) + ann(b)).
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[CycNumber]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient, "vector outside ambient space");
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                axpy_neg(&mut rest, c, b);
            }
        }
        is_zero_vector(&rest).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[CycNumber]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vector(v)))
    }

    /// Whether `op` maps the subspace into itself.
    pub fn is_invariant(&self, op: &CycMatrix) -> bool {
        self.basis
            .iter()
            .all(|b| self.contains_vector(&op.mul_vec(b)))
    }

    /// Trace of `op` restricted to this subspace.
    pub fn trace_of(&self, op: &CycMatrix) -> Result<CycNumber> {
        if op.rows() != self.ambient || op.cols() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: op.rows(),
            });
        }
        let n = num_integer::lcm(self.conductor, op.conductor());
        let mut t = CycNumber::zero(n);
        for (i, b) in self.basis.iter().enumerate() {
            let img = op.mul_vec(b);
            let coords = self.coordinates(&img).ok_or(Error::NotInvariant)?;
            t += &coords[i];
        }
        Ok(t)
    }
}

/// Trace of `op` on the invariant subspace `w`.
pub fn trace_on_subspace(op: &CycMatrix, w: &Subspace) -> Result<CycNumber> {
    w.trace_of(op)
}

/// Incrementally maintained echelon basis, used for orbit spans.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    conductor: u32,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(conductor: u32, ambient: usize) -> Self {
        SpanBuilder {
            conductor,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; adds it when independent and
    /// returns whether the span grew.
    pub fn insert(&mut self, v: &[CycNumber]) -> bool {
        let mut w: Vector = v.iter().map(|x| x.lift(self.conductor)).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = w[p].clone();
                axpy_neg(&mut w, &c, row);
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                axpy_neg(row, &c, &w);
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn finish(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows = self.rows;
        let mut basis = Vec::with_capacity(rows.len());
        let mut pivots = Vec::with_capacity(order.len());
        for &i in &order {
            basis.push(std::mem::take(&mut rows[i]));
            pivots.push(self.pivots[i]);
        }
        Subspace {
            ambient: self.ambient,
            conductor: self.conductor,
            basis,
            pivots,
        }
    }
}

/// Smallest subspace containing `seeds` and stable under every matrix in
/// `generators`.
pub fn invariant_span(
    conductor: u32,
    ambient: usize,
    generators: &[&CycMatrix],
    seeds: &[Vector],
) -> Subspace {
    let n = generators
        .iter()
        .fold(conductor, |acc, g| num_integer::lcm(acc, g.conductor()));
    let mut span = SpanBuilder::new(n, ambient);
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if span.is_full() {
            break;
        }
        for g in generators {
            let w = g.mul_vec(&v);
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    span.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(n, k)
    }

    fn int(n: u32, v: i64) -> CycNumber {
        CycNumber::from_i64(n, v)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(CycMatrix::zeros(4, 3, 3).rank(), 0);
        assert_eq!(CycMatrix::identity(4, 5).rank(), 5);
        let m = CycMatrix::from_rows(4, 2, &[vec![int(4, 1), z(4, 1)], vec![z(4, 1), int(4, -1)]]);
        assert_eq!(m.rank(), 1);
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.rref().0, r);
    }

    #[test]
    fn two_lines_in_the_plane() {
        let a = Subspace::span(3, 2, &[vec![int(3, 1), z(3, 1)]]);
        let b = Subspace::span(3, 2, &[vec![int(3, 1), z(3, 2)]]);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3, 2));
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.sum(&Subspace::zero(3, 2)).unwrap(), a);
        assert!(a.sum(&Subspace::zero(3, 3)).is_err());
    }

    #[test]
    fn traces() {
        let w = Subspace::span(8, 3, &[vec![int(8, 1), int(8, 0), z(8, 1)], vec![int(8, 0), int(8, 1), int(8, 0)]]);
        let id = CycMatrix::identity(8, 3);
        assert_eq!(w.trace_of(&id).unwrap(), int(8, 2));
        let lam = id.scale(&z(8, 3));
        assert_eq!(w.trace_of(&lam).unwrap(), &int(8, 2) * &z(8, 3));
        let mut swap = CycMatrix::zeros(8, 3, 3);
        swap.set(0, 1, int(8, 1));
        swap.set(1, 0, int(8, 1));
        swap.set(2, 2, int(8, 1));
        assert_eq!(w.trace_of(&swap), Err(Error::NotInvariant));
    }

    #[test]
    fn inverse_and_null_space() {
        let m = CycMatrix::from_rows(4, 2, &[vec![int(4, 2), z(4, 1)], vec![int(4, 1), int(4, 3)]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = CycMatrix::from_rows(4, 3, &[vec![int(4, 1), z(4, 1), int(4, 0)]]);
        let ns = s.null_space();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(is_zero_vector(&s.mul_vec(&v)));
        }
    }

    #[test]
    fn span_builder_matches_rref() {
        let vs = vec![
            vec![int(5, 1), z(5, 1), int(5, 0)],
            vec![int(5, 2), &int(5, 2) * &z(5, 1), int(5, 0)],
            vec![int(5, 0), int(5, 1), z(5, 3)],
        ];
        let mut b = SpanBuilder::new(5, 3);
        for v in &vs {
            b.insert(v);
        }
        assert_eq!(b.finish(), Subspace::span(5, 3, &vs));
    }
}
