use ib_numkit::{
    kernel_basis, least_squares_min_norm, LinExpr, LpBuilder, NumError, RealMatrix, RealVector,
};

use crate::{GeomError, Result};

/// The solution set of `A y = b`, with a particular point and an
/// orthonormal kernel basis cached.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    pub a: RealMatrix,
    pub b: RealVector,
    /// Minimum-norm point of the subspace.
    pub point: RealVector,
    /// Orthonormal basis of the direction space, one vector per column.
    pub basis: RealMatrix,
}

impl AffineSubspace {
    pub fn new(a: RealMatrix, b: RealVector) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(GeomError::DimensionMismatch("A rows vs b length".into()));
        }
        let point = match least_squares_min_norm(&a, &b) {
            Ok(p) => p,
            Err(NumError::Inconsistent(_)) => return Err(GeomError::EmptySubspace),
            Err(e) => return Err(e.into()),
        };
        let basis = kernel_basis(&a);
        Ok(AffineSubspace { a, b, point, basis })
    }

    pub fn from_rows(rows: &[Vec<f64>], rhs: &[f64], dim: usize) -> Result<Self> {
        let a = ib_numkit::mat_from_rows(rows, dim)?;
        Self::new(a, RealVector::from_column_slice(rhs))
    }

    /// The whole space.
    pub fn full(dim: usize) -> Self {
        Self::new(RealMatrix::zeros(0, dim), RealVector::zeros(0))
            .expect("empty system is consistent")
    }

    /// The linear span of the given vectors (through the origin).
    pub fn span(vectors: &[Vec<f64>], dim: usize) -> Result<Self> {
        let m = ib_numkit::mat_from_rows(vectors, dim)?;
        let perp = kernel_basis(&m);
        Self::new(perp.transpose(), RealVector::zeros(perp.ncols()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        let pv = RealVector::from_column_slice(p);
        let r = &self.a * pv - &self.b;
        r.amax() <= tol * (1.0 + self.b.amax())
    }

    /// Intersection with another subspace of the same ambient space.
    pub fn intersect(&self, other: &AffineSubspace) -> Result<Self> {
        let n = self.ambient_dim();
        let a = RealMatrix::from_fn(self.a.nrows() + other.a.nrows(), n, |i, j| {
            if i < self.a.nrows() {
                self.a[(i, j)]
            } else {
                other.a[(i - self.a.nrows(), j)]
            }
        });
        let mut b = self.b.as_slice().to_vec();
        b.extend_from_slice(other.b.as_slice());
        Self::new(a, RealVector::from_vec(b))
    }

    /// `point + basis * c`
    pub fn at(&self, c: &[f64]) -> Vec<f64> {
        let mut y = self.point.clone();
        for (j, cj) in c.iter().enumerate() {
            y.axpy(*cj, &self.basis.column(j), 1.0);
        }
        y.as_slice().to_vec()
    }

    /// Add free coefficient variables to `b` and return the coordinates of
    /// the parametrised point as affine expressions.
    pub fn lp_param(&self, b: &mut LpBuilder) -> Vec<LinExpr> {
        let c = b.frees(self.dim());
        (0..self.ambient_dim())
            .map(|i| {
                let mut e = LinExpr::constant(self.point[i]);
                for (j, &cj) in c.iter().enumerate() {
                    e.add_term(cj, self.basis[(i, j)]);
                }
                e
            })
            .collect()
    }

    /// Euclidean projection onto the subspace.
    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        let d = RealVector::from_column_slice(p) - &self.point;
        let c = self.basis.transpose() * d;
        self.at(c.as_slice())
    }
}
