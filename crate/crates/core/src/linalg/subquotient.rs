use super::{Matrix, Subspace, Vector};

/// Coordinates on a subquotient `upper / lower` of GF(p)^n.
///
/// Representatives are the echelon basis of `upper` reduced modulo `lower`;
/// when `upper` is the whole space they are exactly the unit vectors at the
/// non-pivot coordinates of `lower`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    lower: Subspace,
    reps: Subspace,
}

impl Subquotient {
    pub fn new(lower: &Subspace, upper: &Subspace) -> Self {
        debug_assert!(upper.contains_subspace(lower), "lower must lie in upper");
        let reps = Subspace::span(
            upper.prime(),
            upper.ambient_dim(),
            upper.basis().iter().map(|b| lower.reduce(b)),
        );
        Subquotient {
            lower: lower.clone(),
            reps,
        }
    }

    pub fn quotient(lower: &Subspace) -> Self {
        Subquotient::new(lower, &Subspace::full(lower.prime(), lower.ambient_dim()))
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn lower(&self) -> &Subspace {
        &self.lower
    }

    pub fn representatives(&self) -> &[Vector] {
        self.reps.basis()
    }

    /// Coordinates of the class of `v`; `v` must lie in `upper`.
    pub fn project(&self, v: &Vector) -> Vector {
        let r = self.lower.reduce(v);
        debug_assert!(self.reps.contains(&r), "vector outside the upper space");
        self.reps.coordinates_unchecked(&r)
    }

    /// Representative of the class with the given coordinates.
    pub fn lift(&self, coords: &Vector) -> Vector {
        self.reps.from_coordinates(coords)
    }

    /// Matrix of the induced map on the subquotient; `op` must preserve both
    /// `lower` and `upper`.
    pub fn induced(&self, op: &Matrix) -> Matrix {
        let cols: Vec<Vector> = self
            .reps
            .basis()
            .iter()
            .map(|r| self.project(&op.mul_vec(r)))
            .collect();
        Matrix::from_columns(op.prime(), self.dim(), &cols)
    }

    /// Projection matrix from the ambient space (restricted to `upper`).
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.lower.ambient_dim();
        let p = self.lower.prime();
        let cols: Vec<Vector> = (0..n)
            .map(|i| {
                let r = self.lower.reduce(&Vector::unit(p, n, i));
                self.reps.coordinates_unchecked(&r)
            })
            .collect();
        Matrix::from_columns(p, self.dim(), &cols)
    }

    /// Preimage in the ambient space of a subspace given in quotient coordinates.
    pub fn pull_back(&self, sub: &Subspace) -> Subspace {
        let lifted = sub.basis().iter().map(|c| self.lift(c));
        Subspace::span(
            self.lower.prime(),
            self.lower.ambient_dim(),
            self.lower.basis().iter().cloned().chain(lifted),
        )
    }
}
