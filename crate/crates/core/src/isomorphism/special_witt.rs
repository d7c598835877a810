//! The epimorphism `S(2, (1, m2))' -> W(1, (m2))'` given on the named basis
//! by `x_i -> 0`, `y_0 -> a_0`, `z_{0,i} -> a_{i+1}`.

use crate::cartan::{build, witt1_element, CartanAlgebra, CartanFamily, FamilyKind, SpecialBasis};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::{Matrix, Subspace, Vector};

pub struct SpecialWittMap {
    /// `S(2, (1, m2))'`.
    pub source: CartanAlgebra,
    /// `W(1, (m2))'`.
    pub target: CartanAlgebra,
    /// `target.dim() x source.dim()`, acting on source coordinates.
    pub matrix: Matrix,
    pub kernel: Subspace,
}

impl SpecialWittMap {
    pub fn apply(&self, v: &Vector) -> Vector {
        self.matrix.mul_vec(v)
    }

    /// `(i, j)` with `phi [e_i, e_j] != [phi e_i, phi e_j]`, if any.
    pub fn first_bracket_violation(&self) -> Option<(usize, usize)> {
        let s = self.source.algebra();
        let w = self.target.algebra();
        let n = s.dim();
        let images: Vec<Vector> = (0..n).map(|j| self.matrix.column(j)).collect();
        for j in 0..n {
            for i in 0..j {
                if self.apply(&s.bracket_basis(i, j)) != w.bracket(&images[i], &images[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }
}

pub fn phi_special_witt(m2: u32, p: Prime) -> Result<SpecialWittMap> {
    if !p.is_two() {
        return Err(Error::InvalidArgument(format!(
            "the special-to-Witt map is defined in characteristic 2, not {p}"
        )));
    }
    if m2 < 2 {
        return Err(Error::InvalidArgument(format!(
            "m2 must be at least 2, got {m2}"
        )));
    }
    let source = build(&CartanFamily::new(FamilyKind::S, &[1, m2], p)?)?.derived()?;
    let target = build(&CartanFamily::new(FamilyKind::W, &[m2], p)?)?.derived()?;
    let s_shape = source.shape().clone();
    let w_shape = target.shape().clone();
    let last = (1u32 << m2) - 2;

    // Named basis of S': x_0..x_last, y_0, z_{0,0}..z_{0,last-1}.
    let mut named = Vec::new();
    let mut images = Vec::new();
    let coords_in = |alg: &CartanAlgebra, e| -> Result<Vector> {
        alg.from_derivation(&e)
            .ok_or_else(|| Error::InvalidArgument(format!("{e} is not in {}", alg.name())))
    };
    for i in 0..=last {
        named.push(coords_in(&source, SpecialBasis::X(i).element(&s_shape))?);
        images.push(Vector::zeros(p, target.dim()));
    }
    named.push(coords_in(&source, SpecialBasis::Y(0).element(&s_shape))?);
    images.push(coords_in(&target, witt1_element(&w_shape, 0))?);
    for i in 0..last {
        named.push(coords_in(&source, SpecialBasis::Z(0, i).element(&s_shape))?);
        images.push(coords_in(&target, witt1_element(&w_shape, i + 1))?);
    }
    let basis = Matrix::from_columns(p, source.dim(), &named);
    let inverse = basis
        .inverse()
        .ok_or_else(|| Error::InvalidArgument("named elements do not form a basis of S'".into()))?;
    let matrix = Matrix::from_columns(p, target.dim(), &images).mul(&inverse);
    let kernel = matrix.kernel();
    Ok(SpecialWittMap {
        source,
        target,
        matrix,
        kernel,
    })
}
