//! Finite-dimensional bidegree pieces of presented modules, and t-degree
//! slices as modules over the base ring A = Q[x1..xm].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::module::{BigradedPresentation, FreeModule, ModuleMap};
use crate::qmat::QMat;
use crate::ring::{monomials_of_bidegree, BiDegree, Monomial, Polynomial, RingSig};
use crate::window::Window;

/// The piece G_(a,b): a basis of the free cover in that bidegree together
/// with the matrix whose column space is the image of the relations.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub bidegree: BiDegree,
    pub basis: Vec<(usize, Monomial)>,
    pub relation_image: QMat,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.basis.len() - self.relation_image.rank()
    }
}

/// Basis of a free module's piece in a bidegree: all (generator, monomial)
/// pairs with matching total bidegree, generators in canonical order.
pub fn free_piece_basis(free: &FreeModule, deg: BiDegree) -> Vec<(usize, Monomial)> {
    let mut basis = Vec::new();
    for (j, shift) in free.shifts.iter().enumerate() {
        for m in monomials_of_bidegree(free.sig, deg - *shift) {
            basis.push((j, m));
        }
    }
    basis
}

fn basis_index(basis: &[(usize, Monomial)]) -> HashMap<(usize, Monomial), usize> {
    basis
        .iter()
        .enumerate()
        .map(|(idx, (j, m))| ((*j, m.clone()), idx))
        .collect()
}

/// Expand module elements (columns over the target free module) into
/// coordinates of a piece basis. Panics if a product monomial escapes the
/// basis, which cannot happen for degree-matched polynomial inputs.
pub fn expand_columns(
    basis: &[(usize, Monomial)],
    index: &HashMap<(usize, Monomial), usize>,
    columns: &[(Monomial, Vec<Polynomial>)],
) -> QMat {
    let mut mat = QMat::zeros(basis.len(), columns.len());
    for (cidx, (mult, column)) in columns.iter().enumerate() {
        for (i, entry) in column.iter().enumerate() {
            for (m, c) in entry.terms() {
                let prod = mult.mul(m);
                let row = *index
                    .get(&(i, prod.clone()))
                    .unwrap_or_else(|| panic!("monomial {} outside piece basis", prod));
                let v = mat.get(row, cidx).clone() + c.clone();
                mat.set(row, cidx, v);
            }
        }
    }
    mat
}

/// Matrix of a free-module map on the bidegree pieces, in the canonical
/// piece bases.
pub fn map_piece(map: &ModuleMap, deg: BiDegree) -> QMat {
    let tgt = free_piece_basis(&map.target, deg);
    let index = basis_index(&tgt);
    let src = free_piece_basis(&map.source, deg);
    let cols: Vec<(Monomial, Vec<Polynomial>)> =
        src.iter().map(|(j, m)| (m.clone(), map.column(*j))).collect();
    expand_columns(&tgt, &index, &cols)
}

/// The bidegree piece of a presentation.
pub fn piece(g: &BigradedPresentation, deg: BiDegree) -> DegreePiece {
    let basis = free_piece_basis(g.generators(), deg);
    let index = basis_index(&basis);
    let rel = g.relations();
    let mut columns = Vec::new();
    for (j, shift) in rel.source.shifts.iter().enumerate() {
        for m in monomials_of_bidegree(g.sig(), deg - *shift) {
            columns.push((m, rel.column(j)));
        }
    }
    let relation_image = expand_columns(&basis, &index, &columns);
    DegreePiece { bidegree: deg, basis, relation_image }
}

pub fn dim(g: &BigradedPresentation, deg: BiDegree) -> usize {
    piece(g, deg).dim()
}

/// Hilbert table of a presentation over a window, keyed (x, t) -> dim.
pub fn dim_table(g: &BigradedPresentation, window: &Window) -> Vec<(BiDegree, usize)> {
    window.bidegrees().into_iter().map(|d| (d, dim(g, d))).collect()
}

/// The slice G_k presented as a graded A-module (signature (m, 0)).
///
/// Taking the t-degree-k component of coker(F1 -> F0) is exact, so the slice
/// is presented exactly: one A-generator per (F0 generator, pure t-monomial)
/// of total t-degree k, with relations induced from F1 the same way. The
/// x_cutoff is validated against the x-shifts the induced presentation
/// actually needs.
pub fn t_slice(g: &BigradedPresentation, k: i64, x_cutoff: i64) -> Result<BigradedPresentation> {
    let required = slice_required_cutoff(g, k);
    if x_cutoff < required {
        return Err(Error::SliceCutoff { cutoff: x_cutoff, required });
    }
    Ok(t_slice_exact(g, k))
}

/// Smallest x_cutoff accepted by `t_slice` for this slice.
pub fn slice_required_cutoff(g: &BigradedPresentation, k: i64) -> i64 {
    let gen_window = g
        .generators()
        .shifts
        .iter()
        .filter(|s| s.t <= k)
        .map(|s| s.x)
        .max()
        .unwrap_or(0);
    let rel_window = g
        .relations()
        .source
        .shifts
        .iter()
        .filter(|s| s.t <= k)
        .map(|s| s.x)
        .max()
        .unwrap_or(0);
    gen_window.max(rel_window)
}

pub fn t_slice_auto(g: &BigradedPresentation, k: i64) -> BigradedPresentation {
    t_slice_exact(g, k)
}

fn t_slice_exact(g: &BigradedPresentation, k: i64) -> BigradedPresentation {
    let sig = g.sig();
    let base = sig.base_ring();
    let fiber_only = RingSig::new(0, sig.fiber_vars);

    // A-generators: (F0 generator, pure t-monomial of complementary degree).
    let mut gen_shifts = Vec::new();
    let mut gen_lookup: HashMap<(usize, Vec<i32>), usize> = HashMap::new();
    for (j, shift) in g.generators().shifts.iter().enumerate() {
        for tm in monomials_of_bidegree(fiber_only, BiDegree::new(0, k - shift.t)) {
            gen_lookup.insert((j, tm.t.clone()), gen_shifts.len());
            gen_shifts.push(BiDegree::new(shift.x, 0));
        }
    }
    let generators = FreeModule::new(base, gen_shifts);

    let rel = g.relations();
    let mut col_shifts = Vec::new();
    let mut matrix: Vec<Vec<Polynomial>> =
        vec![Vec::new(); generators.rank()];
    for (j, shift) in rel.source.shifts.iter().enumerate() {
        for tm in monomials_of_bidegree(fiber_only, BiDegree::new(0, k - shift.t)) {
            let col_idx = col_shifts.len();
            col_shifts.push(BiDegree::new(shift.x, 0));
            for row in matrix.iter_mut() {
                row.push(Polynomial::zero(base));
            }
            for (i, entry) in rel.matrix.iter().map(|r| &r[j]).enumerate() {
                for (m, c) in entry.terms() {
                    let t_part: Vec<i32> = tm.t.iter().zip(&m.t).map(|(a, b)| a + b).collect();
                    let target = gen_lookup[&(i, t_part)];
                    let x_mono = Monomial { x: m.x.clone(), t: Vec::new() };
                    matrix[target][col_idx] =
                        matrix[target][col_idx].checked_add(&Polynomial::monomial(base, x_mono, c.clone()))
                            .expect("base ring signature");
                }
            }
        }
    }
    let source = FreeModule::new(base, col_shifts);
    BigradedPresentation::new(generators.clone(), ModuleMap { source, target: generators, matrix }.clone())
        .expect("induced slice presentation is homogeneous")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::BigradedPresentation;
    use crate::ring::{coeff_int, Polynomial};

    fn s11() -> RingSig {
        RingSig::new(1, 1)
    }

    /// Monomial-quotient oracle: for S/(monomial ideal), the piece dimension
    /// is the number of standard monomials of that bidegree.
    fn monomial_quotient_dim(sig: RingSig, ideal: &[Monomial], deg: BiDegree) -> usize {
        monomials_of_bidegree(sig, deg)
            .into_iter()
            .filter(|m| !ideal.iter().any(|g| g.divides(m)))
            .count()
    }

    #[test]
    fn ring_pieces_are_one_dimensional() {
        let s = BigradedPresentation::ring(s11());
        for a in -1..4i64 {
            for b in -1..4i64 {
                let expected = if a >= 0 && b >= 0 { 1 } else { 0 };
                assert_eq!(dim(&s, BiDegree::new(a, b)), expected);
            }
        }
    }

    #[test]
    fn hypersurface_pieces_match_monomial_oracle() {
        let g = BigradedPresentation::cyclic(s11(), vec![Polynomial::x_var(s11(), 0)]).unwrap();
        let ideal = vec![Monomial::x_var(s11(), 0)];
        for a in 0..4i64 {
            for b in 0..4i64 {
                assert_eq!(
                    dim(&g, BiDegree::new(a, b)),
                    monomial_quotient_dim(s11(), &ideal, BiDegree::new(a, b))
                );
            }
        }
        assert_eq!(dim(&g, BiDegree::new(0, 2)), 1);
        assert_eq!(dim(&g, BiDegree::new(1, 2)), 0);
    }

    #[test]
    fn fiber_point_piece_vanishes() {
        let sig = RingSig::new(0, 2);
        let g = BigradedPresentation::cyclic(
            sig,
            vec![Polynomial::t_var(sig, 0), Polynomial::t_var(sig, 1)],
        )
        .unwrap();
        assert_eq!(dim(&g, BiDegree::new(0, 1)), 0);
        assert_eq!(dim(&g, BiDegree::new(0, 0)), 1);
    }

    #[test]
    fn shifted_ring_piece() {
        // S(1)_(0,-1) = S_0 for m=0, d=1.
        let sig = RingSig::new(0, 1);
        let s1 = BigradedPresentation::ring(sig).shift_t(1);
        assert_eq!(dim(&s1, BiDegree::new(0, -1)), 1);
        assert_eq!(dim(&s1, BiDegree::new(0, -2)), 0);
    }

    #[test]
    fn shift_moves_dimensions() {
        let g = BigradedPresentation::cyclic(s11(), vec![Polynomial::x_var(s11(), 0)]).unwrap();
        for m in -2..3i64 {
            for a in 0..3i64 {
                for b in -3..4i64 {
                    assert_eq!(
                        dim(&g.shift_t(m), BiDegree::new(a, b)),
                        dim(&g, BiDegree::new(a, b + m))
                    );
                }
            }
        }
    }

    #[test]
    fn reverse_preserves_dimensions() {
        let sig = RingSig::new(1, 2);
        let rel = &(&Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 1))
            + &(&Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0));
        let g = BigradedPresentation::cyclic(sig, vec![rel]).unwrap();
        for a in 0..3i64 {
            for b in 0..4i64 {
                assert_eq!(dim(&g.reverse(), BiDegree::new(a, b)), dim(&g, BiDegree::new(a, b)));
            }
        }
    }

    #[test]
    fn permuting_relation_columns_fixes_dimensions() {
        let sig = RingSig::new(1, 2);
        let rels = vec![
            Polynomial::t_var(sig, 0),
            &Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 1),
            Polynomial::t_var(sig, 1).scale(&coeff_int(2)),
        ];
        let g = BigradedPresentation::cyclic(sig, rels).unwrap();
        let h = g.permute_relation_columns(&[2, 0, 1]);
        for a in 0..3i64 {
            for b in 0..4i64 {
                assert_eq!(dim(&g, BiDegree::new(a, b)), dim(&h, BiDegree::new(a, b)));
            }
        }
    }

    #[test]
    fn slice_of_hypersurface_is_base_quotient() {
        // (S/(x1))_0 = A/(x1) for m = d = 1.
        let g = BigradedPresentation::cyclic(s11(), vec![Polynomial::x_var(s11(), 0)]).unwrap();
        let slice = t_slice(&g, 0, 4).unwrap();
        assert_eq!(slice.sig(), RingSig::new(1, 0));
        assert_eq!(slice.generators().rank(), 1);
        for a in 0..4i64 {
            let expected = if a == 0 { 1 } else { 0 };
            assert_eq!(dim(&slice, BiDegree::new(a, 0)), expected);
        }
    }

    #[test]
    fn slice_killed_by_fiber_relation() {
        // (S/(t1))_1 = 0 for m = d = 1.
        let g = BigradedPresentation::cyclic(s11(), vec![Polynomial::t_var(s11(), 0)]).unwrap();
        let slice = t_slice(&g, 1, 4).unwrap();
        for a in 0..4i64 {
            assert_eq!(dim(&slice, BiDegree::new(a, 0)), 0);
        }
    }

    #[test]
    fn slice_of_free_module_is_free() {
        let s = BigradedPresentation::ring(s11());
        for k in 0..3i64 {
            let slice = t_slice(&s, k, 4).unwrap();
            assert_eq!(slice.generators().rank(), 1);
            assert_eq!(slice.relations().source.rank(), 0);
        }
    }

    #[test]
    fn slice_dims_agree_with_pieces() {
        let sig = RingSig::new(2, 2);
        let rel1 = &(&Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0))
            + &(&Polynomial::x_var(sig, 1) * &Polynomial::t_var(sig, 1));
        let rel2 = Polynomial::t_var(sig, 1);
        let g = BigradedPresentation::cyclic(sig, vec![rel1, rel2]).unwrap();
        for k in 0..4i64 {
            let slice = t_slice_auto(&g, k);
            for a in 0..4i64 {
                assert_eq!(
                    dim(&slice, BiDegree::new(a, 0)),
                    dim(&g, BiDegree::new(a, k)),
                    "slice {k} x-degree {a}"
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn shift_composition_on_dimension_tables(
            m1 in -3i64..4,
            m2 in -3i64..4,
            a in 0i64..3,
            b in -4i64..5,
        ) {
            let sig = RingSig::new(1, 2);
            let rel = &(&Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0))
                + &(&Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 1));
            let g = BigradedPresentation::cyclic(sig, vec![rel]).unwrap();
            let deg = BiDegree::new(a, b);
            let once = dim(&g.shift_t(m1).shift_t(m2), deg);
            let combined = dim(&g.shift_t(m1 + m2), deg);
            let direct = dim(&g, BiDegree::new(a, b + m1 + m2));
            proptest::prop_assert_eq!(once, combined);
            proptest::prop_assert_eq!(combined, direct);
        }
    }

    #[test]
    fn slice_cutoff_reported() {
        let g = BigradedPresentation::cyclic(
            s11(),
            vec![&Polynomial::x_var(s11(), 0) * &Polynomial::x_var(s11(), 0)],
        )
        .unwrap();
        let err = t_slice(&g, 0, 1).unwrap_err();
        assert!(matches!(err, Error::SliceCutoff { required: 2, .. }));
    }
}
