//! Determining equations as an exact linear system over a polynomial ansatz.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_poly::{rank, rref, LinearSystem, Monomial, Poly, Rational};
use crate::poisson::CommutatorTable;

use super::jet::{determining_residuals, JetSpace, JetVectorField, POINT_COORDS};

/// Exponent vectors over `(t, q1, q2, q3)` of total degree `<= max_degree`,
/// ascending by degree.
fn ansatz_monomials(max_degree: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                for c in (0..=d - a - b).rev() {
                    out.push([a, b, c, d - a - b - c]);
                }
            }
        }
    }
    out
}

fn single_term_field(space: &JetSpace, component: usize, exps: &[u32; 4]) -> JetVectorField {
    let mut full = vec![0u32; space.vars().len()];
    for (k, name) in POINT_COORDS.iter().enumerate() {
        full[space.vars().index_of(name).expect("point coordinate")] = exps[k];
    }
    let term = Poly::from_terms(space.vars(), [(full, Rational::from_integer(1.into()))])
        .expect("exponent vector matches");
    let mut comps = vec![Poly::zero(space.vars()); 4];
    comps[component] = term;
    let [xi, a, b, c]: [Poly; 4] = comps.try_into().expect("four");
    JetVectorField::new(space, xi, [a, b, c]).expect("ansatz terms depend on (t, q) only")
}

/// The homogeneous system for the unknown ansatz coefficients, one row per
/// (equation, jet monomial) pair. Columns are ordered `xi, eta1, eta2, eta3`,
/// each over [`ansatz_monomials`].
pub fn determining_system(max_degree: u32) -> Result<(LinearSystem, Vec<[u32; 4]>)> {
    let space = JetSpace::standard();
    let monos = ansatz_monomials(max_degree);
    let cols = 4 * monos.len();
    // The residual map is linear in the field, so each unknown contributes
    // the residuals of its own single-term field.
    let mut rows: BTreeMap<(usize, Monomial), Vec<Rational>> = BTreeMap::new();
    for comp in 0..4 {
        for (m, exps) in monos.iter().enumerate() {
            let col = comp * monos.len() + m;
            let res = determining_residuals(&single_term_field(&space, comp, exps))?;
            for (eq, r) in res.iter().enumerate() {
                for (mono, c) in r.terms() {
                    rows.entry((eq, mono.clone()))
                        .or_insert_with(|| vec![Rational::zero(); cols])[col] = c.clone();
                }
            }
        }
    }
    let matrix: Vec<Vec<Rational>> = rows.into_values().collect();
    Ok((LinearSystem::homogeneous(matrix, cols)?, monos))
}

fn vector_to_field(space: &JetSpace, monos: &[[u32; 4]], v: &[Rational]) -> JetVectorField {
    let n = monos.len();
    let mut comps = Vec::with_capacity(4);
    for comp in 0..4 {
        let mut p = Poly::zero(space.vars());
        for (m, exps) in monos.iter().enumerate() {
            let c = &v[comp * n + m];
            if !c.is_zero() {
                p = p + single_term_field(space, 0, exps).xi.scale(c);
            }
        }
        comps.push(p);
    }
    let [xi, a, b, c]: [Poly; 4] = comps.try_into().expect("four");
    JetVectorField::new(space, xi, [a, b, c]).expect("ansatz terms depend on (t, q) only")
}

/// All Lie point symmetries whose coefficients are polynomials of total degree
/// `<= max_degree` in `(t, q)`, as a basis in reduced row echelon form.
///
/// Complete only within the ansatz; symmetries of higher or non-polynomial
/// degree are not excluded.
pub fn solve_determining(max_degree: u32) -> Result<Vec<JetVectorField>> {
    if max_degree < 1 {
        return Err(Error::InvalidArgument(format!(
            "max_degree must be at least 1, got {max_degree}"
        )));
    }
    let (sys, monos) = determining_system(max_degree)?;
    let ns = sys.nullspace();
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    let (reduced, pivots) = rref(ns);
    let space = JetSpace::standard();
    Ok(reduced
        .iter()
        .take(pivots.len())
        .map(|v| vector_to_field(&space, &monos, v))
        .collect())
}

/// Flattens fields to coefficient vectors over a common key set.
fn coefficient_matrix(fields: &[&JetVectorField]) -> Vec<Vec<Rational>> {
    let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for f in fields {
        for (c, p) in std::iter::once(&f.xi).chain(f.eta.iter()).enumerate() {
            for (m, _) in p.terms() {
                let next = keys.len();
                keys.entry((c, m.clone())).or_insert(next);
            }
        }
    }
    fields
        .iter()
        .map(|f| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (c, p) in std::iter::once(&f.xi).chain(f.eta.iter()).enumerate() {
                for (m, coef) in p.terms() {
                    row[keys[&(c, m.clone())]] = coef.clone();
                }
            }
            row
        })
        .collect()
}

/// Dimension of the span of `fields`.
pub fn span_dimension(fields: &[JetVectorField]) -> usize {
    let refs: Vec<&JetVectorField> = fields.iter().collect();
    let m = coefficient_matrix(&refs);
    if m.first().map_or(true, Vec::is_empty) {
        return 0;
    }
    rank(m)
}

/// True when both lists span the same space.
pub fn same_span(a: &[JetVectorField], b: &[JetVectorField]) -> bool {
    let joint: Vec<JetVectorField> = a.iter().chain(b).cloned().collect();
    let ra = span_dimension(a);
    ra == span_dimension(b) && ra == span_dimension(&joint)
}

/// Coefficients of `f` in `basis`, or `None` outside the span.
pub fn expand_in(basis: &[JetVectorField], f: &JetVectorField) -> Result<Option<Vec<Rational>>> {
    let mut refs: Vec<&JetVectorField> = basis.iter().collect();
    refs.push(f);
    let m = coefficient_matrix(&refs);
    let n = basis.len();
    let width = m.first().map_or(0, Vec::len);
    let (target, basis_rows) = m.split_last().expect("at least the target row");
    let rows: Vec<Vec<Rational>> = (0..width)
        .map(|k| basis_rows.iter().map(|r| r[k].clone()).collect())
        .collect();
    let rhs: Vec<Rational> = target.to_vec();
    match LinearSystem::new(rows, rhs, n)?.solve() {
        Ok(s) => Ok(Some(s.particular)),
        Err(Error::InconsistentSystem { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Structure constants of the algebra spanned by `basis` under the Lie bracket.
pub fn symmetry_commutator_table(name: &str, basis: &[JetVectorField]) -> Result<CommutatorTable> {
    let n = basis.len();
    let mut coeffs = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let b = basis[i].bracket(&basis[j])?;
            coeffs[i][j] = expand_in(basis, &b)?.ok_or_else(|| Error::OutsideSpan {
                left: i + 1,
                right: j + 1,
                witness: b.to_string(),
            })?;
        }
    }
    Ok(CommutatorTable {
        basis: name.to_owned(),
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::family::SymmetryFamily;

    #[test]
    fn ansatz_sizes() {
        assert_eq!(ansatz_monomials(1).len(), 5);
        assert_eq!(ansatz_monomials(2).len(), 15);
        assert_eq!(ansatz_monomials(3).len(), 35);
    }

    #[test]
    fn degree_one_and_two_give_the_family() {
        let family = SymmetryFamily::default().basis();
        for d in [1, 2] {
            let sol = solve_determining(d).unwrap();
            assert_eq!(sol.len(), 4, "degree {d}");
            assert!(same_span(&sol, &family), "degree {d}");
            for u in &sol {
                assert!(determining_residuals(u).unwrap().iter().all(Poly::is_zero));
            }
        }
        assert!(solve_determining(0).is_err());
    }

    #[test]
    fn span_helpers() {
        let [u1, u2, u3, u4] = SymmetryFamily::default().basis();
        assert_eq!(span_dimension(&[u1.clone(), u2.clone(), u1.clone()]), 2);
        assert!(!same_span(&[u1.clone()], &[u2.clone()]));
        let c = expand_in(&[u1.clone(), u2.clone(), u3, u4.clone()], &u4).unwrap();
        assert_eq!(c.unwrap()[3], Rational::from_integer(1.into()));
        assert!(expand_in(&[u1], &u2).unwrap().is_none());
    }

    #[test]
    fn table_of_the_basis() {
        let t = symmetry_commutator_table("u", &SymmetryFamily::default().basis()).unwrap();
        assert_eq!(t.nonzero_entries(), ["[u1, u2] = u2", "[u1, u3] = -u3"]);
    }
}
