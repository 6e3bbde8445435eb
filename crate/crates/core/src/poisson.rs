//! Lie-algebraic and Poisson structure of the five-dimensional system.
//!
//! The Poisson tensor is assembled from the commutator table of a five-dimensional
//! nilpotent matrix algebra plus a constant 2-cocycle:
//!
//! ```text
//! pi_ij = sum_k c_ij^k u_k + theta_ij,   u = (x1, y1, x2, y2, z)
//! ```
//!
//! Brackets are always evaluated through `pi` and exact gradients,
//! `{f, g} = grad(f)^T pi grad(g)`.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_poly::{int, LinearSystem, Poly, Rational, VarSet};
use crate::model::{state5_vars, v, InvariantId, SystemId, STATE5_VARS};
use crate::report::VerificationReport;

/// Square matrix with entries in a ring (rationals or polynomials).
pub type Matrix<T> = Vec<Vec<T>>;

pub fn mat_mul<T>(a: &Matrix<T>, b: &Matrix<T>, zero: &T) -> Matrix<T>
where
    T: Clone + Add<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    a[i].iter()
                        .zip(b.iter())
                        .fold(zero.clone(), |acc, (x, row)| acc + x * &row[j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_sub<T>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T>
where
    for<'x> &'x T: Sub<&'x T, Output = T>,
{
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// `[a, b] = ab - ba`.
pub fn commutator<T>(a: &Matrix<T>, b: &Matrix<T>, zero: &T) -> Matrix<T>
where
    T: Clone + Add<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    mat_sub(&mat_mul(a, b, zero), &mat_mul(b, a, zero))
}

fn unit4(entries: &[(usize, usize, i64)]) -> Matrix<Rational> {
    let mut m = vec![vec![Rational::zero(); 4]; 4];
    for &(i, j, x) in entries {
        m[i - 1][j - 1] = int(x);
    }
    m
}

fn fmt_matrix(m: &Matrix<Rational>) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Named list of 4x4 rational matrices spanning a matrix Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebraBasis {
    pub name: String,
    pub matrices: Vec<Matrix<Rational>>,
}

impl MatrixAlgebraBasis {
    /// `E1..E5`, with `[E2, E5] = E1` and `[E4, E5] = E3`.
    pub fn nilpotent_e() -> Self {
        MatrixAlgebraBasis {
            name: "E".into(),
            matrices: vec![
                unit4(&[(1, 3, -1)]),
                unit4(&[(2, 3, -1)]),
                unit4(&[(1, 4, 1)]),
                unit4(&[(2, 4, 1)]),
                unit4(&[(1, 2, -1)]),
            ],
        }
    }

    /// `A1..A4`, the matrix realization of the four-dimensional symmetry algebra.
    pub fn symmetry_a() -> Self {
        MatrixAlgebraBasis {
            name: "A".into(),
            matrices: vec![
                unit4(&[(3, 3, -1), (4, 4, 1)]),
                unit4(&[(1, 3, 1)]),
                unit4(&[(1, 4, 1)]),
                unit4(&[(1, 2, 1)]),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Coefficients of `m` in the basis, or `None` when `m` is outside the span.
    pub fn expand(&self, m: &Matrix<Rational>) -> Result<Option<Vec<Rational>>> {
        let n = self.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                rows.push(self.matrices.iter().map(|b| b[i][j].clone()).collect());
                rhs.push(m[i][j].clone());
            }
        }
        match LinearSystem::new(rows, rhs, n)?.solve() {
            Ok(sol) => Ok(Some(sol.particular)),
            Err(Error::InconsistentSystem { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// `coeffs[i][j][k]` is the coefficient of basis element `k` in `[B_i, B_j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorTable {
    pub basis: String,
    #[serde(with = "rational_cube")]
    pub coeffs: Vec<Vec<Vec<Rational>>>,
}

mod rational_cube {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &[Vec<Vec<Rational>>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<Vec<String>>> = c
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Rational>>>, D::Error> {
        let strings: Vec<Vec<Vec<String>>> = Vec::deserialize(d)?;
        strings
            .into_iter()
            .map(|a| {
                a.into_iter()
                    .map(|b| {
                        b.into_iter()
                            .map(|x| x.parse().map_err(serde::de::Error::custom))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

impl CommutatorTable {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Nonzero brackets as `([B_i, B_j], expansion)` strings, `i < j`, 1-based.
    pub fn nonzero_entries(&self) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms = expansion_string(&self.basis, &self.coeffs[i][j]);
                if terms != "0" {
                    out.push(format!("[{b}{}, {b}{}] = {terms}", i + 1, j + 1, b = self.basis));
                }
            }
        }
        out
    }
}

pub(crate) fn expansion_string(prefix: &str, coeffs: &[Rational]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = format!("{prefix}{}", k + 1);
        let term = if c.is_one() {
            name
        } else if *c == -Rational::one() {
            format!("-{name}")
        } else {
            format!("{c}*{name}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Exact table of `[B_i, B_j]` in the basis; a commutator outside the span is an error.
pub fn matrix_commutator_table(basis: &MatrixAlgebraBasis) -> Result<CommutatorTable> {
    let n = basis.len();
    let zero = Rational::zero();
    let mut coeffs = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = commutator(&basis.matrices[i], &basis.matrices[j], &zero);
            coeffs[i][j] = basis.expand(&c)?.ok_or_else(|| Error::OutsideSpan {
                left: i + 1,
                right: j + 1,
                witness: fmt_matrix(&c),
            })?;
        }
    }
    Ok(CommutatorTable {
        basis: basis.name.clone(),
        coeffs,
    })
}

/// Linear-plus-constant bracket on coordinate functions:
/// `{u_i, u_j} = sum_k alpha[i][j][k] u_k + beta[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub alpha: Vec<Vec<Vec<Rational>>>,
    pub beta: Vec<Vec<Rational>>,
}

impl StructureConstants {
    /// Linear part taken from a Lie algebra commutator table; no constant part.
    pub fn from_table(table: &CommutatorTable) -> Self {
        let n = table.dim();
        StructureConstants {
            alpha: table.coeffs.clone(),
            beta: vec![vec![Rational::zero(); n]; n],
        }
    }

    /// The bracket relations of the five coordinates as stated pairwise:
    /// `{u1,u2} = 1`, `{u2,u5} = u1`, `{u3,u4} = 1`, `{u4,u5} = u3`, all others zero.
    pub fn stated_relations() -> Self {
        let mut alpha = vec![vec![vec![Rational::zero(); 5]; 5]; 5];
        let mut beta = vec![vec![Rational::zero(); 5]; 5];
        let mut set_beta = |i: usize, j: usize| {
            beta[i - 1][j - 1] = int(1);
            beta[j - 1][i - 1] = int(-1);
        };
        set_beta(1, 2);
        set_beta(3, 4);
        for (i, j, k) in [(2, 5, 1), (4, 5, 3)] {
            alpha[i - 1][j - 1][k - 1] = int(1);
            alpha[j - 1][i - 1][k - 1] = int(-1);
        }
        StructureConstants { alpha, beta }
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.beta.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.beta[i][j] == -self.beta[j][i].clone()
                    && (0..n).all(|k| self.alpha[i][j][k] == -self.alpha[j][i][k].clone())
            })
        })
    }
}

/// Constant antisymmetric bilinear form on the Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    matrix: Matrix<Rational>,
}

impl Cocycle {
    pub fn new(matrix: Matrix<Rational>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("cocycle matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != -matrix[j][i].clone() {
                    return Err(Error::InvalidArgument(format!(
                        "cocycle matrix is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Cocycle { matrix })
    }

    /// `theta(E1, E2) = 1`, `theta(E3, E4) = 1`, zero elsewhere (up to antisymmetry).
    pub fn maxwell_bloch() -> Self {
        let mut m = vec![vec![Rational::zero(); 5]; 5];
        for (i, j) in [(0, 1), (2, 3)] {
            m[i][j] = int(1);
            m[j][i] = int(-1);
        }
        Cocycle { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn eval(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if !self.matrix[i][j].is_zero() {
                    acc += ai * &self.matrix[i][j] * bj;
                }
            }
        }
        acc
    }
}

/// 5x5 antisymmetric matrix of polynomials in `(x1, y1, x2, y2, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonTensor {
    entries: Matrix<Poly>,
}

impl PoissonTensor {
    pub fn new(entries: Matrix<Poly>) -> Result<Self> {
        let vars = state5_vars();
        if entries.len() != 5 || entries.iter().any(|r| r.len() != 5) {
            return Err(Error::InvalidArgument("Poisson tensor must be 5x5".into()));
        }
        for p in entries.iter().flatten() {
            if p.var_set() != &vars {
                return Err(Error::VarSetMismatch {
                    left: vars.names().join(","),
                    right: p.var_set().names().join(","),
                });
            }
        }
        Ok(PoissonTensor { entries })
    }

    /// The tensor written out entry by entry, independent of any assembly.
    pub fn displayed() -> Self {
        let vars = state5_vars();
        let zero = Poly::zero(&vars);
        let one = Poly::one(&vars);
        let x1 = v(&vars, "x1");
        let x2 = v(&vars, "x2");
        let mut e = vec![vec![zero; 5]; 5];
        e[0][1] = one.clone();
        e[1][0] = -&one;
        e[1][4] = x1.clone();
        e[4][1] = -&x1;
        e[2][3] = one.clone();
        e[3][2] = -&one;
        e[3][4] = x2.clone();
        e[4][3] = -&x2;
        PoissonTensor { entries: e }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Matrix<Poly> {
        &self.entries
    }

    /// Copy with the sign of the single entry `(i, j)` (0-based) flipped.
    pub fn with_flipped_sign(&self, i: usize, j: usize) -> Result<Self> {
        if i >= 5 || j >= 5 {
            return Err(Error::IndexOutOfRange(format!("({i}, {j}) in a 5x5 tensor")));
        }
        let mut out = self.clone();
        out.entries[i][j] = -&out.entries[i][j];
        Ok(out)
    }

    /// `pi + pi^T`, entrywise; zero for a genuine bivector.
    pub fn antisymmetry_residuals(&self) -> Vec<(String, Poly)> {
        let mut out = Vec::new();
        for i in 0..5 {
            for j in i..5 {
                out.push((
                    format!("pi[{}][{}] + pi[{}][{}]", i + 1, j + 1, j + 1, i + 1),
                    &self.entries[i][j] + &self.entries[j][i],
                ));
            }
        }
        out
    }
}

fn gradient(f: &Poly) -> Result<Vec<Poly>> {
    STATE5_VARS.iter().map(|n| f.diff(n)).collect()
}

fn check_state5(p: &Poly) -> Result<()> {
    let vars = state5_vars();
    if p.var_set() == &vars {
        Ok(())
    } else {
        Err(Error::VarSetMismatch {
            left: vars.names().join(","),
            right: p.var_set().names().join(","),
        })
    }
}

/// `{f, g} = grad(f)^T pi grad(g)`.
pub fn poisson_bracket(f: &Poly, g: &Poly, pi: &PoissonTensor) -> Result<Poly> {
    check_state5(f)?;
    check_state5(g)?;
    let df = gradient(f)?;
    let dg = gradient(g)?;
    let mut acc = Poly::zero(f.var_set());
    for (i, dfi) in df.iter().enumerate() {
        if dfi.is_zero() {
            continue;
        }
        for (j, dgj) in dg.iter().enumerate() {
            if dgj.is_zero() || pi.entries[i][j].is_zero() {
                continue;
            }
            acc = acc + dfi * &pi.entries[i][j] * dgj;
        }
    }
    Ok(acc)
}

/// Jacobi cyclic sum `{{u_i,u_j},u_k} + {{u_j,u_k},u_i} + {{u_k,u_i},u_j}`,
/// 1-based indices with `i < j < k`.
pub fn jacobi_residual(i: usize, j: usize, k: usize, pi: &PoissonTensor) -> Result<Poly> {
    if !(1 <= i && i < j && j < k && k <= 5) {
        return Err(Error::IndexOutOfRange(format!(
            "Jacobi triple ({i}, {j}, {k}) must satisfy 1 <= i < j < k <= 5"
        )));
    }
    let vars = state5_vars();
    let u = |n: usize| v(&vars, STATE5_VARS[n - 1]);
    let b = |a: &Poly, c: &Poly| poisson_bracket(a, c, pi);
    Ok(b(&b(&u(i), &u(j))?, &u(k))? + b(&b(&u(j), &u(k))?, &u(i))? + b(&b(&u(k), &u(i))?, &u(j))?)
}

/// All ten ordered triples `i < j < k` with their residuals.
pub fn jacobi_residuals(pi: &PoissonTensor) -> Result<Vec<((usize, usize, usize), Poly)>> {
    let mut out = Vec::with_capacity(10);
    for i in 1..=5 {
        for j in i + 1..=5 {
            for k in j + 1..=5 {
                out.push(((i, j, k), jacobi_residual(i, j, k, pi)?));
            }
        }
    }
    Ok(out)
}

/// `pi . grad(h)`, the Hamiltonian vector field of `h`.
pub fn ham_vector_field(pi: &PoissonTensor, h: &Poly) -> Result<Vec<Poly>> {
    check_state5(h)?;
    let dh = gradient(h)?;
    Ok(pi
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .zip(&dh)
                .fold(Poly::zero(h.var_set()), |acc, (p, d)| acc + p * d)
        })
        .collect())
}

/// `pi . grad(C)`; all components vanish iff `C` is a Casimir.
pub fn casimir_residual(pi: &PoissonTensor) -> Result<Vec<Poly>> {
    ham_vector_field(pi, &InvariantId::C.symbolic())
}

/// `pi_ij = sum_k alpha_ij^k u_k + beta_ij + theta_ij`.
pub fn assemble_modified_lie_poisson(sc: &StructureConstants, theta: &Cocycle) -> Result<PoissonTensor> {
    let vars = state5_vars();
    if sc.alpha.len() != 5 || theta.matrix.len() != 5 {
        return Err(Error::Dimension {
            expected: 5,
            actual: sc.alpha.len().min(theta.matrix.len()),
        });
    }
    let coords: Vec<Poly> = STATE5_VARS.iter().map(|n| v(&vars, n)).collect();
    let mut entries = vec![vec![Poly::zero(&vars); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            let mut p = Poly::constant(&vars, &sc.beta[i][j] + &theta.matrix[i][j]);
            for (k, u) in coords.iter().enumerate() {
                p = p + u.scale(&sc.alpha[i][j][k]);
            }
            entries[i][j] = p;
        }
    }
    PoissonTensor::new(entries)
}

/// The tensor built from the E-basis commutator table and the cocycle.
pub fn maxwell_bloch_tensor() -> Result<PoissonTensor> {
    let table = matrix_commutator_table(&MatrixAlgebraBasis::nilpotent_e())?;
    assemble_modified_lie_poisson(&StructureConstants::from_table(&table), &Cocycle::maxwell_bloch())
}

/// The isomorphism `(alpha, beta, gamma, delta, theta) -> 4x4 matrix`.
pub fn phi_matrix<T: Clone>(a: &[T; 5], zero: &T, neg: impl Fn(&T) -> T) -> Matrix<T> {
    let [al, be, ga, de, th] = a;
    let mut m = vec![vec![zero.clone(); 4]; 4];
    m[0][1] = neg(th);
    m[0][2] = neg(al);
    m[0][3] = ga.clone();
    m[1][2] = neg(be);
    m[1][3] = de.clone();
    m
}

/// `a x b = (b1 t2 - b2 t1, 0, d1 t2 - d2 t1, 0, 0)` on `(alpha, beta, gamma, delta, theta)`.
pub fn cross<T>(a: &[T; 5], b: &[T; 5], zero: &T) -> [T; 5]
where
    T: Clone,
    for<'x> &'x T: Mul<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    [
        &(&a[1] * &b[4]) - &(&b[1] * &a[4]),
        zero.clone(),
        &(&a[3] * &b[4]) - &(&b[3] * &a[4]),
        zero.clone(),
        zero.clone(),
    ]
}

/// Checks `Phi(a x b) = [Phi(a), Phi(b)]` with symbolic `a`, `b`, and that
/// `Phi` maps the standard basis onto `E1..E5`.
pub fn iso_check_phi() -> VerificationReport {
    VerificationReport::timed("iso-phi", |r| {
        let names: Vec<String> = (1..=5)
            .map(|i| format!("a{i}"))
            .chain((1..=5).map(|i| format!("b{i}")))
            .collect();
        let vars = VarSet::new(&names)?;
        let a: [Poly; 5] = std::array::from_fn(|i| v(&vars, &names[i]));
        let b: [Poly; 5] = std::array::from_fn(|i| v(&vars, &names[i + 5]));
        let zero = Poly::zero(&vars);
        let neg = |p: &Poly| -p;

        let lhs = phi_matrix(&cross(&a, &b, &zero), &zero, neg);
        let rhs = commutator(&phi_matrix(&a, &zero, neg), &phi_matrix(&b, &zero, neg), &zero);
        for (i, row) in mat_sub(&lhs, &rhs).iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                r.poly(format!("Phi(a x b) - [Phi(a), Phi(b)] ({}, {})", i + 1, j + 1), p);
            }
        }

        let e = MatrixAlgebraBasis::nilpotent_e();
        let rz = Rational::zero();
        for (k, ek) in e.matrices.iter().enumerate() {
            let unit: [Rational; 5] = std::array::from_fn(|i| if i == k { int(1) } else { int(0) });
            let image = phi_matrix(&unit, &rz, |x: &Rational| -x.clone());
            let diff = mat_sub(&image, ek);
            let nonzero = diff.iter().flatten().filter(|x| !x.is_zero()).count();
            r.rational(format!("Phi(e{}) - E{} (nonzero entries)", k + 1, k + 1), &int(nonzero as i64));
        }
        r.witness("Phi(a x b) = [Phi(a), Phi(b)] holds with a, b symbolic");
        Ok(())
    })
}

/// Cocycle identity on all basis triples plus the non-coboundary witness.
pub fn cocycle_check(theta: &Cocycle) -> VerificationReport {
    VerificationReport::timed("cocycle", |r| {
        let basis = MatrixAlgebraBasis::nilpotent_e();
        let table = matrix_commutator_table(&basis)?;
        let n = table.dim();
        let unit = |k: usize| -> Vec<Rational> {
            (0..n).map(|i| if i == k { int(1) } else { int(0) }).collect()
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = theta.eval(&table.coeffs[i][j], &unit(k))
                        + theta.eval(&table.coeffs[j][k], &unit(i))
                        + theta.eval(&table.coeffs[k][i], &unit(j));
                    r.rational(
                        format!(
                            "theta([E{a},E{b}],E{c}) + theta([E{b},E{c}],E{a}) + theta([E{c},E{a}],E{b})",
                            a = i + 1,
                            b = j + 1,
                            c = k + 1
                        ),
                        &s,
                    );
                }
            }
        }

        // A coboundary f([a,b]) vanishes on commuting pairs; theta(E1,E2) does not.
        let zero = Rational::zero();
        let c12 = commutator(&basis.matrices[0], &basis.matrices[1], &zero);
        let nonzero = c12.iter().flatten().filter(|x| !x.is_zero()).count();
        r.rational("[E1,E2] (nonzero matrix entries)", &int(nonzero as i64));
        let t12 = theta.eval(&unit(0), &unit(1));
        r.rational("theta(E1,E2) - 1", &(&t12 - int(1)));
        r.witness(format!(
            "[E1,E2] = {} while theta(E1,E2) = {t12}: theta is not a coboundary",
            fmt_matrix(&c12)
        ));
        Ok(())
    })
}

/// Pairwise coordinate brackets `{u_i, u_j}` under `pi`, `i < j`, 1-based.
pub fn coordinate_bracket_table(pi: &PoissonTensor) -> Result<Vec<((usize, usize), Poly)>> {
    let vars = state5_vars();
    let mut out = Vec::new();
    for i in 1..=5 {
        for j in i + 1..=5 {
            let b = poisson_bracket(&v(&vars, STATE5_VARS[i - 1]), &v(&vars, STATE5_VARS[j - 1]), pi)?;
            out.push(((i, j), b));
        }
    }
    Ok(out)
}

/// Every Poisson-structure check on `pi`: antisymmetry, agreement with the
/// assembled and displayed tensors, stated coordinate brackets, Jacobi,
/// Casimir, Hamiltonian field of `H` and mutual involution of `H`, `C`, `J`.
pub fn poisson_reports(pi: &PoissonTensor) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.push(VerificationReport::timed("pi-antisymmetry", |r| {
        r.polys(&pi.antisymmetry_residuals());
        Ok(())
    }));
    out.push(VerificationReport::timed("pi-assembly", |r| {
        let assembled = maxwell_bloch_tensor()?;
        let displayed = PoissonTensor::displayed();
        for i in 0..5 {
            for j in 0..5 {
                r.poly(
                    format!("pi[{}][{}] - assembled", i + 1, j + 1),
                    &(pi.entry(i, j) - assembled.entry(i, j)),
                );
                r.poly(
                    format!("assembled[{}][{}] - displayed", i + 1, j + 1),
                    &(assembled.entry(i, j) - displayed.entry(i, j)),
                );
            }
        }
        let stated = assemble_modified_lie_poisson(
            &StructureConstants::stated_relations(),
            &Cocycle::new(vec![vec![Rational::zero(); 5]; 5])?,
        )?;
        for i in 0..5 {
            for j in 0..5 {
                r.poly(
                    format!("stated bracket[{}][{}] - pi", i + 1, j + 1),
                    &(stated.entry(i, j) - pi.entry(i, j)),
                );
            }
        }
        r.witness("pi_ij = sum_k c_ij^k u_k + theta_ij with c from the E-basis commutators");
        Ok(())
    }));
    out.push(VerificationReport::timed("jacobi", |r| {
        for ((i, j, k), p) in jacobi_residuals(pi)? {
            r.poly(format!("jacobi({i},{j},{k})"), &p);
        }
        Ok(())
    }));
    out.push(VerificationReport::timed("casimir", |r| {
        for (i, p) in casimir_residual(pi)?.iter().enumerate() {
            r.poly(format!("(pi grad C)[{}]", i + 1), p);
        }
        Ok(())
    }));
    out.push(VerificationReport::timed("ham-field", |r| {
        let field = ham_vector_field(pi, &InvariantId::H.symbolic())?;
        for ((i, p), target) in field.iter().enumerate().zip(SystemId::Mb5.rhs_symbolic()) {
            r.poly(format!("(pi grad H)[{}] - mb5[{}]", i + 1, i + 1), &(p - target));
        }
        Ok(())
    }));
    out.push(VerificationReport::timed("involution", |r| {
        let [h, c, j] = [InvariantId::H, InvariantId::C, InvariantId::J].map(InvariantId::symbolic);
        r.poly("{H,C}", &poisson_bracket(&h, &c, pi)?);
        r.poly("{H,J}", &poisson_bracket(&h, &j, pi)?);
        r.poly("{C,J}", &poisson_bracket(&c, &j, pi)?);
        Ok(())
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state5(name: &str) -> Poly {
        v(&state5_vars(), name)
    }

    #[test]
    fn coordinate_brackets() {
        let pi = maxwell_bloch_tensor().unwrap();
        let one = Poly::one(&state5_vars());
        assert_eq!(poisson_bracket(&state5("x1"), &state5("y1"), &pi).unwrap(), one);
        assert_eq!(poisson_bracket(&state5("y1"), &state5("z"), &pi).unwrap(), state5("x1"));
        assert!(poisson_bracket(&state5("x1"), &state5("x2"), &pi).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_foreign_polys() {
        let other = VarSet::new(&["x1"]).unwrap();
        let pi = PoissonTensor::displayed();
        assert!(poisson_bracket(&Poly::var(&other, "x1").unwrap(), &state5("z"), &pi).is_err());
    }

    #[test]
    fn jacobi_vanishes_everywhere() {
        let pi = maxwell_bloch_tensor().unwrap();
        assert!(jacobi_residual(1, 2, 5, &pi).unwrap().is_zero());
        assert!(jacobi_residual(2, 4, 5, &pi).unwrap().is_zero());
        let all = jacobi_residuals(&pi).unwrap();
        assert_eq!(all.len(), 10);
        assert!(all.iter().all(|(_, p)| p.is_zero()));
        assert!(jacobi_residual(2, 1, 5, &pi).is_err());
        assert!(jacobi_residual(1, 2, 6, &pi).is_err());
    }

    #[test]
    fn casimir_and_not_hamiltonian() {
        let pi = maxwell_bloch_tensor().unwrap();
        let c = casimir_residual(&pi).unwrap();
        assert!(c.iter().all(Poly::is_zero));
        let h = ham_vector_field(&pi, &InvariantId::H.symbolic()).unwrap();
        assert!(h.iter().any(|p| !p.is_zero()));
    }

    #[test]
    fn hamiltonian_fields() {
        let pi = maxwell_bloch_tensor().unwrap();
        assert_eq!(
            ham_vector_field(&pi, &InvariantId::H.symbolic()).unwrap(),
            SystemId::Mb5.rhs_symbolic()
        );
        // pi grad J, expanded by hand: row 1 is (0,1,0,0,0) . (y2,-x2,-y1,x1,0) = -x2, ...
        let xj = ham_vector_field(&pi, &InvariantId::J.symbolic()).unwrap();
        let expected = vec![
            -state5("x2"),
            -state5("y2"),
            state5("x1"),
            state5("y1"),
            Poly::zero(&state5_vars()),
        ];
        assert_eq!(xj, expected);
    }

    #[test]
    fn e_table() {
        let t = matrix_commutator_table(&MatrixAlgebraBasis::nilpotent_e()).unwrap();
        assert_eq!(t.coeffs[1][4], vec![int(1), int(0), int(0), int(0), int(0)]);
        assert_eq!(t.coeffs[3][4], vec![int(0), int(0), int(1), int(0), int(0)]);
        assert!(t.coeffs[0][2].iter().all(Zero::is_zero));
        assert_eq!(t.nonzero_entries(), ["[E2, E5] = E1", "[E4, E5] = E3"]);
    }

    #[test]
    fn a_table() {
        let t = matrix_commutator_table(&MatrixAlgebraBasis::symmetry_a()).unwrap();
        assert_eq!(t.nonzero_entries(), ["[A1, A2] = A2", "[A1, A3] = -A3"]);
    }

    #[test]
    fn commutator_outside_span_is_an_error() {
        // e12 and e21 commute to diag(1,-1,0,0), which neither spans
        let basis = MatrixAlgebraBasis {
            name: "B".into(),
            matrices: vec![unit4(&[(1, 2, 1)]), unit4(&[(2, 1, 1)])],
        };
        match matrix_commutator_table(&basis) {
            Err(Error::OutsideSpan { left, right, witness }) => {
                assert_eq!((left, right), (1, 2));
                assert!(witness.starts_with("[[1, 0, 0, 0], [0, -1"));
            }
            other => panic!("expected OutsideSpan, got {other:?}"),
        }
    }

    #[test]
    fn assembled_matches_displayed() {
        let pi = maxwell_bloch_tensor().unwrap();
        assert_eq!(pi, PoissonTensor::displayed());
        assert_eq!(pi.entry(1, 4), &state5("x1"));
        assert_eq!(pi.entry(0, 1), &Poly::one(&state5_vars()));
        assert!(pi.entry(0, 2).is_zero());
    }

    #[test]
    fn stated_relations_split_into_lie_part_and_cocycle() {
        let table = matrix_commutator_table(&MatrixAlgebraBasis::nilpotent_e()).unwrap();
        let stated = StructureConstants::stated_relations();
        assert!(stated.is_antisymmetric());
        assert_eq!(stated.alpha, table.coeffs);
        assert_eq!(&stated.beta, Cocycle::maxwell_bloch().matrix());
    }

    #[test]
    fn cocycle_and_iso_checks_pass() {
        let r = cocycle_check(&Cocycle::maxwell_bloch());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.residuals.len(), 10 + 2);
        let r = iso_check_phi();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn iso_on_concrete_vectors() {
        let zero = Rational::zero();
        let neg = |x: &Rational| -x.clone();
        let a = [int(0), int(1), int(0), int(0), int(0)];
        let b = [int(0), int(0), int(0), int(0), int(1)];
        let lhs = phi_matrix(&cross(&a, &b, &zero), &zero, neg);
        let rhs = commutator(&phi_matrix(&a, &zero, neg), &phi_matrix(&b, &zero, neg), &zero);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, MatrixAlgebraBasis::nilpotent_e().matrices[0]);
        let same = cross(&a, &a, &zero);
        assert!(same.iter().all(Zero::is_zero));
    }

    #[test]
    fn broken_cocycle_fails() {
        assert!(Cocycle::new(vec![vec![int(1); 5]; 5]).is_err());
        let mut m = Cocycle::maxwell_bloch().matrix().clone();
        // theta(E1, E4) = 1 gives theta([E5,E2],E4) = -1 on the triple (2, 4, 5)
        m[0][3] = int(1);
        m[3][0] = int(-1);
        let r = cocycle_check(&Cocycle::new(m).unwrap());
        assert!(!r.passed());
    }

    #[test]
    fn every_single_sign_flip_is_detected() {
        let pi = PoissonTensor::displayed();
        for i in 0..5 {
            for j in 0..5 {
                if pi.entry(i, j).is_zero() {
                    continue;
                }
                let bad = pi.with_flipped_sign(i, j).unwrap();
                let reports = poisson_reports(&bad);
                assert!(reports.iter().any(|r| !r.passed()), "flip ({i},{j}) undetected");
            }
        }
        assert!(poisson_reports(&pi).iter().all(VerificationReport::passed));
    }
}
