use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use mbsym::integrators::integrate;
use mbsym::poisson::{coordinate_bracket_table, matrix_commutator_table, MatrixAlgebraBasis, PoissonTensor};
use mbsym::symmetry::{expand_in, same_span, solve_determining, symmetry_commutator_table, SymmetryFamily};
use mbsym::verify::{flipped_family, flipped_pi, run_suite};
use mbsym::{JetVectorField, Poly, SystemId, VarSet, VerificationReport, VerifyConfig};

use crate::table::{coordinate_columns, fmt_f64, invariant_columns, invariant_values, read_states, write_trajectory, writer};
use crate::{Failure, InvariantsArgs, SimulateArgs, SolveArgs, VerifyArgs};

const FAMILY_DIMENSION: usize = 4;

fn check_arity(system: SystemId, values: &[f64], flag: &str) -> Result<(), Failure> {
    let n = system.dim();
    if values.len() == n {
        return Ok(());
    }
    Err(Failure::Usage(format!(
        "{flag}: {system} expects {n} values ({}), got {}",
        coordinate_columns(system).join(","),
        values.len()
    )))
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{name} must be a positive number, got {x}")))
    }
}

fn output(path: Option<&std::path::Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let system = SystemId::from(a.system);
    check_arity(system, &a.init, "--init")?;
    positive("--t-end", a.t_end)?;
    positive("--h", a.h)?;
    if !a.init.iter().all(|x| x.is_finite()) {
        return Err(Failure::Usage("--init: values must be finite".into()));
    }

    let traj = integrate(a.method.into(), system, &a.init, 0.0, a.t_end, a.h)?;
    let every = a.every as usize;
    let last = traj.len() - 1;
    let rows = traj
        .times
        .into_iter()
        .zip(traj.states)
        .enumerate()
        .filter(|(i, _)| i % every == 0 || *i == last)
        .map(|(_, row)| row);
    write_trajectory(output(a.out.as_deref())?, system, rows)
}

pub fn invariants(a: &InvariantsArgs) -> Result<(), Failure> {
    let system = SystemId::from(a.system);
    let names = invariant_columns(system).map(|i| i.name());
    let mut w = writer(output(None)?);
    match (&a.input, &a.at) {
        (Some(path), _) => {
            let rows = read_states(File::open(path)?, system)?;
            w.write_record(std::iter::once("t").chain(names))?;
            for (t, x) in rows {
                let vals = invariant_values(system, &x)?;
                w.write_record(std::iter::once(t).chain(vals).map(fmt_f64))?;
            }
        }
        (None, Some(at)) => {
            check_arity(system, at, "--at")?;
            w.write_record(names)?;
            w.write_record(invariant_values(system, at)?.into_iter().map(fmt_f64))?;
        }
        (None, None) => return Err(Failure::Usage("one of --input or --at is required".into())),
    }
    w.flush()?;
    Ok(())
}

fn verify_config(a: &VerifyArgs) -> Result<VerifyConfig, Failure> {
    if let Some(ij) = &a.flip_pi_sign {
        return match ij[..] {
            [i, j] if (1..=5).contains(&i) && (1..=5).contains(&j) => Ok(flipped_pi(i - 1, j - 1)?),
            _ => Err(Failure::Usage(format!("--flip-pi-sign expects I,J in 1..=5, got {ij:?}"))),
        };
    }
    if let Some(n) = a.flip_family_sign {
        if n == 0 {
            return Err(Failure::Usage("--flip-family-sign is 1-based".into()));
        }
        return Ok(flipped_family(n - 1)?);
    }
    Ok(VerifyConfig::default())
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let cfg = verify_config(a)?;
    let reports: Vec<VerificationReport> = run_suite(a.suite.into(), &cfg);
    print_json(&serde_json::to_value(&reports)?)?;

    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        eprintln!("FAIL {}", r.check);
        for res in r.nonzero_residuals() {
            eprintln!("  {res}");
        }
    }
    Err(Failure::Verification(format!("{} of {} checks failed", failed.len(), reports.len())))
}

pub fn bracket_table() -> Result<(), Failure> {
    let e = matrix_commutator_table(&MatrixAlgebraBasis::nilpotent_e())?;
    let a = matrix_commutator_table(&MatrixAlgebraBasis::symmetry_a())?;
    let u = symmetry_commutator_table("u", &SymmetryFamily::default().basis())?;
    let pi = coordinate_bracket_table(&PoissonTensor::displayed())?;
    let names = coordinate_columns(SystemId::Mb5);
    let pi: Vec<Value> = pi
        .into_iter()
        .map(|((i, j), b)| json!({ "bracket": format!("{{{}, {}}}", names[i - 1], names[j - 1]), "value": b.to_string() }))
        .collect();
    let section = |t: &mbsym::poisson::CommutatorTable| json!({ "relations": t.nonzero_entries(), "table": t });
    print_json(&json!({
        "E": section(&e),
        "A": section(&a),
        "u": section(&u),
        "pi": pi,
    }))
}

fn monomial_name(vars: &VarSet, exponents: &[u32]) -> String {
    let factors: Vec<String> = exponents
        .iter()
        .zip(vars.names())
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

fn coefficient_table(p: &Poly) -> Vec<Value> {
    p.terms()
        .rev()
        .map(|(m, c)| json!({ "monomial": monomial_name(p.var_set(), m.exponents()), "coefficient": c.to_string() }))
        .collect()
}

fn field_json(name: &str, w: &JetVectorField, family: &[JetVectorField]) -> Result<Value, Failure> {
    let in_family = expand_in(family, w)?.map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(json!({
        "name": name,
        "field": w.to_string(),
        "coefficients": {
            "xi": coefficient_table(&w.xi),
            "eta1": coefficient_table(&w.eta[0]),
            "eta2": coefficient_table(&w.eta[1]),
            "eta3": coefficient_table(&w.eta[2]),
        },
        "in_u_basis": in_family,
    }))
}

pub fn solve_symmetries(a: &SolveArgs) -> Result<(), Failure> {
    let degree = u32::try_from(a.max_degree)
        .ok()
        .filter(|d| *d >= 1)
        .ok_or_else(|| Failure::Usage(format!("--max-degree must be at least 1, got {}", a.max_degree)))?;
    let basis = solve_determining(degree)?;
    let family = SymmetryFamily::default().basis();
    let same = same_span(&basis, &family);
    let solved = basis
        .iter()
        .enumerate()
        .map(|(k, w)| field_json(&format!("w{}", k + 1), w, &family))
        .collect::<Result<Vec<_>, _>>()?;
    let u: Vec<Value> = family
        .iter()
        .enumerate()
        .map(|(k, w)| json!({ "name": format!("u{}", k + 1), "field": w.to_string() }))
        .collect();
    print_json(&json!({
        "max_degree": degree,
        "dimension": basis.len(),
        "expected_dimension": FAMILY_DIMENSION,
        "basis": solved,
        "u": u,
        "same_span_as_u": same,
    }))?;
    if basis.len() != FAMILY_DIMENSION || !same {
        return Err(Failure::Verification(format!(
            "solver span (dimension {}) differs from span{{u1..u4}}",
            basis.len()
        )));
    }
    Ok(())
}
