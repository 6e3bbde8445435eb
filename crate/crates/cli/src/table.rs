//! CSV layout shared by `simulate` and `invariants`.

use std::io::{Read, Write};

use mbsym::integrators::invariant_on;
use mbsym::{InvariantId, SystemId};

use crate::Failure;

/// Invariants inlined after the coordinates. `el6` reports the canonical
/// quantities through the Legendre map.
pub fn invariant_columns(system: SystemId) -> [InvariantId; 3] {
    match system {
        SystemId::Mb5 => [InvariantId::H, InvariantId::C, InvariantId::J],
        SystemId::Ham6 | SystemId::El6 => [InvariantId::Htilde, InvariantId::Ctilde, InvariantId::Jtilde],
    }
}

pub fn coordinate_columns(system: SystemId) -> &'static [&'static str] {
    system.domain().coordinate_names()
}

/// 17 significant digits, '.' separator regardless of locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn invariant_values(system: SystemId, state: &[f64]) -> Result<Vec<f64>, Failure> {
    invariant_columns(system)
        .iter()
        .map(|id| invariant_on(system, *id, state).map_err(Failure::from))
        .collect()
}

/// Writes `t, coordinates..., invariants...` for each kept row.
pub fn write_trajectory<W: Write>(
    out: W,
    system: SystemId,
    rows: impl Iterator<Item = (f64, Vec<f64>)>,
) -> Result<(), Failure> {
    let mut w = writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(coordinate_columns(system).iter().map(|s| s.to_string()));
    header.extend(invariant_columns(system).iter().map(|i| i.name().to_string()));
    w.write_record(&header)?;
    for (t, x) in rows {
        let inv = invariant_values(system, &x)?;
        let record: Vec<String> = std::iter::once(t).chain(x).chain(inv).map(fmt_f64).collect();
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(t, state)` rows. The coordinate columns are looked up by name;
/// a missing `t` column yields the row index.
pub fn read_states<R: Read>(input: R, system: SystemId) -> Result<Vec<(f64, Vec<f64>)>, Failure> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let position = |name: &str| headers.iter().position(|h| h == name);
    let coords = coordinate_columns(system)
        .iter()
        .map(|name| {
            position(name).ok_or_else(|| Failure::Usage(format!("input has no `{name}` column required by {system}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t_col = position("t");

    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64, Failure> {
            let raw = record.get(i).unwrap_or("");
            raw.parse()
                .map_err(|_| Failure::Usage(format!("row {}: `{raw}` is not a number", line + 1)))
        };
        let t = match t_col {
            Some(i) => field(i)?,
            None => line as f64,
        };
        let x = coords.iter().map(|&i| field(i)).collect::<Result<Vec<_>, _>>()?;
        rows.push((t, x));
    }
    Ok(rows)
}
