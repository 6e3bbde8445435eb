use std::fmt;

use crate::error::{Error, Result};
use crate::exact_poly::{Poly, Rational, VarSet};

/// Polynomial vector field `sum_i c_i d/d(coord_i)` over a variable set.
///
/// The coordinates are a subset of the set's variables; any remaining
/// variables (symbolic parameters, say) are constants for the field.
#[derive(Clone, PartialEq)]
pub struct PolyField {
    vars: VarSet,
    coords: Vec<String>,
    components: Vec<Poly>,
}

impl PolyField {
    pub fn new<S: AsRef<str>>(coords: &[S], components: Vec<Poly>) -> Result<Self> {
        let vars = components
            .first()
            .map(|p| p.var_set().clone())
            .ok_or_else(|| Error::InvalidArgument("vector field needs at least one component".into()))?;
        if coords.len() != components.len() {
            return Err(Error::Dimension {
                expected: coords.len(),
                actual: components.len(),
            });
        }
        for c in coords {
            vars.require(c.as_ref())?;
        }
        for p in &components {
            vars.check_same(p.var_set())?;
        }
        Ok(PolyField {
            vars,
            coords: coords.iter().map(|c| c.as_ref().to_owned()).collect(),
            components,
        })
    }

    pub fn zero<S: AsRef<str>>(vars: &VarSet, coords: &[S]) -> Result<Self> {
        PolyField::new(coords, vec![Poly::zero(vars); coords.len()])
    }

    pub fn var_set(&self) -> &VarSet {
        &self.vars
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, coord: &str) -> Option<&Poly> {
        self.coords
            .iter()
            .position(|c| c == coord)
            .map(|i| &self.components[i])
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// The field acting as a derivation on `f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.vars.check_same(f.var_set())?;
        let mut acc = Poly::zero(&self.vars);
        for (c, comp) in self.coords.iter().zip(&self.components) {
            if comp.is_zero() {
                continue;
            }
            acc = acc + comp * &f.diff(c)?;
        }
        Ok(acc)
    }

    fn check_compatible(&self, other: &PolyField) -> Result<()> {
        self.vars.check_same(&other.vars)?;
        if self.coords != other.coords {
            return Err(Error::InvalidArgument(format!(
                "fields act on different coordinates: ({}) vs ({})",
                self.coords.join(","),
                other.coords.join(",")
            )));
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &PolyField) -> Result<PolyField> {
        self.check_compatible(other)?;
        Ok(PolyField {
            vars: self.vars.clone(),
            coords: self.coords.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &PolyField) -> Result<PolyField> {
        self.check_compatible(other)?;
        Ok(PolyField {
            vars: self.vars.clone(),
            coords: self.coords.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Multiplies every component by the function `f`.
    pub fn mul_poly(&self, f: &Poly) -> Result<PolyField> {
        self.vars.check_same(f.var_set())?;
        Ok(PolyField {
            vars: self.vars.clone(),
            coords: self.coords.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> PolyField {
        PolyField {
            vars: self.vars.clone(),
            coords: self.coords.clone(),
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

/// `[u, v]_k = u(v_k) - v(u_k)`.
pub fn lie_bracket(u: &PolyField, v: &PolyField) -> Result<PolyField> {
    u.check_compatible(v)?;
    let components = u
        .components
        .iter()
        .zip(&v.components)
        .map(|(uk, vk)| Ok(u.apply(vk)? - v.apply(uk)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyField {
        vars: u.vars.clone(),
        coords: u.coords.clone(),
        components,
    })
}

impl fmt::Display for PolyField {
    /// `(c1) d/dx1 + (c2) d/dx2`, omitting zero components; `0` for the zero field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(&self.components)
            .filter(|(_, p)| !p.is_zero())
            .map(|(c, p)| format!("({p}) d/d{c}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for PolyField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyField({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::int;

    fn plane() -> (VarSet, Poly, Poly) {
        let v = VarSet::new(&["x", "y"]).unwrap();
        (v.clone(), Poly::var(&v, "x").unwrap(), Poly::var(&v, "y").unwrap())
    }

    #[test]
    fn rotation_and_dilation_commute() {
        let (_, x, y) = plane();
        let rot = PolyField::new(&["x", "y"], vec![-&y, x.clone()]).unwrap();
        let dil = PolyField::new(&["x", "y"], vec![x.clone(), y.clone()]).unwrap();
        assert!(lie_bracket(&rot, &dil).unwrap().is_zero());
    }

    #[test]
    fn translation_and_dilation() {
        let (v, x, y) = plane();
        let tx = PolyField::new(&["x", "y"], vec![Poly::one(&v), Poly::zero(&v)]).unwrap();
        let dil = PolyField::new(&["x", "y"], vec![x, y]).unwrap();
        assert_eq!(lie_bracket(&tx, &dil).unwrap(), tx);
        assert_eq!(lie_bracket(&dil, &tx).unwrap(), tx.scale(&int(-1)));
    }

    #[test]
    fn incompatible_fields() {
        let (v, x, _) = plane();
        let a = PolyField::new(&["x"], vec![x.clone()]).unwrap();
        let b = PolyField::new(&["y"], vec![Poly::one(&v)]).unwrap();
        assert!(lie_bracket(&a, &b).is_err());
        assert!(PolyField::new(&["w"], vec![x]).is_err());
    }

    #[test]
    fn display() {
        let (v, x, _) = plane();
        let f = PolyField::new(&["x", "y"], vec![x, Poly::zero(&v)]).unwrap();
        assert_eq!(f.to_string(), "(x) d/dx");
        assert_eq!(PolyField::zero(&v, &["x"]).unwrap().to_string(), "0");
    }
}
