//! Serializable description of a backend: the constant field and the curve or
//! quadratic that defines `(K, ∞, C)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, FiniteField, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BackendKind {
    /// `K = k(t)`, `∞` the usual degree-one place, `C = k[t]`.
    RationalDelta1,
    /// `K` the function field of a Weierstrass curve, `C = k[x, y]`.
    EllipticDelta1,
    /// `K = k(t)`, `∞` the degree-two place of an irreducible quadratic `p`.
    RationalDelta2,
}

impl BackendKind {
    pub fn genus(self) -> u32 {
        match self {
            BackendKind::EllipticDelta1 => 1,
            _ => 0,
        }
    }

    /// Degree of the residue field at `∞` over `k`.
    pub fn delta(self) -> u32 {
        match self {
            BackendKind::RationalDelta2 => 2,
            _ => 1,
        }
    }
}

/// A field element in a configuration file: an integer label for prime
/// fields, or a coefficient vector over the prime field for extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Label(u32),
    Coefficients(Vec<u32>),
}

impl FieldValue {
    pub fn resolve(&self, k: &FiniteField) -> Result<Fe> {
        match self {
            FieldValue::Label(i) => {
                if k.ext_degree() > 1 || !k.modulus().is_empty() {
                    // labels of an extension are base-p digit strings
                    k.element(*i as usize)
                } else {
                    let p = k.characteristic();
                    if *i >= p {
                        return Err(Error::Config(format!("{i} is not an element of F_{p}")));
                    }
                    Ok(Fe(*i as u8))
                }
            }
            FieldValue::Coefficients(cs) => {
                let p = k.characteristic();
                if cs.len() > k.ext_degree() as usize || cs.iter().any(|&c| c >= p) {
                    return Err(Error::Config(format!("{cs:?} is not a coefficient vector of F_{}", k.order())));
                }
                let coords: Vec<Fe> = cs.iter().map(|&c| Fe(c as u8)).collect();
                Ok(k.from_coordinates(&coords))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub q: usize,
    /// Characteristic; checked against `q` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
    /// Defining polynomial of `F_q` over `F_p` (lowest first, monic); the
    /// Conway polynomial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_modulus: Option<Vec<u8>>,
    /// `[a1, a2, a3, a4, a6]` of `y² + a1xy + a3y = x³ + a2x² + a4x + a6`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<Vec<FieldValue>>,
    /// `[c0, c1, 1]`, the monic irreducible `p(t) = t² + c1 t + c0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<Vec<FieldValue>>,
}

impl BackendConfig {
    pub fn rational(q: usize) -> Self {
        BackendConfig {
            kind: BackendKind::RationalDelta1,
            q,
            prime: None,
            extension_modulus: None,
            weierstrass: None,
            quadratic: None,
        }
    }

    /// Elliptic backend with labels `[a1, a2, a3, a4, a6]`.
    pub fn elliptic(q: usize, a: [u32; 5]) -> Self {
        BackendConfig {
            kind: BackendKind::EllipticDelta1,
            weierstrass: Some(a.iter().map(|&c| FieldValue::Label(c)).collect()),
            ..Self::rational(q)
        }
    }

    /// Degree-two place backend with `p(t) = t² + c1 t + c0`.
    pub fn quadratic_place(q: usize, c0: u32, c1: u32) -> Self {
        BackendConfig {
            kind: BackendKind::RationalDelta2,
            quadratic: Some(vec![FieldValue::Label(c0), FieldValue::Label(c1), FieldValue::Label(1)]),
            ..Self::rational(q)
        }
    }

    /// The backends used throughout the test suites: `y² + y = x³` over `F_2`,
    /// `y² = x³ − x + 1` over `F_3`, and `p = t² + t + 1` over `F_2`,
    /// `p = t² + 1` over `F_3`.
    pub fn default_for(kind: BackendKind, q: usize) -> Result<Self> {
        Ok(match (kind, q) {
            (BackendKind::RationalDelta1, _) => Self::rational(q),
            (BackendKind::EllipticDelta1, 2) => Self::elliptic(2, [0, 0, 1, 0, 0]),
            (BackendKind::EllipticDelta1, 3) => Self::elliptic(3, [0, 0, 0, 2, 1]),
            (BackendKind::RationalDelta2, 2) => Self::quadratic_place(2, 1, 1),
            (BackendKind::RationalDelta2, 3) => Self::quadratic_place(3, 1, 0),
            _ => {
                return Err(Error::Config(format!(
                    "no default {kind:?} configuration for q = {q}; give the curve or quadratic explicitly"
                )))
            }
        })
    }

    /// Loads a JSON or TOML file, chosen by extension (`.toml` is TOML,
    /// everything else JSON).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// The constant field `F_q`.
    pub fn field(&self) -> Result<FiniteField> {
        let k = match &self.extension_modulus {
            Some(m) => FiniteField::with_modulus(self.q, m)?,
            None => FiniteField::new(self.q)?,
        };
        if let Some(p) = self.prime {
            if p != k.characteristic() {
                return Err(Error::Config(format!("prime {p} does not divide q = {}", self.q)));
            }
        }
        Ok(k)
    }

    /// Weierstrass coefficients resolved in `k`; validated for nonsingularity
    /// by the backend.
    pub fn weierstrass_coefficients(&self, k: &FiniteField) -> Result<[Fe; 5]> {
        let w = self
            .weierstrass
            .as_ref()
            .ok_or_else(|| Error::Config("elliptic backend needs weierstrass = [a1, a2, a3, a4, a6]".into()))?;
        if w.len() != 5 {
            return Err(Error::Config("weierstrass must have exactly five coefficients".into()));
        }
        let mut out = [Fe::ZERO; 5];
        for (o, v) in out.iter_mut().zip(w) {
            *o = v.resolve(k)?;
        }
        Ok(out)
    }

    /// The quadratic `p(t)`, checked to be monic of degree two and irreducible.
    pub fn quadratic_polynomial(&self, k: &FiniteField) -> Result<Poly> {
        let c = self
            .quadratic
            .as_ref()
            .ok_or_else(|| Error::Config("degree-two backend needs quadratic = [c0, c1, 1]".into()))?;
        if c.len() != 3 {
            return Err(Error::Config("quadratic must have exactly three coefficients".into()));
        }
        let coeffs = c.iter().map(|v| v.resolve(k)).collect::<Result<Vec<_>>>()?;
        if coeffs[2] != Fe::ONE {
            return Err(Error::Config("quadratic must be monic".into()));
        }
        let p = Poly::from_coeffs(coeffs);
        if !p.is_irreducible(k) {
            return Err(Error::Config("quadratic is reducible over F_q".into()));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_toml_round_trip() {
        let c = BackendConfig::elliptic(3, [0, 0, 0, 2, 1]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(BackendConfig::from_json(&json).unwrap(), c);
        let toml_text = "kind = \"RationalDelta2\"\nq = 2\nquadratic = [1, 1, 1]\n";
        let t = BackendConfig::from_toml(toml_text).unwrap();
        assert_eq!(t, BackendConfig::quadratic_place(2, 1, 1));
    }

    #[test]
    fn extension_values_as_coefficient_vectors() {
        let c: BackendConfig =
            BackendConfig::from_json(r#"{"kind":"RationalDelta2","q":4,"quadratic":[[0,1],1,1]}"#).unwrap();
        let k = c.field().unwrap();
        let p = c.quadratic_polynomial(&k).unwrap();
        // t² + t + w with w the generator of F_4
        assert_eq!(p.coeff(0), k.generator());
    }

    #[test]
    fn rejects_reducible_quadratic_and_wrong_prime() {
        let c = BackendConfig::quadratic_place(2, 1, 0);
        let k = c.field().unwrap();
        assert!(c.quadratic_polynomial(&k).is_err());
        let mut c = BackendConfig::rational(9);
        c.prime = Some(2);
        assert!(c.field().is_err());
    }
}
