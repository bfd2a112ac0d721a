//! Built-in maps with the properties known about them and where each known
//! value comes from.

use serde::Serialize;

use crate::descriptor::{parse_mapping, Mapping};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Known<T> {
    pub value: T,
    pub provenance: &'static str,
}

const fn known<T>(value: T, provenance: &'static str) -> Option<Known<T>> {
    Some(Known { value, provenance })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// JSON mapping descriptor.
    pub descriptor: &'static str,
    pub convex: Option<Known<bool>>,
    pub schwarzian_norm: Option<Known<f64>>,
    pub order: Option<Known<f64>>,
    /// Harmonic Möbius maps, whose harmonic Schwarzian vanishes identically.
    pub schwarzian_vanishes: bool,
    pub univalent: bool,
    /// `h(0) = g(0) = 0` and `h'(0) = 1`.
    pub normalized: bool,
}

const MOBIUS_NORM: Option<Known<f64>> = known(0.0, "closed form: S vanishes on Möbius maps");
const CONVEX_ORDER: Option<Known<f64>> = known(1.0, "convex maps have order 1; sampled fixture");

macro_rules! hmobius {
    ($name:literal, $desc:literal, $json:literal, $normalized:expr) => {
        CatalogEntry {
            name: $name,
            description: $desc,
            descriptor: $json,
            convex: None,
            schwarzian_norm: known(0.0, "closed form: S_f = 0 for h Möbius, g = conj(alpha) h"),
            order: None,
            schwarzian_vanishes: true,
            univalent: true,
            normalized: $normalized,
        }
    };
}

macro_rules! shear {
    ($name:literal, $desc:literal, $json:literal) => {
        CatalogEntry {
            name: $name,
            description: $desc,
            descriptor: $json,
            convex: None,
            schwarzian_norm: None,
            order: None,
            schwarzian_vanishes: false,
            univalent: false,
            normalized: true,
        }
    };
}

pub static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "identity",
        description: "z",
        descriptor: r#"{"h": "identity", "univalent": true}"#,
        convex: known(true, "image is the unit disc"),
        schwarzian_norm: MOBIUS_NORM,
        order: known(1.0, "closed form"),
        schwarzian_vanishes: true,
        univalent: true,
        normalized: true,
    },
    CatalogEntry {
        name: "halfplane",
        description: "z/(1-z)",
        descriptor: r#"{"h": "halfplane", "univalent": true}"#,
        convex: known(
            true,
            "image is the half-plane Re w > -1/2; convexity fixture",
        ),
        schwarzian_norm: MOBIUS_NORM,
        order: CONVEX_ORDER,
        schwarzian_vanishes: true,
        univalent: true,
        normalized: true,
    },
    CatalogEntry {
        name: "mobius-0.2",
        description: "(z-0.2)/(1-0.2z)",
        descriptor: r#"{"h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "univalent": true}"#,
        convex: known(true, "disc automorphism"),
        schwarzian_norm: MOBIUS_NORM,
        order: known(1.0, "disc automorphism; order of the renormalized map"),
        schwarzian_vanishes: true,
        univalent: true,
        normalized: false,
    },
    CatalogEntry {
        name: "koebe",
        description: "z/(1-z)^2",
        descriptor: r#"{"h": "koebe", "univalent": true}"#,
        convex: known(false, "image is a slit plane; convexity fixture"),
        schwarzian_norm: known(6.0, "closed form S = -6/(1-z^2)^2; sampled fixture"),
        order: known(2.0, "extremal for the univalent class; sampled fixture"),
        schwarzian_vanishes: false,
        univalent: true,
        normalized: true,
    },
    CatalogEntry {
        name: "exp",
        description: "e^z - 1",
        descriptor: r#"{"h": "exp", "univalent": true}"#,
        convex: known(true, "Re(1 + z) > 0 on the disc"),
        schwarzian_norm: known(0.5, "closed form S = -1/2"),
        order: CONVEX_ORDER,
        schwarzian_vanishes: false,
        univalent: true,
        normalized: true,
    },
    CatalogEntry {
        name: "logstrip",
        description: "(1/2) log((1+z)/(1-z))",
        descriptor: r#"{"h": "logstrip", "univalent": true}"#,
        convex: known(true, "image is the strip |Im w| < pi/4"),
        schwarzian_norm: known(2.0, "closed form S = 2/(1-z^2)^2; sampled fixture"),
        order: CONVEX_ORDER,
        schwarzian_vanishes: false,
        univalent: true,
        normalized: true,
    },
    shear!(
        "shear-identity-0.3z",
        "h = z, omega = 0.3z",
        r#"{"h": "identity", "omega": "0.3z"}"#
    ),
    shear!(
        "shear-identity-0.4z",
        "h = z, omega = 0.4z",
        r#"{"h": "identity", "omega": "0.4z"}"#
    ),
    shear!(
        "shear-halfplane-0.3z",
        "h = z/(1-z), omega = 0.3z",
        r#"{"h": "halfplane", "omega": "0.3z"}"#
    ),
    shear!(
        "shear-halfplane-0.4z",
        "h = z/(1-z), omega = 0.4z",
        r#"{"h": "halfplane", "omega": "0.4z"}"#
    ),
    shear!(
        "shear-halfplane-z",
        "h = z/(1-z), omega = z",
        r#"{"h": "halfplane", "omega": "z"}"#
    ),
    shear!(
        "shear-logstrip-0.1z",
        "h = (1/2) log((1+z)/(1-z)), omega = 0.1z",
        r#"{"h": "logstrip", "omega": "0.1z"}"#
    ),
    hmobius!(
        "hmobius-identity-0",
        "z + conj(0 z)",
        r#"{"h": "identity", "mobius_alpha": 0, "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-identity-0.3",
        "z + conj(0.3 z)",
        r#"{"h": "identity", "mobius_alpha": 0.3, "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-identity-0.6i",
        "z + conj(0.6i z)",
        r#"{"h": "identity", "mobius_alpha": [0, 0.6], "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-halfplane-0",
        "h + conj(0 h), h = z/(1-z)",
        r#"{"h": "halfplane", "mobius_alpha": 0, "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-halfplane-0.3",
        "h + conj(0.3 h), h = z/(1-z)",
        r#"{"h": "halfplane", "mobius_alpha": 0.3, "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-halfplane-0.6i",
        "h + conj(0.6i h), h = z/(1-z)",
        r#"{"h": "halfplane", "mobius_alpha": [0, 0.6], "univalent": true}"#,
        true
    ),
    hmobius!(
        "hmobius-mobius-0.2-0",
        "h + conj(0 h), h = (z-0.2)/(1-0.2z)",
        r#"{"h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "mobius_alpha": 0, "univalent": true}"#,
        false
    ),
    hmobius!(
        "hmobius-mobius-0.2-0.3",
        "h + conj(0.3 h), h = (z-0.2)/(1-0.2z)",
        r#"{"h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "mobius_alpha": 0.3, "univalent": true}"#,
        false
    ),
    hmobius!(
        "hmobius-mobius-0.2-0.6i",
        "h + conj(0.6i h), h = (z-0.2)/(1-0.2z)",
        r#"{"h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "mobius_alpha": [0, 0.6], "univalent": true}"#,
        false
    ),
];

/// Parametric family accepted by [`resolve`] in addition to the fixed entries.
pub const HARMONIC_MOBIUS_FAMILY: &str = "harmonic-mobius(h, alpha)";

impl CatalogEntry {
    pub fn mapping(&self) -> Result<Mapping> {
        let mut m = parse_mapping(self.descriptor)?;
        m.id = Some(self.name.to_string());
        Ok(m)
    }

    pub fn is_harmonic(&self) -> bool {
        self.descriptor.contains("omega") || self.descriptor.contains("mobius_alpha")
    }
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Resolves a catalog name or `harmonic-mobius(h, alpha)` with `h` an
/// analytic name or expression and `alpha` a constant such as `0.3` or `0.6i`.
pub fn resolve(name: &str) -> Result<Mapping> {
    if let Some(entry) = lookup(name) {
        return entry.mapping();
    }
    let unknown = || Error::Descriptor {
        path: "map".into(),
        message: format!("unknown catalog map {name:?}"),
    };
    let args = name
        .strip_prefix("harmonic-mobius(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(unknown)?;
    let (h, alpha) = args.rsplit_once(',').ok_or_else(unknown)?;
    let descriptor = serde_json::json!({
        "h": h.trim(),
        "mobius_alpha": alpha.trim(),
        "univalent": true,
    });
    let mut m = crate::descriptor::mapping_from_value(&descriptor)?;
    m.id = Some(name.to_string());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{order_of, sup_weighted, Functional, SupConfig};
    use num_complex::Complex64;

    #[test]
    fn every_entry_builds() {
        for e in ENTRIES {
            let m = e
                .mapping()
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(m.id.as_deref(), Some(e.name));
            assert_eq!(m.declared_univalent, e.univalent, "{}", e.name);
            assert_eq!(
                m.map.mobius_alpha().is_some(),
                e.schwarzian_vanishes && e.name.starts_with("hmobius"),
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn normalization_flags_match_maps() {
        let zero = Complex64::new(0.0, 0.0);
        for e in ENTRIES {
            let m = e.mapping().unwrap().map;
            let h = m.h().jet(zero).unwrap();
            let g0 = m.g().eval(zero).unwrap();
            let normalized =
                h.value().norm() < 1e-14 && g0.norm() < 1e-14 && (h.d1() - 1.0).norm() < 1e-14;
            assert_eq!(normalized, e.normalized, "{}", e.name);
        }
    }

    #[test]
    fn known_values_match_fixtures() {
        let cfg = SupConfig::default();
        for e in ENTRIES.iter().filter(|e| !e.is_harmonic()) {
            let m = e.mapping().unwrap().map;
            if let Some(k) = e.schwarzian_norm {
                let s = sup_weighted(&Functional::Schwarzian(m.h()), &cfg)
                    .unwrap()
                    .value;
                assert!((s - k.value).abs() < 1e-3, "{}: {s}", e.name);
            }
            if let Some(k) = e.order {
                let a = order_of(m.h(), &cfg).unwrap().alpha;
                assert!((a - k.value).abs() < 1e-3, "{}: {a}", e.name);
            }
            if let Some(k) = e.convex {
                let v = crate::criteria::convexity_check(m.h(), &cfg).unwrap();
                assert_eq!(v.holds, k.value, "{}", e.name);
            }
        }
    }

    #[test]
    fn resolves_the_parametric_family() {
        let m = resolve("harmonic-mobius(halfplane, 0.6i)").unwrap();
        assert_eq!(m.map.mobius_alpha(), Some(Complex64::new(0.0, 0.6)));
        assert!(resolve("harmonic-mobius(halfplane)").is_err());
        assert!(resolve("nope").is_err());
        assert!(resolve("koebe").is_ok());
    }
}
