//! JSON mapping descriptors.
//!
//! ```json
//! {"h": "halfplane", "omega": "0.4z"}
//! {"h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "mobius_alpha": [0, 0.6]}
//! {"h": {"coefficients": [[0, 0], [1, 0], [0.1, 0]]}, "g": "0.05z^2"}
//! ```
//!
//! Analytic parts are a catalog name, a named family with parameters, a
//! coefficient list, or an expression in the small grammar below. At most one
//! of `g`, `omega` and `mobius_alpha` may be given.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := number 'i'? | 'i' | 'z' ('^' int)? | '(' expr ')' | 'sigma(' expr ',' expr ')'
//! ```
//!
//! `sigma(a, e)` is `(e + a) / (1 + conj(a) e)` for a constant `a` in the disc.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::analytic::AnalyticMap;
use crate::error::{Error, Result};
use crate::harmonic::{from_h_and_omega, harmonic_mobius, HarmonicMap};
use crate::series::DEFAULT_ORDER;

const TOP_LEVEL_KEYS: [&str; 6] = ["id", "h", "g", "omega", "mobius_alpha", "univalent"];

/// A parsed descriptor: the map plus metadata carried alongside it.
#[derive(Clone, Debug)]
pub struct Mapping {
    pub id: Option<String>,
    pub map: HarmonicMap,
    pub declared_univalent: bool,
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Descriptor {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn parse_mapping(text: &str) -> Result<Mapping> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON: {e}")))?;
    mapping_from_value(&value)
}

pub fn mapping_from_value(value: &Value) -> Result<Mapping> {
    let obj = value
        .as_object()
        .ok_or_else(|| err("$", "expected an object"))?;
    for key in obj.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return Err(err(&format!("$.{key}"), "unknown field"));
        }
    }
    let present = |k: &str| obj.get(k).is_some_and(|v| !v.is_null());
    let extra = ["g", "omega", "mobius_alpha"]
        .iter()
        .filter(|k| present(k))
        .count();
    if extra > 1 {
        return Err(err("$", "give at most one of g, omega, mobius_alpha"));
    }
    let h = analytic_from_value(
        obj.get("h").ok_or_else(|| err("$.h", "missing field"))?,
        "$.h",
    )?;
    let wrap = |path: &'static str| {
        move |e: Error| match e {
            d @ Error::Descriptor { .. } => d,
            other => err(path, other.to_string()),
        }
    };
    let map = if present("g") {
        let g = analytic_from_value(&obj["g"], "$.g")?;
        HarmonicMap::new(h, g).map_err(wrap("$.g"))?
    } else if present("omega") {
        let omega = analytic_from_value(&obj["omega"], "$.omega")?;
        from_h_and_omega(h, omega, DEFAULT_ORDER).map_err(wrap("$.omega"))?
    } else if present("mobius_alpha") {
        let alpha = complex_from_value(&obj["mobius_alpha"], "$.mobius_alpha")?;
        harmonic_mobius(h, alpha).map_err(wrap("$.mobius_alpha"))?
    } else {
        HarmonicMap::analytic(h).map_err(wrap("$.h"))?
    };
    let id = match obj.get("id") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err("$.id", "expected a string")),
    };
    let declared_univalent = match obj.get("univalent") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(err("$.univalent", "expected a boolean")),
    };
    Ok(Mapping {
        id,
        map,
        declared_univalent,
    })
}

fn complex_from_value(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(items) if items.len() == 2 => {
            let part = |i: usize| {
                items[i]
                    .as_f64()
                    .ok_or_else(|| err(&format!("{path}[{i}]"), "expected a number"))
            };
            Ok(Complex64::new(part(0)?, part(1)?))
        }
        Value::String(s) => match parse_expression(s).map_err(|m| err(path, m))? {
            Expr::Poly(c) if c.len() == 1 => Ok(c[0]),
            _ => Err(err(path, "expected a constant")),
        },
        _ => Err(err(path, "expected a number or [re, im]")),
    }
}

fn named_map(name: &str) -> Option<AnalyticMap> {
    Some(match name {
        "identity" => AnalyticMap::Identity,
        "halfplane" => AnalyticMap::HalfPlane,
        "koebe" => AnalyticMap::Koebe,
        "logstrip" => AnalyticMap::LogStrip,
        "exp" => AnalyticMap::exponential(Complex64::new(1.0, 0.0)).ok()?,
        _ => return None,
    })
}

fn analytic_from_value(v: &Value, path: &str) -> Result<AnalyticMap> {
    match v {
        Value::String(s) => {
            if let Some(m) = named_map(s) {
                return Ok(m);
            }
            parse_expression(s)
                .map_err(|m| err(path, m))?
                .into_map()
                .map_err(|e| err(path, e.to_string()))
        }
        Value::Object(obj) => analytic_from_object(obj, path),
        _ => Err(err(path, "expected a name, expression or object")),
    }
}

fn analytic_from_object(obj: &Map<String, Value>, path: &str) -> Result<AnalyticMap> {
    let allow = |keys: &[&str]| -> Result<()> {
        for k in obj.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(err(&format!("{path}.{k}"), "unknown field"));
            }
        }
        Ok(())
    };
    let param = |k: &str| -> Result<Complex64> {
        let p = format!("{path}.{k}");
        complex_from_value(obj.get(k).ok_or_else(|| err(&p, "missing field"))?, &p)
    };
    if let Some(coeffs) = obj.get("coefficients") {
        allow(&["coefficients"])?;
        let p = format!("{path}.coefficients");
        let items = coeffs
            .as_array()
            .ok_or_else(|| err(&p, "expected an array"))?;
        let cs = items
            .iter()
            .enumerate()
            .map(|(i, c)| complex_from_value(c, &format!("{p}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        return AnalyticMap::polynomial(&cs).map_err(|e| err(&p, e.to_string()));
    }
    let name = obj.get("name").and_then(Value::as_str).ok_or_else(|| {
        err(
            &format!("{path}.name"),
            "expected a map name or coefficients",
        )
    })?;
    let built = match name {
        "exp" => {
            allow(&["name", "c"])?;
            AnalyticMap::exponential(param("c")?)
        }
        "mobius" => {
            allow(&["name", "a", "b", "c", "d"])?;
            AnalyticMap::mobius(param("a")?, param("b")?, param("c")?, param("d")?)
        }
        "automorphism" => {
            allow(&["name", "a"])?;
            let a = param("a")?;
            crate::disk::DiskPoint::new(a).map(AnalyticMap::automorphism)
        }
        other => {
            allow(&["name"])?;
            named_map(other)
                .ok_or_else(|| err(&format!("{path}.name"), format!("unknown map {other:?}")))
        }
    };
    built.map_err(|e| match e {
        d @ Error::Descriptor { .. } => d,
        other => err(path, other.to_string()),
    })
}

/// Intermediate value of the grammar: exact polynomials stay polynomials.
#[derive(Clone, Debug)]
enum Expr {
    Poly(Vec<Complex64>),
    Map(AnalyticMap),
}

impl Expr {
    fn constant(c: Complex64) -> Self {
        Expr::Poly(vec![c])
    }

    fn into_map(self) -> Result<AnalyticMap> {
        match self {
            Expr::Poly(mut c) => {
                if c.len() < 2 {
                    c.resize(2, Complex64::new(0.0, 0.0));
                }
                if c.len() == 2 && c[0] == Complex64::new(0.0, 0.0) {
                    return Ok(if c[1] == Complex64::new(1.0, 0.0) {
                        AnalyticMap::Identity
                    } else {
                        AnalyticMap::polynomial(&c)?
                    });
                }
                AnalyticMap::polynomial(&c)
            }
            Expr::Map(m) => Ok(m),
        }
    }

    fn as_constant(&self) -> Option<Complex64> {
        match self {
            Expr::Poly(c) if c.iter().skip(1).all(|x| x.norm() == 0.0) => Some(c[0]),
            _ => None,
        }
    }

    fn add(self, other: Expr) -> std::result::Result<Expr, String> {
        Ok(match (self, other) {
            (Expr::Poly(a), Expr::Poly(b)) => {
                let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
                for (i, x) in a.iter().enumerate() {
                    out[i] += x;
                }
                for (i, x) in b.iter().enumerate() {
                    out[i] += x;
                }
                Expr::Poly(out)
            }
            (a, b) => Expr::Map(
                a.into_map()
                    .map_err(|e| e.to_string())?
                    .plus(b.into_map().map_err(|e| e.to_string())?),
            ),
        })
    }

    fn mul(self, other: Expr) -> std::result::Result<Expr, String> {
        if let (Expr::Poly(a), Expr::Poly(b)) = (&self, &other) {
            let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            return Ok(Expr::Poly(out));
        }
        if let Some(c) = self.as_constant() {
            return Ok(Expr::Map(
                other.into_map().map_err(|e| e.to_string())?.scaled(c),
            ));
        }
        if let Some(c) = other.as_constant() {
            return Ok(Expr::Map(
                self.into_map().map_err(|e| e.to_string())?.scaled(c),
            ));
        }
        Ok(Expr::Map(
            self.into_map()
                .map_err(|e| e.to_string())?
                .times(other.into_map().map_err(|e| e.to_string())?),
        ))
    }

    fn neg(self) -> std::result::Result<Expr, String> {
        Expr::constant(Complex64::new(-1.0, 0.0)).mul(self)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> std::result::Result<(), String> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected {:?} at offset {}", c as char, self.pos))
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, String> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?.neg()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(self.factor()?)?;
                }
                Some(c)
                    if c == b'('
                        || c == b'z'
                        || c == b'i'
                        || c == b's'
                        || c.is_ascii_digit()
                        || c == b'.' =>
                {
                    acc = acc.mul(self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> std::result::Result<f64, String> {
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exponent_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map_err(|_| format!("bad number {text:?} at offset {start}"))
    }

    fn factor(&mut self) -> std::result::Result<Expr, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                let mut k = 1usize;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let x = self.number()?;
                    if x.fract() != 0.0 || !(0.0..=64.0).contains(&x) {
                        return Err(format!("exponent {x} must be an integer in [0, 64]"));
                    }
                    k = x as usize;
                }
                let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
                c[k] = Complex64::new(1.0, 0.0);
                Ok(Expr::Poly(c))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::constant(Complex64::new(0.0, 1.0)))
            }
            Some(b's') => {
                let rest = &self.src[self.pos..];
                if !rest.starts_with(b"sigma") {
                    return Err(format!("unknown token at offset {}", self.pos));
                }
                self.pos += 5;
                self.expect(b'(')?;
                let a = self
                    .expr()?
                    .as_constant()
                    .ok_or("first argument of sigma must be a constant")?;
                if a.norm() >= 1.0 {
                    return Err(format!("sigma parameter {a} is outside the unit disc"));
                }
                self.expect(b',')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                let one = Complex64::new(1.0, 0.0);
                let outer =
                    AnalyticMap::mobius(one, a, a.conj(), one).map_err(|e| e.to_string())?;
                let inner = inner.into_map().map_err(|e| e.to_string())?;
                Ok(Expr::Map(outer.compose(inner)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(Expr::constant(Complex64::new(0.0, x)))
                } else {
                    Ok(Expr::constant(Complex64::new(x, 0.0)))
                }
            }
            Some(c) => Err(format!("unexpected {:?} at offset {}", c as char, self.pos)),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn parse_expression(s: &str) -> std::result::Result<Expr, String> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(format!("trailing input at offset {}", p.pos));
    }
    Ok(e)
}

/// Parses an expression of the grammar into an analytic map.
pub fn parse_analytic(s: &str) -> Result<AnalyticMap> {
    if let Some(m) = named_map(s) {
        return Ok(m);
    }
    parse_expression(s).map_err(|m| err("$", m))?.into_map()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expressions_evaluate() {
        let cases = [
            ("0.4z", z(0.4, 0.0)),
            ("z^2", z(0.0, 0.0)),
            ("0.1 + 0.2i*z - z^3", z(0.0, 0.0)),
            ("(0.1+0.2i)z", z(0.0, 0.0)),
        ];
        let p = z(0.3, -0.2);
        let expected = [
            0.4 * p,
            p * p,
            z(0.1, 0.0) + z(0.0, 0.2) * p - p * p * p,
            z(0.1, 0.2) * p,
        ];
        for ((src, _), want) in cases.iter().zip(expected) {
            let m = parse_analytic(src).unwrap();
            assert_abs_diff_eq!((m.eval(p).unwrap() - want).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn sigma_composes_with_disc_automorphism() {
        let m = parse_analytic("sigma(0.4, 0.8z)").unwrap();
        let p = z(0.5, 0.5);
        let w = 0.8 * p;
        let want = (w + 0.4) / (1.0 + 0.4 * w);
        assert_abs_diff_eq!((m.eval(p).unwrap() - want).norm(), 0.0, epsilon = 1e-15);
        assert!(parse_analytic("sigma(1.2, z)").is_err());
        assert!(parse_analytic("sigma(z, z)").is_err());
    }

    #[test]
    fn linear_expressions_stay_polynomial() {
        let m = parse_analytic("0.3z").unwrap();
        assert!(matches!(m, AnalyticMap::Series(_)));
        assert!(matches!(
            parse_analytic("z").unwrap(),
            AnalyticMap::Identity
        ));
    }

    #[test]
    fn descriptors_build_maps() {
        let m = parse_mapping(r#"{"h": "halfplane", "omega": "0.4z"}"#).unwrap();
        assert!(!m.map.is_analytic());
        let p = crate::disk::DiskPoint::from_re_im(0.2, 0.1).unwrap();
        let w = m.map.dilatation().value(p.value()).unwrap();
        assert_abs_diff_eq!((w - 0.4 * p.value()).norm(), 0.0, epsilon = 1e-14);

        let m = parse_mapping(
            r#"{"id": "hm", "h": {"name": "mobius", "a": 1, "b": -0.2, "c": -0.2, "d": 1}, "mobius_alpha": [0, 0.6]}"#,
        )
        .unwrap();
        assert_eq!(m.id.as_deref(), Some("hm"));
        assert_eq!(m.map.mobius_alpha(), Some(z(0.0, 0.6)));

        let m = parse_mapping(
            r#"{"h": {"coefficients": [0, 1, [0.1, 0]]}, "g": "0.05z^2", "univalent": true}"#,
        )
        .unwrap();
        assert!(m.declared_univalent);
        let v = m.map.eval(p).unwrap();
        let q = p.value();
        let want = q + 0.1 * q * q + (0.05 * q * q).conj();
        assert_abs_diff_eq!((v - want).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn errors_carry_field_paths() {
        let path_of = |text: &str| match parse_mapping(text) {
            Err(Error::Descriptor { path, .. }) => path,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(path_of(r#"{"h": "identity", "omgea": "z"}"#), "$.omgea");
        assert_eq!(path_of(r#"{"omega": "z"}"#), "$.h");
        assert_eq!(path_of(r#"{"h": {"name": "exp", "k": 1}}"#), "$.h.k");
        assert_eq!(path_of(r#"{"h": "identity", "omega": "0.3q"}"#), "$.omega");
        assert_eq!(
            path_of(r#"{"h": {"coefficients": [0, "x"]}}"#),
            "$.h.coefficients[1]"
        );
        assert_eq!(path_of(r#"{"h": "identity", "omega": "1.5z"}"#), "$.omega");
        assert_eq!(path_of(r#"{"h": "identity", "g": "z", "omega": "z"}"#), "$");
    }
}
