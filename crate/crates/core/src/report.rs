//! Serialized certificates.
//!
//! Both kinds share one JSON document with a fixed key order, so identical
//! inputs give byte-identical output. Polynomials are stored as rendered
//! text and re-parsed on load; `phi` and `f1` live in `u1, …, un`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowup::parse_rational;
use crate::cdv::{self, CdvCertificate, DuValType, Stage, TransformKind, TransformStep};
use crate::initial::{theorem1_bound, u_ring, BoundCertificate, WeightAssignment};
use crate::parse::{parse, render};
use crate::poly::{Polynomial, Rational, Ring};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Theorem1 {
        input: Polynomial,
        bound: BoundCertificate,
    },
    Cdv(CdvCertificate),
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("certificate field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl ToString) -> ReportError {
    ReportError::Field {
        field,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Theorem1,
    Cdv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDoc {
    pub kind: TransformKind,
    pub variable: String,
    pub replacement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub after_transforms: usize,
    pub t_index: usize,
    pub weights: Vec<u32>,
    #[serde(rename = "A")]
    pub order: u64,
    pub phi: String,
    pub certified: bool,
}

/// The on-disk form. Field order here is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub schema: u32,
    pub kind: CertificateKind,
    pub tool_version: String,
    pub ring: Vec<String>,
    pub input: String,
    pub t_index: usize,
    pub weights: Vec<u32>,
    #[serde(rename = "A")]
    pub order: u64,
    pub phi: String,
    pub f1: String,
    pub d: i64,
    pub transforms: Vec<TransformDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub du_val_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e8_parameter: Option<String>,
}

impl Certificate {
    pub fn input(&self) -> &Polynomial {
        match self {
            Certificate::Theorem1 { input, .. } => input,
            Certificate::Cdv(c) => &c.input,
        }
    }

    fn core(&self) -> (&WeightAssignment, u64, &Polynomial, &Polynomial, i64) {
        match self {
            Certificate::Theorem1 { bound: b, .. } => (&b.weights, b.order, &b.phi, &b.f1, b.d),
            Certificate::Cdv(c) => (&c.weights, c.order, &c.phi, &c.f1, c.d),
        }
    }

    pub fn to_document(&self) -> CertificateDoc {
        let input = self.input();
        let ring = input.ring();
        let (w, order, phi, f1, d) = self.core();
        let mut doc = CertificateDoc {
            schema: SCHEMA_VERSION,
            kind: CertificateKind::Theorem1,
            tool_version: TOOL_VERSION.to_string(),
            ring: ring.names().to_vec(),
            input: render(input),
            t_index: w.t_index,
            weights: w.weights.clone(),
            order,
            phi: render(phi),
            f1: render(f1),
            d,
            transforms: Vec::new(),
            du_val_type: None,
            stages: None,
            e8_parameter: None,
        };
        if let Certificate::Cdv(c) = self {
            doc.kind = CertificateKind::Cdv;
            doc.transforms = c
                .transforms
                .iter()
                .map(|s| TransformDoc {
                    kind: s.kind,
                    variable: ring.name(s.variable).to_string(),
                    replacement: render(&s.replacement),
                    parameter: s.parameter.as_ref().map(Rational::to_string),
                })
                .collect();
            doc.du_val_type = Some(c.du_val.to_string());
            doc.stages = Some(
                c.stages
                    .iter()
                    .map(|s| StageDoc {
                        after_transforms: s.after_transforms,
                        t_index: s.weights.t_index,
                        weights: s.weights.weights.clone(),
                        order: s.order,
                        phi: render(&s.phi),
                        certified: s.certified,
                    })
                    .collect(),
            );
            doc.e8_parameter = c.e8_parameter.as_ref().map(Rational::to_string);
        }
        doc
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate, ReportError> {
        let doc: CertificateDoc = serde_json::from_str(text)?;
        Certificate::from_document(&doc)
    }

    pub fn from_document(doc: &CertificateDoc) -> Result<Certificate, ReportError> {
        if doc.schema != SCHEMA_VERSION {
            return Err(ReportError::Schema(doc.schema));
        }
        let ring = Ring::new(&doc.ring).map_err(|e| field("ring", e))?;
        let input = parse(&ring, &doc.input).map_err(|e| field("input", e))?;
        let u = u_ring(ring.arity().saturating_sub(1));
        let weights = WeightAssignment::new(doc.t_index, doc.weights.clone());
        weights.validate(ring.arity()).map_err(|e| field("weights", e))?;
        let phi = parse(&u, &doc.phi).map_err(|e| field("phi", e))?;
        let f1 = parse(&u, &doc.f1).map_err(|e| field("f1", e))?;

        match doc.kind {
            CertificateKind::Theorem1 => {
                if !doc.transforms.is_empty() {
                    return Err(field("transforms", "a theorem1 certificate has no transforms"));
                }
                if doc.du_val_type.is_some() || doc.stages.is_some() || doc.e8_parameter.is_some() {
                    return Err(field("kind", "cdv-only fields in a theorem1 certificate"));
                }
                Ok(Certificate::Theorem1 {
                    input,
                    bound: BoundCertificate {
                        weights,
                        order: doc.order,
                        phi,
                        f1,
                        d: doc.d,
                    },
                })
            }
            CertificateKind::Cdv => {
                let du_val: DuValType = doc
                    .du_val_type
                    .as_deref()
                    .ok_or_else(|| field("du_val_type", "missing"))?
                    .parse()
                    .map_err(|e| field("du_val_type", e))?;
                let transforms = doc
                    .transforms
                    .iter()
                    .map(|t| {
                        let variable = ring
                            .index_of(&t.variable)
                            .ok_or_else(|| field("transforms", format!("unknown variable `{}`", t.variable)))?;
                        let replacement =
                            parse(&ring, &t.replacement).map_err(|e| field("transforms", e))?;
                        let mut step = TransformStep::new(t.kind, variable, replacement);
                        if let Some(p) = &t.parameter {
                            step = step.with_parameter(
                                parse_rational(p).ok_or_else(|| field("transforms", format!("bad rational `{p}`")))?,
                            );
                        }
                        Ok(step)
                    })
                    .collect::<Result<Vec<_>, ReportError>>()?;
                let stages = doc
                    .stages
                    .as_ref()
                    .ok_or_else(|| field("stages", "missing"))?
                    .iter()
                    .map(|s| {
                        Ok(Stage {
                            after_transforms: s.after_transforms,
                            weights: WeightAssignment::new(s.t_index, s.weights.clone()),
                            order: s.order,
                            phi: parse(&u, &s.phi).map_err(|e| field("stages", e))?,
                            certified: s.certified,
                        })
                    })
                    .collect::<Result<Vec<_>, ReportError>>()?;
                let e8_parameter = doc
                    .e8_parameter
                    .as_deref()
                    .map(|p| parse_rational(p).ok_or_else(|| field("e8_parameter", format!("bad rational `{p}`"))))
                    .transpose()?;
                Ok(Certificate::Cdv(CdvCertificate {
                    input,
                    du_val,
                    transforms,
                    stages,
                    weights,
                    order: doc.order,
                    phi,
                    f1,
                    d: doc.d,
                    e8_parameter,
                }))
            }
        }
    }

    /// Re-derives every field from `input`. `Err` names the first mismatch.
    pub fn verify(&self, input: &Polynomial) -> Result<(), String> {
        match self {
            Certificate::Cdv(c) => cdv::verify_certificate(input, c),
            Certificate::Theorem1 { input: claimed, bound } => {
                if claimed != input {
                    return Err(format!("input mismatch: certificate has {claimed}"));
                }
                let fresh = theorem1_bound(input, &bound.weights)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| "the exponent-one hypothesis fails for these weights".to_string())?;
                if fresh.order != bound.order {
                    return Err(format!("A mismatch: recomputed {} vs {}", fresh.order, bound.order));
                }
                if fresh.phi != bound.phi {
                    return Err(format!("phi mismatch: recomputed {} vs {}", fresh.phi, bound.phi));
                }
                if fresh.f1 != bound.f1 {
                    return Err(format!("f1 mismatch: recomputed {} vs {}", fresh.f1, bound.f1));
                }
                if fresh.d != bound.d {
                    return Err(format!("d mismatch: recomputed {} vs {}", fresh.d, bound.d));
                }
                Ok(())
            }
        }
    }

    /// Human-readable form with the same fields as the JSON.
    pub fn to_text(&self) -> String {
        let doc = self.to_document();
        let mut s = String::new();
        let kind = match doc.kind {
            CertificateKind::Theorem1 => "theorem1",
            CertificateKind::Cdv => "cdv",
        };
        let _ = writeln!(s, "kind: {kind}");
        let _ = writeln!(s, "ring: {}", doc.ring.join(","));
        let _ = writeln!(s, "input: {}", doc.input);
        if let Some(ty) = &doc.du_val_type {
            let _ = writeln!(s, "du_val_type: {ty}");
        }
        for (i, t) in doc.transforms.iter().enumerate() {
            let _ = write!(s, "transform {}: {} {} -> {}", i + 1, t.kind.as_str(), t.variable, t.replacement);
            if let Some(p) = &t.parameter {
                let _ = write!(s, " (a={p})");
            }
            s.push('\n');
        }
        for (i, st) in doc.stages.iter().flatten().enumerate() {
            let _ = writeln!(
                s,
                "stage {}: after {} transforms, t={}, weights={}, A={}, phi={}, {}",
                i + 1,
                st.after_transforms,
                doc.ring[st.t_index],
                join(&st.weights),
                st.order,
                st.phi,
                if st.certified { "certified" } else { "rejected" }
            );
        }
        let _ = writeln!(s, "t: {}", doc.ring[doc.t_index]);
        let _ = writeln!(s, "weights: {}", join(&doc.weights));
        let _ = writeln!(s, "A={}", doc.order);
        let _ = writeln!(s, "phi={}", doc.phi);
        let _ = writeln!(s, "f1={}", doc.f1);
        let _ = writeln!(s, "d={}", doc.d);
        let _ = writeln!(s, "tool_version: {}", doc.tool_version);
        s
    }
}

fn join(w: &[u32]) -> String {
    w.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdv::certify;

    fn ring4() -> Ring {
        Ring::new(&["y1", "y2", "y3", "t"]).unwrap()
    }

    fn cd4() -> Certificate {
        let g = parse(&ring4(), "y1^2 + y2*y3^2 + y3^3").unwrap();
        let bound = theorem1_bound(&g, &WeightAssignment::new(3, vec![2, 1, 1]))
            .unwrap()
            .unwrap();
        Certificate::Theorem1 { input: g, bound }
    }

    #[test]
    fn theorem1_json_layout() {
        let json = cd4().to_json();
        let keys: Vec<&str> = json
            .lines()
            .filter_map(|l| l.strip_prefix("  \"").and_then(|l| l.split('"').next()))
            .collect();
        assert_eq!(
            keys,
            ["schema", "kind", "tool_version", "ring", "input", "t_index", "weights", "A", "phi", "f1", "d", "transforms"]
        );
        assert!(json.contains("\"phi\": \"u2*u3^2 + u3^3\""));
        assert!(json.ends_with("}\n"));
    }

    #[test]
    fn round_trips() {
        let c = cd4();
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        back.verify(c.input()).unwrap();

        let g = parse(&ring4(), "y1^2 + y2^3 + y3^5 + t*y3^4 + t^2*y3^3").unwrap();
        let cert = Certificate::Cdv(certify(&g).unwrap());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        back.verify(&g).unwrap();
        assert_eq!(back.to_json(), cert.to_json());
    }

    #[test]
    fn tampering_is_caught() {
        let json = cd4().to_json().replace("\"d\": 1", "\"d\": 0");
        let c = Certificate::from_json(&json).unwrap();
        assert!(c.verify(c.input()).unwrap_err().contains("d mismatch"));

        let other = parse(&ring4(), "y1^2 + y2*y3^2 + y3^4").unwrap();
        assert!(cd4().verify(&other).is_err());
    }

    #[test]
    fn rejects_bad_documents() {
        let json = cd4().to_json();
        assert!(matches!(
            Certificate::from_json(&json.replace("\"schema\": 1", "\"schema\": 2")),
            Err(ReportError::Schema(2))
        ));
        assert!(Certificate::from_json(&json.replace("u2*u3^2", "u9")).is_err());
        assert!(Certificate::from_json("{").is_err());
        assert!(Certificate::from_json(&json.replace("\"kind\"", "\"kynd\"")).is_err());
    }

    #[test]
    fn text_mirrors_fields() {
        let text = cd4().to_text();
        assert!(text.contains("A=3\n"));
        assert!(text.contains("d=1\n"));
        assert!(text.contains("phi=u2*u3^2 + u3^3\n"));
        assert!(text.contains("t: t\n"));
    }
}
