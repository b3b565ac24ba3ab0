//! JSON input formats, subdivision export and OFF meshes.
//!
//! Polytope: `{"dim": n, "halfspaces": [{"normal": [..], "offset": r}, ...]}`
//! (an optional `"volume"` field is written on output and ignored on input).
//! Section: `{"N": N, "basis": [[..], ..]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::polytope::Polytope;
use crate::subdivision::SimplexTriple;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub halfspaces: Vec<HalfspaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionJson {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub basis: Vec<Vec<f64>>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &Polytope, with_volume: bool) -> Self {
        PolytopeJson {
            dim: p.dim(),
            halfspaces: p
                .halfspaces()
                .iter()
                .map(|h| HalfspaceJson {
                    normal: h.normal.iter().copied().collect(),
                    offset: h.offset,
                })
                .collect(),
            volume: with_volume.then(|| p.volume()),
        }
    }

    pub fn build(&self) -> Result<Polytope> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| (Vector::from_column_slice(&h.normal), h.offset))
            .collect();
        Polytope::from_halfspaces(self.dim, hs)
    }
}

impl SectionJson {
    pub fn build(&self) -> Result<Polytope> {
        Polytope::cube_section(self.big_n, &self.basis)
    }
}

pub fn parse_polytope_json(text: &str) -> Result<Polytope> {
    serde_json::from_str::<PolytopeJson>(text)?.build()
}

pub fn parse_section_json(text: &str) -> Result<Polytope> {
    serde_json::from_str::<SectionJson>(text)?.build()
}

/// Accepts either format, told apart by the `halfspaces` / `basis` keys.
pub fn parse_input(text: &str) -> Result<Polytope> {
    let value: Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
    if object.contains_key("halfspaces") {
        serde_json::from_value::<PolytopeJson>(value)?.build()
    } else if object.contains_key("basis") {
        serde_json::from_value::<SectionJson>(value)?.build()
    } else {
        Err(Error::InvalidInput(
            "expected a polytope (\"halfspaces\") or section (\"basis\")".into(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleJson {
    pub flag: Vec<usize>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub degenerate: bool,
}

fn coords(points: &[Vector]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.iter().copied().collect()).collect()
}

pub fn export_triples(triples: &[SimplexTriple]) -> Vec<TripleJson> {
    triples
        .iter()
        .map(|t| TripleJson {
            flag: t.flag.faces.clone(),
            a: coords(&t.a),
            b: coords(&t.b),
            degenerate: t.degenerate,
        })
        .collect()
}

/// OFF mesh of the nondegenerate simplices `A`: triangles for `n = 2`
/// (lifted to `z = 0`), the four faces of each tetrahedron for `n = 3`.
pub fn off_mesh(triples: &[SimplexTriple]) -> Result<String> {
    let n = triples.first().map(SimplexTriple::dim).unwrap_or(2);
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let live: Vec<&SimplexTriple> = triples.iter().filter(|t| !t.degenerate).collect();
    let mut vertex_lines = String::new();
    let mut face_lines = String::new();
    let mut faces = 0;
    for (s, t) in live.iter().enumerate() {
        for a in &t.a {
            let z = if n == 3 { a[2] } else { 0.0 };
            vertex_lines.push_str(&format!("{:?} {:?} {:?}\n", a[0], a[1], z));
        }
        let base = s * (n + 1);
        if n == 2 {
            face_lines.push_str(&format!("3 {} {} {}\n", base, base + 1, base + 2));
            faces += 1;
        } else {
            for skip in 0..4 {
                let ids: Vec<String> = (0..4)
                    .filter(|&i| i != skip)
                    .map(|i| (base + i).to_string())
                    .collect();
                face_lines.push_str(&format!("3 {}\n", ids.join(" ")));
                faces += 1;
            }
        }
    }
    Ok(format!(
        "OFF\n{} {} 0\n{}{}",
        live.len() * (n + 1),
        faces,
        vertex_lines,
        face_lines
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::build_simplices;

    #[test]
    fn polytope_json_round_trip() {
        let cube = Polytope::cube(3).unwrap();
        let text = serde_json::to_string(&PolytopeJson::from_polytope(&cube, true)).unwrap();
        assert!(text.contains("\"volume\":8.0"));
        let back = parse_polytope_json(&text).unwrap();
        assert_eq!(back.vertices(), cube.vertices());
        assert_eq!(parse_input(&text).unwrap().vertices(), cube.vertices());
    }

    #[test]
    fn section_json() {
        let text = r#"{"N": 3, "basis": [[1, -1, 0], [1, 1, -2]]}"#;
        let p = parse_input(text).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!((p.volume() - 3.0 * 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(parse_section_json(text).unwrap().vertices().len(), 6);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_input("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_input("[1, 2]"), Err(Error::InvalidInput(_))));
        assert!(matches!(
            parse_input("{\"x\": 1}"),
            Err(Error::InvalidInput(_))
        ));
        assert!(
            parse_input(r#"{"dim": 2, "halfspaces": [{"normal": [1], "offset": 1}]}"#).is_err()
        );
        assert!(
            parse_input(r#"{"dim": 99, "halfspaces": [{"normal": [1], "offset": 1}]}"#).is_err()
        );
        assert!(parse_input(r#"{"N": 2, "basis": [[1, 1], [2, 2]]}"#).is_err());
    }

    #[test]
    fn off_export_counts() {
        let cube = Polytope::cube(3).unwrap();
        let off = off_mesh(&build_simplices(&cube)).unwrap();
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("192 192 0"));
        let square = Polytope::cube(2).unwrap();
        let off = off_mesh(&build_simplices(&square)).unwrap();
        assert!(off.starts_with("OFF\n24 8 0\n"));
        assert!(off_mesh(&build_simplices(&Polytope::cube(4).unwrap())).is_err());
    }

    #[test]
    fn triple_export_shape() {
        let out = export_triples(&build_simplices(&Polytope::cube(2).unwrap()));
        assert_eq!(out.len(), 8);
        assert_eq!(out[0].flag.len(), 3);
        assert_eq!(out[0].a.len(), 3);
    }
}
