//! JSON input documents for spaces and fibrations.
//!
//! A space is either `{"type":"graph","vertices":N,"edges":[[i,j],…]}` with
//! 0-based vertex indices and optional `"labels"`, or
//! `{"type":"matrix","labels":[…],"dist":[[…]]}` whose entries are `"p/q"`
//! or integer strings (bare JSON integers are accepted too). A fibration is
//! `{"total":<space>,"base":<space>,"projection":{"a":"A",…}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Length, MetricSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceDoc {
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Matrix {
        labels: Vec<String>,
        dist: Vec<Vec<Entry>>,
    },
}

/// A distance entry: `"p/q"`, `"n"` or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn length(&self) -> Result<Length> {
        match self {
            Entry::Int(n) => Ok(Length::integer(*n)),
            Entry::Text(s) => s.parse(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationDoc {
    pub total: SpaceDoc,
    pub base: SpaceDoc,
    pub projection: BTreeMap<String, String>,
}

impl SpaceDoc {
    /// Builds the space. Matrix input is only shape-checked; call
    /// [`MetricSpace::validate`] for the axioms.
    pub fn to_space(&self) -> Result<MetricSpace> {
        match self {
            SpaceDoc::Graph {
                vertices,
                edges,
                labels,
            } => match labels {
                Some(l) => {
                    if l.len() != *vertices {
                        return Err(Error::Parse(format!(
                            "{} labels for {vertices} vertices",
                            l.len()
                        )));
                    }
                    MetricSpace::from_labeled_graph(l.clone(), edges)
                }
                None => MetricSpace::from_graph(*vertices, edges),
            },
            SpaceDoc::Matrix { labels, dist } => {
                let rows = dist
                    .iter()
                    .map(|r| r.iter().map(Entry::length).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                MetricSpace::from_matrix(labels.clone(), rows)
            }
        }
    }

    /// Matrix document with exact string entries.
    pub fn from_space(space: &MetricSpace) -> SpaceDoc {
        SpaceDoc::Matrix {
            labels: space.labels().to_vec(),
            dist: (0..space.len())
                .map(|x| {
                    (0..space.len())
                        .map(|y| Entry::Text(space.dist(x, y).to_string()))
                        .collect()
                })
                .collect(),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_space(text: &str) -> Result<MetricSpace> {
    parse_json::<SpaceDoc>(text)?.to_space()
}

/// A projection document `{"a":"A",…}` as label pairs.
pub fn parse_projection(text: &str) -> Result<Vec<(String, String)>> {
    Ok(parse_json::<BTreeMap<String, String>>(text)?.into_iter().collect())
}

/// Total space, base space and projection of a fibration document.
pub fn parse_fibration(text: &str) -> Result<(MetricSpace, MetricSpace, Vec<(String, String)>)> {
    let doc: FibrationDoc = parse_json(text)?;
    Ok((
        doc.total.to_space()?,
        doc.base.to_space()?,
        doc.projection.into_iter().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::Fibration;
    use crate::fixtures;

    #[test]
    fn graph_document() {
        let s = parse_space(r#"{"type":"graph","vertices":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(s, MetricSpace::from_graph(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(s.dist(0, 2), Length::integer(2));
        let s = parse_space(
            r#"{"type":"graph","vertices":2,"edges":[[0,1]],"labels":["p","q"]}"#,
        )
        .unwrap();
        assert_eq!(s.label(1), "q");
    }

    #[test]
    fn matrix_document_with_rationals() {
        let s = parse_space(
            r#"{"type":"matrix","labels":["x","y"],"dist":[["0","3/2"],["3/2",0]]}"#,
        )
        .unwrap();
        assert_eq!(s.dist(0, 1), Length::ratio(3, 2).unwrap());
    }

    #[test]
    fn malformed_documents() {
        for bad in [
            "not json",
            r#"{"type":"tree","vertices":1}"#,
            r#"{"type":"graph","vertices":2,"edges":[[0,1]],"labels":["p"]}"#,
            r#"{"type":"matrix","labels":["x"],"dist":[["1/0"]]}"#,
            r#"{"type":"matrix","labels":["x","y"],"dist":[["0","1"]]}"#,
            r#"{"type":"graph","vertices":2,"edges":[[0,5]]}"#,
        ] {
            assert!(parse_space(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn space_round_trip() {
        let e2 = fixtures::paper_e2();
        let doc = SpaceDoc::from_space(e2.total());
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(&parse_space(&text).unwrap(), e2.total());
    }

    #[test]
    fn fibration_document() {
        let e2 = fixtures::paper_e2();
        let doc = FibrationDoc {
            total: SpaceDoc::from_space(e2.total()),
            base: SpaceDoc::from_space(e2.base()),
            projection: ["a", "b", "c", "d", "e", "f"]
                .iter()
                .zip(["A", "B", "C", "A", "B", "C"])
                .map(|(x, b)| (x.to_string(), b.to_string()))
                .collect(),
        };
        let (t, b, p) = parse_fibration(&serde_json::to_string(&doc).unwrap()).unwrap();
        let f = Fibration::verify_labeled(t, b, &p).unwrap().unwrap();
        assert_eq!(f.projection(), e2.projection());
    }
}
