use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::context::{CoordGroup, CoordSystem, GroupKind};
use super::form::{sort_sign, Form};
use crate::error::{Error, Result};
use crate::mesh::VertexId;
use crate::poly::{format_q, parse_q, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    /// `"l"`, `"t"` or `"m:<y>"`.
    pub kind: String,
    pub vertices: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextFile {
    pub groups: Vec<GroupFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialFile {
    /// Exact rational as `"num/den"` (or an integer string).
    pub c: String,
    #[serde(default)]
    pub exp: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFile {
    pub dvars: Vec<String>,
    pub poly: Vec<MonomialFile>,
}

/// `{"context":{…}, "terms":[{"dvars":[…], "poly":[{"c":"n/d","exp":{…}}]}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub context: ContextFile,
    pub terms: Vec<TermFile>,
}

impl ContextFile {
    pub fn from_ctx(ctx: &CoordSystem) -> Self {
        ContextFile {
            groups: ctx
                .groups()
                .iter()
                .map(|g| GroupFile {
                    kind: match g.kind {
                        GroupKind::Lambda => "l".into(),
                        GroupKind::Param => "t".into(),
                        GroupKind::Fiber(y) => format!("m:{y}"),
                    },
                    vertices: g.vertices.iter().map(|v| v.0).collect(),
                })
                .collect(),
        }
    }

    pub fn to_ctx(&self) -> Result<CoordSystem> {
        let groups = self
            .groups
            .iter()
            .map(|g| {
                let kind = match g.kind.as_str() {
                    "l" => GroupKind::Lambda,
                    "t" => GroupKind::Param,
                    other => {
                        let y = other
                            .strip_prefix("m:")
                            .and_then(|s| s.parse::<u32>().ok())
                            .ok_or_else(|| Error::Validation(format!("unknown coordinate group kind {other:?}")))?;
                        GroupKind::Fiber(y)
                    }
                };
                Ok(CoordGroup {
                    kind,
                    vertices: g.vertices.iter().map(|&v| VertexId(v)).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CoordSystem::new(groups).map_err(|e| Error::Validation(e.to_string()))
    }
}

impl FormFile {
    pub fn from_form(f: &Form) -> Self {
        let names = f.ctx().var_names();
        FormFile {
            context: ContextFile::from_ctx(f.ctx()),
            terms: f
                .terms()
                .map(|(k, p)| TermFile {
                    dvars: k.iter().map(|&i| names[i].clone()).collect(),
                    poly: p
                        .terms()
                        .map(|(e, c)| MonomialFile {
                            c: format_q(c),
                            exp: e
                                .iter()
                                .enumerate()
                                .filter(|(_, &k)| k > 0)
                                .map(|(i, &k)| (names[i].clone(), k))
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<Form> {
        let ctx = Arc::new(self.context.to_ctx()?);
        let n = ctx.nvars();
        let lookup = |name: &str| {
            ctx.parse_var(name)
                .ok_or_else(|| Error::Validation(format!("unknown coordinate {name:?}")))
        };
        let mut out = Form::zero(ctx.clone());
        for t in &self.terms {
            let vars = t.dvars.iter().map(|s| lookup(s)).collect::<Result<Vec<_>>>()?;
            let (key, odd) =
                sort_sign(&vars).ok_or_else(|| Error::Validation("repeated differential in a term".into()))?;
            let mut p = Poly::zero(n);
            for m in &t.poly {
                let c = parse_q(&m.c).ok_or_else(|| Error::Validation(format!("bad rational {:?}", m.c)))?;
                let mut e = vec![0u32; n];
                for (name, k) in &m.exp {
                    e[lookup(name)?] += k;
                }
                p.add_term(e, c);
            }
            out.add_term(key, if odd { -&p } else { p });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::whitney;
    use crate::mesh::OrientedSimplex;

    #[test]
    fn round_trip() {
        let w = whitney(&OrientedSimplex::from_ids(&[3, 1, 7]));
        let file = FormFile::from_form(&w);
        let text = serde_json::to_string(&file).unwrap();
        let back: FormFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_form().unwrap(), w);
    }

    #[test]
    fn rejects_unknown_names() {
        let text = r#"{"context":{"groups":[{"kind":"l","vertices":[0,1]}]},
                       "terms":[{"dvars":["l:5"],"poly":[{"c":"1"}]}]}"#;
        let f: FormFile = serde_json::from_str(text).unwrap();
        assert!(f.to_form().is_err());
    }
}
