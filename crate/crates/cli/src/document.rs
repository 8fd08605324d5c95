use invariant_engine::{Instance, Signature};
use serde::{Deserialize, Serialize};
use tensor_core::{Field, GroupTag, Matrix, MixedTensor, Scalar, SpaceTuple, TensorType};

use crate::CliError;

/// `[contra indices per space, co indices per space, scalar]`, indices 1-based.
pub type Entry = (Vec<Vec<usize>>, Vec<Vec<usize>>, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub field: String,
    pub group: String,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<Vec<Vec<String>>>>,
    pub signature: Vec<(Vec<usize>, Vec<usize>)>,
    pub tensors: Vec<Vec<Entry>>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn scalar(s: &str) -> Result<Scalar, CliError> {
    s.parse().map_err(|_| bad(format!("bad scalar {s:?}")))
}

fn field_name(f: Field) -> &'static str {
    match f {
        Field::Q => "Q",
        Field::Qi => "Qi",
    }
}

impl InstanceDocument {
    pub fn from_instance(x: &Instance) -> Self {
        let sig = &x.signature;
        let forms = sig.forms.as_ref().map(|fs| {
            fs.iter().map(|m| m.to_rows().iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()).collect()
        });
        let tensors = x
            .tensors
            .iter()
            .map(|t| {
                let ty = t.ttype();
                t.entries()
                    .map(|(idx, v)| {
                        let part = |off: usize, len: usize| idx[off..off + len].iter().map(|i| i + 1).collect();
                        let contra = (0..ty.spaces()).map(|i| part(ty.contra_offset(i), ty.contra[i])).collect();
                        let co = (0..ty.spaces()).map(|i| part(ty.co_offset(i), ty.co[i])).collect();
                        (contra, co, v.to_string())
                    })
                    .collect()
            })
            .collect();
        InstanceDocument {
            field: field_name(sig.field).into(),
            group: sig.group.name().into(),
            dims: sig.dims().to_vec(),
            forms,
            signature: sig.types.iter().map(|t| (t.contra.clone(), t.co.clone())).collect(),
            tensors,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let field = match self.field.as_str() {
            "Q" => Field::Q,
            "Qi" => Field::Qi,
            f => return Err(bad(format!("unknown field {f:?}"))),
        };
        let group = GroupTag::parse(&self.group).ok_or_else(|| bad(format!("unknown group {:?}", self.group)))?;
        let spaces = SpaceTuple::new(self.dims.clone()).map_err(|e| bad(e.to_string()))?;
        let m = spaces.len();
        let forms = match &self.forms {
            None => None,
            Some(fs) => Some(
                fs.iter()
                    .map(|rows| {
                        let rows = rows.iter().map(|r| r.iter().map(|s| scalar(s)).collect()).collect::<Result<_, _>>()?;
                        Matrix::from_rows(rows).map_err(|e| bad(e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let types = self
            .signature
            .iter()
            .map(|(a, b)| TensorType::new(a.clone(), b.clone()).map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let sig = Signature::new(spaces.clone(), group, field, types, forms).map_err(|e| bad(e.to_string()))?;
        if self.tensors.len() != sig.types.len() {
            return Err(bad(format!("{} tensors for {} summands", self.tensors.len(), sig.types.len())));
        }
        let mut tensors = Vec::with_capacity(sig.types.len());
        for (k, (ty, entries)) in sig.types.iter().zip(&self.tensors).enumerate() {
            let mut parsed = Vec::with_capacity(entries.len());
            for (contra, co, v) in entries {
                if contra.len() != m || co.len() != m {
                    return Err(bad(format!("summand {}: entry needs index lists for {m} spaces", k + 1)));
                }
                let mut idx = vec![0; ty.total_factors()];
                for i in 0..m {
                    for (lists, off, want) in [(contra, ty.contra_offset(i), ty.contra[i]), (co, ty.co_offset(i), ty.co[i])] {
                        if lists[i].len() != want {
                            return Err(bad(format!("summand {}: expected {want} indices in space {}", k + 1, i + 1)));
                        }
                        for (j, &u) in lists[i].iter().enumerate() {
                            if u == 0 || u > spaces.dim(i) {
                                return Err(bad(format!("summand {}: index {u} out of range", k + 1)));
                            }
                            idx[off + j] = u - 1;
                        }
                    }
                }
                parsed.push((idx, scalar(v)?));
            }
            let t = MixedTensor::from_entries(&spaces, ty.clone(), field, parsed).map_err(|e| bad(e.to_string()))?;
            tensors.push(t);
        }
        Instance::new(sig, tensors).map_err(|e| bad(e.to_string()))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| bad(format!("instance document: {e}")))?;
    doc.to_instance()
}

pub fn print_instance(x: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceDocument::from_instance(x)).expect("serializable");
    s.push('\n');
    s
}

/// `"(a;b),(c,d;e,f)"`: one parenthesized group per summand, per-space counts separated by commas.
pub fn parse_types(s: &str) -> Result<Vec<TensorType>, CliError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| bad(format!("expected '(' in {s:?}")))?;
        let (body, tail) = inner.split_once(')').ok_or_else(|| bad(format!("unclosed '(' in {s:?}")))?;
        let (a, b) = body.split_once(';').ok_or_else(|| bad(format!("expected ';' in ({body})")))?;
        let nums = |part: &str| -> Result<Vec<usize>, CliError> {
            part.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("bad count {t:?}")))).collect()
        };
        out.push(TensorType::new(nums(a)?, nums(b)?).map_err(|e| bad(e.to_string()))?);
        rest = tail.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad("trailing ','"));
            }
        } else if !rest.is_empty() {
            return Err(bad(format!("unexpected {rest:?}")));
        }
    }
    if out.is_empty() {
        return Err(bad("empty type list"));
    }
    Ok(out)
}
