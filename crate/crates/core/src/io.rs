//! JSON files for ensembles, measurements and group specifications.
//!
//! Matrices are row-major lists of `[re, im]` pairs. An ensemble file is
//!
//! ```json
//! { "dim": 2, "states": [ { "p": 0.5, "rho": [[[1,0],[0,0]], [[0,0],[0,0]]] }, ... ],
//!   "povm": [ [[[1,0],[0,0]], ...], ... ] }
//! ```
//!
//! with `povm` optional. Instead of `states` a file may give `group` (a list
//! of unitaries) and `rho0`, in which case the states are the orbit of
//! `rho0` under the group with uniform prior.

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, Povm, NEGATIVE_PROB_SLACK};
use crate::error::{Error, Result};
use crate::geo_uniform::{generate_ensemble, GeoUniformSpec, UnitaryGroup};
use crate::hermitian::{CMatrix, HermitianOperator, C64};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub p: f64,
    pub rho: MatrixJson,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<StateJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<MatrixJson>,
}

/// Sufficient-condition check input: group, seed state, seed measurement
/// operator and the candidate intertwiner `V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupCheckFile {
    pub group: Vec<MatrixJson>,
    pub rho0: MatrixJson,
    pub pi0: MatrixJson,
    pub v: MatrixJson,
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn operator_to_json(h: &HermitianOperator) -> MatrixJson {
    matrix_to_json(h.matrix())
}

fn matrix_from_json(m: &MatrixJson, dim: usize, what: &str) -> Result<CMatrix> {
    if m.len() != dim {
        return Err(Error::validation(format!("{what}: {} rows, expected {dim}", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::validation(format!("{what}: row {i} has {} entries, expected {dim}", row.len())));
        }
        if let Some(j) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(Error::validation(format!("{what}: entry ({i}, {j}) is not finite")));
        }
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| C64::new(m[i][j][0], m[i][j][1])))
}

fn operator_from_json(m: &MatrixJson, dim: usize, what: &str) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix_from_json(m, dim, what)?).map_err(|e| Error::validation(format!("{what}: {e}")))
}

fn group_from_json(group: &[MatrixJson], dim: usize) -> Result<UnitaryGroup> {
    let elements = group
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_json(m, dim, &format!("group[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    UnitaryGroup::new(elements)
}

fn povm_from_json(ops: &[MatrixJson], dim: usize) -> Result<Povm> {
    let ops = ops
        .iter()
        .enumerate()
        .map(|(j, m)| operator_from_json(m, dim, &format!("povm[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(ops)
}

impl EnsembleFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        if f.dim == 0 {
            return Err(Error::validation("dim must be positive"));
        }
        Ok(f)
    }

    pub fn ensemble(&self) -> Result<Ensemble> {
        match (&self.states, &self.group, &self.rho0) {
            (Some(states), None, None) => {
                if states.is_empty() {
                    return Err(Error::validation("states: at least one state is required"));
                }
                let mut probs = Vec::with_capacity(states.len());
                let mut rhos = Vec::with_capacity(states.len());
                for (i, s) in states.iter().enumerate() {
                    if !s.p.is_finite() || s.p < -NEGATIVE_PROB_SLACK {
                        return Err(Error::validation(format!("states[{i}].p: invalid probability {}", s.p)));
                    }
                    probs.push(s.p.max(0.0));
                    rhos.push(operator_from_json(&s.rho, self.dim, &format!("states[{i}].rho"))?);
                }
                Ensemble::new(probs, rhos)
            }
            (None, Some(group), Some(rho0)) => {
                let spec = GeoUniformSpec {
                    rho0: operator_from_json(rho0, self.dim, "rho0")?,
                    group: group_from_json(group, self.dim)?,
                    intertwiner: None,
                };
                generate_ensemble(&spec)
            }
            _ => Err(Error::validation("give either \"states\" or both \"group\" and \"rho0\"")),
        }
    }

    pub fn povm(&self) -> Result<Option<Povm>> {
        self.povm.as_ref().map(|ops| povm_from_json(ops, self.dim)).transpose()
    }

    pub fn from_ensemble(e: &Ensemble, povm: Option<&Povm>) -> Self {
        Self {
            dim: e.dim(),
            states: Some(
                e.probs()
                    .iter()
                    .zip(e.states())
                    .map(|(&p, rho)| StateJson { p, rho: operator_to_json(rho) })
                    .collect(),
            ),
            povm: povm.map(|m| m.ops().iter().map(operator_to_json).collect()),
            group: None,
            rho0: None,
        }
    }

    pub fn from_povm(m: &Povm) -> Self {
        Self { dim: m.dim(), povm: Some(m.ops().iter().map(operator_to_json).collect()), ..Self::default() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn parse_ensemble(text: &str) -> Result<Ensemble> {
    EnsembleFile::parse(text)?.ensemble()
}

/// A measurement from a file holding `povm` (and `dim`), or a bare list of
/// matrices.
pub fn parse_povm(text: &str) -> Result<Povm> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.is_array() {
        let ops: Vec<MatrixJson> = serde_json::from_value(value)?;
        let dim = ops.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::validation("povm: at least one non-empty element is required"));
        }
        return povm_from_json(&ops, dim);
    }
    let f: EnsembleFile = serde_json::from_value(value)?;
    f.povm()?.ok_or_else(|| Error::validation("file has no \"povm\" entry"))
}

pub struct GroupCheck {
    pub spec: GeoUniformSpec,
    pub pi0: HermitianOperator,
    pub v: CMatrix,
}

pub fn parse_group_check(text: &str) -> Result<GroupCheck> {
    let f: GroupCheckFile = serde_json::from_str(text)?;
    let dim = f.rho0.len();
    if dim == 0 {
        return Err(Error::validation("rho0: empty matrix"));
    }
    let v = matrix_from_json(&f.v, dim, "v")?;
    Ok(GroupCheck {
        spec: GeoUniformSpec {
            rho0: operator_from_json(&f.rho0, dim, "rho0")?,
            group: group_from_json(&f.group, dim)?,
            intertwiner: Some(v.clone()),
        },
        pi0: operator_from_json(&f.pi0, dim, "pi0")?,
        v,
    })
}

pub fn group_check_to_json(spec: &GeoUniformSpec, pi0: &HermitianOperator, v: &CMatrix) -> String {
    let f = GroupCheckFile {
        group: spec.group.elements().iter().map(matrix_to_json).collect(),
        rho0: operator_to_json(&spec.rho0),
        pi0: operator_to_json(pi0),
        v: matrix_to_json(v),
    };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        let e = fixtures::trine();
        let m = fixtures::trine_pi_g();
        let text = EnsembleFile::from_ensemble(&e, Some(&m)).to_json();
        let f = EnsembleFile::parse(&text).unwrap();
        let back = f.ensemble().unwrap();
        assert_eq!(back.probs(), e.probs());
        for (a, b) in back.states().iter().zip(e.states()) {
            assert_eq!(a.max_abs_diff(b), 0.0);
        }
        assert_eq!(f.povm().unwrap().unwrap().len(), 3);
        assert_eq!(parse_povm(&text).unwrap().len(), 3);
        assert_eq!(parse_povm(&EnsembleFile::from_povm(&m).to_json()).unwrap().len(), 3);
    }

    #[test]
    fn errors_name_the_index() {
        let bad_p = r#"{"dim":1,"states":[{"p":0.5,"rho":[[[1,0]]]},{"p":-0.2,"rho":[[[1,0]]]}]}"#;
        let msg = parse_ensemble(bad_p).unwrap_err().to_string();
        assert!(msg.contains("states[1].p"), "{msg}");
        let bad_rho = r#"{"dim":2,"states":[{"p":1,"rho":[[[1,0],[0,0]],[[0,0],[-1,0]]]}]}"#;
        let msg = parse_ensemble(bad_rho).unwrap_err().to_string();
        assert!(msg.contains("states[0]"), "{msg}");
        let bad_shape = r#"{"dim":2,"states":[{"p":1,"rho":[[[1,0]]]}]}"#;
        assert!(parse_ensemble(bad_shape).unwrap_err().to_string().contains("states[0].rho"));
        assert!(matches!(parse_ensemble("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn tiny_negative_probability_is_clamped() {
        let text = r#"{"dim":1,"states":[{"p":1.0,"rho":[[[1,0]]]},{"p":-1e-12,"rho":[[[1,0]]]}]}"#;
        assert_eq!(parse_ensemble(text).unwrap().probs()[1], 0.0);
    }

    #[test]
    fn group_files() {
        let spec = crate::geo_uniform::trine_spec();
        let v = spec.intertwiner.clone().unwrap();
        let pi0 = HermitianOperator::diag(&[2.0 / 3.0, 0.0]);
        let parsed = parse_group_check(&group_check_to_json(&spec, &pi0, &v)).unwrap();
        assert_eq!(parsed.spec.group.len(), 3);
        let text = format!(
            r#"{{"dim":2,"group":{},"rho0":[[[1,0],[0,0]],[[0,0],[0,0]]]}}"#,
            serde_json::to_string(&spec.group.elements().iter().map(matrix_to_json).collect::<Vec<_>>()).unwrap()
        );
        let e = parse_ensemble(&text).unwrap();
        for (a, b) in e.states().iter().zip(fixtures::trine().states()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
    }
}
