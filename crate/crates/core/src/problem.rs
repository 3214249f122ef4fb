//! Declarative problem files: a DGLA by structure constants, an optional
//! contraction, and the truncation order. The syntax is JSON with every
//! scalar written as a string `"p/q"`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::contraction::Contraction;
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedMap, GradedSpace};
use crate::linalg::Matrix;
use crate::rational::{self, zero, Rational};

pub const DEFAULT_MAX_DEGREE: usize = 8;

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeSpec {
    pub degree: i32,
    pub basis: Vec<String>,
}

/// One matrix entry `from ↦ coeff · to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub label: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub result: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    pub homology: Vec<DegreeSpec>,
    #[serde(default)]
    pub nabla: Vec<EntrySpec>,
    #[serde(default)]
    pub pi: Vec<EntrySpec>,
    #[serde(default)]
    pub h: Vec<EntrySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub field: String,
    pub degrees: Vec<DegreeSpec>,
    #[serde(default)]
    pub differential: Vec<EntrySpec>,
    #[serde(default)]
    pub bracket: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionSpec>,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
}

/// A parsed problem: the DGLA and, when supplied, the user's contraction
/// (not yet validated).
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub dgla: Dgla,
    pub contraction: Option<Contraction>,
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if spec.field != "Q" {
            return Err(Error::Input(format!(
                "unsupported field {:?}, expected \"Q\"",
                spec.field
            )));
        }
        if spec.max_degree == 0 {
            return Err(Error::Input("max_degree must be at least 1".into()));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    fn space(degrees: &[DegreeSpec]) -> Result<GradedSpace> {
        let mut seen = BTreeSet::new();
        let mut degs = BTreeSet::new();
        for d in degrees {
            if !degs.insert(d.degree) {
                return Err(Error::Input(format!("degree {} listed twice", d.degree)));
            }
            for l in &d.basis {
                if !seen.insert(l.clone()) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
        }
        GradedSpace::new(degrees.iter().map(|d| (d.degree, d.basis.clone())))
    }

    fn matrix(entries: &[EntrySpec], source: &GradedSpace, target: &GradedSpace) -> Result<Matrix> {
        let mut m = Matrix::zeros(target.total_dim(), source.total_dim());
        for e in entries {
            let j = source
                .find_global(&e.from)
                .ok_or_else(|| Error::UnknownLabel(e.from.clone()))?;
            let i = target
                .find_global(&e.to)
                .ok_or_else(|| Error::UnknownLabel(e.to.clone()))?;
            m[(i, j)] = &m[(i, j)] + rational::parse(&e.coeff)?;
        }
        Ok(m)
    }

    /// Builds the DGLA. `d² = 0` and the Lie axioms are left to
    /// [`Dgla::validate`]; inhomogeneous entries are rejected here.
    pub fn to_problem(&self) -> Result<Problem> {
        let space = Self::space(&self.degrees)?;
        let d = Self::matrix(&self.differential, &space, &space)?;
        let d = GradedMap::from_dense(&space, &space, -1, &d).map_err(|_| {
            Error::InvalidDgla("differential entry does not lower degree by one".into())
        })?;
        let complex = ChainComplex::unchecked(space.clone(), d)?;
        let n = space.total_dim();
        let mut pairs: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for b in &self.bracket {
            let i = space
                .find_global(&b.left)
                .ok_or_else(|| Error::UnknownLabel(b.left.clone()))?;
            let j = space
                .find_global(&b.right)
                .ok_or_else(|| Error::UnknownLabel(b.right.clone()))?;
            if pairs.contains_key(&(i, j)) {
                return Err(Error::Input(format!(
                    "bracket [{}, {}] given twice",
                    b.left, b.right
                )));
            }
            let mut v = vec![zero(); n];
            for t in &b.result {
                let k = space
                    .find_global(&t.label)
                    .ok_or_else(|| Error::UnknownLabel(t.label.clone()))?;
                v[k] += rational::parse(&t.coeff)?;
            }
            pairs.insert((i, j), v);
        }
        let dgla = Dgla::from_pairs(
            complex.clone(),
            pairs.into_iter().map(|((i, j), v)| (i, j, v)),
        )?;
        let contraction = match &self.contraction {
            None => None,
            Some(cs) => {
                let small = Self::space(&cs.homology)?;
                let map = |entries: &[EntrySpec],
                           s: &GradedSpace,
                           t: &GradedSpace,
                           deg: i32,
                           name: &str| {
                    let m = Self::matrix(entries, s, t)?;
                    GradedMap::from_dense(s, t, deg, &m).map_err(|_| {
                        Error::InvalidContraction(format!(
                            "{name} is not homogeneous of degree {deg}"
                        ))
                    })
                };
                Some(Contraction {
                    nabla: map(&cs.nabla, &small, &space, 0, "nabla")?,
                    pi: map(&cs.pi, &space, &small, 0, "pi")?,
                    h: map(&cs.h, &space, &space, 1, "h")?,
                    small: ChainComplex::zero_differential(small),
                    big: complex,
                })
            }
        };
        Ok(Problem {
            spec: self.clone(),
            dgla,
            contraction,
        })
    }

    /// Writes a DGLA back out, listing each bracket pair once when the other
    /// order follows by antisymmetry.
    pub fn from_dgla(name: &str, g: &Dgla, max_degree: usize) -> ProblemSpec {
        let space = g.space();
        let labels = space.flat_labels();
        let deg = space.flat_degrees();
        let degrees = space
            .degrees()
            .into_iter()
            .map(|d| DegreeSpec {
                degree: d,
                basis: space.labels(d).to_vec(),
            })
            .collect();
        let entries = |m: &Matrix, src: &[String], tgt: &[String]| {
            let mut out = Vec::new();
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    if !m[(i, j)].is_zero() {
                        out.push(EntrySpec {
                            from: src[j].clone(),
                            to: tgt[i].clone(),
                            coeff: rational::format(&m[(i, j)]),
                        });
                    }
                }
            }
            out
        };
        let differential = entries(&g.d_dense(), &labels, &labels);
        let mut bracket = Vec::new();
        let n = labels.len();
        for i in 0..n {
            for j in 0..n {
                let Some(v) = g.bracket.get(i, j) else {
                    continue;
                };
                if j < i {
                    let s = -rational::sign((deg[i] * deg[j]).rem_euclid(2) == 1);
                    let mirror: Vec<Rational> = g
                        .bracket
                        .basis_bracket(j, i)
                        .iter()
                        .map(|x| x * &s)
                        .collect();
                    if &mirror == v {
                        continue;
                    }
                }
                bracket.push(BracketSpec {
                    left: labels[i].clone(),
                    right: labels[j].clone(),
                    result: v
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| TermSpec {
                            label: labels[k].clone(),
                            coeff: rational::format(c),
                        })
                        .collect(),
                });
            }
        }
        ProblemSpec {
            name: name.to_string(),
            description: None,
            field: "Q".into(),
            degrees,
            differential,
            bracket,
            contraction: None,
            max_degree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = include_str!("../corpus/circle.spec");

    #[test]
    fn parse_round_trip() {
        let spec = ProblemSpec::parse(CIRCLE).unwrap();
        let again = ProblemSpec::parse(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        let p = spec.to_problem().unwrap();
        assert!(p.contraction.is_some());
        assert!(p.dgla.validate().is_ok());
        // a DGLA written back out parses to the same algebra
        let out = ProblemSpec::from_dgla("c", &p.dgla, 8);
        assert_eq!(out.to_problem().unwrap().dgla, p.dgla);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match ProblemSpec::parse("{\n  \"name\": \"x\",\n  \"field\": 3\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let base = |extra: &str| {
            format!(
                r#"{{"name":"t","field":"Q","degrees":[{{"degree":-1,"basis":["x"]}},{{"degree":-2,"basis":["y"]}}]{extra}}}"#
            )
        };
        let p = ProblemSpec::parse(&base(
            r#","bracket":[{"left":"x","right":"z","result":[]}]"#,
        ))
        .unwrap();
        assert!(matches!(p.to_problem(), Err(Error::UnknownLabel(l)) if l == "z"));
        let p = ProblemSpec::parse(&base(
            r#","differential":[{"from":"x","to":"y","coeff":"0.5"}]"#,
        ))
        .unwrap();
        assert!(matches!(p.to_problem(), Err(Error::BadRational(_))));
        let p = ProblemSpec::parse(&base(
            r#","bracket":[{"left":"x","right":"x","result":[{"label":"x","coeff":"1"}]}]"#,
        ))
        .unwrap();
        assert!(matches!(p.to_problem(), Err(Error::InvalidDgla(_))));
        assert!(ProblemSpec::parse(&base(r#","field":"R""#)).is_err());
    }
}
