//! Instance files: a TOML document with a `[surface]` (or `[branch]`) block,
//! named `[section.NAME]` blocks, optional `[delta.NAME]`, `[options]` and
//! `[expect."COMBO"]` blocks. Every polynomial is an expression string.
//!
//! ```toml
//! [surface]
//! d = 2
//! a2 = "25*t + 9"
//! a4 = "t^3 + 144*t^2"
//! a6 = "16*t^4"
//!
//! [section.s0]
//! x = "0"
//! y = "4*t^2"
//!
//! [delta.D1]
//! section = "2*s0"
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mwsplit::curve::{BranchCurve, Section, WeierstrassSurface};
use mwsplit::expr::{parse_poly, parse_ratfunc};
use mwsplit::qfield::{QPoly, QRatFunc};
use serde::{Deserialize, Serialize};

use crate::combo::Combo;
use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub section: BTreeMap<String, PointBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, DeltaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, PointBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBlock {
    #[serde(default = "genus_one")]
    pub g: u32,
    pub d: u32,
    pub a2: String,
    pub a4: String,
    pub a6: String,
}

fn genus_one() -> u32 {
    1
}

/// Branch curve `p(x, t) = sum p[k] x^k` for any genus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchBlock {
    pub g: u32,
    pub d: u32,
    /// Coefficients of `x^0, x^1, ...`.
    pub p: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointBlock {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower_cap: Option<usize>,
    /// Report two-torsion in `analyze`; on by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Surface(WeierstrassSurface),
    Branch(BranchCurve),
}

/// A curve `x = f(t)` on the Hirzebruch surface, given directly or as the
/// `x`-coordinate of a combination of sections.
#[derive(Clone, Debug, PartialEq)]
pub struct Delta {
    pub name: String,
    pub combo: Option<Combo>,
    pub section: Option<Section>,
    pub f: QPoly,
}

/// Printed coordinates to compare against a computed combination.
#[derive(Clone, Debug, PartialEq)]
pub struct Expect {
    pub combo: Combo,
    pub x: QRatFunc,
    pub y: QRatFunc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub model: Model,
    /// Named sections, not yet checked against the surface.
    pub sections: Vec<(String, Section)>,
    pub deltas: Vec<Delta>,
    pub expects: Vec<Expect>,
    pub tower_cap: Option<usize>,
    pub torsion: bool,
}

fn field<T>(
    name: &str,
    key: &str,
    src: &str,
    parse: impl Fn(&str) -> Result<T, mwsplit::expr::ParseError>,
) -> Result<T, CliError> {
    parse(src).map_err(|source| CliError::Expr {
        file: name.to_string(),
        field: key.to_string(),
        source,
    })
}

impl Instance {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, CliError> {
        let file: InstanceFile = toml::from_str(text).map_err(|e| CliError::Format {
            file: name.to_string(),
            message: e.to_string(),
        })?;
        Self::from_file(name, &file)
    }

    pub fn from_file(name: &str, file: &InstanceFile) -> Result<Self, CliError> {
        let invalid = |m: String| CliError::Invalid(format!("{name}: {m}"));
        let model = match (&file.surface, &file.branch) {
            (Some(s), None) => {
                if s.g != 1 {
                    return Err(invalid(format!(
                        "a [surface] block needs g = 1, got {}; use [branch]",
                        s.g
                    )));
                }
                let a2 = field(name, "surface.a2", &s.a2, parse_poly)?;
                let a4 = field(name, "surface.a4", &s.a4, parse_poly)?;
                let a6 = field(name, "surface.a6", &s.a6, parse_poly)?;
                Model::Surface(WeierstrassSurface::new(a2, a4, a6, s.d)?)
            }
            (None, Some(b)) => {
                let coeffs =
                    b.p.iter()
                        .enumerate()
                        .map(|(k, e)| field(name, &format!("branch.p[{k}]"), e, parse_poly))
                        .collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() < 2 {
                    return Err(invalid("[branch] needs at least two coefficients".into()));
                }
                Model::Branch(BranchCurve::raw(b.g, b.d, coeffs))
            }
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "give either [surface] or [branch], not both".into(),
                ))
            }
            (None, None) => return Err(invalid("missing [surface] block".into())),
        };
        let mut sections = Vec::new();
        for (n, p) in &file.section {
            crate::combo::check_name(n).map_err(|m| invalid(format!("section name {n:?}: {m}")))?;
            let x = field(name, &format!("section.{n}.x"), &p.x, parse_ratfunc)?;
            let y = field(name, &format!("section.{n}.y"), &p.y, parse_ratfunc)?;
            sections.push((n.clone(), Section::affine(x, y)));
        }
        if !sections.is_empty() && matches!(model, Model::Branch(_)) {
            return Err(invalid("sections need a [surface] block".into()));
        }
        let mut inst = Instance {
            name: name.to_string(),
            model,
            sections,
            deltas: Vec::new(),
            expects: Vec::new(),
            tower_cap: file.options.as_ref().and_then(|o| o.tower_cap),
            torsion: file
                .options
                .as_ref()
                .and_then(|o| o.torsion)
                .unwrap_or(true),
        };
        for (n, block) in &file.delta {
            let delta = match (&block.section, &block.f) {
                (Some(c), None) => {
                    let combo = Combo::parse(c)?;
                    let section = inst.evaluate(&combo)?;
                    let x = section
                        .x()
                        .ok_or_else(|| invalid(format!("delta {n}: {c} is the zero section")))?;
                    let f = x.as_poly().cloned().ok_or_else(|| {
                        invalid(format!("delta {n}: x({c}) = {x} is not a polynomial"))
                    })?;
                    Delta {
                        name: n.clone(),
                        combo: Some(combo),
                        section: Some(section),
                        f,
                    }
                }
                (None, Some(e)) => {
                    let f = field(name, &format!("delta.{n}.f"), e, parse_poly)?;
                    Delta {
                        name: n.clone(),
                        combo: None,
                        section: None,
                        f,
                    }
                }
                _ => {
                    return Err(invalid(format!(
                        "delta {n} needs exactly one of `section` or `f`"
                    )))
                }
            };
            inst.deltas.push(delta);
        }
        for (key, p) in &file.expect {
            let combo = Combo::parse(key)?;
            let x = field(name, &format!("expect.{key}.x"), &p.x, parse_ratfunc)?;
            let y = field(name, &format!("expect.{key}.y"), &p.y, parse_ratfunc)?;
            inst.expects.push(Expect { combo, x, y });
        }
        Ok(inst)
    }

    pub fn surface(&self) -> Result<&WeierstrassSurface, CliError> {
        match &self.model {
            Model::Surface(s) => Ok(s),
            Model::Branch(b) => Err(CliError::Invalid(format!(
                "{}: this command needs a [surface] block (the instance has genus {})",
                self.name,
                b.genus()
            ))),
        }
    }

    pub fn branch(&self) -> BranchCurve {
        match &self.model {
            Model::Surface(s) => s.branch_curve(),
            Model::Branch(b) => b.clone(),
        }
    }

    pub fn section(&self, name: &str) -> Result<&Section, CliError> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| CliError::Invalid(format!("{}: unknown section {name:?}", self.name)))
    }

    /// Evaluates a combination with the group law; every section used must
    /// lie on the surface.
    pub fn evaluate(&self, combo: &Combo) -> Result<Section, CliError> {
        let s = self.surface()?;
        let mut acc = Section::Zero;
        for (n, name) in combo.terms() {
            let p = self.section(name)?;
            s.check(p)?;
            acc = s.add(&acc, &s.mul(*n, p)?)?;
        }
        Ok(acc)
    }

    pub fn delta(&self, name: Option<&str>) -> Result<&Delta, CliError> {
        match name {
            Some(n) => self
                .deltas
                .iter()
                .find(|d| d.name == n)
                .ok_or_else(|| CliError::Invalid(format!("{}: unknown delta {n:?}", self.name))),
            None if self.deltas.len() == 1 => Ok(&self.deltas[0]),
            None => Err(CliError::Invalid(format!(
                "{}: {} deltas defined; name one explicitly",
                self.name,
                self.deltas.len()
            ))),
        }
    }

    /// The tower cap from the command line, else from the file, else 3.
    pub fn cap(&self, flag: Option<usize>) -> usize {
        flag.or(self.tower_cap)
            .unwrap_or(mwsplit::qfield::DEFAULT_TOWER_CAP)
    }
}
