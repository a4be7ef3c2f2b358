//! The line-oriented manifest format.
//!
//! ```text
//! # comment
//! [constants]
//! a = 2
//! [base]
//! dim = 1
//! coords = t
//! g.1.1 = -1
//! box.t = -1, 1
//! [fiber.1]
//! dim = 2
//! coords = x, y
//! g.1.1 = 1
//! g.2.2 = 1
//! warp = exp(t)
//! box.x = -1, 1
//! box.y = -1, 1
//! [torsion]
//! location = base
//! comp.1 = 1
//! [field.zeta]
//! block = base
//! comp.1 = a
//! [exclude]
//! t = -0.1, 0.1
//! ```
//!
//! Beyond these sections a `[spacetime]` section (`kind = grw|static|kasner`)
//! generates the time factor, `[field.NAME]` accepts `sum = A, B` to add
//! previously declared fields, and block sections accept `builtin = sphere2`
//! and `periodic = true`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::connection::{TorsionLocation, TorsionSpec};
use crate::fieldexpr::{Block, FieldExpr, VectorFieldDef};
use crate::jets::Point;
use crate::metric::{BlockMetric, GeomError, ProductStructure, VectorField};
use crate::sampling::{sample_point, ExclusionZone, Interval, SplitMix64};
use crate::spacetime::{build_spacetime, SpacetimeKind, SpacetimeSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManifestError {
    #[error("line {line}: {reason}")]
    At { line: usize, reason: String },
    #[error("{0}")]
    File(String),
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T, ManifestError> {
    Err(ManifestError::At {
        line,
        reason: reason.into(),
    })
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, key: &str) -> Result<&Entry, ManifestError> {
        self.get(key).ok_or_else(|| ManifestError::At {
            line: self.line,
            reason: format!("[{}] is missing `{key}`", self.name),
        })
    }

    fn check_keys(&self, allowed: impl Fn(&str) -> bool) -> Result<(), ManifestError> {
        match self.entries.iter().find(|e| !allowed(&e.key)) {
            Some(e) => err(
                e.line,
                format!("unknown key `{}` in [{}]", e.key, self.name),
            ),
            None => Ok(()),
        }
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>, ManifestError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(line, "unterminated section header");
            };
            let name = name.trim().to_string();
            if sections.iter().any(|s| s.name == name) {
                return err(line, format!("duplicate section [{name}]"));
            }
            sections.push(Section {
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return err(line, "expected `key = value`");
        };
        let Some(section) = sections.last_mut() else {
            return err(line, "entry before any section header");
        };
        let key = key.trim().to_string();
        if section.entries.iter().any(|e| e.key == key) {
            return err(line, format!("duplicate key `{key}`"));
        }
        section.entries.push(Entry {
            key,
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(sections)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(
            s,
            "sin" | "cos" | "exp" | "log" | "sqrt" | "tanh" | "cbrt" | "pow"
        )
}

fn list(value: &str) -> Vec<&str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn number(e: &Entry, src: &str, constants: &BTreeMap<String, f64>) -> Result<f64, ManifestError> {
    let expr = FieldExpr::parse_with(src, &[], constants).map_err(|x| ManifestError::At {
        line: e.line,
        reason: x.to_string(),
    })?;
    let v: f64 = expr.eval(&[]).map_err(|x| ManifestError::At {
        line: e.line,
        reason: x.to_string(),
    })?;
    if !v.is_finite() {
        return err(e.line, format!("`{src}` is not finite"));
    }
    Ok(v)
}

fn interval(e: &Entry, constants: &BTreeMap<String, f64>) -> Result<Interval, ManifestError> {
    let parts = list(&e.value);
    if parts.len() != 2 {
        return err(e.line, "expected `lo, hi`");
    }
    let lo = number(e, parts[0], constants)?;
    let hi = number(e, parts[1], constants)?;
    if lo >= hi {
        return err(e.line, format!("empty interval ({lo}, {hi})"));
    }
    Ok(Interval::new(lo, hi))
}

fn index_key(key: &str, prefix: &str) -> Option<Vec<usize>> {
    let rest = key.strip_prefix(prefix)?;
    rest.split('.').map(|s| s.parse::<usize>().ok()).collect()
}

fn geom_at(line: usize) -> impl Fn(GeomError) -> ManifestError {
    move |e| ManifestError::At {
        line,
        reason: e.to_string(),
    }
}

fn block_metric(
    s: &Section,
    constants: &BTreeMap<String, f64>,
    extra: &[&str],
) -> Result<BlockMetric, ManifestError> {
    s.check_keys(|k| {
        matches!(k, "dim" | "coords" | "builtin" | "periodic")
            || k.starts_with("g.")
            || k.starts_with("box.")
            || extra.contains(&k)
    })?;
    let coords_entry = s.require("coords")?;
    let coords = list(&coords_entry.value);
    if coords.is_empty() {
        return err(coords_entry.line, "no coordinates");
    }
    let uniq: BTreeSet<&str> = coords.iter().copied().collect();
    if uniq.len() != coords.len() {
        return err(coords_entry.line, "repeated coordinate name");
    }
    let dim_entry = s.require("dim")?;
    let dim: usize = dim_entry.value.parse().map_err(|_| ManifestError::At {
        line: dim_entry.line,
        reason: "dim must be a positive integer".into(),
    })?;
    if dim != coords.len() {
        return err(
            dim_entry.line,
            format!("dim = {dim} but {} coordinates are listed", coords.len()),
        );
    }
    let periodic = match s.get("periodic") {
        None => false,
        Some(e) => match e.value.as_str() {
            "true" => true,
            "false" => false,
            _ => return err(e.line, "periodic must be true or false"),
        },
    };
    if let Some(b) = s.get("builtin") {
        return match b.value.as_str() {
            "sphere2" if dim == 2 => {
                if let Some(e) = s.entries.iter().find(|e| e.key.starts_with("g.")) {
                    return err(e.line, "a builtin metric takes no g entries");
                }
                Ok(BlockMetric::sphere2(coords[0], coords[1]))
            }
            "sphere2" => err(b.line, "sphere2 needs two coordinates"),
            other => err(b.line, format!("unknown builtin `{other}`")),
        };
    }
    let mut boxes = Vec::with_capacity(dim);
    for c in &coords {
        let e = s
            .get(&format!("box.{c}"))
            .ok_or_else(|| ManifestError::At {
                line: s.line,
                reason: format!("[{}] is missing `box.{c}`", s.name),
            })?;
        boxes.push(interval(e, constants)?);
    }
    if let Some(e) = s
        .entries
        .iter()
        .filter(|e| e.key.starts_with("box."))
        .find(|e| !coords.contains(&&e.key[4..]))
    {
        return err(
            e.line,
            format!("box for unknown coordinate `{}`", &e.key[4..]),
        );
    }
    let mut entries = Vec::new();
    for e in s.entries.iter().filter(|e| e.key.starts_with("g.")) {
        let idx = index_key(&e.key, "g.").filter(|v| v.len() == 2);
        let Some(idx) = idx else {
            return err(e.line, format!("bad metric key `{}`", e.key));
        };
        if idx[0] == 0 || idx[1] == 0 || idx[0] > dim || idx[1] > dim {
            return err(e.line, format!("metric index out of range in `{}`", e.key));
        }
        entries.push((idx[0] - 1, idx[1] - 1, e.value.as_str(), e.line));
    }
    if entries.is_empty() {
        return err(s.line, format!("[{}] has no metric entries", s.name));
    }
    for (n, a) in entries.iter().enumerate() {
        if entries[..n]
            .iter()
            .any(|b| (b.0, b.1) == (a.0, a.1) || (b.0, b.1) == (a.1, a.0))
        {
            return err(a.3, "metric entry given twice");
        }
    }
    let triples: Vec<(usize, usize, &str)> = entries.iter().map(|e| (e.0, e.1, e.2)).collect();
    let mut m = BlockMetric::from_entries(&coords, &triples, constants, boxes).map_err(|e| {
        let line = match &e {
            GeomError::Expr(_) => entries.first().map_or(s.line, |x| x.3),
            _ => s.line,
        };
        ManifestError::At {
            line,
            reason: e.to_string(),
        }
    })?;
    m.periodic = periodic;
    Ok(m)
}

/// A parsed, validated manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub name: String,
    pub constants: BTreeMap<String, f64>,
    pub structure: ProductStructure,
    pub torsion: TorsionSpec,
    /// Fields in declaration order.
    pub fields: Vec<(String, VectorField)>,
    pub exclude: Vec<ExclusionZone>,
    /// The spacetime family that generated the structure, if any.
    pub spacetime: Option<SpacetimeSpec>,
}

impl Manifest {
    pub fn parse(name: &str, text: &str) -> Result<Self, ManifestError> {
        let sections = split_sections(text)?;
        let known = |n: &str| {
            matches!(
                n,
                "constants" | "base" | "torsion" | "exclude" | "spacetime"
            ) || n.starts_with("fiber.")
                || n.starts_with("field.")
        };
        if let Some(s) = sections.iter().find(|s| !known(&s.name)) {
            return err(s.line, format!("unknown section [{}]", s.name));
        }
        let find = |n: &str| sections.iter().find(|s| s.name == n);

        let mut constants = BTreeMap::new();
        if let Some(s) = find("constants") {
            for e in &s.entries {
                if !is_identifier(&e.key) || e.key == "pi" {
                    return err(e.line, format!("`{}` is not a valid constant name", e.key));
                }
                let v = number(e, &e.value, &constants)?;
                constants.insert(e.key.clone(), v);
            }
        }

        let mut fiber_sections = Vec::new();
        for s in sections.iter().filter(|s| s.name.starts_with("fiber.")) {
            match s.name[6..].parse::<usize>() {
                Ok(i) if i >= 1 => fiber_sections.push((i, s)),
                _ => return err(s.line, format!("bad fiber section [{}]", s.name)),
            }
        }
        fiber_sections.sort_by_key(|(i, _)| *i);
        for (k, (i, s)) in fiber_sections.iter().enumerate() {
            if *i != k + 1 {
                return err(
                    s.line,
                    format!("fiber sections must be numbered 1..m; found [{}]", s.name),
                );
            }
        }

        let (structure, spacetime) = if let Some(st) = find("spacetime") {
            Self::spacetime_structure(st, find("base"), &fiber_sections, &constants)?
        } else {
            let base_s = find("base").ok_or_else(|| ManifestError::At {
                line: 1,
                reason: "missing [base] section".into(),
            })?;
            let base = block_metric(base_s, &constants, &[])?;
            let base_coords: Vec<&str> = base.coords.iter().map(String::as_str).collect();
            let mut fibers = Vec::new();
            let mut warpings = Vec::new();
            for (_, s) in &fiber_sections {
                fibers.push(block_metric(s, &constants, &["warp"])?);
                let w = s.require("warp")?;
                warpings.push(
                    FieldExpr::parse_with(&w.value, &base_coords, &constants).map_err(|e| {
                        ManifestError::At {
                            line: w.line,
                            reason: format!("warp: {e}"),
                        }
                    })?,
                );
            }
            let line = base_s.line;
            (
                ProductStructure::new(base, fibers, warpings).map_err(geom_at(line))?,
                None,
            )
        };

        let names = structure.coord_names();
        let uniq: BTreeSet<&String> = names.iter().collect();
        if uniq.len() != names.len() {
            return err(1, "coordinate names must be unique across blocks");
        }

        let torsion = match find("torsion") {
            None => TorsionSpec::zero(),
            Some(s) => Self::torsion(s, &structure, &constants)?,
        };

        let mut fields: Vec<(String, VectorField)> = Vec::new();
        for s in sections.iter().filter(|s| s.name.starts_with("field.")) {
            let fname = s.name[6..].to_string();
            if fname.is_empty() {
                return err(s.line, "field needs a name");
            }
            let field = if let Some(sum) = s.get("sum") {
                s.check_keys(|k| k == "sum")?;
                let mut acc = VectorField::default();
                for part in list(&sum.value) {
                    let Some((_, f)) = fields.iter().find(|(n, _)| n == part) else {
                        return err(
                            sum.line,
                            format!("unknown field `{part}` (declare it first)"),
                        );
                    };
                    acc = acc.plus(f);
                }
                acc
            } else {
                let b = s.require("block")?;
                let block = Self::block_ref(b, &structure)?;
                VectorField::single(Self::components(
                    s,
                    block,
                    &structure,
                    &constants,
                    &["block"],
                )?)
            };
            fields.push((fname, field));
        }

        let mut exclude = Vec::new();
        if let Some(s) = find("exclude") {
            for e in &s.entries {
                let Some(coord) = names.iter().position(|n| *n == e.key) else {
                    return err(e.line, format!("unknown coordinate `{}`", e.key));
                };
                exclude.push(ExclusionZone {
                    coord,
                    interval: interval(e, &constants)?,
                });
            }
        }

        Ok(Self {
            name: name.to_string(),
            constants,
            structure,
            torsion,
            fields,
            exclude,
            spacetime,
        })
    }

    /// Reads a manifest; its name is the file stem.
    pub fn from_path(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ManifestError::File(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("manifest");
        Self::parse(name, &text)
    }

    fn spacetime_structure(
        st: &Section,
        base_s: Option<&Section>,
        fiber_sections: &[(usize, &Section)],
        constants: &BTreeMap<String, f64>,
    ) -> Result<(ProductStructure, Option<SpacetimeSpec>), ManifestError> {
        st.check_keys(|k| {
            matches!(k, "kind" | "time" | "interval" | "f" | "phi") || k.starts_with("p.")
        })?;
        let kind = st.require("kind")?;
        let time = st.get("time").map_or("t".to_string(), |e| e.value.clone());
        let iv = interval(st.require("interval")?, constants)?;
        let fibers = || -> Result<Vec<BlockMetric>, ManifestError> {
            if let Some(b) = base_s {
                return err(b.line, "[base] is generated by this spacetime kind");
            }
            if fiber_sections.is_empty() {
                return err(st.line, "this spacetime kind needs [fiber.1]");
            }
            fiber_sections
                .iter()
                .map(|(_, s)| block_metric(s, constants, &[]))
                .collect()
        };
        let spacetime_kind = match kind.value.as_str() {
            "grw" => SpacetimeKind::Grw {
                f: st.require("f")?.value.clone(),
                fibers: fibers()?,
            },
            "static" => {
                let Some(b) = base_s else {
                    return err(st.line, "a static spacetime needs [base]");
                };
                if let Some((_, s)) = fiber_sections.first() {
                    return err(
                        s.line,
                        "the static time fiber is generated; remove [fiber.N]",
                    );
                }
                SpacetimeKind::StandardStatic {
                    f: st.require("f")?.value.clone(),
                    base: block_metric(b, constants, &[])?,
                }
            }
            "kasner" => {
                let fibers = fibers()?;
                let mut exponents = Vec::new();
                for i in 1..=fibers.len() {
                    let e = st.require(&format!("p.{i}"))?;
                    exponents.push(number(e, &e.value, constants)?);
                }
                if let Some(e) = st.entries.iter().find(|e| {
                    index_key(&e.key, "p.")
                        .is_some_and(|v| v.len() != 1 || v[0] == 0 || v[0] > fibers.len())
                }) {
                    return err(e.line, format!("`{}` does not name a fiber", e.key));
                }
                SpacetimeKind::Kasner {
                    phi: st.require("phi")?.value.clone(),
                    exponents,
                    fibers,
                }
            }
            other => return err(kind.line, format!("unknown spacetime kind `{other}`")),
        };
        let spec = SpacetimeSpec {
            time,
            interval: iv,
            kind: spacetime_kind,
            constants: constants.clone(),
        };
        let ps = build_spacetime(&spec).map_err(geom_at(st.line))?;
        Ok((ps, Some(spec)))
    }

    fn block_ref(e: &Entry, ps: &ProductStructure) -> Result<Block, ManifestError> {
        let block = match e.value.as_str() {
            "base" => Block::Base,
            v => match v
                .strip_prefix("fiber.")
                .and_then(|r| r.parse::<usize>().ok())
            {
                Some(i) if i >= 1 => Block::Fiber(i - 1),
                _ => return err(e.line, format!("bad block `{v}`")),
            },
        };
        if let Block::Fiber(i) = block {
            if i >= ps.m() {
                return err(
                    e.line,
                    format!("fiber {} does not exist ({} fibers)", i + 1, ps.m()),
                );
            }
        }
        Ok(block)
    }

    fn components(
        s: &Section,
        block: Block,
        ps: &ProductStructure,
        constants: &BTreeMap<String, f64>,
        extra: &[&str],
    ) -> Result<VectorFieldDef, ManifestError> {
        s.check_keys(|k| k.starts_with("comp.") || extra.contains(&k))?;
        let bm = ps.block_metric(block).expect("block validated");
        let coords: Vec<&str> = bm.coords.iter().map(String::as_str).collect();
        let mut comps = vec![FieldExpr::constant(0.0, &coords); coords.len()];
        for e in s.entries.iter().filter(|e| e.key.starts_with("comp.")) {
            let k = match index_key(&e.key, "comp.").as_deref() {
                Some([k]) if *k >= 1 && *k <= coords.len() => *k - 1,
                _ => return err(e.line, format!("`{}` is not a component of {block}", e.key)),
            };
            comps[k] = FieldExpr::parse_with(&e.value, &coords, constants).map_err(|x| {
                ManifestError::At {
                    line: e.line,
                    reason: x.to_string(),
                }
            })?;
        }
        Ok(VectorFieldDef::new(block, comps))
    }

    fn torsion(
        s: &Section,
        ps: &ProductStructure,
        constants: &BTreeMap<String, f64>,
    ) -> Result<TorsionSpec, ManifestError> {
        let loc = s.require("location")?;
        if loc.value == "zero" {
            s.check_keys(|k| k == "location")?;
            return Ok(TorsionSpec::zero());
        }
        let block = Self::block_ref(loc, ps)?;
        let def = Self::components(s, block, ps, constants, &["location"])?;
        let location = match block {
            Block::Base => TorsionLocation::Base,
            Block::Fiber(i) => TorsionLocation::Fiber(i),
            Block::Full => unreachable!("block_ref never yields Full"),
        };
        TorsionSpec::new(location, VectorField::single(def)).map_err(geom_at(loc.line))
    }

    pub fn field(&self, name: &str) -> Option<&VectorField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn field_names(&self) -> Vec<&str> {
        self.fields.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Draws up to `count` admissible points: inside the inset box, outside
    /// the exclusion zones, with positive warpings and a nonsingular metric.
    pub fn sample_points(&self, rng: &mut SplitMix64, count: usize) -> Vec<Point> {
        let boxes = self.structure.boxes();
        let mut out = Vec::with_capacity(count);
        let mut failures = 0;
        while out.len() < count && failures < 1000 {
            let Some(c) = sample_point(rng, &boxes, &self.exclude) else {
                break;
            };
            match Point::new(c) {
                Ok(p) if self.structure.assemble(&p).is_ok() => out.push(p),
                _ => failures += 1,
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRW: &str = "
[constants]
a = 2
[spacetime]
kind = grw
interval = -1, 1
f = exp(t)
[fiber.1]
dim = 2
coords = x, y
g.1.1 = 1
g.2.2 = 1
box.x = -1, 1
box.y = -1, 1
[torsion]
location = base
comp.1 = 1
[field.zeta_base]
block = base
comp.1 = a
[field.zeta_rot]
block = fiber.1
comp.1 = -y
comp.2 = x
[field.zeta]
sum = zeta_base, zeta_rot
";

    fn line_of(e: ManifestError) -> usize {
        match e {
            ManifestError::At { line, .. } => line,
            ManifestError::File(_) => 0,
        }
    }

    #[test]
    fn parses_grw_example() {
        let m = Manifest::parse("grw", GRW).unwrap();
        assert_eq!(m.structure.m(), 1);
        assert_eq!(m.torsion.location, TorsionLocation::Base);
        assert_eq!(m.spacetime.as_ref().map(|s| s.kind.name()), Some("grw"));
        assert_eq!(m.field_names(), vec!["zeta_base", "zeta_rot", "zeta"]);
        let p = Point::new(vec![0.0, 0.5, 0.25]).unwrap();
        let z = m.field("zeta").unwrap().values(&m.structure, &p).unwrap();
        assert_eq!(z, vec![2.0, -0.25, 0.5]);
        assert_eq!(
            m.torsion.values(&m.structure, &p).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn missing_base_is_an_error() {
        let text = "[fiber.1]\ndim = 1\ncoords = x\ng.1.1 = 1\nbox.x = 0, 1\nwarp = 1\n";
        let e = Manifest::parse("m", text).unwrap_err();
        assert!(e.to_string().contains("missing [base]"));
    }

    #[test]
    fn torsion_fiber_must_exist() {
        let text = GRW.replace("location = base", "location = fiber.3");
        let e = Manifest::parse("m", &text).unwrap_err();
        assert_eq!(line_of(e.clone()), 16);
        assert!(e.to_string().contains("fiber 3 does not exist"));
    }

    #[test]
    fn reports_line_numbers() {
        let text = GRW.replace("comp.2 = x", "comp.2 = x + t");
        let e = Manifest::parse("m", &text).unwrap_err();
        assert_eq!(line_of(e.clone()), 24);
        assert!(e.to_string().contains("unknown identifier"), "{e}");
        let e = Manifest::parse(
            "m",
            "[base]\ndim = 1\ncoords = t\nbox.t = 1, 0\ng.1.1 = 1\n",
        )
        .unwrap_err();
        assert_eq!(line_of(e), 4);
        let e = Manifest::parse("m", "dim = 1\n").unwrap_err();
        assert_eq!(line_of(e), 1);
    }

    #[test]
    fn warp_must_use_base_coordinates() {
        let text = "[base]\ndim = 1\ncoords = t\ng.1.1 = 1\nbox.t = 0, 1\n\
                    [fiber.1]\ndim = 1\ncoords = x\ng.1.1 = 1\nbox.x = 0, 1\nwarp = x\n";
        let e = Manifest::parse("m", text).unwrap_err();
        assert_eq!(line_of(e), 11);
    }

    #[test]
    fn exclusions_and_sampling() {
        let text =
            "[base]\ndim = 1\ncoords = t\ng.1.1 = 1\nbox.t = -2, 2\n[exclude]\nt = -0.3, 0.3\n";
        let m = Manifest::parse("m", text).unwrap();
        let pts = m.sample_points(&mut SplitMix64::new(3), 64);
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().all(|p| p.coords()[0].abs() >= 0.3));
    }

    #[test]
    fn static_and_kasner_sections() {
        let st = "[constants]\nc = 1\n[spacetime]\nkind = static\ninterval = 0, 1\nf = c + x^2\n\
                  [base]\ndim = 2\ncoords = x, y\ng.1.1 = 1\ng.2.2 = 1\nbox.x = -1, 1\nbox.y = -1, 1\n";
        let m = Manifest::parse("st", st).unwrap();
        assert_eq!(m.structure.fibers[0].signature, vec![-1]);
        let ka = "[spacetime]\nkind = kasner\ninterval = 1, 2\nphi = t\np.1 = 1/3\n\
                  [fiber.1]\ndim = 1\ncoords = x\ng.1.1 = 1\nbox.x = 0, 1\n";
        let m = Manifest::parse("ka", ka).unwrap();
        let w = m.structure.warping::<f64>(0, &[1.728]).unwrap();
        assert!((w - 1.2).abs() < 1e-12);
        assert!(Manifest::parse("ka", &ka.replace("p.1", "p.2")).is_err());
    }

    #[test]
    fn builtin_sphere() {
        let text = "[base]\ndim = 2\ncoords = th, ph\nbuiltin = sphere2\n";
        let m = Manifest::parse("s2", text).unwrap();
        assert!(m.structure.base.periodic);
        assert_eq!(m.structure.total_dim(), 2);
    }
}
